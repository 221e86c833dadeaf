#![allow(dead_code)]

use qmsets::{Attribute, Rational, Universe};

pub const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn universe(n: usize) -> Universe {
    Universe::new(LABELS[..n].iter().copied()).unwrap()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Every attribute `U -> {0, ..., k-1}`.
pub fn all_attributes(u: &Universe, k: i64) -> Vec<Attribute> {
    let n = u.len() as u32;
    (0..k.pow(n))
        .map(|mut code| {
            let values = (0..n)
                .map(|_| {
                    let v = code % k;
                    code /= k;
                    Rational::from_integer(v)
                })
                .collect();
            Attribute::new(u, values).unwrap()
        })
        .collect()
}

pub fn ket_table_cells(table: &qmsets::KetTable) -> Vec<Vec<String>> {
    table.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}
