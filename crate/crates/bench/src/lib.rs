//! Fixtures shared by the criterion benchmarks.

use qmsets::{Gf2Matrix, Universe};

pub fn universe(n: usize) -> Universe {
    Universe::new((0..n).map(|i| format!("u{i}"))).expect("n in 1..=64")
}

/// Companion-style matrix of `x^n + x + 1`-like shape: a shift with
/// feedback into the first two positions. Non-singular for every `n >= 2`.
pub fn shift_with_feedback(u: &Universe) -> Gf2Matrix {
    let n = u.len();
    let mut rows = vec![vec![0u8; n]; n];
    for i in 1..n {
        rows[i][i - 1] = 1;
    }
    rows[0][n - 1] = 1;
    rows[1][n - 1] ^= 1;
    Gf2Matrix::from_rows(u, &rows).expect("square rows")
}
