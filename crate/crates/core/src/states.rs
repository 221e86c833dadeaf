//! Bases of the power set, basis-free kets, and the overlap bracket.
//!
//! A ket is stored by its expression in the standard (singleton) basis of its
//! universe. Any other basis is a second universe of the same size, whose
//! singletons name the basis vectors; expressing a ket in that basis means
//! solving for the coordinate subset.

use std::cmp::Reverse;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, SubsetVector, Universe};

/// An ordered GF(2) basis of `℘(U)`.
#[derive(Debug, Clone)]
pub struct Basis {
    name: String,
    universe: Universe,
    coordinates: Universe,
    matrix: Gf2Matrix,
}

impl Basis {
    /// The singleton basis `{u_1},...,{u_n}`; its coordinate universe is `U`
    /// itself.
    pub fn standard(name: impl Into<String>, universe: &Universe) -> Self {
        Self {
            name: name.into(),
            universe: universe.clone(),
            coordinates: universe.clone(),
            matrix: Gf2Matrix::identity(universe),
        }
    }

    /// Builds a basis, naming its elements after the universe labels with the
    /// basis name's suffix appended: basis `U′` over `{a,b,c}` has elements
    /// `a′, b′, c′`. A one-character name `V` gives `a_V, b_V, c_V`.
    pub fn new(name: impl Into<String>, vectors: &[SubsetVector]) -> Result<Self> {
        let name = name.into();
        let universe = vectors.first().ok_or(Error::WrongCount { expected: 1, got: 0 })?.universe();
        let suffix: String = name.chars().skip(1).collect();
        let suffix = if suffix.is_empty() { format!("_{name}") } else { suffix };
        let labels: Vec<String> = universe.labels().iter().map(|l| format!("{l}{suffix}")).collect();
        Self::with_labels(name, vectors, labels)
    }

    pub fn with_labels<S: Into<String>>(
        name: impl Into<String>,
        vectors: &[SubsetVector],
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let name = name.into();
        let universe = vectors.first().ok_or(Error::WrongCount { expected: 1, got: 0 })?.universe().clone();
        if vectors.len() != universe.len() {
            return Err(Error::WrongCount { expected: universe.len(), got: vectors.len() });
        }
        for v in vectors {
            universe.check_same(v.universe())?;
        }
        if let Some(dependent) = first_dependent(vectors) {
            return Err(Error::DependentBasis { basis: name, subset: dependent.to_string() });
        }
        let coordinates = Universe::new(labels)?;
        if coordinates.len() != universe.len() {
            return Err(Error::WrongCount { expected: universe.len(), got: coordinates.len() });
        }
        let matrix = Gf2Matrix::from_columns(&coordinates, &universe, vectors)?;
        debug_assert!(matrix.is_nonsingular());
        Ok(Self { name, universe, coordinates, matrix })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The universe whose subsets this basis spans.
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// The universe of basis-element labels (`U′ = {a′,b′,c′}`).
    pub fn coordinates(&self) -> &Universe {
        &self.coordinates
    }

    /// Basis vector `j`, expressed in the standard basis.
    pub fn vector(&self, j: usize) -> SubsetVector {
        self.matrix.column(j)
    }

    pub fn vectors(&self) -> Vec<SubsetVector> {
        (0..self.matrix.dim()).map(|j| self.vector(j)).collect()
    }

    /// Change-of-basis matrix from coordinates to standard-basis subsets.
    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }
}

/// First vector lying in the span of those before it.
fn first_dependent(vectors: &[SubsetVector]) -> Option<&SubsetVector> {
    let mut basis = [0u64; 64];
    for v in vectors {
        let mut bits = v.bits();
        loop {
            if bits == 0 {
                return Some(v);
            }
            let top = 63 - bits.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = bits;
                break;
            }
            bits ^= basis[top];
        }
    }
    None
}

/// A basis-free vector of `℘(U)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ket {
    coords: SubsetVector,
}

impl Ket {
    /// The ket whose standard-basis expression is `s`.
    pub fn new(s: SubsetVector) -> Self {
        Self { coords: s }
    }

    /// The ket whose coordinates in `basis` are `coords`.
    pub fn from_coordinates(basis: &Basis, coords: &SubsetVector) -> Result<Self> {
        Ok(Self { coords: basis.matrix.apply(coords)? })
    }

    pub fn universe(&self) -> &Universe {
        self.coords.universe()
    }

    /// Standard-basis expression.
    pub fn coords(&self) -> &SubsetVector {
        &self.coords
    }
}

/// Coordinates of `ket` in `basis`, as a subset of the basis's element
/// universe.
pub fn express(ket: &Ket, basis: &Basis) -> Result<SubsetVector> {
    basis.matrix.solve(&ket.coords)
}

/// Every ket of `℘(U)` expressed in each of the given bases.
#[derive(Debug, Clone)]
pub struct KetTable {
    headers: Vec<String>,
    rows: Vec<Vec<SubsetVector>>,
}

/// Builds the ket table. Rows run by descending cardinality of the standard
/// expression, ties broken by comparing member positions in universe order.
pub fn ket_table(bases: &[Basis]) -> Result<KetTable> {
    let first = bases.first().ok_or(Error::WrongCount { expected: 1, got: 0 })?;
    let universe = first.universe().clone();
    for b in bases {
        universe.check_same(b.universe())?;
    }
    if universe.len() > 20 {
        return Err(Error::TooLargeFor { what: "ket table", limit: 20, n: universe.len() });
    }
    let mut kets: Vec<SubsetVector> = universe.all_subsets().collect();
    kets.sort_by_cached_key(|s| (Reverse(s.len()), s.indices().collect::<Vec<_>>()));
    let rows = kets
        .into_iter()
        .map(|s| {
            let ket = Ket::new(s);
            bases.iter().map(|b| express(&ket, b)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KetTable { headers: bases.iter().map(|b| b.name().to_string()).collect(), rows })
}

impl KetTable {
    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn rows(&self) -> &[Vec<SubsetVector>] {
        &self.rows
    }

    /// One record per ket; set literals in braces, the empty set as `{}`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(ToString::to_string)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 labels")
    }

    /// Array of row objects keyed by basis name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.headers.iter().zip(row).map(|(h, s)| (h.clone(), Value::String(s.to_string()))).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

impl fmt::Display for KetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| {
                cells.iter().map(|r| r[c].chars().count()).chain([self.headers[c].chars().count()]).max().unwrap_or(0)
            })
            .collect();
        let line = |f: &mut fmt::Formatter<'_>, items: &[String]| -> fmt::Result {
            let padded: Vec<String> =
                items.iter().zip(&widths).map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
            writeln!(f, "| {} |", padded.join(" | "))
        };
        line(f, &self.headers)?;
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        writeln!(f, "|-{}-|", rule.join("-|-"))?;
        for row in &cells {
            line(f, row)?;
        }
        Ok(())
    }
}

/// `⟨T|_U S⟩ = |T ∩ S|` for standard-basis expressions.
pub fn bracket(t: &SubsetVector, s: &SubsetVector) -> Result<usize> {
    Ok(t.intersect(s)?.len())
}

/// `‖S‖_U² = |S|`, exact.
pub fn norm_squared(s: &SubsetVector) -> usize {
    s.len()
}

/// `√|S|`, for display only.
pub fn norm(s: &SubsetVector) -> f64 {
    (s.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Universe, Basis, Basis, Basis) {
        let u = Universe::new(["a", "b", "c"]).unwrap();
        let p = |s: &str| u.parse_subset(s).unwrap();
        let std = Basis::standard("U", &u);
        let prime = Basis::new("U′", &[p("{a,b}"), p("{b,c}"), p("{a,b,c}")]).unwrap();
        let dprime = Basis::new("U″", &[p("{a}"), p("{a,b}"), p("{a,c}")]).unwrap();
        (u, std, prime, dprime)
    }

    #[test]
    fn basis_validation() {
        let (u, ..) = setup();
        let p = |s: &str| u.parse_subset(s).unwrap();
        assert!(Basis::new("S", &[p("{a}"), p("{b}"), p("{c}")]).is_ok());
        assert_eq!(
            Basis::new("W", &[p("{a}"), p("{b}"), p("{a,b}")]).unwrap_err(),
            Error::DependentBasis { basis: "W".into(), subset: "{a,b}".into() }
        );
        assert_eq!(Basis::new("W", &[p("{a}"), p("{b}")]).unwrap_err(), Error::WrongCount { expected: 3, got: 2 });
        assert!(matches!(Basis::new("Z", &[p("{a}"), p("{}"), p("{c}")]), Err(Error::DependentBasis { .. })));
    }

    #[test]
    fn derived_element_labels() {
        let (_, _, prime, _) = setup();
        assert_eq!(prime.coordinates().labels(), ["a′", "b′", "c′"]);
        let u = prime.universe().clone();
        let v = Basis::new("V", &u.all_subsets().filter(|s| s.len() == 1).collect::<Vec<_>>()).unwrap();
        assert_eq!(v.coordinates().labels(), ["a_V", "b_V", "c_V"]);
    }

    #[test]
    fn express_examples() {
        let (u, std, prime, dprime) = setup();
        let ket = |s: &str| Ket::new(u.parse_subset(s).unwrap());
        assert_eq!(express(&ket("{a,c}"), &prime).unwrap().to_string(), "{a′,b′}");
        assert_eq!(express(&ket("{a,c}"), &dprime).unwrap().to_string(), "{c″}");
        assert_eq!(express(&ket("{a,b,c}"), &prime).unwrap().to_string(), "{c′}");
        assert!(express(&ket("{}"), &dprime).unwrap().is_empty());
        assert_eq!(express(&ket("{b}"), &std).unwrap(), u.parse_subset("{b}").unwrap());
    }

    #[test]
    fn from_coordinates_inverts_express() {
        let (u, _, prime, _) = setup();
        for s in u.all_subsets() {
            let k = Ket::new(s);
            let c = express(&k, &prime).unwrap();
            assert_eq!(Ket::from_coordinates(&prime, &c).unwrap(), k);
        }
    }

    #[test]
    fn single_basis_table_is_identity_listing() {
        let (u, std, ..) = setup();
        let table = ket_table(&[std.clone(), std]).unwrap();
        assert_eq!(table.rows().len(), 8);
        for row in table.rows() {
            assert_eq!(row[0], row[1]);
            assert!(row[0].universe().same_as(&u));
        }
        let order: Vec<String> = table.rows().iter().map(|r| r[0].to_string()).collect();
        assert_eq!(order, ["{a,b,c}", "{a,b}", "{a,c}", "{b,c}", "{a}", "{b}", "{c}", "{}"]);
    }

    #[test]
    fn table_serializations() {
        let (_, std, prime, _) = setup();
        let table = ket_table(&[std, prime]).unwrap();
        let csv = table.to_csv();
        assert!(csv.starts_with("U,U′\n\"{a,b,c}\",{c′}\n"));
        let json = table.to_json();
        assert_eq!(json[7]["U′"], "{}");
        assert_eq!(json[0]["U"], "{a,b,c}");
        assert!(table.to_string().contains("| {a,c}   | {a′,b′}"));
    }

    #[test]
    fn brackets_and_norms() {
        let (u, _, prime, _) = setup();
        let p = |s: &str| u.parse_subset(s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(bracket(&u.singleton(i), &u.singleton(j)).unwrap(), usize::from(i == j));
            }
        }
        assert_eq!(bracket(&p("{a,b}"), &p("{b,c}")).unwrap(), 1);
        assert_eq!(bracket(&p("{a,c}"), &u.full()).unwrap(), 2);
        // ‖{a′}‖ has to be taken on the standard expression {a,b}
        let a_prime = Ket::from_coordinates(&prime, &prime.coordinates().parse_subset("{a′}").unwrap()).unwrap();
        assert_eq!(norm_squared(a_prime.coords()), 2);
        assert!((norm(a_prime.coords()) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(norm_squared(&u.empty()), 0);
        assert_eq!(norm_squared(&u.full()), 3);
    }

    #[test]
    fn bracket_is_not_additive_over_gf2() {
        let (u, ..) = setup();
        let a = u.parse_subset("{a}").unwrap();
        let lhs = bracket(&a.add(&a).unwrap(), &a).unwrap();
        let rhs = bracket(&a, &a).unwrap() + bracket(&a, &a).unwrap();
        assert_eq!((lhs, rhs), (0, 2));
    }
}
