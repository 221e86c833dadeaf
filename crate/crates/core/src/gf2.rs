//! Subsets of a finite universe as vectors over GF(2), and linear maps
//! between such spaces.
//!
//! A [`Universe`] fixes the labels and their bit positions: label `i` is bit
//! `i` of every [`SubsetVector`] built from it. Vector addition is symmetric
//! difference, so every vector is its own additive inverse.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 64;

/// Largest dimension for which [`Gf2Matrix::orbits`] will walk all `2^n - 1`
/// nonzero vectors.
pub const MAX_ORBIT_DIMENSION: usize = 24;

#[derive(Debug)]
struct UniverseInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered, finite set of distinct labels.
///
/// Cloning is cheap and keeps identity: two handles are the same universe
/// only if they come from the same construction. Equal label lists built
/// separately are different universes, and their subsets cannot be mixed.
#[derive(Clone)]
pub struct Universe(Arc<UniverseInner>);

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if labels.len() > MAX_DIMENSION {
            return Err(Error::UniverseTooLarge(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '{' | '}')) {
                return Err(Error::BadLabel(label.clone()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self(Arc::new(UniverseInner { labels, index })))
    }

    /// Dimension `n`.
    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Mask with the low `n` bits set.
    pub fn mask(&self) -> u64 {
        match self.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    pub fn same_as(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn check_same(&self, other: &Universe) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn empty(&self) -> SubsetVector {
        SubsetVector { universe: self.clone(), bits: 0 }
    }

    pub fn full(&self) -> SubsetVector {
        SubsetVector { universe: self.clone(), bits: self.mask() }
    }

    pub fn singleton(&self, i: usize) -> SubsetVector {
        assert!(i < self.len(), "index {i} out of range for universe of size {}", self.len());
        SubsetVector { universe: self.clone(), bits: 1 << i }
    }

    pub fn from_bits(&self, bits: u64) -> Result<SubsetVector> {
        if bits & !self.mask() != 0 {
            return Err(Error::BitsOutOfRange { mask: bits, n: self.len() });
        }
        Ok(SubsetVector { universe: self.clone(), bits })
    }

    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetVector> {
        let mut bits = 0u64;
        for l in labels {
            bits |= 1 << self.index_of(l.as_ref())?;
        }
        Ok(SubsetVector { universe: self.clone(), bits })
    }

    /// Parses a set literal such as `{a,c}`; `{}` and `∅` are the empty set.
    pub fn parse_subset(&self, text: &str) -> Result<SubsetVector> {
        let s = text.trim();
        if s == "∅" {
            return Ok(self.empty());
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::BadSubsetLiteral(text.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(self.empty());
        }
        let labels: Vec<&str> = inner.split(',').map(str::trim).collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(Error::BadSubsetLiteral(text.to_string()));
        }
        self.subset(&labels)
    }

    /// All `2^n` subsets in ascending bit-mask order. Intended for small `n`.
    pub fn all_subsets(&self) -> impl Iterator<Item = SubsetVector> + '_ {
        assert!(self.len() < 64, "cannot enumerate the power set of a 64-element universe");
        (0..=self.mask()).map(move |bits| SubsetVector { universe: self.clone(), bits })
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Universe {}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe{:?}", self.0.labels)
    }
}

/// A subset of a universe, doubling as a GF(2) vector.
#[derive(Clone)]
pub struct SubsetVector {
    universe: Universe,
    bits: u64,
}

impl SubsetVector {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Cardinality `|S|`.
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.bits >> i & 1 == 1
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.universe.index_of(label).is_ok_and(|i| self.contains(i))
    }

    /// Indices of members in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe.len()).filter(|&i| self.contains(i))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.universe.label(i)).collect()
    }

    /// Symmetric difference, the GF(2) vector sum.
    pub fn add(&self, other: &SubsetVector) -> Result<SubsetVector> {
        self.universe.check_same(&other.universe)?;
        Ok(self.with_bits(self.bits ^ other.bits))
    }

    pub fn intersect(&self, other: &SubsetVector) -> Result<SubsetVector> {
        self.universe.check_same(&other.universe)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn union(&self, other: &SubsetVector) -> Result<SubsetVector> {
        self.universe.check_same(&other.universe)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn complement(&self) -> SubsetVector {
        self.with_bits(!self.bits & self.universe.mask())
    }

    pub fn is_subset_of(&self, other: &SubsetVector) -> Result<bool> {
        self.universe.check_same(&other.universe)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// Index of the least member, if any.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    fn with_bits(&self, bits: u64) -> SubsetVector {
        SubsetVector { universe: self.universe.clone(), bits }
    }
}

impl PartialEq for SubsetVector {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.universe.same_as(&other.universe)
    }
}

impl Eq for SubsetVector {}

impl Hash for SubsetVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl fmt::Display for SubsetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

impl fmt::Debug for SubsetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A linear map `Z_2^n -> Z_2^n` between two universes of equal size.
///
/// Column `j` is the image of the singleton of the `j`-th input label.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    input: Universe,
    output: Universe,
    columns: Vec<u64>,
}

impl Gf2Matrix {
    pub fn from_columns(input: &Universe, output: &Universe, columns: &[SubsetVector]) -> Result<Self> {
        if input.len() != output.len() {
            return Err(Error::WrongCount { expected: input.len(), got: output.len() });
        }
        if columns.len() != input.len() {
            return Err(Error::WrongCount { expected: input.len(), got: columns.len() });
        }
        for c in columns {
            output.check_same(c.universe())?;
        }
        Ok(Self {
            input: input.clone(),
            output: output.clone(),
            columns: columns.iter().map(SubsetVector::bits).collect(),
        })
    }

    /// Square matrix on one universe from 0/1 rows: `rows[i][j]` is the
    /// coefficient of output `i` in the image of input `j`.
    pub fn from_rows(universe: &Universe, rows: &[Vec<u8>]) -> Result<Self> {
        let n = universe.len();
        if rows.len() != n {
            return Err(Error::WrongCount { expected: n, got: rows.len() });
        }
        let mut columns = vec![0u64; n];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::WrongCount { expected: n, got: row.len() });
            }
            for (j, &entry) in row.iter().enumerate() {
                match entry {
                    0 => {}
                    1 => columns[j] |= 1 << i,
                    _ => return Err(Error::BadRational(entry.to_string())),
                }
            }
        }
        Ok(Self { input: universe.clone(), output: universe.clone(), columns })
    }

    pub fn identity(universe: &Universe) -> Self {
        Self {
            input: universe.clone(),
            output: universe.clone(),
            columns: (0..universe.len()).map(|j| 1u64 << j).collect(),
        }
    }

    pub fn input(&self) -> &Universe {
        &self.input
    }

    pub fn output(&self) -> &Universe {
        &self.output
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> SubsetVector {
        SubsetVector { universe: self.output.clone(), bits: self.columns[j] }
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        (self.columns[j] >> i & 1) as u8
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.entry(i, j)).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        // xor basis keyed by leading bit
        let mut basis = [0u64; 64];
        let mut rank = 0;
        for &col in &self.columns {
            let mut v = col;
            while v != 0 {
                let top = 63 - v.leading_zeros() as usize;
                if basis[top] == 0 {
                    basis[top] = v;
                    rank += 1;
                    break;
                }
                v ^= basis[top];
            }
        }
        rank
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rank() == self.dim()
    }

    /// XOR of the columns selected by `s`.
    pub fn apply(&self, s: &SubsetVector) -> Result<SubsetVector> {
        self.input.check_same(s.universe())?;
        Ok(SubsetVector { universe: self.output.clone(), bits: self.apply_bits(s.bits()) })
    }

    pub(crate) fn apply_bits(&self, bits: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = bits;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            out ^= self.columns[j];
            rest &= rest - 1;
        }
        out
    }

    /// The unique `x` with `apply(x) = b`, by Gauss-Jordan elimination.
    pub fn solve(&self, b: &SubsetVector) -> Result<SubsetVector> {
        self.output.check_same(b.universe())?;
        let n = self.dim();
        // row i: coefficients over the unknowns, plus the right-hand side bit
        let mut rows: Vec<(u64, bool)> = (0..n)
            .map(|i| {
                let coeffs = (0..n).fold(0u64, |acc, j| acc | (u64::from(self.entry(i, j)) << j));
                (coeffs, b.contains(i))
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| rows[r].0 >> col & 1 == 1).ok_or(Error::SingularMatrix)?;
            rows.swap(col, pivot);
            let (prow, prhs) = rows[col];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && row.0 >> col & 1 == 1 {
                    row.0 ^= prow;
                    row.1 ^= prhs;
                }
            }
        }
        let bits = rows.iter().enumerate().fold(0u64, |acc, (i, &(_, rhs))| acc | (u64::from(rhs) << i));
        Ok(SubsetVector { universe: self.input.clone(), bits })
    }

    /// Cycle decomposition of the nonzero vectors under repeated application.
    ///
    /// Orbits come in ascending order of their least member, and each orbit
    /// starts from that member.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        self.input.check_same(&self.output)?;
        let n = self.dim();
        if n > MAX_ORBIT_DIMENSION {
            return Err(Error::TooLargeFor { what: "orbit enumeration", limit: MAX_ORBIT_DIMENSION, n });
        }
        if !self.is_nonsingular() {
            return Err(Error::SingularMatrix);
        }
        let total = 1u64 << n;
        let mut seen = vec![false; total as usize];
        let mut orbits = Vec::new();
        for start in 1..total {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            loop {
                seen[v as usize] = true;
                cycle.push(SubsetVector { universe: self.input.clone(), bits: v });
                v = self.apply_bits(v);
                if v == start {
                    break;
                }
            }
            orbits.push(Orbit(cycle));
        }
        Ok(orbits)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf2Matrix").field("rows", &self.rows()).finish()
    }
}

/// One cycle `v -> Mv -> M^2 v -> ... -> v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit(Vec<SubsetVector>);

impl Orbit {
    pub fn members(&self) -> &[SubsetVector] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &SubsetVector) -> bool {
        self.0.contains(v)
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}→")?;
        }
        write!(f, "{}", self.0[0])
    }
}
