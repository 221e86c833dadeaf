//! Exact-rational density matrices of blocks, partitions, and states.
//!
//! Rows and columns follow universe label order. The partition matrix
//! `ρ(π)` has entry `1/n` exactly at the indistinctions of `π`, and
//! sandwiching it between block projectors implements the partition join.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf2::{SubsetVector, Universe};
use crate::observables::Attribute;
use crate::partitions::{indit_set, Partition};
use crate::rational::{fraction, Rational};

/// Square matrix of rationals indexed by a universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    universe: Universe,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(universe: &Universe) -> Self {
        let n = universe.len();
        Self { universe: universe.clone(), entries: vec![Rational::zero(); n * n] }
    }

    pub fn from_fn(universe: &Universe, f: impl Fn(usize, usize) -> Rational) -> Self {
        let n = universe.len();
        let entries = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self { universe: universe.clone(), entries }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn dim(&self) -> usize {
        self.universe.len()
    }

    pub fn get(&self, j: usize, k: usize) -> Rational {
        self.entries[j * self.dim() + k]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.dim()).map(<[Rational]>::to_vec).collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim()).map(|i| self.get(i, i)).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.universe, |j, k| self.get(k, j))
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self { universe: self.universe.clone(), entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn checked_mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        self.universe.check_same(&rhs.universe)?;
        let n = self.dim();
        Ok(Self::from_fn(&self.universe, |j, k| {
            (0..n).fold(Rational::zero(), |acc, m| acc + self.get(j, m) * rhs.get(m, k))
        }))
    }

    pub fn checked_add(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        self.universe.check_same(&rhs.universe)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(Self { universe: self.universe.clone(), entries })
    }

    /// `{"order": [...labels], "entries": [[...fractions]]}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(fraction).collect()).collect();
        json!({ "order": self.universe.labels(), "entries": entries })
    }

    /// Header row of labels, then one labelled row per element.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once(String::new()).chain(self.universe.labels().iter().cloned());
        w.write_record(header).expect("write to memory");
        for (j, row) in self.rows().iter().enumerate() {
            let rec = std::iter::once(self.universe.label(j).to_string()).chain(row.iter().map(fraction));
            w.write_record(rec).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 labels")
    }
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.checked_add(rhs).expect("matrices over different universes")
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.checked_mul(rhs).expect("matrices over different universes")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.universe.labels();
        let cells: Vec<Vec<String>> = self.rows().iter().map(|r| r.iter().map(fraction).collect()).collect();
        let label_w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let w = cells
            .iter()
            .flatten()
            .map(|c| c.chars().count())
            .chain(labels.iter().map(|l| l.chars().count()))
            .max()
            .unwrap_or(1);
        let pad = |s: &str, w: usize| format!("{}{s}", " ".repeat(w - s.chars().count()));
        let head: Vec<String> = labels.iter().map(|l| pad(l, w)).collect();
        writeln!(f, "{} [{}]", " ".repeat(label_w), head.join(" "))?;
        for (l, row) in labels.iter().zip(&cells) {
            let row: Vec<String> = row.iter().map(|c| pad(c, w)).collect();
            writeln!(f, "{} [{}]", pad(l, label_w), row.join(" "))?;
        }
        Ok(())
    }
}

/// A symmetric, nonnegative, trace-one rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityMatrix(RationalMatrix);

impl DensityMatrix {
    pub fn try_from_matrix(m: RationalMatrix) -> Result<Self> {
        if !m.is_symmetric() || !m.trace().is_one() || m.entries.iter().any(Signed::is_negative) {
            return Err(Error::BadDistribution);
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.0
    }

    pub fn universe(&self) -> &Universe {
        self.0.universe()
    }

    pub fn get(&self, j: usize, k: usize) -> Rational {
        self.0.get(j, k)
    }

    /// Square of entry `(j, k)`: the probability of drawing the ordered pair
    /// `(u_j, u_k)` with replacement, when the pair coheres.
    pub fn two_draw_probability(&self, j: usize, k: usize) -> Rational {
        let e = self.get(j, k);
        e * e
    }

    pub fn to_json(&self) -> Value {
        self.0.to_json()
    }

    pub fn to_csv(&self) -> String {
        self.0.to_csv()
    }
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The diagonal 0/1 matrix `P_B` of the projection `B ∩ ()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorMatrix {
    diagonal: SubsetVector,
}

impl ProjectorMatrix {
    pub fn new(block: &SubsetVector) -> Self {
        Self { diagonal: block.clone() }
    }

    pub fn block(&self) -> &SubsetVector {
        &self.diagonal
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.diagonal.universe(), |j, k| {
            if j == k && self.diagonal.contains(j) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// `P ρ P`.
    pub fn sandwich(&self, rho: &RationalMatrix) -> Result<RationalMatrix> {
        let p = self.to_matrix();
        p.checked_mul(rho)?.checked_mul(&p)
    }
}

/// `ρ(B) = |B⟩₁⟨B|₁`: entry `(j,k) = χ_B(u_j)·χ_B(u_k)/|B|`.
pub fn rho_block(b: &SubsetVector) -> Result<DensityMatrix> {
    if b.is_empty() {
        return Err(Error::EmptyBlock);
    }
    let w = Rational::new(1, b.len() as i64);
    Ok(DensityMatrix(RationalMatrix::from_fn(b.universe(), |j, k| {
        if b.contains(j) && b.contains(k) {
            w
        } else {
            Rational::zero()
        }
    })))
}

/// `ρ(π) = Σ_B (|B|/n)·ρ(B)`, checked against `(1/n)·I(indit(π))`.
pub fn rho_partition(pi: &Partition) -> DensityMatrix {
    let weighted = rho_partition_weighted(pi);
    debug_assert_eq!(weighted, rho_partition_incidence(pi));
    weighted
}

/// Mixture of the block pure states weighted by `p_B = |B|/n`.
pub fn rho_partition_weighted(pi: &Partition) -> DensityMatrix {
    let u = pi.universe();
    let n = u.len() as i64;
    let sum = pi.blocks().iter().fold(RationalMatrix::zeros(u), |acc, b| {
        let p_b = Rational::new(b.len() as i64, n);
        let rho_b = rho_block(b).expect("partition blocks are nonempty");
        &acc + &rho_b.0.scale(p_b)
    });
    DensityMatrix(sum)
}

/// Incidence matrix of the indistinction relation, normalized to trace 1.
pub fn rho_partition_incidence(pi: &Partition) -> DensityMatrix {
    let u = pi.universe();
    let indit = indit_set(pi);
    let w = Rational::new(1, u.len() as i64);
    DensityMatrix(RationalMatrix::from_fn(u, |j, k| if indit.contains(j, k) { w } else { Rational::zero() }))
}

/// `tr[P_B ρ(S)] = |B ∩ S| / |S|`.
pub fn prob_via_trace(b: &SubsetVector, s: &SubsetVector) -> Result<Rational> {
    b.universe().check_same(s.universe())?;
    if s.is_empty() {
        return Err(Error::EmptyState);
    }
    let rho = rho_block(s)?;
    Ok(ProjectorMatrix::new(b).to_matrix().checked_mul(&rho.0)?.trace())
}

/// The post-measurement mixed state `ρ̂(S) = Σ_r P_{f⁻¹(r)} ρ(S) P_{f⁻¹(r)}`.
pub fn measure_density(f: &Attribute, s: &SubsetVector) -> Result<DensityMatrix> {
    f.universe().check_same(s.universe())?;
    if s.is_empty() {
        return Err(Error::EmptyState);
    }
    let rho = rho_block(s)?;
    let mut acc = RationalMatrix::zeros(s.universe());
    for r in f.spectrum() {
        acc = acc.checked_add(&ProjectorMatrix::new(&f.inverse_image(&r)).sandwich(&rho.0)?)?;
    }
    DensityMatrix::try_from_matrix(acc)
}

/// `Σ_{C∈σ} P_C ρ(π) P_C`, which equals `ρ(π ∨ σ)`.
pub fn join_via_density(pi: &Partition, sigma: &Partition) -> Result<DensityMatrix> {
    pi.universe().check_same(sigma.universe())?;
    let rho = rho_partition(pi);
    let mut acc = RationalMatrix::zeros(pi.universe());
    for c in sigma.blocks() {
        acc = acc.checked_add(&ProjectorMatrix::new(c).sandwich(&rho.0)?)?;
    }
    DensityMatrix::try_from_matrix(acc)
}
