//! Set partitions, refinement, join, and the distinctions a partition makes.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{SubsetVector, Universe};
use crate::rational::Rational;

pub const MAX_ENUMERATION: usize = 10;

/// Disjoint nonempty blocks covering the universe, ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    universe: Universe,
    blocks: Vec<SubsetVector>,
}

impl Partition {
    pub fn new(universe: &Universe, blocks: Vec<SubsetVector>) -> Result<Self> {
        let mut covered = 0u64;
        for b in &blocks {
            universe.check_same(b.universe())?;
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            if covered & b.bits() != 0 {
                return Err(Error::InvalidPartition(format!("block {b} overlaps an earlier block")));
            }
            covered |= b.bits();
        }
        if covered != universe.mask() {
            let missing = universe.from_bits(universe.mask() & !covered)?;
            return Err(Error::InvalidPartition(format!("{missing} not covered")));
        }
        Ok(Self::from_blocks_unchecked(universe, blocks))
    }

    fn from_blocks_unchecked(universe: &Universe, mut blocks: Vec<SubsetVector>) -> Self {
        blocks.sort_by_key(|b| b.first());
        Self { universe: universe.clone(), blocks }
    }

    /// The partition `𝟏` into singletons.
    pub fn discrete(universe: &Universe) -> Self {
        Self::from_blocks_unchecked(universe, (0..universe.len()).map(|i| universe.singleton(i)).collect())
    }

    /// The partition `𝟎 = {U}`.
    pub fn indiscrete(universe: &Universe) -> Self {
        Self::from_blocks_unchecked(universe, vec![universe.full()])
    }

    /// Builds the partition from block indices: element `i` goes to block
    /// `labels[i]`. Any labelling works; blocks are renumbered canonically.
    pub fn from_block_labels(universe: &Universe, labels: &[usize]) -> Result<Self> {
        if labels.len() != universe.len() {
            return Err(Error::WrongCount { expected: universe.len(), got: labels.len() });
        }
        let mut masks: Vec<(usize, u64)> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match masks.iter_mut().find(|(k, _)| *k == l) {
                Some((_, m)) => *m |= 1 << i,
                None => masks.push((l, 1 << i)),
            }
        }
        let blocks = masks.into_iter().map(|(_, m)| universe.from_bits(m)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_blocks_unchecked(universe, blocks))
    }

    /// Parses `{{a},{b,c}}`.
    pub fn parse(universe: &Universe, text: &str) -> Result<Self> {
        let bad = || Error::BadSubsetLiteral(text.to_string());
        let inner = text.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?.trim();
        let mut blocks = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let close = rest.find('}').ok_or_else(bad)?;
            blocks.push(universe.parse_subset(&rest[..=close])?);
            rest = rest[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad());
                }
            } else if !rest.is_empty() {
                return Err(bad());
            }
        }
        Self::new(universe, blocks)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn blocks(&self) -> &[SubsetVector] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block containing element `i`.
    pub fn block_of(&self, i: usize) -> &SubsetVector {
        self.blocks.iter().find(|b| b.contains(i)).expect("blocks cover the universe")
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.universe.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

/// A binary relation on `U`, stored as one `n`-bit row per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    universe: Universe,
    rows: Vec<u64>,
}

/// The distinctions of a partition: ordered pairs in distinct blocks.
pub type DitSet = Relation;

impl Relation {
    pub fn empty(universe: &Universe) -> Self {
        Self { universe: universe.clone(), rows: vec![0; universe.len()] }
    }

    pub fn diagonal(universe: &Universe) -> Self {
        Self { universe: universe.clone(), rows: (0..universe.len()).map(|j| 1u64 << j).collect() }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn contains(&self, j: usize, k: usize) -> bool {
        self.rows[j] >> k & 1 == 1
    }

    /// Number of ordered pairs.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_subset_of(&self, other: &Relation) -> Result<bool> {
        self.universe.check_same(&other.universe)?;
        Ok(self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0))
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.universe.check_same(&other.universe)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(Relation { universe: self.universe.clone(), rows })
    }

    /// Complement in `U × U`.
    pub fn complement(&self) -> Relation {
        let mask = self.universe.mask();
        Relation { universe: self.universe.clone(), rows: self.rows.iter().map(|r| !r & mask).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.universe.len();
        (0..n).all(|j| (0..n).all(|k| self.contains(j, k) == self.contains(k, j)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.universe.len();
        (0..n).flat_map(move |j| (0..n).filter(move |&k| self.contains(j, k)).map(move |k| (j, k)))
    }
}

/// Whether `pi` refines `sigma`: every block of `pi` lies inside a block of
/// `sigma`.
pub fn refines(pi: &Partition, sigma: &Partition) -> Result<bool> {
    pi.universe.check_same(&sigma.universe)?;
    Ok(pi.blocks.iter().all(|b| sigma.blocks.iter().any(|c| b.bits() & !c.bits() == 0)))
}

/// `π ∨ σ`: the nonempty pairwise intersections of blocks.
pub fn join(pi: &Partition, sigma: &Partition) -> Result<Partition> {
    pi.universe.check_same(&sigma.universe)?;
    let blocks = pi
        .blocks
        .iter()
        .flat_map(|b| sigma.blocks.iter().map(move |c| b.bits() & c.bits()))
        .filter(|&m| m != 0)
        .map(|m| pi.universe.from_bits(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_blocks_unchecked(&pi.universe, blocks))
}

pub fn dit_set(pi: &Partition) -> DitSet {
    indit_set(pi).complement()
}

/// The equivalence relation of the partition, diagonal included.
pub fn indit_set(pi: &Partition) -> Relation {
    let rows = (0..pi.universe.len()).map(|j| pi.block_of(j).bits()).collect();
    Relation { universe: pi.universe.clone(), rows }
}

/// `h(π) = |dit(π)| / |U × U|`.
pub fn logical_entropy(pi: &Partition) -> Rational {
    let n = pi.universe.len() as i64;
    Rational::new(dit_set(pi).len() as i64, n * n)
}

/// All partitions of the universe, in lexicographic order of their
/// restricted growth strings (so `{U}` first, `𝟏` last).
pub fn enumerate_partitions(universe: &Universe) -> Result<Vec<Partition>> {
    let n = universe.len();
    if n > MAX_ENUMERATION {
        return Err(Error::TooLargeFor { what: "partition enumeration", limit: MAX_ENUMERATION, n });
    }
    let mut out = Vec::new();
    let mut growth = vec![0usize; n];
    loop {
        out.push(Partition::from_block_labels(universe, &growth)?);
        // advance to the next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let max_prefix = growth[..i].iter().copied().max().unwrap_or(0);
            if growth[i] <= max_prefix {
                growth[i] += 1;
                growth[i + 1..].iter_mut().for_each(|g| *g = 0);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Universe {
        Universe::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn construction_checks() {
        let u = abc();
        let p = |s: &str| u.parse_subset(s).unwrap();
        assert_eq!(Partition::new(&u, vec![p("{a}"), p("{}"), p("{b,c}")]).unwrap_err(), Error::EmptyBlock);
        assert!(matches!(Partition::new(&u, vec![p("{a,b}"), p("{b,c}")]), Err(Error::InvalidPartition(_))));
        assert!(matches!(Partition::new(&u, vec![p("{a,b}")]), Err(Error::InvalidPartition(_))));
        let pi = Partition::new(&u, vec![p("{b,c}"), p("{a}")]).unwrap();
        assert_eq!(pi.to_string(), "{{a},{b,c}}");
        assert_eq!(Partition::parse(&u, " {{b,c}, {a}} ").unwrap(), pi);
        assert!(Partition::parse(&u, "{{a},{b,c},}").is_err());
        assert!(Partition::parse(&u, "{a},{b,c}").is_err());
    }

    #[test]
    fn refinement_examples() {
        let u = abc();
        let one = Partition::discrete(&u);
        let zero = Partition::indiscrete(&u);
        let x = Partition::parse(&u, "{{a},{b,c}}").unwrap();
        let y = Partition::parse(&u, "{{a,b},{c}}").unwrap();
        for q in [&one, &zero, &x, &y] {
            assert!(refines(&one, q).unwrap());
            assert!(refines(q, &zero).unwrap());
        }
        assert!(!refines(&x, &y).unwrap());
        assert!(!refines(&y, &x).unwrap());
    }

    #[test]
    fn join_examples() {
        let u = abc();
        let x = Partition::parse(&u, "{{a},{b,c}}").unwrap();
        let y = Partition::parse(&u, "{{a,b},{c}}").unwrap();
        assert_eq!(join(&x, &y).unwrap(), Partition::discrete(&u));
        assert_eq!(join(&x, &Partition::indiscrete(&u)).unwrap(), x);
        assert_eq!(join(&x, &x).unwrap(), x);
    }

    #[test]
    fn dits_and_entropy() {
        let u = abc();
        let one = Partition::discrete(&u);
        let zero = Partition::indiscrete(&u);
        assert_eq!(dit_set(&one), Relation::diagonal(&u).complement());
        assert!(dit_set(&zero).is_empty());
        let x = Partition::parse(&u, "{{a},{b,c}}").unwrap();
        // pairs (a,b),(a,c),(b,a),(c,a)
        assert_eq!(dit_set(&x).pairs().collect::<Vec<_>>(), [(0, 1), (0, 2), (1, 0), (2, 0)]);
        assert_eq!(logical_entropy(&zero), Rational::from_integer(0));
        assert_eq!(logical_entropy(&one), Rational::new(2, 3));
        assert_eq!(logical_entropy(&x), Rational::new(4, 9));
        assert!(Relation::diagonal(&u).is_subset_of(&indit_set(&x)).unwrap());
    }

    #[test]
    fn enumeration_counts_and_order() {
        let sizes = [1, 2, 5, 15, 52, 203];
        for (n, &bell) in (1..=6).zip(&sizes) {
            let u = Universe::new((0..n).map(|i| format!("u{i}"))).unwrap();
            assert_eq!(enumerate_partitions(&u).unwrap().len(), bell);
        }
        let u = abc();
        let all: Vec<String> = enumerate_partitions(&u).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(all, ["{{a,b,c}}", "{{a,b},{c}}", "{{a,c},{b}}", "{{a},{b,c}}", "{{a},{b},{c}}"]);
        let big = Universe::new((0..11).map(|i| format!("u{i}"))).unwrap();
        assert!(matches!(enumerate_partitions(&big), Err(Error::TooLargeFor { .. })));
    }

    #[test]
    fn universe_mismatch() {
        let u = abc();
        let v = abc();
        assert_eq!(join(&Partition::discrete(&u), &Partition::discrete(&v)).unwrap_err(), Error::UniverseMismatch);
        assert_eq!(refines(&Partition::discrete(&u), &Partition::discrete(&v)).unwrap_err(), Error::UniverseMismatch);
    }
}
