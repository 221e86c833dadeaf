//! Attributes as observables: eigenvalues, spectral blocks, projectors, and
//! projective measurement under the Born rule `Pr(r|S) = |f⁻¹(r) ∩ S| / |S|`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gf2::{SubsetVector, Universe};
use crate::partitions::{self, Partition};
use crate::rational::{decimal6, fraction, Rational};
use crate::sampling::SeededRng;

/// A rational-valued function on the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    universe: Universe,
    values: Vec<Rational>,
}

impl Attribute {
    /// `values[i]` is the value at the `i`-th label.
    pub fn new(universe: &Universe, values: Vec<Rational>) -> Result<Self> {
        if values.len() != universe.len() {
            return Err(Error::WrongCount { expected: universe.len(), got: values.len() });
        }
        Ok(Self { universe: universe.clone(), values })
    }

    /// Builds from `(label, value)` pairs, which must name every label once.
    pub fn from_pairs<S: AsRef<str>>(universe: &Universe, pairs: &[(S, Rational)]) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; universe.len()];
        for (label, v) in pairs {
            let i = universe.index_of(label.as_ref())?;
            if values[i].replace(*v).is_some() {
                return Err(Error::DuplicateLabel(label.as_ref().to_string()));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnknownLabel(format!("{} (no value given)", universe.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(universe, values)
    }

    /// The characteristic function `χ_S`.
    pub fn indicator(s: &SubsetVector) -> Self {
        let u = s.universe();
        let values = (0..u.len()).map(|i| Rational::from_integer(i64::from(s.contains(i)))).collect();
        Self { universe: u.clone(), values }
    }

    pub fn constant(universe: &Universe, value: Rational) -> Self {
        Self { universe: universe.clone(), values: vec![value; universe.len()] }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn value(&self, i: usize) -> Rational {
        self.values[i]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Distinct values in ascending order.
    pub fn spectrum(&self) -> Vec<Rational> {
        let mut s = self.values.clone();
        s.sort();
        s.dedup();
        s
    }

    /// `f⁻¹(r)`; empty when `r` is not a value of `f`.
    pub fn inverse_image(&self, r: &Rational) -> SubsetVector {
        let bits = self.values.iter().enumerate().filter(|(_, v)| *v == r).fold(0u64, |acc, (i, _)| acc | 1 << i);
        self.universe.from_bits(bits).expect("indices lie inside the universe")
    }

    /// An eigenvalue is degenerate when its block has two or more elements.
    pub fn is_degenerate(&self, r: &Rational) -> bool {
        self.inverse_image(r).len() >= 2
    }
}

pub fn inverse_image_partition(f: &Attribute) -> Partition {
    let blocks = f.spectrum().iter().map(|r| f.inverse_image(r)).collect();
    Partition::new(&f.universe, blocks).expect("inverse images partition the universe")
}

/// Returns `r` when `S` is nonempty and `f` is constant on `S` with value
/// `r` (the eigenvalue equation `f↾S = rS`).
pub fn eigen_check(f: &Attribute, s: &SubsetVector) -> Result<Option<Rational>> {
    f.universe.check_same(s.universe())?;
    let mut values = s.indices().map(|i| f.values[i]);
    let Some(first) = values.next() else {
        return Ok(None);
    };
    Ok(values.all(|v| v == first).then_some(first))
}

/// `(r, f⁻¹(r))` pairs in ascending order of `r`.
pub fn spectral_decomposition(f: &Attribute) -> Vec<(Rational, SubsetVector)> {
    f.spectrum().into_iter().map(|r| (r, f.inverse_image(&r))).collect()
}

/// The projection operator `f⁻¹(r) ∩ ()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    eigenvalue: Rational,
    block: SubsetVector,
}

impl Projector {
    pub fn eigenvalue(&self) -> Rational {
        self.eigenvalue
    }

    pub fn block(&self) -> &SubsetVector {
        &self.block
    }

    pub fn apply(&self, t: &SubsetVector) -> Result<SubsetVector> {
        self.block.intersect(t)
    }
}

pub fn projector(f: &Attribute, r: Rational) -> Result<Projector> {
    let block = f.inverse_image(&r);
    if block.is_empty() {
        let spectrum: Vec<String> = f.spectrum().iter().map(fraction).collect();
        return Err(Error::NotInSpectrum { value: fraction(&r), spectrum: spectrum.join(", ") });
    }
    Ok(Projector { eigenvalue: r, block })
}

/// `r ↦ Pr(r|S)`, zero-probability eigenvalues omitted.
pub fn born_distribution(f: &Attribute, s: &SubsetVector) -> Result<BTreeMap<Rational, Rational>> {
    Ok(outcomes(f, s)?.into_iter().map(|o| (o.eigenvalue, o.probability)).collect())
}

/// Every attainable outcome of measuring `f` in state `S`, ascending by
/// eigenvalue.
pub fn outcomes(f: &Attribute, s: &SubsetVector) -> Result<Vec<MeasurementOutcome>> {
    f.universe.check_same(s.universe())?;
    if s.is_empty() {
        return Err(Error::EmptyState);
    }
    let total = s.len() as i64;
    Ok(spectral_decomposition(f)
        .into_iter()
        .filter_map(|(r, block)| {
            let post = block.intersect(s).expect("same universe");
            (!post.is_empty()).then(|| MeasurementOutcome {
                eigenvalue: r,
                probability: Rational::new(post.len() as i64, total),
                post_state: post,
            })
        })
        .collect())
}

/// Probabilities of the singleton outcomes, indexed by universe label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDistribution {
    universe: Universe,
    probs: Vec<Rational>,
}

impl LabelDistribution {
    pub(crate) fn from_probs(universe: &Universe, probs: Vec<Rational>) -> Self {
        debug_assert_eq!(probs.len(), universe.len());
        Self { universe: universe.clone(), probs }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn prob(&self, i: usize) -> Rational {
        self.probs[i]
    }

    pub fn get(&self, label: &str) -> Result<Rational> {
        Ok(self.probs[self.universe.index_of(label)?])
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Rational)> + '_ {
        self.universe.labels().iter().map(String::as_str).zip(self.probs.iter().copied())
    }

    pub fn total(&self) -> Rational {
        crate::rational::sum(&self.probs)
    }

    /// `{"a": "1/4", ...}` in universe order.
    pub fn to_json(&self) -> Value {
        Value::Object(self.iter().map(|(l, p)| (l.to_string(), Value::String(fraction(&p)))).collect::<Map<_, _>>())
    }

    pub fn to_decimal_json(&self) -> Value {
        Value::Object(self.iter().map(|(l, p)| (l.to_string(), Value::String(decimal6(&p)))).collect::<Map<_, _>>())
    }
}

/// `Pr({u}|S)`: `1/|S|` on members of `S`, 0 elsewhere.
pub fn born_basis_distribution(s: &SubsetVector) -> Result<LabelDistribution> {
    if s.is_empty() {
        return Err(Error::EmptyState);
    }
    let u = s.universe();
    let p = Rational::new(1, s.len() as i64);
    let probs = (0..u.len()).map(|i| if s.contains(i) { p } else { Rational::from_integer(0) }).collect();
    Ok(LabelDistribution::from_probs(u, probs))
}

/// One projective measurement result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementOutcome {
    pub eigenvalue: Rational,
    pub probability: Rational,
    pub post_state: SubsetVector,
}

impl MeasurementOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "eigenvalue": fraction(&self.eigenvalue),
            "prob": fraction(&self.probability),
            "prob_decimal": decimal6(&self.probability),
            "post_state": self.post_state.to_string(),
        })
    }
}

/// Samples an eigenvalue by the Born rule and collapses `S` onto
/// `f⁻¹(r) ∩ S`.
pub fn measure(f: &Attribute, s: &SubsetVector, rng: &mut SeededRng) -> Result<MeasurementOutcome> {
    let mut all = outcomes(f, s)?;
    let weights: Vec<Rational> = all.iter().map(|o| o.probability).collect();
    let pick = rng.draw(&weights)?;
    Ok(all.swap_remove(pick))
}

/// Measures each attribute in turn, feeding every post-state forward.
pub fn measure_sequence(attrs: &[Attribute], s: &SubsetVector, rng: &mut SeededRng) -> Result<Vec<MeasurementOutcome>> {
    if s.is_empty() {
        return Err(Error::EmptyState);
    }
    let mut state = s.clone();
    let mut out = Vec::with_capacity(attrs.len());
    for f in attrs {
        let o = measure(f, &state, rng)?;
        state = o.post_state.clone();
        out.push(o);
    }
    Ok(out)
}

/// Whether the attributes' inverse-image partitions join to the discrete
/// partition.
pub fn is_csca(attrs: &[Attribute]) -> Result<bool> {
    let Some(first) = attrs.first() else {
        return Ok(false);
    };
    let mut acc = Partition::indiscrete(&first.universe);
    for f in attrs {
        acc = partitions::join(&acc, &inverse_image_partition(f))?;
    }
    Ok(acc.is_discrete())
}

/// Each label with its tuple of eigenvalues `(f₁(u), ..., f_k(u))`.
pub fn eigenket_labels(attrs: &[Attribute]) -> Result<Vec<(String, Vec<Rational>)>> {
    if !is_csca(attrs)? {
        return Err(Error::NotCsca);
    }
    let u = &attrs[0].universe;
    Ok((0..u.len()).map(|i| (u.label(i).to_string(), attrs.iter().map(|f| f.values[i]).collect())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn setup() -> (Universe, Attribute, Attribute, Attribute) {
        let u = Universe::new(["a", "b", "c"]).unwrap();
        let ordinal = Attribute::new(&u, vec![r(1), r(2), r(3)]).unwrap();
        let chi_bc = Attribute::indicator(&u.parse_subset("{b,c}").unwrap());
        let chi_ab = Attribute::indicator(&u.parse_subset("{a,b}").unwrap());
        (u, ordinal, chi_bc, chi_ab)
    }

    #[test]
    fn attribute_construction() {
        let (u, ordinal, ..) = setup();
        let f = Attribute::from_pairs(&u, &[("c", r(3)), ("a", r(1)), ("b", r(2))]).unwrap();
        assert_eq!(f, ordinal);
        assert!(Attribute::from_pairs(&u, &[("a", r(1))]).is_err());
        assert!(Attribute::from_pairs(&u, &[("a", r(1)), ("a", r(1)), ("b", r(1)), ("c", r(1))]).is_err());
        assert!(Attribute::new(&u, vec![r(1)]).is_err());
    }

    #[test]
    fn inverse_image_partitions() {
        let (u, ordinal, chi_bc, _) = setup();
        assert_eq!(inverse_image_partition(&ordinal), Partition::discrete(&u));
        assert_eq!(inverse_image_partition(&chi_bc).to_string(), "{{a},{b,c}}");
        assert_eq!(inverse_image_partition(&Attribute::constant(&u, r(5))), Partition::indiscrete(&u));
    }

    #[test]
    fn eigen_checks() {
        let (u, ordinal, chi_bc, _) = setup();
        let p = |s: &str| u.parse_subset(s).unwrap();
        assert_eq!(eigen_check(&chi_bc, &p("{b,c}")).unwrap(), Some(r(1)));
        assert_eq!(eigen_check(&chi_bc, &p("{a}")).unwrap(), Some(r(0)));
        assert_eq!(eigen_check(&ordinal, &p("{a,b}")).unwrap(), None);
        assert_eq!(eigen_check(&ordinal, &u.empty()).unwrap(), None);
    }

    #[test]
    fn spectral_decompositions() {
        let (u, ordinal, chi_bc, _) = setup();
        let shown = |f: &Attribute| -> Vec<String> {
            spectral_decomposition(f).iter().map(|(r, b)| format!("{r}:{b}")).collect()
        };
        assert_eq!(shown(&ordinal), ["1:{a}", "2:{b}", "3:{c}"]);
        assert_eq!(shown(&chi_bc), ["0:{a}", "1:{b,c}"]);
        assert_eq!(shown(&Attribute::constant(&u, r(5))), ["5:{a,b,c}"]);
        assert!(chi_bc.is_degenerate(&r(1)));
        assert!(!chi_bc.is_degenerate(&r(0)));
    }

    #[test]
    fn projectors() {
        let (u, _, chi_bc, _) = setup();
        let p1 = projector(&chi_bc, r(1)).unwrap();
        assert_eq!(p1.apply(&u.full()).unwrap().to_string(), "{b,c}");
        assert!(p1.apply(&u.empty()).unwrap().is_empty());
        for s in u.all_subsets() {
            let once = p1.apply(&s).unwrap();
            assert_eq!(p1.apply(&once).unwrap(), once);
        }
        assert_eq!(
            projector(&chi_bc, r(7)).unwrap_err(),
            Error::NotInSpectrum { value: "7".into(), spectrum: "0, 1".into() }
        );
    }

    #[test]
    fn born_distributions() {
        let (u, ordinal, chi_bc, chi_ab) = setup();
        let third = Rational::new(1, 3);
        let half = Rational::new(1, 2);
        assert_eq!(
            born_distribution(&ordinal, &u.full()).unwrap(),
            BTreeMap::from([(r(1), third), (r(2), third), (r(3), third)])
        );
        assert_eq!(
            born_distribution(&chi_bc, &u.full()).unwrap(),
            BTreeMap::from([(r(0), third), (r(1), Rational::new(2, 3))])
        );
        let bc = u.parse_subset("{b,c}").unwrap();
        assert_eq!(born_distribution(&chi_ab, &bc).unwrap(), BTreeMap::from([(r(0), half), (r(1), half)]));
        assert_eq!(born_distribution(&chi_ab, &u.empty()).unwrap_err(), Error::EmptyState);
        // zero-probability eigenvalue 0 is omitted
        assert_eq!(born_distribution(&chi_bc, &bc).unwrap(), BTreeMap::from([(r(1), r(1))]));
    }

    #[test]
    fn basis_born_rule() {
        let (u, ..) = setup();
        let d = born_basis_distribution(&u.parse_subset("{a,c}").unwrap()).unwrap();
        assert_eq!(d.probs(), [Rational::new(1, 2), r(0), Rational::new(1, 2)]);
        let d = born_basis_distribution(&u.parse_subset("{b}").unwrap()).unwrap();
        assert_eq!(d.get("b").unwrap(), r(1));
        let d = born_basis_distribution(&u.full()).unwrap();
        assert!(d.probs().iter().all(|p| *p == Rational::new(1, 3)));
        assert_eq!(born_basis_distribution(&u.empty()).unwrap_err(), Error::EmptyState);
        assert_eq!(d.to_json().to_string(), r#"{"a":"1/3","b":"1/3","c":"1/3"}"#);
    }

    #[test]
    fn measurement_collapses() {
        let (u, ordinal, chi_bc, _) = setup();
        let mut rng = SeededRng::new(0);
        for _ in 0..50 {
            let o = measure(&ordinal, &u.full(), &mut rng).unwrap();
            assert_eq!(o.probability, Rational::new(1, 3));
            assert_eq!(o.post_state, ordinal.inverse_image(&o.eigenvalue));
            let again = measure(&ordinal, &o.post_state, &mut rng).unwrap();
            assert_eq!((again.eigenvalue, again.probability), (o.eigenvalue, r(1)));
        }
        let bc = u.parse_subset("{b,c}").unwrap();
        let o = measure(&chi_bc, &bc, &mut rng).unwrap();
        assert_eq!(o, MeasurementOutcome { eigenvalue: r(1), probability: r(1), post_state: bc });
        assert_eq!(measure(&chi_bc, &u.empty(), &mut rng).unwrap_err(), Error::EmptyState);
    }

    #[test]
    fn measurement_is_reproducible() {
        let (u, ordinal, ..) = setup();
        let run = |seed| {
            let mut rng = SeededRng::new(seed);
            (0..20).map(|_| measure(&ordinal, &u.full(), &mut rng).unwrap().eigenvalue).collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn sequential_measurement() {
        let (u, ordinal, chi_bc, chi_ab) = setup();
        let mut rng = SeededRng::new(0);
        assert!(measure_sequence(&[], &u.full(), &mut rng).unwrap().is_empty());
        let one = measure_sequence(std::slice::from_ref(&ordinal), &u.full(), &mut rng).unwrap();
        assert_eq!(one[0].post_state.len(), 1);
        // every chain ends in the singleton labelled by its eigenvalue pair
        for seed in 0..40 {
            let mut rng = SeededRng::new(seed);
            let chain = measure_sequence(&[chi_bc.clone(), chi_ab.clone()], &u.full(), &mut rng).unwrap();
            let pair = (chain[0].eigenvalue, chain[1].eigenvalue);
            let expected = match pair {
                (a, b) if a == r(0) && b == r(1) => "{a}",
                (a, b) if a == r(1) && b == r(1) => "{b}",
                (a, b) if a == r(1) && b == r(0) => "{c}",
                other => panic!("unreachable pair {other:?}"),
            };
            assert_eq!(chain[1].post_state.to_string(), expected);
        }
    }

    #[test]
    fn csca() {
        let (u, ordinal, chi_bc, chi_ab) = setup();
        assert!(is_csca(&[chi_bc.clone(), chi_ab.clone()]).unwrap());
        assert!(!is_csca(std::slice::from_ref(&chi_bc)).unwrap());
        assert!(is_csca(std::slice::from_ref(&ordinal)).unwrap());
        assert!(!is_csca(&[]).unwrap());
        let labels = eigenket_labels(&[chi_bc.clone(), chi_ab.clone()]).unwrap();
        assert_eq!(
            labels,
            [
                ("a".to_string(), vec![r(0), r(1)]),
                ("b".to_string(), vec![r(1), r(1)]),
                ("c".to_string(), vec![r(1), r(0)])
            ]
        );
        assert_eq!(eigenket_labels(std::slice::from_ref(&chi_bc)).unwrap_err(), Error::NotCsca);
        let with_const = [chi_bc, chi_ab, Attribute::constant(&u, r(9))];
        assert!(is_csca(&with_const).unwrap());
        assert!(eigenket_labels(&with_const).unwrap().iter().all(|(_, t)| t.len() == 3 && t[2] == r(9)));
        let single = eigenket_labels(&[ordinal]).unwrap();
        assert_eq!(single[2], ("c".to_string(), vec![r(3)]));
    }
}
