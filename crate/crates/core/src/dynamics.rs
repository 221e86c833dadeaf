//! Non-singular GF(2) dynamics and the two-slit experiment.
//!
//! Positions are the standard-basis labels. A particle prepared in a
//! superposition at the slits travels to the wall under the dynamics; the
//! wall measures position. Measuring at the slits as well splits the run
//! into separately evolving branches, so the wall sees a mixture; without
//! that measurement the branches add mod 2 and can cancel.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, SubsetVector, Universe};
use crate::observables::{born_basis_distribution, LabelDistribution};
use crate::rational::{decimal6, fraction, Rational};
use crate::sampling::SeededRng;
use crate::states::{bracket, express, Basis, Ket};

/// One-period evolution by a non-singular matrix on a single universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dynamics {
    matrix: Gf2Matrix,
}

impl Dynamics {
    pub fn new(matrix: Gf2Matrix) -> Result<Self> {
        matrix.input().check_same(matrix.output())?;
        if !matrix.is_nonsingular() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.matrix
    }

    pub fn universe(&self) -> &Universe {
        self.matrix.input()
    }

    /// `A^t(S)`.
    pub fn evolve(&self, s: &SubsetVector, periods: u32) -> Result<SubsetVector> {
        let mut state = s.clone();
        for _ in 0..periods {
            state = self.matrix.apply(&state)?;
        }
        Ok(state)
    }

    /// The image of the standard basis, `A(U) = U′` with `A({u}) = {u′}`.
    pub fn image_basis(&self) -> Basis {
        let u = self.universe();
        let labels: Vec<String> = u.labels().iter().map(|l| format!("{l}′")).collect();
        let columns: Vec<SubsetVector> = (0..u.len()).map(|j| self.matrix.column(j)).collect();
        Basis::with_labels("A(U)", &columns, labels).expect("columns of a non-singular matrix form a basis")
    }

    /// Checks `⟨S|_U T⟩ = ⟨A(S)|_{A(U)} A(T)⟩`, expressing the evolved
    /// states in the image basis before taking the overlap.
    pub fn bracket_preserved(&self, s: &SubsetVector, t: &SubsetVector) -> Result<bool> {
        let before = bracket(s, t)?;
        let image = self.image_basis();
        let evolved_s = express(&Ket::new(self.matrix.apply(s)?), &image)?;
        let evolved_t = express(&Ket::new(self.matrix.apply(t)?), &image)?;
        Ok(before == bracket(&evolved_s, &evolved_t)?)
    }
}

/// Where the particle is observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitMode {
    /// Position measured at the slits and again at the wall.
    Measured,
    /// Position measured only at the wall.
    Unmeasured,
}

impl SlitMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SlitMode::Measured => "measured",
            SlitMode::Unmeasured => "unmeasured",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TwoSlitConfig {
    pub dynamics: Dynamics,
    pub slit_state: SubsetVector,
    pub mode: SlitMode,
    /// Time periods between diaphragm and wall.
    pub periods: u32,
}

impl TwoSlitConfig {
    pub fn new(dynamics: Dynamics, slit_state: SubsetVector, mode: SlitMode) -> Result<Self> {
        dynamics.universe().check_same(slit_state.universe())?;
        if slit_state.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { dynamics, slit_state, mode, periods: 1 })
    }

    pub fn with_periods(mut self, periods: u32) -> Self {
        self.periods = periods;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSlitResult {
    pub mode: SlitMode,
    pub slit_state: SubsetVector,
    pub periods: u32,
    pub exact: LabelDistribution,
    /// Hit counts per position; `None` when no trials were run.
    pub sampled: Option<Vec<u64>>,
    pub trials: u64,
    pub seed: u64,
}

/// Exact wall distribution by total probability over slit outcomes.
pub fn two_slit_exact(config: &TwoSlitConfig) -> Result<LabelDistribution> {
    if config.slit_state.is_empty() {
        return Err(Error::EmptyState);
    }
    let d = &config.dynamics;
    let u = d.universe();
    match config.mode {
        SlitMode::Unmeasured => born_basis_distribution(&d.evolve(&config.slit_state, config.periods)?),
        SlitMode::Measured => {
            let at_slits = born_basis_distribution(&config.slit_state)?;
            let mut mix = vec![Rational::zero(); u.len()];
            for i in config.slit_state.indices() {
                let wall = born_basis_distribution(&d.evolve(&u.singleton(i), config.periods)?)?;
                for (acc, p) in mix.iter_mut().zip(wall.probs()) {
                    *acc += at_slits.prob(i) * p;
                }
            }
            Ok(LabelDistribution::from_probs(u, mix))
        }
    }
}

/// Runs the experiment: the exact distribution plus `trials` seeded
/// Monte-Carlo replays of the same procedure.
pub fn two_slit(config: &TwoSlitConfig, rng: &mut SeededRng, trials: u64) -> Result<TwoSlitResult> {
    let exact = two_slit_exact(config)?;
    let d = &config.dynamics;
    let u = d.universe();
    let sampled = (trials > 0)
        .then(|| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; u.len()];
            match config.mode {
                SlitMode::Unmeasured => {
                    let wall = born_basis_distribution(&d.evolve(&config.slit_state, config.periods)?)?;
                    for _ in 0..trials {
                        counts[rng.draw(wall.probs())?] += 1;
                    }
                }
                SlitMode::Measured => {
                    let at_slits = born_basis_distribution(&config.slit_state)?;
                    let branches = (0..u.len())
                        .map(|i| born_basis_distribution(&d.evolve(&u.singleton(i), config.periods)?))
                        .collect::<Result<Vec<_>>>()?;
                    for _ in 0..trials {
                        let slit = rng.draw(at_slits.probs())?;
                        counts[rng.draw(branches[slit].probs())?] += 1;
                    }
                }
            }
            Ok(counts)
        })
        .transpose()?;
    Ok(TwoSlitResult {
        mode: config.mode,
        slit_state: config.slit_state.clone(),
        periods: config.periods,
        exact,
        sampled,
        trials,
        seed: rng.seed(),
    })
}

impl TwoSlitResult {
    pub fn frequency(&self, i: usize) -> Option<f64> {
        let counts = self.sampled.as_ref()?;
        Some(counts[i] as f64 / self.trials as f64)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("mode".into(), json!(self.mode.as_str()));
        obj.insert("slit_state".into(), json!(self.slit_state.to_string()));
        obj.insert("periods".into(), json!(self.periods));
        obj.insert("exact".into(), self.exact.to_json());
        obj.insert("exact_decimal".into(), self.exact.to_decimal_json());
        if let Some(counts) = &self.sampled {
            let labels = self.exact.universe().labels();
            let sampled: Map<String, Value> = labels.iter().cloned().zip(counts.iter().map(|c| json!(c))).collect();
            obj.insert("sampled".into(), Value::Object(sampled));
        }
        obj.insert("trials".into(), json!(self.trials));
        obj.insert("seed".into(), json!(self.seed));
        Value::Object(obj)
    }

    /// `position,exact,exact_decimal,sampled,frequency`; the last two columns
    /// are blank when no trials were run.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("position,exact,exact_decimal,sampled,frequency\n");
        for (i, (label, p)) in self.exact.iter().enumerate() {
            let (count, freq) = match &self.sampled {
                Some(c) => (c[i].to_string(), format!("{:.6}", self.frequency(i).unwrap_or(0.0))),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!("{label},{},{},{count},{freq}\n", fraction(&p), decimal6(&p)));
        }
        out
    }
}

const BAR_WIDTH: i64 = 40;

impl fmt::Display for TwoSlitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} at slits, prepared {}, {} period(s) to the wall",
            self.mode.as_str(),
            self.slit_state,
            self.periods
        )?;
        let label_w = self.exact.universe().labels().iter().map(|l| l.chars().count()).max().unwrap_or(1);
        for (i, (label, p)) in self.exact.iter().enumerate() {
            let filled = (p * BAR_WIDTH).round().to_integer().to_usize().unwrap_or(0);
            let bar = format!("{}{}", "#".repeat(filled), " ".repeat(BAR_WIDTH as usize - filled));
            let pad = " ".repeat(label_w - label.chars().count());
            write!(f, "{label}{pad} |{bar}| {}", fraction(&p))?;
            if let Some(freq) = self.frequency(i) {
                write!(f, "  (sampled {freq:.4})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Universe, Dynamics) {
        let u = Universe::new(["a", "b", "c"]).unwrap();
        let m = Gf2Matrix::from_rows(&u, &[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]).unwrap();
        (u.clone(), Dynamics::new(m).unwrap())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rejects_singular() {
        let (u, _) = setup();
        let m = Gf2Matrix::from_rows(&u, &[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(Dynamics::new(m).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn evolution() {
        let (u, d) = setup();
        let p = |s: &str| u.parse_subset(s).unwrap();
        assert_eq!(d.evolve(&p("{a,c}"), 1).unwrap(), p("{a,c}"));
        assert_eq!(d.evolve(&p("{a}"), 1).unwrap(), p("{a,b}"));
        assert_eq!(d.evolve(&p("{a}"), 4).unwrap(), p("{a}"));
        assert_eq!(d.evolve(&p("{b}"), 0).unwrap(), p("{b}"));
        assert!(d.evolve(&u.empty(), 7).unwrap().is_empty());
    }

    #[test]
    fn brackets_are_preserved() {
        let (u, d) = setup();
        let p = |s: &str| u.parse_subset(s).unwrap();
        assert!(d.bracket_preserved(&p("{a,b}"), &p("{b,c}")).unwrap());
        let id = Dynamics::new(Gf2Matrix::identity(&u)).unwrap();
        for s in u.all_subsets() {
            for t in u.all_subsets() {
                assert!(d.bracket_preserved(&s, &t).unwrap());
                assert!(id.bracket_preserved(&s, &t).unwrap());
            }
        }
    }

    #[test]
    fn raw_overlaps_are_not_preserved_in_the_standard_basis() {
        // |{a}∩{c}| = 0 but A{a} ∩ A{c} = {a,b} ∩ {b,c} = {b}
        let (u, d) = setup();
        let a = d.evolve(&u.parse_subset("{a}").unwrap(), 1).unwrap();
        let c = d.evolve(&u.parse_subset("{c}").unwrap(), 1).unwrap();
        assert_eq!(bracket(&a, &c).unwrap(), 1);
    }

    #[test]
    fn two_slit_distributions() {
        let (u, d) = setup();
        let slits = u.parse_subset("{a,c}").unwrap();
        let measured = TwoSlitConfig::new(d.clone(), slits.clone(), SlitMode::Measured).unwrap();
        assert_eq!(two_slit_exact(&measured).unwrap().probs(), [q(1, 4), q(1, 2), q(1, 4)]);
        let unmeasured = TwoSlitConfig::new(d.clone(), slits, SlitMode::Unmeasured).unwrap();
        assert_eq!(two_slit_exact(&unmeasured).unwrap().probs(), [q(1, 2), q(0, 1), q(1, 2)]);
        for mode in [SlitMode::Measured, SlitMode::Unmeasured] {
            let single = TwoSlitConfig::new(d.clone(), u.parse_subset("{a}").unwrap(), mode).unwrap();
            assert_eq!(two_slit_exact(&single).unwrap().probs(), [q(1, 2), q(1, 2), q(0, 1)]);
        }
        assert_eq!(TwoSlitConfig::new(d, u.empty(), SlitMode::Measured).unwrap_err(), Error::EmptyState);
    }

    #[test]
    fn zero_trials_gives_exact_only() {
        let (u, d) = setup();
        let cfg = TwoSlitConfig::new(d, u.parse_subset("{a,c}").unwrap(), SlitMode::Unmeasured).unwrap();
        let res = two_slit(&cfg, &mut SeededRng::new(0), 0).unwrap();
        assert!(res.sampled.is_none());
        assert!(res.to_json().get("sampled").is_none());
        assert_eq!(
            res.to_csv(),
            "position,exact,exact_decimal,sampled,frequency\na,1/2,0.500000,,\nb,0,0.000000,,\nc,1/2,0.500000,,\n"
        );
    }

    #[test]
    fn sampled_run_is_seeded() {
        let (u, d) = setup();
        let cfg = TwoSlitConfig::new(d, u.parse_subset("{a,c}").unwrap(), SlitMode::Measured).unwrap();
        let a = two_slit(&cfg, &mut SeededRng::new(11), 1000).unwrap();
        let b = two_slit(&cfg, &mut SeededRng::new(11), 1000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sampled.as_ref().unwrap().iter().sum::<u64>(), 1000);
        assert_eq!(a.seed, 11);
        let text = a.to_string();
        assert!(text.starts_with("measured at slits, prepared {a,c}, 1 period(s) to the wall\n"));
        assert!(text.contains(&format!("b |{}{}| 1/2", "#".repeat(20), " ".repeat(20))));
    }
}
