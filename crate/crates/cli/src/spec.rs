//! Experiment documents: a sectioned text format, or the same shape as JSON.
//!
//! ```text
//! # comment
//! [universe]
//! name = U
//! labels = a b c
//!
//! [basis U′]
//! vectors = {a,b} {b,c} {a,b,c}
//! labels = a′ b′ c′
//!
//! [attribute f]
//! a = 1
//! b = 2
//! c = 3
//!
//! [partition pi]
//! blocks = {a,b} {c}
//!
//! [dynamics]
//! row = 1 1 0
//! row = 1 1 1
//! row = 0 1 1
//!
//! [params]
//! state = {a,b,c}
//! slits = {a,c}
//! measure = f
//! seed = 0
//! trials = 100000
//! periods = 1
//! ```

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use qmsets::rational::parse_rational;
use qmsets::{Attribute, Basis, Gf2Matrix, Partition, Universe};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub universe: UniverseSpec,
    #[serde(default)]
    pub bases: Vec<BasisSpec>,
    #[serde(default)]
    pub attributes: BTreeMap<String, BTreeMap<String, Scalar>>,
    #[serde(default)]
    pub partitions: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub dynamics: Option<Vec<Vec<u8>>>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct UniverseSpec {
    pub name: Option<String>,
    pub labels: Vec<String>,
}

#[derive(Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub name: String,
    pub vectors: Vec<String>,
    pub labels: Option<Vec<String>>,
}

/// An attribute value: `"1/3"`, `"0.5"`, or a bare JSON integer.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub state: Option<String>,
    pub slits: Option<String>,
    pub measure: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub periods: Option<u32>,
}

impl ExperimentSpec {
    /// JSON when the document starts with `{`, the text format otherwise.
    pub fn parse(source: &str) -> Result<Self> {
        if source.trim_start().starts_with('{') {
            serde_json::from_str(source).context("invalid JSON experiment document")
        } else {
            parse_text(source)
        }
    }
}

/// Splits `{a,b} {c}` or `{a, b},{c}` into brace-delimited literals.
fn split_sets(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('∅') {
            out.push("{}".to_string());
            rest = r.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
            continue;
        }
        if !rest.starts_with('{') {
            bail!("expected a set literal at `{rest}`");
        }
        let close = rest.find('}').ok_or_else(|| anyhow!("unterminated set literal `{rest}`"))?;
        out.push(rest[..=close].to_string());
        rest = rest[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    }
    Ok(out)
}

fn parse_text(source: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::default();
    let mut section: Option<(String, Option<String>)> = None;
    let mut saw_universe = false;
    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("line {}", lineno + 1);
        if let Some(header) = line.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or_else(|| anyhow!("{}: unclosed section header", at()))?;
            let mut parts = header.split_whitespace();
            let kind = parts.next().ok_or_else(|| anyhow!("{}: empty section header", at()))?.to_string();
            let name = parts.next().map(str::to_string);
            if parts.next().is_some() {
                bail!("{}: section names cannot contain spaces", at());
            }
            match (kind.as_str(), &name) {
                ("universe" | "dynamics" | "params", None) => {}
                ("basis" | "attribute" | "partition", Some(_)) => {}
                ("universe" | "dynamics" | "params", Some(_)) => bail!("{}: [{kind}] takes no name", at()),
                ("basis" | "attribute" | "partition", None) => bail!("{}: [{kind}] needs a name", at()),
                _ => bail!("{}: unknown section [{kind}]", at()),
            }
            match (kind.as_str(), name.as_deref()) {
                ("universe", _) => saw_universe = true,
                ("basis", Some(n)) => {
                    spec.bases.push(BasisSpec { name: n.to_string(), vectors: Vec::new(), labels: None })
                }
                ("attribute", Some(n)) => {
                    if spec.attributes.insert(n.to_string(), BTreeMap::new()).is_some() {
                        bail!("{}: attribute `{n}` defined twice", at());
                    }
                }
                ("partition", Some(n)) => {
                    if spec.partitions.insert(n.to_string(), Vec::new()).is_some() {
                        bail!("{}: partition `{n}` defined twice", at());
                    }
                }
                ("dynamics", _) => spec.dynamics = Some(Vec::new()),
                _ => {}
            }
            section = Some((kind, name));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("{}: expected `key = value`", at()))?;
        let (key, value) = (key.trim(), value.trim());
        let (kind, name) = section.as_ref().ok_or_else(|| anyhow!("{}: entry outside any section", at()))?;
        let words = || value.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        match (kind.as_str(), key) {
            ("universe", "name") => spec.universe.name = Some(value.to_string()),
            ("universe", "labels") => spec.universe.labels = words(),
            ("basis", "vectors") => spec.bases.last_mut().expect("basis section open").vectors = split_sets(value)?,
            ("basis", "labels") => spec.bases.last_mut().expect("basis section open").labels = Some(words()),
            ("attribute", label) => {
                let attr =
                    spec.attributes.get_mut(name.as_deref().unwrap_or_default()).expect("attribute section open");
                if attr.insert(label.to_string(), Scalar::Text(value.to_string())).is_some() {
                    bail!("{}: value for `{label}` given twice", at());
                }
            }
            ("partition", "blocks") => {
                *spec.partitions.get_mut(name.as_deref().unwrap_or_default()).expect("partition section open") =
                    split_sets(value)?
            }
            ("dynamics", "row") => {
                let row = value
                    .split_whitespace()
                    .map(|t| t.parse::<u8>().with_context(|| format!("{}: matrix entry `{t}`", at())))
                    .collect::<Result<Vec<_>>>()?;
                spec.dynamics.get_or_insert_with(Vec::new).push(row);
            }
            ("params", "state") => spec.params.state = Some(value.to_string()),
            ("params", "slits") => spec.params.slits = Some(value.to_string()),
            ("params", "measure") => spec.params.measure = Some(words()),
            ("params", "seed") => spec.params.seed = Some(value.parse().with_context(|| format!("{}: seed", at()))?),
            ("params", "trials") => {
                spec.params.trials = Some(value.parse().with_context(|| format!("{}: trials", at()))?)
            }
            ("params", "periods") => {
                spec.params.periods = Some(value.parse().with_context(|| format!("{}: periods", at()))?)
            }
            _ => bail!("{}: unknown key `{key}` in [{kind}]", at()),
        }
    }
    if !saw_universe {
        bail!("missing [universe] section");
    }
    Ok(spec)
}

/// A spec with every name resolved to library values.
#[derive(Debug)]
pub struct Experiment {
    pub universe: Universe,
    pub standard: Basis,
    pub bases: Vec<Basis>,
    pub attributes: BTreeMap<String, Attribute>,
    pub partitions: BTreeMap<String, Partition>,
    pub dynamics: Option<Gf2Matrix>,
    pub params: Params,
}

impl Experiment {
    pub fn resolve(spec: ExperimentSpec) -> Result<Self> {
        let universe = Universe::new(spec.universe.labels.iter().cloned()).context("in [universe]")?;
        let standard = Basis::standard(spec.universe.name.clone().unwrap_or_else(|| "U".into()), &universe);
        let bases = spec
            .bases
            .iter()
            .map(|b| {
                let vectors = b
                    .vectors
                    .iter()
                    .map(|v| universe.parse_subset(v))
                    .collect::<qmsets::Result<Vec<_>>>()
                    .with_context(|| format!("in basis `{}`", b.name))?;
                let basis = match &b.labels {
                    Some(labels) => Basis::with_labels(b.name.clone(), &vectors, labels.iter().cloned()),
                    None => Basis::new(b.name.clone(), &vectors),
                };
                basis.with_context(|| format!("in basis `{}`", b.name))
            })
            .collect::<Result<Vec<_>>>()?;
        let attributes = spec
            .attributes
            .iter()
            .map(|(name, values)| {
                let pairs = values
                    .iter()
                    .map(|(label, v)| {
                        let value = match v {
                            Scalar::Int(i) => qmsets::Rational::from_integer(*i),
                            Scalar::Text(t) => parse_rational(t)?,
                        };
                        Ok((label.clone(), value))
                    })
                    .collect::<qmsets::Result<Vec<_>>>()
                    .with_context(|| format!("in attribute `{name}`"))?;
                let attr =
                    Attribute::from_pairs(&universe, &pairs).with_context(|| format!("in attribute `{name}`"))?;
                Ok((name.clone(), attr))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let partitions = spec
            .partitions
            .iter()
            .map(|(name, blocks)| {
                let blocks = blocks
                    .iter()
                    .map(|b| universe.parse_subset(b))
                    .collect::<qmsets::Result<Vec<_>>>()
                    .and_then(|bs| Partition::new(&universe, bs))
                    .with_context(|| format!("in partition `{name}`"))?;
                Ok((name.clone(), blocks))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let dynamics = spec
            .dynamics
            .as_ref()
            .map(|rows| Gf2Matrix::from_rows(&universe, rows).context("in [dynamics]"))
            .transpose()?;
        Ok(Self { universe, standard, bases, attributes, partitions, dynamics, params: spec.params })
    }

    pub fn attribute(&self, name: &str) -> Result<&Attribute> {
        self.attributes.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.attributes.keys().map(String::as_str).collect();
            anyhow!("unknown attribute `{name}` (defined: {})", known.join(", "))
        })
    }

    /// A named partition, `discrete`, `indiscrete`, or a literal `{{a},{b,c}}`.
    pub fn partition(&self, text: &str) -> Result<Partition> {
        match text.trim() {
            "discrete" => Ok(Partition::discrete(&self.universe)),
            "indiscrete" => Ok(Partition::indiscrete(&self.universe)),
            t if t.starts_with('{') => Ok(Partition::parse(&self.universe, t)?),
            name => self.partitions.get(name).cloned().ok_or_else(|| anyhow!("unknown partition `{name}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABC: &str = include_str!("../specs/abc.spec");

    #[test]
    fn text_and_json_agree() {
        let text = ExperimentSpec::parse(ABC).unwrap();
        let json = ExperimentSpec::parse(include_str!("../specs/abc.json")).unwrap();
        let norm = |s: ExperimentSpec| {
            let e = Experiment::resolve(s).unwrap();
            (
                e.universe.labels().to_vec(),
                e.bases
                    .iter()
                    .map(|b| {
                        (
                            b.name().to_string(),
                            b.vectors().iter().map(|v| v.bits()).collect::<Vec<_>>(),
                            b.coordinates().labels().to_vec(),
                        )
                    })
                    .collect::<Vec<_>>(),
                e.attributes.iter().map(|(k, a)| (k.clone(), a.values().to_vec())).collect::<Vec<_>>(),
                e.partitions.iter().map(|(k, p)| (k.clone(), p.to_string())).collect::<Vec<_>>(),
                e.dynamics.as_ref().map(Gf2Matrix::rows),
                e.params,
            )
        };
        assert_eq!(norm(text), norm(json));
    }

    #[test]
    fn set_splitting() {
        assert_eq!(split_sets("{a,b} {c}").unwrap(), ["{a,b}", "{c}"]);
        assert_eq!(split_sets("{a, b},{c} ∅").unwrap(), ["{a, b}", "{c}", "{}"]);
        assert!(split_sets("{a").is_err());
        assert!(split_sets("a b").is_err());
    }

    #[test]
    fn text_errors_name_the_line() {
        let err = ExperimentSpec::parse("[universe]\nlabels = a b\nbogus\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(ExperimentSpec::parse("[params]\nseed = 1\n").is_err());
        assert!(ExperimentSpec::parse("[universe]\nlabels = a\n[basis]\n").is_err());
        assert!(ExperimentSpec::parse("[universe]\nlabels = a\n[weird]\n").is_err());
        let dup = "[universe]\nlabels = a\n[attribute f]\na = 1\na = 2\n";
        assert!(ExperimentSpec::parse(dup).is_err());
    }

    #[test]
    fn resolution_errors() {
        let missing = ExperimentSpec::parse("[universe]\nlabels = a b\n[attribute f]\na = 1\n").unwrap();
        assert!(Experiment::resolve(missing).is_err());
        let dependent = ExperimentSpec::parse("[universe]\nlabels = a b\n[basis V]\nvectors = {a} {a}\n").unwrap();
        let err = Experiment::resolve(dependent).unwrap_err();
        assert!(matches!(err.downcast_ref::<qmsets::Error>(), Some(qmsets::Error::DependentBasis { .. })));
    }

    #[test]
    fn partition_lookup() {
        let e = Experiment::resolve(ExperimentSpec::parse(ABC).unwrap()).unwrap();
        assert_eq!(e.partition("discrete").unwrap().len(), 3);
        assert_eq!(e.partition("indiscrete").unwrap().len(), 1);
        assert_eq!(e.partition("{{a,b},{c}}").unwrap().to_string(), "{{a,b},{c}}");
        assert!(e.partition("nope").is_err());
        assert!(e.attribute("nope").unwrap_err().to_string().contains("defined:"));
    }
}
