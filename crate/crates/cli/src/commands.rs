use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use qmsets::density::{measure_density, rho_block, rho_partition};
use qmsets::dynamics::{two_slit, SlitMode, TwoSlitConfig};
use qmsets::observables::{eigenket_labels, is_csca, measure_sequence, outcomes};
use qmsets::partitions::{dit_set, enumerate_partitions, logical_entropy, refines};
use qmsets::rational::{decimal6, fraction};
use qmsets::states::ket_table;
use qmsets::{Attribute, DensityMatrix, Dynamics, Partition, SeededRng, SubsetVector};
use serde_json::{json, Map, Value};

use crate::spec::Experiment;
use crate::Format;

/// Largest universe for which `partitions --format ascii` draws cover
/// relations.
const LATTICE_DUMP_LIMIT: usize = 4;

pub const DEFAULT_TRIALS: u64 = 10_000;

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn state_arg(exp: &Experiment, flag: Option<&str>, param: Option<&str>, what: &str) -> Result<SubsetVector> {
    let text = flag.or(param).ok_or_else(|| anyhow!("no {what} given (pass --{what} or set it under [params])"))?;
    Ok(exp.universe.parse_subset(text)?)
}

pub fn ket_table_cmd(exp: &Experiment, format: Format) -> Result<String> {
    let mut bases = vec![exp.standard.clone()];
    bases.extend(exp.bases.iter().cloned());
    let table = ket_table(&bases)?;
    Ok(match format {
        Format::Csv => table.to_csv(),
        Format::Json => json_text(&table.to_json()),
        Format::Ascii => table.to_string(),
    })
}

pub struct MeasureArgs<'a> {
    pub attributes: &'a [String],
    pub state: Option<&'a str>,
    pub seed: Option<u64>,
}

pub fn measure_cmd(exp: &Experiment, args: MeasureArgs<'_>, format: Format) -> Result<String> {
    let names: Vec<String> = if args.attributes.is_empty() {
        exp.params
            .measure
            .clone()
            .ok_or_else(|| anyhow!("no attribute given (pass --attribute or set measure under [params])"))?
    } else {
        args.attributes.to_vec()
    };
    if names.is_empty() {
        bail!("no attribute given");
    }
    let attrs: Vec<Attribute> = names.iter().map(|n| exp.attribute(n).cloned()).collect::<Result<_>>()?;
    let state = state_arg(exp, args.state, exp.params.state.as_deref(), "state")?;
    let seed = args.seed.or(exp.params.seed).unwrap_or(0);
    let mut rng = SeededRng::new(seed);
    let chain = measure_sequence(&attrs, &state, &mut rng)?;

    let mut inputs = vec![state.clone()];
    inputs.extend(chain.iter().map(|o| o.post_state.clone()));
    let distributions = attrs.iter().zip(&inputs).map(|(f, s)| outcomes(f, s)).collect::<qmsets::Result<Vec<_>>>()?;
    let final_state = inputs.last().expect("non-empty").clone();
    let csca = is_csca(&attrs)?;
    let tuple: Vec<String> = chain.iter().map(|o| fraction(&o.eigenvalue)).collect();
    let ket = format!("|{}⟩", tuple.join(","));

    match format {
        Format::Json => {
            let steps: Vec<Value> = names
                .iter()
                .zip(&inputs)
                .zip(distributions.iter().zip(&chain))
                .map(|((name, input), (dist, picked))| {
                    json!({
                        "attribute": name,
                        "state": input.to_string(),
                        "distribution": dist.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
                        "outcome": picked.to_json(),
                    })
                })
                .collect();
            let mut obj = Map::new();
            obj.insert("state".into(), json!(state.to_string()));
            obj.insert("seed".into(), json!(seed));
            obj.insert("steps".into(), Value::Array(steps));
            obj.insert("final_state".into(), json!(final_state.to_string()));
            obj.insert("eigenvalues".into(), json!(tuple));
            obj.insert("csca".into(), json!(csca));
            if csca {
                obj.insert("eigenket".into(), json!({ "ket": ket, "state": final_state.to_string() }));
                let table: Map<String, Value> = eigenket_labels(&attrs)?
                    .into_iter()
                    .map(|(label, vals)| {
                        let tuple: Vec<String> = vals.iter().map(fraction).collect();
                        (label, json!(format!("|{}⟩", tuple.join(","))))
                    })
                    .collect();
                obj.insert("eigenkets".into(), Value::Object(table));
            }
            Ok(json_text(&Value::Object(obj)))
        }
        Format::Csv => {
            let mut out = String::from("step,attribute,state,eigenvalue,prob,prob_decimal,post_state,selected\n");
            for (i, ((name, input), (dist, picked))) in
                names.iter().zip(&inputs).zip(distributions.iter().zip(&chain)).enumerate()
            {
                for o in dist {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        i + 1,
                        csv_field(name),
                        csv_field(&input.to_string()),
                        fraction(&o.eigenvalue),
                        fraction(&o.probability),
                        decimal6(&o.probability),
                        csv_field(&o.post_state.to_string()),
                        o.eigenvalue == picked.eigenvalue
                    );
                }
            }
            Ok(out)
        }
        Format::Ascii => {
            let mut out = format!("prepared {state}, seed {seed}\n");
            for (i, ((name, input), (dist, picked))) in
                names.iter().zip(&inputs).zip(distributions.iter().zip(&chain)).enumerate()
            {
                let _ = writeln!(out, "{}. measure {name} on {input}", i + 1);
                for o in dist {
                    let mark = if o.eigenvalue == picked.eigenvalue { '*' } else { ' ' };
                    let _ = writeln!(
                        out,
                        "  {mark} {} with prob {} -> {}",
                        fraction(&o.eigenvalue),
                        fraction(&o.probability),
                        o.post_state
                    );
                }
            }
            let _ = writeln!(out, "final state {final_state}, eigenvalues ({})", tuple.join(","));
            if csca {
                let _ = writeln!(out, "complete set: {ket} = {final_state}");
            } else {
                let _ = writeln!(out, "not a complete set of compatible attributes");
            }
            Ok(out)
        }
    }
}

pub struct TwoSlitArgs<'a> {
    pub mode: SlitMode,
    pub slits: Option<&'a str>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub periods: Option<u32>,
}

pub fn two_slit_cmd(exp: &Experiment, args: TwoSlitArgs<'_>, format: Format) -> Result<String> {
    let matrix = exp.dynamics.clone().ok_or_else(|| anyhow!("no [dynamics] section in the experiment"))?;
    let dynamics = Dynamics::new(matrix)?;
    let slits = state_arg(exp, args.slits, exp.params.slits.as_deref(), "slits")?;
    let periods = args.periods.or(exp.params.periods).unwrap_or(1);
    let trials = args.trials.or(exp.params.trials).unwrap_or(DEFAULT_TRIALS);
    let seed = args.seed.or(exp.params.seed).unwrap_or(0);
    let config = TwoSlitConfig::new(dynamics, slits, args.mode)?.with_periods(periods);
    let result = two_slit(&config, &mut SeededRng::new(seed), trials)?;
    Ok(match format {
        Format::Json => json_text(&result.to_json()),
        Format::Csv => result.to_csv(),
        Format::Ascii => result.to_string(),
    })
}

pub struct DensityArgs<'a> {
    pub partition: Option<&'a str>,
    pub block: Option<&'a str>,
    pub state: Option<&'a str>,
    pub attribute: Option<&'a str>,
}

pub fn density_cmd(exp: &Experiment, args: DensityArgs<'_>, format: Format) -> Result<String> {
    let (title, rho): (String, DensityMatrix) = match (args.partition, args.block, args.attribute) {
        (Some(p), None, None) => {
            let pi = exp.partition(p)?;
            (format!("ρ({pi})"), rho_partition(&pi))
        }
        (None, Some(b), None) => {
            let block = exp.universe.parse_subset(b)?;
            (format!("ρ({block})"), rho_block(&block)?)
        }
        (None, None, Some(name)) => {
            let f = exp.attribute(name)?;
            let s = state_arg(exp, args.state, exp.params.state.as_deref(), "state")?;
            (format!("ρ̂ after measuring {name} on {s}"), measure_density(f, &s)?)
        }
        (None, None, None) => bail!("pass one of --partition, --block, or --attribute"),
        _ => bail!("--partition, --block and --attribute are mutually exclusive"),
    };
    Ok(match format {
        Format::Json => json_text(&rho.to_json()),
        Format::Csv => rho.to_csv(),
        Format::Ascii => format!("{title}\n{rho}"),
    })
}

pub fn partitions_cmd(exp: &Experiment, format: Format) -> Result<String> {
    let all = enumerate_partitions(&exp.universe)?;
    let rows: Vec<(&Partition, usize, _)> = all.iter().map(|p| (p, dit_set(p).len(), logical_entropy(p))).collect();
    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(p, dits, h)| {
                    json!({
                        "partition": p.to_string(),
                        "blocks": p.len(),
                        "dits": dits,
                        "entropy": fraction(h),
                        "entropy_decimal": decimal6(h),
                    })
                })
                .collect();
            json_text(&json!({ "n": exp.universe.len(), "count": all.len(), "partitions": list }))
        }
        Format::Csv => {
            let mut out = String::from("partition,blocks,dits,entropy,entropy_decimal\n");
            for (p, dits, h) in &rows {
                let _ =
                    writeln!(out, "{},{},{dits},{},{}", csv_field(&p.to_string()), p.len(), fraction(h), decimal6(h));
            }
            out
        }
        Format::Ascii => lattice_dump(exp, &rows)?,
    })
}

fn lattice_dump(exp: &Experiment, rows: &[(&Partition, usize, qmsets::Rational)]) -> Result<String> {
    let n = exp.universe.len();
    let mut out = format!("partition lattice on {n} elements, {} partitions\n", rows.len());
    for blocks in (1..=n).rev() {
        let level: Vec<_> = rows.iter().filter(|(p, _, _)| p.len() == blocks).collect();
        if level.is_empty() {
            continue;
        }
        let _ = writeln!(out, "{blocks} block(s):");
        for (p, dits, h) in level {
            let _ = writeln!(out, "  {p}  dits={dits} h={}", fraction(h));
        }
    }
    if n > LATTICE_DUMP_LIMIT {
        return Ok(out);
    }
    out.push_str("covers (finer > coarser):\n");
    for (fine, _, _) in rows {
        for (coarse, _, _) in rows {
            if coarse.len() + 1 == fine.len() && refines(fine, coarse)? {
                let _ = writeln!(out, "  {fine} > {coarse}");
            }
        }
    }
    let _ = writeln!(out, "subset lattice on {n} elements, {} subsets", 1u64 << n);
    for size in (0..=n).rev() {
        let level: Vec<String> =
            exp.universe.all_subsets().filter(|s| s.len() == size).map(|s| s.to_string()).collect();
        let _ = writeln!(out, "  size {size}: {}", level.join(" "));
    }
    Ok(out)
}

pub fn orbits_cmd(exp: &Experiment, format: Format) -> Result<String> {
    let matrix = exp.dynamics.as_ref().ok_or_else(|| anyhow!("no [dynamics] section in the experiment"))?;
    let orbits = Dynamics::new(matrix.clone()).map(|d| d.matrix().orbits()).context("invalid dynamics")??;
    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = orbits
                .iter()
                .map(|o| json!({ "length": o.len(), "members": o.members().iter().map(ToString::to_string).collect::<Vec<_>>() }))
                .collect();
            json_text(&json!({ "count": orbits.len(), "orbits": list }))
        }
        Format::Csv => {
            let mut out = String::from("orbit,length,members\n");
            for (i, o) in orbits.iter().enumerate() {
                let members: Vec<String> = o.members().iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "{},{},{}", i + 1, o.len(), csv_field(&members.join(" ")));
            }
            out
        }
        Format::Ascii => {
            let mut out = String::new();
            for o in &orbits {
                let _ = writeln!(out, "{}-orbit: {o}", o.len());
            }
            out
        }
    })
}
