//! Argument parsing and dispatch for the `genus-spectrum` binary.
//!
//! Every verb builds one JSON object; text mode prints an optional headline
//! followed by the same fields as `key: value` lines.

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use genus_spectrum::conjecture::{search_counterexamples, LatticeFilter};
use genus_spectrum::mainline::{envelope, gap_norm, hull, is_mainline, mainline_profile, wp_eval};
use genus_spectrum::mingenus::mu0;
use genus_spectrum::signature::{genus, is_admissible, reduced_genus};
use genus_spectrum::spectrum::{
    classify_small, full_spectrum, group_for_spectrum, has_large_invariants, mu0_plus, mu_plus,
    oracle_reduced_spectrum,
};
use genus_spectrum::{AbelianPGroup, GapNorm, HalfInt, IntSeq, PDatum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "genus-spectrum",
    version,
    about = "Genus spectra of finite abelian p-groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural invariants of a group given as `p:r1,...,re`.
    Invariants { group: String },
    /// Reduced minimum genus with per-index detail.
    Mu0 { group: String },
    /// Least positive reduced genus and least genus at least 2.
    Mu0plus { group: String },
    /// Full reduced spectrum and its genus-level view.
    Spectrum { group: String },
    /// Brute-force reduced spectrum up to a bound.
    Oracle {
        group: String,
        #[arg(long)]
        bound: String,
    },
    /// Genus zero, genus one or positive minimum genus.
    Classify { group: String },
    /// Admissibility of a p-datum `x1,...,xe;h`.
    Admissible {
        group: String,
        #[arg(long)]
        datum: String,
    },
    /// Mainline profile of a sequence, or membership of `--m`.
    Mainline {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        m: Option<BigUint>,
    },
    /// A large-invariant group with prescribed minimum.
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        m: BigUint,
    },
    /// Pairs of non-isomorphic groups with equal spectra.
    SearchTalu {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        e_tilde: usize,
        #[arg(long)]
        delta_max: u64,
        #[arg(long, default_value = "any")]
        lattice: String,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    headline: Option<String>,
    fields: Map<String, Value>,
}

type Domain<T> = std::result::Result<T, genus_spectrum::Error>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            let code = err.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => Outcome {
            code: 0,
            stdout: render(&report, cli.format),
            stderr: String::new(),
        },
        Err(err) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        },
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.fields).expect("maps serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(h) = &report.headline {
                s.push_str(h);
                s.push('\n');
            }
            for (k, v) in &report.fields {
                let v = match v {
                    Value::String(x) => x.clone(),
                    Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
                        let items: Vec<String> = xs.iter().map(scalar).collect();
                        format!("[{}]", items.join(", "))
                    }
                    other => other.to_string(),
                };
                s.push_str(&format!("{k}: {v}\n"));
            }
            s
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        other => other.to_string(),
    }
}

fn dispatch(cmd: &Command) -> Domain<Report> {
    match cmd {
        Command::Invariants { group } => invariants(&parse_group(group)?),
        Command::Mu0 { group } => min_genus(&parse_group(group)?),
        Command::Mu0plus { group } => {
            let grp = parse_group(group)?;
            let fields = object([
                ("group", json!(grp.to_string())),
                ("mu0_plus", json!(mu0_plus(&grp)?.to_string())),
                ("mu_plus", json!(mu_plus(&grp)?.to_string())),
            ]);
            Ok(Report {
                headline: None,
                fields,
            })
        }
        Command::Spectrum { group } => spectrum(&parse_group(group)?),
        Command::Oracle { group, bound } => {
            let grp = parse_group(group)?;
            let bound: HalfInt = bound.parse()?;
            let values: Vec<String> = oracle_reduced_spectrum(&grp, &bound)?
                .iter()
                .map(ToString::to_string)
                .collect();
            let fields = object([
                ("group", json!(grp.to_string())),
                ("bound", json!(bound.to_string())),
                ("values", json!(values)),
            ]);
            Ok(Report {
                headline: None,
                fields,
            })
        }
        Command::Classify { group } => {
            let grp = parse_group(group)?;
            let fields = object([
                ("group", json!(grp.to_string())),
                (
                    "class",
                    serde_json::to_value(classify_small(&grp)).expect("enum serializes"),
                ),
            ]);
            Ok(Report {
                headline: None,
                fields,
            })
        }
        Command::Admissible { group, datum } => {
            let grp = parse_group(group)?;
            let d: PDatum = datum.parse()?;
            let ok = is_admissible(&grp, &d)?;
            let g0 = reduced_genus(&grp, &d)?;
            let g = genus(&grp, &d)?;
            let verdict = if ok { "admissible" } else { "not admissible" };
            let fields = object([
                ("group", json!(grp.to_string())),
                ("datum", json!(d.to_string())),
                ("admissible", json!(ok)),
                ("genus", json!(g.to_string())),
                ("reduced_genus", json!(g0.to_string())),
            ]);
            Ok(Report {
                headline: Some(format!("{verdict}, g={g}, g0={g0}")),
                fields,
            })
        }
        Command::Mainline { p, seq, m } => mainline(*p, seq, m.as_ref()),
        Command::Construct { p, e, m } => {
            let grp = group_for_spectrum(*p, *e, m)?;
            let fields = object([
                ("group", json!(grp.to_string())),
                ("structure", json!(grp.structure())),
                ("mu0", json!(mu0(&grp).mu0.to_string())),
                ("epsilon", json!(grp.epsilon().value())),
            ]);
            Ok(Report {
                headline: None,
                fields,
            })
        }
        Command::SearchTalu {
            p,
            e,
            e_tilde,
            delta_max,
            lattice,
        } => {
            let filter: LatticeFilter = lattice.parse()?;
            let pairs = search_counterexamples(*p, *e, *e_tilde, *delta_max, filter)?;
            let headline = format!("{} pair(s) with delta <= {delta_max}", pairs.len());
            let fields = object([(
                "pairs",
                serde_json::to_value(&pairs).expect("pairs serialize"),
            )]);
            Ok(Report {
                headline: Some(headline),
                fields,
            })
        }
    }
}

fn object<const N: usize>(entries: [(&str, Value); N]) -> Map<String, Value> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Parses `p:r1,...,re`.
pub fn parse_group(s: &str) -> Domain<AbelianPGroup> {
    s.parse()
}

fn invariants(grp: &AbelianPGroup) -> Domain<Report> {
    let fields = object([
        ("group", json!(grp.to_string())),
        ("structure", json!(grp.structure())),
        ("p", json!(grp.p())),
        ("e", json!(grp.e())),
        ("r", json!(grp.r())),
        ("s", json!(grp.s())),
        ("rank", json!(grp.rank())),
        ("e_prime", json!(grp.e_prime())),
        ("log_order", json!(grp.log_order())),
        ("delta", json!(grp.delta())),
        ("epsilon", json!(grp.epsilon().value())),
        ("kulkarni_n", json!(grp.kulkarni_n().to_string())),
        ("large_invariants", json!(has_large_invariants(grp))),
    ]);
    Ok(Report {
        headline: None,
        fields,
    })
}

/// `1+p^k*c` with `p^k·c = p^δ·μ_0` and `c` an integer.
fn factored_genus(grp: &AbelianPGroup, m: &HalfInt) -> String {
    let (k, c) = if m.is_integer() {
        (grp.delta(), m.to_integer().expect("integral"))
    } else {
        (grp.delta() - 1, m.twice().clone())
    };
    let sign = if c < BigInt::from(0) { "-" } else { "+" };
    let c = if c < BigInt::from(0) { -c } else { c };
    format!("1{sign}{}^{k}*{c}", grp.p())
}

fn min_genus(grp: &AbelianPGroup) -> Domain<Report> {
    let rep = mu0(grp);
    let per_index: Vec<Value> = rep
        .per_index
        .iter()
        .map(|(i, m)| {
            json!({
                "i": i,
                "epsilon_i": m.epsilon_i,
                "mu_i": m.mu_i.to_string(),
                "min_gamma": m.min_gamma.to_string(),
                "attaining": m.attaining.entries(),
            })
        })
        .collect();
    let data: Vec<String> = rep.attaining_data.iter().map(ToString::to_string).collect();
    let fields = object([
        ("group", json!(grp.to_string())),
        ("mu0", json!(rep.mu0.to_string())),
        ("minimum_genus", json!(rep.minimum_genus.to_string())),
        (
            "minimum_genus_factored",
            json!(factored_genus(grp, &rep.mu0)),
        ),
        ("index_set", json!(rep.index_set)),
        ("zero_droppable", json!(rep.zero_droppable)),
        ("per_index", json!(per_index)),
        ("attaining_data", json!(data)),
    ]);
    Ok(Report {
        headline: None,
        fields,
    })
}

fn spectrum(grp: &AbelianPGroup) -> Domain<Report> {
    let d = full_spectrum(grp)?;
    let view = d.genus_view(grp);
    let mut fields = match serde_json::to_value(&d).expect("descriptor serializes") {
        Value::Object(m) => m,
        _ => unreachable!("descriptor serializes to an object"),
    };
    fields.insert("group".into(), json!(grp.to_string()));
    fields.insert("sp".into(), json!(view.to_string()));
    fields.insert("period".into(), json!(view.period.to_string()));
    let gaps: Vec<String> = view.gaps.iter().map(ToString::to_string).collect();
    fields.insert("genus_gaps".into(), json!(gaps));
    Ok(Report {
        headline: Some(format!("sp = {view}")),
        fields,
    })
}

fn mainline(p: u64, seq: &str, m: Option<&BigUint>) -> Domain<Report> {
    let a: IntSeq = seq.parse()?;
    let mut fields = object([("p", json!(p)), ("seq", json!(a.to_string()))]);
    if let Some(m) = m {
        fields.insert("m".into(), json!(m.to_string()));
        fields.insert("member".into(), json!(is_mainline(p, &a, m)?));
        return Ok(Report {
            headline: None,
            fields,
        });
    }
    let prof = mainline_profile(p, &a)?;
    let h = hull(&a);
    let norm = match gap_norm(&a)? {
        GapNorm::Finite(v) => v.to_string(),
        GapNorm::Infinite => "inf".into(),
    };
    let gaps: Vec<String> = prof.gaps.iter().map(ToString::to_string).collect();
    fields.insert("wp".into(), json!(wp_eval(p, &a)?.to_string()));
    fields.insert("hull".into(), json!(h.to_string()));
    fields.insert("envelope".into(), json!(envelope(p, &h)?.to_string()));
    fields.insert("gap_norm".into(), json!(norm));
    fields.insert("mu".into(), json!(prof.mu.to_string()));
    fields.insert("sigma".into(), json!(prof.sigma.to_string()));
    fields.insert("gaps".into(), json!(gaps));
    Ok(Report {
        headline: None,
        fields,
    })
}
