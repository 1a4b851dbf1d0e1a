use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use goodfilt::chars::{chi_of, combo_to_multiset, freudenthal, weyl_dim};
use goodfilt::criteria::{self, good_filtration_guarantee};
use goodfilt::prfilt::{decompose_pr, nabla_pr_char};
use goodfilt::verifier::{counterexample_check, Verifier};
use goodfilt::{
    build, Jantzen, RootSystemData, SimpleCharCache, TypeLabel, Weight, WeightMultiset,
};

const CACHE_FILE: &str = "simple_chars.json";

#[derive(Parser)]
#[command(
    name = "goodfilt",
    version,
    about = "Characters, the Jantzen sum formula and good filtrations of St_r (x) L(lambda)"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Simple-character cache file.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Directory holding the default cache file.
    #[arg(long, env = "GOODFILT_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct System {
    #[arg(long = "type", value_parser = parse_type)]
    label: TypeLabel,
    #[arg(long)]
    rank: usize,
}

#[derive(Args, Clone)]
struct WeightArg {
    /// Comma-separated fundamental-weight coordinates, e.g. 1,2,1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_weight)]
    weight: Weight,
}

#[derive(Subcommand)]
enum Command {
    /// Root-system data.
    Info {
        #[command(flatten)]
        system: System,
    },
    /// Weyl dimension of nabla(lambda).
    Dim {
        #[command(flatten)]
        system: System,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Formal character of nabla(lambda), or chi(mu) for arbitrary mu with --euler.
    Char {
        #[command(flatten)]
        system: System,
        #[command(flatten)]
        weight: WeightArg,
        #[arg(long)]
        euler: bool,
    },
    /// Jantzen sum formula in the chi-basis.
    Jsf {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Simple character ch L(lambda) in the chi-basis.
    Simple {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        #[command(flatten)]
        weight: WeightArg,
        /// Print weight multiplicities instead of chi-coefficients.
        #[arg(long)]
        multiset: bool,
    },
    /// Composition factors of nabla(lambda).
    Factors {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Closed-form predicates for lambda.
    Criteria {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        #[arg(short = 'r', default_value_t = 1)]
        r: u32,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Character of nabla^(p,r)(lambda).
    Prchar {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        #[arg(short = 'r', default_value_t = 1)]
        r: u32,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Decomposes a character in the nabla^(p,r) basis.
    Prdecomp {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        #[arg(short = 'r', default_value_t = 1)]
        r: u32,
        /// Decompose ch nabla(lambda).
        #[arg(long, allow_hyphen_values = true, value_parser = parse_weight, conflicts_with = "input")]
        weight: Option<Weight>,
        /// JSON file holding [{"weight": [...], "mult": n}, ...].
        #[arg(long, required_unless_present = "weight")]
        input: Option<PathBuf>,
    },
    /// Sweeps X_1 and reports a verdict for every restricted weight.
    Verify {
        #[command(flatten)]
        system: System,
        #[arg(short = 'p')]
        p: i64,
        /// Exit with status 3 if any weight stays undetermined.
        #[arg(long)]
        expect_all_cleared: bool,
    },
    /// Checks the type A_n counterexample with p = 2(n+1) - 5.
    Counterexample {
        #[arg(short = 'n')]
        n: usize,
    },
}

fn parse_type(s: &str) -> Result<TypeLabel, String> {
    s.parse::<TypeLabel>().map_err(|e| e.to_string())
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.parse::<Weight>().map_err(|e| e.to_string())
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<goodfilt::Error> for Failure {
    fn from(e: goodfilt::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

struct Output {
    value: Value,
    text: Option<String>,
    exit: u8,
}

impl Output {
    fn of<T: Serialize>(v: &T) -> Outcome<Self> {
        Ok(Output {
            value: serde_json::to_value(v).map_err(|e| Failure::Domain(e.to_string()))?,
            text: None,
            exit: 0,
        })
    }
}

fn system(s: &System) -> Outcome<RootSystemData> {
    Ok(build(s.label, s.rank)?)
}

fn check_arity(rs: &RootSystemData, w: &Weight) -> Outcome<()> {
    if w.rank() != rs.rank {
        return Err(Failure::Usage(format!(
            "weight {w} has {} coordinates but {} has rank {}",
            w.rank(),
            rs.label(),
            rs.rank
        )));
    }
    Ok(())
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    cli.cache
        .clone()
        .or_else(|| cli.cache_dir.as_ref().map(|d| d.join(CACHE_FILE)))
}

fn engine<'a>(
    rs: &'a RootSystemData,
    p: i64,
    cache: &Arc<SimpleCharCache>,
) -> Outcome<Jantzen<'a>> {
    Ok(Jantzen::with_cache(rs, p, cache.clone())?)
}

fn execute(cli: &Cli, cache: &Arc<SimpleCharCache>) -> Outcome<Output> {
    match &cli.command {
        Command::Info { system: s } => {
            let rs = system(s)?;
            let roots: Vec<Value> = rs
                .positive_roots
                .iter()
                .map(|a| {
                    json!({
                        "simple_coeffs": a.simple_coeffs,
                        "coroot_coeffs": a.coroot_coeffs,
                        "weight": a.weight,
                        "short": a.is_short(),
                    })
                })
                .collect();
            Output::of(&json!({
                "system": rs.label(),
                "rank": rs.rank,
                "cartan": rs.cartan,
                "rho": rs.rho,
                "coxeter_number": rs.coxeter_h,
                "weyl_order": rs.weyl_order,
                "alpha0": rs.alpha0().weight,
                "alpha0_coroot": rs.alpha0().coroot_coeffs,
                "positive_roots": roots,
            }))
        }
        Command::Dim { system: s, weight } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            Output::of(&weyl_dim(&rs, &weight.weight)?)
        }
        Command::Char {
            system: s,
            weight,
            euler,
        } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            if *euler {
                Output::of(&chi_of(&rs, &weight.weight)?)
            } else {
                Output::of(&freudenthal(&rs, &weight.weight)?)
            }
        }
        Command::Jsf {
            system: s,
            p,
            weight,
        } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            Output::of(&engine(&rs, *p, cache)?.jsf(&weight.weight)?)
        }
        Command::Simple {
            system: s,
            p,
            weight,
            multiset,
        } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            let combo = engine(&rs, *p, cache)?.simple_char(&weight.weight)?;
            if *multiset {
                Output::of(&combo_to_multiset(&rs, &combo)?)
            } else {
                Output::of(&combo)
            }
        }
        Command::Factors {
            system: s,
            p,
            weight,
        } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            Output::of(&engine(&rs, *p, cache)?.composition_factors(&weight.weight)?)
        }
        Command::Criteria {
            system: s,
            p,
            r,
            weight,
        } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            let j = engine(&rs, *p, cache)?;
            let l = &weight.weight;
            if !l.is_dominant() {
                return Err(goodfilt::Error::NotDominant(l.clone()).into());
            }
            let satz9 = match criteria::satz9_simple(&rs, *p, l) {
                Ok(b) => json!(b),
                Err(goodfilt::Error::WrongType(_)) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            let window = match criteria::mu_window(&rs, *p, *r, l) {
                Ok(w) => json!(w),
                Err(goodfilt::Error::PTooSmall { .. }) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Output::of(&json!({
                "lambda": l,
                "p": p,
                "r": r,
                "alpha0_pairing": rs.alpha0_pairing(l),
                "simple_nabla": j.is_simple_nabla(l)?,
                "satz9_simple": satz9,
                "trivially_simple": criteria::trivially_simple(&rs, *p, l),
                "bound_smallp": criteria::bound_smallp(&rs, *p, *r, l),
                "bound_lambdaalpha0": criteria::bound_lambdaalpha0(&rs, *p, *r, l),
                "bound_storlambda1": criteria::bound_storlambda1(&rs, *p, *r, l),
                "nablapr_is_simple": criteria::nablapr_is_simple(&rs, *p, *r, l),
                "mu_window": window,
                "guarantee": good_filtration_guarantee(&rs, *p, *r, l),
            }))
        }
        Command::Prchar {
            system: s,
            p,
            r,
            weight,
        } => {
            let rs = system(s)?;
            check_arity(&rs, &weight.weight)?;
            Output::of(&nabla_pr_char(
                &engine(&rs, *p, cache)?,
                *r,
                &weight.weight,
            )?)
        }
        Command::Prdecomp {
            system: s,
            p,
            r,
            weight,
            input,
        } => {
            let rs = system(s)?;
            let m: WeightMultiset = match (weight, input) {
                (Some(w), _) => {
                    check_arity(&rs, w)?;
                    freudenthal(&rs, w)?
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
                    let m: WeightMultiset = serde_json::from_str(&text)
                        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
                    if let Some(w) = m.keys().find(|w| w.rank() != rs.rank) {
                        check_arity(&rs, w)?;
                    }
                    m
                }
                (None, None) => return Err(Failure::Usage("need --weight or --input".into())),
            };
            Output::of(&decompose_pr(&engine(&rs, *p, cache)?, *r, &m)?)
        }
        Command::Verify {
            system: s,
            p,
            expect_all_cleared,
        } => {
            let rs = system(s)?;
            let report = Verifier::new(engine(&rs, *p, cache)?)?.verify_rank()?;
            let mut out = Output::of(&report)?;
            out.text = Some(report.to_text());
            if *expect_all_cleared && !report.all_cleared() {
                out.exit = 3;
            }
            Ok(out)
        }
        Command::Counterexample { n } => Output::of(&counterexample_check(*n)?),
    }
}

/// Plain rendering of a JSON value: scalars as-is, `{weight, mult}` arrays as
/// one term per line, objects as `key: value` lines.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Array(items) if items.iter().all(is_term) => {
            for t in items {
                out.push_str(&format!(
                    "{pad}{} {}\n",
                    weight_text(&t["weight"]),
                    t["mult"]
                ));
            }
        }
        Value::Array(items) => {
            for item in items {
                if item.is_object() || item.is_array() {
                    out.push_str(&format!("{pad}-\n"));
                    render_text(item, indent + 2, out);
                } else {
                    out.push_str(&format!("{pad}{}\n", scalar_text(item)));
                }
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                if item.is_object() || (item.is_array() && !is_weight(item)) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(item, indent + 2, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(item)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn is_term(v: &Value) -> bool {
    v.is_object()
        && v.get("weight").is_some()
        && v.get("mult").is_some()
        && v.as_object().map(|o| o.len()) == Some(2)
}

fn is_weight(v: &Value) -> bool {
    v.as_array().is_some_and(|a| a.iter().all(|x| x.is_i64()))
}

fn weight_text(v: &Value) -> String {
    let coords: Vec<String> = v
        .as_array()
        .map(|a| a.iter().map(|x| x.to_string()).collect())
        .unwrap_or_default();
    format!("({})", coords.join(","))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(_) if is_weight(v) => weight_text(v),
        other => other.to_string(),
    }
}

fn emit(path: Option<&Path>, body: &str) -> Outcome<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| Failure::Domain(e.to_string()))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp =
                tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::Domain(e.to_string()))?;
            tmp.write_all(body.as_bytes())
                .map_err(|e| Failure::Domain(e.to_string()))?;
            tmp.persist(path)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Outcome<u8> {
    let cache_file = cache_path(cli);
    let cache = Arc::new(match &cache_file {
        Some(path) => SimpleCharCache::load(path)?,
        None => SimpleCharCache::new(),
    });
    let output = execute(cli, &cache)?;
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&output.value)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => match output.text {
            Some(t) => t,
            None => {
                let mut s = String::new();
                render_text(&output.value, 0, &mut s);
                s
            }
        },
    };
    emit(cli.out.as_deref(), &body)?;
    if let Some(path) = &cache_file {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Domain(e.to_string()))?;
        }
        cache.save(path)?;
    }
    Ok(output.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
