use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use opilab::funcrep::{certify_monotone, CertifyVerdict, FunctionSpec, Interval};
use opilab::verify::{
    reports_to_jsonl, run_suite, run_sweep, summary_to_csv, sweep_to_csv, GridRange, SuiteConfig,
    SweepConfig, TheoremId,
};

use crate::args::{BoundsArgs, CertifyArgs, SweepArgs, VerifyArgs};
use crate::{EXIT_FAIL, EXIT_OK};

type CmdResult = Result<u8, String>;

fn seed_or_env(explicit: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = explicit {
        return Ok(seed);
    }
    match std::env::var("OPILAB_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("OPILAB_SEED must be an unsigned integer, got '{text}'")),
        Err(_) => Ok(0),
    }
}

fn load_function_spec(path: &Path) -> Result<FunctionSpec, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read function spec {}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("malformed function spec {}: {e}", path.display()))
}

fn parse_theorems(names: &[String]) -> Result<Vec<TheoremId>, String> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(TheoremId::ALL);
            continue;
        }
        match TheoremId::parse(name) {
            Some(t) => out.push(t),
            None => {
                return Err(format!(
                    "unknown theorem '{name}' (expected one of {}, or 'all')",
                    TheoremId::ALL.map(|t| t.as_str()).join(", ")
                ))
            }
        }
    }
    Ok(out)
}

/// Fold a JSON config file into the suite options; explicit flags win.
fn apply_verify_config(path: &Path, args: &mut VerifyArgs) -> Result<(), String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| format!("malformed config {}: {e}", path.display()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| format!("config {} must be a JSON object", path.display()))?;

    let strings = |v: &Value, field: &str| -> Result<Vec<String>, String> {
        match v {
            Value::String(s) => Ok(s.split(',').map(|x| x.trim().to_string()).collect()),
            Value::Array(items) => items
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| format!("config field '{field}' must hold strings"))
                })
                .collect(),
            _ => Err(format!("config field '{field}' must be a string or array")),
        }
    };

    for (key, value) in obj {
        match key.as_str() {
            "theorem" => {
                if args.theorem.is_empty() {
                    args.theorem = strings(value, "theorem")?;
                }
            }
            "dims" => {
                if args.dims.is_empty() {
                    args.dims = match value {
                        Value::Array(items) => items
                            .iter()
                            .map(|x| {
                                x.as_u64().map(|d| d as usize).ok_or_else(|| {
                                    "config field 'dims' must hold integers".to_string()
                                })
                            })
                            .collect::<Result<_, _>>()?,
                        Value::String(s) => s
                            .split(',')
                            .map(|x| {
                                x.trim()
                                    .parse::<usize>()
                                    .map_err(|_| "config field 'dims' must hold integers".into())
                            })
                            .collect::<Result<Vec<usize>, String>>()?,
                        _ => return Err("config field 'dims' must be an array or string".into()),
                    };
                }
            }
            "trials" => {
                if args.trials.is_none() {
                    args.trials = Some(
                        value
                            .as_u64()
                            .ok_or("config field 'trials' must be an integer")?
                            as usize,
                    );
                }
            }
            "seed" => {
                if args.seed.is_none() {
                    args.seed =
                        Some(value.as_u64().ok_or("config field 'seed' must be an integer")?);
                }
            }
            "tol-scale" => {
                if args.tol_scale.is_none() {
                    args.tol_scale = Some(
                        value
                            .as_f64()
                            .ok_or("config field 'tol-scale' must be a number")?,
                    );
                }
            }
            "spec" => {
                if args.specs.is_empty() {
                    args.specs = strings(value, "spec")?.into_iter().map(PathBuf::from).collect();
                }
            }
            "out" => {
                if args.out.is_none() {
                    args.out = Some(PathBuf::from(
                        value
                            .as_str()
                            .ok_or("config field 'out' must be a string")?,
                    ));
                }
            }
            other => return Err(format!("unknown config field '{other}'")),
        }
    }
    Ok(())
}

pub fn cmd_verify(mut args: VerifyArgs) -> CmdResult {
    if let Some(path) = args.config.take() {
        apply_verify_config(&path, &mut args)?;
    }

    let mut config = SuiteConfig::default();
    if !args.theorem.is_empty() {
        config.theorems = parse_theorems(&args.theorem)?;
    }
    if !args.dims.is_empty() {
        config.dims = args.dims.clone();
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    config.master_seed = seed_or_env(args.seed)?;
    if let Some(tol) = args.tol_scale {
        config.tol_scale = tol;
    }
    if !args.specs.is_empty() {
        let specs: Result<Vec<_>, _> = args.specs.iter().map(|p| load_function_spec(p)).collect();
        config.functions = Some(specs?);
    }

    let outcome = run_suite(&config).map_err(|e| e.to_string())?;

    let out_dir = args.out.unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", out_dir.display()))?;
    let jsonl_path = out_dir.join("reports.jsonl");
    let csv_path = out_dir.join("summary.csv");
    fs::write(&jsonl_path, reports_to_jsonl(&outcome.reports))
        .map_err(|e| format!("cannot write {}: {e}", jsonl_path.display()))?;
    fs::write(&csv_path, summary_to_csv(&outcome.summary))
        .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;

    let (violated, errored) = (outcome.violated(), outcome.errored());
    println!(
        "{} reports ({} violated, {} errored) -> {}, {}",
        outcome.reports.len(),
        violated,
        errored,
        jsonl_path.display(),
        csv_path.display()
    );
    Ok(if violated > 0 || errored > 0 {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}

fn need(name: &str, v: Option<f64>) -> Result<f64, String> {
    v.ok_or_else(|| format!("missing required parameter --{name}"))
}

pub fn cmd_bounds(args: BoundsArgs) -> CmdResult {
    use opilab::bounds::*;

    let spec = |path: &Option<PathBuf>| -> Result<FunctionSpec, String> {
        let path = path
            .as_ref()
            .ok_or_else(|| "this bound needs --spec FILE".to_string())?;
        load_function_spec(path)
    };

    let mut params = serde_json::Map::new();
    let mut push = |name: &str, v: f64| {
        params.insert(name.to_string(), json!(v));
        v
    };

    let value: Value = match args.id.as_str() {
        "thmA" => {
            let r = push("r", need("r", args.r)?);
            let norm_a = push("normA", need("normA", args.norm_a)?);
            let m = push("m", need("m", args.m)?);
            json!(theorem_a_bound(r, norm_a, m).map_err(|e| e.to_string())?)
        }
        "thmAlog" => {
            let norm_a = push("normA", need("normA", args.norm_a)?);
            let m = push("m", need("m", args.m)?);
            json!(theorem_a_log_bound(norm_a, m).map_err(|e| e.to_string())?)
        }
        "thmB" => {
            let f = spec(&args.spec)?;
            let norm_b = push("normB", need("normB", args.norm_b)?);
            let m = push("m", need("m", args.m)?);
            params.insert("function".into(), json!(f.id()));
            json!(theorem_b_bound(&f, norm_b, m).map_err(|e| e.to_string())?)
        }
        "thmC" => {
            let r = push("r", need("r", args.r)?);
            let norm_b = push("normB", need("normB", args.norm_b)?);
            let m = push("m", need("m", args.m)?);
            let (power, log) = theorem_c_bounds(r, norm_b, m).map_err(|e| e.to_string())?;
            json!({ "power": power, "log": log })
        }
        "lemma31" => {
            let norm_a = push("normA", need("normA", args.norm_a)?);
            let norm_b = push("normB", need("normB", args.norm_b)?);
            let m = push("m", need("m", args.m)?);
            let (bound_i, bound_ii) =
                lemma31_bounds(norm_a, norm_b, m).map_err(|e| e.to_string())?;
            json!({ "bound_i": bound_i, "bound_ii": bound_ii })
        }
        "key" => {
            let lambda = push("lambda", need("lambda", args.lambda)?);
            let m_b = push("MB", need("MB", args.m_b_max)?);
            let m_a = push("mA", need("mA", args.m_a)?);
            let m = push("m", need("m", args.m)?);
            json!(key_lemma_bound(lambda, m_b, m_a, m).map_err(|e| e.to_string())?)
        }
        "thm33" => {
            let f = spec(&args.spec)?;
            let m_b = push("MB", need("MB", args.m_b_max)?);
            let m_a = push("mA", need("mA", args.m_a)?);
            let m = push("m", need("m", args.m)?);
            params.insert("function".into(), json!(f.id()));
            json!(finite_interval_monotone_bound(&f, m_b, m_a, m).map_err(|e| e.to_string())?)
        }
        "k" => {
            let b = push("b", need("b", args.b)?);
            let m = push("m", need("m", args.m)?);
            let p = push("p", need("p", args.p)?);
            let q = push("q", need("q", args.q)?);
            let r = push("r", need("r", args.r)?);
            json!(furuta_k(b, m, p, q, r).map_err(|e| e.to_string())?)
        }
        "thm41" => {
            let norm_b = push("normB", need("normB", args.norm_b)?);
            let m = push("m", need("m", args.m)?);
            let m_a = push("mA", need("mA", args.m_a)?);
            let p = push("p", need("p", args.p)?);
            let q = push("q", need("q", args.q)?);
            let r = push("r", need("r", args.r)?);
            let exps = FurutaExponents::new(p, q, r).map_err(|e| e.to_string())?;
            json!(theorem41_bound(norm_b, m, &exps, m_a).map_err(|e| e.to_string())?)
        }
        "thm42" => {
            let m = push("m", need("m", args.m)?);
            let m_a = push("mA", need("mA", args.m_a)?);
            let r = push("r", need("r", args.r)?);
            json!(theorem42_bound(m, m_a, r).map_err(|e| e.to_string())?)
        }
        "cor43" => {
            let norm_a = push("normA", need("normA", args.norm_a)?);
            let m = push("m", need("m", args.m)?);
            let m_a = push("mA", need("mA", args.m_a)?);
            let p = push("p", need("p", args.p)?);
            let q = push("q", need("q", args.q)?);
            let r = push("r", need("r", args.r)?);
            let exps = FurutaExponents::new(p, q, r).map_err(|e| e.to_string())?;
            json!(corollary43_bound(norm_a, m, m_a, &exps).map_err(|e| e.to_string())?)
        }
        other => {
            return Err(format!(
                "unknown bound '{other}' (expected thmA, thmAlog, thmB, thmC, lemma31, key, \
                 thm33, k, thm41, thm42, cor43)"
            ))
        }
    };

    let output = json!({ "bound": args.id, "params": Value::Object(params), "value": value });
    println!("{output}");
    Ok(EXIT_OK)
}

fn parse_grid(text: &str, name: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("--{name} must be lo:hi:step, got '{text}'"));
    }
    let nums: Result<Vec<f64>, _> = parts.iter().map(|x| x.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|_| format!("--{name} must be numeric lo:hi:step, got '{text}'"))?;
    GridRange::new(nums[0], nums[1], nums[2]).map_err(|e| e.to_string())
}

pub fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let config = SweepConfig {
        p: parse_grid(&args.p, "p")?,
        q: parse_grid(&args.q, "q")?,
        r: parse_grid(&args.r, "r")?,
        dim: args.dim,
        trials: args.trials,
        seed: seed_or_env(args.seed)?,
        tol_scale: args.tol_scale.unwrap_or(opilab::verify::DEFAULT_TOL_SCALE),
    };
    let rows = run_sweep(&config).map_err(|e| e.to_string())?;
    let csv = sweep_to_csv(&rows);
    match args.out {
        Some(path) => {
            fs::write(&path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("{} cells -> {}", rows.len(), path.display());
        }
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

pub fn cmd_certify(args: CertifyArgs) -> CmdResult {
    let f = load_function_spec(&args.spec)?;
    if !(args.lo < args.hi) {
        return Err(format!(
            "certification interval needs lo < hi, got [{}, {}]",
            args.lo, args.hi
        ));
    }
    let interval = Interval::open(args.lo, args.hi);
    let verdict = certify_monotone(&f, &interval, args.trials, args.points, seed_or_env(args.seed)?)
        .map_err(|e| e.to_string())?;
    let mut payload = serde_json::to_value(&verdict).expect("verdict serializes");
    payload
        .as_object_mut()
        .expect("verdict is an object")
        .insert("function".into(), json!(f.id()));
    println!("{payload}");
    Ok(match verdict {
        CertifyVerdict::Accept { .. } => EXIT_OK,
        CertifyVerdict::Reject { .. } => EXIT_FAIL,
    })
}
