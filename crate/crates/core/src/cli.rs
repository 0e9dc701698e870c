//! Command-line front end.
//!
//! Every artifact starts with the fully resolved configuration: JSON
//! artifacts carry it under `"config"`, CSV artifacts on a leading
//! `# {...}` line. A one-line summary goes to stderr. Exit codes: 0 on
//! success, 2 on bad input, 3 on a failed mathematical precondition.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cocycle::{theta_pairs, theta_positive, validate};
use crate::error::{Error, Result};
use crate::io::{read_cocycle, read_reduced, reduced_to_json, tail_to_csv};
use crate::irreducibility::{certify_irreducible, SampleParams};
use crate::linalg::DEFAULT_RANK_TOL;
use crate::lyapunov::{spectrum_qr_with_tol, top_exponent_mc, LyapunovEstimate, McParams};
use crate::mc::with_workers;
use crate::oracles::{
    rank_one_exact_l1, rotation_alpha_scan, rotation_series_l1, rotation_stationary_check, Angle,
};
use crate::reduction::{intertwining_residual, norm_ratio_study, reduce};
use crate::stats::{
    deviation_tail, fit_ldt_rate, holder_probe, pilot_reference, uniform_ldt_probe, HolderPath, TailParams,
};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug, Serialize)]
#[command(name = "cocyclab", version, about = "Lyapunov exponents of random linear cocycles")]
pub struct Cli {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Word length.
    #[arg(short = 'n', long = "length", global = true, default_value_t = 2000)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Grids {
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
    pub n_grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.15,0.2,0.3")]
    pub eps_grid: Vec<f64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Structural report: shapes, probabilities, ranks.
    Validate { input: PathBuf },
    /// Monte Carlo top exponent.
    Lyapunov { input: PathBuf },
    /// First exponents by QR deflation.
    Spectrum {
        input: PathBuf,
        #[arg(short = 'i', long)]
        i_max: Option<usize>,
    },
    /// Θ_k = min ‖∧_k(A_i A_j)‖.
    Theta {
        input: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Reduction to an invertible Markov cocycle.
    Reduce {
        input: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Semi-conjugacy residuals of a stored reduction.
    CheckReduction {
        input: PathBuf,
        reduced: PathBuf,
        #[arg(long, default_value_t = 100)]
        words: usize,
        #[arg(long, default_value_t = 50)]
        max_len: usize,
    },
    /// Irreducibility certificate or reducing family for ∧_i.
    Irreducible {
        input: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        /// Exterior power; all of 1..=k when absent.
        #[arg(short = 'i', long)]
        power: Option<usize>,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Deviation tail P̂_n(ε) and its rate fit.
    Ldt {
        input: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        grids: Grids,
        /// Reference exponent; a 10x longer pilot run when absent.
        #[arg(long, allow_hyphen_values = true)]
        l_ref: Option<f64>,
    },
    /// Worst LDT constants over perturbed neighbours.
    LdtUniform {
        input: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        #[serde(flatten)]
        grids: Grids,
    },
    /// Modulus of continuity of L̂₁ along (I+δG)A(I+δH).
    Holder {
        input: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.001,0.002,0.004,0.008,0.016")]
        deltas: Vec<f64>,
        /// Seed of the path directions; defaults to --seed.
        #[arg(long)]
        direction_seed: Option<u64>,
    },
    /// Projection/rotation family: series oracle, stationary check, scan.
    Rotation {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha_pi")]
        alpha: Option<f64>,
        /// α = π·p/q.
        #[arg(long)]
        alpha_pi: Option<String>,
        #[arg(long)]
        series: bool,
        #[arg(short = 'J', default_value_t = 64)]
        j_max: usize,
        #[arg(long)]
        stationary: bool,
        #[arg(long)]
        scan: bool,
        /// Scan angles in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<f64>,
        /// Scan angles as p/q multiples of π.
        #[arg(long, value_delimiter = ',')]
        grid_pi: Vec<String>,
    },
    /// Closed-form L₁ of a rank-one family against Monte Carlo.
    Rank1Oracle { input: PathBuf },
}

/// Parses `argv` (program name first) and runs; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let workers = cli.common.workers;
    let result = with_workers(workers, || dispatch(&cli));
    match result.and_then(|(artifact, summary)| {
        match &cli.common.output {
            Some(path) => std::fs::write(path, &artifact)?,
            None => out.write_all(artifact.as_bytes())?,
        }
        Ok(summary)
    }) {
        Ok(summary) => {
            let _ = writeln!(err, "{summary}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) => EXIT_PRECONDITION,
        _ => EXIT_INPUT,
    }
}

type Artifact = (String, String);

fn config(cli: &Cli, extra: Value) -> Value {
    let mut v = serde_json::to_value(cli).expect("config serializes");
    v["version"] = json!(env!("CARGO_PKG_VERSION"));
    if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    v
}

fn json_artifact(cli: &Cli, extra: Value, result: impl Serialize) -> Result<String> {
    let doc = json!({ "config": config(cli, extra), "result": result });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

fn csv_cell(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_artifact(cli: &Cli, extra: Value, header: &str, rows: Vec<Vec<String>>) -> String {
    let mut s = format!("# {}\n{header}\n", config(cli, extra));
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

fn json_only(cli: &Cli, what: &str) -> Result<()> {
    if cli.common.format == Format::Csv {
        return Err(Error::Input(format!("{what} has no CSV form; use --format json")));
    }
    Ok(())
}

fn mc(cli: &Cli) -> McParams {
    McParams::new(cli.common.n, cli.common.samples, cli.common.seed)
}

fn tail_params(cli: &Cli, g: &Grids) -> TailParams {
    TailParams {
        n_grid: g.n_grid.clone(),
        eps_grid: g.eps_grid.clone(),
        samples: cli.common.samples,
        seed: cli.common.seed,
    }
}

fn estimate_artifact(cli: &Cli, est: &LyapunovEstimate) -> Result<String> {
    match cli.common.format {
        Format::Json => json_artifact(cli, json!({}), est),
        Format::Csv => {
            let rows = (0..est.values.len())
                .map(|j| {
                    vec![
                        (j + 1).to_string(),
                        csv_cell(est.values[j]),
                        csv_cell(est.stderr[j]),
                        csv_cell(est.neg_inf_fraction[j]),
                    ]
                })
                .collect();
            Ok(csv_artifact(cli, json!({}), "index,value,stderr,neg_inf_fraction", rows))
        }
    }
}

fn fmt_estimate(est: &LyapunovEstimate) -> String {
    est.values
        .iter()
        .zip(&est.stderr)
        .map(|(v, s)| if v.is_finite() { format!("{v:.6} ± {s:.1e}") } else { "-inf".into() })
        .collect::<Vec<_>>()
        .join(", ")
}

fn dispatch(cli: &Cli) -> Result<Artifact> {
    let tol = cli.common.rank_tol;
    match &cli.command {
        Command::Validate { input } => {
            json_only(cli, "validate")?;
            let c = read_cocycle(input)?;
            let r = validate(&c, tol);
            let summary = format!(
                "{}x{} cocycle, {} symbols, ranks {:?}, {} probability defects",
                r.dim,
                r.dim,
                r.symbols,
                r.ranks,
                r.prob_defects.len()
            );
            Ok((json_artifact(cli, json!({}), &r)?, summary))
        }
        Command::Lyapunov { input } => {
            let c = read_cocycle(input)?;
            let est = top_exponent_mc(&c, &mc(cli))?;
            let summary = format!("L1 = {} (zero products {:.3})", fmt_estimate(&est), est.zero_product_fraction);
            Ok((estimate_artifact(cli, &est)?, summary))
        }
        Command::Spectrum { input, i_max } => {
            let c = read_cocycle(input)?;
            let est = spectrum_qr_with_tol(&c, i_max.unwrap_or(c.dim()), &mc(cli), tol)?;
            Ok((estimate_artifact(cli, &est)?, format!("spectrum: {}", fmt_estimate(&est))))
        }
        Command::Theta { input, k } => {
            json_only(cli, "theta")?;
            let c = read_cocycle(input)?;
            let pairs = theta_pairs(&c, *k)?;
            let theta = pairs.iter().flatten().copied().fold(f64::INFINITY, f64::min);
            let positive = theta_positive(&c, *k, tol)?;
            let result = json!({ "k": k, "theta": theta, "positive": positive, "pairs": pairs });
            Ok((json_artifact(cli, json!({}), result)?, format!("theta_{k} = {theta:.6e} (positive: {positive})")))
        }
        Command::Reduce { input, k } => {
            json_only(cli, "reduce")?;
            let c = read_cocycle(input)?;
            let r = reduce(&c, *k, tol)?;
            let mut doc: Value = serde_json::from_str(&reduced_to_json(&r))?;
            doc["config"] = config(cli, json!({}));
            let summary = format!(
                "reduced {} symbols to rank {k}; intertwining residual {:.2e}",
                r.symbols(),
                intertwining_residual(&c, &r)
            );
            Ok((serde_json::to_string_pretty(&doc)? + "\n", summary))
        }
        Command::CheckReduction { input, reduced, words, max_len } => {
            json_only(cli, "check-reduction")?;
            let c = read_cocycle(input)?;
            let r = read_reduced(reduced, tol)?;
            if *max_len < 1 {
                return Err(Error::Input("--max-len must be at least 1".into()));
            }
            let study = norm_ratio_study(&c, &r, *words, &[*max_len], cli.common.seed)?;
            let inter = intertwining_residual(&c, &r);
            let summary = format!(
                "max semi-conjugacy residual {:.2e} over {words} words; intertwining {inter:.2e}",
                study.max_residual
            );
            let result = json!({
                "words": words,
                "max_residual": study.max_residual,
                "intertwining_residual": inter,
                "kappa": study.kappa,
                "norm_ratios": study,
            });
            Ok((json_artifact(cli, json!({}), result)?, summary))
        }
        Command::Irreducible { input, k, power, budget, max_len } => {
            json_only(cli, "irreducible")?;
            let c = read_cocycle(input)?;
            let r = reduce(&c, *k, tol)?;
            let p = SampleParams { budget: *budget, max_len: *max_len, seed: cli.common.seed };
            let powers: Vec<usize> = match power {
                Some(i) => vec![*i],
                None => (1..=*k).collect(),
            };
            let verdicts =
                powers.iter().map(|&i| certify_irreducible(&c, &r, i, &p)).collect::<Result<Vec<_>>>()?;
            let summary = verdicts
                .iter()
                .map(|v| format!("∧{}: {:?} ({}/{})", v.power, v.status, v.span_dim, v.full_dim))
                .collect::<Vec<_>>()
                .join("; ");
            Ok((json_artifact(cli, json!({}), &verdicts)?, summary))
        }
        Command::Ldt { input, grids, l_ref } => {
            let c = read_cocycle(input)?;
            let p = tail_params(cli, grids);
            let l = match l_ref {
                Some(x) => *x,
                None => pilot_reference(&c, &p)?,
            };
            if !l.is_finite() {
                return Err(Error::Precondition("reference exponent is -inf; tails are degenerate".into()));
            }
            let curve = deviation_tail(&c, l, &p)?;
            let fit = fit_ldt_rate(&curve);
            let summary = match (fit.c_hat, fit.big_c_hat) {
                (Some(cc), Some(bc)) => format!("L_ref = {l:.6}; fit C = {bc:.4}, c = {cc:.4}, usable = {}", fit.usable),
                _ => format!("L_ref = {l:.6}; fit refused: {}", fit.reason.clone().unwrap_or_default()),
            };
            let extra = json!({ "l_ref": l, "l_ref_source": if l_ref.is_some() { "given" } else { "pilot" } });
            let artifact = match cli.common.format {
                Format::Csv => tail_to_csv(&curve, &config(cli, extra)),
                Format::Json => json_artifact(cli, extra, json!({ "curve": curve, "fit": fit }))?,
            };
            Ok((artifact, summary))
        }
        Command::LdtUniform { input, k, radius, trials, grids } => {
            json_only(cli, "ldt-uniform")?;
            let c = read_cocycle(input)?;
            let s = uniform_ldt_probe(&c, *k, *radius, *trials, &tail_params(cli, grids))?;
            let summary = format!(
                "{} neighbours at radius {radius}: min c = {:?}, max C = {:?}, failed {:?}, rejected {}",
                trials, s.min_c_hat, s.max_big_c_hat, s.failed, s.rejected
            );
            Ok((json_artifact(cli, json!({}), &s)?, summary))
        }
        Command::Holder { input, k, deltas, direction_seed } => {
            let c = read_cocycle(input)?;
            let path = HolderPath::random(&c, direction_seed.unwrap_or(cli.common.seed));
            let rep = holder_probe(&c, *k, &path, deltas, &mc(cli))?;
            let summary = match &rep.fit {
                Some(f) => format!("alpha_hat = {:.4}, constant = {:.4e}, r2 = {:.4}", f.alpha_hat, f.constant, f.r2),
                None => format!("fit refused: {}", rep.reason.clone().unwrap_or_default()),
            };
            let artifact = match cli.common.format {
                Format::Json => json_artifact(cli, json!({}), &rep)?,
                Format::Csv => {
                    let rows = rep
                        .points
                        .iter()
                        .map(|q| vec![csv_cell(q.delta), csv_cell(q.phi), csv_cell(q.stderr)])
                        .collect();
                    csv_artifact(cli, json!({}), "delta,phi,stderr", rows)
                }
            };
            Ok((artifact, summary))
        }
        Command::Rotation { alpha, alpha_pi, series, j_max, stationary, scan, grid, grid_pi } => {
            rotation(cli, *alpha, alpha_pi.as_deref(), *series, *j_max, *stationary, *scan, grid, grid_pi)
        }
        Command::Rank1Oracle { input } => {
            json_only(cli, "rank1-oracle")?;
            let c = read_cocycle(input)?;
            let exact = rank_one_exact_l1(&c, tol)?;
            let est = top_exponent_mc(&c, &mc(cli))?;
            let diff = est.values[0] - exact;
            let within = if exact.is_finite() {
                diff.abs() <= 3.0 * est.stderr[0]
            } else {
                est.values[0] == f64::NEG_INFINITY
            };
            let summary = format!("exact L1 = {exact:.8}, Monte Carlo {}", fmt_estimate(&est));
            let result = json!({
                "exact": if exact.is_finite() { json!(exact) } else { json!("-inf") },
                "mc": est,
                "within_3_stderr": within,
            });
            Ok((json_artifact(cli, json!({}), result)?, summary))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rotation(
    cli: &Cli,
    alpha: Option<f64>,
    alpha_pi: Option<&str>,
    series: bool,
    j_max: usize,
    stationary: bool,
    scan: bool,
    grid: &[f64],
    grid_pi: &[String],
) -> Result<Artifact> {
    let angle = match (alpha, alpha_pi) {
        (Some(a), _) => Some(finite_angle(a)?),
        (None, Some(s)) => Some(s.parse::<Angle>()?),
        (None, None) => None,
    };
    let series = series || (!stationary && !scan);
    if (series || stationary) && angle.is_none() {
        return Err(Error::Input("--alpha or --alpha-pi is required for --series and --stationary".into()));
    }
    let mut result = serde_json::Map::new();
    let mut summary = Vec::new();
    if let Some(a) = angle {
        if series {
            let o = rotation_series_l1(a, j_max)?;
            summary.push(format!(
                "series({a}, J={j_max}) = {}{}",
                if o.neg_inf { "-inf".to_string() } else { format!("{:.12}", o.partial_sum) },
                if o.tail_unreliable { " (tail unreliable)" } else { "" }
            ));
            result.insert("neg_inf".into(), json!(o.neg_inf));
            result.insert("series".into(), serde_json::to_value(&o)?);
        }
        if stationary {
            let s = rotation_stationary_check(a, j_max)?;
            summary.push(format!("stationary residual {:.3e} (bound {:.3e})", s.residual, s.bound));
            result.insert("stationary".into(), serde_json::to_value(&s)?);
        }
    }
    if scan {
        let mut angles: Vec<Angle> = grid.iter().map(|&x| finite_angle(x)).collect::<Result<_>>()?;
        angles.extend(grid_pi.iter().map(|s| s.parse::<Angle>()).collect::<Result<Vec<_>>>()?);
        if angles.is_empty() {
            return Err(Error::Input("--scan needs --grid or --grid-pi".into()));
        }
        let rows = rotation_alpha_scan(&angles, j_max, &mc(cli))?;
        summary.push(format!("scanned {} angles", rows.len()));
        if cli.common.format == Format::Csv {
            if series || stationary {
                return Err(Error::Input("CSV output is only available for --scan alone".into()));
            }
            let body = rows
                .iter()
                .map(|r| {
                    vec![
                        csv_cell(r.alpha),
                        csv_cell(r.series),
                        r.neg_inf.to_string(),
                        r.tail_unreliable.to_string(),
                        csv_cell(r.min_abs_cos),
                        csv_cell(r.mc),
                        csv_cell(r.mc_stderr),
                        csv_cell(r.zero_product_fraction),
                    ]
                })
                .collect();
            let header = "alpha,series,neg_inf,tail_unreliable,min_abs_cos,mc,mc_stderr,zero_product_fraction";
            return Ok((csv_artifact(cli, json!({}), header, body), summary.join("; ")));
        }
        result.insert("scan".into(), serde_json::to_value(&rows)?);
    } else if cli.common.format == Format::Csv {
        return Err(Error::Input("CSV output is only available for --scan".into()));
    }
    Ok((json_artifact(cli, json!({}), Value::Object(result))?, summary.join("; ")))
}

fn finite_angle(x: f64) -> Result<Angle> {
    if x.is_finite() {
        Ok(Angle::Radians(x))
    } else {
        Err(Error::Input(format!("angle {x} is not finite")))
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
