use std::fmt::Write;

use iid_moments::limits::{convergence_table, correction as correction_for, CorrectionKind};
use iid_moments::oracle::{monte_carlo_moment, verify_equivalence_with, VerifyConfig};
use iid_moments::rational::{from_int, to_f64};
use iid_moments::{evaluate, moment_of_sum, Error, Mode, MomentAssignment, MomentProvider};
use serde_json::json;

use crate::{Format, Kind};

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Report to print on stdout before exiting (verification failures).
    pub stdout: Option<String>,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into(), stdout: None }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::UnknownDistribution(_) | Error::InvalidParameter(_) => {
                EXIT_USAGE
            }
            Error::Internal(_) => EXIT_INTERNAL,
            _ if e.is_domain() => EXIT_DOMAIN,
            _ => EXIT_INTERNAL,
        };
        Self { code, message: e.to_string(), stdout: None }
    }
}

type CmdResult = Result<String, CliError>;

fn parse_dist(spec: &str) -> Result<MomentProvider, CliError> {
    Ok(spec.parse::<MomentProvider>()?)
}

fn kind(k: Kind) -> CorrectionKind {
    match k {
        Kind::Clt => CorrectionKind::Clt,
        Kind::Lln => CorrectionKind::Lln,
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Clt => "clt",
        Kind::Lln => "lln",
    }
}

fn json_line(value: serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(&value).expect("json values serialize"))
}

pub fn expand(p: u32, symmetric: bool, format: Format) -> CmdResult {
    let mode = if symmetric { Mode::Symmetric } else { Mode::General };
    let poly = moment_of_sum(p, mode)?;
    Ok(match format {
        Format::Text => format!("{poly}\n"),
        Format::Json => {
            let mut value = serde_json::to_value(&poly).expect("json values serialize");
            value["mode"] = json!(if symmetric { "symmetric" } else { "general" });
            json_line(value)
        }
        Format::Csv => {
            let mut out = String::from("parts,degree,coefficient\n");
            for (part, np) in poly.terms() {
                let parts: Vec<String> = part.parts().iter().map(u32::to_string).collect();
                for (d, c) in np.terms().rev() {
                    writeln!(out, "{},{d},{c}", parts.join(" ")).unwrap();
                }
            }
            out
        }
    })
}

pub fn eval(p: u32, n: u64, dist: &str, format: Format) -> CmdResult {
    let provider = parse_dist(dist)?;
    let moments = MomentAssignment::from_provider(&provider, p)?;
    let value = evaluate(&moment_of_sum(p, Mode::General)?, n, &moments)?;
    let float = to_f64(&value);
    Ok(match format {
        Format::Text => format!("{value}\n~ {float} (float)\n"),
        Format::Json => json_line(json!({
            "p": p,
            "n": n,
            "dist": provider.to_string(),
            "exact": value.to_string(),
            "float": float,
        })),
        Format::Csv => format!("p,n,exact,float\n{p},{n},{value},{float}\n"),
    })
}

pub fn correction(k: Kind, p: u32, dist: &str, format: Format) -> CmdResult {
    let provider = parse_dist(dist)?;
    let moments = MomentAssignment::from_provider(&provider, p)?;
    let expansion = correction_for(kind(k), p, &moments)?;
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "kind: {}", kind_name(k)).unwrap();
            writeln!(out, "p: {p}").unwrap();
            writeln!(out, "dist: {provider}").unwrap();
            writeln!(out, "limit: {}", expansion.limit_term).unwrap();
            if expansion.coefficients.is_empty() {
                writeln!(out, "correction: 0").unwrap();
            }
            for (j, c) in &expansion.coefficients {
                let power = if *j == 1 { "1/n".to_string() } else { format!("1/n^{j}") };
                writeln!(out, "{power}: {c}").unwrap();
            }
            writeln!(out, "expansion: {expansion}").unwrap();
            out
        }
        Format::Json => json_line(expansion.to_json()),
        Format::Csv => {
            let mut out = String::from("power,coefficient\n");
            writeln!(out, "0,{}", expansion.limit_term).unwrap();
            for (j, c) in &expansion.coefficients {
                writeln!(out, "{j},{c}").unwrap();
            }
            out
        }
    })
}

/// Powers of two from 2 to 2^14.
pub fn default_schedule() -> Vec<u64> {
    (1..=14).map(|e| 1u64 << e).collect()
}

pub fn converge(
    k: Kind,
    p: u32,
    dist: &str,
    schedule: Option<Vec<u64>>,
    format: Format,
) -> CmdResult {
    let schedule = schedule.unwrap_or_else(default_schedule);
    if schedule.is_empty() || schedule[0] == 0 || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::usage("--schedule must be strictly increasing positive integers"));
    }
    let provider = parse_dist(dist)?;
    let moments = MomentAssignment::from_provider(&provider, p)?;
    let (expansion, rows) = convergence_table(kind(k), p, &moments, &schedule)?;
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "# {} p={p} dist={provider} limit={}", kind_name(k), expansion.limit_term)
                .unwrap();
            writeln!(out, "{:>8}  {:>24}  {:>24}  {:>14}", "n", "normalized", "residual", "residual~")
                .unwrap();
            for row in &rows {
                writeln!(
                    out,
                    "{:>8}  {:>24}  {:>24}  {:>14}",
                    row.n,
                    row.normalized.to_string(),
                    row.residual.to_string(),
                    format!("{:e}", to_f64(&row.residual)),
                )
                .unwrap();
            }
            out
        }
        Format::Json => json_line(json!({
            "kind": kind_name(k),
            "p": p,
            "dist": provider.to_string(),
            "limit": expansion.limit_term.to_string(),
            "rows": rows.iter().map(|r| json!({
                "n": r.n,
                "normalized": r.normalized.to_string(),
                "residual": r.residual.to_string(),
                "normalized_float": to_f64(&r.normalized),
                "residual_float": to_f64(&r.residual),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("n,normalized,residual,normalized_float,residual_float\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n,
                    r.normalized,
                    r.residual,
                    to_f64(&r.normalized),
                    to_f64(&r.residual)
                )
                .unwrap();
            }
            out
        }
    })
}

pub fn verify(
    p_max: u32,
    n_max: u32,
    trials: u32,
    seed: u64,
    inject_fault: bool,
    format: Format,
) -> CmdResult {
    if p_max == 0 || n_max == 0 || trials == 0 {
        return Err(CliError::usage("--p-max, --n-max and --trials must be positive"));
    }
    let config = VerifyConfig { p_max, n_max, trials, seed };
    let report = verify_equivalence_with(config, |poly, n, moments| {
        let value = evaluate(poly, n, moments)?;
        if inject_fault && poly.order() == p_max && n == n_max as u64 {
            Ok(value + from_int(1))
        } else {
            Ok(value)
        }
    })?;
    let moments_text = |m: &[(u32, String)]| {
        m.iter().map(|(k, v)| format!("u{k}={v}")).collect::<Vec<_>>().join(" ")
    };
    let status = if report.passed() { "PASS" } else { "FAIL" };
    let out = match format {
        Format::Text => {
            let mut out = String::new();
            if report.passed() {
                writeln!(
                    out,
                    "PASS: {} checks (p <= {p_max}, n <= {n_max}, {trials} trials, seed {seed})",
                    report.checks
                )
                .unwrap();
            } else {
                writeln!(out, "FAIL: {} of {} checks disagree", report.failures.len(), report.checks)
                    .unwrap();
                for f in &report.failures {
                    writeln!(
                        out,
                        "  p={} n={} trial={} moments=[{}] symbolic={} brute_force={}",
                        f.p,
                        f.n,
                        f.trial,
                        moments_text(&f.moments),
                        f.symbolic,
                        f.brute_force
                    )
                    .unwrap();
                }
            }
            out
        }
        Format::Json => json_line(json!({
            "status": status.to_lowercase(),
            "checks": report.checks,
            "p_max": p_max,
            "n_max": n_max,
            "trials": trials,
            "seed": seed,
            "failures": report.failures.iter().map(|f| json!({
                "p": f.p,
                "n": f.n,
                "trial": f.trial,
                "moments": f.moments.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                "symbolic": f.symbolic,
                "brute_force": f.brute_force,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("p,n,trial,moments,symbolic,brute_force\n");
            for f in &report.failures {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    f.p,
                    f.n,
                    f.trial,
                    moments_text(&f.moments),
                    f.symbolic,
                    f.brute_force
                )
                .unwrap();
            }
            out
        }
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(CliError {
            code: EXIT_VERIFY,
            message: format!("{} of {} checks failed", report.failures.len(), report.checks),
            stdout: Some(out),
        })
    }
}

pub fn monte_carlo(
    p: u32,
    n: u32,
    dist: &str,
    samples: u64,
    seed: u64,
    z: f64,
    format: Format,
) -> CmdResult {
    let provider = parse_dist(dist)?;
    let moments = MomentAssignment::from_provider(&provider, p)?;
    let exact = evaluate(&moment_of_sum(p, Mode::General)?, n as u64, &moments)?;
    let exact_f = to_f64(&exact);
    let est = monte_carlo_moment(&provider, n, p, samples, seed)?;
    let score = est.z_score(exact_f);
    let ok = est.within(exact_f, z);
    let out = match format {
        Format::Text => format!(
            "exact: {exact}\nestimate: {} +/- {} ({} samples, seed {})\nz: {score}\n{}\n",
            est.mean,
            est.std_error,
            est.samples,
            est.seed,
            if ok { "PASS" } else { "FAIL" }
        ),
        Format::Json => json_line(json!({
            "p": p,
            "n": n,
            "dist": provider.to_string(),
            "exact": exact.to_string(),
            "exact_float": exact_f,
            "mean": est.mean,
            "std_error": est.std_error,
            "samples": est.samples,
            "seed": est.seed,
            "z": score,
            "pass": ok,
        })),
        Format::Csv => format!(
            "p,n,exact,mean,std_error,samples,seed,z\n{p},{n},{exact},{},{},{},{},{score}\n",
            est.mean, est.std_error, est.samples, est.seed
        ),
    };
    if ok {
        Ok(out)
    } else {
        Err(CliError {
            code: EXIT_VERIFY,
            message: format!("estimate is {score:.2} standard errors from the exact value"),
            stdout: Some(out),
        })
    }
}
