//! Command line surface for the function-field calculus library:
//! constants, basis families, representation conversions, operators,
//! Taylor recovery, integration, Carlitz special functions, and the full
//! verification sweep.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fqcalc::basis::{
    e_binomial, f_basis, g_big, g_small, h_poly, tau_product, HBasis, TPoly,
};
use fqcalc::calculus::{integrate_both, volkenborn_closed, volkenborn_limit, IntegralResult};
use fqcalc::constants::CarlitzConstants;
use fqcalc::error::Error;
use fqcalc::field::FqContext;
use fqcalc::fqlinear::{
    dk_apply, dk_norm, taylor_recover, CarlitzExpansion, QExpansion, Rep, ValueTable,
};
use fqcalc::series::{parse_laurent, parse_poly, Laurent, LaurentRepr};
use fqcalc::specialfn::{
    carlitz_module_poly, carlitz_module_series, exp_c, goss_integral, log_c,
    log_functional_equation, IdentityReport,
};
use fqcalc::verify::{run_suite, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "fqcalc",
    about = "Exact F_q-linear calculus over the Laurent series field F_q((x))",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct FieldOpts {
    /// Field size q = p^gamma (prime power), e.g. 2, 3, 4, 9
    #[arg(long, global = true)]
    q: Option<u32>,
    /// Characteristic, combined with --gamma (alternative to --q)
    #[arg(long, global = true, requires = "gamma", conflicts_with = "q")]
    p: Option<u32>,
    /// Extension degree, combined with --p
    #[arg(long, global = true, requires = "p")]
    gamma: Option<u32>,
    /// Monic irreducible modulus over F_p for gamma > 1, e.g. "u^2+u+1"
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Working precision: series are tracked modulo x^precision
    #[arg(long, global = true, default_value_t = 64)]
    precision: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized verification corpora
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget for brute-force products and sums
    #[arg(long, global = true, default_value_t = 65536)]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Carlitz arithmetic constant: a bracket, D_i, L_i or Gamma_j
    Constants {
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long, value_parser = ["bracket", "d", "l", "gamma"])]
        kind: String,
        /// Index (i for bracket/D/L, j for Gamma)
        #[arg(long = "i", visible_alias = "j")]
        index: u64,
    },
    /// Print a basis family member and optionally its h-basis expansion
    Basis {
        #[command(flatten)]
        field: FieldOpts,
        /// One of e, f, G, g, h, tau (case-sensitive: G and g differ)
        #[arg(long, value_parser = ["e", "f", "G", "g", "h", "tau"])]
        family: String,
        #[arg(long)]
        index: u64,
        /// Also print the expansion over the orthonormal h-basis
        #[arg(long)]
        h_expansion: bool,
    },
    /// Convert between the three representations of an F_q-linear function
    Expand {
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long, value_enum)]
        from: RepKind,
        #[arg(long, value_enum)]
        to: RepKind,
        /// Comma-separated coefficients (or table values), e.g. "1, x^2+x, 0"
        #[arg(long)]
        coeffs: String,
        /// Length of a produced value table
        #[arg(long, default_value_t = 8)]
        table_len: usize,
    },
    /// Apply an operator: the difference iterate, the ladder maps, or the
    /// normalized difference quotient
    Apply {
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long, value_enum)]
        op: OpKind,
        /// Iteration depth for delta and dk
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = CoeffRep::Carlitz)]
        rep: CoeffRep,
        #[arg(long)]
        coeffs: String,
        /// Evaluation point for dk (a series in O, nonzero)
        #[arg(long)]
        at: Option<String>,
    },
    /// Taylor coefficient recovery sweep
    Recover {
        #[command(flatten)]
        field: FieldOpts,
        /// Raw monomial coefficients of the expansion
        #[arg(long)]
        coeffs: String,
        /// Interpret the coefficients as H-normalized instead of raw
        #[arg(long)]
        h_normalized: bool,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m_max: usize,
    },
    /// Volkenborn-type integral of an F_q-linear function
    Integrate {
        #[command(flatten)]
        field: FieldOpts,
        /// Integrate the basis polynomial f_k
        #[arg(long, conflicts_with = "carlitz_coeffs")]
        basis_index: Option<usize>,
        /// Or an arbitrary Carlitz expansion, comma-separated
        #[arg(long)]
        carlitz_coeffs: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Trace depth for the limit method (default scales with precision)
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Carlitz module action, logarithm, exponential and their identities
    Carlitz {
        #[command(flatten)]
        field: FieldOpts,
        #[arg(long = "fn", value_parser = ["module", "log", "exp", "goss", "funceq"])]
        func: String,
        /// Module argument s (polynomial or series in O)
        #[arg(long)]
        s: Option<String>,
        /// Twist polynomial a for goss/funceq
        #[arg(long)]
        a: Option<String>,
        /// Point z with |z| < 1
        #[arg(long)]
        z: Option<String>,
    },
    /// Run the named verification checks applicable at this q
    Verify {
        #[command(flatten)]
        field: FieldOpts,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepKind {
    Qexp,
    Carlitz,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoeffRep {
    Qexp,
    Carlitz,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Delta,
    Aplus,
    Aminus,
    Dk,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Limit,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(RunError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Op(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum RunError {
    Config(String),
    Op(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> RunError {
        match e {
            Error::NotPrime(_)
            | Error::UnsupportedField(_)
            | Error::ReducibleModulus { .. }
            | Error::InvalidModulus(_)
            | Error::Parse(_) => RunError::Config(e.to_string()),
            other => RunError::Op(other.to_string()),
        }
    }
}

type RunResult = std::result::Result<ExitCode, RunError>;

fn build_ctx(field: &FieldOpts) -> std::result::Result<FqContext, RunError> {
    match (field.q, field.p, field.gamma) {
        (Some(q), None, None) => {
            if field.modulus.is_some() {
                let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
                let mut gamma = 0;
                let mut n = q;
                while n > 1 && n % p == 0 {
                    n /= p;
                    gamma += 1;
                }
                let m = parse_modulus(p, field.modulus.as_deref())?;
                Ok(FqContext::new(p, gamma, m)?)
            } else {
                Ok(FqContext::with_q(q)?)
            }
        }
        (None, Some(p), Some(gamma)) => {
            let m = parse_modulus(p, field.modulus.as_deref())?;
            Ok(FqContext::new(p, gamma, m)?)
        }
        _ => Err(RunError::Config(
            "specify the field with --q or with --p and --gamma".into(),
        )),
    }
}

/// Modulus text like "u^2+u+1" into F_p coefficients, low power first.
fn parse_modulus(
    p: u32,
    text: Option<&str>,
) -> std::result::Result<Option<Vec<u8>>, RunError> {
    let Some(text) = text else { return Ok(None) };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<i64> = Vec::new();
    for term in compact.replace('-', "+-").split('+') {
        if term.is_empty() {
            continue;
        }
        let (sign, term) = match term.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, term),
        };
        let (c, e) = if let Some(rest) = term.strip_suffix("u") {
            (rest, 1usize)
        } else if let Some(pos) = term.find("u^") {
            let e: usize = term[pos + 2..]
                .parse()
                .map_err(|_| RunError::Config(format!("bad modulus term '{term}'")))?;
            (&term[..pos], e)
        } else {
            (term, 0usize)
        };
        let c: i64 = if c.is_empty() {
            1
        } else {
            c.parse()
                .map_err(|_| RunError::Config(format!("bad modulus coefficient '{c}'")))?
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] += sign * c;
    }
    Ok(Some(
        coeffs
            .into_iter()
            .map(|c| c.rem_euclid(p as i64) as u8)
            .collect(),
    ))
}

fn parse_series_list(
    ctx: &FqContext,
    text: &str,
) -> std::result::Result<Vec<Laurent>, RunError> {
    text.split(',')
        .map(|part| parse_laurent(ctx, part.trim()).map_err(RunError::from))
        .collect()
}

fn repr_list(coeffs: &[Laurent]) -> Vec<LaurentRepr> {
    coeffs.iter().map(|c| c.to_repr()).collect()
}

fn text_list(coeffs: &[Laurent]) -> Vec<String> {
    coeffs.iter().map(|c| c.to_string()).collect()
}

fn emit(format: Format, json: serde_json::Value, text: String) -> ExitCode {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json).unwrap()),
        Format::Text => println!("{text}"),
    }
    ExitCode::SUCCESS
}

#[derive(Serialize)]
struct SideOut {
    label: String,
    value: LaurentRepr,
    text: String,
}

fn identity_json(kind: &str, rep: &IdentityReport) -> serde_json::Value {
    let sides: Vec<SideOut> = rep
        .sides
        .iter()
        .map(|(label, v)| SideOut {
            label: label.clone(),
            value: v.to_repr(),
            text: v.to_string(),
        })
        .collect();
    json!({
        "schema": 1,
        "fn": kind,
        "sides": sides,
        "agree": rep.agree,
        "vacuous": rep.vacuous,
        "detail": rep.detail,
    })
}

fn identity_text(kind: &str, rep: &IdentityReport) -> String {
    let mut out = vec![format!(
        "{kind}: {}{}",
        if rep.agree { "agree" } else { "DISAGREE" },
        if rep.vacuous { " (vacuous)" } else { "" }
    )];
    for (label, v) in &rep.sides {
        out.push(format!("  {label} = {v}"));
    }
    out.push(format!("  {}", rep.detail));
    out.join("\n")
}

fn integral_json(r: &IntegralResult) -> serde_json::Value {
    json!({
        "value": r.value.to_repr(),
        "text": r.value.to_string(),
        "trace": r.trace.as_ref().map(|t| repr_list(t)),
        "stabilized_at": r.stabilized_at,
    })
}

fn run(cli: Cli) -> RunResult {
    match cli.cmd {
        Command::Constants { field, kind, index } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let value = match kind.as_str() {
                "bracket" => consts.bracket(index as usize)?,
                "d" => consts.d(index as usize)?,
                "l" => consts.l(index as usize)?,
                "gamma" => consts.gamma(index)?,
                _ => unreachable!(),
            };
            let series = Laurent::from_poly(&value);
            Ok(emit(
                field.format,
                json!({
                    "schema": 1,
                    "q": ctx.q(),
                    "kind": kind,
                    "index": index,
                    "value": value.to_string(),
                    "series": series.to_repr(),
                }),
                value.to_string(),
            ))
        }
        Command::Basis { field, family, index, h_expansion } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let prec = field.precision;
            let member: TPoly = match family.as_str() {
                "e" => e_binomial(&consts, index as usize)?.to_tpoly(),
                "f" => f_basis(&consts, index as usize, prec)?.to_tpoly(),
                "G" => g_big(&consts, index)?,
                "g" => g_small(&consts, index)?,
                "h" => h_poly(&consts, index, prec)?,
                "tau" => tau_product(&consts, index as usize, prec)?,
                _ => unreachable!(),
            };
            let mut value = json!({
                "schema": 1,
                "q": ctx.q(),
                "family": family,
                "index": index,
                "text": member.to_string(),
                "coeffs": repr_list(member.coeffs()),
            });
            let mut text = format!("{member}");
            if h_expansion {
                let deg = member.degree().unwrap_or(0) as u64;
                let hb = HBasis::new(&consts, deg)?;
                let coeffs = hb.to_h(&member)?;
                value["h_expansion"] = json!(repr_list(&coeffs));
                text.push_str("\nh-basis expansion:");
                for (j, c) in coeffs.iter().enumerate() {
                    if !c.is_exact_zero() && !c.is_zero_within_prec() {
                        text.push_str(&format!("\n  h_{j}: {c}"));
                    }
                }
            }
            Ok(emit(field.format, value, text))
        }
        Command::Expand { field, from, to, coeffs, table_len } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let prec = field.precision;
            let parsed = parse_series_list(&ctx, &coeffs)?;
            let carlitz: CarlitzExpansion = match from {
                RepKind::Qexp => QExpansion::new(&ctx, parsed).to_carlitz(&consts)?,
                RepKind::Carlitz => CarlitzExpansion::new(&ctx, parsed),
                RepKind::Table => ValueTable::new(&ctx, parsed).to_carlitz(&consts, prec)?,
            };
            let out: Vec<Laurent> = match to {
                RepKind::Qexp => carlitz.to_qexp(&consts, prec)?.coeffs().to_vec(),
                RepKind::Carlitz => carlitz.coeffs().to_vec(),
                RepKind::Table => {
                    carlitz.to_table(&consts, table_len, prec)?.values().to_vec()
                }
            };
            let label = |k: RepKind| match k {
                RepKind::Qexp => "qexp",
                RepKind::Carlitz => "carlitz",
                RepKind::Table => "table",
            };
            Ok(emit(
                field.format,
                json!({
                    "schema": 1,
                    "from": label(from),
                    "to": label(to),
                    "output": repr_list(&out),
                    "text": text_list(&out),
                }),
                text_list(&out).join(", "),
            ))
        }
        Command::Apply { field, op, k, rep, coeffs, at } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let prec = field.precision;
            let parsed = parse_series_list(&ctx, &coeffs)?;
            match op {
                OpKind::Dk => {
                    let carlitz = match rep {
                        CoeffRep::Carlitz => CarlitzExpansion::new(&ctx, parsed),
                        CoeffRep::Qexp => QExpansion::new(&ctx, parsed).to_carlitz(&consts)?,
                    };
                    let norm = dk_norm(&carlitz, k)?;
                    let mut value = json!({
                        "schema": 1,
                        "op": "dk",
                        "k": k,
                        "norm": norm.to_string(),
                    });
                    let mut text = format!("|D^{k} u| sup norm: {norm}");
                    if let Some(at) = at {
                        let t = parse_laurent(&ctx, &at)?;
                        let v = dk_apply(&consts, &Rep::Carlitz(carlitz), k, &t, prec)?;
                        value["at"] = json!(at);
                        value["value"] = json!(v.to_repr());
                        text.push_str(&format!("\nvalue at {t}: {v}"));
                    }
                    Ok(emit(field.format, value, text))
                }
                _ => {
                    let out: Vec<Laurent> = match (rep, op) {
                        (CoeffRep::Carlitz, OpKind::Delta) => {
                            let q = CarlitzExpansion::new(&ctx, parsed)
                                .to_qexp(&consts, prec)?
                                .delta_k(&consts, k)?;
                            q.to_carlitz(&consts)?.coeffs().to_vec()
                        }
                        (CoeffRep::Qexp, OpKind::Delta) => QExpansion::new(&ctx, parsed)
                            .delta_k(&consts, k)?
                            .coeffs()
                            .to_vec(),
                        (CoeffRep::Carlitz, OpKind::Aplus) => {
                            CarlitzExpansion::new(&ctx, parsed)
                                .a_plus(&consts)?
                                .coeffs()
                                .to_vec()
                        }
                        (CoeffRep::Qexp, OpKind::Aplus) => {
                            QExpansion::new(&ctx, parsed).a_plus().coeffs().to_vec()
                        }
                        (CoeffRep::Carlitz, OpKind::Aminus) => {
                            CarlitzExpansion::new(&ctx, parsed)
                                .a_minus()?
                                .coeffs()
                                .to_vec()
                        }
                        (CoeffRep::Qexp, OpKind::Aminus) => QExpansion::new(&ctx, parsed)
                            .a_minus(&consts)?
                            .coeffs()
                            .to_vec(),
                        (_, OpKind::Dk) => unreachable!(),
                    };
                    let opname = match op {
                        OpKind::Delta => "delta",
                        OpKind::Aplus => "aplus",
                        OpKind::Aminus => "aminus",
                        OpKind::Dk => unreachable!(),
                    };
                    Ok(emit(
                        field.format,
                        json!({
                            "schema": 1,
                            "op": opname,
                            "k": k,
                            "coeffs": repr_list(&out),
                            "text": text_list(&out),
                        }),
                        text_list(&out).join(", "),
                    ))
                }
            }
        }
        Command::Recover { field, coeffs, h_normalized, n, m_max } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let parsed = parse_series_list(&ctx, &coeffs)?;
            let u = if h_normalized {
                QExpansion::from_h_coefficients(&consts, &parsed, field.precision)?
            } else {
                QExpansion::new(&ctx, parsed)
            };
            let rep = taylor_recover(&u, n, m_max, field.precision)?;
            let text = {
                let mut lines = vec![format!("Taylor recovery at n = {n}:")];
                for (i, qt) in rep.quotients.iter().enumerate() {
                    lines.push(format!("  m = {}: {qt}", i + 1));
                }
                match (&rep.stabilized_at, &rep.stabilized) {
                    (Some(m), Some(v)) => lines.push(format!("stabilized at m = {m}: {v}")),
                    _ => lines.push("no stabilization within the sweep".into()),
                }
                lines.join("\n")
            };
            Ok(emit(
                field.format,
                json!({
                    "schema": 1,
                    "n": n,
                    "quotients": repr_list(&rep.quotients),
                    "stabilized_at": rep.stabilized_at,
                    "stabilized": rep.stabilized.as_ref().map(|v| v.to_repr()),
                }),
                text,
            ))
        }
        Command::Integrate { field, basis_index, carlitz_coeffs, method, n_max } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let prec = field.precision;
            let f = match (basis_index, carlitz_coeffs) {
                (Some(k), None) => CarlitzExpansion::basis_vector(&ctx, k),
                (None, Some(text)) => {
                    CarlitzExpansion::new(&ctx, parse_series_list(&ctx, &text)?)
                }
                _ => {
                    return Err(RunError::Config(
                        "give exactly one of --basis-index or --carlitz-coeffs".into(),
                    ))
                }
            };
            let depth = n_max.unwrap_or(2 * prec as usize + 20);
            let (value, text) = match method {
                Method::Closed => {
                    let r = volkenborn_closed(&consts, &f, prec)?;
                    (
                        json!({"schema": 1, "method": "closed", "closed": integral_json(&r)}),
                        format!("closed form: {}", r.value),
                    )
                }
                Method::Limit => {
                    let r = volkenborn_limit(&consts, &Rep::Carlitz(f), depth, prec)?;
                    (
                        json!({"schema": 1, "method": "limit", "limit": integral_json(&r)}),
                        format!(
                            "limit: {} (stabilized at n = {:?})",
                            r.value, r.stabilized_at
                        ),
                    )
                }
                Method::Both => {
                    let (closed, limit, agree) = integrate_both(&consts, &f, depth, prec)?;
                    (
                        json!({
                            "schema": 1,
                            "method": "both",
                            "closed": integral_json(&closed),
                            "limit": integral_json(&limit),
                            "agreement": agree,
                        }),
                        format!(
                            "closed form: {}\nlimit:       {} (stabilized at n = {:?})\nagreement: {agree}",
                            closed.value, limit.value, limit.stabilized_at
                        ),
                    )
                }
            };
            Ok(emit(field.format, value, text))
        }
        Command::Carlitz { field, func, s, a, z } => {
            let ctx = build_ctx(&field)?;
            let consts = CarlitzConstants::new(&ctx);
            let prec = field.precision;
            let need = |opt: &Option<String>, name: &str| {
                opt.clone().ok_or_else(|| {
                    RunError::Config(format!("--{name} is required for --fn {func}"))
                })
            };
            match func.as_str() {
                "module" => {
                    let s_text = need(&s, "s")?;
                    let z = parse_laurent(&ctx, &need(&z, "z")?)?;
                    let v = match parse_poly(&ctx, &s_text) {
                        Ok(p) => carlitz_module_poly(&consts, &p, &z)?,
                        Err(_) => {
                            let s = parse_laurent(&ctx, &s_text)?;
                            carlitz_module_series(&consts, &s, &z, prec)?
                        }
                    };
                    Ok(emit(
                        field.format,
                        json!({
                            "schema": 1, "fn": "module", "s": s_text,
                            "value": v.to_repr(), "text": v.to_string(),
                        }),
                        format!("C_s(z) = {v}"),
                    ))
                }
                "log" | "exp" => {
                    let z = parse_laurent(&ctx, &need(&z, "z")?)?;
                    let v = if func == "log" {
                        log_c(&consts, &z, prec)?
                    } else {
                        exp_c(&consts, &z, prec)?
                    };
                    Ok(emit(
                        field.format,
                        json!({
                            "schema": 1, "fn": func,
                            "value": v.to_repr(), "text": v.to_string(),
                        }),
                        v.to_string(),
                    ))
                }
                "goss" => {
                    let a = parse_poly(&ctx, &need(&a, "a")?)?;
                    let z = parse_laurent(&ctx, &need(&z, "z")?)?;
                    let rep = goss_integral(&consts, &a, &z, prec.min(40))?;
                    Ok(emit(field.format, identity_json("goss", &rep), identity_text("goss", &rep)))
                }
                "funceq" => {
                    let a = parse_poly(&ctx, &need(&a, "a")?)?;
                    let z = parse_laurent(&ctx, &need(&z, "z")?)?;
                    let rep = log_functional_equation(&consts, &a, &z, prec.min(40))?;
                    Ok(emit(
                        field.format,
                        identity_json("funceq", &rep),
                        identity_text("funceq", &rep),
                    ))
                }
                _ => unreachable!(),
            }
        }
        Command::Verify { field } => {
            let ctx = build_ctx(&field)?;
            let mut opts = VerifyOptions::new(ctx.q());
            opts.seed = field.seed;
            opts.precision = field.precision;
            opts.budget = field.budget;
            let checks = run_suite(&opts).map_err(RunError::from)?;
            let all_pass = checks.iter().all(|c| c.passed);
            let json_checks: Vec<serde_json::Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "status": if c.passed { "pass" } else { "fail" },
                        "detail": c.detail,
                    })
                })
                .collect();
            let value = json!({
                "schema": 1,
                "q": ctx.q(),
                "seed": field.seed,
                "checks": json_checks,
            });
            let mut text = String::new();
            for c in &checks {
                text.push_str(&format!(
                    "[{}] {}: {}\n",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            text.push_str(&format!(
                "{} checks, {}",
                checks.len(),
                if all_pass { "all passed" } else { "FAILURES present" }
            ));
            let code = emit(field.format, value, text);
            if all_pass {
                Ok(code)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
