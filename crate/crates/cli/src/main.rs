//! `stieltjes` - tables and verification suites for Stieltjes-constant
//! computations.
//!
//! Subcommands: `gamma` (constants by method), `zeta-deriv` (alternating
//! zeta derivatives at 1), `verify` (exact and numeric identity suites),
//! `crossval` (the full cross-validation report). Exit codes: 0 success,
//! 1 usage error, 2 non-convergence or identity failure.

mod output;
mod verify;

use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;

use stieltjes_core::crossval::CrossValReport;
use stieltjes_core::stieltjes::Method;
use stieltjes_core::{
    cross_validation_report, gamma_coffey, gamma_kluyver, gamma_liang_todd, hasse_alt_zeta_deriv,
    kluyver_generalized, log_integer, parse_decimal_rational, AltZetaDerivatives, BernoulliCache,
    BigReal, PrecisionContext, Rational, SeriesResult,
};

use output::{emit, Format, OutputRecord, RecordKind};

#[derive(Parser)]
#[command(name = "stieltjes", version, about = "Stieltjes constants from Bernoulli numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Stieltjes constants gamma_m
    Gamma(GammaArgs),
    /// Compute derivatives of the alternating zeta function at s = 1
    ZetaDeriv(ZetaDerivArgs),
    /// Run the exact and numeric identity suites
    Verify(verify::VerifyArgs),
    /// Emit the full cross-validation report
    Crossval(CrossvalArgs),
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Requested precision in bits (64 guard bits are added on top)
    #[arg(long, default_value_t = 256)]
    bits: usize,
    /// Significant decimal digits in emitted values
    #[arg(long, default_value_t = 40)]
    digits: usize,
    /// Cap on the number of terms in any single summation
    #[arg(long)]
    max_terms: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Absolute tolerance (decimal), overriding the precision-derived one
    #[arg(long)]
    tolerance: Option<String>,
}

impl CommonOpts {
    fn context(&self) -> Result<PrecisionContext, String> {
        if self.bits < 8 {
            return Err("--bits must be at least 8".into());
        }
        if self.digits == 0 {
            return Err("--digits must be at least 1".into());
        }
        let mut ctx = PrecisionContext::new(self.bits);
        if let Some(max_terms) = self.max_terms {
            if max_terms == 0 {
                return Err("--max-terms must be at least 1".into());
            }
            ctx = ctx.with_max_terms(max_terms);
        }
        if let Some(tol) = &self.tolerance {
            let r = parse_decimal_rational(tol).map_err(|e| e.to_string())?;
            if !r.is_positive() {
                return Err("--tolerance must be positive".into());
            }
            let tol_real = BigReal::from_rational(&r, ctx.working_bits());
            ctx = ctx.with_tolerance(tol_real);
        }
        Ok(ctx)
    }
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Index m, single value or inclusive range a..b
    #[arg(long, default_value = "0")]
    m: String,
    /// Representation to evaluate
    #[arg(long, default_value = "coffey")]
    method: String,
    /// Argument of the generalized sum c_p(u); values other than 1 route to
    /// the generalized Kluyver evaluation
    #[arg(long, default_value = "1")]
    u: String,
}

#[derive(Args)]
struct ZetaDerivArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Order l, single value or inclusive range a..b
    #[arg(long, default_value = "0")]
    l: String,
    /// Evaluation route
    #[arg(long, default_value = "hasse")]
    method: String,
    /// Acceleration parameter as a rational p/q (accelerated method only)
    #[arg(long, default_value = "1")]
    lambda: String,
}

#[derive(Args)]
struct CrossvalArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Largest index m to cross-validate
    #[arg(long, default_value_t = 5)]
    m_max: usize,
}

/// Inclusive `a..b` or a single index.
fn parse_index_range(s: &str) -> Result<(usize, usize), String> {
    let parse_one = |t: &str| -> Result<usize, String> {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid index {t:?}"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let lo = parse_one(a)?;
        let hi = parse_one(b)?;
        if hi < lo {
            return Err(format!("empty range {s:?}"));
        }
        Ok((lo, hi))
    } else {
        let v = parse_one(s)?;
        Ok((v, v))
    }
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    let lam = Rational::from_str(s.trim()).map_err(|_| format!("invalid rational {s:?}"))?;
    if !lam.is_positive() {
        return Err("--lambda must be positive".into());
    }
    Ok(lam)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (help/version go to stdout and
            // are not errors; everything else is a usage error)
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let outcome = match cli.command {
        Command::Gamma(args) => run_gamma(args),
        Command::ZetaDeriv(args) => run_zeta_deriv(args),
        Command::Verify(args) => verify::run(args),
        Command::Crossval(args) => run_crossval(args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn estimate_record(
    est: &stieltjes_core::StieltjesEstimate,
    digits: usize,
) -> OutputRecord {
    OutputRecord::new(
        RecordKind::Gamma,
        est.value.to_decimal_string(digits),
        est.error_estimate.to_decimal_string(digits),
        est.converged,
    )
    .with_m(est.m)
    .with_method(est.method.as_str())
}

fn run_gamma(args: GammaArgs) -> Result<ExitCode, String> {
    let ctx = args.common.context()?;
    let digits = args.common.digits;
    let (lo, hi) = parse_index_range(&args.m)?;
    let cache = BernoulliCache::new();

    let u_rat = parse_decimal_rational(&args.u).map_err(|e| e.to_string())?;
    let mut records = Vec::new();
    let mut all_converged = true;

    if u_rat != Rational::from_str("1").unwrap() {
        // generalized sum c_p(u)
        let u = BigReal::from_rational(&u_rat, ctx.working_bits());
        for p in lo..=hi {
            match kluyver_generalized(p, &u, &cache, &ctx) {
                Ok(g) => {
                    all_converged &= g.converged;
                    records.push(
                        OutputRecord::new(
                            RecordKind::Gamma,
                            g.value.to_decimal_string(digits),
                            g.error_estimate.to_decimal_string(digits),
                            g.converged,
                        )
                        .with_m(p)
                        .with_method(Method::Kluyver.as_str())
                        .with_u(args.u.trim().to_string()),
                    );
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(2));
                }
            }
        }
    } else {
        let methods: Vec<Method> = match args.method.as_str() {
            "coffey" => vec![Method::Coffey],
            "liang-todd" => vec![Method::LiangTodd],
            "kluyver" => vec![Method::Kluyver],
            "all" => vec![Method::Coffey, Method::LiangTodd, Method::Kluyver],
            other => return Err(format!("unknown method {other:?}")),
        };
        let needs_z = methods.iter().any(|m| *m != Method::Kluyver);
        let z = if needs_z {
            Some(AltZetaDerivatives::hasse(hi + 1, &ctx))
        } else {
            None
        };
        for m in lo..=hi {
            for method in &methods {
                let est = match method {
                    Method::Coffey => gamma_coffey(m, z.as_ref().unwrap(), &cache, &ctx)
                        .map_err(|e| e.to_string())?,
                    Method::LiangTodd => gamma_liang_todd(m, z.as_ref().unwrap(), &cache, &ctx)
                        .map_err(|e| e.to_string())?,
                    Method::Kluyver => gamma_kluyver(m, &cache, &ctx),
                    Method::ZhangWilliams => unreachable!(),
                };
                all_converged &= est.converged;
                records.push(estimate_record(&est, digits));
            }
        }
    }

    let mut stdout = std::io::stdout().lock();
    emit(&records, args.common.format, &mut stdout).map_err(|e| e.to_string())?;
    stdout.flush().map_err(|e| e.to_string())?;
    Ok(if all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run_zeta_deriv(args: ZetaDerivArgs) -> Result<ExitCode, String> {
    let ctx = args.common.context()?;
    let digits = args.common.digits;
    let (lo, hi) = parse_index_range(&args.l)?;
    let lambda = parse_lambda(&args.lambda)?;

    let mut records = Vec::new();
    let mut all_converged = true;
    for l in lo..=hi {
        let (res, method_name): (SeriesResult, &str) = match args.method.as_str() {
            "hasse" => (hasse_alt_zeta_deriv(l, &ctx), "hasse"),
            "accelerated" => {
                let res = if l == 0 {
                    // order zero is log 2, method-independent
                    SeriesResult {
                        value: log_integer(2, &ctx),
                        error_estimate: BigReal::pow2(
                            2 - ctx.working_bits() as i64,
                            ctx.working_bits(),
                        ),
                        terms_used: 1,
                        converged: true,
                    }
                } else {
                    let raw = stieltjes_core::accelerated_alt_zeta_deriv(l, &lambda, &ctx)
                        .map_err(|e| e.to_string())?;
                    // fold (-1)^l so the table shows zeta_a^(l)(1) directly
                    if l % 2 == 1 {
                        SeriesResult {
                            value: raw.value.neg(),
                            ..raw
                        }
                    } else {
                        raw
                    }
                };
                (res, "accelerated")
            }
            "oracle" => {
                let num_terms = ctx.max_terms().min(20_000);
                if num_terms < 2 {
                    return Err("--max-terms too small for the oracle method".into());
                }
                let depth = 24.min(num_terms / 2);
                let res = stieltjes_core::direct_series_oracle(l, num_terms, depth, &ctx)
                    .map_err(|e| e.to_string())?;
                (res, "oracle")
            }
            other => return Err(format!("unknown method {other:?}")),
        };
        all_converged &= res.converged;
        let mut record = OutputRecord::new(
            RecordKind::ZetaDeriv,
            res.value.to_decimal_string(digits),
            res.error_estimate.to_decimal_string(digits),
            res.converged,
        )
        .with_l(l)
        .with_method(method_name);
        if args.method == "accelerated" {
            record = record.with_lambda(lambda.to_string());
        }
        records.push(record);
    }

    let mut stdout = std::io::stdout().lock();
    emit(&records, args.common.format, &mut stdout).map_err(|e| e.to_string())?;
    stdout.flush().map_err(|e| e.to_string())?;
    Ok(if all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn report_records(report: &CrossValReport, digits: usize) -> Vec<OutputRecord> {
    let mut records = Vec::new();
    for c in &report.cells {
        records.push(
            OutputRecord::new(
                RecordKind::CrossvalCell,
                c.value.to_decimal_string(digits),
                c.error_estimate.to_decimal_string(digits),
                c.converged,
            )
            .with_m(c.m)
            .with_method(c.method.as_str())
            .with_label("gamma"),
        );
    }
    for p in &report.pairs {
        records.push(
            OutputRecord::new(
                RecordKind::CrossvalCell,
                p.discrepancy.to_decimal_string(digits),
                p.tolerance.to_decimal_string(digits),
                p.pass,
            )
            .with_m(p.m)
            .with_method(format!("{} vs {}", p.first.as_str(), p.second.as_str()))
            .with_label("pairwise-discrepancy"),
        );
    }
    for r in &report.round_trips {
        records.push(
            OutputRecord::new(
                RecordKind::CrossvalCell,
                r.discrepancy.to_decimal_string(digits),
                r.tolerance.to_decimal_string(digits),
                r.pass,
            )
            .with_l(r.index)
            .with_label(r.label),
        );
    }
    for c in &report.checks {
        records.push(
            OutputRecord::new(
                RecordKind::IdentityCheck,
                c.outcome.residual.to_decimal_string(digits),
                c.outcome.tolerance.to_decimal_string(digits),
                c.outcome.passed,
            )
            .with_l(c.index)
            .with_label(c.label),
        );
    }
    for row in &report.lambda_rows {
        records.push(
            OutputRecord::new(
                RecordKind::CrossvalCell,
                row.discrepancy.to_decimal_string(digits),
                row.tolerance.to_decimal_string(digits),
                row.pass,
            )
            .with_m(row.m)
            .with_lambda(format!("{} vs {}", row.first_lambda, row.second_lambda))
            .with_label("lambda-independence"),
        );
    }
    records
}

fn run_crossval(args: CrossvalArgs) -> Result<ExitCode, String> {
    let ctx = args.common.context()?;
    let cache = BernoulliCache::new();
    let report = cross_validation_report(args.m_max, &cache, &ctx).map_err(|e| e.to_string())?;
    let records = report_records(&report, args.common.digits);

    let mut stdout = std::io::stdout().lock();
    emit(&records, args.common.format, &mut stdout).map_err(|e| e.to_string())?;
    if args.common.format == Format::Plain {
        if let Some(variant) = &report.sign_variant {
            writeln!(stdout, "# reflection sign variant: {variant:?}").map_err(|e| e.to_string())?;
        }
        writeln!(
            stdout,
            "# crossval m_max={} bits={} complete={} all_pass={}",
            report.m_max,
            report.requested_bits,
            report.complete,
            report.all_pass()
        )
        .map_err(|e| e.to_string())?;
    }
    stdout.flush().map_err(|e| e.to_string())?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
