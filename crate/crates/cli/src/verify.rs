//! The `verify` subcommand: exact rational identity suites and the
//! tolerance-checked numeric suites, with one printed line per identity.

use std::process::ExitCode;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stieltjes_core::comb::binomial;
use stieltjes_core::{
    binomial_bernoulli_symmetry_check, cross_validation_report, full_range_moment_sum,
    negative_bernoulli_sum_check, rational, riordan_forward, riordan_inverse,
    rubenstein_identity_check, truncated_moment_sum, BernoulliCache, Rational,
};

use crate::CommonOpts;

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Which suites to run
    #[arg(long, default_value = "all")]
    suite: String,
    /// Upper index for the exact identity suite (inclusive, >= 1)
    #[arg(long, default_value_t = 40)]
    max_n: usize,
    /// Largest Stieltjes index for the numeric suite
    #[arg(long, default_value_t = 5)]
    m_max: usize,
}

const RIORDAN_SEED: u64 = 0x5177_3e5a_9b1c_0042;
const RIORDAN_CASES: usize = 100;

fn random_sequence(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let len = rng.gen_range(1..=30);
    (0..len)
        .map(|_| rational(rng.gen_range(-999..=999), rng.gen_range(1..=99)))
        .collect()
}

struct SuiteStatus {
    all_passed: bool,
}

impl SuiteStatus {
    fn new() -> Self {
        SuiteStatus { all_passed: true }
    }

    fn line(&mut self, name: &str, passed: bool, detail: &str) {
        println!("{}  {name}: {detail}", if passed { "pass" } else { "FAIL" });
        self.all_passed &= passed;
    }
}

fn run_exact(max_n: usize, status: &mut SuiteStatus) {
    let cache = BernoulliCache::with_capacity(max_n + 1);

    let mut first_fail = None;
    for n in 1..=max_n {
        let mut acc = Rational::from(binomial(n as u64 + 1, 0));
        let mut sum = acc.clone() * cache.get(0);
        for k in 1..=n {
            acc = Rational::from(binomial(n as u64 + 1, k as i64));
            sum += acc * cache.get(k);
        }
        if sum != Rational::from_integer(0.into()) {
            first_fail = Some(n);
            break;
        }
    }
    status.line(
        "bernoulli-recurrence",
        first_fail.is_none(),
        &detail_range(max_n, first_fail),
    );

    let fail = (1..=max_n)
        .filter(|n| n % 2 == 1 && *n >= 3)
        .find(|&n| !cache.get(n).numer().eq(&0.into()));
    status.line("odd-vanishing", fail.is_none(), &detail_range(max_n, fail));

    let fail = (1..=max_n).find(|&m| !full_range_moment_sum(m, &cache).numer().eq(&0.into()));
    status.line(
        "full-range-moment-sum",
        fail.is_none(),
        &detail_range(max_n, fail),
    );

    let fail = (1..=max_n).find(|&m| truncated_moment_sum(m, &cache) != -cache.get(m));
    status.line(
        "truncated-moment-sum",
        fail.is_none(),
        &detail_range(max_n, fail),
    );

    let fail = (1..=max_n).find(|&n| !rubenstein_identity_check(n, &cache));
    status.line(
        "rubenstein-convolution",
        fail.is_none(),
        &detail_range(max_n, fail),
    );

    let fail = (1..=max_n).find(|&p| !negative_bernoulli_sum_check(p, &cache));
    status.line(
        "negative-bernoulli-sum",
        fail.is_none(),
        &detail_range(max_n, fail),
    );

    let fail = (1..=max_n).find(|&n| !binomial_bernoulli_symmetry_check(n, &cache));
    status.line(
        "binomial-symmetry",
        fail.is_none(),
        &detail_range(max_n, fail),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(RIORDAN_SEED);
    let mut round_trips_ok = true;
    for _ in 0..RIORDAN_CASES {
        let b = random_sequence(&mut rng);
        let a = riordan_forward(&b).expect("non-empty");
        if riordan_inverse(&a, &cache).expect("non-empty") != b {
            round_trips_ok = false;
            break;
        }
        let a = random_sequence(&mut rng);
        let b = riordan_inverse(&a, &cache).expect("non-empty");
        if riordan_forward(&b).expect("non-empty") != a {
            round_trips_ok = false;
            break;
        }
    }
    status.line(
        "riordan-round-trip",
        round_trips_ok,
        &format!("{RIORDAN_CASES} random sequences of length <= 30, exact"),
    );
}

fn detail_range(max_n: usize, first_fail: Option<usize>) -> String {
    match first_fail {
        None => format!("all n in 1..={max_n}, exact"),
        Some(n) => format!("first failure at n = {n}"),
    }
}

fn run_numeric(args: &VerifyArgs, status: &mut SuiteStatus) -> Result<(), String> {
    let ctx = args.common.context()?;
    let cache = BernoulliCache::new();
    let report = cross_validation_report(args.m_max, &cache, &ctx).map_err(|e| e.to_string())?;

    for p in &report.pairs {
        status.line(
            &format!("gamma[{}] {} vs {}", p.m, p.first.as_str(), p.second.as_str()),
            p.pass,
            &format!(
                "discrepancy {} (allowed {})",
                p.discrepancy.to_decimal_string(6),
                p.tolerance.to_decimal_string(6)
            ),
        );
    }
    for r in &report.round_trips {
        status.line(
            &format!("{}[{}]", r.label, r.index),
            r.pass,
            &format!(
                "discrepancy {} (allowed {})",
                r.discrepancy.to_decimal_string(6),
                r.tolerance.to_decimal_string(6)
            ),
        );
    }
    for c in &report.checks {
        status.line(
            &format!("{}[{}]", c.label, c.index),
            c.outcome.passed,
            &format!(
                "residual {} (allowed {})",
                c.outcome.residual.to_decimal_string(6),
                c.outcome.tolerance.to_decimal_string(6)
            ),
        );
    }
    for row in &report.lambda_rows {
        status.line(
            &format!(
                "lambda-independence[{}] {} vs {}",
                row.m, row.first_lambda, row.second_lambda
            ),
            row.pass,
            &format!(
                "discrepancy {} (allowed {})",
                row.discrepancy.to_decimal_string(6),
                row.tolerance.to_decimal_string(6)
            ),
        );
    }
    if !report.complete {
        status.line(
            "numeric-suite-complete",
            false,
            "non-converged inputs forced dependent checks to be skipped",
        );
    }
    Ok(())
}

pub fn run(args: VerifyArgs) -> Result<ExitCode, String> {
    let run_exact_suite = matches!(args.suite.as_str(), "exact" | "all");
    let run_numeric_suite = matches!(args.suite.as_str(), "numeric" | "all");
    if !run_exact_suite && !run_numeric_suite {
        return Err(format!("unknown suite {:?}", args.suite));
    }
    if run_exact_suite && args.max_n == 0 {
        return Err("--max-n must be at least 1".into());
    }

    let mut status = SuiteStatus::new();
    if run_exact_suite {
        println!("== exact identity suite (n, m, p in 1..={}) ==", args.max_n);
        run_exact(args.max_n, &mut status);
    }
    if run_numeric_suite {
        println!(
            "== numeric suite (m <= {}, {} bits) ==",
            args.m_max, args.common.bits
        );
        run_numeric(&args, &mut status)?;
    }
    println!(
        "verify: {}",
        if status.all_passed { "all passed" } else { "FAILURES" }
    );
    Ok(if status.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
