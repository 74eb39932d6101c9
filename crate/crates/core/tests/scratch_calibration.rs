use std::time::Instant;
use stieltjes_core::*;

#[test]
fn calibrate2() {
    let cache = BernoulliCache::new();
    let ctx = PrecisionContext::new(256);
    let wb = ctx.working_bits();

    let t0 = Instant::now();
    let report = cross_validation_report(5, &cache, &ctx).unwrap();
    println!("crossval m_max=5: {:?} all_pass={} complete={}", t0.elapsed(), report.all_pass(), report.complete);
    println!("sign variant: {:?}", report.sign_variant);
    for p in &report.pairs {
        if !p.pass { println!("PAIR FAIL m={} {}/{} diff={:.3e} tol={:.3e}", p.m, p.first, p.second, p.discrepancy.to_f64(), p.tolerance.to_f64()); }
    }
    for r in &report.round_trips {
        if !r.pass { println!("RT FAIL {} l={} diff={:.3e} tol={:.3e}", r.label, r.index, r.discrepancy.to_f64(), r.tolerance.to_f64()); }
    }
    for c in &report.checks {
        if !c.outcome.passed { println!("CHECK FAIL {} idx={} residual={:.3e} tol={:.3e}", c.label, c.index, c.outcome.residual.to_f64(), c.outcome.tolerance.to_f64()); }
    }
    for l in &report.lambda_rows {
        if !l.pass { println!("LAMBDA FAIL m={} {}/{} diff={:.3e}", l.m, l.first_lambda, l.second_lambda, l.discrepancy.to_f64()); }
    }
    println!("rows: cells={} pairs={} rts={} checks={} lambda={}", report.cells.len(), report.pairs.len(), report.round_trips.len(), report.checks.len(), report.lambda_rows.len());

    // kluyver_generalized
    for (p, u_str) in [(0usize, "1"), (2, "1"), (1, "0"), (2, "0.5")] {
        let u = BigReal::from_decimal_str(u_str, wb).unwrap();
        let t0 = Instant::now();
        match kluyver_generalized(p, &u, &cache, &ctx) {
            Ok(g) => println!("c_{p}({u_str}): value={} series_diff={:.3e} time={:?}", g.value.to_decimal_string(20), g.value.sub(&g.series_value).abs().to_f64(), t0.elapsed()),
            Err(e) => println!("c_{p}({u_str}) FAILED: {e}"),
        }
    }
    // u=0 closed form check: c_p(0) = -(log^p 2/(p+1)) B_{p+1} log 2
    let u0 = BigReal::zero(wb);
    let g = kluyver_generalized(1, &u0, &cache, &ctx).unwrap();
    let l2 = log_integer(2, &ctx);
    let expected = l2.powi(1).div(&BigReal::from_u64(2, wb)).mul(&BigReal::from_rational(&cache.get(2), wb)).mul(&l2).neg();
    println!("c_1(0) closed-form diff = {:.3e}", g.value.sub(&expected).abs().to_f64());
}
