//! Analytic intervals (null and Daniels variance) next to percentile
//! bootstrap intervals for slope and intercept.
//!
//! cargo run --release --example confidence_intervals

use epb::sim::simulate;
use epb::{
    analytic_ci, bootstrap_ci, bootstrap_intercept_ci, daniels_variance, epb_fit, null_variance, SelectionParams,
    VarianceMode,
};

fn main() -> epb::Result<()> {
    let d = simulate(1_000, 11)?;
    let p = SelectionParams::default();
    let fit = epb_fit(&d, &p)?;
    println!("slope {:.5}  intercept {:.5}", fit.slope, fit.intercept);

    let dv = daniels_variance(&d, fit.slope)?;
    println!(
        "sd of tau: null {:.5}, Daniels {:.5}",
        null_variance(d.len())?.sqrt(),
        dv.value.sqrt()
    );

    for mode in [VarianceMode::Null, VarianceMode::Daniels] {
        let ci = analytic_ci(&d, fit.slope, 0.95, mode, &p)?;
        let det = ci.analytic.as_ref().unwrap();
        println!(
            "{mode:?}: [{:.5}, {:.5}]  ranks {}..{} of {}",
            ci.lo, ci.hi, det.lo_rank, det.hi_rank, det.k_adjusted
        );
    }

    let ci = bootstrap_ci(&d, 500, 0.95, 2024)?;
    let redraws = ci.bootstrap.as_ref().map_or(0, |b| b.redraws);
    println!("bootstrap slope: [{:.5}, {:.5}]  ({redraws} redraws)", ci.lo, ci.hi);
    let ci = bootstrap_intercept_ci(&d, 500, 0.95, 2024)?;
    println!("bootstrap intercept: [{:.5}, {:.5}]", ci.lo, ci.hi);
    Ok(())
}
