//! Fit a line to simulated method-comparison data.
//!
//! cargo run --release --example quickstart

use epb::sim::LinearModel;
use epb::{epb_fit, SelectionParams};

fn main() -> epb::Result<()> {
    let model = LinearModel {
        slope: 1.1,
        intercept: 0.3,
        ..Default::default()
    };
    let d = model.sample(2_000, 42)?;
    let fit = epb_fit(&d, &SelectionParams::default())?;

    println!("n          {}", fit.n);
    println!("slope      {:.6}", fit.slope);
    println!("intercept  {:.6}", fit.intercept);
    println!("kendall    {:.4}", fit.kendall_tau);
    println!("median of {} pairs taken at rank {}", fit.census.k_adjusted, fit.k);
    for w in &fit.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
