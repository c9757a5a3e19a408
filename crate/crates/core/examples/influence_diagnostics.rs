//! Per-observation influence: a small sample with one gross leverage
//! point, the scores that single it out, the leave-one-out check, and the
//! two diagnostic plots.
//!
//! cargo run --example influence_diagnostics [output-dir]

use std::path::PathBuf;

use epb::cli::plot::{influence_index_svg, influence_scatter_svg};
use epb::sim::LinearModel;
use epb::{epb_fit, influence_scores, loo_quantile_shift, Dataset, SelectionParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // 26 points near y = x plus one leverage point far from the line.
    let base = LinearModel::default().sample(26, 8)?;
    let mut points: Vec<(f64, f64)> = base.iter().map(|p| (p.x, p.y)).collect();
    points.push((4.0, 7.0));
    let d = Dataset::from_pairs(&points)?;

    let fit = epb_fit(&d, &SelectionParams::default())?;
    let scores = influence_scores(&d, fit.slope)?;
    println!("slope {:.4}, intercept {:.4}", fit.slope, fit.intercept);
    println!("{:>5} {:>8} {:>8} {:>10} {:>10}", "index", "x", "y", "scaled", "loo level");
    for (i, p) in d.iter().enumerate() {
        println!(
            "{:>5} {:>8.3} {:>8.3} {:>10.4} {:>10.4}",
            i + 1,
            p.x,
            p.y,
            scores.tau_scaled[i],
            loo_quantile_shift(&d, i)?
        );
    }
    let top = (0..d.len())
        .max_by(|&a, &b| scores.tau_scaled[a].abs().total_cmp(&scores.tau_scaled[b].abs()))
        .unwrap();
    println!("largest |influence|: observation {}", top + 1);

    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    std::fs::create_dir_all(&dir)?;
    let index = dir.join("influence_index.svg");
    let scatter = dir.join("influence_scatter.svg");
    std::fs::write(&index, influence_index_svg(&scores.tau_scaled))?;
    std::fs::write(
        &scatter,
        influence_scatter_svg(d.xs(), d.ys(), &scores.tau_scaled, fit.slope, fit.intercept),
    )?;
    println!("wrote {} and {}", index.display(), scatter.display());
    Ok(())
}
