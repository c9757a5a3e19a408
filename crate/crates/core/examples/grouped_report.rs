//! The `fit` workflow on a CSV file with a site column: one row for all
//! data and one per site, as JSON and as a tab-separated table.
//!
//! cargo run --release --example grouped_report

use epb::cli::{cmd_fit, ColumnRef, Method, RunConfig};
use epb::sim::LinearModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("epb-grouped-report");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("sites.csv");

    let mut csv = String::from("site,reference,candidate\n");
    for (seed, (site, slope)) in [("A", 1.0), ("B", 1.02), ("C", 0.97), ("D", 1.0)].into_iter().enumerate() {
        let model = LinearModel {
            slope,
            ..Default::default()
        };
        for p in model.sample(150, seed as u64)?.iter() {
            csv.push_str(&format!("{site},{},{}\n", p.x, p.y));
        }
    }
    std::fs::write(&path, csv)?;

    let mut cfg = RunConfig::new(
        &path,
        ColumnRef::Name("reference".into()),
        ColumnRef::Name("candidate".into()),
    );
    cfg.group = Some(ColumnRef::Name("site".into()));
    cfg.method = Method::Both;
    cfg.bootstrap_replicates = 300;

    let report = cmd_fit(&cfg)?;
    print!("{}", report.to_tsv());
    println!();
    let all = &report.groups[0];
    println!("ALL row as JSON:\n{}", serde_json::to_string_pretty(all)?);
    Ok(())
}
