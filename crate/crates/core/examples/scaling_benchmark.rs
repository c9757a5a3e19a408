//! Times the fast estimator across sample sizes and compares it with the
//! naive all-pairs estimator where that is still feasible.
//!
//! cargo run --release --example scaling_benchmark -- 10000 100000 1000000

use epb::bench::{run_scaling, ScalingConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sizes: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    if sizes.is_empty() {
        sizes = vec![1_000, 3_000, 10_000, 30_000, 100_000];
    }
    sizes.sort_unstable();

    let cfg = ScalingConfig {
        sizes,
        replicates: 3,
        seed: 1,
        naive_max: 10_000,
    };
    let table = run_scaling(&cfg)?;
    print!("{}", table.to_csv());
    println!("fitted c in time_us ~ c n ln n: {:.4}", table.c_hat);
    for r in &table.rows {
        if let Some(naive) = r.naive {
            println!("n = {}: naive / fast = {:.0}x", r.n, naive.mean_us / r.fast.mean_us);
        }
    }
    Ok(())
}
