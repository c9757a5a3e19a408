//! The pieces behind the fast slope: line orders in the dual arrangement,
//! inversion counts, uniform sampling of slopes from a band, and the trace
//! of a selection run.
//!
//! cargo run --release --example slope_selection_internals

use epb::inversion::{count_abs_slopes_in, enumerate_abs_slopes, order_at, sample_abs_slopes, Arrangement, Slope};
use epb::select::{select_traced, target_rank, SelectionParams};
use epb::sim::simulate;
use epb::tie_census;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> epb::Result<()> {
    let small = epb::Dataset::from_pairs(&[(0.5, 2.0), (1.0, 3.0), (2.0, 1.0)])?;
    let arr = Arrangement::new(&small);
    println!("order at u=0: {:?}", order_at(&arr, 0.0));
    println!("order at u=3: {:?}", order_at(&arr, 3.0));
    println!("|slopes| in (1, 3]: {}", count_abs_slopes_in(&arr, 1.0, Slope::finite(3.0))?);
    let mut all = enumerate_abs_slopes(&arr, 0.0, Slope::Infinite, 10)?;
    all.sort_by_key(|s| s.value);
    for s in &all {
        println!("  pair {:?}: {}", s.pair, s.value);
    }

    let d = simulate(20_000, 3)?;
    let arr = Arrangement::new(&d);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sample = sample_abs_slopes(&arr, 0.9, Slope::finite(1.1), 5, &mut rng)?;
    println!("five slopes drawn uniformly from (0.9, 1.1]:");
    for s in &sample {
        println!("  pair {:?}: {}", s.pair, s.value);
    }

    let k = target_rank(tie_census(&d).k_adjusted)?;
    let trace = select_traced(&d, k, &SelectionParams::default())?;
    println!("selecting rank {k} of {} slopes:", d.pair_count());
    for (i, st) in trace.states.iter().enumerate() {
        println!(
            "  round {i}: band ({:?}, {:?}]  {} slopes, target rank in band {}",
            st.lb.at, st.ub.at, st.theta_size, st.k_star
        );
    }
    println!(
        "result {} from {}",
        trace.result.value,
        if trace.enumerated { "final enumeration" } else { "a sampled cut value" }
    );
    Ok(())
}
