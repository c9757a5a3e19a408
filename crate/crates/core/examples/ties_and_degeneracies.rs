//! How tied observations enter the estimate, and what happens when the
//! data cannot determine a slope.
//!
//! cargo run --example ties_and_degeneracies

use epb::{epb_slope, tie_census, Dataset, Error, SelectionParams};

fn report(label: &str, points: &[(f64, f64)]) {
    let d = Dataset::from_pairs(points).expect("valid points");
    let c = tie_census(&d);
    print!(
        "{label:<22} pairs {:>2}  x-only {}  y-only {}  duplicate {}  used {:>2}  ",
        d.pair_count(),
        c.n_x_only_pairs,
        c.n_y_only_pairs,
        c.n_xy_pairs,
        c.k_adjusted
    );
    match epb_slope(&d, &SelectionParams::default()) {
        Ok(s) => println!("slope {s}"),
        Err(e) => println!("error: {e}"),
    }
}

fn main() {
    // Same y: slope 0. Same x: slope +inf. Identical points: left out.
    report("no ties", &[(0.0, 0.0), (1.0, 2.0), (2.0, 3.0), (3.0, 6.5)]);
    report("flat pairs", &[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (3.0, 4.0)]);
    report("vertical pairs", &[(1.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 2.5)]);
    report("duplicates", &[(1.0, 1.0), (1.0, 1.0), (2.0, 3.0), (3.0, 5.0)]);
    report("all vertical", &[(1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]);
    report("all identical", &[(2.0, 2.0), (2.0, 2.0), (2.0, 2.0)]);

    // Input validation happens before any fitting.
    for (label, xs, ys) in [
        ("length mismatch", vec![1.0, 2.0], vec![1.0]),
        ("single point", vec![1.0], vec![1.0]),
        ("nan", vec![1.0, f64::NAN], vec![1.0, 2.0]),
    ] {
        let e: Error = Dataset::new(xs, ys).unwrap_err();
        println!("{label:<22} rejected: {e}");
    }
}
