// Closed-form overlaps of the posterior states against the explicit
// Schur-basis construction.
//
// ```text
// cargo run --example schur_overlaps
// ```

use qedge::combinatorics::{irrep_dim, overlap_closed, overlap_oracle, priors_exact, sym_dim, StringParams};

pub fn run_example() -> qedge::Result<()> {
    let params = StringParams::new(8, 2)?;
    println!("sym_dim(8, 2) = {}, irrep dims:", sym_dim(8, 2));
    for lambda in 0..=params.max_lambda() {
        println!("  lambda = {lambda}: {}", irrep_dim(params, lambda)?);
    }

    let (n, lambda) = (8, 2);
    let mut worst = 0.0f64;
    for k in lambda..=n - lambda {
        for kp in k..=n - lambda {
            let closed = overlap_closed(n, k, kp, lambda)?;
            let oracle = overlap_oracle(n, k, kp, lambda)?;
            worst = worst.max((closed - oracle).abs());
        }
    }
    println!("N = {n}, lambda = {lambda}: max |closed - oracle| = {worst:.2e}");
    assert!(worst < 1e-12);

    for (k, eta) in priors_exact(StringParams::new(4, 3)?, 1)? {
        println!("  N = 4, d = 3, lambda = 1, k = {k}: eta = {eta}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
