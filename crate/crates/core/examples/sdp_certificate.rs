// The discrimination SDP on arbitrary pure states, with its optimality
// certificate.

use nalgebra::DMatrix;
use qedge::linalg::{certificate, solve_state_discrimination, SdpOptions};

pub fn run_example() -> qedge::Result<()> {
    // three trine-like states in the plane with unequal weights
    let weights = [0.5f64, 0.3, 0.2];
    let states = DMatrix::from_fn(2, 3, |i, k| {
        let angle = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        let c = if i == 0 { angle.cos() } else { angle.sin() };
        weights[k].sqrt() * c
    });
    let sol = solve_state_discrimination(&states, &SdpOptions::default())?;
    let cert = certificate(&states, &sol)?;
    println!("optimum {:.10} after {} iterations", sol.primal_value, sol.iterations);
    println!("{cert:#?}");
    assert!(cert.holds(1e-8));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
