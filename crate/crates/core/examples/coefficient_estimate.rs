// Leading Maclaurin coefficients recovered from finite-N square-root
// measurement data.
//
// Uses a reduced ladder so it runs in seconds; `estimate_low_order_coeffs`
// uses N up to 3200.

use qedge::asymptotics::estimator::{estimate_with, EstimatorConfig};
use qedge::asymptotics::coefficient_table;
use num_traits::ToPrimitive;

pub fn run_example() -> qedge::Result<()> {
    let cfg = EstimatorConfig {
        xs: vec![0.1, 0.2, 0.3, 0.4],
        ns: vec![100, 200, 400],
        fit_terms: 3,
    };
    let exact = coefficient_table(3)?;
    for c in estimate_with(3, 2, &cfg)? {
        let a = exact.a(c.r).and_then(|q| q.to_f64()).unwrap_or(f64::NAN);
        println!("a_{} = {:.5} +- {:.1e} (table {a:.5})", c.r, c.value, c.error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
