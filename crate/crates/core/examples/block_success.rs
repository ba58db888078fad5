// Square-root measurement against the optimal measurement, block by block.

use qedge::combinatorics::StringParams;
use qedge::discrimination::{optimal_block, srm_block, total_success, Method, Scenario, ScenarioSpec, SolveOptions};
use qedge::gram::build_gram_unknown;
use qedge::linalg::SdpOptions;

pub fn run_example() -> qedge::Result<()> {
    let opts = SolveOptions::default();
    for method in [Method::Srm, Method::Sdp] {
        let r = total_success(ScenarioSpec::new(Scenario::UnknownUnknown, 2, 2, method)?, &opts)?;
        println!("N = 2, d = 2, {method}: {:.9}", r.total);
    }

    let params = StringParams::new(12, 2)?;
    println!("N = 12 blocks:");
    for lambda in 0..=params.max_lambda() {
        let g = build_gram_unknown(params, lambda)?;
        let srm = srm_block(&g)?;
        let (opt, sol) = optimal_block(&g, &SdpOptions::default())?;
        let iters = sol.map(|s| s.iterations).unwrap_or(0);
        println!("  lambda = {lambda}: srm {srm:.8} sdp {opt:.8} ({iters} iterations)");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
