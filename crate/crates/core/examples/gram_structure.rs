// Semiseparable Gram matrices and the tridiagonal inverse of the rescaled
// unknown–unknown blocks.

use qedge::combinatorics::StringParams;
use qedge::gram::{build_gram_known, build_gram_unknown, rescale_gram, tridiag_check, tridiag_inverse_reference};

pub fn run_example() -> qedge::Result<()> {
    let params = StringParams::new(10, 3)?;
    let g = build_gram_unknown(params, 2)?;
    println!("lambda = 2 block: k in {:?}, trace = {:.6}", g.k_range(), g.dense().trace());
    let rebuilt = g.from_generators();
    let diff = (rebuilt.as_matrix() - g.dense().as_matrix()).amax();
    println!("generator reconstruction error {diff:.1e}");

    let t = tridiag_inverse_reference(params, 6)?;
    println!("closed-form inverse diagonal of the rescaled block: {:.4?}", t.diag);
    let rescaled = rescale_gram(&g)?;
    println!("rescaled trace {:.6}", rescaled.dense().trace());
    let check = tridiag_check(params, 2)?;
    println!(
        "dense inverse vs closed form: relative deviation {:.1e}, condition {:.1e}",
        check.relative_deviation, check.condition_number
    );

    let known = build_gram_known(params, 7)?;
    print!("known-unknown block with 3 excitations:\n{}", known.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
