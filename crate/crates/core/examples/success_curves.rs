// Success probability against string length for both scenarios.
//
// A short version of the full sweep; the CLI runs the complete grid with
// `qedge curve --n 2:18:2,22:198:4`.

use qedge::asymptotics::p0_known;
use qedge::discrimination::{success_curve, Method, Scenario, SolveOptions};

pub fn run_example() -> qedge::Result<()> {
    let ns = [2, 4, 8, 16, 32];
    let opts = SolveOptions::default();
    let asymptote = p0_known(2)?;
    println!("   N  unknown/srm  unknown/sdp  known/srm   (asymptote {asymptote:.5})");
    let uu = success_curve(Scenario::UnknownUnknown, 2, &ns, Method::Srm, &opts)?;
    let uo = success_curve(Scenario::UnknownUnknown, 2, &ns, Method::Sdp, &opts)?;
    let ku = success_curve(Scenario::KnownUnknown, 2, &ns, Method::Srm, &opts)?;
    for ((a, b), c) in uu.iter().zip(&uo).zip(&ku) {
        let v = |p: &qedge::discrimination::CurvePoint| p.result.as_ref().map(|r| r.total).unwrap_or(f64::NAN);
        println!("{:>4}  {:.8}   {:.8}   {:.8}", a.n, v(a), v(b), v(c));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
