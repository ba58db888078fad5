// Elliptic K, Dawson's integral and the large-d regime.

use qedge::asymptotics::{dawson, dawson_series, elliptic_k, large_d_limit, p0_known};

pub fn run_example() -> qedge::Result<()> {
    println!("K(0) = {}, K(0.5) = {:.15}", elliptic_k(0.0)?, elliptic_k(0.5)?);
    for y in [0.5, 1.0, 1.5] {
        let f = dawson(y)?;
        println!("F({y}) = {f:.12}, 2yF - series(30) = {:.1e}", 2.0 * y * f - dawson_series(y, 30));
    }
    for d in [2, 16, 128] {
        let p = p0_known(d)?;
        let l = large_d_limit(d)?;
        println!("d = {d:>3}: known-states limit {p:.6}, 1 - 1/(2d) = {l:.6}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
