// Large-N success probability from the exact Maclaurin tables, by two Padé
// routes, next to the known-states limit.

use qedge::asymptotics::{coefficient_table, highest_diagonal_pade, p0_known, p0_via_integral, p0_via_primitive};

pub fn run_example() -> qedge::Result<()> {
    let t = coefficient_table(3)?;
    println!("d = 3: a_1..a_3 = {}, {}, {}", t.coeffs()[0], t.coeffs()[1], t.coeffs()[2]);

    let p = highest_diagonal_pade(2)?;
    println!("d = 2 {:?} Padé: A_1 = {:.6}, B_1 = {:.6}", p.x_order(), p.numer_f64()[1], p.denom_f64()[1]);

    println!(" d   integral    primitive   known");
    for d in [2, 3, 4, 8] {
        let i = p0_via_integral(d)?;
        let q = p0_via_primitive(d)?;
        println!(
            "{d:>2}   {:.7} {:?}   {:.7} {:?}   {:.7}",
            i.value,
            i.order,
            q.value,
            q.order,
            p0_known(d)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
