// Driving the command-line interface in-process.

use qedge::cli::run;

pub fn run_example() -> qedge::Result<()> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        ["qedge", "curve", "--scenario", "known", "--d", "3", "--method", "srm", "--n", "2:10:4"],
        &mut out,
        &mut err,
    );
    print!("{}", String::from_utf8_lossy(&out));
    println!("exit code {code}");

    out.clear();
    let code = run(["qedge", "asymptote", "--d", "5"], &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    println!("exit code {code}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qedge::Result<()> {
    run_example()
}
