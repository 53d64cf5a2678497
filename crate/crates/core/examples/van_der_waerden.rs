//! Sweeps `int:1..N` for 3-term progressions and reports W(2,3) = 9.

use qramsey::pattern::builtin_family;
use qramsey::search::{threshold_sweep, SearchConfig, SweepOptions};
use qramsey::window::WindowFamily;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let vdw = builtin_family("vdw(2)")?;
    let windows: WindowFamily = "int:3..10".parse()?;
    let report = threshold_sweep(&vdw, 2, &windows, &SearchConfig::default(), &SweepOptions::default())?;
    print!("{}", report.to_csv());
    println!("first exhausted N: {:?}", report.minimal_exhausted);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
