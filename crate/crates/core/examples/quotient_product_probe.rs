//! Profiles `{x, x/y, x+y}` and `{x, x*y, x+y}` over Farey windows and
//! re-verifies every certificate produced.

use qramsey::pattern::builtin_family;
use qramsey::search::{threshold_sweep, SearchConfig, SweepOptions, Verification};
use qramsey::window::WindowFamily;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let windows: WindowFamily = "farey:1..5".parse()?;
    let config = SearchConfig {
        max_nodes: Some(2_000_000),
        ..SearchConfig::default()
    };
    for key in ["thm1-quotient(1,[t])", "thm1-product(1,[t])"] {
        let family = builtin_family(key)?;
        let report = threshold_sweep(&family, 2, &windows, &config, &SweepOptions::default())?;
        println!("{key}");
        for row in &report.rows {
            let verified = match &row.certificate {
                Some(c) => c.verify()? == Verification::Valid,
                None => false,
            };
            println!("  N={} |w|={:>3} {:<18} nodes={:<8} certificate ok: {verified}", row.n, row.window_size, row.outcome, row.nodes);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
