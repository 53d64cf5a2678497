//! Recovers the Schur numbers S(2) = 4 and S(3) = 13 by exhaustive search.

use std::sync::Arc;

use qramsey::pattern::builtin_family;
use qramsey::search::{search_family, SearchConfig};
use qramsey::Window;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let schur = builtin_family("schur")?;
    let config = SearchConfig {
        workers: 0,
        ..SearchConfig::default()
    };
    for (r, n) in [(2, 4), (2, 5), (3, 13), (3, 14)] {
        let window = Arc::new(Window::integers(1, n)?);
        let result = search_family(&schur, window, r, &config)?;
        println!("r={r} N={n:>2}: {:<18} nodes={}", result.outcome.label(), result.nodes);
        if let Some(c) = result.outcome.coloring() {
            println!("    {c}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
