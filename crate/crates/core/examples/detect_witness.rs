//! Finds monochromatic instances of a DSL family under a fixed coloring.

use std::sync::Arc;

use qramsey::detector::{validate_witness, CandidateTable};
use qramsey::pattern::{parse_family, FamilyOptions};
use qramsey::{Coloring, Window};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let family = parse_family("x; x/y^1; x + y", FamilyOptions::default())?;
    let window = Arc::new(Window::farey(6)?);
    // color by the sign of numerator minus denominator
    let coloring = Coloring::from_fn(window.clone(), 2, |_, q| u8::from(q.numer() > q.denom()))?;
    let table = CandidateTable::build(&family, window)?;
    println!("{} candidate instances on {}", table.len(), coloring.window());
    for w in table.all_witnesses(&coloring, 5) {
        assert!(validate_witness(&family, &coloring, &w));
        println!("  {w}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
