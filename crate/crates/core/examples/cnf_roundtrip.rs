//! Exports an avoidance problem to DIMACS, reads it back, and decodes an
//! assignment into a coloring the detector accepts.

use std::sync::Arc;

use qramsey::detector::CandidateTable;
use qramsey::pattern::builtin_family;
use qramsey::search::{export_cnf, import_assignment, search_avoiding, CnfInstance, SearchConfig};
use qramsey::Window;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let family = builtin_family("vdw(2)")?;
    let table = CandidateTable::build(&family, Arc::new(Window::integers(1, 8)?))?;
    let cnf = export_cnf(&table, 2);
    let text = cnf.to_dimacs();
    println!("{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    let back = CnfInstance::from_dimacs(&text)?;
    assert_eq!(back.clauses, cnf.clauses);

    // a satisfying assignment, taken here from the native search
    let result = search_avoiding(&table, 2, &SearchConfig::default());
    let coloring = result.outcome.coloring().expect("W(2,3) = 9, so N = 8 is avoidable");
    let inst = &back;
    let assignment: Vec<i64> = coloring
        .colors()
        .iter()
        .enumerate()
        .flat_map(|(e, &c)| (0..2).map(move |k| if k == c as usize { inst.var(e, k) } else { -inst.var(e, k) }))
        .collect();
    let decoded = import_assignment(&back, &assignment)?;
    assert!(table.find_witness(&decoded).is_none());
    println!("decoded avoiding coloring: {decoded}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
