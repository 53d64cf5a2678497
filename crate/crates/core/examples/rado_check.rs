//! Columns-condition verdicts cross-checked against finite search.

use qramsey::rado::{columns_condition, cross_validate, parse_system};
use qramsey::search::SearchConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["x + y = z", "x + 2*y = z", "x + y = 3*z", "2*x = y", "x + y + z = w; x = y"] {
        let sys = parse_system(text)?;
        let v = columns_condition(&sys);
        println!("{sys:<24} regular: {:<5} partition: {:?}", v.holds, v.partition);
    }
    let config = SearchConfig::default();
    let schur = cross_validate(&parse_system("x + y = z")?, 2, 10, &config)?;
    println!("x + y = z with 2 colors: {:?} ({})", schur.status, schur.note);
    let sparse = cross_validate(&parse_system("x + y = 3*z")?, 4, 30, &config)?;
    println!("x + y = 3z with 4 colors: {:?} ({})", sparse.status, sparse.note);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
