//! `{x, x+3}` is not Ramsey: blocks of three alternate colors.

use std::sync::Arc;

use qramsey::detector::CandidateTable;
use qramsey::pattern::{parse_family, FamilyOptions};
use qramsey::search::{search_family, SearchConfig};
use qramsey::{Coloring, Window};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let options = FamilyOptions {
        allow_offset: true,
        ..FamilyOptions::default()
    };
    let family = parse_family("x; x + 3", options)?;
    let window = Arc::new(Window::integers(1, 10_000)?);
    let blocks = Coloring::from_fn(window.clone(), 2, |_, q| {
        let v = q.to_i64().expect("integer window");
        ((v - 1) / 3 % 2) as u8
    })?;
    let table = CandidateTable::build(&family, window)?;
    println!("block coloring on 1..10000: {} witnesses", table.all_witnesses(&blocks, usize::MAX).len());
    let found = (1..=100)
        .filter(|&n| {
            let w = Arc::new(Window::integers(1, n).expect("valid"));
            let r = search_family(&family, w, 2, &SearchConfig::default()).expect("small window");
            r.outcome.coloring().is_some()
        })
        .count();
    println!("avoiding 2-colorings found for {found} of 100 windows");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
