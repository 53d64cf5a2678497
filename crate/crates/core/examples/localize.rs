//! Localizes color classes of random 3-colorings of a {2, 3}-grid.

use std::sync::Arc;

use qramsey::largeset::{localize_colors, GroupMode, ShapeF};
use qramsey::{Coloring, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let window = Arc::new(Window::grid(&[2, 3], 3, false)?);
    let t = ShapeF::from_integers(GroupMode::Mul, &[1, 2])?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..5 {
        let colors = (0..window.len()).map(|_| rng.gen_range(0..3)).collect();
        let coloring = Coloring::new(window.clone(), 3, colors)?;
        match localize_colors(&coloring, &t, 3) {
            Some(rep) => {
                assert!(rep.verify(&coloring));
                let f: Vec<String> = rep.f.iter().map(ToString::to_string).collect();
                println!("trial {trial}: Y = {:?}, F = {{{}}}", rep.ys, f.join(", "));
            }
            None => println!("trial {trial}: no verified localization"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
