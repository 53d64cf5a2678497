//! Thick, syndetic, piecewise-syndetic and IP-type checks on finite windows.

use std::sync::Arc;

use qramsey::largeset::{
    finite_sums, find_ip_r, is_ip_r_star, is_syndetic_for, is_thick_for, piecewise_syndetic_witness,
    split_union_witness, GroupMode, IpSetSpec, PolynomialMapping, ShapeF, WindowSet,
};
use qramsey::{PolynomialQ, Rational, Window};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w = Arc::new(Window::integers(1, 40)?);
    let evens = WindowSet::from_predicate(w.clone(), |q| q.to_i64().is_some_and(|v| v % 2 == 0));
    let blocks = WindowSet::from_predicate(w.clone(), |q| q.to_i64().is_some_and(|v| (v - 1) % 10 < 5));
    let t = ShapeF::from_integers(GroupMode::Add, &[0, 1, 2, 3])?;

    println!("blocks thick for T: {:?}", is_thick_for(&blocks, &t));
    println!("evens thick for T:  {:?}", is_thick_for(&evens, &t));
    let f = ShapeF::from_integers(GroupMode::Add, &[0, 1])?;
    let core = Window::integers(2, 40)?;
    println!("evens syndetic with F = {{0, 1}}: {}", is_syndetic_for(&evens, &f, &core)?.holds);
    println!("evens piecewise syndetic: F = {:?}", piecewise_syndetic_witness(&evens, 2, &t).map(|f| f.elements().to_vec()));
    let odds = evens.complement();
    println!("evens ∪ odds splits as {:?}", split_union_witness(&evens, &odds, 1, &t).map(|(side, _)| side));

    let fs = finite_sums(&IpSetSpec::from_integers(GroupMode::Add, &[1, 3, 9])?)?;
    println!("FS(1, 3, 9) = {}", fs.iter().map(Rational::to_string).collect::<Vec<_>>().join(", "));
    println!("IP_2 inside the evens: {:?}", find_ip_r(&evens, 2, GroupMode::Add)?);
    println!("evens are IP_2*: {}", is_ip_r_star(&evens, 2, GroupMode::Add)?);

    let p: PolynomialQ = "t^2 + t".parse()?;
    let gens: Vec<Rational> = [1, 2, 5].into_iter().map(Rational::from).collect();
    let pm = PolynomialMapping::from_polynomial(&p, &gens)?;
    println!("p(1 + 5) via monomials = {}", pm.eval(&[0, 2]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
