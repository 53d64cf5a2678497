#[path = "../examples/schur_numbers.rs"]
mod schur_numbers;

#[path = "../examples/van_der_waerden.rs"]
mod van_der_waerden;

#[path = "../examples/detect_witness.rs"]
mod detect_witness;

#[path = "../examples/quotient_product_probe.rs"]
mod quotient_product_probe;

#[path = "../examples/rado_check.rs"]
mod rado_check;

#[path = "../examples/cnf_roundtrip.rs"]
mod cnf_roundtrip;

#[path = "../examples/large_sets.rs"]
mod large_sets;

#[path = "../examples/localize.rs"]
mod localize;

#[path = "../examples/non_ramsey_offset.rs"]
mod non_ramsey_offset;

#[test]
fn every_example_runs() {
    schur_numbers::run_example().unwrap();
    van_der_waerden::run_example().unwrap();
    detect_witness::run_example().unwrap();
    quotient_product_probe::run_example().unwrap();
    rado_check::run_example().unwrap();
    cnf_roundtrip::run_example().unwrap();
    large_sets::run_example().unwrap();
    localize::run_example().unwrap();
    non_ramsey_offset::run_example().unwrap();
}
