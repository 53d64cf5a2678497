//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
//! Time limits are wall-clock bounds on each criterion as a whole.

mod support;

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};
use qramsey::detector::{validate_witness, CandidateTable};
use qramsey::largeset::{
    finite_sums, is_thick_for, localize_colors, piecewise_syndetic_witness, shape_image, split_union_witness,
    GroupMode, IpSetSpec, LocalizationReport, Monomial, PolynomialMapping, ShapeF, UnionSide, WindowSet,
};
use qramsey::pattern::{builtin_family, parse_family, CATALOG_SAMPLE};
use qramsey::rado::{columns_condition, cross_validate, parse_system, to_family, Consistency};
use qramsey::runner::{run, RunConfig};
use qramsey::search::{
    export_cnf, import_assignment, search_avoiding, search_family, threshold_sweep, CertificateKind, CnfInstance,
    Outcome, SearchConfig, SweepOptions, Verification,
};
use qramsey::window::WindowFamily;
use qramsey::{Coloring, Family, FamilyOptions, PatternTerm, Rational, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{big, brute_force_avoidable, oracle_has_witness, oracle_instances, random_coloring, MEDIUM_WINDOWS, SMALL_WINDOWS};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn int(lo: i64, hi: i64) -> Arc<Window> {
    Arc::new(Window::integers(lo, hi).expect("valid window"))
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(format!("{out} [{took:.2?}]"))
}

/// Search outcome on `int:1..n`, with avoiding colorings re-checked by the
/// oracle.
fn outcome_on(family: &Family, n: i64, r: usize, config: &SearchConfig) -> Result<Outcome, String> {
    let window = int(1, n);
    let result = search_family(family, window.clone(), r, config).map_err(e)?;
    if let Outcome::Avoiding(c) = &result.outcome {
        let inst = oracle_instances(family, &window);
        ensure(!oracle_has_witness(&inst, c.colors()), || format!("oracle finds a witness in {c}"))?;
    }
    Ok(result.outcome)
}

fn threshold(family: &Family, r: usize, avoid_at: i64, config: &SearchConfig) -> Result<(), String> {
    let below = outcome_on(family, avoid_at, r, config)?;
    ensure(below.coloring().is_some(), || format!("N={avoid_at}, r={r}: {}", below.label()))?;
    let at = outcome_on(family, avoid_at + 1, r, config)?;
    ensure(at.is_exhausted(), || format!("N={}, r={r}: {}", avoid_at + 1, at.label()))
}

fn criterion_1() -> Check {
    let schur = builtin_family("schur").map_err(e)?;
    let config = SearchConfig::default();
    timed(Duration::from_secs(1), || {
        threshold(&schur, 2, 4, &config)?;
        for (n, expect) in [(4, true), (5, false)] {
            let inst = oracle_instances(&schur, &int(1, n));
            ensure(brute_force_avoidable(&inst, n as usize, 2) == expect, || format!("enumeration disagrees at N={n}"))?;
        }
        Ok("S(2) = 4".into())
    })?;
    let parallel = SearchConfig { workers: 0, ..SearchConfig::default() };
    timed(Duration::from_secs(60), || {
        threshold(&schur, 3, 13, &parallel)?;
        Ok("S(3) = 13".into())
    })
    .map(|s| format!("S(2) = 4 and {s}"))
}

fn criterion_2() -> Check {
    let vdw = builtin_family("vdw(2)").map_err(e)?;
    timed(Duration::from_secs(1), || {
        threshold(&vdw, 2, 8, &SearchConfig::default())?;
        let inst = oracle_instances(&vdw, &int(1, 9));
        ensure(!brute_force_avoidable(&inst, 9, 2), || "enumeration avoids N=9".into())?;
        Ok("W(2,3) = 9".into())
    })
}

fn criterion_3() -> Check {
    timed(Duration::from_secs(5), || {
        let opts = FamilyOptions { allow_offset: true, ..FamilyOptions::default() };
        let family = parse_family("x; x + 3", opts).map_err(e)?;
        let window = int(1, 10_000);
        let blocks = Coloring::from_fn(window.clone(), 2, |_, q| ((q.to_i64().unwrap() - 1) / 3 % 2) as u8).map_err(e)?;
        let table = CandidateTable::build(&family, window).map_err(e)?;
        let witnesses = table.all_witnesses(&blocks, usize::MAX).len();
        ensure(witnesses == 0, || format!("{witnesses} witnesses"))?;
        // direct check: v and v + 3 always sit in adjacent blocks
        ensure((1..=9_997i64).all(|v| (v - 1) / 3 % 2 != (v + 2) / 3 % 2), || "block arithmetic".into())?;
        for n in 1..=100 {
            let out = outcome_on(&family, n, 2, &SearchConfig::default())?;
            ensure(out.coloring().is_some(), || format!("N={n}: {}", out.label()))?;
        }
        Ok("0 witnesses on 1..10^4; avoiding colorings for every N <= 100".into())
    })
}

fn criterion_4() -> Check {
    timed(Duration::from_secs(30), || {
        let schur_eq = parse_system("x + y = z").map_err(e)?;
        ensure(columns_condition(&schur_eq).holds, || "(1,1,-1) fails the columns condition".into())?;
        let report = cross_validate(&schur_eq, 2, 8, &SearchConfig::default()).map_err(e)?;
        ensure(report.status == Consistency::Confirmed, || report.note.clone())?;
        let first = report.probes.iter().find(|p| p.outcome == "exhausted").map(|p| p.n);
        ensure(first == Some(5), || format!("first exhaustion at {first:?}, expected 5"))?;

        let sparse = parse_system("x + y = 3*z").map_err(e)?;
        ensure(!columns_condition(&sparse).holds, || "(1,1,-3) passes the columns condition".into())?;
        let family = to_family(&sparse).map_err(e)?;
        let config = SearchConfig { max_nodes: Some(50_000_000), ..SearchConfig::default() };
        let out = outcome_on(&family, 30, 4, &config)?;
        let c = out.coloring().ok_or_else(|| format!("N=30, r=4: {}", out.label()))?;
        let table = CandidateTable::build(&family, c.window().clone()).map_err(e)?;
        ensure(table.find_witness(c).is_none(), || "detector rejects the 4-coloring".into())?;
        Ok("(1,1,-1) regular, S(2) threshold matches; (1,1,-3) avoided by a 4-coloring of 1..30".into())
    })
}

fn criterion_5() -> Check {
    timed(Duration::from_secs(60), || {
        let mut instances = 0;
        let mut sat = 0;
        for key in CATALOG_SAMPLE {
            let family = builtin_family(key).map_err(e)?;
            for spec in SMALL_WINDOWS {
                let window = Arc::new(spec.parse::<Window>().map_err(e)?);
                let table = CandidateTable::build(&family, window).map_err(e)?;
                let dimacs = export_cnf(&table, 2).to_dimacs();
                let native = search_avoiding(&table, 2, &SearchConfig::default());
                let mut solver = varisat::Solver::new();
                solver.add_dimacs_cnf(dimacs.as_bytes()).map_err(e)?;
                let is_sat = solver.solve().map_err(e)?;
                ensure(is_sat == native.outcome.coloring().is_some(), || format!("{key} on {spec}: SAT={is_sat}"))?;
                if is_sat {
                    let model: Vec<i64> = solver.model().unwrap().iter().map(|l| l.to_dimacs() as i64).collect();
                    let cnf = CnfInstance::from_dimacs(&dimacs).map_err(e)?;
                    let c = import_assignment(&cnf, &model).map_err(e)?;
                    ensure(table.find_witness(&c).is_none(), || format!("{key} on {spec}: imported coloring fails"))?;
                    sat += 1;
                }
                instances += 1;
            }
        }
        Ok(format!("{instances} instances agree ({sat} SAT), every import detector-verified"))
    })
}

fn criterion_6() -> Check {
    timed(Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xde7);
        let mut cases = 0;
        let mut positive = 0;
        for key in CATALOG_SAMPLE {
            let family = builtin_family(key).map_err(e)?;
            let prepared: Vec<_> = MEDIUM_WINDOWS
                .iter()
                .map(|spec| {
                    let w = Arc::new(spec.parse::<Window>().expect("valid window"));
                    let inst = oracle_instances(&family, &w);
                    let table = CandidateTable::build(&family, w.clone()).expect("small window");
                    (w, inst, table)
                })
                .collect();
            for i in 0..1000 {
                let (w, inst, table) = &prepared[i % prepared.len()];
                let c = random_coloring(w, rng.gen_range(2..=4), &mut rng);
                let found = table.find_witness(&c);
                ensure(found.is_some() == oracle_has_witness(inst, c.colors()), || format!("{key}: {c}"))?;
                if let Some(wit) = found {
                    ensure(validate_witness(&family, &c, &wit), || format!("{key}: invalid witness {wit}"))?;
                    positive += 1;
                }
                cases += 1;
            }
        }
        Ok(format!("{cases} colorings agree ({positive} with witnesses)"))
    })
}

/// Term positions of `{x, x*y^a, x + p(y)}`-shaped families.
fn coordinates(f: &Family) -> (usize, usize, Vec<usize>) {
    let pos = |pred: &dyn Fn(&PatternTerm) -> bool| f.terms().iter().position(pred);
    let x = pos(&|t| matches!(t, PatternTerm::X)).expect("x term");
    let m = pos(&|t| matches!(t, PatternTerm::MulPow { .. })).expect("power term");
    let adds = (0..f.len()).filter(|&i| matches!(f.terms()[i], PatternTerm::Affine { .. })).collect();
    (x, m, adds)
}

fn criterion_7() -> Check {
    timed(Duration::from_secs(600), || {
        let windows: WindowFamily = "farey:1..8".parse().map_err(e)?;
        let config = SearchConfig { max_nodes: Some(20_000_000), workers: 0, ..SearchConfig::default() };
        let mut summary = Vec::new();
        let quotient = builtin_family("thm1-quotient(1,[t])").map_err(e)?;
        let product = builtin_family("thm1-product(1,[t])").map_err(e)?;
        for (name, family) in [("quotient", &quotient), ("product", &product)] {
            let report = threshold_sweep(family, 2, &windows, &config, &SweepOptions::default()).map_err(e)?;
            ensure(report.rows.len() == 8, || format!("{name}: {} rows", report.rows.len()))?;
            let mut budget = 0;
            for row in &report.rows {
                match &row.certificate {
                    None => {
                        ensure(row.outcome == "budget-exceeded", || format!("{name} N={}: no certificate", row.n))?;
                        budget += 1;
                    }
                    Some(cert) => {
                        if cert.kind == CertificateKind::LowerBound {
                            let v = cert.verify().map_err(e)?;
                            ensure(v == Verification::Valid, || format!("{name} N={}: {v:?}", row.n))?;
                        }
                    }
                }
            }
            let outcomes: Vec<String> = report.rows.iter().map(|r| format!("{}:{}", r.n, &r.outcome[..1])).collect();
            summary.push(format!("{name} {} ({budget} over budget)", outcomes.join(" ")));
        }

        let (qx, qm, qa) = coordinates(&quotient);
        let (px, pm, pa) = coordinates(&product);
        ensure(qa.len() == pa.len(), || "additive term counts differ".into())?;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut rand_q = || {
            let num: i64 = rng.gen_range(-50..=50);
            let den: i64 = rng.gen_range(1..=50);
            Rational::new(num, den).expect("nonzero denominator")
        };
        let mut checked = 0;
        while checked < 10_000 {
            let (x, y) = (rand_q(), rand_q());
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let inv = y.recip().expect("nonzero");
            let q = quotient.instantiate(&x, &y).map_err(e)?;
            let p_inv = product.instantiate(&x, &inv).map_err(e)?;
            let p_same = product.instantiate(&x, &y).map_err(e)?;
            ensure(q[qx] == p_inv[px] && q[qm] == p_inv[pm], || format!("power coordinate at ({x}, {y})"))?;
            ensure(qa.iter().zip(&pa).all(|(&i, &j)| q[i] == p_same[j]), || format!("additive coordinate at ({x}, {y})"))?;
            // independent arithmetic for the power coordinate
            ensure(big(&q[qm]) * big(&y) == big(&x), || format!("x/y recomputed at ({x}, {y})"))?;
            checked += 1;
        }
        Ok(format!("{}; {checked} coordinate checks", summary.join("; ")))
    })
}

fn run_prop<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        PtConfig { cases, failure_persistence: None, ..PtConfig::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(e)
}

fn subset(w: &Arc<Window>, bits: u64) -> WindowSet {
    WindowSet::from_indices(w.clone(), (0..w.len()).filter(|i| bits >> i & 1 == 1))
}

fn criterion_8() -> Check {
    timed(Duration::from_secs(60), || {
        run_prop(1000, proptest::collection::vec(-30i64..30, 1..12), |g| {
            let fs = finite_sums(&IpSetSpec::from_integers(GroupMode::Add, &g).unwrap()).unwrap();
            let brute: HashSet<i64> = (1u32..1 << g.len())
                .map(|m| (0..g.len()).filter(|b| m >> b & 1 == 1).map(|b| g[b]).sum())
                .collect();
            prop_assert!(fs.len() < 1 << g.len());
            prop_assert_eq!(fs.len(), brute.len());
            Ok(())
        })?;

        let w64 = int(1, 64);
        run_prop(1000, (any::<u64>(), any::<u64>(), proptest::collection::btree_set(0i64..5, 1..4)), |(a, b, t)| {
            // denser sets make thickness common
            let set = subset(&w64, a | b);
            let t = ShapeF::new(GroupMode::Add, t.into_iter().map(Rational::from)).unwrap();
            if is_thick_for(&set, &t).is_some() {
                let f = piecewise_syndetic_witness(&set, 1, &t);
                prop_assert!(f.is_some());
                prop_assert!(is_thick_for(&shape_image(&set, &f.unwrap()), &t).is_some());
            }
            Ok(())
        })?;

        let mut pairs = 0u64;
        let shapes = [vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 3]];
        let w6 = int(1, 6);
        for t in &shapes {
            let t = ShapeF::from_integers(GroupMode::Add, t).unwrap();
            for ab in 0u64..1 << 12 {
                let (a, b) = (subset(&w6, ab & 63), subset(&w6, ab >> 6));
                let union = piecewise_syndetic_witness(&a.union(&b), 1, &t).is_some();
                let split = split_union_witness(&a, &b, 1, &t);
                ensure(union == split.is_some(), || format!("split disagrees on {ab:#x}"))?;
                if let Some((side, f)) = split {
                    let s = if side == UnionSide::Left { &a } else { &b };
                    ensure(is_thick_for(&shape_image(s, &f), &t).is_some(), || "split witness is not thick".into())?;
                }
                pairs += 1;
            }
        }
        let w24 = int(1, 24);
        run_prop(1000, (any::<u32>(), any::<u32>(), 1usize..3), |(bits, mask, max_f)| {
            let bits = bits & 0xff_ffff;
            let a = subset(&w24, (bits & mask) as u64);
            let b = subset(&w24, (bits & !mask) as u64);
            let t = ShapeF::from_integers(GroupMode::Add, &[0, 1, 3]).unwrap();
            if piecewise_syndetic_witness(&a.union(&b), max_f, &t).is_some() {
                prop_assert!(split_union_witness(&a, &b, max_f, &t).is_some());
            }
            Ok(())
        })?;

        run_prop(1000, (1usize..4, proptest::collection::vec((1usize..3, -4i64..4), 0..4), any::<bool>()), |(n, mons, mul)| {
            let mode = if mul { GroupMode::Mul } else { GroupMode::Add };
            let monomials: Vec<Monomial> = mons
                .iter()
                .map(|&(d, s)| Monomial::from_fn(n, d, |t| Rational::from(if mul && s == 0 { 1 + t.len() as i64 } else { s })).unwrap())
                .collect();
            let pm = PolynomialMapping::new(n, mode, monomials).unwrap();
            prop_assert_eq!(pm.eval(&[]), mode.identity());
            Ok(())
        })?;
        Ok(format!("FS bound, thick => PS, union splitting ({pairs} exhaustive pairs + 1000 random), pm(empty) = e"))
    })
}

/// Re-checks a report against the coloring with plain rational arithmetic.
fn independent_localization_check(rep: &LocalizationReport, c: &Coloring, t: &ShapeF) -> bool {
    let color_of = |q: &BigRational| c.window().elements().iter().position(|w| big(w) == *q).map(|i| c.color_at(i));
    let core: Window = match rep.core.parse() {
        Ok(w) => w,
        Err(_) => return false,
    };
    let thick_ok = rep.ys.iter().zip(&rep.thickness_witnesses).all(|(y, x)| {
        t.elements().iter().all(|s| color_of(&(big(s) * big(x))).is_some_and(|col| y.contains(&(col as usize))))
    });
    let covered = core.elements().iter().all(|x| {
        rep.ys.iter().any(|y| {
            y.iter().all(|&m| rep.f.iter().any(|f| !f.is_zero() && color_of(&(big(x) / big(f))) == Some(m as u8)))
        })
    });
    thick_ok && covered && !rep.f.is_empty() && rep.f.len() <= rep.max_f
}

fn criterion_9() -> Check {
    timed(Duration::from_secs(60), || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (mut returned, mut empty) = (0, 0);
        for e_bound in 1..=4u32 {
            let w = Arc::new(Window::grid(&[2, 3], e_bound, false).map_err(e)?);
            for trial in 0..25 {
                let t = if trial % 2 == 0 {
                    ShapeF::from_integers(GroupMode::Mul, &[1, 2]).unwrap()
                } else {
                    ShapeF::from_integers(GroupMode::Mul, &[1, 2, 3, 6]).unwrap()
                };
                let c = random_coloring(&w, 3, &mut rng);
                match localize_colors(&c, &t, 3) {
                    Some(rep) => {
                        ensure(rep.verify(&c), || format!("report fails its own check on {c}"))?;
                        ensure(independent_localization_check(&rep, &c, &t), || format!("independent check fails on {c}"))?;
                        returned += 1;
                    }
                    None => empty += 1,
                }
            }
        }
        // a shape that fits nowhere in the grid must give an empty result
        let w = Arc::new(Window::grid(&[2, 3], 1, false).map_err(e)?);
        let c = Coloring::constant(w, 3, 0).map_err(e)?;
        let huge = ShapeF::from_integers(GroupMode::Mul, &[1, 1024]).unwrap();
        ensure(localize_colors(&c, &huge, 3).is_none(), || "unfittable shape produced a report".into())?;
        Ok(format!("{returned} reports verified, {empty} empty"))
    })
}

fn criterion_10() -> Check {
    let cfg = |text: &str| RunConfig::from_json(text).map_err(e);
    let configs = [
        r#"{"command":"search","family":"schur","window":"int:1..13","colors":3,"workers":1}"#,
        r#"{"command":"sweep","family":"thm1-product(1,[t])","windows":"farey:1..5","colors":2,"workers":1}"#,
        r#"{"command":"detect","family":"vdw(3)","window":"int:1..30","colors":2,"workers":1}"#,
    ];
    for text in configs {
        let config = cfg(text)?;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        run(&config, &mut a).map_err(e)?;
        run(&config, &mut b).map_err(e)?;
        ensure(a == b, || format!("output differs for {text}"))?;
    }
    let schur = builtin_family("schur").map_err(e)?;
    let vdw = builtin_family("vdw(2)").map_err(e)?;
    for (family, r, ns) in [(&schur, 2, [4, 5]), (&schur, 3, [13, 14]), (&vdw, 2, [8, 9])] {
        for n in ns {
            let one = search_family(family, int(1, n), r, &SearchConfig::default()).map_err(e)?;
            for workers in [2, 3, 4, 0] {
                let config = SearchConfig { workers, ..SearchConfig::default() };
                let many = search_family(family, int(1, n), r, &config).map_err(e)?;
                ensure(many.outcome == one.outcome, || format!("{family} N={n} r={r}: workers={workers} differs"))?;
            }
        }
    }
    Ok("byte-identical JSON for 3 configs; outcomes equal across 1, 2, 3, 4 and all workers".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Schur anchor", criterion_1),
        ("van der Waerden anchor", criterion_2),
        ("non-Ramsey offset family", criterion_3),
        ("Rado consistency", criterion_4),
        ("CNF equivalence", criterion_5),
        ("detector oracle equivalence", criterion_6),
        ("quotient/product Farey probe", criterion_7),
        ("large-set suite", criterion_8),
        ("localization verification", criterion_9),
        ("reproducibility", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
