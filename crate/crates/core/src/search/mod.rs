//! Avoidance search: does some `r`-coloring of a window leave the family
//! without a monochromatic instance?
//!
//! The tree is split after `split_depth` decisions into subtrees that run on
//! a worker pool. The answer is taken from the lowest-indexed subtree that
//! contains a solution, so the reported coloring, node count (on exhaustion)
//! and trace hash do not depend on the number of workers.

mod certificate;
mod cnf;
mod solver;
mod sweep;

use std::sync::atomic::Ordering;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coloring::{Color, Coloring};
use crate::detector::{CandidateTable, DetectorError};
use crate::pattern::Family;
use crate::window::Window;

pub use certificate::{Certificate, CertificateError, CertificateKind, Verification, CERTIFICATE_VERSION};
pub use cnf::{export_cnf, import_assignment, parse_assignment, CnfError, CnfInstance};
pub use solver::{Control, Dfs, Problem, State};
pub use sweep::{threshold_sweep, SweepOptions, ThresholdReport, ThresholdRow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    /// Worker threads; `0` uses every available core.
    pub workers: usize,
    pub split_depth: usize,
    pub symmetry: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_nodes: None,
            max_seconds: None,
            workers: 1,
            split_depth: 8,
            symmetry: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Avoiding(Coloring),
    Exhausted { trace_hash: String },
    BudgetExceeded,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Avoiding(_) => "avoiding-coloring",
            Outcome::Exhausted { .. } => "exhausted",
            Outcome::BudgetExceeded => "budget-exceeded",
        }
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match self {
            Outcome::Avoiding(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, Outcome::Exhausted { .. })
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum OutcomeRepr<'a> {
    AvoidingColoring { colors: &'a [Color] },
    Exhausted { trace_hash: &'a str },
    BudgetExceeded,
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::Avoiding(c) => OutcomeRepr::AvoidingColoring { colors: c.colors() },
            Outcome::Exhausted { trace_hash } => OutcomeRepr::Exhausted { trace_hash },
            Outcome::BudgetExceeded => OutcomeRepr::BudgetExceeded,
        }
        .serialize(serializer)
    }
}

/// Wall time is kept out of the serialized form so that repeated runs
/// produce identical JSON.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub family: Family,
    pub window: Window,
    pub r: usize,
    pub outcome: Outcome,
    pub nodes: u64,
    pub candidates: usize,
    pub config: SearchConfig,
    #[serde(skip)]
    pub seconds: f64,
}

/// Searches for an `r`-coloring with no monochromatic candidate.
pub fn search_avoiding(table: &CandidateTable, r: usize, config: &SearchConfig) -> SearchResult {
    let start = Instant::now();
    let problem = Problem::from_table(table, r);
    let (outcome, nodes) = run_search(&problem, table.window(), config, start);
    SearchResult {
        family: table.family().clone(),
        window: (**table.window()).clone(),
        r,
        outcome,
        nodes,
        candidates: table.len(),
        config: config.clone(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Builds the candidate table, then searches.
pub fn search_family(
    family: &Family,
    window: Arc<Window>,
    r: usize,
    config: &SearchConfig,
) -> Result<SearchResult, DetectorError> {
    let table = CandidateTable::build(family, window)?;
    Ok(search_avoiding(&table, r, config))
}

fn combine_hash(prefix_count: usize, digests: &[[u8; 32]]) -> String {
    let mut h = Sha256::new();
    h.update((prefix_count as u64).to_le_bytes());
    for d in digests {
        h.update(d);
    }
    hex::encode(h.finalize())
}

fn run_search(problem: &Problem, window: &Arc<Window>, config: &SearchConfig, start: Instant) -> (Outcome, u64) {
    if problem.trivially_unsat {
        return (
            Outcome::Exhausted {
                trace_hash: combine_hash(0, &[]),
            },
            0,
        );
    }
    let deadline = config.max_seconds.map(|s| start + Duration::from_secs_f64(s.max(0.0)));
    let ctl = Control::new(config.max_nodes, deadline);

    let mut root = State::new(problem, config.symmetry);
    let mut prefixes = Vec::new();
    let split = root.dfs(&ctl, &|| false, Some(config.split_depth), &mut prefixes);
    root.flush(&ctl);
    let prefix_nodes = root.nodes;
    let prefix_digest = root.trace_digest();
    if split == Dfs::Budget {
        return (Outcome::BudgetExceeded, ctl.nodes.load(Ordering::Relaxed));
    }

    let solve = |(idx, prefix): (usize, &Vec<(u32, Color)>)| {
        let abort = || ctl.found_min.load(Ordering::Relaxed) < idx;
        if abort() {
            return (Dfs::Aborted, None, 0, [0u8; 32]);
        }
        let mut st = State::new(problem, config.symmetry);
        for &(e, c) in prefix {
            let ok = st.assign(e, c);
            debug_assert!(ok, "recorded prefix must replay");
        }
        let out = st.dfs(&ctl, &abort, None, &mut Vec::new());
        st.flush(&ctl);
        if out == Dfs::Solved {
            ctl.found_min.fetch_min(idx, Ordering::Relaxed);
        }
        let colors = (out == Dfs::Solved).then(|| st.colors().to_vec());
        let nodes = st.nodes;
        (out, colors, nodes, st.trace_digest())
    };

    let results: Vec<_> = if config.workers == 1 {
        prefixes.iter().enumerate().map(solve).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .expect("thread pool");
        pool.install(|| prefixes.par_iter().enumerate().map(solve).collect())
    };

    if let Some((_, colors, _, _)) = results.iter().find(|(o, ..)| *o == Dfs::Solved) {
        let coloring = Coloring::new(window.clone(), problem.r, colors.clone().unwrap())
            .expect("solver colors are in range");
        // Nodes up to and including the winning subtree are scheduling-free.
        let win = results.iter().position(|(o, ..)| *o == Dfs::Solved).unwrap();
        let nodes = prefix_nodes + results[..=win].iter().map(|r| r.2).sum::<u64>();
        return (Outcome::Avoiding(coloring), nodes);
    }
    let nodes = prefix_nodes + results.iter().map(|r| r.2).sum::<u64>();
    if results.iter().any(|(o, ..)| *o != Dfs::Exhausted) {
        return (Outcome::BudgetExceeded, nodes);
    }
    let mut digests = vec![prefix_digest];
    digests.extend(results.iter().map(|r| r.3));
    (
        Outcome::Exhausted {
            trace_hash: combine_hash(prefixes.len(), &digests),
        },
        nodes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detector::find_witness;
    use crate::pattern::builtin_family;

    fn search(key: &str, window: &str, r: usize, workers: usize) -> SearchResult {
        let f = builtin_family(key).unwrap();
        let w = Arc::new(window.parse::<Window>().unwrap());
        search_family(
            &f,
            w,
            r,
            &SearchConfig {
                workers,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn schur_two_colors() {
        let four = search("schur", "int:1..4", 2, 1);
        let c = four.outcome.coloring().expect("avoiding at 4");
        assert!(find_witness(&four.family, c).unwrap().is_none());
        assert!(search("schur", "int:1..5", 2, 1).outcome.is_exhausted());
    }

    #[test]
    fn vdw_three_term() {
        assert!(search("vdw(2)", "int:1..8", 2, 1).outcome.coloring().is_some());
        assert!(search("vdw(2)", "int:1..9", 2, 1).outcome.is_exhausted());
    }

    #[test]
    fn worker_count_does_not_change_the_answer() {
        for (key, w) in [("schur", "int:1..13"), ("schur", "int:1..14"), ("vdw(2)", "int:1..9")] {
            let one = search(key, w, if key == "schur" { 3 } else { 2 }, 1);
            let four = search(key, w, if key == "schur" { 3 } else { 2 }, 4);
            assert_eq!(one.outcome, four.outcome, "{key} {w}");
            if one.outcome.is_exhausted() {
                assert_eq!(one.nodes, four.nodes);
            }
        }
    }

    #[test]
    fn node_budget_is_reported() {
        let f = builtin_family("schur").unwrap();
        let w = Arc::new(Window::integers(1, 14).unwrap());
        let res = search_family(
            &f,
            w,
            3,
            &SearchConfig {
                max_nodes: Some(10),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(res.outcome, Outcome::BudgetExceeded);
    }

    #[test]
    fn result_json_has_no_wall_time() {
        let res = search("schur", "int:1..4", 2, 1);
        let json = serde_json::to_value(&res).unwrap();
        assert!(json.get("seconds").is_none());
        assert_eq!(json["outcome"]["kind"], "avoiding-coloring");
    }
}
