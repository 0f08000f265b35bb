//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Runs under `cargo test` (the target has `harness = false`). Set
//! `SEFCC_ACCEPT_WORKERS` to bound the threads used by the census sweep.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sefcc::channel::SimResult;
use sefcc::enumeration::{census, certify_theorems, enumerate_valid, CensusReport};
use sefcc::spectrum::{SpherePairSpectra, MAX_SUM_DISTANCE, MESSAGE_SUM_DISTANCE};
use sefcc::{
    cross_class_min_distance, distance_matrix, extend_to_full, has_dmin_2, is_valid,
    max_sum_family, optimal_fer_code, run_simulation, spectrum,
    union_bound_fer, BooleanFunction, HammingCodebook, ParityAssignment, SearchMode,
    SearchStrategy, SimConfig, Word,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn workers() -> usize {
    std::env::var("SEFCC_ACCEPT_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn criterion_1_structure() -> Outcome {
    let start = Instant::now();
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let weights = cb.weight_enumerator() == [1, 0, 0, 7, 7, 0, 0, 1];
    let regular = (0..16).all(|v| g.degree(v) == 7);
    let odd: Vec<usize> = g.partite_odd().iter().map(|v| v + 1).collect();
    let even: Vec<usize> = g.partite_even().iter().map(|v| v + 1).collect();
    let parts = odd == [3, 4, 5, 6, 9, 10, 15, 16] && even == [1, 2, 7, 8, 11, 12, 13, 14];
    let elapsed = start.elapsed();
    outcome(
        weights && regular && g.is_bipartite_split() && g.edges().len() == 56 && parts
            && elapsed < Duration::from_secs(1),
        format!(
            "weights={weights} 7-regular={regular} bipartite={} edges={} partite_match={parts} elapsed={elapsed:?}",
            g.is_bipartite_split(),
            g.edges().len()
        ),
    )
}

fn criterion_2_sum_bound(report: &CensusReport) -> Outcome {
    let cb = HammingCodebook::new();
    let code = extend_to_full(&ParityAssignment::constant(0), &cb);
    let message = distance_matrix(&code).message_part_total();
    outcome(
        report.max_sum_value == MAX_SUM_DISTANCE && message == MESSAGE_SUM_DISTANCE,
        format!("census_max_sum={} message_part={message}", report.max_sum_value),
    )
}

fn criterion_3_max_sum(report: &CensusReport, bt_time: Duration) -> Outcome {
    let g = HammingCodebook::new().distance3_graph();
    let workers = workers();
    let start = Instant::now();
    let sweep = census(&g, SearchStrategy::new(SearchMode::FullSweep, workers).unwrap());
    let sweep_time = start.elapsed();
    let same_facts = CensusReport {
        mode: report.mode,
        total_assignments_examined: report.total_assignments_examined,
        ..sweep.clone()
    } == *report;
    let covered = sweep.total_assignments_examined == 1u64 << 32
        && report.total_assignments_examined == report.valid_count;
    outcome(
        report.max_sum_count == 9800
            && report.max_sum_all_match_construction
            && bt_time < Duration::from_secs(60)
            && same_facts
            && covered,
        format!(
            "max_sum_count={} all_match={} backtracking={bt_time:?} sweep({workers} workers)={sweep_time:?} \
             sweep_valid={} backtracking_valid={} sweep_agrees={same_facts}",
            report.max_sum_count,
            report.max_sum_all_match_construction,
            sweep.valid_count,
            report.valid_count
        ),
    )
}

fn criterion_4_distance(report: &CensusReport) -> Outcome {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let family = max_sum_family(&g);
    let bad = family.iter().find(|pa| {
        let s = spectrum(&extend_to_full(pa, &cb));
        s.d_min != 2 || s.n2() != 960 || s.sum_distance != MAX_SUM_DISTANCE
    });
    outcome(
        bad.is_none()
            && report.min_n2_over_valid_dmin2 == 960
            && report.min_n2_count == 9800
            && report.min_n2_achievers_match_construction,
        format!(
            "family={} all_dmin2_n2_960={} min_N2={} minimisers={} only_family={}",
            family.len(),
            bad.is_none(),
            report.min_n2_over_valid_dmin2,
            report.min_n2_count,
            report.min_n2_achievers_match_construction
        ),
    )
}

/// Constants, the whole family, 10^4 uniform random assignments and 10^4
/// random valid ones (rejection-free: drawn from the census list).
fn corpus() -> Vec<ParityAssignment> {
    let g = HammingCodebook::new().distance3_graph();
    let mut out: Vec<ParityAssignment> = (0..4).map(ParityAssignment::constant).collect();
    out.extend(max_sum_family(&g));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    out.extend((0..10_000).map(|_| ParityAssignment::unpack(rng.random())));
    let valid = std::sync::Mutex::new(Vec::new());
    enumerate_valid(&g, SearchStrategy::default(), |pa| valid.lock().unwrap().push(*pa));
    let valid = valid.into_inner().unwrap();
    out.extend((0..10_000).map(|_| valid[rng.random_range(0..valid.len())]));
    out
}

fn criterion_5_validity(corpus: &[ParityAssignment]) -> Outcome {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let f = BooleanFunction::hamming_membership(&cb);
    let disagreements = corpus
        .iter()
        .filter(|pa| {
            let brute = cross_class_min_distance(&extend_to_full(pa, &cb), &f).unwrap() >= 3;
            brute != is_valid(pa, &g)
        })
        .count();
    let valid = corpus.iter().filter(|pa| is_valid(pa, &g)).count();
    outcome(
        disagreements == 0 && corpus.len() >= 4 + 9800 + 10_000,
        format!("corpus={} valid={valid} disagreements={disagreements}", corpus.len()),
    )
}

fn criterion_6_dmin(corpus: &[ParityAssignment]) -> Outcome {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let table = SpherePairSpectra::new(&cb);
    let mut checked = 0;
    let mut disagreements = 0;
    let mut fast_mismatch = 0;
    for pa in corpus.iter().filter(|pa| is_valid(pa, &g)) {
        checked += 1;
        let s = spectrum(&extend_to_full(pa, &cb));
        if has_dmin_2(pa, &g).unwrap() != (s.d_min == 2) || s.d_min == 0 {
            disagreements += 1;
        }
        if table.spectrum(pa) != s {
            fast_mismatch += 1;
        }
    }
    let c2 = optimal_fer_code(&cb, Word::new(0, 2).unwrap()).unwrap();
    let c2_dmin = spectrum(&c2).d_min;
    outcome(
        disagreements == 0 && fast_mismatch == 0 && c2_dmin == 1,
        format!(
            "valid_checked={checked} disagreements={disagreements} fast_route_mismatches={fast_mismatch} optimal_fer_dmin={c2_dmin}"
        ),
    )
}

const SIM_SEED: u64 = 20_260_101;
const SIM_TRIALS: u64 = 2_000_000;

fn simulate_pair() -> (SimResult, SimResult, Duration) {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let f = BooleanFunction::hamming_membership(&cb);
    let c1 = extend_to_full(&sefcc::construct_max_sum(&g, &sefcc::MaxSumParams::example()).unwrap(), &cb);
    let c2 = optimal_fer_code(&cb, Word::new(0, 2).unwrap()).unwrap();
    let cfg = SimConfig::new(SimConfig::sweep(0.0, 9.0, 1.0).unwrap(), SIM_TRIALS, SIM_SEED).unwrap();
    let start = Instant::now();
    let r1 = run_simulation(&c1, &f, &cfg).unwrap();
    let r2 = run_simulation(&c2, &f, &cfg).unwrap();
    (r1, r2, start.elapsed())
}

fn criterion_7_simulation(r1: &SimResult, r2: &SimResult, elapsed: Duration) -> Outcome {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let f = BooleanFunction::hamming_membership(&cb);
    let c1 = extend_to_full(&sefcc::construct_max_sum(&g, &sefcc::MaxSumParams::example()).unwrap(), &cb);
    let c2 = optimal_fer_code(&cb, Word::new(0, 2).unwrap()).unwrap();

    let at6 = |r: &SimResult| r.points.iter().find(|p| p.ebn0_db == 6.0).unwrap().clone();
    let (p1, p2) = (at6(r1), at6(r2));
    let fer_order = p2.fer < p1.fer && p2.fer_ci95.1 < p1.fer_ci95.0;
    let ber_order = p1.ber < p2.ber && p1.ber_ci95.1 < p2.ber_ci95.0;

    let mut bound_ok = true;
    for (code, r) in [(&c1, r1), (&c2, r2)] {
        for p in r.points.iter().filter(|p| p.ebn0_db >= 6.0) {
            let bound = union_bound_fer(code, &f, p.ebn0_db).unwrap();
            bound_ok &= bound >= p.fer_ci95.0;
        }
    }
    outcome(
        fer_order && ber_order && bound_ok && elapsed < Duration::from_secs(300),
        format!(
            "6dB: FER c1={:.3e} [{:.3e},{:.3e}] c2={:.3e} [{:.3e},{:.3e}]; BER c1={:.3e} [{:.3e},{:.3e}] c2={:.3e} [{:.3e},{:.3e}]; \
             union_bound_ok={bound_ok} sweep_0_9dB_2x{}trials={elapsed:?}",
            p1.fer, p1.fer_ci95.0, p1.fer_ci95.1, p2.fer, p2.fer_ci95.0, p2.fer_ci95.1,
            p1.ber, p1.ber_ci95.0, p1.ber_ci95.1, p2.ber, p2.ber_ci95.0, p2.ber_ci95.1,
            SIM_TRIALS
        ),
    )
}

fn criterion_8_determinism(r1: &SimResult) -> Outcome {
    let g = HammingCodebook::new().distance3_graph();
    let w = workers();
    let a = certify_theorems(&g, SearchStrategy::new(SearchMode::Backtracking, w).unwrap()).to_key_value();
    let b = certify_theorems(&g, SearchStrategy::new(SearchMode::Backtracking, w).unwrap()).to_key_value();
    let single = certify_theorems(&g, SearchStrategy::default()).to_key_value();

    let cb = HammingCodebook::new();
    let f = BooleanFunction::hamming_membership(&cb);
    let c1 = extend_to_full(&sefcc::construct_max_sum(&g, &sefcc::MaxSumParams::example()).unwrap(), &cb);
    let cfg = SimConfig::new(SimConfig::sweep(0.0, 9.0, 1.0).unwrap(), SIM_TRIALS, SIM_SEED).unwrap();
    let again = run_simulation(&c1, &f, &cfg).unwrap();
    let csv_same = again.to_csv("c1") == r1.to_csv("c1");
    outcome(
        a == b && a == single && csv_same,
        format!("census_reports_identical={} across_worker_counts={} sim_csv_identical={csv_same}", a == b, a == single),
    )
}

fn main() -> ExitCode {
    // libtest-style flags (e.g. --nocapture) are accepted and ignored
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let wants = |n: u32| filter.as_deref().map_or(true, |f| f == n.to_string());

    let g = HammingCodebook::new().distance3_graph();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    if wants(1) {
        results.push((1, "structure", criterion_1_structure()));
    }
    if wants(2) || wants(3) || wants(4) {
        let start = Instant::now();
        let report = census(&g, SearchStrategy::default());
        let bt_time = start.elapsed();
        if wants(2) {
            results.push((2, "sum-distance bound", criterion_2_sum_bound(&report)));
        }
        if wants(3) {
            results.push((3, "max-sum uniqueness", criterion_3_max_sum(&report, bt_time)));
        }
        if wants(4) {
            results.push((4, "distance properties", criterion_4_distance(&report)));
        }
    }
    if wants(5) || wants(6) {
        let corpus = corpus();
        if wants(5) {
            results.push((5, "validity equivalence", criterion_5_validity(&corpus)));
        }
        if wants(6) {
            results.push((6, "d_min condition", criterion_6_dmin(&corpus)));
        }
    }
    if wants(7) || wants(8) {
        let (r1, r2, elapsed) = simulate_pair();
        if wants(7) {
            results.push((7, "simulation orderings", criterion_7_simulation(&r1, &r2, elapsed)));
        }
        if wants(8) {
            results.push((8, "determinism", criterion_8_determinism(&r1)));
        }
    }

    let mut failed = 0;
    for (n, name, o) in &results {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("acceptance {n} [{status}] {name}: {}", o.detail);
        failed += !o.passed as usize;
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
