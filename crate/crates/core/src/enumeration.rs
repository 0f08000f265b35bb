//! Exhaustive census of parity assignments.
//!
//! Two search modes visit the valid assignments of a [`Distance3Graph`] in
//! the same lexicographic order (codeword 1 most significant, parities tried
//! `00, 01, 10, 11`):
//!
//! * **backtracking** fixes codewords one at a time and prunes as soon as a
//!   complementary pair appears across an edge;
//! * **full sweep** walks all `4^16` assignments as a product of two halves
//!   and rejects invalid ones with a single mask test per assignment.
//!
//! The sweep exists as an independent completeness oracle for the
//! backtracking search. Both split their work into shards that merge
//! associatively, so a [`CensusReport`] does not depend on the worker count.

use std::fmt::{self, Write as _};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fcc::{
    cross_class_min_distance, extend_to_full, has_dmin_2, is_valid, max_sum_family,
    max_sum_parameters, optimal_fer_code, BooleanFunction, ParityAssignment,
};
use crate::hamming::{Distance3Graph, HammingCodebook, NUM_CODEWORDS};
use crate::spectrum::{
    balanced_sum_distance, spectrum, SpherePairSpectra, MAX_SUM_DISTANCE, MESSAGE_SUM_DISTANCE,
};
use crate::word::Word;

const V: usize = NUM_CODEWORDS;

/// How the assignment space is traversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Backtracking,
    FullSweep,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Backtracking => "backtracking",
            SearchMode::FullSweep => "full-sweep",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backtracking" => Ok(SearchMode::Backtracking),
            "full-sweep" | "full_sweep" => Ok(SearchMode::FullSweep),
            other => Err(Error::Config(format!("unknown search mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchStrategy {
    pub mode: SearchMode,
    pub worker_count: usize,
}

impl SearchStrategy {
    pub fn new(mode: SearchMode, worker_count: usize) -> Result<Self> {
        if worker_count == 0 {
            return Err(Error::Config("worker_count must be at least 1".into()));
        }
        Ok(SearchStrategy { mode, worker_count })
    }
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy { mode: SearchMode::Backtracking, worker_count: 1 }
    }
}

/// Aggregate facts about the valid assignments of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub mode: SearchMode,
    pub total_assignments_examined: u64,
    pub valid_count: u64,
    pub valid_dmin2_count: u64,
    pub max_sum_value: u64,
    pub max_sum_count: u64,
    pub max_sum_all_match_construction: bool,
    /// Every maximiser also satisfies the `d_min = 2` edge condition.
    pub max_sum_all_dmin2: bool,
    pub min_n2_over_valid_dmin2: u64,
    pub min_n2_count: u64,
    /// All minimisers come from the construction, and there are exactly as
    /// many of them as the construction produces.
    pub min_n2_achievers_match_construction: bool,
    /// Size of the construction family for this graph's partite sets.
    pub family_size: u64,
    /// Smallest maximiser not reproduced by the construction, if any.
    pub max_sum_witness: Option<ParityAssignment>,
    /// Smallest `N_2` minimiser not reproduced by the construction, if any.
    pub min_n2_witness: Option<ParityAssignment>,
}

impl CensusReport {
    /// `key=value` lines, one per field.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| writeln!(out, "census.{k}={v}").unwrap();
        kv("mode", &self.mode);
        kv("total_assignments_examined", &self.total_assignments_examined);
        kv("valid_count", &self.valid_count);
        kv("valid_dmin2_count", &self.valid_dmin2_count);
        kv("max_sum_value", &self.max_sum_value);
        kv("max_sum_count", &self.max_sum_count);
        kv("max_sum_all_match_construction", &self.max_sum_all_match_construction);
        kv("max_sum_all_dmin2", &self.max_sum_all_dmin2);
        kv("min_N2_over_valid_dmin2", &self.min_n2_over_valid_dmin2);
        kv("min_N2_count", &self.min_n2_count);
        kv("min_N2_achievers_match_construction", &self.min_n2_achievers_match_construction);
        kv("family_size", &self.family_size);
        out
    }
}

/// Best value seen so far, how often, and whether every holder came from
/// the construction.
#[derive(Clone, Copy, Debug)]
struct Extremum {
    value: u64,
    count: u64,
    all_match: bool,
    all_dmin2: bool,
    witness: Option<u32>,
}

impl Extremum {
    fn empty(value: u64) -> Self {
        Extremum { value, count: 0, all_match: true, all_dmin2: true, witness: None }
    }

    fn push(&mut self, value: u64, better: bool, packed: u32, matches: impl FnOnce() -> bool, dmin2: bool) {
        if better {
            *self = Extremum::empty(value);
        } else if value != self.value {
            return;
        }
        self.count += 1;
        self.all_dmin2 &= dmin2;
        if !matches() {
            self.all_match = false;
            self.witness = Some(self.witness.map_or(packed, |w| w.min(packed)));
        }
    }

    fn merge(self, other: Self, prefer_larger: bool) -> Self {
        let (a, b) = (self, other);
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        if a.value != b.value {
            let a_wins = (a.value > b.value) == prefer_larger;
            return if a_wins { a } else { b };
        }
        Extremum {
            value: a.value,
            count: a.count + b.count,
            all_match: a.all_match && b.all_match,
            all_dmin2: a.all_dmin2 && b.all_dmin2,
            witness: match (a.witness, b.witness) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Partial {
    examined: u64,
    valid: u64,
    valid_dmin2: u64,
    max_sum: Extremum,
    min_n2: Extremum,
}

impl Partial {
    fn new() -> Self {
        Partial {
            examined: 0,
            valid: 0,
            valid_dmin2: 0,
            max_sum: Extremum::empty(0),
            min_n2: Extremum::empty(u64::MAX),
        }
    }

    fn merge(self, o: Self) -> Self {
        Partial {
            examined: self.examined + o.examined,
            valid: self.valid + o.valid,
            valid_dmin2: self.valid_dmin2 + o.valid_dmin2,
            max_sum: self.max_sum.merge(o.max_sum, true),
            min_n2: self.min_n2.merge(o.min_n2, false),
        }
    }
}

/// Graph and spectrum tables shared by both search modes.
struct Kernel<'g> {
    g: &'g Distance3Graph,
    /// `n2[i][k][delta]` distance-2 pairs between spheres `i` and `k`.
    n2: Box<[[[u32; 3]; V]; V]>,
    intra_n2: u64,
}

impl<'g> Kernel<'g> {
    fn new(g: &'g Distance3Graph) -> Self {
        let cb = HammingCodebook::new();
        let table = SpherePairSpectra::new(&cb);
        let mut n2 = Box::new([[[0u32; 3]; V]; V]);
        for i in 0..V {
            for k in i + 1..V {
                for delta in 0..3 {
                    let c = table.pair(i, k, delta)[2];
                    n2[i][k][delta] = c;
                    n2[k][i][delta] = c;
                }
            }
        }
        Kernel { g, n2, intra_n2: table.intra()[2] }
    }

    /// Books a valid leaf.
    fn record(&self, acc: &mut Partial, p: &[u8; V], dmin2: bool, n2: Option<u64>) {
        acc.valid += 1;
        let pa = ParityAssignment::from_values(*p).expect("2-bit values");
        let packed = pa.pack();
        let sum = balanced_sum_distance(&pa);
        let g = self.g;
        acc.max_sum.push(sum, sum > acc.max_sum.value, packed, || max_sum_parameters(&pa, g).is_some(), dmin2);
        if dmin2 {
            acc.valid_dmin2 += 1;
            let n2 = n2.unwrap_or_else(|| self.full_n2(p));
            acc.min_n2.push(n2, n2 < acc.min_n2.value, packed, || max_sum_parameters(&pa, g).is_some(), true);
        }
    }

    fn full_n2(&self, p: &[u8; V]) -> u64 {
        let mut n2 = self.intra_n2;
        for i in 0..V {
            for k in i + 1..V {
                n2 += self.n2[i][k][(p[i] ^ p[k]).count_ones() as usize] as u64;
            }
        }
        n2
    }
}

/// Number of leading codewords fixed per backtracking shard.
const SHARD_PREFIX: usize = 4;

struct Backtracker<'k, 'g, F> {
    kernel: &'k Kernel<'g>,
    visitor: &'k F,
    p: [u8; V],
}

impl<'k, 'g, F: Fn(&ParityAssignment) + Sync> Backtracker<'k, 'g, F> {
    /// Extends a prefix ending before `depth`. `equal` records whether any
    /// edge inside the prefix joins equal parities; `n2` accumulates the
    /// distance-2 pairs between fixed spheres.
    fn descend(&mut self, depth: usize, equal: bool, n2: u64, acc: &mut Partial) {
        if depth == V {
            acc.examined += 1;
            let pa = ParityAssignment::from_values(self.p).expect("2-bit values");
            (self.visitor)(&pa);
            self.kernel.record(acc, &self.p, !equal, Some(n2));
            return;
        }
        let earlier = self.kernel.g.neighbor_mask(depth) & ((1u16 << depth) - 1);
        for cand in 0..4u8 {
            let mut ok = true;
            let mut eq = equal;
            let mut m = earlier;
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                m &= m - 1;
                if self.p[k] == cand ^ 3 {
                    ok = false;
                    break;
                }
                eq |= self.p[k] == cand;
            }
            if !ok {
                continue;
            }
            let mut add = 0u64;
            for k in 0..depth {
                add += self.kernel.n2[k][depth][(self.p[k] ^ cand).count_ones() as usize] as u64;
            }
            self.p[depth] = cand;
            self.descend(depth + 1, eq, n2 + add, acc);
        }
    }

    /// Runs the shard whose first `SHARD_PREFIX` parities are `prefix`.
    fn run_shard(&mut self, prefix: u32, acc: &mut Partial) {
        let mut equal = false;
        let mut n2 = self.kernel.intra_n2;
        for d in 0..SHARD_PREFIX {
            let cand = ((prefix >> (2 * (SHARD_PREFIX - 1 - d))) & 3) as u8;
            let mut m = self.kernel.g.neighbor_mask(d) & ((1u16 << d) - 1);
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                m &= m - 1;
                if self.p[k] == cand ^ 3 {
                    return;
                }
                equal |= self.p[k] == cand;
            }
            for k in 0..d {
                n2 += self.kernel.n2[k][d][(self.p[k] ^ cand).count_ones() as usize] as u64;
            }
            self.p[d] = cand;
        }
        self.descend(SHARD_PREFIX, equal, n2, acc);
    }
}

/// Runs `job(shard, acc)` for `shards` shards over `workers` threads and
/// merges the partial results in shard order.
fn run_sharded(
    shards: usize,
    workers: usize,
    job: impl Fn(usize, &mut Partial) + Sync,
) -> Partial {
    let results: Vec<Mutex<Option<Partial>>> = (0..shards).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let s = next.fetch_add(1, Ordering::Relaxed);
        if s >= shards {
            break;
        }
        let mut acc = Partial::new();
        job(s, &mut acc);
        *results[s].lock().unwrap() = Some(acc);
    };
    if workers <= 1 {
        work();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(work);
            }
        });
    }
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every shard ran"))
        .fold(Partial::new(), Partial::merge)
}

fn backtracking<F: Fn(&ParityAssignment) + Sync>(kernel: &Kernel<'_>, workers: usize, visitor: &F) -> Partial {
    run_sharded(1 << (2 * SHARD_PREFIX), workers, |shard, acc| {
        let mut bt = Backtracker { kernel, visitor, p: [0; V] };
        bt.run_shard(shard as u32, acc);
    })
}

const HALF: usize = V / 2;
const HALF_SPACE: usize = 1 << (2 * HALF);

fn half_values(bits: usize) -> [u8; HALF] {
    std::array::from_fn(|i| ((bits >> (2 * (HALF - 1 - i))) & 3) as u8)
}

fn full_sweep<F: Fn(&ParityAssignment) + Sync>(kernel: &Kernel<'_>, workers: usize, visitor: &F) -> Partial {
    let g = kernel.g;
    // Per low-half assignment: one-hot parity of each low vertex in bits
    // 4*i + p, bit 32 when an edge inside the low half is complementary and
    // bit 33 when one joins equal parities.
    const LOW_INVALID: u64 = 1 << 32;
    const LOW_EQUAL: u64 = 1 << 33;
    let low_code: Vec<u64> = (0..HALF_SPACE)
        .map(|b| {
            let q = half_values(b);
            let mut code = 0u64;
            for (i, &p) in q.iter().enumerate() {
                code |= 1 << (4 * i + p as usize);
                let mut m = g.neighbor_mask(HALF + i) >> HALF;
                while m != 0 {
                    let k = m.trailing_zeros() as usize;
                    m &= m - 1;
                    if q[k] == p ^ 3 {
                        code |= LOW_INVALID;
                    }
                    if q[k] == p {
                        code |= LOW_EQUAL;
                    }
                }
            }
            code
        })
        .collect();

    const OUTER_CHUNK: usize = 256;
    run_sharded(HALF_SPACE / OUTER_CHUNK, workers, |shard, acc| {
        for a in shard * OUTER_CHUNK..(shard + 1) * OUTER_CHUNK {
            let hi = half_values(a);
            // forbidden: complementary parities across edges; same: equal ones
            let mut forbidden = LOW_INVALID;
            let mut same = LOW_EQUAL;
            let mut hi_equal = false;
            for (i, &p) in hi.iter().enumerate() {
                let m = g.neighbor_mask(i);
                for k in 0..HALF {
                    if m >> k & 1 == 1 && hi[k] == p ^ 3 {
                        forbidden = u64::MAX;
                    }
                    hi_equal |= m >> k & 1 == 1 && hi[k] == p;
                }
                let mut lo = m >> HALF;
                while lo != 0 {
                    let k = lo.trailing_zeros() as usize;
                    lo &= lo - 1;
                    forbidden |= 1 << (4 * k + (p ^ 3) as usize);
                    same |= 1 << (4 * k + p as usize);
                }
            }
            acc.examined += HALF_SPACE as u64;
            for (b, &code) in low_code.iter().enumerate() {
                if code & forbidden != 0 {
                    continue;
                }
                let mut p = [0u8; V];
                p[..HALF].copy_from_slice(&hi);
                p[HALF..].copy_from_slice(&half_values(b));
                let pa = ParityAssignment::from_values(p).expect("2-bit values");
                visitor(&pa);
                let dmin2 = !hi_equal && code & same == 0;
                kernel.record(acc, &p, dmin2, None);
            }
        }
    })
}

fn finish(mode: SearchMode, g: &Distance3Graph, partial: Partial) -> CensusReport {
    let family_size = max_sum_family(g).len() as u64;
    let ms = partial.max_sum;
    let mn = partial.min_n2;
    CensusReport {
        mode,
        total_assignments_examined: partial.examined,
        valid_count: partial.valid,
        valid_dmin2_count: partial.valid_dmin2,
        max_sum_value: ms.value,
        max_sum_count: ms.count,
        max_sum_all_match_construction: ms.all_match && ms.count > 0,
        max_sum_all_dmin2: ms.all_dmin2 && ms.count > 0,
        min_n2_over_valid_dmin2: if mn.count == 0 { 0 } else { mn.value },
        min_n2_count: mn.count,
        min_n2_achievers_match_construction: mn.all_match && mn.count == family_size,
        family_size,
        max_sum_witness: ms.witness.map(ParityAssignment::unpack),
        min_n2_witness: mn.witness.map(ParityAssignment::unpack),
    }
}

/// Visits every assignment with no complementary pair across an edge of
/// `g`, exactly once, and reports census facts about them.
///
/// With `worker_count = 1` the visitor sees assignments in lexicographic
/// order; with more workers the calls interleave across threads, but the
/// report is identical.
pub fn enumerate_valid<F>(g: &Distance3Graph, strategy: SearchStrategy, visitor: F) -> CensusReport
where
    F: Fn(&ParityAssignment) + Sync,
{
    let kernel = Kernel::new(g);
    let workers = strategy.worker_count.max(1);
    let partial = match strategy.mode {
        SearchMode::Backtracking => backtracking(&kernel, workers, &visitor),
        SearchMode::FullSweep => full_sweep(&kernel, workers, &visitor),
    };
    finish(strategy.mode, g, partial)
}

/// Census with the default backtracking strategy.
pub fn census(g: &Distance3Graph, strategy: SearchStrategy) -> CensusReport {
    enumerate_valid(g, strategy, |_| {})
}

/// Maximum sum-distance over valid assignments and how it is attained.
pub fn max_sum_census(g: &Distance3Graph) -> CensusReport {
    census(g, SearchStrategy::default())
}

/// Minimum `N_2` over valid `d_min = 2` assignments and its minimisers.
pub fn min_n2_census(g: &Distance3Graph) -> CensusReport {
    census(g, SearchStrategy::default())
}

/// Outcome of one certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// `key=value` facts backing the verdict.
    pub detail: String,
    pub witness: Option<ParityAssignment>,
}

/// All certifications plus the census they rest on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificationReport {
    pub census: CensusReport,
    pub checks: Vec<Check>,
}

impl CertificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Line-oriented `key=value` report.
    pub fn to_key_value(&self) -> String {
        let mut out = self.census.to_key_value();
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "fail" };
            write!(out, "check.{}={status}", c.name).unwrap();
            if !c.detail.is_empty() {
                write!(out, " {}", c.detail).unwrap();
            }
            if let Some(w) = &c.witness {
                write!(out, " witness=\"{w}\"").unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "result={}", if self.all_passed() { "pass" } else { "fail" }).unwrap();
        out
    }
}

/// Random assignments checked for the validity equivalence.
pub const RANDOM_CORPUS_SIZE: usize = 10_000;
/// Seed of that random corpus.
pub const CORPUS_SEED: u64 = 0x5EFC_C0DE;
/// One valid assignment in this many is drawn from the census into the
/// validity/`d_min` corpus, chosen by a hash of its packed value.
pub const VALID_SAMPLE_STRIDE: u32 = 512;

fn sampled(packed: u32) -> bool {
    packed.wrapping_mul(0x9E37_79B1).rotate_left(13) % VALID_SAMPLE_STRIDE == 0
}

/// Runs the census and certifies, by brute force against the definitions:
///
/// * `validity`: the edge test agrees with cross-class distance >= 3;
/// * `dmin2`: the equal-parity edge test agrees with the spectrum's
///   `d_min`, and the optimal-FER code has `d_min = 1`;
/// * `sum_bound`: no valid assignment exceeds 73728, the bound is
///   attained, the message part is 57344;
/// * `max_sum`: maximisers are exactly the construction family;
/// * `min_n2`: maximisers have `d_min = 2`, and the minimum `N_2`
///   among valid `d_min = 2` assignments is attained exactly by the family.
pub fn certify_theorems(g: &Distance3Graph, strategy: SearchStrategy) -> CertificationReport {
    let cb = HammingCodebook::new();
    let f = BooleanFunction::hamming_membership(&cb);

    let samples = Mutex::new(Vec::new());
    let census = enumerate_valid(g, strategy, |pa| {
        let packed = pa.pack();
        if sampled(packed) {
            samples.lock().unwrap().push(packed);
        }
    });
    let mut corpus: Vec<u32> = samples.into_inner().unwrap();
    corpus.extend((0..4).map(|p| ParityAssignment::constant(p).pack()));
    let family = max_sum_family(g);
    corpus.extend(family.iter().map(ParityAssignment::pack));
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    corpus.extend((0..RANDOM_CORPUS_SIZE).map(|_| rng.random::<u32>()));
    corpus.sort_unstable();
    corpus.dedup();

    let mut checks = Vec::new();

    // validity equivalence and d_min equivalence over the same corpus
    let mut validity_bad = None;
    let mut dmin_bad = None;
    let (mut graph_valid, mut dmin_checked) = (0u64, 0u64);
    for &packed in &corpus {
        let pa = ParityAssignment::unpack(packed);
        let code = extend_to_full(&pa, &cb);
        let brute = cross_class_min_distance(&code, &f).expect("arity 7") >= 3;
        let graph = is_valid(&pa, g);
        graph_valid += graph as u64;
        if brute != graph {
            validity_bad.get_or_insert(pa);
        }
        if brute {
            dmin_checked += 1;
            let by_spectrum = spectrum(&code).d_min == 2;
            let agree = matches!(has_dmin_2(&pa, g), Ok(b) if b == by_spectrum);
            if !agree {
                dmin_bad.get_or_insert(pa);
            }
        }
    }
    checks.push(Check {
        name: "validity",
        passed: validity_bad.is_none(),
        detail: format!("corpus={} graph_valid={graph_valid}", corpus.len()),
        witness: validity_bad,
    });
    let c2 = optimal_fer_code(&cb, Word::new(0, 2).expect("2-bit")).expect("valid parity");
    let c2_dmin = spectrum(&c2).d_min;
    checks.push(Check {
        name: "dmin2",
        passed: dmin_bad.is_none() && c2_dmin == 1,
        detail: format!("valid_checked={dmin_checked} optimal_fer_dmin={c2_dmin}"),
        witness: dmin_bad,
    });

    let message_part = crate::spectrum::distance_matrix(&c2).message_part_total();
    checks.push(Check {
        name: "sum_bound",
        passed: census.max_sum_value == MAX_SUM_DISTANCE && message_part == MESSAGE_SUM_DISTANCE,
        detail: format!("max_sum={} message_part={message_part}", census.max_sum_value),
        witness: None,
    });

    checks.push(Check {
        name: "max_sum",
        passed: census.max_sum_value == MAX_SUM_DISTANCE
            && census.max_sum_all_match_construction
            && census.max_sum_count == census.family_size,
        detail: format!("max_sum_count={} family_size={}", census.max_sum_count, census.family_size),
        witness: census.max_sum_witness.or_else(|| {
            // a family member the census never reached
            family.iter().find(|pa| !is_valid(pa, g)).copied()
        }),
    });

    let table = SpherePairSpectra::new(&cb);
    let off_family = family.iter().find(|pa| table.n2(pa.values()) != census.min_n2_over_valid_dmin2);
    checks.push(Check {
        name: "min_n2",
        passed: census.max_sum_all_dmin2
            && census.min_n2_achievers_match_construction
            && off_family.is_none(),
        detail: format!(
            "min_N2={} min_N2_count={} max_sum_all_dmin2={}",
            census.min_n2_over_valid_dmin2, census.min_n2_count, census.max_sum_all_dmin2
        ),
        witness: census.min_n2_witness.or(off_family.copied()),
    });

    CertificationReport { census, checks }
}
