//! BPSK over AWGN with soft-decision maximum-likelihood decoding.
//!
//! Each trial draws `u` uniformly from `F_2^7`, sends the nine BPSK symbols
//! of `Enc(u)`, and decodes to the `u'` whose encoding is closest in
//! Euclidean distance to the received vector. A bit error is counted per
//! differing data bit of `u` and `u'`; a function error when
//! `f(u') != f(u)`.
//!
//! Noise is normalised to the information rate `R = 7/9`:
//! `sigma^2 = 1 / (2 R Eb/N0)`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::fcc::{BooleanFunction, SefccCode, ENCODED_LEN};
use crate::hamming::SPACE;
use crate::word::Word;

/// Data bits per frame.
pub const DATA_BITS: usize = 7;
/// Information rate `k / n`.
pub const CODE_RATE: f64 = 7.0 / 9.0;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Symbols of one frame.
pub type Frame = [f64; ENCODED_LEN];

/// Maps bit 0 to `+1` and bit 1 to `-1`, coordinate 1 first.
pub fn modulate_bpsk(w: Word) -> Result<Frame> {
    if w.len() != ENCODED_LEN {
        return Err(Error::UnexpectedLength { expected: ENCODED_LEN, actual: w.len() });
    }
    Ok(modulate_raw(w.bits() as u16))
}

#[inline]
fn modulate_raw(bits: u16) -> Frame {
    std::array::from_fn(|i| if bits >> (ENCODED_LEN - 1 - i) & 1 == 1 { -1.0 } else { 1.0 })
}

/// Per-coordinate noise variance at `ebn0_db`.
pub fn noise_variance(ebn0_db: f64) -> f64 {
    1.0 / (2.0 * CODE_RATE * 10f64.powf(ebn0_db / 10.0))
}

/// Adds independent `N(0, sigma^2)` noise to each symbol.
pub fn add_awgn<R: Rng + ?Sized>(symbols: &Frame, ebn0_db: f64, rng: &mut R) -> Result<Frame> {
    if !ebn0_db.is_finite() {
        return Err(Error::Config(format!("Eb/N0 {ebn0_db} dB is not finite")));
    }
    let sigma = noise_variance(ebn0_db).sqrt();
    Ok(add_noise(symbols, sigma, rng))
}

#[inline]
fn add_noise<R: Rng + ?Sized>(symbols: &Frame, sigma: f64, rng: &mut R) -> Frame {
    std::array::from_fn(|i| {
        let n: f64 = rng.sample(StandardNormal);
        symbols[i] + sigma * n
    })
}

/// Exhaustive ML decoder over the 128 encodings of a code.
///
/// All BPSK images have the same energy, so minimising squared Euclidean
/// distance is maximising correlation. The data part of the correlation is
/// built for all 128 inputs by doubling, the parity part is one of four
/// values. Ties go to the smallest `u`.
#[derive(Clone, Debug)]
pub struct SoftDecoder {
    parity: [u8; SPACE],
}

impl SoftDecoder {
    pub fn new(code: &SefccCode) -> Self {
        SoftDecoder { parity: std::array::from_fn(|u| code.parity_value(u)) }
    }

    /// Index of the decoded input.
    #[inline]
    pub fn decode(&self, y: &Frame) -> usize {
        let mut data = [0f64; SPACE];
        data[0] = y[..DATA_BITS].iter().sum();
        for level in 0..DATA_BITS {
            let len = 1 << level;
            let flip = 2.0 * y[DATA_BITS - 1 - level];
            for u in 0..len {
                data[u + len] = data[u] - flip;
            }
        }
        let (a, b) = (y[DATA_BITS], y[DATA_BITS + 1]);
        let pc = [a + b, a - b, -a + b, -a - b];

        let mut best = 0;
        let mut best_corr = f64::NEG_INFINITY;
        for (u, &d) in data.iter().enumerate() {
            let corr = d + pc[self.parity[u] as usize];
            if corr > best_corr {
                best_corr = corr;
                best = u;
            }
        }
        best
    }
}

/// Decodes `observations` to the input whose encoding is nearest.
pub fn ml_soft_decode(observations: &Frame, code: &SefccCode) -> Word {
    let u = SoftDecoder::new(code).decode(observations);
    Word::new(u as u32, DATA_BITS).expect("7-bit input")
}

/// Simulation parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub ebn0_db_points: Vec<f64>,
    pub trials_per_point: u64,
    pub seed: u64,
    pub worker_count: usize,
}

impl SimConfig {
    pub fn new(ebn0_db_points: Vec<f64>, trials_per_point: u64, seed: u64) -> Result<Self> {
        let cfg = SimConfig { ebn0_db_points, trials_per_point, seed, worker_count: 1 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Points `start, start + step, ...` up to and including `stop`.
    pub fn sweep(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
            return Err(Error::Config(format!("bad SNR range {start}..{stop} step {step}")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|i| start + i as f64 * step).collect())
    }

    pub fn with_workers(mut self, worker_count: usize) -> Result<Self> {
        self.worker_count = worker_count;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.trials_per_point == 0 {
            return Err(Error::Config("trials_per_point must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Config("worker_count must be at least 1".into()));
        }
        if let Some(x) = self.ebn0_db_points.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("Eb/N0 point {x} is not finite")));
        }
        Ok(())
    }
}

/// Counts and estimates at one Eb/N0 point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub func_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub ber_ci95: (f64, f64),
    pub fer_ci95: (f64, f64),
}

impl PointResult {
    fn from_counts(ebn0_db: f64, trials: u64, bit_errors: u64, func_errors: u64) -> Self {
        let bits = trials * DATA_BITS as u64;
        PointResult {
            ebn0_db,
            trials,
            bit_errors,
            func_errors,
            ber: bit_errors as f64 / bits as f64,
            fer: func_errors as f64 / trials as f64,
            ber_ci95: wilson_interval(bit_errors, bits),
            fer_ci95: wilson_interval(func_errors, trials),
        }
    }
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Output of [`run_simulation`].
#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub seed: u64,
    pub worker_count: usize,
    pub points: Vec<PointResult>,
}

pub const CSV_HEADER: &str =
    "ebn0_db,trials,bit_errors,ber,ber_ci_lo,ber_ci_hi,func_errors,fer,fer_ci_lo,fer_ci_hi";

impl SimResult {
    fn metadata(&self, out: &mut String, code_ids: &[&str]) {
        writeln!(out, "# seed={}", self.seed).unwrap();
        writeln!(out, "# workers={}", self.worker_count).unwrap();
        writeln!(out, "# code={}", code_ids.join(",")).unwrap();
        writeln!(out, "# rate=7/9 sigma2=1/(2*R*EbN0) data_bits=7").unwrap();
        writeln!(out, "# decoder=soft-ml-128 fer_event=f(u_hat)!=f(u)").unwrap();
    }

    /// CSV with `#` metadata lines and one row per point.
    pub fn to_csv(&self, code_id: &str) -> String {
        let mut out = String::new();
        self.metadata(&mut out, &[code_id]);
        writeln!(out, "{CSV_HEADER}").unwrap();
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                p.ebn0_db,
                p.trials,
                p.bit_errors,
                p.ber,
                p.ber_ci95.0,
                p.ber_ci95.1,
                p.func_errors,
                p.fer,
                p.fer_ci95.0,
                p.fer_ci95.1
            )
            .unwrap();
        }
        out
    }
}

/// Joins several runs over the same SNR points into one CSV; columns of
/// each code are prefixed with its identifier.
pub fn compare_csv(runs: &[(&str, &SimResult)]) -> Result<String> {
    let (_, first) = runs.first().ok_or_else(|| Error::Config("nothing to compare".into()))?;
    for (id, r) in runs {
        let same = r.points.len() == first.points.len()
            && r.points.iter().zip(&first.points).all(|(a, b)| a.ebn0_db == b.ebn0_db);
        if !same {
            return Err(Error::Config(format!("run {id} uses different Eb/N0 points")));
        }
    }
    let ids: Vec<&str> = runs.iter().map(|(id, _)| *id).collect();
    let mut out = String::new();
    first.metadata(&mut out, &ids);
    out.push_str("ebn0_db");
    for id in &ids {
        for col in CSV_HEADER.split(',').skip(1) {
            write!(out, ",{id}_{col}").unwrap();
        }
    }
    out.push('\n');
    for (i, p0) in first.points.iter().enumerate() {
        write!(out, "{}", p0.ebn0_db).unwrap();
        for (_, r) in runs {
            let p = &r.points[i];
            write!(
                out,
                ",{},{},{},{},{},{},{},{},{}",
                p.trials,
                p.bit_errors,
                p.ber,
                p.ber_ci95.0,
                p.ber_ci95.1,
                p.func_errors,
                p.fer,
                p.fer_ci95.0,
                p.fer_ci95.1
            )
            .unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// RNG for one worker at one SNR point.
fn stream(seed: u64, point: usize, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | worker as u64);
    rng
}

fn run_worker(
    decoder: &SoftDecoder,
    code: &SefccCode,
    f: &BooleanFunction,
    sigma: f64,
    trials: u64,
    mut rng: ChaCha8Rng,
) -> (u64, u64) {
    let images: Vec<Frame> = code.encodings().iter().map(|&e| modulate_raw(e)).collect();
    let (mut bit_errors, mut func_errors) = (0u64, 0u64);
    for _ in 0..trials {
        let u = rng.random_range(0..SPACE);
        let y = add_noise(&images[u], sigma, &mut rng);
        let v = decoder.decode(&y);
        bit_errors += (u ^ v).count_ones() as u64;
        func_errors += (f.eval(u) != f.eval(v)) as u64;
    }
    (bit_errors, func_errors)
}

/// Monte-Carlo BER/FER estimates for `code` at every configured point.
///
/// Worker `w` of `W` runs `trials / W` trials (the first `trials % W`
/// workers one more) on its own ChaCha stream keyed by the seed, the point
/// index and `w`, so results are bit-identical for a fixed worker count.
pub fn run_simulation(code: &SefccCode, f: &BooleanFunction, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    if f.arity() != DATA_BITS {
        return Err(Error::Precondition(format!("function arity {} is not 7", f.arity())));
    }
    let decoder = SoftDecoder::new(code);
    let workers = cfg.worker_count as u64;
    let mut points = Vec::with_capacity(cfg.ebn0_db_points.len());
    for (pi, &ebn0) in cfg.ebn0_db_points.iter().enumerate() {
        let sigma = noise_variance(ebn0).sqrt();
        let share = |w: u64| cfg.trials_per_point / workers + (w < cfg.trials_per_point % workers) as u64;
        let counts: Vec<(u64, u64)> = if workers == 1 {
            vec![run_worker(&decoder, code, f, sigma, cfg.trials_per_point, stream(cfg.seed, pi, 0))]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let decoder = &decoder;
                        scope.spawn(move || {
                            run_worker(decoder, code, f, sigma, share(w), stream(cfg.seed, pi, w as usize))
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            })
        };
        let (bits, funcs) = counts.iter().fold((0, 0), |(a, b), (x, y)| (a + x, b + y));
        points.push(PointResult::from_counts(ebn0, cfg.trials_per_point, bits, funcs));
    }
    Ok(SimResult { seed: cfg.seed, worker_count: cfg.worker_count, points })
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Union bound on the function error rate:
/// `(1/128) sum_u sum_{v: f(v) != f(u)} Q(sqrt(2 R Eb/N0 d(Enc u, Enc v)))`.
pub fn union_bound_fer(code: &SefccCode, f: &BooleanFunction, ebn0_db: f64) -> Result<f64> {
    if f.arity() != DATA_BITS {
        return Err(Error::Precondition(format!("function arity {} is not 7", f.arity())));
    }
    let mut ordered = [0u64; ENCODED_LEN + 1];
    let enc = code.encodings();
    for u in 0..SPACE {
        for v in 0..SPACE {
            if f.eval(u) != f.eval(v) {
                ordered[(enc[u] ^ enc[v]).count_ones() as usize] += 1;
            }
        }
    }
    let snr = CODE_RATE * 10f64.powf(ebn0_db / 10.0);
    let total: f64 = ordered
        .iter()
        .enumerate()
        .map(|(d, &n)| n as f64 * q_function((2.0 * snr * d as f64).sqrt()))
        .sum();
    Ok(total / SPACE as f64)
}
