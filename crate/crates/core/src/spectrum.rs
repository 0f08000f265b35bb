//! Distance matrices, distance spectra and sum-distance.
//!
//! Two independent routes are provided. [`distance_matrix`] and [`spectrum`]
//! compare all 128x128 encodings directly. [`SpherePairSpectra`] and
//! [`balanced_sum_distance`] exploit the sphere structure of a code built by
//! [`extend_to_full`](crate::extend_to_full) and cost a few hundred
//! operations per assignment, which is what makes the census tractable.

use std::fmt::Write as _;

use crate::fcc::{ParityAssignment, SefccCode, ENCODED_LEN};
use crate::hamming::{HammingCodebook, NUM_CODEWORDS, SPACE};

/// Distance bins `0..=9`.
pub const BINS: usize = ENCODED_LEN + 1;

/// `sum_{u,v} d_H(u, v)` over ordered pairs of `F_2^7`: `7 * 2^13`.
pub const MESSAGE_SUM_DISTANCE: u64 = 57_344;
/// Upper bound on the sum-distance of any SEFCC for this problem.
pub const MAX_SUM_DISTANCE: u64 = 73_728;
/// Unordered distinct pairs of 128 encodings.
pub const UNORDERED_PAIRS: u64 = (SPACE as u64) * (SPACE as u64 - 1) / 2;

/// Pairwise encoding distances, row-major in natural order of `F_2^7`.
#[derive(Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    entries: Vec<u8>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * SPACE + j]
    }

    pub fn dim(&self) -> usize {
        SPACE
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * SPACE..(i + 1) * SPACE]
    }

    /// `sum_{i,j} D(i,j)`.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&d| d as u64).sum()
    }

    /// Message part of the total: `sum_{i,j} d_H(u_i, u_j)`.
    pub fn message_part_total(&self) -> u64 {
        (0..SPACE)
            .flat_map(|i| (0..SPACE).map(move |j| (i ^ j).count_ones() as u64))
            .sum()
    }
}

impl std::fmt::Debug for DistanceMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DistanceMatrix({SPACE}x{SPACE})")
    }
}

/// Hamming distance matrix of a code.
pub fn distance_matrix(code: &SefccCode) -> DistanceMatrix {
    let mut entries = Vec::with_capacity(SPACE * SPACE);
    for i in 0..SPACE {
        for j in 0..SPACE {
            let msg = (i ^ j).count_ones();
            let par = (code.parity_value(i) ^ code.parity_value(j)).count_ones();
            entries.push((msg + par) as u8);
        }
    }
    DistanceMatrix { entries }
}

/// Distance distribution of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DistanceSpectrum {
    /// `counts[d]` = unordered distinct pairs at distance `d`.
    pub counts: [u64; BINS],
    /// Smallest `d` with a non-zero count.
    pub d_min: u32,
    /// Ordered-pair sum, `2 * sum_d d * counts[d]`.
    pub sum_distance: u64,
}

impl DistanceSpectrum {
    pub fn from_counts(counts: [u64; BINS]) -> Self {
        let d_min = counts.iter().position(|&c| c > 0).unwrap_or(BINS) as u32;
        let sum_distance = 2 * counts.iter().enumerate().map(|(d, &c)| d as u64 * c).sum::<u64>();
        DistanceSpectrum { counts, d_min, sum_distance }
    }

    /// Number of pairs at distance 2.
    pub fn n2(&self) -> u64 {
        self.counts[2]
    }

    /// `d,count` rows for `d = 0..=9`, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,count\n");
        for (d, c) in self.counts.iter().enumerate() {
            writeln!(out, "{d},{c}").unwrap();
        }
        out
    }
}

/// Spectrum from the full distance matrix.
pub fn spectrum(code: &SefccCode) -> DistanceSpectrum {
    spectrum_of_matrix(&distance_matrix(code))
}

pub fn spectrum_of_matrix(m: &DistanceMatrix) -> DistanceSpectrum {
    let mut counts = [0u64; BINS];
    for i in 0..SPACE {
        for &d in &m.row(i)[i + 1..] {
            counts[d as usize] += 1;
        }
    }
    DistanceSpectrum::from_counts(counts)
}

/// `[n_0^(j), n_1^(j)]` for parity coordinate `j = 1, 2`: how many of the
/// 128 inputs have a 0 or 1 there.
pub fn parity_bit_counts(code: &SefccCode) -> [[u64; 2]; 2] {
    let mut n = [[0u64; 2]; 2];
    for u in 0..SPACE {
        let p = code.parity_value(u);
        n[0][(p >> 1) as usize] += 1;
        n[1][(p & 1) as usize] += 1;
    }
    n
}

/// Sum-distance via the per-coordinate decomposition
/// `57344 + sum_j 2 n_0^(j) n_1^(j)`.
pub fn sum_distance_from_counts(n: [[u64; 2]; 2]) -> u64 {
    MESSAGE_SUM_DISTANCE + n.iter().map(|[n0, n1]| 2 * n0 * n1).sum::<u64>()
}

/// Sum-distance of `extend_to_full(pa)` from centre parities alone. A
/// coordinate that is 0 on `a` centres is 0 on `a + 7 (16 - a)` inputs.
pub fn balanced_sum_distance(pa: &ParityAssignment) -> u64 {
    let mut zeros = [0u64; 2];
    for &p in pa.values() {
        zeros[0] += (p >> 1 == 0) as u64;
        zeros[1] += (p & 1 == 0) as u64;
    }
    let n = zeros.map(|a| {
        let n0 = a + 7 * (NUM_CODEWORDS as u64 - a);
        [n0, SPACE as u64 - n0]
    });
    sum_distance_from_counts(n)
}

/// Precomputed spectrum contributions of every pair of spheres.
///
/// For spheres `i < k` the encoding distances between their 64 member pairs
/// depend on the centre parities only through `delta = d_H(p_i, p_k)`:
/// centre/centre and neighbour/neighbour pairs add `delta`, mixed pairs add
/// `2 - delta`. Pairs inside one sphere are assignment-independent.
#[derive(Clone, Debug)]
pub struct SpherePairSpectra {
    /// `[i][k][delta][d]` for `i < k`.
    cross: Vec<[[u32; BINS]; 3]>,
    intra: [u64; BINS],
}

impl SpherePairSpectra {
    pub fn new(cb: &HammingCodebook) -> Self {
        let mut cross = vec![[[0u32; BINS]; 3]; NUM_CODEWORDS * NUM_CODEWORDS];
        let mut intra = [0u64; BINS];
        for i in 0..NUM_CODEWORDS {
            let si = cb.sphere(i);
            for (a, x) in si.iter().enumerate() {
                for (b, y) in si.iter().enumerate().skip(a + 1) {
                    // both neighbours share a parity; centre vs neighbour differ by 2
                    let par = if a == 0 || b == 0 { 2 } else { 0 };
                    intra[(x.distance(*y).unwrap() + par) as usize] += 1;
                }
            }
            for k in i + 1..NUM_CODEWORDS {
                let sk = cb.sphere(k);
                let slot = &mut cross[i * NUM_CODEWORDS + k];
                for (delta, hist) in slot.iter_mut().enumerate() {
                    for (a, x) in si.iter().enumerate() {
                        for (b, y) in sk.iter().enumerate() {
                            let mixed = (a == 0) != (b == 0);
                            let par = if mixed { 2 - delta as u32 } else { delta as u32 };
                            hist[(x.distance(*y).unwrap() + par) as usize] += 1;
                        }
                    }
                }
            }
        }
        SpherePairSpectra { cross, intra }
    }

    /// Contribution of sphere pair `i < k` at parity distance `delta`.
    #[inline]
    pub fn pair(&self, i: usize, k: usize, delta: usize) -> &[u32; BINS] {
        &self.cross[i * NUM_CODEWORDS + k][delta]
    }

    /// Assignment-independent contribution of pairs inside the spheres.
    pub fn intra(&self) -> &[u64; BINS] {
        &self.intra
    }

    /// Spectrum of `extend_to_full(pa)`.
    pub fn spectrum(&self, pa: &ParityAssignment) -> DistanceSpectrum {
        let p = pa.values();
        let mut counts = self.intra;
        for i in 0..NUM_CODEWORDS {
            for k in i + 1..NUM_CODEWORDS {
                let delta = (p[i] ^ p[k]).count_ones() as usize;
                for (c, &h) in counts.iter_mut().zip(self.pair(i, k, delta)) {
                    *c += h as u64;
                }
            }
        }
        DistanceSpectrum::from_counts(counts)
    }

    /// Only the distance-2 count.
    #[inline]
    pub fn n2(&self, p: &[u8; NUM_CODEWORDS]) -> u64 {
        let mut n2 = self.intra[2];
        for i in 0..NUM_CODEWORDS {
            for k in i + 1..NUM_CODEWORDS {
                n2 += self.pair(i, k, (p[i] ^ p[k]).count_ones() as usize)[2] as u64;
            }
        }
        n2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcc::{construct_max_sum, extend_to_full, optimal_fer_code, MaxSumParams};
    use crate::word::Word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example1() -> (HammingCodebook, SefccCode) {
        let cb = HammingCodebook::new();
        let g = cb.distance3_graph();
        let pa = construct_max_sum(&g, &MaxSumParams::example()).unwrap();
        let code = extend_to_full(&pa, &cb);
        (cb, code)
    }

    #[test]
    fn matrix_basics() {
        let (_, code) = example1();
        let m = distance_matrix(&code);
        for i in 0..SPACE {
            assert_eq!(m.get(i, i), 0);
            for j in 0..SPACE {
                assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        assert_eq!(m.message_part_total(), MESSAGE_SUM_DISTANCE);
        assert_eq!(m.total(), MAX_SUM_DISTANCE);
    }

    #[test]
    fn example1_spectrum() {
        // Frozen from an independent brute-force enumeration of all 8128 pairs.
        let (_, code) = example1();
        let s = spectrum(&code);
        assert_eq!(s.counts, [0, 0, 960, 704, 2944, 832, 2176, 256, 256, 0]);
        assert_eq!(s.d_min, 2);
        assert_eq!(s.sum_distance, MAX_SUM_DISTANCE);
        assert_eq!(s.counts.iter().sum::<u64>(), UNORDERED_PAIRS);
        assert!(s.to_csv().starts_with("d,count\n0,0\n1,0\n2,960\n"));
    }

    #[test]
    fn optimal_fer_has_dmin_1() {
        let cb = HammingCodebook::new();
        let c2 = optimal_fer_code(&cb, Word::new(0, 2).unwrap()).unwrap();
        let s = spectrum(&c2);
        assert_eq!(s.d_min, 1);
        assert_eq!(s.counts[0], 0);
    }

    #[test]
    fn intra_sphere_pairs() {
        let cb = HammingCodebook::new();
        let t = SpherePairSpectra::new(&cb);
        assert_eq!(t.intra()[2], 16 * 21);
        assert_eq!(t.intra()[3], 16 * 7);
        assert_eq!(t.intra().iter().sum::<u64>(), 16 * 28);
    }

    #[test]
    fn fast_routes_match_matrix_on_random_assignments() {
        let cb = HammingCodebook::new();
        let table = SpherePairSpectra::new(&cb);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let pa = ParityAssignment::unpack(rng.random());
            let code = extend_to_full(&pa, &cb);
            let s = spectrum(&code);
            assert_eq!(table.spectrum(&pa), s);
            assert_eq!(table.n2(pa.values()), s.n2());
            assert_eq!(balanced_sum_distance(&pa), s.sum_distance);
            assert_eq!(sum_distance_from_counts(parity_bit_counts(&code)), s.sum_distance);
            assert!(s.sum_distance <= MAX_SUM_DISTANCE);
            assert_eq!(s.sum_distance % 2, 0);
        }
    }
}
