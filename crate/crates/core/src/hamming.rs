//! The [7,4,3] Hamming code in systematic layout `[m1..m4, p1, p2, p3]`.
//!
//! Parities are `p1 = m2+m3+m4`, `p2 = m1+m3+m4`, `p3 = m1+m2+m4`. Codeword
//! `i` (0-based here, `c_{i+1}` in 1-based notation) encodes the message whose
//! 4-bit value is `i`. Being perfect, the code splits `F_2^7` into sixteen
//! radius-one spheres; the tables for that split are built once at
//! construction.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::Word;

/// Number of codewords.
pub const NUM_CODEWORDS: usize = 16;
/// Code length.
pub const N: usize = 7;
/// Size of `F_2^7`.
pub const SPACE: usize = 1 << N;

/// Parity-check rows as 7-bit masks (coordinate 1 = MSB).
const PARITY_CHECK: [u8; 3] = [0b0111100, 0b1011010, 0b1101001];

/// Encodes a 4-bit message.
pub fn encode_hamming(m: Word) -> Result<Word> {
    if m.len() != 4 {
        return Err(Error::UnexpectedLength { expected: 4, actual: m.len() });
    }
    let [m1, m2, m3, m4] = [m.get(0), m.get(1), m.get(2), m.get(3)].map(u32::from);
    let p1 = m2 ^ m3 ^ m4;
    let p2 = m1 ^ m3 ^ m4;
    let p3 = m1 ^ m2 ^ m4;
    Word::new((m.bits() << 3) | (p1 << 2) | (p2 << 1) | p3, N)
}

/// Codebook plus the precomputed sphere partition of `F_2^7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingCodebook {
    codewords: [Word; NUM_CODEWORDS],
    sphere_index: [u8; SPACE],
    neighbor_slot: [u8; SPACE],
    /// `syndrome -> flipped coordinate + 1`, 0 for the zero syndrome.
    syndrome_slot: [u8; 8],
}

impl Default for HammingCodebook {
    fn default() -> Self {
        Self::new()
    }
}

impl HammingCodebook {
    pub fn new() -> Self {
        let codewords: [Word; NUM_CODEWORDS] = std::array::from_fn(|i| {
            encode_hamming(Word::new(i as u32, 4).expect("4-bit message")).expect("length 4")
        });
        let mut index_of = [u8::MAX; SPACE];
        for (i, c) in codewords.iter().enumerate() {
            index_of[c.bits() as usize] = i as u8;
        }

        let mut syndrome_slot = [0u8; 8];
        for coord in 0..N {
            syndrome_slot[syndrome(1 << (N - 1 - coord)) as usize] = coord as u8 + 1;
        }

        let mut sphere_index = [0u8; SPACE];
        let mut neighbor_slot = [0u8; SPACE];
        for v in 0..SPACE {
            let slot = syndrome_slot[syndrome(v as u8) as usize];
            let center = if slot == 0 { v } else { v ^ (1 << (N - slot as usize)) };
            sphere_index[v] = index_of[center];
            neighbor_slot[v] = slot;
        }

        HammingCodebook { codewords, sphere_index, neighbor_slot, syndrome_slot }
    }

    /// The sixteen codewords in message order.
    pub fn codewords(&self) -> &[Word; NUM_CODEWORDS] {
        &self.codewords
    }

    pub fn codeword(&self, i: usize) -> Word {
        self.codewords[i]
    }

    /// The 3x7 parity-check matrix, row-major.
    pub fn parity_check(&self) -> [[u8; N]; 3] {
        PARITY_CHECK.map(|row| std::array::from_fn(|c| (row >> (N - 1 - c)) & 1))
    }

    /// Three-bit syndrome of `v`.
    pub fn syndrome(&self, v: Word) -> Result<u8> {
        check_len7(v)?;
        Ok(syndrome(v.bits() as u8))
    }

    /// Membership function: 1 for codewords, 0 otherwise.
    pub fn is_member(&self, v: Word) -> Result<bool> {
        Ok(self.syndrome(v)? == 0)
    }

    /// `(sphere, slot)` of `v`: the sphere is the index of the unique codeword
    /// within distance one, the slot is 0 at the centre and otherwise the
    /// 1-based flipped coordinate.
    pub fn nearest_codeword(&self, v: Word) -> Result<(usize, usize)> {
        check_len7(v)?;
        let idx = v.bits() as usize;
        Ok((self.sphere_index[idx] as usize, self.neighbor_slot[idx] as usize))
    }

    /// Sphere index for every `v` in natural order.
    pub fn sphere_table(&self) -> &[u8; SPACE] {
        &self.sphere_index
    }

    /// Slot for every `v` in natural order.
    pub fn slot_table(&self) -> &[u8; SPACE] {
        &self.neighbor_slot
    }

    /// Corrects up to one error by syndrome decoding.
    pub fn correct(&self, v: Word) -> Result<Word> {
        let slot = self.syndrome_slot[self.syndrome(v)? as usize] as usize;
        Ok(if slot == 0 { v } else { v.flip(slot - 1) })
    }

    /// The eight members of sphere `i`, centre first, then slots 1..=7.
    pub fn sphere(&self, i: usize) -> [Word; 8] {
        let c = self.codewords[i];
        std::array::from_fn(|slot| if slot == 0 { c } else { c.flip(slot - 1) })
    }

    /// `counts[w]` = number of codewords of weight `w`.
    pub fn weight_enumerator(&self) -> [usize; N + 1] {
        let mut counts = [0; N + 1];
        for c in &self.codewords {
            counts[c.weight() as usize] += 1;
        }
        counts
    }

    /// Sixteen-row text table: index, message, codeword, weight.
    pub fn table(&self) -> String {
        let mut out = String::from("index message codeword weight\n");
        for (i, c) in self.codewords.iter().enumerate() {
            let msg = Word::new(i as u32, 4).expect("4-bit message");
            writeln!(out, "{:>5} {:>7} {:>8} {:>6}", i + 1, msg, c, c.weight()).unwrap();
        }
        out
    }

    /// The distance-3 graph on the codewords.
    pub fn distance3_graph(&self) -> Distance3Graph {
        Distance3Graph::from_codebook(self)
    }
}

fn syndrome(v: u8) -> u8 {
    PARITY_CHECK
        .iter()
        .fold(0, |s, row| (s << 1) | ((row & v).count_ones() as u8 & 1))
}

fn check_len7(v: Word) -> Result<()> {
    if v.len() != N {
        return Err(Error::UnexpectedLength { expected: N, actual: v.len() });
    }
    Ok(())
}

/// Graph on the 16 codewords joining pairs at distance 3, together with the
/// odd/even weight bipartition of its vertices.
///
/// Vertices are 0-based codeword indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distance3Graph {
    edges: Vec<(usize, usize)>,
    neighbors: [u16; NUM_CODEWORDS],
    partite_odd: Vec<usize>,
    partite_even: Vec<usize>,
}

impl Distance3Graph {
    pub fn from_codebook(cb: &HammingCodebook) -> Self {
        let cw = cb.codewords();
        let mut edges = Vec::new();
        for i in 0..NUM_CODEWORDS {
            for k in i + 1..NUM_CODEWORDS {
                if (cw[i].bits() ^ cw[k].bits()).count_ones() == 3 {
                    edges.push((i, k));
                }
            }
        }
        let (partite_odd, partite_even) =
            (0..NUM_CODEWORDS).partition(|&i| cw[i].weight() % 2 == 1);
        Self::from_parts(edges, partite_odd, partite_even)
    }

    /// Builds a graph from explicit parts. Edges are normalised to `i < k`
    /// and sorted; no structural property is enforced, which lets tests
    /// feed deliberately broken graphs to the certifier.
    pub fn from_parts(
        edges: Vec<(usize, usize)>,
        partite_odd: Vec<usize>,
        partite_even: Vec<usize>,
    ) -> Self {
        let mut edges: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut neighbors = [0u16; NUM_CODEWORDS];
        for &(i, k) in &edges {
            neighbors[i] |= 1 << k;
            neighbors[k] |= 1 << i;
        }
        Distance3Graph { edges, neighbors, partite_odd, partite_even }
    }

    /// The same graph with edge `{i, k}` removed.
    pub fn without_edge(&self, i: usize, k: usize) -> Self {
        let (a, b) = (i.min(k), i.max(k));
        let edges = self.edges.iter().copied().filter(|&e| e != (a, b)).collect();
        Self::from_parts(edges, self.partite_odd.clone(), self.partite_even.clone())
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbour set of `v` as a 16-bit mask (bit `k` = vertex `k`).
    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u16 {
        self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].count_ones() as usize
    }

    pub fn partite_odd(&self) -> &[usize] {
        &self.partite_odd
    }

    pub fn partite_even(&self) -> &[usize] {
        &self.partite_even
    }

    /// True iff every edge joins the two partite sets.
    pub fn is_bipartite_split(&self) -> bool {
        let odd: u16 = self.partite_odd.iter().fold(0, |m, &v| m | 1 << v);
        self.edges
            .iter()
            .all(|&(i, k)| (odd >> i & 1) != (odd >> k & 1))
    }
}
