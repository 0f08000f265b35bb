//! Parity assignments and systematic SEFCC encoders for the Hamming
//! membership function.
//!
//! An optimal SEFCC appends two parity bits to every `u` in `F_2^7`. Every
//! non-codeword must carry the complement of its sphere centre's parity, so
//! the whole code is fixed by the sixteen centre parities: a
//! [`ParityAssignment`]. Validity and the `d_min = 2` condition are both
//! local tests on the edges of the distance-3 graph.
//!
//! Parities are handled as 2-bit integers `0..=3` where `0b01` is the
//! printed vector `01`; the complement of `p` is `p ^ 3`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamming::{Distance3Graph, HammingCodebook, NUM_CODEWORDS, SPACE};
use crate::word::Word;

/// Number of parity bits (`2t` with `t = 1`).
pub const PARITY_LEN: usize = 2;
/// Length of an encoding.
pub const ENCODED_LEN: usize = 7 + PARITY_LEN;

const COMPLEMENT: u8 = 0b11;

/// Parities of the sixteen sphere centres, entry `i` belonging to codeword `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityAssignment {
    parities: [u8; NUM_CODEWORDS],
}

impl ParityAssignment {
    /// From 2-bit values; every entry must be `< 4`.
    pub fn from_values(parities: [u8; NUM_CODEWORDS]) -> Result<Self> {
        if let Some(pos) = parities.iter().position(|&p| p > 3) {
            return Err(Error::Parse {
                token: pos,
                message: format!("parity value {} out of range", parities[pos]),
            });
        }
        Ok(ParityAssignment { parities })
    }

    pub fn from_words(words: &[Word]) -> Result<Self> {
        if words.len() != NUM_CODEWORDS {
            return Err(Error::Parse {
                token: words.len(),
                message: format!("expected 16 parities, got {}", words.len()),
            });
        }
        let mut parities = [0u8; NUM_CODEWORDS];
        for (i, w) in words.iter().enumerate() {
            if w.len() != PARITY_LEN {
                return Err(Error::UnexpectedLength { expected: PARITY_LEN, actual: w.len() });
            }
            parities[i] = w.bits() as u8;
        }
        Ok(ParityAssignment { parities })
    }

    /// Every codeword gets parity `p`.
    pub fn constant(p: u8) -> Self {
        assert!(p < 4, "parity value {p} out of range");
        ParityAssignment { parities: [p; NUM_CODEWORDS] }
    }

    #[inline]
    pub fn values(&self) -> &[u8; NUM_CODEWORDS] {
        &self.parities
    }

    #[inline]
    pub fn value(&self, i: usize) -> u8 {
        self.parities[i]
    }

    pub fn parity(&self, i: usize) -> Word {
        Word::new(self.parities[i] as u32, PARITY_LEN).expect("2-bit parity")
    }

    /// Packs into 32 bits, codeword 0 in the top two bits. Numeric order of
    /// packed values is the lexicographic order used by the census.
    pub fn pack(&self) -> u32 {
        self.parities.iter().fold(0, |acc, &p| (acc << 2) | p as u32)
    }

    pub fn unpack(packed: u32) -> Self {
        ParityAssignment {
            parities: std::array::from_fn(|i| ((packed >> (2 * (NUM_CODEWORDS - 1 - i))) & 3) as u8),
        }
    }

    /// XORs a fixed 2-bit mask onto every parity.
    pub fn xor_mask(&self, mask: u8) -> Self {
        ParityAssignment { parities: self.parities.map(|p| p ^ (mask & 3)) }
    }

    /// Exchanges the two parity coordinates.
    pub fn swap_coordinates(&self) -> Self {
        ParityAssignment { parities: self.parities.map(|p| ((p & 1) << 1) | (p >> 1)) }
    }

    /// `n_p` for `p = 00, 01, 10, 11`.
    pub fn symbol_counts(&self) -> [usize; 4] {
        let mut counts = [0; 4];
        for &p in &self.parities {
            counts[p as usize] += 1;
        }
        counts
    }
}

impl fmt::Display for ParityAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parities.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p >> 1, p & 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParityAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParityAssignment[{self}]")
    }
}

/// Parses sixteen whitespace-separated 2-character binary tokens. Token
/// numbers in errors are 1-based.
impl FromStr for ParityAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parities = [0u8; NUM_CODEWORDS];
        let mut count = 0;
        for (n, tok) in s.split_whitespace().enumerate() {
            if n >= NUM_CODEWORDS {
                return Err(Error::Parse {
                    token: n + 1,
                    message: format!("unexpected extra token {tok:?}; expected exactly 16"),
                });
            }
            parities[n] = match tok {
                "00" => 0,
                "01" => 1,
                "10" => 2,
                "11" => 3,
                _ => {
                    return Err(Error::Parse {
                        token: n + 1,
                        message: format!("{tok:?} is not one of 00, 01, 10, 11"),
                    })
                }
            };
            count = n + 1;
        }
        if count != NUM_CODEWORDS {
            return Err(Error::Parse {
                token: count + 1,
                message: format!("expected 16 parity tokens, found {count}"),
            });
        }
        Ok(ParityAssignment { parities })
    }
}

/// A systematic `F_2^7 -> F_2^9` encoder given by a parity for every input.
#[derive(Clone, PartialEq, Eq)]
pub struct SefccCode {
    assignment: ParityAssignment,
    full_parity: [u8; SPACE],
    encodings: [u16; SPACE],
}

impl SefccCode {
    /// Wraps an arbitrary parity table (one 2-bit value per `u` in natural
    /// order). The centre parities are read off the codeword entries.
    pub fn from_parity_table(cb: &HammingCodebook, full_parity: [u8; SPACE]) -> Result<Self> {
        if let Some(u) = full_parity.iter().position(|&p| p > 3) {
            return Err(Error::Precondition(format!("parity of input {u} out of range")));
        }
        let assignment = ParityAssignment {
            parities: std::array::from_fn(|i| full_parity[cb.codeword(i).bits() as usize]),
        };
        let encodings = std::array::from_fn(|u| ((u as u16) << PARITY_LEN) | full_parity[u] as u16);
        Ok(SefccCode { assignment, full_parity, encodings })
    }

    /// Same as [`SefccCode::from_parity_table`] but from 2-bit words.
    pub fn from_parity_words(cb: &HammingCodebook, parities: &[Word]) -> Result<Self> {
        if parities.len() != SPACE {
            return Err(Error::Precondition(format!(
                "parity map has {} entries, expected {SPACE}",
                parities.len()
            )));
        }
        let mut table = [0u8; SPACE];
        for (u, w) in parities.iter().enumerate() {
            if w.len() != PARITY_LEN {
                return Err(Error::UnexpectedLength { expected: PARITY_LEN, actual: w.len() });
            }
            table[u] = w.bits() as u8;
        }
        Self::from_parity_table(cb, table)
    }

    pub fn assignment(&self) -> &ParityAssignment {
        &self.assignment
    }

    /// Parity of input `u` (natural-order index).
    #[inline]
    pub fn parity_value(&self, u: usize) -> u8 {
        self.full_parity[u]
    }

    pub fn full_parity(&self, u: Word) -> Result<Word> {
        check_input(u)?;
        Ok(Word::new(self.full_parity[u.bits() as usize] as u32, PARITY_LEN).expect("2-bit"))
    }

    /// `Enc(u) = [u, p(u)]`.
    pub fn encode(&self, u: Word) -> Result<Word> {
        check_input(u)?;
        Ok(Word::new(self.encodings[u.bits() as usize] as u32, ENCODED_LEN).expect("9-bit"))
    }

    /// All 128 encodings as raw 9-bit integers, indexed by `u`.
    #[inline]
    pub fn encodings(&self) -> &[u16; SPACE] {
        &self.encodings
    }
}

impl fmt::Debug for SefccCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SefccCode").field("assignment", &self.assignment).finish_non_exhaustive()
    }
}

fn check_input(u: Word) -> Result<()> {
    if u.len() != 7 {
        return Err(Error::UnexpectedLength { expected: 7, actual: u.len() });
    }
    Ok(())
}

/// Applies the complementary parity rule: codeword `i` keeps `parities[i]`,
/// its seven neighbours get the complement.
pub fn extend_to_full(pa: &ParityAssignment, cb: &HammingCodebook) -> SefccCode {
    let spheres = cb.sphere_table();
    let slots = cb.slot_table();
    let table = std::array::from_fn(|u| {
        let p = pa.parities[spheres[u] as usize];
        if slots[u] == 0 { p } else { p ^ COMPLEMENT }
    });
    SefccCode::from_parity_table(cb, table).expect("parities in range")
}

/// A binary-valued function on `F_2^k`, `k <= 10`, as a truth table in
/// natural order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BooleanFunction {
    k: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub const MAX_ARITY: usize = 10;

    pub fn new(k: usize, table: Vec<bool>) -> Result<Self> {
        if k > Self::MAX_ARITY {
            return Err(Error::ArityTooLarge(k));
        }
        if table.len() != 1 << k {
            return Err(Error::Precondition(format!(
                "truth table has {} entries, expected {}",
                table.len(),
                1usize << k
            )));
        }
        Ok(BooleanFunction { k, table })
    }

    pub fn from_fn(k: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if k > Self::MAX_ARITY {
            return Err(Error::ArityTooLarge(k));
        }
        Self::new(k, (0..1 << k).map(f).collect())
    }

    /// The Hamming code membership function `f_H`.
    pub fn hamming_membership(cb: &HammingCodebook) -> Self {
        let slots = cb.slot_table();
        Self::from_fn(7, |u| slots[u] == 0).expect("k = 7")
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn eval(&self, u: usize) -> bool {
        self.table[u]
    }

    pub fn truth_table(&self) -> &[bool] {
        &self.table
    }
}

/// Parity map that gives `p` to `f^{-1}(0)` and its complement to
/// `f^{-1}(1)`; entry `u` belongs to input `u` in natural order.
pub fn construct_optimal_fer(f: &BooleanFunction, p: Word) -> Result<Vec<Word>> {
    if p.len() != PARITY_LEN {
        return Err(Error::UnexpectedLength { expected: PARITY_LEN, actual: p.len() });
    }
    let q = p.complement();
    Ok(f.truth_table().iter().map(|&one| if one { q } else { p }).collect())
}

/// The optimal-FER code for the membership function with non-codeword
/// parity `p`.
pub fn optimal_fer_code(cb: &HammingCodebook, p: Word) -> Result<SefccCode> {
    let map = construct_optimal_fer(&BooleanFunction::hamming_membership(cb), p)?;
    SefccCode::from_parity_words(cb, &map)
}

/// Graph condition for validity: no edge joins complementary parities.
pub fn is_valid(pa: &ParityAssignment, g: &Distance3Graph) -> bool {
    g.edges()
        .iter()
        .all(|&(i, k)| pa.parities[i] != pa.parities[k] ^ COMPLEMENT)
}

/// For a valid assignment, true iff no edge joins equal parities
/// (equivalently the code has minimum distance 2 rather than 1).
pub fn has_dmin_2(pa: &ParityAssignment, g: &Distance3Graph) -> Result<bool> {
    if let Some(&(i, k)) = g
        .edges()
        .iter()
        .find(|&&(i, k)| pa.parities[i] == pa.parities[k] ^ COMPLEMENT)
    {
        return Err(Error::Precondition(format!(
            "assignment is not valid: codewords {} and {} carry complementary parities",
            i + 1,
            k + 1
        )));
    }
    Ok(g.edges().iter().all(|&(i, k)| pa.parities[i] != pa.parities[k]))
}

/// Minimum encoding distance over all pairs `(u, v)` with `f(u) != f(v)`.
/// The code corrects one function error iff this is at least 3. Returns
/// `u32::MAX` when `f` is constant.
pub fn cross_class_min_distance(code: &SefccCode, f: &BooleanFunction) -> Result<u32> {
    if f.arity() != 7 {
        return Err(Error::Precondition(format!("function arity {} is not 7", f.arity())));
    }
    let enc = code.encodings();
    let (ones, zeros): (Vec<usize>, Vec<usize>) = (0..SPACE).partition(|&u| f.eval(u));
    let mut best = u32::MAX;
    for &u in &ones {
        for &v in &zeros {
            best = best.min((enc[u] ^ enc[v]).count_ones());
        }
    }
    Ok(best)
}

/// Parameters of the bipartition construction. Indices are 0-based codeword
/// indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxSumParams {
    /// Four odd-weight codewords receiving the first symbol of their pair.
    pub odd_subset: Vec<usize>,
    /// Four even-weight codewords receiving the first symbol of their pair.
    pub even_subset: Vec<usize>,
    /// Give `{01, 10}` to the odd set and `{00, 11}` to the even set.
    pub swap_pair_roles: bool,
}

impl MaxSumParams {
    /// The choice of the worked example: `00` on `c3..c6`, `01` on
    /// `c1, c2, c7, c8`.
    pub fn example() -> Self {
        MaxSumParams {
            odd_subset: vec![2, 3, 4, 5],
            even_subset: vec![0, 1, 6, 7],
            swap_pair_roles: false,
        }
    }
}

/// Bipartition construction: the odd partite set draws from `{00, 11}` and
/// the even set from `{01, 10}` (or the reverse when swapped), with exactly
/// four codewords on each symbol.
///
/// ```
/// use sefcc::{construct_max_sum, HammingCodebook, MaxSumParams};
///
/// let g = HammingCodebook::new().distance3_graph();
/// let pa = construct_max_sum(&g, &MaxSumParams::example()).unwrap();
/// assert_eq!(pa.to_string(), "01 01 00 00 00 00 01 01 11 11 10 10 10 10 11 11");
/// ```
pub fn construct_max_sum(g: &Distance3Graph, params: &MaxSumParams) -> Result<ParityAssignment> {
    let check = |name: &str, subset: &[usize], part: &[usize]| -> Result<()> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != subset.len() || subset.len() * 2 != part.len() {
            return Err(Error::InvalidSubset(format!(
                "{name} subset must name {} distinct codewords, got {:?}",
                part.len() / 2,
                subset.iter().map(|i| i + 1).collect::<Vec<_>>()
            )));
        }
        if let Some(bad) = subset.iter().find(|i| !part.contains(i)) {
            return Err(Error::InvalidSubset(format!(
                "codeword {} is not in the {name} partite set",
                bad + 1
            )));
        }
        Ok(())
    };
    check("odd", &params.odd_subset, g.partite_odd())?;
    check("even", &params.even_subset, g.partite_even())?;

    let (odd_first, even_first) = if params.swap_pair_roles { (0b01, 0b00) } else { (0b00, 0b01) };
    let mut parities = [0u8; NUM_CODEWORDS];
    for &v in g.partite_odd() {
        let first = params.odd_subset.contains(&v);
        parities[v] = if first { odd_first } else { odd_first ^ COMPLEMENT };
    }
    for &v in g.partite_even() {
        let first = params.even_subset.contains(&v);
        parities[v] = if first { even_first } else { even_first ^ COMPLEMENT };
    }
    Ok(ParityAssignment { parities })
}

/// Recovers construction parameters reproducing `pa`, if any exist.
pub fn max_sum_parameters(pa: &ParityAssignment, g: &Distance3Graph) -> Option<MaxSumParams> {
    let swap = match pa.parities[*g.partite_odd().first()?] {
        0b00 | 0b11 => false,
        _ => true,
    };
    let (odd_first, even_first) = if swap { (0b01, 0b00) } else { (0b00, 0b01) };
    let params = MaxSumParams {
        odd_subset: g.partite_odd().iter().copied().filter(|&v| pa.parities[v] == odd_first).collect(),
        even_subset: g.partite_even().iter().copied().filter(|&v| pa.parities[v] == even_first).collect(),
        swap_pair_roles: swap,
    };
    match construct_max_sum(g, &params) {
        Ok(rebuilt) if rebuilt == *pa => Some(params),
        _ => None,
    }
}

/// Every assignment the bipartition construction can produce, in packed
/// order. For the Hamming graph there are `2 * C(8,4)^2 = 9800`.
pub fn max_sum_family(g: &Distance3Graph) -> Vec<ParityAssignment> {
    let halves = |part: &[usize]| -> Vec<Vec<usize>> {
        let n = part.len();
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize * 2 == n)
            .map(|m| (0..n).filter(|b| m >> b & 1 == 1).map(|b| part[b]).collect())
            .collect()
    };
    let odd = halves(g.partite_odd());
    let even = halves(g.partite_even());
    let mut out = Vec::with_capacity(2 * odd.len() * even.len());
    for swap_pair_roles in [false, true] {
        for o in &odd {
            for e in &even {
                let params = MaxSumParams {
                    odd_subset: o.clone(),
                    even_subset: e.clone(),
                    swap_pair_roles,
                };
                out.push(construct_max_sum(g, &params).expect("halves are admissible"));
            }
        }
    }
    out.sort_unstable_by_key(ParityAssignment::pack);
    out
}
