//! Workbench for single-error-correcting function-correcting codes (SEFCCs)
//! protecting the membership function of the [7,4,3] Hamming code.
//!
//! A systematic SEFCC maps `u` in `F_2^7` to `[u, p(u)]` with two parity
//! bits, such that any two inputs that disagree on "is `u` a Hamming
//! codeword?" end up at distance at least 3. The crate
//!
//! * builds the Hamming code, its sphere partition and the distance-3 graph
//!   on its codewords ([`hamming`]);
//! * represents parity assignments, checks validity and minimum distance,
//!   and provides the max-sum bipartition construction and the optimal-FER
//!   construction ([`fcc`], [`spectrum`]);
//! * enumerates every valid assignment to certify the structural claims by
//!   brute force ([`enumeration`]);
//! * simulates BPSK over AWGN with soft-decision ML decoding ([`channel`]).
//!
//! ```
//! use sefcc::{construct_max_sum, extend_to_full, spectrum, HammingCodebook, MaxSumParams};
//!
//! let cb = HammingCodebook::new();
//! let g = cb.distance3_graph();
//! let pa = construct_max_sum(&g, &MaxSumParams::example()).unwrap();
//! let s = spectrum(&extend_to_full(&pa, &cb));
//! assert_eq!((s.sum_distance, s.d_min, s.n2()), (73728, 2, 960));
//! ```
//!
//! The guide under `book/` walks through the same material with runnable
//! snippets; its chapters are compiled as doc-tests of this crate.

pub mod channel;
pub mod enumeration;
pub mod error;
pub mod fcc;
pub mod hamming;
pub mod spectrum;
pub mod word;

pub use channel::{
    add_awgn, compare_csv, ml_soft_decode, modulate_bpsk, noise_variance, run_simulation, union_bound_fer,
    PointResult, SimConfig, SimResult, SoftDecoder,
};
pub use enumeration::{
    census, certify_theorems, enumerate_valid, max_sum_census, min_n2_census, CensusReport,
    CertificationReport, Check, SearchMode, SearchStrategy,
};
pub use error::{Error, Result};
pub use fcc::{
    construct_max_sum, construct_optimal_fer, cross_class_min_distance, extend_to_full,
    has_dmin_2, is_valid, max_sum_family, max_sum_parameters, optimal_fer_code, BooleanFunction,
    MaxSumParams, ParityAssignment, SefccCode,
};
pub use hamming::{encode_hamming, Distance3Graph, HammingCodebook};
pub use spectrum::{distance_matrix, spectrum, DistanceMatrix, DistanceSpectrum};
pub use word::{hamming_distance, Word};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hamming.md")]
    mod hamming {}
    #[doc = include_str!("../../../book/src/validity.md")]
    mod validity {}
    #[doc = include_str!("../../../book/src/sum-distance.md")]
    mod sum_distance {}
    #[doc = include_str!("../../../book/src/census.md")]
    mod census {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
