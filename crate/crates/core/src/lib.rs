//! Exact and approximate text-to-pattern Hamming distances.
//!
//! The approximate solvers sample residues modulo a random prime and compare
//! Karp-Rabin fingerprints of the sampled subsequences. The exact solver
//! filters candidates approximately and then resolves them with LCE queries
//! or, for approximately periodic inputs, with sparse second differences of
//! the cross-correlation.

pub mod bits;
pub mod bytestring;
pub mod combined;
pub mod error;
pub mod estimate;
pub mod exact;
pub mod fingerprint;
pub mod gen;
pub mod generic;
pub mod oracle;
pub mod prime;
pub mod proptester;
pub mod rng;
pub mod sample;
pub mod small_m;
pub mod sparse;
pub mod stream;

pub use bits::PackedSignature;
pub use bytestring::ByteString;
pub use error::{Error, Result};
pub use estimate::{classify, estimate_from_count, Class, EstimateRow};
pub use fingerprint::{BitHashFn, FingerprintFn};
pub use generic::{solve_all_distances, solve_fixed_threshold, GenericSampler, SampleConfig, SamplerPlan};
pub use oracle::{all_distances_naive, hamming, validate_estimation, DistanceVector};
pub use prime::{is_prime, sample_prime};
pub use rng::Rng;
pub use sample::{sample_subset, SampleSet};
pub use sparse::SparseFunc;
pub use small_m::{solve_filter, solve_small_m};
pub use exact::{solve_exact, solve_periodic, BoundedDistances};
pub use combined::{combined_case, exact_cutoff, solve_combined_all, solve_combined_fixed, Case};
pub use stream::{stream_init, stream_push, stream_solve_multi, MultiStream, StreamState, Variant};
pub use proptester::{prop_test, prop_test_amplified, prop_test_decision, prop_test_run, TesterRun};
