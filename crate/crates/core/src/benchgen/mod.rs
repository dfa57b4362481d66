//! Deterministic benchmark instances.
//!
//! Every generator is a pure function of its spec. Randomness comes from
//! ChaCha8 seeded with [`rng`]; independent parts of one instance draw from
//! separate streams of the same seed.

mod telephony;
mod tpch;
mod trees;
mod upp;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use telephony::{gen_telephony, plan_price, TelephonySpec};
pub use tpch::{gen_tpch_like, part_var, supplier_var, TpchInstance};
pub use trees::{count_cuts, gen_tree, grouped_tree, numbered, CatalogueRow, TreeSpec, CATALOGUE};
pub use upp::{flat_sizes, gen_upp, vc_reduce, GraphInstance, UppSpec, VcReduction, VC_MAX_VERTICES};

/// Generator for `stream` of `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}
