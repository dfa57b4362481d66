//! Compression of provenance polynomials under abstraction trees.
//!
//! A set of polynomials is shrunk by replacing groups of variables with the
//! metavariables of a user-supplied tree. The crate finds cuts through the
//! trees that bring the number of monomials under a bound while keeping as
//! many distinct variables as possible:
//!
//! * [`optimizer::optimal_vvs_single_tree`] is exact for one tree,
//! * [`optimizer::greedy_vvs`] handles whole forests heuristically,
//! * [`optimizer::brute_force_vvs`] enumerates every cut.
//!
//! [`benchgen`] builds deterministic benchmark instances.
//!
//! ```
//! use provcut::abstraction::{abstract_set, clean_tree, AbstractionForest};
//! use provcut::optimizer::optimal_vvs_single_tree;
//! use provcut::{fixtures, polynomial::PolySet};
//!
//! let set = PolySet::from_text(&[fixtures::ZIP_10001, fixtures::ZIP_10002])?;
//! let tree = clean_tree(&fixtures::plans_tree(), &set)?;
//! let result = optimal_vvs_single_tree(&set, &tree, 9)?;
//! assert_eq!(result.vvs, ["SB", "Special", "e", "p1"]);
//! let smaller = abstract_set(&set, &AbstractionForest::single(tree), &result.cut())?;
//! assert_eq!(smaller.num_m(), 8);
//! # Ok::<(), provcut::Error>(())
//! ```

pub mod abstraction;
pub mod benchgen;
pub mod error;
pub mod fixtures;
pub mod optimizer;
pub mod polynomial;

pub use error::{Error, Result};
