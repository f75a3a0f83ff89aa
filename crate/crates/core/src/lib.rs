//! Exact homotopy invariants of finite categories.
//!
//! The crate computes homotopic distance `cD(F₁, …, Fₖ)` between functors,
//! the LS-category `ccat`, the categorical complexity `cTC` and its higher
//! versions `cTCₙ`, each with a replayable certificate. It also classifies
//! functors as (op-/bi-)fibrations, builds fibers and transport functors, lifts
//! homotopies along fibrations, and checks the product inequalities relating
//! the invariants of total category, base and fiber.
//!
//! Everything is exact: searches are exhaustive, an infinite value is decided
//! by an uncovered chain, and exceeding a configured budget is an error
//! distinct from any mathematical answer.

pub mod category;
pub mod cli;
pub mod construct;
pub mod covers;
pub mod error;
pub mod extnat;
pub mod fibrations;
pub mod fixtures;
pub mod functor;
pub mod homotopy;
pub mod invariants;
pub mod io;
pub mod par;
pub mod verify;

pub use category::{validate_category, ArrowId, CategorySpec, FinCategory, ObjId};
pub use construct::{product, standard_category, Product, StandardKind};
pub use covers::{GeometricCover, Subcategory};
pub use error::{Error, Result};
pub use extnat::ExtNat;
pub use functor::{compose_functors, FinFunctor, Mapping, NatTrans};
pub use homotopy::{homotopic, Direction, ZigzagWitness};
pub use invariants::{ccat_direct, ctc_direct, ctc_n_direct, distance, InvariantResult};

/// Search budgets and the parallelism switch.
///
/// Budgets bound the size of constructed categories and the amount of
/// exhaustive search; running past one yields
/// [`Error::SizeBudgetExceeded`], never a mathematical result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Objects per constructed category.
    pub max_objects: usize,
    /// Arrows per constructed category.
    pub max_arrows: usize,
    /// Object maps `|obj D|^|obj C|` a functor enumeration may range over.
    pub max_object_maps: usize,
    /// Functors a single homotopy search may visit.
    pub max_visited: usize,
    /// Subcategories a maximal-domain search may examine.
    pub max_subcategories: usize,
    /// Candidate families a minimum-cover search may test.
    pub max_cover_candidates: usize,
    /// Use the rayon pool (only with the `parallel` feature).
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_objects: 64,
            max_arrows: 256,
            max_object_maps: 1_000_000,
            max_visited: 250_000,
            max_subcategories: 200_000,
            max_cover_candidates: 5_000_000,
            parallel: true,
        }
    }
}

impl Config {
    pub fn sequential() -> Self {
        Config {
            parallel: false,
            ..Config::default()
        }
    }

    /// Override every search budget with `n`.
    pub fn with_search_budget(mut self, n: usize) -> Self {
        self.max_object_maps = n;
        self.max_visited = n;
        self.max_subcategories = n;
        self.max_cover_candidates = n;
        self
    }
}
