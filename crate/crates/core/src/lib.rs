//! Monomial orders `Mat_n(O_D, m)` in a central simple algebra over a
//! non-archimedean local field, represented by their integer level `m`.
//!
//! The crate decides, exactly and from the level alone, whether `m` defines
//! an order and whether that order is Gorenstein, Eichler (with period and
//! invariant), hereditary or Bass. Definition-level oracles
//! ([`oracle::overorders`], [`oracle::bass_oracle`]) and a census engine
//! ([`census::census`]) cross-check the structural verdicts.
//!
//! ```
//! use monord::{classify, LevelMatrix};
//!
//! let m = LevelMatrix::from_rows([[0, 0], [2, 0]]).unwrap();
//! let report = classify(&m).unwrap();
//! assert_eq!(report.is_bass, Some(true));
//! assert_eq!(report.is_hereditary, Some(false));
//! ```

pub mod census;
pub mod classify;
pub mod duality;
pub mod error;
pub mod format;
pub mod level;
pub mod oracle;

pub use classify::{
    classify, classify_eichler, eichler_shape_of_triangular, is_bass, is_hereditary, truncate,
    BassReason, BassVerdict, ClassificationReport, EichlerShape,
};
pub use duality::{
    dual_level, gorenstein, is_gorenstein, is_lattice, is_projective, lattice_dual, DualLevel,
    LatticeType,
};
pub use error::{Error, Result};
pub use level::{
    canonical_form, conjugate, normalize_positive, CanonicalForm, LevelMatrix, OrderViolation,
    PositiveTypeForm, WeylElement,
};
pub use oracle::{bass_oracle, overorders, OverorderSet};

/// Search and enumeration limits shared by the exhaustive routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which `n!` permutation searches are attempted.
    pub search_cap: usize,
    /// Largest candidate count an enumeration may visit.
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_cap: level::DEFAULT_SEARCH_CAP,
            budget: oracle::DEFAULT_BUDGET,
        }
    }
}
