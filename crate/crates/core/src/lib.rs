//! Generalized inverses of dual matrices `Â = A + εB` (`ε² = 0`).
//!
//! The centerpiece is the dual core-EP generalized inverse (DCEPGI): the
//! unique `X̂` with `(ÂX̂)ᵀ = ÂX̂`, `ÂX̂² = X̂` and `X̂Â^{m+1} = Â^m`, where `m`
//! is the index of `A`. Around it sit the dual Moore–Penrose, Drazin, group
//! and core inverses, the dual core-EP decomposition, relation checks, and a
//! solver for dual linear systems.
//!
//! ```
//! use dual_cep::{dcepgi, DualMatrix, Tol};
//!
//! let a = DualMatrix::from_rows(2, 2, &[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0]).unwrap();
//! let x = dcepgi(&a, Tol::default()).unwrap();
//! assert!((x.std()[(0, 0)] - 1.0).abs() < 1e-12);
//! ```

pub mod dualdecomp;
pub mod dualgi;
pub mod dualnum;
pub mod error;
pub mod io;
pub mod oracle;
pub mod realgi;
pub mod relations;
pub mod solver;
pub mod tol;

pub use dualdecomp::{
    dcepgi_from_decomposition, dual_cn_split, dual_core_ep_decompose,
    dual_core_ep_decompose_with_basis, DualCNSplit, DualCoreEPDecomposition,
};
pub use dualgi::{
    core_ep_residuals, core_residuals, dcepgi, dcepgi_compact, dcepgi_exists, ddgi, ddgi_exists,
    dmpgi, dmpgi_exists, drazin_residuals, dual_core_exists, dual_core_inverse, dual_group, mpdgi,
    penrose_residuals, CrossCheck, DualBlocks, ExistenceCertificate, InverseKind,
};
pub use dualnum::{rel_residual, s_matrix, DualMatrix, DualScalar};
pub use error::{Error, Result};
pub use io::DualMatrixFile;
pub use oracle::dcepgi_bruteforce_oracle;
pub use realgi::{
    core_ep_decompose, core_ep_inverse, drazin, index, moore_penrose, CoreEPBlocks, RealMatrix,
};
pub use relations::{first_order_report, order_law_check, range_null_report, rank_test};
pub use solver::{solve_general, solve_unique_in_range, DualVector, SolutionReport};
pub use tol::{Tol, DEFAULT_TOLERANCE};

/// Runs the guide's snippets as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dual-numbers.md")]
    mod dual_numbers {}
    #[doc = include_str!("../../../book/src/real-inverses.md")]
    mod real_inverses {}
    #[doc = include_str!("../../../book/src/dual-inverses.md")]
    mod dual_inverses {}
    #[doc = include_str!("../../../book/src/dual-core-ep.md")]
    mod dual_core_ep {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/tolerances.md")]
    mod tolerances {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
