//! Dual core-EP decomposition `Â = Û [[T̂1, T̂2], [O, N̂]] Ûᵀ` with a dual
//! orthogonal `Û`, and the dual core / dual nilpotent split.

use crate::dualgi::{dcepgi, DualBlocks, Prepared};
use crate::dualnum::{rel_residual, DualMatrix};
use crate::error::{ensure_square, Error, Result};
use crate::realgi::{core_ep_decompose_with_basis, fro, join_blocks, CoreEPBlocks, RealMatrix};
use crate::tol::Tol;

/// Dual core-EP decomposition of a square dual matrix.
///
/// `Û = U + εU0` with `U0 = U [[O, -U3ᵀ], [U3, O]]`, so `ÛᵀÛ = I` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCoreEPDecomposition {
    pub u_hat: DualMatrix,
    pub t1_hat: DualMatrix,
    pub t2_hat: DualMatrix,
    pub n_hat: DualMatrix,
    pub u3: RealMatrix,
    /// `T2 U3 = O` and `U3 T2 = O`, so that `T̂1 = T1 + εB1` and
    /// `N̂ = N + εB4`.
    pub canonical: bool,
    /// Real core-EP decomposition of the standard part.
    pub real: CoreEPBlocks,
    /// Blocks of the infinitesimal part in the `U` frame.
    pub frame: DualBlocks,
    pub tolerance: f64,
}

/// `Â = core + nilpotent` with `core = ÂÂ^⊕Â`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCNSplit {
    pub core: DualMatrix,
    pub nilpotent: DualMatrix,
}

pub fn dual_core_ep_decompose(x: &DualMatrix, tol: Tol) -> Result<DualCoreEPDecomposition> {
    let p = Prepared::new(x, "dual_core_ep_decompose", tol)?;
    Ok(build(&p, tol))
}

/// Same, with the real orthogonal factor `U` supplied by the caller (its first
/// `rank(A^m)` columns must span `R(A^m)`).
pub fn dual_core_ep_decompose_with_basis(
    x: &DualMatrix,
    u: &RealMatrix,
    tol: Tol,
) -> Result<DualCoreEPDecomposition> {
    ensure_square("dual_core_ep_decompose", x.nrows(), x.ncols())?;
    let blocks = core_ep_decompose_with_basis(x.std(), u, tol)?;
    let p = Prepared::with_blocks(x, blocks)?;
    Ok(build(&p, tol))
}

pub(crate) fn from_prepared(p: &Prepared) -> DualCoreEPDecomposition {
    build(p, Tol::default())
}

fn build(p: &Prepared, tol: Tol) -> DualCoreEPDecomposition {
    let (t, rest) = (p.t(), p.n() - p.t());
    let blocks = &p.blocks;
    let f = &p.frame;
    let u3 = p.u3();
    let u3t = u3.transpose();

    let k = join_blocks(
        &RealMatrix::zeros(t, t),
        &(-&u3t),
        &u3,
        &RealMatrix::zeros(rest, rest),
    );
    let u_hat = DualMatrix::from_parts(blocks.u.clone(), &blocks.u * k);

    let t2u3 = &blocks.t2 * &u3;
    let u3t2 = &u3 * &blocks.t2;
    let t1_hat = DualMatrix::from_parts(blocks.t1.clone(), &f.b1 + &t2u3);
    let t2_hat = DualMatrix::from_parts(
        blocks.t2.clone(),
        &f.b2 - &blocks.t1 * &u3t + &u3t * &blocks.n,
    );
    let n_hat = DualMatrix::from_parts(blocks.n.clone(), &f.b4 - &u3t2);

    let scale = fro(&p.b).max(1.0) * fro(&blocks.t2).max(1.0);
    let canonical = fro(&t2u3) <= tol.residual * scale && fro(&u3t2) <= tol.residual * scale;

    DualCoreEPDecomposition {
        u_hat,
        t1_hat,
        t2_hat,
        n_hat,
        u3,
        canonical,
        real: blocks.clone(),
        frame: f.clone(),
        tolerance: tol.residual,
    }
}

impl DualCoreEPDecomposition {
    pub fn rank(&self) -> usize {
        self.real.rank
    }

    pub fn index(&self) -> usize {
        self.real.index
    }

    fn dim(&self) -> usize {
        self.real.dim()
    }

    fn unframe(&self, inner: &DualMatrix) -> DualMatrix {
        &(&self.u_hat * inner) * &self.u_hat.transpose()
    }

    fn zero_block(r: usize, c: usize) -> DualMatrix {
        DualMatrix::zeros(r, c)
    }

    /// `Û [[T̂1, T̂2], [O, N̂]] Ûᵀ`.
    pub fn reconstruct(&self) -> DualMatrix {
        let (t, rest) = (self.rank(), self.dim() - self.rank());
        let inner = DualMatrix::join_blocks([
            &self.t1_hat,
            &self.t2_hat,
            &Self::zero_block(rest, t),
            &self.n_hat,
        ]);
        self.unframe(&inner)
    }

    /// `|ÛᵀÛ - I|` in the dual norm.
    pub fn unitarity_residual(&self) -> f64 {
        let g = &self.u_hat.transpose() * &self.u_hat;
        (&g - &DualMatrix::identity(self.dim())).norm()
    }

    /// `|N U3 + B3 - U3 T1|`.
    pub fn sylvester_residual(&self) -> f64 {
        fro(&(&self.real.n * &self.u3 + &self.frame.b3 - &self.u3 * &self.real.t1))
    }

    /// Norm of the lower-left block of `ÛᵀÂÛ` for the matrix `x` this was
    /// computed from.
    pub fn lower_left_residual(&self, x: &DualMatrix) -> f64 {
        let frame = x.dual_congruence(&self.u_hat);
        let [_, _, ll, _] = frame.split_blocks(self.rank());
        ll.norm()
    }

    /// `|N̂^m|` relative to `max(1, |N̂|^m)`.
    pub fn nilpotency_residual(&self) -> f64 {
        let m = self.index();
        let p = self.n_hat.power(m).expect("square block");
        p.norm() / self.n_hat.norm().max(1.0).powi(m as i32)
    }

    /// The block split `Û[[T̂1, T̂2], [O, O]]Ûᵀ + Û[[O, O], [O, N̂]]Ûᵀ`.
    pub fn block_split(&self) -> DualCNSplit {
        let (t, rest) = (self.rank(), self.dim() - self.rank());
        let core = DualMatrix::join_blocks([
            &self.t1_hat,
            &self.t2_hat,
            &Self::zero_block(rest, t),
            &Self::zero_block(rest, rest),
        ]);
        let nil = DualMatrix::join_blocks([
            &Self::zero_block(t, t),
            &Self::zero_block(t, rest),
            &Self::zero_block(rest, t),
            &self.n_hat,
        ]);
        DualCNSplit {
            core: self.unframe(&core),
            nilpotent: self.unframe(&nil),
        }
    }

    /// `Û [[T̂1^{-1}, O], [O, O]] Ûᵀ`, without checking that `N̂` is dual
    /// nilpotent.
    pub(crate) fn core_ep_inverse_unchecked(&self) -> Result<DualMatrix> {
        let (t, rest) = (self.rank(), self.dim() - self.rank());
        let inv = self.t1_hat.try_inverse()?;
        let inner = DualMatrix::join_blocks([
            &inv,
            &Self::zero_block(t, rest),
            &Self::zero_block(rest, t),
            &Self::zero_block(rest, rest),
        ]);
        Ok(self.unframe(&inner))
    }
}

/// `Â^⊕ = Û [[T̂1^{-1}, O], [O, O]] Ûᵀ`, valid when `N̂^m = O`.
pub fn dcepgi_from_decomposition(d: &DualCoreEPDecomposition) -> Result<DualMatrix> {
    let r = d.nilpotency_residual();
    if r > d.tolerance {
        return Err(Error::Domain(format!(
            "nilpotent block is not dual nilpotent (|N̂^m| = {r:.3e})"
        )));
    }
    d.core_ep_inverse_unchecked()
}

/// Dual core part `ÂÂ^⊕Â` and dual nilpotent part `Â - ÂÂ^⊕Â`.
pub fn dual_cn_split(x: &DualMatrix, tol: Tol) -> Result<DualCNSplit> {
    let inv = dcepgi(x, tol)?;
    let core = &(x * &inv) * x;
    let nilpotent = x - &core;
    Ok(DualCNSplit { core, nilpotent })
}

impl DualCNSplit {
    /// `|coreᵀ nilpotent|` and `|nilpotent core|`, relative.
    pub fn orthogonality_residuals(&self) -> (f64, f64) {
        let scale = self.core.norm().max(1.0) * self.nilpotent.norm().max(1.0);
        (
            (&self.core.transpose() * &self.nilpotent).norm() / scale,
            (&self.nilpotent * &self.core).norm() / scale,
        )
    }

    /// `|nilpotent^m|` relative to `max(1, |nilpotent|)^m`.
    pub fn nilpotency_residual(&self, m: usize) -> f64 {
        let p = self.nilpotent.power(m).expect("square");
        p.norm() / self.nilpotent.norm().max(1.0).powi(m as i32)
    }

    /// Distance to another split, in the relative dual norm.
    pub fn distance(&self, other: &DualCNSplit) -> f64 {
        rel_residual(&self.core, &other.core).max(rel_residual(&self.nilpotent, &other.nilpotent))
    }

    pub fn sum(&self) -> DualMatrix {
        &self.core + &self.nilpotent
    }
}
