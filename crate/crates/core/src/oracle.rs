//! Brute-force reference for the DCEPGI: solve the linear system satisfied by
//! the infinitesimal part `R` of `Â^⊕ = X + εR` directly.
//!
//! With `X = A^⊕`, `R` must satisfy
//!
//! ```text
//! A R - Rᵀ Aᵀ      = (B X)ᵀ - B X
//! A X R + A R X - R = -B X²
//! R A^{m+1}        = S - X A S - X B A^m
//! ```
//!
//! These are stacked into one `3n² x n²` real system and solved by least
//! squares. The DCEPGI exists iff the system is consistent, and then `R` is
//! unique. `X` itself is formed as `A^D A^m (A^m)†` with
//! `A^D = A^m (A^{2m+1})† A^m`, sharing nothing with the block formulas.

use nalgebra::DVector;

use crate::dualnum::{s_matrix, DualMatrix};
use crate::error::{ensure_square, Result};
use crate::realgi::{
    fro, index, moore_penrose_scaled, power, sorted_svd, spectral_norm, RealMatrix,
};
use crate::tol::Tol;

/// Largest size the oracle accepts; the system has `3n⁴` entries.
pub const ORACLE_MAX_DIM: usize = 8;

/// Outcome of the brute-force solve.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub candidate: DualMatrix,
    /// `|M r - rhs| / max(1, |rhs|)`.
    pub residual: f64,
}

/// Core-EP inverse by the product formula `A^m (A^{2m+1})† A^m A^m (A^m)†`.
pub fn core_ep_by_products(a: &RealMatrix, m: usize, tol: Tol) -> RealMatrix {
    let norm = spectral_norm(a);
    let am = power(a, m);
    let a2m1 = power(a, 2 * m + 1);
    let ad = &am * moore_penrose_scaled(&a2m1, norm.powi(2 * m as i32 + 1), tol) * &am;
    &ad * &am * moore_penrose_scaled(&am, norm.powi(m as i32), tol)
}

/// Least-squares solution of the stacked system together with its residual.
pub fn dcepgi_bruteforce_solve(x: &DualMatrix, tol: Tol) -> Result<OracleSolution> {
    ensure_square("dcepgi_bruteforce_oracle", x.nrows(), x.ncols())?;
    let (a, b) = (x.std(), x.inf());
    let n = a.nrows();
    let m = index(a, tol)?;
    let xs = core_ep_by_products(a, m, tol);
    let am = power(a, m);
    let am1 = &am * a;
    let s = s_matrix(a, b, m)?;
    let ax = a * &xs;

    let bx = b * &xs;
    let rhs1 = bx.transpose() - &bx;
    let rhs2 = -(&bx * &xs);
    let rhs3 = &s - &xs * a * &s - &xs * b * &am;

    let nn = n * n;
    let mut sys = RealMatrix::zeros(3 * nn, nn);
    for k in 0..nn {
        let mut e = RealMatrix::zeros(n, n);
        e[k] = 1.0;
        let l1 = a * &e - e.transpose() * a.transpose();
        let l2 = &ax * &e + a * &e * &xs - &e;
        let l3 = &e * &am1;
        for (block, l) in [l1, l2, l3].iter().enumerate() {
            for (i, v) in l.iter().enumerate() {
                sys[(block * nn + i, k)] = *v;
            }
        }
    }
    let rhs = DVector::from_iterator(
        3 * nn,
        rhs1.iter().chain(rhs2.iter()).chain(rhs3.iter()).copied(),
    );

    let r = if nn == 0 {
        DVector::zeros(0)
    } else {
        let (u, sigma, v_t) = sorted_svd(&sys);
        let cutoff = f64::EPSILON * fro(&sys) * nn as f64;
        let mut coef = u.transpose() * &rhs;
        for (c, s) in coef.iter_mut().zip(sigma.iter()) {
            *c = if *s > cutoff { *c / s } else { 0.0 };
        }
        v_t.transpose() * coef
    };
    let resid = fro(&RealMatrix::from_column_slice(
        3 * nn,
        1,
        (&sys * &r - &rhs).as_slice(),
    ));
    let rhs_norm = rhs.norm();
    let r_mat = RealMatrix::from_column_slice(n, n, r.as_slice());
    Ok(OracleSolution {
        candidate: DualMatrix::new(xs, r_mat)?,
        residual: resid / rhs_norm.max(1.0),
    })
}

/// `A^⊕ + εR` if the stacked system is consistent to `tol.residual`,
/// otherwise `None`.
pub fn dcepgi_bruteforce_oracle(x: &DualMatrix, tol: Tol) -> Result<Option<DualMatrix>> {
    let sol = dcepgi_bruteforce_solve(x, tol)?;
    Ok(tol.accepts(sol.residual).then_some(sol.candidate))
}
