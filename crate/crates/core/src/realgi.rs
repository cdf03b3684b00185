//! Real-matrix kernel: rank, index, Moore–Penrose, Drazin and core-EP
//! inverses, and the core-EP (Schur-like) decomposition that feeds the
//! dual layer.
//!
//! Everything here works on dense `f64` matrices. Ranks are numerical and
//! follow the cutoff in [`Tol`].

use nalgebra::{DMatrix, DVector};

use crate::error::{ensure_square, Error, Result};
use crate::tol::Tol;

pub type RealMatrix = DMatrix<f64>;

/// Frobenius norm; zero for empty matrices.
pub fn fro(a: &RealMatrix) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        a.norm()
    }
}

/// `a^k` by repeated multiplication, with `a^0 = I`.
pub fn power(a: &RealMatrix, k: usize) -> RealMatrix {
    let n = a.nrows();
    let mut out = RealMatrix::identity(n, n);
    for _ in 0..k {
        out = &out * a;
    }
    out
}

/// Singular value decomposition with singular values sorted in decreasing
/// order. Returns `(u, sigma, v_t)` where `u` is `rows x k`, `v_t` is
/// `k x cols`, `k = min(rows, cols)`.
pub(crate) fn sorted_svd(a: &RealMatrix) -> (RealMatrix, DVector<f64>, RealMatrix) {
    let (r, c) = a.shape();
    let k = r.min(c);
    if k == 0 {
        return (
            RealMatrix::zeros(r, 0),
            DVector::zeros(0),
            RealMatrix::zeros(0, c),
        );
    }
    // nalgebra's bidiagonal SVD can return inaccurate factors for
    // rank-deficient input; faer's is used instead.
    let m = faer::Mat::<f64>::from_fn(r, c, |i, j| a[(i, j)]);
    let svd = m.thin_svd().expect("SVD of a finite matrix converges");
    let (fu, fv, fs) = (svd.U(), svd.V(), svd.S().column_vector());
    let sigma = DVector::from_fn(k, |i, _| fs[i]);
    let u = RealMatrix::from_fn(r, k, |i, j| fu[(i, j)]);
    let v_t = RealMatrix::from_fn(k, c, |i, j| fv[(j, i)]);
    (u, sigma, v_t)
}

fn rank_from_sigma_scaled(
    sigma: &DVector<f64>,
    rows: usize,
    cols: usize,
    scale: f64,
    tol: Tol,
) -> usize {
    if sigma.is_empty() {
        return 0;
    }
    let cutoff = tol.rank_cutoff(rows, cols, sigma[0].max(scale));
    sigma.iter().filter(|&&s| s > cutoff && s > 0.0).count()
}

/// Numerical rank.
pub fn rank(a: &RealMatrix, tol: Tol) -> usize {
    rank_scaled(a, 0.0, tol)
}

/// Numerical rank with the cutoff measured against `max(sigma_max(a), scale)`.
///
/// Powers `A^k` carry rounding noise of size `eps * |A|^k`, so their rank is
/// judged against `|A|_2^k` rather than their own (possibly tiny) norm.
pub fn rank_scaled(a: &RealMatrix, scale: f64, tol: Tol) -> usize {
    let (_, sigma, _) = sorted_svd(a);
    rank_from_sigma_scaled(&sigma, a.nrows(), a.ncols(), scale, tol)
}

/// Spectral norm.
pub fn spectral_norm(a: &RealMatrix) -> f64 {
    let (_, sigma, _) = sorted_svd(a);
    sigma.get(0).copied().unwrap_or(0.0)
}

/// Index of a square matrix: the smallest `s >= 0` with
/// `rank(A^{s+1}) = rank(A^s)`.
///
/// The zero matrix has index 1 (`rank(I) = n > 0 = rank(O)`), which is what
/// the dual formulas downstream expect.
pub fn index(a: &RealMatrix, tol: Tol) -> Result<usize> {
    ensure_square("index", a.nrows(), a.ncols())?;
    let n = a.nrows();
    let norm = spectral_norm(a);
    let mut current = RealMatrix::identity(n, n);
    let mut current_rank = n;
    for s in 0..=n {
        let next = &current * a;
        let next_rank = rank_scaled(&next, norm.powi(s as i32 + 1), tol);
        if next_rank == current_rank {
            return Ok(s);
        }
        current = next;
        current_rank = next_rank;
    }
    // Ranks strictly decrease until they stabilize, so this is unreachable
    // for s <= n.
    Ok(n)
}

/// Moore–Penrose inverse via SVD with the rank cutoff from `tol`.
pub fn moore_penrose(a: &RealMatrix, tol: Tol) -> RealMatrix {
    moore_penrose_scaled(a, 0.0, tol)
}

/// Moore–Penrose inverse with the rank judged as in [`rank_scaled`].
pub fn moore_penrose_scaled(a: &RealMatrix, scale: f64, tol: Tol) -> RealMatrix {
    let (r, c) = a.shape();
    let (u, sigma, v_t) = sorted_svd(a);
    let k = rank_from_sigma_scaled(&sigma, r, c, scale, tol);
    let mut out = RealMatrix::zeros(c, r);
    for i in 0..k {
        let inv = 1.0 / sigma[i];
        // out += v_i * inv * u_i^T
        for col in 0..r {
            let ui = u[(col, i)] * inv;
            if ui == 0.0 {
                continue;
            }
            for row in 0..c {
                out[(row, col)] += v_t[(i, row)] * ui;
            }
        }
    }
    out
}

/// Orthogonal matrix whose first `rank(a)` columns span `R(a)`, for square
/// `a`; the rank is judged as in [`rank_scaled`].
pub fn range_basis(a: &RealMatrix, scale: f64, tol: Tol) -> (RealMatrix, usize) {
    let (u, sigma, _) = sorted_svd(a);
    let t = rank_from_sigma_scaled(&sigma, a.nrows(), a.ncols(), scale, tol);
    (u, t)
}

/// Split `m` into its 2x2 block partition after the first `t` rows/columns.
pub fn split_blocks(m: &RealMatrix, t: usize) -> (RealMatrix, RealMatrix, RealMatrix, RealMatrix) {
    let n = m.nrows();
    let k = m.ncols();
    let rest_r = n - t;
    let rest_c = k - t;
    (
        m.view((0, 0), (t, t)).into_owned(),
        m.view((0, t), (t, rest_c)).into_owned(),
        m.view((t, 0), (rest_r, t)).into_owned(),
        m.view((t, t), (rest_r, rest_c)).into_owned(),
    )
}

/// Assemble `[[b1, b2], [b3, b4]]`.
pub fn join_blocks(
    b1: &RealMatrix,
    b2: &RealMatrix,
    b3: &RealMatrix,
    b4: &RealMatrix,
) -> RealMatrix {
    let top = b1.nrows();
    let left = b1.ncols();
    let rows = top + b3.nrows();
    let cols = left + b2.ncols();
    let mut out = RealMatrix::zeros(rows, cols);
    out.view_mut((0, 0), b1.shape()).copy_from(b1);
    out.view_mut((0, left), b2.shape()).copy_from(b2);
    out.view_mut((top, 0), b3.shape()).copy_from(b3);
    out.view_mut((top, left), b4.shape()).copy_from(b4);
    out
}

pub(crate) fn invert(a: &RealMatrix, what: &str) -> Result<RealMatrix> {
    if a.is_empty() {
        return Ok(a.clone());
    }
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain(format!("{what} is singular")))
}

/// Core-EP decomposition `A = U [[T1, T2], [O, N]] U^T` with `U` orthogonal,
/// `T1` invertible (`t x t`, `t = rank(A^m)`) and `N` nilpotent of index `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreEPBlocks {
    pub u: RealMatrix,
    pub t1: RealMatrix,
    pub t2: RealMatrix,
    pub n: RealMatrix,
    /// rank of `A^m`
    pub rank: usize,
    /// index of `A`
    pub index: usize,
}

impl CoreEPBlocks {
    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// `U [[T1, T2], [O, N]] U^T`.
    pub fn reconstruct(&self) -> RealMatrix {
        let zero = RealMatrix::zeros(self.n.nrows(), self.t1.ncols());
        let inner = join_blocks(&self.t1, &self.t2, &zero, &self.n);
        &self.u * inner * self.u.transpose()
    }

    /// Conjugate a full-size matrix into the `U` frame: `U^T X U`.
    pub fn to_frame(&self, x: &RealMatrix) -> RealMatrix {
        self.u.transpose() * x * &self.u
    }

    /// Inverse of `to_frame`: `U X U^T`.
    pub fn from_frame(&self, x: &RealMatrix) -> RealMatrix {
        &self.u * x * self.u.transpose()
    }

    pub fn t1_inverse(&self) -> Result<RealMatrix> {
        invert(&self.t1, "core block T1")
    }

    /// `sum_{i=0}^{k-1} T1^i T2 N^{k-1-i}`: the upper-right block of `A^k`
    /// in the `U` frame.
    pub fn upper_right_of_power(&self, k: usize) -> RealMatrix {
        let mut acc = RealMatrix::zeros(self.t2.nrows(), self.t2.ncols());
        for i in 0..k {
            acc += power(&self.t1, i) * &self.t2 * power(&self.n, k - 1 - i);
        }
        acc
    }

    /// Core part `U [[T1, T2], [O, O]] U^T`.
    pub fn core_part(&self) -> RealMatrix {
        let t = self.rank;
        let rest = self.dim() - t;
        let inner = join_blocks(
            &self.t1,
            &self.t2,
            &RealMatrix::zeros(rest, t),
            &RealMatrix::zeros(rest, rest),
        );
        self.from_frame(&inner)
    }

    /// Nilpotent part `U [[O, O], [O, N]] U^T`.
    pub fn nilpotent_part(&self) -> RealMatrix {
        let t = self.rank;
        let rest = self.dim() - t;
        let inner = join_blocks(
            &RealMatrix::zeros(t, t),
            &RealMatrix::zeros(t, rest),
            &RealMatrix::zeros(rest, t),
            &self.n,
        );
        self.from_frame(&inner)
    }

    /// `U [[T1^{-1}, (T1^{m+1})^{-1} T~], [O, O]] U^T` with
    /// `T~ = sum_{i=0}^{m-1} T1^i T2 N^{m-1-i}`.
    pub fn drazin(&self) -> Result<RealMatrix> {
        let t = self.rank;
        let rest = self.dim() - t;
        let t1_inv = self.t1_inverse()?;
        let tail = self.upper_right_of_power(self.index);
        let upper_right = power(&t1_inv, self.index + 1) * tail;
        let inner = join_blocks(
            &t1_inv,
            &upper_right,
            &RealMatrix::zeros(rest, t),
            &RealMatrix::zeros(rest, rest),
        );
        Ok(self.from_frame(&inner))
    }

    /// `U [[T1^{-1}, O], [O, O]] U^T`.
    pub fn core_ep_inverse(&self) -> Result<RealMatrix> {
        let t = self.rank;
        let rest = self.dim() - t;
        let t1_inv = self.t1_inverse()?;
        let inner = join_blocks(
            &t1_inv,
            &RealMatrix::zeros(t, rest),
            &RealMatrix::zeros(rest, t),
            &RealMatrix::zeros(rest, rest),
        );
        Ok(self.from_frame(&inner))
    }
}

/// Core-EP decomposition. `U` comes from the left singular vectors of
/// `A^m`: the leading `t` columns span `R(A^m)`, the rest complete it.
pub fn core_ep_decompose(a: &RealMatrix, tol: Tol) -> Result<CoreEPBlocks> {
    ensure_square("core_ep_decompose", a.nrows(), a.ncols())?;
    let m = index(a, tol)?;
    let am = power(a, m);
    let (u, t) = range_basis(&am, spectral_norm(a).powi(m as i32), tol);
    Ok(blocks_in_basis(a, u, t, m))
}

/// Core-EP decomposition in a caller-supplied orthogonal basis whose first
/// `rank(A^m)` columns span `R(A^m)`.
///
/// Fails if `u` is not orthogonal or does not block-triangularize `a`.
pub fn core_ep_decompose_with_basis(
    a: &RealMatrix,
    u: &RealMatrix,
    tol: Tol,
) -> Result<CoreEPBlocks> {
    ensure_square("core_ep_decompose_with_basis", a.nrows(), a.ncols())?;
    let n = a.nrows();
    if u.shape() != (n, n) {
        return Err(Error::Dimension {
            op: "core_ep_decompose_with_basis",
            detail: format!("basis is {}x{}, matrix is {n}x{n}", u.nrows(), u.ncols()),
        });
    }
    let ortho = fro(&(u.transpose() * u - RealMatrix::identity(n, n)));
    if ortho > 1e3 * tol.residual.max(f64::EPSILON) * (n as f64).max(1.0) {
        return Err(Error::Domain(format!(
            "basis is not orthogonal (|U^T U - I| = {ortho:.3e})"
        )));
    }
    let m = index(a, tol)?;
    let t = rank_scaled(&power(a, m), spectral_norm(a).powi(m as i32), tol);
    let frame = u.transpose() * a * u;
    let lower_left = frame.view((t, 0), (n - t, t)).into_owned();
    let scale = 1.0 + fro(a);
    if fro(&lower_left) > tol.residual.max(1e3 * f64::EPSILON) * scale {
        return Err(Error::Domain(format!(
            "basis does not block-triangularize the matrix (lower-left block norm {:.3e})",
            fro(&lower_left)
        )));
    }
    Ok(blocks_in_basis(a, u.clone(), t, m))
}

fn blocks_in_basis(a: &RealMatrix, u: RealMatrix, t: usize, m: usize) -> CoreEPBlocks {
    let frame = u.transpose() * a * &u;
    let (t1, t2, _, n) = split_blocks(&frame, t);
    CoreEPBlocks {
        u,
        t1,
        t2,
        n,
        rank: t,
        index: m,
    }
}

/// Drazin inverse, computed from the core-EP blocks.
pub fn drazin(a: &RealMatrix, tol: Tol) -> Result<RealMatrix> {
    core_ep_decompose(a, tol)?.drazin()
}

/// Core-EP inverse `A^⊕ = U [[T1^{-1}, O], [O, O]] U^T`.
pub fn core_ep_inverse(a: &RealMatrix, tol: Tol) -> Result<RealMatrix> {
    core_ep_decompose(a, tol)?.core_ep_inverse()
}
