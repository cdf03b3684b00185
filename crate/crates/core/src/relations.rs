//! Relations between the DCEPGI and its first-order approximation, range and
//! null spaces of dual matrices, and order laws.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dualgi::{
    dcepgi, dcepgi_exists, decision_tol, DualBlocks, ExistenceCertificate, Prepared,
};
use crate::dualnum::{rel_residual, DualMatrix};
use crate::error::{ensure_square, Error, Result};
use crate::realgi::{
    core_ep_inverse, fro, moore_penrose_scaled, range_basis, rank, sorted_svd, spectral_norm,
    RealMatrix,
};
use crate::solver::DualVector;
use crate::tol::Tol;

/// Verdict and residual of one condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub residual: f64,
}

impl Condition {
    fn new(residual: f64, tol: Tol) -> Self {
        Condition {
            holds: tol.accepts(residual),
            residual,
        }
    }
}

/// Five conditions that are claimed equivalent once the DCEPGI exists.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub conditions: BTreeMap<String, Condition>,
    pub all_equivalent_observed: bool,
    pub tolerance: f64,
}

impl EquivalenceReport {
    pub fn get(&self, name: &str) -> Option<Condition> {
        self.conditions.get(name).copied()
    }
}

/// `Â^⊕ = A^⊕ - εA^⊕BA^⊕`.
pub const FIRST_ORDER: &str = "first_order_form";
/// `(I - A^m(A^m)†)S = O`.
pub const POWER_RANGE_ABSORBS_S: &str = "power_range_absorbs_s";
/// `(I - AA^⊕)S = O`.
pub const CORE_EP_PROJECTOR_ABSORBS_S: &str = "core_ep_projector_absorbs_s";
/// `AA^⊕S = S` and `SAA^⊕ = S`.
pub const TWO_SIDED_PROJECTOR: &str = "two_sided_projector";
/// `R(S) ⊆ R(A^m)` and `N((A^m)ᵀ) ⊆ N(S)`.
pub const SUBSPACE_INCLUSIONS: &str = "subspace_inclusions";

/// Evaluates the five conditions at a matrix whose DCEPGI exists.
pub fn first_order_report(x: &DualMatrix, tol: Tol) -> Result<EquivalenceReport> {
    let p = Prepared::new(x, "first_order_report", tol)?;
    let inv = dcepgi(x, tol)?;
    let n = p.n();
    let id = RealMatrix::identity(n, n);
    let acep = p.core_ep();
    let s_scale = fro(&p.s).max(1.0);

    let approx = DualMatrix::from_parts(acep.clone(), -(&acep * &p.b * &acep));
    let c1 = rel_residual(&inv, &approx);

    let am_dag = moore_penrose_scaled(&p.am, spectral_norm(&p.a).powi(p.m as i32), tol);
    let c2 = fro(&((&id - &p.am * am_dag) * &p.s)) / s_scale;

    let proj = &p.a * &acep;
    let c3 = fro(&((&id - &proj) * &p.s)) / s_scale;

    let c4 = fro(&(&proj * &p.s - &p.s)).max(fro(&(&p.s * &proj - &p.s))) / s_scale;

    // orthonormal basis W of N((A^m)ᵀ) = R(A^m)^⊥
    let (u, t) = range_basis(&p.am, spectral_norm(&p.a).powi(p.m as i32), tol);
    let w = u.columns(t, n - t).into_owned();
    let c5 = fro(&(w.transpose() * &p.s)).max(fro(&(&p.s * &w))) / s_scale;

    let mut conditions = BTreeMap::new();
    for (name, r) in [
        (FIRST_ORDER, c1),
        (POWER_RANGE_ABSORBS_S, c2),
        (CORE_EP_PROJECTOR_ABSORBS_S, c3),
        (TWO_SIDED_PROJECTOR, c4),
        (SUBSPACE_INCLUSIONS, c5),
    ] {
        conditions.insert(name.to_string(), Condition::new(r, tol));
    }
    let first = conditions[FIRST_ORDER].holds;
    let all_equivalent_observed = conditions.values().all(|c| c.holds == first);
    Ok(EquivalenceReport {
        conditions,
        all_equivalent_observed,
        tolerance: tol.residual,
    })
}

/// `rank([A^m, S]) = rank(A^m)`, which characterizes the first-order form of
/// the DCEPGI.
pub fn rank_test(x: &DualMatrix, tol: Tol) -> Result<bool> {
    let p = Prepared::new(x, "rank_test", tol)?;
    dcepgi_exists(x, tol)?.into_result()?;
    let dtol = decision_tol(tol);
    let n = p.n();
    let mut wide = RealMatrix::zeros(n, 2 * n);
    wide.view_mut((0, 0), (n, n)).copy_from(&p.am);
    wide.view_mut((0, n), (n, n)).copy_from(&p.s);
    Ok(rank(&wide, dtol) == rank(&p.am, dtol))
}

/// Orthonormal bases of the range and of the kernel of `m`.
fn range_and_kernel(m: &RealMatrix, tol: Tol) -> (RealMatrix, RealMatrix) {
    let (u, sigma, v_t) = sorted_svd(m);
    let cutoff = tol.rank_cutoff(m.nrows(), m.ncols(), sigma.get(0).copied().unwrap_or(0.0));
    let r = sigma.iter().filter(|&&s| s > cutoff && s > 0.0).count();
    let range = u.columns(0, r).into_owned();
    // sorted_svd is thin; for square m it spans the full domain.
    let kernel = v_t.rows(r, v_t.nrows() - r).transpose();
    (range, kernel)
}

/// `|(I - QQᵀ) v| / max(1, |v|)` with `Q` an orthonormal basis of the real
/// representation of `R(Ŷ)`.
pub fn range_membership_residual(y: &DualMatrix, v: &DualVector, tol: Tol) -> f64 {
    let (q, _) = range_and_kernel(&y.real_representation(), decision_tol(tol));
    let vec = v.stacked();
    let proj = &q * (q.transpose() * &vec);
    fro(&(&vec - proj)) / fro(&vec).max(1.0)
}

/// `|(I - QQᵀ) M|` relative to `|M|`: how far the columns of `m` lie outside
/// the span of `q`.
fn outside(q: &RealMatrix, m: &RealMatrix) -> f64 {
    let proj = q * (q.transpose() * m);
    fro(&(m - proj)) / fro(m).max(1.0)
}

/// Membership checks for `R(Â^⊕) = R(Â^m)`, `N(Â^⊕) = N((Â^m)ᵀ)` and
/// `R(Â^m) ∩ N((Â^m)ᵀ) = {0}`, using real representations.
#[derive(Debug, Clone, Serialize)]
pub struct RangeNullReport {
    pub range_equal: bool,
    pub range_residual: f64,
    pub null_equal: bool,
    pub null_residual: f64,
    pub trivial_intersection: bool,
    /// Smallest singular value of `(Â^m)ᵀ` restricted to `R(Â^m)`, relative.
    pub intersection_margin: f64,
    pub tolerance: f64,
}

impl RangeNullReport {
    pub fn all_hold(&self) -> bool {
        self.range_equal && self.null_equal && self.trivial_intersection
    }
}

pub fn range_null_report(x: &DualMatrix, tol: Tol) -> Result<RangeNullReport> {
    ensure_square("range_null_report", x.nrows(), x.ncols())?;
    let cert = dcepgi_exists(x, tol)?;
    if !cert.exists {
        return Err(Error::Hypothesis(format!(
            "the DCEPGI does not exist (residual {:.3e})",
            cert.max_residual()
        )));
    }
    let report = first_order_report(x, tol)?;
    let first = report.conditions[FIRST_ORDER];
    if !first.holds {
        return Err(Error::Hypothesis(format!(
            "the DCEPGI is not A^⊕ - εA^⊕BA^⊕ (residual {:.3e})",
            first.residual
        )));
    }
    let inv = cert.witness.expect("existing certificate has a witness");
    let dtol = decision_tol(tol);
    let m = crate::realgi::index(x.std(), tol)?;
    let power = x.power(m)?;

    let m_inv = inv.real_representation();
    let m_pow = power.real_representation();
    let m_pow_t = power.transpose().real_representation();

    let (q_inv, k_inv) = range_and_kernel(&m_inv, dtol);
    let (q_pow, _) = range_and_kernel(&m_pow, dtol);
    let (_, k_pow_t) = range_and_kernel(&m_pow_t, dtol);

    let range_residual = outside(&q_pow, &m_inv).max(outside(&q_inv, &m_pow));
    let range_equal = tol.accepts(range_residual) && q_inv.ncols() == q_pow.ncols();

    let null_residual = (fro(&(&m_pow_t * &k_inv)) / fro(&m_pow_t).max(1.0))
        .max(fro(&(&m_inv * &k_pow_t)) / fro(&m_inv).max(1.0));
    let null_equal = tol.accepts(null_residual) && k_inv.ncols() == k_pow_t.ncols();

    let restricted = &m_pow_t * &q_pow;
    let (_, sigma, _) = sorted_svd(&restricted);
    let scale = spectral_norm(&m_pow_t).max(f64::MIN_POSITIVE);
    let intersection_margin = if q_pow.ncols() == 0 {
        1.0
    } else {
        sigma.get(q_pow.ncols() - 1).copied().unwrap_or(0.0) / scale
    };
    let trivial_intersection =
        q_pow.ncols() == 0 || intersection_margin > dtol.rank_rtol.unwrap_or(tol.residual);

    Ok(RangeNullReport {
        range_equal,
        range_residual,
        null_equal,
        null_residual,
        trivial_intersection,
        intersection_margin,
        tolerance: tol.residual,
    })
}

/// Reverse and forward order laws for the DCEPGI and their commuting
/// sufficient conditions.
#[derive(Debug, Clone, Serialize)]
pub struct OrderLawReport {
    pub lhs: DualMatrix,
    pub rhs: DualMatrix,
    pub product: DualMatrix,
    pub lhs_inverse: DualMatrix,
    pub rhs_inverse: DualMatrix,
    pub product_inverse: DualMatrix,
    /// `|(ÂB̂)^⊕ - B̂^⊕Â^⊕|`, relative.
    pub reverse_residual: f64,
    pub reverse_holds: bool,
    /// `|(ÂB̂)^⊕ - Â^⊕B̂^⊕|`, relative.
    pub forward_residual: f64,
    pub forward_holds: bool,
    /// `AB=BA`, `ABᵀ=BᵀA`, `B^⊕A0=A0B^⊕`, `A^⊕B0=B0A^⊕`.
    pub quadruple: BTreeMap<String, Condition>,
    pub quadruple_holds: bool,
    /// `AᵀB = BAᵀ`, the variant used in place of `ABᵀ = BᵀA` by some
    /// derivations.
    pub transposed_commutation: Condition,
    /// The quadruple implies both laws, or the quadruple fails.
    pub implication_consistent: bool,
    pub tolerance: f64,
}

fn named_inverse(x: &DualMatrix, which: &str, tol: Tol) -> Result<DualMatrix> {
    let cert: ExistenceCertificate = dcepgi_exists(x, tol)?;
    if !cert.exists {
        return Err(Error::Hypothesis(format!(
            "the DCEPGI of {which} does not exist (residual {:.3e})",
            cert.max_residual()
        )));
    }
    Ok(cert.witness.expect("existing certificate has a witness"))
}

pub fn order_law_check(lhs: &DualMatrix, rhs: &DualMatrix, tol: Tol) -> Result<OrderLawReport> {
    ensure_square("order_law_check", lhs.nrows(), lhs.ncols())?;
    ensure_square("order_law_check", rhs.nrows(), rhs.ncols())?;
    let product = lhs.try_mul(rhs)?;
    let li = named_inverse(lhs, "the left factor", tol)?;
    let ri = named_inverse(rhs, "the right factor", tol)?;
    let pi = named_inverse(&product, "the product", tol)?;

    let reverse_residual = rel_residual(&pi, &(&ri * &li));
    let forward_residual = rel_residual(&pi, &(&li * &ri));

    let (a, a0) = (lhs.std(), lhs.inf());
    let (b, b0) = (rhs.std(), rhs.inf());
    let a_cep = core_ep_inverse(a, tol)?;
    let b_cep = core_ep_inverse(b, tol)?;
    let rr = |x: &RealMatrix, y: &RealMatrix| fro(&(x - y)) / fro(x).max(fro(y)).max(1.0);
    let mut quadruple = BTreeMap::new();
    for (name, r) in [
        ("ab=ba", rr(&(a * b), &(b * a))),
        ("ab^t=b^ta", rr(&(a * b.transpose()), &(b.transpose() * a))),
        ("b_cep_a0=a0_b_cep", rr(&(&b_cep * a0), &(a0 * &b_cep))),
        ("a_cep_b0=b0_a_cep", rr(&(&a_cep * b0), &(b0 * &a_cep))),
    ] {
        quadruple.insert(name.to_string(), Condition::new(r, tol));
    }
    let quadruple_holds = quadruple.values().all(|c| c.holds);
    let transposed_commutation =
        Condition::new(rr(&(a.transpose() * b), &(b * a.transpose())), tol);
    let reverse_holds = tol.accepts(reverse_residual);
    let forward_holds = tol.accepts(forward_residual);

    Ok(OrderLawReport {
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        product,
        lhs_inverse: li,
        rhs_inverse: ri,
        product_inverse: pi,
        reverse_residual,
        reverse_holds,
        forward_residual,
        forward_holds,
        quadruple,
        quadruple_holds,
        transposed_commutation,
        implication_consistent: !quadruple_holds || (reverse_holds && forward_holds),
        tolerance: tol.residual,
    })
}

/// `U^T S U` split into the blocks used by the block condition; exposed for
/// diagnostics.
pub fn s_blocks(x: &DualMatrix, tol: Tol) -> Result<DualBlocks> {
    let p = Prepared::new(x, "s_blocks", tol)?;
    Ok(DualBlocks::new(&p.blocks, &p.s))
}
