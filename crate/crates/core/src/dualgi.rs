//! Dual generalized inverses with existence certificates.
//!
//! Every inverse that may fail to exist has a `*_exists` function returning
//! an [`ExistenceCertificate`]; the constructor of the inverse returns the
//! certificate's witness or [`Error::DoesNotExist`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dualnum::{rel_residual, s_matrix, DualMatrix};
use crate::error::{ensure_square, Error, Result};
use crate::realgi::{
    core_ep_decompose, fro, join_blocks, moore_penrose, power, rank, split_blocks, CoreEPBlocks,
    RealMatrix,
};
use crate::tol::Tol;

/// The inverses this crate computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InverseKind {
    Mpdgi,
    Dmpgi,
    Ddgi,
    DualGroup,
    DualCore,
    Dcepgi,
    DcepgiCompact,
}

impl InverseKind {
    pub fn long_name(self) -> &'static str {
        match self {
            InverseKind::Mpdgi => "Moore-Penrose dual generalized inverse (MPDGI)",
            InverseKind::Dmpgi => "dual Moore-Penrose generalized inverse (DMPGI)",
            InverseKind::Ddgi => "dual Drazin generalized inverse (DDGI)",
            InverseKind::DualGroup => "dual group generalized inverse",
            InverseKind::DualCore => "dual core inverse",
            InverseKind::Dcepgi => "dual core-EP generalized inverse (DCEPGI)",
            InverseKind::DcepgiCompact => "dual core-EP generalized inverse (compact formula)",
        }
    }
}

/// An independent test run alongside the deciding residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub holds: bool,
    /// Residual or rank defect behind `holds`.
    pub value: f64,
}

/// Outcome of an existence test.
///
/// `exists` is true exactly when every entry of `residuals` is at most
/// `tolerance`. Cross checks are reported but do not vote.
#[derive(Debug, Clone, Serialize)]
pub struct ExistenceCertificate {
    pub kind: InverseKind,
    pub exists: bool,
    pub residuals: BTreeMap<String, f64>,
    pub cross_checks: BTreeMap<String, CrossCheck>,
    pub tolerance: f64,
    /// The inverse, when it exists.
    pub witness: Option<DualMatrix>,
    /// Residuals of the defining identities evaluated at the witness.
    pub witness_residuals: BTreeMap<String, f64>,
}

impl ExistenceCertificate {
    fn decide(
        kind: InverseKind,
        residuals: BTreeMap<String, f64>,
        cross_checks: BTreeMap<String, CrossCheck>,
        tol: Tol,
    ) -> Self {
        let exists = residuals.values().all(|&r| tol.accepts(r));
        ExistenceCertificate {
            kind,
            exists,
            residuals,
            cross_checks,
            tolerance: tol.residual,
            witness: None,
            witness_residuals: BTreeMap::new(),
        }
    }

    fn with_witness(mut self, witness: DualMatrix, residuals: BTreeMap<String, f64>) -> Self {
        self.witness = Some(witness);
        self.witness_residuals = residuals;
        self
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }

    /// Every cross check reaches the same verdict as `exists`.
    pub fn consistent(&self) -> bool {
        self.cross_checks.values().all(|c| c.holds == self.exists)
    }

    /// The witness satisfies its defining identities within `tolerance`.
    pub fn witness_verified(&self) -> bool {
        self.witness.is_some()
            && self
                .witness_residuals
                .values()
                .all(|&r| r <= self.tolerance)
    }

    /// The witness, or the certificate wrapped as an error.
    pub fn into_result(self) -> Result<DualMatrix> {
        match (self.exists, &self.witness) {
            (true, Some(w)) => Ok(w.clone()),
            _ => Err(Error::DoesNotExist(Box::new(self))),
        }
    }
}

/// The blocks `B1..B4` of `U^T B U` for the `U` of a core-EP decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBlocks {
    pub b1: RealMatrix,
    pub b2: RealMatrix,
    pub b3: RealMatrix,
    pub b4: RealMatrix,
}

impl DualBlocks {
    pub fn new(blocks: &CoreEPBlocks, b: &RealMatrix) -> Self {
        let (b1, b2, b3, b4) = split_blocks(&blocks.to_frame(b), blocks.rank);
        DualBlocks { b1, b2, b3, b4 }
    }

    /// `U [[B1, B2], [B3, B4]] U^T`.
    pub fn reconstruct(&self, blocks: &CoreEPBlocks) -> RealMatrix {
        blocks.from_frame(&join_blocks(&self.b1, &self.b2, &self.b3, &self.b4))
    }
}

/// Shared per-call data: the core-EP decomposition of the standard part and
/// everything derived from it.
pub(crate) struct Prepared {
    pub a: RealMatrix,
    pub b: RealMatrix,
    pub blocks: CoreEPBlocks,
    pub frame: DualBlocks,
    pub m: usize,
    pub am: RealMatrix,
    pub s: RealMatrix,
    /// `T1^{-k}` for `k = 0..=m+2`.
    pub t1_inv_powers: Vec<RealMatrix>,
}

impl Prepared {
    pub fn new(x: &DualMatrix, op: &'static str, tol: Tol) -> Result<Self> {
        ensure_square(op, x.nrows(), x.ncols())?;
        let blocks = core_ep_decompose(x.std(), tol)?;
        Prepared::with_blocks(x, blocks)
    }

    pub fn with_blocks(x: &DualMatrix, blocks: CoreEPBlocks) -> Result<Self> {
        let a = x.std().clone();
        let b = x.inf().clone();
        let m = blocks.index;
        let frame = DualBlocks::new(&blocks, &b);
        let am = power(&a, m);
        let s = s_matrix(&a, &b, m)?;
        let t1_inv = blocks.t1_inverse()?;
        let t1_inv_powers = (0..=m + 2).map(|k| power(&t1_inv, k)).collect();
        Ok(Prepared {
            a,
            b,
            blocks,
            frame,
            m,
            am,
            s,
            t1_inv_powers,
        })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn t(&self) -> usize {
        self.blocks.rank
    }

    pub fn t1_inv(&self) -> &RealMatrix {
        &self.t1_inv_powers[1]
    }

    /// `A^⊕ = U [[T1^{-1}, O], [O, O]] U^T`.
    pub fn core_ep(&self) -> RealMatrix {
        self.embed_top_left(self.t1_inv())
    }

    /// `U [[X, O], [O, O]] U^T` for a `t x t` block.
    pub fn embed_top_left(&self, x: &RealMatrix) -> RealMatrix {
        let (t, rest) = (self.t(), self.n() - self.t());
        self.blocks.from_frame(&join_blocks(
            x,
            &RealMatrix::zeros(t, rest),
            &RealMatrix::zeros(rest, t),
            &RealMatrix::zeros(rest, rest),
        ))
    }

    /// `U3 = sum_{i=0}^{m-1} N^i B3 T1^{-(i+1)}`, the solution of
    /// `N U3 + B3 - U3 T1 = O`.
    pub fn u3(&self) -> RealMatrix {
        let mut acc = RealMatrix::zeros(self.n() - self.t(), self.t());
        for i in 0..self.m {
            acc += power(&self.blocks.n, i) * &self.frame.b3 * &self.t1_inv_powers[i + 1];
        }
        acc
    }
}

pub(crate) fn decision_tol(tol: Tol) -> Tol {
    if tol.rank_rtol.is_some() {
        tol
    } else {
        tol.with_rank_rtol(tol.residual)
    }
}

fn scaled(raw: f64, scale: f64) -> f64 {
    raw / scale.max(1.0)
}

fn residual_map<const K: usize>(entries: [(&str, f64); K]) -> BTreeMap<String, f64> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// `A† - ε A† A0 A†`. Always defined, but only equal to the DMPGI under extra
/// conditions.
pub fn mpdgi(x: &DualMatrix, tol: Tol) -> DualMatrix {
    let ap = moore_penrose(x.std(), tol);
    let inf = -(&ap * x.inf() * &ap);
    DualMatrix::from_parts(ap, inf)
}

/// Residuals of the four dual Penrose equations for a candidate `X̂`.
pub fn penrose_residuals(a: &DualMatrix, x: &DualMatrix) -> BTreeMap<String, f64> {
    let ax = a * x;
    let xa = x * a;
    residual_map([
        ("axa=a", rel_residual(&(&ax * a), a)),
        ("xax=x", rel_residual(&(&xa * x), x)),
        ("(ax)^t=ax", rel_residual(&ax.transpose(), &ax)),
        ("(xa)^t=xa", rel_residual(&xa.transpose(), &xa)),
    ])
}

/// Residuals of the Drazin identities `X̂Â^{m+1}=Â^m`, `X̂ÂX̂=X̂`,
/// `ÂX̂=X̂Â`.
pub fn drazin_residuals(a: &DualMatrix, x: &DualMatrix, m: usize) -> Result<BTreeMap<String, f64>> {
    let am = a.power(m)?;
    let am1 = &am * a;
    Ok(residual_map([
        ("xa^(m+1)=a^m", rel_residual(&(x * &am1), &am)),
        ("xax=x", rel_residual(&(&(x * a) * x), x)),
        ("ax=xa", rel_residual(&(a * x), &(x * a))),
    ]))
}

/// Residuals of the core-EP identities `(ÂX̂)^T=ÂX̂`, `ÂX̂²=X̂`,
/// `X̂Â^{m+1}=Â^m`.
pub fn core_ep_residuals(
    a: &DualMatrix,
    x: &DualMatrix,
    m: usize,
) -> Result<BTreeMap<String, f64>> {
    let am = a.power(m)?;
    let am1 = &am * a;
    let ax = a * x;
    Ok(residual_map([
        ("(ax)^t=ax", rel_residual(&ax.transpose(), &ax)),
        ("ax^2=x", rel_residual(&(&ax * x), x)),
        ("xa^(m+1)=a^m", rel_residual(&(x * &am1), &am)),
    ]))
}

/// Residuals of the core identities `(ÂX̂)^T=ÂX̂`, `ÂX̂²=X̂`, `X̂Â²=Â`.
pub fn core_residuals(a: &DualMatrix, x: &DualMatrix) -> BTreeMap<String, f64> {
    let ax = a * x;
    let a2 = a * a;
    residual_map([
        ("(ax)^t=ax", rel_residual(&ax.transpose(), &ax)),
        ("ax^2=x", rel_residual(&(&ax * x), x)),
        ("xa^2=a", rel_residual(&(x * &a2), a)),
    ])
}

/// Existence of the DMPGI: `(I - AA†) A0 (I - A†A) = O`, cross-checked by
/// `rank([[A0, A], [A, O]]) = 2 rank(A)`.
pub fn dmpgi_exists(x: &DualMatrix, tol: Tol) -> ExistenceCertificate {
    let (a, a0) = (x.std(), x.inf());
    let (r, c) = a.shape();
    let ap = moore_penrose(a, tol);
    let left = RealMatrix::identity(r, r) - a * &ap;
    let right = RealMatrix::identity(c, c) - &ap * a;
    let raw = fro(&(&left * a0 * &right));
    let residuals = residual_map([("projected_infinitesimal", scaled(raw, fro(a0)))]);

    let dtol = decision_tol(tol);
    let aug = join_blocks(a0, a, a, &RealMatrix::zeros(r, c));
    let rank_a = rank(a, dtol);
    let rank_aug = rank(&aug, dtol);
    let mut cross = BTreeMap::new();
    cross.insert(
        "augmented_rank".to_string(),
        CrossCheck {
            holds: rank_aug == 2 * rank_a,
            value: rank_aug as f64 - 2.0 * rank_a as f64,
        },
    );

    let cert = ExistenceCertificate::decide(InverseKind::Dmpgi, residuals, cross, tol);
    if !cert.exists {
        return cert;
    }
    let apt = ap.transpose();
    let ata_p = &ap * &apt;
    let aat_p = &apt * &ap;
    let a0t = a0.transpose();
    let inf = -(&ap * a0 * &ap) + ata_p * &a0t * &left + &right * &a0t * aat_p;
    let w = DualMatrix::from_parts(ap, inf);
    let wr = penrose_residuals(x, &w);
    cert.with_witness(w, wr)
}

/// The DMPGI `Â†`.
pub fn dmpgi(x: &DualMatrix, tol: Tol) -> Result<DualMatrix> {
    dmpgi_exists(x, tol).into_result()
}

/// Existence of the DDGI: `(I - AA^D) S (I - AA^D) = O`, cross-checked by
/// `rank([[S, A^m], [A^m, O]]) = 2 rank(A^m)` and by existence of the DMPGI
/// of `Â^m`.
pub fn ddgi_exists(x: &DualMatrix, tol: Tol) -> Result<ExistenceCertificate> {
    let p = Prepared::new(x, "ddgi_exists", tol)?;
    Ok(ddgi_certificate(x, &p, tol))
}

fn ddgi_certificate(x: &DualMatrix, p: &Prepared, tol: Tol) -> ExistenceCertificate {
    let n = p.n();
    let ad = p.blocks.drazin().expect("T1 invertible by construction");
    let proj = RealMatrix::identity(n, n) - &p.a * &ad;
    let raw = fro(&(&proj * &p.s * &proj));
    let pn = fro(&proj).max(1.0);
    let residuals = residual_map([("drazin_projected_s", raw / (fro(&p.s).max(1.0) * pn * pn))]);

    let dtol = decision_tol(tol);
    let aug = join_blocks(&p.s, &p.am, &p.am, &RealMatrix::zeros(n, n));
    let rank_aug = rank(&aug, dtol);
    let mut cross = BTreeMap::new();
    cross.insert(
        "augmented_rank".to_string(),
        CrossCheck {
            holds: rank_aug == 2 * p.t(),
            value: rank_aug as f64 - 2.0 * p.t() as f64,
        },
    );
    let power_cert = dmpgi_exists(&DualMatrix::from_parts(p.am.clone(), p.s.clone()), tol);
    cross.insert(
        "power_dmpgi".to_string(),
        CrossCheck {
            holds: power_cert.exists,
            value: power_cert.max_residual(),
        },
    );

    let cert = ExistenceCertificate::decide(InverseKind::Ddgi, residuals, cross, tol);
    if !cert.exists {
        return cert;
    }
    let mut inf = -(&ad * &p.b * &ad);
    for i in 0..p.m {
        let ad_pow = power(&ad, i + 2);
        let a_pow = power(&p.a, i);
        inf += &ad_pow * &p.b * &a_pow * &proj + &proj * &a_pow * &p.b * &ad_pow;
    }
    let w = DualMatrix::from_parts(ad, inf);
    let wr = drazin_residuals(x, &w, p.m).expect("square");
    cert.with_witness(w, wr)
}

/// The DDGI `Â^D`.
pub fn ddgi(x: &DualMatrix, tol: Tol) -> Result<DualMatrix> {
    ddgi_exists(x, tol)?.into_result()
}

/// The dual group inverse: the DDGI of a matrix whose standard part has
/// index at most 1.
pub fn dual_group(x: &DualMatrix, tol: Tol) -> Result<DualMatrix> {
    let p = Prepared::new(x, "dual_group", tol)?;
    if p.m > 1 {
        return Err(Error::Domain(format!(
            "dual group inverse needs index(A) <= 1, found {}",
            p.m
        )));
    }
    let mut cert = ddgi_certificate(x, &p, tol);
    cert.kind = InverseKind::DualGroup;
    cert.into_result()
}

/// Existence of the DCEPGI:
/// `(I - A^m (A^m)^⊕) S (I - (A^m)^⊕ A^m) = O`, cross-checked by the block
/// condition `S4 = S3 T1^{-m} T~` with `S3`, `S4` assembled from `B3`, `B4`.
pub fn dcepgi_exists(x: &DualMatrix, tol: Tol) -> Result<ExistenceCertificate> {
    let p = Prepared::new(x, "dcepgi_exists", tol)?;
    Ok(dcepgi_certificate(x, &p, tol))
}

/// Block condition residual and the two sides `S4`, `S3 T1^{-m} T~`.
pub(crate) fn block_condition(p: &Prepared) -> f64 {
    let (t, rest, m) = (p.t(), p.n() - p.t(), p.m);
    let n_blk = &p.blocks.n;
    let t1 = &p.blocks.t1;
    let mut s3 = RealMatrix::zeros(rest, t);
    let mut s4 = RealMatrix::zeros(rest, rest);
    for i in 1..=m {
        let n_pow = power(n_blk, m - i);
        s3 += &n_pow * &p.frame.b3 * power(t1, i - 1);
        // F_i = sum_{j=0}^{i-2} T1^j T2 N^{i-2-j}
        let f = p.blocks.upper_right_of_power(i - 1);
        s4 += &n_pow * (&p.frame.b3 * f + &p.frame.b4 * power(n_blk, i - 1));
    }
    let h = &p.t1_inv_powers[m] * p.blocks.upper_right_of_power(m);
    let raw = fro(&(&s4 - &s3 * &h));
    raw / (fro(&p.s).max(1.0) * fro(&h).max(1.0))
}

fn dcepgi_certificate(x: &DualMatrix, p: &Prepared, tol: Tol) -> ExistenceCertificate {
    let n = p.n();
    // (A^m)^⊕ = U [[T1^{-m}, O], [O, O]] U^T
    let am_cep = p.embed_top_left(&p.t1_inv_powers[p.m]);
    let left = RealMatrix::identity(n, n) - &p.am * &am_cep;
    let q = &am_cep * &p.am;
    let right = RealMatrix::identity(n, n) - &q;
    let raw = fro(&(&left * &p.s * &right));
    let residuals = residual_map([(
        "core_ep_projected_s",
        raw / (fro(&p.s).max(1.0) * fro(&q).max(1.0)),
    )]);

    let block = block_condition(p);
    let mut cross = BTreeMap::new();
    cross.insert(
        "block_condition".to_string(),
        CrossCheck {
            holds: tol.accepts(block),
            value: block,
        },
    );

    let cert = ExistenceCertificate::decide(InverseKind::Dcepgi, residuals, cross, tol);
    if !cert.exists {
        return cert;
    }
    let w = dcepgi_canonical(p);
    let wr = core_ep_residuals(x, &w, p.m).expect("square");
    cert.with_witness(w, wr)
}

/// `A^⊕ + εR` with
/// `R = U [[-T1^{-1}B1T1^{-1} - T1^{-1}T2 Z, T1^{-1}W^T], [Z, O]] U^T`,
/// `Z = sum_{i=1}^m N^{m-i} B3 T1^{i-m-2}`,
/// `W = sum_{i=1}^m N^{m-i} B3 T1^{i-m-1}`.
fn dcepgi_canonical(p: &Prepared) -> DualMatrix {
    let (t, rest, m) = (p.t(), p.n() - p.t(), p.m);
    let t1_inv = p.t1_inv();
    let mut z = RealMatrix::zeros(rest, t);
    let mut w = RealMatrix::zeros(rest, t);
    for i in 1..=m {
        let nb = power(&p.blocks.n, m - i) * &p.frame.b3;
        z += &nb * &p.t1_inv_powers[m + 2 - i];
        w += &nb * &p.t1_inv_powers[m + 1 - i];
    }
    let r1 = -(t1_inv * &p.frame.b1 * t1_inv) - t1_inv * &p.blocks.t2 * &z;
    let r2 = t1_inv * w.transpose();
    let r = p
        .blocks
        .from_frame(&join_blocks(&r1, &r2, &z, &RealMatrix::zeros(rest, rest)));
    DualMatrix::from_parts(p.core_ep(), r)
}

/// The DCEPGI `Â^⊕`, from the canonical block formula.
pub fn dcepgi(x: &DualMatrix, tol: Tol) -> Result<DualMatrix> {
    dcepgi_exists(x, tol)?.into_result()
}

/// `Â^⊕ = Â^D Â^m (Â^m)†`. Needs both the DCEPGI and the DDGI.
pub fn dcepgi_compact(x: &DualMatrix, tol: Tol) -> Result<DualMatrix> {
    let p = Prepared::new(x, "dcepgi_compact", tol)?;
    let cep = dcepgi_certificate(x, &p, tol);
    if !cep.exists {
        return Err(Error::DoesNotExist(Box::new(cep)));
    }
    let ddgi = ddgi_certificate(x, &p, tol).into_result()?;
    let am = DualMatrix::from_parts(p.am.clone(), p.s.clone());
    let am_dagger = dmpgi(&am, tol)?;
    Ok(&(&ddgi * &am) * &am_dagger)
}

/// Existence of the dual core inverse: index at most 1 and the dual
/// core-EP decomposition has a vanishing nilpotent block, i.e.
/// `B4 = B3 T1^{-1} T2`.
pub fn dual_core_exists(x: &DualMatrix, tol: Tol) -> Result<ExistenceCertificate> {
    let p = Prepared::new(x, "dual_core_inverse", tol)?;
    if p.m > 1 {
        return Err(Error::Domain(format!(
            "dual core inverse needs index(A) <= 1, found {}",
            p.m
        )));
    }
    let u3 = p.u3();
    let raw = fro(&(&p.frame.b4 - &u3 * &p.blocks.t2));
    let residuals = residual_map([(
        "nilpotent_block",
        raw / (fro(&p.b).max(1.0) * fro(&p.blocks.t2).max(1.0)),
    )]);
    let block = block_condition(&p);
    let mut cross = BTreeMap::new();
    cross.insert(
        "block_condition".to_string(),
        CrossCheck {
            holds: tol.accepts(block),
            value: block,
        },
    );
    let cert = ExistenceCertificate::decide(InverseKind::DualCore, residuals, cross, tol);
    if !cert.exists {
        return Ok(cert);
    }
    let d = crate::dualdecomp::from_prepared(&p);
    let w = d.core_ep_inverse_unchecked()?;
    let wr = core_residuals(x, &w);
    Ok(cert.with_witness(w, wr))
}

/// The dual core inverse `Û [[T̂1^{-1}, O], [O, O]] Û^T`.
pub fn dual_core_inverse(x: &DualMatrix, tol: Tol) -> Result<DualMatrix> {
    dual_core_exists(x, tol)?.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(n: usize, data: &[f64]) -> RealMatrix {
        RealMatrix::from_row_slice(n, n, data)
    }

    fn no_cep_3x3() -> DualMatrix {
        DualMatrix::from_rows(
            3,
            3,
            &[1., 2., -2., 0., 0., -2., 0., 0., 0.],
            &[1., 5., -2., 0., 3., -2., 2., 0., 4.],
        )
        .unwrap()
    }

    fn tol() -> Tol {
        Tol::default()
    }

    fn close(a: &DualMatrix, b: &DualMatrix, eps: f64) -> bool {
        rel_residual(a, b) < eps
    }

    #[test]
    fn mpdgi_examples() {
        let b = rm(2, &[1., 2., 3., 4.]);
        let x = DualMatrix::new(RealMatrix::identity(2, 2), b.clone()).unwrap();
        let expect = DualMatrix::new(RealMatrix::identity(2, 2), -b.clone()).unwrap();
        assert!(close(&mpdgi(&x, tol()), &expect, 1e-15));
        let y = DualMatrix::new(RealMatrix::zeros(2, 2), b).unwrap();
        assert_eq!(mpdgi(&y, tol()), DualMatrix::zeros(2, 2));
        let e = no_cep_3x3();
        let ap = moore_penrose(e.std(), tol());
        let got = mpdgi(&e, tol());
        assert_eq!(got.std(), &ap);
        assert!(fro(&(got.inf() + &ap * e.inf() * &ap)) < 1e-14);
    }

    #[test]
    fn dmpgi_real_input_exists() {
        let x = DualMatrix::real(rm(2, &[1., 2., 2., 4.]));
        let c = dmpgi_exists(&x, tol());
        assert!(c.exists && c.consistent() && c.witness_verified());
        assert_eq!(c.max_residual(), 0.0);
    }

    #[test]
    fn dmpgi_pure_infinitesimal_fails() {
        let x = DualMatrix::new(RealMatrix::zeros(2, 2), rm(2, &[1., 0., 0., 0.])).unwrap();
        let c = dmpgi_exists(&x, tol());
        assert!(!c.exists && c.consistent());
        assert!(matches!(dmpgi(&x, tol()), Err(Error::DoesNotExist(_))));
    }

    #[test]
    fn dmpgi_at_invertible_is_dual_inverse() {
        let b = rm(2, &[1., -1., 2., 0.5]);
        let x = DualMatrix::new(RealMatrix::identity(2, 2), b.clone()).unwrap();
        let got = dmpgi(&x, tol()).unwrap();
        let expect = DualMatrix::new(RealMatrix::identity(2, 2), -b).unwrap();
        assert!(close(&got, &expect, 1e-14));
    }

    #[test]
    fn dmpgi_projector_with_range_perturbation() {
        // A orthogonal projector, B = A C A keeps both correction terms zero.
        let a = rm(3, &[1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let c = rm(3, &[1., 2., 3., 4., 5., 6., 7., 8., 9.]);
        let b = &a * c * &a;
        let x = DualMatrix::new(a.clone(), b.clone()).unwrap();
        let got = dmpgi(&x, tol()).unwrap();
        let expect = DualMatrix::new(a.clone(), -(&a * &b * &a)).unwrap();
        assert!(close(&got, &expect, 1e-14));
    }

    #[test]
    fn ddgi_examples() {
        let b = rm(2, &[0.3, 1., -2., 4.]);
        let a = rm(2, &[2., 1., 1., 1.]);
        let x = DualMatrix::new(a.clone(), b).unwrap();
        let got = ddgi(&x, tol()).unwrap();
        assert!(close(&got, &x.try_inverse().unwrap(), 1e-13));

        let e = no_cep_3x3();
        let c = ddgi_exists(&e, tol()).unwrap();
        assert!(!c.exists && c.consistent());

        let real = DualMatrix::real(e.std().clone());
        let got = ddgi(&real, tol()).unwrap();
        assert!(fro(got.inf()) < 1e-14);
        assert!(fro(&(got.std() - crate::realgi::drazin(e.std(), tol()).unwrap())) < 1e-13);
    }

    #[test]
    fn ddgi_block_diagonal_exists() {
        // A = diag(T, N) with N a 2x2 Jordan block and B = diag(B1, B4) with
        // N B4 + B4 N = O.
        let a = rm(3, &[2., 0., 0., 0., 0., 1., 0., 0., 0.]);
        let b = rm(3, &[1., 0., 0., 0., 1., 5., 0., 0., -1.]);
        let x = DualMatrix::new(a, b).unwrap();
        let c = ddgi_exists(&x, tol()).unwrap();
        assert!(c.exists && c.consistent() && c.witness_verified(), "{c:?}");
    }

    #[test]
    fn group_inverse_examples() {
        let p = rm(2, &[1., 1., 0., 0.]);
        let got = dual_group(&DualMatrix::real(p.clone()), tol()).unwrap();
        assert!(fro(&(got.std() - &p)) < 1e-13 && fro(got.inf()) < 1e-14);
        let e = no_cep_3x3();
        assert!(matches!(dual_group(&e, tol()), Err(Error::Domain(_))));
    }

    #[test]
    fn dcepgi_of_no_cep_3x3_does_not_exist() {
        let c = dcepgi_exists(&no_cep_3x3(), tol()).unwrap();
        assert!(!c.exists && c.consistent());
        assert!(c.witness.is_none());
        assert!(matches!(
            dcepgi(&no_cep_3x3(), tol()),
            Err(Error::DoesNotExist(_))
        ));
    }

    #[test]
    fn dcepgi_of_real_matrix_is_core_ep() {
        let e = no_cep_3x3();
        let got = dcepgi(&DualMatrix::real(e.std().clone()), tol()).unwrap();
        let expect = rm(3, &[1., 0., 0., 0., 0., 0., 0., 0., 0.]);
        assert!(fro(&(got.std() - expect)) < 1e-12);
        assert!(fro(got.inf()) < 1e-14);
    }

    #[test]
    fn dcepgi_with_zero_lower_blocks() {
        // Upper-triangular A in the standard basis: U = I, B3 = B4 = O.
        let a = rm(3, &[2., 1., 1., 0., 0., 1., 0., 0., 0.]);
        let b = rm(3, &[1., 2., 3., 0., 0., 0., 0., 0., 0.]);
        let x = DualMatrix::new(a, b).unwrap();
        let c = dcepgi_exists(&x, tol()).unwrap();
        assert!(c.exists && c.consistent() && c.witness_verified(), "{c:?}");
    }

    #[test]
    fn compact_matches_canonical_at_invertible() {
        let a = rm(2, &[3., 1., 1., 2.]);
        let b = rm(2, &[0., 1., -1., 0.]);
        let x = DualMatrix::new(a, b).unwrap();
        let inv = x.try_inverse().unwrap();
        assert!(close(&dcepgi(&x, tol()).unwrap(), &inv, 1e-13));
        assert!(close(&dcepgi_compact(&x, tol()).unwrap(), &inv, 1e-13));
    }

    #[test]
    fn zero_matrix_conventions() {
        let zero = DualMatrix::zeros(3, 3);
        assert_eq!(dcepgi(&zero, tol()).unwrap(), DualMatrix::zeros(3, 3));
        let inf_only = DualMatrix::new(RealMatrix::zeros(2, 2), rm(2, &[0., 1., 0., 0.])).unwrap();
        assert!(!dcepgi_exists(&inf_only, tol()).unwrap().exists);
    }

    #[test]
    fn dual_core_examples() {
        let a = rm(2, &[3., 1., 1., 2.]);
        let b = rm(2, &[0., 1., -1., 0.]);
        let x = DualMatrix::new(a, b).unwrap();
        assert!(close(
            &dual_core_inverse(&x, tol()).unwrap(),
            &x.try_inverse().unwrap(),
            1e-13
        ));

        let idem = DualMatrix::real(rm(2, &[1., 1., 0., 0.]));
        let got = dual_core_inverse(&idem, tol()).unwrap();
        let c = core_residuals(&idem, &got);
        assert!(c.values().all(|&r| r < 1e-13));

        assert!(matches!(
            dual_core_inverse(&no_cep_3x3(), tol()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn non_square_is_rejected() {
        let x = DualMatrix::zeros(2, 3);
        assert!(matches!(
            dcepgi_exists(&x, tol()),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            ddgi_exists(&x, tol()),
            Err(Error::NotSquare { .. })
        ));
    }
}
