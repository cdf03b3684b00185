//! Dual numbers `a + εb` (with `ε² = 0`) and dense dual matrices
//! `Â = A + εB`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{ensure_square, Error, Result};
use crate::realgi::{fro, join_blocks, power, split_blocks, RealMatrix};

/// A dual scalar `std + ε·inf`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualScalar {
    pub std: f64,
    pub inf: f64,
}

impl DualScalar {
    pub const fn new(std: f64, inf: f64) -> Self {
        DualScalar { std, inf }
    }

    pub const fn real(std: f64) -> Self {
        DualScalar { std, inf: 0.0 }
    }

    /// `1/(a + εb) = 1/a − ε b/a²`; `None` when the standard part is zero.
    pub fn recip(self) -> Option<Self> {
        if self.std == 0.0 {
            return None;
        }
        Some(DualScalar::new(
            1.0 / self.std,
            -self.inf / (self.std * self.std),
        ))
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: Self) -> Self {
        DualScalar::new(self.std + rhs.std, self.inf + rhs.inf)
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: Self) -> Self {
        DualScalar::new(self.std - rhs.std, self.inf - rhs.inf)
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> Self {
        DualScalar::new(-self.std, -self.inf)
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: Self) -> Self {
        DualScalar::new(self.std * rhs.std, self.std * rhs.inf + self.inf * rhs.std)
    }
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.std, self.inf)
    }
}

/// A dual matrix `std + ε·inf` with equally shaped real parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMatrix {
    std: RealMatrix,
    inf: RealMatrix,
}

impl DualMatrix {
    pub fn new(std: RealMatrix, inf: RealMatrix) -> Result<Self> {
        if std.shape() != inf.shape() {
            return Err(Error::Dimension {
                op: "DualMatrix::new",
                detail: format!(
                    "standard part is {}x{}, infinitesimal part is {}x{}",
                    std.nrows(),
                    std.ncols(),
                    inf.nrows(),
                    inf.ncols()
                ),
            });
        }
        if std.iter().chain(inf.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("dual matrix"));
        }
        Ok(DualMatrix { std, inf })
    }

    /// Build from row-major slices.
    pub fn from_rows(rows: usize, cols: usize, std: &[f64], inf: &[f64]) -> Result<Self> {
        if std.len() != rows * cols || inf.len() != rows * cols {
            return Err(Error::Dimension {
                op: "DualMatrix::from_rows",
                detail: format!(
                    "expected {} entries per part, got {} and {}",
                    rows * cols,
                    std.len(),
                    inf.len()
                ),
            });
        }
        DualMatrix::new(
            RealMatrix::from_row_slice(rows, cols, std),
            RealMatrix::from_row_slice(rows, cols, inf),
        )
    }

    /// Shapes must already agree; used internally where they do by
    /// construction.
    pub(crate) fn from_parts(std: RealMatrix, inf: RealMatrix) -> Self {
        debug_assert_eq!(std.shape(), inf.shape());
        DualMatrix { std, inf }
    }

    pub fn real(std: RealMatrix) -> Self {
        let inf = RealMatrix::zeros(std.nrows(), std.ncols());
        DualMatrix { std, inf }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DualMatrix::real(RealMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        DualMatrix::real(RealMatrix::identity(n, n))
    }

    pub fn std(&self) -> &RealMatrix {
        &self.std
    }

    pub fn inf(&self) -> &RealMatrix {
        &self.inf
    }

    pub fn into_parts(self) -> (RealMatrix, RealMatrix) {
        (self.std, self.inf)
    }

    pub fn nrows(&self) -> usize {
        self.std.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.std.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.std.shape()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Appreciable means the standard part is nonzero.
    pub fn is_appreciable(&self) -> bool {
        self.std.iter().any(|&x| x != 0.0)
    }

    /// Dual norm `max(|A|_F, |B|_F)`.
    pub fn norm(&self) -> f64 {
        fro(&self.std).max(fro(&self.inf))
    }

    pub fn transpose(&self) -> DualMatrix {
        DualMatrix::from_parts(self.std.transpose(), self.inf.transpose())
    }

    pub fn try_add(&self, rhs: &DualMatrix) -> Result<DualMatrix> {
        self.same_shape("dual_add", rhs)?;
        Ok(DualMatrix::from_parts(
            &self.std + &rhs.std,
            &self.inf + &rhs.inf,
        ))
    }

    pub fn try_sub(&self, rhs: &DualMatrix) -> Result<DualMatrix> {
        self.same_shape("dual_sub", rhs)?;
        Ok(DualMatrix::from_parts(
            &self.std - &rhs.std,
            &self.inf - &rhs.inf,
        ))
    }

    /// `(A + εB)(C + εD) = AC + ε(AD + BC)`.
    pub fn try_mul(&self, rhs: &DualMatrix) -> Result<DualMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::Dimension {
                op: "dual_mul",
                detail: format!(
                    "{}x{} times {}x{}",
                    self.nrows(),
                    self.ncols(),
                    rhs.nrows(),
                    rhs.ncols()
                ),
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &DualMatrix) -> DualMatrix {
        let std = &self.std * &rhs.std;
        let inf = &self.std * &rhs.inf + &self.inf * &rhs.std;
        DualMatrix::from_parts(std, inf)
    }

    pub fn scale(&self, s: DualScalar) -> DualMatrix {
        DualMatrix::from_parts(&self.std * s.std, &self.std * s.inf + &self.inf * s.std)
    }

    /// `Â^k`, with `Â^0 = I`. The infinitesimal part of `Â^k` is
    /// `sum_{i=1}^{k} A^{k-i} B A^{i-1}`.
    pub fn power(&self, k: usize) -> Result<DualMatrix> {
        ensure_square("dual_power", self.nrows(), self.ncols())?;
        let mut out = DualMatrix::identity(self.nrows());
        for _ in 0..k {
            out = out.mul_unchecked(self);
        }
        Ok(out)
    }

    /// Inverse of a square dual matrix with invertible standard part:
    /// `A^{-1} − ε A^{-1} B A^{-1}`.
    pub fn try_inverse(&self) -> Result<DualMatrix> {
        ensure_square("dual_inverse", self.nrows(), self.ncols())?;
        let inv = crate::realgi::invert(&self.std, "standard part")?;
        let inf = -(&inv * &self.inf * &inv);
        Ok(DualMatrix::from_parts(inv, inf))
    }

    /// `W^T Â W` for a real `W`.
    pub fn congruence(&self, w: &RealMatrix) -> DualMatrix {
        let wt = w.transpose();
        DualMatrix::from_parts(&wt * &self.std * w, &wt * &self.inf * w)
    }

    /// `Ŵ^T Â Ŵ` for a dual `Ŵ`.
    pub fn dual_congruence(&self, w: &DualMatrix) -> DualMatrix {
        &(&w.transpose() * self) * w
    }

    /// Real representation `[[A, O], [B, A]]`: `Â(z + εw)` corresponds to
    /// `[[A, O], [B, A]] [z; w]`.
    pub fn real_representation(&self) -> RealMatrix {
        let (r, c) = self.shape();
        join_blocks(&self.std, &RealMatrix::zeros(r, c), &self.inf, &self.std)
    }

    pub fn split_blocks(&self, t: usize) -> [DualMatrix; 4] {
        let (s1, s2, s3, s4) = split_blocks(&self.std, t);
        let (i1, i2, i3, i4) = split_blocks(&self.inf, t);
        [
            DualMatrix::from_parts(s1, i1),
            DualMatrix::from_parts(s2, i2),
            DualMatrix::from_parts(s3, i3),
            DualMatrix::from_parts(s4, i4),
        ]
    }

    pub fn join_blocks(b: [&DualMatrix; 4]) -> DualMatrix {
        DualMatrix::from_parts(
            join_blocks(&b[0].std, &b[1].std, &b[2].std, &b[3].std),
            join_blocks(&b[0].inf, &b[1].inf, &b[2].inf, &b[3].inf),
        )
    }

    fn same_shape(&self, op: &'static str, rhs: &DualMatrix) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension {
                op,
                detail: format!(
                    "{}x{} vs {}x{}",
                    self.nrows(),
                    self.ncols(),
                    rhs.nrows(),
                    rhs.ncols()
                ),
            });
        }
        Ok(())
    }
}

/// Operator forms panic on shape mismatch, like `nalgebra`; use the
/// `try_*` methods on untrusted input.
impl<'a> Mul<&'a DualMatrix> for &'a DualMatrix {
    type Output = DualMatrix;
    fn mul(self, rhs: &'a DualMatrix) -> DualMatrix {
        self.try_mul(rhs)
            .expect("dual matrix product shape mismatch")
    }
}

impl<'a> Add<&'a DualMatrix> for &'a DualMatrix {
    type Output = DualMatrix;
    fn add(self, rhs: &'a DualMatrix) -> DualMatrix {
        self.try_add(rhs).expect("dual matrix sum shape mismatch")
    }
}

impl<'a> Sub<&'a DualMatrix> for &'a DualMatrix {
    type Output = DualMatrix;
    fn sub(self, rhs: &'a DualMatrix) -> DualMatrix {
        self.try_sub(rhs)
            .expect("dual matrix difference shape mismatch")
    }
}

impl Neg for &DualMatrix {
    type Output = DualMatrix;
    fn neg(self) -> DualMatrix {
        DualMatrix::from_parts(-&self.std, -&self.inf)
    }
}

impl fmt::Display for DualMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+ ε{}", self.std, self.inf)
    }
}

/// `sum_{i=1}^{m} A^{m-i} B A^{i-1}`, the infinitesimal part of `Â^m`.
pub fn s_matrix(a: &RealMatrix, b: &RealMatrix, m: usize) -> Result<RealMatrix> {
    ensure_square("s_matrix", a.nrows(), a.ncols())?;
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            op: "s_matrix",
            detail: format!(
                "A is {}x{}, B is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            ),
        });
    }
    let mut acc = RealMatrix::zeros(a.nrows(), a.ncols());
    for i in 1..=m {
        acc += power(a, m - i) * b * power(a, i - 1);
    }
    Ok(acc)
}

/// Relative residual `|lhs − rhs| / max(1, |lhs|, |rhs|)` in the dual norm.
pub fn rel_residual(lhs: &DualMatrix, rhs: &DualMatrix) -> f64 {
    let diff = lhs - rhs;
    diff.norm() / 1f64.max(lhs.norm()).max(rhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: usize, cols: usize, data: &[f64]) -> RealMatrix {
        RealMatrix::from_row_slice(rows, cols, data)
    }

    fn example() -> DualMatrix {
        DualMatrix::from_rows(
            3,
            3,
            &[1., 2., -2., 0., 0., -2., 0., 0., 0.],
            &[1., 5., -2., 0., 3., -2., 2., 0., 4.],
        )
        .unwrap()
    }

    #[test]
    fn scalar_law() {
        let a = DualScalar::new(2.0, 3.0);
        let b = DualScalar::new(-1.0, 4.0);
        assert_eq!(a * b, DualScalar::new(-2.0, 8.0 - 3.0));
        assert_eq!(
            DualScalar::new(0.0, 1.0) * DualScalar::new(0.0, 5.0),
            DualScalar::default()
        );
        let r = a.recip().unwrap();
        assert!(((a * r).std - 1.0).abs() < 1e-15 && (a * r).inf.abs() < 1e-15);
        assert!(DualScalar::new(0.0, 1.0).recip().is_none());
    }

    #[test]
    fn identity_is_neutral() {
        let a = example();
        assert_eq!(&DualMatrix::identity(3) * &a, a);
    }

    #[test]
    fn pure_infinitesimals_annihilate() {
        let b = DualMatrix::new(RealMatrix::zeros(2, 2), rm(2, 2, &[1., 2., 3., 4.])).unwrap();
        let d = DualMatrix::new(RealMatrix::zeros(2, 2), rm(2, 2, &[5., 6., 7., 8.])).unwrap();
        assert_eq!(&b * &d, DualMatrix::zeros(2, 2));
    }

    #[test]
    fn square_by_hand() {
        let x = DualMatrix::new(rm(2, 2, &[0., 1., 0., 0.]), RealMatrix::identity(2, 2)).unwrap();
        let sq = x.power(2).unwrap();
        assert_eq!(sq.std(), &RealMatrix::zeros(2, 2));
        assert_eq!(sq.inf(), &rm(2, 2, &[0., 2., 0., 0.]));
    }

    #[test]
    fn shape_errors() {
        let a = DualMatrix::zeros(2, 3);
        assert!(a.try_mul(&DualMatrix::zeros(2, 3)).is_err());
        assert!(a.try_add(&DualMatrix::zeros(3, 2)).is_err());
        assert!(a.power(2).is_err());
        assert!(a.power(0).is_err());
        assert!(DualMatrix::new(RealMatrix::zeros(2, 2), RealMatrix::zeros(2, 3)).is_err());
        assert!(DualMatrix::from_rows(1, 1, &[f64::NAN], &[0.0]).is_err());
    }

    #[test]
    fn transpose_examples() {
        let a = example();
        let t = a.transpose();
        assert_eq!(t.std(), &a.std().transpose());
        assert_eq!(t.inf(), &a.inf().transpose());
        assert_eq!(t.transpose(), a);
        let sym =
            DualMatrix::new(rm(2, 2, &[1., 2., 2., 3.]), rm(2, 2, &[0., 1., 1., 0.])).unwrap();
        assert_eq!(sym.transpose(), sym);
    }

    #[test]
    fn s_matrix_examples() {
        let a = example();
        let expected = rm(3, 3, &[-2., 13., -26., -4., 0., -14., 2., 4., -4.]);
        assert_eq!(s_matrix(a.std(), a.inf(), 2).unwrap(), expected);
        assert_eq!(a.power(2).unwrap().inf(), &expected);
        assert_eq!(s_matrix(a.std(), a.inf(), 1).unwrap(), *a.inf());
        let b = a.inf().clone();
        assert_eq!(
            s_matrix(&RealMatrix::identity(3, 3), &b, 4).unwrap(),
            &b * 4.0
        );
        assert!(s_matrix(a.std(), &RealMatrix::zeros(2, 2), 2).is_err());
    }

    #[test]
    fn power_zero_and_one() {
        let a = example();
        assert_eq!(a.power(0).unwrap(), DualMatrix::identity(3));
        assert_eq!(a.power(1).unwrap(), a);
    }

    #[test]
    fn dual_inverse() {
        let a = DualMatrix::new(rm(2, 2, &[2., 1., 1., 1.]), rm(2, 2, &[1., 0., 3., -1.])).unwrap();
        let inv = a.try_inverse().unwrap();
        assert!(rel_residual(&(&a * &inv), &DualMatrix::identity(2)) < 1e-14);
        assert!(DualMatrix::zeros(2, 2).try_inverse().is_err());
    }

    #[test]
    fn appreciable() {
        assert!(example().is_appreciable());
        let inf_only =
            DualMatrix::new(RealMatrix::zeros(2, 2), RealMatrix::identity(2, 2)).unwrap();
        assert!(!inf_only.is_appreciable());
    }
}
