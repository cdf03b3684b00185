//! Solutions of (possibly inconsistent) dual linear systems `Âx̂ = b̂` through
//! the DCEPGI.
//!
//! Two surrogate systems are solved:
//!
//! * `Â^{m+1} x̂ = Â^{2m} (Â^m)† b̂`, whose general solution is
//!   `Â^⊕b̂ + (I - Â^DÂ)ŷ`;
//! * `ÂÂ^⊕ x̂ = Â^⊕ b̂` restricted to `R(Â^m)`, whose unique solution is
//!   `Â^⊕b̂` when `Â^⊕ = A^⊕ - εA^⊕BA^⊕`.

use nalgebra::DVector;
use serde::Serialize;

use crate::dualgi::{dcepgi_exists, ddgi_exists, dmpgi};
use crate::dualnum::DualMatrix;
use crate::error::{Error, Result};
use crate::realgi::{index, RealMatrix};
use crate::relations::{first_order_report, range_membership_residual, FIRST_ORDER};
use crate::tol::Tol;

/// A dual vector `std + ε·inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    std: DVector<f64>,
    inf: DVector<f64>,
}

impl DualVector {
    pub fn new(std: DVector<f64>, inf: DVector<f64>) -> Result<Self> {
        if std.len() != inf.len() {
            return Err(Error::Dimension {
                op: "DualVector::new",
                detail: format!("parts have lengths {} and {}", std.len(), inf.len()),
            });
        }
        if std.iter().chain(inf.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("dual vector"));
        }
        Ok(DualVector { std, inf })
    }

    pub fn from_slices(std: &[f64], inf: &[f64]) -> Result<Self> {
        DualVector::new(
            DVector::from_column_slice(std),
            DVector::from_column_slice(inf),
        )
    }

    pub fn zeros(n: usize) -> Self {
        DualVector {
            std: DVector::zeros(n),
            inf: DVector::zeros(n),
        }
    }

    pub fn std(&self) -> &DVector<f64> {
        &self.std
    }

    pub fn inf(&self) -> &DVector<f64> {
        &self.inf
    }

    pub fn len(&self) -> usize {
        self.std.len()
    }

    pub fn is_empty(&self) -> bool {
        self.std.is_empty()
    }

    /// Dual norm `max(|x|, |y|)`.
    pub fn norm(&self) -> f64 {
        self.std.norm().max(self.inf.norm())
    }

    /// As an `n x 1` dual matrix.
    pub fn to_matrix(&self) -> DualMatrix {
        DualMatrix::from_parts(
            RealMatrix::from_column_slice(self.len(), 1, self.std.as_slice()),
            RealMatrix::from_column_slice(self.len(), 1, self.inf.as_slice()),
        )
    }

    /// Column `j` of a dual matrix.
    pub fn column(m: &DualMatrix, j: usize) -> Self {
        DualVector {
            std: m.std().column(j).into_owned(),
            inf: m.inf().column(j).into_owned(),
        }
    }

    /// `[std; inf]` as a `2n x 1` real matrix, matching
    /// [`DualMatrix::real_representation`].
    pub fn stacked(&self) -> RealMatrix {
        let n = self.len();
        RealMatrix::from_fn(
            2 * n,
            1,
            |i, _| if i < n { self.std[i] } else { self.inf[i - n] },
        )
    }

    pub fn sub(&self, other: &DualVector) -> DualVector {
        DualVector {
            std: &self.std - &other.std,
            inf: &self.inf - &other.inf,
        }
    }

    pub fn add(&self, other: &DualVector) -> DualVector {
        DualVector {
            std: &self.std + &other.std,
            inf: &self.inf + &other.inf,
        }
    }
}

/// `Âx̂` for a dual matrix and vector.
pub fn apply(m: &DualMatrix, v: &DualVector) -> Result<DualVector> {
    let out = m.try_mul(&v.to_matrix())?;
    Ok(DualVector::column(&out, 0))
}

/// General solution data of `Â^{m+1} x̂ = Â^{2m} (Â^m)† b̂`.
#[derive(Debug, Clone)]
pub struct SolutionReport {
    /// `Â^⊕ b̂`
    pub particular: DualVector,
    /// `I - Â^D Â`
    pub homogeneous_projector: DualMatrix,
    /// `|Â^{m+1} x̂ - Â^{2m}(Â^m)† b̂| / (1 + |b̂|)` at the particular solution.
    pub surrogate_residual: f64,
    /// Membership residual of the particular solution in `R(Â^m)`.
    pub in_range_residual: f64,
    pub index: usize,
    lhs: DualMatrix,
    target: DualVector,
    rhs_norm: f64,
}

impl SolutionReport {
    /// `particular + projector ŷ`.
    pub fn general_solution(&self, y: &DualVector) -> Result<DualVector> {
        Ok(self.particular.add(&apply(&self.homogeneous_projector, y)?))
    }

    /// Surrogate residual of `particular + projector ŷ`.
    pub fn residual_at(&self, y: &DualVector) -> Result<f64> {
        let x = self.general_solution(y)?;
        let r = apply(&self.lhs, &x)?.sub(&self.target);
        Ok(r.norm() / (1.0 + self.rhs_norm))
    }

    /// `Â^{2m}(Â^m)† b̂`.
    pub fn target(&self) -> &DualVector {
        &self.target
    }
}

fn check_rhs(x: &DualMatrix, b: &DualVector, op: &'static str) -> Result<()> {
    crate::error::ensure_square(op, x.nrows(), x.ncols())?;
    if b.len() != x.nrows() {
        return Err(Error::Dimension {
            op,
            detail: format!(
                "matrix is {}x{}, right-hand side has length {}",
                x.nrows(),
                x.ncols(),
                b.len()
            ),
        });
    }
    Ok(())
}

/// Particular solution and homogeneous projector of the surrogate system.
pub fn solve_general(x: &DualMatrix, b: &DualVector, tol: Tol) -> Result<SolutionReport> {
    check_rhs(x, b, "solve_general")?;
    let cep = dcepgi_exists(x, tol)?.into_result()?;
    let drazin = ddgi_exists(x, tol)?.into_result()?;
    let m = index(x.std(), tol)?;
    let am = x.power(m)?;
    let am_dagger = dmpgi(&am, tol)?;
    let lhs = &am * x;
    let a2m = &am * &am;
    let target = apply(&(&a2m * &am_dagger), b)?;

    let particular = apply(&cep, b)?;
    let n = x.nrows();
    let homogeneous_projector = &DualMatrix::identity(n) - &(&drazin * x);
    let rhs_norm = b.norm();
    let surrogate_residual = apply(&lhs, &particular)?.sub(&target).norm() / (1.0 + rhs_norm);
    let in_range_residual = range_membership_residual(&am, &particular, tol);
    Ok(SolutionReport {
        particular,
        homogeneous_projector,
        surrogate_residual,
        in_range_residual,
        index: m,
        lhs,
        target,
        rhs_norm,
    })
}

/// The unique solution of `ÂÂ^⊕ x̂ = Â^⊕ b̂` in `R(Â^m)`.
#[derive(Debug, Clone, Serialize)]
pub struct UniqueSolution {
    #[serde(skip)]
    pub solution: DualVector,
    /// Membership residual in `R(Â^m)`.
    pub membership_residual: f64,
    /// `|ÂÂ^⊕x̂ - Â^⊕b̂| / (1 + |b̂|)`.
    pub equation_residual: f64,
}

/// `|ÂÂ^⊕ x̂ - Â^⊕ b̂| / (1 + |b̂|)` for any candidate `x̂`.
pub fn in_range_equation_residual(
    x: &DualMatrix,
    cep: &DualMatrix,
    candidate: &DualVector,
    b: &DualVector,
) -> Result<f64> {
    let lhs = apply(&(x * cep), candidate)?;
    let rhs = apply(cep, b)?;
    Ok(lhs.sub(&rhs).norm() / (1.0 + b.norm()))
}

pub fn solve_unique_in_range(x: &DualMatrix, b: &DualVector, tol: Tol) -> Result<UniqueSolution> {
    check_rhs(x, b, "solve_unique_in_range")?;
    let cert = dcepgi_exists(x, tol)?;
    if !cert.exists {
        return Err(Error::DoesNotExist(Box::new(cert)));
    }
    let report = first_order_report(x, tol)?;
    let first = report.conditions[FIRST_ORDER];
    if !first.holds {
        return Err(Error::Hypothesis(format!(
            "the DCEPGI must equal A^⊕ - εA^⊕BA^⊕ (residual {:.3e})",
            first.residual
        )));
    }
    let cep = cert.witness.expect("existing certificate has a witness");
    let solution = apply(&cep, b)?;
    let m = index(x.std(), tol)?;
    let am = x.power(m)?;
    let membership_residual = range_membership_residual(&am, &solution, tol);
    let equation_residual = in_range_equation_residual(x, &cep, &solution, b)?;
    Ok(UniqueSolution {
        solution,
        membership_residual,
        equation_residual,
    })
}
