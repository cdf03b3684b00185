/// Default threshold used to decide that a residual is zero.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Numerical policy shared by every routine: how ranks are cut off and
/// when a (relative) residual counts as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    /// Relative residual threshold for O-equality decisions.
    pub residual: f64,
    /// Relative singular-value cutoff for numerical rank. `None` means
    /// `max(rows, cols) * f64::EPSILON`.
    pub rank_rtol: Option<f64>,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            residual: DEFAULT_TOLERANCE,
            rank_rtol: None,
        }
    }
}

impl Tol {
    pub fn new(residual: f64) -> Self {
        Tol {
            residual,
            ..Tol::default()
        }
    }

    pub fn with_rank_rtol(mut self, rtol: f64) -> Self {
        self.rank_rtol = Some(rtol);
        self
    }

    /// Absolute singular-value cutoff for a matrix of the given shape whose
    /// largest singular value is `sigma_max`.
    pub fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        let rtol = self
            .rank_rtol
            .unwrap_or(rows.max(cols) as f64 * f64::EPSILON);
        rtol * sigma_max
    }

    pub fn accepts(&self, residual: f64) -> bool {
        residual <= self.residual
    }
}
