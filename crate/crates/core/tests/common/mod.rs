#![allow(dead_code)]

use dual_cep::{DualMatrix, RealMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rm(rows: usize, cols: usize, data: &[f64]) -> RealMatrix {
    RealMatrix::from_row_slice(rows, cols, data)
}

pub fn dm(n: usize, std: &[f64], inf: &[f64]) -> DualMatrix {
    DualMatrix::from_rows(n, n, std, inf).unwrap()
}

pub fn uniform(rng: &mut TestRng, rows: usize, cols: usize) -> RealMatrix {
    RealMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn orthogonal(rng: &mut TestRng, n: usize) -> RealMatrix {
    if n == 0 {
        return RealMatrix::zeros(0, 0);
    }
    uniform(rng, n, n).qr().q()
}

pub fn antisymmetric(rng: &mut TestRng, n: usize) -> RealMatrix {
    let k = uniform(rng, n, n);
    &k - k.transpose()
}

/// Well-conditioned invertible block: random plus a dominant diagonal of
/// random sign.
pub fn invertible(rng: &mut TestRng, t: usize) -> RealMatrix {
    let mut m = uniform(rng, t, t) * 0.5;
    for i in 0..t {
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        m[(i, i)] += sign * rng.random_range(1.5..2.5);
    }
    m
}

/// Nilpotent `k x k` matrix of index exactly `m` (for `k >= m >= 1`): Jordan
/// chains with random nonzero couplings, mixed by an orthogonal similarity.
pub fn nilpotent(rng: &mut TestRng, k: usize, m: usize) -> RealMatrix {
    let mut n = RealMatrix::zeros(k, k);
    let mut start = 0;
    let mut first = true;
    while start < k {
        let len = if first {
            m
        } else {
            rng.random_range(1..=m.min(k - start))
        };
        first = false;
        for i in start..start + len - 1 {
            n[(i, i + 1)] = rng.random_range(0.5..1.5);
        }
        start += len;
    }
    let p = orthogonal(rng, k);
    &p * n * p.transpose()
}

pub fn block_upper(t1: &RealMatrix, t2: &RealMatrix, n: &RealMatrix) -> RealMatrix {
    let t = t1.nrows();
    let k = n.nrows();
    let mut out = RealMatrix::zeros(t + k, t + k);
    out.view_mut((0, 0), (t, t)).copy_from(t1);
    out.view_mut((0, t), (t, k)).copy_from(t2);
    out.view_mut((t, t), (k, k)).copy_from(n);
    out
}

/// An engineered standard part in its core-EP frame.
pub struct Frame {
    pub t1: RealMatrix,
    pub t2: RealMatrix,
    pub n: RealMatrix,
    pub index: usize,
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.t1.nrows() + self.n.nrows()
    }
    pub fn t(&self) -> usize {
        self.t1.nrows()
    }
    pub fn matrix(&self) -> RealMatrix {
        block_upper(&self.t1, &self.t2, &self.n)
    }
}

/// Random size `n <= max_n` and index `m` in `lo..=hi` with a core block of
/// size at least `min_t`.
pub fn frame(rng: &mut TestRng, max_n: usize, lo: usize, hi: usize, min_t: usize) -> Frame {
    let m = rng.random_range(lo..=hi);
    let n = rng.random_range((m + min_t).max(2)..=max_n.max(m + min_t));
    let k = if m == 0 {
        0
    } else {
        rng.random_range(m..=n - min_t)
    };
    let t = n - k;
    let t1 = invertible(rng, t);
    let t2 = uniform(rng, t, k);
    let nil = if k == 0 {
        RealMatrix::zeros(0, 0)
    } else {
        nilpotent(rng, k, m)
    };
    Frame {
        t1,
        t2,
        n: nil,
        index: m,
    }
}

/// `B4 = NK - KN`, which makes `sum N^{m-i} B4 N^{i-1}` vanish.
pub fn commutator_b4(rng: &mut TestRng, n: &RealMatrix) -> RealMatrix {
    let k = uniform(rng, n.nrows(), n.ncols());
    n * &k - &k * n
}

/// A dual matrix whose DCEPGI (and DDGI) exists: in the frame `B3 = O` and
/// `B4 = NK - KN`, then a random dual orthogonal similarity
/// `Q(I + εK')` with `K'` antisymmetric (skipped when `first_order` is set,
/// which keeps `Â^⊕ = A^⊕ - εA^⊕BA^⊕`).
pub fn existing_dcep(rng: &mut TestRng, f: &Frame, first_order: bool) -> DualMatrix {
    let (t, k) = (f.t(), f.n.nrows());
    let mut b = RealMatrix::zeros(t + k, t + k);
    b.view_mut((0, 0), (t, t)).copy_from(&uniform(rng, t, t));
    b.view_mut((0, t), (t, k)).copy_from(&uniform(rng, t, k));
    b.view_mut((t, t), (k, k))
        .copy_from(&commutator_b4(rng, &f.n));
    let base = DualMatrix::new(f.matrix(), b).unwrap();
    let q = orthogonal(rng, t + k);
    let kp = if first_order {
        RealMatrix::zeros(t + k, t + k)
    } else {
        antisymmetric(rng, t + k)
    };
    let w = DualMatrix::new(q.clone(), &q * kp).unwrap();
    &(&w * &base) * &w.transpose()
}

/// A generic dual matrix with the engineered standard part: the DCEPGI fails
/// to exist unless `A` is invertible.
pub fn generic(rng: &mut TestRng, f: &Frame) -> DualMatrix {
    let n = f.dim();
    let q = orthogonal(rng, n);
    let a = &q * f.matrix() * q.transpose();
    DualMatrix::new(a, uniform(rng, n, n)).unwrap()
}

/// Engineered index with existing DDGI built from a non-orthogonal
/// similarity `P diag(T, N) P^{-1}` and `B = P diag(B1, NK - KN) P^{-1}`.
pub fn existing_ddgi(rng: &mut TestRng, f: &Frame) -> DualMatrix {
    let (t, k) = (f.t(), f.n.nrows());
    let n = t + k;
    let p = invertible(rng, n);
    let p_inv = p.clone().try_inverse().unwrap();
    let d = block_upper(&f.t1, &RealMatrix::zeros(t, k), &f.n);
    let b4 = commutator_b4(rng, &f.n);
    let db = block_upper(&uniform(rng, t, t), &RealMatrix::zeros(t, k), &b4);
    let a = &p * d * &p_inv;
    let b = &p * db * &p_inv;
    DualMatrix::new(a, b).unwrap()
}

/// `B = AW + VA`, for which the DMPGI exists.
pub fn existing_dmpgi(rng: &mut TestRng, max_n: usize) -> DualMatrix {
    let rows = rng.random_range(1..=max_n);
    let cols = rng.random_range(1..=max_n);
    let r = rng.random_range(0..=rows.min(cols));
    // Singular values in [0.5, 2] keep A† well conditioned.
    let sigma = RealMatrix::from_fn(rows, cols, |i, j| {
        if i == j && i < r {
            rng.random_range(0.5..2.0)
        } else {
            0.0
        }
    });
    let a = orthogonal(rng, rows) * sigma * orthogonal(rng, cols).transpose();
    let w = uniform(rng, cols, cols);
    let v = uniform(rng, rows, rows);
    let b = &a * w + v * &a;
    DualMatrix::new(a, b).unwrap()
}

pub fn vector(rng: &mut TestRng, n: usize) -> dual_cep::DualVector {
    let v = uniform(rng, n, 2);
    dual_cep::DualVector::new(v.column(0).into_owned(), v.column(1).into_owned()).unwrap()
}

/// Written to the process stdout directly so the line survives test capture.
pub fn report(name: &str, pass: bool, detail: impl std::fmt::Display) {
    use std::io::Write;
    let line = format!(
        "[{}] {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
}
