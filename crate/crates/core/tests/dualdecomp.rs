mod common;

use common::*;
use dual_cep::realgi::{fro, join_blocks};
use dual_cep::*;
use proptest::prelude::*;

fn tol() -> Tol {
    Tol::default()
}

fn worked_4x4() -> (DualMatrix, RealMatrix) {
    let x = dm(
        4,
        &[
            1., 0., 0., 0., 0., 0., -1., 3., 0., 0., 0., -2., 0., 0., 0., 0.,
        ],
        &[
            1., 0., -1., 1., 0., 1., -1., 0., 0., 3., 0., -2., 0., 2., 0., -1.,
        ],
    );
    let u = rm(
        4,
        4,
        &[
            1., 0., 0., 0., 0., -1., 0., 0., 0., 0., 0., -1., 0., 0., 1., 0.,
        ],
    );
    (x, u)
}

#[test]
fn worked_example_blocks() {
    let (x, u) = worked_4x4();
    let d = dual_core_ep_decompose_with_basis(&x, &u, tol()).unwrap();
    assert_eq!(d.u3, RealMatrix::zeros(3, 1));
    assert!(d.canonical);
    assert_eq!(d.t1_hat, DualMatrix::from_rows(1, 1, &[1.], &[1.]).unwrap());
    assert_eq!(
        d.t2_hat,
        DualMatrix::from_rows(1, 3, &[0., 0., 0.], &[0., 1., 1.]).unwrap()
    );
    assert_eq!(
        d.n_hat,
        DualMatrix::from_rows(
            3,
            3,
            &[0., -3., -1., 0., 0., 0., 0., 2., 0.],
            &[1., 0., -1., -2., -1., 0., 3., 2., 0.]
        )
        .unwrap()
    );
    assert!(rel_residual(&d.reconstruct(), &x) < 1e-15);
}

/// The ε-part of N̂ is not nilpotent-compatible here, so no DCEPGI exists and
/// the split and the inverse from the decomposition are refused.
#[test]
fn worked_example_has_no_split() {
    let (x, _) = worked_4x4();
    let d = dual_core_ep_decompose(&x, tol()).unwrap();
    assert!(d.nilpotency_residual() > 1e-3);
    assert!(matches!(
        dcepgi_from_decomposition(&d),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        dual_cn_split(&x, tol()),
        Err(Error::DoesNotExist(_))
    ));
}

#[test]
fn real_input_reduces_to_real_decomposition() {
    let a = rm(3, 3, &[1., 2., -2., 0., 0., -2., 0., 0., 0.]);
    let d = dual_core_ep_decompose(&DualMatrix::real(a.clone()), tol()).unwrap();
    assert_eq!(d.u_hat.inf(), &RealMatrix::zeros(3, 3));
    assert_eq!(d.t1_hat.inf(), &RealMatrix::zeros(1, 1));
    assert!(fro(d.n_hat.inf()) == 0.0 && fro(d.t2_hat.inf()) == 0.0);
    let real = core_ep_decompose(&a, tol()).unwrap();
    assert!(fro(&(d.real.reconstruct() - real.reconstruct())) < 1e-14);

    let split = dual_cn_split(&DualMatrix::real(a.clone()), tol()).unwrap();
    assert!(fro(&(split.core.std() - real.core_part())) < 1e-13);
    let got = dcepgi_from_decomposition(&d).unwrap();
    assert!(fro(&(got.std() - core_ep_inverse(&a, tol()).unwrap())) < 1e-13);
}

#[test]
fn zero_lower_left_block_is_canonical() {
    let mut r = rng(31);
    for _ in 0..10 {
        let f = frame(&mut r, 5, 1, 3, 1);
        let (t, k) = (f.t(), f.n.nrows());
        let mut b = uniform(&mut r, t + k, t + k);
        b.view_mut((t, 0), (k, t)).fill(0.0);
        let q = orthogonal(&mut r, t + k);
        let x = DualMatrix::new(&q * f.matrix() * q.transpose(), &q * b * q.transpose()).unwrap();
        let d = dual_core_ep_decompose(&x, tol()).unwrap();
        assert!(fro(&d.u3) < 1e-12);
        assert!(d.canonical);
    }
}

#[test]
fn invertible_input() {
    let x = dm(2, &[2., 1., 1., 3.], &[0.5, -1., 2., 0.]);
    let split = dual_cn_split(&x, tol()).unwrap();
    assert!(rel_residual(&split.core, &x) < 1e-14);
    assert!(split.nilpotent.norm() < 1e-14);
    let d = dual_core_ep_decompose(&x, tol()).unwrap();
    assert!(
        rel_residual(
            &dcepgi_from_decomposition(&d).unwrap(),
            &x.try_inverse().unwrap()
        ) < 1e-14
    );
}

fn rechosen_basis(d: &DualCoreEPDecomposition, seed: u64) -> RealMatrix {
    let mut r = rng(seed);
    let t = d.rank();
    let k = d.real.dim() - t;
    let q = join_blocks(
        &orthogonal(&mut r, t),
        &RealMatrix::zeros(t, k),
        &RealMatrix::zeros(k, t),
        &orthogonal(&mut r, k),
    );
    &d.real.u * q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decomposition_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = frame(&mut r, 6, 1, 3, 1);
        let x = generic(&mut r, &f);
        let d = dual_core_ep_decompose(&x, tol()).unwrap();
        prop_assert!(rel_residual(&d.reconstruct(), &x) < 1e-10);
        prop_assert!(d.unitarity_residual() < 1e-12);
        prop_assert!(d.sylvester_residual() < 1e-10);
        prop_assert!(d.lower_left_residual(&x) < 1e-10);
    }

    #[test]
    fn split_is_basis_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = frame(&mut r, 6, 1, 3, 1);
        let x = existing_dcep(&mut r, &f, seed % 2 == 0);
        let d = dual_core_ep_decompose(&x, tol()).unwrap();
        let d2 = dual_core_ep_decompose_with_basis(&x, &rechosen_basis(&d, seed ^ 5), tol()).unwrap();
        prop_assert!(d.block_split().distance(&d2.block_split()) < 1e-8);

        let split = dual_cn_split(&x, tol()).unwrap();
        prop_assert!(split.distance(&d.block_split()) < 1e-8);
        prop_assert!(rel_residual(&split.sum(), &x) < 1e-14);
        let (a, b) = split.orthogonality_residuals();
        prop_assert!(a < 1e-9 && b < 1e-9);
        prop_assert!(split.nilpotency_residual(d.index()) < 1e-9);
        prop_assert!(index(split.core.std(), tol()).unwrap() <= 1);

        let from_d = dcepgi_from_decomposition(&d).unwrap();
        prop_assert!(rel_residual(&from_d, &dcepgi(&x, tol()).unwrap()) < 1e-9);
    }
}
