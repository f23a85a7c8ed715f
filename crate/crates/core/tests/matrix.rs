mod common;

use common::{random_band, random_hermitian};
use hermeig::matrix::io::{read_heig, read_text, write_heig, FileKind};
use hermeig::oracle::{jacobi_eigh, sturm_eigenvalues};
use hermeig::pencil::generate_pencil;
use hermeig::{band_from_dense, c64, symmetrize, CMat, DenseHermitian, EigenSelection, Error, RealSymTridiagonal};
use proptest::prelude::*;

fn diag_matrix(values: &[f64]) -> CMat {
    CMat::from_fn(values.len(), values.len(), |i, j| if i == j { c64::new(values[i], 0.0) } else { c64::default() })
}

#[test]
fn jacobi_oracle_examples() {
    let (v, x) = jacobi_eigh(&DenseHermitian::from_real_diagonal(&[3.0, -1.0, 2.0])).unwrap();
    assert_eq!(v, vec![-1.0, 2.0, 3.0]);
    assert_eq!(x.col(0)[1].norm(), 1.0);

    let m = CMat::from_fn(2, 2, |i, j| c64::new(if i == j { 0.0 } else { 1.0 }, 0.0));
    let (v, x) = jacobi_eigh(&DenseHermitian::from_lower(m).unwrap()).unwrap();
    assert!((v[0] + 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((x[(0, 0)].norm() - h).abs() < 1e-15 && (x[(1, 1)].norm() - h).abs() < 1e-15);
    let ratio = x[(1, 0)] / x[(0, 0)];
    assert!((ratio + 1.0).norm() < 1e-15);

    let a = random_hermitian(16, 77);
    let (v, x) = jacobi_eigh(&a).unwrap();
    let rebuilt = x.matmul(&diag_matrix(&v)).matmul(&x.adjoint());
    assert!(rebuilt.sub_matrix(a.matrix()).frobenius_norm() <= 1e-13 * a.frobenius_norm());
    let orth = x.adjoint().matmul(&x).sub_matrix(&CMat::identity(16)).frobenius_norm();
    assert!(orth <= 10.0 * 16.0 * f64::EPSILON);
}

#[test]
fn pencil_condition_number_is_close_to_target() {
    let be = hermeig::ReferenceBackend::new();
    let (_, b) = generate_pencil(32, 9, 1e4).unwrap();
    assert!(hermeig::cholesky::cholesky_factor(&b, 8, &be).is_ok());
    let (v, _) = jacobi_eigh(&b).unwrap();
    let cond = v[31] / v[0];
    assert!(v[0] > 0.0);
    assert!((0.5e4..=2e4).contains(&cond), "cond {cond}");
}

#[test]
fn pencil_rejects_bad_parameters() {
    assert!(generate_pencil(0, 1, 10.0).is_err());
    assert!(generate_pencil(4, 1, 0.5).is_err());
    assert!(generate_pencil(4, 1, f64::NAN).is_err());
}

#[test]
fn band_packing_reports_out_of_band_entries() {
    let a = random_band(12, 3, 5);
    assert!(band_from_dense(&a, 3).is_ok());
    assert!(matches!(band_from_dense(&a, 2), Err(Error::OutOfBand { .. })));
}

#[test]
fn tridiagonal_validation() {
    assert!(RealSymTridiagonal::new(vec![], vec![]).is_err());
    assert!(RealSymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
    assert!(RealSymTridiagonal::new(vec![1.0, f64::INFINITY], vec![0.0]).is_err());
    let t = RealSymTridiagonal::new(vec![2.0, 2.0, 2.0], vec![-1.0, -1.0]).unwrap();
    let v = sturm_eigenvalues(&t);
    let s = std::f64::consts::SQRT_2;
    for (got, want) in v.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
        assert!((got - want).abs() < 1e-14);
    }
}

#[test]
fn selection_resolution() {
    assert_eq!(EigenSelection::all().resolve(7).unwrap(), (1, 7));
    assert_eq!(EigenSelection::fraction(0.1).resolve(1024).unwrap(), (1, 103));
    assert_eq!(EigenSelection::fraction(1e-9).resolve(5).unwrap(), (1, 1));
    assert!(EigenSelection::fraction(0.0).resolve(5).is_err());
    assert!(EigenSelection::fraction(1.5).resolve(5).is_err());
    assert!(EigenSelection::range(0, 2).resolve(5).is_err());
    assert!(EigenSelection::range(3, 2).resolve(5).is_err());
    assert!(EigenSelection::all().resolve(0).is_err());
}

#[test]
fn text_and_binary_formats_agree() {
    let m = read_text("1 2-1j\n2+1j, 3\n").unwrap();
    assert_eq!(m[(0, 1)], c64::new(2.0, -1.0));
    assert_eq!(m[(1, 0)], c64::new(2.0, 1.0));
    let mut buf = Vec::new();
    write_heig(&mut buf, &[&m, &CMat::identity(2)]).unwrap();
    let (kind, blocks) = read_heig(&buf[..]).unwrap();
    assert_eq!(kind, FileKind::Pencil);
    assert_eq!(blocks, vec![m, CMat::identity(2)]);
    assert!(read_heig(&buf[..20]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn band_round_trip_is_exact(seed in any::<u64>(), n in 2usize..30, b in 1usize..8) {
        let b = b.min(n - 1);
        let a = random_band(n, b, seed);
        let packed = band_from_dense(&a, b).unwrap();
        prop_assert_eq!(packed.bandwidth(), b);
        prop_assert_eq!(packed.to_dense(), a.clone());
        for i in 0..n {
            prop_assert_eq!(packed.get(i, i).im, 0.0);
            for j in 0..n {
                prop_assert_eq!(packed.get(i, j), a.matrix()[(i, j)]);
            }
        }
    }

    #[test]
    fn symmetrize_is_hermitian_and_idempotent(seed in any::<u64>(), n in 1usize..20) {
        let h = random_hermitian(n, seed);
        prop_assert!(h.is_exactly_hermitian());
        let mut m = h.matrix().clone();
        for j in 0..n {
            for i in 0..j {
                m[(i, j)] = c64::new(f64::from(i as u32), -f64::from(j as u32));
            }
        }
        let s = symmetrize(h.matrix()).unwrap();
        prop_assert_eq!(&s, &h);
        let skew = symmetrize(&m).unwrap();
        prop_assert!(skew.is_exactly_hermitian());
    }

    #[test]
    fn binary_round_trip(seed in any::<u64>(), n in 1usize..12) {
        let a = random_hermitian(n, seed).into_matrix();
        let mut buf = Vec::new();
        write_heig(&mut buf, &[&a]).unwrap();
        let (kind, blocks) = read_heig(&buf[..]).unwrap();
        prop_assert_eq!(kind, FileKind::Matrix);
        prop_assert_eq!(&blocks[0], &a);
    }

    #[test]
    fn fraction_selects_ceiling(n in 1usize..2000, k in 1usize..100) {
        let frac = k as f64 / 100.0;
        let (il, iu) = EigenSelection::fraction(frac).resolve(n).unwrap();
        prop_assert_eq!(il, 1);
        let exact = (k * n).div_ceil(100);
        prop_assert_eq!(iu, exact.max(1));
    }
}
