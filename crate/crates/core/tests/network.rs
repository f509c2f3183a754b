//! Splitter matrices against the exponentiated two-mode generator, and
//! network-level properties.

use nalgebra::DMatrix;
use proptest::prelude::*;
use wherald_core::{
    apply_network, bs_unitary, BasisLabel, BeamsplitterSpec, Dims, EnsembleOccupation, Mode, NetworkSpec,
    StateVector, C64,
};

/// `θ(a†b − ab†)` on the two-mode Fock space with `a† a + b† b = n`,
/// basis `|k, n−k⟩` indexed by `k`.
fn two_mode_generator(theta: f64, n: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        let l = n - k;
        // a† b |k, l⟩ = √((k+1) l) |k+1, l−1⟩
        if l > 0 {
            g[(k + 1, k)] += theta * (((k + 1) * l) as f64).sqrt();
        }
        // a b† |k, l⟩ = √(k (l+1)) |k−1, l+1⟩
        if k > 0 {
            g[(k - 1, k)] -= theta * ((k * (l + 1)) as f64).sqrt();
        }
    }
    g
}

fn ground() -> [EnsembleOccupation; 3] {
    [EnsembleOccupation::ground(1); 3]
}

fn photons(terms: &[([u8; 3], C64)], n_max: u8) -> StateVector {
    let dims = Dims::new([1, 1, 1], n_max).unwrap();
    StateVector::from_amplitudes(dims, terms.iter().map(|(p, a)| (BasisLabel::new(ground(), *p), *a))).unwrap()
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn sector_matrices_match_matrix_exponential() {
    for theta in [0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.1, -0.7, 2.9] {
        let spec = BeamsplitterSpec::from_theta(Mode::A, Mode::B, theta).unwrap();
        let u = bs_unitary(&spec, 3);
        for n in 0..=u.max_total() {
            let oracle = two_mode_generator(theta, n).exp();
            let diff = (u.sector(n) - &oracle).abs().max();
            assert!(diff <= 1e-12, "theta {theta}, sector {n}: {diff:e}");
        }
    }
}

#[test]
fn every_sector_is_unitary() {
    let spec = BeamsplitterSpec::new(Mode::B, Mode::C, 0.6, -0.8).unwrap();
    let u = bs_unitary(&spec, 4);
    for n in 0..=u.max_total() {
        let m = u.sector(n);
        let defect = (m.transpose() * m - DMatrix::identity(n + 1, n + 1)).abs().max();
        assert!(defect <= 1e-12, "sector {n}: {defect:e}");
    }
}

#[test]
fn single_photon_sector_is_the_rotation() {
    let (c, s) = (0.28, 0.96);
    let u = bs_unitary(&BeamsplitterSpec::new(Mode::A, Mode::C, c, s).unwrap(), 2);
    // index k counts photons in the first mode
    let m = u.sector(1);
    assert_eq!(m[(1, 1)], c);
    assert_eq!(m[(0, 1)], -s);
    assert_eq!(m[(1, 0)], s);
    assert_eq!(m[(0, 0)], c);
}

#[test]
fn two_balanced_splitters_make_one_with_double_angle() {
    let half = BeamsplitterSpec::from_theta(Mode::A, Mode::B, std::f64::consts::FRAC_PI_4).unwrap();
    let full = BeamsplitterSpec::from_theta(Mode::A, Mode::B, std::f64::consts::FRAC_PI_2).unwrap();
    let input = photons(&[([1, 1, 0], r(0.6)), ([2, 0, 1], C64::new(0.0, 0.8))], 3);
    let twice = apply_network(&input, &NetworkSpec::new(vec![half, half]));
    let once = apply_network(&input, &NetworkSpec::new(vec![full]));
    for (label, amp) in once.iter() {
        assert!((twice.get(label) - amp).norm() <= 1e-12);
    }
    assert_eq!(twice.len(), once.len());
}

#[test]
fn hong_ou_mandel_dip() {
    let out = apply_network(
        &photons(&[([1, 1, 0], r(1.0))], 2),
        &NetworkSpec::new(vec![BeamsplitterSpec::balanced(Mode::A, Mode::B)]),
    );
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(out.get(&BasisLabel::new(ground(), [1, 1, 0])).norm() <= 1e-12);
    assert!((out.get(&BasisLabel::new(ground(), [2, 0, 0])).norm() - h).abs() <= 1e-12);
    assert!((out.get(&BasisLabel::new(ground(), [0, 2, 0])).norm() - h).abs() <= 1e-12);
    assert_eq!(out.leakage(), 0.0);
}

#[test]
fn symmetric_network_maps_single_photons() {
    let net = NetworkSpec::symmetric_w();
    let out = apply_network(&photons(&[([1, 0, 0], r(1.0))], 2), &net);
    let expected = [1.0 / 2f64.sqrt(), 1.0 / 3f64.sqrt(), -1.0 / 6f64.sqrt()];
    for (i, p) in [[1, 0, 0], [0, 1, 0], [0, 0, 1]].iter().enumerate() {
        let got = out.get(&BasisLabel::new(ground(), *p));
        assert!((got - r(expected[i])).norm() <= 1e-12, "{p:?}: {got}");
    }
    let a = 1.0 / 3f64.sqrt();
    let sym = photons(&[([1, 0, 0], r(a)), ([0, 1, 0], r(a)), ([0, 0, 1], r(a))], 2);
    let out = apply_network(&sym, &net);
    assert!((out.get(&BasisLabel::new(ground(), [0, 1, 0])).norm() - 1.0).abs() <= 1e-12);
    assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
}

fn amplitude() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn pattern() -> impl Strategy<Value = [u8; 3]> {
    [0u8..=2, 0u8..=2, 0u8..=2]
}

proptest! {
    #[test]
    fn networks_conserve_photons_and_probability(
        terms in prop::collection::vec((pattern(), amplitude()), 1..8),
        theta1 in -3.2f64..3.2,
        theta2 in -3.2f64..3.2,
    ) {
        let input = photons(&terms, 2);
        prop_assume!(input.norm_sqr() > 1e-6);
        let net = NetworkSpec::new(vec![
            BeamsplitterSpec::from_theta(Mode::A, Mode::B, theta1).unwrap(),
            BeamsplitterSpec::from_theta(Mode::B, Mode::C, theta2).unwrap(),
        ]);
        let out = apply_network(&input, &net);
        prop_assert!((out.norm_sqr() + out.leakage() - input.norm_sqr()).abs() <= 1e-12);

        // with room for every photon, nothing leaks and each total is kept
        let roomy = photons(&terms, 6);
        let out = apply_network(&roomy, &net);
        prop_assert!(out.leakage() <= 1e-24);
        let by_total = |s: &StateVector| {
            let mut w = [0.0f64; 7];
            for (l, a) in s.iter() {
                w[l.total_photons() as usize] += a.norm_sqr();
            }
            w
        };
        for (a, b) in by_total(&roomy).iter().zip(by_total(&out).iter()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
