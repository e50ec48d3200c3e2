mod common;

use std::f64::consts::TAU;

use gauss_nmr::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

#[test]
fn exactness_is_exhaustive_for_small_n() {
    for n in 2..=500u64 {
        let m = truncation_bound(n);
        for l in 1..=n {
            let spec = SumSpec::quadratic(n, l, m).unwrap();
            let a = gauss_sum(&spec);
            let (is_factor, remainder) = divisibility_witness(n, l).unwrap();
            let all_zero = phase_residues(&spec).all_zero();
            assert_eq!(a.is_exact_one(), is_factor, "n={n} l={l}");
            assert_eq!(is_factor, remainder == 0);
            assert_eq!(is_factor, all_zero);
            assert_eq!(
                (a.magnitude() - 1.0).abs() <= 1e-12,
                all_zero,
                "n={n} l={l}"
            );
        }
    }
}

#[test]
fn residues_match_direct_product() {
    for n in 2..200u64 {
        for l in 1..60u64 {
            for j in 2..=6u32 {
                let spec = SumSpec::new(n, l, 12, j).unwrap();
                let r = phase_residues(&spec);
                for (m, &res) in r.residues.iter().enumerate() {
                    let direct = ((m as u128).pow(j) * n as u128) % l as u128;
                    assert_eq!(res as u128, direct);
                }
            }
        }
    }
}

#[test]
fn agrees_with_brute_force_on_wide_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let n = rng.gen_range(2..(1u64 << 63));
        let l = rng.gen_range(1..1_000_000u64);
        let m = rng.gen_range(0..60u64);
        let ours: Complex64 = gauss_sum(&SumSpec::quadratic(n, l, m).unwrap()).into();
        assert!(
            (ours - brute_gauss(n, l, m)).norm() < 1e-12,
            "n={n} l={l} m={m}"
        );
    }
}

/// `continuous_sum(N/l)` tracks the exact sum only while the rounding of
/// `N/l` to a double, amplified by `m^2`, stays negligible. Beyond that the
/// floating route drifts, which the residue route never does.
#[test]
fn continuous_route_versus_residue_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut drifted = 0;
    for _ in 0..5000 {
        let n = rng.gen_range(2..=1_000_000u64);
        let l = rng.gen_range(1..=1_000_000u64);
        let m = truncation_bound(n);
        let f = n as f64 / l as f64;
        let exact: Complex64 = gauss_sum(&SumSpec::quadratic(n, l, m).unwrap()).into();
        let floating: Complex64 = continuous_sum(f, m).into();
        let diff = (exact - floating).norm();
        // |f - N/l| <= ulp(f)/2; phase error of term m is 2 pi m^2 times that.
        let rounding = f.abs() * f64::EPSILON / 2.0;
        let bound = TAU * (m * m) as f64 * rounding + 1e-13;
        assert!(diff <= bound, "n={n} l={l}: {diff} > {bound}");
        if bound <= 1e-9 {
            assert!(diff <= 1e-9, "n={n} l={l}: {diff}");
        }
        if diff > 1e-9 {
            drifted += 1;
        }
        if n % l == 0 {
            assert!(Amplitude::from(floating).is_exact_one());
        }
    }
    // Random pairs rarely give large N/l, so probe a few directly.
    for l in 3..=40u64 {
        let n = 999_983u64;
        let m = truncation_bound(n);
        let exact: Complex64 = gauss_sum(&SumSpec::quadratic(n, l, m).unwrap()).into();
        let floating: Complex64 = continuous_sum(n as f64 / l as f64, m).into();
        if (exact - floating).norm() > 1e-9 {
            drifted += 1;
        }
    }
    assert!(
        drifted > 0,
        "expected the floating route to drift somewhere"
    );
}

#[test]
fn sweep_verdicts_are_sound_and_schedule_independent() {
    for n in 2..=2000u64 {
        let config = SweepConfig::new(n, 2, n).unwrap();
        let serial = sweep_with(&config, Execution::Serial).unwrap();
        let parallel = sweep_with(&config, Execution::Parallel).unwrap();
        assert_eq!(serial, parallel);
        for row in &serial {
            assert_eq!(row.verdict == Verdict::Factor, n % row.l == 0);
            assert_eq!(row.remainder_witness, n % row.l);
        }
    }
}

#[test]
fn ghost_scan_and_fscan_are_schedule_independent() {
    for &n in &[157573u64, 10007, 99_999_989] {
        assert_eq!(
            find_ghosts_with(n, 1, 0.95, Execution::Serial).unwrap(),
            find_ghosts_with(n, 1, 0.95, Execution::Parallel).unwrap()
        );
    }
    let config = FScanConfig::new(157573, 9000.0, 9300.0, 0.125, 20).unwrap();
    assert_eq!(
        f_scan_with(&config, Execution::Serial).unwrap(),
        f_scan_with(&config, Execution::Parallel).unwrap()
    );
}

fn check_factorization(n: u64) {
    let factors = factorize(n).unwrap();
    assert_eq!(factors.iter().product::<u64>(), n);
    assert!(factors.windows(2).all(|w| w[0] <= w[1]));
    assert!(factors.iter().all(|&p| is_prime(p)), "{n}: {factors:?}");
}

#[test]
fn factorize_all_small() {
    (2..=100_000u64).for_each(check_factorization);
}

#[test]
fn factorize_random_large() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ns: Vec<u64> = (0..1000)
        .map(|_| rng.gen_range(2..=1_000_000_000_000u64))
        .collect();
    Execution::default().map_vec(ns, check_factorization);
}

#[test]
fn ghosts_listed_are_nonfactors() {
    for n in [157573u64, 10001, 65536, 999_983] {
        let report = find_ghosts(n, 1, 0.9).unwrap();
        assert!(report.ghosts.iter().all(|&(l, _)| n % l != 0));
        assert!(report.ghosts.iter().all(|&(_, mag)| mag >= 0.9));
    }
}

#[test]
fn f_scan_cannot_tell_cofactors_from_non_cofactors() {
    let n = 157573u64;
    let config = FScanConfig::new(n, 9200.0, 9300.0, 1.0, 20).unwrap();
    let scan = f_scan(&config).unwrap();
    assert_eq!(scan.peaks.len(), 101);
    for peak in &scan.peaks {
        assert_eq!(peak.magnitude, 1.0);
        let f = peak.f as u64;
        if n.is_multiple_of(f) {
            assert!(peak.integer_trial && peak.divides);
            assert_eq!(n % peak.trial as u64, 0);
        } else {
            assert!(!peak.integer_trial && !peak.divides, "f = {f}");
        }
    }
    // 9269 = 157573 / 17 is the only cofactor in the window.
    assert_eq!(scan.peaks.iter().filter(|p| p.divides).count(), 1);
}

#[test]
fn prime_counts_match_table() {
    let table = prime_table(1_000_000);
    let mut cumulative = Vec::with_capacity(table.len());
    let mut acc = 0u64;
    for &p in &table {
        acc += p as u64;
        cumulative.push(acc);
    }
    let xs = (2..=20_000u64)
        .chain((20_000..=1_000_000).step_by(9973))
        .chain([1_000_000]);
    for x in xs {
        assert_eq!(
            count_primes(x).unwrap().exact,
            cumulative[x as usize],
            "x = {x}"
        );
    }
}

#[test]
fn pulse_matches_matrix_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let theta = rng.gen_range(-7.0..7.0);
        let phi = rng.gen_range(-7.0..7.0);
        let oracle = m2_expm(&pulse_generator(theta, phi));
        let ours = pulse_propagator(theta, phi).matrix().0;
        assert!(
            m2_distance(&ours, &oracle) < 1e-12,
            "theta={theta} phi={phi}"
        );
    }
}

#[test]
fn sequence_matches_step_by_step_product() {
    for &(n, l, m, theta) in &[
        (10u64, 4u64, 2u64, 0.1),
        (157573, 18, 20, 0.05),
        (997, 31, 9, 0.7),
    ] {
        let seq = PulseSequence::for_trial(theta, n, l, m).unwrap();
        let mut oracle = m2_expm(&pulse_generator(0.0, 0.0));
        for mm in 0..=m {
            let r = ((mm * mm) as u128 * n as u128 % l as u128) as f64;
            let pulse = m2_expm(&pulse_generator(theta, TAU * r / l as f64));
            oracle = m2_mul(&pulse, &oracle);
        }
        let d = m2_distance(&sequence_propagator(&seq).matrix().0, &oracle);
        assert!(d < 1e-13, "({n}, {l}, {m}): {d}");
    }
}

#[test]
fn factor_sequences_are_single_rotations() {
    for &(n, l) in &[(157573u64, 13u64), (157573, 31), (1_000_000, 64), (97, 97)] {
        for &m in &[0u64, 5, 20, 57] {
            for &theta in &[1e-3, 1e-2, 1e-1] {
                let seq = PulseSequence::for_trial(theta, n, l, m).unwrap();
                let total = (m + 1) as f64 * theta;
                let u = sequence_propagator(&seq);
                let d = (*u.matrix() - *pulse_propagator(total, 0.0).matrix()).frobenius_norm();
                assert!(d < 1e-12);
                let s = simulate_signal(&u).unwrap().magnitude();
                assert!((s - total.sin().abs()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn commutator_algebra() {
    let (x, y, z) = (
        SpinOperatorBasis::IX,
        SpinOperatorBasis::IY,
        SpinOperatorBasis::IZ,
    );
    let i = Complex64::i();
    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
        assert!((a.commutator(&b) - c.scale(i)).frobenius_norm() <= 1e-15);
    }
}

#[test]
fn estimator_converges_quadratically() {
    for &(n, l, m) in &[(10u64, 4u64, 2u64), (157573, 18, 20)] {
        let exact: Complex64 = gauss_sum(&SumSpec::quadratic(n, l, m).unwrap()).into();
        let err = |theta: f64| {
            let est: Complex64 = estimate_gauss(&PulseSequence::for_trial(theta, n, l, m).unwrap())
                .unwrap()
                .into();
            (est - exact).norm()
        };
        let thetas = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
        for w in thetas.windows(2) {
            let order = (err(w[0]) / err(w[1])).log2();
            assert!(
                order >= 1.8,
                "({n}, {l}, {m}) theta={}: order {order}",
                w[0]
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn propagators_stay_unitary(theta in 1e-4f64..0.5, phases in prop::collection::vec(-10.0f64..10.0, 0..60)) {
        let seq = PulseSequence::new(theta, phases).unwrap();
        prop_assert!(Unitary2::new(*sequence_propagator(&seq).matrix()).is_ok());
        prop_assert!(Unitary2::new(*first_order_propagator(&seq).matrix()).is_ok());
        prop_assert!(simulate_signal(&sequence_propagator(&seq)).unwrap().magnitude() <= 1.0 + 1e-12);
    }

    /// The gap between the ordered product and the single rotation is led by
    /// the pairwise commutators, whose total weight is
    /// `c2 = sum_{a<b} sin(phi_b - phi_a)`. When `c2` is sizeable the gap
    /// quarters per halving of theta. Some phase lists nearly cancel `c2`
    /// (e.g. N = 1385963, l = 60 gives a ratio of 8), and then only
    /// monotone shrinkage is asserted.
    #[test]
    fn first_order_gap_is_second_order(n in 2u64..10_000_000, l in 3u64..200, theta in 2e-3f64..1e-2) {
        prop_assume!(n % l != 0);
        let m = truncation_bound(n).min(30);
        let phases: Vec<f64> = (0..=m)
            .map(|k| TAU * (((k * k) as u128 * n as u128) % l as u128) as f64 / l as f64)
            .collect();
        let mut c2 = 0.0;
        for a in 0..phases.len() {
            for b in a + 1..phases.len() {
                c2 += (phases[b] - phases[a]).sin();
            }
        }
        let d = |t: f64| {
            let seq = PulseSequence::for_trial(t, n, l, m).unwrap();
            propagator_distance(&sequence_propagator(&seq), &first_order_propagator(&seq))
        };
        let (full, half) = (d(theta), d(theta / 2.0));
        prop_assume!(full > 1e-10 && half > 1e-10);
        let ratio = full / half;
        if c2.abs() >= 1.0 {
            prop_assert!((3.4..=4.6).contains(&ratio), "ratio {} (c2 = {})", ratio, c2);
        } else {
            prop_assert!(ratio > 2.0, "ratio {} (c2 = {})", ratio, c2);
        }
    }

    #[test]
    fn sampled_sums_are_reproducible(n in 2u64..1_000_000_000, l in 1u64..10_000, count in 1usize..50, seed: u64) {
        let spec = SumSpec::suppressed(n, l).unwrap();
        let a = gauss_sum_sampled(&spec, count, seed).unwrap();
        let b = gauss_sum_sampled(&spec, count, seed).unwrap();
        prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
        prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        prop_assert!(a.magnitude() <= 1.0 + 1e-12);
        if n % l == 0 {
            prop_assert_eq!(a, Amplitude::ONE);
        }
    }

    #[test]
    fn primes_only_trials_match_table(n in 2u64..=100_000_000) {
        let table = prime_table(10_000);
        let expected: Vec<u64> = (2..=n.isqrt()).filter(|&k| table[k as usize]).collect();
        prop_assert_eq!(enumerate_trials(n, TrialPolicy::PrimesOnly).unwrap(), expected);
    }
}
