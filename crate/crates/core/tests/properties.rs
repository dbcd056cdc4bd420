use proptest::prelude::*;

use hamdist_core::exact::conv::{forward_difference, reconstruct_from_second_difference};
use hamdist_core::exact::{cross_correlation_all, kangaroo_count, lce_build, periodic_all, Kangaroo};
use hamdist_core::fingerprint::Rolling;
use hamdist_core::generic::{packed_counts, unpacked_counts, GenericSampler};
use hamdist_core::oracle::cross_correlation_naive;
use hamdist_core::stream::{stream_offline, MedianStream, StreamParams};
use hamdist_core::{
    all_distances_naive, hamming, is_prime, prop_test, sample_subset, solve_exact, validate_estimation, FingerprintFn, Rng, SparseFunc,
    Variant,
};

/// Pattern and text over `[0, sigma)` with `1 <= m <= n`.
fn instance(max_n: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1..=max_n, 1u8..=4).prop_flat_map(|(n, sigma)| {
        (1..=n).prop_flat_map(move |m| (prop::collection::vec(0..sigma, m), prop::collection::vec(0..sigma, n)))
    })
}

/// Pattern and text sharing a period, with a few substitutions.
fn near_periodic(max_n: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>, usize)> {
    (8..=max_n, 1usize..6, prop::collection::vec(0u8..3, 6), any::<u64>()).prop_flat_map(|(n, rho, block, seed)| {
        (1..=n).prop_map(move |m| {
            let mut r = Rng::new(seed);
            let mut p: Vec<u8> = (0..m).map(|j| block[j % rho]).collect();
            let shift = r.below(rho as u64) as usize;
            let mut t: Vec<u8> = (0..n).map(|j| block[(j + shift) % rho]).collect();
            for _ in 0..r.below(4) {
                let j = r.below(m as u64) as usize;
                p[j] = 3;
            }
            for _ in 0..r.below(6) {
                let j = r.below(n as u64) as usize;
                t[j] = 3;
            }
            (p, t, rho)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn naive_distances_are_positionwise_hamming((p, t) in instance(60)) {
        let d = all_distances_naive(&p, &t).unwrap();
        prop_assert_eq!(d.len(), t.len() - p.len() + 1);
        for (i, &x) in d.iter().enumerate() {
            prop_assert_eq!(x, hamming(&p, &t[i..i + p.len()]).unwrap());
            prop_assert!(x <= p.len());
        }
    }

    #[test]
    fn exact_values_are_always_valid(x in 0usize..10_000, k in 1usize..5000, eps in 0.01f64..=1.0 / 3.0) {
        prop_assert!(validate_estimation(x, x as f64, k, eps));
    }

    #[test]
    fn exact_matcher_equals_oracle((p, t) in instance(120), k_frac in 0.0f64..=1.0, seed: u64) {
        let k = (k_frac * p.len() as f64) as usize;
        let want: Vec<Option<usize>> = all_distances_naive(&p, &t).unwrap().0.into_iter().map(|d| (d <= k).then_some(d)).collect();
        prop_assert_eq!(solve_exact(&p, &t, k, &mut Rng::new(seed)).unwrap(), want);
    }

    #[test]
    fn exact_matcher_on_near_periodic_inputs((p, t, rho) in near_periodic(200), seed: u64) {
        let d = all_distances_naive(&p, &t).unwrap();
        let k = (p.len() as f64).sqrt().ceil() as usize;
        let want: Vec<Option<usize>> = d.iter().map(|&x| (x <= k).then_some(x)).collect();
        prop_assert_eq!(solve_exact(&p, &t, k, &mut Rng::new(seed)).unwrap(), want);
        prop_assert_eq!(periodic_all(&p, &t, rho, 20).unwrap(), d.0);
    }

    #[test]
    fn cross_correlation_identity((p, t) in instance(80)) {
        let m = p.len();
        let corr = cross_correlation_naive(&t, &p);
        let d = all_distances_naive(&p, &t).unwrap();
        for (i, &x) in d.iter().enumerate() {
            prop_assert_eq!(x as i64, m as i64 - corr.get((i + m - 1) as i64));
        }
        prop_assert_eq!(cross_correlation_all(&p, &t), d.0);
    }

    #[test]
    fn kangaroo_counts_up_to_cap((p, t) in instance(80), cap in 1usize..20) {
        let idx = lce_build(&t, &p);
        let d = all_distances_naive(&p, &t).unwrap();
        for (i, &x) in d.iter().enumerate() {
            let want = if x < cap { Kangaroo::Count(x) } else { Kangaroo::ExceedsCap };
            prop_assert_eq!(kangaroo_count(&idx, i, cap), want);
        }
    }

    #[test]
    fn second_difference_round_trip(points in prop::collection::vec((-200i64..200, -9i64..10), 0..30), rho in 1i64..40) {
        let f = SparseFunc::from_pairs(points);
        let d2 = forward_difference(&forward_difference(&f, rho), rho);
        let (lo, hi) = (-200 - 2 * rho, 200);
        prop_assert_eq!(reconstruct_from_second_difference(&d2, rho as usize, lo, hi), f.to_dense(lo, hi));
    }

    #[test]
    fn rolling_fingerprint_matches_direct(s in prop::collection::vec(any::<u8>(), 1..100), cut in 0usize..100, seed: u64) {
        let f = FingerprintFn::random(&mut Rng::new(seed));
        let cut = cut % s.len();
        let mut roll = Rolling::empty();
        for &c in &s {
            roll.push(&f, c);
        }
        for &c in &s[..cut] {
            roll.pop_front(&f, f.inv_x(), c);
        }
        prop_assert_eq!(roll.fp, f.fingerprint(&s[cut..]));
    }

    #[test]
    fn samples_are_sorted_subsets(p in 1u64..5000, beta in 0.0f64..=1.0, seed: u64) {
        let b = sample_subset(p, beta, &mut Rng::new(seed));
        prop_assert!(b.members.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(b.members.iter().all(|&x| x < p));
        for x in 0..p.min(200) {
            prop_assert_eq!(b.contains(x), b.members.binary_search(&x).is_ok());
        }
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..200_000) {
        let naive = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        prop_assert_eq!(is_prime(n), naive);
    }

    #[test]
    fn packed_counts_equal_unpacked((p, t) in instance(150), k_frac in 0.0f64..=1.0, seed: u64) {
        let k = 1 + (k_frac * (p.len() - 1) as f64) as usize;
        let mut r = Rng::new(seed);
        let plan = GenericSampler::default().plan(p.len(), t.len(), k, 1.0 / 3.0, 4.0, &mut r).unwrap();
        let q: Vec<usize> = (0..=t.len() - p.len()).collect();
        prop_assert_eq!(packed_counts(&plan, &p, &t, &q), unpacked_counts(&plan, &p, &t));
    }

    #[test]
    fn stream_equals_offline((p, t) in instance(120), k_frac in 0.0f64..=1.0, alt: bool, seed: u64) {
        let k = 1 + (k_frac * (p.len() - 1) as f64) as usize;
        let variant = if alt { Variant::Alternative } else { Variant::Primary };
        let params = StreamParams { s: 4.0, ..StreamParams::default() };
        let mut online = MedianStream::new(&p, k, 1.0 / 3.0, variant, 3, &params, &mut Rng::new(seed)).unwrap();
        let got: Vec<_> = t.iter().filter_map(|&c| online.push(c)).collect();
        prop_assert_eq!(got, stream_offline(&p, &t, k, 1.0 / 3.0, variant, 3, &params, &mut Rng::new(seed)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tester_reports_exact_copies(m in 16usize..300, extra in 0usize..2000, delta in 0.05f64..=1.0, seed: u64) {
        let mut r = Rng::new(seed);
        let n = m + extra;
        let p: Vec<u8> = (0..m).map(|_| r.below(4) as u8).collect();
        let mut t: Vec<u8> = (0..n).map(|_| r.below(4) as u8).collect();
        let at = r.below((n - m + 1) as u64) as usize;
        t[at..at + m].copy_from_slice(&p);
        prop_assume!(delta * m as f64 >= 1.0);
        prop_assert!(prop_test(&p, &t, delta, &mut r).unwrap().contains(&at));
    }
}
