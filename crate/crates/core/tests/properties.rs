//! Property tests for the distribution and inequality invariants.

use proptest::prelude::*;

use hearthledger::{
    atkinson, atkinson_ratio, decompose, ede, gini, ingest, DistributionError,
    IncomeDistribution, InequalityAversion, LognormalSpec,
};

fn income() -> impl Strategy<Value = f64> {
    // spans several orders of magnitude without denormals
    (0.01f64..1e6).prop_map(|y| y)
}

fn weight() -> impl Strategy<Value = f64> {
    0.1f64..10.0
}

fn weighted_dist() -> impl Strategy<Value = IncomeDistribution> {
    prop::collection::vec((income(), weight()), 1..50).prop_map(|pairs| {
        let (values, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        IncomeDistribution::from_samples(&values, Some(&weights)).unwrap()
    })
}

/// Distributions with uniform weights and integer-valued incomes, where
/// transfer arithmetic is exact in doubles.
fn integer_dist() -> impl Strategy<Value = IncomeDistribution> {
    prop::collection::vec(1u32..1_000_000, 2..30).prop_map(|values| {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        IncomeDistribution::from_samples(&values, None).unwrap()
    })
}

fn finite_eps() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(0.0),
        Just(0.5),
        Just(1.0),
        Just(2.0),
        0.0f64..8.0,
    ]
}

proptest! {
    #[test]
    fn construction_rejects_nonpositive_income(
        mut values in prop::collection::vec(income(), 1..20),
        bad in -1e6f64..=0.0,
        idx in 0usize..20,
    ) {
        let idx = idx % values.len();
        values[idx] = bad;
        let rejected = matches!(
            IncomeDistribution::from_samples(&values, None),
            Err(DistributionError::NonPositiveIncome { .. })
        );
        prop_assert!(rejected);
    }

    #[test]
    fn frequencies_sum_to_one(d in weighted_dist()) {
        let total: f64 = d.frequencies().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn imputation_raises_the_ratio_mode_index(
        gdp in 1_000_000u64..10_000_000_000_000,
        population in 1000u64..100_000_000,
        share in 0.01f64..0.49,
        wage in 1u64..100_000,
    ) {
        let employed = (population as f64 * share) as u64;
        let housewives = (population as f64 * share) as u64 + 1;
        prop_assume!(employed + housewives <= population);
        let snapshot = hearthledger::AccountsSnapshot::new(
            2014, gdp, population, employed, housewives, wage,
        ).unwrap();
        let result = hearthledger::run_two_stage(
            &snapshot,
            &hearthledger::RunOptions::default(),
        ).unwrap();
        // the augmented mean strictly exceeds the baseline, so the literal
        // ratio formula strictly raises the index
        prop_assert!(result.i2 > result.i1);
    }

    #[test]
    fn scaling_scales_the_mean(d in weighted_dist(), lambda in 0.001f64..1000.0) {
        let scaled = d.scale(lambda).unwrap();
        let expect = lambda * d.mean();
        prop_assert!((scaled.mean() - expect).abs() <= 1e-12 * expect.abs());
    }

    #[test]
    fn transfer_preserves_mean_bit_exactly(d in integer_dist()) {
        // pick the extreme points; integer amounts keep every sum exact
        let incomes = d.incomes();
        let (mut hi, mut lo) = (0, 0);
        for (i, &y) in incomes.iter().enumerate() {
            if y > incomes[hi] { hi = i; }
            if y < incomes[lo] { lo = i; }
        }
        let gap = incomes[hi] - incomes[lo];
        prop_assume!(gap >= 4.0);
        let amount = (gap / 4.0).floor();
        let after = d.transfer(hi, lo, amount).unwrap();
        prop_assert_eq!(after.mean().to_bits(), d.mean().to_bits());
    }

    #[test]
    fn atkinson_is_scale_invariant(d in weighted_dist(), lambda in 0.001f64..1000.0) {
        let scaled = d.scale(lambda).unwrap();
        for eps in [
            InequalityAversion::finite(0.0),
            InequalityAversion::finite(0.5),
            InequalityAversion::finite(1.0),
            InequalityAversion::finite(2.0),
            InequalityAversion::Infinite,
        ] {
            let a = atkinson(&d, eps).index;
            let b = atkinson(&scaled, eps).index;
            prop_assert!((a - b).abs() < 1e-10, "eps={eps}: {a} vs {b}");
        }
    }

    #[test]
    fn index_stays_in_range(d in weighted_dist(), e in finite_eps()) {
        let r = atkinson(&d, InequalityAversion::finite(e));
        prop_assert!(r.index >= 0.0);
        prop_assert!(r.index < 1.0);
        let inf = atkinson(&d, InequalityAversion::Infinite);
        prop_assert!(inf.index >= 0.0 && inf.index < 1.0);
    }

    #[test]
    fn index_zero_iff_equal(y in income(), n in 1usize..20, e in finite_eps()) {
        let d = IncomeDistribution::from_samples(&vec![y; n], None).unwrap();
        let r = atkinson(&d, InequalityAversion::finite(e));
        prop_assert!(r.index.abs() < 1e-12);
    }

    #[test]
    fn index_nondecreasing_in_epsilon(d in weighted_dist()) {
        let mut grid: Vec<InequalityAversion> = (0..=32)
            .map(|i| InequalityAversion::finite(i as f64 * 0.25))
            .collect();
        grid.push(InequalityAversion::Infinite);
        let mut last = -1.0;
        for eps in grid {
            let idx = atkinson(&d, eps).index;
            prop_assert!(idx >= last - 1e-12, "eps={eps}: {idx} < {last}");
            last = idx;
        }
    }

    #[test]
    fn progressive_transfer_strictly_decreases_index(d in integer_dist()) {
        let incomes = d.incomes();
        let (mut hi, mut lo) = (0, 0);
        for (i, &y) in incomes.iter().enumerate() {
            if y > incomes[hi] { hi = i; }
            if y < incomes[lo] { lo = i; }
        }
        let gap = incomes[hi] - incomes[lo];
        prop_assume!(gap >= 4.0);
        let amount = (gap / 4.0).floor();
        let after = d.transfer(hi, lo, amount).unwrap();
        for e in [0.5, 1.0, 2.0] {
            let eps = InequalityAversion::finite(e);
            let before_idx = atkinson(&d, eps).index;
            let after_idx = atkinson(&after, eps).index;
            prop_assert!(
                after_idx < before_idx,
                "e={e}: {after_idx} !< {before_idx}"
            );
        }
    }

    #[test]
    fn welfare_matches_at_uniform_ede(d in weighted_dist(), e in finite_eps()) {
        let eps = InequalityAversion::finite(e);
        let r = atkinson(&d, eps);
        let uniform = IncomeDistribution::from_samples(&[r.ede, r.ede], None).unwrap();
        let w_uniform = atkinson(&uniform, eps).welfare;
        let scale = r.welfare.abs().max(1e-300);
        prop_assert!(
            (w_uniform - r.welfare).abs() / scale < 1e-10,
            "e={e}: {w_uniform} vs {}",
            r.welfare
        );
    }

    #[test]
    fn ede_recovered_from_index(d in weighted_dist(), e in finite_eps()) {
        let r = atkinson(&d, InequalityAversion::finite(e));
        prop_assert!(((1.0 - r.index) * r.mean - r.ede).abs() <= 1e-12 * r.mean);
    }

    #[test]
    fn ratio_mode_collapses_exactly(
        y in 1.0f64..1e6,
        mu in 1.0f64..1e6,
        e in finite_eps(),
    ) {
        let got = atkinson_ratio(y, mu, InequalityAversion::finite(e)).unwrap();
        prop_assert_eq!(got.to_bits(), (1.0 - y / mu).to_bits());
    }

    #[test]
    fn gini_matches_pairwise_oracle(d in weighted_dist()) {
        let pts: Vec<(f64, f64)> = d.points().collect();
        let mut sum = 0.0;
        for &(yi, fi) in &pts {
            for &(yj, fj) in &pts {
                sum += fi * fj * (yi - yj).abs();
            }
        }
        let oracle = sum / (2.0 * d.mean());
        prop_assert!((gini(&d) - oracle).abs() < 1e-10);
    }

    #[test]
    fn decomposition_identity_holds(
        pairs in prop::collection::vec((income(), weight(), 0u8..5), 1..40),
    ) {
        let (values, rest): (Vec<f64>, Vec<(f64, u8)>) = pairs
            .into_iter()
            .map(|(y, w, g)| (y, (w, g)))
            .unzip();
        let (weights, labels): (Vec<f64>, Vec<u8>) = rest.into_iter().unzip();
        let d = IncomeDistribution::from_samples(&values, Some(&weights)).unwrap();
        let r = decompose(&d, &labels, InequalityAversion::finite(2.0)).unwrap();
        let lhs = 1.0 - r.total;
        let rhs = (1.0 - r.between) * (1.0 - r.within);
        prop_assert!((lhs - rhs).abs() < 1e-10);
        prop_assert!(r.between >= 0.0 && r.between < 1.0);
        prop_assert!(r.within >= 0.0 && r.within < 1.0);
    }

    #[test]
    fn distribution_csv_round_trips(d in weighted_dist()) {
        let back = ingest::parse_distribution(&ingest::distribution_to_csv(&d)).unwrap();
        prop_assert_eq!(&back, &d);
    }

    #[test]
    fn accounts_csv_round_trips(
        year in 1900i32..2100,
        gdp in 0u64..u64::MAX / 2,
        population in 1u64..1e10 as u64,
        employed_share in 0.0f64..0.5,
        housewife_share in 0.0f64..0.5,
        wage in 1u64..1_000_000,
    ) {
        let employed = (population as f64 * employed_share) as u64;
        let housewives = (population as f64 * housewife_share) as u64;
        let snapshot = hearthledger::AccountsSnapshot::new(
            year, gdp, population, employed, housewives, wage,
        ).unwrap();
        let back = ingest::parse_accounts(&ingest::accounts_to_csv(&snapshot)).unwrap();
        prop_assert_eq!(back, snapshot);
    }
}

/// Doubling the point count never moves the implied index by more than the
/// previous refinement did.
#[test]
fn lognormal_quantization_converges_monotonically() {
    let spec = LognormalSpec::new(0.0, 0.8).unwrap();
    for e in [0.5, 1.0, 2.0, 3.0] {
        let eps = InequalityAversion::finite(e);
        let ladder: Vec<f64> = [250, 500, 1000, 2000, 4000, 8000]
            .iter()
            .map(|&n| atkinson(&spec.quantize(n).unwrap(), eps).index)
            .collect();
        for w in ladder.windows(3) {
            let prev = (w[1] - w[0]).abs();
            let cur = (w[2] - w[1]).abs();
            assert!(cur <= prev, "e={e}: delta grew from {prev} to {cur}");
        }
    }
}

/// The minimum-income limit is the floor of the EDE family.
#[test]
fn ede_orders_by_aversion() {
    let d = IncomeDistribution::from_samples(&[10.0, 250.0, 40.0], Some(&[2.0, 1.0, 1.0]))
        .unwrap();
    let mean = ede(&d, InequalityAversion::finite(0.0));
    let geo = ede(&d, InequalityAversion::finite(1.0));
    let harm = ede(&d, InequalityAversion::finite(2.0));
    let min = ede(&d, InequalityAversion::Infinite);
    assert!(mean >= geo && geo >= harm && harm >= min);
    assert_eq!(min, 10.0);
}
