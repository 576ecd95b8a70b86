use econlife::classifier;
use econlife::cost_model::{self, AssetParams};
use econlife::finance_equiv;
use econlife::lambert_w::{self, INV_E};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = AssetParams> {
    (0.0f64..4.0, -1.0f64..1.7, -2.0f64..0.0, -2.0f64..3.0).prop_map(|(la, ll, lr, lm)| {
        let acquisition = 10f64.powf(la);
        let life = 10f64.powf(ll);
        AssetParams::new(
            acquisition,
            10f64.powf(lm),
            acquisition / life,
            10f64.powf(lr),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn w0_is_increasing_with_small_residual(z1 in -INV_E..50.0, z2 in -INV_E..50.0) {
        let (w1, w2) = (lambert_w::w0(z1).unwrap(), lambert_w::w0(z2).unwrap());
        prop_assert!(w1 >= -1.0);
        if z1 < z2 {
            prop_assert!(w1 <= w2);
        }
        prop_assert!((w1 * w1.exp() - z1).abs() <= 1e-12 * z1.abs().max(1.0));
    }

    #[test]
    fn inverse_round_trip(w in -1.0f64..20.0) {
        let z = lambert_w::w0_inverse(w).unwrap();
        let back = lambert_w::w0(z).unwrap();
        prop_assert!((back - w).abs() <= 1e-9 * w.abs().max(1.0));
    }

    #[test]
    fn property_cost_decomposes(p in params(), frac in 0.0f64..4.0) {
        let t = frac * p.junction();
        let h = cost_model::property_cost(&p, t).unwrap();
        let g = cost_model::capital_cost(&p, t).unwrap();
        let f = cost_model::maintenance_cost(&p, t).unwrap();
        prop_assert!((g + f - h).abs() <= 1e-12 * h.abs());
    }

    #[test]
    fn first_branch_follows_sign_of_a_minus_br(p in params(), u in 0.01f64..0.99) {
        let slope = cost_model::property_cost_derivative(&p, u * p.junction()).unwrap();
        let sign = (p.maint_slope() - p.depreciation() * p.rate()).signum();
        prop_assert_eq!(slope.signum(), sign);
    }

    #[test]
    fn second_branch_has_one_critical_point(p in params()) {
        let ts = classifier::t_star(&p).unwrap();
        // past r·t ≈ 700 the slope carries e^{-rt} and underflows to zero
        let start = p.junction().max(ts * 0.5) * 1.0001;
        prop_assume!(p.rate() * ts < 700.0);
        if start < ts * 0.999 {
            prop_assert!(cost_model::property_cost_derivative(&p, start).unwrap() < 0.0);
        }
        let after = ts * 1.001;
        if after > p.junction() {
            prop_assert!(cost_model::property_cost_derivative(&p, after).unwrap() > 0.0);
        }
    }

    #[test]
    fn t_star_solves_gap_equation(p in params()) {
        let ts = classifier::t_star(&p).unwrap();
        let c = classifier::ratio_c(&p);
        let gap = classifier::gap(p.rate() * ts).unwrap();
        prop_assert!((gap - c).abs() <= 1e-10 * c.max(1.0));
    }

    #[test]
    fn a_star_exceeds_br(p in params()) {
        prop_assert!(classifier::threshold_a_star(&p) > p.depreciation() * p.rate());
    }

    #[test]
    fn reported_minimum_beats_sampled_costs(p in params(), fracs in prop::collection::vec(0.0f64..5.0, 20)) {
        let res = classifier::economic_life(&p).unwrap();
        let scale = p.junction().max(res.t_star.unwrap_or(0.0));
        for frac in fracs {
            let h = cost_model::property_cost(&p, frac * scale).unwrap();
            prop_assert!(res.min_cost <= h * (1.0 + 1e-12));
        }
    }

    #[test]
    fn recovery_inverts_present_value(amount in 1e-2f64..1e6, i in 0.0f64..1.0, n in 1u32..=60) {
        let pv = finance_equiv::present_value(amount, i, n).unwrap();
        let back = finance_equiv::capital_recovery(pv, i, n).unwrap();
        prop_assert!((back - amount).abs() <= 1e-12 * amount);
    }

    #[test]
    fn future_value_is_geometric_sum(amount in 1e-2f64..1e6, i in 1e-4f64..1.0, n in 1u32..=30) {
        let fv = finance_equiv::future_value_of_annuity(amount, i, n).unwrap();
        let direct: f64 = (0..n).map(|k| amount * (1.0 + i).powi(k as i32)).sum();
        prop_assert!((fv - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn effective_rate_grows_with_compounding(r in 0.001f64..1.0, m in 1u32..1000) {
        let lo = finance_equiv::effective_rate(r, m).unwrap();
        let hi = finance_equiv::effective_rate(r, m + 1).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!(hi <= r.exp_m1() * (1.0 + 1e-15));
    }
}
