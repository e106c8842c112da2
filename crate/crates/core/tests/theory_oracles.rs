use approx::assert_relative_eq;
use mvbandit::theory::{
    bound_mvfl, bound_mvlcb, concentration_bound, coupling_floor, empirical_tail, kl_bernoulli,
    lb_env_pair, worst_case_gamma, BoundInputs,
};
use mvbandit::{ArmDistribution, Environment, RiskTolerance};

fn risk(l: f64) -> RiskTolerance {
    RiskTolerance::new(l).unwrap()
}

/// Values from `data/gen_kl_grid.py` (40-digit arithmetic).
#[test]
fn kl_matches_high_precision_grid() {
    let text = include_str!("data/kl_grid.csv");
    let mut n = 0;
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_relative_eq!(kl_bernoulli(f[0], f[1]), f[2], max_relative = 1e-11);
        n += 1;
    }
    assert_eq!(n, 67);
}

#[test]
fn kl_nonnegative_and_zero_on_diagonal() {
    for i in 1..100 {
        let p = i as f64 / 100.0;
        assert_eq!(kl_bernoulli(p, p), 0.0);
        for j in 1..100 {
            assert!(kl_bernoulli(p, j as f64 / 100.0) >= 0.0);
        }
    }
}

#[test]
fn coupling_floor_holds_on_declared_grid() {
    let mut violations = 0;
    for horizon in [100, 1000, 10_000, 100_000] {
        for i in 0..20 {
            let gamma = 10f64.powf(-3.0 + 2.0 * i as f64 / 19.0);
            if !coupling_floor(22.0, gamma, horizon).unwrap().holds {
                violations += 1;
            }
        }
        let g = worst_case_gamma(horizon as f64);
        assert!(coupling_floor(22.0, g, horizon).unwrap().holds);
    }
    assert_eq!(violations, 0);
}

#[test]
fn coupling_sum_matches_geometric_closed_form() {
    for (gamma, horizon) in [(0.003f64, 1000usize), (0.02, 100_000), (0.1, 100)] {
        let r = (-22.0 * gamma * gamma).exp();
        let closed = 0.5 * r * (1.0 - r.powi(horizon as i32)) / (1.0 - r);
        assert_relative_eq!(
            coupling_floor(22.0, gamma, horizon).unwrap().sum,
            closed,
            max_relative = 1e-10
        );
    }
}

#[test]
fn construction_gaps_hold_across_range() {
    for i in 1..25 {
        let g = i as f64 * 0.005;
        let pair = lb_env_pair(g, risk(0.0)).unwrap();
        let f = pair.env_f.gaps();
        let fp = pair.env_f_prime.gaps();
        assert_relative_eq!(f.gamma[1], g, max_relative = 1e-9);
        assert_relative_eq!(fp.gamma[0], g, max_relative = 1e-9);
        // |Δ| = 5/4 ∓ 2Γ ≥ 1
        assert!(f.delta_max >= 1.0 && fp.delta_max >= 1.0);
    }
}

#[test]
fn bounds_nonincreasing_in_gap() {
    let env_for = |v: f64| Environment::canonical(v, risk(1.0)).unwrap();
    let mut last_lcb = f64::INFINITY;
    let mut last_fl = f64::INFINITY;
    // Γ ≥ 0.1 keeps both count factors below the ∧T clamp at T = 10⁴
    for v in [2.1, 2.15, 2.2, 2.5, 3.0, 4.0] {
        let inputs = BoundInputs::from_env(&env_for(v), 10_000, 0.2).with_c(1.0);
        let lcb = bound_mvlcb(&inputs).unwrap().value;
        let fl = bound_mvfl(&inputs).unwrap().value;
        assert!(lcb <= last_lcb * (1.0 + 1e-12), "{v}: {lcb} > {last_lcb}");
        assert!(fl <= last_fl * (1.0 + 1e-12), "{v}: {fl} > {last_fl}");
        last_lcb = lcb;
        last_fl = fl;
    }
}

#[test]
fn empirical_tail_within_bound_for_bounded_families() {
    let cases = [
        (ArmDistribution::Bernoulli { p: 0.3 }, 0.5, 50u64, 0.4),
        (
            ArmDistribution::TwoPoint {
                mu: 0.0,
                sigma2: 0.25,
            },
            1.0,
            40,
            0.5,
        ),
        (
            ArmDistribution::DiscreteFinite {
                atoms: vec![(0.0, 0.2), (0.5, 0.5), (1.0, 0.3)],
            },
            2.0,
            30,
            0.6,
        ),
    ];
    for (dist, lambda, t, delta) in cases {
        let alpha = dist.sub_gaussian_params().unwrap().alpha_max;
        let bound = concentration_bound(t, delta, alpha, risk(lambda)).unwrap();
        let e = empirical_tail(&dist, risk(lambda), t, delta, 20_000, 5).unwrap();
        assert!(e.upper_freq <= bound + 3.0 * e.upper_sem, "{dist:?}");
        assert!(e.lower_freq <= bound + 3.0 * e.lower_sem, "{dist:?}");
    }
}
