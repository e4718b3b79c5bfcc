//! Monte Carlo checks of the samplers against moments and summary functions
//! computed independently of the sampling code.

use spatcond::estimation::{
    fit_minimum_contrast, mple_strauss, mple_strauss_conditional, profile_mple_r, theoretical_k_dpp, ContrastConfig,
    ContrastModel, FittedParams,
};
use spatcond::models::{dpp_spectrum, DppGaussParams, LgcpParams, PoissonParams, StraussParams};
use spatcond::samplers::{self, dpp, lgcp::GaussField, strauss, ChainConfig};
use spatcond::stats::{mean, median, std_error, variance};
use spatcond::summaries::{estimate_all_with, estimate_k, FLattice};
use spatcond::{RGrid, SeedSpec, Window};

fn unit() -> Window {
    Window::unit()
}

#[test]
fn lgcp_count_moments_match_the_discretised_field() {
    let (rho, s2, delta, m) = (100.0, 1.0, 0.1, 16);
    let p = LgcpParams::new(rho, s2, delta).unwrap();
    let field = GaussField::new(&p, &unit(), m, m).unwrap();
    let mut rng = SeedSpec::new(11, 0).rng();
    let counts: Vec<f64> = (0..6000).map(|_| field.sample_cox(&mut rng).len() as f64).collect();

    // Var N = E N + rho^2 a^2 sum_{c, c'} (exp(C(|c - c'|)) - 1) for a field
    // that is constant on cells of area a
    let a = 1.0 / (m * m) as f64;
    let centre = |c: usize| ((c % m) as f64 + 0.5) / m as f64;
    let centre_y = |c: usize| ((c / m) as f64 + 0.5) / m as f64;
    let mut s = 0.0;
    for i in 0..m * m {
        for j in 0..m * m {
            let d = (centre(i) - centre(j)).hypot(centre_y(i) - centre_y(j));
            s += (s2 * (-d / delta).exp()).exp_m1();
        }
    }
    let var_theory = rho + rho * rho * a * a * s;

    let mu = mean(&counts);
    assert!((mu - rho).abs() < 4.0 * std_error(&counts), "mean {mu}");
    let v = variance(&counts);
    let m4 = counts.iter().map(|c| (c - mu).powi(4)).sum::<f64>() / counts.len() as f64;
    let se_v = ((m4 - v * v) / counts.len() as f64).sqrt();
    assert!((v - var_theory).abs() < 4.0 * se_v, "variance {v} vs {var_theory} (se {se_v})");
}

#[test]
fn dpp_k_matches_the_kernel() {
    let p = DppGaussParams::new(100.0, 0.03).unwrap();
    let s = dpp_spectrum(&p, &unit(), 1e-8).unwrap();
    let rg = RGrid::new(vec![0.02, 0.05, 0.1]).unwrap();
    let mut rng = SeedSpec::new(12, 0).rng();
    let ks: Vec<Vec<f64>> = (0..400)
        .map(|_| estimate_k(&dpp::unconditional(&s, &unit(), &mut rng).unwrap(), &rg).unwrap().values().to_vec())
        .collect();
    for (i, &r) in rg.values().iter().enumerate() {
        let col: Vec<f64> = ks.iter().map(|k| k[i]).collect();
        let want = theoretical_k_dpp(&p, r);
        assert!((mean(&col) - want).abs() < 4.0 * std_error(&col), "r = {r}: {} vs {want}", mean(&col));
    }
}

#[test]
fn dpp_conditional_count_and_repulsion() {
    let p = DppGaussParams::new(100.0, 0.05).unwrap();
    let s = dpp_spectrum(&p, &unit(), 1e-8).unwrap();
    let mut rng = SeedSpec::new(13, 0).rng();
    let rg = RGrid::new(vec![0.03]).unwrap();
    let mut k = Vec::new();
    for _ in 0..200 {
        let x = dpp::conditional(90, &s, &unit(), 100_000, &mut rng).unwrap();
        assert_eq!(x.len(), 90);
        k.push(estimate_k(&x, &rg).unwrap().values()[0]);
    }
    assert!(mean(&k) < 0.5 * std::f64::consts::PI * 0.03 * 0.03);
}

#[test]
fn j_departs_from_one_in_the_expected_direction() {
    let rg = RGrid::new(vec![0.0, 0.02, 0.04]).unwrap();
    let lat = FLattice::new(&unit(), &rg, 64).unwrap();
    let j_at = |x: &spatcond::PointPattern| estimate_all_with(x, &lat).unwrap()[3].values()[2];

    // regular: Strauss
    let sp = StraussParams::new(200.0, 0.1, 0.05).unwrap();
    let mut rng = SeedSpec::new(14, 0).rng();
    let xs = strauss::unconditional_run(&sp, &unit(), &ChainConfig { thinning: 200, ..ChainConfig::unconditional() }, 20, &mut rng).unwrap();
    let js: Vec<f64> = xs.iter().map(j_at).collect();
    assert!(mean(&js) > 1.0 + 4.0 * std_error(&js), "Strauss J {}", mean(&js));

    // clustered: LGCP
    let lp = LgcpParams::new(100.0, 1.5, 0.05).unwrap();
    let field = GaussField::new(&lp, &unit(), 24, 24).unwrap();
    let js: Vec<f64> = (0..60).map(|_| j_at(&field.sample_cox(&mut rng))).collect();
    assert!(mean(&js) < 1.0 - 4.0 * std_error(&js), "LGCP J {}", mean(&js));
}

#[test]
fn minimum_contrast_recovers_dpp_range() {
    let p = DppGaussParams::new(100.0, 0.04).unwrap();
    let s = dpp_spectrum(&p, &unit(), 1e-8).unwrap();
    let cfg = ContrastConfig::default();
    let fits: Vec<f64> = (0..60)
        .map(|k| {
            let x = samplers::sample_dpp(&s, &unit(), SeedSpec::new(15, k)).unwrap();
            match fit_minimum_contrast(&x, ContrastModel::Dpp, &cfg).unwrap().params {
                FittedParams::Dpp(q) => q.kappa(),
                other => panic!("{other:?}"),
            }
        })
        .collect();
    let m = median(&fits);
    assert!((m - 0.04).abs() < 0.01, "median kappa {m}");
}

#[test]
fn minimum_contrast_recovers_lgcp_shape() {
    let p = LgcpParams::new(100.0, 1.0, 0.08).unwrap();
    let field = GaussField::new(&p, &unit(), 32, 32).unwrap();
    let mut rng = SeedSpec::new(16, 0).rng();
    let cfg = ContrastConfig::default();
    let (mut s2, mut d) = (Vec::new(), Vec::new());
    for _ in 0..60 {
        let x = field.sample_cox(&mut rng);
        if let FittedParams::Lgcp(q) = fit_minimum_contrast(&x, ContrastModel::Lgcp, &cfg).unwrap().params {
            s2.push(q.sigma2());
            d.push(q.delta());
        }
    }
    assert_eq!(s2.len(), 60);
    assert!((0.5..2.0).contains(&median(&s2)), "median sigma2 {}", median(&s2));
    assert!((0.04..0.16).contains(&median(&d)), "median delta {}", median(&d));
}

#[test]
fn mple_on_poisson_data_is_near_one_and_both_versions_agree() {
    let p = PoissonParams::new(200.0).unwrap();
    let mut gam = Vec::new();
    let mut diff = Vec::new();
    for k in 0..40 {
        let x = samplers::sample_poisson(&p, &unit(), SeedSpec::new(17, k));
        let u = mple_strauss(&x, 0.05, 256).unwrap().gamma().unwrap();
        let c = mple_strauss_conditional(&x, 0.05, 256).unwrap().gamma().unwrap();
        gam.push(u);
        diff.push((u - c).abs());
    }
    assert!((median(&gam) - 1.0).abs() < 0.15, "median gamma {}", median(&gam));
    assert!(mean(&diff) < 0.02, "mean |difference| {}", mean(&diff));
}

#[test]
fn mple_recovers_strauss_parameters() {
    let p = StraussParams::new(200.0, 0.2, 0.05).unwrap();
    let cfg = ChainConfig { thinning: 500, ..ChainConfig::unconditional() };
    let mut rng = SeedSpec::new(18, 0).rng();
    let xs = strauss::unconditional_run(&p, &unit(), &cfg, 12, &mut rng).unwrap();
    let grid: Vec<f64> = (0..9).map(|k| 0.03 + 0.005 * k as f64).collect();
    let mut r_hat = Vec::new();
    let mut g_hat = Vec::new();
    for x in &xs {
        let fit = profile_mple_r(x, &grid, 128).unwrap();
        match fit.params {
            FittedParams::Strauss(q) => {
                r_hat.push(q.r());
                g_hat.push(q.gamma());
            }
            other => panic!("{other:?}"),
        }
    }
    assert!((median(&r_hat) - 0.05).abs() <= 0.0051, "median R {}", median(&r_hat));
    assert!((0.05..0.45).contains(&median(&g_hat)), "median gamma {}", median(&g_hat));
}
