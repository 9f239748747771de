use fracspline_core::{
    benchmark, convergence_order, error_norms, growth_factor, heat_flux_at_left, pairwise_orders, solve,
    Discretization, FluxSign, ProblemSpec,
};

#[test]
fn pulse_flux_is_zero_before_the_pulse() {
    let case = benchmark(5).unwrap();
    let hist = solve(&case.spec, &case.default_disc).unwrap();
    let flux = heat_flux_at_left(&hist, &case.spec, FluxSign::Fick).unwrap();
    assert_eq!(flux.len(), 126);
    for &(t, q) in &flux {
        if t < 0.2 {
            assert_eq!(q, 0.0, "t = {t}");
        }
    }
    let (t_peak, q_peak) = flux.iter().copied().fold((0.0, 0.0f64), |best, p| if p.1.abs() > best.1.abs() { p } else { best });
    assert!(t_peak > 0.2 && t_peak <= 1.0 && q_peak != 0.0);
    // After the pulse is switched off the flux relaxes.
    let after: Vec<f64> = flux.iter().filter(|p| p.0 > 0.7).map(|p| p.1.abs()).collect();
    assert!(after.last().unwrap() < &(0.5 * q_peak.abs()));
    let plain = heat_flux_at_left(&hist, &case.spec, FluxSign::Plain).unwrap();
    assert!(plain.iter().zip(&flux).all(|(a, b)| a.1 == -b.1));
}

#[test]
fn norm_inequality_and_published_global_errors() {
    let case = benchmark(3).unwrap();
    let disc = case.disc(64, 4000).unwrap();
    let hist = solve(&case.spec, &disc).unwrap();
    let r1 = error_norms(&hist, &case.spec, disc.level_at(1.0)).unwrap();
    assert_eq!(r1.t, 1.0);
    assert!(((r1.l2 - 1.3203e-5) / 1.3203e-5).abs() < 0.15, "{r1:?}");
    assert!(((r1.linf - 2.1878e-5) / 2.1878e-5).abs() < 0.15, "{r1:?}");
    for t in [1.0, 2.0, 3.0] {
        let r = error_norms(&hist, &case.spec, disc.level_at(t)).unwrap();
        assert!(r.l2 >= 0.0 && r.l2 <= (disc.h * (disc.m - 1) as f64).sqrt() * r.linf);
    }
}

#[test]
fn growth_factor_sweep_stays_in_unit_interval() {
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for tau in [1.0, 1e-3] {
            for h in [0.1, 1e-3] {
                let m = (1.0 / h) as usize;
                let n = (1.0 / tau) as usize;
                let spec = ProblemSpec::new(alpha, 1.0, (0.0, 1.0), 1.0);
                let disc = Discretization::new(&spec, m, n, 1.0).unwrap();
                for k in 1..=64 {
                    let vh = std::f64::consts::PI * k as f64 / 64.0;
                    let g = growth_factor(vh / disc.h, &disc, &spec).unwrap();
                    assert!(g > 0.0 && g <= 1.0, "alpha={alpha} tau={tau} h={h} vh={vh}: {g}");
                }
            }
        }
    }
}

#[test]
fn orders_from_synthetic_sequences() {
    let pairs: Vec<(f64, f64)> = (0..5).map(|k| {
        let h = 0.1 / 2f64.powi(k);
        (h, 3.0 * h * h)
    }).collect();
    assert!((convergence_order(&pairs).unwrap() - 2.0).abs() < 1e-12);
    assert!(pairwise_orders(&pairs).unwrap().iter().all(|o| (o - 2.0).abs() < 1e-12));
}
