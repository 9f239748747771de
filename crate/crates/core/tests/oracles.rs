//! Reference values below were produced with 50-digit mpmath arithmetic and frozen.

use fracspline_core::fractime::gmmp_weights;
use fracspline_core::{
    caputo_gmmp, dominance_margin, erfcx, make_shape, mittag_leffler, thomas_solve, Error, MLParams,
    TriDiagonalSystem,
};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

const SHAPE_REF: [(f64, f64, f64, f64); 12] = [
    (1.0, 1.0, 0.175_201_193_643_801_46, 0.367_879_441_171_442_33),
    (0.01, 1.0 / 2048.0, 1.940_255_363_784_559_9e-17, 3.880_510_727_573_745_7e-17),
    (1.18, 1.0 / 128.0, 1.305_770_064_748_712e-7, 2.611_551_226_627_98e-7),
    (0.01, 1.0 / 32.0, 5.086_263_045_668_602e-12, 1.017_252_614_100_774_2e-11),
    (2.53, 1.0 / 50.0, 2.159_513_371_378_563_3e-5, 4.319_579_652_551_781e-5),
    (1.0, 0.0099, 1.617_172_924_935_575_9e-7, 3.234_361_699_779_290_4e-7),
    (1.0, 0.0101, 1.717_177_091_771_690_1e-7, 3.434_371_700_462_638_7e-7),
    (1.0, 0.5, 0.021_095_305_493_747_362, 0.042_717_677_109_443_03),
    (1.0, 0.999, 0.174_658_700_352_451_88, 0.366_705_598_408_696_8),
    (1.0, 1.001, 0.175_744_862_136_442_6, 0.369_056_002_216_438_7),
    (10.0, 3.0, 5_343_237_290_732.231, 154_953_881_432_104.7),
    (1.0, 1e-5, 1.666_666_666_675e-16, 3.333_333_333_366_666_7e-16),
];

#[test]
fn shape_differences_match_high_precision() {
    for &(p, h, d1, d2) in &SHAPE_REF {
        let sh = make_shape(p, h).unwrap();
        assert!(rel(sh.d1, d1) < 1e-12, "d1 at p={p} h={h}: {} vs {d1}", sh.d1);
        assert!(rel(sh.d2, d2) < 1e-12, "d2 at p={p} h={h}: {} vs {d2}", sh.d2);
        assert!(sh.d1 > 0.0 && sh.d1 < sh.d2);
    }
}

#[test]
fn shape_series_agrees_with_taylor_leading_terms() {
    // d1 = x^3/6 (1 + x^2/20 + ...), d2 = x^3/3 (1 + x^2/10 + ...)
    for x in [1e-6, 1e-4, 1e-3, 5e-3] {
        let sh = make_shape(x, 1.0).unwrap();
        let x2 = x * x;
        let d1 = x * x2 / 6.0 * (1.0 + x2 / 20.0 + x2 * x2 / 840.0);
        let d2 = x * x2 / 3.0 * (1.0 + x2 / 10.0 + x2 * x2 / 280.0);
        assert!(rel(sh.d1, d1) < 1e-12);
        assert!(rel(sh.d2, d2) < 1e-12);
    }
}

const ERFCX_REF: [(f64, f64); 19] = [
    (0.1, 0.896_456_979_969_126_6),
    (0.5, 0.615_690_344_192_925_9),
    (0.9, 0.456_531_651_323_117_04),
    (1.0, 0.427_583_576_155_807),
    (1.0001, 0.427_556_256_497_965),
    (1.5, 0.321_585_416_454_317_5),
    (2.0, 0.255_395_676_310_505_74),
    (2.5, 0.210_806_364_061_143_58),
    (3.0, 0.179_001_151_181_389_95),
    (4.0, 0.136_999_457_625_061_4),
    (5.0, 0.110_704_637_733_068_63),
    (5.9999, 0.092_778_073_860_032_11),
    (6.0, 0.092_776_567_800_538_35),
    (7.0, 0.079_800_054_329_152_93),
    (10.0, 0.056_140_992_743_822_586),
    (30.0, 0.018_795_888_861_416_75),
    (100.0, 0.005_641_613_782_989_433),
    (354.9, 0.001_589_707_928_738_790_3),
    (400.0, 0.001_410_469_551_179_591),
];

#[test]
fn erfcx_matches_high_precision() {
    for &(z, want) in &ERFCX_REF {
        let got = erfcx(z).unwrap();
        assert!(rel(got, want) < 1e-12, "erfcx({z}) = {got}, want {want}");
    }
}

#[test]
fn erfcx_is_decreasing() {
    let mut prev = erfcx(0.0).unwrap();
    for k in 1..=4000 {
        let v = erfcx(k as f64 * 0.1).unwrap();
        assert!(v < prev, "not decreasing at z = {}", k as f64 * 0.1);
        prev = v;
    }
}

#[test]
fn erfcx_branches_overlap() {
    // Each side of a switch point against the other branch's neighbour.
    for z in [0.999_999, 1.0, 1.000_001, 5.999_999, 6.0, 6.000_001] {
        let a = erfcx(z).unwrap();
        let b = erfcx(z * (1.0 + 1e-9)).unwrap();
        // d/dz erfcx ~ -2 z erfcx near these points; a 1e-9 relative step moves the value by < 1e-7.
        assert!(rel(b, a) < 2e-7);
    }
}

const ML_REF: [(f64, f64, f64); 11] = [
    (0.5, -1.0, 0.427_583_576_155_807),
    (0.3, -1.0, 0.456_594_408_329_690_67),
    (0.9, -1.0, 0.376_066_021_424_641_9),
    (0.1, -1.0, 0.485_564_464_311_082_1),
    (0.6, -1.0, 0.413_327_340_943_106_3),
    (0.3, -2.5, 0.244_983_123_794_786_94),
    (0.9, -4.0, 0.050_411_103_314_434_62),
    (0.7, -10.0, 0.036_173_265_542_309_15),
    (0.2, -50.0, 0.016_913_710_147_786_02),
    (0.95, -3.0, 0.067_532_022_214_071_89),
    (0.5, 2.0, 108.940_904_389_977_97),
];

#[test]
fn mittag_leffler_matches_high_precision() {
    for &(alpha, z, want) in &ML_REF {
        let got = mittag_leffler(MLParams::new(alpha), z).unwrap();
        assert!(rel(got, want) < 1e-11, "E_{alpha}({z}) = {got}, want {want}");
    }
}

#[test]
fn mittag_leffler_half_equals_erfcx() {
    let params = MLParams::new(0.5);
    for k in 0..=300 {
        let z = k as f64 * 0.01;
        let ml = mittag_leffler(params, -z).unwrap();
        let ex = erfcx(z).unwrap();
        assert!(rel(ml, ex) < 1e-10, "z = {z}: {ml} vs {ex}");
    }
}

#[test]
fn mittag_leffler_relaxation_is_decreasing() {
    for alpha in [0.1, 0.5, 0.9] {
        let params = MLParams::new(alpha);
        let mut prev = 1.0;
        for k in 1..=200 {
            let t = k as f64 * 0.05;
            let v = mittag_leffler(params, -t.powf(alpha)).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}

#[test]
fn mittag_leffler_rejects_large_positive() {
    assert!(matches!(
        mittag_leffler(MLParams::new(0.5), 5.5),
        Err(Error::Range { .. })
    ));
}

#[test]
fn caputo_of_relaxation_function() {
    // D^a E_a(-t^a) = -E_a(-t^a); the GMMP error at t = 1 should halve with tau.
    let alpha = 0.6;
    let params = MLParams::new(alpha);
    let u = |t: f64| mittag_leffler(params, -t.powf(alpha)).unwrap();
    let mut errs = Vec::new();
    for n in [100usize, 200, 400, 800] {
        let tau = 1.0 / n as f64;
        let samples: Vec<f64> = (0..=n).map(|k| u(k as f64 * tau)).collect();
        let w = gmmp_weights(alpha, n).unwrap();
        let d = caputo_gmmp(&samples, 1.0, tau, &w).unwrap();
        errs.push((d + u(1.0)).abs());
    }
    for pair in errs.windows(2) {
        assert!((pair[0] / pair[1]).log2() > 0.8, "{errs:?}");
    }
}

#[test]
fn caputo_of_powers_is_first_order() {
    for (alpha, power) in [(0.5, 1.0), (0.3, 2.3), (0.7, 2.7)] {
        let exact = libm::tgamma(power + 1.0) / libm::tgamma(power + 1.0 - alpha);
        let mut errs = Vec::new();
        for n in [50usize, 100, 200, 400, 800] {
            let tau = 1.0 / n as f64;
            let samples: Vec<f64> = (0..=n).map(|k| (k as f64 * tau).powf(power)).collect();
            let w = gmmp_weights(alpha, n).unwrap();
            errs.push((caputo_gmmp(&samples, 0.0, tau, &w).unwrap() - exact).abs());
        }
        for pair in errs.windows(2) {
            assert!((pair[0] / pair[1]).log2() >= 0.9, "alpha={alpha} power={power}: {errs:?}");
        }
    }
    // t -> 2/sqrt(pi) at t = 1 for alpha = 1/2
    let n = 4000;
    let w = gmmp_weights(0.5, n).unwrap();
    let samples: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let d = caputo_gmmp(&samples, 0.0, 1.0 / n as f64, &w).unwrap();
    assert!((d - 1.128_379_167_095_512_6).abs() < 1e-3);
}

#[test]
fn gmmp_recursion_matches_log_gamma() {
    // omega_k = Gamma(k - a) / (Gamma(-a) Gamma(k + 1)); for k >= 1 this is negative.
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let w = gmmp_weights(alpha, 20).unwrap();
        for k in 1..=20usize {
            let kf = k as f64;
            let mag = (libm::lgamma(kf - alpha) - libm::lgamma(-alpha) - libm::lgamma(kf + 1.0)).exp();
            // Gamma(k - a) > 0, Gamma(-a) < 0
            let want = -mag;
            assert!(rel(w.omega()[k], want) < 1e-12, "alpha={alpha} k={k}");
        }
    }
}

#[test]
fn weight_sign_and_partial_sum_structure() {
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let w = gmmp_weights(alpha, 10_000).unwrap();
        assert_eq!(w.omega()[0], 1.0);
        assert!(w.omega()[1..].iter().all(|&o| o < 0.0));
        let ps = w.partial_sums();
        assert!(ps.iter().all(|&s| s > 0.0 && s <= 1.0));
        assert!(ps[1..].iter().all(|&s| s < 1.0));
        assert!(ps.windows(2).all(|p| p[1] < p[0]));
        assert!(ps[10_000] < ps[100]);
        for k in 1..=10_000usize {
            let kf = k as f64;
            assert_eq!(w.omega()[k], w.omega()[k - 1] * ((kf - 1.0 - alpha) / kf));
        }
    }
}

fn dense_solve(sys: &TriDiagonalSystem) -> Vec<f64> {
    let n = sys.len();
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        a[i][i] = sys.diag[i];
        if i > 0 {
            a[i][i - 1] = sys.lower[i - 1];
        }
        if i + 1 < n {
            a[i][i + 1] = sys.upper[i];
        }
        a[i][n] = sys.rhs[i];
    }
    // Gaussian elimination with partial pivoting on the augmented matrix.
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..=n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (a[i][n] - s) / a[i][i];
    }
    x
}

fn dominant_system() -> impl Strategy<Value = TriDiagonalSystem> {
    (1usize..=100).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0f64..1.0, n.saturating_sub(1)),
            prop::collection::vec(-1.0f64..1.0, n.saturating_sub(1)),
            prop::collection::vec((0.01f64..2.0, prop::bool::ANY), n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
            .prop_map(move |(lower, upper, extra, rhs)| {
                let diag = (0..n)
                    .map(|i| {
                        let off = if i > 0 { lower[i - 1].abs() } else { 0.0 }
                            + if i + 1 < n { upper[i].abs() } else { 0.0 };
                        let mag = off + extra[i].0;
                        if extra[i].1 {
                            mag
                        } else {
                            -mag
                        }
                    })
                    .collect();
                TriDiagonalSystem::new(lower, diag, upper, rhs).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn thomas_matches_dense_elimination(sys in dominant_system()) {
        prop_assert!(dominance_margin(&sys) > 0.0);
        let x = thomas_solve(&sys).unwrap();
        let y = dense_solve(&sys);
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).abs() <= 1e-11 * scale);
        }
        // Residual bound from the contract.
        let ax = sys.apply(&x);
        let xnorm = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bnorm = sys.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let resid = ax.iter().zip(&sys.rhs).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(resid <= 1e-12 * (sys.norm_inf() * xnorm + bnorm));
        // Deterministic and non-mutating.
        prop_assert_eq!(thomas_solve(&sys).unwrap(), x);
    }

    #[test]
    fn hyperbolic_identity(p in 0.0f64..30.0, h in 1e-4f64..1.0) {
        let sh = make_shape(p, h).unwrap();
        prop_assert!(rel(sh.c * sh.c - sh.s * sh.s, 1.0) < 1e-13 * sh.c * sh.c);
    }

    #[test]
    fn order_is_scale_invariant(e0 in 1e-8f64..1.0, r1 in 1.5f64..5.0, r2 in 1.5f64..5.0, k in 1e-3f64..1e3) {
        let pairs = [(0.1, e0), (0.05, e0 / r1), (0.025, e0 / r1 / r2)];
        let scaled: Vec<_> = pairs.iter().map(|&(h, e)| (h, e * k)).collect();
        let a = fracspline_core::convergence_order(&pairs).unwrap();
        let b = fracspline_core::convergence_order(&scaled).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }
}
