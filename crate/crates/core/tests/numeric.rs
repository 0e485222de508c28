mod common;

use common::*;
use lctkit::error::Error;
use lctkit::ideal::MonomialIdeal;
use lctkit::multiplicity::sweep_ideal;
use lctkit::numeric::*;
use lctkit::polytope::{stretch_ideal, NewtonPolytope, WeightVector};
use lctkit::rational::{self, int, rat};

fn cfg(samples: usize) -> McConfig {
    McConfig {
        samples,
        ..McConfig::default()
    }
}

fn toric(j: &MonomialIdeal) -> PshModel {
    PshModel::toric(j.clone(), int(1)).unwrap()
}

#[test]
fn same_seed_is_bit_identical_and_seeds_differ() {
    let model = toric(&ideal(2, &[&[2, 0], &[0, 3]]));
    let a = mc_integral(&model, 0.6, None, &cfg(20_000)).unwrap();
    let b = mc_integral(&model, 0.6, None, &cfg(20_000)).unwrap();
    assert_eq!(a, b);
    let other = McConfig {
        seed: 7,
        ..cfg(20_000)
    };
    let c = mc_integral(&model, 0.6, None, &other).unwrap();
    assert_ne!(a.value, c.value);
    assert!((a.value - c.value).abs() < 4.0 * (a.std_error + c.std_error));
}

#[test]
fn thread_count_does_not_change_thresholds() {
    let model = toric(&ideal(2, &[&[2, 0], &[0, 3]]));
    let c = cfg(20_000);
    let many = estimate_threshold(&model, None, &c, 5).unwrap();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let iv = pool.install(|| estimate_threshold(&model, None, &c, 5).unwrap());
        assert_eq!(iv, many);
    }
}

#[test]
fn monomial_models_bracket_the_exact_threshold() {
    let config = McConfig::default();
    for (name, j) in shipped_ideals() {
        let exact = rational::to_f64(&NewtonPolytope::new(&j).unwrap().lct());
        let iv = estimate_threshold(&toric(&j), None, &config, DEFAULT_BISECTION_STEPS).unwrap();
        assert!(iv.bracketed, "{name}");
        assert!(iv.contains(exact), "{name}: [{}, {}] misses {exact}", iv.c_lo, iv.c_hi);
        assert!(iv.width() <= 4.0 * j.dim() as f64 / 128.0 + 1e-12, "{name}");
    }
}

#[test]
fn scale_divides_the_threshold() {
    let j = ideal(2, &[&[2, 0], &[0, 3]]);
    let model = PshModel::toric(j, rat(5, 3)).unwrap();
    // (5/6) / (5/3) = 1/2, a dyadic point of the bisection
    let iv = estimate_threshold(&model, None, &McConfig::default(), 7).unwrap();
    assert!(iv.contains(0.5), "[{}, {}]", iv.c_lo, iv.c_hi);
}

#[test]
fn weights_act_like_the_stretched_ideal() {
    let j = ideal(2, &[&[2, 0], &[0, 3]]);
    let w = WeightVector::from_stretch(&[2, 1]).unwrap();
    assert_eq!(w, WeightVector::new(vec![rat(1, 2), int(0)]).unwrap());
    let stretched = stretch_ideal(&j, &[2, 1]).unwrap();
    let weighted = toric(&j);
    let plain = toric(&stretched);
    let config = McConfig::default();
    for c in [0.3, 0.45, 0.5, 0.5625, 0.625, 0.7, 0.9] {
        let a = mc_integral(&weighted, c, Some(&w), &config).unwrap();
        let b = mc_integral(&plain, c, None, &config).unwrap();
        assert_eq!(a.diverged, b.diverged, "c = {c}");
        assert_eq!(a.diverged, c >= 7.0 / 12.0, "c = {c}");
    }
    let iv = estimate_threshold(&weighted, Some(&w), &config, 7).unwrap();
    assert!(iv.contains(7.0 / 12.0));
}

#[test]
fn radial_shells_follow_the_geometric_law() {
    let config = cfg(5_000);
    for n in 1..=3usize {
        for lambda in [rat(1, 2), int(1), rat(3, 2), int(2)] {
            let model = PshModel::radial(n, lambda.clone()).unwrap();
            let l = rational::to_f64(&lambda);
            for c in [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
                let est = mc_integral(&model, c, None, &config).unwrap();
                let expected = 2.0 * (c * l - n as f64) * (1.0 / config.ratio).ln();
                for p in est.log_shell_contributions.windows(2) {
                    let step = p[1] - p[0];
                    assert!((step - expected).abs() < 1e-9, "n {n} lambda {lambda} c {c}");
                }
                assert_eq!(est.diverged, c * l >= n as f64, "n {n} lambda {lambda} c {c}");
                if !est.diverged {
                    let exact = radial_integral(n, c * l, config.radius);
                    assert!((est.value - exact).abs() < 4.0 * est.std_error + 1e-9 * exact);
                }
            }
            let iv = estimate_threshold(&model, None, &config, 8).unwrap();
            let t = n as f64 / l;
            if t <= iv.cap {
                assert!(iv.contains(t), "n {n} lambda {lambda}");
            } else {
                assert!(!iv.bracketed);
            }
        }
    }
}

#[test]
fn detector_separates_near_borderline_radial() {
    // 2 c lambda = 2n - 0.2 against 2n
    let model = PshModel::radial(2, int(1)).unwrap();
    assert!(!mc_integral(&model, 1.9, None, &cfg(2_000)).unwrap().diverged);
    assert!(mc_integral(&model, 2.0, None, &cfg(2_000)).unwrap().diverged);
}

#[test]
fn kiselman_matches_closed_form() {
    let config = McConfig::default();
    for eps in [0.5, 0.1, 0.01] {
        let est = mc_integral(&PshModel::kiselman(2, eps).unwrap(), 1.0, None, &config).unwrap();
        let exact = kiselman_exact_2d(eps, config.radius);
        assert!(!est.diverged);
        assert!(
            (est.value - exact).abs() < 4.0 * est.std_error,
            "eps {eps}: {} ± {} vs {exact}",
            est.value,
            est.std_error
        );
    }
    let table = kiselman_experiment(2, &[0.01, 0.1], &config).unwrap();
    assert!(table.rows.iter().all(|r| r.mass == 0));
    assert_eq!(table.rows[0].eps, 0.1);
    // large eps: bounded integrand, integral at most vol(B) / eps^2
    let wide = kiselman_experiment(3, &[1.0], &config).unwrap();
    assert!(wide.rows[0].integral <= ball_volume(3, config.radius));
    assert!(kiselman_experiment(1, &[0.1], &config).is_err());
}

#[test]
fn sharpness_matches_closed_form() {
    let config = McConfig::default();
    let table = sharpness_experiment(2, &[rat(1, 5), rat(1, 10), rat(1, 20), rat(19, 10)], &config).unwrap();
    assert!(table.masses_below_bound && table.integrals_increasing);
    assert_eq!(table.rows[0].eps, rat(19, 10));
    assert_eq!(table.rows[0].mass, rat(1, 100));
    for r in &table.rows {
        assert!((r.integral - r.exact).abs() < 4.0 * r.std_error, "eps {}", r.eps);
    }
    assert!(sharpness_experiment(2, &[int(2)], &config).is_err());
}

#[test]
fn rejection_volume_agrees_on_random_ideals() {
    let config = cfg(200_000);
    for i in 0..20 {
        let j = sweep_ideal(11, i, 3);
        let p = NewtonPolytope::new(&j).unwrap();
        let exact = rational::to_f64(&p.complement_volume().unwrap());
        let est = mc_complement_volume(&p, &config).unwrap();
        assert!(
            (est.value - exact).abs() <= 3.0 * est.std_error,
            "{j}: {} ± {} vs {exact}",
            est.value,
            est.std_error
        );
    }
}

#[test]
fn holder_reports() {
    let config = McConfig::default();
    let m = MonomialIdeal::maximal(2);
    let j = ideal(2, &[&[2, 0], &[0, 3]]);
    let r = holder_experiment(&m, &j, &config, 7).unwrap();
    assert_eq!((r.lct_product.clone(), r.bound.clone()), (rat(5, 8), rat(10, 17)));
    assert!(r.holds && !r.tight && r.mc_contains_exact);
    let bad = holder_experiment(&m, &MonomialIdeal::maximal(3), &config, 7);
    assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
}

#[test]
fn invalid_inputs() {
    let model = toric(&MonomialIdeal::maximal(2));
    let w = WeightVector::new(vec![rat(1, 2)]).unwrap();
    assert!(matches!(
        mc_integral(&model, 1.0, Some(&w), &McConfig::default()),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(mc_integral(&model, -1.0, None, &McConfig::default()).is_err());
    let bad = McConfig {
        shells: 2,
        ..McConfig::default()
    };
    assert!(mc_integral(&model, 1.0, None, &bad).is_err());
}
