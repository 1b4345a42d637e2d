use argmax_prior::objectives::{trig1d, trig1d_derivative, Objective, TRIG1D_ARGMAX, TRIG1D_MAX};
use argmax_prior::rng::seeded;
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn exact_values() {
    let t = Objective::trig1d(0.0).unwrap();
    assert!((t.mean_value(&[0.0]).unwrap() + 1.0).abs() < 1e-15);
    let r = Objective::noisy_ripples(vec![0.0; 4], 0.1).unwrap();
    assert_eq!(r.mean_value(&[0.0; 4]).unwrap(), 1.0);
    assert!((r.mean_value(&[3.0, 0.0, 0.0, 0.0]).unwrap() - 0.991).abs() < 1e-12);
}

#[test]
fn noiseless_observation_is_the_mean() {
    let t = Objective::trig1d(0.0).unwrap();
    let mut rng = seeded(0);
    for x in [-1.0, 0.3, 2.0] {
        assert_eq!(t.observe(&[x], &mut rng).unwrap(), trig1d(x));
    }
}

#[test]
fn noise_moments() {
    for (obj, x) in [
        (Objective::trig1d(1.0).unwrap(), vec![0.4]),
        (Objective::trig1d(0.3).unwrap(), vec![2.0]),
        (Objective::noisy_ripples(vec![1.0; 3], 0.1).unwrap(), vec![0.0, 2.0, 1.0]),
    ] {
        let n = 100_000;
        let mut rng = seeded(31);
        let ys: Vec<f64> = (0..n).map(|_| obj.observe(&x, &mut rng).unwrap()).collect();
        let mean = ys.iter().sum::<f64>() / n as f64;
        let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let nv = obj.noise_variance();
        assert!((mean - obj.mean_value(&x).unwrap()).abs() < 4.0 * (nv / n as f64).sqrt());
        assert!((var / nv - 1.0).abs() < 0.05);
    }
}

#[test]
fn observations_are_seeded() {
    let obj = Objective::noisy_ripples(vec![0.0; 5], 0.1).unwrap();
    let draw = |s| {
        let mut rng = seeded(s);
        (0..10).map(|_| obj.observe(&[1.0; 5], &mut rng).unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(draw(4), draw(4));
    assert_ne!(draw(4), draw(5));
}

#[test]
fn ripples_optimum_and_translation() {
    let o = Objective::noisy_ripples(vec![0.0; 50], 0.1).unwrap();
    assert_eq!(o.optimum(), (vec![0.0; 50], 1.0));
    let mu = vec![20.0; 50];
    let shifted = Objective::noisy_ripples(mu.clone(), 0.1).unwrap();
    assert_eq!(shifted.optimum(), (mu.clone(), 1.0));

    let mut rng = seeded(6);
    for _ in 0..100 {
        let x: Vec<f64> = (0..50).map(|_| rng.random_range(-10.0..10.0)).collect();
        let xs: Vec<f64> = x.iter().map(|v| v + 20.0).collect();
        assert!((o.mean_value(&x).unwrap() - shifted.mean_value(&xs).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn ripples_is_radially_symmetric() {
    let d = 8;
    let mu: Vec<f64> = (0..d).map(|i| i as f64 - 3.0).collect();
    let obj = Objective::noisy_ripples(mu.clone(), 0.1).unwrap();
    let mut rng = seeded(7);
    for _ in 0..200 {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-20.0..20.0)).collect();
        // Product of two Householder reflections: a rotation about mu.
        let mut v: Vec<f64> = x.iter().zip(&mu).map(|(a, m)| a - m).collect();
        for _ in 0..2 {
            let u: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let uu: f64 = u.iter().map(|a| a * a).sum();
            let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v = v.iter().zip(&u).map(|(b, a)| b - 2.0 * uv / uu * a).collect();
        }
        let rotated: Vec<f64> = v.iter().zip(&mu).map(|(a, m)| a + m).collect();
        assert!((obj.mean_value(&x).unwrap() - obj.mean_value(&rotated).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn ripples_global_bound() {
    let obj = Objective::noisy_ripples(vec![0.0; 3], 0.1).unwrap();
    let mut rng = seeded(8);
    for scale in [1e-6, 1e-2, 1.0, 30.0, 1e4] {
        for _ in 0..1000 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-scale..scale)).collect();
            assert!(obj.mean_value(&x).unwrap() < 1.0);
        }
    }
}

#[test]
fn trig1d_optimum_reproduces_from_scratch() {
    let n = 1_000_000;
    let (lo, hi) = (-1.0, 3.0);
    let h = (hi - lo) / (n - 1) as f64;
    let best = (0..n)
        .map(|i| lo + h * i as f64)
        .fold((0.0, f64::NEG_INFINITY), |b, x| if trig1d(x) > b.1 { (x, trig1d(x)) } else { b });
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    assert!(trig1d_derivative(a) > 0.0 && trig1d_derivative(b) < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if trig1d_derivative(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let x = 0.5 * (a + b);
    assert!((x - TRIG1D_ARGMAX).abs() < 1e-12);
    assert!((trig1d(x) - TRIG1D_MAX).abs() < 1e-15);
    assert_eq!(Objective::trig1d(1.0).unwrap().optimum(), (vec![TRIG1D_ARGMAX], TRIG1D_MAX));
}

#[test]
fn config_json_shapes() {
    let o: Objective =
        serde_json::from_str(r#"{"family":"noisy_ripples","dimension":3,"mu":[0,0,0],"noise_variance":0.1}"#).unwrap();
    assert_eq!(o.dim(), 3);
    assert!(serde_json::from_str::<Objective>(r#"{"family":"noisy_ripples","dimension":2,"mu":[0,0,0],"noise_variance":0.1}"#).is_err());
    assert!(serde_json::from_str::<Objective>(r#"{"family":"trig1d","noise_variance":-1}"#).is_err());
    assert!(Objective::trig1d(1.0).unwrap().mean_value(&[0.0, 1.0]).is_err());
}
