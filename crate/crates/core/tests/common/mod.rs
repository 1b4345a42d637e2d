//! Brute-force reference implementations used by the integration tests. They
//! recompute everything from the raw observations and share no code with the
//! library beyond plain data.

#![allow(dead_code)]

use rand::Rng;

pub fn gauss(a: &[f64], b: &[f64], width: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum();
    (-d2 / (2.0 * width * width)).exp()
}

/// Unnormalized log posterior over the maximizer, evaluated in one pass
/// over the data with every Gramian entry recomputed.
#[allow(clippy::too_many_arguments)]
pub fn log_density(
    xs: &[Vec<f64>],
    ys: &[f64],
    x_star: &[f64],
    rho: f64,
    xi: f64,
    width: f64,
    k0: f64,
    y0: f64,
) -> f64 {
    let t = xs.len();
    let alpha = if t == 0 {
        rho * xi
    } else {
        let mut diag = 0.0;
        let mut total = 0.0;
        for i in 0..t {
            diag += gauss(&xs[i], &xs[i], width);
            for j in 0..t {
                total += gauss(&xs[i], &xs[j], width);
            }
        }
        rho * (xi + t as f64 * diag / total)
    };
    let mut num = k0 * y0;
    let mut den = k0;
    for (x, y) in xs.iter().zip(ys) {
        let k = gauss(x, x_star, width);
        num += k * y;
        den += k;
    }
    alpha * num / den
}

pub fn effective_locations(xs: &[Vec<f64>], width: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut diag = 0.0;
    let mut total = 0.0;
    for a in xs {
        diag += gauss(a, a, width);
        for b in xs {
            total += gauss(a, b, width);
        }
    }
    xs.len() as f64 * diag / total
}

/// Inverse of a small dense matrix by Gauss-Jordan elimination with partial pivoting.
pub fn invert(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r][j] -= f * a[col][j];
                        inv[r][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    inv
}

/// GP posterior mean and variance with unit signal variance, via an explicit inverse.
pub fn gp_predict(xs: &[Vec<f64>], ys: &[f64], x: &[f64], noise_std: f64, ell: f64) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 1.0);
    }
    let k: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| gauss(&xs[i], &xs[j], ell) + if i == j { noise_std * noise_std } else { 0.0 })
                .collect()
        })
        .collect();
    let inv = invert(k);
    let ks: Vec<f64> = xs.iter().map(|p| gauss(p, x, ell)).collect();
    let mut mean = 0.0;
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            mean += ks[i] * inv[i][j] * ys[j];
            quad += ks[i] * inv[i][j] * ks[j];
        }
    }
    (mean, 1.0 - quad)
}

pub fn beta(card: usize, t: usize, delta: f64) -> f64 {
    let t = t as f64;
    2.0 * (card as f64 * t * t * std::f64::consts::PI.powi(2) / (6.0 * delta)).ln()
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, d: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.random_range(lo..hi)).collect()).collect()
}

/// Total-variation distance between two discrete distributions.
pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

pub fn strict_local_maxima(v: &[f64]) -> usize {
    (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1]).count()
}

pub fn normalize_exp(log_w: &[f64]) -> Vec<f64> {
    let m = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

/// Mean and population standard deviation, two-pass.
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (m, (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}
