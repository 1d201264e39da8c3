//! Small numerical building blocks shared by the kernels and oracles.

use std::f64::consts::PI;

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fully normalized associated Legendre values `Pbar[l][m]` for 0 <= m <= l <= lmax,
/// such that `Pbar_lm(cos t) * cos(m p)` (times sqrt 2 for m > 0) are orthonormal
/// real spherical harmonics on the unit sphere.
pub fn normalized_legendre_table(lmax: usize, cos_t: f64, out: &mut Vec<f64>) {
    let size = (lmax + 1) * (lmax + 2) / 2;
    out.clear();
    out.resize(size, 0.0);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    out[0] = (1.0 / (4.0 * PI)).sqrt();
    for m in 1..=lmax {
        let mf = m as f64;
        out[idx(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t * out[idx(m - 1, m - 1)];
    }
    for m in 0..lmax {
        out[idx(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * cos_t * out[idx(m, m)];
    }
    for m in 0..=lmax {
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                .sqrt();
            out[idx(l, m)] = a * (cos_t * out[idx(l - 1, m)] - b * out[idx(l - 2, m)]);
        }
    }
}

/// Number of real spherical harmonics of degree <= lmax.
pub fn harmonic_count(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Real orthonormal spherical harmonics up to degree `lmax`, ordered by degree,
/// then (m = 0, cos 1, sin 1, cos 2, sin 2, ...). Each degree-l value is multiplied
/// by `radial[l]`.
pub fn real_harmonics(
    lmax: usize,
    dir: [f64; 3],
    radial: &[f64],
    scratch: &mut Vec<f64>,
    out: &mut [f64],
) {
    let cos_t = dir[2].clamp(-1.0, 1.0);
    let phi = dir[1].atan2(dir[0]);
    normalized_legendre_table(lmax, cos_t, scratch);
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut k = 0;
    for l in 0..=lmax {
        let base = l * (l + 1) / 2;
        out[k] = radial[l] * scratch[base];
        k += 1;
        for m in 1..=l {
            let p = sqrt2 * scratch[base + m] * radial[l];
            let (s, c) = (m as f64 * phi).sin_cos();
            out[k] = p * c;
            out[k + 1] = p * s;
            k += 2;
        }
    }
}

/// Trigonometric interpolant through equispaced periodic samples (even count),
/// evaluated at parameter `t`.
pub fn periodic_interpolate(samples: &[f64], t: f64) -> f64 {
    let m = samples.len();
    let h = 2.0 * PI / m as f64;
    let mut acc = 0.0;
    for (j, &s) in samples.iter().enumerate() {
        let d = t - j as f64 * h;
        let half = 0.5 * d;
        let sh = half.sin();
        if sh.abs() < 1e-14 {
            return s;
        }
        acc += s * (0.5 * m as f64 * d).sin() * half.cos() / sh;
    }
    acc / m as f64
}

/// LU-factored dense real system.
pub struct DenseLu {
    lu: faer::linalg::solvers::PartialPivLu<f64>,
    matrix: Mat<f64>,
}

impl DenseLu {
    pub fn new(matrix: Mat<f64>) -> Self {
        let lu = matrix.partial_piv_lu();
        Self { lu, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Solves `A x = b` and checks the relative residual against `tol`.
    pub fn solve_checked(&self, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
        let n = self.matrix.nrows();
        let b = Mat::from_fn(n, 1, |i, _| rhs[i]);
        let x = self.lu.solve(&b);
        let r = &self.matrix * &x - &b;
        let rnorm = r.norm_max();
        let scale = b.norm_max().max(1e-300);
        if !(rnorm / scale <= tol) {
            return Err(Error::IllConditioned(rnorm / scale));
        }
        Ok((0..n).map(|i| x[(i, 0)]).collect())
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.matrix.nrows();
        let b = Mat::from_fn(n, 1, |i, _| rhs[i]);
        let x = self.lu.solve(&b);
        (0..n).map(|i| x[(i, 0)]).collect()
    }
}

/// Solves a 2x2 system by Cramer's rule with partial scaling.
pub fn solve2(a: [[f64; 2]; 2], b: [f64; 2]) -> [f64; 2] {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [
        (b[0] * a[1][1] - a[0][1] * b[1]) / det,
        (a[0][0] * b[1] - b[0] * a[1][0]) / det,
    ]
}

/// Ordinary least squares of `ys` on `xs`: (slope, intercept, correlation).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let corr = if syy > 0.0 {
        sxy / (sxx * syy).sqrt()
    } else {
        1.0
    };
    (slope, my - slope * mx, corr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // x^12 has integral 2/13
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((i - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn harmonics_are_orthonormal() {
        let lmax = 6;
        let nt = 12;
        let np = 2 * nt;
        let (ct, wt) = gauss_legendre(nt);
        let nb = harmonic_count(lmax);
        let radial = vec![1.0; lmax + 1];
        let mut gram = vec![0.0; nb * nb];
        let mut scratch = Vec::new();
        let mut y = vec![0.0; nb];
        for (c, w) in ct.iter().zip(&wt) {
            let s = (1.0 - c * c).sqrt();
            for k in 0..np {
                let p = 2.0 * PI * k as f64 / np as f64;
                real_harmonics(
                    lmax,
                    [s * p.cos(), s * p.sin(), *c],
                    &radial,
                    &mut scratch,
                    &mut y,
                );
                let wq = w * 2.0 * PI / np as f64;
                for a in 0..nb {
                    for b in 0..nb {
                        gram[a * nb + b] += wq * y[a] * y[b];
                    }
                }
            }
        }
        for a in 0..nb {
            for b in 0..nb {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (gram[a * nb + b] - want).abs() < 1e-12,
                    "{a} {b} {}",
                    gram[a * nb + b]
                );
            }
        }
    }

    #[test]
    fn periodic_interpolation_reproduces_band_limited_signal() {
        let m = 32;
        let f = |t: f64| 1.0 + (3.0 * t).cos() - 0.5 * (7.0 * t).sin();
        let s: Vec<f64> = (0..m).map(|j| f(2.0 * PI * j as f64 / m as f64)).collect();
        for t in [0.1, 1.3, 4.0, 6.2] {
            assert!((periodic_interpolate(&s, t) - f(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let (s, i, c) = linear_fit(&xs, &ys);
        assert!((s - 2.5).abs() < 1e-14 && (i + 1.0).abs() < 1e-14 && (c - 1.0).abs() < 1e-14);
    }
}
