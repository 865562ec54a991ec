//! Classical special-function oracles that share no code with the crate.

#![allow(dead_code)]

pub mod goldens;

use std::f64::consts::PI;

use nalgebra::DMatrix;

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = 0.258_819_403_792_806_8;

/// Maclaurin series `Ai = c1 f - c2 g`; returns `(Ai, Ai')`.
pub fn series_ai(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    let (mut df, mut dg) = (0.0, 1.0);
    let (mut tdf, mut tdg) = (1.0, 1.0);
    for k in 1..200 {
        let k = k as f64;
        tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        // f' and g' series: x^{3k-1}/(...) and x^{3k}/(...)
        tdf *= if k == 1.0 {
            x * x / 2.0
        } else {
            x3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0))
        };
        tdg *= x3 / ((3.0 * k - 2.0) * (3.0 * k));
        f += tf;
        g += tg;
        df += tdf;
        dg += tdg;
        if tf.abs() + tg.abs() + tdf.abs() + tdg.abs() < 1e-30 {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * df - AIP0 * dg)
}

/// `K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt`, trapezoid rule.
fn bessel_k(nu: f64, z: f64) -> f64 {
    let h = 0.01;
    let mut s = 0.5 * (-z).exp();
    let mut t: f64 = h;
    loop {
        let v = (-z * t.cosh()).exp() * (nu * t).cosh();
        s += v;
        if v < 1e-300 * s.max(1e-300) || t > 60.0 {
            break;
        }
        t += h;
    }
    s * h
}

/// `(Ai, Ai')` for `x > 0` from the modified Bessel forms.
pub fn bessel_ai(x: f64) -> (f64, f64) {
    let z = 2.0 / 3.0 * x.powf(1.5);
    let v = (x / 3.0).sqrt() / PI * bessel_k(1.0 / 3.0, z);
    let d = -x / (3.0f64.sqrt() * PI) * bessel_k(2.0 / 3.0, z);
    (v, d)
}

/// Classical `(Ai, Ai')`: series near the origin, Bessel forms beyond.
pub fn classical_ai(x: f64) -> (f64, f64) {
    if x > 2.0 {
        bessel_ai(x)
    } else {
        series_ai(x)
    }
}

/// Gauss-Legendre nodes and weights on `[a, b]` by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; m];
    let mut ws = vec![0.0; m];
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { z } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (z * pm - pm1) / (z * z - 1.0);
            let dz = pm / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = 0.5 * (a + b) + 0.5 * (b - a) * z;
        ws[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
    (xs, ws)
}

/// GUE Tracy-Widom `F_2(s) = det(I - K_Ai)` on `L^2(s, inf)` from the
/// Christoffel-Darboux form of the Airy kernel.
pub fn tracy_widom(s: f64, m: usize) -> f64 {
    let (xs, ws) = gauss_legendre(m, s, s + 14.0);
    let vals: Vec<(f64, f64)> = xs.iter().map(|&x| classical_ai(x)).collect();
    let k = DMatrix::from_fn(m, m, |i, j| {
        let (ai, aip) = vals[i];
        let (aj, ajp) = vals[j];
        let kij = if i == j {
            aip * aip - xs[i] * ai * ai
        } else {
            (ai * ajp - aip * aj) / (xs[i] - xs[j])
        };
        ws[i].sqrt() * kij * ws[j].sqrt()
    });
    (DMatrix::identity(m, m) - k).determinant()
}

/// Hastings-McLeod `q(x)` by backward RK4 on `q'' = x q + 2 q^3` from
/// `q ~ Ai` at `x = 8`.
pub fn hastings_mcleod(x_end: f64) -> f64 {
    let x0 = 8.0;
    let (mut q, mut p) = classical_ai(x0);
    let steps = ((x0 - x_end) / 1e-3).round() as usize;
    let h = -(x0 - x_end) / steps as f64;
    let f = |x: f64, q: f64, p: f64| (p, x * q + 2.0 * q * q * q);
    let mut x = x0;
    for _ in 0..steps {
        let k1 = f(x, q, p);
        let k2 = f(x + 0.5 * h, q + 0.5 * h * k1.0, p + 0.5 * h * k1.1);
        let k3 = f(x + 0.5 * h, q + 0.5 * h * k2.0, p + 0.5 * h * k2.1);
        let k4 = f(x + h, q + h * k3.0, p + h * k3.1);
        q += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        x += h;
    }
    q
}
