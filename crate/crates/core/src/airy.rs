//! Generalized Airy functions
//! `Ai_{2n+1}(x) = (1/2pi) int exp(i mu^{2n+1}/(2n+1) + i x mu) dmu`
//! along a two-ray contour in the upper half plane.
//!
//! The contour runs in from infinity along the ray at angle
//! `pi/2 + pi n/(2n+1)`, through the vertex `i h`, and out along the ray at
//! `pi/2 - pi n/(2n+1)`. Both rays sit in the middle of sectors where the
//! cubic-and-higher phase decays like `exp(-rho^{2n+1}/(2n+1))`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AiryError {
    #[error("contour quadrature did not converge for n = {n} within {max_panels} panels")]
    NonConvergence { n: usize, max_panels: usize },
    #[error("index n must be at least 1")]
    InvalidIndex,
}

/// Panel rule and truncation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per panel.
    pub nodes_per_panel: usize,
    /// A ray is cut once the integrand falls below this fraction of its peak.
    pub truncation: f64,
    /// Panel budget per ray.
    pub max_panels: usize,
    /// Phase advance per panel, in radians.
    pub phase_per_panel: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_panel: 20,
            truncation: 1e-16,
            max_panels: 20_000,
            phase_per_panel: 6.0,
        }
    }
}

impl QuadratureSpec {
    /// Same truncation, twice the nodes per panel.
    pub fn doubled(&self) -> Self {
        Self {
            nodes_per_panel: 2 * self.nodes_per_panel,
            ..self.clone()
        }
    }
}

/// Geometry of the polyline contour.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub n: usize,
    /// Height of the vertex `i h`.
    pub h: f64,
    /// Angle of the incoming (left) ray.
    pub phi_plus: f64,
    /// Angle of the outgoing (right) ray.
    pub phi_minus: f64,
    /// Truncation lengths of the left and right rays.
    pub radius: [f64; 2],
}

impl Contour {
    pub fn angles(n: usize) -> (f64, f64) {
        let d = PI * n as f64 / (2 * n + 1) as f64;
        (PI / 2.0 + d, PI / 2.0 - d)
    }
}

/// Log of the integrand magnitude, including a `|mu|^k` factor.
fn log_mag(n: usize, mu: Complex64, x: f64, k: usize) -> f64 {
    let big_n = (2 * n + 1) as f64;
    let phase = Complex64::i() * mu.powu(2 * n as u32 + 1) / big_n;
    let poly = if k == 0 {
        0.0
    } else {
        k as f64 * mu.norm().max(1e-300).ln()
    };
    phase.re - x * mu.im + poly
}

/// Worst case of `log_mag` over `x` in `[x_lo, x_hi]` (it is linear in `x`).
fn log_mag_range(n: usize, mu: Complex64, xs: (f64, f64), k: usize) -> f64 {
    log_mag(n, mu, xs.0, k).max(log_mag(n, mu, xs.1, k))
}

/// Largest integrand log-magnitude along the contour with vertex `i h`,
/// sampled coarsely; used only to choose `h`.
fn contour_peak(n: usize, h: f64, xs: (f64, f64), k: usize) -> f64 {
    let (pp, pm) = Contour::angles(n);
    let mut peak = f64::NEG_INFINITY;
    for phi in [pp, pm] {
        let dir = Complex64::from_polar(1.0, phi);
        let mut rho = 0.0;
        let mut prev = f64::INFINITY;
        loop {
            let lm = log_mag_range(n, Complex64::new(0.0, h) + dir * rho, xs, k);
            peak = peak.max(lm);
            if lm < peak - 40.0 && lm < prev || rho > 200.0 {
                break;
            }
            prev = lm;
            rho += 0.05;
        }
    }
    peak
}

/// Vertex height minimizing the integrand peak over the `x` range, so that
/// cancellation loses as little precision as possible.
fn choose_height(n: usize, xs: (f64, f64), k: usize) -> f64 {
    let xmax = xs.0.abs().max(xs.1.abs()).max(1.0);
    let top = 4.0f64.max(1.5 * xmax.powf(1.0 / (2 * n) as f64));
    let steps = (top / 0.125).ceil() as usize;
    (0..=steps)
        .map(|j| j as f64 * 0.125)
        .map(|h| (h, contour_peak(n, h, xs, k)))
        .fold((0.0, f64::INFINITY), |best, (h, p)| {
            if p < best.1 - 1e-9 {
                (h, p)
            } else {
                best
            }
        })
        .0
}

/// Precomputed nodes `mu_q` and weights `g_q` such that
/// `Ai^{(k)}_{2n+1}(x) ~ Re sum_q g_q (i mu_q)^k exp(i x mu_q)` for `x` in the
/// range the rule was built for.
#[derive(Clone, Debug)]
pub struct ContourRule {
    pub contour: Contour,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    x_range: (f64, f64),
    max_deriv: usize,
}

impl ContourRule {
    /// Builds a rule valid for `x` in `[x_lo, x_hi]` and derivative orders
    /// up to `max_deriv`.
    pub fn new(
        n: usize,
        max_deriv: usize,
        x_lo: f64,
        x_hi: f64,
        spec: &QuadratureSpec,
    ) -> Result<Self, AiryError> {
        if n == 0 {
            return Err(AiryError::InvalidIndex);
        }
        let xs = (x_lo.min(x_hi), x_lo.max(x_hi));
        let h = choose_height(n, xs, max_deriv);
        let (pp, pm) = Contour::angles(n);
        let gl =
            GaussLegendre::new(NonZeroUsize::new(spec.nodes_per_panel.max(1)).expect("nonzero"));
        let ref_rule = gl.as_node_weight_pairs();
        let big_n = (2 * n + 1) as f64;
        let xabs = xs.0.abs().max(xs.1.abs());
        let cut = spec.truncation.ln();
        let vertex = Complex64::new(0.0, h);

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut radius = [0.0; 2];
        let peak0 = log_mag_range(n, vertex, xs, max_deriv);
        for (ray, (phi, sign)) in [(pp, -1.0), (pm, 1.0)].into_iter().enumerate() {
            let dir = Complex64::from_polar(1.0, phi);
            let mut peak = peak0;
            let mut rho = 0.0;
            let mut panels = 0;
            loop {
                if panels == spec.max_panels {
                    return Err(AiryError::NonConvergence {
                        n,
                        max_panels: spec.max_panels,
                    });
                }
                panels += 1;
                let mu0 = vertex + dir * rho;
                let rate = mu0.norm().powi(2 * n as i32) + xabs;
                let width = (spec.phase_per_panel / rate.max(1.0)).min(0.5);
                let (a, b) = (rho, rho + width);
                for &(t, wt) in ref_rule {
                    let r = 0.5 * (a + b) + 0.5 * (b - a) * t;
                    let mu = vertex + dir * r;
                    let jac = dir * (0.5 * (b - a) * wt * sign / (2.0 * PI));
                    let phase = Complex64::i() * mu.powu(2 * n as u32 + 1) / big_n;
                    nodes.push(mu);
                    weights.push(phase.exp() * jac);
                    peak = peak.max(log_mag_range(n, mu, xs, max_deriv));
                }
                let start = log_mag_range(n, mu0, xs, max_deriv);
                let end = log_mag_range(n, vertex + dir * b, xs, max_deriv);
                rho = b;
                if end < peak + cut && end < start {
                    break;
                }
            }
            radius[ray] = rho;
        }
        Ok(Self {
            contour: Contour {
                n,
                h,
                phi_plus: pp,
                phi_minus: pm,
                radius,
            },
            nodes,
            weights,
            x_range: xs,
            max_deriv,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.x_range
    }

    pub fn max_deriv(&self) -> usize {
        self.max_deriv
    }

    /// The raw complex quadrature sum; its imaginary part is a symmetry
    /// residue and should vanish.
    pub fn eval_complex(&self, k: usize, x: f64) -> Complex64 {
        let ix = Complex64::new(0.0, x);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&mu, &g)| g * (Complex64::i() * mu).powu(k as u32) * (ix * mu).exp())
            .sum()
    }

    pub fn eval(&self, k: usize, x: f64) -> f64 {
        self.eval_complex(k, x).re
    }
}

/// `Ai_{2n+1}(x)`.
pub fn ai(n: usize, x: f64) -> Result<f64, AiryError> {
    ai_deriv(n, 0, x)
}

/// `k`-th derivative of `Ai_{2n+1}` at `x`.
pub fn ai_deriv(n: usize, k: usize, x: f64) -> Result<f64, AiryError> {
    ai_deriv_with(n, k, x, &QuadratureSpec::default())
}

pub fn ai_deriv_with(n: usize, k: usize, x: f64, spec: &QuadratureSpec) -> Result<f64, AiryError> {
    Ok(ContourRule::new(n, k, x, x, spec)?.eval(k, x))
}

/// `|Ai^{(2n)}(x) - (-1)^{n+1} x Ai(x)|`.
pub fn ode_residual(n: usize, x: f64) -> Result<f64, AiryError> {
    let rule = ContourRule::new(n, 2 * n, x, x, &QuadratureSpec::default())?;
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok((rule.eval(2 * n, x) - sign * x * rule.eval(0, x)).abs())
}
