//! Fredholm determinants `det(I - A^2)` of matrix Airy Hankel operators on
//! `L^2(R_+) (x) C^r`, with kernel `c_jk Ai_{2n+1}(x + y + s_j + s_k)`.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::airy::{AiryError, ContourRule, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FredholmError {
    #[error("coupling matrix is not square or does not match r = {r}")]
    BadShape { r: usize },
    #[error("coupling matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("coupling spectrum [{min:.6}, {max:.6}] leaves [-1, 1]")]
    SpectrumOutOfRange { min: f64, max: f64 },
    #[error("kernel magnitude {magnitude:.3e} at the truncation point T = {t_max} exceeds the threshold")]
    TruncationInsufficient { magnitude: f64, t_max: f64 },
    #[error("determinant {value:.3e} at t = {t} is not positive")]
    NonPositiveDeterminant { t: f64, value: f64 },
    #[error("second derivative needs at least 5 uniformly spaced points, got {points}")]
    GridTooCoarse { points: usize },
    #[error("coupling file: {0}")]
    Parse(String),
    #[error(transparent)]
    Airy(#[from] AiryError),
}

/// A validated Hermitian coupling `C` with spectrum in `[-1, 1]` and base
/// shifts `sigma`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    c: DMatrix<Complex64>,
    sigma: Vec<f64>,
}

/// JSON entry: a real number or a `[re, im]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// On-disk form: `{"r": 2, "C": [[...], [...]], "sigma": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingFile {
    pub r: usize,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Entry>>,
    #[serde(default)]
    pub sigma: Vec<f64>,
}

const HERMITIAN_TOL: f64 = 1e-12;
const SPECTRUM_TOL: f64 = 1e-12;

/// Checks that `c` is Hermitian with eigenvalues in `[-1, 1]`.
pub fn validate_coupling(
    c: DMatrix<Complex64>,
    sigma: Vec<f64>,
) -> Result<CouplingMatrix, FredholmError> {
    let r = sigma.len();
    if c.nrows() != r || c.ncols() != r || r == 0 {
        return Err(FredholmError::BadShape { r });
    }
    let scale = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = (&c - c.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if defect > HERMITIAN_TOL * scale {
        return Err(FredholmError::NotHermitian { defect });
    }
    let hermitian = (&c + c.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hermitian.symmetric_eigenvalues();
    let (min, max) = eig
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if min < -1.0 - SPECTRUM_TOL || max > 1.0 + SPECTRUM_TOL {
        return Err(FredholmError::SpectrumOutOfRange { min, max });
    }
    Ok(CouplingMatrix { c, sigma })
}

impl CouplingMatrix {
    /// Real symmetric coupling from row-major entries.
    pub fn real(r: usize, entries: &[f64], sigma: &[f64]) -> Result<Self, FredholmError> {
        if entries.len() != r * r {
            return Err(FredholmError::BadShape { r });
        }
        let c = DMatrix::from_row_iterator(r, r, entries.iter().map(|&x| Complex64::new(x, 0.0)));
        validate_coupling(c, sigma.to_vec())
    }

    /// `r = 1`, `C = [[c]]`, `sigma = 0`.
    pub fn scalar(c: f64) -> Result<Self, FredholmError> {
        Self::real(1, &[c], &[0.0])
    }

    pub fn from_file(f: &CouplingFile) -> Result<Self, FredholmError> {
        let r = f.r;
        if f.c.len() != r || f.c.iter().any(|row| row.len() != r) {
            return Err(FredholmError::BadShape { r });
        }
        let sigma = if f.sigma.is_empty() {
            vec![0.0; r]
        } else {
            f.sigma.clone()
        };
        let c = DMatrix::from_fn(r, r, |i, j| match f.c[i][j] {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        });
        validate_coupling(c, sigma)
    }

    pub fn from_json_str(s: &str) -> Result<Self, FredholmError> {
        let f: CouplingFile =
            serde_json::from_str(s).map_err(|e| FredholmError::Parse(e.to_string()))?;
        Self::from_file(&f)
    }

    pub fn to_file(&self) -> CouplingFile {
        let r = self.dim();
        CouplingFile {
            r,
            c: (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            let z = self.c[(i, j)];
                            if z.im == 0.0 {
                                Entry::Real(z.re)
                            } else {
                                Entry::Complex([z.re, z.im])
                            }
                        })
                        .collect()
                })
                .collect(),
            sigma: self.sigma.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn is_real(&self) -> bool {
        self.c.iter().all(|z| z.im == 0.0)
    }
}

/// Discretization parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FredholmSpec {
    /// Truncation point of `R_+`; `None` picks a default by `n`.
    pub t_max: Option<f64>,
    /// Gauss-Legendre nodes on `[0, T]`.
    pub m: usize,
    /// Also compute with `2m` nodes and report the difference.
    pub estimate_error: bool,
    /// Largest tolerated `|c_jk Ai(T + s_j + s_k + u)|`, `u in [0, 2]`.
    pub truncation_threshold: f64,
    pub quadrature: QuadratureSpec,
}

impl Default for FredholmSpec {
    fn default() -> Self {
        Self {
            t_max: None,
            m: 100,
            estimate_error: false,
            truncation_threshold: 1e-7,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Default truncation point: `Ai_{2n+1}` decays more slowly and oscillates
/// for larger `n`.
pub fn default_t_max(n: usize) -> f64 {
    if n == 1 {
        14.0
    } else {
        16.0
    }
}

impl FredholmSpec {
    pub fn t_max_for(&self, n: usize) -> f64 {
        self.t_max.unwrap_or_else(|| default_t_max(n))
    }
}

/// Quadrature grid on `[0, T]` and the symmetrized block matrix `H`.
#[derive(Clone, Debug)]
pub struct HankelDiscretization {
    pub t_max: f64,
    pub m: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `H[(j,i),(k,l)] = sqrt(w_i) c_jk Ai(x_i + x_l + s_j + s_k) sqrt(w_l)`,
    /// row index `j m + i`.
    pub h: DMatrix<Complex64>,
}

fn gauss_legendre(m: usize, t_max: f64) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(NonZeroUsize::new(m.max(1)).expect("nonzero"));
    gl.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * t_max * (x + 1.0), 0.5 * t_max * w))
        .unzip()
}

/// Builds `H` for shifts `s_j = sigma_j + t`.
pub fn discretize(
    n: usize,
    coupling: &CouplingMatrix,
    t: f64,
    m: usize,
    spec: &FredholmSpec,
) -> Result<HankelDiscretization, FredholmError> {
    let r = coupling.dim();
    let t_max = spec.t_max_for(n);
    let (nodes, weights) = gauss_legendre(m, t_max);
    let mut h = DMatrix::<Complex64>::zeros(r * m, r * m);
    if coupling.is_zero() {
        return Ok(HankelDiscretization {
            t_max,
            m,
            nodes,
            weights,
            h,
        });
    }
    let s: Vec<f64> = coupling.sigma.iter().map(|x| x + t).collect();
    let shifts: Vec<f64> = (0..r)
        .flat_map(|j| (0..r).map(move |k| (j, k)))
        .map(|(j, k)| s[j] + s[k])
        .collect();
    let a_lo = shifts.iter().copied().fold(f64::INFINITY, f64::min);
    let a_hi = shifts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let rule = ContourRule::new(n, 0, a_lo, 2.0 * t_max + a_hi + 2.0, &spec.quadrature)?;

    // Tail check: the discarded part of the operator is driven by the kernel
    // beyond T.
    let mut tail: f64 = 0.0;
    for j in 0..r {
        for k in 0..r {
            let c = coupling.c[(j, k)].norm();
            if c == 0.0 {
                continue;
            }
            for u in 0..=20 {
                let x = t_max + s[j] + s[k] + 0.1 * u as f64;
                tail = tail.max(c * rule.eval(0, x).abs());
            }
        }
    }
    if tail > spec.truncation_threshold {
        return Err(FredholmError::TruncationInsufficient {
            magnitude: tail,
            t_max,
        });
    }

    // Ai(x_i + x_l + a) = sum_q E_iq (g_q e^{i a mu_q}) E_lq
    let q = rule.len();
    let e = DMatrix::from_fn(m, q, |i, p| {
        (Complex64::i() * nodes[i] * rule.nodes[p]).exp()
    });
    let sqrt_w: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    for j in 0..r {
        for k in j..r {
            let a = s[j] + s[k];
            let d: Vec<Complex64> = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&mu, &g)| g * (Complex64::i() * a * mu).exp())
                .collect();
            let ed = DMatrix::from_fn(m, q, |i, p| e[(i, p)] * d[p]);
            let kernel = ed * e.transpose();
            let pairs: &[(usize, usize)] = if j == k { &[(j, k)] } else { &[(j, k), (k, j)] };
            for &(jj, kk) in pairs {
                let c = coupling.c[(jj, kk)];
                for i in 0..m {
                    for l in 0..m {
                        let v = kernel[(i, l)].re * sqrt_w[i] * sqrt_w[l];
                        h[(jj * m + i, kk * m + l)] = c * v;
                    }
                }
            }
        }
    }
    Ok(HankelDiscretization {
        t_max,
        m,
        nodes,
        weights,
        h,
    })
}

impl HankelDiscretization {
    /// `det(I - H^2)`.
    pub fn det(&self) -> f64 {
        let k = self.h.nrows();
        let h2 = &self.h * &self.h;
        let a = DMatrix::<Complex64>::identity(k, k) - h2;
        a.lu().determinant().re
    }

    /// `det(I - H) det(I + H)`.
    pub fn det_factored(&self) -> f64 {
        let k = self.h.nrows();
        let id = DMatrix::<Complex64>::identity(k, k);
        let minus = (&id - &self.h).lu().determinant();
        let plus = (&id + &self.h).lu().determinant();
        (minus * plus).re
    }
}

/// Determinant with its parameter echo.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FredholmResult {
    pub n: usize,
    pub t: f64,
    pub t_max: f64,
    pub m: usize,
    pub value: f64,
    /// `|F(2m) - F(m)|` when requested.
    pub err_estimate: Option<f64>,
}

/// `F^{(n)}(sigma + t) = det(I - A^2)`.
pub fn fredholm_det(
    n: usize,
    coupling: &CouplingMatrix,
    t: f64,
    spec: &FredholmSpec,
) -> Result<FredholmResult, FredholmError> {
    let value = discretize(n, coupling, t, spec.m, spec)?.det();
    let err_estimate = if spec.estimate_error {
        let fine = discretize(n, coupling, t, 2 * spec.m, spec)?.det();
        Some((fine - value).abs())
    } else {
        None
    };
    Ok(FredholmResult {
        n,
        t,
        t_max: spec.t_max_for(n),
        m: spec.m,
        value,
        err_estimate,
    })
}

/// One sample of `ln F` along the diagonal flow.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub f: f64,
    pub ln_f: f64,
    pub err_estimate: Option<f64>,
}

/// `a, a + step, ..., b` with the count rounded to the nearest integer.
pub fn uniform_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0 && b >= a, "grid needs a <= b and step > 0");
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| a + i as f64 * step).collect()
}

/// `ln F` on the given grid; determinants are evaluated in parallel.
pub fn log_det_curve(
    n: usize,
    coupling: &CouplingMatrix,
    t_grid: &[f64],
    spec: &FredholmSpec,
) -> Result<Vec<CurvePoint>, FredholmError> {
    t_grid
        .par_iter()
        .map(|&t| {
            let res = fredholm_det(n, coupling, t, spec)?;
            if !(res.value > 0.0) {
                return Err(FredholmError::NonPositiveDeterminant {
                    t,
                    value: res.value,
                });
            }
            Ok(CurvePoint {
                t,
                f: res.value,
                ln_f: res.value.ln(),
                err_estimate: res.err_estimate,
            })
        })
        .collect()
}

/// Five-point centered second difference on the interior points of a
/// uniform grid with spacing `h`.
pub fn second_log_derivative(
    curve: &[(f64, f64)],
    h: f64,
) -> Result<Vec<(f64, f64)>, FredholmError> {
    if curve.len() < 5 {
        return Err(FredholmError::GridTooCoarse {
            points: curve.len(),
        });
    }
    let uniform = curve
        .windows(2)
        .all(|w| ((w[1].0 - w[0].0) - h).abs() <= 1e-9 * h.abs().max(1.0));
    if !uniform {
        return Err(FredholmError::GridTooCoarse {
            points: curve.len(),
        });
    }
    Ok(curve
        .windows(5)
        .map(|w| {
            let f = |i: usize| w[i].1;
            let d2 = (-f(0) + 16.0 * f(1) - 30.0 * f(2) + 16.0 * f(3) - f(4)) / (12.0 * h * h);
            (w[2].0, d2)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_validation() {
        assert!(matches!(
            CouplingMatrix::scalar(1.5),
            Err(FredholmError::SpectrumOutOfRange { .. })
        ));
        assert!(CouplingMatrix::real(2, &[1.0, 0.0, 0.0, 1.0], &[0.0, 0.0]).is_ok());
        assert!(CouplingMatrix::real(2, &[0.6, 0.2, 0.2, 0.5], &[0.0, 0.3]).is_ok());
        assert!(matches!(
            CouplingMatrix::real(2, &[0.6, 0.2, 0.1, 0.5], &[0.0, 0.3]),
            Err(FredholmError::NotHermitian { .. })
        ));
        assert!(matches!(
            CouplingMatrix::real(2, &[0.6], &[0.0, 0.3]),
            Err(FredholmError::BadShape { .. })
        ));
    }

    #[test]
    fn coupling_json() {
        let c =
            CouplingMatrix::from_json_str(r#"{"r":2,"C":[[0.6,0.2],[0.2,0.5]],"sigma":[0,0.3]}"#)
                .unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.sigma(), &[0.0, 0.3]);
        let h =
            CouplingMatrix::from_json_str(r#"{"r":2,"C":[[0.5,[0,0.1]],[[0,-0.1],0.5]]}"#).unwrap();
        assert!(!h.is_real());
        assert!(CouplingMatrix::from_json_str("{").is_err());
    }

    #[test]
    fn zero_coupling_gives_one() {
        let c = CouplingMatrix::scalar(0.0).unwrap();
        let f = fredholm_det(1, &c, 0.0, &FredholmSpec::default()).unwrap();
        assert_eq!(f.value, 1.0);
    }

    #[test]
    fn stencil() {
        let h = 0.1;
        let sq: Vec<(f64, f64)> = (0..7)
            .map(|i| (i as f64 * h, (i as f64 * h).powi(2)))
            .collect();
        for (_, d) in second_log_derivative(&sq, h).unwrap() {
            assert!((d - 2.0).abs() < 1e-10);
        }
        let q: Vec<(f64, f64)> = (-2..=2)
            .map(|i| (1.0 + i as f64 * h, (1.0 + i as f64 * h).powi(4)))
            .collect();
        let d = second_log_derivative(&q, h).unwrap();
        assert!((d[0].1 - 12.0).abs() < 24.0 * h * h);
        assert!(matches!(
            second_log_derivative(&sq[..4], h),
            Err(FredholmError::GridTooCoarse { points: 4 })
        ));
    }

    #[test]
    fn grid() {
        assert_eq!(uniform_grid(0.0, 2.0, 0.5), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(uniform_grid(0.0, 2.0, 0.1).len(), 21);
    }
}
