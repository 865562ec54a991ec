//! Hierarchy members as matrix ODEs along the diagonal flow `s_j = sigma_j + t`,
//! started from Airy boundary data, and the comparison of `-Tr W^2` with
//! `(d/dt)^2 ln F`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::airy::{AiryError, ContourRule, QuadratureSpec};
use crate::fredholm::{
    log_det_curve, second_log_derivative, uniform_grid, CouplingMatrix, FredholmError, FredholmSpec,
};
use crate::lenard::hierarchy_residual;
use crate::ncalg::{CompiledPoly, JetPoint, Letter, NcError, NcPoly, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("coefficient of W_{{2nS}} in the member n = {n} is not 1")]
    LeadingCoefficientNotUnit { n: usize },
    #[error("start time too small: boundary value {value:.3e} exceeds {threshold:.1e}")]
    TStartTooSmall { value: f64, threshold: f64 },
    #[error("solution blew up at t = {t} (|W| = {norm:.3e})")]
    BlowUp { t: f64, norm: f64 },
    #[error("step control failed at t = {t}")]
    StepControl { t: f64 },
    #[error(transparent)]
    Algebra(#[from] NcError),
    #[error(transparent)]
    Airy(#[from] AiryError),
    #[error(transparent)]
    Fredholm(#[from] FredholmError),
}

type Mat = DMatrix<Complex64>;

/// `W` and its first `2n - 1` flow derivatives at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetState {
    pub t: f64,
    pub w: Vec<Mat>,
}

impl JetState {
    pub fn dim(&self) -> usize {
        self.w[0].nrows()
    }

    /// `-Tr W^2`.
    pub fn minus_trace_w2(&self) -> f64 {
        -(&self.w[0] * &self.w[0]).trace().re
    }

    /// Max-abs entry of `W`.
    pub fn w_norm(&self) -> f64 {
        self.w[0].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// A jet point with `W, ..., W_{(2n-1)S}` and `S = diag(sigma) + t`.
    pub fn jet_point(&self, sigma: &[f64]) -> JetPoint {
        let mut jp = JetPoint::new(self.dim());
        for (k, m) in self.w.iter().enumerate() {
            jp.set(Letter::W(k as u32), m.clone());
        }
        jp.set_s(sigma, self.t);
        jp
    }
}

/// Numeric right-hand side `W_{2nS} = rhs(W, ..., W_{(2n-1)S}, S)`.
#[derive(Clone, Debug)]
pub struct CompiledRhs {
    pub n: usize,
    pub rhs: NcPoly,
    compiled: CompiledPoly,
}

/// Solves the `n`-th member for its highest derivative.
pub fn compile_rhs(n: usize) -> Result<CompiledRhs, FlowError> {
    let res = hierarchy_residual(n)?;
    let lead = Word::letter(Letter::W(2 * n as u32));
    if res.residual.coeff(&lead) != crate::ncalg::GaussianRational::from_integer(1) {
        return Err(FlowError::LeadingCoefficientNotUnit { n });
    }
    let rhs = res.rhs();
    if rhs.max_order(crate::ncalg::LetterKind::W).unwrap_or(0) >= 2 * n as u32 {
        return Err(FlowError::LeadingCoefficientNotUnit { n });
    }
    Ok(CompiledRhs {
        n,
        compiled: CompiledPoly::new(&rhs),
        rhs,
    })
}

impl CompiledRhs {
    pub fn eval(&self, state: &JetState, sigma: &[f64]) -> Result<Mat, FlowError> {
        Ok(self.compiled.eval(&state.jet_point(sigma))?)
    }

    /// The full jet including `W_{2nS}`, as needed by the zero-curvature
    /// check.
    pub fn consistent_jet(&self, state: &JetState, sigma: &[f64]) -> Result<JetPoint, FlowError> {
        let mut jp = state.jet_point(sigma);
        let top = self.compiled.eval(&jp)?;
        jp.set(Letter::W(2 * self.n as u32), top);
        Ok(jp)
    }
}

/// Integration and boundary-data settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowSpec {
    /// Start time; `None` uses [`default_t0`].
    pub t0: Option<f64>,
    /// Nominal RK4 step.
    pub dt: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Abort once `max |W_kl|` exceeds this.
    pub blowup: f64,
    /// Largest admissible `|Ai_{2n+1}(sigma_k + sigma_l + 2 t0)|`.
    pub t_start_threshold: f64,
    /// Maximum number of step halvings under error control.
    pub max_halvings: u32,
    #[serde(skip)]
    pub quadrature: QuadratureSpec,
}

impl Default for FlowSpec {
    fn default() -> Self {
        Self {
            t0: None,
            dt: 1e-3,
            rtol: 1e-10,
            atol: 1e-14,
            blowup: 1e3,
            t_start_threshold: 1e-8,
            max_halvings: 12,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Smallest convenient start time with `|Ai_{2n+1}(2 t0)| < 1e-8`.
pub fn default_t0(n: usize) -> f64 {
    if n == 1 {
        4.5
    } else {
        8.0
    }
}

impl FlowSpec {
    pub fn t0_for(&self, n: usize) -> f64 {
        self.t0.unwrap_or_else(|| default_t0(n))
    }
}

/// `(W_{mS})_{kl} = -2 * 2^m c_kl Ai^{(m)}(sigma_k + sigma_l + 2 t0)`,
/// `m = 0..2n`.
pub fn initial_jet(
    n: usize,
    coupling: &CouplingMatrix,
    t0: f64,
    spec: &FlowSpec,
) -> Result<JetState, FlowError> {
    let r = coupling.dim();
    let sigma = coupling.sigma();
    let c = coupling.matrix();
    let mut w = vec![Mat::zeros(r, r); 2 * n];
    let mut worst: f64 = 0.0;
    for k in 0..r {
        for l in 0..r {
            if c[(k, l)] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let x = sigma[k] + sigma[l] + 2.0 * t0;
            let rule = ContourRule::new(n, 2 * n - 1, x, x, &spec.quadrature)?;
            worst = worst.max(rule.eval(0, x).abs());
            for (m, wm) in w.iter_mut().enumerate() {
                let scale = -2.0 * 2f64.powi(m as i32) * rule.eval(m, x);
                wm[(k, l)] = c[(k, l)] * scale;
            }
        }
    }
    if worst > spec.t_start_threshold {
        return Err(FlowError::TStartTooSmall {
            value: worst,
            threshold: spec.t_start_threshold,
        });
    }
    Ok(JetState { t: t0, w })
}

/// Accepted states with integrator diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<JetState>,
    pub dt: f64,
    /// Largest Richardson error estimate over accepted steps.
    pub max_error_estimate: f64,
}

impl Trajectory {
    /// The recorded state closest to `t`.
    pub fn nearest(&self, t: f64) -> &JetState {
        self.states
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
            .expect("trajectory is nonempty")
    }
}

struct Stepper<'a> {
    rhs: &'a CompiledRhs,
    sigma: &'a [f64],
    spec: &'a FlowSpec,
    max_err: f64,
}

fn axpy(y: &[Mat], a: f64, k: &[Mat]) -> Vec<Mat> {
    y.iter()
        .zip(k)
        .map(|(y, k)| y + k * Complex64::new(a, 0.0))
        .collect()
}

fn max_abs(v: &[Mat]) -> f64 {
    v.iter()
        .flat_map(|m| m.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

impl Stepper<'_> {
    fn deriv(&self, t: f64, y: &[Mat]) -> Result<Vec<Mat>, FlowError> {
        let state = JetState { t, w: y.to_vec() };
        let top = self.rhs.eval(&state, self.sigma)?;
        let mut d: Vec<Mat> = y[1..].to_vec();
        d.push(top);
        Ok(d)
    }

    fn rk4(&self, t: f64, y: &[Mat], h: f64) -> Result<Vec<Mat>, FlowError> {
        let k1 = self.deriv(t, y)?;
        let k2 = self.deriv(t + h / 2.0, &axpy(y, h / 2.0, &k1))?;
        let k3 = self.deriv(t + h / 2.0, &axpy(y, h / 2.0, &k2))?;
        let k4 = self.deriv(t + h, &axpy(y, h, &k3))?;
        Ok(y.iter()
            .enumerate()
            .map(|(i, yi)| {
                yi + (&k1[i]
                    + &k2[i] * Complex64::new(2.0, 0.0)
                    + &k3[i] * Complex64::new(2.0, 0.0)
                    + &k4[i])
                    * Complex64::new(h / 6.0, 0.0)
            })
            .collect())
    }

    /// One step of size `h` with Richardson control: the step is accepted
    /// when full and two-half steps agree, else it is split in two.
    fn step(&mut self, t: f64, y: &[Mat], h: f64, depth: u32) -> Result<Vec<Mat>, FlowError> {
        let full = self.rk4(t, y, h)?;
        let mid = self.rk4(t, y, h / 2.0)?;
        let half = self.rk4(t + h / 2.0, &mid, h / 2.0)?;
        let diff: Vec<Mat> = half.iter().zip(&full).map(|(a, b)| a - b).collect();
        let err = max_abs(&diff) / 15.0;
        let tol = self.spec.atol + self.spec.rtol * max_abs(&half);
        if err > tol {
            if depth >= self.spec.max_halvings {
                return Err(FlowError::StepControl { t });
            }
            let y1 = self.step(t, y, h / 2.0, depth + 1)?;
            return self.step(t + h / 2.0, &y1, h / 2.0, depth + 1);
        }
        self.max_err = self.max_err.max(err);
        Ok(axpy(&half, 1.0 / 15.0, &diff))
    }
}

/// Integrates from the Airy boundary data at `t0`, landing exactly on every
/// time in `outputs`. Times on either side of `t0` are allowed; each side is
/// integrated outward from `t0`. With `record_steps`, every intermediate
/// step is kept as well.
fn run(
    n: usize,
    coupling: &CouplingMatrix,
    t0: f64,
    outputs: &[f64],
    spec: &FlowSpec,
    record_steps: bool,
) -> Result<Trajectory, FlowError> {
    let rhs = compile_rhs(n)?;
    let start = initial_jet(n, coupling, t0, spec)?;
    let mut stepper = Stepper {
        rhs: &rhs,
        sigma: coupling.sigma(),
        spec,
        max_err: 0.0,
    };
    let mut states = vec![start.clone()];
    let mut below: Vec<f64> = outputs.iter().copied().filter(|&t| t < t0).collect();
    let mut above: Vec<f64> = outputs.iter().copied().filter(|&t| t > t0).collect();
    below.sort_by(|a, b| b.total_cmp(a));
    above.sort_by(|a, b| a.total_cmp(b));
    for targets in [below, above] {
        let mut t = t0;
        let mut y = start.w.clone();
        for target in targets {
            let steps = ((target - t).abs() / spec.dt).ceil().max(1.0) as usize;
            let h = (target - t) / steps as f64;
            for i in 0..steps {
                y = stepper.step(t, &y, h, 0)?;
                t = if i + 1 == steps { target } else { t + h };
                let state = JetState { t, w: y.clone() };
                let norm = state.w_norm();
                if !(norm <= spec.blowup) {
                    return Err(FlowError::BlowUp { t, norm });
                }
                if record_steps || i + 1 == steps {
                    states.push(state);
                }
            }
        }
    }
    states.sort_by(|a, b| a.t.total_cmp(&b.t));
    states.dedup_by(|a, b| a.t == b.t);
    Ok(Trajectory {
        states,
        dt: spec.dt,
        max_error_estimate: stepper.max_err,
    })
}

/// Integrates from `t0` to `t1` (either direction), keeping every step.
pub fn integrate(
    n: usize,
    coupling: &CouplingMatrix,
    t0: f64,
    t1: f64,
    spec: &FlowSpec,
) -> Result<Trajectory, FlowError> {
    run(n, coupling, t0, &[t1], spec, true)
}

/// Integrates from `t0`, keeping only the states at the requested times.
pub fn integrate_at(
    n: usize,
    coupling: &CouplingMatrix,
    t0: f64,
    times: &[f64],
    spec: &FlowSpec,
) -> Result<Trajectory, FlowError> {
    run(n, coupling, t0, times, spec, false)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRow {
    pub t: f64,
    pub minus_tr_w2: f64,
    pub d2_ln_f: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub t0: f64,
    pub h: f64,
    pub rows: Vec<IdentityRow>,
    pub max_residual: f64,
    pub max_error_estimate: f64,
}

/// Compares `-Tr W^2(t)` from the ODE with the five-point second
/// derivative of `ln F` on the grid `a, a + h, ..., b`. The determinant is
/// sampled two extra points beyond each end so every grid point gets a
/// centered stencil.
pub fn identity_report(
    n: usize,
    coupling: &CouplingMatrix,
    a: f64,
    b: f64,
    h: f64,
    flow: &FlowSpec,
    fredholm: &FredholmSpec,
) -> Result<IdentityReport, FlowError> {
    let grid = uniform_grid(a, b, h);
    let wide: Vec<f64> = (-2..grid.len() as i64 + 2)
        .map(|i| a + i as f64 * h)
        .collect();
    let t0 = flow.t0_for(n);
    let traj = integrate_at(n, coupling, t0, &grid, flow)?;
    let curve = log_det_curve(n, coupling, &wide, fredholm)?;
    let pts: Vec<(f64, f64)> = curve.iter().map(|p| (p.t, p.ln_f)).collect();
    let d2 = second_log_derivative(&pts, h)?;
    let rows: Vec<IdentityRow> = grid
        .iter()
        .zip(&d2)
        .map(|(&t, &(_, d2_ln_f))| {
            let minus_tr_w2 = traj.nearest(t).minus_trace_w2();
            IdentityRow {
                t,
                minus_tr_w2,
                d2_ln_f,
                residual: (minus_tr_w2 - d2_ln_f).abs(),
            }
        })
        .collect();
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(IdentityReport {
        n,
        t0,
        h,
        rows,
        max_residual,
        max_error_estimate: traj.max_error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_state(t: f64, w: &[f64]) -> JetState {
        JetState {
            t,
            w: w.iter()
                .map(|&x| Mat::from_element(1, 1, Complex64::new(x, 0.0)))
                .collect(),
        }
    }

    #[test]
    fn first_member_rhs() {
        let rhs = compile_rhs(1).unwrap();
        let v = rhs.eval(&scalar_state(0.0, &[1.0, 0.0]), &[0.0]).unwrap();
        assert!((v[(0, 0)].re - 2.0).abs() < 1e-15);
        let v = rhs.eval(&scalar_state(1.0, &[1.0, 0.0]), &[0.0]).unwrap();
        assert!((v[(0, 0)].re - 10.0).abs() < 1e-15);
    }

    #[test]
    fn zero_jet_is_fixed() {
        for n in 1..=3 {
            let rhs = compile_rhs(n).unwrap();
            let st = JetState {
                t: 0.7,
                w: vec![Mat::zeros(2, 2); 2 * n],
            };
            assert_eq!(rhs.eval(&st, &[0.1, -0.4]).unwrap(), Mat::zeros(2, 2));
        }
    }

    #[test]
    fn start_time_guard() {
        let c = CouplingMatrix::scalar(1.0).unwrap();
        assert!(matches!(
            initial_jet(1, &c, 1.0, &FlowSpec::default()),
            Err(FlowError::TStartTooSmall { .. })
        ));
        let z = CouplingMatrix::scalar(0.0).unwrap();
        let j = initial_jet(1, &z, 1.0, &FlowSpec::default()).unwrap();
        assert!(j.w.iter().all(|m| m.iter().all(|z| z.norm() == 0.0)));
    }
}
