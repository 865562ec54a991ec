//! Isomonodromic Lax pair `(L, M)` for the hierarchy.
//!
//! `L = [[i lambda, W], [W, -i lambda]]` and `M` is a polynomial of degree
//! `2n` in `lambda` whose coefficients are built from Lenard polynomials of
//! the Miura image.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;

use crate::lenard::{d_plus, hierarchy_residual, lenard_miura, s_w_anticommutator};
use crate::ncalg::{antiderive, evaluate, GaussianRational, JetPoint, NcError, NcPoly};

/// Scalar coefficients of `M`, indexed by their `lambda` order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaxCoefficients {
    pub n: usize,
    /// `a[k] = A_{2n-2k}` for `k = 0..=n`; `a[0]` is the identity.
    pub a: Vec<NcPoly>,
    /// `g[k-1] = G_{2n-2k}` for `k = 1..=n`.
    pub g: Vec<NcPoly>,
    /// `e[k-1] = E_{2n-2k+1}` for `k = 1..=n`.
    pub e: Vec<NcPoly>,
    /// `f[k-1] = F_{2n-2k+1}` for `k = 1..=n`.
    pub f: Vec<NcPoly>,
}

impl LaxCoefficients {
    /// `A_order`, for even `order <= 2n`.
    pub fn a_at(&self, order: usize) -> &NcPoly {
        &self.a[(2 * self.n - order) / 2]
    }

    /// `G_order`, for even `order <= 2n - 2`.
    pub fn g_at(&self, order: usize) -> &NcPoly {
        &self.g[(2 * self.n - order) / 2 - 1]
    }

    /// `E_order`, for odd `order <= 2n - 1`.
    pub fn e_at(&self, order: usize) -> &NcPoly {
        &self.e[(2 * self.n - order - 1) / 2]
    }

    /// `F_order`, for odd `order <= 2n - 1`.
    pub fn f_at(&self, order: usize) -> &NcPoly {
        &self.f[(2 * self.n - order - 1) / 2]
    }
}

fn c(re: i64, den: i64) -> GaussianRational {
    GaussianRational::ratio(re, den)
}

fn i_times(q: GaussianRational) -> GaussianRational {
    q.times_i()
}

fn half_i() -> GaussianRational {
    c(1, 2).times_i()
}

/// Coefficients of `M` for the `n`-th member.
///
/// With `X = (d + [W,.]_+) L_{k-1}`, `Y = d^{-1}[W, X]`, `Z = dX - [W, Y]`
/// and `c = (-1/4)^{k-1}`: `F = -i c X`, `E = -i c Y`, `G = (i/2) c Z`,
/// `A = -(c/2)(L_k - Z)`, all under the Miura map.
pub fn lax_coefficients(n: usize) -> Result<LaxCoefficients, NcError> {
    assert!(n >= 1, "Lax pairs start at n = 1");
    let w = NcPoly::w(0);
    let mut out = LaxCoefficients {
        n,
        a: vec![NcPoly::one()],
        g: Vec::with_capacity(n),
        e: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
    };
    for k in 1..=n {
        let ck = c(-1, 4).pow(k as u32 - 1);
        let x = d_plus(&lenard_miura(k - 1)?);
        let y = antiderive(&NcPoly::commutator(&w, &x))?;
        let z = &x.derive() - &NcPoly::commutator(&w, &y);
        let lk = lenard_miura(k)?;
        let minus_i_c = i_times(-&ck);
        out.f.push(x.scale(&minus_i_c));
        out.e.push(y.scale(&minus_i_c));
        out.g.push(z.scale(&i_times(&ck * &c(1, 2))));
        out.a.push((&lk - &z).scale(&(&ck * &c(-1, 2))));
    }
    Ok(out)
}

/// A 2x2 array of `r x r` block polynomials.
pub type Blocks = [[NcPoly; 2]; 2];

/// A `lambda`-graded block matrix: `coeffs[j]` multiplies `lambda^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaxPart {
    pub coeffs: Vec<Blocks>,
}

fn zero_blocks() -> Blocks {
    [
        [NcPoly::zero(), NcPoly::zero()],
        [NcPoly::zero(), NcPoly::zero()],
    ]
}

impl LaxPart {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Applies `d/dS` to every block.
    pub fn derive(&self) -> LaxPart {
        LaxPart {
            coeffs: self
                .coeffs
                .iter()
                .map(|b| {
                    [
                        [b[0][0].derive(), b[0][1].derive()],
                        [b[1][0].derive(), b[1][1].derive()],
                    ]
                })
                .collect(),
        }
    }

    /// `d/d lambda`, as a graded object of one lower degree.
    pub fn d_lambda(&self) -> LaxPart {
        let coeffs: Vec<Blocks> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, b)| {
                let s = GaussianRational::from_integer(j as i64);
                [
                    [b[0][0].scale(&s), b[0][1].scale(&s)],
                    [b[1][0].scale(&s), b[1][1].scale(&s)],
                ]
            })
            .collect();
        LaxPart {
            coeffs: if coeffs.is_empty() {
                vec![zero_blocks()]
            } else {
                coeffs
            },
        }
    }

    /// Evaluates the `2r x 2r` matrix at `lambda`.
    pub fn evaluate(
        &self,
        jet: &JetPoint,
        lambda: Complex64,
    ) -> Result<DMatrix<Complex64>, NcError> {
        let r = jet.dim();
        let mut out = DMatrix::<Complex64>::zeros(2 * r, 2 * r);
        let mut pw = Complex64::one();
        for b in &self.coeffs {
            for (bi, row) in b.iter().enumerate() {
                for (bj, p) in row.iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let m = evaluate(p, jet)? * pw;
                    let mut view = out.view_mut((bi * r, bj * r), (r, r));
                    view += m;
                }
            }
            pw *= lambda;
        }
        Ok(out)
    }

    /// Checks `-s1 M(lambda) s1 = M(-lambda)` order by order, where `s1`
    /// swaps the two block rows and columns.
    pub fn has_sigma1_parity(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(j, b)| {
            let sign = if j % 2 == 0 { -1 } else { 1 };
            // -s1 B s1 = -[[b11, b10], [b01, b00]] must equal (-1)^j B
            let lhs = |p: &NcPoly| p.scale_int(sign);
            lhs(&b[1][1]) == b[0][0]
                && lhs(&b[1][0]) == b[0][1]
                && lhs(&b[0][1]) == b[1][0]
                && lhs(&b[0][0]) == b[1][1]
        })
    }
}

/// `L = [[i lambda I, W], [W, -i lambda I]]`.
pub fn build_l() -> LaxPart {
    let i = NcPoly::constant(GaussianRational::i());
    let w = NcPoly::w(0);
    LaxPart {
        coeffs: vec![
            [[NcPoly::zero(), w.clone()], [w, NcPoly::zero()]],
            [[i.clone(), NcPoly::zero()], [NcPoly::zero(), -&i]],
        ],
    }
}

/// `M` assembled from the coefficients: even orders carry
/// `[[(i/2)A, -(1/2)G], [(1/2)G, -(i/2)A]]`, odd orders
/// `(i/2)[[E, F], [F, E]]`, and the constant term gains `diag(iS, -iS)`.
pub fn build_m(coeffs: &LaxCoefficients) -> LaxPart {
    let n = coeffs.n;
    let half = c(1, 2);
    let mut out: Vec<Blocks> = (0..=2 * n).map(|_| zero_blocks()).collect();
    for k in 0..=n {
        let order = 2 * n - 2 * k;
        let a = coeffs.a_at(order).scale(&half_i());
        out[order][1][1] = -&a;
        out[order][0][0] = a;
        if k >= 1 {
            let g = coeffs.g_at(order).scale(&half);
            out[order][0][1] = -&g;
            out[order][1][0] = g;
            let odd = order + 1;
            let e = coeffs.e_at(odd).scale(&half_i());
            let f = coeffs.f_at(odd).scale(&half_i());
            out[odd] = [[e.clone(), f.clone()], [f, e]];
        }
    }
    let is = NcPoly::s().scale(&GaussianRational::i());
    out[0][0][0] = &out[0][0][0] + &is;
    out[0][1][1] = &out[0][1][1] - &is;
    LaxPart { coeffs: out }
}

/// One labelled residual of the coefficient system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedResidual {
    pub equation: String,
    pub residual: NcPoly,
}

/// Residuals of the differential system for the coefficients of `M`,
/// obtained from `dL/dlambda - dM/dS + [L, M] = 0` order by order.
///
/// The final entry compares the `lambda^0` off-diagonal equation,
/// `R = (i/2) dG_0 + [S, W]_+ + (1/2)[W, A_0]_+`, with the hierarchy:
/// `(-4)^n R - H_n`, where `H_n` is the hierarchy residual. All entries are
/// zero polynomials when the coefficients are consistent.
pub fn compatibility_residual_symbolic(n: usize) -> Result<Vec<NamedResidual>, NcError> {
    let co = lax_coefficients(n)?;
    let w = NcPoly::w(0);
    let i = GaussianRational::i();
    let half = c(1, 2);
    let mut out = Vec::new();
    let mut push =
        |equation: String, residual: NcPoly| out.push(NamedResidual { equation, residual });

    push(format!("dA_{}", 2 * n), co.a_at(2 * n).derive());
    push(
        format!("F_{}", 2 * n - 1),
        co.f_at(2 * n - 1)
            + &NcPoly::anticommutator(&w, co.a_at(2 * n)).scale(&i_times(half.clone())),
    );
    for k in 1..=n {
        let odd = 2 * n - 2 * k + 1;
        let even = 2 * n - 2 * k;
        let (e, f, g, a) = (co.e_at(odd), co.f_at(odd), co.g_at(even), co.a_at(even));
        push(
            format!("dE_{odd}"),
            &e.derive() - &NcPoly::commutator(&w, f),
        );
        push(
            format!("dA_{even}"),
            &a.derive() + &NcPoly::anticommutator(&w, g).scale(&i),
        );
        push(
            format!("G_{even}"),
            g - &(&NcPoly::commutator(&w, e) - &f.derive()).scale(&half),
        );
        if k < n {
            let next = co.f_at(odd - 2);
            let rhs = &g.derive() - &NcPoly::anticommutator(&w, a).scale(&i);
            push(format!("F_{}", odd - 2), next - &rhs.scale(&half));
        }
    }
    let final_eq = &(&co.g_at(0).derive().scale(&i_times(half.clone())) + &s_w_anticommutator())
        + &NcPoly::anticommutator(&w, co.a_at(0)).scale(&half);
    let scaled = final_eq.scale(&GaussianRational::from_integer(-4).pow(n as u32));
    push("final".into(), &scaled - &hierarchy_residual(n)?.residual);
    Ok(out)
}

/// Size of `dL/dlambda - dM/dS + [L, M]` at one `(jet, lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroCurvature {
    /// Max-abs entry of the curvature.
    pub residual: f64,
    /// Largest max-abs entry among the four terms `dL/dlambda`, `dM/dS`,
    /// `LM` and `ML`.
    pub scale: f64,
}

impl ZeroCurvature {
    /// `residual / max(1, scale)`.
    pub fn relative(&self) -> f64 {
        self.residual / self.scale.max(1.0)
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Evaluates the zero-curvature expression numerically.
///
/// `dM/dS` is taken symbolically, so `jet` must assign `S` and
/// `W, W_S, ..., W_{2nS}`.
pub fn zero_curvature_numeric(
    n: usize,
    jet: &JetPoint,
    lambda: Complex64,
) -> Result<ZeroCurvature, NcError> {
    let l = build_l();
    let m = build_m(&lax_coefficients(n)?);
    let dl = l.d_lambda().evaluate(jet, lambda)?;
    let dm = m.derive().evaluate(jet, lambda)?;
    let lv = l.evaluate(jet, lambda)?;
    let mv = m.evaluate(jet, lambda)?;
    let lm = &lv * &mv;
    let ml = &mv * &lv;
    let scale = [&dl, &dm, &lm, &ml]
        .into_iter()
        .map(max_abs)
        .fold(0.0, f64::max);
    let res = dl - dm + lm - ml;
    Ok(ZeroCurvature {
        residual: max_abs(&res),
        scale,
    })
}
