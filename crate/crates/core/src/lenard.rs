//! Matrix Lenard polynomials, the hierarchy they generate, and the
//! factorization of the Lenard operator under the Miura map.

use std::sync::{Mutex, OnceLock};

use crate::ncalg::{antiderive, GaussianRational, LetterKind, NcError, NcPoly};

/// `U -> W_S - W W`.
pub fn miura_image() -> NcPoly {
    &NcPoly::w(1) - &(&NcPoly::w(0) * &NcPoly::w(0))
}

/// Applies the Miura substitution to a polynomial in `U`-jets.
pub fn miura(p: &NcPoly) -> NcPoly {
    p.substitute(LetterKind::U, &miura_image())
}

/// `(d^3 + [U, d .]_+ + d [U, .]_+ + [U, d^{-1} [U, .]]) L`.
pub fn recursion_operator(l: &NcPoly) -> Result<NcPoly, NcError> {
    let u = NcPoly::u(0);
    let dl = l.derive();
    let mut out = dl.derive().derive();
    out = &out + &NcPoly::anticommutator(&u, &dl);
    out = &out + &NcPoly::anticommutator(&u, l).derive();
    let inner = antiderive(&NcPoly::commutator(&u, l))?;
    out = &out + &NcPoly::commutator(&u, &inner);
    Ok(out)
}

/// Lenard polynomials `L_0 = I/2, L_1, ...`, extended on demand.
#[derive(Clone, Debug)]
pub struct LenardTable {
    entries: Vec<NcPoly>,
}

impl Default for LenardTable {
    fn default() -> Self {
        Self::new()
    }
}

impl LenardTable {
    pub fn new() -> Self {
        Self {
            entries: vec![NcPoly::constant(GaussianRational::ratio(1, 2))],
        }
    }

    pub fn max_n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn get(&mut self, n: usize) -> Result<&NcPoly, NcError> {
        while self.entries.len() <= n {
            let prev = self.entries.last().expect("table starts with L_0");
            let next = antiderive(&recursion_operator(prev)?)?;
            self.entries.push(next);
        }
        Ok(&self.entries[n])
    }
}

fn shared_table() -> &'static Mutex<LenardTable> {
    static TABLE: OnceLock<Mutex<LenardTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(LenardTable::new()))
}

/// `L_n[U]`, memoized process-wide.
pub fn lenard(n: usize) -> Result<NcPoly, NcError> {
    let mut t = shared_table().lock().unwrap_or_else(|e| e.into_inner());
    t.get(n).cloned()
}

/// `L_n[W_S - W^2]`.
pub fn lenard_miura(n: usize) -> Result<NcPoly, NcError> {
    Ok(miura(&lenard(n)?))
}

/// `(d + [W, .]_+) p`.
pub fn d_plus(p: &NcPoly) -> NcPoly {
    &p.derive() + &NcPoly::anticommutator(&NcPoly::w(0), p)
}

/// `(d - [W, .]_+) p`.
pub fn d_minus(p: &NcPoly) -> NcPoly {
    &p.derive() - &NcPoly::anticommutator(&NcPoly::w(0), p)
}

/// `(d - [W, .] d^{-1} [W, .]) p`.
pub fn d_middle(p: &NcPoly) -> Result<NcPoly, NcError> {
    let w = NcPoly::w(0);
    let inner = antiderive(&NcPoly::commutator(&w, p))?;
    Ok(&p.derive() - &NcPoly::commutator(&w, &inner))
}

/// `[S, W]_+`.
pub fn s_w_anticommutator() -> NcPoly {
    NcPoly::anticommutator(&NcPoly::s(), &NcPoly::w(0))
}

/// `(-1)^{n+1} 4^n`.
pub fn hierarchy_scale(n: usize) -> GaussianRational {
    let sign = if n % 2 == 1 { 1 } else { -1 };
    GaussianRational::from_integer(sign * 4i64.pow(n as u32))
}

/// The `n`-th hierarchy member written as `residual = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyResidual {
    pub n: usize,
    pub residual: NcPoly,
}

impl HierarchyResidual {
    /// The right-hand side `W_{2nS} - residual`, so the equation reads
    /// `W_{2nS} = rhs`.
    pub fn rhs(&self) -> NcPoly {
        &NcPoly::w(2 * self.n as u32) - &self.residual
    }
}

/// `(d + [W, .]_+) L_n[W_S - W^2] - (-1)^{n+1} 4^n [S, W]_+`.
pub fn hierarchy_residual(n: usize) -> Result<HierarchyResidual, NcError> {
    assert!(n >= 1, "hierarchy members start at n = 1");
    let lhs = d_plus(&lenard_miura(n)?);
    let residual = &lhs - &s_w_anticommutator().scale(&hierarchy_scale(n));
    Ok(HierarchyResidual { n, residual })
}

/// `d L_{n+1}|_M - (d - [W,.]_+)(d - [W,.] d^{-1} [W,.])(d + [W,.]_+) L_n|_M`.
pub fn factorization_residual(n: usize) -> Result<NcPoly, NcError> {
    let lhs = lenard_miura(n + 1)?.derive();
    let rhs = d_minus(&d_middle(&d_plus(&lenard_miura(n)?))?);
    Ok(&lhs - &rhs)
}
