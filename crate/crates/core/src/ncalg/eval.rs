//! Numeric evaluation of polynomials at a point of matrix jets.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Letter, NcError, NcPoly};

/// An assignment of complex `r x r` matrices to letters.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint {
    r: usize,
    values: BTreeMap<Letter, DMatrix<Complex64>>,
}

impl JetPoint {
    pub fn new(r: usize) -> Self {
        assert!(r > 0, "matrix dimension must be positive");
        Self {
            r,
            values: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn set(&mut self, l: Letter, m: DMatrix<Complex64>) -> &mut Self {
        assert_eq!(m.shape(), (self.r, self.r), "jet matrix has wrong shape");
        self.values.insert(l, m);
        self
    }

    /// Assigns `S = diag(sigma_1 + t, ..., sigma_r + t)`.
    pub fn set_s(&mut self, sigma: &[f64], t: f64) -> &mut Self {
        let d = DMatrix::from_fn(self.r, self.r, |i, j| {
            if i == j {
                Complex64::new(sigma[i] + t, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        self.set(Letter::S, d)
    }

    pub fn get(&self, l: Letter) -> Option<&DMatrix<Complex64>> {
        self.values.get(&l)
    }
}

/// Evaluates `p` at `jet`; the identity word maps to `I_r`.
pub fn evaluate(p: &NcPoly, jet: &JetPoint) -> Result<DMatrix<Complex64>, NcError> {
    CompiledPoly::new(p).eval(jet)
}

/// A polynomial flattened for repeated numeric evaluation. Terms are kept in
/// canonical order so consecutive words share prefixes, and prefix products
/// are reused between them.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Complex64, Vec<Letter>)>,
}

impl CompiledPoly {
    pub fn new(p: &NcPoly) -> Self {
        let mut terms: Vec<(Complex64, Vec<Letter>)> = p
            .terms()
            .map(|(w, c)| (c.to_complex64(), w.letters().to_vec()))
            .collect();
        // lexicographic on letters maximizes shared prefixes
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        Self { terms }
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut ls: Vec<Letter> = self
            .terms
            .iter()
            .flat_map(|t| t.1.iter().copied())
            .collect();
        ls.sort();
        ls.dedup();
        ls
    }

    pub fn eval(&self, jet: &JetPoint) -> Result<DMatrix<Complex64>, NcError> {
        let r = jet.r;
        let mut acc = DMatrix::<Complex64>::zeros(r, r);
        // prefix[k] is the product of the first k letters of the previous word
        let mut prefix: Vec<DMatrix<Complex64>> = vec![DMatrix::identity(r, r)];
        let mut prev: &[Letter] = &[];
        for (c, word) in &self.terms {
            let common = prev
                .iter()
                .zip(word.iter())
                .take_while(|(a, b)| a == b)
                .count();
            prefix.truncate(common + 1);
            for l in &word[common..] {
                let m = jet
                    .values
                    .get(l)
                    .ok_or_else(|| NcError::UnassignedLetter(l.to_string()))?;
                let next = prefix.last().expect("nonempty") * m;
                prefix.push(next);
            }
            acc += prefix.last().expect("nonempty") * *c;
            prev = word;
        }
        Ok(acc)
    }
}
