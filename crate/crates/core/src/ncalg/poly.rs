//! Noncommutative differential polynomials.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{GaussianRational, Letter, LetterKind, NcError, Word};

/// A finite sum `sum c_w w` over words. Zero coefficients are never stored,
/// and iteration follows the canonical graded-lex word order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Word, GaussianRational>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// `c I`.
    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Word::identity())
    }

    pub fn term(c: GaussianRational, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(GaussianRational::one(), w)
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(Word::letter(l))
    }

    pub fn u(k: u32) -> Self {
        Self::letter(Letter::U(k))
    }

    pub fn w(k: u32) -> Self {
        Self::letter(Letter::W(k))
    }

    pub fn s() -> Self {
        Self::letter(Letter::S)
    }

    /// Builds a polynomial from `(coefficient, word)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (GaussianRational, Word)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (c, w) in it {
            p.add_term(w, &c);
        }
        p
    }

    /// Adds `c w` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, w: Word, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &NcPoly, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), &(a * c));
        }
    }

    /// The term with the greatest word in canonical order.
    pub fn leading(&self) -> Option<(&Word, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> GaussianRational {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn contains_s(&self) -> bool {
        self.terms.keys().any(Word::contains_s)
    }

    /// Letter kinds occurring in any word.
    pub fn kinds(&self) -> Vec<LetterKind> {
        let mut ks: Vec<LetterKind> = self
            .terms
            .keys()
            .flat_map(|w| w.letters().iter().map(|l| l.kind()))
            .collect();
        ks.sort();
        ks.dedup();
        ks
    }

    /// Largest derivative order of a letter of the given kind, if any occurs.
    pub fn max_order(&self, kind: LetterKind) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter())
            .filter(|l| l.kind() == kind)
            .filter_map(|l| l.order())
            .max()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&GaussianRational::from_integer(n))
    }

    /// The total derivative `d/dS`, extended by the Leibniz rule.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let letters = w.letters();
            for (pos, l) in letters.iter().enumerate() {
                let mut v = letters.to_vec();
                match *l {
                    Letter::U(k) => v[pos] = Letter::U(k + 1),
                    Letter::W(k) => v[pos] = Letter::W(k + 1),
                    Letter::S => {
                        v.remove(pos);
                    }
                }
                out.add_term(Word(v), c);
            }
        }
        out
    }

    pub fn derive_n(&self, k: u32) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derive())
    }

    /// Replaces every letter of kind `target` by the corresponding derivative
    /// of `image`: `X_{kS} -> d^k(image)`. Other letters are left alone.
    pub fn substitute(&self, target: LetterKind, image: &NcPoly) -> Self {
        let order = self.max_order(target).unwrap_or(0);
        let mut derivs = vec![image.clone()];
        for k in 0..order as usize {
            let next = derivs[k].derive();
            derivs.push(next);
        }
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for l in w.letters() {
                let factor = if l.kind() == target {
                    &derivs[l.order().unwrap_or(0) as usize]
                } else {
                    &Self::letter(*l)
                };
                acc = &acc * factor;
            }
            out = &out + &acc;
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &NcPoly, b: &NcPoly) -> Self {
        &(a * b) - &(b * a)
    }

    /// `[a, b]_+ = ab + ba`.
    pub fn anticommutator(a: &NcPoly, b: &NcPoly) -> Self {
        &(a * b) + &(b * a)
    }

    /// Applies the anti-automorphism reversing every word.
    pub fn reversed(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.reversed(), c.clone()))
                .collect(),
        }
    }

    /// Groups terms by word weight. Fails on words containing `S`.
    pub fn weight_components(&self) -> Result<BTreeMap<u32, NcPoly>, NcError> {
        let mut out: BTreeMap<u32, NcPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            let g = w.weight().ok_or(NcError::SContamination)?;
            out.entry(g).or_default().add_term(w.clone(), c);
        }
        Ok(out)
    }

    /// `Some(g)` if every word has weight `g`; `None` for mixed weights or the
    /// zero polynomial.
    pub fn is_homogeneous(&self) -> Result<Option<u32>, NcError> {
        let comps = self.weight_components()?;
        Ok(if comps.len() == 1 {
            comps.keys().next().copied()
        } else {
            None
        })
    }

    /// Maximum of `|re|` and `|im|` over all coefficients, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| {
                let z = c.to_complex64();
                z.re.abs().max(z.im.abs())
            })
            .fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.concat(b), &(x * y));
            }
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NcPoly {
            type Output = NcPoly;
            fn $m(self, rhs: NcPoly) -> NcPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        -&self
    }
}
