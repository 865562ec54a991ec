//! Text, JSON and LaTeX forms of polynomials.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GaussianRational, Letter, NcError, NcPoly, Word};

/// One entry of the canonical JSON array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: [String; 2],
    pub word: Vec<String>,
}

pub fn to_json(p: &NcPoly) -> Vec<JsonTerm> {
    p.terms()
        .map(|(w, c)| JsonTerm {
            coeff: c.to_fraction_pair(),
            word: w.letters().iter().map(Letter::to_string).collect(),
        })
        .collect()
}

pub fn from_json(terms: &[JsonTerm]) -> Result<NcPoly, NcError> {
    let mut p = NcPoly::zero();
    for t in terms {
        let c = GaussianRational::from_fraction_pair(&t.coeff[0], &t.coeff[1])?;
        let letters = t
            .word
            .iter()
            .map(|s| s.parse::<Letter>())
            .collect::<Result<Vec<_>, _>>()?;
        p.add_term(Word(letters), &c);
    }
    Ok(p)
}

impl Serialize for NcPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<JsonTerm>::deserialize(d)?;
        from_json(&terms).map_err(serde::de::Error::custom)
    }
}

/// A coefficient is printed with a leading minus when its first nonzero
/// component is negative.
fn is_negative(c: &GaussianRational) -> bool {
    if c.re.is_zero() {
        c.im.is_negative()
    } else {
        c.re.is_negative() && (c.im.is_zero() || c.im.is_negative())
    }
}

/// `U_2S + 3 U U - 1/2i W`, `1/2 I`, or `0`.
impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms().enumerate() {
            let neg = is_negative(c);
            let a = if neg { -c } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if a.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{a} {w}")?;
            }
        }
        Ok(())
    }
}

fn latex_rational(q: &num_rational::BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

/// LaTeX for a coefficient of magnitude-sign already stripped.
fn latex_coeff(c: &GaussianRational) -> String {
    if c.is_one() {
        return String::new();
    }
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => latex_rational(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".into()
            } else if (-&c.im).is_one() {
                "-i".into()
            } else {
                format!("{}i", latex_rational(&c.im))
            }
        }
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            let a = c.im.abs();
            let im = if a.is_one() {
                String::new()
            } else {
                latex_rational(&a)
            };
            format!("({} {sign} {im}i)", latex_rational(&c.re))
        }
    }
}

fn latex_letter(l: Letter) -> String {
    let base = match l {
        Letter::U(_) => "U",
        Letter::W(_) => "W",
        Letter::S => return "S".into(),
    };
    match l.order() {
        Some(0) | None => base.into(),
        Some(1) => format!("{base}_{{S}}"),
        Some(k) => format!("{base}_{{{k}S}}"),
    }
}

/// Runs of equal letters become powers: `U U U` -> `U^{3}`.
fn latex_word(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "I".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let l = latex_letter(letters[i]);
        parts.push(if j - i == 1 {
            l
        } else {
            format!("{l}^{{{}}}", j - i)
        });
        i = j;
    }
    parts.join(" ")
}

/// LaTeX in bracket notation. A word `xy` whose rotation `yx` carries the
/// same coefficient is written `[x, y]_+`; with the opposite coefficient it
/// is written `[x, y]`.
pub fn to_latex(p: &NcPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut used: BTreeSet<Word> = BTreeSet::new();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (w, c) in p.terms() {
        if used.contains(w) {
            continue;
        }
        used.insert(w.clone());
        let mut body = latex_word(w.letters());
        for k in 1..w.len() {
            let rot = w.rotated(k);
            if rot == *w || used.contains(&rot) {
                continue;
            }
            let d = p.coeff(&rot);
            let (x, y) = w.letters().split_at(k);
            if d == *c {
                body = format!("[{}, {}]_+", latex_word(x), latex_word(y));
            } else if d == -c {
                body = format!("[{}, {}]", latex_word(x), latex_word(y));
            } else {
                continue;
            }
            used.insert(rot);
            break;
        }
        let neg = is_negative(c);
        let a = if neg { -c } else { c.clone() };
        let coeff = latex_coeff(&a);
        pieces.push((neg, format!("{coeff}{body}")));
    }
    let mut out = String::new();
    for (idx, (neg, s)) in pieces.iter().enumerate() {
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(s);
    }
    out
}
