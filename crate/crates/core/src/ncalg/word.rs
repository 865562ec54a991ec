//! Jet letters and noncommutative words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::NcError;

/// Which family a letter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    U,
    W,
    S,
}

/// A generator of the free differential algebra: a jet `U_{kS}`, `W_{kS}`,
/// or the diagonal matrix `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    U(u32),
    W(u32),
    S,
}

impl Letter {
    pub fn kind(self) -> LetterKind {
        match self {
            Letter::U(_) => LetterKind::U,
            Letter::W(_) => LetterKind::W,
            Letter::S => LetterKind::S,
        }
    }

    /// Differential weight; `S` has none.
    pub fn weight(self) -> Option<u32> {
        match self {
            Letter::U(k) => Some(2 + k),
            Letter::W(k) => Some(1 + k),
            Letter::S => None,
        }
    }

    pub fn order(self) -> Option<u32> {
        match self {
            Letter::U(k) | Letter::W(k) => Some(k),
            Letter::S => None,
        }
    }

    pub fn with_order(kind: LetterKind, k: u32) -> Letter {
        match kind {
            LetterKind::U => Letter::U(k),
            LetterKind::W => Letter::W(k),
            LetterKind::S => Letter::S,
        }
    }

    fn kind_char(self) -> u8 {
        match self {
            Letter::U(_) => b'U',
            Letter::W(_) => b'W',
            Letter::S => b'S',
        }
    }

    /// Writes the suffix after the kind character (`""`, `"_S"`, `"_3S"`)
    /// into `buf`, returning the used length.
    fn suffix(self, buf: &mut [u8; 16]) -> usize {
        match self.order() {
            None | Some(0) => 0,
            Some(1) => {
                buf[..2].copy_from_slice(b"_S");
                2
            }
            Some(k) => {
                let digits = k.to_string();
                let d = digits.as_bytes();
                buf[0] = b'_';
                buf[1..1 + d.len()].copy_from_slice(d);
                buf[1 + d.len()] = b'S';
                d.len() + 2
            }
        }
    }
}

/// Letters are ordered exactly as their serializations compare as strings.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind_char().cmp(&other.kind_char()).then_with(|| {
            let (mut a, mut b) = ([0u8; 16], [0u8; 16]);
            let la = self.suffix(&mut a);
            let lb = other.suffix(&mut b);
            a[..la].cmp(&b[..lb])
        })
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = [0u8; 16];
        let n = self.suffix(&mut buf);
        write!(
            f,
            "{}{}",
            self.kind_char() as char,
            std::str::from_utf8(&buf[..n]).expect("ascii")
        )
    }
}

impl FromStr for Letter {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NcError::Parse(format!("invalid letter `{s}`"));
        let (head, tail) = s.split_at(s.find('_').unwrap_or(s.len()));
        let order = if tail.is_empty() {
            0
        } else {
            let body = tail
                .strip_prefix('_')
                .and_then(|t| t.strip_suffix('S'))
                .ok_or_else(bad)?;
            match body {
                "" => 1,
                digits => {
                    let k: u32 = digits.parse().map_err(|_| bad())?;
                    // "U_1S" and "U_0S" are not canonical spellings
                    if k < 2 || digits.starts_with('0') {
                        return Err(bad());
                    }
                    k
                }
            }
        };
        match head {
            "U" => Ok(Letter::U(order)),
            "W" => Ok(Letter::W(order)),
            "S" if tail.is_empty() => Ok(Letter::S),
            _ => Err(bad()),
        }
    }
}

/// An ordered product of letters; the empty word is the identity matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn contains_s(&self) -> bool {
        self.0.contains(&Letter::S)
    }

    /// Total weight, or `None` if the word contains `S`.
    pub fn weight(&self) -> Option<u32> {
        self.0.iter().map(|l| l.weight()).sum()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// The rotation `w[k..] w[..k]`.
    pub fn rotated(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }
}

/// Graded-lexicographic: shorter words first, then letterwise.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Space-separated letters; `"I"` or the empty string is the identity.
impl FromStr for Word {
    type Err = NcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "I" {
            return Ok(Word::identity());
        }
        s.split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// All `S`-free words of total weight `weight` over the given letter kinds.
pub fn words_of_weight(weight: u32, kinds: &[LetterKind]) -> Vec<Word> {
    fn rec(rem: u32, kinds: &[LetterKind], prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if rem == 0 {
            out.push(Word(prefix.clone()));
            return;
        }
        for &kind in kinds {
            let base = match kind {
                LetterKind::U => 2,
                LetterKind::W => 1,
                LetterKind::S => continue,
            };
            for w in base..=rem {
                prefix.push(Letter::with_order(kind, w - base));
                rec(rem - w, kinds, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(weight, kinds, &mut Vec::new(), &mut out);
    out
}
