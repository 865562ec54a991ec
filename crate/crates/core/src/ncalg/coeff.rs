//! Exact Gaussian rationals `a + b i` with `a, b` arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NcError;

/// An element of `Q(i)`. Arithmetic is exact; nothing here ever rounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num / den` as a real rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    /// Multiplies by the imaginary unit.
    pub fn times_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `self^k` for integer `k >= 0`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Self::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Pair of `"num/den"` strings, the JSON coefficient encoding.
    pub fn to_fraction_pair(&self) -> [String; 2] {
        [fraction_string(&self.re), fraction_string(&self.im)]
    }

    pub fn from_fraction_pair(re: &str, im: &str) -> Result<Self, NcError> {
        Ok(Self::new(parse_fraction(re)?, parse_fraction(im)?))
    }
}

fn fraction_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_fraction(s: &str) -> Result<BigRational, NcError> {
    let s = s.trim();
    let bad = || NcError::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(q: BigRational) -> Self {
        Self::new(q, BigRational::zero())
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Human-readable form: `3`, `-1/2`, `i`, `-1/2i`, `(1 + 2i)`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&self.re, f)?;
                write!(f, " {} ", if self.im.is_negative() { "-" } else { "+" })?;
                let a = self.im.abs();
                if !a.is_one() {
                    fmt_rational(&a, f)?;
                }
                write!(f, "i)")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = GaussianRational::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        );
        let b = GaussianRational::i();
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
        assert_eq!(b.pow(2), GaussianRational::from_integer(-1));
        assert_eq!(a.times_i(), &a * &GaussianRational::i());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn fraction_round_trip() {
        let a = GaussianRational::new(
            BigRational::new(6.into(), (-4).into()),
            BigRational::from_integer(7.into()),
        );
        let [re, im] = a.to_fraction_pair();
        assert_eq!(re, "-3/2");
        assert_eq!(im, "7/1");
        assert_eq!(GaussianRational::from_fraction_pair(&re, &im).unwrap(), a);
        assert!(GaussianRational::from_fraction_pair("1/0", "0").is_err());
        assert!(GaussianRational::from_fraction_pair("x", "0").is_err());
    }

    #[test]
    fn display() {
        assert_eq!(GaussianRational::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!(
            (&GaussianRational::i() * &GaussianRational::ratio(-1, 2)).to_string(),
            "-1/2i"
        );
        let z = &GaussianRational::from_integer(1) - &GaussianRational::i();
        assert_eq!(z.to_string(), "(1 - i)");
    }
}
