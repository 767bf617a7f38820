//! Exact arithmetic in ℚ(√2, √3).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `p + q√2 + r√3 + s√6` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadraticFieldElement {
    pub p: BigRational,
    pub q: BigRational,
    pub r: BigRational,
    pub s: BigRational,
}

/// `a + b√2`.
#[derive(Clone, Debug, PartialEq)]
struct Sqrt2 {
    a: BigRational,
    b: BigRational,
}

impl Sqrt2 {
    fn mul(&self, o: &Self) -> Self {
        let two = BigRational::from_integer(2.into());
        Self {
            a: &self.a * &o.a + two * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    fn scale(&self, k: &BigRational) -> Self {
        Self {
            a: &self.a * k,
            b: &self.b * k,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn sign(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        combine(sa, sb, || {
            let two = BigRational::from_integer(2.into());
            sign_of(&(&self.a * &self.a - two * &self.b * &self.b))
        })
    }
}

fn sign_of(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}

/// Sign of `α + β·√d` given the signs of `α`, `β` and of `α² - dβ²`.
fn combine(sa: Ordering, sb: Ordering, norm: impl FnOnce() -> Ordering) -> Ordering {
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        _ => match norm() {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("√d is irrational"),
        },
    }
}

impl QuadraticFieldElement {
    pub fn new(p: BigRational, q: BigRational, r: BigRational, s: BigRational) -> Self {
        Self { p, q, r, s }
    }

    pub fn from_integers(p: i64, q: i64, r: i64, s: i64) -> Self {
        let f = |v: i64| BigRational::from_integer(v.into());
        Self::new(f(p), f(q), f(r), f(s))
    }

    pub fn rational(x: BigRational) -> Self {
        Self {
            p: x,
            ..Self::default()
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn coefficients(&self) -> [&BigRational; 4] {
        [&self.p, &self.q, &self.r, &self.s]
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero() && self.r.is_zero() && self.s.is_zero()
    }

    fn split(&self) -> (Sqrt2, Sqrt2) {
        (
            Sqrt2 {
                a: self.p.clone(),
                b: self.q.clone(),
            },
            Sqrt2 {
                a: self.r.clone(),
                b: self.s.clone(),
            },
        )
    }

    /// Exact sign: the element is `A + B√3` with `A, B ∈ ℚ(√2)`, and
    /// `sign(A + B√3)` follows from the signs of `A`, `B` and `A² - 3B²`.
    pub fn signum(&self) -> Ordering {
        let (a, b) = self.split();
        let three = BigRational::from_integer(3.into());
        combine(a.sign(), b.sign(), || a.mul(&a).sub(&b.mul(&b).scale(&three)).sign())
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        f(&self.p) + f(&self.q) * 2f64.sqrt() + f(&self.r) * 3f64.sqrt() + f(&self.s) * 6f64.sqrt()
    }
}

impl Ord for QuadraticFieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QuadraticFieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadraticFieldElement> for &'a QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn add(self, o: Self) -> QuadraticFieldElement {
        QuadraticFieldElement::new(&self.p + &o.p, &self.q + &o.q, &self.r + &o.r, &self.s + &o.s)
    }
}

impl<'a> Sub<&'a QuadraticFieldElement> for &'a QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn sub(self, o: Self) -> QuadraticFieldElement {
        QuadraticFieldElement::new(&self.p - &o.p, &self.q - &o.q, &self.r - &o.r, &self.s - &o.s)
    }
}

impl<'a> Mul<&'a QuadraticFieldElement> for &'a QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn mul(self, o: Self) -> QuadraticFieldElement {
        let (a1, b1) = self.split();
        let (a2, b2) = o.split();
        let three = BigRational::from_integer(3.into());
        let rational = {
            let x = a1.mul(&a2);
            let y = b1.mul(&b2).scale(&three);
            Sqrt2 {
                a: x.a + y.a,
                b: x.b + y.b,
            }
        };
        let root3 = {
            let x = a1.mul(&b2);
            let y = b1.mul(&a2);
            Sqrt2 {
                a: x.a + y.a,
                b: x.b + y.b,
            }
        };
        QuadraticFieldElement::new(rational.a, rational.b, root3.a, root3.b)
    }
}

impl Neg for &QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn neg(self) -> QuadraticFieldElement {
        QuadraticFieldElement::new(-&self.p, -&self.q, -&self.r, -&self.s)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadraticFieldElement {
            type Output = QuadraticFieldElement;
            fn $m(self, o: Self) -> QuadraticFieldElement {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadraticFieldElement {
    type Output = QuadraticFieldElement;
    fn neg(self) -> QuadraticFieldElement {
        -&self
    }
}

fn fmt_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for QuadraticFieldElement {
    /// `p+q*sqrt2+r*sqrt3+s*sqrt6` with zero terms dropped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, unit) in [(&self.p, ""), (&self.q, "sqrt2"), (&self.r, "sqrt3"), (&self.s, "sqrt6")] {
            if c.is_zero() {
                continue;
            }
            if !out.is_empty() && c.is_positive() {
                out.push('+');
            }
            out.push_str(&fmt_rational(c));
            if !unit.is_empty() {
                out.push('*');
                out.push_str(unit);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn parse_rational(text: &str, at: &str) -> Result<BigRational> {
    let bad = || Error::parse(at, format!("{text:?} is not a rational number"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::parse(at, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        let negative = int.trim_start().starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().map_err(|_| bad())? };
        if frac.is_negative() {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(digits);
        let magnitude = int.abs() * &scale + frac;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?))
}

impl FromStr for QuadraticFieldElement {
    type Err = Error;

    /// Accepts sums of terms `c`, `c*sqrtK`, `sqrtK` with `K ∈ {2, 3, 6}` and
    /// rational `c` written as an integer, `a/b` or a decimal.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("field element", "empty expression"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = compact.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'*' && bytes[i - 1] != b'/' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);

        let mut out = Self::zero();
        for (k, term) in terms.iter().enumerate() {
            let at = format!("term {}", k + 1);
            let (sign, body) = match term.as_bytes().first() {
                Some(b'+') => (1, &term[1..]),
                Some(b'-') => (-1, &term[1..]),
                _ => (1, *term),
            };
            let (coeff, unit) = match body.split_once('*') {
                Some((c, u)) => (parse_rational(c, &at)?, u),
                None if body.starts_with("sqrt") => (BigRational::one(), body),
                None => (parse_rational(body, &at)?, ""),
            };
            let coeff = if sign < 0 { -coeff } else { coeff };
            let slot = match unit {
                "" => &mut out.p,
                "sqrt2" => &mut out.q,
                "sqrt3" => &mut out.r,
                "sqrt6" => &mut out.s,
                other => return Err(Error::parse(&at, format!("unknown unit {other:?}; expected sqrt2, sqrt3 or sqrt6"))),
            };
            *slot += coeff;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> QuadraticFieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("-1+1*sqrt2"), QuadraticFieldElement::from_integers(-1, 1, 0, 0));
        assert_eq!(q("sqrt3 - 1"), QuadraticFieldElement::from_integers(-1, 0, 1, 0));
        assert_eq!(q("1/3").p, BigRational::new(1.into(), 3.into()));
        assert_eq!(q("0.25"), q("1/4"));
        assert_eq!(q("-0.5*sqrt6"), q("-1/2*sqrt6"));
        assert_eq!(q("-1+1*sqrt2").to_string(), "-1+1*sqrt2");
        assert_eq!(QuadraticFieldElement::zero().to_string(), "0");
        assert!("2*sqrt5".parse::<QuadraticFieldElement>().is_err());
        assert!("1/0".parse::<QuadraticFieldElement>().is_err());
        assert!("".parse::<QuadraticFieldElement>().is_err());
    }

    #[test]
    fn signs_of_near_cancellations() {
        // Convergents on either side of √2 and √3.
        assert_eq!(q("sqrt2-99/70").signum(), Ordering::Less);
        assert_eq!(q("sqrt2-140/99").signum(), Ordering::Greater);
        assert_eq!(q("sqrt3-1351/780").signum(), Ordering::Less);
        assert_eq!(q("sqrt3-989/571").signum(), Ordering::Greater);
        assert_eq!(q("sqrt2+sqrt3-sqrt6-1/2").signum(), Ordering::Greater);
        // √2 + √3 - √6 ≈ 0.696775.
        assert_eq!(q("1*sqrt2+1*sqrt3-1*sqrt6-0.6967").signum(), Ordering::Greater);
        assert_eq!(q("1*sqrt2+1*sqrt3-1*sqrt6-0.6968").signum(), Ordering::Less);
        assert_eq!(QuadraticFieldElement::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn multiplication_table() {
        let r2 = q("sqrt2");
        let r3 = q("sqrt3");
        assert_eq!(&r2 * &r2, q("2"));
        assert_eq!(&r2 * &r3, q("sqrt6"));
        assert_eq!(&q("sqrt6") * &q("sqrt6"), q("6"));
        assert_eq!(&q("sqrt6") * &r3, q("3*sqrt2"));
    }

    fn small() -> impl Strategy<Value = QuadraticFieldElement> {
        (-20i64..20, -20i64..20, -20i64..20, -20i64..20, 1i64..7)
            .prop_map(|(p, q, r, s, d)| {
                let f = |v: i64| BigRational::new(v.into(), d.into());
                QuadraticFieldElement::new(f(p), f(q), f(r), f(s))
            })
    }

    proptest! {
        #[test]
        fn sign_agrees_with_float_when_clear(x in small()) {
            let f = x.to_f64();
            prop_assume!(f.abs() > 1e-9);
            prop_assert_eq!(x.signum(), if f > 0.0 { Ordering::Greater } else { Ordering::Less });
        }

        #[test]
        fn ring_laws(x in small(), y in small(), z in small()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x - &y) + &y, x.clone());
            prop_assert_eq!((&x * &x).signum() != Ordering::Less, true);
        }

        #[test]
        fn display_round_trips(x in small()) {
            prop_assert_eq!(x.to_string().parse::<QuadraticFieldElement>().unwrap(), x);
        }
    }
}
