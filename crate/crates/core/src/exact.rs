//! Exact values in a real quadratic extension `Q(sqrt n)`.
//!
//! Local closed forms involve half-integral powers of a residue norm `N`.
//! A `Surd` stores `a + b sqrt(n)` with rational `a`, `b`; when `n` is a
//! perfect square the irrational part is folded into `a`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^e` for any integer exponent.
pub fn rat_pow(base: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    // Numerator and denominator may both overflow f64 for deep grids.
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = (q.denom().bits() as i64 - 900).max(q.numer().bits() as i64 - 900).max(0);
    let n = (q.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rat_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    radicand: u64,
    a: Rational,
    b: Rational,
}

fn is_square(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

impl Surd {
    pub fn rational(radicand: u64, a: Rational) -> Self {
        Surd { radicand, a, b: Rational::zero() }
    }

    pub fn from_int(radicand: u64, a: i64) -> Self {
        Self::rational(radicand, rat_int(a))
    }

    pub fn zero(radicand: u64) -> Self {
        Self::rational(radicand, Rational::zero())
    }

    pub fn one(radicand: u64) -> Self {
        Self::rational(radicand, Rational::one())
    }

    pub fn new(radicand: u64, a: Rational, b: Rational) -> Self {
        match is_square(radicand) {
            Some(r) => Surd { radicand, a: a + b * rat_int(r as i64), b: Rational::zero() },
            None => Surd { radicand, a, b },
        }
    }

    /// `radicand^(e/2)`.
    pub fn half_power(radicand: u64, e: i64) -> Self {
        let n = rat_int(radicand as i64);
        let whole = rat_pow(&n, e.div_euclid(2));
        if e.rem_euclid(2) == 0 {
            Self::rational(radicand, whole)
        } else {
            Self::new(radicand, Rational::zero(), whole)
        }
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * (self.radicand as f64).sqrt()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Surd { radicand: self.radicand, a: &self.a * q, b: &self.b * q }
    }

    fn conj(&self) -> Self {
        Surd { radicand: self.radicand, a: self.a.clone(), b: -self.b.clone() }
    }

    fn field_norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat_int(self.radicand as i64)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero surd");
        self.conj().scale(&self.field_norm().recip())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Surd::one(self.radicand);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        if self.b.is_zero() {
            other.radicand
        } else {
            assert!(
                other.b.is_zero() || other.radicand == self.radicand,
                "surds over different radicands"
            );
            self.radicand
        }
    }

    /// Display as `p/q` when rational, `p/q + p'/q'*sqrt(n)` otherwise.
    pub fn exact_string(&self) -> String {
        if self.b.is_zero() {
            return rat_string(&self.a);
        }
        let root = format!("sqrt({})", self.radicand);
        let surd = format!("{}*{}", rat_string(&self.b.abs()), root);
        if self.a.is_zero() {
            if self.b.is_negative() {
                format!("-{surd}")
            } else {
                surd
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            format!("{} {} {}", rat_string(&self.a), sign, surd)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact_string())
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        let n = self.common_radicand(o);
        Surd { radicand: n, a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        let n = self.common_radicand(o);
        Surd { radicand: n, a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let n = self.common_radicand(o);
        let nn = rat_int(n as i64);
        Surd {
            radicand: n,
            a: &self.a * &o.a + &self.b * &o.b * nn,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Div for &Surd {
    type Output = Surd;
    fn div(self, o: &Surd) -> Surd {
        self * &o.recip()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { radicand: self.radicand, a: -self.a.clone(), b: -self.b.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                (&self).$m(&o)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, o: &Surd) -> Surd {
                (&self).$m(o)
            }
        }
        impl $tr<Surd> for &Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

/// `coeff * log(base)` with an exact coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogMultiple {
    pub coeff: Surd,
    pub base: u64,
}

impl LogMultiple {
    pub fn new(coeff: Surd, base: u64) -> Self {
        LogMultiple { coeff, base }
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64() * (self.base as f64).ln()
    }

    pub fn exact_string(&self) -> String {
        format!("({})*log({})", self.coeff, self.base)
    }
}

impl Add for &LogMultiple {
    type Output = LogMultiple;
    fn add(self, o: &LogMultiple) -> LogMultiple {
        assert_eq!(self.base, o.base, "log multiples over different bases");
        LogMultiple { coeff: &self.coeff + &o.coeff, base: self.base }
    }
}

impl Sub for &LogMultiple {
    type Output = LogMultiple;
    fn sub(self, o: &LogMultiple) -> LogMultiple {
        assert_eq!(self.base, o.base, "log multiples over different bases");
        LogMultiple { coeff: &self.coeff - &o.coeff, base: self.base }
    }
}
