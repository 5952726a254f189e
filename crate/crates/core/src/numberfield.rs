//! Base fields of degree at most two, their finite places and quaternion
//! ramification sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("malformed field spec {0:?}: expected `Q` or `Q(sqrt D)`")]
    Malformed(String),
    #[error("D = {0} is not squarefree")]
    NotSquarefree(i64),
    #[error("D = {0} must be greater than 1")]
    NotRealQuadratic(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("class number must be positive")]
    ClassNumber,
    #[error("malformed place {0:?}: expected `p` or `p:split1|split2|inert|ram`")]
    MalformedPlace(String),
    #[error("prime {p} has two places in {field}; pick one with `{p}:split1` or `{p}:split2`")]
    AmbiguousPlace { p: u64, field: String },
    #[error("selector `{selector}` does not match the decomposition of {p} in {field}")]
    SelectorMismatch { p: u64, selector: String, field: String },
    #[error("place {0} listed twice")]
    DuplicatePlace(String),
    #[error("parity violation: {places} finite places with [F:Q] = {degree}; |Σ_f| + [F:Q] must be odd")]
    Parity { places: usize, degree: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "D")]
pub enum FieldKind {
    Rationals,
    RealQuadratic(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberFieldData {
    pub kind: FieldKind,
    pub degree: u32,
    pub disc: u64,
    pub class_number: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Kronecker symbol `(d/n)` for `n > 0`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    if n == 0 {
        return if d.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result: i8 = 1;
    let twos = valuation(n, 2);
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol for odd n.
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

impl NumberFieldData {
    pub fn rationals() -> Self {
        NumberFieldData { kind: FieldKind::Rationals, degree: 1, disc: 1, class_number: 1 }
    }

    pub fn real_quadratic(d: i64) -> Result<Self, FieldError> {
        if d <= 1 {
            return Err(FieldError::NotRealQuadratic(d));
        }
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        let disc = if d % 4 == 1 { d } else { 4 * d } as u64;
        Ok(NumberFieldData { kind: FieldKind::RealQuadratic(d), degree: 2, disc, class_number: 1 })
    }

    pub fn with_class_number(mut self, h: u64) -> Result<Self, FieldError> {
        if h == 0 {
            return Err(FieldError::ClassNumber);
        }
        if self.degree == 1 && h != 1 {
            return Err(FieldError::ClassNumber);
        }
        self.class_number = h;
        Ok(self)
    }

    pub fn is_rational(&self) -> bool {
        self.kind == FieldKind::Rationals
    }

    /// The fundamental discriminant whose Kronecker character cuts out `F`.
    pub fn quadratic_character_disc(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Rationals => None,
            FieldKind::RealQuadratic(_) => Some(self.disc as i64),
        }
    }

    pub fn places_above(&self, p: u64) -> Result<Vec<FinitePlace>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let unram = |f: u32, kind| FinitePlace { p, f, e: 1, norm: p.pow(f), diff_val: 0, kind };
        Ok(match self.kind {
            FieldKind::Rationals => vec![unram(1, PlaceKind::Rational)],
            FieldKind::RealQuadratic(_) => match kronecker(self.disc as i64, p) {
                1 => vec![unram(1, PlaceKind::Split1), unram(1, PlaceKind::Split2)],
                -1 => vec![unram(2, PlaceKind::Inert)],
                _ => vec![FinitePlace {
                    p,
                    f: 1,
                    e: 2,
                    norm: p,
                    diff_val: valuation(self.disc, p),
                    kind: PlaceKind::Ramified,
                }],
            },
        })
    }

    /// Resolve `p` or `p:selector` to a single place.
    pub fn resolve_place(&self, token: &str) -> Result<FinitePlace, FieldError> {
        let token = token.trim();
        let (prime, selector) = match token.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (token, None),
        };
        let p: u64 = prime.parse().map_err(|_| FieldError::MalformedPlace(token.to_string()))?;
        let wanted = match selector {
            None => None,
            Some(s) => Some(
                PlaceKind::from_selector(s).ok_or_else(|| FieldError::MalformedPlace(token.to_string()))?,
            ),
        };
        let places = self.places_above(p)?;
        match wanted {
            None if places.len() == 1 => Ok(places[0].clone()),
            None => Err(FieldError::AmbiguousPlace { p, field: self.to_string() }),
            Some(kind) => places.into_iter().find(|pl| pl.kind.matches_selector(kind)).ok_or_else(|| {
                FieldError::SelectorMismatch { p, selector: selector.unwrap_or("").to_string(), field: self.to_string() }
            }),
        }
    }
}

impl fmt::Display for NumberFieldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::RealQuadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

impl FromStr for NumberFieldData {
    type Err = FieldError;

    fn from_str(spec: &str) -> Result<Self, FieldError> {
        parse_field(spec)
    }
}

pub fn parse_field(spec: &str) -> Result<NumberFieldData, FieldError> {
    let malformed = || FieldError::Malformed(spec.to_string());
    let s = spec.trim();
    if s == "Q" {
        return Ok(NumberFieldData::rationals());
    }
    let inner = s
        .strip_prefix("Q(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(malformed)?
        .trim();
    let arg = inner.strip_prefix("sqrt").ok_or_else(malformed)?;
    if !arg.starts_with(char::is_whitespace) {
        return Err(malformed());
    }
    let d: i64 = arg.trim().parse().map_err(|_| malformed())?;
    NumberFieldData::real_quadratic(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Rational,
    Split1,
    Split2,
    Inert,
    Ramified,
}

impl PlaceKind {
    fn from_selector(s: &str) -> Option<Self> {
        match s {
            "split1" => Some(PlaceKind::Split1),
            "split2" => Some(PlaceKind::Split2),
            "inert" => Some(PlaceKind::Inert),
            "ram" => Some(PlaceKind::Ramified),
            _ => None,
        }
    }

    fn matches_selector(self, wanted: PlaceKind) -> bool {
        self == wanted
    }

    fn selector(self) -> Option<&'static str> {
        match self {
            PlaceKind::Rational => None,
            PlaceKind::Split1 => Some("split1"),
            PlaceKind::Split2 => Some("split2"),
            PlaceKind::Inert => Some("inert"),
            PlaceKind::Ramified => Some("ram"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinitePlace {
    pub p: u64,
    pub f: u32,
    pub e: u32,
    pub norm: u64,
    pub diff_val: u32,
    pub kind: PlaceKind,
}

impl FinitePlace {
    /// `log N_v`, taken as `f log p` so inert places carry no extra rounding.
    pub fn log_norm(&self) -> f64 {
        self.f as f64 * (self.p as f64).ln()
    }

    pub fn label(&self) -> String {
        match self.kind.selector() {
            None => self.p.to_string(),
            Some(s) => format!("{}:{}", self.p, s),
        }
    }
}

impl fmt::Display for FinitePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationSet {
    places: Vec<FinitePlace>,
}

impl RamificationSet {
    pub fn new(field: &NumberFieldData, mut places: Vec<FinitePlace>) -> Result<Self, FieldError> {
        places.sort();
        for w in places.windows(2) {
            if w[0] == w[1] {
                return Err(FieldError::DuplicatePlace(w[0].label()));
            }
        }
        if (places.len() as u32 + field.degree) % 2 == 0 {
            return Err(FieldError::Parity { places: places.len(), degree: field.degree });
        }
        Ok(RamificationSet { places })
    }

    /// Parse a comma-separated list of `p` / `p:selector` tokens.
    pub fn parse(field: &NumberFieldData, list: &str) -> Result<Self, FieldError> {
        let places = list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| field.resolve_place(t))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(field, places)
    }

    pub fn places(&self) -> &[FinitePlace] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn d_b(&self) -> u128 {
        self.places.iter().map(|p| p.norm as u128).product()
    }

    pub fn log_d_b(&self) -> f64 {
        self.places.iter().map(FinitePlace::log_norm).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_by_euler(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        let mut acc = 1u64;
        for _ in 0..(p - 1) / 2 {
            acc = acc * a % p;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for d in -40i64..40 {
                assert_eq!(kronecker(d, p), legendre_by_euler(d, p), "d={d} p={p}");
            }
        }
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(8, 2), 0);
        assert_eq!(kronecker(-4, 3), -1);
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_field("Q").unwrap().disc, 1);
        let f = parse_field("Q(sqrt 5)").unwrap();
        assert_eq!((f.degree, f.disc), (2, 5));
        assert_eq!(parse_field("Q(sqrt 2)").unwrap().disc, 8);
        assert_eq!(parse_field(" Q(sqrt  3) ").unwrap().disc, 12);
        assert_eq!(parse_field("Q(sqrt 12)"), Err(FieldError::NotSquarefree(12)));
        assert_eq!(parse_field("Q(sqrt 1)"), Err(FieldError::NotRealQuadratic(1)));
        assert_eq!(parse_field("Q(sqrt -3)"), Err(FieldError::NotRealQuadratic(-3)));
        assert!(matches!(parse_field("Q(sqrt5)"), Err(FieldError::Malformed(_))));
        assert!(matches!(parse_field("R"), Err(FieldError::Malformed(_))));
    }

    #[test]
    fn places_examples() {
        let q = NumberFieldData::rationals();
        let p7 = q.places_above(7).unwrap();
        assert_eq!(p7.len(), 1);
        assert_eq!((p7[0].norm, p7[0].diff_val), (7, 0));

        let k = parse_field("Q(sqrt 5)").unwrap();
        let p11 = k.places_above(11).unwrap();
        assert_eq!(p11.len(), 2);
        assert!(p11.iter().all(|pl| pl.norm == 11 && pl.f == 1));
        let p5 = k.places_above(5).unwrap();
        assert_eq!((p5.len(), p5[0].e, p5[0].norm, p5[0].diff_val), (1, 2, 5, 1));
        let p2 = k.places_above(2).unwrap();
        assert_eq!((p2[0].f, p2[0].norm), (2, 4));

        let k2 = parse_field("Q(sqrt 2)").unwrap();
        assert_eq!(k2.places_above(2).unwrap()[0].diff_val, 3);
        let k3 = parse_field("Q(sqrt 3)").unwrap();
        assert_eq!(k3.places_above(2).unwrap()[0].diff_val, 2);
        assert_eq!(q.places_above(9), Err(FieldError::NotPrime(9)));
    }

    #[test]
    fn selectors_and_parity() {
        let k = parse_field("Q(sqrt 5)").unwrap();
        assert!(matches!(k.resolve_place("11"), Err(FieldError::AmbiguousPlace { p: 11, .. })));
        assert_eq!(k.resolve_place("11:split2").unwrap().kind, PlaceKind::Split2);
        assert!(matches!(k.resolve_place("11:inert"), Err(FieldError::SelectorMismatch { .. })));
        assert_eq!(k.resolve_place("2:inert").unwrap().norm, 4);
        assert!(matches!(k.resolve_place("2:bogus"), Err(FieldError::MalformedPlace(_))));

        let q = NumberFieldData::rationals();
        assert!(matches!(RamificationSet::parse(&q, "2"), Err(FieldError::Parity { .. })));
        assert!(matches!(RamificationSet::parse(&q, "2,2"), Err(FieldError::DuplicatePlace(_))));
        let ram = RamificationSet::parse(&q, "2,3").unwrap();
        assert_eq!(ram.d_b(), 6);
        assert!(RamificationSet::parse(&q, "").unwrap().is_empty());
        let ram = RamificationSet::parse(&k, "11:split1").unwrap();
        assert_eq!(ram.d_b(), 11);
        assert!(RamificationSet::parse(&k, "11:split1,11:split2").is_err());
        assert!(RamificationSet::parse(&k, "11:split1,11:split2,5").is_ok());
    }

    #[test]
    fn render_roundtrip() {
        for s in ["Q", "Q(sqrt 2)", "Q(sqrt 5)", "Q(sqrt 13)", "Q(sqrt 15)"] {
            assert_eq!(parse_field(s).unwrap().to_string(), s);
        }
    }
}
