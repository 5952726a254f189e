//! Riemann zeta, quadratic Dirichlet L-functions and Dedekind zeta functions
//! of fields of degree at most two.
//!
//! Log-derivatives at `s = 2` come from the Dirichlet series with an
//! Euler-Maclaurin tail taken separately on each residue class; values at
//! `s = -1` only through the completed functional equation.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat, rat_int, rat_to_f64, Rational};
use crate::numberfield::{is_squarefree, kronecker, NumberFieldData};
use crate::special::{digamma, factorial, ln_gamma, CompensatedSum, BERNOULLI_EVEN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LfuncError {
    #[error("precision {requested:e} unreachable: series error bound is {achievable:e}")]
    PrecisionUnreachable { requested: f64, achievable: f64 },
    #[error("precision must be positive, got {0}")]
    InvalidPrecision(f64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not a negative discriminant")]
    NotNegative(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Computed,
    Supplied,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LSeriesValue {
    pub value: f64,
    pub precision: f64,
    pub source: Source,
}

impl LSeriesValue {
    pub fn supplied(value: f64, precision: f64) -> Self {
        LSeriesValue { value, precision, source: Source::Supplied }
    }
}

/// Work allowed for one Dirichlet series: the direct partial sum covers
/// `periods` full periods of the character, and the Euler-Maclaurin tail
/// keeps `em_terms` Bernoulli corrections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesBudget {
    pub periods: usize,
    pub em_terms: usize,
}

impl Default for SeriesBudget {
    fn default() -> Self {
        SeriesBudget { periods: 60, em_terms: 8 }
    }
}

impl SeriesBudget {
    pub fn halved(self) -> Self {
        SeriesBudget { periods: (self.periods / 2).max(1), em_terms: self.em_terms }
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// Real primitive character `n -> (d/n)` stored over one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticCharacter {
    disc: i64,
    table: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn trivial() -> Self {
        QuadraticCharacter { disc: 1, table: vec![1] }
    }

    pub fn new(disc: i64) -> Result<Self, LfuncError> {
        if !is_fundamental_discriminant(disc) {
            return Err(LfuncError::NotFundamental(disc));
        }
        let q = disc.unsigned_abs();
        let table = (0..q).map(|n| kronecker(disc, n)).collect();
        Ok(QuadraticCharacter { disc, table })
    }

    pub fn modulus(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn value(&self, n: u64) -> i8 {
        self.table[(n % self.modulus()) as usize]
    }

    pub fn is_odd(&self) -> bool {
        self.disc < 0
    }
}

/// Rising factorial `(s)_i` and its derivative in `s`, for `i = 0..=n`.
fn rising_with_derivative(s: f64, n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut p, mut dp) = (1.0, 0.0);
    for i in 0..=n {
        out.push((p, dp));
        dp = dp * (s + i as f64) + p;
        p *= s + i as f64;
    }
    out
}

/// `d^i/dt^i [t^{-s} (log t)^j]` at `t`, for `j` in {0, 1} and `i = 0..=n`.
fn power_log_derivatives(s: f64, j: u32, t: f64, n: usize) -> Vec<f64> {
    let lt = t.ln();
    rising_with_derivative(s, n)
        .into_iter()
        .enumerate()
        .map(|(i, (p, dp))| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let base = sign * t.powf(-s - i as f64);
            if j == 0 {
                base * p
            } else {
                base * (p * lt - dp)
            }
        })
        .collect()
}

/// `int_X^inf t^{-s} (log t)^j dt`, continued analytically in `s`. At `s = 1`
/// the divergent constant is dropped; callers only use that case when the
/// coefficients of the dropped constants sum to zero.
fn tail_integral(s: f64, j: u32, x: f64) -> f64 {
    let lx = x.ln();
    if (s - 1.0).abs() < 1e-300 {
        return if j == 0 { -lx } else { -0.5 * lx * lx };
    }
    let a = x.powf(1.0 - s);
    if j == 0 {
        a / (s - 1.0)
    } else {
        a * (lx / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0)))
    }
}

/// Euler-Maclaurin value of `sum_{k>=0} f(x + k q)` with `f = t^{-s} log^j t`.
/// Returns the value and the size of the last correction kept.
fn progression_tail(s: f64, j: u32, x: f64, q: f64, em_terms: usize) -> (f64, f64) {
    let derivs = power_log_derivatives(s, j, x, 2 * em_terms);
    let mut acc = CompensatedSum::new();
    acc.add(tail_integral(s, j, x) / q);
    acc.add(0.5 * derivs[0]);
    let mut last = 0.0;
    for i in 1..=em_terms {
        let term = BERNOULLI_EVEN[i - 1] / factorial(2 * i as u32) * q.powi(2 * i as i32 - 1) * derivs[2 * i - 1];
        acc.add(-term);
        last = term.abs();
    }
    (acc.value(), last)
}

#[derive(Clone, Copy, Debug)]
struct SeriesValue {
    value: f64,
    error: f64,
}

/// `sum_{n>=1} chi(n) n^{-s} (log n)^j`.
fn dirichlet_series(chi: &QuadraticCharacter, s: f64, j: u32, budget: SeriesBudget) -> SeriesValue {
    let q = chi.modulus();
    let cutoff = budget.periods as u64 * q;
    let mut acc = CompensatedSum::new();
    for n in 1..=cutoff {
        let c = chi.value(n);
        if c != 0 {
            let t = n as f64;
            let term = t.powf(-s) * if j == 0 { 1.0 } else { t.ln() };
            acc.add(c as f64 * term);
        }
    }
    let mut err = 0.0;
    for a in 1..=q {
        let c = chi.value(a);
        if c != 0 {
            let (tail, last) = progression_tail(s, j, (cutoff + a) as f64, q as f64, budget.em_terms);
            acc.add(c as f64 * tail);
            err += last;
        }
    }
    let rounding = 8.0 * f64::EPSILON * acc.magnitude();
    SeriesValue { value: acc.value(), error: 2.0 * err + rounding }
}

/// `(L'/L)(s, chi)` by direct series, valid for `s >= 1` (or `s > 1` for the
/// trivial character). Returns the ratio and its error bound.
fn l_log_deriv_series(chi: &QuadraticCharacter, s: f64, budget: SeriesBudget) -> SeriesValue {
    let l = dirichlet_series(chi, s, 0, budget);
    let dl = dirichlet_series(chi, s, 1, budget);
    let ratio = -dl.value / l.value;
    let error = (dl.error + ratio.abs() * l.error) / l.value.abs();
    SeriesValue { value: ratio, error }
}

fn check_precision(requested: f64, achievable: f64) -> Result<(), LfuncError> {
    if !(requested > 0.0) || !requested.is_finite() {
        return Err(LfuncError::InvalidPrecision(requested));
    }
    if achievable > requested {
        return Err(LfuncError::PrecisionUnreachable { requested, achievable });
    }
    Ok(())
}

fn computed(value: f64, precision: f64) -> LSeriesValue {
    LSeriesValue { value, precision, source: Source::Computed }
}

fn field_characters(field: &NumberFieldData) -> Vec<QuadraticCharacter> {
    let mut chars = vec![QuadraticCharacter::trivial()];
    if let Some(d) = field.quadratic_character_disc() {
        chars.push(QuadraticCharacter::new(d).expect("field discriminant is fundamental"));
    }
    chars
}

pub fn zeta_log_deriv_at2_with(
    field: &NumberFieldData,
    prec: f64,
    budget: SeriesBudget,
) -> Result<LSeriesValue, LfuncError> {
    let mut value = 0.0;
    let mut error = 0.0;
    for chi in field_characters(field) {
        let r = l_log_deriv_series(&chi, 2.0, budget);
        value += r.value;
        error += r.error;
    }
    check_precision(prec, error)?;
    Ok(computed(value, prec))
}

/// `zeta_F'(2) / zeta_F(2)`.
pub fn zeta_log_deriv_at2(field: &NumberFieldData, prec: f64) -> Result<LSeriesValue, LfuncError> {
    zeta_log_deriv_at2_with(field, prec, SeriesBudget::default())
}

/// Log-derivative of the archimedean factor `(pi^{-s/2} Gamma(s/2))^n`.
pub fn gamma_factor_log_deriv(s: f64, degree: u32) -> f64 {
    degree as f64 * (-0.5 * PI.ln() + 0.5 * digamma(0.5 * s))
}

/// Convert `zeta_F'/zeta_F` at `s` to its value at `1 - s` through
/// `Lambda_F(1-s) = d_F^{s-1/2} Lambda_F(s)`.
pub fn functional_equation_swap(field: &NumberFieldData, s: f64, log_deriv_at_s: f64) -> f64 {
    let n = field.degree;
    let completed = log_deriv_at_s + gamma_factor_log_deriv(s, n);
    -((field.disc as f64).ln() + completed) - gamma_factor_log_deriv(1.0 - s, n)
}

/// `zeta_F'(-1) / zeta_F(-1)`.
pub fn zeta_log_deriv_at_minus1(field: &NumberFieldData, prec: f64) -> Result<LSeriesValue, LfuncError> {
    let at2 = zeta_log_deriv_at2(field, prec)?;
    Ok(computed(functional_equation_swap(field, 2.0, at2.value), prec))
}

fn bernoulli2_poly(x: &Rational) -> Rational {
    x * x - x + rat(1, 6)
}

/// Generalized Bernoulli number `B_{2,chi}` for the character of `disc`.
pub fn generalized_bernoulli_b2(disc: i64) -> Result<Rational, LfuncError> {
    let chi = QuadraticCharacter::new(disc)?;
    let d = chi.modulus() as i64;
    let mut acc = Rational::zero();
    for a in 1..=d {
        let c = chi.value(a as u64);
        if c != 0 {
            acc += bernoulli2_poly(&rat(a, d)) * rat_int(c as i64);
        }
    }
    Ok(acc * rat_int(d))
}

/// `L(-1, chi_disc) = -B_{2,chi} / 2`.
pub fn quadratic_l_at_minus1(disc: i64) -> Result<Rational, LfuncError> {
    Ok(-generalized_bernoulli_b2(disc)? / rat_int(2))
}

/// `zeta_F(-1)` as an exact rational.
pub fn zeta_value_at_minus1(field: &NumberFieldData) -> Rational {
    let zeta_q = rat(-1, 12);
    match field.quadratic_character_disc() {
        None => zeta_q,
        Some(d) => zeta_q * quadratic_l_at_minus1(d).expect("field discriminant is fundamental"),
    }
}

fn negative_character(disc: i64) -> Result<QuadraticCharacter, LfuncError> {
    if disc >= 0 {
        return Err(LfuncError::NotNegative(disc));
    }
    QuadraticCharacter::new(disc)
}

/// `L(0, chi) = -(1/|d|) sum_a chi(a) a` for an odd character.
pub fn quadratic_l_at0(disc: i64) -> Result<Rational, LfuncError> {
    let chi = negative_character(disc)?;
    let q = chi.modulus() as i64;
    let s: i64 = (1..=q).map(|a| chi.value(a as u64) as i64 * a).sum();
    Ok(rat(-s, q))
}

/// `L'(0, chi) / L(0, chi)` for a negative fundamental discriminant, from
/// `zeta'(0, x) = log Gamma(x) - log(2 pi)/2`.
pub fn quadratic_l_log_deriv_at0(disc: i64, prec: f64) -> Result<LSeriesValue, LfuncError> {
    let chi = negative_character(disc)?;
    let l0 = quadratic_l_at0(disc)?;
    assert!(!l0.is_zero(), "L(0, chi) vanished for an odd primitive character");
    let q = chi.modulus();
    let qf = q as f64;
    let mut acc = CompensatedSum::new();
    for a in 1..q {
        let c = chi.value(a);
        if c != 0 {
            acc.add(c as f64 * ln_gamma(a as f64 / qf));
        }
    }
    let l0f = rat_to_f64(&l0);
    let dl0 = acc.value() - qf.ln() * l0f;
    let achievable = 64.0 * f64::EPSILON * (acc.magnitude() + qf.ln() * l0f.abs()) / l0f.abs();
    check_precision(prec, achievable)?;
    Ok(computed(dl0 / l0f, prec))
}

/// `L'(s, chi) / L(s, chi)` by direct Dirichlet series for real `s >= 1`.
pub fn quadratic_l_log_deriv_direct(disc: i64, s: f64, prec: f64) -> Result<LSeriesValue, LfuncError> {
    let chi = QuadraticCharacter::new(disc)?;
    let r = l_log_deriv_series(&chi, s, SeriesBudget::default());
    check_precision(prec, r.error)?;
    Ok(computed(r.value, prec))
}

/// For odd `chi` of conductor `q`, the completed function
/// `(q/pi)^{s/2} Gamma((s+1)/2) L(s, chi)` is invariant under `s -> 1 - s`;
/// this maps `L'/L(0)` to `L'/L(1)`.
pub fn odd_log_deriv_zero_to_one(disc: i64, at0: f64) -> f64 {
    let q = disc.unsigned_abs() as f64;
    -(q / PI).ln() - 0.5 * digamma(0.5) - 0.5 * digamma(1.0) - at0
}

/// Independent reference computations used to cross-check the main routes.
pub mod oracle {
    use super::*;

    /// Hurwitz zeta `sum_{n>=0} (n+x)^{-s}` continued to all real `s != 1`,
    /// with `j = 1` giving `-d/ds`.
    pub fn hurwitz_series(s: f64, x: f64, j: u32, direct_terms: usize, em_terms: usize) -> f64 {
        let mut acc = CompensatedSum::new();
        for n in 0..direct_terms {
            let t = n as f64 + x;
            acc.add(t.powf(-s) * if j == 0 { 1.0 } else { t.ln() });
        }
        let (tail, _) = progression_tail(s, j, direct_terms as f64 + x, 1.0, em_terms);
        acc.add(tail);
        acc.value()
    }

    /// At `s = 0, -1, -2, ...` the Euler-Maclaurin tail is exact, so one
    /// direct term suffices and avoids cancellation among large powers.
    pub fn hurwitz_zeta(s: f64, x: f64) -> f64 {
        let direct = if s <= 0.0 && s.fract() == 0.0 { 1 } else { 40 };
        hurwitz_series(s, x, 0, direct, 9)
    }

    pub fn hurwitz_zeta_ds(s: f64, x: f64) -> f64 {
        -hurwitz_series(s, x, 1, 40, 9)
    }

    /// `(L(s, chi), L'(s, chi))` from `L = q^{-s} sum_a chi(a) zeta(s, a/q)`.
    pub fn l_and_derivative_hurwitz(disc: i64, s: f64) -> (f64, f64) {
        let chi = if disc == 1 { QuadraticCharacter::trivial() } else { QuadraticCharacter::new(disc).unwrap() };
        let q = chi.modulus();
        let qf = q as f64;
        let (mut h, mut dh) = (CompensatedSum::new(), CompensatedSum::new());
        for a in 1..=q {
            let c = chi.value(a) as f64;
            if c != 0.0 {
                let x = a as f64 / qf;
                h.add(c * hurwitz_zeta(s, x));
                dh.add(c * hurwitz_zeta_ds(s, x));
            }
        }
        let scale = qf.powf(-s);
        let l = scale * h.value();
        let dl = -qf.ln() * l + scale * dh.value();
        (l, dl)
    }

    /// `log A` (Glaisher-Kinkelin) from the asymptotic expansion of the
    /// hyperfactorial `sum_{k<=n} k log k`.
    pub fn log_glaisher() -> f64 {
        let n = 200u32;
        let nf = n as f64;
        let hyper: CompensatedSum = (1..=n).map(|k| k as f64 * (k as f64).ln()).collect();
        let mut acc = CompensatedSum::new();
        acc.add(hyper.value());
        acc.add(-(nf * nf / 2.0 + nf / 2.0 + 1.0 / 12.0) * nf.ln());
        acc.add(nf * nf / 4.0);
        for i in 2..=6u32 {
            // B_{2i}/(2i)! * f^{(2i-1)}(n) with f^{(m)}(t) = (-1)^m (m-2)! t^{1-m}.
            let deriv = -factorial(2 * i - 3) / nf.powi(2 * i as i32 - 2);
            acc.add(-BERNOULLI_EVEN[i as usize - 1] / factorial(2 * i) * deriv);
        }
        acc.value()
    }

    /// `zeta'(-1)/zeta(-1) = 12 log A - 1`.
    pub fn zeta_log_deriv_minus1_glaisher() -> f64 {
        12.0 * log_glaisher() - 1.0
    }

    /// `zeta_F(-1) = (1/60) sum_{b^2 < D, b = D mod 2} sigma_1((D - b^2)/4)` for a
    /// real quadratic field of discriminant `D`.
    pub fn dedekind_zeta_minus1_siegel(disc: u64) -> Rational {
        let sigma1 = |n: u64| -> i64 { (1..=n).filter(|d| n % d == 0).map(|d| d as i64).sum() };
        let mut acc = 0i64;
        let mut b = -(((disc as f64).sqrt()) as i64);
        while b * b <= disc as i64 {
            let rem = disc as i64 - b * b;
            if rem > 0 && (b - disc as i64).rem_euclid(2) == 0 {
                acc += sigma1((rem / 4) as u64);
            }
            b += 1;
        }
        rat(acc, 60)
    }

    /// `-sum_P sum_k log N(P) N(P)^{-2k}` over prime ideals with `N(P) <= bound`,
    /// plus a prime-number-theorem estimate of the remainder.
    pub fn dedekind_log_deriv_at2_euler(field: &NumberFieldData, bound: u64) -> f64 {
        let bound = bound as usize;
        let mut composite = vec![false; bound + 1];
        let mut acc = CompensatedSum::new();
        for p in 2..=bound {
            if composite[p] {
                continue;
            }
            let mut m = p * p;
            while m <= bound {
                composite[m] = true;
                m += p;
            }
            for place in field.places_above(p as u64).expect("sieved prime") {
                let nv = place.norm as f64;
                if place.norm as usize > bound {
                    continue;
                }
                let x = nv.powi(-2);
                acc.add(-place.log_norm() * x / (1.0 - x));
            }
        }
        // Prime ideals of norm up to X number ~ X/log X, so the remainder is
        // ~ -int_B^inf dt/t^2.
        acc.add(-1.0 / bound as f64);
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_field;
    use num_traits::Signed;

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, -15, -20, 5, 8, 12, 13, 21, 24] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [-1, -12, -16, 1, 4, 9, 16, 20, 2, 3] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn exact_special_values() {
        assert_eq!(zeta_value_at_minus1(&NumberFieldData::rationals()), rat(-1, 12));
        assert_eq!(zeta_value_at_minus1(&parse_field("Q(sqrt 5)").unwrap()), rat(1, 30));
        assert_eq!(zeta_value_at_minus1(&parse_field("Q(sqrt 2)").unwrap()), rat(1, 12));
        assert_eq!(quadratic_l_at0(-4).unwrap(), rat(1, 2));
        assert_eq!(quadratic_l_at0(-3).unwrap(), rat(1, 3));
        assert_eq!(generalized_bernoulli_b2(-4).unwrap(), Rational::zero());
        assert!(quadratic_l_at0(5).is_err());
        assert!(quadratic_l_at0(-12).is_err());
    }

    #[test]
    fn siegel_formula_matches_bernoulli_route() {
        for d in 2..200i64 {
            if is_squarefree(d) {
                let field = NumberFieldData::real_quadratic(d).unwrap();
                let disc = field.disc as u64;
                assert_eq!(zeta_value_at_minus1(&field), oracle::dedekind_zeta_minus1_siegel(disc), "d={d}");
            }
        }
    }

    #[test]
    fn series_engine_matches_known_zeta_values() {
        let triv = QuadraticCharacter::trivial();
        let z2 = dirichlet_series(&triv, 2.0, 0, SeriesBudget::default());
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-14);
        // Leibniz: L(1, chi_{-4}) = pi/4.
        let chi = QuadraticCharacter::new(-4).unwrap();
        let l1 = dirichlet_series(&chi, 1.0, 0, SeriesBudget::default());
        assert!((l1.value - PI / 4.0).abs() < 1e-14);
        // Hurwitz at s = -1 is exact: zeta(-1, x) = -B_2(x)/2.
        let x: f64 = 0.3;
        let expect = -(x * x - x + 1.0 / 6.0) / 2.0;
        assert!((oracle::hurwitz_zeta(-1.0, x) - expect).abs() < 1e-11);
    }

    #[test]
    fn precision_contract() {
        let q = NumberFieldData::rationals();
        assert!(matches!(zeta_log_deriv_at2(&q, 1e-20), Err(LfuncError::PrecisionUnreachable { .. })));
        assert!(matches!(zeta_log_deriv_at2(&q, 0.0), Err(LfuncError::InvalidPrecision(_))));
        let tight = SeriesBudget { periods: 1, em_terms: 1 };
        assert!(zeta_log_deriv_at2_with(&q, 1e-12, tight).is_err());
    }

    #[test]
    fn gamma_factor_constants() {
        use crate::special::EULER_GAMMA as G;
        assert!((gamma_factor_log_deriv(2.0, 1) + 0.5 * (G + PI.ln())).abs() < 1e-14);
        let at_m1 = -0.5 * (G + (4.0 * PI).ln()) + 1.0;
        assert!((gamma_factor_log_deriv(-1.0, 2) - 2.0 * at_m1).abs() < 1e-13);
    }

    #[test]
    fn l_at_zero_sign_of_abs() {
        assert!(quadratic_l_at0(-7).unwrap().is_positive());
    }
}
