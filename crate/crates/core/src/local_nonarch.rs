//! Closed-form local quantities at a finite place: Whittaker values on the
//! standard quaternion orders, their derivative combinations, Siegel-Weil
//! values, intertwining constants, averaged constants and the cancellation
//! identities they satisfy.
//!
//! Exact values are computed at integer `s`, where `q = N^{-s}` is rational
//! and `|d| = N^{-delta}` contributes at worst a square root of `N`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat, rat_int, rat_pow, LogMultiple, Rational, Surd};
use crate::numberfield::is_prime;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalError {
    #[error("N = {0} is not a prime power >= 2")]
    InvalidNorm(u64),
    #[error("no closed form for v(a) = {r} with v(d) = {delta}; use the lattice-count oracle")]
    UnsupportedClosedForm { r: i64, delta: u32 },
    #[error("operation needs the {expected:?} algebra")]
    WrongAlgebra { expected: Algebra },
    #[error("v(a) = {0} must be non-negative here")]
    NegativeValuation(i64),
    #[error("assembly mismatch: {0}")]
    AssemblyMismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algebra {
    #[serde(rename = "split")]
    MatrixSplit,
    #[serde(rename = "nonsplit")]
    DivisionNonsplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SPoint {
    Exact(i64),
    Real(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalWhittakerSpec {
    pub norm: u64,
    pub delta: u32,
    pub r: i64,
    pub u_unit: bool,
    pub algebra: Algebra,
    pub s: SPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LocalValue {
    Exact(Surd),
    Real(f64),
}

impl LocalValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            LocalValue::Exact(x) => x.to_f64(),
            LocalValue::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Surd> {
        match self {
            LocalValue::Exact(x) => Some(x),
            LocalValue::Real(_) => None,
        }
    }
}

/// `(p, f)` with `N = p^f`, if `N` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut f = 0;
    while m % p == 0 {
        m /= p;
        f += 1;
    }
    (m == 1 && is_prime(p)).then_some((p, f))
}

fn check_norm(n: u64) -> Result<(), LocalError> {
    prime_power(n).map(|_| ()).ok_or(LocalError::InvalidNorm(n))
}

fn nq(n: u64) -> Rational {
    rat_int(n as i64)
}

/// `N^{-s}`.
fn q_of(n: u64, s: i64) -> Rational {
    rat_pow(&nq(n), -s)
}

/// `|d|^{e/2} = N^{-delta e / 2}`.
fn abs_d_half(n: u64, delta: u32, e: i64) -> Surd {
    Surd::half_power(n, -(delta as i64) * e)
}

fn geometric(x: &Rational, terms: i64) -> Rational {
    let mut acc = Rational::zero();
    let mut pw = Rational::one();
    for _ in 0..terms.max(0) {
        acc += &pw;
        pw *= x;
    }
    acc
}

fn geometric_f64(x: f64, terms: i64) -> f64 {
    (0..terms.max(0)).map(|n| x.powi(n as i32)).sum()
}

/// `vol(O_B^x)` of the division maximal order: `|d|^2 N^{-1} (1 - N^{-2})`.
pub fn division_unit_volume(n: u64, delta: u32) -> Rational {
    let nn = nq(n);
    rat_pow(&nn, -2 * delta as i64) / &nn * (Rational::one() - rat_pow(&nn, -2))
}

fn split_exact(n: u64, delta: u32, r: i64, s: i64) -> Surd {
    let nn = nq(n);
    let q = q_of(n, s);
    let first = (Rational::one() - &q / (&nn * &nn)) * geometric(&(&q / &nn), r + 1);
    let second = (Rational::one() - &q) * geometric(&(&nn * &q), delta as i64);
    let d32 = abs_d_half(n, delta, 3).scale(&rat_pow(&q, delta as i64));
    let d52 = abs_d_half(n, delta, 5);
    &d32.scale(&first) + &d52.scale(&second)
}

/// The displayed fractions, with removable singularities handled by the
/// equivalent finite geometric sums.
fn split_real(n: u64, delta: u32, r: i64, s: f64) -> f64 {
    let nf = n as f64;
    let d = nf.powi(-(delta as i32));
    let lead = d.powf(s + 1.5) * (1.0 - nf.powf(-(s + 2.0)));
    let den1 = 1.0 - nf.powf(-(s + 1.0));
    let frac1 = if den1.abs() > 1e-6 {
        (1.0 - nf.powf(-(r as f64 + 1.0) * (s + 1.0))) / den1
    } else {
        geometric_f64(nf.powf(-(s + 1.0)), r + 1)
    };
    let den2 = 1.0 - nf.powf(-(s - 1.0));
    let frac2 = if den2.abs() > 1e-6 {
        (1.0 - d.powf(s - 1.0)) / den2
    } else {
        geometric_f64(nf.powf(1.0 - s), delta as i64)
    };
    lead * frac1 + d.powf(2.5) * (1.0 - nf.powf(-s)) * frac2
}

/// Local Whittaker value for the split (matrix) algebra.
pub fn whittaker_split(spec: &LocalWhittakerSpec) -> Result<LocalValue, LocalError> {
    check_norm(spec.norm)?;
    if spec.algebra != Algebra::MatrixSplit {
        return Err(LocalError::WrongAlgebra { expected: Algebra::MatrixSplit });
    }
    let zero = || match spec.s {
        SPoint::Exact(_) => LocalValue::Exact(Surd::zero(spec.norm)),
        SPoint::Real(_) => LocalValue::Real(0.0),
    };
    if !spec.u_unit || spec.r < -(spec.delta as i64) {
        return Ok(zero());
    }
    if spec.r < 0 {
        return Err(LocalError::UnsupportedClosedForm { r: spec.r, delta: spec.delta });
    }
    Ok(match spec.s {
        SPoint::Exact(s) => LocalValue::Exact(split_exact(spec.norm, spec.delta, spec.r, s)),
        SPoint::Real(s) => LocalValue::Real(split_real(spec.norm, spec.delta, spec.r, s)),
    })
}

/// Bracketed factor `G` in `W = -|d|^{1/2} vol(O_B^x) G` for the division
/// order; `None` when the value vanishes identically.
fn nonsplit_bracket_exact(n: u64, delta: u32, r: i64, s: i64) -> Option<Rational> {
    let nn = nq(n);
    let q = q_of(n, s);
    let nq_ = &nn * &q;
    let d = delta as i64;
    let head = |top: i64| (Rational::one() - &q) * geometric(&nq_, top + 1);
    match r {
        r if r < -d => None,
        r if r < 0 => Some(head(r + d)),
        0 => {
            let boundary = rat_pow(&nq_, d) * &q / (Rational::one() - nn.recip());
            Some(head(d) + boundary)
        }
        _ => Some(head(d)),
    }
}

fn nonsplit_bracket_real(n: u64, delta: u32, r: i64, s: f64) -> Option<f64> {
    let nf = n as f64;
    let d = delta as i64;
    let head = |k: i64| {
        // (1 - N^{-s}) (1 - N^{k(1-s)}) / (1 - N^{1-s})
        let den = 1.0 - nf.powf(1.0 - s);
        let frac = if den.abs() > 1e-6 {
            (1.0 - nf.powf(k as f64 * (1.0 - s))) / den
        } else {
            geometric_f64(nf.powf(1.0 - s), k)
        };
        (1.0 - nf.powf(-s)) * frac
    };
    match r {
        r if r < -d => None,
        r if r < 0 => Some(head(r + d + 1)),
        0 => Some(head(d + 1) + nf.powf(d as f64 * (1.0 - s)) * nf.powf(-s) / (1.0 - 1.0 / nf)),
        _ => Some(head(d + 1)),
    }
}

/// Local Whittaker value for the division (nonsplit) algebra, with
/// `vol(O_B^x) = |d|^2 N^{-1}(1 - N^{-2})`.
pub fn whittaker_nonsplit(spec: &LocalWhittakerSpec) -> Result<LocalValue, LocalError> {
    check_norm(spec.norm)?;
    if spec.algebra != Algebra::DivisionNonsplit {
        return Err(LocalError::WrongAlgebra { expected: Algebra::DivisionNonsplit });
    }
    let (n, delta, r) = (spec.norm, spec.delta, spec.r);
    Ok(match spec.s {
        SPoint::Exact(s) => {
            let g = if spec.u_unit { nonsplit_bracket_exact(n, delta, r, s) } else { None };
            LocalValue::Exact(match g {
                None => Surd::zero(n),
                Some(g) => -abs_d_half(n, delta, 1).scale(&(division_unit_volume(n, delta) * g)),
            })
        }
        SPoint::Real(s) => {
            let g = if spec.u_unit { nonsplit_bracket_real(n, delta, r, s) } else { None };
            LocalValue::Real(match g {
                None => 0.0,
                Some(g) => {
                    let nf = n as f64;
                    let vol = nf.powi(-2 * delta as i32) / nf * (1.0 - nf.powi(-2));
                    -nf.powf(-(delta as f64) / 2.0) * vol * g
                }
            })
        }
    })
}

/// Dispatch on the algebra of `spec`.
pub fn whittaker(spec: &LocalWhittakerSpec) -> Result<LocalValue, LocalError> {
    match spec.algebra {
        Algebra::MatrixSplit => whittaker_split(spec),
        Algebra::DivisionNonsplit => whittaker_nonsplit(spec),
    }
}

pub fn split_exact_at(n: u64, delta: u32, r: i64, s: i64) -> Result<Surd, LocalError> {
    let spec = LocalWhittakerSpec { norm: n, delta, r, u_unit: true, algebra: Algebra::MatrixSplit, s: SPoint::Exact(s) };
    Ok(whittaker_split(&spec)?.exact().cloned().expect("exact point"))
}

pub fn split_real_at(n: u64, delta: u32, r: i64, s: f64) -> Result<f64, LocalError> {
    let spec = LocalWhittakerSpec { norm: n, delta, r, u_unit: true, algebra: Algebra::MatrixSplit, s: SPoint::Real(s) };
    Ok(whittaker_split(&spec)?.to_f64())
}

pub fn nonsplit_exact_at(n: u64, delta: u32, r: i64, s: i64) -> Result<Surd, LocalError> {
    let spec =
        LocalWhittakerSpec { norm: n, delta, r, u_unit: true, algebra: Algebra::DivisionNonsplit, s: SPoint::Exact(s) };
    Ok(whittaker_nonsplit(&spec)?.exact().cloned().expect("exact point"))
}

/// `P(r) = (r+2)N^{-(r+1)} - r N^{-(r+2)} - (r+2)N^{-1} + r`.
fn hecke_polynomial(n: u64, r: i64) -> Rational {
    let nn = nq(n);
    let rr = rat_int(r);
    let r2 = rat_int(r + 2);
    &r2 * rat_pow(&nn, -(r + 1)) - &rr * rat_pow(&nn, -(r + 2)) - &r2 / &nn + rr
}

/// The three terms of `W'(0) - (1/2) log|a| W(0)` for the split algebra,
/// each a rational multiple of `log N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDerivativeCombo {
    pub zeta_term: LogMultiple,
    pub hecke_term: LogMultiple,
    pub different_term: LogMultiple,
}

impl SplitDerivativeCombo {
    pub fn total(&self) -> LogMultiple {
        &(&self.zeta_term + &self.hecke_term) + &self.different_term
    }

    pub fn to_f64(&self) -> f64 {
        self.total().to_f64()
    }
}

pub fn whittaker_split_deriv_combo(n: u64, delta: u32, r: i64) -> Result<SplitDerivativeCombo, LocalError> {
    check_norm(n)?;
    if r < 0 {
        return Err(LocalError::NegativeValuation(r));
    }
    let nn = nq(n);
    let w0 = split_exact_at(n, delta, r, 0)?;
    let ninv2 = rat_pow(&nn, -2);
    // -zeta_v'(2)/zeta_v(2) + log|d| in units of log N.
    let zeta_coeff = &ninv2 / (Rational::one() - &ninv2) - rat_int(delta as i64);
    let d32 = abs_d_half(n, delta, 3);
    let ninv = nn.recip();
    let hecke = (Rational::one() + &ninv) / (rat_int(2) * (Rational::one() - &ninv)) * hecke_polynomial(n, r);
    let abs_d = rat_pow(&nn, -(delta as i64));
    let diff = (Rational::one() - abs_d) / (&nn - Rational::one());
    Ok(SplitDerivativeCombo {
        zeta_term: LogMultiple::new(w0.scale(&zeta_coeff), n),
        hecke_term: LogMultiple::new(d32.scale(&hecke), n),
        different_term: LogMultiple::new(d32.scale(&diff), n),
    })
}

/// `d/ds W(s)|_{s=0} - (1/2) log|a| W(0)` by central differences of the
/// real-`s` closed form.
pub fn split_deriv_combo_numeric(n: u64, delta: u32, r: i64, h: f64) -> Result<f64, LocalError> {
    let wp = split_real_at(n, delta, r, h)?;
    let wm = split_real_at(n, delta, r, -h)?;
    let w0 = split_real_at(n, delta, r, 0.0)?;
    let log_abs_a = -(r as f64) * (n as f64).ln();
    Ok((wp - wm) / (2.0 * h) - 0.5 * log_abs_a * w0)
}

/// Siegel-Weil value at `s = 0` on the standard order times `O^x`.
pub fn siegel_weil_whittaker(n: u64, delta: u32, r: i64, algebra: Algebra, u_unit: bool) -> Result<Surd, LocalError> {
    check_norm(n)?;
    if !u_unit || r < 0 {
        return Ok(Surd::zero(n));
    }
    let nn = nq(n);
    let abs_a = rat_pow(&nn, -r);
    let base = nn.recip() * (Rational::one() + nn.recip());
    let d32 = abs_d_half(n, delta, 3);
    Ok(match algebra {
        Algebra::DivisionNonsplit => -d32.scale(&(base * abs_a)),
        Algebra::MatrixSplit => d32.scale(&(base * (nn - abs_a))),
    })
}

/// Coefficients of the preimage `(phi+, phi-)` of `1_{O x O^x}`.
pub fn wall_crossing_pair(n: u64, delta: u32) -> Result<(Surd, Surd), LocalError> {
    check_norm(n)?;
    let nn = nq(n);
    let c = abs_d_half(n, delta, -3).scale(&(Rational::one() + nn.recip()).recip());
    let minus = -&c;
    Ok((c, minus))
}

/// `r(w) 1_{O_B}(0, u)` for a unit `u`: the Weil index (`+1` matrix, `-1`
/// division) times the self-dual volume of the order.
pub fn order_w_value(n: u64, delta: u32, algebra: Algebra) -> Rational {
    let nn = nq(n);
    let d2 = rat_pow(&nn, -2 * delta as i64);
    match algebra {
        Algebra::MatrixSplit => d2,
        Algebra::DivisionNonsplit => -d2 / nn,
    }
}

/// Exact result of an identity between two sides.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactIdentity {
    pub label: String,
    pub lhs: Surd,
    pub rhs: Surd,
}

impl ExactIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `r(w)phi+(0,u) + r(w)phi-(0,u)` against `int B_a(1,u) da = vol(O) = |d|^{1/2}`.
pub fn fourier_inversion_check(n: u64, delta: u32) -> Result<ExactIdentity, LocalError> {
    let (cp, cm) = wall_crossing_pair(n, delta)?;
    let lhs = &cp.scale(&order_w_value(n, delta, Algebra::MatrixSplit))
        + &cm.scale(&order_w_value(n, delta, Algebra::DivisionNonsplit));
    let rhs = abs_d_half(n, delta, 1);
    Ok(ExactIdentity { label: format!("fourier_inversion[N={n},delta={delta}]"), lhs, rhs })
}

/// `int_{F_v} W(s, 1, u) da` for the division order at integer `s`,
/// summing the pieces `v(a) = r` with measure `|d|^{1/2} N^{-r}(1 - N^{-1})`.
pub fn nonsplit_integral(n: u64, delta: u32, s: i64) -> Result<Surd, LocalError> {
    check_norm(n)?;
    let nn = nq(n);
    let shell = |r: i64| rat_pow(&nn, -r) * (Rational::one() - nn.recip());
    let mut acc = Surd::zero(n);
    for r in -(delta as i64)..=0 {
        acc = &acc + &nonsplit_exact_at(n, delta, r, s)?.scale(&shell(r));
    }
    // All r >= 1 share one value; their shells add up to N^{-1}.
    acc = &acc + &nonsplit_exact_at(n, delta, 1, s)?.scale(&nn.recip());
    Ok(acc * abs_d_half(n, delta, 1))
}

/// s-independence of the division-order Whittaker integral at `s = 1, 2, 3`.
pub fn nonsplit_integral_check(n: u64, delta: u32) -> Result<Vec<ExactIdentity>, LocalError> {
    let base = nonsplit_integral(n, delta, 1)?;
    let mut out = Vec::new();
    for s in [2, 3] {
        out.push(ExactIdentity {
            label: format!("nonsplit_integral[N={n},delta={delta},s=1 vs s={s}]"),
            lhs: base.clone(),
            rhs: nonsplit_integral(n, delta, s)?,
        });
    }
    // Fourier inversion: the common value is r(w)phi(0,u).
    let (w_phi, _) = intertwining_w_value(n, delta)?;
    out.push(ExactIdentity {
        label: format!("nonsplit_integral[N={n},delta={delta},value]"),
        lhs: base,
        rhs: Surd::rational(n, w_phi),
    });
    Ok(out)
}

/// `r(w)phi(0,u)` for the division unit group and the ratio
/// `c_phi(w,0,u) / r(w)phi(0,u)` as a multiple of `log N`.
pub fn intertwining_w_value(n: u64, delta: u32) -> Result<(Rational, LogMultiple), LocalError> {
    check_norm(n)?;
    let nn = nq(n);
    let w_phi = -division_unit_volume(n, delta);
    let ratio = if delta % 2 == 0 { (Rational::one() - &nn) / (Rational::one() + &nn) } else { Rational::zero() };
    Ok((w_phi, LogMultiple::new(Surd::rational(n, ratio), n)))
}

/// `sum_{n>=0} N^{n(1-s)} N^{-2 floor((n - delta)/2)} |d q(j)|` at integer
/// `s >= 1`, summed in closed form over pairs of consecutive terms.
pub fn intertwining_series(n: u64, delta: u32, s: i64) -> Rational {
    let nn = nq(n);
    let x = rat_pow(&nn, 1 - s);
    let d = delta as i64;
    let dq = rat_pow(&nn, -d - 1);
    let mut head = Rational::zero();
    for k in 0..d {
        let fl = (k - d).div_euclid(2);
        head += rat_pow(&x, k) * rat_pow(&nn, -2 * fl);
    }
    let pair = rat_pow(&x, d) * (Rational::one() + &x);
    let tail = pair / (Rational::one() - rat_pow(&nn, -2 * s));
    (head + tail) * dq
}

/// The displayed closed form of the same series, `|d q(j)|` included.
pub fn intertwining_series_closed(n: u64, delta: u32, s: f64) -> f64 {
    let nf = n as f64;
    if delta % 2 == 0 {
        (1.0 + nf.powf(1.0 - s)) / nf / (1.0 - nf.powf(-2.0 * s))
    } else {
        (1.0 + nf.powf(-1.0 - s)) / (1.0 - nf.powf(-2.0 * s))
    }
}

/// Normalized `W°(s, w, u)` up to its Weil-index sign.
pub fn intertwining_normalized(n: u64, delta: u32, s: f64) -> f64 {
    let nf = n as f64;
    if delta % 2 == 0 {
        (1.0 + nf.powf(1.0 - s)) / nf / (1.0 + nf.powf(-1.0 - s))
    } else {
        1.0
    }
}

/// `r(w) kbar(0,u) / r(w) phi(0,u)` as a multiple of `log N`.
pub fn averaged_kbar_w(n: u64, delta: u32) -> Result<LogMultiple, LocalError> {
    check_norm(n)?;
    let nn = nq(n);
    let d = rat_int(delta as i64);
    let c = if delta % 2 == 0 {
        &nn / (&nn + Rational::one()) + d / rat_int(2)
    } else {
        (d + Rational::one()) / rat_int(2)
    };
    Ok(LogMultiple::new(Surd::rational(n, -c), n))
}

/// The same ratio from the shell decomposition `v(q(y_2)) = 2i`.
pub fn averaged_kbar_shell_sum(n: u64, delta: u32) -> Rational {
    let nn = nq(n);
    let abs_d = rat_pow(&nn, -(delta as i64));
    let denom = &nn * &nn - Rational::one();
    let mut x = Rational::zero();
    let d = delta as i64;
    for i in ((-d + 1).div_euclid(2))..0 {
        if 2 * i < -d {
            continue;
        }
        let term = (&nn * rat_pow(&nn, 2 * i) - &abs_d) / &denom * (Rational::one() - rat_pow(&nn, -2)) * rat_pow(&nn, -2 * i);
        x += term;
    }
    x += (&nn - &abs_d) / &denom;
    // r(w) kbar = -gamma |d| X log N, r(w) phi = gamma N^{-1} |d| on the phi_2 side.
    -(&nn * x)
}

/// `(ratio, integral)`: `r(w) l(0,u) = ratio * r(w) phi(0,u)` and
/// `int l(y,u) dy` for a unit `u`.
pub fn averaged_j_w(n: u64, delta: u32) -> Result<(Rational, Rational), LocalError> {
    check_norm(n)?;
    let nn = nq(n);
    let ratio = -(&nn - Rational::one()) / (rat_int(4) * (&nn + Rational::one()));
    let one_minus = Rational::one() - nn.recip();
    let integral = rat(1, 4) * rat_pow(&nn, -2 * delta as i64) / &nn * &one_minus * &one_minus;
    Ok((ratio, integral))
}

/// Solve `A0 + A1 = 0`, `(N+1)(A0 - A1) = 1/2`.
pub fn component_weights(n: u64) -> Result<(Rational, Rational), LocalError> {
    check_norm(n)?;
    // Cramer's rule on [[1, 1], [N+1, -(N+1)]] (A0, A1)^T = (0, 1/2)^T.
    let m = rat_int(n as i64 + 1);
    let (a, b, c, d) = (Rational::one(), Rational::one(), m.clone(), -m);
    let (e, f) = (Rational::zero(), rat(1, 2));
    let det = &a * &d - &b * &c;
    let a0 = (&e * &d - &b * &f) / &det;
    let a1 = (&a * &f - &e * &c) / &det;
    Ok((a0, a1))
}

pub fn sigma1_prime_power(p: u64, r: i64) -> Rational {
    geometric(&nq(p), r + 1)
}

/// The Hecke-Hodge defect in its displayed form and in the raw form
/// `(1 - N^{-2}) |d|^{3/2} N^{-r} (-2 sum_i i N^{r-i} + r sigma_1(p^r))`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeHodgeDefect {
    pub displayed: LogMultiple,
    pub raw: LogMultiple,
}

pub fn hecke_hodge_defect(n: u64, delta: u32, r: i64, u_unit: bool) -> Result<HeckeHodgeDefect, LocalError> {
    check_norm(n)?;
    if !u_unit {
        let z = LogMultiple::new(Surd::zero(n), n);
        return Ok(HeckeHodgeDefect { displayed: z.clone(), raw: z });
    }
    if r < 0 {
        return Err(LocalError::NegativeValuation(r));
    }
    let nn = nq(n);
    let d32 = abs_d_half(n, delta, 3);
    let ninv = nn.recip();
    let disp = (Rational::one() + &ninv) / (Rational::one() - &ninv) * hecke_polynomial(n, r);
    let mut z = Rational::zero();
    for i in 0..=r {
        z -= rat_int(2 * i) * rat_pow(&nn, r - i);
    }
    z += rat_int(r) * sigma1_prime_power(n, r);
    let raw = (Rational::one() - rat_pow(&nn, -2)) * rat_pow(&nn, -r) * z;
    let out = HeckeHodgeDefect {
        displayed: LogMultiple::new(d32.scale(&disp), n),
        raw: LogMultiple::new(d32.scale(&raw), n),
    };
    if out.displayed != out.raw {
        return Err(LocalError::AssemblyMismatch(format!("Hecke defect routes differ at N={n}, r={r}")));
    }
    Ok(out)
}

/// Combo minus half the defect against the zeta and different terms.
pub fn cancellation_split(n: u64, delta: u32, r: i64) -> Result<ExactIdentity, LocalError> {
    let combo = whittaker_split_deriv_combo(n, delta, r)?;
    let defect = hecke_hodge_defect(n, delta, r, true)?;
    let half = LogMultiple::new(defect.raw.coeff.scale(&rat(1, 2)), n);
    let lhs = &combo.total() - &half;
    let rhs = &combo.zeta_term + &combo.different_term;
    Ok(ExactIdentity { label: format!("cancellation_split[N={n},delta={delta},r={r}]"), lhs: lhs.coeff, rhs: rhs.coeff })
}

/// `alpha_v = 1 - (N-1)/(2(N+1))`, after checking that
/// `-2 r(w)kbar + 2 r(w)l log N + c_phi` equals `(-log|d| + alpha log N) r(w)phi`
/// for every `delta` in `deltas`.
pub fn alpha_constant_over(n: u64, deltas: &[u32]) -> Result<Rational, LocalError> {
    check_norm(n)?;
    let nn = nq(n);
    let alpha = Rational::one() - (&nn - Rational::one()) / (rat_int(2) * (&nn + Rational::one()));
    for &delta in deltas {
        let kbar = averaged_kbar_w(n, delta)?.coeff;
        let (lratio, _) = averaged_j_w(n, delta)?;
        let (_, c) = intertwining_w_value(n, delta)?;
        // Everything divided by r(w)phi(0,u) log N.
        let lhs = &(&kbar.scale(&rat_int(-2)) + &Surd::rational(n, lratio * rat_int(2))) + &c.coeff;
        let rhs = Surd::rational(n, rat_int(delta as i64) + &alpha);
        if lhs != rhs {
            return Err(LocalError::AssemblyMismatch(format!(
                "alpha assembly at N={n}, delta={delta}: {lhs} vs {rhs}"
            )));
        }
    }
    Ok(alpha)
}

pub fn alpha_constant(n: u64) -> Result<Rational, LocalError> {
    alpha_constant_over(n, &[0, 1, 2, 3])
}

/// `alpha + 2N^{-2}/(1 - N^{-2}) + 1` and `(3N - 1)/(2(N - 1))`.
pub fn local_height_term(n: u64) -> Result<(Rational, Rational), LocalError> {
    let alpha = alpha_constant(n)?;
    let nn = nq(n);
    let n2 = rat_pow(&nn, -2);
    let lhs = alpha + rat_int(2) * &n2 / (Rational::one() - &n2) + Rational::one();
    let rhs = (rat_int(3) * &nn - Rational::one()) / (rat_int(2) * (&nn - Rational::one()));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u64, delta: u32, r: i64, alg: Algebra, s: SPoint) -> LocalWhittakerSpec {
        LocalWhittakerSpec { norm: n, delta, r, u_unit: true, algebra: alg, s }
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_exact_at(3, 0, 0, 0).unwrap(), Surd::rational(3, rat(8, 9)));
        let mut sp = spec(3, 0, 0, Algebra::MatrixSplit, SPoint::Exact(0));
        sp.u_unit = false;
        assert!(whittaker_split(&sp).unwrap().exact().unwrap().is_zero());
        let sp = spec(3, 2, -1, Algebra::MatrixSplit, SPoint::Exact(1));
        assert!(matches!(whittaker_split(&sp), Err(LocalError::UnsupportedClosedForm { .. })));
        let sp = spec(3, 2, -3, Algebra::MatrixSplit, SPoint::Exact(1));
        assert!(whittaker_split(&sp).unwrap().exact().unwrap().is_zero());
        let sp = spec(6, 0, 0, Algebra::MatrixSplit, SPoint::Exact(1));
        assert_eq!(whittaker_split(&sp), Err(LocalError::InvalidNorm(6)));
    }

    #[test]
    fn real_and_exact_forms_agree() {
        for n in [2u64, 3, 4, 5] {
            for delta in 0..3 {
                for r in 0..4 {
                    for s in -2i64..4 {
                        let e = split_exact_at(n, delta, r, s).unwrap().to_f64();
                        let x = split_real_at(n, delta, r, s as f64).unwrap();
                        assert!((e - x).abs() < 1e-12 * (1.0 + e.abs()), "split N={n} d={delta} r={r} s={s}");
                        let e = nonsplit_exact_at(n, delta, r, s).unwrap().to_f64();
                        let sp = spec(n, delta, r, Algebra::DivisionNonsplit, SPoint::Real(s as f64));
                        let x = whittaker_nonsplit(&sp).unwrap().to_f64();
                        assert!((e - x).abs() < 1e-12 * (1.0 + e.abs()), "nonsplit N={n} d={delta} r={r} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn nonsplit_vanishes_at_zero_off_r0() {
        for r in [1i64, 2, 5] {
            assert!(nonsplit_exact_at(3, 1, r, 0).unwrap().is_zero());
        }
        // s = 1 is a removable point of the displayed fraction.
        let v = nonsplit_exact_at(2, 1, 2, 1).unwrap();
        assert!(!v.is_zero());
    }

    #[test]
    fn deriv_combo_r0_has_no_hecke_term() {
        let c = whittaker_split_deriv_combo(5, 1, 0).unwrap();
        assert!(c.hecke_term.coeff.is_zero());
    }

    #[test]
    fn deriv_combo_example() {
        // (N=2, delta=0, r=1)
        let c = whittaker_split_deriv_combo(2, 0, 1).unwrap();
        let w0 = split_exact_at(2, 0, 1, 0).unwrap();
        let expect_zeta = w0.scale(&(rat(1, 4) / rat(3, 4)));
        assert_eq!(c.zeta_term.coeff, expect_zeta);
        assert_eq!(c.hecke_term.coeff, Surd::rational(2, rat(3, 2) * (rat(3, 4) - rat(1, 8) - rat(3, 2) + rat_int(1))));
        assert!(c.different_term.coeff.is_zero());
    }

    #[test]
    fn siegel_weil_examples() {
        assert_eq!(siegel_weil_whittaker(3, 0, 0, Algebra::DivisionNonsplit, true).unwrap(), Surd::rational(3, rat(-4, 9)));
        assert_eq!(siegel_weil_whittaker(3, 0, 0, Algebra::MatrixSplit, true).unwrap(), Surd::rational(3, rat(8, 9)));
        for n in [2u64, 3, 5] {
            for delta in 0..3 {
                for r in 0..6 {
                    assert_eq!(
                        siegel_weil_whittaker(n, delta, r, Algebra::MatrixSplit, true).unwrap(),
                        split_exact_at(n, delta, r, 0).unwrap()
                    );
                }
                assert_eq!(
                    siegel_weil_whittaker(n, delta, 0, Algebra::DivisionNonsplit, true).unwrap(),
                    nonsplit_exact_at(n, delta, 0, 0).unwrap()
                );
            }
        }
    }

    #[test]
    fn wall_crossing_combination_is_one() {
        assert_eq!(wall_crossing_pair(2, 0).unwrap(), (Surd::rational(2, rat(2, 3)), Surd::rational(2, rat(-2, 3))));
        for n in [2u64, 3, 4, 5, 7] {
            for delta in 0..4 {
                let (cp, cm) = wall_crossing_pair(n, delta).unwrap();
                assert!((&cp + &cm).is_zero());
                for r in 0..6 {
                    let m = siegel_weil_whittaker(n, delta, r, Algebra::MatrixSplit, true).unwrap();
                    let d = siegel_weil_whittaker(n, delta, r, Algebra::DivisionNonsplit, true).unwrap();
                    assert_eq!(&cp * &m + &cm * &d, Surd::one(n));
                }
            }
        }
    }

    #[test]
    fn intertwining_examples() {
        let (w, c) = intertwining_w_value(2, 0).unwrap();
        assert_eq!(w, rat(-3, 8));
        assert_eq!(c.coeff, Surd::rational(2, rat(-1, 3)));
        let (w, c) = intertwining_w_value(3, 2).unwrap();
        assert_eq!(w, rat(-8, 2187));
        assert_eq!(c.coeff, Surd::rational(3, rat(-1, 2)));
        assert!(intertwining_w_value(3, 1).unwrap().1.coeff.is_zero());
    }

    #[test]
    fn kbar_and_j_examples() {
        assert_eq!(averaged_kbar_w(2, 0).unwrap().coeff, Surd::rational(2, rat(-2, 3)));
        assert_eq!(averaged_kbar_w(2, 1).unwrap().coeff, Surd::rational(2, rat(-1, 1)));
        assert_eq!(averaged_kbar_w(3, 2).unwrap().coeff, Surd::rational(3, rat(-7, 4)));
        assert_eq!(averaged_j_w(2, 0).unwrap(), (rat(-1, 12), rat(1, 32)));
        assert_eq!(averaged_j_w(3, 0).unwrap().0, rat(-1, 8));
        assert_eq!(component_weights(3).unwrap(), (rat(1, 16), rat(-1, 16)));
        assert_eq!(component_weights(2).unwrap().0, rat(1, 12));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_constant(2).unwrap(), rat(5, 6));
        assert_eq!(alpha_constant(3).unwrap(), rat(3, 4));
        for n in [2u64, 3, 5, 7] {
            let (l, r) = local_height_term(n).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn hecke_defect_examples() {
        assert!(hecke_hodge_defect(5, 1, 0, true).unwrap().displayed.coeff.is_zero());
        assert_eq!(hecke_hodge_defect(2, 0, 1, true).unwrap().displayed.coeff, Surd::rational(2, rat(3, 8)));
        assert!(hecke_hodge_defect(2, 0, 3, false).unwrap().raw.coeff.is_zero());
    }

    #[test]
    fn second_routes_agree() {
        for n in [2u64, 3, 4, 5, 7] {
            for delta in 0..5 {
                assert_eq!(Surd::rational(n, averaged_kbar_shell_sum(n, delta)), averaged_kbar_w(n, delta).unwrap().coeff);
                for s in 1..4 {
                    let ex = crate::exact::rat_to_f64(&intertwining_series(n, delta, s));
                    let cl = intertwining_series_closed(n, delta, s as f64);
                    assert!((ex - cl).abs() < 1e-14 * cl.abs(), "series N={n} d={delta} s={s}");
                }
                let h = 1e-5;
                let fd = (intertwining_normalized(n, delta, h).ln() - intertwining_normalized(n, delta, -h).ln()) / (2.0 * h);
                let c = intertwining_w_value(n, delta).unwrap().1.to_f64();
                assert!((fd - c).abs() < 1e-8, "intertwining N={n} d={delta}: {fd} vs {c}");
                assert!(fourier_inversion_check(n, delta).unwrap().holds());
                for id in nonsplit_integral_check(n, delta).unwrap() {
                    assert!(id.holds(), "{}: {} vs {}", id.label, id.lhs, id.rhs);
                }
                for r in 0..5 {
                    assert!(cancellation_split(n, delta, r).unwrap().holds());
                }
            }
        }
    }

    #[test]
    fn deriv_combo_matches_finite_difference() {
        for n in [2u64, 3, 5] {
            for delta in 0..3 {
                for r in 0..5 {
                    let exact = whittaker_split_deriv_combo(n, delta, r).unwrap().to_f64();
                    let fd = split_deriv_combo_numeric(n, delta, r, 1e-5).unwrap();
                    assert!((exact - fd).abs() < 1e-6, "N={n} d={delta} r={r}: {exact} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn averaged_j_integral_over_unit_volume() {
        for n in [2u64, 3, 5] {
            for delta in 0..3 {
                let (ratio, integral) = averaged_j_w(n, delta).unwrap();
                assert_eq!(integral / division_unit_volume(n, delta), -ratio);
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
