//! Brute-force lattice counts over residue rings of the standard local
//! quaternion orders, used as an independent check on the closed forms.
//!
//! For the matrix order `q = x0 x3 - x1 x2` and for the division order
//! `q = Nm(x) - p Nm(y)`, so the value distribution of `q` on `R^4` is the
//! additive correlation of two distributions on `R^2`. A census enumerates
//! those two planes, then correlates them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat_int, rat_pow, Rational, Surd};
use crate::local_nonarch::{prime_power, Algebra, LocalWhittakerSpec, SPoint};
use crate::numberfield::is_prime;
use crate::report::{Check, VerificationReport};

/// Cap on enumerated pairs `N^{2k}` per census.
pub const ENUMERATION_BUDGET: u64 = 300_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("depth k = {k} is smaller than the level m = {m}")]
    DepthBelowLevel { k: u32, m: u32 },
    #[error("census of N^(2k) = {work} pairs exceeds the budget {budget}")]
    BudgetExceeded { work: u128, budget: u64 },
    #[error("N = {0} is not supported by the oracle (need p^f with f <= 2)")]
    UnsupportedNorm(u64),
    #[error("oracle needs an integer s >= 1")]
    NonIntegerS,
    #[error("tail not stable at depth {depth}; increase the depth")]
    TailNotStable { depth: u32 },
    #[error("density at level {m} changes between depths {k} and {k1}")]
    DepthUnstable { m: u32, k: u32, k1: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    Matrix2x2,
    DivisionMaximal,
}

impl From<Algebra> for OrderKind {
    fn from(a: Algebra) -> Self {
        match a {
            Algebra::MatrixSplit => OrderKind::Matrix2x2,
            Algebra::DivisionNonsplit => OrderKind::DivisionMaximal,
        }
    }
}

/// `O_K / p^k` for `K` unramified of degree `f` over `Q_p`, presented as
/// `Z/p^k [w] / (w^2 - eps w - c)` when `f = 2`. Elements are indices
/// `u0 + u1 p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    pub p: u64,
    pub f: u32,
    pub k: u32,
    modulus: u64,
    eps: u64,
    c: u64,
}

/// A monic `t^2 - eps t - c` over `Z/p` without roots.
fn irreducible_over_fp(p: u64) -> (u64, u64) {
    for eps in [0, 1] {
        for c in 1..p {
            if (0..p).all(|t| (t * t + p * p - eps * t - c) % p != 0) {
                return (eps, c);
            }
        }
    }
    unreachable!("every prime has an irreducible quadratic")
}

impl ResidueRing {
    pub fn new(p: u64, f: u32, k: u32) -> Self {
        assert!(f == 1 || f == 2, "residue degree {f}");
        let modulus = p.pow(k);
        let (eps, c) = if f == 2 { irreducible_over_fp(p) } else { (0, 0) };
        ResidueRing { p, f, k, modulus, eps, c }
    }

    pub fn size(&self) -> u64 {
        self.modulus.pow(self.f)
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    fn split(&self, x: u64) -> (u64, u64) {
        (x % self.modulus, x / self.modulus)
    }

    fn join(&self, a: u64, b: u64) -> u64 {
        a % self.modulus + (b % self.modulus) * self.modulus
    }

    pub fn from_int(&self, n: u64) -> u64 {
        n % self.modulus
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        if self.f == 1 {
            let t = x + y;
            return if t >= self.modulus { t - self.modulus } else { t };
        }
        let ((a0, a1), (b0, b1)) = (self.split(x), self.split(y));
        self.join(a0 + b0, a1 + b1)
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if self.f == 1 {
            return if x >= y { x - y } else { x + self.modulus - y };
        }
        let ((a0, a1), (b0, b1)) = (self.split(x), self.split(y));
        let m = self.modulus;
        self.join(a0 + m - b0, a1 + m - b1)
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        let m = self.modulus;
        if self.f == 1 {
            return x * y % m;
        }
        let ((a0, a1), (b0, b1)) = (self.split(x), self.split(y));
        let hi = a1 * b1 % m;
        let lo = (a0 * b0 + self.c * hi) % m;
        let mid = (a0 * b1 + a1 * b0 + self.eps * hi) % m;
        self.join(lo, mid)
    }

    /// Reduction to `O_K / p^m`.
    pub fn reduce(&self, x: u64, m: u32) -> u64 {
        let pm = self.p.pow(m);
        let (a0, a1) = self.split(x);
        a0 % pm + (a1 % pm) * pm
    }

    pub fn is_unit(&self, x: u64) -> bool {
        let (a0, a1) = self.split(x);
        a0 % self.p != 0 || a1 % self.p != 0
    }

    pub fn at_depth(&self, k: u32) -> ResidueRing {
        ResidueRing { k, modulus: self.p.pow(k), ..*self }
    }
}

/// A standard order over `O_K`. For the division order, `O_L = O_K[theta]`
/// with `theta^2 = eps theta + c` irreducible over the residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderModel {
    pub kind: OrderKind,
    pub p: u64,
    pub f: u32,
    theta_eps: u64,
    theta_c: u64,
}

impl OrderModel {
    pub fn new(kind: OrderKind, n: u64) -> Result<Self, OracleError> {
        let (p, f) = prime_power(n).ok_or(OracleError::UnsupportedNorm(n))?;
        if f > 2 || !is_prime(p) {
            return Err(OracleError::UnsupportedNorm(n));
        }
        let ring = ResidueRing::new(p, f, 1);
        let (theta_eps, theta_c) = match kind {
            OrderKind::Matrix2x2 => (0, 0),
            OrderKind::DivisionMaximal => Self::find_theta(&ring),
        };
        Ok(OrderModel { kind, p, f, theta_eps, theta_c })
    }

    fn find_theta(ring: &ResidueRing) -> (u64, u64) {
        let elems: Vec<u64> = (0..ring.size()).collect();
        let preferred_eps = if ring.p == 2 { [1, 0] } else { [0, 1] };
        for eps in preferred_eps {
            let e = ring.from_int(eps);
            for &c in &elems[1..] {
                let has_root = elems.iter().any(|&t| {
                    let v = ring.sub(ring.sub(ring.mul(t, t), ring.mul(e, t)), c);
                    v == 0
                });
                if !has_root {
                    return (e, c);
                }
            }
        }
        unreachable!("residue field has an irreducible quadratic")
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn ring(&self, k: u32) -> ResidueRing {
        ResidueRing::new(self.p, self.f, k)
    }

    /// `Nm(x0 + x1 theta) = x0^2 + eps x0 x1 - c x1^2`.
    pub fn theta_norm(&self, ring: &ResidueRing, x0: u64, x1: u64) -> u64 {
        let eps = self.lift(ring, self.theta_eps);
        let c = self.lift(ring, self.theta_c);
        let t = ring.add(ring.mul(x0, x0), ring.mul(eps, ring.mul(x0, x1)));
        ring.sub(t, ring.mul(c, ring.mul(x1, x1)))
    }

    /// `(a + b theta)(c + d theta)` in `O_L`.
    pub fn theta_mul(&self, ring: &ResidueRing, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let eps = self.lift(ring, self.theta_eps);
        let c = self.lift(ring, self.theta_c);
        let bd = ring.mul(x.1, y.1);
        let lo = ring.add(ring.mul(x.0, y.0), ring.mul(c, bd));
        let hi = ring.add(ring.add(ring.mul(x.0, y.1), ring.mul(x.1, y.0)), ring.mul(eps, bd));
        (lo, hi)
    }

    /// Lift a level-1 index to `ring` by digits.
    fn lift(&self, ring: &ResidueRing, x: u64) -> u64 {
        let (a0, a1) = (x % self.p, x / self.p);
        ring.join(a0, a1)
    }

    /// Reduced norm of a point in `R^4`.
    pub fn quadratic_form(&self, ring: &ResidueRing, x: [u64; 4]) -> u64 {
        match self.kind {
            OrderKind::Matrix2x2 => ring.sub(ring.mul(x[0], x[3]), ring.mul(x[1], x[2])),
            OrderKind::DivisionMaximal => {
                let p = ring.from_int(self.p);
                ring.sub(self.theta_norm(ring, x[0], x[1]), ring.mul(p, self.theta_norm(ring, x[2], x[3])))
            }
        }
    }
}

/// `hq[a] = #{x in R^4 : q(x) = a}` over `R = O_K/p^k`.
#[derive(Clone, Debug)]
pub struct Census {
    pub model: OrderModel,
    pub ring: ResidueRing,
    pub hq: Vec<u64>,
}

fn plane_histograms(model: &OrderModel, ring: &ResidueRing) -> (Vec<u64>, Vec<u64>) {
    let size = ring.size() as usize;
    let p = ring.from_int(model.p);
    let eps = model.lift(ring, model.theta_eps);
    let c = model.lift(ring, model.theta_c);
    // Nm(x + y theta) = x^2 + (eps x) y - c y^2, split into row and column parts.
    let col: Vec<u64> = (0..ring.size()).map(|y| ring.mul(c, ring.mul(y, y))).collect();
    let times_p: Vec<u64> = (0..ring.size()).map(|t| ring.mul(p, t)).collect();
    let zero = || (vec![0u64; size], vec![0u64; size]);
    (0..ring.size())
        .into_par_iter()
        .fold(zero, |(mut h1, mut h2), x| {
            match model.kind {
                OrderKind::Matrix2x2 => {
                    for y in 0..ring.size() {
                        h1[ring.mul(x, y) as usize] += 1;
                    }
                }
                OrderKind::DivisionMaximal => {
                    let (sq, ex) = (ring.mul(x, x), ring.mul(eps, x));
                    for y in 0..ring.size() {
                        let nm = ring.sub(ring.add(sq, ring.mul(ex, y)), col[y as usize]);
                        h1[nm as usize] += 1;
                        h2[times_p[nm as usize] as usize] += 1;
                    }
                }
            }
            (h1, h2)
        })
        .reduce(zero, |(mut a1, mut a2), (b1, b2)| {
            a1.iter_mut().zip(b1).for_each(|(a, b)| *a += b);
            a2.iter_mut().zip(b2).for_each(|(a, b)| *a += b);
            (a1, a2)
        })
}

impl Census {
    pub fn new(model: OrderModel, k: u32) -> Result<Self, OracleError> {
        let ring = model.ring(k);
        let work = (ring.size() as u128).pow(2);
        if work > ENUMERATION_BUDGET as u128 {
            return Err(OracleError::BudgetExceeded { work, budget: ENUMERATION_BUDGET });
        }
        let (h1, h2) = plane_histograms(&model, &ring);
        let second = match model.kind {
            OrderKind::Matrix2x2 => &h1,
            OrderKind::DivisionMaximal => &h2,
        };
        // q = t1 - t2 with t1 ~ h1 and t2 ~ second.
        let hq = (0..ring.size())
            .into_par_iter()
            .map(|a| {
                (0..ring.size())
                    .filter(|&t| h1[t as usize] != 0)
                    .map(|t| h1[t as usize] * second[ring.sub(t, a) as usize])
                    .sum()
            })
            .collect();
        Ok(Census { model, ring, hq })
    }

    pub fn depth(&self) -> u32 {
        self.ring.k
    }

    /// `#{x in R^4 : q(x) = target mod p^m}` for a ring index `target`,
    /// optionally restricted to units.
    pub fn count(&self, target: u64, m: u32, units_only: bool) -> Result<u128, OracleError> {
        let k = self.ring.k;
        if m > k || (units_only && k == 0) {
            return Err(OracleError::DepthBelowLevel { k, m: m.max(units_only as u32) });
        }
        let t = self.ring.reduce(target, m);
        Ok((0..self.ring.size())
            .filter(|&a| self.ring.reduce(a, m) == t && (!units_only || self.ring.is_unit(a)))
            .map(|a| self.hq[a as usize] as u128)
            .sum())
    }

    /// `count / N^{4k}`.
    pub fn density(&self, target: u64, m: u32, units_only: bool) -> Result<Rational, OracleError> {
        let c = self.count(target, m, units_only)?;
        let total = rat_pow(&rat_int(self.ring.size() as i64), 4);
        Ok(Rational::from_integer(c.into()) / total)
    }
}

type CensusKey = (OrderKind, u64, u32);

fn census_cache() -> &'static Mutex<HashMap<CensusKey, Arc<Census>>> {
    static CACHE: OnceLock<Mutex<HashMap<CensusKey, Arc<Census>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized census per `(kind, N, depth)`.
pub fn census(kind: OrderKind, n: u64, k: u32) -> Result<Arc<Census>, OracleError> {
    let key = (kind, n, k);
    if let Some(c) = census_cache().lock().expect("census cache").get(&key) {
        return Ok(c.clone());
    }
    let c = Arc::new(Census::new(OrderModel::new(kind, n)?, k)?);
    census_cache().lock().expect("census cache").insert(key, c.clone());
    Ok(c)
}

/// `#{x in (O_K/p^k)^4 : q(x) = target mod p^m}`.
pub fn count_quadric(
    kind: OrderKind,
    n: u64,
    k: u32,
    target: u64,
    m: u32,
    units_only: bool,
) -> Result<u128, OracleError> {
    if k < m {
        return Err(OracleError::DepthBelowLevel { k, m });
    }
    census(kind, n, k)?.count(target, m, units_only)
}

/// Direct enumeration of `R^4`, for small cross-checks.
pub fn count_quadric_naive(model: &OrderModel, k: u32, target: u64, m: u32, units_only: bool) -> u128 {
    let ring = model.ring(k);
    let t = ring.reduce(target, m);
    let size = ring.size();
    let mut count = 0u128;
    for x0 in 0..size {
        for x1 in 0..size {
            for x2 in 0..size {
                for x3 in 0..size {
                    let q = model.quadratic_form(&ring, [x0, x1, x2, x3]);
                    if ring.reduce(q, m) == t && (!units_only || ring.is_unit(q)) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Density `rho_m` of `{q(x) = a mod p^m}` on the support of `phi`, for
/// `v(a) = r >= 0`, read off a census of depth `k >= max(m, 1)`.
fn density_nonneg(census: &Census, r: i64, m: u32, units: bool) -> Result<Rational, OracleError> {
    let p = census.ring.p;
    let target = if (r as u32) < census.ring.k { p.pow(r as u32) } else { 0 };
    census.density(census.ring.from_int(target), m, units)
}

/// Whittaker value from lattice counts:
/// `gamma |d|^{1/2} vol(O_B) [(1 - q) sum_{n < M + delta} (Nq)^n rho_{n - delta}
///  + (Nq)^{M - 1 + delta} rho_{M-1} q]` with `q = N^{-s}`.
pub fn whittaker_oracle(spec: &LocalWhittakerSpec) -> Result<Surd, OracleError> {
    let s = match spec.s {
        SPoint::Exact(s) if s >= 1 => s,
        _ => return Err(OracleError::NonIntegerS),
    };
    let n = spec.norm;
    if !spec.u_unit {
        return Ok(Surd::zero(n));
    }
    let kind = OrderKind::from(spec.algebra);
    let units = kind == OrderKind::DivisionMaximal;
    let nn = rat_int(n as i64);
    let delta = spec.delta as i64;
    let r = spec.r;
    let depth = (r.max(0) + 2) as u32;
    let top = census(kind, n, depth)?;
    let below = census(kind, n, depth - 1)?;
    // Density of the support itself (all of O_B, or its units).
    let rho_supp = top.density(0, 0, units)?;
    let rho = |m: i64| -> Result<Rational, OracleError> {
        if r < 0 {
            // v(q(x) - a) = r on the whole support.
            return Ok(if m <= r { rho_supp.clone() } else { Rational::zero() });
        }
        if m <= 0 {
            return Ok(rho_supp.clone());
        }
        density_nonneg(&top, r, m as u32, units)
    };
    for m in 0..depth {
        let (a, b) = (density_nonneg(&top, r.max(0), m, units)?, density_nonneg(&below, r.max(0), m, units)?);
        if a != b {
            return Err(OracleError::DepthUnstable { m, k: depth - 1, k1: depth });
        }
    }
    let big_m = depth as i64;
    if r >= 0 && rho(big_m)? * &nn != rho(big_m - 1)? {
        return Err(OracleError::TailNotStable { depth });
    }
    let q = rat_pow(&nn, -s);
    let nq = &nn * &q;
    let mut head = Rational::zero();
    let mut pw = Rational::one();
    for i in 0..(big_m + delta) {
        head += &pw * rho(i - delta)?;
        pw *= &nq;
    }
    let tail = rat_pow(&nq, big_m - 1 + delta) * rho(big_m - 1)? * &q;
    let bracket = (Rational::one() - &q) * head + tail;
    let d2 = rat_pow(&nn, -2 * delta);
    let (gamma, vol) = match kind {
        OrderKind::Matrix2x2 => (Rational::one(), d2),
        OrderKind::DivisionMaximal => (-Rational::one(), d2 / &nn),
    };
    Ok(Surd::half_power(n, -delta).scale(&(gamma * vol * bracket)))
}

/// Hermite representatives `[[a, b], [0, d]]` with `ad = p^r`, `0 <= b < a`.
pub fn hecke_coset_count(p: u64, r: u32) -> u64 {
    let pr = p.pow(r);
    let mut count = 0;
    for a in 1..=pr {
        if pr % a != 0 {
            continue;
        }
        let d = pr / a;
        debug_assert_eq!(a * d, pr);
        count += (0..a).count() as u64;
    }
    count
}

/// `|SL_2(Z/p^k)| / p^{3k} = 1 - p^{-2}` and the norm-one density of the
/// division order `p^{-1}(1 + p^{-1})`, at `k = 2`.
pub fn unit_volume_check(p: u64) -> Result<VerificationReport, OracleError> {
    let k = 2;
    let pp = rat_int(p as i64);
    let scale = rat_pow(&pp, -3 * k as i64);
    let sl2 = Rational::from_integer(count_quadric(OrderKind::Matrix2x2, p, k, 1, k, false)?.into()) * &scale;
    let d1 = Rational::from_integer(count_quadric(OrderKind::DivisionMaximal, p, k, 1, k, false)?.into()) * &scale / &pp;
    let checks = vec![
        Check::exact_rational(format!("sl2_density[p={p}]"), &sl2, &(Rational::one() - rat_pow(&pp, -2))),
        Check::exact_rational(format!("norm_one_density[p={p}]"), &d1, &((Rational::one() + pp.recip()) / &pp)),
    ];
    Ok(VerificationReport::new(format!("unit-volume[p={p}]"), checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn ring_arithmetic_f2() {
        let ring = ResidueRing::new(2, 2, 2);
        assert_eq!(ring.size(), 16);
        let units: Vec<u64> = (0..16).filter(|&x| ring.is_unit(x)).collect();
        assert_eq!(units.len(), 12);
        for &x in &units {
            assert_eq!((0..16).filter(|&y| ring.mul(x, y) == 1).count(), 1, "inverse of {x}");
        }
        for x in 0..16 {
            for y in 0..16 {
                assert_eq!(ring.add(ring.sub(x, y), y), x);
                assert_eq!(ring.mul(x, y), ring.mul(y, x));
            }
        }
    }

    #[test]
    fn theta_norm_is_multiplicative_on_units() {
        for n in [2u64, 3, 4, 5] {
            let model = OrderModel::new(OrderKind::DivisionMaximal, n).unwrap();
            let ring = model.ring(2);
            let size = ring.size();
            // Nm vanishes mod p only at p O_L.
            for x0 in 0..size.min(30) {
                for x1 in 0..size.min(30) {
                    let nm = model.theta_norm(&ring, x0, x1);
                    assert_eq!(ring.is_unit(nm), ring.is_unit(x0) || ring.is_unit(x1));
                }
            }
            let elems: Vec<u64> = (0..size).step_by(7).collect();
            for &a in &elems {
                for &b in &elems {
                    let (x, y) = ((a, b), (b, ring.add(a, 1)));
                    let z = model.theta_mul(&ring, x, y);
                    assert_eq!(
                        model.theta_norm(&ring, z.0, z.1),
                        ring.mul(model.theta_norm(&ring, x.0, x.1), model.theta_norm(&ring, y.0, y.1))
                    );
                }
            }
        }
    }

    #[test]
    fn census_matches_naive_enumeration() {
        for n in [2u64, 3, 4] {
            for kind in [OrderKind::Matrix2x2, OrderKind::DivisionMaximal] {
                let model = OrderModel::new(kind, n).unwrap();
                let c = Census::new(model, 1).unwrap();
                for target in 0..c.ring.size() {
                    for units in [false, true] {
                        assert_eq!(c.count(target, 1, units).unwrap(), count_quadric_naive(&model, 1, target, 1, units));
                    }
                }
            }
        }
        let model = OrderModel::new(OrderKind::DivisionMaximal, 2).unwrap();
        let c = Census::new(model, 2).unwrap();
        for target in 0..4 {
            assert_eq!(c.count(target, 2, false).unwrap(), count_quadric_naive(&model, 2, target, 2, false));
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_quadric(OrderKind::Matrix2x2, 2, 3, 0, 0, false).unwrap(), 1u128 << 12);
        let singular = count_quadric(OrderKind::Matrix2x2, 3, 2, 0, 1, false).unwrap();
        assert_eq!(Rational::from_integer(singular.into()) / rat_int(3i64.pow(8)), rat(81 - 48, 81));
        let c = census(OrderKind::DivisionMaximal, 3, 2).unwrap();
        assert_eq!(c.density(0, 0, true).unwrap(), rat(8, 9));
        assert!(matches!(
            count_quadric(OrderKind::Matrix2x2, 3, 1, 0, 2, false),
            Err(OracleError::DepthBelowLevel { .. })
        ));
    }

    #[test]
    fn densities_independent_of_depth() {
        for kind in [OrderKind::Matrix2x2, OrderKind::DivisionMaximal] {
            for m in 0..3 {
                let lo = census(kind, 3, m.max(1)).unwrap();
                let hi = census(kind, 3, m.max(1) + 1).unwrap();
                let a = lo.density(lo.ring.from_int(3), m, false).unwrap();
                let b = hi.density(hi.ring.from_int(3), m, false).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn hecke_examples() {
        assert_eq!(hecke_coset_count(7, 0), 1);
        assert_eq!(hecke_coset_count(3, 2), 13);
        assert_eq!(hecke_coset_count(2, 4), 31);
    }

    #[test]
    fn unit_volumes() {
        for p in [2u64, 3, 5] {
            let rep = unit_volume_check(p).unwrap();
            assert!(rep.overall, "{rep:?}");
        }
    }

    #[test]
    fn oracle_matches_closed_forms_small() {
        use crate::local_nonarch::whittaker;
        for n in [2u64, 3, 4] {
            for delta in 0..3u32 {
                for alg in [Algebra::MatrixSplit, Algebra::DivisionNonsplit] {
                    let lo = if alg == Algebra::DivisionNonsplit { -(delta as i64) } else { 0 };
                    for r in lo..3 {
                        for s in 1..4 {
                            let spec = LocalWhittakerSpec { norm: n, delta, r, u_unit: true, algebra: alg, s: SPoint::Exact(s) };
                            let oracle = whittaker_oracle(&spec).unwrap();
                            let closed = whittaker(&spec).unwrap();
                            assert_eq!(&oracle, closed.exact().unwrap(), "{spec:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_edge_cases() {
        let mut spec = LocalWhittakerSpec {
            norm: 3,
            delta: 0,
            r: 0,
            u_unit: false,
            algebra: Algebra::MatrixSplit,
            s: SPoint::Exact(1),
        };
        assert!(whittaker_oracle(&spec).unwrap().is_zero());
        spec.u_unit = true;
        spec.s = SPoint::Exact(0);
        assert_eq!(whittaker_oracle(&spec), Err(OracleError::NonIntegerS));
        assert_eq!(OrderModel::new(OrderKind::Matrix2x2, 8), Err(OracleError::UnsupportedNorm(8)));
    }
}
