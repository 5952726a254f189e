//! Heights of Shimura curves attached to quaternion algebras, the height of a CM point,
//! the degree of the Hodge bundle, and the Kudla-Rapoport-Yang normalization
//! over `Q`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rat_int, rat_pow, Rational};
use crate::lfunc::{zeta_log_deriv_at2, zeta_log_deriv_at_minus1, zeta_value_at_minus1, LSeriesValue, LfuncError};
use crate::numberfield::{FieldError, FinitePlace, NumberFieldData, RamificationSet};
use crate::special::EULER_GAMMA;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeightError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Lfunc(#[from] LfuncError),
    #[error("{flag} must be a positive integer, got {value}")]
    NonPositive { flag: &'static str, value: i64 },
    #[error("the KRY normalization is defined over Q only, got {0}")]
    NotRational(String),
    #[error("the KRY normalization needs an even, nonempty set of ramified primes")]
    KryParity,
    #[error("class number must be positive")]
    ClassNumber,
    #[error("KRY display {kry} and modular height minus log(d_B)/2 = {shifted} differ")]
    KryMismatch { kry: f64, shifted: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    AtMinusOne,
    AtTwo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightResult {
    pub value: f64,
    pub breakdown: BTreeMap<String, f64>,
    pub route: Route,
}

impl HeightResult {
    fn from_terms(terms: Vec<(String, f64)>, route: Route) -> Self {
        let mut breakdown = BTreeMap::new();
        for (k, v) in terms {
            breakdown.insert(k, v);
        }
        let value = breakdown.values().sum();
        HeightResult { value, breakdown, route }
    }
}

/// `(3N - 1) / (4(N - 1))`.
pub fn local_coefficient(norm: u64) -> Rational {
    let n = rat_int(norm as i64);
    (rat_int(3) * &n - Rational::one()) / (rat_int(4) * (n - Rational::one()))
}

/// `(N + 1) / (4(N - 1))`.
pub fn kry_coefficient(norm: u64) -> Rational {
    let n = rat_int(norm as i64);
    (&n + Rational::one()) / (rat_int(4) * (n - Rational::one()))
}

fn local_terms(ram: &RamificationSet) -> Vec<(String, f64)> {
    ram.places()
        .iter()
        .map(|v: &FinitePlace| {
            let c = crate::exact::rat_to_f64(&local_coefficient(v.norm));
            (format!("local[{}]", v.label()), c * v.log_norm())
        })
        .collect()
}

/// `-zeta_F'(-1)/zeta_F(-1) - n/2 + sum_v (3N_v - 1)/(4(N_v - 1)) log N_v`.
pub fn modular_height(field: &NumberFieldData, ram: &RamificationSet, prec: f64) -> Result<HeightResult, HeightError> {
    RamificationSet::new(field, ram.places().to_vec())?;
    let zeta = zeta_log_deriv_at_minus1(field, prec)?;
    let mut terms = vec![
        ("zeta_term".to_string(), -zeta.value),
        ("degree_term".to_string(), -0.5 * field.degree as f64),
    ];
    terms.extend(local_terms(ram));
    Ok(HeightResult::from_terms(terms, Route::AtMinusOne))
}

/// The same height written through `zeta_F'(2)/zeta_F(2)`:
/// `zeta_F'(2)/zeta_F(2) + sum_v ... + log d_F - (gamma + log 2pi - 1/2) n`.
pub fn modular_height_via_s2(
    field: &NumberFieldData,
    ram: &RamificationSet,
    prec: f64,
) -> Result<HeightResult, HeightError> {
    RamificationSet::new(field, ram.places().to_vec())?;
    let zeta = zeta_log_deriv_at2(field, prec)?;
    let n = field.degree as f64;
    let mut terms = vec![
        ("zeta_term".to_string(), zeta.value),
        ("discriminant_term".to_string(), (field.disc as f64).ln()),
        ("gamma_term".to_string(), -(EULER_GAMMA + (2.0 * PI).ln() - 0.5) * n),
    ];
    terms.extend(local_terms(ram));
    Ok(HeightResult::from_terms(terms, Route::AtTwo))
}

/// `deg L_U = 4 h_F (-2)^{-n} zeta_F(-1) prod_v (N_v - 1)`.
pub fn vigneras_degree(field: &NumberFieldData, ram: &RamificationSet, class_number: u64) -> Result<Rational, HeightError> {
    RamificationSet::new(field, ram.places().to_vec())?;
    if class_number == 0 {
        return Err(HeightError::ClassNumber);
    }
    let prod = ram
        .places()
        .iter()
        .fold(Rational::one(), |acc, v| acc * rat_int(v.norm as i64 - 1));
    let sign_power = rat_pow(&rat_int(-2), -(field.degree as i64));
    Ok(rat_int(4) * rat_int(class_number as i64) * sign_power * zeta_value_at_minus1(field) * prod)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmHeight {
    pub value: f64,
    pub l_term: f64,
    pub discriminant_term: f64,
}

/// `h(P_U) = -L'(0, eta)/L(0, eta) + (1/2) log(d_B / d_{E/F})`. The
/// disjoint-ramification hypothesis is the caller's responsibility.
pub fn cm_height(l_ratio: &LSeriesValue, d_b: i64, d_ef: i64) -> Result<CmHeight, HeightError> {
    if d_b < 1 {
        return Err(HeightError::NonPositive { flag: "--dB", value: d_b });
    }
    if d_ef < 1 {
        return Err(HeightError::NonPositive { flag: "--dEF", value: d_ef });
    }
    let l_term = -l_ratio.value;
    let discriminant_term = 0.5 * ((d_b as f64).ln() - (d_ef as f64).ln());
    Ok(CmHeight { value: l_term + discriminant_term, l_term, discriminant_term })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KryHeight {
    pub value: f64,
    /// `modular_height - (1/2) log d_B`.
    pub from_modular_height: f64,
    /// Per-place `(3N-1)/(4(N-1)) - (N+1)/(4(N-1))`, each exactly `1/2`.
    pub coefficient_gaps: Vec<String>,
}

pub const KRY_TOL: f64 = 1e-9;

/// `-zeta'(-1)/zeta(-1) - 1/2 + sum_p (p+1)/(4(p-1)) log p`, checked against
/// `modular_height - (1/2) log d_B`.
pub fn kry_height(field: &NumberFieldData, ram: &RamificationSet, prec: f64) -> Result<KryHeight, HeightError> {
    if !field.is_rational() {
        return Err(HeightError::NotRational(field.to_string()));
    }
    if ram.is_empty() || ram.len() % 2 != 0 {
        return Err(HeightError::KryParity);
    }
    let zeta = zeta_log_deriv_at_minus1(field, prec)?;
    let mut value = -zeta.value - 0.5;
    let mut gaps = Vec::new();
    for v in ram.places() {
        value += crate::exact::rat_to_f64(&kry_coefficient(v.norm)) * v.log_norm();
        let gap = local_coefficient(v.norm) - kry_coefficient(v.norm);
        gaps.push(crate::exact::rat_string(&gap));
    }
    let shifted = modular_height(field, ram, prec)?.value - 0.5 * ram.log_d_b();
    if (shifted - value).abs() > KRY_TOL {
        return Err(HeightError::KryMismatch { kry: value, shifted });
    }
    Ok(KryHeight { value, from_modular_height: shifted, coefficient_gaps: gaps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::lfunc::quadratic_l_log_deriv_at0;
    use crate::numberfield::parse_field;

    fn q() -> NumberFieldData {
        NumberFieldData::rationals()
    }

    #[test]
    fn bost_kuhn_and_two_primes() {
        let field = q();
        let empty = RamificationSet::parse(&field, "").unwrap();
        let h = modular_height(&field, &empty, 1e-12).unwrap();
        assert!((h.value + 2.485_053_724_405_411).abs() < 1e-10);
        let ram = RamificationSet::parse(&field, "2,3").unwrap();
        let h = modular_height(&field, &ram, 1e-12).unwrap();
        assert!((h.value + 0.520_007_460_037_369_8).abs() < 1e-10, "{}", h.value);
        assert!((h.breakdown["local[2]"] - 1.25 * 2f64.ln()).abs() < 1e-15);
        let total: f64 = h.breakdown.values().sum();
        assert!((total - h.value).abs() < 1e-12);
    }

    #[test]
    fn routes_agree() {
        let field = q();
        for list in ["", "2,3", "5,13", "2,3,5,7"] {
            let ram = RamificationSet::parse(&field, list).unwrap();
            let a = modular_height(&field, &ram, 1e-12).unwrap();
            let b = modular_height_via_s2(&field, &ram, 1e-12).unwrap();
            assert!((a.value - b.value).abs() < 1e-8, "{list}: {} vs {}", a.value, b.value);
        }
        let f5 = parse_field("Q(sqrt 5)").unwrap();
        let ram = RamificationSet::parse(&f5, "2").unwrap();
        let a = modular_height(&f5, &ram, 1e-12).unwrap();
        let b = modular_height_via_s2(&f5, &ram, 1e-12).unwrap();
        assert!((a.value - b.value).abs() < 1e-8);
    }

    #[test]
    fn degrees() {
        let field = q();
        let ram = RamificationSet::parse(&field, "2,3").unwrap();
        assert_eq!(vigneras_degree(&field, &ram, 1).unwrap(), rat(1, 3));
        let empty = RamificationSet::parse(&field, "").unwrap();
        assert_eq!(vigneras_degree(&field, &empty, 1).unwrap(), rat(1, 6));
        let f5 = parse_field("Q(sqrt 5)").unwrap();
        let ram = RamificationSet::parse(&f5, "2").unwrap();
        assert_eq!(vigneras_degree(&f5, &ram, 1).unwrap(), rat(1, 10));
        assert_eq!(vigneras_degree(&field, &empty, 0), Err(HeightError::ClassNumber));
    }

    #[test]
    fn cm_examples() {
        let l = quadratic_l_log_deriv_at0(-4, 1e-12).unwrap();
        let h = cm_height(&l, 1, 4).unwrap();
        assert!((h.value + 1.476_336_0).abs() < 1e-7, "{}", h.value);
        let zero = LSeriesValue::supplied(0.0, 1e-12);
        assert_eq!(cm_height(&zero, 6, 6).unwrap().value, 0.0);
        assert!(matches!(cm_height(&zero, 0, 4), Err(HeightError::NonPositive { flag: "--dB", .. })));
    }

    #[test]
    fn kry() {
        let field = q();
        let ram = RamificationSet::parse(&field, "2,3").unwrap();
        let k = kry_height(&field, &ram, 1e-12).unwrap();
        assert!((k.value + 1.415_887_194_651_397_3).abs() < 1e-10, "{}", k.value);
        assert!(k.coefficient_gaps.iter().all(|g| g == "1/2"));
        let ram = RamificationSet::parse(&field, "2,5").unwrap();
        assert!(kry_height(&field, &ram, 1e-12).is_ok());
        let f5 = parse_field("Q(sqrt 5)").unwrap();
        let ram = RamificationSet::parse(&f5, "2").unwrap();
        assert!(matches!(kry_height(&f5, &ram, 1e-12), Err(HeightError::NotRational(_))));
        let empty = RamificationSet::parse(&field, "").unwrap();
        assert_eq!(kry_height(&field, &empty, 1e-12), Err(HeightError::KryParity));
    }

    #[test]
    fn parity_rejected() {
        let field = q();
        assert!(matches!(RamificationSet::parse(&field, "2"), Err(FieldError::Parity { .. })));
    }
}
