//! Identity suites over the local, archimedean and global evaluators.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arch_numerics::{
    arch_whittaker, arch_whittaker_deriv0, arch_whittaker_deriv0_numeric, arch_whittaker_unregularized,
    gamma_ratio_deriv, green_residue_constant, holproj_constant, kronecker_limit, legendre_q_hypergeometric,
    legendre_q_integral, legendre_q_integral_route, UpperHalfPoint, GAMMA_RATIO_TOL, HOLPROJ_TOL,
};
use crate::exact::{rat, rat_int, rat_to_f64, Rational, Surd};
use crate::heights::{kry_height, modular_height, modular_height_via_s2, vigneras_degree, KRY_TOL};
use crate::lfunc::{oracle, quadratic_l_log_deriv_at0};
use crate::local_nonarch::{
    alpha_constant_over, averaged_j_w, averaged_kbar_shell_sum, averaged_kbar_w, cancellation_split,
    component_weights, division_unit_volume, fourier_inversion_check, hecke_hodge_defect, intertwining_normalized,
    intertwining_series, intertwining_series_closed, intertwining_w_value, local_height_term,
    nonsplit_integral_check, siegel_weil_whittaker, split_deriv_combo_numeric, wall_crossing_pair, whittaker,
    whittaker_split_deriv_combo, Algebra, LocalWhittakerSpec, SPoint,
};
use crate::numberfield::{is_prime, is_squarefree, parse_field, FinitePlace, NumberFieldData, RamificationSet};
use crate::padic_oracle::{hecke_coset_count, unit_volume_check, whittaker_oracle, ENUMERATION_BUDGET};

pub use crate::report::{Check, Quantity, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LocalOracle,
    LocalIdentities,
    Archimedean,
    Global,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::LocalOracle, Suite::LocalIdentities, Suite::Archimedean, Suite::Global, Suite::All];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LocalOracle => "local-oracle",
            Suite::LocalIdentities => "local-identities",
            Suite::Archimedean => "archimedean",
            Suite::Global => "global",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, VerifyError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected local-oracle, local-identities, archimedean, global or all")]
    UnknownSuite(String),
    #[error("oracle grid at N = {norm}, depth {depth} needs {work} census pairs, over the budget {budget}")]
    Budget { norm: u64, depth: u32, work: u128, budget: u64 },
    #[error("invalid suite configuration: {0}")]
    Config(String),
}

/// Grids for every suite. An empty grid yields no checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub oracle_primes: Vec<u64>,
    pub oracle_deltas: Vec<u32>,
    /// Largest `v(a)` on the oracle grid; the census runs two levels deeper.
    pub max_depth: u32,
    pub oracle_s: Vec<i64>,
    pub hecke_max_r: u32,
    pub identity_norms: Vec<u64>,
    pub identity_deltas: Vec<u32>,
    pub identity_max_r: i64,
    pub deriv_step: f64,
    pub legendre_s: Vec<f64>,
    pub legendre_t: Vec<f64>,
    pub whittaker_a: Vec<f64>,
    pub whittaker_s: Vec<f64>,
    pub analytic_constants: bool,
    pub fields: Vec<String>,
    pub prime_bound: u64,
    pub max_places: usize,
    pub kry_max_places: usize,
    pub precision: f64,
    pub degree_instances: usize,
    pub seed: u64,
    pub cm_discs: Vec<i64>,
    pub kronecker_points: Vec<(f64, f64)>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            oracle_primes: vec![2, 3, 5],
            oracle_deltas: vec![0, 1, 2],
            max_depth: 4,
            oracle_s: vec![1, 2, 3],
            hecke_max_r: 5,
            identity_norms: vec![2, 3, 5, 7],
            identity_deltas: vec![0, 1, 2, 3],
            identity_max_r: 6,
            deriv_step: 1e-5,
            legendre_s: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            legendre_t: vec![1.1, 2.0, 10.0, 100.0],
            whittaker_a: vec![0.3, 1.0, 2.0],
            whittaker_s: vec![0.25, 0.5, 1.0],
            analytic_constants: true,
            fields: vec!["Q".into(), "Q(sqrt 2)".into(), "Q(sqrt 5)".into()],
            prime_bound: 13,
            max_places: 3,
            kry_max_places: 6,
            precision: 1e-12,
            degree_instances: 20,
            seed: 0x5eed,
            cm_discs: vec![-3, -4, -7, -8, -11, -15, -20, -23],
            kronecker_points: vec![(0.0, 1.0), (0.0, 2.0), (0.5, 3f64.sqrt() / 2.0)],
        }
    }
}

impl SuiteConfig {
    pub fn empty() -> Self {
        SuiteConfig {
            oracle_primes: vec![],
            oracle_deltas: vec![],
            max_depth: 0,
            oracle_s: vec![],
            hecke_max_r: 0,
            identity_norms: vec![],
            identity_deltas: vec![],
            identity_max_r: -1,
            legendre_s: vec![],
            legendre_t: vec![],
            whittaker_a: vec![],
            whittaker_s: vec![],
            analytic_constants: false,
            fields: vec![],
            kry_max_places: 0,
            degree_instances: 0,
            cm_discs: vec![],
            kronecker_points: vec![],
            ..SuiteConfig::default()
        }
    }

    /// Depth of the census behind the oracle grid.
    pub fn census_depth(&self) -> u32 {
        self.max_depth + 2
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        if !(self.precision > 0.0) {
            return Err(VerifyError::Config(format!("precision must be positive, got {}", self.precision)));
        }
        if self.oracle_s.iter().any(|&s| s < 1) {
            return Err(VerifyError::Config("oracle s values must be integers >= 1".into()));
        }
        if self.identity_norms.iter().chain(&self.oracle_primes).any(|&n| crate::local_nonarch::prime_power(n).is_none()) {
            return Err(VerifyError::Config("local norms must be prime powers".into()));
        }
        if self.oracle_primes.is_empty() {
            return Ok(());
        }
        let depth = self.census_depth();
        for &n in &self.oracle_primes {
            let work = (n as u128).checked_pow(2 * depth).unwrap_or(u128::MAX);
            if work > ENUMERATION_BUDGET as u128 {
                return Err(VerifyError::Budget { norm: n, depth, work, budget: ENUMERATION_BUDGET });
            }
        }
        Ok(())
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

fn failed(label: String, err: impl fmt::Display) -> Check {
    Check {
        label,
        lhs: Quantity::Exact(format!("error: {err}")),
        rhs: Quantity::Exact(String::new()),
        abs_error: f64::INFINITY,
        tolerance: 0.0,
        pass: false,
    }
}

fn guard<E: fmt::Display>(label: impl Into<String>, r: Result<Check, E>) -> Check {
    let label = label.into();
    r.unwrap_or_else(|e| failed(label, e))
}

fn run_jobs(jobs: Vec<Job<'_>>) -> Vec<Check> {
    jobs.par_iter().flat_map_iter(|j| j()).collect()
}

fn alg_name(a: Algebra) -> &'static str {
    match a {
        Algebra::MatrixSplit => "split",
        Algebra::DivisionNonsplit => "nonsplit",
    }
}

fn local_oracle_jobs(cfg: &SuiteConfig) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &cfg.oracle_primes {
        for alg in [Algebra::MatrixSplit, Algebra::DivisionNonsplit] {
            jobs.push(Box::new(move || {
                let mut out = Vec::new();
                for &delta in &cfg.oracle_deltas {
                    let lo = if alg == Algebra::DivisionNonsplit { -(delta as i64) } else { 0 };
                    for r in lo..=cfg.max_depth as i64 {
                        for &s in &cfg.oracle_s {
                            let label = format!("oracle[{},N={n},delta={delta},r={r},s={s}]", alg_name(alg));
                            let spec = LocalWhittakerSpec { norm: n, delta, r, u_unit: true, algebra: alg, s: SPoint::Exact(s) };
                            let check = whittaker_oracle(&spec).map_err(|e| e.to_string()).and_then(|o| {
                                let closed = whittaker(&spec).map_err(|e| e.to_string())?;
                                let closed = closed.exact().cloned().ok_or("closed form not exact")?;
                                Ok(Check::exact(label.clone(), &closed, &o))
                            });
                            out.push(guard(label, check));
                        }
                    }
                }
                out
            }));
        }
        jobs.push(Box::new(move || {
            let mut out: Vec<Check> = (0..=cfg.hecke_max_r)
                .map(|r| {
                    let sigma: u64 = (0..=r).map(|i| n.pow(i)).sum();
                    Check::exact_int(format!("hecke_cosets[p={n},r={r}]"), hecke_coset_count(n, r) as u128, sigma as u128)
                })
                .collect();
            match unit_volume_check(n) {
                Ok(rep) => out.extend(rep.checks),
                Err(e) => out.push(failed(format!("unit_volume[p={n}]"), e)),
            }
            out
        }));
    }
    jobs
}

fn local_identity_jobs(cfg: &SuiteConfig) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job> = Vec::new();
    for &n in &cfg.identity_norms {
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            let expected = Rational::one() - rat_int(n as i64 - 1) / rat_int(2 * (n as i64 + 1));
            let label = format!("alpha_uniform[N={n}]");
            out.push(guard(
                label.clone(),
                alpha_constant_over(n, &cfg.identity_deltas).map(|a| Check::exact_rational(label, &a, &expected)),
            ));
            let label = format!("local_height_term[N={n}]");
            out.push(guard(label.clone(), local_height_term(n).map(|(l, r)| Check::exact_rational(label, &l, &r))));
            let label = format!("component_weights[N={n}]");
            out.push(guard(
                label.clone(),
                component_weights(n).map(|(a0, a1)| {
                    let sum = &a0 + &a1;
                    let diff = rat_int(n as i64 + 1) * (a0 - a1);
                    Check::condition(label, sum.is_zero() && diff == rat(1, 2), &diff)
                }),
            ));
            out
        }));
        for &delta in &cfg.identity_deltas {
            jobs.push(Box::new(move || local_identities_at(cfg, n, delta)));
        }
    }
    jobs
}

fn local_identities_at(cfg: &SuiteConfig, n: u64, delta: u32) -> Vec<Check> {
    let tag = format!("N={n},delta={delta}");
    let mut out = Vec::new();
    for r in 0..=cfg.identity_max_r {
        let label = format!("cancellation[{tag},r={r}]");
        out.push(guard(
            label.clone(),
            cancellation_split(n, delta, r).map(|id| Check::exact(label, &id.lhs, &id.rhs)),
        ));
        let label = format!("hecke_defect_routes[{tag},r={r}]");
        out.push(guard(
            label.clone(),
            hecke_hodge_defect(n, delta, r, true).map(|d| Check::exact(label, &d.displayed.coeff, &d.raw.coeff)),
        ));
        let label = format!("deriv_combo_fd[{tag},r={r}]");
        out.push(guard(
            label.clone(),
            whittaker_split_deriv_combo(n, delta, r).and_then(|c| {
                let fd = split_deriv_combo_numeric(n, delta, r, cfg.deriv_step)?;
                Ok(Check::real(label, c.to_f64(), fd, 1e-6))
            }),
        ));
        let label = format!("wall_crossing[{tag},r={r}]");
        out.push(guard(
            label.clone(),
            wall_crossing_pair(n, delta).and_then(|(cp, cm)| {
                let m = siegel_weil_whittaker(n, delta, r, Algebra::MatrixSplit, true)?;
                let d = siegel_weil_whittaker(n, delta, r, Algebra::DivisionNonsplit, true)?;
                Ok(Check::exact(label, &(&(&cp * &m) + &(&cm * &d)), &Surd::one(n)))
            }),
        ));
    }
    let label = format!("fourier_inversion[{tag}]");
    out.push(guard(label.clone(), fourier_inversion_check(n, delta).map(|id| Check::exact(label, &id.lhs, &id.rhs))));
    match nonsplit_integral_check(n, delta) {
        Ok(ids) => out.extend(ids.into_iter().map(|id| Check::exact(id.label.clone(), &id.lhs, &id.rhs))),
        Err(e) => out.push(failed(format!("nonsplit_integral[{tag}]"), e)),
    }
    let label = format!("kbar_shell_sum[{tag}]");
    out.push(guard(
        label.clone(),
        averaged_kbar_w(n, delta).map(|k| Check::exact(label, &k.coeff, &Surd::rational(n, averaged_kbar_shell_sum(n, delta)))),
    ));
    let label = format!("averaged_j_integral[{tag}]");
    out.push(guard(
        label.clone(),
        averaged_j_w(n, delta).map(|(ratio, integral)| {
            Check::exact_rational(label, &(integral / division_unit_volume(n, delta)), &-ratio)
        }),
    ));
    for s in 1..4 {
        let ex = rat_to_f64(&intertwining_series(n, delta, s));
        let cl = intertwining_series_closed(n, delta, s as f64);
        out.push(Check::relative(format!("intertwining_series[{tag},s={s}]"), ex, cl, 1e-13));
    }
    let label = format!("intertwining_log_deriv[{tag}]");
    out.push(guard(
        label.clone(),
        intertwining_w_value(n, delta).map(|(_, c)| {
            let h = 1e-5;
            let fd = (intertwining_normalized(n, delta, h).ln() - intertwining_normalized(n, delta, -h).ln()) / (2.0 * h);
            Check::real(label, fd, c.to_f64(), 1e-8)
        }),
    ));
    out
}

fn archimedean_jobs(cfg: &SuiteConfig) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job> = Vec::new();
    for &s in &cfg.legendre_s {
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            let target = 1.0 / (s * (s + 1.0));
            let label = format!("legendre_integral[s={s}]");
            out.push(guard(label.clone(), legendre_q_integral(s).map(|i| Check::relative(label, i, target, 1e-6))));
            match green_residue_constant(s) {
                Ok(g) => {
                    out.push(Check::real(format!("green_limit_infinity[s={s}]"), g.limit_at_infinity, 0.0, 1e-6));
                    out.push(Check::real(format!("green_limit_one[s={s}]"), g.limit_at_one, -1.0, 1e-6));
                    out.push(Check::exact_rational(format!("green_integral[s={s}]"), &rat_int(g.integral), &rat_int(-1)));
                }
                Err(e) => out.push(failed(format!("green[s={s}]"), e)),
            }
            for &t in &cfg.legendre_t {
                let label = format!("legendre_routes[s={s},t={t}]");
                let c = legendre_q_hypergeometric(s, t)
                    .and_then(|h| Ok(Check::real(label.clone(), h, legendre_q_integral_route(s, t)?, 1e-9)));
                out.push(guard(label, c));
            }
            out
        }));
    }
    for &a in &cfg.whittaker_a {
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            for &s in &cfg.whittaker_s {
                let label = format!("arch_whittaker_routes[a={a},s={s}]");
                let c = arch_whittaker(a, s, true)
                    .and_then(|r| Ok(Check::real(label.clone(), r, arch_whittaker_unregularized(a, s)?, 1e-9)));
                out.push(guard(label, c));
            }
            let label = format!("arch_whittaker_deriv0[a={a}]");
            let c = arch_whittaker_deriv0(a)
                .and_then(|(_, w1)| Ok(Check::real(label.clone(), arch_whittaker_deriv0_numeric(a, 1e-4)?, w1, 1e-7)));
            out.push(guard(label, c));
            out
        }));
    }
    if cfg.analytic_constants {
        jobs.push(Box::new(|| {
            let closed = -0.5 * (1.0 + 4f64.ln());
            match holproj_constant() {
                Ok(h) => vec![
                    Check::real("holproj_constant", h.numeric_coefficient, closed, HOLPROJ_TOL),
                    Check::real("holproj_base_integral", h.base_integral, -std::f64::consts::PI, 1e-10),
                ],
                Err(e) => vec![failed("holproj_constant".into(), e)],
            }
        }));
        jobs.push(Box::new(|| {
            let (closed, fd) = gamma_ratio_deriv();
            vec![Check::real("gamma_ratio_deriv", fd, closed, GAMMA_RATIO_TOL)]
        }));
    }
    jobs
}

/// Every subset of `places` of size at most `max` whose size has the given parity.
fn subsets(places: &[FinitePlace], max: usize, parity: usize) -> Vec<Vec<FinitePlace>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << places.len()) {
        let k = mask.count_ones() as usize;
        if k <= max && k % 2 == parity {
            out.push(places.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone()).collect());
        }
    }
    out
}

fn places_up_to(field: &NumberFieldData, bound: u64) -> Vec<FinitePlace> {
    (2..=bound).filter(|&p| is_prime(p)).flat_map(|p| field.places_above(p).unwrap_or_default()).collect()
}

fn set_label(field: &NumberFieldData, set: &[FinitePlace]) -> String {
    let names: Vec<String> = set.iter().map(FinitePlace::label).collect();
    format!("{field};{{{}}}", names.join(","))
}

fn dual_route_check(field: &NumberFieldData, set: Vec<FinitePlace>, prec: f64) -> Check {
    let label = format!("dual_route[{}]", set_label(field, &set));
    let c = RamificationSet::new(field, set).map_err(|e| e.to_string()).and_then(|ram| {
        let a = modular_height(field, &ram, prec).map_err(|e| e.to_string())?;
        let b = modular_height_via_s2(field, &ram, prec).map_err(|e| e.to_string())?;
        Ok(Check::real(label.clone(), a.value, b.value, 1e-8))
    });
    guard(label, c)
}

fn kry_checks(set: Vec<FinitePlace>, prec: f64) -> Vec<Check> {
    let q = NumberFieldData::rationals();
    let label = format!("kry[{}]", set_label(&q, &set));
    let res = RamificationSet::new(&q, set).map_err(|e| e.to_string()).and_then(|ram| {
        let k = kry_height(&q, &ram, prec).map_err(|e| e.to_string())?;
        let gaps_ok = k.coefficient_gaps.iter().all(|g| g == "1/2");
        Ok(vec![
            Check::real(label.clone(), k.from_modular_height, k.value, KRY_TOL),
            Check::condition(format!("kry_gap_half[{}]", set_label(&q, ram.places())), gaps_ok, &rat(1, 2)),
        ])
    });
    res.unwrap_or_else(|e| vec![failed(label, e)])
}

/// `deg L_U` from Siegel's formula for `zeta_F(-1)` (or `-1/12` over `Q`).
fn degree_oracle(field: &NumberFieldData, ram: &RamificationSet) -> Rational {
    let zeta = if field.is_rational() { rat(-1, 12) } else { oracle::dedekind_zeta_minus1_siegel(field.disc) };
    let prod = ram.places().iter().fold(Rational::one(), |acc, v| acc * rat_int(v.norm as i64 - 1));
    let sign = if field.degree % 2 == 0 { Rational::one() } else { -Rational::one() };
    rat_int(4) * rat_int(field.class_number as i64) * sign * zeta * prod / rat_int(1 << field.degree)
}

fn random_degree_instance(rng: &mut ChaCha8Rng) -> (NumberFieldData, Vec<FinitePlace>) {
    loop {
        let field = if rng.gen_bool(0.25) {
            NumberFieldData::rationals()
        } else {
            let d = rng.gen_range(2..60i64);
            if !is_squarefree(d) {
                continue;
            }
            let h = rng.gen_range(1..=4u64);
            NumberFieldData::real_quadratic(d).and_then(|f| f.with_class_number(h)).expect("squarefree d > 1")
        };
        let pool = places_up_to(&field, 23);
        let chosen: Vec<FinitePlace> = pool.into_iter().filter(|_| rng.gen_bool(0.3)).collect();
        if (chosen.len() as u32 + field.degree) % 2 == 1 {
            return (field, chosen);
        }
    }
}

fn global_jobs(cfg: &SuiteConfig) -> Result<Vec<Job<'_>>, VerifyError> {
    let mut jobs: Vec<Job> = Vec::new();
    let prec = cfg.precision;
    for spec in &cfg.fields {
        let field = parse_field(spec).map_err(|e| VerifyError::Config(e.to_string()))?;
        let parity = (field.degree as usize + 1) % 2;
        for set in subsets(&places_up_to(&field, cfg.prime_bound), cfg.max_places, parity) {
            let field = field.clone();
            jobs.push(Box::new(move || vec![dual_route_check(&field, set.clone(), prec)]));
        }
    }
    if cfg.kry_max_places > 0 {
        let q = NumberFieldData::rationals();
        for set in subsets(&places_up_to(&q, cfg.prime_bound), cfg.kry_max_places, 0) {
            if !set.is_empty() {
                jobs.push(Box::new(move || kry_checks(set.clone(), prec)));
            }
        }
    }
    if !cfg.fields.is_empty() {
        jobs.push(Box::new(move || {
            let q = NumberFieldData::rationals();
            let empty = RamificationSet::new(&q, vec![]).expect("empty set over Q");
            let glaisher = -oracle::zeta_log_deriv_minus1_glaisher() - 0.5;
            let label = "bost_kuhn".to_string();
            vec![guard(label.clone(), modular_height(&q, &empty, prec).map(|h| Check::real(label, h.value, glaisher, 1e-8)))]
        }));
        jobs.push(Box::new(|| {
            let q = NumberFieldData::rationals();
            let ram = RamificationSet::parse(&q, "2,3").expect("valid set");
            let label = "vigneras_degree[Q;{2,3}]".to_string();
            vec![guard(label.clone(), vigneras_degree(&q, &ram, 1).map(|d| Check::exact_rational(label, &d, &rat(1, 3))))]
        }));
    }
    if cfg.degree_instances > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let instances: Vec<_> = (0..cfg.degree_instances).map(|_| random_degree_instance(&mut rng)).collect();
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            for (i, (field, set)) in instances.iter().enumerate() {
                let tag = format!("#{i:02} {};h={}", set_label(field, set), field.class_number);
                let ram = match RamificationSet::new(field, set.clone()) {
                    Ok(r) => r,
                    Err(e) => {
                        out.push(failed(format!("degree[{tag}]"), e));
                        continue;
                    }
                };
                match vigneras_degree(field, &ram, field.class_number) {
                    Ok(d) => {
                        out.push(Check::condition(format!("degree_positive[{tag}]"), d.is_positive(), &d));
                        out.push(Check::exact_rational(format!("degree_oracle[{tag}]"), &d, &degree_oracle(field, &ram)));
                    }
                    Err(e) => out.push(failed(format!("degree[{tag}]"), e)),
                }
            }
            out
        }));
    }
    for &disc in &cfg.cm_discs {
        jobs.push(Box::new(move || {
            let label = format!("cm_log_deriv[D={disc}]");
            let c = quadratic_l_log_deriv_at0(disc, prec).map(|v| {
                let (l, dl) = oracle::l_and_derivative_hurwitz(disc, 0.0);
                Check::real(label.clone(), v.value, dl / l, 1e-8)
            });
            vec![guard(label, c)]
        }));
    }
    for &(x, y) in &cfg.kronecker_points {
        jobs.push(Box::new(move || {
            let label = format!("kronecker[tau={x}+{y}i]");
            let c = UpperHalfPoint::new(x, y).and_then(|tau| kronecker_limit(tau, 1e-8)).map(|k| {
                Check { abs_error: k.residual, pass: k.residual < 1e-6, ..Check::real(label.clone(), k.lhs, k.rhs, 1e-6) }
            });
            vec![guard(label, c)]
        }));
    }
    Ok(jobs)
}

/// Run one suite (or all of them) on the given grids.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<VerificationReport, VerifyError> {
    cfg.validate()?;
    let jobs = match suite {
        Suite::LocalOracle => local_oracle_jobs(cfg),
        Suite::LocalIdentities => local_identity_jobs(cfg),
        Suite::Archimedean => archimedean_jobs(cfg),
        Suite::Global => global_jobs(cfg)?,
        Suite::All => {
            let mut all = local_oracle_jobs(cfg);
            all.extend(local_identity_jobs(cfg));
            all.extend(archimedean_jobs(cfg));
            all.extend(global_jobs(cfg)?);
            all
        }
    };
    Ok(VerificationReport::new(suite.name(), run_jobs(jobs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_vacuous() {
        for s in Suite::ALL {
            let r = run_suite(s, &SuiteConfig::empty()).unwrap();
            assert!(r.checks.is_empty() && r.overall, "{s}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = SuiteConfig { oracle_primes: vec![5], max_depth: 5, ..SuiteConfig::empty() };
        assert!(matches!(run_suite(Suite::LocalOracle, &cfg), Err(VerifyError::Budget { norm: 5, .. })));
        assert!(matches!("nope".parse::<Suite>(), Err(VerifyError::UnknownSuite(_))));
    }

    #[test]
    fn subset_enumeration() {
        let q = NumberFieldData::rationals();
        let places = places_up_to(&q, 13);
        assert_eq!(subsets(&places, 3, 1).len(), 6 + 20);
        assert_eq!(subsets(&places, 6, 0).len(), 1 + 15 + 15 + 1);
    }

    #[test]
    fn degree_oracle_matches_on_fixed_input() {
        let f = NumberFieldData::real_quadratic(5).unwrap();
        let ram = RamificationSet::parse(&f, "2").unwrap();
        assert_eq!(degree_oracle(&f, &ram), vigneras_degree(&f, &ram, 1).unwrap());
    }
}
