use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use modheight::exact::{rat_string, rat_to_f64};
use modheight::heights::{cm_height, modular_height, modular_height_via_s2, vigneras_degree, HeightResult};
use modheight::lfunc::{quadratic_l_at0, quadratic_l_log_deriv_at0, zeta_log_deriv_at2, zeta_log_deriv_at_minus1, zeta_value_at_minus1};
use modheight::local_nonarch::{whittaker, Algebra, LocalValue, LocalWhittakerSpec, SPoint};
use modheight::numberfield::{parse_field, NumberFieldData, RamificationSet};
use modheight::verify::{run_suite, Suite, SuiteConfig, VerificationReport, VerifyError};

const DUAL_ROUTE_TOL: f64 = 1e-8;
const PRECISION_RANGE: (f64, f64) = (1e-12, 1e-2);

#[derive(Parser)]
#[command(name = "modheight", version, about = "Heights of Shimura curves from quaternion algebras, and their local ingredients")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Absolute error target for L-series values, in [1e-12, 1e-2].
    #[arg(long, global = true, env = "MODHEIGHT_PRECISION", default_value_t = 1e-10)]
    precision: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Minus1,
    Two,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraArg {
    #[value(alias = "matrix")]
    Split,
    #[value(alias = "division")]
    Nonsplit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    LocalOracle,
    LocalIdentities,
    Archimedean,
    Global,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Modular height of X_U for a totally real field of degree <= 2.
    Height {
        #[arg(long, default_value = "Q")]
        field: String,
        /// Finite ramified places: `p` or `p:split1|split2|inert|ram`, comma separated.
        #[arg(long, default_value = "")]
        ramified: String,
        #[arg(long, value_enum, default_value_t = RouteArg::Minus1)]
        route: RouteArg,
    },
    /// Height of a CM point over Q.
    CmHeight {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        #[arg(long = "dB", allow_negative_numbers = true)]
        d_b: i64,
        #[arg(long = "dEF", allow_negative_numbers = true)]
        d_ef: i64,
    },
    /// Degree of the Hodge bundle, exactly.
    Degree {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value = "")]
        ramified: String,
        #[arg(long, default_value_t = 1)]
        class_number: u64,
    },
    /// Dedekind zeta data of a field, or L(0) data of an imaginary quadratic character.
    Lvalue {
        #[arg(long, conflicts_with = "disc", required_unless_present = "disc")]
        field: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        disc: Option<i64>,
    },
    /// Local Whittaker value at a finite place.
    Local {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        delta: u32,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        /// An integer gives an exact value; anything else is evaluated in floating point.
        #[arg(long, allow_negative_numbers = true)]
        s: String,
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        /// Evaluate at a non-unit `u` (the value is then zero).
        #[arg(long)]
        nonunit: bool,
    },
    /// Run identity suites and report every check.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long)]
        max_depth: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
}

struct CliError {
    flag: &'static str,
    message: String,
    code: u8,
}

impl CliError {
    fn domain(flag: &'static str, err: impl fmt::Display) -> Self {
        CliError { flag, message: err.to_string(), code: 1 }
    }
}

enum Outcome {
    Ok,
    VerificationFailed,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct FieldInfo {
    field: String,
    #[serde(rename = "d_F")]
    d_f: u64,
    degree: u32,
    class_number: u64,
}

impl From<&NumberFieldData> for FieldInfo {
    fn from(f: &NumberFieldData) -> Self {
        FieldInfo { field: f.to_string(), d_f: f.disc, degree: f.degree, class_number: f.class_number }
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct HeightOutput {
    field: FieldInfo,
    ramified: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minus1: Option<HeightResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    two: Option<HeightResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    difference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct CmOutput {
    disc: i64,
    d_b: i64,
    d_ef: i64,
    value: f64,
    l_term: f64,
    discriminant_term: f64,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct ExactOutput {
    exact: Option<String>,
    value: f64,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct DegreeOutput {
    field: FieldInfo,
    ramified: Vec<String>,
    degree: ExactOutput,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct FieldLOutput {
    field: FieldInfo,
    zeta_at_minus1: ExactOutput,
    log_deriv_at_2: f64,
    log_deriv_at_minus1: f64,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct CharacterLOutput {
    disc: i64,
    l_at_0: ExactOutput,
    log_deriv_at_0: f64,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct LocalOutput {
    norm: u64,
    delta: u32,
    r: i64,
    s: String,
    algebra: Algebra,
    u_unit: bool,
    whittaker: ExactOutput,
}

fn print_json<T: Serialize>(x: &T) {
    println!("{}", serde_json::to_string_pretty(x).expect("serializable output"));
}

fn field_and_set(field: &str, ramified: &str) -> Result<(NumberFieldData, RamificationSet), CliError> {
    let f = parse_field(field).map_err(|e| CliError::domain("--field", e))?;
    let ram = RamificationSet::parse(&f, ramified).map_err(|e| CliError::domain("--ramified", e))?;
    Ok((f, ram))
}

fn labels(ram: &RamificationSet) -> Vec<String> {
    ram.places().iter().map(|p| p.label()).collect()
}

fn print_height_table(title: &str, h: &HeightResult) {
    println!("{title:<22}{:.12}", h.value);
    for (k, v) in &h.breakdown {
        println!("  {k:<20}{v:.12}");
    }
}

fn cmd_height(field: &str, ramified: &str, route: RouteArg, prec: f64, format: Format) -> Result<Outcome, CliError> {
    let (f, ram) = field_and_set(field, ramified)?;
    let height_err = |e| CliError::domain("--field", e);
    let minus1 = match route {
        RouteArg::Minus1 | RouteArg::Both => Some(modular_height(&f, &ram, prec).map_err(height_err)?),
        RouteArg::Two => None,
    };
    let two = match route {
        RouteArg::Two | RouteArg::Both => Some(modular_height_via_s2(&f, &ram, prec).map_err(height_err)?),
        RouteArg::Minus1 => None,
    };
    let difference = match (&minus1, &two) {
        (Some(a), Some(b)) => Some(a.value - b.value),
        _ => None,
    };
    let out = HeightOutput {
        field: FieldInfo::from(&f),
        ramified: labels(&ram),
        minus1,
        two,
        difference,
        tolerance: difference.map(|_| DUAL_ROUTE_TOL),
    };
    match format {
        Format::Json => print_json(&out),
        Format::Table => {
            println!("{:<22}{}", "field", out.field.field);
            println!("{:<22}{{{}}}", "ramified", out.ramified.join(","));
            if let Some(h) = &out.minus1 {
                print_height_table("height (s = -1)", h);
            }
            if let Some(h) = &out.two {
                print_height_table("height (s = 2)", h);
            }
            if let Some(d) = difference {
                println!("{:<22}{d:.3e} (tolerance {DUAL_ROUTE_TOL:e})", "difference");
            }
        }
    }
    match difference {
        Some(d) if !(d.abs() <= DUAL_ROUTE_TOL) => {
            eprintln!("error: --route both: routes differ by {d:e}, over {DUAL_ROUTE_TOL:e}");
            Ok(Outcome::VerificationFailed)
        }
        _ => Ok(Outcome::Ok),
    }
}

fn cmd_cm_height(disc: i64, d_b: i64, d_ef: i64, prec: f64, format: Format) -> Result<Outcome, CliError> {
    let l = quadratic_l_log_deriv_at0(disc, prec).map_err(|e| CliError::domain("--disc", e))?;
    let h = cm_height(&l, d_b, d_ef).map_err(|e| {
        let flag = if d_b < 1 { "--dB" } else { "--dEF" };
        CliError::domain(flag, e)
    })?;
    let out = CmOutput { disc, d_b, d_ef, value: h.value, l_term: h.l_term, discriminant_term: h.discriminant_term };
    match format {
        Format::Json => print_json(&out),
        Format::Table => {
            println!("{:<22}{}", "disc", disc);
            println!("{:<22}{:.12}", "height", out.value);
            println!("  {:<20}{:.12}", "-L'(0)/L(0)", out.l_term);
            println!("  {:<20}{:.12}", "log(dB/dEF)/2", out.discriminant_term);
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_degree(field: &str, ramified: &str, class_number: u64, format: Format) -> Result<Outcome, CliError> {
    let (f, ram) = field_and_set(field, ramified)?;
    let f = f.with_class_number(class_number).map_err(|e| CliError::domain("--class-number", e))?;
    let d = vigneras_degree(&f, &ram, class_number).map_err(|e| CliError::domain("--class-number", e))?;
    let out = DegreeOutput {
        field: FieldInfo::from(&f),
        ramified: labels(&ram),
        degree: ExactOutput { exact: Some(rat_string(&d)), value: rat_to_f64(&d) },
    };
    match format {
        Format::Json => print_json(&out),
        Format::Table => {
            println!("{:<22}{}", "field", out.field.field);
            println!("{:<22}{{{}}}", "ramified", out.ramified.join(","));
            println!("{:<22}{}", "class number", class_number);
            println!("{:<22}{} = {:.12}", "degree", out.degree.exact.as_deref().unwrap_or(""), out.degree.value);
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_lvalue(field: Option<&str>, disc: Option<i64>, prec: f64, format: Format) -> Result<Outcome, CliError> {
    if let Some(disc) = disc {
        let l0 = quadratic_l_at0(disc).map_err(|e| CliError::domain("--disc", e))?;
        let ratio = quadratic_l_log_deriv_at0(disc, prec).map_err(|e| CliError::domain("--disc", e))?;
        let out = CharacterLOutput {
            disc,
            l_at_0: ExactOutput { exact: Some(rat_string(&l0)), value: rat_to_f64(&l0) },
            log_deriv_at_0: ratio.value,
        };
        match format {
            Format::Json => print_json(&out),
            Format::Table => {
                println!("{:<22}{}", "disc", disc);
                println!("{:<22}{} = {:.12}", "L(0)", out.l_at_0.exact.as_deref().unwrap_or(""), out.l_at_0.value);
                println!("{:<22}{:.12}", "L'(0)/L(0)", out.log_deriv_at_0);
            }
        }
        return Ok(Outcome::Ok);
    }
    let f = parse_field(field.unwrap_or("Q")).map_err(|e| CliError::domain("--field", e))?;
    let z = zeta_value_at_minus1(&f);
    let at2 = zeta_log_deriv_at2(&f, prec).map_err(|e| CliError::domain("--precision", e))?;
    let atm1 = zeta_log_deriv_at_minus1(&f, prec).map_err(|e| CliError::domain("--precision", e))?;
    let out = FieldLOutput {
        field: FieldInfo::from(&f),
        zeta_at_minus1: ExactOutput { exact: Some(rat_string(&z)), value: rat_to_f64(&z) },
        log_deriv_at_2: at2.value,
        log_deriv_at_minus1: atm1.value,
    };
    match format {
        Format::Json => print_json(&out),
        Format::Table => {
            println!("{:<22}{}", "field", out.field.field);
            println!("{:<22}{} = {:.12}", "zeta_F(-1)", out.zeta_at_minus1.exact.as_deref().unwrap_or(""), out.zeta_at_minus1.value);
            println!("{:<22}{:.12}", "zeta_F'/zeta_F(2)", out.log_deriv_at_2);
            println!("{:<22}{:.12}", "zeta_F'/zeta_F(-1)", out.log_deriv_at_minus1);
        }
    }
    Ok(Outcome::Ok)
}

fn parse_s(s: &str) -> Result<SPoint, CliError> {
    if let Ok(k) = s.trim().parse::<i64>() {
        return Ok(SPoint::Exact(k));
    }
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(SPoint::Real(x)),
        _ => Err(CliError::domain("--s", format!("expected a number, got {s:?}"))),
    }
}

fn cmd_local(n: u64, delta: u32, r: i64, s: &str, algebra: AlgebraArg, nonunit: bool, format: Format) -> Result<Outcome, CliError> {
    let algebra = match algebra {
        AlgebraArg::Split => Algebra::MatrixSplit,
        AlgebraArg::Nonsplit => Algebra::DivisionNonsplit,
    };
    let spec = LocalWhittakerSpec { norm: n, delta, r, u_unit: !nonunit, algebra, s: parse_s(s)? };
    let w = whittaker(&spec).map_err(|e| {
        let flag = match e {
            modheight::local_nonarch::LocalError::InvalidNorm(_) => "--N",
            _ => "--r",
        };
        CliError::domain(flag, e)
    })?;
    let exact = match &w {
        LocalValue::Exact(x) => Some(x.exact_string()),
        LocalValue::Real(_) => None,
    };
    let out = LocalOutput { norm: n, delta, r, s: s.trim().to_string(), algebra, u_unit: !nonunit, whittaker: ExactOutput { exact, value: w.to_f64() } };
    match format {
        Format::Json => print_json(&out),
        Format::Table => match &out.whittaker.exact {
            Some(e) => println!("W = {e} = {:.15}", out.whittaker.value),
            None => println!("W = {:.15}", out.whittaker.value),
        },
    }
    Ok(Outcome::Ok)
}

fn print_report_table(r: &VerificationReport) {
    for c in &r.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{status}  {:<60} err {:.2e}  tol {:.1e}", c.label, c.abs_error, c.tolerance);
    }
    let failures = r.failures().count();
    println!(
        "suite {}: {} checks, {} failed, overall {}",
        r.suite,
        r.checks.len(),
        failures,
        if r.overall { "PASS" } else { "FAIL" }
    );
}

fn cmd_verify(suite: SuiteArg, max_depth: Option<u32>, primes: Option<Vec<u64>>, prec: f64, format: Format) -> Result<Outcome, CliError> {
    let suite = match suite {
        SuiteArg::LocalOracle => Suite::LocalOracle,
        SuiteArg::LocalIdentities => Suite::LocalIdentities,
        SuiteArg::Archimedean => Suite::Archimedean,
        SuiteArg::Global => Suite::Global,
        SuiteArg::All => Suite::All,
    };
    let mut cfg = SuiteConfig { precision: prec, ..SuiteConfig::default() };
    if let Some(d) = max_depth {
        cfg.max_depth = d;
    }
    if let Some(p) = primes {
        cfg.oracle_primes = p;
    }
    let report = run_suite(suite, &cfg).map_err(|e| {
        let flag = match e {
            VerifyError::Budget { .. } => "--max-depth",
            VerifyError::Config(_) => "--primes",
            VerifyError::UnknownSuite(_) => "--suite",
        };
        CliError::domain(flag, e)
    })?;
    match format {
        Format::Json => print_json(&report),
        Format::Table => print_report_table(&report),
    }
    if report.overall {
        Ok(Outcome::Ok)
    } else {
        for c in report.failures() {
            eprintln!("error: --suite {}: check {} failed (error {:e}, tolerance {:e})", report.suite, c.label, c.abs_error, c.tolerance);
        }
        Ok(Outcome::VerificationFailed)
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let (lo, hi) = PRECISION_RANGE;
    if !(cli.precision >= lo && cli.precision <= hi) {
        return Err(CliError::domain("--precision", format!("{:e} is outside [{lo:e}, {hi:e}] (also settable via MODHEIGHT_PRECISION)", cli.precision)));
    }
    let (prec, format) = (cli.precision, cli.format);
    match cli.command {
        Command::Height { field, ramified, route } => cmd_height(&field, &ramified, route, prec, format),
        Command::CmHeight { disc, d_b, d_ef } => cmd_cm_height(disc, d_b, d_ef, prec, format),
        Command::Degree { field, ramified, class_number } => cmd_degree(&field, &ramified, class_number, format),
        Command::Lvalue { field, disc } => cmd_lvalue(field.as_deref(), disc, prec, format),
        Command::Local { n, delta, r, s, algebra, nonunit } => cmd_local(n, delta, r, &s, algebra, nonunit, format),
        Command::Verify { suite, max_depth, primes } => cmd_verify(suite, max_depth, primes, prec, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {}: {}", e.flag, e.message);
            ExitCode::from(e.code)
        }
    }
}
