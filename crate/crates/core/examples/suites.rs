use modheight::verify::{run_suite, Suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig::default();
    for s in [Suite::LocalOracle, Suite::LocalIdentities, Suite::Archimedean, Suite::Global] {
        let t = std::time::Instant::now();
        let r = run_suite(s, &cfg).unwrap();
        println!("{s}: {} checks, overall {} in {:.1?}", r.checks.len(), r.overall, t.elapsed());
        for c in r.failures() {
            println!("  FAIL {} lhs={:?} rhs={:?} err={:e}", c.label, c.lhs, c.rhs, c.abs_error);
        }
    }
}
