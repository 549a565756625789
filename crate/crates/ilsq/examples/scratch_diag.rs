// temporary diagnostic, not part of the deliverable
use ilsq::pps::{minimize_component, solve, SolveOptions};
use ilsq::problem::presets;
use std::time::Instant;

fn main() {
    let cases: Vec<(&str, ilsq::LsqProblem)> = vec![
        ("example1", presets::example1()),
        ("gay", presets::gay()),
        ("bentbib", presets::bentbib()),
        ("rohn", presets::bentbib_rohn()),
        ("example4", presets::example4()),
        ("example5", presets::example5()),
    ];
    for (name, p) in &cases {
        let mut opts = SolveOptions::modified();
        opts.eps = 1e-6;
        opts.max_iters = 100_000;
        let t = Instant::now();
        match solve(p, &opts) {
            Ok(sol) => {
                let box_str: Vec<String> =
                    sol.enclosure.iter().map(|iv| format!("[{:.6}, {:.6}]", iv.lo(), iv.hi())).collect();
                println!(
                    "{name}: {} iters={} conv={} wall={:?} rho={:.4} ratio={:.4}",
                    box_str.join(" "),
                    sol.total_iterations(),
                    sol.converged(),
                    t.elapsed(),
                    sol.rank.spectral_value,
                    sol.rank.ratio,
                );
            }
            Err(e) => println!("{name}: ERROR {e}"),
        }
    }

    // toggles on example5 x1 min with gap target
    let sys = presets::example5().extended();
    let comp = sys.component_of(0);
    for (label, opts) in [
        ("squeeze-off", {
            let mut o = SolveOptions::modified();
            o.squeeze = false;
            o.target_gap = Some(2e-7);
            o.eps = 1e-9;
            o.max_iters = 300_000;
            o
        }),
        ("halve-rhs", {
            let mut o = SolveOptions::modified();
            o.rhs_split = ilsq::RhsSplit::Halve;
            o.target_gap = Some(2e-7);
            o.eps = 1e-9;
            o.max_iters = 300_000;
            o
        }),
        ("widest-sel", {
            let mut o = SolveOptions::modified();
            o.selection = ilsq::Selection::Widest;
            o.target_gap = Some(2e-7);
            o.eps = 1e-9;
            o.max_iters = 300_000;
            o
        }),
        ("simple", {
            let mut o = SolveOptions::simple();
            o.target_gap = Some(2e-7);
            o.eps = 1e-9;
            o.max_iters = 300_000;
            o
        }),
    ] {
        let t = Instant::now();
        let (z, stats) = minimize_component(&sys.matrix, &sys.rhs, comp, &opts).unwrap();
        println!(
            "example5 x1min {label}: Z={z:.9} iters={} gap={:.2e} conv={} wall={:?}",
            stats.iterations, stats.gap, stats.converged, t.elapsed()
        );
    }

    // toft rank values
    let toft = presets::toft_15x12();
    let report = ilsq::check_full_rank(toft.matrix()).unwrap();
    println!(
        "toft rank: rho={:.4} ratio={:.4} sigma_mid_min={:.4} sigma_rad_max={:.4}",
        report.spectral_value, report.ratio, report.sigma_mid_min, report.sigma_rad_max
    );
}
