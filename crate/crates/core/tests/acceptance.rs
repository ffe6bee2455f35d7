//! Acceptance run: one PASS/FAIL line per criterion, followed by the
//! measurements behind it. Exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use autoheat::automorphic::eisenstein::EisensteinSeries;
use autoheat::automorphic::maass::{load_maass_data, spot_check_point, SPOT_CHECK_STEP};
use autoheat::automorphic::bessel::bessel_k_imag;
use autoheat::checks::{
    heat_suite, mu_isometry_error, oracle_disagreement, semigroup_suite, sobolev_suite, Bound, CheckContext, CheckRow,
    ORACLE_POINTS, ORACLE_TIMES,
};
use autoheat::fundamental_domain::{integrate, QuadSpec};
use autoheat::oracle::{k0_power_series, periodized_oracle};
use autoheat::sobolev::analyze;
use autoheat::synthesis::{evaluate_heat_kernel, smoothness_profile};
use autoheat::{GridConfig, HPoint, SobolevIndex, SpectralGrid};

fn data_path() -> String {
    format!("{}/../../data/maass_sl2z.txt", env!("CARGO_MANIFEST_DIR"))
}

struct Criterion {
    number: u32,
    title: &'static str,
    budget: Duration,
    rows: Vec<CheckRow>,
    notes: Vec<String>,
    elapsed: Duration,
}

impl Criterion {
    fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass) && self.elapsed <= self.budget
    }

    fn report(&self) {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {} ({:.2?}, budget {:?})",
            self.number, self.title, self.elapsed, self.budget
        );
        for r in &self.rows {
            let mark = if r.pass { "ok  " } else { "FAIL" };
            println!("    {mark} {:<40} {:>14.6e} {}", r.name, r.measured, r.bound);
        }
        for n in &self.notes {
            println!("    info {n}");
        }
    }
}

fn timed<F>(number: u32, title: &'static str, budget_secs: u64, body: F) -> Criterion
where
    F: FnOnce(&mut Vec<String>) -> Vec<CheckRow>,
{
    let start = Instant::now();
    let mut notes = Vec::new();
    let rows = body(&mut notes);
    Criterion {
        number,
        title,
        budget: Duration::from_secs(budget_secs),
        rows,
        notes,
        elapsed: start.elapsed(),
    }
}

fn pick(rows: &[CheckRow], prefixes: &[&str]) -> Vec<CheckRow> {
    rows.iter()
        .filter(|r| prefixes.iter().any(|p| r.name.starts_with(p)))
        .cloned()
        .collect()
}

fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// Smooth window in ln y on (a, b); for a > 0 its support lies above the
/// arc, so it is a smooth compactly supported function on the quotient.
fn height_window(a: f64, b: f64) -> impl Fn(HPoint) -> f64 {
    move |z: HPoint| {
        let l = z.reduce().y().ln();
        bump((2.0 * l - a - b) / (b - a))
    }
}

fn parseval_error<F: Fn(HPoint) -> f64>(f: F, grid: &Arc<SpectralGrid>, spec: &QuadSpec) -> f64 {
    let nodes = spec.nodes();
    let physical = integrate(&nodes, |x, y| {
        let v = f(HPoint::new(x, y).expect("quadrature node in H"));
        v * v
    });
    let spectral = analyze(&f, grid, spec).expect("analysis").norm_vs(SobolevIndex(0)).powi(2);
    (spectral - physical).abs() / physical
}

fn main() -> ExitCode {
    let setup = Instant::now();
    let forms = load_maass_data(data_path()).expect("bundled Maass data loads");
    let grid = Arc::new(SpectralGrid::build(forms, GridConfig::with_r_max(12.0)).expect("grid builds"));
    let ctx = CheckContext::new(grid.clone());
    println!(
        "setup: {} grid points, {} cusp forms, r_max {} ({:.2?})",
        grid.len(),
        grid.cusp_forms().len(),
        grid.r_max(),
        setup.elapsed()
    );

    let mut results = Vec::new();

    results.push(timed(1, "mu isometry", 1, |_| {
        vec![CheckRow::new("mu_isometry_100_samples", mu_isometry_error(&ctx, 100), Bound::AtMost(1e-12))]
    }));
    results.push(timed(2, "operator suite", 1, |_| {
        let rows = sobolev_suite(&ctx).expect("sobolev suite");
        pick(&rows, &["m_symmetry", "m_negativity", "resolvent_bound", "resolvent_roundtrip"])
    }));

    results.push(timed(3, "semigroup suite", 1, |_| {
        let rows = semigroup_suite(&ctx).expect("semigroup suite");
        pick(&rows, &["identity_at_zero", "semigroup_law", "contraction", "strong_continuity"])
    }));

    results.push(timed(4, "heat equation residual", 1, |_| {
        let rows = heat_suite(&ctx).expect("heat suite");
        pick(&rows, &["heat_residual"])
    }));
    results.push(timed(5, "initial condition", 1, |_| {
        let rows = heat_suite(&ctx).expect("heat suite");
        pick(&rows, &["gap_"])
    }));
    results.push(timed(6, "uniqueness evidence", 5, |_| {
        let rows = semigroup_suite(&ctx).expect("semigroup suite");
        pick(&rows, &["acp_", "euler_order"])
    }));

    results.push(timed(7, "oracle agreement", 120, |notes| {
        let mut rows = Vec::new();
        for t in ORACLE_TIMES {
            for (x, y) in ORACLE_POINTS {
                let z = HPoint::new(x, y).expect("valid point");
                let d = oracle_disagreement(&ctx, t, z, 25.0).expect("oracle");
                rows.push(CheckRow::new(format!("t={t} z={z} B=25"), d, Bound::AtMost(1e-3)));
            }
        }
        for bound in [100.0, 400.0] {
            let z = HPoint::I;
            let d = oracle_disagreement(&ctx, 2.0, z, bound).expect("oracle");
            notes.push(format!("t=2 z={z} B={bound}: relative disagreement {d:.3e}"));
        }
        rows
    }));

    results.push(timed(8, "long-time limit", 30, |notes| {
        let target = 3.0 / PI;
        let spectral = evaluate_heat_kernel(8.0, HPoint::I, &grid).expect("synthesis").value.re;
        let oracle = periodized_oracle(8.0, HPoint::I, ctx.long_time_norm_bound).expect("oracle");
        notes.push(format!(
            "spectral {spectral:.9}, oracle {:.9} over {} elements (B={})",
            oracle.value, oracle.elements, ctx.long_time_norm_bound
        ));
        vec![
            CheckRow::new("|spectral(8, i) - 3/pi|", (spectral - target).abs(), Bound::AtMost(2e-2)),
            CheckRow::new("|oracle(8, i) - 3/pi|", (oracle.value - target).abs(), Bound::AtMost(2e-2)),
        ]
    }));

    results.push(timed(9, "smoothness profile", 30, |_| {
        let s_list: Vec<SobolevIndex> = (0..=20).map(SobolevIndex).collect();
        let smooth = smoothness_profile(1.0, &s_list, &grid).expect("profile");
        let delta = smoothness_profile(0.0, &[SobolevIndex(0)], &grid).expect("profile");
        vec![
            CheckRow::new("t=1 tail change, s=0..20", smooth.max_relative_change, Bound::AtMost(1e-6)),
            CheckRow::new("t=1 stable flag", f64::from(u8::from(smooth.stable)), Bound::AtLeast(1.0)),
            CheckRow::new(
                "t=0 s=0 growth under doubling",
                delta.doubled[0] / delta.norms[0].1,
                Bound::AtLeast(1.1),
            ),
        ]
    }));

    results.push(timed(10, "Parseval", 300, |notes| {
        let spec = QuadSpec {
            x_panels: 4,
            x_nodes: 24,
            cusp_panels: 6,
            cusp_nodes: 24,
            cusp_ratio: 1.0,
            sliver_nodes: 16,
            height_cutoff: None,
        };
        let window = parseval_error(height_window(0.05, 2.5), &grid, &spec);
        // largest hyperbolic disc inside F, centred on the imaginary axis
        let centre = HPoint::new(0.0, 0.34f64.exp()).expect("valid point");
        let disc = parseval_error(move |z: HPoint| bump(z.reduce().distance(&centre) / 0.3466), &grid, &spec);
        notes.push(format!(
            "radial bump of radius 0.3466 at {centre}: relative error {disc:.3e} (spectral mass above r=12)"
        ));
        vec![CheckRow::new("height-window bump, ln y in (0.05, 2.5)", window, Bound::AtMost(1e-2))]
    }));

    results.push(timed(11, "special functions", 10, |_| {
        let mut rows = vec![
            CheckRow::new(
                "|K_0(1) - 0.4210244382|",
                (bessel_k_imag(0.0, 1.0).expect("K_0") - 0.4210244382).abs(),
                Bound::AtMost(1e-10),
            ),
            CheckRow::new(
                "|K_0(1) - series oracle|",
                (bessel_k_imag(0.0, 1.0).expect("K_0") - k0_power_series(1.0)).abs(),
                Bound::AtMost(1e-10),
            ),
        ];
        for r in [1.0, 5.0] {
            let e = EisensteinSeries::new(r).expect("Eisenstein series");
            let mut worst: f64 = 0.0;
            for (x, y) in [(0.3, 1.1), (0.1, 0.95), (-0.45, 1.2), (0.2, 0.7)] {
                let z = HPoint::new(x, y).expect("valid point");
                let w = z.invert();
                let a = e.eval(z, e.terms_needed(z.y())).expect("E(z)");
                let b = e.eval(w, e.terms_needed(w.y())).expect("E(-1/z)");
                worst = worst.max((a - b).norm());
            }
            rows.push(CheckRow::new(format!("E inversion, r={r}"), worst, Bound::AtMost(1e-8)));
        }
        let first = &grid.cusp_forms()[0];
        let residual = first
            .laplacian_residual(spot_check_point(), SPOT_CHECK_STEP)
            .expect("Laplacian");
        rows.push(CheckRow::new(
            format!("Maass Laplacian residual, r={}", first.r),
            residual,
            Bound::AtMost(1e-4),
        ));
        rows
    }));

    for c in &results {
        c.report();
    }
    let failed: Vec<u32> = results.iter().filter(|c| !c.pass()).map(|c| c.number).collect();
    println!(
        "acceptance: {}/{} criteria pass{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
