//! Acceptance suite. Every criterion is evaluated from one streaming pass
//! over the configured ensemble plus the orbit sums; the report is plain
//! text with one line per criterion:
//!
//! ```text
//! <id> measured=<...> bound=<...> <pass|fail|info>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use glvar_core::po::stationary::stationary_phase_scan;
use glvar_core::po::{
    adaptive_mmax, delta3_saturation_po, k_staircase_po, sigma_interval_po, Averaging, PoSumConfig, PoTheory,
};
use glvar_core::spectra::{bessel_zeros_below, rb_levels, RectangularBilliard, DEFAULT_LEVEL_CAP};
use glvar_core::stats::{
    correlation_from, delta3, delta3_saturation_num, geometric_grid, global_variance_from,
    interval_variance_from, mean_staircase_from, window_endpoint_variances, Variant,
};
use glvar_core::{Error, Spectrum, SystemKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::figures::rigidity_plan;
use crate::measure::{measure, Measured, Plan};
use crate::oracles::{bisect_bessel_zeros, delta3_quadrature, naive_rectangle};
use crate::source::SpectrumSource;
use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub id: String,
    pub measured: String,
    pub bound: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config_hash: String,
    pub lines: Vec<Line>,
}

impl Report {
    fn push(&mut self, id: &str, measured: String, bound: &str, verdict: Verdict) {
        self.lines.push(Line { id: id.into(), measured, bound: bound.into(), verdict });
    }

    /// Numbered criteria first, in order; other lines keep their order.
    fn sort(&mut self) {
        self.lines.sort_by_key(|l| l.id.parse::<u32>().unwrap_or(u32::MAX));
    }

    pub fn line(&self, id: &str) -> Option<&Line> {
        self.lines.iter().find(|l| l.id == id)
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.verdict != Verdict::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# glvar-accept v1 config={}\n", self.config_hash);
        for l in &self.lines {
            let _ = writeln!(s, "{} measured={} bound={} {}", l.id, l.measured, l.bound, l.verdict.as_str());
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutput {
    pub report: Report,
    pub tables: Vec<Table>,
}

impl SuiteOutput {
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join("accept-report.txt");
        std::fs::write(&path, self.report.to_text()).map_err(|e| CliError::io(&path, e))?;
        for t in &self.tables {
            let path = dir.join(format!("{}.csv", t.name));
            std::fs::write(&path, t.to_csv()).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }

    fn bytes(&self) -> Vec<String> {
        let mut v = vec![self.report.to_text()];
        v.extend(self.tables.iter().map(Table::to_csv));
        v
    }
}

/// Runs the suite twice and appends the determinism criterion.
pub fn accept(cfg: &RunConfig, cache: Option<&Path>) -> CliResult<SuiteOutput> {
    let mut first = run_suite(cfg, cache)?;
    let second = run_suite(cfg, cache)?;
    let (a, b) = (first.bytes(), second.bytes());
    let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len());
    first.report.push(
        "10",
        format!("differing_outputs={differing},compared={}", a.len()),
        "differing_outputs=0",
        Verdict::of(differing == 0),
    );
    first.report.sort();
    Ok(first)
}

/// Criteria 1 to 9 plus the harness self-test and the offset report.
pub fn run_suite(cfg: &RunConfig, cache: Option<&Path>) -> CliResult<SuiteOutput> {
    if cfg.system != SystemKind::Rectangular {
        return Err(CliError::Config("the acceptance suite runs on the rectangular ensemble".into()));
    }
    let grid = cfg.grids.epsilon.points();
    let eps_w = cfg.grids.window_epsilon;
    let Some(w_index) = grid.iter().position(|&e| e == eps_w) else {
        return Err(CliError::Config(format!("window_epsilon {eps_w} must lie on the epsilon grid")));
    };
    let omegas = cfg.grids.omega.points();
    let plan = Plan {
        grid: grid.clone(),
        window: Some((eps_w, omegas.clone())),
        rigidity: rigidity_plan(cfg),
        staircases: 0,
    };
    let m = measure(&SpectrumSource::from_config(cfg, cache.map(Path::to_path_buf)), &plan)?;
    let theory = PoTheory::new(cfg.ensemble.alpha0, &cfg.po_config())?;
    let hash = cfg.hash();

    let mut report = Report { config_hash: hash.clone(), lines: Vec::new() };
    let mut tables = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    criterion_identity(cfg, &mut rng, &mut report)?;
    tables.push(criterion_slope(cfg, &m, &theory, &omegas, &mut report)?);
    tables.push(criterion_rigidity(cfg, &m, &plan, &theory, &mut report));
    tables.push(criteria_global(cfg, &m, &theory, &grid, &mut report)?);
    criterion_stationary(cfg, &mut rng, &mut report);
    criterion_estimators(&m, w_index, &mut report)?;
    criterion_oracles(&mut rng, &mut report)?;
    self_test_truncation(cfg, &mut report)?;
    report.sort();

    for t in &mut tables {
        t.meta.insert(0, ("config".into(), hash.clone()));
        t.meta.insert(1, ("n_samples".into(), m.count.to_string()));
        t.meta.push(("mmax".into(), theory.mmax().to_string()));
    }
    Ok(SuiteOutput { report, tables })
}

fn single_alpha(cfg: &RunConfig) -> PoSumConfig {
    PoSumConfig { averaging: Averaging::Single, ..cfg.po_config() }
}

fn fmt(x: f64) -> String {
    format!("{x:.6e}")
}

fn rms(v: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for x in v {
        s += x * x;
        n += 1;
    }
    (s / n.max(1) as f64).sqrt()
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_identity(cfg: &RunConfig, rng: &mut ChaCha8Rng, report: &mut Report) -> CliResult<()> {
    let po = single_alpha(cfg);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let eps = rng.random_range(1e3..2e4);
        let omega = rng.random_range(0.0..50.0);
        let alpha = rng.random_range(0.7..1.4);
        let k = k_staircase_po(alpha, eps, omega, &po)?;
        let s = sigma_interval_po(alpha, eps, omega, &po)?;
        let d = delta3_saturation_po(alpha, eps, &po)?;
        worst = worst.max((k + 0.5 * s - d).abs() / d);
    }
    report.push("1", format!("max_rel_gap={}", fmt(worst)), "max_rel_gap<=1e-12", Verdict::of(worst <= 1e-12));
    Ok(())
}

fn criterion_slope(
    cfg: &RunConfig,
    m: &Measured,
    theory: &PoTheory,
    omegas: &[f64],
    report: &mut Report,
) -> CliResult<Table> {
    let w = m.window.as_ref().expect("window planned");
    let eps = cfg.grids.window_epsilon;
    let km = correlation_from(w, Variant::VsMean)?;
    let ke = correlation_from(w, Variant::VsEpsilon)?;
    let iv = interval_variance_from(w)?;
    let kt = theory.k_staircase_curve(eps, omegas);
    let st = theory.sigma_interval_curve(eps, omegas);

    let fit_range: Vec<usize> = (0..omegas.len()).filter(|&i| (0.5..=3.0).contains(&omegas[i])).collect();
    let pick = |v: &[f64]| fit_range.iter().map(|&i| v[i]).collect::<Vec<_>>();
    let x = pick(omegas);
    let num = fit_slope(&x, &pick(&km.values));
    let th = fit_slope(&x, &pick(&kt));
    let ok = fit_range.len() >= 2 && (num + 0.5).abs() <= 0.1 && (th + 0.5).abs() <= 0.1;
    report.push(
        "2",
        format!("slope_num={},slope_theory={}", fmt(num), fmt(th)),
        "|slope+0.5|<=0.1",
        Verdict::of(ok),
    );

    let mut t = Table::new("accept-window", "omega", omegas.to_vec()).meta("epsilon", eps);
    t.push("k_vs_mean", &km.values);
    t.push("k_vs_mean_stderr", &km.stderr);
    t.push("k_vs_epsilon", &ke.values);
    t.push("k_diagonal_theory", &kt);
    t.push("sigma_interval_num", &iv.values);
    t.push("sigma_interval_theory", &st);
    Ok(t)
}

fn criterion_rigidity(cfg: &RunConfig, m: &Measured, plan: &Plan, theory: &PoTheory, report: &mut Report) -> Table {
    let eps: Vec<f64> = plan.rigidity.iter().map(|(e, _)| *e).collect();
    let found = crate::figures::plateaus(cfg, m, plan);
    let th: Vec<f64> = theory.delta3_saturation_curve(&eps);
    let mut t = Table::new("accept-rigidity", "epsilon", eps.clone());
    t.push_sparse("delta3_saturation_num", found.iter().map(|p| p.map(|p| p.0)).collect());
    t.push("delta3_inf_theory", &th);

    let missing = found.iter().filter(|p| p.is_none()).count();
    if missing > 0 || eps.len() < 2 {
        report.push("3", format!("missing_plateaus={missing}"), "missing_plateaus=0", Verdict::Fail);
        return t;
    }
    let num: Vec<f64> = found.iter().map(|p| p.expect("checked").0).collect();
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ln_of = |v: &[f64]| v.iter().map(|x| x.ln()).collect::<Vec<_>>();
    let p_num = fit_slope(&lx, &ln_of(&num));
    let p_th = fit_slope(&lx, &ln_of(&th));
    let dev = num.iter().zip(&th).map(|(n, t)| (n / t - 1.0).abs()).fold(0.0, f64::max);
    let ok = (p_num - 0.5).abs() <= 0.05 && (p_th - 0.5).abs() <= 0.05 && dev <= 0.1;
    report.push(
        "3",
        format!("exponent_num={},exponent_theory={},max_rel_dev={}", fmt(p_num), fmt(p_th), fmt(dev)),
        "|exponent-0.5|<=0.05;max_rel_dev<=0.1",
        Verdict::of(ok),
    );
    t
}

fn criteria_global(
    cfg: &RunConfig,
    m: &Measured,
    theory: &PoTheory,
    grid: &[f64],
    report: &mut Report,
) -> CliResult<Table> {
    let vm = global_variance_from(&m.grid, Variant::VsMean)?;
    let ve = global_variance_from(&m.grid, Variant::VsEpsilon)?;
    let mean = mean_staircase_from(&m.grid)?;
    let c = theory.interference_curves(grid);
    let lo = cfg.grids.epsilon.start;

    // persistent oscillation of the vs-mean variance about the rigidity
    let residual: Vec<f64> = vm.values.iter().zip(&c.diagonal).map(|(a, b)| a - b).collect();
    let sign_changes = residual.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    let centre = residual.iter().sum::<f64>() / residual.len() as f64;
    let osc = rms(residual.iter().map(|r| r - centre));
    let se = rms(vm.stderr.iter().copied());
    report.push(
        "4",
        format!("sign_changes={sign_changes},osc_rms={},stderr_rms={}", fmt(osc), fmt(se)),
        "sign_changes>=10;osc_rms>3*stderr_rms",
        Verdict::of(sign_changes >= 10 && osc > 3.0 * se),
    );

    let diff = |a: &[f64], b: &[f64]| rms(a.iter().zip(b).map(|(x, y)| x - y));
    let e_full = diff(&ve.values, &c.full);
    let e_diag = diff(&ve.values, &c.diagonal);
    let m_conn = diff(&vm.values, &c.connected);
    let m_diag = diff(&vm.values, &c.diagonal);
    let e_perm = diff(&ve.values, &c.permuted_pairs);
    report.push(
        "5",
        format!(
            "vs_eps_full={},vs_eps_diagonal={},vs_mean_connected={},vs_mean_diagonal={},vs_eps_permuted={}",
            fmt(e_full),
            fmt(e_diag),
            fmt(m_conn),
            fmt(m_diag),
            fmt(e_perm)
        ),
        "vs_eps_full<vs_eps_diagonal;vs_mean_connected<vs_mean_diagonal",
        Verdict::of(e_full < e_diag && m_conn < m_diag),
    );

    // parametric averaging quality: bias against the spread about epsilon
    let worst = mean
        .values
        .iter()
        .zip(&ve.values)
        .map(|(b, v)| b.abs() / v.sqrt())
        .fold(0.0, f64::max);
    report.push("9", format!("max_bias_ratio={}", fmt(worst)), "max_bias_ratio<0.3", Verdict::of(worst < 0.3));

    let offset: Vec<f64> = mean.values.iter().zip(&c.delta_n).map(|(a, b)| a - b).collect();
    let off_mean = offset.iter().sum::<f64>() / offset.len() as f64;
    report.push(
        "averaged-offset",
        format!("mean={},rms={}", fmt(off_mean), fmt(rms(offset.iter().copied()))),
        "reported",
        Verdict::Info,
    );

    let mut t = Table::new("accept-global", "epsilon", grid.to_vec()).meta("from", lo);
    t.push("sigma_g_vs_epsilon", &ve.values);
    t.push("sigma_g_vs_epsilon_stderr", &ve.stderr);
    t.push("sigma_g_vs_mean", &vm.values);
    t.push("sigma_g_vs_mean_stderr", &vm.stderr);
    t.push("mean_n_minus_epsilon", &mean.values);
    t.push("delta3_inf_theory", &c.diagonal);
    t.push("sigma_g_full_theory", &c.full);
    t.push("sigma_g_permuted_pairs_theory", &c.permuted_pairs);
    t.push("sigma_g_connected_theory", &c.connected);
    t.push("delta_n_theory", &c.delta_n);
    Ok(t)
}

fn criterion_stationary(cfg: &RunConfig, rng: &mut ChaCha8Rng, report: &mut Report) {
    let alpha0 = cfg.ensemble.alpha0;
    let scan = |alpha: f64, eps: f64| -> Vec<_> {
        stationary_phase_scan(alpha, eps, 5).into_iter().filter(|p| p.winding.0 != p.winding.1).collect()
    };
    let mut max_plus = 0.0f64;
    let mut min_minus = f64::INFINITY;
    for eps in [cfg.grids.epsilon.start, cfg.grids.window_epsilon] {
        for p in scan(alpha0, eps) {
            max_plus = max_plus.max(p.d_plus.abs());
            min_minus = min_minus.min(p.d_minus.abs());
        }
    }
    let mut fd_err = 0.0f64;
    for _ in 0..20 {
        let alpha = rng.random_range(0.5..2.0);
        let eps = rng.random_range(1e3..2e4);
        let h = 1e-6 * alpha;
        let (lo, hi) = (scan(alpha - h, eps), scan(alpha + h, eps));
        for (p, (l, u)) in scan(alpha, eps).iter().zip(lo.iter().zip(&hi)) {
            let fp = (u.s_plus - l.s_plus) / (2.0 * h);
            let fm = (u.s_minus - l.s_minus) / (2.0 * h);
            let scale = p.d_plus.abs().max(p.d_minus.abs());
            fd_err = fd_err.max((fp - p.d_plus).abs() / scale).max((fm - p.d_minus).abs() / scale);
        }
    }
    let at_square = alpha0 == 1.0;
    let ok = (!at_square || max_plus <= 1e-10) && min_minus > 0.0 && fd_err <= 1e-7;
    report.push(
        "6",
        format!("max_abs_dS_plus={},min_abs_dS_minus={},max_rel_fd_err={}", fmt(max_plus), fmt(min_minus), fmt(fd_err)),
        "max_abs_dS_plus<=1e-10;min_abs_dS_minus>0;max_rel_fd_err<=1e-7",
        Verdict::of(ok),
    );
}

fn criterion_estimators(m: &Measured, w_index: usize, report: &mut Report) -> CliResult<()> {
    let w = m.window.as_ref().expect("window planned");
    let omegas: Vec<f64> = w.points().chunks(2).map(|p| p[1] - p[0]).collect();
    let Some(zero) = omegas.iter().position(|&o| o == 0.0) else {
        return Err(CliError::Config("the omega grid must contain 0".into()));
    };
    let mut zero_gap = 0.0f64;
    for variant in [Variant::VsMean, Variant::VsEpsilon] {
        let k = correlation_from(w, variant)?.values[zero];
        let g = global_variance_from(&m.grid, variant)?.values[w_index];
        zero_gap = zero_gap.max((k - g).abs() / g.max(1.0));
    }
    let k = correlation_from(w, Variant::VsMean)?;
    let s = interval_variance_from(w)?;
    let mut decomp = 0.0f64;
    for ((kv, sv), (v1, v2)) in k.values.iter().zip(&s.values).zip(window_endpoint_variances(w)) {
        decomp = decomp.max((v1 + v2 - 2.0 * kv - sv).abs() / (v1 + v2).max(1.0));
    }
    report.push(
        "7",
        format!("zero_lag_gap={},decomposition_gap={}", fmt(zero_gap), fmt(decomp)),
        "both<=1e-10",
        Verdict::of(zero_gap <= 1e-10 && decomp <= 1e-10),
    );
    Ok(())
}

fn criterion_oracles(rng: &mut ChaCha8Rng, report: &mut Report) -> CliResult<()> {
    let mut count_mismatch = 0usize;
    let mut level_err = 0.0f64;
    for _ in 0..20 {
        let alpha = rng.random_range(0.3..3.0);
        let emax = rng.random_range(20.0..1000.0);
        let fast = rb_levels(&RectangularBilliard::new(alpha)?, emax, DEFAULT_LEVEL_CAP)?;
        let slow = naive_rectangle(alpha, emax);
        if fast.len() != slow.len() {
            count_mismatch += 1;
        }
        for (x, y) in fast.levels.iter().zip(&slow) {
            level_err = level_err.max((x - y).abs());
        }
    }

    let mut bessel_err = 0.0f64;
    let mut bessel_count_mismatch = 0usize;
    for order in [0, 1, 2, 4, 7, 12, 20, 33, 50] {
        let fast = bessel_zeros_below(order, 90.0)?;
        let slow = bisect_bessel_zeros(order, 90.0);
        if fast.len() != slow.len() {
            bessel_count_mismatch += 1;
        }
        for (x, y) in fast.iter().zip(&slow) {
            bessel_err = bessel_err.max((x - y).abs());
        }
    }

    let mut quad_err = 0.0f64;
    for _ in 0..10 {
        let n = rng.random_range(20..80);
        let mut x = 0.0;
        let levels: Vec<f64> = (0..n)
            .map(|_| {
                x += rng.random_range(0.05..2.5);
                x
            })
            .collect();
        let s = Spectrum::new(SystemKind::Rectangular, 1.0, levels, x)?;
        let eps = rng.random_range(0.3..0.7) * x;
        let len = rng.random_range(0.1..0.5) * x;
        quad_err = quad_err.max((delta3(&s, eps, len)? - delta3_quadrature(&s, eps, len, 10_000)).abs());
    }

    let ruler = Spectrum::new(SystemKind::Rectangular, 1.0, (1..=5000).map(|k| k as f64).collect(), 5000.0)?;
    let plateau = delta3_saturation_num(std::slice::from_ref(&ruler), 2500.0, &geometric_grid(2.0, 2000.0, 25))?;
    let picket = (plateau.value - 1.0 / 12.0).abs();

    let ok = count_mismatch == 0
        && level_err < 1e-8
        && bessel_count_mismatch == 0
        && bessel_err <= 1e-9
        && quad_err <= 1e-6
        && picket <= 1e-6;
    report.push(
        "8",
        format!(
            "rb_count_mismatches={count_mismatch},rb_max_level_err={},bessel_count_mismatches={bessel_count_mismatch},\
             bessel_max_err={},delta3_quadrature_err={},picket_fence_err={}",
            fmt(level_err),
            fmt(bessel_err),
            fmt(quad_err),
            fmt(picket)
        ),
        "counts_exact;rb<1e-8;bessel<=1e-9;quadrature<=1e-6;picket<=1e-6",
        Verdict::of(ok),
    );
    Ok(())
}

/// Halving the adaptive truncation order must trip the convergence check.
fn self_test_truncation(cfg: &RunConfig, report: &mut Report) -> CliResult<()> {
    let po = single_alpha(cfg);
    let alpha = cfg.ensemble.alpha0;
    let chosen = adaptive_mmax(alpha, po.tolerance, po.tail_completion)?;
    let full = PoTheory::new(alpha, &PoSumConfig { mmax: Some(chosen), min_mmax: 1, ..po.clone() });
    let halved = PoTheory::new(alpha, &PoSumConfig { mmax: Some((chosen / 2).max(1)), min_mmax: 1, ..po });
    let tripped = matches!(halved, Err(Error::Truncation { .. }));
    report.push(
        "truncation-self-test",
        format!("adaptive_mmax={chosen},accepted={},halved_rejected={tripped}", full.is_ok()),
        "accepted=true;halved_rejected=true",
        Verdict::of(full.is_ok() && tripped),
    );
    Ok(())
}
