//! Figure pipelines: each returns tables, plots and scope notes; nothing is
//! written here.

use std::path::Path;
use std::str::FromStr;

use glvar_core::po::PoTheory;
use glvar_core::spectra::{qcb_levels, QuarterCircularBilliard, DEFAULT_LEVEL_CAP};
use glvar_core::stats::{
    correlation_from, delta3, global_variance_from, interval_variance_from, mean_staircase_from, plateau_of,
    Variant,
};
use glvar_core::{Estimator, StatSeries, SystemKind};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::measure::{measure, Measured, Plan};
use crate::source::SpectrumSource;
use crate::svg::{Curve, Plot};
use crate::table::Table;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureName {
    Fig1Rb,
    Fig1Qcb,
    Fig2,
    Fig3a,
    Fig3b,
}

impl FigureName {
    pub const ALL: [FigureName; 5] =
        [FigureName::Fig1Rb, FigureName::Fig1Qcb, FigureName::Fig2, FigureName::Fig3a, FigureName::Fig3b];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureName::Fig1Rb => "fig1-rb",
            FigureName::Fig1Qcb => "fig1-qcb",
            FigureName::Fig2 => "fig2",
            FigureName::Fig3a => "fig3a",
            FigureName::Fig3b => "fig3b",
        }
    }
}

impl FromStr for FigureName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1-rb, fig1-qcb, fig2, fig3a, fig3b)"))
    }
}

#[derive(Clone, Debug, Default)]
pub struct FigureOutput {
    pub tables: Vec<Table>,
    pub plots: Vec<(String, Plot)>,
    pub notes: Vec<String>,
    /// Individual curves in the stats series format, keyed by file stem.
    pub series: Vec<(String, StatSeries)>,
}

impl FigureOutput {
    pub fn write(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for t in &self.tables {
            let path = dir.join(format!("{}.csv", t.name));
            std::fs::write(&path, t.to_csv()).map_err(|e| CliError::io(&path, e))?;
        }
        if !self.series.is_empty() {
            let sdir = dir.join("series");
            std::fs::create_dir_all(&sdir).map_err(|e| CliError::io(&sdir, e))?;
            for (stem, series) in &self.series {
                let path = sdir.join(format!("{stem}.csv"));
                std::fs::write(&path, series.to_csv()).map_err(|e| CliError::io(&path, e))?;
            }
        }
        for (name, p) in &self.plots {
            let path = dir.join(format!("{name}.svg"));
            std::fs::write(&path, p.render()).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}

/// Lengths whose windows fit inside `[0, emax]` around `epsilon`.
pub fn usable_lengths(cfg: &RunConfig, epsilon: f64) -> Vec<f64> {
    cfg.grids
        .lengths
        .points()
        .into_iter()
        .filter(|l| epsilon + 0.5 * l <= cfg.emax && epsilon - 0.5 * l >= 0.0)
        .collect()
}

fn require_rectangular(cfg: &RunConfig, what: &str) -> CliResult<()> {
    if cfg.system != SystemKind::Rectangular {
        return Err(CliError::MissingPrerequisite {
            what: what.into(),
            missing: "a rectangular-billiard ensemble".into(),
            hint: "set `system = \"rectangular\"` in the configuration".into(),
        });
    }
    Ok(())
}

fn base_table(cfg: &RunConfig, name: &str, abscissa: &str, x: Vec<f64>, n: usize) -> Table {
    Table::new(name, abscissa, x).meta("config", cfg.hash()).meta("n_samples", n)
}

fn theory_series(
    cfg: &RunConfig,
    estimator: Estimator,
    grid: &[f64],
    values: Vec<f64>,
    n: usize,
) -> CliResult<StatSeries> {
    Ok(StatSeries::new(estimator, grid.to_vec(), values, None, n)?.with_config_hash(&cfg.hash()))
}

fn named(figure: &str, s: StatSeries) -> (String, StatSeries) {
    (format!("{figure}-{}", s.estimator.tag()), s)
}

pub fn render(name: FigureName, cfg: &RunConfig, cache: Option<&Path>) -> CliResult<FigureOutput> {
    match name {
        FigureName::Fig1Rb => fig1_rb(cfg, cache),
        FigureName::Fig1Qcb => fig1_qcb(cfg),
        FigureName::Fig2 => fig2(cfg, cache),
        FigureName::Fig3a => fig3a(cfg, cache),
        FigureName::Fig3b => fig3b(cfg, cache),
    }
}

fn source(cfg: &RunConfig, cache: Option<&Path>) -> SpectrumSource {
    SpectrumSource::from_config(cfg, cache.map(Path::to_path_buf))
}

/// Rigidity plateau per energy, `None` where no plateau was found.
pub fn plateaus(cfg: &RunConfig, m: &Measured, plan: &Plan) -> Vec<Option<(f64, f64)>> {
    plan.rigidity
        .iter()
        .zip(&m.rigidity)
        .map(|((eps, lengths), curve)| plateau_of(*eps, lengths, curve.clone()).ok().map(|p| (p.value, p.onset)))
        .inspect(|_| debug_assert!(cfg.emax > 0.0))
        .collect()
}

pub fn rigidity_plan(cfg: &RunConfig) -> Vec<(f64, Vec<f64>)> {
    cfg.grids.rigidity_epsilon.points().into_iter().map(|e| (e, usable_lengths(cfg, e))).collect()
}

fn fig1_rb(cfg: &RunConfig, cache: Option<&Path>) -> CliResult<FigureOutput> {
    require_rectangular(cfg, "fig1-rb")?;
    let grid = cfg.grids.epsilon.points();
    let plan = Plan { grid: grid.clone(), rigidity: rigidity_plan(cfg), ..Default::default() };
    let m = measure(&source(cfg, cache), &plan)?;
    let vm = global_variance_from(&m.grid, Variant::VsMean)?;
    let ve = global_variance_from(&m.grid, Variant::VsEpsilon)?;
    let theory = PoTheory::new(cfg.ensemble.alpha0, &cfg.po_config())?;
    let d3 = theory.delta3_saturation_curve(&grid);

    let mut t = base_table(cfg, "fig1-rb", "epsilon", grid.clone(), m.count).meta("mmax", theory.mmax());
    t.push("sigma_g_vs_epsilon", &ve.values);
    t.push("sigma_g_vs_epsilon_stderr", &ve.stderr);
    t.push("sigma_g_vs_mean", &vm.values);
    t.push("sigma_g_vs_mean_stderr", &vm.stderr);
    t.push("delta3_inf_theory", &d3);

    let r_eps: Vec<f64> = plan.rigidity.iter().map(|(e, _)| *e).collect();
    let found = plateaus(cfg, &m, &plan);
    let mut r = base_table(cfg, "fig1-rb-rigidity", "epsilon", r_eps.clone(), m.count);
    r.push_sparse("delta3_saturation_num", found.iter().map(|p| p.map(|p| p.0)).collect());
    r.push_sparse("plateau_onset", found.iter().map(|p| p.map(|p| p.1)).collect());
    r.push("delta3_inf_theory", &theory.delta3_saturation_curve(&r_eps));

    let (nx, ny) = r.series("delta3_saturation_num").unwrap_or_default();
    let plot = Plot {
        title: "Rectangular billiard: global variance and saturation rigidity".into(),
        x_label: "epsilon".into(),
        y_label: "variance".into(),
        curves: vec![
            Curve::new("Sigma_g (vs eps)", grid.clone(), ve.values.clone()).color("#1f4fd1"),
            Curve::new("Delta3_inf theory", grid.clone(), d3.clone()).color("#000000"),
            Curve::new("Delta3 plateau", nx, ny).color("#d62728"),
        ],
        ..Default::default()
    };
    let mut notes = Vec::new();
    if found.iter().any(Option::is_none) {
        notes.push("no rigidity plateau at some energies; their cells are left empty".into());
    }
    let h = cfg.hash();
    let series = vec![
        named("fig1-rb", ve.with_config_hash(&h)),
        named("fig1-rb", vm.with_config_hash(&h)),
        named("fig1-rb", theory_series(cfg, Estimator::PoDelta3Saturation, &grid, d3, m.count)?),
    ];
    Ok(FigureOutput { tables: vec![t, r], plots: vec![("fig1-rb".into(), plot)], notes, series })
}

fn fig1_qcb(cfg: &RunConfig) -> CliResult<FigureOutput> {
    let qcb = QuarterCircularBilliard::default();
    let spectrum = qcb_levels(&qcb, cfg.emax, DEFAULT_LEVEL_CAP).map_err(|source| CliError::Spectrum { alpha: 1.0, source })?;
    let r_eps = cfg.grids.rigidity_epsilon.points();
    let mut values = Vec::new();
    let mut onsets = Vec::new();
    for &eps in &r_eps {
        // spectral average over nearby centres stands in for the ensemble
        let centres: Vec<f64> = (-5..=5).map(|j| eps * (1.0 + 0.002 * j as f64)).collect();
        let lengths: Vec<f64> = cfg
            .grids
            .lengths
            .points()
            .into_iter()
            .filter(|l| centres.iter().all(|c| c + 0.5 * l <= cfg.emax && c - 0.5 * l >= 0.0))
            .collect();
        let curve: Vec<f64> = lengths
            .iter()
            .map(|&l| {
                let s: f64 = centres.iter().map(|&c| delta3(&spectrum, c, l)).sum::<Result<f64, _>>()?;
                Ok(s / centres.len() as f64)
            })
            .collect::<CliResult<_>>()?;
        match (lengths.len() >= 2).then(|| plateau_of(eps, &lengths, curve)).and_then(Result::ok) {
            Some(p) => {
                values.push(Some(p.value));
                onsets.push(Some(p.onset));
            }
            None => {
                values.push(None);
                onsets.push(None);
            }
        }
    }
    let mut t = base_table(cfg, "fig1-qcb", "epsilon", r_eps.clone(), 1);
    t.push_sparse("delta3_saturation_num", values);
    t.push_sparse("plateau_onset", onsets);
    let (x, y) = t.series("delta3_saturation_num").unwrap_or_default();
    let plot = Plot {
        title: "Quarter circle: saturation rigidity".into(),
        x_label: "epsilon".into(),
        y_label: "Delta3 plateau".into(),
        log_x: true,
        log_y: true,
        curves: vec![Curve::new("Delta3 plateau", x, y).color("#000000")],
    };
    let notes = vec![
        "quarter circle: no parametric family is in scope, so the global variance is not computed; \
         the rigidity is a spectral average of one spectrum over centres within 1% of each energy"
            .to_string(),
    ];
    Ok(FigureOutput { tables: vec![t], plots: vec![("fig1-qcb".into(), plot)], notes, series: Vec::new() })
}

fn fig2(cfg: &RunConfig, cache: Option<&Path>) -> CliResult<FigureOutput> {
    require_rectangular(cfg, "fig2")?;
    let grid = cfg.grids.epsilon.points();
    let src = source(cfg, cache);
    let shown = cfg.grids.staircases.min(src.len());
    let plan = Plan { grid: grid.clone(), staircases: shown, ..Default::default() };
    let m = measure(&src, &plan)?;
    let mean = mean_staircase_from(&m.grid)?;
    let theory = PoTheory::new(cfg.ensemble.alpha0, &cfg.po_config())?;
    let dn = theory.delta_n_curve(&grid);

    let short: Vec<f64> = (0..=1200).map(|k| 0.05 * k as f64).collect();
    let mut st = base_table(cfg, "fig2-short", "epsilon", short.clone(), shown);
    let mut sc = base_table(cfg, "fig2-fluctuation", "epsilon", grid.clone(), shown);
    let mut short_curves = Vec::new();
    let mut fluct_curves = Vec::new();
    for (k, (alpha, curve)) in m.staircases.iter().enumerate() {
        let s = src.load(k)?;
        let n: Vec<f64> = short.iter().map(|&e| s.count_le(e) as f64).collect();
        let name = format!("alpha_{k}");
        st.push(&name, &n);
        sc.push(&name, curve);
        let label = format!("alpha = {alpha:.4}");
        short_curves.push(Curve::new(&label, short.clone(), n));
        fluct_curves.push(Curve::new(&label, grid.clone(), curve.clone()));
    }
    st.meta.push(("alphas".into(), m.staircases.iter().map(|(a, _)| a.to_string()).collect::<Vec<_>>().join(";")));

    let residual: Vec<f64> = mean.values.iter().zip(&dn).map(|(a, b)| a - b).collect();
    let offset = residual.iter().sum::<f64>() / residual.len() as f64;
    let rms = (residual.iter().map(|r| r * r).sum::<f64>() / residual.len() as f64).sqrt();
    let mut t = base_table(cfg, "fig2-mean", "epsilon", grid.clone(), m.count)
        .meta("mmax", theory.mmax())
        .meta("offset", offset)
        .meta("residual_rms", rms);
    t.push("mean_n_minus_epsilon", &mean.values);
    t.push("mean_n_minus_epsilon_stderr", &mean.stderr);
    t.push("delta_n_theory", &dn);

    let plots = vec![
        (
            "fig2-short".to_string(),
            Plot {
                title: "Spectral staircase".into(),
                x_label: "epsilon".into(),
                y_label: "N(epsilon)".into(),
                curves: short_curves,
                ..Default::default()
            },
        ),
        (
            "fig2-fluctuation".to_string(),
            Plot {
                title: "N(epsilon) - epsilon".into(),
                x_label: "epsilon".into(),
                y_label: "N - epsilon".into(),
                curves: fluct_curves,
                ..Default::default()
            },
        ),
        (
            "fig2-mean".to_string(),
            Plot {
                title: "Averaged staircase fluctuation".into(),
                x_label: "epsilon".into(),
                y_label: "<N> - epsilon".into(),
                curves: vec![
                    Curve::new("<N> - epsilon", grid.clone(), mean.values.clone()).color("#1f4fd1"),
                    Curve::new("<delta N> theory", grid.clone(), dn).color("#d62728"),
                ],
                ..Default::default()
            },
        ),
    ];
    let notes = vec![format!(
        "averaged staircase minus averaged theory: mean offset {offset:.4}, rms {rms:.4}"
    )];
    let series = vec![named("fig2", mean.with_config_hash(&cfg.hash()))];
    Ok(FigureOutput { tables: vec![st, sc, t], plots, notes, series })
}

fn fig3a(cfg: &RunConfig, cache: Option<&Path>) -> CliResult<FigureOutput> {
    require_rectangular(cfg, "fig3a")?;
    let grid = cfg.grids.epsilon.points();
    let plan = Plan { grid: grid.clone(), ..Default::default() };
    let m = measure(&source(cfg, cache), &plan)?;
    let (table, plot, series) = fig3a_from(cfg, &m, &grid)?;
    Ok(FigureOutput { tables: vec![table], plots: vec![("fig3a".into(), plot)], notes: Vec::new(), series })
}

/// Global-variance comparison table from an existing measurement.
pub fn fig3a_from(cfg: &RunConfig, m: &Measured, grid: &[f64]) -> CliResult<(Table, Plot, Vec<(String, StatSeries)>)> {
    let vm = global_variance_from(&m.grid, Variant::VsMean)?;
    let ve = global_variance_from(&m.grid, Variant::VsEpsilon)?;
    let theory = PoTheory::new(cfg.ensemble.alpha0, &cfg.po_config())?;
    let c = theory.interference_curves(grid);
    let mut t = base_table(cfg, "fig3a", "epsilon", grid.to_vec(), m.count).meta("mmax", theory.mmax());
    t.push("delta3_inf_theory", &c.diagonal);
    t.push("sigma_g_vs_epsilon", &ve.values);
    t.push("sigma_g_vs_epsilon_stderr", &ve.stderr);
    t.push("sigma_g_vs_mean", &vm.values);
    t.push("sigma_g_vs_mean_stderr", &vm.stderr);
    t.push("sigma_g_full_theory", &c.full);
    t.push("sigma_g_permuted_pairs_theory", &c.permuted_pairs);
    t.push("sigma_g_connected_theory", &c.connected);
    t.push("delta_n_theory", &c.delta_n);
    let plot = Plot {
        title: "Global level number variance".into(),
        x_label: "epsilon".into(),
        y_label: "Sigma_g".into(),
        curves: vec![
            Curve::new("Delta3_inf", grid.to_vec(), c.diagonal.clone()).color("#000000"),
            Curve::new("<(N - eps)^2>", grid.to_vec(), ve.values.clone()).color("#1f4fd1"),
            Curve::new("<(N - <N>)^2>", grid.to_vec(), vm.values.clone()).color("#1e9e3a"),
            Curve::new("full theory", grid.to_vec(), c.full.clone()).color("#8a2be2"),
            Curve::new("diag + permuted", grid.to_vec(), c.permuted_pairs.clone()).color("#d62728"),
        ],
        ..Default::default()
    };
    let h = cfg.hash();
    let series = vec![
        named("fig3a", ve.with_config_hash(&h)),
        named("fig3a", vm.with_config_hash(&h)),
        named("fig3a", theory_series(cfg, Estimator::PoGlobalDiagonal, grid, c.diagonal, m.count)?),
        named("fig3a", theory_series(cfg, Estimator::PoGlobalPermutedPairs, grid, c.permuted_pairs, m.count)?),
        named("fig3a", theory_series(cfg, Estimator::PoGlobalFull, grid, c.full, m.count)?),
    ];
    Ok((t, plot, series))
}

fn fig3b(cfg: &RunConfig, cache: Option<&Path>) -> CliResult<FigureOutput> {
    require_rectangular(cfg, "fig3b")?;
    let eps = cfg.grids.window_epsilon;
    let omegas = cfg.grids.omega.points();
    let plan = Plan { grid: vec![eps], window: Some((eps, omegas.clone())), ..Default::default() };
    let m = measure(&source(cfg, cache), &plan)?;
    let w = m.window.as_ref().expect("window planned");
    let ke = correlation_from(w, Variant::VsEpsilon)?;
    let km = correlation_from(w, Variant::VsMean)?;
    let iv = interval_variance_from(w)?;
    let theory = PoTheory::new(cfg.ensemble.alpha0, &cfg.po_config())?;
    let kt = theory.k_staircase_curve(eps, &omegas);
    let st = theory.sigma_interval_curve(eps, &omegas);
    let small: Vec<Option<f64>> = omegas
        .iter()
        .map(|&o| (o <= SMALL_OMEGA).then(|| theory.small_omega(eps, o)))
        .collect();

    let mut t = base_table(cfg, "fig3b", "omega", omegas.clone(), m.count)
        .meta("epsilon", eps)
        .meta("mmax", theory.mmax());
    t.push("k_vs_epsilon", &ke.values);
    t.push("k_vs_epsilon_stderr", &ke.stderr);
    t.push("k_vs_mean", &km.values);
    t.push("k_vs_mean_stderr", &km.stderr);
    t.push("k_diagonal_theory", &kt);
    t.push_sparse("k_small_omega", small);
    t.push("sigma_interval_num", &iv.values);
    t.push("sigma_interval_theory", &st);

    let curves = |limit: f64| {
        let keep = |v: &[f64]| -> (Vec<f64>, Vec<f64>) {
            omegas.iter().zip(v).filter(|(o, _)| **o <= limit).map(|(o, v)| (*o, *v)).unzip()
        };
        let (x1, y1) = keep(&ke.values);
        let (x2, y2) = keep(&km.values);
        let (x3, y3) = keep(&kt);
        let (x4, y4) = t.series("k_small_omega").unwrap_or_default();
        vec![
            Curve::new("<(N1-e1)(N2-e2)>", x1, y1).color("#1f4fd1"),
            Curve::new("<(N1-<N1>)(N2-<N2>)>", x2, y2).color("#1e9e3a"),
            Curve::new("diagonal theory", x3, y3).color("#8a2be2"),
            Curve::new("small omega", x4, y4).color("#d62728"),
        ]
    };
    let plots = vec![
        (
            "fig3b".to_string(),
            Plot {
                title: format!("Staircase correlation at epsilon = {eps}"),
                x_label: "omega".into(),
                y_label: "K_N".into(),
                curves: curves(f64::INFINITY),
                ..Default::default()
            },
        ),
        (
            "fig3b-small-omega".to_string(),
            Plot {
                title: "Small omega".into(),
                x_label: "omega".into(),
                y_label: "K_N".into(),
                curves: curves(SMALL_OMEGA),
                ..Default::default()
            },
        ),
    ];
    let h = cfg.hash();
    let series = vec![
        named("fig3b", ke.with_config_hash(&h)),
        named("fig3b", km.with_config_hash(&h)),
        named("fig3b", iv.with_config_hash(&h)),
        named("fig3b", theory_series(cfg, Estimator::PoStaircaseCorrelation, &omegas, kt, m.count)?),
        named("fig3b", theory_series(cfg, Estimator::PoSigmaInterval, &omegas, st, m.count)?),
    ];
    Ok(FigureOutput { tables: vec![t], plots, notes: Vec::new(), series })
}

/// Upper end of the small-omega inset.
pub const SMALL_OMEGA: f64 = 5.0;
