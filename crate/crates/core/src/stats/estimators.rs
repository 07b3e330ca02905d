//! Ensemble estimators of staircase statistics.

use crate::error::{Error, Result};
use crate::series::{Estimator, StatSeries};
use crate::spectrum::Spectrum;
use crate::stats::accumulator::EnsembleAccumulator;

/// What the staircase is measured against: the energy itself
/// (`N - epsilon`) or the ensemble mean (`N - <N>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    VsEpsilon,
    VsMean,
}

fn need_two(acc: &EnsembleAccumulator) -> Result<()> {
    if acc.count() < 2 {
        return Err(Error::InsufficientEnsemble {
            count: acc.count(),
            needed: 2,
        });
    }
    Ok(())
}

fn sqrt_over_n(var: f64, n: usize) -> f64 {
    (var / n as f64).sqrt()
}

/// Layout for per-point statistics on an energy grid.
pub fn grid_accumulator(ensemble: &[Spectrum], grid: &[f64]) -> Result<EnsembleAccumulator> {
    EnsembleAccumulator::accumulate(ensemble, grid.to_vec(), Vec::new())
}

/// Layout for correlation and interval statistics: point `2k` is
/// `epsilon - omega_k / 2`, point `2k + 1` is `epsilon + omega_k / 2`, and
/// pair `k` joins them.
pub fn window_accumulator(
    ensemble: &[Spectrum],
    epsilon: f64,
    omega_grid: &[f64],
) -> Result<EnsembleAccumulator> {
    let mut points = Vec::with_capacity(2 * omega_grid.len());
    for &w in omega_grid {
        points.push(epsilon - 0.5 * w);
        points.push(epsilon + 0.5 * w);
    }
    let pairs = (0..omega_grid.len()).map(|k| (2 * k, 2 * k + 1)).collect();
    EnsembleAccumulator::accumulate(ensemble, points, pairs)
}

/// `Var N(epsilon)` or `<(N - epsilon)^2>` at each accumulated point.
pub fn global_variance_from(acc: &EnsembleAccumulator, variant: Variant) -> Result<StatSeries> {
    need_two(acc)?;
    let n = acc.count();
    let mut values = Vec::with_capacity(acc.points().len());
    let mut stderr = Vec::with_capacity(acc.points().len());
    for (i, &eps) in acc.points().iter().enumerate() {
        let m = acc.single(i);
        let var = m.variance();
        let (value, spread) = match variant {
            Variant::VsMean => (var, m.shifted_square_stats(-m.mean()).1),
            Variant::VsEpsilon => {
                let bias = acc.shift(i) as f64 + m.mean() - eps;
                let c = acc.shift(i) as f64 - eps;
                (var + bias * bias, m.shifted_square_stats(c).1)
            }
        };
        values.push(value);
        stderr.push(sqrt_over_n(spread, n));
    }
    let est = match variant {
        Variant::VsMean => Estimator::GlobalVarianceVsMean,
        Variant::VsEpsilon => Estimator::GlobalVarianceVsEpsilon,
    };
    StatSeries::new(est, acc.points().to_vec(), values, Some(stderr), n)
}

pub fn global_variance_num(ensemble: &[Spectrum], grid: &[f64], variant: Variant) -> Result<StatSeries> {
    global_variance_from(&grid_accumulator(ensemble, grid)?, variant)
}

/// `<N(epsilon)> - epsilon` with the standard error of the mean.
pub fn mean_staircase_from(acc: &EnsembleAccumulator) -> Result<StatSeries> {
    if acc.count() == 0 {
        return Err(Error::InsufficientEnsemble { count: 0, needed: 1 });
    }
    let n = acc.count();
    let (values, stderr) = acc
        .points()
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let m = acc.single(i);
            (acc.shift(i) as f64 + m.mean() - eps, sqrt_over_n(m.variance(), n))
        })
        .unzip();
    StatSeries::new(Estimator::MeanStaircase, acc.points().to_vec(), values, Some(stderr), n)
}

pub fn mean_staircase_diagnostic(ensemble: &[Spectrum], grid: &[f64]) -> Result<StatSeries> {
    mean_staircase_from(&grid_accumulator(ensemble, grid)?)
}

fn omegas(acc: &EnsembleAccumulator) -> (f64, Vec<f64>) {
    let p = acc.points();
    let eps = 0.5 * (p[0] + p[1]);
    (eps, p.chunks_exact(2).map(|c| c[1] - c[0]).collect())
}

/// `K_N(epsilon, omega)` from a [`window_accumulator`].
pub fn correlation_from(acc: &EnsembleAccumulator, variant: Variant) -> Result<StatSeries> {
    need_two(acc)?;
    let n = acc.count();
    let (_, omega) = omegas(acc);
    let mut values = Vec::with_capacity(omega.len());
    let mut stderr = Vec::with_capacity(omega.len());
    for (k, &(i, j)) in acc.pairs().iter().enumerate() {
        let pm = acc.pair(k);
        let cov = pm.covariance();
        let mean_x = pm.sx as f64 / pm.n as f64;
        let mean_y = pm.sy as f64 / pm.n as f64;
        let (value, spread) = match variant {
            Variant::VsMean => (cov, pm.shifted_product_stats(-mean_x, -mean_y).1),
            Variant::VsEpsilon => {
                let cx = acc.shift(i) as f64 - acc.points()[i];
                let cy = acc.shift(j) as f64 - acc.points()[j];
                let value = cov + (mean_x + cx) * (mean_y + cy);
                (value, pm.shifted_product_stats(cx, cy).1)
            }
        };
        values.push(value);
        stderr.push(sqrt_over_n(spread, n));
    }
    let est = match variant {
        Variant::VsMean => Estimator::CorrelationVsMean,
        Variant::VsEpsilon => Estimator::CorrelationVsEpsilon,
    };
    StatSeries::new(est, omega, values, Some(stderr), n)
}

pub fn staircase_correlation_num(
    ensemble: &[Spectrum],
    epsilon: f64,
    omega_grid: &[f64],
    variant: Variant,
) -> Result<StatSeries> {
    correlation_from(&window_accumulator(ensemble, epsilon, omega_grid)?, variant)
}

/// Ensemble variance of `N(epsilon + omega/2) - N(epsilon - omega/2)`,
/// accumulated directly from the count differences.
pub fn interval_variance_from(acc: &EnsembleAccumulator) -> Result<StatSeries> {
    need_two(acc)?;
    let n = acc.count();
    let (_, omega) = omegas(acc);
    let (values, stderr) = (0..acc.pairs().len())
        .map(|k| {
            let d = &acc.pair(k).diff;
            (d.variance(), sqrt_over_n(d.shifted_square_stats(-d.mean()).1, n))
        })
        .unzip();
    StatSeries::new(Estimator::IntervalVariance, omega, values, Some(stderr), n)
}

pub fn interval_variance_num(ensemble: &[Spectrum], epsilon: f64, omega_grid: &[f64]) -> Result<StatSeries> {
    interval_variance_from(&window_accumulator(ensemble, epsilon, omega_grid)?)
}

/// `Var N` at both ends of every window: `(Sigma_g(eps_1), Sigma_g(eps_2))`.
pub fn window_endpoint_variances(acc: &EnsembleAccumulator) -> Vec<(f64, f64)> {
    acc.pairs()
        .iter()
        .map(|&(i, j)| (acc.single(i).variance(), acc.single(j).variance()))
        .collect()
}
