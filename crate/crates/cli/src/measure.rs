//! Single streaming pass over an ensemble collecting every direct statistic
//! a command needs. Spectra are loaded chunk by chunk and dropped after use.

use glvar_core::stats::{delta3, EnsembleAccumulator};
use rayon::prelude::*;

use crate::error::CliResult;
use crate::source::SpectrumSource;

const CHUNK: usize = 16;

#[derive(Clone, Debug, Default)]
pub struct Plan {
    /// Energies for per-point staircase statistics.
    pub grid: Vec<f64>,
    /// `(epsilon, omegas)` for window statistics.
    pub window: Option<(f64, Vec<f64>)>,
    /// `(epsilon, lengths)` for rigidity curves.
    pub rigidity: Vec<(f64, Vec<f64>)>,
    /// Keep `N - epsilon` on `grid` for this many leading spectra.
    pub staircases: usize,
}

#[derive(Clone, Debug)]
pub struct Measured {
    pub count: usize,
    pub grid: EnsembleAccumulator,
    pub window: Option<EnsembleAccumulator>,
    /// Ensemble mean of the rigidity, per plan entry and length.
    pub rigidity: Vec<Vec<f64>>,
    /// `(alpha, N - epsilon on grid)`.
    pub staircases: Vec<(f64, Vec<f64>)>,
}

struct Partial {
    grid: EnsembleAccumulator,
    window: Option<EnsembleAccumulator>,
    rigidity: Vec<Vec<f64>>,
    staircases: Vec<(f64, Vec<f64>)>,
}

fn window_layout(epsilon: f64, omegas: &[f64]) -> EnsembleAccumulator {
    let mut points = Vec::with_capacity(2 * omegas.len());
    for &w in omegas {
        points.push(epsilon - 0.5 * w);
        points.push(epsilon + 0.5 * w);
    }
    let pairs = (0..omegas.len()).map(|k| (2 * k, 2 * k + 1)).collect();
    EnsembleAccumulator::new(points, pairs)
}

pub fn measure(source: &SpectrumSource, plan: &Plan) -> CliResult<Measured> {
    let empty_grid = EnsembleAccumulator::new(plan.grid.clone(), Vec::new());
    let empty_window = plan.window.as_ref().map(|(e, w)| window_layout(*e, w));
    let empty_rigidity: Vec<Vec<f64>> = plan.rigidity.iter().map(|(_, l)| vec![0.0; l.len()]).collect();

    let indices: Vec<usize> = (0..source.len()).collect();
    let partials: Vec<Partial> = indices
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut part = Partial {
                grid: empty_grid.clone(),
                window: empty_window.clone(),
                rigidity: empty_rigidity.clone(),
                staircases: Vec::new(),
            };
            for &i in chunk {
                let s = source.load(i)?;
                part.grid.push(&s)?;
                if let Some(w) = part.window.as_mut() {
                    w.push(&s)?;
                }
                for ((eps, lengths), sums) in plan.rigidity.iter().zip(part.rigidity.iter_mut()) {
                    for (l, slot) in lengths.iter().zip(sums.iter_mut()) {
                        *slot += delta3(&s, *eps, *l)?;
                    }
                }
                if i < plan.staircases {
                    let curve = plan.grid.iter().map(|&e| s.count_le(e) as f64 - e).collect();
                    part.staircases.push((s.alpha, curve));
                }
            }
            Ok(part)
        })
        .collect::<CliResult<_>>()?;

    let mut grid = empty_grid;
    let mut window = empty_window;
    let mut rigidity = empty_rigidity;
    let mut staircases = Vec::new();
    for p in partials {
        grid.merge(&p.grid)?;
        if let (Some(w), Some(pw)) = (window.as_mut(), p.window.as_ref()) {
            w.merge(pw)?;
        }
        for (total, part) in rigidity.iter_mut().zip(&p.rigidity) {
            for (t, v) in total.iter_mut().zip(part) {
                *t += v;
            }
        }
        staircases.extend(p.staircases);
    }
    let n = source.len() as f64;
    for curve in &mut rigidity {
        for v in curve.iter_mut() {
            *v /= n;
        }
    }
    Ok(Measured { count: source.len(), grid, window, rigidity, staircases })
}
