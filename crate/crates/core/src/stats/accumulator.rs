//! Mergeable ensemble moments.
//!
//! Staircase values are integers, so every running sum is kept as an exact
//! integer (`i128`) of the count minus a fixed per-point shift (the rounded
//! energy). Merging two accumulators is integer addition: associative and
//! commutative, and therefore bit-reproducible for any partition of the
//! ensemble. Floating point enters only when a statistic is read out.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use crate::stats::staircase::check_range;

/// Power sums `s[k] = sum d^k`, `k = 0..=4`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Moments {
    pub s: [i128; 5],
}

impl Moments {
    #[inline]
    pub fn push(&mut self, d: i64) {
        let d = d as i128;
        let mut p = 1i128;
        for k in 0..5 {
            self.s[k] += p;
            p *= d;
        }
    }

    pub fn merge(&mut self, other: &Moments) {
        for k in 0..5 {
            self.s[k] += other.s[k];
        }
    }

    pub fn n(&self) -> i128 {
        self.s[0]
    }

    /// `E[d^k]`.
    pub fn raw(&self, k: usize) -> f64 {
        self.s[k] as f64 / self.s[0] as f64
    }

    pub fn mean(&self) -> f64 {
        self.raw(1)
    }

    /// Population variance `(n s2 - s1^2) / n^2`, exact up to the final
    /// division.
    pub fn variance(&self) -> f64 {
        let n = self.s[0];
        let num = n * self.s[2] - self.s[1] * self.s[1];
        num as f64 / (n as f64 * n as f64)
    }

    /// `(E[(d + c)^2], Var[(d + c)^2])` for a real offset `c`.
    pub fn shifted_square_stats(&self, c: f64) -> (f64, f64) {
        let e: Vec<f64> = (0..5).map(|k| self.raw(k)).collect();
        let m2 = e[2] + 2.0 * c * e[1] + c * c;
        let m4 = e[4] + 4.0 * c * e[3] + 6.0 * c * c * e[2] + 4.0 * c.powi(3) * e[1] + c.powi(4);
        (m2, (m4 - m2 * m2).max(0.0))
    }
}

/// Cross sums for a pair of staircase values `(x, y)`, plus the moments of
/// the difference `y - x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairMoments {
    pub n: i128,
    pub sx: i128,
    pub sy: i128,
    pub sxx: i128,
    pub syy: i128,
    pub sxy: i128,
    pub sxxy: i128,
    pub sxyy: i128,
    pub sxxyy: i128,
    pub diff: Moments,
}

impl PairMoments {
    #[inline]
    pub fn push(&mut self, x: i64, y: i64, diff: i64) {
        let (x, y) = (x as i128, y as i128);
        self.n += 1;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.syy += y * y;
        self.sxy += x * y;
        self.sxxy += x * x * y;
        self.sxyy += x * y * y;
        self.sxxyy += x * x * y * y;
        self.diff.push(diff);
    }

    pub fn merge(&mut self, o: &PairMoments) {
        self.n += o.n;
        self.sx += o.sx;
        self.sy += o.sy;
        self.sxx += o.sxx;
        self.syy += o.syy;
        self.sxy += o.sxy;
        self.sxxy += o.sxxy;
        self.sxyy += o.sxyy;
        self.sxxyy += o.sxxyy;
        self.diff.merge(&o.diff);
    }

    /// Population covariance `(n sxy - sx sy) / n^2`.
    pub fn covariance(&self) -> f64 {
        let num = self.n * self.sxy - self.sx * self.sy;
        num as f64 / (self.n as f64 * self.n as f64)
    }

    /// `(E[uv], Var[uv])` with `u = x + cx`, `v = y + cy`.
    pub fn shifted_product_stats(&self, cx: f64, cy: f64) -> (f64, f64) {
        let n = self.n as f64;
        let e = |s: i128| s as f64 / n;
        let (ex, ey, exx, eyy, exy) = (e(self.sx), e(self.sy), e(self.sxx), e(self.syy), e(self.sxy));
        let (exxy, exyy, exxyy) = (e(self.sxxy), e(self.sxyy), e(self.sxxyy));
        let euv = exy + cy * ex + cx * ey + cx * cy;
        let euuvv = exxyy
            + 2.0 * cy * exxy
            + cy * cy * exx
            + 2.0 * cx * exyy
            + 4.0 * cx * cy * exy
            + 2.0 * cx * cy * cy * ex
            + cx * cx * eyy
            + 2.0 * cx * cx * cy * ey
            + cx * cx * cy * cy;
        (euv, (euuvv - euv * euv).max(0.0))
    }
}

/// Per-point and per-pair running sums over an ensemble of spectra.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleAccumulator {
    points: Vec<f64>,
    shifts: Vec<i64>,
    pairs: Vec<(usize, usize)>,
    singles: Vec<Moments>,
    pair_moments: Vec<PairMoments>,
    alphas: Vec<f64>,
}

impl EnsembleAccumulator {
    /// `pairs` index into `points`.
    pub fn new(points: Vec<f64>, pairs: Vec<(usize, usize)>) -> Self {
        assert!(pairs.iter().all(|&(i, j)| i < points.len() && j < points.len()));
        let shifts = points.iter().map(|p| p.round() as i64).collect();
        Self {
            singles: vec![Moments::default(); points.len()],
            pair_moments: vec![PairMoments::default(); pairs.len()],
            points,
            shifts,
            pairs,
            alphas: Vec::new(),
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn shift(&self, i: usize) -> i64 {
        self.shifts[i]
    }

    pub fn single(&self, i: usize) -> &Moments {
        &self.singles[i]
    }

    pub fn pair(&self, k: usize) -> &PairMoments {
        &self.pair_moments[k]
    }

    /// Parameter values of the accumulated spectra, in merge order.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn count(&self) -> usize {
        self.alphas.len()
    }

    pub fn push(&mut self, spectrum: &Spectrum) -> Result<()> {
        if let Some(&max) = self.points.iter().max_by(|a, b| a.total_cmp(b)) {
            check_range(spectrum, max)?;
        }
        let d: Vec<i64> = self
            .points
            .iter()
            .zip(&self.shifts)
            .map(|(&p, &s)| spectrum.count_le(p) as i64 - s)
            .collect();
        for (m, &v) in self.singles.iter_mut().zip(&d) {
            m.push(v);
        }
        for (pm, &(i, j)) in self.pair_moments.iter_mut().zip(&self.pairs) {
            let diff = (d[j] + self.shifts[j]) - (d[i] + self.shifts[i]);
            pm.push(d[i], d[j], diff);
        }
        self.alphas.push(spectrum.alpha);
        Ok(())
    }

    /// Appends `other`, which must share this accumulator's layout and hold
    /// the later samples.
    pub fn merge(&mut self, other: &EnsembleAccumulator) -> Result<()> {
        if self.points.len() != other.points.len()
            || self.pairs != other.pairs
            || self.points.iter().zip(&other.points).any(|(a, b)| a.to_bits() != b.to_bits())
        {
            return Err(Error::Domain("accumulator layouts differ".into()));
        }
        for (a, b) in self.singles.iter_mut().zip(&other.singles) {
            a.merge(b);
        }
        for (a, b) in self.pair_moments.iter_mut().zip(&other.pair_moments) {
            a.merge(b);
        }
        self.alphas.extend_from_slice(&other.alphas);
        Ok(())
    }

    /// Accumulates `ensemble` in parallel chunks and merges them in sample
    /// order.
    pub fn accumulate(
        ensemble: &[Spectrum],
        points: Vec<f64>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let empty = Self::new(points, pairs);
        let parts: Vec<Self> = ensemble
            .par_chunks(32)
            .map(|chunk| {
                let mut acc = empty.clone();
                for s in chunk {
                    acc.push(s)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut total = empty;
        for p in &parts {
            total.merge(p)?;
        }
        Ok(total)
    }
}
