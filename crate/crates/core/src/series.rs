//! Sampled curves and their CSV form.
//!
//! A series file is one header line followed by a CSV table:
//!
//! ```text
//! # glvar-series v1 estimator=<tag> n_samples=<n> config=<hash>
//! abscissa,value,stderr,estimator,n_samples
//! 1000,3.01,0.09,global-variance-vs-mean,2000
//! ```
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! series written twice from identical values is byte-identical.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const SERIES_SCHEMA: &str = "glvar-series v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Estimator {
    Staircase,
    MeanStaircase,
    GlobalVarianceVsEpsilon,
    GlobalVarianceVsMean,
    CorrelationVsEpsilon,
    CorrelationVsMean,
    IntervalVariance,
    Delta3,
    Delta3Saturation,
    PoDeltaN,
    PoSigmaInterval,
    PoStaircaseCorrelation,
    PoSmallOmega,
    PoDelta3Saturation,
    PoGlobalDiagonal,
    PoGlobalPermutedPairs,
    PoGlobalFull,
}

impl Estimator {
    pub const ALL: [Estimator; 17] = [
        Estimator::Staircase,
        Estimator::MeanStaircase,
        Estimator::GlobalVarianceVsEpsilon,
        Estimator::GlobalVarianceVsMean,
        Estimator::CorrelationVsEpsilon,
        Estimator::CorrelationVsMean,
        Estimator::IntervalVariance,
        Estimator::Delta3,
        Estimator::Delta3Saturation,
        Estimator::PoDeltaN,
        Estimator::PoSigmaInterval,
        Estimator::PoStaircaseCorrelation,
        Estimator::PoSmallOmega,
        Estimator::PoDelta3Saturation,
        Estimator::PoGlobalDiagonal,
        Estimator::PoGlobalPermutedPairs,
        Estimator::PoGlobalFull,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Estimator::Staircase => "staircase",
            Estimator::MeanStaircase => "mean-staircase-minus-epsilon",
            Estimator::GlobalVarianceVsEpsilon => "global-variance-vs-epsilon",
            Estimator::GlobalVarianceVsMean => "global-variance-vs-mean",
            Estimator::CorrelationVsEpsilon => "staircase-correlation-vs-epsilon",
            Estimator::CorrelationVsMean => "staircase-correlation-vs-mean",
            Estimator::IntervalVariance => "interval-variance",
            Estimator::Delta3 => "delta3",
            Estimator::Delta3Saturation => "delta3-saturation",
            Estimator::PoDeltaN => "po-delta-n",
            Estimator::PoSigmaInterval => "po-interval-variance",
            Estimator::PoStaircaseCorrelation => "po-staircase-correlation",
            Estimator::PoSmallOmega => "po-small-omega",
            Estimator::PoDelta3Saturation => "po-delta3-saturation",
            Estimator::PoGlobalDiagonal => "po-global-variance-diagonal",
            Estimator::PoGlobalPermutedPairs => "po-global-variance-permuted-pairs",
            Estimator::PoGlobalFull => "po-global-variance-full",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.tag() == tag)
    }
}

/// Provenance of a series: ensemble size and the hash of the run
/// configuration that produced it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeriesMeta {
    pub n_samples: usize,
    pub config_hash: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StatSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub estimator: Estimator,
    pub meta: SeriesMeta,
}

impl StatSeries {
    pub fn new(
        estimator: Estimator,
        grid: Vec<f64>,
        values: Vec<f64>,
        stderr: Option<Vec<f64>>,
        n_samples: usize,
    ) -> Result<Self> {
        let stderr = stderr.unwrap_or_else(|| vec![0.0; grid.len()]);
        if grid.len() != values.len() || grid.len() != stderr.len() {
            return Err(Error::Domain(format!(
                "series length mismatch: grid {}, values {}, stderr {}",
                grid.len(),
                values.len(),
                stderr.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("series grid must be strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite value {} at abscissa {}",
                values[i], grid[i]
            )));
        }
        Ok(Self {
            grid,
            values,
            stderr,
            estimator,
            meta: SeriesMeta {
                n_samples,
                config_hash: String::new(),
            },
        })
    }

    pub fn with_config_hash(mut self, hash: &str) -> Self {
        self.meta.config_hash = hash.to_string();
        self
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let tag = self.estimator.tag();
        let n = self.meta.n_samples;
        let hash = if self.meta.config_hash.is_empty() {
            "-"
        } else {
            &self.meta.config_hash
        };
        let mut out = String::with_capacity(48 * (self.len() + 2));
        let _ = writeln!(out, "# {SERIES_SCHEMA} estimator={tag} n_samples={n} config={hash}");
        out.push_str("abscissa,value,stderr,estimator,n_samples\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{},{},{},{tag},{n}",
                self.grid[i], self.values[i], self.stderr[i]
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let rest = header
            .strip_prefix("# ")
            .and_then(|h| h.strip_prefix(SERIES_SCHEMA))
            .ok_or_else(|| Error::Parse(format!("bad schema line: {header}")))?;
        let mut estimator = None;
        let mut n_samples = None;
        let mut config_hash = String::new();
        for field in rest.split_whitespace() {
            match field.split_once('=') {
                Some(("estimator", v)) => estimator = Estimator::from_tag(v),
                Some(("n_samples", v)) => n_samples = v.parse().ok(),
                Some(("config", v)) if v != "-" => config_hash = v.to_string(),
                _ => {}
            }
        }
        let estimator = estimator.ok_or_else(|| Error::Parse("missing estimator".into()))?;
        let n_samples = n_samples.ok_or_else(|| Error::Parse("missing n_samples".into()))?;
        match lines.next() {
            Some("abscissa,value,stderr,estimator,n_samples") => {}
            other => return Err(Error::Parse(format!("bad column header: {other:?}"))),
        }
        let mut grid = Vec::new();
        let mut values = Vec::new();
        let mut stderr = Vec::new();
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))
        };
        for line in lines.filter(|l| !l.is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(Error::Parse(format!("expected 5 columns: {line}")));
            }
            grid.push(num(cols[0])?);
            values.push(num(cols[1])?);
            stderr.push(num(cols[2])?);
        }
        Ok(StatSeries::new(estimator, grid, values, Some(stderr), n_samples)?
            .with_config_hash(&config_hash))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_unsorted_grid_and_nan() {
        assert!(StatSeries::new(Estimator::Delta3, vec![1.0, 1.0], vec![0.0, 0.0], None, 1).is_err());
        assert!(StatSeries::new(Estimator::Delta3, vec![1.0], vec![f64::NAN], None, 1).is_err());
        assert!(StatSeries::new(Estimator::Delta3, vec![1.0], vec![], None, 1).is_err());
    }

    #[test]
    fn tags_are_unique() {
        for (i, a) in Estimator::ALL.iter().enumerate() {
            assert_eq!(Estimator::from_tag(a.tag()), Some(*a));
            for b in &Estimator::ALL[i + 1..] {
                assert_ne!(a.tag(), b.tag());
            }
        }
    }

    proptest! {
        #[test]
        fn csv_round_trip(
            start in -1e6f64..1e6,
            steps in prop::collection::vec(1e-6f64..1e3, 0..40),
            seed_vals in prop::collection::vec(-1e9f64..1e9, 41),
            n in 0usize..100_000,
        ) {
            let mut grid = vec![start];
            for s in &steps {
                let next = grid.last().unwrap() + s;
                grid.push(next);
            }
            let values: Vec<f64> = grid.iter().zip(&seed_vals).map(|(_, v)| *v).collect();
            let series = StatSeries::new(Estimator::GlobalVarianceVsMean, grid, values, None, n)
                .unwrap()
                .with_config_hash("abc123");
            let parsed = StatSeries::from_csv(&series.to_csv()).unwrap();
            prop_assert_eq!(parsed, series);
        }
    }
}
