use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

/// Number of levels `<= epsilon` (right-continuous).
pub fn staircase(spectrum: &Spectrum, epsilon: f64) -> Result<usize> {
    check_range(spectrum, epsilon)?;
    Ok(spectrum.count_le(epsilon))
}

pub(crate) fn check_range(spectrum: &Spectrum, epsilon: f64) -> Result<()> {
    if epsilon > spectrum.emax || !epsilon.is_finite() {
        return Err(Error::OutOfRange {
            epsilon,
            emax: spectrum.emax,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SystemKind;
    use proptest::prelude::*;

    fn spec(levels: Vec<f64>) -> Spectrum {
        Spectrum::new(SystemKind::Rectangular, 1.0, levels, 100.0).unwrap()
    }

    #[test]
    fn below_first_level_and_ties() {
        let s = spec(vec![1.5, 2.0, 7.25]);
        assert_eq!(staircase(&s, 0.3).unwrap(), 0);
        assert_eq!(staircase(&s, 2.0).unwrap(), 2);
        assert_eq!(staircase(&s, 1.9999999).unwrap(), 1);
        assert!(matches!(staircase(&s, 101.0), Err(Error::OutOfRange { .. })));
    }

    proptest! {
        #[test]
        fn increments_count_half_open_intervals(
            mut raw in prop::collection::btree_set(0u32..100_000, 1..200),
            a in 0.0f64..100.0,
            b in 0.0f64..100.0,
        ) {
            let levels: Vec<f64> = std::mem::take(&mut raw).into_iter().map(|x| x as f64 * 1e-3).collect();
            let s = spec(levels.clone());
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let inside = levels.iter().filter(|&&x| x > lo && x <= hi).count();
            prop_assert_eq!(staircase(&s, hi).unwrap() - staircase(&s, lo).unwrap(), inside);
        }
    }
}
