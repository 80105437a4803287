//! Height-based class feature: the share of height-PSD power above a
//! threshold height.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heightspec::HeightSpectrum;

pub const DEFAULT_THRESHOLD: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightFeature {
    pub power_above: f64,
    pub power_total: f64,
    pub threshold_height: f64,
    /// `power_above / power_total`, in `[0, 1]`.
    pub ratio_above: f64,
}

/// Integrates the PSD over bins strictly above `threshold` and over all bins.
pub fn power_above_height(spec: &HeightSpectrum, threshold: f64) -> Result<HeightFeature> {
    if !(threshold >= 0.0) || threshold >= spec.max_height() {
        return Err(Error::Range(format!(
            "threshold {threshold} m outside the spectrum's height range [0, {})",
            spec.max_height()
        )));
    }
    let power_total: f64 = spec.psd.iter().sum();
    if !(power_total > 0.0) {
        return Err(Error::Degenerate("height spectrum carries no power".into()));
    }
    let power_above: f64 = spec
        .heights
        .iter()
        .zip(&spec.psd)
        .filter(|(h, _)| **h > threshold)
        .map(|(_, p)| p)
        .sum();
    Ok(HeightFeature {
        power_above,
        power_total,
        threshold_height: threshold,
        ratio_above: power_above / power_total,
    })
}

/// `a.ratio_above / b.ratio_above`; infinite when `b` has nothing above.
pub fn class_ratio(a: &HeightFeature, b: &HeightFeature) -> Result<f64> {
    if a.threshold_height != b.threshold_height {
        return Err(Error::ThresholdMismatch(a.threshold_height, b.threshold_height));
    }
    if b.ratio_above == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(a.ratio_above / b.ratio_above)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(psd: Vec<f64>) -> HeightSpectrum {
        HeightSpectrum {
            heights: (0..psd.len()).map(|k| 0.1 * k as f64).collect(),
            psd,
            bin_spacing: 51.0,
            sensor_height: 1.0,
            center_frequency: 76.5e9,
            n_points: 100,
            strategy: None,
        }
    }

    #[test]
    fn power_below_threshold_gives_zero() {
        let mut psd = vec![0.0; 101];
        psd[10] = 5.0;
        psd[20] = 1.0;
        let f = power_above_height(&spectrum(psd), 6.0).unwrap();
        assert_eq!(f.ratio_above, 0.0);
        assert_eq!(f.power_total, 6.0);
    }

    #[test]
    fn flat_psd_splits_at_half_axis() {
        let s = spectrum(vec![1.0; 101]);
        let f = power_above_height(&s, 5.0).unwrap();
        assert!((f.ratio_above - 0.5).abs() <= 1.0 / 101.0);
    }

    #[test]
    fn threshold_must_lie_inside_the_axis() {
        let s = spectrum(vec![1.0; 101]);
        assert!(power_above_height(&s, 10.0).is_err());
        assert!(power_above_height(&s, 12.0).is_err());
        assert!(power_above_height(&s, -1.0).is_err());
    }

    #[test]
    fn ratios() {
        let f = |r: f64| HeightFeature {
            power_above: r,
            power_total: 1.0,
            threshold_height: 6.0,
            ratio_above: r,
        };
        assert!((class_ratio(&f(0.10), &f(0.05)).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(class_ratio(&f(0.3), &f(0.3)).unwrap(), 1.0);
        assert_eq!(class_ratio(&f(0.3), &f(0.0)).unwrap(), f64::INFINITY);
        let other = HeightFeature {
            threshold_height: 5.0,
            ..f(0.1)
        };
        assert!(matches!(
            class_ratio(&f(0.1), &other),
            Err(Error::ThresholdMismatch(..))
        ));
    }
}
