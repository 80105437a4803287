//! FMCW front-end processing: range and range-Doppler FFTs, cell-averaging
//! CFAR, target selection and extraction of the received-power series that
//! samples the ground-reflection interference pattern.

mod cfar;
mod spectrum;
mod track;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cfar::{ca_cfar, CfarHit, CfarParams, PowerMap};
pub use spectrum::{
    coherent_hann, hann, intra_chirp_samples, range_doppler, range_fft, tone_at,
    RangeDopplerMap, RangeSpectrum, SpectrumProcessor,
};
pub use track::{
    extract_series, local_maxima, select_target_bin, Detection, TrackPoint, TrackPrior,
    TrackerConfig, TrackerState,
};

/// How the interference pattern is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// One sample per chirp, taken from the range spectrum.
    #[serde(rename = "sor")]
    SoR,
    /// One sample per measurement cycle, taken from the range-Doppler map.
    #[serde(rename = "sord")]
    SoRD,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::SoR => "sor",
            Strategy::SoRD => "sord",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sor" => Ok(Strategy::SoR),
            "sord" => Ok(Strategy::SoRD),
            other => Err(Error::Parameter(format!("unknown strategy '{other}'"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Received power of one tracked target versus its ground distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSeries {
    /// `(distance [m], power [linear])`, in acquisition order.
    pub points: Vec<(f64, f64)>,
    pub strategy: Strategy,
    /// Range-bin width of the waveform that produced the series.
    pub range_bin_width: f64,
}

impl AmplitudeSeries {
    pub fn new(points: Vec<(f64, f64)>, strategy: Strategy, range_bin_width: f64) -> Result<Self> {
        if let Some(p) = points
            .iter()
            .find(|(d, p)| !(*d > 0.0) || !d.is_finite() || !(*p >= 0.0) || !p.is_finite())
        {
            return Err(Error::Degenerate(format!("invalid series point {p:?}")));
        }
        if !(range_bin_width > 0.0) {
            return Err(Error::Parameter(format!(
                "range bin width {range_bin_width} must be positive"
            )));
        }
        Ok(Self {
            points,
            strategy,
            range_bin_width,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn span(&self) -> f64 {
        let (lo, hi) = self
            .distances()
            .fold((f64::MAX, f64::MIN), |(lo, hi), d| (lo.min(d), hi.max(d)));
        if self.points.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// `true` if distances strictly increase or strictly decrease.
    pub fn is_strictly_monotone(&self) -> bool {
        let w = || self.points.windows(2);
        w().all(|p| p[1].0 > p[0].0) || w().all(|p| p[1].0 < p[0].0)
    }

    /// Keeps the points with `min ≤ d ≤ max`.
    pub fn crop(&self, min: f64, max: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .copied()
                .filter(|(d, _)| (min..=max).contains(d))
                .collect(),
            strategy: self.strategy,
            range_bin_width: self.range_bin_width,
        }
    }

    /// Multiplies every power by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            points: self.points.iter().map(|&(d, p)| (d, p * factor)).collect(),
            ..self.clone()
        }
    }
}
