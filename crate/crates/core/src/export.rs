//! CSV artifacts.

use std::io::Write;

use serde::Serialize;

use crate::dsp::{Detection, Strategy};
use crate::error::Result;
use crate::heightspec::HeightSpectrum;

#[derive(Serialize)]
struct PsdHeader {
    sensor_height: f64,
    center_frequency: f64,
    bin_spacing: f64,
    n_points: usize,
    strategy: Option<Strategy>,
}

/// Height PSD normalized to unit total power.
///
/// ```text
/// # {"sensor_height":1.0,"center_frequency":76500000000.0,...}
/// height_m,psd
/// 0,0
/// ...
/// ```
pub fn write_height_psd_csv(mut w: impl Write, spec: &HeightSpectrum) -> Result<()> {
    let header = PsdHeader {
        sensor_height: spec.sensor_height,
        center_frequency: spec.center_frequency,
        bin_spacing: spec.bin_spacing,
        n_points: spec.n_points,
        strategy: spec.strategy,
    };
    writeln!(w, "# {}", serde_json::to_string(&header)?)?;
    writeln!(w, "height_m,psd")?;
    for (h, p) in spec.heights.iter().zip(spec.normalized_psd()) {
        writeln!(w, "{h},{p}")?;
    }
    Ok(())
}

/// Selected detection per cycle, `timestamp_s,range_m,velocity_mps,power_db`.
/// An unknown velocity is written as an empty field.
pub fn write_detections_csv(mut w: impl Write, detections: &[Detection]) -> Result<()> {
    writeln!(w, "timestamp_s,range_m,velocity_mps,power_db")?;
    for d in detections {
        let v = d.velocity.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{}",
            d.timestamp,
            d.range,
            v,
            10.0 * d.power.log10()
        )?;
    }
    Ok(())
}
