//! Orchestration behind the `groundref` binary: scenario → cube → series →
//! height spectrum → feature, and the artifact files of a run.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use groundref::classify::{class_ratio, power_above_height, HeightFeature};
use groundref::dsp::{extract_series, Strategy, TrackerState};
use groundref::heightspec::{estimate_height_psd, sum_psds, HeightSpectrum};
use groundref::scenario::{Scenario, ScenarioFile};
use groundref::synth::{synthesize_cube, DataCube, RadarConfig};
use groundref::{cube_io, export, Error};

pub const SCENARIO_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");

/// Built-in scene used when only a preset is given.
pub fn default_scenario(preset: &str) -> Result<ScenarioFile, Error> {
    let text = match preset.to_ascii_lowercase().as_str() {
        "sor" => include_str!("../scenarios/sor/car_toward.json"),
        _ => include_str!("../scenarios/car_toward.json"),
    };
    ScenarioFile::from_json(text)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub max_height: f64,
    pub oversample: f64,
    pub threshold_height: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            max_height: groundref::heightspec::DEFAULT_MAX_HEIGHT,
            oversample: groundref::heightspec::DEFAULT_OVERSAMPLE,
            threshold_height: groundref::classify::DEFAULT_THRESHOLD,
        }
    }
}

/// Contents of `features.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Features {
    pub scenario: String,
    pub strategy: Strategy,
    pub threshold_m: f64,
    pub ratio_above: f64,
    pub power_total: f64,
    pub power_above: f64,
    pub peak_height_m: f64,
}

impl Features {
    fn new(scenario: &Scenario, spec: &HeightSpectrum, f: &HeightFeature) -> Self {
        Self {
            scenario: scenario.name.clone(),
            strategy: scenario.strategy,
            threshold_m: f.threshold_height,
            ratio_above: f.ratio_above,
            power_total: f.power_total,
            power_above: f.power_above,
            peak_height_m: spec.peak_height(),
        }
    }

    pub fn feature(&self) -> HeightFeature {
        HeightFeature {
            power_above: self.power_above,
            power_total: self.power_total,
            threshold_height: self.threshold_m,
            ratio_above: self.ratio_above,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunLog {
    pub scenario: String,
    pub strategy: Strategy,
    pub config: RadarConfig,
    pub n_scatterers: usize,
    pub n_cycles: usize,
    pub noise_power: f64,
    pub seed: u64,
    pub analysis_window: (f64, f64),
    pub max_height: f64,
    pub oversample: f64,
    pub series_points: usize,
    pub window_points: usize,
    pub track_cycles: usize,
    pub detections: usize,
    pub elapsed_s: f64,
}

/// Everything a run produces, held in memory until written.
pub struct RunOutput {
    pub scenario: Scenario,
    pub spectrum: HeightSpectrum,
    pub summed: HeightSpectrum,
    pub features: Features,
    pub log: RunLog,
    pub tracker: TrackerState,
    pub cube: Option<DataCube>,
}

pub fn run_scenario(scenario: &Scenario, opts: &AnalysisOptions, keep_cube: bool) -> Result<RunOutput, Error> {
    let start = Instant::now();
    let cube = synthesize_cube(&scenario.config, &scenario.scene)?;
    let mut tracker = TrackerState::default();
    let series = extract_series(&cube, scenario.strategy, &mut tracker)?;
    let (lo, hi) = scenario.analysis_window;
    let windowed = series.crop(lo, hi);
    let spectrum = estimate_height_psd(
        &windowed,
        scenario.config.sensor_height,
        scenario.config.center_frequency,
        opts.max_height,
        opts.oversample,
    )?;
    let summed = sum_psds(std::slice::from_ref(&spectrum))?;
    let feature = power_above_height(&summed, opts.threshold_height)?;

    let log = RunLog {
        scenario: scenario.name.clone(),
        strategy: scenario.strategy,
        config: scenario.config.clone(),
        n_scatterers: scenario.scene.scatterers.len(),
        n_cycles: scenario.scene.n_cycles,
        noise_power: scenario.scene.noise_power,
        seed: scenario.scene.seed,
        analysis_window: scenario.analysis_window,
        max_height: opts.max_height,
        oversample: opts.oversample,
        series_points: series.len(),
        window_points: windowed.len(),
        track_cycles: tracker.track.len(),
        detections: tracker.detections.len(),
        elapsed_s: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutput {
        features: Features::new(scenario, &summed, &feature),
        scenario: scenario.clone(),
        spectrum,
        summed,
        log,
        tracker,
        cube: keep_cube.then_some(cube),
    })
}

/// Writes the artifact set into `dir`, creating it if needed.
pub fn write_artifacts(dir: &Path, out: &RunOutput, emit_detections: bool) -> Result<Vec<PathBuf>, Error> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut create = |name: &str| -> Result<BufWriter<fs::File>, Error> {
        let path = dir.join(name);
        let f = fs::File::create(&path)?;
        written.push(path);
        Ok(BufWriter::new(f))
    };
    export::write_height_psd_csv(create("height_psd.csv")?, &out.spectrum)?;
    export::write_height_psd_csv(create("summed_psd.csv")?, &out.summed)?;
    serde_json::to_writer_pretty(create("features.json")?, &out.features)?;
    serde_json::to_writer_pretty(create("run_log.json")?, &out.log)?;
    if emit_detections {
        export::write_detections_csv(create("detections.csv")?, &out.tracker.detections)?;
    }
    if let Some(cube) = &out.cube {
        cube_io::write_cube(create("cube.bin")?, cube)?;
    }
    Ok(written)
}

pub fn load_features(run_dir: &Path) -> Result<Features, Error> {
    let path = run_dir.join("features.json");
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Ratio table: one row per run with its `ratio_above`, then one column per
/// run holding `row / column`.
pub fn compare_table(runs: &[(String, Features)]) -> Result<String, Error> {
    if runs.len() < 2 {
        return Err(Error::Parameter("compare needs at least two runs".into()));
    }
    let mut out = String::from("run,threshold_m,ratio_above");
    for (name, _) in runs {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (name, a) in runs {
        out.push_str(&format!("{name},{},{}", a.threshold_m, a.ratio_above));
        for (_, b) in runs {
            out.push_str(&format!(",{}", class_ratio(&a.feature(), &b.feature())?));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Exit code for an error: 2 for bad input, 3 for pipeline failures.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Scenario(_)
        | Error::Parameter(_)
        | Error::Domain(_)
        | Error::ThresholdMismatch(..)
        | Error::Format(_)
        | Error::Json(_) => 2,
        _ => 3,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Scenario(_) => "scenario",
        Error::Index { .. } => "index",
        Error::Parameter(_) => "parameter",
        Error::Gap { .. } => "target_lost",
        Error::NoTarget => "no_target",
        Error::DegenerateSpan { .. } | Error::Degenerate(_) => "degenerate_series",
        Error::AxisMismatch => "axis_mismatch",
        Error::Range(_) => "range",
        Error::ThresholdMismatch(..) => "threshold_mismatch",
        Error::Format(_) => "format",
        Error::Io(_) => "io",
        Error::Json(_) => "json",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feat(name: &str, r: f64) -> (String, Features) {
        (
            name.into(),
            Features {
                scenario: name.into(),
                strategy: Strategy::SoRD,
                threshold_m: 6.0,
                ratio_above: r,
                power_total: 1.0,
                power_above: r,
                peak_height_m: 1.0,
            },
        )
    }

    #[test]
    fn compare_arithmetic() {
        let t = compare_table(&[feat("truck", 0.10), feat("car", 0.05)]).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "run,threshold_m,ratio_above,truck,car");
        assert_eq!(lines[1], "truck,6,0.1,1,2");
        assert_eq!(lines[2], "car,6,0.05,0.5,1");
    }

    #[test]
    fn compare_needs_two_runs_with_one_threshold() {
        assert!(compare_table(&[feat("a", 0.1)]).is_err());
        let mut b = feat("b", 0.1);
        b.1.threshold_m = 5.0;
        let e = compare_table(&[feat("a", 0.1), b]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::NoTarget), 3);
        assert_eq!(exit_code(&Error::Gap { cycles: 4, first_cycle: 2 }), 3);
        assert_eq!(exit_code(&Error::Scenario("x".into())), 2);
    }

    #[test]
    fn default_scenarios_parse() {
        for p in ["sor", "sord"] {
            let s = default_scenario(p).unwrap().resolve(Some(p), None).unwrap();
            assert_eq!(s.config, groundref::scenario::preset(p).unwrap());
        }
    }
}
