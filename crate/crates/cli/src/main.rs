use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use groundref::dsp::Strategy;
use groundref::scenario::{self, ScenarioFile};
use groundref::Error;
use groundref_cli::{
    compare_table, default_scenario, error_kind, exit_code, load_features, run_scenario,
    write_artifacts, AnalysisOptions,
};

#[derive(Parser)]
#[command(name = "groundref", version, about = "Ground-reflection height fingerprints of road vehicles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and estimate its height spectrum and feature.
    Run(RunArgs),
    /// Tabulate power-above-threshold ratios of completed runs.
    Compare {
        /// Run directories (each holding a features.json).
        #[arg(required = true)]
        runs: Vec<PathBuf>,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the built-in radar presets.
    Presets,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Built-in radar preset (sor, sord); replaces the scenario's radar.
    #[arg(long)]
    preset: Option<String>,
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Noise seed, replaces the scenario's.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = groundref::heightspec::DEFAULT_MAX_HEIGHT)]
    max_height: f64,
    #[arg(long, default_value_t = groundref::heightspec::DEFAULT_OVERSAMPLE)]
    oversample: f64,
    #[arg(long, default_value_t = groundref::classify::DEFAULT_THRESHOLD)]
    threshold_height: f64,
    /// Also write the synthesized data cube (cube.bin).
    #[arg(long)]
    emit_cube: bool,
    /// Also write the per-cycle detections (detections.csv).
    #[arg(long)]
    emit_detections: bool,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn run(args: RunArgs) -> Result<(), Error> {
    let file = match (&args.scenario, &args.preset) {
        (Some(path), _) => ScenarioFile::load(path)?,
        (None, Some(p)) => default_scenario(p)?,
        (None, None) => {
            return Err(Error::Scenario(
                "give --scenario, --preset, or both".into(),
            ))
        }
    };
    let mut scenario = file.resolve(args.preset.as_deref(), args.strategy)?;
    if let Some(seed) = args.seed {
        scenario.scene.seed = seed;
    }
    let opts = AnalysisOptions {
        max_height: args.max_height,
        oversample: args.oversample,
        threshold_height: args.threshold_height,
    };
    let out = run_scenario(&scenario, &opts, args.emit_cube)?;
    write_artifacts(&args.out, &out, args.emit_detections)?;
    let f = &out.features;
    println!(
        "{}: {} points, peak {:.2} m, ratio above {} m = {:.4} -> {}",
        f.scenario,
        out.log.window_points,
        f.peak_height_m,
        f.threshold_m,
        f.ratio_above,
        args.out.display()
    );
    Ok(())
}

fn compare(runs: Vec<PathBuf>, out: Option<PathBuf>) -> Result<(), Error> {
    let features = runs
        .iter()
        .map(|dir| {
            let name = dir
                .file_name()
                .map_or_else(|| dir.display().to_string(), |n| n.to_string_lossy().into_owned());
            load_features(dir).map(|f| (name, f))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let table = compare_table(&features)?;
    match out {
        Some(path) => std::fs::write(path, table)?,
        None => print!("{table}"),
    }
    Ok(())
}

fn presets() {
    println!(
        "{:<6} {:>8} {:>9} {:>10} {:>10} {:>9} {:>6} {:>8} {:>6} {:>9} {:>8} {:>10}",
        "name", "f_c GHz", "ADC MHz", "B MHz", "T us", "PRF kHz", "ramps", "cycle Hz", "h_S m",
        "range m", "samples", "bin m"
    );
    for name in scenario::PRESET_NAMES {
        let c = scenario::preset(name).expect("built-in preset");
        println!(
            "{:<6} {:>8.1} {:>9.2} {:>10.1} {:>10.1} {:>9.2} {:>6} {:>8.0} {:>6.2} {:>9.1} {:>8} {:>10.5}",
            name,
            c.center_frequency / 1e9,
            c.adc_sample_rate / 1e6,
            c.bandwidth / 1e6,
            c.chirp_duration * 1e6,
            c.pulse_repetition_frequency / 1e3,
            c.n_ramps_per_cycle,
            c.measurement_cycle_rate,
            c.sensor_height,
            c.max_range,
            c.samples_per_chirp(),
            c.range_bin_width(),
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Compare { runs, out } => compare(runs, out),
        Command::Presets => {
            presets();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({ "error": error_kind(&e), "message": e.to_string() });
            eprintln!("{report}");
            ExitCode::from(exit_code(&e))
        }
    }
}
