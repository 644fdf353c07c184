use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fmo_scatter::io::csv::format_fano_csv;
use fmo_scatter::io::{read_spectrum_csv, render_overlay, write_spectrum_csv, write_suite};
use fmo_scatter::scenario::{spectral_difference_with, SuiteOptions};
use fmo_scatter::{count_dips, fit_fano, parse_config, run_scenario_suite, sweep_spectrum, DEFAULT_PROMINENCE};

#[derive(Parser)]
#[command(name = "fmo-scatter", version, about = "Waveguide transmission spectra of lossy excitonic networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the baseline network and write `baseline.csv` to the output directory.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        /// Also write `baseline.svg`.
        #[arg(long)]
        svg: bool,
    },
    /// Run every configured defect scenario and write CSVs, overlays and `report.json`.
    Scenario {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare two spectrum CSVs sampled on the same grid.
    Diff {
        #[arg(long)]
        base: PathBuf,
        #[arg(long = "mod")]
        modified: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
        prominence: f64,
    },
    /// Fit a Fano lineshape to T(E) inside each window of a spectrum CSV.
    Fano {
        #[arg(long)]
        spectrum: PathBuf,
        /// Energy window `LO,HI` in cm⁻¹; repeatable.
        #[arg(long, required = true, allow_hyphen_values = true, value_parser = parse_window)]
        window: Vec<(f64, f64)>,
        /// Row label prefix; defaults to the window bounds.
        #[arg(long)]
        label: Option<String>,
        /// Write the fit table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected LO,HI, got {s:?}"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number {v:?} in window {s:?}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("window needs finite LO < HI, got {s:?}"));
    }
    Ok((lo, hi))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn cmd_spectrum(config: &Path, svg: bool) -> Result<()> {
    let cfg = parse_config(config)?;
    let (net, wg) = cfg.build()?;
    let grid = cfg.probe_grid(&net)?;
    let spec = sweep_spectrum(&net, &wg, &grid, cfg.solver)?;
    ensure_dir(&cfg.output_dir)?;
    let csv = cfg.output_dir.join("baseline.csv");
    write_spectrum_csv(&csv, &spec)?;
    println!("wrote {}", csv.display());
    if svg || cfg.emit_svg {
        let path = cfg.output_dir.join("baseline.svg");
        fs::write(&path, render_overlay("baseline", &spec, None))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    println!("g1/g6 = {}", cfg.coupling_ratio());
    println!("dips = {}", count_dips(&spec, cfg.prominence));
    Ok(())
}

fn cmd_scenario(config: &Path) -> Result<()> {
    let cfg = parse_config(config)?;
    if cfg.scenarios.is_empty() {
        bail!("{}: no [[scenario]] entries", config.display());
    }
    let (net, wg) = cfg.build()?;
    let grid = cfg.probe_grid(&net)?;
    let opts = SuiteOptions { solver: cfg.solver, prominence: cfg.prominence };
    let suite = run_scenario_suite(&net, &wg, &grid, &cfg.scenarios, &opts)?;
    ensure_dir(&cfg.output_dir)?;
    let report = write_suite(&cfg.output_dir, &suite, cfg.prominence, &cfg.fano_windows, cfg.emit_svg)?;
    println!("baseline dips = {}", report.baseline.dip_count);
    let mut failed = 0;
    for s in &report.scenarios {
        match (&s.diff, &s.error) {
            (Some(d), _) => {
                println!("{}: l_inf = {:.6}, l2 = {:.6}, extrema_delta = {}", s.label, d.l_inf, d.l2, d.extrema_delta)
            }
            (None, Some(e)) => {
                failed += 1;
                eprintln!("{}: error: {e}", s.label);
            }
            (None, None) => {}
        }
    }
    for e in &report.fano_errors {
        eprintln!("fano: {e}");
    }
    println!("wrote {}", cfg.output_dir.join("report.json").display());
    if failed > 0 {
        bail!("{failed} scenario(s) failed");
    }
    Ok(())
}

fn cmd_diff(base: &Path, modified: &Path, prominence: f64) -> Result<()> {
    let a = read_spectrum_csv(base)?;
    let b = read_spectrum_csv(modified)?;
    let d = spectral_difference_with(&a, &b, prominence)?;
    println!("l2 = {}", d.l2);
    println!("l_inf = {}", d.l_inf);
    println!("area = {}", d.area);
    println!("extrema_delta = {}", d.extrema_delta);
    println!("reflection_l_inf = {}", d.reflection_l_inf);
    println!("absorption_l_inf = {}", d.absorption_l_inf);
    Ok(())
}

fn cmd_fano(spectrum: &Path, windows: &[(f64, f64)], label: Option<&str>, out: Option<&Path>) -> Result<()> {
    let spec = read_spectrum_csv(spectrum)?;
    let mut rows = Vec::with_capacity(windows.len());
    for &(lo, hi) in windows {
        let fit = fit_fano(&spec, (lo, hi), None).with_context(|| format!("fitting window [{lo}, {hi}]"))?;
        let name = match label {
            Some(l) if windows.len() == 1 => l.to_string(),
            Some(l) => format!("{l}/{lo}-{hi}"),
            None => format!("{lo}-{hi}"),
        };
        rows.push((name, fit));
    }
    let table = format_fano_csv(&rows);
    match out {
        Some(path) => {
            fs::write(path, table).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum { config, svg } => cmd_spectrum(&config, svg),
        Command::Scenario { config } => cmd_scenario(&config),
        Command::Diff { base, modified, prominence } => cmd_diff(&base, &modified, prominence),
        Command::Fano { spectrum, window, label, out } => {
            cmd_fano(&spectrum, &window, label.as_deref(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
