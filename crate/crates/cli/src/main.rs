use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use vxsim::render;
use vxsim::scenario::{self, OutputFormat, Scenario};
use vxsim::SampledField;

#[derive(Parser, Debug)]
#[command(name = "vxsim", version, about = "Electron vortex beams through an astigmatic lens")]
struct Cli {
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario file or a built-in preset.
    Run {
        /// Path to a scenario file, or a preset name (see `list-presets`).
        target: String,
        /// Output directory (overrides out.dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Grid size (overrides grid_n).
        #[arg(long)]
        grid: Option<usize>,
        /// Output formats to write (overrides out.formats; repeatable).
        #[arg(long, value_enum)]
        format: Vec<Format>,
    },
    /// List the built-in presets.
    ListPresets,
    /// Render a VXF1 field dump to images.
    Render {
        dump: PathBuf,
        /// Directory for the images (defaults to the dump's directory).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "pgm")]
        format: Vec<Format>,
    },
    /// Summarize a run directory and verify its checksums.
    Report { run_dir: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pgm,
    Png,
    Csv,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Pgm => OutputFormat::Pgm,
            Format::Png => OutputFormat::Png,
            Format::Csv => OutputFormat::Csv,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Run { target, out, grid, format } => run(target, out.as_deref(), *grid, format, cli.quiet),
        Command::ListPresets => {
            for p in scenario::PRESETS {
                println!("{:<26} {}", p.name, p.summary);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { dump, out, format } => render_dump(dump, out.as_deref(), format, cli.quiet),
        Command::Report { run_dir } => report(run_dir, cli.quiet),
    }
}

fn run(target: &str, out: Option<&Path>, grid: Option<usize>, formats: &[Format], quiet: bool) -> Result<ExitCode> {
    let path = Path::new(target);
    let (mut s, expectations): (Scenario, &[scenario::Expectation]) = if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let s = scenario::parse_scenario(&text).with_context(|| format!("in {}", path.display()))?;
        (s, &[])
    } else if let Some(p) = scenario::preset(target) {
        (p.scenario()?, p.expectations)
    } else {
        let names: Vec<&str> = scenario::PRESETS.iter().map(|p| p.name).collect();
        bail!("`{target}` is neither a scenario file nor a preset ({})", names.join(", "));
    };
    if let Some(dir) = out {
        s.out_dir = dir.to_path_buf();
    }
    if let Some(n) = grid {
        if n < vxsim::Grid::MIN_SIZE || !n.is_power_of_two() {
            bail!("--grid must be a power of two ≥ {}, got {n}", vxsim::Grid::MIN_SIZE);
        }
        s.grid_n = n;
    }
    if !formats.is_empty() {
        s.formats = formats.iter().map(|&f| f.into()).collect();
        s.formats.sort();
        s.formats.dedup();
    }
    let report = scenario::run_checked(&s, expectations)?;
    if !quiet {
        print!("{}", fs::read_to_string(&report.report_path)?);
        println!("\nwall time: {:.2} s", report.wall_time.as_secs_f64());
    }
    if report.all_expectations_met() {
        Ok(ExitCode::SUCCESS)
    } else {
        for e in report.expectations.iter().filter(|e| !e.passed) {
            eprintln!("expectation failed: {}: {}", e.label, e.detail);
        }
        Ok(ExitCode::from(2))
    }
}

fn render_dump(dump: &Path, out: Option<&Path>, formats: &[Format], quiet: bool) -> Result<ExitCode> {
    let file = fs::File::open(dump).with_context(|| format!("opening {}", dump.display()))?;
    let field = SampledField::read_vxf(BufReader::new(file)).with_context(|| format!("reading {}", dump.display()))?;
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => dump.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    fs::create_dir_all(&dir)?;
    let stem = dump.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
    let mut written = Vec::new();
    for f in formats {
        match f {
            Format::Pgm => written.extend(render::render_intensity(&field, &dir.join(format!("{stem}.pgm")), None)?),
            Format::Png => {
                written.extend(render::render_intensity_png(&field, &dir.join(format!("{stem}.png")), None)?);
                written.extend(render::render_phase(&field, &dir.join(format!("{stem}_phase.png")), None)?);
            }
            Format::Csv => bail!("a field dump renders to images only (pgm, png)"),
        }
    }
    if !quiet {
        for p in written {
            println!("{}", p.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report(dir: &Path, quiet: bool) -> Result<ExitCode> {
    let r = scenario::inspect_run_dir(dir).with_context(|| format!("reading run directory {}", dir.display()))?;
    if !quiet {
        print!("{}", r.report);
        println!(
            "\n{} files, {} checksum mismatches, {} failed expectations",
            r.manifest.len(),
            r.mismatches.len(),
            r.failed_expectations.len()
        );
    }
    for m in &r.mismatches {
        eprintln!("checksum mismatch: {m}");
    }
    Ok(if r.mismatches.is_empty() && r.failed_expectations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
