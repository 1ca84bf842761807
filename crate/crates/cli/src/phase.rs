use std::path::{Path, PathBuf};

use gaussent_core::reconstruction::{
    phase_diagram, phase_diagram_csv, plot_script, Grid, PhaseClass,
};

use crate::output::{write_atomic, CliError, CliResult};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Thermal occupation grid, start:end:points.
    #[arg(long, default_value = "0:3:200", allow_hyphen_values = true)]
    pub n_grid: String,
    /// Parity-difference grid, start:end:points.
    #[arg(long, default_value = "-0.5:0.5:200", allow_hyphen_values = true)]
    pub eta1_grid: String,
    /// CSV output; a plot script is written next to it.
    #[arg(short, long, default_value = "phase_diagram.csv")]
    pub output: PathBuf,
}

pub fn script_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("phase_diagram");
    csv.with_file_name(format!("{stem}.plot.py"))
}

pub fn run(args: Args) -> CliResult {
    let parse = |s: &str, flag: &str| {
        s.parse::<Grid>()
            .map_err(|e| CliError::usage(format!("--{flag}: {e}")))
    };
    let n = parse(&args.n_grid, "n-grid")?;
    let eta = parse(&args.eta1_grid, "eta1-grid")?;
    let cells = phase_diagram(&n, &eta);
    write_atomic(&args.output, phase_diagram_csv(&cells).as_bytes())?;
    let csv_name = args
        .output
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("phase_diagram.csv");
    let script = script_path(&args.output);
    write_atomic(&script, plot_script(csv_name).as_bytes())?;
    let count = |c: PhaseClass| cells.iter().filter(|x| x.class == c).count();
    eprintln!(
        "{} cells: {} entangled, {} boundary, {} separable, {} unphysical; wrote {} and {}",
        cells.len(),
        count(PhaseClass::Entangled),
        count(PhaseClass::Boundary),
        count(PhaseClass::Separable),
        count(PhaseClass::Unphysical),
        args.output.display(),
        script.display()
    );
    Ok(())
}
