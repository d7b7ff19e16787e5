//! Command-line front end.
//!
//! Each subcommand builds an [`ExperimentConfig`] from its flags, runs it and
//! writes the report. Exit codes: 0 success, 2 usage, 3 data, 4 numerical.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ensembles::DysonIndex;
use crate::error::{Error, Result};
use crate::io::{to_json_string, write_atomic, write_report, ReportFormat};
use crate::models::{
    ChiralChainParams, DefectXxzParams, IntermediateMapParams, KickedTopParams, DEFAULT_BASIS_CAP,
};
use crate::numerics::StreamId;
use crate::pipeline::{finite_size_scan, run_experiment, ExperimentConfig, HistogramSpec, Source};
use crate::ratio::{predicted_beta_prime, FitGrid, IndexMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ratiokit", version, about = "Higher-order spacing ratio statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a Gaussian or circular ensemble.
    Sample {
        #[arg(long, value_enum)]
        ensemble: Ensemble,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Spectra of a model system.
    Model {
        #[command(subcommand)]
        model: Model,
    },
    /// Analyze a level file (one level per line, '#' comments).
    Ingest {
        #[arg(long)]
        file: PathBuf,
        /// Symmetry class used for the predicted index.
        #[arg(long)]
        assume_beta: Option<u8>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Fitted index against matrix dimension.
    FiniteSize {
        #[arg(long, value_enum)]
        ensemble: Ensemble,
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the predicted effective index for each order.
    Predict {
        #[arg(long)]
        beta: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
    },
}

#[derive(Debug, Subcommand)]
enum Model {
    DefectXxz {
        #[arg(long, default_value_t = 14)]
        sites: usize,
        #[arg(long, default_value_t = 0.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.5)]
        eps_d: f64,
        /// 1-based; defaults to the middle of the chain.
        #[arg(long)]
        defect_site: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        j_xy: f64,
        #[arg(long, default_value_t = 0.5)]
        j_z: f64,
        /// Defaults to half filling.
        #[arg(long)]
        n_up: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BASIS_CAP)]
        basis_cap: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    ChiralChain {
        #[arg(long, default_value_t = 12)]
        sites: usize,
        #[arg(long, default_value_t = 1.0)]
        j1: f64,
        #[arg(long, default_value_t = 1.0)]
        j2: f64,
        /// Standard deviation of the random fields.
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        #[arg(long)]
        n_up: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BASIS_CAP)]
        basis_cap: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    KickedTop {
        #[arg(long, default_value_t = 200.0)]
        j: f64,
        #[arg(long, default_value_t = 1.7)]
        p: f64,
        #[arg(long, default_value_t = 10.0)]
        q: f64,
        /// Keep the full Floquet operator instead of splitting parity blocks.
        #[arg(long)]
        no_parity_split: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    IntermediateMap {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        /// Defaults to the golden mean.
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Ensemble {
    Goe,
    Gue,
    Gse,
    Coe,
    Cue,
    Cse,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    realizations: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, default_value = "sliding")]
    mode: IndexMode,
    /// Fraction of levels dropped at each spectral edge.
    #[arg(long)]
    trim: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    fit_lo: f64,
    #[arg(long, default_value_t = 60.0)]
    fit_hi: f64,
    #[arg(long, default_value_t = 1.0)]
    fit_step: f64,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[arg(long, default_value_t = 0.0)]
    hist_lo: f64,
    #[arg(long, default_value_t = 5.0)]
    hist_hi: f64,
    /// Include the spacing across the branch cut of circular spectra.
    #[arg(long)]
    cyclic: bool,
    /// Also report the fitted index of every realization.
    #[arg(long)]
    per_realization: bool,
    /// Output path; JSON goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl RunArgs {
    fn config(&self, source: Source) -> ExperimentConfig {
        ExperimentConfig {
            source,
            realizations: self.realizations,
            k_list: self.k.clone(),
            mode: self.mode,
            master_seed: self.seed,
            fit_grid: FitGrid {
                lo: self.fit_lo,
                hi: self.fit_hi,
                step: self.fit_step,
            },
            trim: self.trim,
            histogram: HistogramSpec {
                bins: self.bins,
                lo: self.hist_lo,
                hi: self.hist_hi,
            },
            cyclic: self.cyclic,
            assumed_beta: None,
            per_realization_fits: self.per_realization,
        }
    }
}

fn ensemble_source(e: Ensemble, dim: usize) -> Source {
    use DysonIndex::*;
    match e {
        Ensemble::Goe => Source::Gaussian { beta: Orthogonal, dim },
        Ensemble::Gue => Source::Gaussian { beta: Unitary, dim },
        Ensemble::Gse => Source::Gaussian { beta: Symplectic, dim },
        Ensemble::Coe => Source::Circular { beta: Orthogonal, dim },
        Ensemble::Cue => Source::Circular { beta: Unitary, dim },
        Ensemble::Cse => Source::Circular { beta: Symplectic, dim },
    }
}

fn model_config(model: &Model) -> (ExperimentConfig, &RunArgs) {
    match model {
        Model::DefectXxz {
            sites,
            omega,
            eps_d,
            defect_site,
            j_xy,
            j_z,
            n_up,
            basis_cap,
            run,
        } => {
            let base = DefectXxzParams::with_sites(*sites);
            let p = DefectXxzParams {
                omega: *omega,
                eps_d: *eps_d,
                defect_site: defect_site.unwrap_or(base.defect_site),
                j_xy: *j_xy,
                j_z: *j_z,
                n_up: n_up.unwrap_or(base.n_up),
                basis_cap: *basis_cap,
                ..base
            };
            (run.config(Source::DefectXxz(p)), run)
        }
        Model::ChiralChain {
            sites,
            j1,
            j2,
            h,
            n_up,
            basis_cap,
            run,
        } => {
            let base = ChiralChainParams::with_sites(*sites);
            let p = ChiralChainParams {
                j1: *j1,
                j2: *j2,
                h: *h,
                n_up: n_up.unwrap_or(base.n_up),
                basis_cap: *basis_cap,
                ..base
            };
            (run.config(Source::ChiralChain(p)), run)
        }
        Model::KickedTop {
            j,
            p,
            q,
            no_parity_split,
            run,
        } => {
            let params = KickedTopParams {
                j: *j,
                p: *p,
                q: *q,
                parity_split: !no_parity_split,
            };
            (run.config(Source::KickedTop(params)), run)
        }
        Model::IntermediateMap { n, gamma, run } => {
            let base = IntermediateMapParams::default();
            let p = IntermediateMapParams {
                n: *n,
                gamma: gamma.unwrap_or(base.gamma),
                phase_seed: StreamId::new(run.seed, 0),
            };
            (run.config(Source::IntermediateMap(p)), run)
        }
    }
}

fn emit_report(cfg: &ExperimentConfig, run: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    let report = run_experiment(cfg)?;
    match (&run.out, run.format) {
        (Some(path), Format::Json) => {
            write_report(&report, ReportFormat::Json, path)?;
        }
        (Some(path), Format::Csv) => {
            for written in write_report(&report, ReportFormat::Csv, path)? {
                writeln!(stdout, "{}", written.display()).map_err(|e| Error::io("<stdout>", e))?;
            }
        }
        (None, Format::Json) => {
            let text = to_json_string(&report)?;
            stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))?;
        }
        (None, Format::Csv) => {
            return Err(Error::InvalidParameter("csv output needs --out".into()));
        }
    }
    Ok(())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Sample { ensemble, dim, run } => {
            emit_report(&run.config(ensemble_source(ensemble, dim)), &run, stdout)
        }
        Command::Model { model } => {
            let (cfg, run) = model_config(&model);
            emit_report(&cfg, run, stdout)
        }
        Command::Ingest {
            file,
            assume_beta,
            run,
        } => {
            let mut cfg = run.config(Source::File { path: file });
            cfg.assumed_beta = assume_beta.map(DysonIndex::try_from).transpose()?;
            emit_report(&cfg, &run, stdout)
        }
        Command::FiniteSize {
            ensemble,
            dims,
            run,
        } => {
            let cfg = run.config(ensemble_source(ensemble, dims[0]));
            cfg.validate()?;
            let scan = finite_size_scan(&cfg, &dims)?;
            let text = to_json_string(&scan)?;
            match &run.out {
                Some(path) => write_atomic(path, &text),
                None => stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Error::io("<stdout>", e)),
            }
        }
        Command::Predict { beta, k } => {
            if beta == 0 || k.contains(&0) {
                return Err(Error::InvalidParameter("beta and k must be positive".into()));
            }
            for k in k {
                writeln!(stdout, "{}", predicted_beta_prime(beta, k))
                    .map_err(|e| Error::io("<stdout>", e))?;
            }
            Ok(())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
