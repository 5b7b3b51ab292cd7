use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::Value;

use gkbound::bell::{invert, Backend};
use gkbound::ccp::{bound, catalog, h_series, invert_float, DEFAULT_ORDER};
use gkbound::matgt::{
    format_complex, format_real, norm_inf1_complex_estimate, norm_inf1_real, parse_matrix, wht, wht_complex,
    wht_entry, AnyMatrix,
};
use gkbound::scalar::Scalar;
use gkbound::series::TruncatedSeries;
use gkbound::verify::{run_suite, Suite};
use gkbound::{Error, Result};

const MIN_VERIFY_SAMPLES: u64 = 1000;

#[derive(Parser)]
#[command(name = "gkbound", version, about = "Grothendieck-constant upper bounds from CCP series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Series,
    Mc,
    Matrix,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Upper bound from a catalog function.
    Bound {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value = "bell")]
        backend: Backend,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Revert a series read from a JSON or CSV file.
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the order of the input series.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value = "bell")]
        backend: Backend,
        /// Read and revert the coefficients as exact rationals.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Walsh–Hadamard matrix or a single entry (1-based indices).
    Wht {
        #[arg(long)]
        m: u32,
        #[arg(long, num_args = 2, value_names = ["NU", "MU"])]
        entry: Option<Vec<usize>>,
        #[arg(long)]
        complex: bool,
    },
    /// ‖A‖∞,1 of a matrix file; exact for real input, an estimate for complex input.
    Norm {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Run a self-check suite and print a JSON summary.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// CSV of h, the partial abs-inverse and ψ^hyp on a grid over [0, r].
    Curve {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value = "bell")]
        backend: Backend,
    },
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("GKBOUND_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Bound { function, order, backend, format } => {
            let report = bound(&function, order, backend)?;
            match format {
                Format::Json => println!("{}", to_pretty(&report)?),
                Format::Csv => {
                    println!("name,order,backend,route,c_star,bound,abs_inverse_at_r,tail_indicator");
                    let route = serde_json::to_value(report.route).map_err(json_err)?;
                    println!(
                        "{},{},{},{},{},{},{},{}",
                        report.name,
                        report.order,
                        report.backend,
                        route.as_str().unwrap_or_default(),
                        report.c_star,
                        report.bound,
                        report.abs_inverse_at_r,
                        report.tail_indicator
                    );
                }
            }
        }
        Command::Invert { input, order, backend, exact, out, format } => {
            let text = read(&input)?;
            let rendered = if exact {
                revert_file::<BigRational>(&text, order, backend, format)?
            } else {
                revert_file::<f64>(&text, order, backend, format)?
            };
            match out {
                Some(path) => fs::write(&path, rendered)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => print!("{rendered}"),
            }
        }
        Command::Wht { m, entry, complex } => match entry {
            Some(idx) => println!("{}", wht_entry(m, idx[0], idx[1])?),
            None if complex => print!("{}", format_complex(&wht_complex(m)?)),
            None => print!("{}", format_real(&wht(m)?)),
        },
        Command::Norm { matrix, grid } => {
            let out = match parse_matrix(&read(&matrix)?)? {
                AnyMatrix::Real(a) => to_pretty(&norm_inf1_real(&a)?)?,
                AnyMatrix::Complex(a) => to_pretty(&norm_inf1_complex_estimate(&a, grid)?)?,
            };
            println!("{out}");
        }
        Command::Verify { suite, seed, samples } => {
            if samples < MIN_VERIFY_SAMPLES {
                return Err(Error::DomainError(format!("--samples must be at least {MIN_VERIFY_SAMPLES}")));
            }
            let suite = match suite {
                SuiteArg::Series => Suite::Series,
                SuiteArg::Mc => Suite::Mc,
                SuiteArg::Matrix => Suite::Matrix,
                SuiteArg::All => Suite::All,
            };
            let report = run_suite(suite, seed, samples)?;
            println!("{}", to_pretty(&report)?);
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Curve { function, order, grid, backend } => print!("{}", curve(&function, order, grid, backend)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn to_pretty<S: serde::Serialize>(value: &S) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(json_err)
}

fn revert_file<T: Scalar>(text: &str, order: Option<usize>, backend: Backend, format: Format) -> Result<String> {
    let series: TruncatedSeries<T> = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(json_err)?;
        TruncatedSeries::from_json(&v)?
    } else {
        TruncatedSeries::from_csv(text)?
    };
    let order = order.unwrap_or(series.order());
    let inverse = invert(&series, order, backend)?;
    Ok(match format {
        Format::Json => format!("{}\n", to_pretty(&inverse.to_json())?),
        Format::Csv => inverse.to_csv(),
    })
}

fn curve(function: &str, order: usize, grid: usize, backend: Backend) -> Result<String> {
    if grid < 2 {
        return Err(Error::DomainError("--grid needs at least 2 points".into()));
    }
    let d = catalog(function)?;
    let h = h_series(&d, order)?;
    let abs_inv = invert_float(&h, order, backend)?.abs_transform();
    let psi_hyp = invert_float(&abs_inv, order, backend)?;
    let r = d.l2_norm_sq;
    let mut out = String::from("rho,h,abs_inverse,psi_hyp\n");
    for i in 0..grid {
        let rho = r * i as f64 / (grid - 1) as f64;
        out.push_str(&format!("{rho},{},{},{}\n", h.eval(&rho), abs_inv.eval(&rho), psi_hyp.eval(&rho)));
    }
    Ok(out)
}
