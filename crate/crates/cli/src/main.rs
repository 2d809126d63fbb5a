mod output;
mod svg;

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use asymdep::bootstrap::{bootstrap_rstar, ResampleMethod};
use asymdep::classical::{
    chi_square, fisher_z, hellinger_eta_from_b, pearson, ContingencyTable, VarianceMode,
};
use asymdep::classical::{default_bin_count, entropy_dependence};
use asymdep::gencorr::{dep_measure, gmc_matrix, rstar};
use asymdep::ingest::{load_csv, CsvOptions, Dataset};
use asymdep::taraldsen::{
    exact_interval, quantile_table, tarald_density, Tails, DEFAULT_GRID_STEP,
    TABLE1_CUM_PROBS, TABLE1_SAMPLE_SIZES,
};

use output::{sink, OutputFormat};

#[derive(Parser)]
#[command(
    name = "asymdep",
    about = "Asymmetric dependence measurement: generalized correlations, exact correlation inference, bootstrap",
    version
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, env = "ASYMDEP_FORMAT", default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV file
    #[arg(long)]
    input: PathBuf,

    /// Comma-separated column names (default: all numeric columns)
    #[arg(long, value_delimiter = ',')]
    cols: Vec<String>,

    /// Extra tokens to treat as missing values
    #[arg(long, value_delimiter = ',')]
    na: Vec<String>,
}

impl InputArgs {
    fn load(&self) -> asymdep::Result<Dataset> {
        let mut options = CsvOptions::default();
        let extra: HashSet<String> = self.na.iter().cloned().collect();
        options.na_tokens.extend(extra);
        load_csv(&self.input, &options)
    }

    fn pair(&self) -> Result<(Dataset, String, String), CliError> {
        if self.cols.len() != 2 {
            return Err(CliError::usage(format!(
                "expected exactly 2 columns via --cols, got {}",
                self.cols.len()
            )));
        }
        let ds = self.load()?;
        Ok((ds, self.cols[0].clone(), self.cols[1].clone()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TailsArg {
    /// Two-tail interval
    Two,
    /// All excluded mass in the left tail; interval extends to +1
    Left,
    /// All excluded mass in the right tail; interval extends to -1
    Right,
}

impl From<TailsArg> for Tails {
    fn from(t: TailsArg) -> Tails {
        match t {
            TailsArg::Two => Tails::Two,
            TailsArg::Left => Tails::LeftTail,
            TailsArg::Right => Tails::RightTail,
        }
    }
}

fn tails_name(t: Tails) -> &'static str {
    match t {
        Tails::Two => "two",
        Tails::LeftTail => "left",
        Tails::RightTail => "right",
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Maximum-entropy bootstrap (dependent data)
    Meboot,
    /// i.i.d. pairs bootstrap
    Iid,
}

#[derive(Subcommand)]
enum Command {
    /// Asymmetric matrix of generalized correlations r*(row|column)
    Depmatrix(InputArgs),

    /// Both directed generalized correlations of a column pair
    Rstar(InputArgs),

    /// Signed dependence measure (larger r* magnitude, covariance sign)
    Depmeas(InputArgs),

    /// Pearson correlation of a column pair
    Pearson(InputArgs),

    /// Fisher z-transform of a correlation with a two-tail normal p-value
    Fisherz {
        /// Observed correlation
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        /// Sample size
        #[arg(short)]
        n: usize,
        /// Use the classical 1/(n-3) variance instead of 1/n
        #[arg(long)]
        classical_variance: bool,
    },

    /// One-tail p-value from the exact correlation density
    Pvalue {
        /// Sample size
        #[arg(short)]
        n: usize,
        /// Null population correlation
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        rho: f64,
        /// Observed correlation
        #[arg(long, allow_hyphen_values = true)]
        obs: f64,
        /// Grid step over [-1, 1]
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
    },

    /// Quantiles of the exact correlation density at rho = 0
    Table1 {
        /// Custom comma-separated sample sizes
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Custom comma-separated cumulative probabilities
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
    },

    /// Confidence interval from the exact correlation density
    CiExact {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t = TailsArg::Two)]
        tails: TailsArg,
    },

    /// Bootstrap confidence interval for r*(col1|col2)
    CiBoot {
        #[command(flatten)]
        input: InputArgs,
        /// Number of bootstrap replications
        #[arg(short = 'J', long, default_value_t = 999)]
        replications: usize,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
        #[arg(long, value_enum, default_value_t = TailsArg::Two)]
        tails: TailsArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Meboot)]
        method: MethodArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },

    /// Exact density of a correlation coefficient as plot data
    DensityPlot {
        /// Sample size; repeat to overlay curves
        #[arg(short, action = clap::ArgAction::Append, required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
        grid_step: f64,
        /// Emit an SVG curve instead of (r, density) pairs
        #[arg(long)]
        svg: bool,
    },

    /// Chi-square independence test on a contingency table CSV
    Chisq {
        /// CSV of counts, no header
        #[arg(long)]
        input: PathBuf,
    },

    /// Proportional reduction in entropy of col1 from knowing col2
    Entropy {
        #[command(flatten)]
        input: InputArgs,
        /// Number of equal-width bins (default: ceil(sqrt(n)))
        #[arg(long)]
        bins: Option<usize>,
    },

    /// Hellinger correlation from a Bhattacharyya affinity
    HellingerEta {
        /// Affinity B in (0, 1]
        #[arg(short)]
        b: f64,
    },
}

/// Error with the exit status it maps to: 2 for usage problems, 1 for
/// domain/runtime failures.
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<asymdep::Error> for CliError {
    fn from(e: asymdep::Error) -> Self {
        Self {
            message: e.to_string(),
            code: 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            message: e.to_string(),
            code: 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("asymdep: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = sink(cli.output.as_deref())?;
    let fmt = cli.format;
    match cli.command {
        Command::Depmatrix(input) => {
            let ds = input.load()?;
            let names = if input.cols.is_empty() {
                ds.labels.clone()
            } else {
                input.cols.clone()
            };
            if names.len() < 2 {
                return Err(CliError::usage("depmatrix needs at least 2 columns"));
            }
            let columns = ds.complete_columns(&names)?;
            let m = gmc_matrix(&columns, &names)?;
            output::render_matrix(&mut out, fmt, &m)?;
        }
        Command::Rstar(input) => {
            let (ds, a, b) = input.pair()?;
            let p = ds.pairwise_complete(&a, &b)?;
            let pair = rstar(&p.x, &p.y)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({
                    format!("rstar({b}|{a})"): output::sig6(pair.r_star_y_given_x),
                    format!("rstar({a}|{b})"): output::sig6(pair.r_star_x_given_y),
                    "cov_sign": pair.cov_sign,
                    "n": p.x.len(),
                    "dropped_rows": p.dropped,
                }),
            )?;
        }
        Command::Depmeas(input) => {
            let (ds, a, b) = input.pair()?;
            let p = ds.pairwise_complete(&a, &b)?;
            let d = dep_measure(&p.x, &p.y)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({"depmeas": output::sig6(d), "pair": [a, b], "n": p.x.len()}),
            )?;
        }
        Command::Pearson(input) => {
            let (ds, a, b) = input.pair()?;
            let p = ds.pairwise_complete(&a, &b)?;
            let r = pearson(&p.x, &p.y)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({"pearson": output::sig6(r), "pair": [a, b], "n": p.x.len()}),
            )?;
        }
        Command::Fisherz {
            r,
            n,
            classical_variance,
        } => {
            let mode = if classical_variance {
                VarianceMode::OverNMinus3
            } else {
                VarianceMode::OverN
            };
            let (z, p) = fisher_z(r, n, mode)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({
                    "z": output::sig6(z),
                    "p_two_tail": output::sig6(p),
                    "variance": if classical_variance { "1/(n-3)" } else { "1/n" },
                    "n": n,
                }),
            )?;
        }
        Command::Pvalue {
            n,
            rho,
            obs,
            grid_step,
        } => {
            let p = asymdep::taraldsen::tarald_pvalue_with(
                n,
                rho,
                obs,
                asymdep::taraldsen::DensityOptions {
                    grid_step,
                    winsorize_gamma: false,
                },
            )?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({
                    "p_one_tail": output::sig6(p),
                    "tail": if obs < 0.0 { "left" } else { "right" },
                    "n": n,
                    "rho": rho,
                    "obs_r": obs,
                    "grid_step": grid_step,
                }),
            )?;
        }
        Command::Table1 { n, c } => {
            let ns = if n.is_empty() {
                TABLE1_SAMPLE_SIZES.to_vec()
            } else {
                n
            };
            let cs = if c.is_empty() { TABLE1_CUM_PROBS.to_vec() } else { c };
            if ns.iter().any(|&n| n < 3) {
                return Err(CliError::usage("sample sizes must be at least 3"));
            }
            if cs.iter().any(|&c| c <= 0.0 || c >= 1.0) {
                return Err(CliError::usage(
                    "cumulative probabilities must lie strictly between 0 and 1",
                ));
            }
            let table = quantile_table(&ns, &cs)?;
            output::render_table1(&mut out, fmt, &ns, &cs, &table)?;
        }
        Command::CiExact {
            n,
            rho,
            level,
            tails,
        } => {
            let ci = exact_interval(n, rho, level, tails.into())?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({
                    "lower": output::sig6(ci.lower),
                    "upper": output::sig6(ci.upper),
                    "level": level,
                    "tails": tails_name(ci.tails),
                    "n": n,
                    "rho": rho,
                }),
            )?;
        }
        Command::CiBoot {
            input,
            replications,
            level,
            tails,
            method,
            seed,
        } => {
            let (ds, a, b) = input.pair()?;
            let p = ds.pairwise_complete(&a, &b)?;
            let method = match method {
                MethodArg::Meboot => ResampleMethod::MaxEntropy,
                MethodArg::Iid => ResampleMethod::Iid,
            };
            let r = bootstrap_rstar(&p.x, &p.y, replications, level, tails.into(), method, seed)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({
                    "statistic": format!("rstar({a}|{b})"),
                    "estimate": output::sig6(r.estimate),
                    "lower": output::sig6(r.interval.lower),
                    "upper": output::sig6(r.interval.upper),
                    "level": level,
                    "tails": tails_name(r.interval.tails),
                    "p_value": output::sig6(r.p_value),
                    "replications": replications,
                    "seed": seed,
                    "method": match method {
                        ResampleMethod::MaxEntropy => "meboot",
                        ResampleMethod::Iid => "iid",
                    },
                }),
            )?;
        }
        Command::DensityPlot {
            n,
            rho,
            grid_step,
            svg,
        } => {
            let mut curves = Vec::new();
            for &ni in &n {
                curves.push((ni, tarald_density(ni, rho, grid_step)?));
            }
            if svg {
                svg::render_density_svg(&mut out, &curves, rho)?;
            } else {
                output::render_density_csv(&mut out, fmt, &curves)?;
            }
        }
        Command::Chisq { input } => {
            let data = std::fs::read_to_string(&input)?;
            let mut counts = Vec::new();
            for (i, line) in data.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let row: Result<Vec<f64>, _> =
                    line.split(',').map(|c| c.trim().parse::<f64>()).collect();
                let row = row.map_err(|_| {
                    CliError::usage(format!("non-numeric count on line {}", i + 1))
                })?;
                counts.push(row);
            }
            let t = ContingencyTable::new(counts)?;
            let (stat, df) = chi_square(&t)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({"chi_square": output::sig6(stat), "df": df, "grand_total": t.grand_total}),
            )?;
        }
        Command::Entropy { input, bins } => {
            let (ds, a, b) = input.pair()?;
            let p = ds.pairwise_complete(&a, &b)?;
            let bins = bins.unwrap_or_else(|| default_bin_count(p.x.len()));
            // D(col2; col1): reduction in entropy of col1 from knowing col2
            let d = entropy_dependence(&p.y, &p.x, bins)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({"entropy_dependence": output::sig6(d), "response": a, "conditioning": b, "bins": bins}),
            )?;
        }
        Command::HellingerEta { b } => {
            let eta = hellinger_eta_from_b(b)?;
            output::render_json_or_kv(
                &mut out,
                fmt,
                json!({"eta": output::sig6(eta), "affinity": b}),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
