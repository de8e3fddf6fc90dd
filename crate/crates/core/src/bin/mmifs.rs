use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmifs::experiment::{self, CommandError, OUTPUT_DIR_ENV};
use mmifs::metrics::{self, Front};

#[derive(Parser)]
#[command(name = "mmifs", version, about = "Multi-objective interaction-aware feature selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (dataset, algorithm, run) job of an experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Concurrent jobs; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        /// Output root; overrides the config's output_dir.
        #[arg(long, env = OUTPUT_DIR_ENV)]
        output_dir: Option<PathBuf>,
    },
    /// C-metric, hypervolume and significance tables from run manifests.
    Compare {
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
        /// Write CSV files here instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot-ready front CSV per run record.
    FrontExport {
        #[arg(required = true)]
        records: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stand-alone front metrics and significance tests.
    Metrics {
        #[command(subcommand)]
        command: MetricsCommand,
    },
}

#[derive(Subcommand)]
enum MetricsCommand {
    /// Hypervolume per front and pairwise C-metric between fronts.
    Fronts {
        /// Front files: `.csv` (n_selected,error_pct), archive `.json`, or run record `.json`.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Feature count of the dataset; required for CSV fronts.
        #[arg(long)]
        n_features: Option<usize>,
    },
    /// Exact two-sided Wilcoxon signed-rank test on paired differences.
    Wilcoxon {
        #[arg(required = true, allow_negative_numbers = true, value_delimiter = ',')]
        diffs: Vec<f64>,
    },
    /// Friedman test; CSV with a `method` column and one score column per
    /// dataset, higher is better.
    Friedman { scores: PathBuf },
}

fn print_section(title: &str, body: &str) {
    println!("# {title}");
    print!("{body}");
    println!();
}

fn run_metrics(cmd: MetricsCommand) -> Result<(), CommandError> {
    let usage = |e: mmifs::Error| CommandError::Usage(e.to_string());
    match cmd {
        MetricsCommand::Fronts { files, n_features } => {
            let fronts: Vec<(String, Front)> = files
                .iter()
                .map(|p| Ok((p.display().to_string(), experiment::load_front(p, n_features).map_err(usage)?)))
                .collect::<Result<_, CommandError>>()?;
            let mut hv = csv::Writer::from_writer(Vec::new());
            hv.write_record(["front", "points", "hypervolume"]).ok();
            for (name, f) in &fronts {
                let v = metrics::hypervolume(f).map_err(usage)?;
                hv.write_record([name.clone(), f.points.len().to_string(), v.to_string()]).ok();
            }
            let mut cm = csv::Writer::from_writer(Vec::new());
            cm.write_record(["front_a", "front_b", "c_metric"]).ok();
            for (a, fa) in &fronts {
                for (b, fb) in &fronts {
                    let c = metrics::c_metric(fa, fb).map_err(usage)?;
                    cm.write_record([a.clone(), b.clone(), c.to_string()]).ok();
                }
            }
            print_section("hypervolume", &String::from_utf8_lossy(&hv.into_inner().unwrap_or_default()));
            print_section("c_metric", &String::from_utf8_lossy(&cm.into_inner().unwrap_or_default()));
        }
        MetricsCommand::Wilcoxon { diffs } => {
            let r = metrics::wilcoxon_exact(&diffs).map_err(usage)?;
            println!("n,w_plus,w_minus,statistic,p_value");
            println!("{},{},{},{},{}", r.n, r.w_plus, r.w_minus, r.statistic, r.p_value);
        }
        MetricsCommand::Friedman { scores } => {
            let (names, rows) = read_score_table(&scores).map_err(usage)?;
            let r = metrics::friedman(&rows).map_err(usage)?;
            println!("statistic,p_value");
            println!("{},{}", r.statistic, r.p_value);
            println!();
            println!("method,mean_rank");
            for (n, m) in names.iter().zip(&r.mean_ranks) {
                println!("{n},{m}");
            }
        }
    }
    Ok(())
}

fn read_score_table(path: &Path) -> mmifs::Result<(Vec<String>, Vec<Vec<f64>>)> {
    let csv_err = |source| mmifs::Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut names = Vec::new();
    let mut rows = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        names.push(rec.get(0).unwrap_or("").to_string());
        let row = rec
            .iter()
            .skip(1)
            .map(|v| {
                v.trim().parse::<f64>().map_err(|_| mmifs::Error::BadCell {
                    path: path.to_path_buf(),
                    row: r + 1,
                    column: String::new(),
                    value: v.to_string(),
                })
            })
            .collect::<mmifs::Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((names, rows))
}

fn dispatch(cli: Cli) -> Result<(), CommandError> {
    match cli.command {
        Command::Run {
            config,
            workers,
            output_dir,
        } => {
            let manifest = experiment::cmd_run(&config, workers, output_dir)?;
            println!("{}", manifest.display());
        }
        Command::Compare { manifests, out } => {
            let report = experiment::compare(&manifests)?;
            match out {
                Some(dir) => {
                    for p in report.write_to(&dir).map_err(|e| CommandError::Runtime(e.to_string()))? {
                        println!("{}", p.display());
                    }
                }
                None => {
                    print_section("c_metric", &report.c_metric_csv());
                    print_section("hypervolume", &report.hypervolume_csv());
                    print_section("wilcoxon", &report.wilcoxon_csv());
                    print_section("friedman", &report.friedman_csv());
                }
            }
        }
        Command::FrontExport { records, out } => {
            for p in experiment::cmd_front_export(&records, out.as_deref())? {
                println!("{}", p.display());
            }
        }
        Command::Metrics { command } => run_metrics(command)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
