use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tagc::metrics::MetricSelection;
use tagc::{enhance, fit_niqe_model, load_image, niqe_score, save_image, Config, Image, NiqeConfig, NiqeModel, QualityScores};
use tagc_harness::{
    export_histogram, load_manifest, render_report, render_summary, run_eval, EvalMethod, HarnessError, ReportFormat,
};

#[derive(Parser)]
#[command(name = "tagc", version, about = "Low-light enhancement with tuned adaptive gamma correction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enhance one image.
    Enhance {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        gamma_c: f64,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Print the luminance factor, average color and gamma.
        #[arg(long)]
        dump_analysis: bool,
    },
    /// Full-reference metrics between two images (all three if none is chosen).
    Metrics {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        psnr: bool,
        #[arg(long)]
        ssim: bool,
        #[arg(long)]
        fsim: bool,
    },
    /// NIQE score of an image.
    Niqe {
        #[arg(long)]
        model: PathBuf,
        image: PathBuf,
    },
    /// Fit a NIQE model from a folder of pristine photos.
    NiqeFit {
        #[arg(long)]
        pristine_dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 96)]
        patch_size: usize,
    },
    /// Evaluate one or more dataset manifests.
    Eval {
        #[arg(long, required = true)]
        manifest: Vec<PathBuf>,
        /// Write enhanced images and the report here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 5.0)]
        gamma_c: f64,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Score plain gamma correction with this constant gamma instead of TAGC.
        #[arg(long)]
        fixed_gamma: Option<f64>,
    },
    /// Grayscale intensity histogram as CSV.
    Histogram {
        image: PathBuf,
        #[arg(long, default_value_t = 256)]
        bins: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Markdown,
}

enum Failure {
    Usage(String),
    Run(HarnessError),
}

impl<E: Into<HarnessError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Run(e.into())
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error[usage]: {}", one_line(&msg));
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error[{}]: {}", e.kind(), one_line(&e.to_string()));
            ExitCode::from(1)
        }
    }
}

fn require_file(path: &Path) -> Result<(), Failure> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("no such file: {}", path.display())))
    }
}

fn config(gamma_c: f64, amplitude: f64) -> Result<Config, Failure> {
    Config::new(gamma_c, amplitude).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Enhance { input, output, gamma_c, amplitude, dump_analysis } => {
            require_file(&input)?;
            let cfg = config(gamma_c, amplitude)?;
            let img: Image = load_image(&input)?;
            let (out, a) = enhance(&img, &cfg)?;
            save_image(&out, &output)?;
            if dump_analysis {
                println!(
                    "luminance={:.6} avg_color={:.6} gamma={:.6}",
                    a.luminance, a.avg_color, a.gamma
                );
            }
        }
        Command::Metrics { reference, test, psnr, ssim, fsim } => {
            require_file(&reference)?;
            require_file(&test)?;
            let which = if psnr || ssim || fsim {
                MetricSelection { psnr, ssim, fsim }
            } else {
                MetricSelection::ALL
            };
            let a: Image = load_image(&reference)?;
            let b: Image = load_image(&test)?;
            let scores = QualityScores::compute(&a, &b, which)?;
            for (name, value) in [("psnr", scores.psnr), ("ssim", scores.ssim), ("fsim", scores.fsim)] {
                if let Some(v) = value {
                    println!("{name}={}", tagc_harness::format_value(v));
                }
            }
        }
        Command::Niqe { model, image } => {
            require_file(&model)?;
            require_file(&image)?;
            let model = NiqeModel::load(&model)?;
            let img: Image = load_image(&image)?;
            println!("niqe={}", tagc_harness::format_value(niqe_score(&img, &model)?));
        }
        Command::NiqeFit { pristine_dir, out, patch_size } => {
            if !pristine_dir.is_dir() {
                return Err(Failure::Usage(format!("no such directory: {}", pristine_dir.display())));
            }
            let cfg = NiqeConfig { patch_size, ..NiqeConfig::default() };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let model = fit_niqe_model(&pristine_dir, &cfg)?;
            model.save(&out)?;
            println!("model={}", out.display());
        }
        Command::Eval { manifest, out_dir, format, gamma_c, amplitude, fixed_gamma } => {
            for m in &manifest {
                require_file(m)?;
            }
            let method = match fixed_gamma {
                Some(g) if g > 0.0 && g.is_finite() => EvalMethod::FixedGamma(g),
                Some(g) => return Err(Failure::Usage(format!("fixed gamma must be positive, got {g}"))),
                None => EvalMethod::Tagc(config(gamma_c, amplitude)?),
            };
            let format = match format {
                Format::Csv => ReportFormat::Csv,
                Format::Markdown => ReportFormat::Markdown,
            };
            let manifests = manifest.iter().map(load_manifest).collect::<Result<Vec<_>, _>>()?;
            let mut text = String::new();
            let mut reports = Vec::new();
            for m in &manifests {
                let images = out_dir.as_ref().map(|d| {
                    if manifests.len() > 1 { d.join(sanitize(&m.name)) } else { d.clone() }
                });
                let report = run_eval(m, &method, images.as_deref())?;
                for row in report.failures() {
                    eprintln!("warning: {}: {}", row.image, one_line(row.error.as_deref().unwrap_or_default()));
                }
                if !text.is_empty() {
                    text.push('\n');
                }
                text.push_str(&render_report(&report, format));
                reports.push(report);
            }
            if reports.len() > 1 {
                text.push('\n');
                text.push_str(&render_summary(&reports, format));
            }
            if let Some(dir) = &out_dir {
                let name = match format {
                    ReportFormat::Csv => "report.csv",
                    ReportFormat::Markdown => "report.md",
                };
                let path = dir.join(name);
                std::fs::create_dir_all(dir)
                    .and_then(|_| std::fs::write(&path, &text))
                    .map_err(|source| HarnessError::Write { path, source })?;
            }
            print!("{text}");
        }
        Command::Histogram { image, bins } => {
            require_file(&image)?;
            if bins < 2 {
                return Err(Failure::Usage(format!("--bins must be at least 2, got {bins}")));
            }
            let img: Image = load_image(&image)?;
            print!("{}", export_histogram(&img, bins)?);
        }
    }
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}
