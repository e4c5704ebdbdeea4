use clap::{Parser, Subcommand};
use rug::Rational;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use zerolocus::io::{run_command, Command, RunConfig};
use zerolocus::Scalar;

#[derive(Parser)]
#[command(name = "zerolocus", version, about = "Local zero loci of normal functions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u32,
    /// Reject unknown fields in germ documents.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    strict: bool,
    /// Write the result document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Omit wall-clock timing from the result document.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(clap::Args)]
struct Input {
    /// Germ document; `-` or absent reads stdin.
    path: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the germ and report MHS, polarization and admissibility data.
    Validate(Input),
    /// Deligne bigrading of the base (or limit) structure.
    Bigrading(Input),
    /// Grading and extension class at a point.
    GradingAt {
        #[command(flatten)]
        input: Input,
        /// `s` for interior germs, `z` for puncture germs, e.g. `1/10` or `1/4+1/3*i`.
        #[arg(long)]
        point: String,
    },
    /// Zero locus on a disk.
    ZeroLocus {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        radius: Option<String>,
        /// Also run the numerical grid scan.
        #[arg(long)]
        scan: bool,
        #[arg(long, default_value_t = 41)]
        scan_resolution: usize,
    },
    /// Limit of the grading along a vertical ray.
    LimitGrading {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ray: Ray,
    },
    /// Classification of the zero locus near the puncture.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        radius: Option<String>,
        #[command(flatten)]
        ray: Ray,
    },
    /// CSV trace of the grading along a ray.
    SampleRay {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        ray: Ray,
    },
    /// Names of the built-in corpus germs.
    CorpusList,
}

#[derive(clap::Args)]
struct Ray {
    #[arg(long, default_value_t = 0.0)]
    ray_x: f64,
    #[arg(long, default_value_t = 4.0)]
    schedule_start: f64,
    #[arg(long, default_value_t = 6)]
    schedule_order: usize,
}

fn read_input(input: Option<&Input>) -> std::io::Result<Vec<u8>> {
    match input.and_then(|i| i.path.as_ref()) {
        Some(p) if p.as_os_str() != "-" => std::fs::read(p),
        _ if input.is_none() => Ok(Vec::new()),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn parse_radius(r: &Option<String>) -> Result<Option<Rational>, String> {
    r.as_ref()
        .map(|s| {
            let x: Scalar = s.parse().map_err(|e| format!("--radius: {e}"))?;
            if !x.is_real() {
                return Err("--radius must be real".to_string());
            }
            Ok(x.re().clone())
        })
        .transpose()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = RunConfig {
        precision: cli.precision_bits,
        timing: !cli.no_timing,
        ..RunConfig::default()
    };
    let set_ray = |config: &mut RunConfig, ray: &Ray| {
        config.ray_x = ray.ray_x;
        config.schedule_start = ray.schedule_start;
        config.schedule_order = ray.schedule_order;
    };
    let (command, input) = match &cli.command {
        Cmd::Validate(i) => (Command::Validate, Some(i)),
        Cmd::Bigrading(i) => (Command::Bigrading, Some(i)),
        Cmd::GradingAt { input, point } => {
            match point.parse::<Scalar>() {
                Ok(p) => config.point = Some(p),
                Err(e) => {
                    eprintln!("--point: {e}");
                    return ExitCode::from(1);
                }
            }
            (Command::GradingAt, Some(input))
        }
        Cmd::ZeroLocus { input, radius, scan, scan_resolution } => {
            match parse_radius(radius) {
                Ok(r) => config.radius = r,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(1);
                }
            }
            config.scan = *scan;
            config.scan_resolution = *scan_resolution;
            (Command::ZeroLocus, Some(input))
        }
        Cmd::LimitGrading { input, ray } => {
            set_ray(&mut config, ray);
            (Command::LimitGrading, Some(input))
        }
        Cmd::Classify { input, radius, ray } => {
            match parse_radius(radius) {
                Ok(r) => config.radius = r,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(1);
                }
            }
            set_ray(&mut config, ray);
            (Command::Classify, Some(input))
        }
        Cmd::SampleRay { input, ray } => {
            set_ray(&mut config, ray);
            (Command::SampleRay, Some(input))
        }
        Cmd::CorpusList => (Command::CorpusList, None),
    };
    let bytes = match read_input(input) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("cannot read input: {e}");
            return ExitCode::from(1);
        }
    };
    let doc = run_command(command, &bytes, cli.strict, &config);
    let text = if command == Command::SampleRay && doc.exit_code == 0 {
        doc.outcome["csv"].as_str().unwrap_or_default().to_string()
    } else {
        doc.to_json()
    };
    match &cli.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = &doc.error {
        eprintln!("{}: {}", err.kind, err.message);
    }
    ExitCode::from(doc.exit_code as u8)
}
