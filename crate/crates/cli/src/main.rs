use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dcwsn::experiments::{ExperimentConfig, Fix, RadiusKind, Scenario, SchemeChoice};
use dcwsn::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "dcwsn",
    version,
    about = "Connectivity, routing and power of duty-cycled sensor networks"
)]
struct Cli {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Repetitions per configuration.
    #[arg(long, global = true)]
    reps: Option<usize>,

    /// CSV destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Use the large network sizes.
    #[arg(long, global = true)]
    full: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a deployment and its schedules.
    Gen(GenArgs),
    /// Connection probability of the schedule schemes.
    Gamma(GammaArgs),
    /// Connectivity radii and their ratios.
    Radius(ExpArgs),
    /// Both radius-ratio tables against the published values.
    Tables,
    /// Component statistics over n and δ.
    Sweep(ExpArgs),
    /// Component statistics over the c(n) presets.
    CnSweep(ExpArgs),
    /// Greedy routing, one row per run.
    Route(RouteArgs),
    /// Energy of each routing run.
    Power(RouteArgs),
    /// Search for a deterministic schedule family.
    Detsched(DetschedArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Sensors besides the origin.
    #[arg(long, default_value_t = 1000)]
    n: usize,

    /// rgg, dc-c or dc-r.
    #[arg(long, default_value = "dc-c", value_parser = parse_scheme)]
    scheme: SchemeChoice,

    /// Slots per cycle.
    #[arg(long, short = 'L', default_value_t = 100)]
    slots: usize,

    /// Awake slots per cycle.
    #[arg(long, short = 'd', default_value_t = 5)]
    awake: usize,
}

#[derive(Args, Debug)]
struct GammaArgs {
    #[arg(long, short = 'L', default_value_t = 100)]
    slots: usize,

    #[arg(long, short = 'd', default_value_t = 5)]
    awake: usize,

    /// Monte Carlo pairs per scheme.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,

    /// Key pool size; adds a key-predistribution row together with `--ring`.
    #[arg(long, requires = "ring")]
    pool: Option<usize>,

    /// Keys per sensor.
    #[arg(long, requires = "pool")]
    ring: Option<usize>,
}

/// Overrides on top of an optional TOML config.
#[derive(Args, Debug, Default)]
struct ExpArgs {
    /// TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<SchemeChoice>,

    /// rgg, weak or optimal.
    #[arg(long, value_parser = parse_radius)]
    radius: Option<RadiusKind>,

    /// Network sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,

    /// Duty cycles, comma separated.
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,

    /// Hold `L` or `d` fixed while δ varies.
    #[arg(long, value_parser = parse_fix)]
    fix: Option<Fix>,

    #[arg(long, short = 'L')]
    slots: Option<usize>,

    #[arg(long, short = 'd')]
    awake: Option<usize>,

    /// c(n) preset, e.g. `loglog` or `const:1`.
    #[arg(long)]
    cn: Option<String>,

    /// c(n) presets for `cn-sweep`, comma separated.
    #[arg(long, value_delimiter = ',')]
    cn_list: Vec<String>,
}

#[derive(Args, Debug)]
struct RouteArgs {
    #[command(flatten)]
    exp: ExpArgs,

    /// Restrict to scenarios such as `dc-c/weak`; all five by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_scenario)]
    scenario: Vec<Scenario>,

    /// Relax factor of relaxed greedy.
    #[arg(long)]
    relax: Option<f64>,

    /// Routing timeout in cycles.
    #[arg(long)]
    max_cycles: Option<u64>,
}

#[derive(Args, Debug)]
struct DetschedArgs {
    #[arg(long, short = 'L', default_value_t = 600)]
    slots: usize,

    #[arg(long, short = 'd', default_value_t = 30)]
    awake: usize,

    /// Family size; ⌈2 ln L⌉ by default.
    #[arg(long)]
    k: Option<usize>,

    #[arg(long, default_value_t = 1000)]
    max_attempts: u64,

    /// Re-check a found family before printing it.
    #[arg(long)]
    verify: bool,
}

fn parse_scheme(s: &str) -> Result<SchemeChoice, String> {
    SchemeChoice::parse(s).map_err(|e| e.to_string())
}

fn parse_radius(s: &str) -> Result<RadiusKind, String> {
    RadiusKind::parse(s).map_err(|e| e.to_string())
}

fn parse_fix(s: &str) -> Result<Fix, String> {
    match s {
        "L" => Ok(Fix::Slots),
        "d" => Ok(Fix::Awake),
        _ => Err(format!("expected `L` or `d`, got `{s}`")),
    }
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    let (scheme, kind) = s
        .split_once('/')
        .ok_or_else(|| format!("expected scheme/radius, got `{s}`"))?;
    Scenario::from_parts(parse_scheme(scheme)?, parse_radius(kind)?).map_err(|e| e.to_string())
}

impl Cli {
    /// Config file plus command-line overrides, validated.
    fn config(&self, exp: &ExpArgs) -> dcwsn::Result<ExperimentConfig> {
        let mut cfg = match &exp.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = exp.scheme {
            cfg.scheme = s;
        }
        if let Some(r) = exp.radius {
            cfg.radius = r;
        }
        if !exp.n.is_empty() {
            cfg.n = exp.n.clone();
        }
        if !exp.delta.is_empty() {
            cfg.delta = exp.delta.clone();
        }
        if let Some(f) = exp.fix {
            cfg.fix = f;
        }
        if let Some(l) = exp.slots {
            cfg.slots = l;
        }
        if let Some(d) = exp.awake {
            cfg.awake = d;
        }
        if let Some(cn) = &exp.cn {
            cfg.cn = cn.clone();
        }
        if !exp.cn_list.is_empty() {
            cfg.cn_list = exp.cn_list.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(reps) = self.reps {
            cfg.repetitions = reps;
        }
        if self.full {
            cfg.full = true;
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }
}

fn open_output(path: Option<&Path>) -> dcwsn::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> dcwsn::Result<()> {
    match &cli.command {
        Command::Gen(a) => commands::gen(a, cli.seed(), open_output(cli.out.as_deref())?),
        Command::Gamma(a) => commands::gamma(a, cli.seed(), open_output(cli.out.as_deref())?),
        Command::Radius(a) => {
            let cfg = cli.config(a)?;
            commands::radius(&cfg, open_output(cfg.output.as_deref())?)
        }
        Command::Tables => commands::tables(open_output(cli.out.as_deref())?),
        Command::Sweep(a) => {
            let cfg = cli.config(a)?;
            commands::sweep(&cfg, false, open_output(cfg.output.as_deref())?)
        }
        Command::CnSweep(a) => {
            let cfg = cli.config(a)?;
            commands::sweep(&cfg, true, open_output(cfg.output.as_deref())?)
        }
        Command::Route(a) | Command::Power(a) => {
            let mut cfg = cli.config(&a.exp)?;
            if let Some(f) = a.relax {
                cfg.relax = f;
            }
            if let Some(c) = a.max_cycles {
                cfg.max_cycles = c;
            }
            cfg.validate()?;
            let power = matches!(cli.command, Command::Power(_));
            commands::route(
                &cfg,
                &a.scenario,
                power,
                open_output(cfg.output.as_deref())?,
            )
        }
        Command::Detsched(a) => commands::detsched(a, cli.seed(), open_output(cli.out.as_deref())?),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 2,
        Error::Csv(c) if c.is_io_error() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dcwsn: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
