//! `lpadm`: decide L^p-admissibility of control operators from the command line.

// `!(x > 0.0)` style checks are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use lpadm_core::embedding::{default_family, embedding_lower_bound};
use lpadm_core::model::catalog::{listings, lookup};
use lpadm_core::model::{load_system, CatalogParams};
use lpadm_core::oracle::{constant_growth_profile, dyadic_times, ProfileClass};
use lpadm_core::{build_measure, Admissible, AnalysisConfig, Analyzer, Error, SystemDescriptor};

use output::{Format, Output};

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "LPADM_OUT_DIR";
const DEFAULT_ORACLE_K_MAX: usize = 100_000;

#[derive(Parser)]
#[command(
    name = "lpadm",
    version,
    about = "L^p-admissibility analyzer for diagonal, multiplication and normal semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fused verdict at one exponent, with the evidence table
    Analyze {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        p: f64,
        /// Attach the simulated constant profile as advisory evidence
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bisect for the critical exponent
    Threshold {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value_t = 1.05)]
        p_min: f64,
        #[arg(long, default_value_t = 8.0)]
        p_max: f64,
        #[arg(long, default_value_t = 0.02)]
        resolution: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulated admissibility constants over dyadic horizons 1, 2, 4, ..., t_max
    Oracle {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1024.0)]
        t_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Builtin systems and their known thresholds
    Catalog {
        /// Show one entry
        #[arg(long, visible_alias = "system")]
        name: Option<String>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p0: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Laplace embedding ratios over the exponential test family
    Embed {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SystemArgs {
    /// Catalog name or path to a .toml/.json system file
    #[arg(value_name = "SYSTEM")]
    positional: Option<String>,
    #[arg(long = "system", visible_alias = "name", conflicts_with = "positional")]
    flag: Option<String>,
    /// Dimension for laplacian-Rn
    #[arg(long)]
    n: Option<u32>,
    /// Tuning exponent for the counterexample sequences
    #[arg(long)]
    p0: Option<f64>,
    /// Atoms materialized from infinite families
    #[arg(long)]
    k_max: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory for csv/svg artifacts [default: $LPADM_OUT_DIR or lpadm-out]
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "text")]
    format: Vec<Format>,
}

impl SystemArgs {
    fn resolve(&self) -> anyhow::Result<SystemDescriptor> {
        let Some(source) = self.positional.as_ref().or(self.flag.as_ref()) else {
            bail!("no system given: pass a catalog name or a system file");
        };
        if let Some(n) = self.n {
            if n == 0 {
                bail!("--n must be positive");
            }
        }
        if let Some(p0) = self.p0 {
            if !(p0 > 1.0 && p0.is_finite()) {
                bail!("--p0 must be a finite number above 1");
            }
        }
        let path = PathBuf::from(source);
        if path.is_file() {
            return load_system(&path).with_context(|| format!("loading {}", path.display()));
        }
        Ok(lookup(
            source,
            CatalogParams {
                n: self.n,
                p0: self.p0,
            },
        )?)
    }

    fn config(&self) -> anyhow::Result<AnalysisConfig> {
        let mut config = AnalysisConfig::default();
        if let Some(k) = self.k_max {
            if k == 0 {
                bail!("--k-max must be positive");
            }
            config.measure.k_max = k;
        }
        Ok(config)
    }
}

impl OutputArgs {
    fn open(&self) -> Output {
        let dir = self
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("lpadm-out"));
        Output::new(dir, &self.format)
    }
}

fn check_p(p: f64) -> anyhow::Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        bail!("p must satisfy 1 < p < inf, got {p}");
    }
    Ok(())
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
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Analyze {
            system,
            p,
            oracle,
            output,
        } => cmd_analyze(&system, p, oracle, &output),
        Command::Threshold {
            system,
            p_min,
            p_max,
            resolution,
            output,
        } => cmd_threshold(&system, p_min, p_max, resolution, &output),
        Command::Oracle {
            system,
            p,
            t_max,
            output,
        } => cmd_oracle(&system, p, t_max, &output),
        Command::Catalog {
            name,
            n,
            p0,
            output,
        } => cmd_catalog(name.as_deref(), CatalogParams { n, p0 }, &output),
        Command::Embed { system, p, output } => cmd_embed(&system, p, &output),
    }
}

fn cmd_analyze(args: &SystemArgs, p: f64, oracle: bool, out: &OutputArgs) -> anyhow::Result<u8> {
    check_p(p)?;
    let system = args.resolve()?;
    let config = args.config()?;
    let analyzer = Analyzer::new(system, config)?.with_oracle(oracle);
    let verdict = analyzer.analyze(p)?;
    let out = out.open();
    if out.text() {
        print!("{}", output::verdict_text(&verdict));
    }
    out.csv("analyze_evidence.csv", output::verdict_csv(&verdict))?;
    if out.svg_enabled() {
        let curve = analyzer
            .resolvent_scan()
            .map(|s| s.lambdas.iter().copied().zip(s.weighted(p)).collect())
            .unwrap_or_default();
        out.svg(
            "analyze_resolvent.svg",
            &output::witness_plot(&verdict.system, &[(p, curve)]),
        )?;
    }
    out.json(
        "analyze",
        analyzer.system(),
        analyzer.config(),
        serde_json::to_value(&verdict)?,
    )?;
    Ok(if verdict.admissible == Admissible::Unknown {
        2
    } else {
        0
    })
}

fn cmd_threshold(
    args: &SystemArgs,
    p_min: f64,
    p_max: f64,
    resolution: f64,
    out: &OutputArgs,
) -> anyhow::Result<u8> {
    check_p(p_min)?;
    if !(p_max > p_min && p_max.is_finite()) {
        bail!("p-range must be ordered: p-min {p_min} >= p-max {p_max}");
    }
    if !(resolution > 0.0) {
        bail!("--resolution must be positive");
    }
    let system = args.resolve()?;
    let config = args.config()?;
    let analyzer = Analyzer::new(system, config)?;
    let scan = match analyzer.threshold_scan(p_min, p_max, resolution) {
        Ok(scan) => scan,
        Err(Error::NoBracket(msg)) => {
            eprintln!("no bracket: {msg}");
            return Ok(2);
        }
        Err(e) => return Err(e.into()),
    };
    let out = out.open();
    if out.text() {
        print!("{}", output::threshold_text(&scan));
    }
    out.csv("threshold_trace.csv", output::trace_csv(&scan))?;
    if out.svg_enabled() {
        out.svg("threshold_trace.svg", &output::trace_plot(&scan))?;
        let curves = match analyzer.resolvent_scan() {
            Ok(s) => [scan.p_low, scan.p_high]
                .iter()
                .map(|&p| (p, s.lambdas.iter().copied().zip(s.weighted(p)).collect()))
                .collect(),
            Err(_) => Vec::new(),
        };
        out.svg(
            "threshold_witness.svg",
            &output::witness_plot(&scan.system, &curves),
        )?;
    }
    out.json(
        "threshold",
        analyzer.system(),
        analyzer.config(),
        serde_json::to_value(&scan)?,
    )?;
    Ok(if scan.halted_at.is_some() { 2 } else { 0 })
}

fn cmd_oracle(args: &SystemArgs, p: f64, t_max: f64, out: &OutputArgs) -> anyhow::Result<u8> {
    check_p(p)?;
    if !(t_max >= 1.0 && t_max.is_finite()) {
        bail!("--t-max must be at least 1");
    }
    let system = args.resolve()?;
    let mut config = args.config()?;
    if args.k_max.is_none() {
        config.measure.k_max = DEFAULT_ORACLE_K_MAX;
    }
    let profile = constant_growth_profile(&system, p, &dyadic_times(t_max), &config.measure)?;
    let out = out.open();
    if out.text() {
        print!("{}", output::profile_text(&system.name, p, &profile));
    }
    out.csv("oracle_profile.csv", output::profile_csv(&profile))?;
    if out.svg_enabled() {
        out.svg(
            "oracle_profile.svg",
            &output::profile_plot(&system.name, p, &profile),
        )?;
    }
    out.json(
        "oracle",
        &system,
        &config,
        serde_json::json!({ "p": p, "profile": profile }),
    )?;
    Ok(if profile.classification == ProfileClass::Inconclusive {
        2
    } else {
        0
    })
}

fn cmd_catalog(name: Option<&str>, params: CatalogParams, out: &OutputArgs) -> anyhow::Result<u8> {
    let out = out.open();
    let rows = match name {
        None => output::catalog_rows(listings()),
        Some(name) => {
            let system = lookup(name, params)?;
            vec![output::listing_of(name, params, &system)]
        }
    };
    if out.text() {
        print!("{}", output::catalog_text(&rows, name.is_some()));
    }
    out.csv("catalog.csv", output::catalog_csv(&rows))?;
    Ok(0)
}

fn cmd_embed(args: &SystemArgs, p: f64, out: &OutputArgs) -> anyhow::Result<u8> {
    check_p(p)?;
    let system = args.resolve()?;
    let config = args.config()?;
    let measure = build_measure(&system, &config.measure)?;
    let bound = embedding_lower_bound(&measure, p, system.q(), &default_family())?;
    let out = out.open();
    if out.text() {
        print!("{}", output::embedding_text(&system.name, p, &bound));
    }
    out.csv("embedding_ratios.csv", output::embedding_csv(&bound))?;
    if out.svg_enabled() {
        out.svg(
            "embedding_ratios.svg",
            &output::embedding_plot(&system.name, p, &bound),
        )?;
    }
    out.json(
        "embed",
        &system,
        &config,
        serde_json::json!({ "p": p, "embedding": bound }),
    )?;
    Ok(0)
}
