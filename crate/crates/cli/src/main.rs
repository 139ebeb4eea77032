use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use neurobench_core::engine::{chip_for, element_bench, element_matrix, nominal_chip, workload_bench};
use neurobench_core::report::{
    element_table, emit_matrix, format_sig, pareto_front, scatter, scatter_table, ScatterSet, Scope,
    DEFAULT_PRECISION,
};
use neurobench_core::topsdown::{backfill_derived, run_workload_on_chip, topsdown};
use neurobench_core::{AdeTriple, ChipConfig, NetworkKind, Registry, Schedule, WorkloadBench};
use serde::Deserialize;

/// Area, delay and energy benchmarks for neural-inference hardware
#[derive(Parser, Debug)]
#[command(name = "neurobench", version, about)]
struct Cli {
    /// Directory with replacement dataset files (constants.json, devices.json, ...)
    #[arg(long, global = true, env = "NEUROBENCH_DATA_DIR")]
    data_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect the device dataset
    Devices {
        #[command(subcommand)]
        action: DevicesAction,
    },
    /// Bottoms-up benchmarks
    Bench {
        #[command(subcommand)]
        target: BenchTarget,
    },
    /// Per-element figures recovered from a published chip
    Topsdown(TopsdownArgs),
    /// Write tables, scatter sets or Pareto fronts to a file
    Export(ExportArgs),
}

#[derive(Subcommand, Debug)]
enum DevicesAction {
    /// List devices with intrinsic area, delay and energy
    List,
}

#[derive(Subcommand, Debug)]
enum BenchTarget {
    /// Full benchmark row of one technology
    Element {
        /// Technology label, e.g. ANNDCSRAM
        #[arg(long)]
        tech: String,
    },
    /// Benchmark rows of every technology of one network kind, as CSV
    Network {
        /// ANN, CNN, SNN or ONN
        #[arg(long, value_parser = parse_kind)]
        kind: NetworkKind,
    },
    /// Whole-chip figures
    Chip(ChipArgs),
    /// One inference workload on one technology
    Workload {
        #[arg(long)]
        name: String,
        #[arg(long)]
        tech: String,
        #[arg(long, value_enum)]
        schedule: Option<ScheduleArg>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "chip_source")]
struct ChipSource {
    /// Use the nominal chip
    #[arg(long)]
    nominal: bool,
    /// JSON file with cores, neurons_per_core, synapses_per_neuron and optional activity/spiking
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChipArgs {
    #[command(flatten)]
    source: ChipSource,
    /// Technology label; all technologies when omitted
    #[arg(long)]
    tech: Option<String>,
}

#[derive(Args, Debug)]
struct TopsdownArgs {
    /// Chip name, e.g. TrueNorth
    #[arg(long)]
    chip: String,
    /// Also run this workload on the chip
    #[arg(long)]
    workload: Option<String>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long, value_enum)]
    what: What,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Matrix scope
    #[arg(long, value_enum, default_value_t = ScopeArg::Elements)]
    scope: ScopeArg,
    /// Workload for workload-scoped matrices and scatter sets
    #[arg(long)]
    workload: Option<String>,
    /// Restrict the element matrix to one network kind
    #[arg(long, value_parser = parse_kind)]
    kind: Option<NetworkKind>,
    /// Scatter set for scatter and pareto exports
    #[arg(long, value_enum, default_value_t = SetArg::Synapse)]
    set: SetArg,
    /// Significant digits in CSV output
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScheduleArg {
    Parallel,
    #[value(alias = "time-multiplexed")]
    Tmux,
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Parallel => Schedule::Parallel,
            ScheduleArg::Tmux => Schedule::TimeMultiplexed,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum What {
    Matrix,
    Scatter,
    Pareto,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScopeArg {
    Elements,
    Workload,
    Chips,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SetArg {
    Synapse,
    Neuron,
    EnergyDelay,
    PowerThroughput,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn parse_kind(s: &str) -> std::result::Result<NetworkKind, String> {
    s.parse::<NetworkKind>().map_err(|e| e.to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChipConfigFile {
    cores: u64,
    neurons_per_core: u64,
    synapses_per_neuron: u64,
    #[serde(default)]
    activity: Option<f64>,
    #[serde(default)]
    spiking: Option<bool>,
}

fn load_registry(dir: Option<&Path>) -> Result<Registry> {
    match dir {
        Some(d) => Registry::load_dir(d).with_context(|| format!("loading datasets from {}", d.display())),
        None => Ok(Registry::builtin()?),
    }
}

/// Six significant digits, switching to exponent form outside 1e-3..1e9.
fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-3..1e9).contains(&a) {
        format!("{:.*e}", DEFAULT_PRECISION - 1, v)
    } else {
        format_sig(v, DEFAULT_PRECISION)
    }
}

fn print_triple(name: &str, t: AdeTriple) {
    println!(
        "{name:<10} area {} nm2  delay {} ps  energy {} aJ",
        num(t.area),
        num(t.delay),
        num(t.energy)
    );
}

fn print_workload(b: &WorkloadBench) {
    let schedule = match b.schedule {
        Schedule::Parallel => "parallel",
        Schedule::TimeMultiplexed => "time_multiplexed",
    };
    println!("schedule             {schedule}");
    println!("stages               {}", b.stages.len());
    println!("area a_CW            {} nm2", num(b.area));
    println!("delay tau_CW         {} ps", num(b.delay));
    println!("energy E_CW          {} aJ", num(b.energy));
    println!("power P_CW           {} W", num(b.power_watts()));
    println!("throughput T_I       {} 1/(nm2 ps)", num(b.inference_throughput));
    println!("inference rate       {} 1/s", num(b.inference_rate()));
}

fn devices_list(reg: &Registry) {
    println!("{:<10} {:<14} {:>12} {:>12} {:>12}", "device", "class", "area_nm2", "delay_ps", "energy_aj");
    for d in reg.devices() {
        let class = format!("{:?}", d.class).to_lowercase();
        println!(
            "{:<10} {:<14} {:>12} {:>12} {:>12}",
            d.name,
            class,
            num(d.area_int),
            num(d.delay_int),
            num(d.energy_int)
        );
    }
}

fn bench_element(reg: &Registry, label: &str) -> Result<()> {
    let tech = reg.technology(label)?;
    let e = element_bench(reg, tech)?;
    println!("technology {}  ({}, {})", tech.label(), tech.kind(), tech.family.name());
    print_triple("synapse", e.synapse);
    print_triple("core_ic", e.core_ic);
    print_triple("neuron", e.neuron);
    print_triple("chip_ic", e.chip_ic);
    print_triple("syn+lic", e.synapse_total());
    print_triple("neu+gic", e.neuron_total());
    Ok(())
}

fn chip_config(reg: &Registry, args: &ChipArgs, kind: NetworkKind) -> Result<ChipConfig> {
    match &args.source.config {
        None => Ok(ChipConfig::nominal(reg.constants(), kind)),
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let f: ChipConfigFile =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            let cfg = ChipConfig {
                cores: f.cores,
                neurons_per_core: f.neurons_per_core,
                synapses_per_neuron: f.synapses_per_neuron,
                activity: f.activity.unwrap_or(1.0),
                spiking: f.spiking.unwrap_or(kind.is_spiking()),
            };
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn bench_chip(reg: &Registry, args: &ChipArgs) -> Result<()> {
    let techs = match &args.tech {
        Some(l) => vec![reg.technology(l)?],
        None => reg.technologies(None),
    };
    println!(
        "technology,synapses,area_nm2,firing_rate_per_ps,time_step_ps,energy_per_event_aj,throughput_per_ps,power_w,energy_per_step_aj"
    );
    for t in techs {
        let cfg = chip_config(reg, args, t.kind())?;
        let c = if args.source.nominal { nominal_chip(reg, t)? } else { chip_for(reg, t, &cfg)? }.chip;
        println!(
            "{},{},{},{},{},{},{},{},{}",
            t.label(),
            c.total_synapses,
            num(c.area),
            num(c.firing_rate),
            num(c.time_step),
            num(c.energy_per_event),
            num(c.throughput),
            num(c.power * 1e-6),
            num(c.energy_per_step)
        );
    }
    Ok(())
}

fn run_topsdown(reg: &Registry, args: &TopsdownArgs) -> Result<()> {
    let chip = reg.chip(&args.chip)?;
    let e = topsdown(reg, chip)?;
    println!("chip {} ({})", chip.name, chip.kind.name());
    println!("a_neu     {} nm2", num(e.a_neu));
    println!("a_syn     {} nm2", num(e.a_syn));
    println!("tau_syn   {} ps", num(e.tau_syn));
    println!("tau_neu   {} ps", num(e.tau_neu));
    println!("E_syn     {} aJ", num(e.e_syn));
    println!("E_neu     {} aJ", num(e.e_neu));
    println!("activity  {}", num(e.activity));
    match backfill_derived(chip) {
        Ok(b) => {
            for f in &b.fills {
                println!("filled {} = {} from {:?} identity", f.field, num(f.value), f.identity);
            }
            for r in &b.residuals {
                println!("{:?} identity residual {:+.2}%", r.identity, 100.0 * r.relative);
            }
        }
        Err(e) => println!("consistency check skipped: {e}"),
    }
    if let Some(w) = &args.workload {
        let spec = reg.workload(w)?;
        println!("workload {w}");
        print_workload(&run_workload_on_chip(reg, chip, spec)?);
        if let Some(cmp) = reg.comparisons().iter().find(|c| c.chip == chip.name && c.workload == *w) {
            println!(
                "published estimate   {} 1/s, {} uJ; measured {} 1/s, {} uJ",
                num(cmp.estimated.rate * 1e12),
                num(cmp.estimated.energy * 1e-12),
                num(cmp.measured.rate * 1e12),
                num(cmp.measured.energy * 1e-12)
            );
        }
    }
    Ok(())
}

fn scatter_set(args: &ExportArgs) -> Result<ScatterSet> {
    let workload = || {
        args.workload
            .clone()
            .context("--workload is required for workload scatter sets")
    };
    Ok(match args.set {
        SetArg::Synapse => ScatterSet::Synapse,
        SetArg::Neuron => ScatterSet::Neuron,
        SetArg::EnergyDelay => ScatterSet::WorkloadEnergyDelay(workload()?),
        SetArg::PowerThroughput => ScatterSet::WorkloadPowerThroughput(workload()?),
    })
}

fn export(reg: &Registry, args: &ExportArgs) -> Result<()> {
    if args.precision == 0 {
        bail!("--precision must be at least 1");
    }
    let text = match args.what {
        What::Matrix => {
            if args.format == Format::Json {
                bail!("matrix export is CSV only");
            }
            let scope = match args.scope {
                ScopeArg::Elements => Scope::Elements(args.kind),
                ScopeArg::Chips => Scope::Chips,
                ScopeArg::Workload => Scope::Workload(
                    args.workload.clone().context("--workload is required with --scope workload")?,
                ),
            };
            if let Scope::Elements(kind) = scope {
                element_table(&element_matrix(reg, kind)?).to_csv(args.precision)?
            } else {
                emit_matrix(reg, &scope, args.precision)?
            }
        }
        What::Scatter | What::Pareto => {
            let mut pts = scatter(reg, &scatter_set(args)?)?;
            if args.what == What::Pareto {
                pts = pareto_front(&pts);
            }
            match args.format {
                Format::Csv => scatter_table(&pts).to_csv(args.precision)?,
                Format::Json => serde_json::to_string_pretty(&pts)? + "\n",
            }
        }
    };
    fs::write(&args.out, text).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let reg = load_registry(cli.data_dir.as_deref())?;
    match cli.command {
        Command::Devices { action: DevicesAction::List } => devices_list(&reg),
        Command::Bench { target } => match target {
            BenchTarget::Element { tech } => bench_element(&reg, &tech)?,
            BenchTarget::Network { kind } => {
                print!("{}", emit_matrix(&reg, &Scope::Elements(Some(kind)), DEFAULT_PRECISION)?)
            }
            BenchTarget::Chip(args) => bench_chip(&reg, &args)?,
            BenchTarget::Workload { name, tech, schedule } => {
                let t = reg.technology(&tech)?;
                let b = workload_bench(&reg, &name, t, schedule.map(Schedule::from))?;
                println!("workload {name} on {tech}");
                print_workload(&b);
            }
        },
        Command::Topsdown(args) => run_topsdown(&reg, &args)?,
        Command::Export(args) => export(&reg, &args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
