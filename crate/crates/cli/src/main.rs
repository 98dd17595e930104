use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sabre_core::device::{builtin_device, BUILTIN_DEVICES};
use sabre_core::formats::coupling::parse_coupling;
use sabre_core::formats::qasm::{parse_qasm_with, write_qasm, EmitForm, ParseOptions};
use sabre_core::formats::stats::{render_table, Stats};
use sabre_core::oracle::optimal_swap_count;
use sabre_core::sweep::{sweep, write_csv};
use sabre_core::traversal::best_of_restarts_from;
use sabre_core::verify::verify_equivalence;
use sabre_core::{best_of_restarts, Circuit, CouplingGraph, Device, Mapping, RouterParams};

#[derive(Parser)]
#[command(name = "sabre", version, about = "Map quantum circuits onto coupling-constrained devices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route a circuit and write the result as OpenQASM.
    Route(RouteArgs),
    /// Route once per decay increment and write a CSV of gate count and depth.
    Sweep(SweepArgs),
    /// Check that a routed circuit is compliant and equivalent to its source.
    Verify(VerifyArgs),
    /// Exact minimum SWAP count for a tiny instance.
    Oracle(OracleArgs),
    /// List the built-in devices.
    Devices,
}

#[derive(Args)]
struct DeviceArgs {
    /// Coupling file, or the name of a built-in device.
    #[arg(long)]
    coupling: String,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, env = "SABRE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Passes per restart; odd, so the last one runs forward.
    #[arg(long, default_value_t = 3)]
    traversals: usize,
    #[arg(long, default_value_t = 20)]
    extended_set_size: usize,
    /// Weight of the extended set in the cost function.
    #[arg(long, default_value_t = 0.5)]
    weight: f64,
    #[arg(long, default_value_t = 0.001)]
    decay_delta: f64,
    /// Search steps between decay resets.
    #[arg(long, default_value_t = 5)]
    decay_reset: usize,
    /// Comma-separated physical qubit for each logical qubit, e.g. `2,0,1`.
    /// Restarts then differ only in tie-breaking.
    #[arg(long)]
    initial_layout: Option<String>,
}

impl SearchArgs {
    fn params(&self) -> RouterParams {
        RouterParams {
            extended_set_size: self.extended_set_size,
            lookahead_weight: self.weight,
            decay_delta: self.decay_delta,
            decay_reset_interval: self.decay_reset,
            restarts: self.restarts,
            traversals: self.traversals,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Swap,
    Decomposed,
}

impl From<Emit> for EmitForm {
    fn from(e: Emit) -> Self {
        match e {
            Emit::Swap => EmitForm::Swap,
            Emit::Decomposed => EmitForm::Decomposed,
        }
    }
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    device: DeviceArgs,
    /// Routed circuit; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Where to write run statistics as JSON.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value = "decomposed")]
    emit: Emit,
    /// Skip re-reading and verifying the emitted circuit.
    #[arg(long)]
    no_verify: bool,
    /// Also print a one-row results table.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    device: DeviceArgs,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_delimiter = ',', default_value = "0,0.0005,0.001,0.005,0.01")]
    deltas: Vec<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// The circuit before routing.
    #[arg(long)]
    input: PathBuf,
    /// The routed circuit, in either output form.
    #[arg(long)]
    routed: PathBuf,
    #[command(flatten)]
    device: DeviceArgs,
    /// Initial layout, as for `route`.
    #[arg(long, conflicts_with = "stats", required_unless_present = "stats")]
    initial_layout: Option<String>,
    /// Take the initial layout from a stats file written by `route`.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    device: DeviceArgs,
    /// Fix the initial layout instead of minimising over all of them.
    #[arg(long)]
    initial_layout: Option<String>,
}

/// Failure with its exit status: 1 usage, 2 input, 3 routing, 4 verification.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn input(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn routing(message: impl ToString) -> Failure {
    Failure { code: 3, message: message.to_string() }
}

fn verification(message: impl ToString) -> Failure {
    Failure { code: 4, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_circuit(path: &Path, options: ParseOptions) -> Result<Circuit, Failure> {
    parse_qasm_with(&read(path)?, options).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_device(args: &DeviceArgs) -> Result<Device, Failure> {
    let path = Path::new(&args.coupling);
    let graph: CouplingGraph = if path.is_file() {
        parse_coupling(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?
    } else {
        builtin_device(&args.coupling).map_err(|e| usage(format!("{e}; not a file either")))?
    };
    Device::new(graph).map_err(routing)
}

fn parse_layout(text: &str, circuit: &Circuit, device: &Device) -> Result<Mapping, Failure> {
    let forward = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("initial layout `{text}`: {e}")))?;
    if forward.len() != circuit.num_qubits() {
        return Err(usage(format!(
            "initial layout lists {} qubits but the circuit has {}",
            forward.len(),
            circuit.num_qubits()
        )));
    }
    Mapping::from_forward(forward, device.num_qubits()).map_err(|e| usage(format!("initial layout: {e}")))
}

fn route_cmd(args: RouteArgs) -> Result<(), Failure> {
    let circuit = load_circuit(&args.input, ParseOptions::default())?;
    let device = load_device(&args.device)?;
    let params = args.search.params();
    params.validate().map_err(usage)?;

    let start = Instant::now();
    let best = match &args.search.initial_layout {
        Some(text) => {
            let layout = parse_layout(text, &circuit, &device)?;
            best_of_restarts_from(&circuit, &device, &layout, &params, args.search.seed)
        }
        None => best_of_restarts(&circuit, &device, &params, args.search.seed),
    }
    .map_err(routing)?;
    let runtime = start.elapsed();
    let routed = &best.best;

    let form = EmitForm::from(args.emit);
    let text = write_qasm(&routed.circuit, form);
    if !args.no_verify {
        let reread = parse_qasm_with(&text, ParseOptions { keep_swaps: true })
            .map_err(|e| verification(format!("emitted circuit does not parse: {e}")))?;
        let report = verify_equivalence(&circuit, &reread, &device, &routed.initial_mapping)
            .map_err(verification)?;
        if !report.equivalent {
            return Err(verification(format!(
                "self-check failed: {:?}",
                report.first_violation
            )));
        }
    }

    write_or_print(args.output.as_deref(), &text)?;
    let stats = Stats::new(&circuit, routed, best.seed, best.trials.len(), runtime);
    if let Some(path) = &args.stats {
        fs::write(path, stats.to_json() + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    if args.table {
        let name = args.input.file_stem().map_or("circuit".into(), |s| s.to_string_lossy());
        let table = render_table(&[(&name, &stats)]);
        if args.output.is_some() {
            print!("{table}");
        } else {
            eprint!("{table}");
        }
    }
    Ok(())
}

fn sweep_cmd(args: SweepArgs) -> Result<(), Failure> {
    if args.deltas.is_empty() {
        return Err(usage("--deltas needs at least one value"));
    }
    if args.search.initial_layout.is_some() {
        return Err(usage("--initial-layout is not supported by sweep"));
    }
    let circuit = load_circuit(&args.input, ParseOptions::default())?;
    let device = load_device(&args.device)?;
    let params = args.search.params();
    params.validate().map_err(usage)?;
    let rows = sweep(&circuit, &device, &params, &args.deltas, args.search.seed).map_err(routing)?;
    write_or_print(args.output.as_deref(), &write_csv(&rows))
}

fn verify_cmd(args: VerifyArgs) -> Result<(), Failure> {
    let original = load_circuit(&args.input, ParseOptions::default())?;
    let routed = load_circuit(&args.routed, ParseOptions { keep_swaps: true })?;
    let device = load_device(&args.device)?;
    let layout = match (&args.initial_layout, &args.stats) {
        (Some(text), _) => parse_layout(text, &original, &device)?,
        (None, Some(path)) => {
            let stats: Stats = serde_json::from_str(&read(path)?)
                .map_err(|e| input(format!("{}: {e}", path.display())))?;
            let text = stats
                .initial_mapping
                .values()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",");
            parse_layout(&text, &original, &device)?
        }
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let report = verify_equivalence(&original, &routed, &device, &layout).map_err(verification)?;
    let final_mapping: Vec<usize> = report.final_mapping.forward().iter().map(|p| p.index()).collect();
    let summary = serde_json::json!({
        "compliant": report.compliant,
        "equivalent": report.equivalent,
        "final_mapping": final_mapping,
        "first_violation": report.first_violation.as_ref().map(|v| format!("gate {}: {:?}", v.gate, v.kind)),
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
    if report.equivalent {
        Ok(())
    } else {
        Err(verification("routed circuit failed verification"))
    }
}

fn oracle_cmd(args: OracleArgs) -> Result<(), Failure> {
    let circuit = load_circuit(&args.input, ParseOptions::default())?;
    let device = load_device(&args.device)?;
    let layout = args
        .initial_layout
        .as_deref()
        .map(|text| parse_layout(text, &circuit, &device))
        .transpose()?;
    let count = optimal_swap_count(&circuit, &device, layout.as_ref()).map_err(routing)?;
    println!("{count}");
    Ok(())
}

fn devices_cmd() {
    for name in BUILTIN_DEVICES {
        match builtin_device(name) {
            Ok(g) => println!("{name:<14} {:>3} qubits {:>3} couplers", g.num_qubits(), g.edges().len()),
            Err(_) => println!("{name:<14} line of N qubits, e.g. line5"),
        }
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
    let result = match cli.command {
        Command::Route(args) => route_cmd(args),
        Command::Sweep(args) => sweep_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Oracle(args) => oracle_cmd(args),
        Command::Devices => {
            devices_cmd();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
