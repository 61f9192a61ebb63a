mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use phasesearch::circuit::{from_text, to_text};
use phasesearch::lower::{lower_full, merge_pass, LowerError, PassReport};
use phasesearch::metrics::{compare, evaluate, CompareRow, EvalOptions, MetricsError};
use phasesearch::presets::{self, Preset};
use phasesearch::search::{compute_params, SearchError};
use phasesearch::{build_circuit, Bitstring, Circuit, SearchSpec, Variant};

use config::{FileConfig, InstanceFlags, Resolved, RunFlags};
use output::{histogram_rows, path_in, probability_rows, write_csv, write_json, write_text};

#[derive(Parser)]
#[command(
    name = "phasesearch",
    version,
    about = "Exact multi-target quantum search: parameters, simulation, lowering and metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the phase-matching parameters of an instance.
    Params(ParamsArgs),
    /// Build, simulate and sample one instance; write CSV and JSON results.
    Run(RunArgs),
    /// Run all three variants and write a comparison table.
    Compare(CompareArgs),
    /// Lower a circuit file to the 1- and 2-qubit basis.
    Lower(LowerArgs),
    /// Grid over n, M and J, one CSV row per instance and variant.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct InstanceArgs {
    /// Named instance: 2q2t, 5q2t, 5q4t or 6q3t.
    #[arg(long)]
    preset: Option<String>,
    /// Number of qubits.
    #[arg(short = 'n', long = "n")]
    n: Option<usize>,
    /// Comma-separated target bitstrings, most significant bit first.
    #[arg(short = 't', long)]
    targets: Option<String>,
    /// Slack J (exact variants only); must be at least J_min.
    #[arg(short = 'j', long = "j")]
    j: Option<u32>,
    /// TOML config file; flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl InstanceArgs {
    fn flags(&self, variant: Option<Variant>) -> InstanceFlags {
        InstanceFlags {
            preset: self.preset.clone(),
            n: self.n,
            targets: self.targets.clone(),
            variant,
            j: self.j,
        }
    }

    fn file(&self) -> anyhow::Result<FileConfig> {
        self.config
            .as_deref()
            .map(FileConfig::load)
            .transpose()
            .map(Option::unwrap_or_default)
    }
}

#[derive(Args)]
struct ParamsArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Number of measurement shots.
    #[arg(long)]
    shots: Option<u64>,
    /// Sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Depth used for reductions: blocked or asap.
    #[arg(long)]
    depth_policy: Option<String>,
    /// Also lower to the basis and report decomposed counts.
    #[arg(long)]
    lowered: bool,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn flags(&self) -> RunFlags {
        RunFlags {
            shots: self.shots,
            seed: self.seed,
            depth_policy: self.depth_policy.clone(),
            lowered: self.lowered,
            out: self.out.clone(),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// grover, modified or optimized.
    #[arg(long)]
    variant: Option<Variant>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Preset to include; repeatable. Defaults to all four when no instance is given.
    #[arg(long = "preset")]
    presets: Vec<String>,
    #[arg(short = 'n', long = "n")]
    n: Option<usize>,
    #[arg(short = 't', long)]
    targets: Option<String>,
    #[arg(short = 'j', long = "j")]
    j: Option<u32>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct LowerArgs {
    /// Circuit in the text format (or JSON when the name ends in .json).
    input: PathBuf,
    /// Run the H/X merge pass before lowering.
    #[arg(long)]
    merge: bool,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Qubit counts, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6")]
    n: Vec<usize>,
    /// Target counts, comma-separated; values above 2^n are skipped.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    m: Vec<u64>,
    /// Extra slack added to the default J, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    j_extra: Vec<u32>,
    /// Variants to include, comma-separated.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "grover,modified,optimized"
    )]
    variant: Vec<Variant>,
    /// Output CSV file.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
}

/// Failure classes and their exit status.
enum Failure {
    Usage(anyhow::Error),
    Numerical(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        classify(e)
    }
}

/// Slack violations, simulator guards and equivalence failures are numerical;
/// everything else is a usage problem.
fn classify(e: anyhow::Error) -> Failure {
    let numerical = e.chain().any(|c| {
        if let Some(s) = c.downcast_ref::<SearchError>() {
            return matches!(s, SearchError::SlackTooSmall { .. } | SearchError::Sim(_));
        }
        if let Some(m) = c.downcast_ref::<MetricsError>() {
            return matches!(
                m,
                MetricsError::Sim(_)
                    | MetricsError::Lower(LowerError::NotEquivalent { .. })
                    | MetricsError::Search(SearchError::SlackTooSmall { .. })
            );
        }
        matches!(
            c.downcast_ref::<LowerError>(),
            Some(LowerError::NotEquivalent { .. })
        )
    });
    if numerical {
        Failure::Numerical(e)
    } else {
        Failure::Usage(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Params(a) => cmd_params(a),
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Lower(a) => cmd_lower(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Failure::Usage(e) | Failure::Numerical(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn cmd_params(a: ParamsArgs) -> CmdResult {
    let file = a.instance.file()?;
    let (preset, n, targets) = config::resolve_instance(&a.instance.flags(None), &file)?;
    let spec = SearchSpec::parse(n, &targets.join(","), Variant::OptimizedMerged)
        .map_err(anyhow::Error::from)?;
    let j = a.instance.j.or(file.j_override);
    let p = compute_params(spec.n(), spec.m(), j).map_err(anyhow::Error::from)?;
    let grover_k =
        phasesearch::search::grover_iterations(spec.n(), spec.m()).map_err(anyhow::Error::from)?;
    if a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            preset: Option<String>,
            targets: &'a [String],
            params: phasesearch::PhaseParams,
            grover_iterations: u32,
        }
        let out = Out {
            preset,
            targets: &targets,
            params: p,
            grover_iterations: grover_k,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?
        );
    } else {
        println!("n           {}", p.n);
        println!("M           {}", p.m);
        println!("targets     {}", targets.join(","));
        println!("beta        {:.6}", p.beta);
        println!("J           {}", p.j);
        println!("J_min       {}", p.j_min);
        println!("J_default   {}", p.j_default);
        println!("phi         {:.4}", p.phi);
        println!("iterations  {}", p.iterations);
        println!("grover k    {grover_k}");
    }
    Ok(())
}

fn file_stem(r: &Resolved) -> String {
    let inst = r
        .preset
        .clone()
        .unwrap_or_else(|| format!("n{}m{}", r.n, r.targets.len()));
    format!("{inst}_{}", r.variant)
}

fn cmd_run(a: RunArgs) -> CmdResult {
    let file = a.instance.file()?;
    let (cfg, out) = config::resolve(
        "run",
        &a.instance.flags(a.variant),
        &a.output.flags(),
        &file,
    )?;
    let spec = cfg.spec()?;
    let opts = EvalOptions {
        shots: cfg.shots,
        seed: cfg.seed,
        lowered: cfg.lowered,
    };
    let (report, state) = evaluate(&spec, opts).map_err(anyhow::Error::from)?;
    let circuit = build_circuit(&spec).map_err(anyhow::Error::from)?.circuit;
    let stem = file_stem(&cfg);

    write_csv(
        &path_in(&out, &format!("{stem}_probabilities.csv")),
        &cfg,
        &["bitstring", "probability"],
        probability_rows(&state),
    )?;
    write_csv(
        &path_in(&out, &format!("{stem}_histogram.csv")),
        &cfg,
        &["bitstring", "count"],
        histogram_rows(&report.histogram),
    )?;
    write_json(
        &path_in(&out, &format!("{stem}_report.json")),
        &cfg,
        &report,
    )?;
    write_text(
        &path_in(&out, &format!("{stem}_circuit.txt")),
        &to_text(&circuit),
    )?;

    let depth = match cfg.depth_policy {
        phasesearch::DepthBasis::Blocked => report.depth.blocked,
        phasesearch::DepthBasis::Asap => report.depth.asap,
    };
    println!(
        "{stem}: gates {} depth {depth} ({:?}) success analytic {:.6} simulated {:.6} sampled {:.4} ({} shots, seed {})",
        report.gates.total, cfg.depth_policy, report.success.analytic, report.success.simulated, report.success.sampled,
        cfg.shots, cfg.seed
    );
    for note in &report.notes {
        println!("note: {note}");
    }
    println!("wrote {stem}_{{probabilities,histogram}}.csv, {stem}_report.json, {stem}_circuit.txt to {}", out.display());
    Ok(())
}

/// Comparison config echo: the shared settings plus the instances covered.
#[derive(Serialize)]
struct CompareConfig {
    command: &'static str,
    instances: Vec<InstanceEcho>,
    j_override: Option<u32>,
    shots: u64,
    seed: u64,
    depth_policy: phasesearch::DepthBasis,
    lowered: bool,
}

#[derive(Serialize)]
struct InstanceEcho {
    name: String,
    n: usize,
    targets: Vec<String>,
}

fn cmd_compare(a: CompareArgs) -> CmdResult {
    let file = a
        .config
        .as_deref()
        .map(FileConfig::load)
        .transpose()?
        .unwrap_or_default();
    let custom = a.n.is_some() || a.targets.is_some();
    let mut instances: Vec<(String, Option<&'static Preset>, usize, Vec<String>)> = Vec::new();
    if custom || (a.presets.is_empty() && (file.n.is_some() || file.targets.is_some())) {
        let flags = InstanceFlags {
            n: a.n,
            targets: a.targets.clone(),
            ..Default::default()
        };
        let (preset, n, targets) = config::resolve_instance(&flags, &file)?;
        let name = preset
            .clone()
            .unwrap_or_else(|| format!("n{n}m{}", targets.len()));
        instances.push((name, preset.as_deref().and_then(presets::find), n, targets));
    } else {
        let names: Vec<String> = if !a.presets.is_empty() {
            a.presets.clone()
        } else if let Some(p) = &file.preset {
            vec![p.clone()]
        } else {
            presets::names().into_iter().map(String::from).collect()
        };
        for name in names {
            let p = presets::find(&name).ok_or_else(|| config::unknown_preset(&name))?;
            instances.push((
                p.name.to_string(),
                Some(p),
                p.n,
                p.targets.iter().map(|s| s.to_string()).collect(),
            ));
        }
    }

    let run = a.output.flags();
    let inst0 = InstanceFlags {
        n: Some(instances[0].2),
        targets: Some(instances[0].3.join(",")),
        j: a.j,
        ..Default::default()
    };
    let (shared, out) = config::resolve("compare", &inst0, &run, &file)?;
    let cfg = CompareConfig {
        command: "compare",
        instances: instances
            .iter()
            .map(|(name, _, n, t)| InstanceEcho {
                name: name.clone(),
                n: *n,
                targets: t.clone(),
            })
            .collect(),
        j_override: shared.j_override,
        shots: shared.shots,
        seed: shared.seed,
        depth_policy: shared.depth_policy,
        lowered: shared.lowered,
    };

    let opts = EvalOptions {
        shots: shared.shots,
        seed: shared.seed,
        lowered: shared.lowered,
    };
    let mut rows: Vec<CompareRow> = Vec::new();
    for (name, preset, n, targets) in &instances {
        let base = SearchSpec::parse(*n, &targets.join(","), Variant::GroverOriginal)
            .map_err(anyhow::Error::from)?
            .with_j(shared.j_override);
        let mut reports = Vec::new();
        for v in Variant::ALL {
            let (r, _) =
                evaluate(&base.clone().with_variant(v), opts).map_err(anyhow::Error::from)?;
            reports.push(r);
        }
        rows.extend(
            compare(name, &reports, shared.depth_policy, *preset).map_err(anyhow::Error::from)?,
        );
    }

    let header = CompareRow::csv_header(shared.lowered);
    write_csv(
        &path_in(&out, "compare.csv"),
        &cfg,
        &header,
        rows.iter().map(|r| r.csv_record(shared.lowered)),
    )?;
    write_json(&path_in(&out, "compare.json"), &cfg, &rows)?;
    for r in &rows {
        println!(
            "{:<8} {:<9} gates {:>4} depth {:>3} success {:.4}  gate red. {:>5.1}%  depth red. {:>5.1}%{}",
            r.instance,
            r.variant.to_string(),
            r.gates,
            r.depth_blocked,
            r.success_analytic,
            r.gate_reduction_vs_modified,
            r.depth_reduction_vs_modified,
            if r.flags.is_empty() { String::new() } else { format!("  [{}]", r.flags) }
        );
    }
    println!("wrote compare.csv and compare.json to {}", out.display());
    Ok(())
}

fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    } else {
        from_text(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

fn cmd_lower(a: LowerArgs) -> CmdResult {
    let circuit = read_circuit(&a.input)?;
    let mut passes: Vec<PassReport> = Vec::new();
    let mut current = circuit;
    if a.merge {
        let (merged, rep) = merge_pass(&current).map_err(anyhow::Error::from)?;
        passes.push(rep);
        current = merged;
    }
    let (lowered, rep) = lower_full(&current).map_err(anyhow::Error::from)?;
    passes.push(rep);

    let stem = a
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("circuit")
        .to_string();
    let out = a.out.unwrap_or_else(|| PathBuf::from("."));
    #[derive(Serialize)]
    struct LowerConfig {
        command: &'static str,
        input: String,
        merge: bool,
    }
    let cfg = LowerConfig {
        command: "lower",
        input: stem.clone(),
        merge: a.merge,
    };
    let header = output::comment_line(&cfg)?;
    write_text(
        &path_in(&out, &format!("{stem}_lowered.txt")),
        &format!("{header}\n{}", to_text(&lowered)),
    )?;
    write_json(&path_in(&out, &format!("{stem}_pass.json")), &cfg, &passes)?;
    for p in &passes {
        println!(
            "{}: {} -> {} gates, asap depth {} -> {}, trace overlap {}",
            p.pass,
            p.gates_before.total,
            p.gates_after.total,
            p.depth_before.asap,
            p.depth_after.asap,
            p.equivalence
                .trace_overlap
                .map_or("not checked (register too wide)".into(), |v| format!(
                    "{v:.12}"
                ))
        );
    }
    println!(
        "wrote {stem}_lowered.txt and {stem}_pass.json to {}",
        out.display()
    );
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    #[derive(Serialize)]
    struct SweepConfig<'a> {
        command: &'static str,
        n: &'a [usize],
        m: &'a [u64],
        j_extra: &'a [u32],
        variant: &'a [Variant],
    }
    let cfg = SweepConfig {
        command: "sweep",
        n: &a.n,
        m: &a.m,
        j_extra: &a.j_extra,
        variant: &a.variant,
    };
    let header = [
        "n",
        "m",
        "targets",
        "variant",
        "j",
        "j_min",
        "j_default",
        "phi",
        "iterations",
        "gates",
        "depth_blocked",
        "depth_asap",
        "depth_formula",
        "success_analytic",
        "success_simulated",
    ];
    let mut rows = Vec::new();
    for &n in &a.n {
        if n == 0 || n > phasesearch::statevec::MAX_QUBITS {
            return Err(Failure::Usage(anyhow!(
                "n = {n} is outside 1..={}",
                phasesearch::statevec::MAX_QUBITS
            )));
        }
        let dim = 1u64 << n;
        for &m in a.m.iter().filter(|&&m| m >= 1 && m <= dim) {
            // Targets spread evenly over the index range.
            let targets: Vec<Bitstring> = (0..m)
                .map(|k| Bitstring::new(k * (dim / m), n).expect("index below 2^n"))
                .collect();
            let base = compute_params(n, m, None).map_err(anyhow::Error::from)?;
            for &extra in &a.j_extra {
                for &v in &a.variant {
                    let j = (v != Variant::GroverOriginal).then_some(base.j + extra);
                    if v == Variant::GroverOriginal && extra > 0 {
                        continue;
                    }
                    let spec = SearchSpec::new(n, targets.clone(), v)
                        .map_err(anyhow::Error::from)?
                        .with_j(j);
                    let (r, _) = evaluate(
                        &spec,
                        EvalOptions {
                            shots: 1,
                            seed: 0,
                            lowered: false,
                        },
                    )
                    .map_err(anyhow::Error::from)?;
                    rows.push(vec![
                        n.to_string(),
                        m.to_string(),
                        targets
                            .iter()
                            .map(|t| t.to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                        v.to_string(),
                        r.params.j.to_string(),
                        r.params.j_min.to_string(),
                        r.params.j_default.to_string(),
                        format!("{:.6}", r.angle),
                        r.iterations.to_string(),
                        r.gates.total.to_string(),
                        r.depth.blocked.to_string(),
                        r.depth.asap.to_string(),
                        r.depth.formula.to_string(),
                        format!("{:.9}", r.success.analytic),
                        format!("{:.9}", r.success.simulated),
                    ]);
                }
            }
        }
    }
    write_csv(&a.out, &cfg, &header, rows.iter().cloned())?;
    println!("wrote {} rows to {}", rows.len(), a.out.display());
    Ok(())
}
