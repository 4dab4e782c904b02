use std::fs;
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use steiner_core::certify::brute_force_min_steiner_cut;
use steiner_core::cut_matching::GameConfig;
use steiner_core::harness::{emit_graph, generate, parse_graph, Family, GenSpec, RunStats};
use steiner_core::maxflow::FlowMeter;
use steiner_core::steiner::{min_steiner_cut_with, naive_steiner_cut, SolverConfig, SteinerResult};
use steiner_core::terminal_decomp::{terminal_decomp, verify_decomposition, Finding};
use steiner_core::{Dyadic, Error, Graph, VertexSet};

#[derive(Parser)]
#[command(name = "steiner-cut", version, about = "Deterministic minimum Steiner cut solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GameArgs {
    /// Cut-game sparsity ψ, a power of two reciprocal such as 1/64.
    #[arg(long, default_value = "1/64")]
    psi: Dyadic,
    /// Round budget constant: L_max = ⌈c_L·log₂|T|⌉ + 2.
    #[arg(long = "c-l", default_value_t = 4)]
    c_l: u32,
    /// Strength constant in s = ⌈c_s·α²·⌈log₂ n⌉²⌉.
    #[arg(long = "c-s", default_value = "1")]
    c_s: Dyadic,
    /// Largest vertex count for exhaustive enumeration.
    #[arg(long = "brute-cap", default_value_t = 22)]
    brute_cap: usize,
}

impl GameArgs {
    fn config(&self) -> GameConfig {
        GameConfig { psi: self.psi, c_l: self.c_l, c_s: self.c_s, brute_cap: self.brute_cap }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Minimum Steiner cut with the decomposition-based solver.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        game: GameArgs,
        /// Overrides the balance threshold k; results may then be inexact.
        #[arg(long)]
        k: Option<u128>,
        /// Writes run statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Minimum Steiner cut with |T| - 1 maximum flows.
    Naive {
        #[arg(long)]
        input: PathBuf,
    },
    /// Minimum Steiner cut by enumerating every bipartition.
    Brute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "brute-cap", default_value_t = 22)]
        brute_cap: usize,
    },
    /// Terminal-strong decomposition at threshold δ with a verification report.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: u64,
        #[command(flatten)]
        game: GameArgs,
    },
    /// Emits a generated instance in extended DIMACS.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV of flow-call counts across instance sizes.
    Bench {
        #[arg(long, default_value = "planted_cut")]
        family: Family,
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        k: Option<u128>,
    },
}

fn read_graph(path: &PathBuf) -> Result<Graph, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text)
}

fn one_indexed(side: &VertexSet) -> String {
    side.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}

fn print_result(label: &str, r: &SteinerResult) {
    println!("{label} value {}", r.value);
    println!("side {}", one_indexed(&r.best_cut.side));
    println!("flow_calls {}", r.flow_calls);
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Solve { input, game, k, stats } => {
            let g = read_graph(&input)?;
            let start = Instant::now();
            let r = min_steiner_cut_with(&g, &SolverConfig { game: game.config(), k_override: k })?;
            let ms = start.elapsed().as_millis() as u64;
            print_result("steiner", &r);
            println!("batched_flow_calls {}", r.batched_flow_calls);
            if r.fallback_used() {
                println!("fallback used");
            }
            if let Some(path) = stats {
                let json = serde_json::to_string_pretty(&RunStats::from_result(&r, ms))
                    .map_err(|e| Error::Internal(e.to_string()))?;
                fs::write(&path, json + "\n")
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        Command::Naive { input } => print_result("naive", &naive_steiner_cut(&read_graph(&input)?)?),
        Command::Brute { input, brute_cap } => {
            let g = read_graph(&input)?;
            match brute_force_min_steiner_cut(&g, brute_cap)? {
                Some(cut) => {
                    println!("brute value {}", cut.boundary_weight);
                    println!("side {}", one_indexed(&cut.side));
                }
                None => return Err(Error::InvalidArgument("fewer than two terminals".into())),
            }
        }
        Command::Decompose { input, delta, game } => {
            let g = read_graph(&input)?;
            let cfg = game.config();
            let d = terminal_decomp(&g, &g.all_vertices(), delta, &cfg, &FlowMeter::new())?;
            println!("clusters {}", d.clusters.len());
            for (i, c) in d.clusters.iter().enumerate() {
                println!("cluster {i} depth {}: {}", c.depth, one_indexed(&c.vertices));
            }
            println!("intercluster_weight {}", d.intercluster_weight);
            println!("params s={} delta={} gamma={}", d.params.s, d.params.delta, d.params.gamma);
            println!("flow_calls {} batched {}", d.flow_calls_used, d.batched_flow_calls);
            let report = verify_decomposition(&g, &d, cfg.brute_cap);
            println!("certified {}", report.certified);
            for f in &report.findings {
                match f {
                    Finding::NotCertified { reason } => println!("not certified: {reason}"),
                    other => println!("finding {other:?}"),
                }
            }
            println!("verification {}", if report.ok() { "ok" } else { "failed" });
            if !report.ok() {
                return Err(Error::Internal("decomposition failed verification".into()));
            }
        }
        Command::Gen { family, n, seed, output } => {
            let gen = generate(&GenSpec::for_family(family, n), seed)?;
            let text = emit_graph(&gen.graph);
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            if let Some(l) = gen.known_lambda {
                eprintln!("known lambda {l}");
            }
        }
        Command::Bench { family, sizes, seed, game, k } => {
            let cfg = SolverConfig { game: game.config(), k_override: k };
            println!("family,n,m,terminals,total_weight,value,naive_value,flow_calls,batched_flow_calls,naive_flow_calls,terminals_minus_one,below_naive");
            let mut crossover: Option<usize> = None;
            for n in sizes {
                let g = generate(&GenSpec::for_family(family, n), seed)?.graph;
                let r = min_steiner_cut_with(&g, &cfg)?;
                let naive = naive_steiner_cut(&g)?;
                if k.is_none() && r.value != naive.value {
                    return Err(Error::Internal(format!("solver {} disagrees with naive {}", r.value, naive.value)));
                }
                let t1 = g.terminal_count() as u64 - 1;
                if r.flow_calls >= t1 {
                    crossover = None;
                } else if crossover.is_none() {
                    crossover = Some(g.vertex_count());
                }
                println!(
                    "{family},{},{},{},{},{},{},{},{},{},{},{}",
                    g.vertex_count(),
                    g.edge_count(),
                    g.terminal_count(),
                    g.total_weight(),
                    r.value,
                    naive.value,
                    r.flow_calls,
                    r.batched_flow_calls,
                    naive.flow_calls,
                    t1,
                    r.flow_calls < t1
                );
            }
            match crossover {
                Some(n) => eprintln!("crossover n={n}"),
                None => eprintln!("crossover none"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::InvalidArgument(_) | Error::CapacityExceeded { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
        Err(_) => ExitCode::from(3),
    }
}
