use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use switchcol::format::{
    parse_certificate, parse_edge_list, parse_graph, parse_group, write_certificate, write_graph, write_group,
};
use switchcol::mixed_graph::bipartition;
use switchcol::oracle::{oracle_report, OracleVerdict, DEFAULT_STATE_CAP};
use switchcol::perm_group::arc_group_to_edge_group;
use switchcol::solver::{arcs_to_edges, np_gadget, solve, verify_certificate, Outcome, SolveOptions};
use switchcol::substitution::substitution_classes;
use switchcol::{Certificate, ColourKind, MixedGraph, SwitchGroup, YesCertificate};

/// Switchable 2-colouring of edge- and arc-coloured graphs.
#[derive(Parser)]
#[command(name = "switchcol", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide switchable 2-colourability and print the certificate.
    Solve {
        graph: PathBuf,
        group: PathBuf,
        /// Write the certificate here and print only its header line.
        #[arg(long, value_name = "FILE", conflicts_with = "verdict_only")]
        certificate: Option<PathBuf>,
        /// Skip building the switch sequence of a YES answer.
        #[arg(long)]
        verdict_only: bool,
    },
    /// Check a certificate against a graph and group.
    Verify { graph: PathBuf, group: PathBuf, cert: PathBuf },
    /// Print the substitution classes of a group.
    Classes { group: PathBuf },
    /// Translate an arc-only graph and its group to edge colours.
    Reduce {
        graph: PathBuf,
        group: PathBuf,
        #[arg(long, value_name = "FILE")]
        graph_out: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        group_out: Option<PathBuf>,
    },
    /// Build the colour-1 graph of a classical edge list.
    Gadget {
        edge_list: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
    /// Decide by exhaustive search over reachable configurations.
    Oracle {
        graph: PathBuf,
        group: PathBuf,
        /// Print the number of reachable configurations explored.
        #[arg(long)]
        states: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: usize,
    },
}

/// Exit code for a decided run: 0 for YES or a valid certificate, 1 otherwise.
struct Decided(bool);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Decided(true)) => ExitCode::SUCCESS,
        Ok(Decided(false)) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<MixedGraph> {
    parse_graph(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_group(path: &Path) -> Result<SwitchGroup> {
    parse_group(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_pair(graph: &Path, group: &Path) -> Result<(MixedGraph, SwitchGroup)> {
    let g = load_graph(graph)?;
    let grp = load_group(group)?;
    if (g.m, g.n) != (grp.m(), grp.n()) {
        bail!(
            "graph has {} edge and {} arc colours but the group acts on {} and {}",
            g.m,
            g.n,
            grp.m(),
            grp.n()
        );
    }
    Ok((g, grp))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn header_line(text: &str) -> &str {
    text.lines().next().unwrap_or_default()
}

fn run(command: Command) -> Result<Decided> {
    match command {
        Command::Solve { graph, group, certificate, verdict_only } => {
            let (g, grp) = load_pair(&graph, &group)?;
            let opts = SolveOptions { certificate: !verdict_only };
            let cert = match solve(&g, &grp, opts)? {
                Outcome::No(no) => Certificate::No(no),
                Outcome::Yes { certificate: Some(y), .. } => Certificate::Yes(y),
                Outcome::Yes { target, certificate: None } => {
                    // Verdict only: the header says everything.
                    let text = write_certificate(&Certificate::Yes(YesCertificate {
                        target,
                        sequence: Default::default(),
                        colouring: None,
                    }));
                    println!("{}", header_line(&text));
                    return Ok(Decided(true));
                }
            };
            let text = write_certificate(&cert);
            if verdict_only {
                println!("{}", header_line(&text));
            } else if let Some(path) = &certificate {
                emit(&text, Some(path))?;
                println!("{}", header_line(&text));
            } else {
                emit(&text, None)?;
            }
            Ok(Decided(cert.is_yes()))
        }
        Command::Verify { graph, group, cert } => {
            let (g, grp) = load_pair(&graph, &group)?;
            let c = parse_certificate(&read(&cert)?, &g).with_context(|| format!("in {}", cert.display()))?;
            let v = verify_certificate(&g, &grp, &c);
            for d in &v.diagnostics {
                eprintln!("{d}");
            }
            println!("{}", if v.valid { "valid" } else { "invalid" });
            Ok(Decided(v.valid))
        }
        Command::Classes { group } => {
            let grp = load_group(&group)?;
            let edge_group = if grp.m() > 0 {
                grp.restrict(ColourKind::Edge).0
            } else {
                println!("# arc colour i from side A is i, from side B is {} + i", grp.n());
                arc_group_to_edge_group(&grp.restrict(ColourKind::Arc).0)?
            };
            let table = substitution_classes(&edge_group)?;
            for (i, class) in table.classes().iter().enumerate() {
                let members: Vec<String> = class.iter().map(|c| (c + 1).to_string()).collect();
                println!("class {} : {}", i + 1, members.join(" "));
            }
            println!("c_gamma {}", table.c_gamma());
            Ok(Decided(true))
        }
        Command::Reduce { graph, group, graph_out, group_out } => {
            let (g, grp) = load_pair(&graph, &group)?;
            if !g.edges.is_empty() {
                bail!("reduce takes a graph without edges");
            }
            let bip = bipartition(&g).map_err(|w| {
                let walk: Vec<String> = w.vertices.iter().map(|v| (v + 1).to_string()).collect();
                anyhow::anyhow!("graph is not bipartite: odd closed walk {}", walk.join(" "))
            })?;
            let reduced = arcs_to_edges(&g, &bip)?;
            let translated = arc_group_to_edge_group(&grp.restrict(ColourKind::Arc).0)?;
            emit(&write_graph(&reduced), graph_out.as_deref())?;
            emit(&write_group(translated.m(), 0, translated.generators()), group_out.as_deref())?;
            Ok(Decided(true))
        }
        Command::Gadget { edge_list, m, n } => {
            let (count, edges) =
                parse_edge_list(&read(&edge_list)?).with_context(|| format!("in {}", edge_list.display()))?;
            print!("{}", write_graph(&np_gadget(count, &edges, m, n)?));
            Ok(Decided(true))
        }
        Command::Oracle { graph, group, states, cap } => {
            let (g, grp) = load_pair(&graph, &group)?;
            let report = oracle_report(&g, &grp, cap)?;
            let yes = match report.verdict {
                OracleVerdict::Yes(y) => {
                    print!("{}", write_certificate(&Certificate::Yes(y)));
                    true
                }
                OracleVerdict::No => {
                    println!("cert no exhaustive");
                    false
                }
            };
            if states {
                println!("# states {}", report.states);
            }
            Ok(Decided(yes))
        }
    }
}
