//! Batch command-line front end: every subcommand builds or imports a
//! structure, runs the requested verification, and emits one deterministic
//! JSON report. Exit codes: 0 on pass, 1 on a verification failure, 2 on
//! invalid input.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use gkm::error::GkmError;
use gkm::fibration::{
    build_homogeneous_fibration, check_balanced, holonomy_group, product_basis,
    verify_chang_skjelbred, GKMFibration,
};
use gkm::graph::{build_homogeneous_graph, module_generators};
use gkm::json;

use gkm::tower::{build_tower, iterated_invariant_basis};
use gkm::weyl::{
    coset_space, full_subset, parse_simple_subset, poincare_polynomial, RootSystem, Series,
};
use gkm::Result;

#[derive(Parser)]
#[command(
    name = "gkm",
    about = "Equivariant cohomology of GKM graphs and fiber bundles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on enumerated group orders (also GKM_MAX_GROUP_ORDER).
    #[arg(long, global = true)]
    max_group_order: Option<usize>,
}

#[derive(Args)]
struct GroupArgs {
    /// Root system series: A, B, C or D.
    #[arg(long)]
    series: String,
    /// Rank of the root system.
    #[arg(long)]
    rank: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Positive roots and coroots; with --k also the coset data of G/K.
    Rootsys {
        #[command(flatten)]
        group: GroupArgs,
        /// Isotropy as 1-based simple root indices, e.g. "2" or "2,3".
        #[arg(long)]
        k: Option<String>,
    },
    /// The GKM graph of G/K, or validation of an imported graph.
    Graph {
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value = "")]
        k: String,
        /// Import a graph JSON file instead of building one.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Graded module generators of the congruence ring of G/K.
    Basis {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value = "")]
        k: String,
        #[arg(long, default_value_t = gkm::DEFAULT_MAX_DEGREE)]
        max_degree: u32,
    },
    /// The bundle G/K1 -> G/K with its balance verification.
    Fibration {
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value = "")]
        k1: String,
        #[arg(long, default_value = "")]
        k: String,
        /// Import a fibration JSON file instead of building one.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Holonomy group of a bundle at a base point.
    Holonomy {
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value = "")]
        k1: String,
        #[arg(long, default_value = "")]
        k: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        base_point: usize,
    },
    /// Compare the total-space congruence ring with the fiberwise one.
    #[command(name = "verify-cs")]
    VerifyCs {
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value = "")]
        k1: String,
        #[arg(long, default_value = "")]
        k: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = gkm::DEFAULT_MAX_DEGREE)]
        max_degree: u32,
    },
    /// Verify the tensor-product module basis of a bundle.
    #[command(name = "verify-tensor")]
    VerifyTensor {
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value = "")]
        k1: String,
        #[arg(long, default_value = "")]
        k: String,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = gkm::DEFAULT_MAX_DEGREE)]
        max_degree: u32,
    },
    /// Build the iterated flag tower and verify its invariant basis.
    Tower {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = gkm::DEFAULT_MAX_DEGREE)]
        max_degree: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.max_group_order.unwrap_or_else(gkm::max_group_order);
    match run(&cli, cap) {
        Ok((report, pass)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report + "\n") {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            } else {
                println!("{report}");
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                GkmError::VerificationFailure(_) | GkmError::InternalInconsistency(_) => {
                    ExitCode::from(1)
                }
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli, cap: usize) -> Result<(String, bool)> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Rootsys { group, k } => {
            let rs = root_system(&group.series, group.rank)?;
            let mut doc = json::RootSystemDocJson {
                schema: json::SCHEMA_VERSION,
                root_system: json::root_system_to_json(&rs),
                cosets: None,
                poincare: None,
            };
            if let Some(k) = k {
                let subset = parse_simple_subset(k, rs.rank)?;
                let cs = coset_space(&rs, &full_subset(rs.rank), &subset, cap)?;
                doc.poincare = Some(poincare_polynomial(&cs));
                doc.cosets = Some(json::cosets_to_json(&cs));
            }
            Ok((json::to_string(&doc, pretty)?, true))
        }
        Command::Graph {
            series,
            rank,
            k,
            input,
        } => {
            let graph = match input {
                Some(path) => json::graph_from_json(&read_json(path)?)?,
                None => {
                    let rs = group_of(series, rank)?;
                    let subset = parse_simple_subset(k, rs.rank)?;
                    build_homogeneous_graph(&rs, &subset, cap)?.graph
                }
            };
            Ok((json::to_string(&json::graph_to_json(&graph), pretty)?, true))
        }
        Command::Basis {
            group,
            k,
            max_degree,
        } => {
            let rs = root_system(&group.series, group.rank)?;
            let subset = parse_simple_subset(k, rs.rank)?;
            let hg = build_homogeneous_graph(&rs, &subset, cap)?;
            let basis = module_generators(&hg.graph, *max_degree, None)?;
            let doc = json::basis_report_to_json(&hg.graph, &basis.report, &basis.generators);
            Ok((json::to_string(&doc, pretty)?, true))
        }
        Command::Fibration {
            series,
            rank,
            k1,
            k,
            input,
        } => {
            let fib = load_fibration(series, rank, k1, k, input, cap)?;
            let balance = check_balanced(&fib);
            let pass = balance.pass();
            let doc = json::FibrationDocJson {
                schema: json::SCHEMA_VERSION,
                fibration: json::fibration_to_json(&fib),
                balance: json::balance_report_to_json(&balance),
            };
            Ok((json::to_string(&doc, pretty)?, pass))
        }
        Command::Holonomy {
            series,
            rank,
            k1,
            k,
            input,
            base_point,
        } => {
            let fib = load_fibration(series, rank, k1, k, input, cap)?;
            let group = holonomy_group(&fib, *base_point, cap)?;
            let doc = json::holonomy_report_to_json(&group);
            Ok((json::to_string(&doc, pretty)?, true))
        }
        Command::VerifyCs {
            series,
            rank,
            k1,
            k,
            input,
            max_degree,
        } => {
            let fib = load_fibration(series, rank, k1, k, input, cap)?;
            let report = verify_chang_skjelbred(&fib, *max_degree)?;
            let pass = report.pass();
            Ok((
                json::to_string(&json::cs_report_to_json(&report), pretty)?,
                pass,
            ))
        }
        Command::VerifyTensor {
            series,
            rank,
            k1,
            k,
            input,
            max_degree,
        } => {
            let fib = load_fibration(series, rank, k1, k, input, cap)?;
            let (_, report) = product_basis(&fib, *max_degree, cap)?;
            let pass = report.pass();
            Ok((
                json::to_string(&json::product_report_to_json(&report), pretty)?,
                pass,
            ))
        }
        Command::Tower { group, max_degree } => {
            let rs = root_system(&group.series, group.rank)?;
            let tower = build_tower(rs.series, rs.rank)?;
            let (_, report) = iterated_invariant_basis(&rs, &tower, *max_degree, cap)?;
            let pass = report.pass();
            Ok((
                json::to_string(&json::tower_report_to_json(&report), pretty)?,
                pass,
            ))
        }
    }
}

fn root_system(series: &str, rank: usize) -> Result<RootSystem> {
    RootSystem::build(Series::from_str(series)?, rank)
}

fn group_of(series: &Option<String>, rank: &Option<usize>) -> Result<RootSystem> {
    match (series, rank) {
        (Some(s), Some(r)) => root_system(s, *r),
        _ => Err(GkmError::InvalidArgument(
            "--series and --rank are required unless --in is given".into(),
        )),
    }
}

fn load_fibration(
    series: &Option<String>,
    rank: &Option<usize>,
    k1: &str,
    k: &str,
    input: &Option<PathBuf>,
    cap: usize,
) -> Result<GKMFibration> {
    match input {
        Some(path) => json::fibration_from_json(&read_json(path)?),
        None => {
            let rs = group_of(series, rank)?;
            let k1 = parse_simple_subset(k1, rs.rank)?;
            let k = parse_simple_subset(k, rs.rank)?;
            Ok(build_homogeneous_fibration(&rs, &k1, &k, cap)?.fibration)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
