use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use tsheaf_core::grassmann::{grandis_cohomology, vec_cohomology};
use tsheaf_core::hodge::{hodge_cohomology, HodgeSide};
use tsheaf_core::sheaf::{Cochain, LatticeSheaf};
use tsheaf_core::tarski::{self, FlowOptions};
use tsheaf_core::{Limits, Mode};

use crate::compare::compare;
use crate::error::{ToolError, ToolResult, WithPath};
use crate::report::{FixedSetReport, FlowReport, GrandisReport, VecCohomologyReport, FORMAT};
use crate::sim::{simulate, Schedule, SimConfig};
use crate::spec::{self, cochain_spec, transferred_spec, Loaded};

pub const ENUM_LIMIT_VAR: &str = "TSHEAF_ENUM_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "tsheaf", version, about = "Lattice-valued cellular sheaves: sections, cohomology, flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a spec and summarize it.
    Check {
        #[command(flatten)]
        common: Common,
        /// Write the complex and stalk Hasse diagrams as Graphviz.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Global sections of a lattice sheaf.
    Sections {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "enumerate")]
        mode: ModeArg,
    },
    /// Tarski and Hodge cohomology in one degree, plus vector-space and
    /// Grandis cohomology for vector specs.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, value_enum, default_value = "enumerate")]
        mode: ModeArg,
    },
    /// Run the harmonic flow from a cochain (default: the top cochain).
    Flow {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        /// Cochain file `{degree, values: {cell: element}}`.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Write the trajectory as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the lattice sheaf induced by a vector spec, as a lattice spec.
    Transfer {
        #[command(flatten)]
        common: Common,
    },
    /// Sizes and inclusions of all cohomology theories, per degree.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "enumerate")]
        mode: ModeArg,
    },
    /// Simulate the flow as a network, synchronously or asynchronously.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "sync")]
        schedule: ScheduleArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        max_rounds: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Enumerate,
    Summary,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Enumerate => Mode::Enumerate,
            ModeArg::Summary => Mode::Summary,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScheduleArg {
    Sync,
    Async,
}

fn limits() -> ToolResult<Limits> {
    match std::env::var(ENUM_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|enumeration| Limits { enumeration })
            .map_err(|_| ToolError::Usage(format!("{ENUM_LIMIT_VAR}={v:?} is not a number"))),
        Err(_) => Ok(Limits::default()),
    }
}

fn load(common: &Common) -> ToolResult<(String, Loaded)> {
    let loaded = spec::load(&common.spec)?.with_limits(limits()?);
    Ok((common.spec.display().to_string(), loaded))
}

fn write_file(path: &Path, contents: &[u8]) -> ToolResult<()> {
    std::fs::write(path, contents).map_err(|e| ToolError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> ToolResult<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(out, "{text}").map_err(|e| ToolError::Io {
        path: "<stdout>".into(),
        message: e.to_string(),
    })
}

fn start(sheaf: &LatticeSheaf, k: usize, from: Option<&Path>) -> ToolResult<Cochain> {
    match from {
        Some(p) => {
            let name = p.display().to_string();
            let x = spec::parse_cochain(&name, &spec::read(p)?, sheaf)?;
            if x.degree() != k {
                return Err(ToolError::core(
                    &name,
                    tsheaf_core::Error::DegreeMismatch {
                        expected: k,
                        got: x.degree(),
                    },
                ));
            }
            Ok(x)
        }
        None => Ok(sheaf.top_cochain(k)),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> ToolResult<()> {
    match cli.command {
        Command::Check { common, dot } => {
            let (path, loaded) = load(&common)?;
            let sheaf = loaded.sheaf();
            let complex = sheaf.complex();
            if let Some(dot) = dot {
                let mut text = complex.to_dot("complex");
                let mut seen: Vec<&tsheaf_core::lattice::FiniteLattice> = Vec::new();
                for (c, stalk) in sheaf.stalks().iter().enumerate() {
                    if !seen.iter().any(|s| *s == stalk.as_ref()) {
                        seen.push(stalk);
                        text.push_str(&stalk.to_dot(&format!("stalk {}", complex.cell(c).id)));
                    }
                }
                write_file(&dot, text.as_bytes())?;
            }
            let counts: Vec<usize> = (0..=complex.dim().unwrap_or(0)).map(|k| complex.count(k)).collect();
            let stalks: serde_json::Map<String, serde_json::Value> = complex
                .cells()
                .iter()
                .enumerate()
                .map(|(c, cell)| {
                    let s = sheaf.stalk(c);
                    (cell.id.clone(), json!({"size": s.len(), "height": s.height()}))
                })
                .collect();
            let mut doc = json!({
                "format": FORMAT,
                "spec": path,
                "valid": true,
                "kind": if loaded.vec().is_some() { "vector" } else { "lattice" },
                "cells_per_degree": counts,
                "restrictions": sheaf.restrictions().count(),
                "stalks": stalks,
            });
            if let Some((vec, _)) = loaded.vec() {
                doc["p"] = json!(vec.p());
            }
            emit(out, &doc)
        }
        Command::Sections { common, mode } => {
            let (path, loaded) = load(&common)?;
            let sheaf = loaded.sheaf();
            let set = tarski::tarski_cohomology(sheaf, 0, mode.into()).at(&path)?;
            emit(
                out,
                &json!({"format": FORMAT, "sections": FixedSetReport::new(sheaf, &set, true)}),
            )
        }
        Command::Cohomology { common, degree, mode } => {
            let (path, loaded) = load(&common)?;
            let sheaf = loaded.sheaf();
            let mode: Mode = mode.into();
            let th = tarski::tarski_cohomology(sheaf, degree, mode).at(&path)?;
            let up = hodge_cohomology(sheaf, degree, HodgeSide::Upper, mode).at(&path)?;
            let down = hodge_cohomology(sheaf, degree, HodgeSide::Lower, mode).at(&path)?;
            let mut doc = json!({
                "format": FORMAT,
                "degree": degree,
                "tarski": FixedSetReport::new(sheaf, &th, true),
                "hodge_upper": FixedSetReport::new(sheaf, &up, true),
                "hodge_lower": FixedSetReport::new(sheaf, &down, true),
            });
            if let Some((vec, _)) = loaded.vec() {
                let h = vec_cohomology(vec, degree).at(&path)?;
                let g = grandis_cohomology(vec, degree, Mode::Summary).at(&path)?;
                doc["vector"] = json!(VecCohomologyReport::from(&h));
                doc["grandis"] = json!(GrandisReport::new(&g, None));
            }
            emit(out, &doc)
        }
        Command::Flow {
            common,
            degree,
            from,
            trace,
        } => {
            let (path, loaded) = load(&common)?;
            let sheaf = loaded.sheaf();
            let x = start(sheaf, degree, from.as_deref())?;
            let options = FlowOptions {
                keep_trajectory: trace.is_some(),
                ..Default::default()
            };
            let flow = tarski::harmonic_flow(sheaf, degree, &x, options).at(&path)?;
            if let (Some(t), Some(traj)) = (trace, flow.trajectory.as_ref()) {
                let mut text = String::new();
                for (i, y) in traj.iter().enumerate() {
                    let line = json!({"step": i, "cochain": cochain_spec(sheaf, y)});
                    text.push_str(&line.to_string());
                    text.push('\n');
                }
                write_file(&t, text.as_bytes())?;
            }
            let report = FlowReport::new(sheaf, &flow).at(&path)?;
            emit(out, &json!({"format": FORMAT, "flow": report}))
        }
        Command::Transfer { common } => {
            let (path, loaded) = load(&common)?;
            let Some((vec, transfer)) = loaded.vec() else {
                return Err(ToolError::parse(&path, "p", "transfer needs a vector-space spec"));
            };
            let betti = (0..=vec.complex().dim().unwrap_or(0))
                .map(|k| vec_cohomology(vec, k).map(|h| h.betti))
                .collect::<tsheaf_core::Result<Vec<_>>>()
                .at(&path)?;
            emit(
                out,
                &json!({"format": FORMAT, "betti": betti, "sheaf": transferred_spec(vec, transfer)}),
            )
        }
        Command::Compare { common, mode } => {
            let (path, loaded) = load(&common)?;
            let report = compare(&loaded, mode.into()).at(&path)?;
            emit(out, &report)
        }
        Command::Simulate {
            common,
            degree,
            from,
            schedule,
            seed,
            max_rounds,
            trace,
        } => {
            let (path, loaded) = load(&common)?;
            let sheaf = loaded.sheaf();
            let x = start(sheaf, degree, from.as_deref())?;
            let cfg = SimConfig {
                schedule: match schedule {
                    ScheduleArg::Sync => Schedule::Synchronous,
                    ScheduleArg::Async => Schedule::AsyncUniform,
                },
                seed,
                max_rounds: max_rounds as usize,
                record_trace: trace.is_some(),
                degree,
            };
            let result = simulate(sheaf, &x, &cfg).at(&path)?;
            if let Some(t) = trace {
                let mut buf = Vec::new();
                result.write_jsonl(sheaf, &mut buf).expect("writing to memory");
                write_file(&t, &buf)?;
            }
            let post = result.final_is_post_fixed(sheaf).at(&path)?;
            emit(
                out,
                &json!({
                    "format": FORMAT,
                    "schedule": cfg.schedule,
                    "experimental": cfg.schedule == Schedule::AsyncUniform,
                    "seed": seed,
                    "rounds": result.rounds,
                    "checks": result.checks,
                    "converged": result.converged,
                    "status": if result.converged { "converged" } else { "max-rounds-exceeded" },
                    "final_post_fixed": post,
                    "final": cochain_spec(sheaf, &result.final_cochain),
                }),
            )
        }
    }
}
