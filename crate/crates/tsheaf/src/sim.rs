//! Network diffusion of the harmonic flow, one node per cell.
//!
//! The synchronous schedule applies the harmonic step to every cell at once
//! and reproduces `tarski::harmonic_flow`. The asynchronous schedule is an
//! experimental extension: each round one seed-chosen cell replaces its value
//! by `x_σ ∧ (L x)_σ`. It stops once every cell has been visited without any
//! change since the last update, at which point the state is a post-fixed
//! point; its final state may differ from the synchronous one.

use std::hash::Hasher;
use std::io::Write;

use fnv::FnvHasher;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tsheaf_core::sheaf::{Cochain, LatticeSheaf};
use tsheaf_core::{tarski, FixedPointKind};

/// Cochains with more coordinates than this are recorded by digest.
pub const SNAPSHOT_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    Synchronous,
    AsyncUniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub schedule: Schedule,
    pub seed: u64,
    pub max_rounds: usize,
    pub record_trace: bool,
    pub degree: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            schedule: Schedule::Synchronous,
            seed: 0,
            max_rounds: 100_000,
            record_trace: true,
            degree: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    /// Ids of the cells whose value changed.
    pub updated: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    pub schedule: Schedule,
    pub seed: u64,
    pub degree: usize,
    /// Rounds that changed the state.
    pub rounds: usize,
    /// Rounds executed, including those that changed nothing.
    pub checks: usize,
    /// One record per changing round, when recording.
    pub per_round: Vec<RoundRecord>,
    pub final_cochain: Cochain,
    pub converged: bool,
}

pub fn digest(x: &Cochain) -> String {
    let mut h = FnvHasher::default();
    h.write_usize(x.degree());
    for &v in x.values() {
        h.write_u64(v as u64);
    }
    format!("{:016x}", h.finish())
}

fn record(sheaf: &LatticeSheaf, round: usize, changed: &[usize], x: &Cochain) -> RoundRecord {
    let cells = sheaf.complex().skeleton(x.degree());
    let updated = changed
        .iter()
        .map(|&i| sheaf.complex().cell(cells[i]).id.clone())
        .collect();
    let small = x.len() <= SNAPSHOT_LIMIT;
    RoundRecord {
        round,
        updated,
        snapshot: small.then(|| x.values().to_vec()),
        digest: (!small).then(|| digest(x)),
    }
}

pub fn simulate(sheaf: &LatticeSheaf, x0: &Cochain, cfg: &SimConfig) -> tsheaf_core::Result<SimTrace> {
    let k = cfg.degree;
    if x0.degree() != k {
        return Err(tsheaf_core::Error::DegreeMismatch {
            expected: k,
            got: x0.degree(),
        });
    }
    let mut x = x0.clone();
    let mut per_round = Vec::new();
    let mut rounds = 0;
    let mut checks = 0;
    let mut converged = false;
    match cfg.schedule {
        Schedule::Synchronous => {
            while checks < cfg.max_rounds {
                checks += 1;
                let next = tarski::harmonic_step(sheaf, k, &x)?;
                if next == x {
                    converged = true;
                    break;
                }
                rounds += 1;
                if cfg.record_trace {
                    let changed: Vec<usize> = (0..x.len())
                        .filter(|&i| x.values()[i] != next.values()[i])
                        .collect();
                    per_round.push(record(sheaf, rounds, &changed, &next));
                }
                x = next;
            }
        }
        Schedule::AsyncUniform => {
            let n = x.len();
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut quiet = vec![false; n];
            let mut quiet_count = 0;
            if n == 0 {
                converged = true;
            }
            while !converged && checks < cfg.max_rounds {
                checks += 1;
                let i = rng.gen_range(0..n);
                if tarski::local_step(sheaf, k, &mut x, i)? {
                    rounds += 1;
                    quiet.iter_mut().for_each(|q| *q = false);
                    quiet_count = 0;
                    if cfg.record_trace {
                        per_round.push(record(sheaf, checks, &[i], &x));
                    }
                } else if !quiet[i] {
                    quiet[i] = true;
                    quiet_count += 1;
                    converged = quiet_count == n;
                }
            }
        }
    }
    Ok(SimTrace {
        schedule: cfg.schedule,
        seed: cfg.seed,
        degree: k,
        rounds,
        checks,
        per_round,
        final_cochain: x,
        converged,
    })
}

impl SimTrace {
    /// Whether the final state satisfies `L_k x ⪰ x`.
    pub fn final_is_post_fixed(&self, sheaf: &LatticeSheaf) -> tsheaf_core::Result<bool> {
        FixedPointKind::Tarski.contains(sheaf, self.degree, &self.final_cochain)
    }

    /// JSON lines: a header, one line per recorded round, a summary line.
    pub fn write_jsonl<W: Write>(&self, sheaf: &LatticeSheaf, out: &mut W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Header {
            format: u32,
            kind: &'static str,
            schedule: Schedule,
            seed: u64,
            degree: usize,
            experimental: bool,
        }
        #[derive(Serialize)]
        struct Round<'a> {
            kind: &'static str,
            #[serde(flatten)]
            record: &'a RoundRecord,
        }
        #[derive(Serialize)]
        struct Final {
            kind: &'static str,
            rounds: usize,
            checks: usize,
            converged: bool,
            #[serde(rename = "final")]
            final_cochain: crate::spec::CochainSpec,
        }
        line(
            out,
            &Header {
                format: 1,
                kind: "header",
                schedule: self.schedule,
                seed: self.seed,
                degree: self.degree,
                experimental: self.schedule == Schedule::AsyncUniform,
            },
        )?;
        for r in &self.per_round {
            line(out, &Round { kind: "round", record: r })?;
        }
        line(
            out,
            &Final {
                kind: "final",
                rounds: self.rounds,
                checks: self.checks,
                converged: self.converged,
                final_cochain: crate::spec::cochain_spec(sheaf, &self.final_cochain),
            },
        )
    }
}

fn line<W: Write, T: Serialize>(out: &mut W, value: &T) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")
}
