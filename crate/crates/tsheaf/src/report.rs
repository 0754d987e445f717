//! Serializable views of core results. Every top-level document carries
//! `format: 1`.

use serde::Serialize;

use tsheaf_core::grassmann::{GrandisInterval, Subspace, VecCohomology};
use tsheaf_core::sheaf::LatticeSheaf;
use tsheaf_core::tarski::FlowResult;
use tsheaf_core::FixedPointSet;

use crate::spec::{cochain_spec, CochainSpec};

pub const FORMAT: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct FixedSetReport {
    pub theory: &'static str,
    pub degree: usize,
    pub complete: bool,
    pub size: Option<usize>,
    pub max: CochainSpec,
    pub min: CochainSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<CochainSpec>>,
}

impl FixedSetReport {
    pub fn new(sheaf: &LatticeSheaf, set: &FixedPointSet, with_members: bool) -> Self {
        Self {
            theory: set.kind.name(),
            degree: set.degree,
            complete: set.is_complete(),
            size: set.len(),
            max: cochain_spec(sheaf, &set.max),
            min: cochain_spec(sheaf, &set.min),
            members: with_members
                .then(|| set.members.as_ref())
                .flatten()
                .map(|m| m.iter().map(|x| cochain_spec(sheaf, x)).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub degree: usize,
    pub steps: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub is_section: Option<bool>,
    #[serde(rename = "final")]
    pub final_cochain: CochainSpec,
}

impl FlowReport {
    pub fn new(sheaf: &LatticeSheaf, flow: &FlowResult) -> tsheaf_core::Result<Self> {
        Ok(Self {
            degree: flow.degree,
            steps: flow.steps,
            evaluations: flow.evaluations,
            converged: flow.converged,
            is_section: if flow.degree == 0 {
                Some(sheaf.is_section(&flow.final_cochain)?)
            } else {
                None
            },
            final_cochain: cochain_spec(sheaf, &flow.final_cochain),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VecCohomologyReport {
    pub degree: usize,
    pub betti: usize,
    pub ker_basis: Vec<Vec<u32>>,
    pub im_basis: Vec<Vec<u32>>,
}

impl From<&VecCohomology> for VecCohomologyReport {
    fn from(h: &VecCohomology) -> Self {
        Self {
            degree: h.degree,
            betti: h.betti,
            ker_basis: h.kernel.basis().to_vec(),
            im_basis: h.image.basis().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrandisReport {
    pub degree: usize,
    pub lo: Vec<Vec<u32>>,
    pub hi: Vec<Vec<u32>>,
    pub height: usize,
    pub trivial: bool,
    /// Height of the interval read off the enumerated subspace lattice.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_height: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}

impl GrandisReport {
    pub fn new(g: &GrandisInterval, members: Option<&[Subspace]>) -> Self {
        Self {
            degree: g.degree,
            lo: g.lo.basis().to_vec(),
            hi: g.hi.basis().to_vec(),
            height: g.height,
            trivial: g.is_trivial(),
            lattice_height: g.lattice_height(),
            size: members.map(<[Subspace]>::len),
        }
    }
}
