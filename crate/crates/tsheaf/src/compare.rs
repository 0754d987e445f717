//! Side-by-side sizes of the cohomology theories, degree by degree, with the
//! inclusions `GH^0 ⊆ TH^0` and `TH^k ⊆ +HH^k` checked on enumerated sets.

use std::collections::BTreeSet;

use serde::Serialize;

use tsheaf_core::grassmann::{grandis_cohomology, GrandisInterval, Subspace, Transfer, VecSheaf};
use tsheaf_core::hodge::{hodge_cohomology, HodgeSide};
use tsheaf_core::sheaf::Cochain;
use tsheaf_core::tarski::tarski_cohomology;
use tsheaf_core::{Error, FixedPointSet, Mode};

use crate::report::{FixedSetReport, GrandisReport, FORMAT};
use crate::spec::{cochain_spec, CochainSpec, Loaded};

/// Cap on the Grandis interval members listed for the inclusion check.
pub const GRANDIS_MEMBER_LIMIT: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub tarski: FixedSetReport,
    pub hodge_upper: FixedSetReport,
    pub hodge_lower: FixedSetReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grandis: Option<GrandisReport>,
    /// `TH^k ⊆ +HH^k`; absent when the sets were not enumerated.
    pub tarski_in_hodge_upper: Option<bool>,
    pub tarski_strictly_in_hodge_upper: Option<bool>,
    /// Least member of `+HH^k` outside `TH^k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hodge_upper_witness: Option<CochainSpec>,
    /// `GH^0 ⊆ TH^0` via stalkwise projection; degree 0 of vector specs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grandis_in_tarski: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grandis_strictly_in_tarski: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub format: u32,
    pub kind: &'static str,
    pub degrees: Vec<DegreeComparison>,
    pub notes: Vec<String>,
}

fn fixed(
    k: usize,
    mode: Mode,
    notes: &mut Vec<String>,
    f: impl Fn(Mode) -> tsheaf_core::Result<FixedPointSet>,
) -> tsheaf_core::Result<FixedPointSet> {
    match f(mode) {
        Err(Error::SizeLimitExceeded { size, limit, .. }) if mode == Mode::Enumerate => {
            notes.push(format!(
                "degree {k}: C^{k} has {size} cochains, over the limit {limit}; reporting extremal members only"
            ));
            f(Mode::Summary)
        }
        other => other,
    }
}

fn grandis_part(
    vec: &VecSheaf,
    transfer: &Transfer,
    k: usize,
    tarski: &FixedPointSet,
    notes: &mut Vec<String>,
) -> tsheaf_core::Result<(GrandisReport, Option<bool>, Option<bool>)> {
    let g: GrandisInterval = match grandis_cohomology(vec, k, Mode::Enumerate) {
        Err(Error::SizeLimitExceeded { .. }) => {
            notes.push(format!("degree {k}: Gr(C^{k}) too large to enumerate; Grandis height from ranks"));
            grandis_cohomology(vec, k, Mode::Summary)?
        }
        other => other?,
    };
    let members: Option<Vec<Subspace>> = match g.members(GRANDIS_MEMBER_LIMIT) {
        Ok(m) => Some(m),
        Err(Error::SizeLimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let report = GrandisReport::new(&g, members.as_deref());
    if k != 0 {
        return Ok((report, None, None));
    }
    let (Some(members), Some(th)) = (members, tarski.members.as_ref()) else {
        return Ok((report, None, None));
    };
    let sheaf = &transfer.sheaf;
    let mut image = BTreeSet::new();
    let mut inside = true;
    for w in &members {
        let x = transfer.cochain_of(vec, 0, w)?;
        inside &= tarski.contains(sheaf, &x)?;
        image.insert(x);
    }
    let strict = inside && image.len() < th.len();
    Ok((report, Some(inside), Some(strict)))
}

pub fn compare(loaded: &Loaded, mode: Mode) -> tsheaf_core::Result<CompareReport> {
    let sheaf = loaded.sheaf();
    let mut notes = Vec::new();
    let mut degrees = Vec::new();
    for k in 0..=sheaf.complex().dim().unwrap_or(0) {
        let th = fixed(k, mode, &mut notes, |m| tarski_cohomology(sheaf, k, m))?;
        let up = fixed(k, mode, &mut notes, |m| hodge_cohomology(sheaf, k, HodgeSide::Upper, m))?;
        let down = fixed(k, mode, &mut notes, |m| hodge_cohomology(sheaf, k, HodgeSide::Lower, m))?;

        let (mut included, mut strict, mut witness) = (None, None, None);
        if let (Some(t), Some(u)) = (th.members.as_ref(), up.members.as_ref()) {
            let inside = t.iter().all(|x| u.binary_search(x).is_ok());
            let extra: Option<&Cochain> = u.iter().find(|x| t.binary_search(x).is_err());
            included = Some(inside);
            strict = Some(inside && extra.is_some());
            witness = extra.map(|x| cochain_spec(sheaf, x));
        }

        let (mut grandis, mut gh_in, mut gh_strict) = (None, None, None);
        if let Some((vec, transfer)) = loaded.vec() {
            let (g, i, s) = grandis_part(vec, transfer, k, &th, &mut notes)?;
            grandis = Some(g);
            gh_in = i;
            gh_strict = s;
        }

        degrees.push(DegreeComparison {
            degree: k,
            tarski: FixedSetReport::new(sheaf, &th, false),
            hodge_upper: FixedSetReport::new(sheaf, &up, false),
            hodge_lower: FixedSetReport::new(sheaf, &down, false),
            grandis,
            tarski_in_hodge_upper: included,
            tarski_strictly_in_hodge_upper: strict,
            hodge_upper_witness: witness,
            grandis_in_tarski: gh_in,
            grandis_strictly_in_tarski: gh_strict,
        });
    }
    Ok(CompareReport {
        format: FORMAT,
        kind: match loaded {
            Loaded::Lattice(_) => "lattice",
            Loaded::Vector { .. } => "vector",
        },
        degrees,
        notes,
    })
}
