//! The Tarski Laplacian and the harmonic flow.
//!
//! In degree `k` the Laplacian sends a cochain `x` to
//!
//! ```text
//! (L x)_σ = ⋀_{τ ∈ δσ} upper_{σ⋖τ}( ⋀_{σ' ∈ ∂τ} lower_{σ'⋖τ}(x_{σ'}) )
//! ```
//!
//! An empty meet is the stalk top, so cells with no cofaces (in particular all
//! top-dimensional cells) map to `1` and top-degree cohomology is all of `C^k`.
//! Tarski cohomology is `Post(L_k) = Fix(id ∧ L_k)`; in degree 0 it is the set
//! of global sections.

use crate::fixed::{FixedPointKind, FixedPointSet, Mode};
use crate::lattice::Elem;
use crate::sheaf::{Cochain, LatticeSheaf};
use crate::{Error, Result};

pub fn tarski_laplacian(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<Cochain> {
    sheaf.check_degree(x, k)?;
    let complex = sheaf.complex();
    let values = complex
        .skeleton(k)
        .iter()
        .map(|&s| {
            let stalk = sheaf.stalk(s);
            sheaf.up_links(s).fold(stalk.top(), |acc, (t, r)| {
                let cofacet = sheaf.stalk(t);
                let agreed = sheaf
                    .down_links(t)
                    .fold(cofacet.top(), |m, (s2, r2)| {
                        cofacet.meet(m, r2.lower(sheaf.value_at(x, s2)))
                    });
                stalk.meet(acc, r.upper(agreed))
            })
        })
        .collect();
    Ok(Cochain::from_raw(k, values))
}

/// The two halves of the Laplacian evaluated separately: the expanding part
/// `⋀_τ upper(lower(x_σ))` and the mixing part built from the other facets
/// of each coface. Their meet equals [`tarski_laplacian`].
pub fn laplacian_parts(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<(Cochain, Cochain)> {
    sheaf.check_degree(x, k)?;
    let mut expanding = Vec::with_capacity(x.len());
    let mut mixing = Vec::with_capacity(x.len());
    for &s in sheaf.complex().skeleton(k) {
        let stalk = sheaf.stalk(s);
        let xs = sheaf.value_at(x, s);
        let mut e: Elem = stalk.top();
        let mut m: Elem = stalk.top();
        for (t, r) in sheaf.up_links(s) {
            e = stalk.meet(e, r.upper(r.lower(xs)));
            for (s2, r2) in sheaf.down_links(t) {
                if s2 != s {
                    m = stalk.meet(m, r.upper(r2.lower(sheaf.value_at(x, s2))));
                }
            }
        }
        expanding.push(e);
        mixing.push(m);
    }
    Ok((Cochain::from_raw(k, expanding), Cochain::from_raw(k, mixing)))
}

/// One step of the flow, `x ∧ L_k(x)`.
pub fn harmonic_step(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<Cochain> {
    let lx = tarski_laplacian(sheaf, k, x)?;
    sheaf.cochain_meet(x, &lx)
}

/// Updates a single `k`-cell: `x_σ ← x_σ ∧ (L_k x)_σ`. Returns whether the
/// value changed.
pub fn local_step(sheaf: &LatticeSheaf, k: usize, x: &mut Cochain, position: usize) -> Result<bool> {
    let lx = tarski_laplacian(sheaf, k, x)?;
    let stalk = sheaf.kstalk(k, position);
    let old = x.values()[position];
    let new = stalk.meet(old, lx.values()[position]);
    if new == old {
        return Ok(false);
    }
    let mut values = x.values().to_vec();
    values[position] = new;
    *x = Cochain::from_raw(k, values);
    Ok(true)
}

pub fn is_tarski_fixed(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<bool> {
    let lx = tarski_laplacian(sheaf, k, x)?;
    sheaf.cochain_leq(x, &lx)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlowOptions {
    /// Cap on the number of changing steps. Defaults to the height of `C^k`
    /// plus one, which a finite flow can never reach.
    pub max_steps: Option<usize>,
    pub keep_trajectory: bool,
}

impl FlowOptions {
    pub fn with_trajectory() -> Self {
        Self {
            max_steps: None,
            keep_trajectory: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub degree: usize,
    pub final_cochain: Cochain,
    /// Number of steps that changed the cochain: the least `T` with
    /// `Φ_T(x) = Φ_{T+1}(x)`.
    pub steps: usize,
    /// Laplacian evaluations performed, including the final one that
    /// confirmed the fixed point (`steps + 1`).
    pub evaluations: usize,
    pub converged: bool,
    /// Initial cochain followed by each changed state, when requested.
    pub trajectory: Option<Vec<Cochain>>,
}

/// Iterates [`harmonic_step`] until the cochain stops changing.
pub fn harmonic_flow(
    sheaf: &LatticeSheaf,
    k: usize,
    x: &Cochain,
    options: FlowOptions,
) -> Result<FlowResult> {
    sheaf.check_degree(x, k)?;
    let bound = options
        .max_steps
        .unwrap_or_else(|| sheaf.cochain_height(k) + 1);
    let mut current = x.clone();
    let mut trajectory = options.keep_trajectory.then(|| vec![x.clone()]);
    let mut steps = 0;
    loop {
        let next = harmonic_step(sheaf, k, &current)?;
        if next == current {
            break;
        }
        steps += 1;
        if steps > bound {
            return Err(Error::StepBoundExceeded { bound });
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(next.clone());
        }
        current = next;
    }
    Ok(FlowResult {
        degree: k,
        final_cochain: current,
        steps,
        evaluations: steps + 1,
        converged: true,
        trajectory,
    })
}

/// `TarH^k = Post(L_k)`.
pub fn tarski_cohomology(sheaf: &LatticeSheaf, k: usize, mode: Mode) -> Result<FixedPointSet> {
    FixedPointSet::compute(sheaf, FixedPointKind::Tarski, k, mode)
}

fn check_fixed(sheaf: &LatticeSheaf, k: usize, xs: &[Cochain]) -> Result<()> {
    for (index, x) in xs.iter().enumerate() {
        if !is_tarski_fixed(sheaf, k, x)? {
            return Err(Error::NotAFixedPoint { index });
        }
    }
    Ok(())
}

/// Join inside `TarH^k`: the coordinatewise join, which stays a fixed point.
pub fn section_join(sheaf: &LatticeSheaf, k: usize, xs: &[Cochain]) -> Result<Cochain> {
    check_fixed(sheaf, k, xs)?;
    xs.iter()
        .try_fold(sheaf.bottom_cochain(k), |acc, x| sheaf.cochain_join(&acc, x))
}

/// Meet inside `TarH^k`: the greatest fixed point below the coordinatewise
/// meet, reached by flowing down from it. The empty meet is the maximum.
pub fn section_meet(sheaf: &LatticeSheaf, k: usize, xs: &[Cochain]) -> Result<Cochain> {
    check_fixed(sheaf, k, xs)?;
    let start = xs
        .iter()
        .try_fold(sheaf.top_cochain(k), |acc, x| sheaf.cochain_meet(&acc, x))?;
    Ok(harmonic_flow(sheaf, k, &start, FlowOptions::default())?.final_cochain)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::CellComplex;
    use crate::lattice::FiniteLattice;

    const A: Elem = 0b01;
    const B: Elem = 0b10;
    const AB: Elem = 0b11;

    fn powerset_path() -> LatticeSheaf {
        let x = CellComplex::graph(&["u", "v", "w"], &[("e1", "u", "v"), ("e2", "v", "w")]).unwrap();
        LatticeSheaf::constant(Arc::new(x), Arc::new(FiniteLattice::powerset(2).unwrap())).unwrap()
    }

    #[test]
    fn path_laplacian_closed_form() {
        let s = powerset_path();
        let p = s.stalk(0).clone();
        for x in s.all_cochains(0).unwrap() {
            let v = x.values();
            let expected = vec![
                p.meet(v[0], v[1]),
                p.meet_of([v[0], v[1], v[2]]),
                p.meet(v[1], v[2]),
            ];
            assert_eq!(tarski_laplacian(&s, 0, &x).unwrap().values(), &expected[..]);
        }
    }

    #[test]
    fn isolated_vertex_and_top_degree() {
        let x = CellComplex::graph(&["a", "b", "c"], &[("e", "a", "b")]).unwrap();
        let s = LatticeSheaf::constant(Arc::new(x), Arc::new(FiniteLattice::chain(3).unwrap()))
            .unwrap();
        let lx = tarski_laplacian(&s, 0, &s.bottom_cochain(0)).unwrap();
        assert_eq!(lx.values()[2], 2);
        let l1 = tarski_laplacian(&s, 1, &s.bottom_cochain(1)).unwrap();
        assert_eq!(l1, s.top_cochain(1));
        assert!(matches!(
            tarski_laplacian(&s, 1, &s.bottom_cochain(0)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn single_steps() {
        let s = powerset_path();
        let x = s.cochain(0, vec![A, AB, B]).unwrap();
        assert_eq!(harmonic_step(&s, 0, &x).unwrap().values(), &[A, 0, B]);
        let sec = s.uniform_cochain(0, B).unwrap();
        assert_eq!(harmonic_step(&s, 0, &sec).unwrap(), sec);
        let bottom = s.bottom_cochain(0);
        assert_eq!(harmonic_step(&s, 0, &bottom).unwrap(), bottom);
    }

    #[test]
    fn flows() {
        let s = powerset_path();
        let x = s.cochain(0, vec![A, AB, B]).unwrap();
        let r = harmonic_flow(&s, 0, &x, FlowOptions::with_trajectory()).unwrap();
        assert_eq!(r.final_cochain, s.bottom_cochain(0));
        assert_eq!(r.steps, 2);
        assert_eq!(r.evaluations, 3);
        assert_eq!(r.trajectory.unwrap().len(), 3);

        let top = harmonic_flow(&s, 0, &s.top_cochain(0), FlowOptions::default()).unwrap();
        assert_eq!(top.final_cochain, s.top_cochain(0));
        assert_eq!((top.steps, top.evaluations), (0, 1));

        let tight = FlowOptions {
            max_steps: Some(1),
            keep_trajectory: false,
        };
        assert!(matches!(
            harmonic_flow(&s, 0, &x, tight),
            Err(Error::StepBoundExceeded { bound: 1 })
        ));
    }

    #[test]
    fn local_updates() {
        let s = powerset_path();
        let mut x = s.cochain(0, vec![A, AB, B]).unwrap();
        assert!(!local_step(&s, 0, &mut x, 0).unwrap());
        assert!(local_step(&s, 0, &mut x, 1).unwrap());
        assert_eq!(x.values(), &[A, 0, B]);
    }

    #[test]
    fn decomposition_matches() {
        let s = powerset_path();
        for x in s.all_cochains(0).unwrap() {
            let (e, m) = laplacian_parts(&s, 0, &x).unwrap();
            assert_eq!(s.cochain_meet(&e, &m).unwrap(), tarski_laplacian(&s, 0, &x).unwrap());
        }
    }

    #[test]
    fn cohomology_of_constant_sheaf() {
        let s = powerset_path();
        let th = tarski_cohomology(&s, 0, Mode::Enumerate).unwrap();
        assert_eq!(th.members.as_ref().unwrap(), &s.sections_bruteforce().unwrap());
        assert_eq!(th.len(), Some(4));
        assert_eq!(th.max, s.top_cochain(0));
        let th1 = tarski_cohomology(&s, 1, Mode::Enumerate).unwrap();
        assert_eq!(th1.len(), Some(16));
        let summary = tarski_cohomology(&s, 0, Mode::Summary).unwrap();
        assert!(!summary.is_complete());
        assert!(summary
            .contains(&s, &s.uniform_cochain(0, A).unwrap())
            .unwrap());
    }

    #[test]
    fn quasi_sublattice_operations() {
        let s = powerset_path();
        let secs = s.sections_bruteforce().unwrap();
        assert_eq!(section_join(&s, 0, &secs).unwrap(), s.top_cochain(0));
        let a = s.uniform_cochain(0, A).unwrap();
        let b = s.uniform_cochain(0, B).unwrap();
        assert_eq!(section_meet(&s, 0, &[a.clone(), b]).unwrap(), s.bottom_cochain(0));
        assert_eq!(section_meet(&s, 0, &[]).unwrap(), s.top_cochain(0));
        let bad = s.cochain(0, vec![A, AB, B]).unwrap();
        assert!(matches!(
            section_join(&s, 0, &[a, bad]),
            Err(Error::NotAFixedPoint { index: 1 })
        ));
    }
}
