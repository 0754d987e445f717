//! The pseudo-coboundary connection and the Hodge Laplacians built from it.
//!
//! `δ̃_k : C^k → C^{k+1}` is the sum over facets of restriction-after-projection
//! connections. Its lower map joins the restricted facet values, its upper map
//! meets the upper restrictions over cofaces. Product lattices are never
//! materialized; everything is evaluated coordinatewise.

use crate::complex::CellIdx;
use crate::fixed::{FixedPointKind, FixedPointSet, Mode};
use crate::galois::Connection;
use crate::lattice::Elem;
use crate::sheaf::{Cochain, LatticeSheaf};
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct PseudoCoboundary<'a> {
    sheaf: &'a LatticeSheaf,
    degree: usize,
}

impl<'a> PseudoCoboundary<'a> {
    pub fn new(sheaf: &'a LatticeSheaf, degree: usize) -> Self {
        Self { sheaf, degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `(δ̃x)_τ = ⋁_{σ ⋖ τ} lower_{σ⋖τ}(x_σ)`.
    pub fn lower(&self, x: &Cochain) -> Result<Cochain> {
        let sheaf = self.sheaf;
        sheaf.check_degree(x, self.degree)?;
        let values = sheaf
            .complex()
            .skeleton(self.degree + 1)
            .iter()
            .map(|&t| {
                let stalk = sheaf.stalk(t);
                sheaf
                    .down_links(t)
                    .fold(stalk.bottom(), |acc, (s, r)| {
                        stalk.join(acc, r.lower(sheaf.value_at(x, s)))
                    })
            })
            .collect();
        Ok(Cochain::from_raw(self.degree + 1, values))
    }

    /// `(δ̃^• y)_σ = ⋀_{τ ⋗ σ} upper_{σ⋖τ}(y_τ)`.
    pub fn upper(&self, y: &Cochain) -> Result<Cochain> {
        let sheaf = self.sheaf;
        sheaf.check_degree(y, self.degree + 1)?;
        let values = sheaf
            .complex()
            .skeleton(self.degree)
            .iter()
            .map(|&s| {
                let stalk = sheaf.stalk(s);
                sheaf.up_links(s).fold(stalk.top(), |acc, (t, r)| {
                    stalk.meet(acc, r.upper(sheaf.value_at(y, t)))
                })
            })
            .collect();
        Ok(Cochain::from_raw(self.degree, values))
    }

    /// Tabulates both maps over the materialized cochain lattices.
    pub fn to_connection(&self, max_elements: usize) -> Result<Connection> {
        let src_shape = self.sheaf.cochain_lattice(self.degree);
        let dst_shape = self.sheaf.cochain_lattice(self.degree + 1);
        let src = std::sync::Arc::new(src_shape.materialize(max_elements)?);
        let dst = std::sync::Arc::new(dst_shape.materialize(max_elements)?);
        let mut lower = Vec::with_capacity(src.len());
        for t in src_shape.tuples() {
            let x = Cochain::from_raw(self.degree, t);
            lower.push(dst_shape.encode(self.lower(&x)?.values()));
        }
        let mut upper = Vec::with_capacity(dst.len());
        for t in dst_shape.tuples() {
            let y = Cochain::from_raw(self.degree + 1, t);
            upper.push(src_shape.encode(self.upper(&y)?.values()));
        }
        Connection::from_maps(src, dst, lower, upper)
    }
}

pub fn pseudo_coboundary(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<Cochain> {
    PseudoCoboundary::new(sheaf, k).lower(x)
}

/// `(L⁺x)_σ = ⋀_{τ ∈ δσ} upper_{σ⋖τ}( ⋁_{σ' ∈ ∂τ} lower_{σ'⋖τ}(x_{σ'}) )`.
pub fn up_laplacian(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<Cochain> {
    sheaf.check_degree(x, k)?;
    let values = sheaf
        .complex()
        .skeleton(k)
        .iter()
        .map(|&s| {
            let stalk = sheaf.stalk(s);
            sheaf.up_links(s).fold(stalk.top(), |acc, (t, r)| {
                let cofacet = sheaf.stalk(t);
                let joined = sheaf.down_links(t).fold(cofacet.bottom(), |j, (s2, r2)| {
                    cofacet.join(j, r2.lower(sheaf.value_at(x, s2)))
                });
                stalk.meet(acc, r.upper(joined))
            })
        })
        .collect();
    Ok(Cochain::from_raw(k, values))
}

/// `(L⁻x)_σ = ⋁_{ρ ∈ ∂σ} lower_{ρ⋖σ}( ⋀_{σ' ∈ δρ} upper_{ρ⋖σ'}(x_{σ'}) )`.
///
/// In degree 0 every boundary is empty, so `L⁻_0 = 𝟎` and the lower Hodge
/// cohomology is all of `C^0`.
pub fn down_laplacian(sheaf: &LatticeSheaf, k: usize, x: &Cochain) -> Result<Cochain> {
    sheaf.check_degree(x, k)?;
    let values = sheaf
        .complex()
        .skeleton(k)
        .iter()
        .map(|&s| {
            let stalk = sheaf.stalk(s);
            sheaf.down_links(s).fold(stalk.bottom(), |acc, (rho, r)| {
                let face = sheaf.stalk(rho);
                let met = sheaf.up_links(rho).fold(face.top(), |m, (s2, r2)| {
                    face.meet(m, r2.upper(sheaf.value_at(x, s2)))
                });
                stalk.join(acc, r.lower(met))
            })
        })
        .collect();
    Ok(Cochain::from_raw(k, values))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HodgeSide {
    /// `Post(L⁺)`.
    Upper,
    /// `Pre(L⁻)`.
    Lower,
}

pub fn hodge_cohomology(
    sheaf: &LatticeSheaf,
    k: usize,
    side: HodgeSide,
    mode: Mode,
) -> Result<FixedPointSet> {
    let kind = match side {
        HodgeSide::Upper => FixedPointKind::HodgeUpper,
        HodgeSide::Lower => FixedPointKind::HodgeLower,
    };
    FixedPointSet::compute(sheaf, kind, k, mode)
}

/// Looks for a `k`-cochain on which `δ̃_{k+1} ∘ δ̃_k` is not `𝟎`.
///
/// The composite is join-preserving, so it vanishes iff it vanishes on every
/// cochain with a single non-bottom coordinate; those are the only candidates
/// tried. Returns `None` when the composite is the zero map.
pub fn check_coboundary_squared(sheaf: &LatticeSheaf, k: usize) -> Result<Option<Cochain>> {
    let first = PseudoCoboundary::new(sheaf, k);
    let second = PseudoCoboundary::new(sheaf, k + 1);
    let bottom = sheaf.bottom_cochain(k);
    let target_bottom = sheaf.bottom_cochain(k + 2);
    for (i, &s) in sheaf.complex().skeleton(k).iter().enumerate() {
        let stalk = sheaf.stalk(s);
        for a in stalk.elements().filter(|&a| a != stalk.bottom()) {
            let mut values: Vec<Elem> = bottom.values().to_vec();
            values[i] = a;
            let x = Cochain::from_raw(k, values);
            if second.lower(&first.lower(&x)?)? != target_bottom {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Cells `σ' ⋖ τ` sharing a coface with `s`, used by callers that want to
/// display the neighbourhood a Hodge coordinate depends on.
pub fn coface_neighbours(sheaf: &LatticeSheaf, s: CellIdx) -> Vec<CellIdx> {
    let mut out: Vec<CellIdx> = sheaf
        .up_links(s)
        .flat_map(|(t, _)| sheaf.down_links(t).map(|(s2, _)| s2))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::complex::CellComplex;
    use crate::galois::Connection;
    use crate::lattice::FiniteLattice;
    use crate::tarski;

    fn path_sheaf(l: FiniteLattice) -> LatticeSheaf {
        let x = CellComplex::graph(&["u", "v", "w"], &[("e1", "u", "v"), ("e2", "v", "w")]).unwrap();
        LatticeSheaf::constant(Arc::new(x), Arc::new(l)).unwrap()
    }

    #[test]
    fn coboundary_on_path() {
        let s = path_sheaf(FiniteLattice::powerset(2).unwrap());
        let p = s.stalk(0).clone();
        for x in s.all_cochains(0).unwrap() {
            let v = x.values();
            let d = pseudo_coboundary(&s, 0, &x).unwrap();
            assert_eq!(d.values(), &[p.join(v[0], v[1]), p.join(v[1], v[2])]);
        }
        let zero = s.bottom_cochain(0);
        assert_eq!(pseudo_coboundary(&s, 0, &zero).unwrap(), s.bottom_cochain(1));
    }

    #[test]
    fn coboundary_on_circle() {
        let x = CellComplex::graph(&["a", "b"], &[("e0", "a", "b"), ("e1", "a", "b")]).unwrap();
        let s = LatticeSheaf::constant(Arc::new(x), Arc::new(FiniteLattice::chain(4).unwrap()))
            .unwrap();
        let c = s.uniform_cochain(0, 2).unwrap();
        assert_eq!(pseudo_coboundary(&s, 0, &c).unwrap().values(), &[2, 2]);
    }

    #[test]
    fn up_laplacian_closed_form_and_down_is_zero() {
        let s = path_sheaf(FiniteLattice::powerset(2).unwrap());
        let p = s.stalk(0).clone();
        for x in s.all_cochains(0).unwrap() {
            let v = x.values();
            let uv = p.join(v[0], v[1]);
            let vw = p.join(v[1], v[2]);
            assert_eq!(
                up_laplacian(&s, 0, &x).unwrap().values(),
                &[uv, p.meet(uv, vw), vw]
            );
            assert_eq!(down_laplacian(&s, 0, &x).unwrap(), s.bottom_cochain(0));
        }
    }

    #[test]
    fn laplacians_are_compositions() {
        let tri = Arc::new(CellComplex::simplicial(&[vec![0, 1, 2]]).unwrap());
        let s = LatticeSheaf::constant(tri, Arc::new(FiniteLattice::chain(2).unwrap())).unwrap();
        for k in 0..=2 {
            let d = PseudoCoboundary::new(&s, k);
            for x in s.all_cochains(k).unwrap() {
                let up = d.upper(&d.lower(&x).unwrap()).unwrap();
                assert_eq!(up_laplacian(&s, k, &x).unwrap(), up);
                if k > 0 {
                    let prev = PseudoCoboundary::new(&s, k - 1);
                    let down = prev.lower(&prev.upper(&x).unwrap()).unwrap();
                    assert_eq!(down_laplacian(&s, k, &x).unwrap(), down);
                }
            }
        }
    }

    #[test]
    fn materialized_upper_matches_synthesis() {
        let s = path_sheaf(FiniteLattice::chain(3).unwrap());
        let d = PseudoCoboundary::new(&s, 0).to_connection(4096).unwrap();
        assert!(d.verify());
        let synthesized =
            Connection::from_lower(d.src().clone(), d.dst().clone(), d.lower_map().to_vec())
                .unwrap();
        assert_eq!(synthesized, d);
    }

    #[test]
    fn strict_inclusion_on_path() {
        let s = path_sheaf(FiniteLattice::chain(2).unwrap());
        // (x, y, x) with y ≺ x
        let x = s.cochain(0, vec![1, 0, 1]).unwrap();
        let up = hodge_cohomology(&s, 0, HodgeSide::Upper, Mode::Enumerate).unwrap();
        assert!(up.contains(&s, &x).unwrap());
        assert!(!tarski::is_tarski_fixed(&s, 0, &x).unwrap());
        let th = tarski::tarski_cohomology(&s, 0, Mode::Enumerate).unwrap();
        for m in th.members.unwrap() {
            assert!(up.contains(&s, &m).unwrap());
        }
        let low = hodge_cohomology(&s, 0, HodgeSide::Lower, Mode::Enumerate).unwrap();
        assert_eq!(low.len(), Some(8));
        assert!(low.contains(&s, &s.top_cochain(0)).unwrap());
    }

    #[test]
    fn coboundary_squared() {
        let tri = Arc::new(CellComplex::simplicial(&[vec![0, 1, 2]]).unwrap());
        let s = LatticeSheaf::constant(tri.clone(), Arc::new(FiniteLattice::chain(2).unwrap()))
            .unwrap();
        let w = check_coboundary_squared(&s, 0).unwrap().expect("not square zero");
        assert_eq!(w.values().iter().filter(|&&v| v != 0).count(), 1);
        let path = path_sheaf(FiniteLattice::chain(3).unwrap());
        assert_eq!(check_coboundary_squared(&path, 0).unwrap(), None);
        let c2 = Arc::new(FiniteLattice::chain(2).unwrap());
        let lowers = tri.covering().iter().map(|&p| (p, vec![0, 0])).collect();
        let zero = LatticeSheaf::new(tri.clone(), vec![c2; tri.len()], lowers).unwrap();
        assert_eq!(check_coboundary_squared(&zero, 0).unwrap(), None);
    }

    #[test]
    fn neighbours() {
        let s = path_sheaf(FiniteLattice::chain(2).unwrap());
        let v = s.complex().find("v").unwrap();
        assert_eq!(coface_neighbours(&s, v).len(), 3);
    }
}
