//! Galois connections between finite lattices.
//!
//! A [`Connection`] stores a join-preserving lower map and its meet-preserving
//! upper adjoint as dense index arrays. Connections built from user data only
//! ever take the lower map; the upper map is synthesized as
//! `upper(y) = ⋁ { x : lower(x) ⪯ y }`.

use std::sync::Arc;

use crate::lattice::{Elem, FiniteLattice, Interval};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Connection {
    src: Arc<FiniteLattice>,
    dst: Arc<FiniteLattice>,
    lower: Vec<Elem>,
    upper: Vec<Elem>,
}

impl PartialEq for Connection {
    fn eq(&self, other: &Self) -> bool {
        same_lattice(&self.src, &other.src)
            && same_lattice(&self.dst, &other.dst)
            && self.lower == other.lower
            && self.upper == other.upper
    }
}

impl Eq for Connection {}

pub(crate) fn same_lattice(a: &Arc<FiniteLattice>, b: &Arc<FiniteLattice>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Checks that `lower` preserves the bottom and all binary joins.
/// Returns the first offending pair.
pub fn join_preservation_violation(
    src: &FiniteLattice,
    dst: &FiniteLattice,
    lower: &[Elem],
) -> Option<(Elem, Elem)> {
    if lower[src.bottom()] != dst.bottom() {
        return Some((src.bottom(), src.bottom()));
    }
    for a in src.elements() {
        for b in a + 1..src.len() {
            if lower[src.join(a, b)] != dst.join(lower[a], lower[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

impl Connection {
    /// Builds a connection from its lower map, synthesizing the upper adjoint.
    pub fn from_lower(
        src: Arc<FiniteLattice>,
        dst: Arc<FiniteLattice>,
        lower: Vec<Elem>,
    ) -> Result<Self> {
        check_map(&lower, src.len(), dst.len())?;
        if let Some((a, b)) = join_preservation_violation(&src, &dst, &lower) {
            return Err(Error::NotJoinPreserving { a, b });
        }
        let upper = dst
            .elements()
            .map(|y| src.join_of(src.elements().filter(|&x| dst.leq(lower[x], y))))
            .collect();
        Ok(Self {
            src,
            dst,
            lower,
            upper,
        })
    }

    /// Pairs two maps without checking the adjunction law. Use
    /// [`adjunction_violation`](Self::adjunction_violation) to validate.
    pub fn from_maps(
        src: Arc<FiniteLattice>,
        dst: Arc<FiniteLattice>,
        lower: Vec<Elem>,
        upper: Vec<Elem>,
    ) -> Result<Self> {
        check_map(&lower, src.len(), dst.len())?;
        check_map(&upper, dst.len(), src.len())?;
        Ok(Self {
            src,
            dst,
            lower,
            upper,
        })
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let id: Vec<Elem> = lattice.elements().collect();
        Self {
            src: lattice.clone(),
            dst: lattice,
            lower: id.clone(),
            upper: id,
        }
    }

    /// The zero morphism: everything to bottom below, everything to top above.
    pub fn zero(src: Arc<FiniteLattice>, dst: Arc<FiniteLattice>) -> Self {
        Self {
            lower: vec![dst.bottom(); src.len()],
            upper: vec![src.top(); dst.len()],
            src,
            dst,
        }
    }

    pub fn src(&self) -> &Arc<FiniteLattice> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<FiniteLattice> {
        &self.dst
    }

    #[inline]
    pub fn lower(&self, x: Elem) -> Elem {
        self.lower[x]
    }

    #[inline]
    pub fn upper(&self, y: Elem) -> Elem {
        self.upper[y]
    }

    pub fn lower_map(&self) -> &[Elem] {
        &self.lower
    }

    pub fn upper_map(&self) -> &[Elem] {
        &self.upper
    }

    /// First pair `(x, y)` with `lower(x) ⪯ y` disagreeing with `x ⪯ upper(y)`.
    pub fn adjunction_violation(&self) -> Option<(Elem, Elem)> {
        for x in self.src.elements() {
            for y in self.dst.elements() {
                if self.dst.leq(self.lower[x], y) != self.src.leq(x, self.upper[y]) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn verify(&self) -> bool {
        self.adjunction_violation().is_none()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Connection) -> Result<Connection> {
        compose(self, next)
    }

    pub fn is_zero(&self) -> bool {
        self.lower.iter().all(|&y| y == self.dst.bottom())
    }

    /// `Ker f = ↓ upper(0)` in the source.
    pub fn kernel(&self) -> Interval {
        Interval::new(self.src.clone(), self.src.bottom(), self.upper[self.dst.bottom()])
            .expect("bottom is below everything")
    }

    /// `Cok f = ↑ lower(1)` in the target.
    pub fn cokernel(&self) -> Interval {
        Interval::new(self.dst.clone(), self.lower[self.src.top()], self.dst.top())
            .expect("everything is below top")
    }

    /// `Nim f = ↓ lower(1)` in the target.
    pub fn normal_image(&self) -> Interval {
        Interval::new(self.dst.clone(), self.dst.bottom(), self.lower[self.src.top()])
            .expect("bottom is below everything")
    }

    pub fn exactness(&self) -> ExactnessReport {
        let up0 = self.upper[self.dst.bottom()];
        let low1 = self.lower[self.src.top()];
        let left_exact = self
            .src
            .elements()
            .all(|x| self.upper[self.lower[x]] == self.src.join(x, up0));
        let right_exact = self
            .dst
            .elements()
            .all(|y| self.lower[self.upper[y]] == self.dst.meet(y, low1));
        ExactnessReport {
            left_exact,
            right_exact,
        }
    }
}

fn check_map(map: &[Elem], src_len: usize, dst_len: usize) -> Result<()> {
    if map.len() != src_len {
        return Err(Error::MapLength {
            expected: src_len,
            got: map.len(),
        });
    }
    if let Some(&bad) = map.iter().find(|&&y| y >= dst_len) {
        return Err(Error::ElementOutOfRange {
            elem: bad,
            size: dst_len,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub left_exact: bool,
    pub right_exact: bool,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.left_exact && self.right_exact
    }
}

/// `g ∘ f`: lower maps compose forwards, upper maps backwards.
pub fn compose(f: &Connection, g: &Connection) -> Result<Connection> {
    if !same_lattice(&f.dst, &g.src) {
        return Err(Error::DomainMismatch);
    }
    Ok(Connection {
        src: f.src.clone(),
        dst: g.dst.clone(),
        lower: f.lower.iter().map(|&x| g.lower[x]).collect(),
        upper: g.upper.iter().map(|&z| f.upper[z]).collect(),
    })
}

/// Sum in the semi-additive structure: join of lowers, meet of uppers.
pub fn sum(f: &Connection, g: &Connection) -> Result<Connection> {
    if !same_lattice(&f.src, &g.src) || !same_lattice(&f.dst, &g.dst) {
        return Err(Error::DomainMismatch);
    }
    Ok(Connection {
        src: f.src.clone(),
        dst: f.dst.clone(),
        lower: f
            .lower
            .iter()
            .zip(&g.lower)
            .map(|(&a, &b)| f.dst.join(a, b))
            .collect(),
        upper: f
            .upper
            .iter()
            .zip(&g.upper)
            .map(|(&a, &b)| f.src.meet(a, b))
            .collect(),
    })
}

/// The biproduct `X × Y` with its projections and injections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub lattice: Arc<FiniteLattice>,
    /// `p(x, y) = x`, `p^•(x) = (x, 1)`.
    pub first_projection: Connection,
    /// `q(x, y) = y`, `q^•(y) = (1, y)`.
    pub second_projection: Connection,
    /// `i(x) = (x, 0)`, `i^•(x, y) = x`.
    pub first_injection: Connection,
    /// `j(y) = (0, y)`, `j^•(x, y) = y`.
    pub second_injection: Connection,
}

pub fn biproduct(x: Arc<FiniteLattice>, y: Arc<FiniteLattice>) -> Result<Biproduct> {
    let prod = Arc::new(FiniteLattice::product(&[&x, &y])?);
    let width = y.len();
    let pair = |a: Elem, b: Elem| a * width + b;
    let split = |t: Elem| (t / width, t % width);
    let p = Connection::from_maps(
        prod.clone(),
        x.clone(),
        prod.elements().map(|t| split(t).0).collect(),
        x.elements().map(|a| pair(a, y.top())).collect(),
    )?;
    let q = Connection::from_maps(
        prod.clone(),
        y.clone(),
        prod.elements().map(|t| split(t).1).collect(),
        y.elements().map(|b| pair(x.top(), b)).collect(),
    )?;
    let i = Connection::from_maps(
        x.clone(),
        prod.clone(),
        x.elements().map(|a| pair(a, y.bottom())).collect(),
        prod.elements().map(|t| split(t).0).collect(),
    )?;
    let j = Connection::from_maps(
        y.clone(),
        prod.clone(),
        y.elements().map(|b| pair(x.bottom(), b)).collect(),
        prod.elements().map(|t| split(t).1).collect(),
    )?;
    Ok(Biproduct {
        lattice: prod,
        first_projection: p,
        second_projection: q,
        first_injection: i,
        second_injection: j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::chain(n).unwrap())
    }

    #[test]
    fn synthesize_c2_to_c3() {
        let f = Connection::from_lower(chain(2), chain(3), vec![0, 2]).unwrap();
        assert_eq!(f.upper_map(), &[0, 0, 1]);
        assert!(f.verify());
        assert_eq!(f.kernel().members(), vec![0]);
    }

    #[test]
    fn identity_synthesizes_identity() {
        let p = Arc::new(FiniteLattice::powerset(2).unwrap());
        let f = Connection::from_lower(p.clone(), p.clone(), vec![0, 1, 2, 3]).unwrap();
        assert_eq!(f, Connection::identity(p));
    }

    #[test]
    fn constant_bottom_is_zero() {
        let p = Arc::new(FiniteLattice::powerset(1).unwrap());
        let f = Connection::from_lower(p.clone(), p.clone(), vec![0, 0]).unwrap();
        assert_eq!(f.upper_map(), &[1, 1]);
        assert_eq!(f, Connection::zero(p.clone(), p));
        assert!(f.is_zero());
    }

    #[test]
    fn non_join_preserving_rejected() {
        let p = Arc::new(FiniteLattice::powerset(2).unwrap());
        // sends {0} and {1} to bottom but the full set to top
        let err = Connection::from_lower(p.clone(), chain(2), vec![0, 0, 0, 1]).unwrap_err();
        assert!(matches!(err, Error::NotJoinPreserving { a: 1, b: 2 }));
        let err = Connection::from_lower(chain(2), chain(2), vec![1, 1]).unwrap_err();
        assert!(matches!(err, Error::NotJoinPreserving { .. }));
    }

    #[test]
    fn verify_reports_witness() {
        let c2 = chain(2);
        let bad = Connection::from_maps(c2.clone(), c2, vec![0, 1], vec![0, 0]).unwrap();
        assert_eq!(bad.adjunction_violation(), Some((1, 1)));
    }

    #[test]
    fn compose_with_identity_and_zero() {
        let f = Connection::from_lower(chain(2), chain(3), vec![0, 2]).unwrap();
        let id = Connection::identity(chain(3));
        assert_eq!(compose(&f, &id).unwrap(), f);
        let z = Connection::zero(chain(3), chain(4));
        assert_eq!(compose(&f, &z).unwrap(), Connection::zero(chain(2), chain(4)));
        let back = Connection::from_lower(chain(3), chain(2), vec![0, 0, 1]).unwrap();
        let round = compose(&f, &back).unwrap();
        assert!(round.verify());
        assert!(matches!(compose(&f, &f), Err(Error::DomainMismatch)));
    }

    #[test]
    fn sums() {
        let p = Arc::new(FiniteLattice::powerset(2).unwrap());
        let id = Connection::identity(p.clone());
        assert_eq!(sum(&id, &id).unwrap(), id);
        let z = Connection::zero(p.clone(), p.clone());
        assert_eq!(sum(&id, &z).unwrap(), id);
        let swap = Connection::from_lower(p.clone(), p.clone(), vec![0, 2, 1, 3]).unwrap();
        assert_eq!(sum(&id, &swap).unwrap(), sum(&swap, &id).unwrap());
        assert!(sum(&id, &swap).unwrap().verify());
    }

    #[test]
    fn kernels_and_cokernels() {
        let p = Arc::new(FiniteLattice::powerset(2).unwrap());
        let z = Connection::zero(p.clone(), chain(3));
        assert_eq!(z.kernel().members(), vec![0, 1, 2, 3]);
        let id = Connection::identity(p.clone());
        assert_eq!(id.cokernel().members(), vec![3]);
        assert_eq!(id.normal_image().members(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn exactness_cases() {
        let id = Connection::identity(chain(3));
        assert!(id.exactness().is_exact());
        // upper = (1, 2); both identities hold at every element.
        let f = Connection::from_lower(chain(3), chain(2), vec![0, 0, 1]).unwrap();
        assert!(f.exactness().is_exact());
        // Every nonempty subset to top: upper(lower({0})) = top ≠ {0} ∨ upper(0).
        let p = Arc::new(FiniteLattice::powerset(2).unwrap());
        let g = Connection::from_lower(p, chain(2), vec![0, 1, 1, 1]).unwrap();
        let report = g.exactness();
        assert!(!report.left_exact);
        assert!(report.right_exact);
    }

    #[test]
    fn biproduct_laws() {
        let b = biproduct(chain(2), chain(3)).unwrap();
        let id_x = Connection::identity(chain(2));
        let id_y = Connection::identity(chain(3));
        let p_i = compose(&b.first_injection, &b.first_projection).unwrap();
        let q_j = compose(&b.second_injection, &b.second_projection).unwrap();
        assert_eq!(p_i, id_x);
        assert_eq!(q_j, id_y);
        let p_j = compose(&b.second_injection, &b.first_projection).unwrap();
        let q_i = compose(&b.first_injection, &b.second_projection).unwrap();
        assert_eq!(p_j, Connection::zero(chain(3), chain(2)));
        assert_eq!(q_i, Connection::zero(chain(2), chain(3)));
        for c in [
            &b.first_projection,
            &b.second_projection,
            &b.first_injection,
            &b.second_injection,
        ] {
            assert!(c.verify());
        }
    }
}
