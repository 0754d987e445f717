//! Cellular sheaves of finite lattices and their cochain lattices.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::complex::{CellComplex, CellIdx};
use crate::galois::{compose, Connection};
use crate::lattice::{Elem, FiniteLattice, ProductLattice};
use crate::{Error, Limits, Result};

/// A `k`-cochain: one stalk element per `k`-cell, in skeleton order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    degree: usize,
    values: Vec<Elem>,
}

impl Cochain {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Elem> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn from_raw(degree: usize, values: Vec<Elem>) -> Self {
        Self { degree, values }
    }
}

/// Outcome of comparing two cochains coordinatewise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CochainOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

#[derive(Debug)]
pub struct LatticeSheaf {
    complex: Arc<CellComplex>,
    stalks: Vec<Arc<FiniteLattice>>,
    restrictions: Vec<Connection>,
    by_pair: HashMap<(CellIdx, CellIdx), usize>,
    /// `(τ, restriction index)` for each coface τ of a cell.
    up_links: Vec<Vec<(CellIdx, usize)>>,
    /// `(σ, restriction index)` for each face σ of a cell.
    down_links: Vec<Vec<(CellIdx, usize)>>,
    limits: Limits,
    composites: RwLock<HashMap<(CellIdx, CellIdx), Connection>>,
}

impl Clone for LatticeSheaf {
    fn clone(&self) -> Self {
        Self {
            complex: self.complex.clone(),
            stalks: self.stalks.clone(),
            restrictions: self.restrictions.clone(),
            by_pair: self.by_pair.clone(),
            up_links: self.up_links.clone(),
            down_links: self.down_links.clone(),
            limits: self.limits,
            composites: RwLock::new(HashMap::new()),
        }
    }
}

impl LatticeSheaf {
    /// Builds a sheaf from one stalk per cell (indexed like the complex) and a
    /// lower map per covering pair. Upper maps are synthesized, and composite
    /// restrictions are checked for path independence.
    pub fn new(
        complex: Arc<CellComplex>,
        stalks: Vec<Arc<FiniteLattice>>,
        lowers: HashMap<(CellIdx, CellIdx), Vec<Elem>>,
    ) -> Result<Self> {
        if stalks.len() != complex.len() {
            return Err(Error::StalkCount {
                expected: complex.len(),
                got: stalks.len(),
            });
        }
        let mut lowers = lowers;
        let mut restrictions = Vec::with_capacity(complex.covering().len());
        let mut by_pair = HashMap::new();
        let mut up_links = vec![Vec::new(); complex.len()];
        let mut down_links = vec![Vec::new(); complex.len()];
        let name = |c: CellIdx| complex.cell(c).id.clone();
        for &(s, t) in complex.covering() {
            let lower = lowers
                .remove(&(s, t))
                .ok_or_else(|| Error::MissingRestriction {
                    face: name(s),
                    cell: name(t),
                })?;
            let conn = Connection::from_lower(stalks[s].clone(), stalks[t].clone(), lower)
                .map_err(|e| match e {
                    Error::NotJoinPreserving { a, b } => Error::RestrictionNotJoinPreserving {
                        face: name(s),
                        cell: name(t),
                        a,
                        b,
                    },
                    other => Error::InvalidRestriction {
                        face: name(s),
                        cell: name(t),
                        reason: other.to_string(),
                    },
                })?;
            let idx = restrictions.len();
            restrictions.push(conn);
            by_pair.insert((s, t), idx);
            up_links[s].push((t, idx));
            down_links[t].push((s, idx));
        }
        if let Some(&(s, t)) = lowers.keys().min() {
            return Err(Error::NotACoveringPair {
                face: complex.cell(s).id.clone(),
                cell: complex.cell(t).id.clone(),
            });
        }
        let sheaf = Self {
            complex,
            stalks,
            restrictions,
            by_pair,
            up_links,
            down_links,
            limits: Limits::default(),
            composites: RwLock::new(HashMap::new()),
        };
        sheaf.check_functoriality()?;
        Ok(sheaf)
    }

    /// Every stalk `lattice`, every restriction the identity.
    pub fn constant(complex: Arc<CellComplex>, lattice: Arc<FiniteLattice>) -> Result<Self> {
        let id: Vec<Elem> = lattice.elements().collect();
        let lowers = complex
            .covering()
            .iter()
            .map(|&pair| (pair, id.clone()))
            .collect();
        let stalks = vec![lattice; complex.len()];
        Self::new(complex, stalks, lowers)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    fn check_functoriality(&self) -> Result<()> {
        for (s, u, middles) in self.complex.diamonds() {
            let mut reference: Option<Vec<Elem>> = None;
            for t in middles {
                let first = &self.restrictions[self.by_pair[&(s, t)]];
                let second = &self.restrictions[self.by_pair[&(t, u)]];
                let composite: Vec<Elem> = first
                    .lower_map()
                    .iter()
                    .map(|&x| second.lower(x))
                    .collect();
                match &reference {
                    None => reference = Some(composite),
                    Some(r) if *r != composite => {
                        return Err(Error::FunctorialityViolation {
                            face: self.complex.cell(s).id.clone(),
                            cell: self.complex.cell(u).id.clone(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &Arc<CellComplex> {
        &self.complex
    }

    pub fn stalk(&self, c: CellIdx) -> &Arc<FiniteLattice> {
        &self.stalks[c]
    }

    pub fn stalks(&self) -> &[Arc<FiniteLattice>] {
        &self.stalks
    }

    /// The restriction on a covering pair `face ⋖ cell`.
    pub fn restriction(&self, face: CellIdx, cell: CellIdx) -> Option<&Connection> {
        self.by_pair.get(&(face, cell)).map(|&i| &self.restrictions[i])
    }

    pub fn restrictions(&self) -> impl Iterator<Item = ((CellIdx, CellIdx), &Connection)> {
        self.complex
            .covering()
            .iter()
            .map(|&pair| (pair, &self.restrictions[self.by_pair[&pair]]))
    }

    /// Cofaces of `c` with their restriction connections.
    pub fn up_links(&self, c: CellIdx) -> impl Iterator<Item = (CellIdx, &Connection)> {
        self.up_links[c]
            .iter()
            .map(|&(t, i)| (t, &self.restrictions[i]))
    }

    /// Faces of `c` with their restriction connections.
    pub fn down_links(&self, c: CellIdx) -> impl Iterator<Item = (CellIdx, &Connection)> {
        self.down_links[c]
            .iter()
            .map(|&(s, i)| (s, &self.restrictions[i]))
    }

    /// The restriction along `face ⊴ cell` for any face-poset relation,
    /// composed along covering pairs and cached.
    pub fn composite_restriction(&self, face: CellIdx, cell: CellIdx) -> Result<Connection> {
        if !self.complex.is_face(face, cell) {
            return Err(Error::NotAFace {
                face: self.complex.cell(face).id.clone(),
                cell: self.complex.cell(cell).id.clone(),
            });
        }
        if face == cell {
            return Ok(Connection::identity(self.stalks[face].clone()));
        }
        if let Some(c) = self.composites.read().expect("cache lock").get(&(face, cell)) {
            return Ok(c.clone());
        }
        let (next, first) = self
            .up_links(face)
            .find(|&(t, _)| self.complex.is_face(t, cell))
            .expect("a face below a cell has a coface on the way up");
        let rest = self.composite_restriction(next, cell)?;
        let total = compose(first, &rest)?;
        self.composites
            .write()
            .expect("cache lock")
            .insert((face, cell), total.clone());
        Ok(total)
    }

    /// Height of `C^k`, the sum of stalk heights over `k`-cells.
    pub fn cochain_height(&self, k: usize) -> usize {
        self.complex
            .skeleton(k)
            .iter()
            .map(|&c| self.stalks[c].height())
            .sum()
    }

    /// `C^k` as a coordinatewise product lattice.
    pub fn cochain_lattice(&self, k: usize) -> ProductLattice {
        ProductLattice::new_allow_empty(
            self.complex
                .skeleton(k)
                .iter()
                .map(|&c| self.stalks[c].clone())
                .collect(),
        )
    }

    pub fn cochain(&self, k: usize, values: Vec<Elem>) -> Result<Cochain> {
        let cells = self.complex.skeleton(k);
        if values.len() != cells.len() {
            return Err(Error::CochainLength {
                degree: k,
                expected: cells.len(),
                got: values.len(),
            });
        }
        for (&c, &v) in cells.iter().zip(&values) {
            if v >= self.stalks[c].len() {
                return Err(Error::ElementOutOfRange {
                    elem: v,
                    size: self.stalks[c].len(),
                });
            }
        }
        Ok(Cochain { degree: k, values })
    }

    /// Builds a cochain from `(cell id, element)` pairs; every `k`-cell must
    /// be assigned exactly once.
    pub fn cochain_from_ids<'a, I>(&self, k: usize, pairs: I) -> Result<Cochain>
    where
        I: IntoIterator<Item = (&'a str, Elem)>,
    {
        let cells = self.complex.skeleton(k);
        let mut values = vec![None; cells.len()];
        for (id, v) in pairs {
            let c = self.complex.find(id)?;
            if self.complex.cell_dim(c) != k {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    got: self.complex.cell_dim(c),
                });
            }
            values[self.complex.position(c)] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::UnknownCell(self.complex.cell(cells[i]).id.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.cochain(k, values)
    }

    /// The constant cochain where every coordinate equals `value`.
    pub fn uniform_cochain(&self, k: usize, value: Elem) -> Result<Cochain> {
        self.cochain(k, vec![value; self.complex.count(k)])
    }

    pub fn top_cochain(&self, k: usize) -> Cochain {
        Cochain {
            degree: k,
            values: self
                .complex
                .skeleton(k)
                .iter()
                .map(|&c| self.stalks[c].top())
                .collect(),
        }
    }

    pub fn bottom_cochain(&self, k: usize) -> Cochain {
        Cochain {
            degree: k,
            values: self
                .complex
                .skeleton(k)
                .iter()
                .map(|&c| self.stalks[c].bottom())
                .collect(),
        }
    }

    pub(crate) fn check_degree(&self, x: &Cochain, k: usize) -> Result<()> {
        if x.degree != k {
            return Err(Error::DegreeMismatch {
                expected: k,
                got: x.degree,
            });
        }
        Ok(())
    }

    /// Stalk of the `i`-th `k`-cell.
    pub(crate) fn kstalk(&self, k: usize, i: usize) -> &FiniteLattice {
        &self.stalks[self.complex.skeleton(k)[i]]
    }

    pub fn cochain_leq(&self, x: &Cochain, y: &Cochain) -> Result<bool> {
        self.check_degree(y, x.degree)?;
        Ok(x.values
            .iter()
            .zip(&y.values)
            .enumerate()
            .all(|(i, (&a, &b))| self.kstalk(x.degree, i).leq(a, b)))
    }

    pub fn cochain_order(&self, x: &Cochain, y: &Cochain) -> Result<CochainOrder> {
        let le = self.cochain_leq(x, y)?;
        let ge = self.cochain_leq(y, x)?;
        Ok(match (le, ge) {
            (true, true) => CochainOrder::Equal,
            (true, false) => CochainOrder::Less,
            (false, true) => CochainOrder::Greater,
            (false, false) => CochainOrder::Incomparable,
        })
    }

    pub fn cochain_meet(&self, x: &Cochain, y: &Cochain) -> Result<Cochain> {
        self.check_degree(y, x.degree)?;
        let k = x.degree;
        Ok(Cochain {
            degree: k,
            values: x
                .values
                .iter()
                .zip(&y.values)
                .enumerate()
                .map(|(i, (&a, &b))| self.kstalk(k, i).meet(a, b))
                .collect(),
        })
    }

    pub fn cochain_join(&self, x: &Cochain, y: &Cochain) -> Result<Cochain> {
        self.check_degree(y, x.degree)?;
        let k = x.degree;
        Ok(Cochain {
            degree: k,
            values: x
                .values
                .iter()
                .zip(&y.values)
                .enumerate()
                .map(|(i, (&a, &b))| self.kstalk(k, i).join(a, b))
                .collect(),
        })
    }

    /// Value of a `k`-cochain at the cell `c`.
    pub fn value_at(&self, x: &Cochain, c: CellIdx) -> Elem {
        x.values[self.complex.position(c)]
    }

    /// First edge whose vertex restrictions disagree, if any.
    pub fn section_violation(&self, x: &Cochain) -> Result<Option<CellIdx>> {
        self.check_degree(x, 0)?;
        for &e in self.complex.skeleton(1) {
            let mut images = self
                .down_links(e)
                .map(|(v, r)| r.lower(self.value_at(x, v)));
            if let Some(first) = images.next() {
                if images.any(|y| y != first) {
                    return Ok(Some(e));
                }
            }
        }
        Ok(None)
    }

    pub fn is_section(&self, x: &Cochain) -> Result<bool> {
        Ok(self.section_violation(x)?.is_none())
    }

    /// Every `k`-cochain in lexicographic order, subject to the
    /// enumeration limit.
    pub fn all_cochains(&self, k: usize) -> Result<impl Iterator<Item = Cochain>> {
        let shape = self.cochain_lattice(k);
        let size = shape.cardinality();
        if size > self.limits.enumeration {
            return Err(Error::SizeLimitExceeded {
                what: "cochain enumeration",
                size,
                limit: self.limits.enumeration,
            });
        }
        Ok(shape.tuples().map(move |values| Cochain { degree: k, values }))
    }

    /// Brute-force global sections: every 0-cochain that passes
    /// [`is_section`](Self::is_section), in lexicographic order.
    pub fn sections_bruteforce(&self) -> Result<Vec<Cochain>> {
        let mut out = Vec::new();
        for x in self.all_cochains(0)? {
            if self.section_violation(&x)?.is_none() {
                out.push(x);
            }
        }
        Ok(out)
    }
}
