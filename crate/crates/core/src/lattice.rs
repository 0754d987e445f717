//! Finite lattices with precomputed meet and join tables.
//!
//! Elements are dense indices `0..len()`. A lattice is built from its covering
//! relation; the order is the reflexive-transitive closure, and every pair must
//! have a unique greatest lower bound and least upper bound.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::{Error, Result};

/// Default cap on the number of elements of a materialized lattice.
pub const DEFAULT_MAX_ELEMENTS: usize = 4096;

/// An element of a [`FiniteLattice`], given by its index.
pub type Elem = usize;

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    size: usize,
    /// `down[y]` holds every `x` with `x ⪯ y`.
    down: Vec<FixedBitSet>,
    /// `up[x]` holds every `y` with `x ⪯ y`.
    up: Vec<FixedBitSet>,
    covers: Vec<(Elem, Elem)>,
    lower_covers: Vec<Vec<Elem>>,
    upper_covers: Vec<Vec<Elem>>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: Elem,
    top: Elem,
    labels: Vec<String>,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.meet == other.meet && self.join == other.join
    }
}

impl Eq for FiniteLattice {}

impl FiniteLattice {
    /// Builds a lattice from a covering-pair list `(x, y)` meaning `x ⊏ y`.
    ///
    /// Pairs need not form a transitive reduction; redundant pairs are
    /// accepted and dropped from [`covers`](Self::covers).
    pub fn from_covers(size: usize, covers: &[(Elem, Elem)]) -> Result<Self> {
        Self::from_covers_with_limit(size, covers, DEFAULT_MAX_ELEMENTS)
    }

    pub fn from_covers_with_limit(
        size: usize,
        covers: &[(Elem, Elem)],
        max_elements: usize,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyLattice);
        }
        if size > max_elements {
            return Err(Error::SizeLimitExceeded {
                what: "lattice elements",
                size: size as u128,
                limit: max_elements as u128,
            });
        }
        let mut succ = vec![Vec::new(); size];
        let mut indeg = vec![0usize; size];
        for &(x, y) in covers {
            if x >= size || y >= size {
                return Err(Error::ElementOutOfRange {
                    elem: x.max(y),
                    size,
                });
            }
            if x == y {
                return Err(Error::CyclicCovers);
            }
            succ[x].push(y);
            indeg[y] += 1;
        }

        // Kahn's algorithm; a leftover vertex means a cycle.
        let mut order = Vec::with_capacity(size);
        let mut queue: VecDeque<Elem> = (0..size).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() != size {
            return Err(Error::CyclicCovers);
        }
        let mut position = vec![0usize; size];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }

        let mut pred = vec![Vec::new(); size];
        for &(x, y) in covers {
            pred[y].push(x);
        }
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        for &y in &order {
            let mut set = FixedBitSet::with_capacity(size);
            set.insert(y);
            for &x in &pred[y] {
                set.union_with(&down[x]);
            }
            down[y] = set;
        }
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for &x in order.iter().rev() {
            let mut set = FixedBitSet::with_capacity(size);
            set.insert(x);
            for &y in &succ[x] {
                set.union_with(&up[y]);
            }
            up[x] = set;
        }

        let mut meet = vec![0u32; size * size];
        let mut join = vec![0u32; size * size];
        for a in 0..size {
            for b in a..size {
                let m = greatest_in(&down[a], &down[b], &down, &position)
                    .ok_or(Error::NotALattice { a, b })?;
                let j = least_in(&up[a], &up[b], &up, &position)
                    .ok_or(Error::NotALattice { a, b })?;
                meet[a * size + b] = m as u32;
                meet[b * size + a] = m as u32;
                join[a * size + b] = j as u32;
                join[b * size + a] = j as u32;
            }
        }

        let mut bottom = 0;
        let mut top = 0;
        for v in 1..size {
            bottom = meet[bottom * size + v] as usize;
            top = join[top * size + v] as usize;
        }

        // Transitive reduction: x ⊏ y iff x is maximal in down(y) \ {y}.
        let mut reduced = Vec::new();
        let mut lower_covers = vec![Vec::new(); size];
        let mut upper_covers = vec![Vec::new(); size];
        for y in 0..size {
            let mut strict = down[y].clone();
            strict.set(y, false);
            for x in strict.ones() {
                let mut above = up[x].clone();
                above.intersect_with(&strict);
                if above.count_ones(..) == 1 {
                    reduced.push((x, y));
                    lower_covers[y].push(x);
                    upper_covers[x].push(y);
                }
            }
        }
        reduced.sort_unstable();

        Ok(Self {
            size,
            down,
            up,
            covers: reduced,
            lower_covers,
            upper_covers,
            meet,
            join,
            bottom,
            top,
            labels: (0..size).map(|i| i.to_string()).collect(),
        })
    }

    /// The chain `0 ⊏ 1 ⊏ … ⊏ n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &covers)
    }

    /// Subsets of an `n`-element set, encoded as bitmasks.
    pub fn powerset(n: usize) -> Result<Self> {
        if n >= usize::BITS as usize - 1 || (1usize << n) > DEFAULT_MAX_ELEMENTS {
            return Err(Error::SizeLimitExceeded {
                what: "powerset elements",
                size: 1u128 << n.min(127),
                limit: DEFAULT_MAX_ELEMENTS as u128,
            });
        }
        let size = 1usize << n;
        let mut covers = Vec::new();
        for s in 0..size {
            for bit in 0..n {
                if s & (1 << bit) == 0 {
                    covers.push((s, s | (1 << bit)));
                }
            }
        }
        let mut lattice = Self::from_covers(size, &covers)?;
        lattice.labels = (0..size)
            .map(|s| {
                let items: Vec<String> = (0..n)
                    .filter(|b| s & (1 << b) != 0)
                    .map(|b| b.to_string())
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        Ok(lattice)
    }

    /// The modular, non-distributive lattice M3: bottom `0`, atoms `1,2,3`, top `4`.
    pub fn diamond() -> Self {
        Self::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .expect("M3 is a lattice")
    }

    /// The non-modular lattice N5: `0 ⊏ 1 ⊏ 2 ⊏ 4` and `0 ⊏ 3 ⊏ 4`.
    pub fn pentagon() -> Self {
        Self::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
            .expect("N5 is a lattice")
    }

    /// Cartesian product with coordinatewise order. Tuples are encoded in
    /// mixed radix with the first factor most significant.
    pub fn product(factors: &[&FiniteLattice]) -> Result<Self> {
        let shape = ProductLattice::new(factors.iter().map(|l| Arc::new((*l).clone())).collect())?;
        shape.materialize(DEFAULT_MAX_ELEMENTS)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::LabelCount {
                expected: self.size,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    pub fn lower_covers(&self, x: Elem) -> &[Elem] {
        &self.lower_covers[x]
    }

    pub fn upper_covers(&self, x: Elem) -> &[Elem] {
        &self.upper_covers[x]
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.down[y].contains(x)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.size + b] as Elem
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.size + b] as Elem
    }

    /// Greatest lower bound of a subset; the empty meet is `top`.
    pub fn meet_of<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Least upper bound of a subset; the empty join is `bottom`.
    pub fn join_of<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn down_set(&self, x: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.down[x].ones()
    }

    pub fn up_set(&self, x: Elem) -> impl Iterator<Item = Elem> + '_ {
        self.up[x].ones()
    }

    /// Length of a longest chain from `bottom` to each element.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.size];
        for x in self.linear_extension() {
            for &y in &self.upper_covers[x] {
                depth[y] = depth[y].max(depth[x] + 1);
            }
        }
        depth
    }

    /// Length of a maximal chain.
    pub fn height(&self) -> usize {
        self.depths()[self.top]
    }

    /// Height of the interval `[x, y]`, or `None` when `x ⋠ y`.
    pub fn distance(&self, x: Elem, y: Elem) -> Option<usize> {
        if !self.leq(x, y) {
            return None;
        }
        Some(self.interval(x, y).ok()?.height())
    }

    /// Elements ordered so that `x ⪯ y` implies `x` appears first.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = (0..self.size).collect();
        order.sort_by_key(|&x| self.down[x].count_ones(..));
        order
    }

    pub fn interval(&self, lo: Elem, hi: Elem) -> Result<Interval> {
        Interval::new(Arc::new(self.clone()), lo, hi)
    }

    pub fn structure_report(&self) -> StructureReport {
        let depths = self.depths();
        let graded = self.covers.iter().all(|&(x, y)| depths[y] == depths[x] + 1);
        let elems = 0..self.size;
        let mut modular = true;
        let mut distributive = true;
        'outer: for x in elems.clone() {
            for y in elems.clone() {
                for z in elems.clone() {
                    if distributive
                        && self.meet(x, self.join(y, z))
                            != self.join(self.meet(x, y), self.meet(x, z))
                    {
                        distributive = false;
                    }
                    if modular
                        && self.leq(x, y)
                        && self.join(x, self.meet(z, y)) != self.meet(self.join(x, z), y)
                    {
                        modular = false;
                    }
                    if !modular && !distributive {
                        break 'outer;
                    }
                }
            }
        }
        StructureReport {
            is_graded: graded,
            ranking: graded.then(|| depths.clone()),
            height: depths[self.top],
            is_modular: modular,
            is_distributive: distributive,
            join_irreducibles: elems
                .clone()
                .filter(|&x| x != self.bottom && self.lower_covers[x].len() == 1)
                .collect(),
            meet_irreducibles: elems
                .filter(|&x| x != self.top && self.upper_covers[x].len() == 1)
                .collect(),
        }
    }

    /// Graphviz rendering of the Hasse diagram, bottom at rank 0.
    pub fn to_dot(&self, name: &str) -> String {
        let depths = self.depths();
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=BT;");
        for x in 0..self.size {
            let _ = writeln!(
                out,
                "  n{x} [label=\"{}\"];",
                self.labels[x].replace('"', "'")
            );
        }
        for rank in 0..=depths[self.top] {
            let same: Vec<String> = (0..self.size)
                .filter(|&x| depths[x] == rank)
                .map(|x| format!("n{x}"))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", same.join("; "));
        }
        for &(x, y) in &self.covers {
            let _ = writeln!(out, "  n{x} -> n{y};");
        }
        out.push_str("}\n");
        out
    }
}

/// The unique maximum of `a ∩ b` if it exists, found as the candidate latest in
/// the linear extension and confirmed by comparing down-set sizes.
fn greatest_in(
    a: &FixedBitSet,
    b: &FixedBitSet,
    down: &[FixedBitSet],
    position: &[usize],
) -> Option<Elem> {
    let mut common = a.clone();
    common.intersect_with(b);
    let count = common.count_ones(..);
    let best = common.ones().max_by_key(|&g| position[g])?;
    (down[best].count_ones(..) == count).then_some(best)
}

fn least_in(
    a: &FixedBitSet,
    b: &FixedBitSet,
    up: &[FixedBitSet],
    position: &[usize],
) -> Option<Elem> {
    let mut common = a.clone();
    common.intersect_with(b);
    let count = common.count_ones(..);
    let best = common.ones().min_by_key(|&g| position[g])?;
    (up[best].count_ones(..) == count).then_some(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub is_graded: bool,
    /// Ranking by longest chain from bottom, present when graded.
    pub ranking: Option<Vec<usize>>,
    pub height: usize,
    pub is_modular: bool,
    pub is_distributive: bool,
    pub join_irreducibles: Vec<Elem>,
    pub meet_irreducibles: Vec<Elem>,
}

/// The interval `[lo, hi]` of a lattice, itself a lattice under the induced order.
#[derive(Clone, Debug)]
pub struct Interval {
    lattice: Arc<FiniteLattice>,
    lo: Elem,
    hi: Elem,
}

impl Interval {
    pub fn new(lattice: Arc<FiniteLattice>, lo: Elem, hi: Elem) -> Result<Self> {
        if lo >= lattice.len() || hi >= lattice.len() {
            return Err(Error::ElementOutOfRange {
                elem: lo.max(hi),
                size: lattice.len(),
            });
        }
        if !lattice.leq(lo, hi) {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Self { lattice, lo, hi })
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn lo(&self) -> Elem {
        self.lo
    }

    pub fn hi(&self) -> Elem {
        self.hi
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.lattice.leq(self.lo, x) && self.lattice.leq(x, self.hi)
    }

    pub fn members(&self) -> Vec<Elem> {
        let mut up = self.lattice.up[self.lo].clone();
        up.intersect_with(&self.lattice.down[self.hi]);
        up.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.members().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Longest cover path from `lo` to `hi`.
    pub fn height(&self) -> usize {
        let members = self.members();
        let mut best = vec![None::<usize>; self.lattice.len()];
        best[self.lo] = Some(0);
        let mut order = members.clone();
        order.sort_by_key(|&x| self.lattice.down[x].count_ones(..));
        for x in order {
            let Some(d) = best[x] else { continue };
            for &y in &self.lattice.upper_covers[x] {
                if self.contains(y) {
                    best[y] = Some(best[y].map_or(d + 1, |b| b.max(d + 1)));
                }
            }
        }
        best[self.hi].unwrap_or(0)
    }

    /// The interval as a standalone lattice, with the map from new indices
    /// back to the ambient lattice.
    pub fn to_lattice(&self) -> Result<(FiniteLattice, Vec<Elem>)> {
        let members = self.members();
        let mut index = vec![usize::MAX; self.lattice.len()];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let covers: Vec<_> = self
            .lattice
            .covers()
            .iter()
            .filter(|&&(x, y)| index[x] != usize::MAX && index[y] != usize::MAX)
            .map(|&(x, y)| (index[x], index[y]))
            .collect();
        let labels = members
            .iter()
            .map(|&m| self.lattice.label(m).to_string())
            .collect();
        let sub = FiniteLattice::from_covers(members.len(), &covers)?.with_labels(labels)?;
        Ok((sub, members))
    }
}

/// A product of lattices evaluated coordinatewise, without tables.
#[derive(Clone, Debug)]
pub struct ProductLattice {
    factors: Vec<Arc<FiniteLattice>>,
}

impl ProductLattice {
    pub fn new(factors: Vec<Arc<FiniteLattice>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyProduct);
        }
        Ok(Self { factors })
    }

    /// Product over a possibly empty family; the empty product is the
    /// one-point lattice.
    pub fn new_allow_empty(factors: Vec<Arc<FiniteLattice>>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[Arc<FiniteLattice>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Number of tuples, saturating at `u128::MAX`.
    pub fn cardinality(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128))
    }

    pub fn height(&self) -> usize {
        self.factors.iter().map(|l| l.height()).sum()
    }

    pub fn bottom(&self) -> Vec<Elem> {
        self.factors.iter().map(|l| l.bottom()).collect()
    }

    pub fn top(&self) -> Vec<Elem> {
        self.factors.iter().map(|l| l.top()).collect()
    }

    pub fn leq(&self, x: &[Elem], y: &[Elem]) -> bool {
        self.factors
            .iter()
            .zip(x.iter().zip(y))
            .all(|(l, (&a, &b))| l.leq(a, b))
    }

    pub fn meet(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.factors
            .iter()
            .zip(x.iter().zip(y))
            .map(|(l, (&a, &b))| l.meet(a, b))
            .collect()
    }

    pub fn join(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.factors
            .iter()
            .zip(x.iter().zip(y))
            .map(|(l, (&a, &b))| l.join(a, b))
            .collect()
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        x.len() == self.factors.len() && self.factors.iter().zip(x).all(|(l, &a)| a < l.len())
    }

    /// Mixed-radix index of a tuple.
    pub fn encode(&self, x: &[Elem]) -> usize {
        self.factors
            .iter()
            .zip(x)
            .fold(0usize, |acc, (l, &a)| acc * l.len() + a)
    }

    pub fn decode(&self, mut index: usize) -> Vec<Elem> {
        let mut out = vec![0; self.factors.len()];
        for (slot, l) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % l.len();
            index /= l.len();
        }
        out
    }

    /// All tuples in lexicographic order, first coordinate most significant.
    pub fn tuples(&self) -> TupleIter {
        TupleIter {
            factors: self.factors.clone(),
            next: Some(self.bottom_indices()),
        }
    }

    fn bottom_indices(&self) -> Vec<Elem> {
        vec![0; self.factors.len()]
    }

    /// Builds the product as a table-backed lattice.
    pub fn materialize(&self, max_elements: usize) -> Result<FiniteLattice> {
        let card = self.cardinality();
        if card > max_elements as u128 {
            return Err(Error::SizeLimitExceeded {
                what: "product lattice elements",
                size: card,
                limit: max_elements as u128,
            });
        }
        let size = card as usize;
        let mut covers = Vec::new();
        let mut labels = Vec::with_capacity(size);
        for t in self.tuples() {
            let here = self.encode(&t);
            for (i, l) in self.factors.iter().enumerate() {
                for &b in l.upper_covers(t[i]) {
                    let mut s = t.clone();
                    s[i] = b;
                    covers.push((here, self.encode(&s)));
                }
            }
            let parts: Vec<&str> = self
                .factors
                .iter()
                .zip(&t)
                .map(|(l, &a)| l.label(a))
                .collect();
            labels.push(format!("({})", parts.join(",")));
        }
        FiniteLattice::from_covers_with_limit(size, &covers, max_elements)?.with_labels(labels)
    }
}

/// Odometer over the tuples of a product.
pub struct TupleIter {
    factors: Vec<Arc<FiniteLattice>>,
    next: Option<Vec<Elem>>,
}

impl Iterator for TupleIter {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carry = true;
        for (slot, l) in succ.iter_mut().zip(&self.factors).rev() {
            *slot += 1;
            if *slot < l.len() {
                carry = false;
                break;
            }
            *slot = 0;
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_meets_and_joins() {
        let c = FiniteLattice::chain(3).unwrap();
        assert_eq!(c.meet(1, 2), 1);
        assert_eq!(c.join(0, 2), 2);
        assert_eq!(c.bottom(), 0);
        assert_eq!(c.top(), 2);
        assert_eq!(c.height(), 2);
    }

    #[test]
    fn powerset_of_two() {
        let p = FiniteLattice::powerset(2).unwrap();
        assert_eq!(p.meet(0b01, 0b10), 0);
        assert_eq!(p.join(0b01, 0b10), 0b11);
        assert_eq!(p.label(0b11), "{0,1}");
    }

    #[test]
    fn bowtie_is_not_a_lattice() {
        // 0,1 minimal; 2,3 maximal; each minimal below each maximal.
        let err = FiniteLattice::from_covers(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap_err();
        assert!(matches!(err, Error::NotALattice { .. }));
    }

    #[test]
    fn cyclic_covers_rejected() {
        let err = FiniteLattice::from_covers(2, &[(0, 1), (1, 0)]).unwrap_err();
        assert!(matches!(err, Error::CyclicCovers));
        let err = FiniteLattice::from_covers(1, &[(0, 0)]).unwrap_err();
        assert!(matches!(err, Error::CyclicCovers));
    }

    #[test]
    fn redundant_covers_are_reduced() {
        let l = FiniteLattice::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(l.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn iterated_meets_and_joins() {
        let p = FiniteLattice::powerset(3).unwrap();
        // {a,b} ∧ {b,c} = {b}
        assert_eq!(p.meet_of([0b011, 0b110]), 0b010);
        assert_eq!(p.join_of(std::iter::empty()), p.bottom());
        assert_eq!(p.meet_of(std::iter::empty()), p.top());
        let c4 = FiniteLattice::chain(4).unwrap();
        assert_eq!(c4.meet_of([1, 3, 2]), 1);
    }

    #[test]
    fn products() {
        let c2 = FiniteLattice::chain(2).unwrap();
        let c3 = FiniteLattice::chain(3).unwrap();
        let sq = FiniteLattice::product(&[&c2, &c2]).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.height(), 2);
        assert_eq!(sq.structure_report().join_irreducibles.len(), 2);
        let p = FiniteLattice::product(&[&c2, &c3]).unwrap();
        assert_eq!(p.height(), 3);
        let single = FiniteLattice::product(&[&c3]).unwrap();
        assert_eq!(single, c3);
    }

    #[test]
    fn product_size_limit() {
        let p = FiniteLattice::powerset(6).unwrap();
        let err = FiniteLattice::product(&[&p, &p, &p]).unwrap_err();
        assert!(matches!(err, Error::SizeLimitExceeded { .. }));
    }

    #[test]
    fn structure_of_powerset() {
        let r = FiniteLattice::powerset(3).unwrap().structure_report();
        assert!(r.is_distributive && r.is_modular && r.is_graded);
        assert_eq!(r.height, 3);
        let ranks = r.ranking.unwrap();
        for s in 0..8usize {
            assert_eq!(ranks[s], s.count_ones() as usize);
        }
    }

    #[test]
    fn structure_of_m3_and_n5() {
        let m3 = FiniteLattice::diamond().structure_report();
        assert!(m3.is_modular && !m3.is_distributive);
        let n5 = FiniteLattice::pentagon().structure_report();
        assert!(!n5.is_modular && !n5.is_distributive);
        assert!(!n5.is_graded);
        assert_eq!(n5.height, 3);
    }

    #[test]
    fn intervals_and_distance() {
        let p = FiniteLattice::powerset(3).unwrap();
        let iv = p.interval(0b001, 0b111).unwrap();
        assert_eq!(iv.len(), 4);
        assert_eq!(iv.height(), 2);
        assert!(iv.contains(0b011) && !iv.contains(0b010));
        let (sub, map) = iv.to_lattice().unwrap();
        assert_eq!(sub.len(), 4);
        assert_eq!(map[sub.bottom()], 0b001);
        assert_eq!(p.distance(0b001, 0b010), None);
        assert_eq!(p.distance(0, 0b111), Some(3));
        assert!(matches!(
            p.interval(0b010, 0b001),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn dot_export_mentions_every_cover() {
        let dot = FiniteLattice::diamond().to_dot("m3");
        assert_eq!(dot.matches("->").count(), 6);
        assert!(dot.starts_with("digraph \"m3\""));
    }

    #[test]
    fn tuple_iteration_is_lexicographic() {
        let c2 = Arc::new(FiniteLattice::chain(2).unwrap());
        let c3 = Arc::new(FiniteLattice::chain(3).unwrap());
        let shape = ProductLattice::new(vec![c2, c3]).unwrap();
        let all: Vec<_> = shape.tuples().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 1]);
        for (i, t) in all.iter().enumerate() {
            assert_eq!(shape.encode(t), i);
            assert_eq!(&shape.decode(i), t);
        }
    }
}
