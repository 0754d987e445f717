//! Linear algebra over GF(p), subspace lattices, the transfer `Gr` from
//! vector-space sheaves to lattice sheaves, and Grandis cohomology.
//!
//! Vectors are column vectors stored as `Vec<u32>`; a matrix with `r` rows and
//! `c` columns maps `F^c → F^r`. Subspaces are kept as reduced row echelon
//! bases, so equality of subspaces is equality of representatives.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::complex::{CellComplex, CellIdx};
use crate::galois::Connection;
use crate::lattice::{Elem, FiniteLattice, Interval, DEFAULT_MAX_ELEMENTS};
use crate::sheaf::{Cochain, LatticeSheaf};
use crate::{Error, Mode, Result};

/// Largest ambient space `p^d` that [`subspace_lattice`] will enumerate.
pub const MAX_AMBIENT_VECTORS: u128 = 1 << 16;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_prime(p: u32) -> Result<()> {
    // Products are formed in u64, so p must fit comfortably in 32 bits.
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn inv(p: u32, a: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Row reduces `rows` in place to reduced echelon form, dropping zero rows.
/// Returns the pivot columns.
fn rref(p: u32, ncols: usize, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let pm = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let scale = inv(p, rows[r][c]) as u64;
        for v in rows[r].iter_mut() {
            *v = (*v as u64 * scale % pm) as u32;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c] as u64;
                for j in 0..ncols {
                    let sub = f * rows[r][j] as u64 % pm;
                    rows[i][j] = ((rows[i][j] as u64 + pm - sub) % pm) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Null space basis of the matrix whose rows are `rows`.
fn null_space(p: u32, ncols: usize, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut m = rows.to_vec();
    let pivots = rref(p, ncols, &mut m);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; ncols];
        v[f] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[i][f]) % p;
        }
        out.push(v);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    /// Row-major entries, reduced mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        let data = data.into_iter().map(|v| v % p).collect();
        Ok(Self {
            p,
            rows,
            cols,
            data,
        })
    }

    /// Builds from signed rows; `cols` is needed when there are no rows.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        check_prime(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&v| v.rem_euclid(p as i64) as u32));
        }
        Self::new(p, rows.len(), cols, data)
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self> {
        Self::new(p, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(p: u32, n: usize) -> Result<Self> {
        Self::scalar(p, n, 1)
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Result<Self> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = c % p;
        }
        Ok(m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// `self · other`.
    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p != other.p || self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let pm = self.p as u64;
        let mut data = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut data[i * other.cols + j];
                    *cell = ((*cell as u64 + a * other.get(k, j) as u64) % pm) as u32;
                }
            }
        }
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} for a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        let pm = self.p as u64;
        Ok((0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64 % pm)
                    .sum();
                (s % pm) as u32
            })
            .collect())
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut data = vec![0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        FpMatrix {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref(self.p, self.cols, &mut rows).len()
    }

    pub fn kernel(&self) -> Subspace {
        let basis = null_space(self.p, self.cols, &self.row_vecs());
        Subspace::from_rows(self.p, self.cols, basis)
    }

    /// Column space, a subspace of `F^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::from_rows(self.p, self.rows, self.transpose().row_vecs())
    }
}

/// A subspace of `F_p^n`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    basis: Vec<Vec<u32>>,
}

impl Subspace {
    fn from_rows(p: u32, ambient: usize, mut rows: Vec<Vec<u32>>) -> Self {
        rref(p, ambient, &mut rows);
        Self {
            p,
            ambient,
            basis: rows,
        }
    }

    pub fn zero(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        Ok(Self {
            p,
            ambient: n,
            basis: Vec::new(),
        })
    }

    pub fn full(p: u32, n: usize) -> Result<Self> {
        Ok(FpMatrix::identity(p, n)?.image())
    }

    pub fn span(p: u32, n: usize, vectors: &[Vec<u32>]) -> Result<Self> {
        check_prime(p)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} in F^{n}",
                v.len()
            )));
        }
        let rows = vectors
            .iter()
            .map(|v| v.iter().map(|&x| x % p).collect())
            .collect();
        Ok(Self::from_rows(p, n, rows))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(Error::ShapeMismatch(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.p, self.ambient, other.p, other.ambient
            )));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.iter().map(|&x| x % self.p).collect());
        rref(self.p, self.ambient, &mut rows).len() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.p == other.p
            && self.ambient == other.ambient
            && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let rows = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Self::from_rows(self.p, self.ambient, rows))
    }

    /// Vectors orthogonal to every basis vector under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        Self::from_rows(
            self.p,
            self.ambient,
            null_space(self.p, self.ambient, &self.basis),
        )
    }

    /// `U ∩ W = (U^⊥ + W^⊥)^⊥`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// `A·U`.
    pub fn image(&self, a: &FpMatrix) -> Result<Subspace> {
        if a.p != self.p || a.cols != self.ambient {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix applied to a subspace of F^{}",
                a.rows, a.cols, self.ambient
            )));
        }
        let rows = self
            .basis
            .iter()
            .map(|v| a.apply(v))
            .collect::<Result<_>>()?;
        Ok(Self::from_rows(self.p, a.rows, rows))
    }

    /// `A⁻¹(W) = Ker(N·A)` where the rows of `N` span `W^⊥`.
    pub fn preimage(&self, a: &FpMatrix) -> Result<Subspace> {
        if a.p != self.p || a.rows != self.ambient {
            return Err(Error::ShapeMismatch(format!(
                "preimage of a subspace of F^{} under a {}x{} matrix",
                self.ambient, a.rows, a.cols
            )));
        }
        let ann = self.annihilator();
        let n = FpMatrix {
            p: self.p,
            rows: ann.dim(),
            cols: self.ambient,
            data: ann.basis.concat(),
        };
        Ok(n.mul(a)?.kernel())
    }

    /// Coordinates `range` of every vector, as a subspace of `F^{range.len()}`.
    pub fn project(&self, range: std::ops::Range<usize>) -> Subspace {
        let n = range.len();
        let rows = self.basis.iter().map(|v| v[range.clone()].to_vec()).collect();
        Self::from_rows(self.p, n, rows)
    }

    pub fn label(&self) -> String {
        if self.basis.is_empty() {
            return "0".into();
        }
        let sep = if self.p > 10 { "." } else { "" };
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect();
        format!("<{}>", rows.join(","))
    }
}

/// Number of subspaces of `F_p^d`, saturating.
pub fn subspace_count(p: u32, d: usize) -> u128 {
    // Gaussian binomials via [d choose k] = [d-1 choose k-1] + p^k [d-1 choose k].
    let p = p as u128;
    let mut row = vec![1u128];
    for n in 1..=d {
        let mut next = vec![1u128; n + 1];
        let mut pk = 1u128;
        for k in 1..n {
            pk = pk.saturating_mul(p);
            next[k] = row[k - 1].saturating_add(pk.saturating_mul(row[k]));
        }
        row = next;
    }
    row.into_iter().fold(0u128, u128::saturating_add)
}

/// `Gr(F_p^d)` with its subspaces, ordered by dimension and then basis.
#[derive(Clone, Debug)]
pub struct SubspaceLattice {
    p: u32,
    dim: usize,
    lattice: Arc<FiniteLattice>,
    subspaces: Vec<Subspace>,
    index: HashMap<Subspace, Elem>,
}

pub fn subspace_lattice(p: u32, d: usize) -> Result<SubspaceLattice> {
    subspace_lattice_with_limit(p, d, DEFAULT_MAX_ELEMENTS)
}

pub fn subspace_lattice_with_limit(p: u32, d: usize, max_elements: usize) -> Result<SubspaceLattice> {
    check_prime(p)?;
    let vectors = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if vectors > MAX_AMBIENT_VECTORS {
        return Err(Error::SizeLimitExceeded {
            what: "ambient vectors",
            size: vectors,
            limit: MAX_AMBIENT_VECTORS,
        });
    }
    let count = subspace_count(p, d);
    if count > max_elements as u128 {
        return Err(Error::SizeLimitExceeded {
            what: "subspaces",
            size: count,
            limit: max_elements as u128,
        });
    }

    // One representative per line: first nonzero coordinate equal to 1.
    let mut lines = Vec::new();
    let mut v = vec![0u32; d];
    loop {
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            lines.push(v.clone());
        }
        let Some(i) = (0..d).rev().find(|&i| v[i] + 1 < p) else {
            break;
        };
        v[i] += 1;
        v[i + 1..].iter_mut().for_each(|x| *x = 0);
    }

    let mut found: BTreeSet<(usize, Subspace)> = BTreeSet::new();
    let mut edges: Vec<(Subspace, Subspace)> = Vec::new();
    let zero = Subspace::zero(p, d)?;
    found.insert((0, zero.clone()));
    let mut level = vec![zero];
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for u in &level {
            for line in lines.iter().filter(|l| !u.contains(l)) {
                let mut rows = u.basis.clone();
                rows.push(line.clone());
                let w = Subspace::from_rows(p, d, rows);
                edges.push((u.clone(), w.clone()));
                next.insert(w);
            }
        }
        level = next.into_iter().collect();
        for w in &level {
            found.insert((w.dim(), w.clone()));
        }
    }

    let subspaces: Vec<Subspace> = found.into_iter().map(|(_, s)| s).collect();
    let index: HashMap<Subspace, Elem> = subspaces
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let mut covers: Vec<(Elem, Elem)> = edges.iter().map(|(u, w)| (index[u], index[w])).collect();
    covers.sort_unstable();
    covers.dedup();
    let labels = subspaces.iter().map(Subspace::label).collect();
    let lattice = FiniteLattice::from_covers_with_limit(subspaces.len(), &covers, max_elements)?
        .with_labels(labels)?;
    Ok(SubspaceLattice {
        p,
        dim: d,
        lattice: Arc::new(lattice),
        subspaces,
        index,
    })
}

impl SubspaceLattice {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn subspace(&self, e: Elem) -> &Subspace {
        &self.subspaces[e]
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn element_of(&self, s: &Subspace) -> Result<Elem> {
        self.index.get(s).copied().ok_or_else(|| {
            Error::ShapeMismatch(format!(
                "subspace {} is not in Gr(F_{}^{})",
                s.label(),
                self.p,
                self.dim
            ))
        })
    }
}

/// `Gr(A)`: image as the lower map, preimage as the upper map.
pub fn gr_of_map_between(
    a: &FpMatrix,
    src: &SubspaceLattice,
    dst: &SubspaceLattice,
) -> Result<Connection> {
    if a.p != src.p || a.p != dst.p || a.cols != src.dim || a.rows != dst.dim {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix between Gr(F^{}) and Gr(F^{})",
            a.rows, a.cols, src.dim, dst.dim
        )));
    }
    let lower = src
        .subspaces
        .iter()
        .map(|u| dst.element_of(&u.image(a)?))
        .collect::<Result<_>>()?;
    let upper = dst
        .subspaces
        .iter()
        .map(|w| src.element_of(&w.preimage(a)?))
        .collect::<Result<_>>()?;
    Connection::from_maps(src.lattice.clone(), dst.lattice.clone(), lower, upper)
}

pub fn gr_of_map(a: &FpMatrix) -> Result<Connection> {
    let src = subspace_lattice(a.p, a.cols)?;
    let dst = subspace_lattice(a.p, a.rows)?;
    gr_of_map_between(a, &src, &dst)
}

/// A sheaf of finite-dimensional GF(p) vector spaces.
#[derive(Clone, Debug)]
pub struct VecSheaf {
    p: u32,
    complex: Arc<CellComplex>,
    dims: Vec<usize>,
    maps: HashMap<(CellIdx, CellIdx), FpMatrix>,
    offsets: Vec<usize>,
}

impl VecSheaf {
    /// `dims` is indexed like the complex; `maps[(σ, τ)]` has shape
    /// `dims[τ] × dims[σ]`.
    pub fn new(
        p: u32,
        complex: Arc<CellComplex>,
        dims: Vec<usize>,
        mut maps: HashMap<(CellIdx, CellIdx), FpMatrix>,
    ) -> Result<Self> {
        check_prime(p)?;
        complex.validate_incidences()?;
        if dims.len() != complex.len() {
            return Err(Error::StalkCount {
                expected: complex.len(),
                got: dims.len(),
            });
        }
        let name = |c: CellIdx| complex.cell(c).id.clone();
        let mut kept = HashMap::with_capacity(complex.covering().len());
        for &(s, t) in complex.covering() {
            let m = maps.remove(&(s, t)).ok_or_else(|| Error::MissingRestriction {
                face: name(s),
                cell: name(t),
            })?;
            if m.p != p || m.rows != dims[t] || m.cols != dims[s] {
                return Err(Error::InvalidRestriction {
                    face: name(s),
                    cell: name(t),
                    reason: format!(
                        "expected a {}x{} matrix over GF({p}), got {}x{} over GF({})",
                        dims[t], dims[s], m.rows, m.cols, m.p
                    ),
                });
            }
            kept.insert((s, t), m);
        }
        if let Some(&(s, t)) = maps.keys().min() {
            return Err(Error::NotACoveringPair {
                face: name(s),
                cell: name(t),
            });
        }
        for (s, u, middles) in complex.diamonds() {
            let composite = |t: CellIdx| kept[&(t, u)].mul(&kept[&(s, t)]);
            let first = composite(middles[0])?;
            for &t in &middles[1..] {
                if composite(t)? != first {
                    return Err(Error::FunctorialityViolation {
                        face: name(s),
                        cell: name(u),
                    });
                }
            }
        }
        let mut offsets = vec![0; complex.len()];
        for k in 0..=complex.dim().unwrap_or(0) {
            let mut off = 0;
            for &c in complex.skeleton(k) {
                offsets[c] = off;
                off += dims[c];
            }
        }
        Ok(Self {
            p,
            complex,
            dims,
            maps: kept,
            offsets,
        })
    }

    /// Every stalk `F_p^n`, every restriction the identity.
    pub fn constant(p: u32, complex: Arc<CellComplex>, n: usize) -> Result<Self> {
        let id = FpMatrix::identity(p, n)?;
        let maps = complex.covering().iter().map(|&pair| (pair, id.clone())).collect();
        let dims = vec![n; complex.len()];
        Self::new(p, complex, dims, maps)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn complex(&self) -> &Arc<CellComplex> {
        &self.complex
    }

    pub fn stalk_dim(&self, c: CellIdx) -> usize {
        self.dims[c]
    }

    pub fn stalk_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn restriction(&self, face: CellIdx, cell: CellIdx) -> Option<&FpMatrix> {
        self.maps.get(&(face, cell))
    }

    pub fn cochain_dim(&self, k: usize) -> usize {
        self.complex.skeleton(k).iter().map(|&c| self.dims[c]).sum()
    }

    /// Coordinates of cell `c` inside its cochain space.
    pub fn block(&self, c: CellIdx) -> std::ops::Range<usize> {
        self.offsets[c]..self.offsets[c] + self.dims[c]
    }

    /// The block matrix of `δ_k : C^k → C^{k+1}` with blocks `[σ:τ] F_{σ⋖τ}`.
    pub fn coboundary_matrix(&self, k: usize) -> FpMatrix {
        let rows = self.cochain_dim(k + 1);
        let cols = self.cochain_dim(k);
        let mut data = vec![0u32; rows * cols];
        for &t in self.complex.skeleton(k + 1) {
            for &s in self.complex.boundary(t) {
                let sign = self.complex.incidence(s, t).unwrap_or(1);
                let m = &self.maps[&(s, t)];
                for i in 0..m.rows {
                    for j in 0..m.cols {
                        let v = m.get(i, j);
                        let v = if sign < 0 { (self.p - v) % self.p } else { v };
                        data[(self.offsets[t] + i) * cols + self.offsets[s] + j] = v;
                    }
                }
            }
        }
        FpMatrix {
            p: self.p,
            rows,
            cols,
            data,
        }
    }

    fn previous_image(&self, k: usize) -> Subspace {
        match k.checked_sub(1) {
            Some(j) => self.coboundary_matrix(j).image(),
            None => Subspace {
                p: self.p,
                ambient: self.cochain_dim(0),
                basis: Vec::new(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecCohomology {
    pub degree: usize,
    pub betti: usize,
    /// `Ker δ_k`.
    pub kernel: Subspace,
    /// `Im δ_{k-1}`.
    pub image: Subspace,
}

pub fn vec_cohomology(v: &VecSheaf, k: usize) -> Result<VecCohomology> {
    let kernel = v.coboundary_matrix(k).kernel();
    let image = v.previous_image(k);
    let betti = kernel.dim().checked_sub(image.dim()).ok_or_else(|| {
        Error::IncidenceViolation {
            face: format!("degree {k}"),
            cell: format!("degree {}", k + 1),
        }
    })?;
    Ok(VecCohomology {
        degree: k,
        betti,
        kernel,
        image,
    })
}

/// `GH^k = [Im δ_{k-1}, Ker δ_k]` in `Gr(C^k)`.
#[derive(Clone, Debug)]
pub struct GrandisInterval {
    pub degree: usize,
    pub lo: Subspace,
    pub hi: Subspace,
    /// `dim hi − dim lo`.
    pub height: usize,
    /// The interval inside the enumerated `Gr(C^k)`, in enumerate mode.
    pub enumerated: Option<(Arc<SubspaceLattice>, Interval)>,
}

impl GrandisInterval {
    pub fn is_trivial(&self) -> bool {
        self.lo == self.hi
    }

    /// Longest chain in the enumerated interval.
    pub fn lattice_height(&self) -> Option<usize> {
        self.enumerated.as_ref().map(|(_, i)| i.height())
    }

    /// A basis of `hi` extending one of `lo`; the extra vectors span a
    /// complement of `lo` in `hi`.
    pub fn complement(&self) -> Vec<Vec<u32>> {
        let mut acc = self.lo.clone();
        let mut out = Vec::new();
        for v in &self.hi.basis {
            if !acc.contains(v) {
                out.push(v.clone());
                acc = acc.sum(&Subspace::from_rows(acc.p, acc.ambient, vec![v.clone()])).expect("same ambient");
            }
        }
        out
    }

    /// Every subspace between the endpoints, as `lo + S` for `S` ranging
    /// over subspaces of the complement.
    pub fn members(&self, max_elements: usize) -> Result<Vec<Subspace>> {
        let comp = self.complement();
        let gr = subspace_lattice_with_limit(self.lo.p, comp.len(), max_elements)?;
        let basis = FpMatrix {
            p: self.lo.p,
            rows: comp.len(),
            cols: self.lo.ambient,
            data: comp.concat(),
        }
        .transpose();
        gr.subspaces
            .iter()
            .map(|s| s.image(&basis)?.sum(&self.lo))
            .collect()
    }
}

pub fn grandis_cohomology(v: &VecSheaf, k: usize, mode: Mode) -> Result<GrandisInterval> {
    let h = vec_cohomology(v, k)?;
    let enumerated = match mode {
        Mode::Summary => None,
        Mode::Enumerate => {
            let gr = Arc::new(subspace_lattice(v.p, v.cochain_dim(k))?);
            let iv = Interval::new(
                gr.lattice.clone(),
                gr.element_of(&h.image)?,
                gr.element_of(&h.kernel)?,
            )?;
            Some((gr, iv))
        }
    };
    Ok(GrandisInterval {
        degree: k,
        height: h.betti,
        lo: h.image,
        hi: h.kernel,
        enumerated,
    })
}

/// The lattice sheaf `Gr(V)` together with the subspace lattices of its stalks.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub sheaf: LatticeSheaf,
    stalks: Vec<Arc<SubspaceLattice>>,
}

impl Transfer {
    pub fn new(v: &VecSheaf) -> Result<Self> {
        let mut cache: HashMap<usize, Arc<SubspaceLattice>> = HashMap::new();
        let mut stalks = Vec::with_capacity(v.dims.len());
        for &d in &v.dims {
            let gr = match cache.get(&d) {
                Some(gr) => gr.clone(),
                None => {
                    let gr = Arc::new(subspace_lattice(v.p, d)?);
                    cache.insert(d, gr.clone());
                    gr
                }
            };
            stalks.push(gr);
        }
        let mut lowers = HashMap::with_capacity(v.maps.len());
        for (&(s, t), m) in &v.maps {
            let conn = gr_of_map_between(m, &stalks[s], &stalks[t])?;
            lowers.insert((s, t), conn.lower_map().to_vec());
        }
        let lattices = stalks.iter().map(|g| g.lattice.clone()).collect();
        let sheaf = LatticeSheaf::new(v.complex.clone(), lattices, lowers)?;
        Ok(Self { sheaf, stalks })
    }

    pub fn stalk_lattice(&self, c: CellIdx) -> &Arc<SubspaceLattice> {
        &self.stalks[c]
    }

    /// The restriction as `Gr` of its matrix, with preimages as upper maps.
    pub fn gr_restriction(&self, v: &VecSheaf, face: CellIdx, cell: CellIdx) -> Result<Connection> {
        let m = v.restriction(face, cell).ok_or_else(|| Error::NotAFace {
            face: v.complex.cell(face).id.clone(),
            cell: v.complex.cell(cell).id.clone(),
        })?;
        gr_of_map_between(m, &self.stalks[face], &self.stalks[cell])
    }

    /// Reads a subspace `W ⊆ C^k` as the cochain `(π_σ W)_σ` of its
    /// projections onto each stalk.
    pub fn cochain_of(&self, v: &VecSheaf, k: usize, w: &Subspace) -> Result<Cochain> {
        if w.ambient != v.cochain_dim(k) || w.p != v.p {
            return Err(Error::ShapeMismatch(format!(
                "subspace of F^{} is not in C^{k} of dimension {}",
                w.ambient,
                v.cochain_dim(k)
            )));
        }
        let values = v
            .complex
            .skeleton(k)
            .iter()
            .map(|&c| self.stalks[c].element_of(&w.project(v.block(c))))
            .collect::<Result<_>>()?;
        self.sheaf.cochain(k, values)
    }
}

pub fn transfer_sheaf(v: &VecSheaf) -> Result<LatticeSheaf> {
    Ok(Transfer::new(v)?.sheaf)
}

/// On the cochain complex `Gr(C^•)`, checks `L⁺x = x ∨ Ker δ_k` and
/// `L⁻x = x ∧ Im δ_{k-1}` for every subspace `x ⊆ C^k`, where
/// `L⁺ = Gr(δ_k)^• Gr(δ_k)_•` and `L⁻ = Gr(δ_{k-1})_• Gr(δ_{k-1})^•`.
/// Returns the first failing subspace.
pub fn gr_laplacian_violation(v: &VecSheaf, k: usize) -> Result<Option<Subspace>> {
    let here = subspace_lattice(v.p, v.cochain_dim(k))?;
    let next = subspace_lattice(v.p, v.cochain_dim(k + 1))?;
    let up = gr_of_map_between(&v.coboundary_matrix(k), &here, &next)?;
    let h = vec_cohomology(v, k)?;
    let ker = here.element_of(&h.kernel)?;
    let im = here.element_of(&h.image)?;
    let down = match k.checked_sub(1) {
        Some(j) => {
            let prev = subspace_lattice(v.p, v.cochain_dim(j))?;
            Some(gr_of_map_between(&v.coboundary_matrix(j), &prev, &here)?)
        }
        None => None,
    };
    let l = &here.lattice;
    for x in l.elements() {
        let plus = up.upper(up.lower(x));
        let minus = down
            .as_ref()
            .map_or(l.bottom(), |d| d.lower(d.upper(x)));
        if plus != l.join(x, ker) || minus != l.meet(x, im) {
            return Ok(Some(here.subspaces[x].clone()));
        }
    }
    Ok(None)
}

/// Renders a subspace lattice's elements with their bases, one per line.
pub fn describe(gr: &SubspaceLattice) -> String {
    let mut out = String::new();
    for (i, s) in gr.subspaces.iter().enumerate() {
        let _ = writeln!(out, "{i}: dim {} {}", s.dim(), s.label());
    }
    out
}
