//! Finite regular cell complexes described by their face poset.
//!
//! Only the covering relation (faces one dimension down) and the optional
//! signed incidence numbers are stored. Cells are indexed by sorting on
//! `(dim, id)`, so the `k`-cells of a cochain appear in id order.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::{Error, Result};

pub type CellIdx = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
}

/// One covering pair `face ⋖ cell` as supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSpec {
    pub face: String,
    pub cell: String,
    pub incidence: Option<i8>,
}

impl FaceSpec {
    pub fn new(face: impl Into<String>, cell: impl Into<String>) -> Self {
        Self {
            face: face.into(),
            cell: cell.into(),
            incidence: None,
        }
    }

    pub fn signed(face: impl Into<String>, cell: impl Into<String>, incidence: i8) -> Self {
        Self {
            face: face.into(),
            cell: cell.into(),
            incidence: Some(incidence),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    cells: Vec<Cell>,
    index: HashMap<String, CellIdx>,
    by_dim: Vec<Vec<CellIdx>>,
    position: Vec<usize>,
    boundary: Vec<Vec<CellIdx>>,
    coboundary: Vec<Vec<CellIdx>>,
    covering: Vec<(CellIdx, CellIdx)>,
    incidence: HashMap<(CellIdx, CellIdx), i8>,
    /// `above[σ]` holds every τ with σ ⊴ τ.
    above: Vec<FixedBitSet>,
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>, faces: Vec<FaceSpec>) -> Result<Self> {
        let mut cells = cells;
        cells.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
        let mut index = HashMap::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::DuplicateCell(c.id.clone()));
            }
        }
        let max_dim = cells.iter().map(|c| c.dim).max();
        let mut by_dim = vec![Vec::new(); max_dim.map_or(0, |d| d + 1)];
        let mut position = vec![0; cells.len()];
        for (i, c) in cells.iter().enumerate() {
            position[i] = by_dim[c.dim].len();
            by_dim[c.dim].push(i);
        }

        let n = cells.len();
        let mut boundary = vec![Vec::new(); n];
        let mut coboundary = vec![Vec::new(); n];
        let mut covering = Vec::with_capacity(faces.len());
        let mut incidence = HashMap::new();
        for f in &faces {
            let s = *index
                .get(&f.face)
                .ok_or_else(|| Error::UnknownCell(f.face.clone()))?;
            let t = *index
                .get(&f.cell)
                .ok_or_else(|| Error::UnknownCell(f.cell.clone()))?;
            if cells[t].dim != cells[s].dim + 1 {
                return Err(Error::DimMismatch {
                    face: f.face.clone(),
                    cell: f.cell.clone(),
                });
            }
            if boundary[t].contains(&s) {
                return Err(Error::DuplicateFace {
                    face: f.face.clone(),
                    cell: f.cell.clone(),
                });
            }
            if let Some(sign) = f.incidence {
                if sign != 1 && sign != -1 {
                    return Err(Error::BadIncidence {
                        face: f.face.clone(),
                        cell: f.cell.clone(),
                        value: sign,
                    });
                }
                incidence.insert((s, t), sign);
            }
            boundary[t].push(s);
            coboundary[s].push(t);
            covering.push((s, t));
        }
        for list in boundary.iter_mut().chain(coboundary.iter_mut()) {
            list.sort_unstable();
        }
        covering.sort_unstable();

        // Upward closure, processing high dimensions first.
        let mut above = vec![FixedBitSet::with_capacity(n); n];
        for s in (0..n).rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(s);
            for &t in &coboundary[s] {
                set.union_with(&above[t]);
            }
            above[s] = set;
        }

        Ok(Self {
            cells,
            index,
            by_dim,
            position,
            boundary,
            coboundary,
            covering,
            incidence,
            above,
        })
    }

    /// A graph on `vertices` with one edge per pair, oriented from the
    /// earlier vertex to the later one in id order.
    pub fn graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut cells: Vec<Cell> = vertices
            .iter()
            .map(|v| Cell {
                id: v.to_string(),
                dim: 0,
            })
            .collect();
        let mut faces = Vec::new();
        for &(e, a, b) in edges {
            cells.push(Cell {
                id: e.to_string(),
                dim: 1,
            });
            faces.push(FaceSpec::new(a, e));
            if a != b {
                faces.push(FaceSpec::new(b, e));
            }
        }
        Self::new(cells, faces)?.orient_graph()
    }

    /// The closure of a family of simplices on vertices `0..`, with cells named
    /// by their sorted vertex lists (`"0"`, `"0-1"`, `"0-1-2"`, ...) and the
    /// alternating-sign incidence `[∂_i s : s] = (-1)^i`.
    pub fn simplicial(simplices: &[Vec<usize>]) -> Result<Self> {
        use std::collections::BTreeSet;
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            // every nonempty subset
            let k = s.len();
            for mask in 1u32..(1 << k) {
                all.insert(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| s[i])
                        .collect(),
                );
            }
        }
        let name = |s: &[usize]| {
            s.iter()
                .map(|v| format!("{v:02}"))
                .collect::<Vec<_>>()
                .join("-")
        };
        let cells = all
            .iter()
            .map(|s| Cell {
                id: name(s),
                dim: s.len() - 1,
            })
            .collect();
        let mut faces = Vec::new();
        for s in all.iter().filter(|s| s.len() > 1) {
            for i in 0..s.len() {
                let mut f = s.clone();
                f.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                faces.push(FaceSpec::signed(name(&f), name(s), sign));
            }
        }
        Self::new(cells, faces)
    }

    /// Fills missing vertex-edge incidences: the earlier vertex (by index)
    /// gets `-1`, the later one `+1`.
    pub fn orient_graph(mut self) -> Result<Self> {
        if self.dim().is_some_and(|d| d > 1) {
            return Err(Error::NotAGraph(format!(
                "complex has dimension {}",
                self.dim().unwrap_or(0)
            )));
        }
        for e in self.skeleton(1).to_vec() {
            let ends = &self.boundary[e];
            match ends.len() {
                2 => {
                    let (tail, head) = (ends[0], ends[1]);
                    self.incidence.entry((tail, e)).or_insert(-1);
                    self.incidence.entry((head, e)).or_insert(1);
                }
                1 => return Err(Error::LoopEdge(self.cells[e].id.clone())),
                n => {
                    return Err(Error::NotAGraph(format!(
                        "edge {} covers {n} vertices",
                        self.cells[e].id
                    )))
                }
            }
        }
        Ok(self)
    }

    /// Checks `Σ_τ [σ:τ][τ:υ] = 0` for every `σ ⋖ τ ⋖ υ` pattern; every
    /// covering pair must carry an incidence.
    pub fn validate_incidences(&self) -> Result<()> {
        for &(s, t) in &self.covering {
            if !self.incidence.contains_key(&(s, t)) {
                return Err(Error::IncidenceMissing {
                    face: self.cells[s].id.clone(),
                    cell: self.cells[t].id.clone(),
                });
            }
        }
        for u in 0..self.cells.len() {
            let mut sums: HashMap<CellIdx, i32> = HashMap::new();
            for &t in &self.boundary[u] {
                for &s in &self.boundary[t] {
                    *sums.entry(s).or_default() +=
                        i32::from(self.incidence[&(s, t)]) * i32::from(self.incidence[&(t, u)]);
                }
            }
            let mut bad: Vec<_> = sums.into_iter().filter(|&(_, v)| v != 0).collect();
            bad.sort_unstable();
            if let Some(&(s, _)) = bad.first() {
                return Err(Error::IncidenceViolation {
                    face: self.cells[s].id.clone(),
                    cell: self.cells[u].id.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn has_incidences(&self) -> bool {
        self.covering
            .iter()
            .all(|pair| self.incidence.contains_key(pair))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Largest cell dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn cell(&self, c: CellIdx) -> &Cell {
        &self.cells[c]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_dim(&self, c: CellIdx) -> usize {
        self.cells[c].dim
    }

    pub fn find(&self, id: &str) -> Result<CellIdx> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    /// The `k`-cells, in id order. Empty past the top dimension.
    pub fn skeleton(&self, k: usize) -> &[CellIdx] {
        self.by_dim.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, k: usize) -> usize {
        self.skeleton(k).len()
    }

    /// Index of a cell among the cells of its dimension.
    pub fn position(&self, c: CellIdx) -> usize {
        self.position[c]
    }

    /// Faces one dimension down.
    pub fn boundary(&self, c: CellIdx) -> &[CellIdx] {
        &self.boundary[c]
    }

    /// Cofaces one dimension up.
    pub fn coboundary(&self, c: CellIdx) -> &[CellIdx] {
        &self.coboundary[c]
    }

    pub fn boundary_of(&self, id: &str) -> Result<Vec<&str>> {
        let c = self.find(id)?;
        Ok(self.boundary[c]
            .iter()
            .map(|&s| self.cells[s].id.as_str())
            .collect())
    }

    pub fn coboundary_of(&self, id: &str) -> Result<Vec<&str>> {
        let c = self.find(id)?;
        Ok(self.coboundary[c]
            .iter()
            .map(|&s| self.cells[s].id.as_str())
            .collect())
    }

    pub fn covering(&self) -> &[(CellIdx, CellIdx)] {
        &self.covering
    }

    pub fn incidence(&self, face: CellIdx, cell: CellIdx) -> Option<i8> {
        self.incidence.get(&(face, cell)).copied()
    }

    /// `σ ⊴ τ` in the face poset.
    pub fn is_face(&self, s: CellIdx, t: CellIdx) -> bool {
        self.above[s].contains(t)
    }

    /// Every `σ ⋖ τ ⋖ υ` with at least two middle cells, as `(σ, υ, [τ...])`.
    pub fn diamonds(&self) -> Vec<(CellIdx, CellIdx, Vec<CellIdx>)> {
        let mut out = Vec::new();
        for u in 0..self.cells.len() {
            let mut middles: HashMap<CellIdx, Vec<CellIdx>> = HashMap::new();
            for &t in &self.boundary[u] {
                for &s in &self.boundary[t] {
                    middles.entry(s).or_default().push(t);
                }
            }
            let mut found: Vec<_> = middles
                .into_iter()
                .filter(|(_, ts)| ts.len() > 1)
                .collect();
            found.sort_unstable();
            out.extend(found.into_iter().map(|(s, ts)| (s, u, ts)));
        }
        out
    }

    /// Graphviz rendering of the face poset's covering relation.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=BT;");
        for (k, cells) in self.by_dim.iter().enumerate() {
            let ids: Vec<String> = cells
                .iter()
                .map(|&c| format!("\"{}\"", self.cells[c].id.replace('"', "'")))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; /* dim {k} */ {} }}", ids.join("; "));
        }
        for &(s, t) in &self.covering {
            let label = self
                .incidence(s, t)
                .map(|i| format!(" [label=\"{i:+}\"]"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\"{label};",
                self.cells[s].id.replace('"', "'"),
                self.cells[t].id.replace('"', "'")
            );
        }
        out.push_str("}\n");
        out
    }
}
