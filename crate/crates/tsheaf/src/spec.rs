//! JSON spec files for lattice sheaves, vector-space sheaves and cochains.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use tsheaf_core::complex::{Cell, CellComplex, CellIdx, FaceSpec};
use tsheaf_core::grassmann::{subspace_lattice, FpMatrix, Transfer, VecSheaf};
use tsheaf_core::lattice::{Elem, FiniteLattice};
use tsheaf_core::sheaf::{Cochain, LatticeSheaf};
use tsheaf_core::Limits;

use crate::error::{ToolError, ToolResult, WithPath};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<FaceEntry>,
    /// Shorthand for 0-cells.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<String>,
    /// Shorthand `[edge, tail, head]` for 1-cells and their two faces.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<(String, String, String)>,
    /// Simplicial closure of the listed vertex sets; excludes the other fields.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub id: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FaceEntry {
    Signed(String, String, i8),
    Plain(String, String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LatticeSpec {
    Chain {
        n: usize,
    },
    Powerset {
        atoms: usize,
    },
    Diamond,
    Pentagon,
    Explicit {
        size: usize,
        covers: Vec<(usize, usize)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Subspaces {
        p: u32,
        dim: usize,
    },
    Product {
        factors: Vec<String>,
    },
}

/// An element given by index or by label.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRef {
    Index(usize),
    Label(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RestrictionSpec {
    /// `"identity"` or `"zero"`.
    Named(String),
    Lower { lower: Vec<ElemRef> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafSpec {
    pub complex: ComplexSpec,
    pub lattices: BTreeMap<String, LatticeSpec>,
    #[serde(default)]
    pub stalks: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_stalk: Option<String>,
    /// Keyed `"face<cell"`. Missing pairs default to the identity when both
    /// stalks name the same lattice.
    #[serde(default)]
    pub restrictions: BTreeMap<String, RestrictionSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    /// `"identity"` or `"zero"`.
    Named(String),
    /// `c·I`.
    Scalar(i64),
    Rows(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VecSpec {
    pub p: u32,
    pub complex: ComplexSpec,
    #[serde(default)]
    pub stalk_dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_dim: Option<usize>,
    /// Keyed `"face<cell"`; rows of a `dim(cell) × dim(face)` matrix.
    /// Missing pairs default to the identity when the dimensions agree.
    #[serde(default)]
    pub restrictions: BTreeMap<String, MatrixSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainSpec {
    pub degree: usize,
    pub values: BTreeMap<String, ElemRef>,
}

/// A loaded spec file: either kind, with the lattice sheaf used by the
/// order-theoretic commands.
#[derive(Clone, Debug)]
pub enum Loaded {
    Lattice(LatticeSheaf),
    Vector {
        vec: VecSheaf,
        transfer: Box<Transfer>,
    },
}

impl Loaded {
    pub fn sheaf(&self) -> &LatticeSheaf {
        match self {
            Self::Lattice(s) => s,
            Self::Vector { transfer, .. } => &transfer.sheaf,
        }
    }

    pub fn with_limits(self, limits: Limits) -> Self {
        match self {
            Self::Lattice(s) => Self::Lattice(s.with_limits(limits)),
            Self::Vector { vec, mut transfer } => {
                transfer.sheaf = transfer.sheaf.with_limits(limits);
                Self::Vector { vec, transfer }
            }
        }
    }

    pub fn vec(&self) -> Option<(&VecSheaf, &Transfer)> {
        match self {
            Self::Lattice(_) => None,
            Self::Vector { vec, transfer } => Some((vec, transfer)),
        }
    }
}

pub fn read(path: &Path) -> ToolResult<String> {
    std::fs::read_to_string(path).map_err(|e| ToolError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn from_json<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> ToolResult<T> {
    serde_json::from_str(text).map_err(|e| {
        ToolError::parse(
            path,
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// Reads either spec kind; vector specs are recognized by their `p` field.
pub fn load(path: &Path) -> ToolResult<Loaded> {
    let name = path.display().to_string();
    let text = read(path)?;
    load_str(&name, &text)
}

pub fn load_str(name: &str, text: &str) -> ToolResult<Loaded> {
    let probe: Value = from_json(name, text)?;
    if probe.get("p").is_some() {
        let vec = build_vec(name, &from_json(name, text)?)?;
        let transfer = Transfer::new(&vec).at(name)?;
        Ok(Loaded::Vector {
            vec,
            transfer: Box::new(transfer),
        })
    } else {
        Ok(Loaded::Lattice(build_sheaf(name, &from_json(name, text)?)?))
    }
}

pub fn parse_sheaf_spec(path: &Path) -> ToolResult<LatticeSheaf> {
    let name = path.display().to_string();
    build_sheaf(&name, &from_json(&name, &read(path)?)?)
}

pub fn parse_vec_spec(path: &Path) -> ToolResult<VecSheaf> {
    let name = path.display().to_string();
    build_vec(&name, &from_json(&name, &read(path)?)?)
}

pub fn build_complex(path: &str, spec: &ComplexSpec) -> ToolResult<CellComplex> {
    if !spec.simplices.is_empty() {
        if !(spec.cells.is_empty() && spec.faces.is_empty() && spec.vertices.is_empty() && spec.edges.is_empty()) {
            return Err(ToolError::parse(
                path,
                "complex.simplices",
                "simplices cannot be combined with cells, faces, vertices or edges",
            ));
        }
        return CellComplex::simplicial(&spec.simplices).at(path);
    }
    let mut cells: Vec<Cell> = spec.cells.iter().map(|c| Cell { id: c.id.clone(), dim: c.dim }).collect();
    cells.extend(spec.vertices.iter().map(|v| Cell { id: v.clone(), dim: 0 }));
    let mut faces: Vec<FaceSpec> = spec
        .faces
        .iter()
        .map(|f| match f {
            FaceEntry::Plain(a, b) => FaceSpec::new(a.as_str(), b.as_str()),
            FaceEntry::Signed(a, b, i) => FaceSpec::signed(a.as_str(), b.as_str(), *i),
        })
        .collect();
    for (e, a, b) in &spec.edges {
        if a == b {
            return Err(ToolError::core(path, tsheaf_core::Error::LoopEdge(e.clone())));
        }
        cells.push(Cell { id: e.clone(), dim: 1 });
        faces.push(FaceSpec::signed(a.as_str(), e.as_str(), -1));
        faces.push(FaceSpec::signed(b.as_str(), e.as_str(), 1));
    }
    let complex = CellComplex::new(cells, faces).at(path)?;
    if complex.dim().is_some_and(|d| d <= 1) && !complex.has_incidences() {
        return complex.orient_graph().at(path);
    }
    Ok(complex)
}

fn split_pair<'a>(path: &str, field: &str, key: &'a str) -> ToolResult<(&'a str, &'a str)> {
    key.split_once('<')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| ToolError::parse(path, field, format!("expected \"face<cell\", got {key:?}")))
}

fn lookup(path: &str, field: &str, complex: &CellComplex, id: &str) -> ToolResult<CellIdx> {
    complex
        .find(id)
        .map_err(|_| ToolError::parse(path, field, format!("unknown cell {id:?}")))
}

struct LatticeTable<'a> {
    path: &'a str,
    specs: &'a BTreeMap<String, LatticeSpec>,
    built: HashMap<String, Arc<FiniteLattice>>,
    visiting: HashSet<String>,
}

impl LatticeTable<'_> {
    fn get(&mut self, name: &str, field: &str) -> ToolResult<Arc<FiniteLattice>> {
        if let Some(l) = self.built.get(name) {
            return Ok(l.clone());
        }
        let path = self.path;
        let spec = self
            .specs
            .get(name)
            .ok_or_else(|| ToolError::parse(path, field, format!("unknown lattice {name:?}")))?;
        let here = format!("lattices.{name}");
        if !self.visiting.insert(name.to_string()) {
            return Err(ToolError::parse(path, here, "product refers to itself"));
        }
        let lattice = match spec {
            LatticeSpec::Chain { n } => FiniteLattice::chain(*n).at(path)?,
            LatticeSpec::Powerset { atoms } => FiniteLattice::powerset(*atoms).at(path)?,
            LatticeSpec::Diamond => FiniteLattice::diamond(),
            LatticeSpec::Pentagon => FiniteLattice::pentagon(),
            LatticeSpec::Explicit { size, covers, labels } => {
                let l = FiniteLattice::from_covers(*size, covers).at(path)?;
                match labels {
                    Some(labels) => l.with_labels(labels.clone()).at(path)?,
                    None => l,
                }
            }
            LatticeSpec::Subspaces { p, dim } => {
                (**subspace_lattice(*p, *dim).at(path)?.lattice()).clone()
            }
            LatticeSpec::Product { factors } => {
                let mut fs = Vec::with_capacity(factors.len());
                for f in factors {
                    fs.push(self.get(f, &here)?);
                }
                let refs: Vec<&FiniteLattice> = fs.iter().map(|f| f.as_ref()).collect();
                FiniteLattice::product(&refs).at(path)?
            }
        };
        self.visiting.remove(name);
        let lattice = Arc::new(lattice);
        self.built.insert(name.to_string(), lattice.clone());
        Ok(lattice)
    }
}

pub fn resolve_elem(path: &str, field: &str, lattice: &FiniteLattice, e: &ElemRef) -> ToolResult<Elem> {
    match e {
        ElemRef::Index(i) if *i < lattice.len() => Ok(*i),
        ElemRef::Index(i) => Err(ToolError::parse(
            path,
            field,
            format!("element {i} out of range for a lattice of size {}", lattice.len()),
        )),
        ElemRef::Label(s) => lattice
            .labels()
            .iter()
            .position(|l| l == s)
            .ok_or_else(|| ToolError::parse(path, field, format!("no element labelled {s:?}"))),
    }
}

pub fn build_sheaf(path: &str, spec: &SheafSpec) -> ToolResult<LatticeSheaf> {
    let complex = Arc::new(build_complex(path, &spec.complex)?);
    let mut table = LatticeTable {
        path,
        specs: &spec.lattices,
        built: HashMap::new(),
        visiting: HashSet::new(),
    };
    for id in spec.stalks.keys() {
        lookup(path, &format!("stalks.{id}"), &complex, id)?;
    }
    let mut names = Vec::with_capacity(complex.len());
    let mut stalks = Vec::with_capacity(complex.len());
    for cell in complex.cells() {
        let field = format!("stalks.{}", cell.id);
        let name = spec
            .stalks
            .get(&cell.id)
            .or(spec.default_stalk.as_ref())
            .ok_or_else(|| ToolError::parse(path, &field, "no stalk and no default_stalk"))?;
        stalks.push(table.get(name, &field)?);
        names.push(name.as_str());
    }

    let mut lowers = HashMap::new();
    for (key, r) in &spec.restrictions {
        let field = format!("restrictions.{key}");
        let (a, b) = split_pair(path, &field, key)?;
        let s = lookup(path, &field, &complex, a)?;
        let t = lookup(path, &field, &complex, b)?;
        let (src, dst) = (&stalks[s], &stalks[t]);
        let lower = match r {
            RestrictionSpec::Named(n) if n == "identity" => {
                if names[s] != names[t] && src != dst {
                    return Err(ToolError::parse(path, &field, "identity between different stalks"));
                }
                src.elements().collect()
            }
            RestrictionSpec::Named(n) if n == "zero" => vec![dst.bottom(); src.len()],
            RestrictionSpec::Named(n) => {
                return Err(ToolError::parse(path, &field, format!("unknown restriction {n:?}")))
            }
            RestrictionSpec::Lower { lower } => lower
                .iter()
                .map(|e| resolve_elem(path, &field, dst, e))
                .collect::<ToolResult<Vec<_>>>()?,
        };
        lowers.insert((s, t), lower);
    }
    for &(s, t) in complex.covering() {
        if !lowers.contains_key(&(s, t)) && (names[s] == names[t] || stalks[s] == stalks[t]) {
            lowers.insert((s, t), stalks[s].elements().collect());
        }
    }
    LatticeSheaf::new(complex, stalks, lowers).at(path)
}

pub fn build_vec(path: &str, spec: &VecSpec) -> ToolResult<VecSheaf> {
    let complex = Arc::new(build_complex(path, &spec.complex)?);
    let p = spec.p;
    for id in spec.stalk_dims.keys() {
        lookup(path, &format!("stalk_dims.{id}"), &complex, id)?;
    }
    let dims = complex
        .cells()
        .iter()
        .map(|c| {
            spec.stalk_dims
                .get(&c.id)
                .copied()
                .or(spec.default_dim)
                .ok_or_else(|| ToolError::parse(path, format!("stalk_dims.{}", c.id), "no dimension and no default_dim"))
        })
        .collect::<ToolResult<Vec<_>>>()?;
    let mut maps = HashMap::new();
    for (key, m) in &spec.restrictions {
        let field = format!("restrictions.{key}");
        let (a, b) = split_pair(path, &field, key)?;
        let s = lookup(path, &field, &complex, a)?;
        let t = lookup(path, &field, &complex, b)?;
        let (rows, cols) = (dims[t], dims[s]);
        let matrix = match m {
            MatrixSpec::Named(n) if n == "identity" => {
                if rows != cols {
                    return Err(ToolError::parse(path, &field, "identity between stalks of different dimension"));
                }
                FpMatrix::identity(p, rows)
            }
            MatrixSpec::Named(n) if n == "zero" => FpMatrix::zeros(p, rows, cols),
            MatrixSpec::Named(n) => {
                return Err(ToolError::parse(path, &field, format!("unknown matrix {n:?}")))
            }
            MatrixSpec::Scalar(c) => {
                if rows != cols {
                    return Err(ToolError::parse(path, &field, "scalar between stalks of different dimension"));
                }
                FpMatrix::scalar(p, rows, c.rem_euclid(p.max(1) as i64) as u32)
            }
            MatrixSpec::Rows(r) => FpMatrix::from_rows(p, cols, r),
        }
        .at(path)?;
        maps.insert((s, t), matrix);
    }
    for &(s, t) in complex.covering() {
        if !maps.contains_key(&(s, t)) && dims[s] == dims[t] {
            maps.insert((s, t), FpMatrix::identity(p, dims[s]).at(path)?);
        }
    }
    VecSheaf::new(p, complex, dims, maps).at(path)
}

pub fn parse_cochain(path: &str, text: &str, sheaf: &LatticeSheaf) -> ToolResult<Cochain> {
    let spec: CochainSpec = from_json(path, text)?;
    build_cochain(path, &spec, sheaf)
}

pub fn build_cochain(path: &str, spec: &CochainSpec, sheaf: &LatticeSheaf) -> ToolResult<Cochain> {
    let complex = sheaf.complex();
    let mut pairs = Vec::with_capacity(spec.values.len());
    for (id, e) in &spec.values {
        let field = format!("values.{id}");
        let c = lookup(path, &field, complex, id)?;
        pairs.push((id.as_str(), resolve_elem(path, &field, sheaf.stalk(c), e)?));
    }
    sheaf.cochain_from_ids(spec.degree, pairs).at(path)
}

/// Cochain as `{degree, values: {cell: label}}`.
pub fn cochain_spec(sheaf: &LatticeSheaf, x: &Cochain) -> CochainSpec {
    let cells = sheaf.complex().skeleton(x.degree());
    let values = cells
        .iter()
        .zip(x.values())
        .map(|(&c, &v)| {
            let stalk = sheaf.stalk(c);
            (sheaf.complex().cell(c).id.clone(), label_ref(stalk, v))
        })
        .collect();
    CochainSpec {
        degree: x.degree(),
        values,
    }
}

/// Labels when they identify the element, indices otherwise.
fn label_ref(lattice: &FiniteLattice, v: Elem) -> ElemRef {
    let label = lattice.label(v);
    if lattice.labels().iter().position(|l| l == label) == Some(v) {
        ElemRef::Label(label.to_string())
    } else {
        ElemRef::Index(v)
    }
}

/// Writes a complex back out as explicit cells and signed faces.
pub fn complex_spec(complex: &CellComplex) -> ComplexSpec {
    let cells = complex
        .cells()
        .iter()
        .map(|c| CellSpec { id: c.id.clone(), dim: c.dim })
        .collect();
    let faces = complex
        .covering()
        .iter()
        .map(|&(s, t)| {
            let (a, b) = (complex.cell(s).id.clone(), complex.cell(t).id.clone());
            match complex.incidence(s, t) {
                Some(i) => FaceEntry::Signed(a, b, i),
                None => FaceEntry::Plain(a, b),
            }
        })
        .collect();
    ComplexSpec {
        cells,
        faces,
        ..Default::default()
    }
}

/// The transferred lattice sheaf as a lattice spec: stalks are named
/// `gr<p>_<d>` subspace lattices and restrictions list image indices.
pub fn transferred_spec(vec: &VecSheaf, transfer: &Transfer) -> SheafSpec {
    let complex = vec.complex();
    let name = |d: usize| format!("gr{}_{d}", vec.p());
    let lattices = vec
        .stalk_dims()
        .iter()
        .map(|&d| (name(d), LatticeSpec::Subspaces { p: vec.p(), dim: d }))
        .collect();
    let stalks = complex
        .cells()
        .iter()
        .zip(vec.stalk_dims())
        .map(|(c, &d)| (c.id.clone(), name(d)))
        .collect();
    let restrictions = transfer
        .sheaf
        .restrictions()
        .map(|((s, t), r)| {
            let key = format!("{}<{}", complex.cell(s).id, complex.cell(t).id);
            let lower = r.lower_map().iter().map(|&e| ElemRef::Index(e)).collect();
            (key, RestrictionSpec::Lower { lower })
        })
        .collect();
    SheafSpec {
        complex: complex_spec(complex),
        lattices,
        stalks,
        default_stalk: None,
        restrictions,
    }
}
