//! Random instances shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tsheaf_core::complex::CellComplex;
use tsheaf_core::galois::join_preservation_violation;
use tsheaf_core::grassmann::{FpMatrix, Subspace, VecSheaf};
use tsheaf_core::lattice::{Elem, FiniteLattice};
use tsheaf_core::sheaf::LatticeSheaf;

pub fn random_stalk(rng: &mut ChaCha8Rng) -> FiniteLattice {
    match rng.gen_range(0..3) {
        0 => FiniteLattice::chain(rng.gen_range(1..=5)).unwrap(),
        1 => FiniteLattice::powerset(rng.gen_range(1..=3)).unwrap(),
        _ => FiniteLattice::diamond(),
    }
}

/// Picks images for join-irreducibles in a linear extension (each above the
/// images of the irreducibles below it) and extends by joins. Retries when
/// the extension breaks a join; gives up with the zero map.
pub fn random_lower(rng: &mut ChaCha8Rng, src: &FiniteLattice, dst: &FiniteLattice) -> Vec<Elem> {
    let irr = src.structure_report().join_irreducibles;
    let order: Vec<Elem> = src
        .linear_extension()
        .into_iter()
        .filter(|j| irr.contains(j))
        .collect();
    for _ in 0..16 {
        let mut image: HashMap<Elem, Elem> = HashMap::new();
        for &j in &order {
            let floor = dst.join_of(
                order
                    .iter()
                    .filter(|&&i| i != j && src.leq(i, j))
                    .map(|i| image[i]),
            );
            let above: Vec<Elem> = dst.up_set(floor).collect();
            image.insert(j, *above.choose(rng).unwrap());
        }
        let lower: Vec<Elem> = src
            .elements()
            .map(|x| dst.join_of(order.iter().filter(|&&j| src.leq(j, x)).map(|j| image[j])))
            .collect();
        if join_preservation_violation(src, dst, &lower).is_none() {
            return lower;
        }
    }
    vec![dst.bottom(); src.len()]
}

pub struct Graph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

impl Graph {
    pub fn random(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> Self {
        let n = rng.gen_range(1..=max_vertices);
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        if n > 1 {
            for e in 0..rng.gen_range(0..=max_edges) {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                edges.push((format!("e{e}"), vertices[a].clone(), vertices[b].clone()));
            }
        }
        Self { vertices, edges }
    }

    pub fn complex(&self) -> CellComplex {
        let vs: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let es: Vec<(&str, &str, &str)> = self
            .edges
            .iter()
            .map(|(e, a, b)| (e.as_str(), a.as_str(), b.as_str()))
            .collect();
        CellComplex::graph(&vs, &es).unwrap()
    }
}

/// Graph with at most 5 vertices and 7 edges, stalks drawn from chains of
/// length ≤ 5, powersets of ≤ 3 atoms and the diamond, random
/// join-preserving restrictions.
pub fn random_lattice_sheaf(rng: &mut ChaCha8Rng) -> LatticeSheaf {
    let complex = Arc::new(Graph::random(rng, 5, 7).complex());
    let stalks: Vec<Arc<FiniteLattice>> = (0..complex.len()).map(|_| Arc::new(random_stalk(rng))).collect();
    let lowers = complex
        .covering()
        .iter()
        .map(|&(s, t)| ((s, t), random_lower(rng, &stalks[s], &stalks[t])))
        .collect();
    LatticeSheaf::new(complex, stalks, lowers).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, p: u32, rows: usize, cols: usize) -> FpMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    FpMatrix::new(p, rows, cols, data).unwrap()
}

/// A random invertible matrix and its inverse, read off the echelon form
/// of `[A | I]`.
pub fn random_invertible(rng: &mut ChaCha8Rng, p: u32, n: usize) -> (FpMatrix, FpMatrix) {
    loop {
        let a = random_matrix(rng, p, n, n);
        if a.rank() != n {
            continue;
        }
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut r = a.row(i).to_vec();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        let rref = Subspace::span(p, 2 * n, &rows).unwrap();
        let inv: Vec<u32> = rref.basis().iter().flat_map(|r| r[n..].to_vec()).collect();
        let inv = FpMatrix::new(p, n, n, inv).unwrap();
        return (a, inv);
    }
}

/// Graph sheaf with arbitrary random matrices; functoriality is vacuous.
pub fn random_graph_vec_sheaf(rng: &mut ChaCha8Rng, p: u32) -> VecSheaf {
    let complex = Arc::new(Graph::random(rng, 4, 5).complex());
    let dims: Vec<usize> = (0..complex.len()).map(|_| rng.gen_range(0..=3)).collect();
    let maps = complex
        .covering()
        .iter()
        .map(|&(s, t)| ((s, t), random_matrix(rng, p, dims[t], dims[s])))
        .collect();
    VecSheaf::new(p, complex, dims, maps).unwrap()
}

/// Two-dimensional sheaf built as a family of quotients of one space `F^n`.
///
/// Each cell gets a set `S_σ` of basis indices, growing along the face
/// order; its stalk is `F^n / span(S_σ)` in the coordinates outside `S_σ`,
/// and restrictions are coordinate projections conjugated by random
/// per-cell changes of basis. Composites are again projections, so the
/// result is functorial.
pub fn random_quotient_sheaf(rng: &mut ChaCha8Rng, p: u32) -> VecSheaf {
    let triangles = [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    let count = rng.gen_range(1..=2);
    let mut chosen: Vec<Vec<usize>> = triangles
        .choose_multiple(rng, count)
        .cloned()
        .collect();
    if rng.gen_bool(0.5) {
        chosen.push(vec![rng.gen_range(0..2), 4]);
    }
    let complex = Arc::new(CellComplex::simplicial(&chosen).unwrap());
    let n = rng.gen_range(1..=3);

    // Kill sets grow with dimension: a cell inherits the union over its faces.
    let mut kill: Vec<Vec<bool>> = vec![vec![false; n]; complex.len()];
    for k in 0..=complex.dim().unwrap() {
        for &c in complex.skeleton(k) {
            let mut set = vec![false; n];
            for &f in complex.boundary(c) {
                for i in 0..n {
                    set[i] |= kill[f][i];
                }
            }
            for s in set.iter_mut() {
                *s |= rng.gen_bool(0.2);
            }
            kill[c] = set;
        }
    }
    let keep: Vec<Vec<usize>> = kill
        .iter()
        .map(|k| (0..n).filter(|&i| !k[i]).collect())
        .collect();
    let dims: Vec<usize> = keep.iter().map(Vec::len).collect();
    let bases: Vec<(FpMatrix, FpMatrix)> = dims.iter().map(|&d| random_invertible(rng, p, d)).collect();

    let mut maps = HashMap::new();
    for &(s, t) in complex.covering() {
        let mut data = vec![0u32; dims[t] * dims[s]];
        for (row, &i) in keep[t].iter().enumerate() {
            let col = keep[s].iter().position(|&j| j == i).unwrap();
            data[row * dims[s] + col] = 1;
        }
        let proj = FpMatrix::new(p, dims[t], dims[s], data).unwrap();
        let m = bases[t].0.mul(&proj).unwrap().mul(&bases[s].1).unwrap();
        maps.insert((s, t), m);
    }
    VecSheaf::new(p, complex, dims, maps).unwrap()
}
