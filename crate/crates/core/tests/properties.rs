use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tsheaf_core::complex::CellComplex;
use tsheaf_core::galois::{compose, sum, Connection};
use tsheaf_core::grassmann::{FpMatrix, Subspace};
use tsheaf_core::lattice::{Elem, FiniteLattice};
use tsheaf_core::sheaf::LatticeSheaf;
use tsheaf_core::{hodge, tarski, Mode};

fn small_lattice(rng: &mut ChaCha8Rng) -> FiniteLattice {
    match rng.gen_range(0..5) {
        0 => FiniteLattice::chain(rng.gen_range(1..=5)).unwrap(),
        1 => FiniteLattice::powerset(rng.gen_range(0..=3)).unwrap(),
        2 => FiniteLattice::diamond(),
        3 => FiniteLattice::pentagon(),
        _ => {
            let a = FiniteLattice::chain(2).unwrap();
            let b = FiniteLattice::chain(3).unwrap();
            FiniteLattice::product(&[&a, &b]).unwrap()
        }
    }
}

/// Random images on join-irreducibles, extended by joins. Falls back to the
/// zero map when the extension fails to preserve joins.
fn random_lower(rng: &mut ChaCha8Rng, src: &FiniteLattice, dst: &FiniteLattice) -> Vec<Elem> {
    let irr = src.structure_report().join_irreducibles;
    for _ in 0..8 {
        let mut image: HashMap<Elem, Elem> = HashMap::new();
        for &j in src.linear_extension().iter().filter(|j| irr.contains(j)) {
            let floor = dst.join_of(
                irr.iter()
                    .filter(|&&i| i != j && src.leq(i, j))
                    .map(|i| image[i]),
            );
            let above: Vec<Elem> = dst.up_set(floor).collect();
            image.insert(j, above[rng.gen_range(0..above.len())]);
        }
        let lower: Vec<Elem> = src
            .elements()
            .map(|x| dst.join_of(irr.iter().filter(|&&j| src.leq(j, x)).map(|j| image[j])))
            .collect();
        if tsheaf_core::galois::join_preservation_violation(src, dst, &lower).is_none() {
            return lower;
        }
    }
    vec![dst.bottom(); src.len()]
}

fn random_graph_sheaf(seed: u64) -> LatticeSheaf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for e in 0..rng.gen_range(0..=5) {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        edges.push((format!("e{e}"), names[a].clone(), names[b].clone()));
    }
    let vs: Vec<&str> = names.iter().map(String::as_str).collect();
    let es: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(e, a, b)| (e.as_str(), a.as_str(), b.as_str()))
        .collect();
    let complex = Arc::new(CellComplex::graph(&vs, &es).unwrap());
    let stalks: Vec<Arc<FiniteLattice>> = (0..complex.len())
        .map(|_| Arc::new(small_lattice(&mut rng)))
        .collect();
    let lowers = complex
        .covering()
        .iter()
        .map(|&(s, t)| ((s, t), random_lower(&mut rng, &stalks[s], &stalks[t])))
        .collect();
    LatticeSheaf::new(complex, stalks, lowers).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = small_lattice(&mut rng);
        for _ in 0..64 {
            let (a, b, c) = (
                rng.gen_range(0..l.len()),
                rng.gen_range(0..l.len()),
                rng.gen_range(0..l.len()),
            );
            prop_assert_eq!(l.meet(a, l.join(a, b)), a);
            prop_assert_eq!(l.join(a, l.meet(a, b)), a);
            prop_assert_eq!(l.meet(l.meet(a, b), c), l.meet(a, l.meet(b, c)));
            prop_assert_eq!(l.join(l.join(a, b), c), l.join(a, l.join(b, c)));
            prop_assert_eq!(l.leq(a, b), l.meet(a, b) == a);
        }
    }

    #[test]
    fn synthesized_adjoints_obey_the_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Arc::new(small_lattice(&mut rng));
        let b = Arc::new(small_lattice(&mut rng));
        let c = Arc::new(small_lattice(&mut rng));
        let f = Connection::from_lower(a.clone(), b.clone(), random_lower(&mut rng, &a, &b)).unwrap();
        let f2 = Connection::from_lower(a.clone(), b.clone(), random_lower(&mut rng, &a, &b)).unwrap();
        let g = Connection::from_lower(b.clone(), c.clone(), random_lower(&mut rng, &b, &c)).unwrap();
        for conn in [&f, &f2, &g] {
            prop_assert_eq!(conn.adjunction_violation(), None);
            for x in conn.dst().elements() {
                for y in conn.dst().elements() {
                    let m = conn.dst().meet(x, y);
                    prop_assert_eq!(conn.upper(m), conn.src().meet(conn.upper(x), conn.upper(y)));
                }
            }
        }
        prop_assert!(compose(&f, &g).unwrap().verify());
        prop_assert!(sum(&f, &f2).unwrap().verify());
    }

    #[test]
    fn harmonic_flow_lands_on_the_greatest_section_below(seed in any::<u64>()) {
        let sheaf = random_graph_sheaf(seed);
        let sections = sheaf.sections_bruteforce().unwrap();
        let th = tarski::tarski_cohomology(&sheaf, 0, Mode::Enumerate).unwrap();
        prop_assert_eq!(th.members.as_ref().unwrap(), &sections);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let all: Vec<_> = sheaf.all_cochains(0).unwrap().collect();
        for _ in 0..8 {
            let x = &all[rng.gen_range(0..all.len())];
            let flow = tarski::harmonic_flow(&sheaf, 0, x, tarski::FlowOptions::with_trajectory()).unwrap();
            prop_assert!(sheaf.is_section(&flow.final_cochain).unwrap());
            prop_assert!(flow.steps <= sheaf.cochain_height(0) + 1);
            let path = flow.trajectory.unwrap();
            for w in path.windows(2) {
                prop_assert!(sheaf.cochain_leq(&w[1], &w[0]).unwrap());
            }
            let best = sections.iter().filter(|s| sheaf.cochain_leq(s, x).unwrap());
            for s in best {
                prop_assert!(sheaf.cochain_leq(s, &flow.final_cochain).unwrap());
            }
        }
    }

    #[test]
    fn tarski_inside_upper_hodge(seed in any::<u64>()) {
        let sheaf = random_graph_sheaf(seed);
        for k in 0..=1 {
            let plus = hodge::hodge_cohomology(&sheaf, k, hodge::HodgeSide::Upper, Mode::Summary).unwrap();
            for x in sheaf.all_cochains(k).unwrap() {
                if tarski::is_tarski_fixed(&sheaf, k, &x).unwrap() {
                    prop_assert!(plus.contains(&sheaf, &x).unwrap());
                }
            }
        }
    }

    #[test]
    fn subspace_identities(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let random_space = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(0..=n);
            let vs: Vec<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
            Subspace::span(p, n, &vs).unwrap()
        };
        let u = random_space(&mut rng);
        let w = random_space(&mut rng);
        let s = u.sum(&w).unwrap();
        let i = u.intersection(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(i.is_subspace_of(&u) && i.is_subspace_of(&w));
        prop_assert!(u.is_subspace_of(&s) && w.is_subspace_of(&s));

        let m = rng.gen_range(1..=4);
        let data = (0..m * n).map(|_| rng.gen_range(0..p)).collect();
        let a = FpMatrix::new(p, m, n, data).unwrap();
        prop_assert_eq!(a.rank() + a.kernel().dim(), n);
        let target = {
            let k = rng.gen_range(0..=m);
            let vs: Vec<Vec<u32>> = (0..k).map(|_| (0..m).map(|_| rng.gen_range(0..p)).collect()).collect();
            Subspace::span(p, m, &vs).unwrap()
        };
        let img = u.image(&a).unwrap();
        let pre = target.preimage(&a).unwrap();
        prop_assert_eq!(img.is_subspace_of(&target), u.is_subspace_of(&pre));
        for v in pre.basis() {
            prop_assert!(target.contains(&a.apply(v).unwrap()));
        }
    }
}
