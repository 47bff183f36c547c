use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use super::*;
use crate::polytope::build_24cell;
use crate::triangulation::{edge_classes, folded_tetrahedron, isomorphic, large_boundary_figure, mt_invariants};

fn cell() -> Arc<TwentyFourCell> {
    static CELL: OnceLock<Arc<TwentyFourCell>> = OnceLock::new();
    CELL.get_or_init(|| Arc::new(build_24cell().unwrap())).clone()
}

fn mirrored() -> MirroredComplex {
    build_mirrored(cell()).unwrap()
}

fn r() -> QuotientComplex {
    build_r(&mirrored(), &FacetPairingRule::blue_pairing()).unwrap()
}

fn x() -> QuotientComplex {
    build_x(&r()).unwrap()
}

fn labels(ls: &[&str]) -> Vec<Label> {
    let mut v: Vec<Label> = ls.iter().map(|s| label(s)).collect();
    v.sort();
    v
}

/// Connected components of the cell graph whose edges are single gluing
/// moves, found by depth-first search.
fn orbit_count_by_search(q: &QuotientComplex, k: usize) -> usize {
    let lat = q.cell().lattice();
    let n = lat.faces(k).len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); q.copies() * n];
    for g in q.gluings() {
        for f in 0..n {
            if !lat.faces(k)[f]
                .vertices
                .iter()
                .all(|v| lat.facets()[g.from.1].vertices.contains(v))
            {
                continue;
            }
            let image = lat.image_of_face(&g.map, k, f).unwrap();
            let (a, b) = (g.from.0 * n + f, g.to.0 * n + image);
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

#[test]
fn mirrored_counts() {
    let m = mirrored();
    assert_eq!(m.strata().len(), 16);
    assert_eq!(m.two_strata().len(), 32);
    assert_eq!(m.quotient().orbit_count(0), 24);
    assert_eq!(m.strata().iter().filter(|s| s.color == FacetColor::Red).count(), 8);
    for s in m.strata() {
        assert_eq!(s.two_strata.len(), 4);
        assert_eq!(s.cusps.len(), 6);
        assert!(s.cusps.iter().all(|c| c.refines_into(&s.label)));
        assert!(s.two_strata.iter().all(|t| t.refines_into(&s.label)));
    }
    assert!(m.two_strata_separate_red_from_blue());
}

#[test]
fn mirrored_cell_counts_match_search() {
    let q = mirrored().quotient().clone();
    for k in 0..4 {
        assert_eq!(q.orbit_count(k), orbit_count_by_search(&q, k), "dimension {k}");
    }
    // Green facets and everything in them are shared by the two copies.
    let green_faces = |k: usize| {
        let c = cell();
        let lat = c.lattice();
        (0..lat.faces(k).len())
            .filter(|&f| {
                cell().facets_of_color(FacetColor::Green).iter().any(|&g| {
                    lat.faces(k)[f]
                        .vertices
                        .iter()
                        .all(|v| lat.facets()[g].vertices.contains(v))
                })
            })
            .count()
    };
    for (k, total) in [(0, 24), (1, 96), (2, 96), (3, 24)] {
        assert_eq!(q.orbit_count(k), 2 * total - green_faces(k));
    }
}

#[test]
fn small_cusp_square() {
    let sq = cusp_square(&cell(), &label("++00")).unwrap();
    let sides: Vec<(Label, FacetColor)> = sq.sides.iter().map(|s| (s.facet, s.color)).collect();
    assert_eq!(
        sides,
        vec![
            (label("++++"), FacetColor::Red),
            (label("+++-"), FacetColor::Blue),
            (label("++--"), FacetColor::Red),
            (label("++-+"), FacetColor::Blue),
        ]
    );
    assert_eq!(sq.corners[0], label("+++0"));
}

#[test]
fn blue_sides_of_a_g_paired_cusp() {
    let sq = cusp_square(&cell(), &label("+-00")).unwrap();
    assert_eq!(
        sq.sides_of_color(FacetColor::Blue),
        labels(&["+-++", "+---"]).into_iter().rev().collect::<Vec<_>>()
    );
}

#[test]
fn every_square_alternates() {
    for v in 0..24 {
        let sq = cusp_square(&cell(), &cell().vertex_label(v)).unwrap();
        assert_eq!(sq.sides_of_color(FacetColor::Red).len(), 2);
        for i in 0..4 {
            assert_ne!(sq.sides[i].color, sq.sides[(i + 1) % 4].color);
            assert!(sq.cusp.refines_into(&sq.corners[i]));
        }
    }
}

#[test]
fn malformed_cusp_labels() {
    assert!(matches!(
        cusp_square(&cell(), &label("+++0")),
        Err(ComplexError::MalformedLabel(..))
    ));
    assert!(matches!(
        cusp_square(&cell(), &label("+000")),
        Err(ComplexError::MalformedLabel(..))
    ));
}

#[test]
fn pairing_kills_all_two_strata() {
    let q = r();
    let orbits = q.two_stratum_orbits();
    assert_eq!(orbits.len(), 16);
    assert!(orbits.iter().all(|o| o.len() == 2));
    for k in 0..4 {
        assert_eq!(q.orbit_count(k), orbit_count_by_search(&q, k), "dimension {k}");
    }
}

#[test]
fn cusp_orbits_of_r() {
    let orbits = r().cusp_orbits();
    let mut sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 1, 1, 1, 2, 2, 4, 4, 4, 4]);
    let fixed: Vec<Label> = orbits.iter().filter(|o| o.len() == 1).map(|o| o[0]).collect();
    assert_eq!(fixed, labels(&["++00", "--00", "00++", "00--"]));
    assert!(orbits.contains(&labels(&["+-00", "-+00"])));
    assert_eq!(
        SignedPerm::swap_first_two().apply_to_label(&label("+-00")),
        label("-+00")
    );
}

#[test]
fn cusp_shapes_of_r() {
    let shapes = cusp_shapes(&r()).unwrap();
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for s in &shapes {
        assert_eq!(s.kind, CuspKind::CylinderTimesCircle);
        assert_eq!((s.width, s.circle), (1, 2));
        *count.entry(s.length).or_default() += 1;
    }
    assert_eq!(count, BTreeMap::from([(1, 4), (2, 2), (4, 4)]));
}

#[test]
fn boundary_of_r() {
    let comps = boundary_components(&r()).unwrap();
    assert_eq!(comps.len(), 5);
    let singles: Vec<Label> = comps
        .iter()
        .filter(|c| c.blocks.len() == 1)
        .map(|c| c.blocks[0].label)
        .collect();
    assert_eq!(singles, labels(&["++++", "----", "++--", "--++"]));
    let large = comps.iter().find(|c| c.blocks.len() == 4).unwrap();
    assert_eq!(large.labels(), labels(&["+-+-", "-+-+", "+--+", "-++-"]));
    assert_eq!(comps.iter().map(|c| c.blocks.len()).sum::<usize>(), 8);
    assert_eq!(comps.iter().map(|c| 2 * c.blocks.len()).sum::<usize>(), 16);

    let plus = comps.iter().find(|c| c.labels() == [label("++++")]).unwrap();
    let pairs: Vec<(Label, Label, &str)> = plus
        .gluings
        .iter()
        .map(|g| (g.from_triangle, g.to_triangle, g.map_name.as_str()))
        .collect();
    assert!(pairs.contains(&(label("+++0"), label("++0+"), "F")));
    assert!(pairs.contains(&(label("+0++"), label("0+++"), "G")));
    assert_eq!(pairs.len(), 4);

    assert_eq!(
        SignedPerm::swap_last_two().apply_to_label(&label("+-+-")),
        label("+--+")
    );
    assert!(large
        .gluings
        .iter()
        .any(|g| g.from_block == label("+-+-") && g.to_block == label("+--+") && g.map_name == "F"));
}

#[test]
fn block_cusps_follow_the_incidence_rule() {
    for comp in boundary_components(&r()).unwrap() {
        for b in &comp.blocks {
            let by_rule: Vec<Label> = (0..24)
                .map(|v| cell().vertex_label(v))
                .filter(|c| c.refines_into(&b.label))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            assert_eq!(b.cusps, by_rule);
        }
    }
}

/// Classes of (block, cusp) pairs under the triangle gluings.
fn component_cusp_classes(c: &BoundaryComponent) -> Vec<usize> {
    let nodes: Vec<(Label, Label)> = c
        .blocks
        .iter()
        .flat_map(|b| b.cusps.iter().map(move |&v| (b.label, v)))
        .collect();
    let mut uf = UnionFind::new(nodes.len());
    for g in &c.gluings {
        for (i, &(b, v)) in nodes.iter().enumerate() {
            if b == g.from_block && v.refines_into(&g.from_triangle) {
                let image = (g.to_block, g.map.apply_to_label(&v));
                let j = nodes.iter().position(|n| *n == image).unwrap();
                uf.union(i, j);
            }
        }
    }
    let mut sizes: Vec<usize> = uf.classes().iter().map(Vec::len).collect();
    sizes.sort();
    sizes
}

#[test]
fn extracted_triangulations() {
    let comps = boundary_components(&r()).unwrap();
    for c in &comps {
        let t = extract_triangulation(c).unwrap();
        assert_eq!(t.size(), c.blocks.len());
        let mut valences: Vec<usize> = edge_classes(&t).unwrap().iter().map(|e| e.valence).collect();
        valences.sort();
        assert_eq!(valences, component_cusp_classes(c));
        let inv = mt_invariants(&t).unwrap();
        assert_eq!(inv.octahedra, 2 * c.blocks.len());
        let expected = if c.blocks.len() == 1 {
            folded_tetrahedron()
        } else {
            large_boundary_figure()
        };
        let iso = isomorphic(&t, &expected).expect("matches the reference triangulation");
        assert!(iso.verify(&t, &expected));
    }
    let large = extract_triangulation(comps.iter().find(|c| c.blocks.len() == 4).unwrap()).unwrap();
    assert_eq!(mt_invariants(&large).unwrap().cusp_count, 8);
    for p in large.pairings() {
        let numbers = [p.from.1 + 1, p.to.1 + 1];
        let name = comps[4]
            .gluings
            .iter()
            .find(|g| {
                g.from_block == comps[4].blocks[p.from.0].label && g.from_triangle.zero_positions()[0] == p.from.1
            })
            .unwrap()
            .map_name
            .clone();
        match name.as_str() {
            "F" => assert!(numbers.iter().all(|n| [1, 2].contains(n))),
            "G" => assert!(numbers.iter().all(|n| [3, 4].contains(n))),
            other => panic!("unexpected map {other}"),
        }
    }
}

#[test]
fn x_has_one_boundary_component() {
    let x = x();
    assert_eq!(x.copies(), 2);
    assert_eq!(
        SignedPerm::anti_swap_first_two().apply_to_label(&label("++++")),
        label("--++")
    );
    let comps = boundary_components(&x).unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].blocks.len(), 4);
    assert_eq!(comps[0].volume(), Volume::Octahedra(8));
    assert_eq!(x.volume(), Volume::TwentyFourCells(2));
    for k in 0..4 {
        assert_eq!(x.orbit_count(k), orbit_count_by_search(&x, k), "dimension {k}");
    }
}

#[test]
fn euler_characteristics() {
    let x = x();
    assert_eq!(x.euler_characteristic(), 2);
    assert_eq!(x.boundary_euler_characteristic(), 0);
    let d = x.double().unwrap();
    assert_eq!(d.copies(), 4);
    assert_eq!(d.euler_characteristic(), 4);
    assert_eq!(
        d.euler_characteristic(),
        2 * x.euler_characteristic() - x.boundary_euler_characteristic()
    );
    assert!(boundary_components(&d).unwrap().is_empty());
    // Gluing the small components changes nothing, each having χ = 0.
    assert_eq!(r().euler_characteristic(), 2);
    assert_eq!(r().boundary_euler_characteristic(), 0);
}

#[test]
fn incomplete_rule_is_rejected() {
    let mut rule = FacetPairingRule::blue_pairing();
    rule.pairs.retain(|p| p.name != "G");
    assert!(matches!(
        build_r(&mirrored(), &rule),
        Err(ComplexError::IncompletePairing(_))
    ));
}

#[test]
fn fixed_stratum_is_rejected() {
    let mut rule = FacetPairingRule::blue_pairing();
    rule.pairs[0].target = rule.pairs[0].source;
    rule.pairs[0].map = SignedPerm::IDENTITY;
    assert!(matches!(
        build_r(&mirrored(), &rule),
        Err(ComplexError::NonInvolutive(_))
    ));
}

#[test]
fn wrong_map_is_rejected() {
    let mut rule = FacetPairingRule::blue_pairing();
    rule.pairs[0].map = SignedPerm::swap_first_two();
    assert!(build_r(&mirrored(), &rule).is_err());
}

#[test]
fn cross_copy_pairing_preserves_orientation() {
    let mut rule = FacetPairingRule::blue_pairing();
    rule.copy_rule = CopyRule::CrossCopy;
    assert!(matches!(
        build_r(&mirrored(), &rule),
        Err(ComplexError::OrientationPreserving { .. })
    ));
}

#[test]
fn orbit_representatives_are_least() {
    let q = x();
    for k in 0..4 {
        let n = cell().lattice().faces(k).len();
        for c in 0..2 {
            for f in 0..n {
                let rep = q.representative(k, c, f);
                assert!(rep <= (c, f));
                assert_eq!(q.representative(k, rep.0, rep.1), rep);
            }
        }
    }
}

#[test]
fn fingerprint_is_stable() {
    assert_eq!(x().fingerprint(), x().fingerprint());
    assert_ne!(x().fingerprint(), r().fingerprint());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn orbits_do_not_depend_on_gluing_order(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let q = x();
        let mut gluings = q.gluings().to_vec();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        gluings.shuffle(&mut rng);
        for g in gluings.iter_mut() {
            if rand::Rng::gen_bool(&mut rng, 0.5) {
                std::mem::swap(&mut g.from, &mut g.to);
                g.map = g.map.inverse();
            }
        }
        let shuffled = QuotientComplex::new(cell(), q.orientations().to_vec(), gluings).unwrap();
        prop_assert_eq!(shuffled.cell_counts(), q.cell_counts());
        for k in 0..4 {
            for c in 0..2 {
                for f in 0..cell().lattice().faces(k).len() {
                    prop_assert_eq!(shuffled.representative(k, c, f), q.representative(k, c, f));
                }
            }
        }
    }

    #[test]
    fn pairing_maps_are_involutions_without_fixed_strata(i in 0usize..4) {
        let rule = FacetPairingRule::blue_pairing();
        let p = &rule.pairs[i];
        prop_assert_ne!(p.source, p.target);
        prop_assert_eq!(p.map.apply_to_label(&p.target), p.source);
        prop_assert_eq!(p.map.compose(&p.map), SignedPerm::IDENTITY);
    }
}

#[test]
fn one_sided_pairing_is_not_a_product() {
    let m = mirrored();
    let mut gluings = m.quotient().gluings().to_vec();
    let rule = FacetPairingRule::blue_pairing();
    for p in &rule.pairs {
        gluings.push(FacetGluing {
            name: p.name.clone(),
            kind: GluingKind::Pairing,
            from: (0, cell().facet_by_label(&p.source).unwrap()),
            to: (0, cell().facet_by_label(&p.target).unwrap()),
            map: p.map,
        });
    }
    let q = QuotientComplex::new(cell(), vec![1, -1], gluings).unwrap();
    assert!(matches!(cusp_shapes(&q), Err(ComplexError::CuspGluing(_))));
}
