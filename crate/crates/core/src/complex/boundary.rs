//! Boundary components left by a pairing of blue strata, and their
//! triangulations by one tetrahedron per block.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{triangle_vertices, ComplexError, QuotientComplex};
use crate::exact::{Label, SignedPerm};
use crate::polytope::FacetColor;
use crate::triangulation::{Pairing, Perm4, Triangulation};
use crate::union_find::UnionFind;
use crate::volume::Volume;

/// A free red 3-stratum with its 2-strata (ordered by zero position) and cusps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryBlock {
    pub label: Label,
    pub triangles: [Label; 4],
    pub cusps: Vec<Label>,
}

impl BoundaryBlock {
    fn new(label: Label) -> Self {
        let triangles = std::array::from_fn(|p| label.with_entry(p, 0));
        let mut cusps = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let mut e = [0; 4];
                e[a] = label.entries()[a];
                e[b] = label.entries()[b];
                cusps.push(Label::new(e).expect("entries are signs"));
            }
        }
        cusps.sort();
        BoundaryBlock {
            label,
            triangles,
            cusps,
        }
    }
}

/// `from_triangle` of `from_block` is glued to `to_triangle` of `to_block` by `map`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleGluing {
    pub from_block: Label,
    pub from_triangle: Label,
    pub to_block: Label,
    pub to_triangle: Label,
    pub map_name: String,
    pub map: SignedPerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub blocks: Vec<BoundaryBlock>,
    /// Both directions of every triangle gluing, sorted.
    pub gluings: Vec<TriangleGluing>,
}

impl BoundaryComponent {
    pub fn labels(&self) -> Vec<Label> {
        self.blocks.iter().map(|b| b.label).collect()
    }

    /// Each block is two ideal octahedra.
    pub fn volume(&self) -> Volume {
        Volume::Octahedra(2 * self.blocks.len())
    }

    fn block_index(&self, l: &Label) -> Option<usize> {
        self.blocks.iter().position(|b| b.label == *l)
    }
}

pub fn boundary_components(q: &QuotientComplex) -> Result<Vec<BoundaryComponent>, ComplexError> {
    let cell = q.cell();
    let lat = cell.lattice();
    let strata = q.boundary_strata();
    let blocks: Vec<BoundaryBlock> = strata
        .iter()
        .map(|&f| BoundaryBlock::new(cell.facet_label(f)))
        .collect();
    for (block, &f) in blocks.iter().zip(&strata) {
        let mut from_lattice: Vec<Label> = lat.facets()[f].vertices.iter().map(|&v| cell.vertex_label(v)).collect();
        from_lattice.sort();
        if from_lattice != block.cusps {
            return Err(ComplexError::BoundaryGluing(format!(
                "cusps of {} disagree with the lattice",
                block.label
            )));
        }
    }
    let index: BTreeMap<Label, usize> = blocks.iter().enumerate().map(|(i, b)| (b.label, i)).collect();

    let mut uf = UnionFind::new(blocks.len());
    let mut gluings = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let f = cell.facet_by_label(&block.label).expect("block is a facet");
        for t in block.triangles {
            let tf = cell.triangle_by_label(&t).ok_or(ComplexError::UnknownStratum(t))?;
            let across = lat.faces(2)[tf]
                .facets
                .iter()
                .copied()
                .find(|&g| g != f)
                .expect("a 2-face lies in two facets");
            let (map, _, target, name) = q.pairing_at(0, across).ok_or_else(|| {
                ComplexError::BoundaryGluing(format!("{} across {t} is not paired", cell.facet_label(across)))
            })?;
            debug_assert_ne!(cell.facet_color(target), FacetColor::Green);
            let to_block = map.apply_to_label(&block.label);
            let to_triangle = map.apply_to_label(&t);
            let j = *index.get(&to_block).ok_or_else(|| {
                ComplexError::BoundaryGluing(format!("{name} carries {t} of {} into the interior", block.label))
            })?;
            if (i, t) == (j, to_triangle) {
                return Err(ComplexError::BoundaryGluing(format!("{name} fixes {t}")));
            }
            uf.union(i, j);
            gluings.push(TriangleGluing {
                from_block: block.label,
                from_triangle: t,
                to_block,
                to_triangle,
                map_name: name.to_string(),
                map,
            });
        }
    }

    let mut components: Vec<BoundaryComponent> = uf
        .classes()
        .into_iter()
        .map(|class| {
            let blocks: Vec<BoundaryBlock> = class.iter().map(|&i| blocks[i].clone()).collect();
            let mut own: Vec<TriangleGluing> = gluings
                .iter()
                .filter(|g| blocks.iter().any(|b| b.label == g.from_block))
                .cloned()
                .collect();
            own.sort_by_key(|a| (a.from_block, a.from_triangle));
            BoundaryComponent { blocks, gluings: own }
        })
        .collect();
    components.sort_by_key(|a| (a.blocks.len(), a.labels()));
    Ok(components)
}

/// One tetrahedron per block: tetrahedron vertex `a` is coordinate `a`,
/// face `p` is the 2-stratum with its zero at `p`, and the edge `{a, b}` is
/// the cusp supported on `{a, b}`.
pub fn extract_triangulation(c: &BoundaryComponent) -> Result<Triangulation, ComplexError> {
    let mut pairings = Vec::new();
    for g in &c.gluings {
        let i = c.block_index(&g.from_block).expect("gluing within component");
        let j = c
            .block_index(&g.to_block)
            .ok_or_else(|| ComplexError::BoundaryGluing(format!("{} leaves the component", g.to_block)))?;
        let p = zero_position(&g.from_triangle);
        let q = zero_position(&g.to_triangle);
        if (i, p) > (j, q) {
            continue;
        }
        let perm = face_vertex_map(g, p, q)?;
        pairings.push(Pairing {
            from: (i, p),
            to: (j, q),
            perm,
        });
    }
    let n = c.blocks.len();
    Ok(Triangulation::from_pairings(n, &pairings)?.with_face_numbers(vec![[1, 2, 3, 4]; n])?)
}

fn zero_position(t: &Label) -> usize {
    t.zero_positions()[0]
}

/// Vertex `x` of face `p` is opposite the edge `{a, b}` within that face;
/// the gluing sends the cusp on `{a, b}` to a cusp on `{a', b'}`, so `x`
/// goes to the vertex of face `q` opposite `{a', b'}`.
fn face_vertex_map(g: &TriangleGluing, p: usize, q: usize) -> Result<Perm4, ComplexError> {
    let mut image = [u8::MAX; 4];
    image[p] = q as u8;
    for cusp in triangle_vertices(&g.from_triangle) {
        let support: Vec<usize> = (0..4).filter(|&i| cusp.0[i] != 0).collect();
        let x = (0..4)
            .find(|&k| k != p && !support.contains(&k))
            .expect("three vertices per face");
        let moved = g.map.apply(&cusp);
        let moved_support: Vec<usize> = (0..4).filter(|&i| moved.0[i] != 0).collect();
        let candidates: Vec<usize> = (0..4).filter(|&k| k != q && !moved_support.contains(&k)).collect();
        let target_ok = moved.signs().refines_into(&g.to_block);
        match (candidates.as_slice(), target_ok) {
            ([y], true) => image[x] = *y as u8,
            _ => {
                return Err(ComplexError::AmbiguousEdges(format!(
                    "{} sends cusp {} of {} outside face {q} of {}",
                    g.map_name,
                    cusp.signs(),
                    g.from_block,
                    g.to_block
                )))
            }
        }
    }
    Perm4::new(image).ok_or_else(|| {
        ComplexError::AmbiguousEdges(format!(
            "{} on {} is not a bijection of vertices",
            g.map_name, g.from_triangle
        ))
    })
}
