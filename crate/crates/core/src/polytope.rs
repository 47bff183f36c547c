//! Face lattices of the 24-cell and the octahedron.
//!
//! Both polytopes are given by their vertices and their facet hyperplanes.
//! The lattice is the closure of the facet vertex sets under intersection,
//! graded by exact affine rank. Faces are identified by their sorted
//! vertex-index sets, so any map that acts on vertices acts on faces.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{affine_rank, ExactError, Label, SignedPerm, Vec4};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("{what}: expected {expected}, found {actual}")]
    CountMismatch {
        what: String,
        expected: String,
        actual: String,
    },
    #[error("vertex {vertex} lies beyond the facet hyperplane with normal {normal}")]
    NotSupporting { vertex: Vec4, normal: Vec4 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn mismatch(what: &str, expected: impl ToString, actual: impl ToString) -> PolytopeError {
    PolytopeError::CountMismatch {
        what: what.to_string(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Sorted indices into the lattice's vertex list.
    pub vertices: Vec<usize>,
    /// Sorted indices of the facets containing this face.
    pub facets: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    dim: usize,
    vertices: Vec<Vec4>,
    faces: Vec<Vec<Face>>,
    facet_normals: Vec<Vec4>,
    index: HashMap<Vec<usize>, (usize, usize)>,
    vertex_index: HashMap<Vec4, usize>,
}

impl FaceLattice {
    /// Builds the lattice of the polytope with the given vertices whose
    /// facets lie on the hyperplanes `normal · x = level`.
    pub fn from_facets(vertices: Vec<Vec4>, normals: &[Vec4], level: i64) -> Result<Self, PolytopeError> {
        let dim = affine_rank(&vertices)?;
        let mut facet_sets: Vec<(Vec<usize>, Vec4)> = Vec::with_capacity(normals.len());
        for n in normals {
            let mut set = Vec::new();
            for (i, v) in vertices.iter().enumerate() {
                match n.dot(v) {
                    d if d == level => set.push(i),
                    d if d > level => return Err(PolytopeError::NotSupporting { vertex: *v, normal: *n }),
                    _ => {}
                }
            }
            facet_sets.push((set, *n));
        }
        facet_sets.sort();

        let mut closed: BTreeSet<Vec<usize>> = facet_sets.iter().map(|(s, _)| s.clone()).collect();
        let mut frontier: Vec<Vec<usize>> = closed.iter().cloned().collect();
        while let Some(set) = frontier.pop() {
            for (facet, _) in &facet_sets {
                let meet: Vec<usize> = set.iter().copied().filter(|v| facet.binary_search(v).is_ok()).collect();
                if !meet.is_empty() && closed.insert(meet.clone()) {
                    frontier.push(meet);
                }
            }
        }

        let mut faces: Vec<Vec<Face>> = vec![Vec::new(); dim];
        for set in closed {
            let points: Vec<Vec4> = set.iter().map(|&i| vertices[i]).collect();
            let k = affine_rank(&points)?;
            if k >= dim {
                return Err(mismatch("face dimension", format!("< {dim}"), k));
            }
            let facets = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, (f, _))| set.iter().all(|v| f.binary_search(v).is_ok()))
                .map(|(i, _)| i)
                .collect();
            faces[k].push(Face { vertices: set, facets });
        }
        // BTreeSet iteration already sorts within each dimension.
        let facet_count = faces.last().map_or(0, Vec::len);
        if facet_count != facet_sets.len() {
            return Err(mismatch(
                "facets of full codimension one",
                facet_sets.len(),
                facet_count,
            ));
        }

        let index = faces
            .iter()
            .enumerate()
            .flat_map(|(k, fs)| fs.iter().enumerate().map(move |(i, f)| (f.vertices.clone(), (k, i))))
            .collect();
        let vertex_index = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        Ok(FaceLattice {
            dim,
            vertices,
            faces,
            facet_normals: facet_sets.into_iter().map(|(_, n)| n).collect(),
            index,
            vertex_index,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.vertices
    }

    pub fn faces(&self, k: usize) -> &[Face] {
        &self.faces[k]
    }

    pub fn facets(&self) -> &[Face] {
        &self.faces[self.dim - 1]
    }

    pub fn facet_normal(&self, facet: usize) -> Vec4 {
        self.facet_normals[facet]
    }

    /// `(f_0, …, f_{d-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, fs)| {
                if k % 2 == 0 {
                    fs.len() as i64
                } else {
                    -(fs.len() as i64)
                }
            })
            .sum()
    }

    pub fn lookup(&self, vertex_set: &[usize]) -> Option<(usize, usize)> {
        self.index.get(vertex_set).copied()
    }

    pub fn vertex_index(&self, v: &Vec4) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    /// Image of a face under a coordinate isometry, if that image is a face.
    pub fn image_of_face(&self, m: &SignedPerm, k: usize, face: usize) -> Option<usize> {
        let mut image: Vec<usize> = self.faces[k][face]
            .vertices
            .iter()
            .map(|&v| self.vertex_index(&m.apply(&self.vertices[v])))
            .collect::<Option<_>>()?;
        image.sort_unstable();
        match self.lookup(&image) {
            Some((dim, idx)) if dim == k => Some(idx),
            _ => None,
        }
    }

    /// Faces of dimension `k` contained in the face `(j, face)`.
    pub fn subfaces(&self, j: usize, face: usize, k: usize) -> Vec<usize> {
        let outer = &self.faces[j][face].vertices;
        self.faces[k]
            .iter()
            .enumerate()
            .filter(|(_, f)| f.vertices.iter().all(|v| outer.binary_search(v).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FacetColor {
    Red,
    Green,
    Blue,
}

impl std::fmt::Display for FacetColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FacetColor::Red => "red",
            FacetColor::Green => "green",
            FacetColor::Blue => "blue",
        })
    }
}

fn parity_color(minus_signs: usize) -> FacetColor {
    if minus_signs.is_multiple_of(2) {
        FacetColor::Red
    } else {
        FacetColor::Blue
    }
}

/// Two red/blue facet labels meeting along a 2-face differ in exactly one
/// sign; the 2-face is named by replacing that sign with `0`.
pub fn shared_2face(a: &Label, b: &Label) -> Option<Label> {
    if a.zero_count() != 0 || b.zero_count() != 0 {
        return None;
    }
    let differing: Vec<usize> = (0..4).filter(|&i| a.entries()[i] != b.entries()[i]).collect();
    match differing.as_slice() {
        [p] => Some(a.with_entry(*p, 0)),
        _ => None,
    }
}

/// The 24-cell with its red/green/blue facet coloring.
#[derive(Debug, Clone)]
pub struct TwentyFourCell {
    lattice: FaceLattice,
    colors: Vec<FacetColor>,
    facet_labels: Vec<Label>,
}

pub fn build_24cell() -> Result<TwentyFourCell, PolytopeError> {
    let mut vertices = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for si in [-1, 1] {
                for sj in [-1, 1] {
                    let mut c = [0; 4];
                    c[i] = si;
                    c[j] = sj;
                    vertices.push(Vec4(c));
                }
            }
        }
    }
    vertices.sort();

    // Dual vertices scaled by two: (±2,0,0,0) and (±1,±1,±1,±1); every facet is `n · x = 2`.
    let mut normals = Vec::new();
    for i in 0..4 {
        for s in [-2, 2] {
            let mut c = [0; 4];
            c[i] = s;
            normals.push(Vec4(c));
        }
    }
    for bits in 0..16 {
        normals.push(Vec4(std::array::from_fn(
            |i| if bits >> (3 - i) & 1 == 1 { -1 } else { 1 },
        )));
    }

    let lattice = FaceLattice::from_facets(vertices, &normals, 2)?;
    let f = lattice.f_vector();
    if f != [24, 96, 96, 24] {
        return Err(mismatch("24-cell face counts", "[24, 96, 96, 24]", format!("{f:?}")));
    }
    let facet_labels: Vec<Label> = lattice.facet_normals.iter().map(Vec4::signs).collect();
    let colors: Vec<FacetColor> = facet_labels
        .iter()
        .map(|l| {
            if l.zero_count() == 3 {
                FacetColor::Green
            } else {
                parity_color(l.minus_count())
            }
        })
        .collect();
    for c in [FacetColor::Red, FacetColor::Green, FacetColor::Blue] {
        let n = colors.iter().filter(|&&x| x == c).count();
        if n != 8 {
            return Err(mismatch(&format!("{c} facets"), 8, n));
        }
    }
    Ok(TwentyFourCell {
        lattice,
        colors,
        facet_labels,
    })
}

impl TwentyFourCell {
    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn facet_color(&self, facet: usize) -> FacetColor {
        self.colors[facet]
    }

    /// Sign pattern of the facet's outward normal. Green facets carry three zeros.
    pub fn facet_label(&self, facet: usize) -> Label {
        self.facet_labels[facet]
    }

    pub fn facet_by_label(&self, l: &Label) -> Option<usize> {
        self.facet_labels.iter().position(|x| x == l)
    }

    pub fn facets_of_color(&self, c: FacetColor) -> Vec<usize> {
        (0..self.colors.len()).filter(|&i| self.colors[i] == c).collect()
    }

    pub fn color_counts(&self) -> [usize; 3] {
        [FacetColor::Red, FacetColor::Green, FacetColor::Blue].map(|c| self.facets_of_color(c).len())
    }

    pub fn vertex_label(&self, v: usize) -> Label {
        self.lattice.vertices[v].signs()
    }

    pub fn vertex_by_label(&self, l: &Label) -> Option<usize> {
        self.lattice.vertex_index(&l.to_vec4())
    }

    /// The 2-face named by a one-zero label: the vertices whose nonzero
    /// entries agree with the label.
    pub fn triangle_by_label(&self, l: &Label) -> Option<usize> {
        if l.zero_count() != 1 {
            return None;
        }
        let set: Vec<usize> = (0..self.lattice.vertices.len())
            .filter(|&v| self.vertex_label(v).refines_into(l))
            .collect();
        match self.lattice.lookup(&set) {
            Some((2, idx)) => Some(idx),
            _ => None,
        }
    }

    /// Label of a 2-face lying between a red and a blue facet.
    pub fn triangle_label(&self, face: usize) -> Option<Label> {
        match self.lattice.faces[2][face].facets.as_slice() {
            [a, b] => shared_2face(&self.facet_labels[*a], &self.facet_labels[*b]),
            _ => None,
        }
    }

    /// Red/blue 2-faces, i.e. those between a red and a blue facet.
    pub fn red_blue_triangles(&self) -> Vec<usize> {
        (0..self.lattice.faces[2].len())
            .filter(|&t| {
                let fs = &self.lattice.faces[2][t].facets;
                let mut cs: Vec<FacetColor> = fs.iter().map(|&f| self.colors[f]).collect();
                cs.sort();
                cs == [FacetColor::Red, FacetColor::Blue]
            })
            .collect()
    }

    /// Checks the shared 2-face of two facet labels against the lattice.
    pub fn verify_shared_2face(&self, a: &Label, b: &Label) -> bool {
        let (Some(fa), Some(fb)) = (self.facet_by_label(a), self.facet_by_label(b)) else {
            return false;
        };
        let meet: Vec<usize> = self.lattice.facets()[fa]
            .vertices
            .iter()
            .copied()
            .filter(|v| self.lattice.facets()[fb].vertices.binary_search(v).is_ok())
            .collect();
        let lattice_triangle = match self.lattice.lookup(&meet) {
            Some((2, idx)) => Some(idx),
            _ => None,
        };
        match shared_2face(a, b) {
            Some(l) => lattice_triangle.is_some() && self.triangle_by_label(&l) == lattice_triangle,
            None => lattice_triangle.is_none(),
        }
    }

    /// Maps facets to facets and each color class onto a color class.
    ///
    /// A single coordinate reflection exchanges red and blue, so this is the
    /// property shared by the whole signed-permutation group.
    pub fn preserves_color_partition(&self, m: &SignedPerm) -> bool {
        let mut induced: HashMap<FacetColor, FacetColor> = HashMap::new();
        (0..self.colors.len()).all(|f| {
            let Some(g) = self.lattice.image_of_face(m, 3, f) else {
                return false;
            };
            *induced.entry(self.colors[f]).or_insert(self.colors[g]) == self.colors[g]
        }) && induced.values().collect::<BTreeSet<_>>().len() == induced.len()
    }

    /// Maps every facet to a facet of the same color.
    pub fn preserves_colors(&self, m: &SignedPerm) -> bool {
        (0..self.colors.len()).all(|f| {
            self.lattice
                .image_of_face(m, 3, f)
                .is_some_and(|g| self.colors[g] == self.colors[f])
        })
    }

    /// Color of the facet on the other side of a 2-face of `facet`.
    pub fn opposite_color(&self, facet: usize, triangle: usize) -> Option<FacetColor> {
        let fs = &self.lattice.faces[2][triangle].facets;
        if !fs.contains(&facet) {
            return None;
        }
        fs.iter().find(|&&g| g != facet).map(|&g| self.colors[g])
    }
}

/// The octahedron `conv{±e_1, ±e_2, ±e_3}` with its red/blue checkerboard.
#[derive(Debug, Clone)]
pub struct Octahedron {
    lattice: FaceLattice,
    colors: Vec<FacetColor>,
}

pub fn build_octahedron() -> Result<Octahedron, PolytopeError> {
    let mut vertices = Vec::new();
    for i in 0..3 {
        for s in [-1, 1] {
            let mut c = [0; 4];
            c[i] = s;
            vertices.push(Vec4(c));
        }
    }
    vertices.sort();
    let normals: Vec<Vec4> = (0..8)
        .map(|bits| {
            Vec4([
                if bits & 4 != 0 { -1 } else { 1 },
                if bits & 2 != 0 { -1 } else { 1 },
                if bits & 1 != 0 { -1 } else { 1 },
                0,
            ])
        })
        .collect();
    let lattice = FaceLattice::from_facets(vertices, &normals, 1)?;
    let f = lattice.f_vector();
    if f != [6, 12, 8] {
        return Err(mismatch("octahedron face counts", "[6, 12, 8]", format!("{f:?}")));
    }
    let colors = lattice
        .facet_normals
        .iter()
        .map(|n| parity_color(n.signs().minus_count()))
        .collect();
    Ok(Octahedron { lattice, colors })
}

impl Octahedron {
    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn face_color(&self, face: usize) -> FacetColor {
        self.colors[face]
    }

    pub fn faces_of_color(&self, c: FacetColor) -> Vec<usize> {
        (0..self.colors.len()).filter(|&i| self.colors[i] == c).collect()
    }

    /// Every edge borders one red and one blue triangle.
    pub fn is_checkerboard(&self) -> bool {
        self.lattice.faces(1).iter().all(|e| match e.facets.as_slice() {
            [a, b] => self.colors[*a] != self.colors[*b],
            _ => false,
        })
    }
}

/// Edges of the standard tetrahedron on vertices `0..4`, in lexicographic order.
pub const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];

pub fn tet_edge_index(a: usize, b: usize) -> usize {
    let key = if a < b { [a, b] } else { [b, a] };
    TET_EDGES
        .iter()
        .position(|e| *e == key)
        .expect("distinct tetrahedron vertices")
}

/// Truncating a tetrahedron until the truncation faces touch gives an
/// octahedron: tetrahedron vertices become red triangles, edges become
/// octahedron vertices, and faces become blue triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationCorrespondence {
    /// Red octahedron face for each tetrahedron vertex.
    pub red_face_of_vertex: [usize; 4],
    /// Octahedron vertex for each tetrahedron edge, indexed like [`TET_EDGES`].
    pub vertex_of_edge: [usize; 6],
    /// Blue octahedron face for the tetrahedron face opposite each vertex.
    pub blue_face_of_face: [usize; 4],
}

pub fn octahedron_tetrahedron_correspondence(o: &Octahedron) -> Result<TruncationCorrespondence, PolytopeError> {
    let lat = o.lattice();
    let red = o.faces_of_color(FacetColor::Red);
    let red_face_of_vertex: [usize; 4] = red
        .clone()
        .try_into()
        .map_err(|_| mismatch("red octahedron faces", 4, red.len()))?;

    let mut vertex_of_edge = [0; 6];
    for (e, [a, b]) in TET_EDGES.iter().enumerate() {
        let fa = &lat.facets()[red_face_of_vertex[*a]].vertices;
        let fb = &lat.facets()[red_face_of_vertex[*b]].vertices;
        let common: Vec<usize> = fa.iter().copied().filter(|v| fb.contains(v)).collect();
        match common.as_slice() {
            [v] => vertex_of_edge[e] = *v,
            _ => return Err(mismatch("vertices shared by two red faces", 1, common.len())),
        }
    }
    let mut seen = vertex_of_edge.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != 6 {
        return Err(mismatch(
            "distinct octahedron vertices from tetrahedron edges",
            6,
            seen.len(),
        ));
    }

    let mut blue_face_of_face = [0; 4];
    for (opposite, slot) in blue_face_of_face.iter_mut().enumerate() {
        let mut set: Vec<usize> = TET_EDGES
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.contains(&opposite))
            .map(|(i, _)| vertex_of_edge[i])
            .collect();
        set.sort_unstable();
        match lat.lookup(&set) {
            Some((2, f)) if o.face_color(f) == FacetColor::Blue => *slot = f,
            _ => {
                return Err(mismatch(
                    "blue face spanned by the edges of a tetrahedron face",
                    "a blue triangle",
                    format!("{set:?}"),
                ))
            }
        }
    }
    Ok(TruncationCorrespondence {
        red_face_of_vertex,
        vertex_of_edge,
        blue_face_of_face,
    })
}

impl TruncationCorrespondence {
    /// Exhaustive incidence check over all vertex/edge and edge/face pairs.
    pub fn preserves_incidence(&self, o: &Octahedron) -> bool {
        let facets = o.lattice().facets();
        let edge_face = TET_EDGES.iter().enumerate().all(|(e, edge)| {
            (0..4).all(|opp| {
                let on_tet_face = !edge.contains(&opp);
                let on_blue = facets[self.blue_face_of_face[opp]]
                    .vertices
                    .contains(&self.vertex_of_edge[e]);
                on_tet_face == on_blue
            })
        });
        let vertex_edge = TET_EDGES.iter().enumerate().all(|(e, edge)| {
            (0..4).all(|v| {
                let on_edge = edge.contains(&v);
                let on_red = facets[self.red_face_of_vertex[v]]
                    .vertices
                    .contains(&self.vertex_of_edge[e]);
                on_edge == on_red
            })
        });
        edge_face && vertex_edge
    }

    /// Transports a permutation of the tetrahedron's vertices to a
    /// permutation of the octahedron's vertices through the edge table.
    pub fn octahedron_vertex_map(&self, sigma: [usize; 4]) -> [usize; 6] {
        let mut map = [usize::MAX; 6];
        for (e, [a, b]) in TET_EDGES.iter().enumerate() {
            let image = tet_edge_index(sigma[*a], sigma[*b]);
            map[self.vertex_of_edge[e]] = self.vertex_of_edge[image];
        }
        map
    }

    /// Whether the vertex permutation induced by `sigma` is a combinatorial
    /// symmetry of the octahedron that preserves face colors.
    pub fn transports_to_color_preserving_symmetry(&self, o: &Octahedron, sigma: [usize; 4]) -> bool {
        let map = self.octahedron_vertex_map(sigma);
        let lat = o.lattice();
        (0..lat.facets().len()).all(|f| {
            let mut image: Vec<usize> = lat.facets()[f].vertices.iter().map(|&v| map[v]).collect();
            image.sort_unstable();
            matches!(lat.lookup(&image), Some((2, g)) if o.face_color(g) == o.face_color(f))
        })
    }
}
