//! Three-dimensional triangulations and the block manifolds built from them.
//!
//! A triangulation is `n` tetrahedra with vertices `0..4` and a complete
//! set of face pairings. Face `f` of a tetrahedron is the face opposite
//! vertex `f`. Each pairing carries the full vertex permutation from the
//! source tetrahedron to the target, sending the source face to the target
//! face and the opposite vertex to the opposite vertex.
//!
//! Replacing every tetrahedron by a Minsky block (two ideal octahedra glued
//! along their red faces) turns the triangulation into a cusped hyperbolic
//! manifold whose cusps are the edge classes, each cusp torus being a ring
//! of `valence` annuli of size 2 × 1.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{hyperoctahedral_group, permutation_parity};
use crate::polytope::{build_octahedron, octahedron_tetrahedron_correspondence, tet_edge_index, FacetColor, TET_EDGES};
use crate::union_find::UnionFind;
use crate::volume::V_OCTAHEDRON;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("malformed triangulation: {0}")]
    Malformed(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("non-manifold edge {edge:?} of tetrahedron {tet}")]
    NonManifoldEdge { tet: usize, edge: [usize; 2] },
    #[error("triangulation is not orientable")]
    NonOrientable,
    #[error("face numbering absent")]
    MissingFaceNumbering,
    #[error("{0}")]
    SmallCuspMismatch(String),
    #[error("block symmetry correspondence failed: {0}")]
    Correspondence(String),
}

/// A permutation of the vertices `0..4` of a tetrahedron: `i ↦ self[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Perm4(pub [u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = [false; 4];
        for &i in &images {
            if i > 3 || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        Some(Perm4(images))
    }

    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut p = [0, 1, 2, 3];
        p.swap(a as usize, b as usize);
        Perm4(p)
    }

    /// All 24 permutations in lexicographic order.
    pub fn all() -> Vec<Perm4> {
        (0u8..=255)
            .filter_map(|code| Perm4::new([code >> 6, code >> 4 & 3, code >> 2 & 3, code & 3]))
            .collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        Perm4(std::array::from_fn(|i| self.0[other.0[i] as usize]))
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0; 4];
        for i in 0..4 {
            inv[self.0[i] as usize] = i as u8;
        }
        Perm4(inv)
    }

    pub fn sign(&self) -> i8 {
        permutation_parity(&self.0)
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.0 {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Where a face goes: the target tetrahedron and the vertex map into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

impl Gluing {
    pub fn target_face(&self, face: usize) -> usize {
        self.perm.apply(face)
    }
}

/// One face pairing: `(from.0, face from.1)` glued to `(to.0, face to.1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pairing {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub perm: Perm4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
    face_numbers: Option<Vec<[u8; 4]>>,
}

impl Triangulation {
    pub fn from_pairings(n: usize, pairings: &[Pairing]) -> Result<Self, TriangulationError> {
        let malformed = |m: String| Err(TriangulationError::Malformed(m));
        if n == 0 {
            return malformed("no tetrahedra".into());
        }
        let mut slots: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
        for p in pairings {
            let ((t, f), (u, g)) = (p.from, p.to);
            if t >= n || u >= n || f > 3 || g > 3 {
                return malformed(format!("pairing {t}.{f} -> {u}.{g} is out of range"));
            }
            if (t, f) == (u, g) {
                return malformed(format!("face {t}.{f} is paired with itself"));
            }
            if p.perm.apply(f) != g {
                return malformed(format!("vertex map {} does not send face {f} to face {g}", p.perm));
            }
            for ((a, b), gl) in [
                ((t, f), Gluing { tet: u, perm: p.perm }),
                (
                    (u, g),
                    Gluing {
                        tet: t,
                        perm: p.perm.inverse(),
                    },
                ),
            ] {
                if slots[a][b].replace(gl).is_some() {
                    return malformed(format!("face {a}.{b} appears in more than one pairing"));
                }
            }
        }
        let mut gluings = Vec::with_capacity(n);
        for (t, faces) in slots.into_iter().enumerate() {
            let mut full = [Gluing {
                tet: 0,
                perm: Perm4::IDENTITY,
            }; 4];
            for (f, g) in faces.into_iter().enumerate() {
                full[f] = g.ok_or_else(|| TriangulationError::Malformed(format!("face {t}.{f} is unpaired")))?;
            }
            gluings.push(full);
        }
        Ok(Triangulation {
            gluings,
            face_numbers: None,
        })
    }

    /// Attaches a numbering `1..=4` of each tetrahedron's faces.
    pub fn with_face_numbers(mut self, numbers: Vec<[u8; 4]>) -> Result<Self, TriangulationError> {
        if numbers.len() != self.size() {
            return Err(TriangulationError::Malformed(
                "face numbering has the wrong length".into(),
            ));
        }
        for row in &numbers {
            let mut sorted = *row;
            sorted.sort_unstable();
            if sorted != [1, 2, 3, 4] {
                return Err(TriangulationError::Malformed(format!(
                    "face numbering {row:?} is not a permutation of 1..=4"
                )));
            }
        }
        self.face_numbers = Some(numbers);
        Ok(self)
    }

    pub fn face_numbers(&self) -> Option<&[[u8; 4]]> {
        self.face_numbers.as_deref()
    }

    pub fn size(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    /// Each pairing once, from its lexicographically smaller side.
    pub fn pairings(&self) -> Vec<Pairing> {
        let mut out = Vec::with_capacity(2 * self.size());
        for (t, faces) in self.gluings.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let to = (g.tet, g.target_face(f));
                if (t, f) < to {
                    out.push(Pairing {
                        from: (t, f),
                        to,
                        perm: g.perm,
                    });
                }
            }
        }
        out
    }

    /// Renumbers tetrahedra (`tet ↦ tet_map[tet]`) and relabels each
    /// tetrahedron's vertices by `vertex_maps[tet]`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Result<Triangulation, TriangulationError> {
        let pairings: Vec<Pairing> = self
            .pairings()
            .into_iter()
            .map(|p| {
                let (t, f) = p.from;
                let (u, g) = p.to;
                Pairing {
                    from: (tet_map[t], vertex_maps[t].apply(f)),
                    to: (tet_map[u], vertex_maps[u].apply(g)),
                    perm: vertex_maps[u].compose(&p.perm).compose(&vertex_maps[t].inverse()),
                }
            })
            .collect();
        Triangulation::from_pairings(self.size(), &pairings)
    }

    /// Text form: `tets <n>` then `glue <tet>.<face> <tet'>.<face'> <v0v1v2>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("tets {}\n", self.size());
        for p in self.pairings() {
            let (t, f) = p.from;
            let (u, g) = p.to;
            let images: String = (0..4)
                .filter(|&v| v != f)
                .map(|v| char::from(b'0' + p.perm.0[v]))
                .collect();
            writeln!(out, "glue {}.{} {}.{} {}", t + 1, f, u + 1, g, images).expect("writing to a String");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, TriangulationError> {
        let perr = |line: usize, message: String| TriangulationError::Parse { line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
        let n: usize = header
            .strip_prefix("tets ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr(1, format!("expected `tets <n>`, found `{header}`")))?;
        let mut pairings = Vec::new();
        for (no, line) in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(' ').collect();
            let [kw, src, dst, images] = fields[..] else {
                return Err(perr(no, format!("expected 4 fields, found {}", fields.len())));
            };
            if kw != "glue" {
                return Err(perr(no, format!("unknown directive `{kw}`")));
            }
            let face_ref = |s: &str| -> Result<(usize, usize), TriangulationError> {
                let (t, f) = s
                    .split_once('.')
                    .ok_or_else(|| perr(no, format!("bad face reference `{s}`")))?;
                let t: usize = t.parse().map_err(|_| perr(no, format!("bad tetrahedron `{t}`")))?;
                let f: usize = f.parse().map_err(|_| perr(no, format!("bad face `{f}`")))?;
                if t == 0 || f > 3 {
                    return Err(perr(no, format!("face reference `{s}` out of range")));
                }
                Ok((t - 1, f))
            };
            let from = face_ref(src)?;
            let to = face_ref(dst)?;
            let digits: Vec<u8> = images
                .bytes()
                .map(|b| b.checked_sub(b'0').filter(|d| *d < 4))
                .collect::<Option<_>>()
                .filter(|d: &Vec<u8>| d.len() == 3)
                .ok_or_else(|| perr(no, format!("bad vertex images `{images}`")))?;
            let mut perm = [0u8; 4];
            perm[from.1] = to.1 as u8;
            for (v, d) in (0..4).filter(|&v| v != from.1).zip(digits) {
                perm[v] = d;
            }
            let perm = Perm4::new(perm)
                .ok_or_else(|| perr(no, format!("`{images}` is not a bijection onto face {}", to.1)))?;
            pairings.push(Pairing { from, to, perm });
        }
        Triangulation::from_pairings(n, &pairings)
    }
}

/// Assigns ±1 to each tetrahedron so that every gluing reverses orientation.
///
/// A gluing `t → u` with vertex map `σ` reverses orientation iff
/// `o(t) · o(u) · sign(σ) = -1`; the identity gluing of two oppositely
/// oriented copies of one tetrahedron passes.
pub fn check_orientable(t: &Triangulation) -> Option<Vec<i8>> {
    let n = t.size();
    let mut orientation: Vec<Option<i8>> = vec![None; n];
    for start in 0..n {
        if orientation[start].is_some() {
            continue;
        }
        orientation[start] = Some(1);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            let oa = orientation[a].expect("queued tetrahedra are oriented");
            for g in &t.gluings[a] {
                let required = -oa * g.perm.sign();
                match orientation[g.tet] {
                    Some(ob) if ob != required => return None,
                    Some(_) => {}
                    None => {
                        orientation[g.tet] = Some(required);
                        queue.push_back(g.tet);
                    }
                }
            }
        }
    }
    orientation.into_iter().collect()
}

/// An edge of the triangulation: the tetrahedron edges identified with it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    /// `(tet, edge index into TET_EDGES)`, sorted.
    pub slots: Vec<(usize, usize)>,
    pub valence: usize,
}

/// Union-find over edge slots; no manifold check.
pub fn edge_slot_classes(t: &Triangulation) -> Vec<Vec<(usize, usize)>> {
    let mut uf = UnionFind::new(6 * t.size());
    for (tet, faces) in t.gluings.iter().enumerate() {
        for (f, g) in faces.iter().enumerate() {
            for [a, b] in TET_EDGES.iter().filter(|e| !e.contains(&f)) {
                let src = 6 * tet + tet_edge_index(*a, *b);
                let dst = 6 * g.tet + tet_edge_index(g.perm.apply(*a), g.perm.apply(*b));
                uf.union(src, dst);
            }
        }
    }
    uf.classes()
        .into_iter()
        .map(|c| c.into_iter().map(|s| (s / 6, s % 6)).collect())
        .collect()
}

/// Edge classes, each verified to have a link that closes into one cycle
/// through every slot of the class, without reversing the edge.
pub fn edge_classes(t: &Triangulation) -> Result<Vec<EdgeClass>, TriangulationError> {
    let classes = edge_slot_classes(t);
    let mut out = Vec::with_capacity(classes.len());
    for slots in classes {
        let (tet0, e0) = slots[0];
        let [a0, b0] = TET_EDGES[e0];
        let exit0 = (0..4)
            .find(|v| *v != a0 && *v != b0)
            .expect("tetrahedron has four vertices");
        let non_manifold = || TriangulationError::NonManifoldEdge {
            tet: tet0,
            edge: [a0, b0],
        };

        // State: tetrahedron, oriented edge (a, b), face to leave through.
        let start = (tet0, a0, b0, exit0);
        let mut state = start;
        let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut steps = 0;
        loop {
            let (tet, a, b, exit) = state;
            if !visited.insert((tet, tet_edge_index(a, b))) {
                return Err(non_manifold());
            }
            let g = t.gluings[tet][exit];
            let other = 6 - a - b - exit;
            let (na, nb) = (g.perm.apply(a), g.perm.apply(b));
            state = (g.tet, na, nb, g.perm.apply(other));
            steps += 1;
            if state == start {
                break;
            }
            if steps > 6 * t.size() {
                return Err(non_manifold());
            }
        }
        if steps != slots.len() || visited.iter().copied().collect::<Vec<_>>() != slots {
            return Err(non_manifold());
        }
        out.push(EdgeClass {
            valence: slots.len(),
            slots,
        });
    }
    Ok(out)
}

/// Flat cusp torus of a block manifold, up to homothety: `length × width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CuspTorus {
    pub length: u32,
    pub width: u32,
}

impl CuspTorus {
    /// Unordered side lengths, smaller first.
    pub fn dimensions(&self) -> [u32; 2] {
        let mut d = [self.length, self.width];
        d.sort_unstable();
        d
    }
}

impl fmt::Display for CuspTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}×{}", self.length, self.width)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MtInvariants {
    pub cusp_count: usize,
    /// One torus per edge class, in edge-class order.
    pub cusp_tori: Vec<CuspTorus>,
    pub octahedra: usize,
}

impl MtInvariants {
    pub fn volume(&self) -> f64 {
        self.octahedra as f64 * V_OCTAHEDRON
    }
}

/// Block annulus is 2 long and 1 wide; a cusp is the ring of `valence`
/// annuli around its edge, a `valence × 2` torus.
pub fn mt_invariants(t: &Triangulation) -> Result<MtInvariants, TriangulationError> {
    check_orientable(t).ok_or(TriangulationError::NonOrientable)?;
    let classes = edge_classes(t)?;
    Ok(MtInvariants {
        cusp_count: classes.len(),
        cusp_tori: classes
            .iter()
            .map(|c| CuspTorus {
                length: c.valence as u32,
                width: 2,
            })
            .collect(),
        octahedra: 2 * t.size(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub handlebody_genus: usize,
    pub framed_components: usize,
    pub unframed_components: usize,
}

pub fn presentation_summary(t: &Triangulation) -> PresentationSummary {
    let n = t.size();
    PresentationSummary {
        handlebody_genus: n + 1,
        framed_components: n + 1,
        unframed_components: edge_slot_classes(t).len(),
    }
}

/// Edge classes through the edges between faces numbered {1,2} and {3,4}.
/// These must be exactly the valence-2 classes.
pub fn small_cusp_edges(t: &Triangulation) -> Result<Vec<usize>, TriangulationError> {
    let numbers = t.face_numbers().ok_or(TriangulationError::MissingFaceNumbering)?;
    let classes = edge_classes(t)?;
    let mut found = BTreeSet::new();
    for (tet, row) in numbers.iter().enumerate() {
        for pair in [[1u8, 2], [3, 4]] {
            let faces: Vec<usize> = pair
                .iter()
                .map(|n| row.iter().position(|x| x == n).expect("numbering is a permutation"))
                .collect();
            let ends: Vec<usize> = (0..4).filter(|v| !faces.contains(v)).collect();
            let slot = (tet, tet_edge_index(ends[0], ends[1]));
            let class = classes
                .iter()
                .position(|c| c.slots.contains(&slot))
                .expect("every slot is in a class");
            found.insert(class);
        }
    }
    let valence_two: BTreeSet<usize> = (0..classes.len()).filter(|&c| classes[c].valence == 2).collect();
    if found != valence_two {
        return Err(TriangulationError::SmallCuspMismatch(format!(
            "classes through {{1,2}}/{{3,4}} edges {found:?} differ from valence-2 classes {valence_two:?}"
        )));
    }
    Ok(found.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub tet_map: Vec<usize>,
    pub vertex_maps: Vec<Perm4>,
}

impl Isomorphism {
    pub fn inverse(&self) -> Isomorphism {
        let n = self.tet_map.len();
        let mut tet_map = vec![0; n];
        let mut vertex_maps = vec![Perm4::IDENTITY; n];
        for t in 0..n {
            tet_map[self.tet_map[t]] = t;
            vertex_maps[self.tet_map[t]] = self.vertex_maps[t].inverse();
        }
        Isomorphism { tet_map, vertex_maps }
    }

    /// Every gluing of `a` is carried onto the corresponding gluing of `b`.
    pub fn verify(&self, a: &Triangulation, b: &Triangulation) -> bool {
        if a.size() != b.size() || self.tet_map.len() != a.size() {
            return false;
        }
        let mut targets: Vec<usize> = self.tet_map.clone();
        targets.sort_unstable();
        if targets != (0..a.size()).collect::<Vec<_>>() {
            return false;
        }
        (0..a.size()).all(|t| {
            (0..4).all(|f| {
                let g = a.gluing(t, f);
                let image = b.gluing(self.tet_map[t], self.vertex_maps[t].apply(f));
                image.tet == self.tet_map[g.tet]
                    && image.perm
                        == self.vertex_maps[g.tet]
                            .compose(&g.perm)
                            .compose(&self.vertex_maps[t].inverse())
            })
        })
    }
}

/// Backtracking search for a simplicial isomorphism `a → b`.
pub fn isomorphic(a: &Triangulation, b: &Triangulation) -> Option<Isomorphism> {
    if a.size() != b.size() {
        return None;
    }
    let n = a.size();
    let mut state = SearchState {
        tet_map: vec![None; n],
        used: vec![false; n],
    };
    search(a, b, &mut state).then(|| Isomorphism {
        tet_map: state.tet_map.iter().map(|m| m.expect("complete").0).collect(),
        vertex_maps: state.tet_map.iter().map(|m| m.expect("complete").1).collect(),
    })
}

#[derive(Clone)]
struct SearchState {
    tet_map: Vec<Option<(usize, Perm4)>>,
    used: Vec<bool>,
}

fn search(a: &Triangulation, b: &Triangulation, state: &mut SearchState) -> bool {
    let Some(src) = state.tet_map.iter().position(Option::is_none) else {
        return true;
    };
    for dst in 0..b.size() {
        if state.used[dst] {
            continue;
        }
        for p in Perm4::all() {
            let mut trial = state.clone();
            if propagate(a, b, &mut trial, src, dst, p) && search(a, b, &mut trial) {
                *state = trial;
                return true;
            }
        }
    }
    false
}

/// Fixes `src ↦ (dst, p)` and follows gluings through the component.
fn propagate(a: &Triangulation, b: &Triangulation, state: &mut SearchState, src: usize, dst: usize, p: Perm4) -> bool {
    state.tet_map[src] = Some((dst, p));
    state.used[dst] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(t) = queue.pop_front() {
        let (image, vp) = state.tet_map[t].expect("queued tetrahedra are mapped");
        for f in 0..4 {
            let g = a.gluing(t, f);
            let h = b.gluing(image, vp.apply(f));
            let required = h.perm.compose(&vp).compose(&g.perm.inverse());
            match state.tet_map[g.tet] {
                Some(existing) if existing != (h.tet, required) => return false,
                Some(_) => {}
                None => {
                    if state.used[h.tet] {
                        return false;
                    }
                    state.tet_map[g.tet] = Some((h.tet, required));
                    state.used[h.tet] = true;
                    queue.push_back(g.tet);
                }
            }
        }
    }
    true
}

/// Order of the orientation-preserving isometry group of the Minsky block,
/// computed as the color-preserving symmetries of the octahedron and
/// matched one-to-one with the symmetries of the tetrahedron.
pub fn block_symmetry_order() -> Result<usize, TriangulationError> {
    let err = |m: String| TriangulationError::Correspondence(m);
    let o = build_octahedron().map_err(|e| err(e.to_string()))?;
    let corr = octahedron_tetrahedron_correspondence(&o).map_err(|e| err(e.to_string()))?;
    let lat = o.lattice();

    let octahedral: Vec<_> = hyperoctahedral_group()
        .into_iter()
        .filter(|m| m.perm()[3] == 3 && m.signs()[3] == 1)
        .collect();
    if octahedral.len() != 48 {
        return Err(err(format!(
            "expected 48 octahedral symmetries, found {}",
            octahedral.len()
        )));
    }
    let mut induced = BTreeSet::new();
    let mut color_preserving = 0;
    for m in &octahedral {
        let faces: Option<Vec<usize>> = (0..8).map(|f| lat.image_of_face(m, 2, f)).collect();
        let faces = faces.ok_or_else(|| err(format!("{m} is not a symmetry of the octahedron")))?;
        if (0..8).any(|f| o.face_color(faces[f]) != o.face_color(f)) {
            continue;
        }
        color_preserving += 1;
        let mut sigma = [0usize; 4];
        for (v, s) in sigma.iter_mut().enumerate() {
            let image = faces[corr.red_face_of_vertex[v]];
            *s = corr
                .red_face_of_vertex
                .iter()
                .position(|&r| r == image)
                .ok_or_else(|| err("red face mapped outside the red faces".into()))?;
        }
        let vertex_image: Vec<usize> = (0..6)
            .map(|v| {
                lat.vertex_index(&m.apply(&lat.vertices()[v]))
                    .expect("octahedron vertex")
            })
            .collect();
        if corr.octahedron_vertex_map(sigma).to_vec() != vertex_image {
            return Err(err(format!("{m} disagrees with the edge-to-vertex table")));
        }
        if !induced.insert(sigma) {
            return Err(err("two block symmetries induce the same tetrahedron symmetry".into()));
        }
    }
    let tetrahedral = Perm4::all().len();
    if color_preserving != tetrahedral || induced.len() != tetrahedral {
        return Err(err(format!(
            "{color_preserving} color-preserving octahedron symmetries vs {tetrahedral} tetrahedron symmetries"
        )));
    }
    debug_assert_eq!(o.faces_of_color(FacetColor::Blue).len(), 4);
    Ok(tetrahedral)
}

/// Two oppositely oriented copies of a tetrahedron glued by the identity.
pub fn doubled_tetrahedron() -> Triangulation {
    let pairings: Vec<Pairing> = (0..4)
        .map(|f| Pairing {
            from: (0, f),
            to: (1, f),
            perm: Perm4::IDENTITY,
        })
        .collect();
    Triangulation::from_pairings(2, &pairings).expect("doubled tetrahedron is well formed")
}

/// One tetrahedron with both pairs of faces around two opposite edges folded shut.
pub fn folded_tetrahedron() -> Triangulation {
    let pairings = [
        Pairing {
            from: (0, 0),
            to: (0, 1),
            perm: Perm4::transposition(0, 1),
        },
        Pairing {
            from: (0, 2),
            to: (0, 3),
            perm: Perm4::transposition(2, 3),
        },
    ];
    Triangulation::from_pairings(1, &pairings)
        .expect("folded tetrahedron is well formed")
        .with_face_numbers(vec![[1, 2, 3, 4]])
        .expect("valid numbering")
}

/// Hand encoding of the four-tetrahedron triangulation of the large
/// boundary component: tetrahedra in a ring, consecutive ones joined
/// alternately by the `F` pair (faces numbered 1 and 2, swapping the edges
/// {i,3} and {i,4}) and the `G` pair (faces numbered 3 and 4, swapping {1,i}
/// and {2,i}). Face numbered `k` is face `k - 1`.
pub fn large_boundary_figure() -> Triangulation {
    let f = Perm4::transposition(2, 3);
    let g = Perm4::transposition(0, 1);
    let mut pairings = Vec::new();
    for (a, b) in [(0, 1), (2, 3)] {
        for face in [0, 1] {
            pairings.push(Pairing {
                from: (a, face),
                to: (b, face),
                perm: f,
            });
        }
    }
    for (a, b) in [(1, 2), (3, 0)] {
        for face in [2, 3] {
            pairings.push(Pairing {
                from: (a, face),
                to: (b, face),
                perm: g,
            });
        }
    }
    Triangulation::from_pairings(4, &pairings)
        .expect("figure encoding is well formed")
        .with_face_numbers(vec![[1, 2, 3, 4]; 4])
        .expect("valid numbering")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_valences(t: &Triangulation) -> Vec<usize> {
        let mut v: Vec<usize> = edge_classes(t).unwrap().iter().map(|c| c.valence).collect();
        v.sort_unstable();
        v
    }

    /// Oracle: try every ±1 assignment directly against the gluing rule.
    fn brute_force_orientable(t: &Triangulation) -> bool {
        (0u32..1 << t.size()).any(|bits| {
            let o = |i: usize| if bits >> i & 1 == 1 { -1i8 } else { 1 };
            t.pairings()
                .iter()
                .all(|p| o(p.from.0) * o(p.to.0) * p.perm.sign() == -1)
        })
    }

    #[test]
    fn perm4_basics() {
        assert_eq!(Perm4::all().len(), 24);
        let p = Perm4([1, 2, 3, 0]);
        assert_eq!(p.compose(&p.inverse()), Perm4::IDENTITY);
        assert_eq!(p.sign(), -1);
        assert_eq!(Perm4::transposition(0, 1).sign(), -1);
        assert!(Perm4::new([0, 0, 1, 2]).is_none());
    }

    #[test]
    fn orientability_examples() {
        assert!(check_orientable(&large_boundary_figure()).is_some());
        let doubled = check_orientable(&doubled_tetrahedron()).unwrap();
        assert_eq!(doubled[0], -doubled[1]);
        assert!(check_orientable(&folded_tetrahedron()).is_some());

        // Face 2 onto face 3 by 0↔1, 2↔3: an even map, so the self-gluing preserves orientation.
        let twisted = Triangulation::from_pairings(
            1,
            &[
                Pairing {
                    from: (0, 2),
                    to: (0, 3),
                    perm: Perm4([1, 0, 3, 2]),
                },
                Pairing {
                    from: (0, 0),
                    to: (0, 1),
                    perm: Perm4::transposition(0, 1),
                },
            ],
        )
        .unwrap();
        assert!(!brute_force_orientable(&twisted));
        assert!(check_orientable(&twisted).is_none());
        assert_eq!(mt_invariants(&twisted), Err(TriangulationError::NonOrientable));
    }

    /// Oracle: propagate minimum labels across glued edge slots until stable,
    /// reading vertex maps straight off the pairing list.
    fn propagated_valences(t: &Triangulation) -> Vec<usize> {
        let n = t.size();
        let mut label: Vec<usize> = (0..6 * n).collect();
        let slot = |tet: usize, a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            6 * tet + [[0, 0, 1, 2], [0, 0, 3, 4], [1, 3, 0, 5], [2, 4, 5, 0]][a][b]
        };
        let mut changed = true;
        while changed {
            changed = false;
            for p in t.pairings() {
                for a in 0..4 {
                    for b in a + 1..4 {
                        if a == p.from.1 || b == p.from.1 {
                            continue;
                        }
                        let x = slot(p.from.0, a, b);
                        let y = slot(p.to.0, p.perm.apply(a), p.perm.apply(b));
                        let m = label[x].min(label[y]);
                        if label[x] != m || label[y] != m {
                            label[x] = m;
                            label[y] = m;
                            changed = true;
                        }
                    }
                }
            }
        }
        let mut counts = std::collections::BTreeMap::new();
        for l in label {
            *counts.entry(l).or_insert(0) += 1;
        }
        let mut v: Vec<usize> = counts.into_values().collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn edge_class_oracle_values() {
        assert_eq!(
            propagated_valences(&large_boundary_figure()),
            vec![2, 2, 2, 2, 4, 4, 4, 4]
        );
        assert_eq!(propagated_valences(&doubled_tetrahedron()), vec![2; 6]);
        assert_eq!(propagated_valences(&folded_tetrahedron()), vec![1, 1, 4]);
    }

    #[test]
    fn edge_classes_of_examples() {
        assert_eq!(sorted_valences(&large_boundary_figure()), vec![2, 2, 2, 2, 4, 4, 4, 4]);
        assert_eq!(sorted_valences(&doubled_tetrahedron()), vec![2; 6]);
        assert_eq!(sorted_valences(&folded_tetrahedron()), vec![1, 1, 4]);
    }

    #[test]
    fn edge_identified_with_its_reverse_is_non_manifold() {
        // Face 3 (vertices 0,1,2) onto face 2 (vertices 0,1,3) swapping 0 and 1 reverses edge {0,1}.
        let t = Triangulation::from_pairings(
            1,
            &[
                Pairing {
                    from: (0, 3),
                    to: (0, 2),
                    perm: Perm4([1, 0, 3, 2]),
                },
                Pairing {
                    from: (0, 0),
                    to: (0, 1),
                    perm: Perm4::transposition(0, 1),
                },
            ],
        )
        .unwrap();
        assert!(matches!(
            edge_classes(&t),
            Err(TriangulationError::NonManifoldEdge { .. })
        ));
    }

    #[test]
    fn block_manifold_invariants() {
        let m = mt_invariants(&large_boundary_figure()).unwrap();
        assert_eq!(m.cusp_count, 8);
        assert_eq!(m.octahedra, 8);
        let mut dims: Vec<[u32; 2]> = m.cusp_tori.iter().map(CuspTorus::dimensions).collect();
        dims.sort();
        assert_eq!(dims, [[2, 2], [2, 2], [2, 2], [2, 2], [2, 4], [2, 4], [2, 4], [2, 4]]);
        assert!((m.volume() - 29.311).abs() < 1e-2);

        let d = mt_invariants(&doubled_tetrahedron()).unwrap();
        assert_eq!((d.cusp_count, d.octahedra), (6, 4));
    }

    #[test]
    fn presentation_counts() {
        let s = presentation_summary(&large_boundary_figure());
        assert_eq!(
            (s.handlebody_genus, s.framed_components, s.unframed_components),
            (5, 5, 8)
        );
        let s = presentation_summary(&doubled_tetrahedron());
        assert_eq!(
            (s.handlebody_genus, s.framed_components, s.unframed_components),
            (3, 3, 6)
        );
        let s = presentation_summary(&folded_tetrahedron());
        assert_eq!(
            (s.handlebody_genus, s.framed_components, s.unframed_components),
            (2, 2, 3)
        );
    }

    #[test]
    fn small_cusps_of_large_figure() {
        let t = large_boundary_figure();
        let classes = edge_classes(&t).unwrap();
        let small = small_cusp_edges(&t).unwrap();
        assert_eq!(small.len(), 4);
        assert!(small.iter().all(|&c| classes[c].valence == 2));
        let rest: Vec<usize> = (0..classes.len()).filter(|c| !small.contains(c)).collect();
        assert_eq!(rest.len(), 4);
        assert!(rest.iter().all(|&c| classes[c].valence == 4));
        assert_eq!(
            small_cusp_edges(&doubled_tetrahedron()),
            Err(TriangulationError::MissingFaceNumbering)
        );
    }

    #[test]
    fn isomorphism_examples() {
        let l = large_boundary_figure();
        let witness = isomorphic(&l, &l).unwrap();
        assert!(witness.verify(&l, &l));
        assert!(isomorphic(&l, &doubled_tetrahedron()).is_none());
        let relabeled = l
            .relabel(
                &[2, 0, 3, 1],
                &[
                    Perm4([3, 1, 0, 2]),
                    Perm4::IDENTITY,
                    Perm4([1, 0, 3, 2]),
                    Perm4([0, 2, 1, 3]),
                ],
            )
            .unwrap();
        let w = isomorphic(&l, &relabeled).unwrap();
        assert!(w.verify(&l, &relabeled));
        assert!(w.inverse().verify(&relabeled, &l));
    }

    #[test]
    fn text_format() {
        let text = folded_tetrahedron().to_text();
        assert_eq!(text, "tets 1\nglue 1.0 1.1 023\nglue 1.2 1.3 012\n");
        let back = Triangulation::from_text(&text).unwrap();
        assert!(isomorphic(&back, &folded_tetrahedron()).is_some());
        let large = large_boundary_figure().to_text();
        assert!(large.starts_with("tets 4\n"));
        assert_eq!(large.lines().filter(|l| l.starts_with("glue ")).count(), 8);
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(
            Triangulation::from_text(""),
            Err(TriangulationError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Triangulation::from_text("tets x\n"),
            Err(TriangulationError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Triangulation::from_text("tets 1\nglue 1.0 1.1 02\n"),
            Err(TriangulationError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Triangulation::from_text("tets 1\nglue 1.0 1.1 023\n"),
            Err(TriangulationError::Malformed(_))
        ));
        assert!(matches!(
            Triangulation::from_text("tets 1\nglue 1.0 1.1 013\nglue 1.2 1.3 013\n"),
            Err(TriangulationError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn block_symmetry_group_has_order_24() {
        assert_eq!(block_symmetry_order().unwrap(), 24);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// A random complete set of face pairings on `n` tetrahedra.
        fn triangulation() -> impl Strategy<Value = Triangulation> {
            (1usize..=4)
                .prop_flat_map(|n| {
                    (
                        Just(n),
                        Just((0..4 * n).collect::<Vec<_>>()).prop_shuffle(),
                        prop::collection::vec(0usize..24, 2 * n),
                    )
                })
                .prop_map(|(n, order, perm_choices)| {
                    let pairings: Vec<Pairing> = order
                        .chunks(2)
                        .zip(perm_choices)
                        .map(|(pair, choice)| {
                            let (from, to) = ((pair[0] / 4, pair[0] % 4), (pair[1] / 4, pair[1] % 4));
                            // Any bijection of the remaining three vertices, sending from.1 to to.1.
                            let rest_src: Vec<usize> = (0..4).filter(|&v| v != from.1).collect();
                            let rest_dst: Vec<usize> = (0..4).filter(|&v| v != to.1).collect();
                            let order = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][choice % 6];
                            let mut p = [0u8; 4];
                            p[from.1] = to.1 as u8;
                            for (i, &v) in rest_src.iter().enumerate() {
                                p[v] = rest_dst[order[i]] as u8;
                            }
                            Pairing {
                                from,
                                to,
                                perm: Perm4(p),
                            }
                        })
                        .collect();
                    Triangulation::from_pairings(n, &pairings).unwrap()
                })
        }

        fn relabeling(n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<Perm4>)> {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec((0usize..24).prop_map(|i| Perm4::all()[i]), n),
            )
        }

        proptest! {
            #[test]
            fn valences_sum_to_six_n(t in triangulation()) {
                let total: usize = edge_slot_classes(&t).iter().map(Vec::len).sum();
                prop_assert_eq!(total, 6 * t.size());
                if let Ok(classes) = edge_classes(&t) {
                    prop_assert_eq!(classes.iter().map(|c| c.valence).sum::<usize>(), 6 * t.size());
                }
            }

            #[test]
            fn edge_classes_agree_with_propagation(t in triangulation()) {
                let mut v: Vec<usize> = edge_slot_classes(&t).iter().map(Vec::len).collect();
                v.sort_unstable();
                prop_assert_eq!(v, propagated_valences(&t));
            }

            #[test]
            fn orientability_agrees_with_brute_force(t in triangulation()) {
                prop_assert_eq!(check_orientable(&t).is_some(), brute_force_orientable(&t));
            }

            #[test]
            fn cusps_match_edge_classes(t in triangulation()) {
                if let Ok(m) = mt_invariants(&t) {
                    let classes = edge_classes(&t).unwrap();
                    prop_assert_eq!(m.cusp_count, classes.len());
                    let mut lengths: Vec<u32> = m.cusp_tori.iter().map(|c| c.length).collect();
                    let mut valences: Vec<u32> = classes.iter().map(|c| c.valence as u32).collect();
                    lengths.sort_unstable();
                    valences.sort_unstable();
                    prop_assert_eq!(lengths, valences);
                }
                let s = presentation_summary(&t);
                prop_assert_eq!(s.framed_components - 1, t.size());
                prop_assert_eq!(s.unframed_components, edge_slot_classes(&t).len());
            }

            #[test]
            fn text_round_trip(t in triangulation()) {
                let back = Triangulation::from_text(&t.to_text()).unwrap();
                prop_assert_eq!(back, t);
            }

            #[test]
            fn isomorphism_is_invariant_under_relabeling(
                (t, (tets, verts)) in triangulation().prop_flat_map(|t| { let n = t.size(); (Just(t), relabeling(n)) })
            ) {
                let u = t.relabel(&tets, &verts).unwrap();
                let w = isomorphic(&t, &u);
                prop_assert!(w.is_some());
                let w = w.unwrap();
                prop_assert!(w.verify(&t, &u));
                prop_assert!(w.inverse().verify(&u, &t));
                prop_assert!(isomorphic(&t, &t).is_some());
                prop_assert_eq!(check_orientable(&u).is_some(), check_orientable(&t).is_some());
            }
        }
    }
}
