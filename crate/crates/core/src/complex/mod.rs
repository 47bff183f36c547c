//! Quotients of copies of the 24-cell by facet gluings.
//!
//! A [`QuotientComplex`] is a number of oriented copies of the 24-cell
//! together with gluings between facet-copies, each given by a signed
//! coordinate permutation that is a symmetry of the 24-cell. Every face of
//! every copy is a cell; the gluings generate an equivalence on cells of
//! each dimension, tracked with union-find.
//!
//! The mirrored 24-cell, the four-manifold with geodesic boundary obtained
//! by pairing its blue strata, and the closed-up manifold are all instances.

mod boundary;
mod cusp;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::exact::{label, Label, SignedPerm};
use crate::polytope::{FacetColor, PolytopeError, TwentyFourCell};
use crate::union_find::UnionFind;
use crate::volume::Volume;

pub use boundary::{boundary_components, extract_triangulation, BoundaryBlock, BoundaryComponent, TriangleGluing};
pub use cusp::{cusp_shapes, cusp_square, CuspKind, CuspShape, CuspSquare, SquareSide};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("{what}: expected {expected}, found {actual}")]
    CountMismatch {
        what: String,
        expected: String,
        actual: String,
    },
    #[error("malformed label {0}: {1}")]
    MalformedLabel(String, String),
    #[error("no facet labeled {0}")]
    UnknownStratum(Label),
    #[error("gluing {name} does not carry {from} onto {to}")]
    MapMismatch { name: String, from: Label, to: Label },
    #[error("pairing rule is not a fixed-point-free involution: {0}")]
    NonInvolutive(String),
    #[error("pairing rule is incomplete: {0}")]
    IncompletePairing(String),
    #[error("gluing {name} between copies {from_copy} and {to_copy} preserves orientation")]
    OrientationPreserving {
        name: String,
        from_copy: usize,
        to_copy: usize,
    },
    #[error("per-copy maps disagree on the mirrored boundary: {0}")]
    CopyMismatch(String),
    #[error("cusp gluing inconsistent: {0}")]
    CuspGluing(String),
    #[error("boundary gluing inconsistent: {0}")]
    BoundaryGluing(String),
    #[error("ambiguous edge correspondence: {0}")]
    AmbiguousEdges(String),
    #[error("closing map does not match the small boundary components: {0}")]
    ClosingMismatch(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Triangulation(#[from] crate::triangulation::TriangulationError),
}

pub(crate) fn mismatch(what: &str, expected: impl ToString, actual: impl ToString) -> ComplexError {
    ComplexError::CountMismatch {
        what: what.to_string(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingKind {
    /// Identity between the same facet in two copies.
    Mirror,
    /// A face pairing by an isometry of the 24-cell.
    Pairing,
}

/// `(copy, facet)` glued to `(copy', map(facet))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetGluing {
    pub name: String,
    pub kind: GluingKind,
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub map: SignedPerm,
}

#[derive(Debug, Clone)]
pub struct QuotientComplex {
    cell: Arc<TwentyFourCell>,
    orientations: Vec<i8>,
    gluings: Vec<FacetGluing>,
    /// Per dimension, the least cell index of each cell's class.
    reps: Vec<Vec<usize>>,
}

impl QuotientComplex {
    pub fn new(
        cell: Arc<TwentyFourCell>,
        orientations: Vec<i8>,
        gluings: Vec<FacetGluing>,
    ) -> Result<Self, ComplexError> {
        let lat = cell.lattice();
        let copies = orientations.len();
        let mut used: BTreeMap<(usize, usize), &str> = BTreeMap::new();
        for g in &gluings {
            let (fc, ff) = g.from;
            let (tc, tf) = g.to;
            if fc >= copies || tc >= copies {
                return Err(ComplexError::NonInvolutive(format!(
                    "{} refers to a missing copy",
                    g.name
                )));
            }
            if lat.image_of_face(&g.map, 3, ff) != Some(tf) {
                return Err(ComplexError::MapMismatch {
                    name: g.name.clone(),
                    from: cell.facet_label(ff),
                    to: cell.facet_label(tf),
                });
            }
            if g.from == g.to {
                return Err(ComplexError::NonInvolutive(format!(
                    "{} fixes {}",
                    g.name,
                    cell.facet_label(ff)
                )));
            }
            for end in [g.from, g.to] {
                if let Some(other) = used.insert(end, &g.name) {
                    return Err(ComplexError::NonInvolutive(format!(
                        "facet {} of copy {} is glued by both {other} and {}",
                        cell.facet_label(end.1),
                        end.0 + 1,
                        g.name
                    )));
                }
            }
            if g.map.determinant() * orientations[fc] * orientations[tc] != -1 {
                return Err(ComplexError::OrientationPreserving {
                    name: g.name.clone(),
                    from_copy: fc + 1,
                    to_copy: tc + 1,
                });
            }
        }

        let mut reps = Vec::with_capacity(5);
        for k in 0..4 {
            let count = lat.faces(k).len();
            let mut uf = UnionFind::new(copies * count);
            for g in &gluings {
                for f in lat.subfaces(3, g.from.1, k) {
                    let image = lat
                        .image_of_face(&g.map, k, f)
                        .expect("a symmetry carrying a facet onto a facet carries its faces onto faces");
                    uf.union(g.from.0 * count + f, g.to.0 * count + image);
                }
            }
            reps.push(uf.canonical_representatives());
        }
        reps.push((0..copies).collect());
        Ok(QuotientComplex {
            cell,
            orientations,
            gluings,
            reps,
        })
    }

    pub fn cell(&self) -> &TwentyFourCell {
        &self.cell
    }

    pub fn copies(&self) -> usize {
        self.orientations.len()
    }

    pub fn orientations(&self) -> &[i8] {
        &self.orientations
    }

    pub fn gluings(&self) -> &[FacetGluing] {
        &self.gluings
    }

    fn faces_in_dim(&self, k: usize) -> usize {
        if k == 4 {
            1
        } else {
            self.cell.lattice().faces(k).len()
        }
    }

    /// Canonical representative `(copy, face)` of the class of `(copy, face)`.
    pub fn representative(&self, k: usize, copy: usize, face: usize) -> (usize, usize) {
        let n = self.faces_in_dim(k);
        let r = self.reps[k][copy * n + face];
        (r / n, r % n)
    }

    pub fn orbit_count(&self, k: usize) -> usize {
        self.reps[k].iter().enumerate().filter(|(i, r)| i == *r).count()
    }

    /// Cell counts of the quotient for dimensions `0..=4`.
    pub fn cell_counts(&self) -> [usize; 5] {
        std::array::from_fn(|k| self.orbit_count(k))
    }

    /// The pairing gluing acting on `facet` within `copy`, oriented away from it.
    pub fn pairing_at(&self, copy: usize, facet: usize) -> Option<(SignedPerm, usize, usize, &str)> {
        self.gluings
            .iter()
            .filter(|g| g.kind == GluingKind::Pairing)
            .find_map(|g| {
                if g.from == (copy, facet) {
                    Some((g.map, g.to.0, g.to.1, g.name.as_str()))
                } else if g.to == (copy, facet) {
                    Some((g.map.inverse(), g.from.0, g.from.1, g.name.as_str()))
                } else {
                    None
                }
            })
    }

    /// Facet-copies not glued to anything.
    pub fn free_facet_copies(&self) -> Vec<(usize, usize)> {
        let used: BTreeSet<(usize, usize)> = self.gluings.iter().flat_map(|g| [g.from, g.to]).collect();
        (0..self.copies())
            .flat_map(|c| (0..self.cell.lattice().facets().len()).map(move |f| (c, f)))
            .filter(|fc| !used.contains(fc))
            .collect()
    }

    /// Red/blue facets left free in every copy: the boundary 3-strata.
    pub fn boundary_strata(&self) -> Vec<usize> {
        let free = self.free_facet_copies();
        (0..self.cell.lattice().facets().len())
            .filter(|&f| self.cell.facet_color(f) != FacetColor::Green)
            .filter(|&f| (0..self.copies()).all(|c| free.contains(&(c, f))))
            .collect()
    }

    /// Euler characteristic of the quotient with its ideal vertices removed.
    ///
    /// Every cusp section here is a flat 3-manifold, closed or bounded by
    /// tori, with zero Euler characteristic, so coning off cusps changes
    /// nothing and the alternating sum skips dimension 0.
    pub fn euler_characteristic(&self) -> i64 {
        (1..=4).map(|k| sign(k) * self.orbit_count(k) as i64).sum()
    }

    /// Euler characteristic of the boundary 3-complex, ideal vertices removed.
    pub fn boundary_euler_characteristic(&self) -> i64 {
        let lat = self.cell.lattice();
        let free = self.free_facet_copies();
        (1..=3)
            .map(|k| {
                let classes: BTreeSet<(usize, usize)> = free
                    .iter()
                    .filter(|(_, f)| self.cell.facet_color(*f) != FacetColor::Green)
                    .flat_map(|&(c, f)| lat.subfaces(3, f, k).into_iter().map(move |s| (c, s)))
                    .map(|(c, s)| self.representative(k, c, s))
                    .collect();
                sign(k) * classes.len() as i64
            })
            .sum()
    }

    /// Two copies of this complex, the second with reversed orientations,
    /// glued by the identity along every free red/blue facet-copy.
    pub fn double(&self) -> Result<QuotientComplex, ComplexError> {
        let n = self.copies();
        let mut orientations = self.orientations.clone();
        orientations.extend(self.orientations.iter().map(|o| -o));
        let mut gluings = self.gluings.clone();
        gluings.extend(self.gluings.iter().map(|g| FacetGluing {
            from: (g.from.0 + n, g.from.1),
            to: (g.to.0 + n, g.to.1),
            ..g.clone()
        }));
        for (c, f) in self.free_facet_copies() {
            if self.cell.facet_color(f) == FacetColor::Green {
                continue;
            }
            gluings.push(FacetGluing {
                name: "double".into(),
                kind: GluingKind::Mirror,
                from: (c, f),
                to: (c + n, f),
                map: SignedPerm::IDENTITY,
            });
        }
        QuotientComplex::new(self.cell.clone(), orientations, gluings)
    }

    pub fn volume(&self) -> Volume {
        Volume::TwentyFourCells(self.copies())
    }

    /// Orbits of labeled strata: labels are merged when any of their cells
    /// in any copy share a class.
    fn stratum_orbits(&self, k: usize, strata: &[(Label, usize)]) -> Vec<Vec<Label>> {
        let mut uf = UnionFind::new(strata.len());
        let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, (_, face)) in strata.iter().enumerate() {
            for c in 0..self.copies() {
                let rep = self.representative(k, c, *face);
                if let Some(&j) = owner.get(&rep) {
                    uf.union(i, j);
                } else {
                    owner.insert(rep, i);
                }
            }
        }
        let mut orbits: Vec<Vec<Label>> = uf
            .classes()
            .into_iter()
            .map(|c| {
                let mut ls: Vec<Label> = c.into_iter().map(|i| strata[i].0).collect();
                ls.sort();
                ls
            })
            .collect();
        orbits.sort();
        orbits
    }

    /// Cusp classes, each a sorted list of vertex labels.
    pub fn cusp_orbits(&self) -> Vec<Vec<Label>> {
        let strata: Vec<(Label, usize)> = (0..self.cell.lattice().vertices().len())
            .map(|v| (self.cell.vertex_label(v), v))
            .collect();
        self.stratum_orbits(0, &strata)
    }

    /// Classes of the red/blue 2-strata.
    pub fn two_stratum_orbits(&self) -> Vec<Vec<Label>> {
        let strata: Vec<(Label, usize)> = self
            .cell
            .red_blue_triangles()
            .into_iter()
            .map(|t| (self.cell.triangle_label(t).expect("red/blue triangles are labeled"), t))
            .collect();
        self.stratum_orbits(2, &strata)
    }

    /// Stable digest of the copy orientations, gluings and cell classes.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{:?}", self.orientations));
        for g in &self.gluings {
            h.update(format!("{}:{:?}:{:?}:{:?}:{}\n", g.name, g.kind, g.from, g.to, g.map));
        }
        for reps in &self.reps {
            for r in reps {
                h.update(r.to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A boundary 3-stratum of the mirrored 24-cell: a red or blue facet
/// doubled along its green-adjacent triangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum3 {
    pub label: Label,
    pub color: FacetColor,
    pub two_strata: Vec<Label>,
    pub cusps: Vec<Label>,
}

/// Two oppositely oriented copies of the 24-cell glued along green facets.
#[derive(Debug, Clone)]
pub struct MirroredComplex {
    quotient: QuotientComplex,
    strata: Vec<Stratum3>,
}

pub fn build_mirrored(cell: Arc<TwentyFourCell>) -> Result<MirroredComplex, ComplexError> {
    let lat = cell.lattice();
    let gluings: Vec<FacetGluing> = cell
        .facets_of_color(FacetColor::Green)
        .into_iter()
        .map(|f| FacetGluing {
            name: "mirror".into(),
            kind: GluingKind::Mirror,
            from: (0, f),
            to: (1, f),
            map: SignedPerm::IDENTITY,
        })
        .collect();
    let quotient = QuotientComplex::new(cell.clone(), vec![1, -1], gluings)?;

    let boundary = quotient.boundary_strata();
    if boundary.len() != 16 {
        return Err(mismatch("boundary 3-strata", 16, boundary.len()));
    }
    let triangles = cell.red_blue_triangles();
    if triangles.len() != 32 {
        return Err(mismatch("boundary 2-strata", 32, triangles.len()));
    }
    // A red/blue triangle is not identified across copies; its two copies form one 2-stratum.
    for &t in &triangles {
        if quotient.representative(2, 0, t) == quotient.representative(2, 1, t) {
            return Err(mismatch("copies of a red/blue triangle", "distinct", "identified"));
        }
    }
    let cusps = quotient.orbit_count(0);
    if cusps != 24 {
        return Err(mismatch("cusps", 24, cusps));
    }

    let mut strata = Vec::with_capacity(16);
    for f in boundary {
        let tris = lat.subfaces(3, f, 2);
        let mut two_strata: Vec<Label> = Vec::new();
        for &t in &tris {
            let mirrored = quotient.representative(2, 0, t) == quotient.representative(2, 1, t);
            let green_side = cell.opposite_color(f, t) == Some(FacetColor::Green);
            if mirrored != green_side {
                return Err(mismatch(
                    "triangles doubled along green facets",
                    "exactly the green-adjacent ones",
                    cell.facet_label(f),
                ));
            }
            if !green_side {
                two_strata.push(cell.triangle_label(t).expect("red/blue triangle"));
            }
        }
        two_strata.sort();
        let mut cusps: Vec<Label> = lat.facets()[f].vertices.iter().map(|&v| cell.vertex_label(v)).collect();
        cusps.sort();
        if two_strata.len() != 4 || cusps.len() != 6 {
            return Err(mismatch(
                &format!("2-strata and cusps of {}", cell.facet_label(f)),
                "(4, 6)",
                format!("({}, {})", two_strata.len(), cusps.len()),
            ));
        }
        strata.push(Stratum3 {
            label: cell.facet_label(f),
            color: cell.facet_color(f),
            two_strata,
            cusps,
        });
    }
    strata.sort_by_key(|s| s.label);

    for v in 0..lat.vertices().len() {
        check_cusp_section(&cell, v)?;
    }
    Ok(MirroredComplex { quotient, strata })
}

/// The cube vertex figure at `v` has its two green faces opposite; mirroring
/// across them leaves a square (the four red/blue facets) times a circle.
fn check_cusp_section(cell: &TwentyFourCell, v: usize) -> Result<(), ComplexError> {
    let lat = cell.lattice();
    let at_v: Vec<usize> = (0..lat.facets().len())
        .filter(|&f| lat.facets()[f].vertices.contains(&v))
        .collect();
    let green: Vec<usize> = at_v
        .iter()
        .copied()
        .filter(|&f| cell.facet_color(f) == FacetColor::Green)
        .collect();
    let label = cell.vertex_label(v);
    if green.len() != 2 || at_v.len() != 6 {
        return Err(mismatch(
            &format!("facets at cusp {label}"),
            "2 green of 6",
            format!("{} green of {}", green.len(), at_v.len()),
        ));
    }
    let shares_edge = |a: usize, b: usize| {
        lat.faces(1)
            .iter()
            .any(|e| e.vertices.contains(&v) && e.facets.contains(&a) && e.facets.contains(&b))
    };
    if shares_edge(green[0], green[1]) {
        return Err(mismatch(
            &format!("green faces of the vertex cube at {label}"),
            "opposite",
            "adjacent",
        ));
    }
    for &f in &at_v {
        if cell.facet_color(f) != FacetColor::Green && !green.iter().all(|&g| shares_edge(f, g)) {
            return Err(mismatch(
                &format!("side {} of the cusp square {label}", cell.facet_label(f)),
                "adjacent to both green faces",
                "not adjacent",
            ));
        }
    }
    cusp_square(cell, &label).map(|_| ())
}

impl MirroredComplex {
    pub fn quotient(&self) -> &QuotientComplex {
        &self.quotient
    }

    pub fn cell(&self) -> &TwentyFourCell {
        self.quotient.cell()
    }

    pub fn strata(&self) -> &[Stratum3] {
        &self.strata
    }

    pub fn two_strata(&self) -> Vec<Label> {
        let set: BTreeSet<Label> = self.strata.iter().flat_map(|s| s.two_strata.iter().copied()).collect();
        set.into_iter().collect()
    }

    /// Every 2-stratum lies in exactly one red and one blue 3-stratum.
    pub fn two_strata_separate_red_from_blue(&self) -> bool {
        self.two_strata().iter().all(|t| {
            let mut colors: Vec<FacetColor> = self
                .strata
                .iter()
                .filter(|s| s.two_strata.contains(t))
                .map(|s| s.color)
                .collect();
            colors.sort();
            colors == [FacetColor::Red, FacetColor::Blue]
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CopyRule {
    /// Each copy is glued within itself.
    PerCopy,
    /// Copy 1 is glued to copy 2.
    CrossCopy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumPairing {
    pub name: String,
    pub source: Label,
    pub target: Label,
    pub map: SignedPerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetPairingRule {
    pub pairs: Vec<StratumPairing>,
    pub copy_rule: CopyRule,
}

impl FacetPairingRule {
    /// `±(+,+,-,+) ↔ ±(+,+,+,-)` by `F` and `±(+,-,+,+) ↔ ±(-,+,+,+)` by `G`, in each copy.
    pub fn blue_pairing() -> Self {
        let f = SignedPerm::swap_last_two();
        let g = SignedPerm::swap_first_two();
        let mut pairs = Vec::new();
        for (name, map, a, b) in [("F", f, "++-+", "+++-"), ("G", g, "+-++", "-+++")] {
            for s in [1, -1] {
                let (src, dst) = if s == 1 {
                    (label(a), label(b))
                } else {
                    (label(a).negate(), label(b).negate())
                };
                pairs.push(StratumPairing {
                    name: name.into(),
                    source: src,
                    target: dst,
                    map,
                });
            }
        }
        FacetPairingRule {
            pairs,
            copy_rule: CopyRule::PerCopy,
        }
    }

    fn to_gluings(&self, cell: &TwentyFourCell) -> Result<Vec<FacetGluing>, ComplexError> {
        let mut out = Vec::new();
        for p in &self.pairs {
            if p.map.apply_to_label(&p.source) != p.target {
                return Err(ComplexError::MapMismatch {
                    name: p.name.clone(),
                    from: p.source,
                    to: p.target,
                });
            }
            let from = cell
                .facet_by_label(&p.source)
                .ok_or(ComplexError::UnknownStratum(p.source))?;
            let to = cell
                .facet_by_label(&p.target)
                .ok_or(ComplexError::UnknownStratum(p.target))?;
            let copies: &[(usize, usize)] = match self.copy_rule {
                CopyRule::PerCopy => &[(0, 0), (1, 1)],
                CopyRule::CrossCopy => &[(0, 1)],
            };
            for &(a, b) in copies {
                out.push(FacetGluing {
                    name: p.name.clone(),
                    kind: GluingKind::Pairing,
                    from: (a, from),
                    to: (b, to),
                    map: p.map,
                });
            }
        }
        Ok(out)
    }

    /// Each stratum is moved off itself, and the map applied twice is the identity.
    fn check_involutive(&self) -> Result<(), ComplexError> {
        for p in &self.pairs {
            if p.source == p.target {
                return Err(ComplexError::NonInvolutive(format!("{} fixes {}", p.name, p.source)));
            }
            if p.map.apply_to_label(&p.target) != p.source {
                return Err(ComplexError::NonInvolutive(format!(
                    "{} does not send {} back to {}",
                    p.name, p.target, p.source
                )));
            }
        }
        Ok(())
    }

    /// Per-copy maps must carry green-adjacent triangles (which the mirror
    /// identifies across copies) to green-adjacent triangles, so the two
    /// per-copy maps assemble into one map of doubled blocks.
    fn check_copy_agreement(&self, cell: &TwentyFourCell) -> Result<(), ComplexError> {
        let lat = cell.lattice();
        for p in &self.pairs {
            let f = cell
                .facet_by_label(&p.source)
                .ok_or(ComplexError::UnknownStratum(p.source))?;
            let g = cell
                .facet_by_label(&p.target)
                .ok_or(ComplexError::UnknownStratum(p.target))?;
            for t in lat.subfaces(3, f, 2) {
                let image = lat.image_of_face(&p.map, 2, t).ok_or_else(|| {
                    ComplexError::CopyMismatch(format!("{} moves a triangle off the lattice", p.name))
                })?;
                let before = cell.opposite_color(f, t) == Some(FacetColor::Green);
                let after = cell.opposite_color(g, image) == Some(FacetColor::Green);
                if before != after {
                    return Err(ComplexError::CopyMismatch(format!(
                        "{} sends a {}green-adjacent triangle of {} to a {}green-adjacent one",
                        p.name,
                        if before { "" } else { "non-" },
                        p.source,
                        if after { "" } else { "non-" }
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Pairs the blue strata of the mirrored 24-cell.
pub fn build_r(m: &MirroredComplex, rule: &FacetPairingRule) -> Result<QuotientComplex, ComplexError> {
    let cell = m.cell();
    rule.check_involutive()?;
    let blue: BTreeSet<Label> = m
        .strata
        .iter()
        .filter(|s| s.color == FacetColor::Blue)
        .map(|s| s.label)
        .collect();
    let mut covered = BTreeSet::new();
    for p in &rule.pairs {
        for l in [p.source, p.target] {
            if !blue.contains(&l) {
                return Err(ComplexError::IncompletePairing(format!("{l} is not a blue stratum")));
            }
            if !covered.insert(l) {
                return Err(ComplexError::NonInvolutive(format!("{l} is paired more than once")));
            }
        }
    }
    if covered != blue {
        let missing: Vec<String> = blue.difference(&covered).map(Label::to_string).collect();
        return Err(ComplexError::IncompletePairing(format!(
            "unpaired blue strata {}",
            missing.join(" ")
        )));
    }
    rule.check_copy_agreement(cell)?;
    let mut gluings = m.quotient.gluings.clone();
    gluings.extend(rule.to_gluings(cell)?);
    QuotientComplex::new(m.quotient.cell.clone(), m.quotient.orientations.clone(), gluings)
}

/// Closes up the small boundary components of `r` in pairs by
/// `K(x,y,z,w) = (-y,-x,z,w)`, leaving one boundary component.
pub fn build_x(r: &QuotientComplex) -> Result<QuotientComplex, ComplexError> {
    let k = SignedPerm::anti_swap_first_two();
    let components = boundary_components(r)?;
    let small: Vec<&BoundaryComponent> = components.iter().filter(|c| c.blocks.len() == 1).collect();
    let small_labels: BTreeSet<Label> = small.iter().map(|c| c.blocks[0].label).collect();
    let mut pairs = Vec::new();
    for comp in &small {
        let source = comp.blocks[0].label;
        let target = k.apply_to_label(&source);
        if !small_labels.contains(&target) || target == source {
            return Err(ComplexError::ClosingMismatch(format!("K sends {source} to {target}")));
        }
        let image = small
            .iter()
            .find(|c| c.blocks[0].label == target)
            .expect("target is a small component");
        check_closing_isometry(&k, comp, image)?;
        if source < target {
            pairs.push(StratumPairing {
                name: "K".into(),
                source,
                target,
                map: k,
            });
        }
    }
    let rule = FacetPairingRule {
        pairs,
        copy_rule: CopyRule::PerCopy,
    };
    rule.check_involutive()?;
    rule.check_copy_agreement(r.cell())?;
    let mut gluings = r.gluings.clone();
    gluings.extend(rule.to_gluings(r.cell())?);
    QuotientComplex::new(r.cell.clone(), r.orientations.clone(), gluings)
}

/// The closing map must carry each self-gluing of one small component onto
/// a self-gluing of its partner, compatibly on vertices.
fn check_closing_isometry(
    k: &SignedPerm,
    from: &BoundaryComponent,
    to: &BoundaryComponent,
) -> Result<(), ComplexError> {
    for g in &from.gluings {
        let t = k.apply_to_label(&g.from_triangle);
        let expected_target = k.apply_to_label(&g.to_triangle);
        let partner = to
            .gluings
            .iter()
            .find(|h| h.from_triangle == t)
            .ok_or_else(|| ComplexError::ClosingMismatch(format!("no gluing from {t}")))?;
        if partner.to_triangle != expected_target {
            return Err(ComplexError::ClosingMismatch(format!(
                "{} glues {t} to {}, K predicts {expected_target}",
                partner.map_name, partner.to_triangle
            )));
        }
        for v in triangle_vertices(&g.from_triangle) {
            if k.apply(&g.map.apply(&v)) != partner.map.apply(&k.apply(&v)) {
                return Err(ComplexError::ClosingMismatch(format!(
                    "K does not intertwine {} and {} at {v}",
                    g.map_name, partner.map_name
                )));
            }
        }
    }
    Ok(())
}

/// The three cusps on a one-zero triangle label, as vertices.
pub(crate) fn triangle_vertices(t: &Label) -> Vec<crate::exact::Vec4> {
    let support: Vec<usize> = (0..4).filter(|&i| t.entries()[i] != 0).collect();
    let mut out = Vec::new();
    for a in 0..support.len() {
        for b in a + 1..support.len() {
            let mut c = [0i64; 4];
            c[support[a]] = i64::from(t.entries()[support[a]]);
            c[support[b]] = i64::from(t.entries()[support[b]]);
            out.push(crate::exact::Vec4(c));
        }
    }
    out
}

#[cfg(test)]
mod tests;
