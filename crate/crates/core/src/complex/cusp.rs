//! Cusp cross-sections: squares of red/blue sides, glued along blue sides.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{mismatch, ComplexError, QuotientComplex};
use crate::exact::{Label, SignedPerm};
use crate::polytope::{shared_2face, FacetColor, TwentyFourCell};
use crate::union_find::UnionFind;

/// Length of the circle factor of every cusp section, in square-side units.
pub const CIRCLE_LENGTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SquareSide {
    pub facet: Label,
    pub color: FacetColor,
}

/// Cyclic sides start at the largest red facet, then the larger adjacent blue;
/// `corners[i]` lies between `sides[i]` and `sides[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspSquare {
    pub cusp: Label,
    pub sides: [SquareSide; 4],
    pub corners: [Label; 4],
}

impl CuspSquare {
    pub fn side_index(&self, facet: &Label) -> Option<usize> {
        self.sides.iter().position(|s| s.facet == *facet)
    }

    pub fn sides_of_color(&self, c: FacetColor) -> Vec<Label> {
        self.sides.iter().filter(|s| s.color == c).map(|s| s.facet).collect()
    }
}

pub fn cusp_square(cell: &TwentyFourCell, v: &Label) -> Result<CuspSquare, ComplexError> {
    if v.zero_count() != 2 {
        return Err(ComplexError::MalformedLabel(
            v.to_string(),
            "a cusp label has exactly two zeros".into(),
        ));
    }
    let vi = cell
        .vertex_by_label(v)
        .ok_or_else(|| ComplexError::MalformedLabel(v.to_string(), "not a vertex".into()))?;
    let lat = cell.lattice();
    let mut around: Vec<(Label, FacetColor)> = (0..lat.facets().len())
        .filter(|&f| cell.facet_color(f) != FacetColor::Green && lat.facets()[f].vertices.contains(&vi))
        .map(|f| (cell.facet_label(f), cell.facet_color(f)))
        .collect();
    if around.len() != 4 || around.iter().any(|(l, _)| !v.refines_into(l)) {
        return Err(mismatch(&format!("red/blue facets at {v}"), 4, around.len()));
    }
    around.sort();
    let adjacent = |a: &Label, b: &Label| shared_2face(a, b).is_some_and(|t| v.refines_into(&t));
    let start = *around
        .iter()
        .rev()
        .find(|(_, c)| *c == FacetColor::Red)
        .ok_or_else(|| mismatch(&format!("red sides at {v}"), 2, 0))?;
    let mut sides = vec![start];
    while sides.len() < 4 {
        let last = sides[sides.len() - 1];
        let next = around
            .iter()
            .rev()
            .find(|s| !sides.contains(s) && s.1 != last.1 && adjacent(&s.0, &last.0))
            .copied()
            .ok_or_else(|| mismatch(&format!("cycle of sides at {v}"), 4, sides.len()))?;
        sides.push(next);
    }
    if !adjacent(&sides[3].0, &sides[0].0) {
        return Err(mismatch(&format!("square at {v}"), "closed cycle", "open path"));
    }
    let sides: [SquareSide; 4] = std::array::from_fn(|i| SquareSide {
        facet: sides[i].0,
        color: sides[i].1,
    });
    let corners =
        std::array::from_fn(|i| shared_2face(&sides[i].facet, &sides[(i + 1) % 4].facet).expect("adjacent sides meet"));
    Ok(CuspSquare {
        cusp: *v,
        sides,
        corners,
    })
}

/// Index of the corner shared by adjacent sides `a` and `b`.
fn corner_between(a: usize, b: usize) -> usize {
    if b == (a + 1) % 4 {
        a
    } else {
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspKind {
    CylinderTimesCircle,
    Torus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspShape {
    pub cusps: Vec<Label>,
    pub kind: CuspKind,
    pub length: usize,
    pub width: usize,
    pub circle: usize,
}

/// Glues the cusp squares of a per-copy pairing along their blue sides and
/// classifies each connected piece.
pub fn cusp_shapes(q: &QuotientComplex) -> Result<Vec<CuspShape>, ComplexError> {
    let cell = q.cell();
    let lat = cell.lattice();
    let mut pairing: BTreeMap<Label, (SignedPerm, Label)> = BTreeMap::new();
    for f in 0..lat.facets().len() {
        let here = q.pairing_at(0, f);
        for c in 1..q.copies() {
            let there = q.pairing_at(c, f).map(|(m, tc, tf, n)| (m, tc - c, tf, n));
            if here != there {
                return Err(ComplexError::CuspGluing(format!(
                    "facet {} is paired differently in copy {}; the section is not a product",
                    cell.facet_label(f),
                    c + 1
                )));
            }
        }
        if let Some((m, 0, target, _)) = here {
            pairing.insert(cell.facet_label(f), (m, cell.facet_label(target)));
        }
    }

    let squares: Vec<CuspSquare> = (0..lat.vertices().len())
        .map(|v| cusp_square(cell, &cell.vertex_label(v)))
        .collect::<Result<_, _>>()?;
    let index: BTreeMap<Label, usize> = squares.iter().enumerate().map(|(i, s)| (s.cusp, i)).collect();

    // Nodes: (square, side) pairs; blue sides must pair off perfectly.
    let mut partner: BTreeMap<(usize, usize), (usize, usize, SignedPerm)> = BTreeMap::new();
    for (i, sq) in squares.iter().enumerate() {
        for (s, side) in sq.sides.iter().enumerate() {
            if side.color != FacetColor::Blue {
                continue;
            }
            let (m, target) = *pairing.get(&side.facet).ok_or_else(|| {
                ComplexError::CuspGluing(format!("blue side {} of {} is unmatched", side.facet, sq.cusp))
            })?;
            let j = index[&m.apply_to_label(&sq.cusp)];
            let t = squares[j]
                .side_index(&target)
                .ok_or_else(|| ComplexError::CuspGluing(format!("{} has no side {target}", squares[j].cusp)))?;
            if squares[j].sides[t].color != FacetColor::Blue || partner.insert((i, s), (j, t, m)).is_some() {
                return Err(ComplexError::CuspGluing(format!(
                    "blue side {} of {} is matched twice",
                    side.facet, sq.cusp
                )));
            }
        }
    }
    for (&(i, s), &(j, t, _)) in &partner {
        if partner.get(&(j, t)).map(|p| (p.0, p.1)) != Some((i, s)) {
            return Err(ComplexError::CuspGluing(format!(
                "side {} of {} is not matched back",
                squares[i].sides[s].facet, squares[i].cusp
            )));
        }
    }

    let mut components = UnionFind::new(squares.len());
    // Corner points and red sides, glued through the blue-side matchings.
    let mut corners = UnionFind::new(squares.len() * 4);
    let mut reds = UnionFind::new(squares.len() * 4);
    for (&(i, s), &(j, t, m)) in &partner {
        components.union(i, j);
        for neighbour in [(s + 3) % 4, (s + 1) % 4] {
            let corner = corner_between(s, neighbour);
            let red = squares[i].sides[neighbour].facet;
            let tn = squares[j]
                .side_index(&m.apply_to_label(&red))
                .filter(|&tn| squares[j].sides[tn].color == FacetColor::Red && (tn == (t + 1) % 4 || tn == (t + 3) % 4))
                .ok_or_else(|| {
                    ComplexError::CuspGluing(format!(
                        "red side {red} of {} has no matching neighbour",
                        squares[i].cusp
                    ))
                })?;
            let image_corner = corner_between(t, tn);
            if m.apply_to_label(&squares[i].corners[corner]) != squares[j].corners[image_corner] {
                return Err(ComplexError::CuspGluing(format!(
                    "corner {} of {} is misplaced",
                    squares[i].corners[corner], squares[i].cusp
                )));
            }
            corners.union(i * 4 + corner, j * 4 + image_corner);
            reds.union(i * 4 + neighbour, j * 4 + tn);
        }
    }

    let mut shapes = Vec::new();
    for class in components.classes() {
        let k = class.len();
        let members: BTreeSet<usize> = class.iter().copied().collect();
        let vertex_classes: BTreeSet<usize> = members
            .iter()
            .flat_map(|&i| (0..4).map(move |c| i * 4 + c))
            .map(|n| corners.find(n))
            .collect();
        let circles: BTreeSet<usize> = members
            .iter()
            .flat_map(|&i| (0..4).map(move |s| (i, s)))
            .filter(|&(i, s)| squares[i].sides[s].color == FacetColor::Red)
            .map(|(i, s)| reds.find(i * 4 + s))
            .collect();
        let faces = k as i64;
        let edges = (2 * k + k) as i64;
        let chi = vertex_classes.len() as i64 - edges + faces;
        let circle_lengths: Vec<usize> = circles
            .iter()
            .map(|&c| {
                members
                    .iter()
                    .flat_map(|&i| (0..4).map(move |s| i * 4 + s))
                    .filter(|&n| reds.find(n) == c)
                    .count()
            })
            .collect();
        let cusps: Vec<Label> = class.iter().map(|&i| squares[i].cusp).collect();
        if chi != 0 || circles.len() != 2 || circle_lengths.iter().any(|&l| l != k) {
            return Err(ComplexError::CuspGluing(format!(
                "cusps {} glue to a surface with χ = {chi} and {} boundary circles",
                cusps.iter().map(Label::to_string).collect::<Vec<_>>().join(" "),
                circles.len()
            )));
        }
        shapes.push(CuspShape {
            cusps,
            kind: CuspKind::CylinderTimesCircle,
            length: k,
            width: 1,
            circle: CIRCLE_LENGTH,
        });
    }

    let orbits = q.cusp_orbits();
    let mut from_squares: Vec<Vec<Label>> = shapes.iter().map(|s| s.cusps.clone()).collect();
    from_squares.sort();
    if from_squares != orbits {
        return Err(ComplexError::CuspGluing(
            "square components disagree with cusp classes of the complex".into(),
        ));
    }
    shapes.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.cusps.cmp(&b.cusps)));
    Ok(shapes)
}
