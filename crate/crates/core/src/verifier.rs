//! The end-to-end pipeline and its report.
//!
//! Stages run upstream to downstream: 24-cell, mirrored complex, pairing,
//! boundary components, their triangulations, closing map. Every check is
//! recorded in a fixed order; a construction error in one stage fails every
//! check that depends on it instead of aborting the run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{
    boundary_components, build_mirrored, build_r, build_x, cusp_shapes, extract_triangulation, BoundaryComponent,
    FacetPairingRule, MirroredComplex, QuotientComplex,
};
use crate::exact::{hyperoctahedral_group, label, Label, SignedPerm};
use crate::polytope::{build_24cell, FacetColor, TwentyFourCell};
use crate::triangulation::{
    check_orientable, doubled_tetrahedron, edge_classes, isomorphic, large_boundary_figure, mt_invariants,
    small_cusp_edges, Triangulation,
};
use crate::volume::{Volume, V_24CELL, V_OCTAHEDRON};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{0}")]
    Stage(String),
    #[error("unknown triangulation selector {0:?} (expected large, small or example-doubled)")]
    UnknownSelector(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One row of the check table: id, acceptance criterion, claim.
pub struct CheckSpec {
    pub id: &'static str,
    pub criterion: Option<u8>,
    pub claim: &'static str,
}

pub const CHECKS: &[CheckSpec] = &[
    CheckSpec {
        id: "polytope.f_vector",
        criterion: Some(1),
        claim: "24-cell has 24 vertices, 96 edges, 96 triangles, 24 facets",
    },
    CheckSpec {
        id: "polytope.colors",
        criterion: Some(1),
        claim: "facets split 8 red, 8 green, 8 blue",
    },
    CheckSpec {
        id: "polytope.symmetry",
        criterion: None,
        claim: "signed permutations form a group of order 384 preserving the color partition",
    },
    CheckSpec {
        id: "mirrored.strata",
        criterion: Some(2),
        claim: "mirrored 24-cell has 16 boundary 3-strata, 32 boundary 2-strata, 24 cusps",
    },
    CheckSpec {
        id: "mirrored.blocks",
        criterion: Some(2),
        claim: "each boundary 3-stratum has 4 boundary 2-strata and 6 cusps",
    },
    CheckSpec {
        id: "r.orientation",
        criterion: None,
        claim: "F and G reverse orientation in both copies",
    },
    CheckSpec {
        id: "r.cusp_orbits",
        criterion: Some(3),
        claim: "pairing leaves 10 cusps: four of size 1, two of size 2, four of size 4",
    },
    CheckSpec {
        id: "r.fixed_cusps",
        criterion: Some(3),
        claim: "the cusps fixed by the pairing are ±(+,+,0,0) and ±(0,0,+,+)",
    },
    CheckSpec {
        id: "r.cusp_shapes",
        criterion: Some(3),
        claim: "cusp sections are cylinders × circle of lengths 1, 2 and 4",
    },
    CheckSpec {
        id: "r.two_strata_killed",
        criterion: Some(4),
        claim: "every boundary 2-stratum is matched with exactly one other",
    },
    CheckSpec {
        id: "r.boundary_components",
        criterion: Some(5),
        claim: "boundary has four single-block components and one four-block component",
    },
    CheckSpec {
        id: "m.large_shape",
        criterion: Some(6),
        claim: "large component triangulation has 4 tetrahedra and is orientable",
    },
    CheckSpec {
        id: "m.large_valences",
        criterion: Some(6),
        claim: "large component edge valences are 2,2,2,2,4,4,4,4",
    },
    CheckSpec {
        id: "m.large_cusp_tori",
        criterion: Some(6),
        claim: "large component cusp tori are four 2×2 and four 4×2",
    },
    CheckSpec {
        id: "m.large_small_cusps",
        criterion: Some(6),
        claim: "valence-2 classes are the edges between faces {1,2} and {3,4}",
    },
    CheckSpec {
        id: "m.large_isomorphic",
        criterion: Some(7),
        claim: "large component triangulation is isomorphic to the reference encoding",
    },
    CheckSpec {
        id: "m.small_triangulations",
        criterion: Some(8),
        claim: "each small component is one folded tetrahedron with 3 edge classes",
    },
    CheckSpec {
        id: "volume.m",
        criterion: Some(9),
        claim: "M is 8 ideal octahedra",
    },
    CheckSpec {
        id: "volume.x",
        criterion: Some(9),
        claim: "X is 2 ideal 24-cells",
    },
    CheckSpec {
        id: "x.k_labels",
        criterion: Some(10),
        claim: "K exchanges ±(+,+,+,+) with ∓(+,+,-,-)",
    },
    CheckSpec {
        id: "x.boundary",
        criterion: Some(10),
        claim: "after closing, one boundary component of 4 blocks remains",
    },
    CheckSpec {
        id: "x.euler",
        criterion: Some(11),
        claim: "χ(X) = 2, χ(M) = 0, χ(double of X) = 4",
    },
    CheckSpec {
        id: "m.cusps",
        criterion: Some(12),
        claim: "M has 8 cusps",
    },
    CheckSpec {
        id: "pipeline.invariants",
        criterion: Some(13),
        claim: "pipeline objects satisfy the triangulation and complex invariants",
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub criterion: Option<u8>,
    pub claim: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    pub fingerprint: String,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(out, "[{tag}] {:<24} {}", c.id, c.claim);
            let _ = writeln!(out, "       expected: {}", c.expected);
            if c.status == Status::Fail || c.actual != c.expected {
                let _ = writeln!(out, "       actual:   {}", c.actual);
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{} checks: {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        let _ = writeln!(out, "fingerprint {}", self.fingerprint);
        out
    }
}

/// Deliberate corruptions for exercising failure paths.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Options {
    /// Remove every pair of the blue pairing rule carrying this map name.
    pub drop_pairing: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    Large,
    Small,
    ExampleDoubled,
}

impl FromStr for Selector {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "large" => Ok(Selector::Large),
            "small" => Ok(Selector::Small),
            "example-doubled" => Ok(Selector::ExampleDoubled),
            _ => Err(VerifyError::UnknownSelector(s.to_string())),
        }
    }
}

type Stage<T> = Result<T, String>;

fn dep<T>(s: &Stage<T>) -> Result<&T, String> {
    s.as_ref().map_err(|e| format!("upstream failure: {e}"))
}

/// The constructed objects, each possibly a failure message.
struct Built {
    cell: Stage<Arc<TwentyFourCell>>,
    mirrored: Stage<MirroredComplex>,
    r: Stage<QuotientComplex>,
    r_boundary: Stage<Vec<BoundaryComponent>>,
    large: Stage<Triangulation>,
    small: Stage<Vec<Triangulation>>,
    x: Stage<QuotientComplex>,
}

fn build(options: &Options) -> Built {
    let cell = build_24cell().map(Arc::new).map_err(|e| e.to_string());
    let mirrored = dep(&cell).and_then(|c| build_mirrored(c.clone()).map_err(|e| e.to_string()));
    let mut rule = FacetPairingRule::blue_pairing();
    if let Some(name) = &options.drop_pairing {
        rule.pairs.retain(|p| &p.name != name);
    }
    let r = dep(&mirrored).and_then(|m| build_r(m, &rule).map_err(|e| e.to_string()));
    let r_boundary = dep(&r).and_then(|q| boundary_components(q).map_err(|e| e.to_string()));
    let large = dep(&r_boundary).and_then(|cs| {
        let c = cs
            .iter()
            .find(|c| c.blocks.len() == 4)
            .ok_or("no four-block boundary component")?;
        extract_triangulation(c).map_err(|e| e.to_string())
    });
    let small = dep(&r_boundary).and_then(|cs| {
        cs.iter()
            .filter(|c| c.blocks.len() == 1)
            .map(|c| extract_triangulation(c).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()
    });
    let x = dep(&r).and_then(|q| build_x(q).map_err(|e| e.to_string()));
    Built {
        cell,
        mirrored,
        r,
        r_boundary,
        large,
        small,
        x,
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    /// Passes when `actual` renders identically to `expected`.
    fn exact(&mut self, id: &str, expected: impl Into<String>, actual: Result<String, String>) {
        let expected = expected.into();
        let pass = actual.as_ref().is_ok_and(|a| *a == expected);
        self.push(id, expected, actual, pass);
    }

    fn with(&mut self, id: &str, expected: impl Into<String>, actual: Result<(String, bool), String>) {
        let pass = actual.as_ref().is_ok_and(|(_, ok)| *ok);
        self.push(id, expected.into(), actual.map(|(a, _)| a), pass);
    }

    fn push(&mut self, id: &str, expected: String, actual: Result<String, String>, pass: bool) {
        let row = CHECKS.iter().find(|c| c.id == id).expect("check is registered");
        self.checks.push(CheckResult {
            id: id.to_string(),
            criterion: row.criterion,
            claim: row.claim.to_string(),
            expected,
            actual: actual.unwrap_or_else(|e| format!("error: {e}")),
            status: if pass { Status::Pass } else { Status::Fail },
        });
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

/// `size×count` pairs for a multiset of sizes, ascending.
fn tally(sizes: impl IntoIterator<Item = usize>) -> String {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for s in sizes {
        *counts.entry(s).or_default() += 1;
    }
    counts
        .iter()
        .map(|(s, n)| format!("{s}×{n}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn sorted_valences(t: &Triangulation) -> Result<Vec<usize>, String> {
    let mut v: Vec<usize> = edge_classes(t)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| c.valence)
        .collect();
    v.sort();
    Ok(v)
}

fn volume_check(v: Volume, count: usize, reference: f64, unit: f64) -> (String, bool) {
    let numeric = v.numeric();
    let n = match v {
        Volume::Octahedra(n) | Volume::TwentyFourCells(n) => n,
    };
    let ok = n == count && (numeric - reference).abs() < 1e-2 && (numeric - count as f64 * unit).abs() < 1e-4;
    (v.to_string(), ok)
}

pub fn run_pipeline(options: &Options) -> Report {
    let b = build(options);
    let mut rec = Recorder { checks: Vec::new() };

    rec.exact(
        "polytope.f_vector",
        "[24, 96, 96, 24]",
        dep(&b.cell).map(|c| format!("{:?}", c.lattice().f_vector())),
    );
    rec.exact(
        "polytope.colors",
        "red 8, green 8, blue 8",
        dep(&b.cell).map(|c| {
            let [r, g, bl] = c.color_counts();
            format!("red {r}, green {g}, blue {bl}")
        }),
    );
    rec.exact(
        "polytope.symmetry",
        "order 384, 384 preserve the partition, 192 fix colors",
        dep(&b.cell).map(|c| {
            let group = hyperoctahedral_group();
            let partition = group.iter().filter(|m| c.preserves_color_partition(m)).count();
            let fixing = group.iter().filter(|m| c.preserves_colors(m)).count();
            format!(
                "order {}, {partition} preserve the partition, {fixing} fix colors",
                group.len()
            )
        }),
    );

    rec.exact(
        "mirrored.strata",
        "3-strata 16, 2-strata 32, cusps 24",
        dep(&b.mirrored).map(|m| {
            format!(
                "3-strata {}, 2-strata {}, cusps {}",
                m.strata().len(),
                m.two_strata().len(),
                m.quotient().orbit_count(0)
            )
        }),
    );
    rec.exact(
        "mirrored.blocks",
        "16 × (4 2-strata, 6 cusps), each 2-stratum between red and blue",
        dep(&b.mirrored).map(|m| {
            let shapes: BTreeMap<(usize, usize), usize> = m.strata().iter().fold(BTreeMap::new(), |mut acc, s| {
                *acc.entry((s.two_strata.len(), s.cusps.len())).or_default() += 1;
                acc
            });
            let mut parts: Vec<String> = shapes
                .iter()
                .map(|((t, c), n)| format!("{n} × ({t} 2-strata, {c} cusps)"))
                .collect();
            if m.two_strata_separate_red_from_blue() {
                parts.push("each 2-stratum between red and blue".into());
            }
            parts.join(", ")
        }),
    );

    rec.exact(
        "r.orientation",
        "8 pairing gluings, all reversing",
        dep(&b.r).map(|q| {
            let pairings: Vec<_> = q.gluings().iter().filter(|g| g.name != "mirror").collect();
            let reversing = pairings
                .iter()
                .filter(|g| g.map.determinant() * q.orientations()[g.from.0] * q.orientations()[g.to.0] == -1)
                .count();
            if reversing == pairings.len() {
                format!("{} pairing gluings, all reversing", pairings.len())
            } else {
                format!("{} pairing gluings, {reversing} reversing", pairings.len())
            }
        }),
    );
    rec.exact(
        "r.cusp_orbits",
        "10 cusps: 1×4, 2×2, 4×4",
        dep(&b.r).map(|q| {
            let orbits = q.cusp_orbits();
            format!("{} cusps: {}", orbits.len(), tally(orbits.iter().map(Vec::len)))
        }),
    );
    rec.exact(
        "r.fixed_cusps",
        join(["(-,-,0,0)", "(0,0,-,-)", "(0,0,+,+)", "(+,+,0,0)"]),
        dep(&b.r).map(|q| join(q.cusp_orbits().iter().filter(|o| o.len() == 1).map(|o| o[0]))),
    );
    rec.exact(
        "r.cusp_shapes",
        "cylinder×circle lengths 1 1 1 1 2 2 4 4 4 4, width 1, circle 2",
        dep(&b.r).and_then(|q| {
            let shapes = cusp_shapes(q).map_err(|e| e.to_string())?;
            let widths: Vec<(usize, usize)> = shapes.iter().map(|s| (s.width, s.circle)).collect();
            let uniform = widths.windows(2).all(|w| w[0] == w[1]);
            let (w, c) = widths.first().copied().unwrap_or_default();
            Ok(format!(
                "cylinder×circle lengths {}, width {}, circle {}",
                join(shapes.iter().map(|s| s.length)),
                if uniform { w.to_string() } else { "mixed".into() },
                if uniform { c.to_string() } else { "mixed".into() },
            ))
        }),
    );
    rec.exact(
        "r.two_strata_killed",
        "32 2-strata in 16 orbits, all of size 2",
        dep(&b.r).map(|q| {
            let orbits = q.two_stratum_orbits();
            let total: usize = orbits.iter().map(Vec::len).sum();
            let sizes = tally(orbits.iter().map(Vec::len));
            if orbits.iter().all(|o| o.len() == 2) {
                format!("{total} 2-strata in {} orbits, all of size 2", orbits.len())
            } else {
                format!("{total} 2-strata in {} orbits, sizes {sizes}", orbits.len())
            }
        }),
    );
    rec.exact(
        "r.boundary_components",
        "{(-,-,-,-)} {(-,-,+,+)} {(+,+,-,-)} {(+,+,+,+)} {(-,+,-,+) (-,+,+,-) (+,-,-,+) (+,-,+,-)}",
        dep(&b.r_boundary).map(|cs| join(cs.iter().map(|c| format!("{{{}}}", join(c.labels()))))),
    );

    rec.exact(
        "m.large_shape",
        "4 tetrahedra, 8 gluings, orientable",
        dep(&b.large).map(|t| {
            format!(
                "{} tetrahedra, {} gluings, {}",
                t.size(),
                t.pairings().len(),
                if check_orientable(t).is_some() {
                    "orientable"
                } else {
                    "non-orientable"
                }
            )
        }),
    );
    rec.exact(
        "m.large_valences",
        "[2, 2, 2, 2, 4, 4, 4, 4]",
        dep(&b.large).and_then(|t| sorted_valences(t).map(|v| format!("{v:?}"))),
    );
    rec.exact(
        "m.large_cusp_tori",
        "2×2 ×4, 4×2 ×4",
        dep(&b.large).and_then(|t| {
            let inv = mt_invariants(t).map_err(|e| e.to_string())?;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for torus in &inv.cusp_tori {
                *counts.entry(torus.to_string()).or_default() += 1;
            }
            Ok(counts
                .iter()
                .map(|(s, n)| format!("{s} ×{n}"))
                .collect::<Vec<_>>()
                .join(", "))
        }),
    );
    rec.exact(
        "m.large_small_cusps",
        "4 classes, all of valence 2",
        dep(&b.large).and_then(|t| {
            let found = small_cusp_edges(t).map_err(|e| e.to_string())?;
            let classes = edge_classes(t).map_err(|e| e.to_string())?;
            let all_two = found.iter().all(|&c| classes[c].valence == 2);
            Ok(format!(
                "{} classes, {}",
                found.len(),
                if all_two {
                    "all of valence 2"
                } else {
                    "not all of valence 2"
                }
            ))
        }),
    );
    rec.exact(
        "m.large_isomorphic",
        "witness found",
        dep(&b.large).map(|t| {
            let reference = large_boundary_figure();
            match isomorphic(t, &reference) {
                Some(iso) if iso.verify(t, &reference) => "witness found".to_string(),
                Some(_) => "witness fails verification".to_string(),
                None => "no isomorphism".to_string(),
            }
        }),
    );
    rec.exact(
        "m.small_triangulations",
        "4 × (1 tetrahedron, 2 gluings, valences [1, 1, 4])",
        dep(&b.small).and_then(|ts| {
            let rows = ts
                .iter()
                .map(|t| {
                    Ok(format!(
                        "{} tetrahedron, {} gluings, valences {:?}",
                        t.size(),
                        t.pairings().len(),
                        sorted_valences(t)?
                    ))
                })
                .collect::<Result<Vec<String>, String>>()?;
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for r in rows {
                *counts.entry(r).or_default() += 1;
            }
            Ok(counts
                .iter()
                .map(|(r, n)| format!("{n} × ({r})"))
                .collect::<Vec<_>>()
                .join(", "))
        }),
    );

    rec.with(
        "volume.m",
        "M = 8 × v_O ≈ 29.3109",
        dep(&b.r_boundary).map(|cs| {
            let blocks = cs.iter().find(|c| c.blocks.len() == 4).map_or(0, |c| c.blocks.len());
            let (text, ok) = volume_check(Volume::Octahedra(2 * blocks), 8, 29.311, V_OCTAHEDRON);
            (format!("M = {text}"), ok)
        }),
    );
    rec.with(
        "volume.x",
        "X = 2 × v_24 ≈ 26.3189",
        dep(&b.x).map(|x| {
            let (text, ok) = volume_check(x.volume(), 2, 8.0 * std::f64::consts::PI.powi(2) / 3.0, V_24CELL);
            (format!("X = {text}"), ok)
        }),
    );

    rec.exact(
        "x.k_labels",
        "(+,+,+,+)↦(-,-,+,+) (-,-,-,-)↦(+,+,-,-) (+,+,-,-)↦(-,-,-,-) (-,-,+,+)↦(+,+,+,+)",
        Ok({
            let k = SignedPerm::anti_swap_first_two();
            join(["++++", "----", "++--", "--++"].map(|s| format!("{}↦{}", label(s), k.apply_to_label(&label(s)))))
        }),
    );
    rec.exact(
        "x.boundary",
        "1 component: (-,+,-,+) (-,+,+,-) (+,-,-,+) (+,-,+,-)",
        dep(&b.x).and_then(|x| {
            let cs = boundary_components(x).map_err(|e| e.to_string())?;
            Ok(format!(
                "{} component{}: {}",
                cs.len(),
                if cs.len() == 1 { "" } else { "s" },
                join(cs.iter().map(|c| join(c.labels())))
            ))
        }),
    );
    rec.exact(
        "x.euler",
        "χ(X) = 2, χ(M) = 0, χ(DX) = 4",
        dep(&b.x).and_then(|x| {
            let d = x.double().map_err(|e| e.to_string())?;
            Ok(format!(
                "χ(X) = {}, χ(M) = {}, χ(DX) = {}",
                x.euler_characteristic(),
                x.boundary_euler_characteristic(),
                d.euler_characteristic()
            ))
        }),
    );
    rec.exact(
        "m.cusps",
        "8",
        dep(&b.large).and_then(|t| {
            mt_invariants(t)
                .map(|i| i.cusp_count.to_string())
                .map_err(|e| e.to_string())
        }),
    );
    rec.exact(
        "pipeline.invariants",
        "all hold",
        pipeline_invariants(&b).map(|()| "all hold".to_string()),
    );

    let passed = rec.checks.iter().filter(|c| c.status == Status::Pass).count();
    let summary = Summary {
        total: rec.checks.len(),
        passed,
        failed: rec.checks.len() - passed,
    };
    let fingerprint = fingerprint(&b);
    Report {
        checks: rec.checks,
        summary,
        fingerprint,
    }
}

/// Cross-module invariants over the constructed objects.
fn pipeline_invariants(b: &Built) -> Result<(), String> {
    let mut triangulations: Vec<&Triangulation> = vec![dep(&b.large)?];
    triangulations.extend(dep(&b.small)?.iter());
    let doubled = doubled_tetrahedron();
    triangulations.push(&doubled);
    for t in triangulations {
        let valences: usize = edge_classes(t)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| c.valence)
            .sum();
        if valences != 6 * t.size() {
            return Err(format!("valence sum {valences} for {} tetrahedra", t.size()));
        }
        if check_orientable(t).is_none() {
            return Err("extracted triangulation is not orientable".into());
        }
        let reparsed = Triangulation::from_text(&t.to_text()).map_err(|e| e.to_string())?;
        if isomorphic(t, &reparsed).is_none() {
            return Err("text round trip changed the triangulation".into());
        }
    }
    let cs = dep(&b.r_boundary)?;
    let reds: Vec<Label> = {
        let cell = dep(&b.cell)?;
        let mut v: Vec<Label> = cell
            .facets_of_color(FacetColor::Red)
            .into_iter()
            .map(|f| cell.facet_label(f))
            .collect();
        v.sort();
        v
    };
    let mut covered: Vec<Label> = cs.iter().flat_map(|c| c.labels()).collect();
    covered.sort();
    if covered != reds {
        return Err("boundary components do not partition the red strata".into());
    }
    let octahedra: usize = cs
        .iter()
        .map(|c| match c.volume() {
            Volume::Octahedra(n) => n,
            Volume::TwentyFourCells(_) => 0,
        })
        .sum();
    if octahedra != 16 {
        return Err(format!("boundary has {octahedra} octahedra"));
    }
    Ok(())
}

fn fingerprint(b: &Built) -> String {
    let mut h = Sha256::new();
    for (name, part) in [
        ("mirrored", b.mirrored.as_ref().map(|m| m.quotient().fingerprint())),
        ("r", b.r.as_ref().map(QuotientComplex::fingerprint)),
        ("x", b.x.as_ref().map(QuotientComplex::fingerprint)),
        ("large", b.large.as_ref().map(Triangulation::to_text)),
    ] {
        h.update(name);
        h.update(part.unwrap_or_else(|e| format!("failed: {e}")));
    }
    hex::encode(h.finalize())
}

/// Builds the requested triangulation from the pipeline.
pub fn pipeline_triangulation(which: Selector) -> Result<Triangulation, VerifyError> {
    if which == Selector::ExampleDoubled {
        return Ok(doubled_tetrahedron());
    }
    let b = build(&Options::default());
    match which {
        Selector::Large => b.large.map_err(VerifyError::Stage),
        Selector::Small => b
            .small
            .map_err(VerifyError::Stage)?
            .into_iter()
            .next()
            .ok_or_else(|| VerifyError::Stage("no small component".into())),
        Selector::ExampleDoubled => unreachable!(),
    }
}

pub fn export_triangulation(which: Selector, path: &Path) -> Result<(), VerifyError> {
    let t = pipeline_triangulation(which)?;
    std::fs::write(path, t.to_text()).map_err(|source| VerifyError::Io {
        path: path.display().to_string(),
        source,
    })
}
