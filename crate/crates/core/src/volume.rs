//! Volumes as exact cell counts with a numeric rendering.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

/// Volume of the regular ideal hyperbolic octahedron, `8 Л(π/4)`
/// (four times Catalan's constant).
pub const V_OCTAHEDRON: f64 = 3.663_862_376_708_876;

/// Volume of the regular ideal hyperbolic 24-cell, `4π²/3`.
pub const V_24CELL: f64 = 4.0 * PI * PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "cells", content = "count", rename_all = "snake_case")]
pub enum Volume {
    Octahedra(usize),
    TwentyFourCells(usize),
}

impl Volume {
    pub fn numeric(&self) -> f64 {
        match *self {
            Volume::Octahedra(n) => n as f64 * V_OCTAHEDRON,
            Volume::TwentyFourCells(n) => n as f64 * V_24CELL,
        }
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Volume::Octahedra(n) => write!(f, "{n} × v_O ≈ {:.4}", self.numeric()),
            Volume::TwentyFourCells(n) => write!(f, "{n} × v_24 ≈ {:.4}", self.numeric()),
        }
    }
}
