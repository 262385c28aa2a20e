//! Conversion between the two Fubini-Study normalizations in use.
//!
//! Computations run in the metric induced from the unit sphere of `C^{n+1}`:
//! a projective line has area `π`, diameter `π/2` and curvature `4`. Theorem
//! thresholds are stated for the metric of the curvature form, in which a line
//! has area `1`. The two differ by the constant factor `π` on the metric
//! tensor.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Scale factors taking a normalized quantity to computational units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub length: f64,
    pub area: f64,
    pub curvature: f64,
    pub eigenvalue: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::standard()
    }
}

impl UnitSystem {
    pub fn standard() -> Self {
        Self {
            length: PI.sqrt(),
            area: PI,
            curvature: 1.0 / PI,
            eigenvalue: 1.0 / PI,
        }
    }

    pub fn length_to_normalized(&self, v: f64) -> f64 {
        v / self.length
    }
    pub fn length_to_comp(&self, v: f64) -> f64 {
        v * self.length
    }
    pub fn area_to_normalized(&self, v: f64) -> f64 {
        v / self.area
    }
    pub fn area_to_comp(&self, v: f64) -> f64 {
        v * self.area
    }
    pub fn curvature_to_normalized(&self, v: f64) -> f64 {
        v / self.curvature
    }
    pub fn curvature_to_comp(&self, v: f64) -> f64 {
        v * self.curvature
    }
    pub fn eigenvalue_to_normalized(&self, v: f64) -> f64 {
        v / self.eigenvalue
    }
    pub fn eigenvalue_to_comp(&self, v: f64) -> f64 {
        v * self.eigenvalue
    }
}
