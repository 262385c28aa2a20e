//! Metric and spectral observables of the zero curve, and the deterministic
//! bound formulas they are compared against.
//!
//! Every length, area, curvature and eigenvalue here is in computational
//! units (a line has area `π`); [`crate::UnitSystem`] converts to normalized units (line area 1).

pub mod bounds;
pub mod curvature;
pub mod diameter;
pub mod discriminant;
pub mod graph;
pub mod metric;
pub mod spectral;
pub mod systole;

pub use bounds::{eig_lower_bound, graph_radius, inj_lower_bound, predicted_scales, GraphRadiusInputs, PredictedScales};
pub use curvature::{
    curvature_samples, gauss_curvature_analytic, gauss_curvature_discrete, total_curvature, total_curvature_analytic, CurvatureSample,
};
pub use diameter::{diameter, diameter_estimate, DiameterEstimate};
pub use discriminant::{distance_to_discriminant, distance_to_discriminant_report, DiscriminantDistance};
pub use metric::{area, fs_distance, sigma_min_distance};
pub use spectral::spectral_gap;
pub use systole::{homology_systole, systole, SystoleLoop};
