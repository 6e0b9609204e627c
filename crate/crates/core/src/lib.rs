//! Computations with Margulis spacetimes: Lorentzian isometries and their
//! Margulis invariants, crooked planes, Drumm's construction of crooked
//! fundamental domains, strip deformations and deformation-cone plots.
//!
//! Vectors of R^{2,1} are [`MinkVec`]s in the basis `(x1, x2, x3)` of
//! sl(2,R); see [`lorentz`] for the conventions shared by every module.

pub mod crooked;
pub mod deformation;
pub mod error;
pub mod freegroup;
pub mod isometry;
pub mod lorentz;
pub mod schottky;
pub mod strips;

pub use crooked::{
    ch_contains, crooked_disjoint, halfplanes_disjoint, map_halfspace, stem_quadrant,
    CrookedHalfspace, Membership, OrientedGeodesic, StemQuadrantCone,
};
pub use deformation::{
    alpha_covector, cone_plot, h1_chart, length_derivative, sign_report, spectrum_scan,
    ChartChoice, Conclusion, ConePlot, ConePlotOptions, GradCheck, H1Chart, SignReport,
    SignVerdict, SpectrumEntry, SpectrumScan, WordFamily,
};
pub use error::{Error, Result};
pub use freegroup::{
    christoffel_primitive, enumerate_classes, eval_affine, eval_linear, primitive_classes,
    Cocycle, FreeWord,
};
pub use isometry::{
    adjoint_rep, affine_axis, classify_iso, epsilon_measures, hyperbolic_data, margulis_alpha,
    translation_length, AffineIso, EpsilonMeasures, HyperbolicData, IsoClass, LinearIso,
};
pub use lorentz::{
    bracket_cross, causal_classify, minkowski_dot, orientation_sign, uhp_embed, CausalClass,
    MinkVec,
};
pub use schottky::{
    drumm_construct, pingpong_certify, schottky_check, Certificate, DrummResult, PingPongFailure,
    SchottkyData,
};
pub use strips::{
    arc_crooked_planes, nesting_check, strip_cocycle, ArcRef, SidePairedDomain, StripData,
};
