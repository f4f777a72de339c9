//! Resonant vector fields in the Poincaré domain: exact and floating-point
//! polynomial algebra, resonance enumeration, versal deformations,
//! Poincaré–Dulac normalization, flows and cohomology probes.
//!
//! Every computation is generic over a [`Scalar`]: [`GaussianRational`] for
//! exact rational arithmetic or [`Complex64`] for floating point.

pub mod error;
pub mod flow;
pub mod hull;
pub mod laurent;
pub mod linalg;
pub mod multi_index;
pub mod normal_form;
pub mod operator;
pub mod poly;
pub mod poly_map;
pub mod probe;
pub mod resonance;
pub mod scalar;
pub mod scan;
pub mod versal;

pub use error::{Error, Result};
pub use flow::{closed_form_flow, numeric_flow, predicted_degrees, FlowSolution};
pub use laurent::{LaurentBox, LaurentFunction, LaurentVectorField};
pub use linalg::RankReport;
pub use multi_index::MultiIndex;
pub use normal_form::{
    conjugacy_residual, homological_solve, poincare_dulac_normalize, rescale_coefficients, rescale_exponent,
    NormalFormResult,
};
pub use num_complex::Complex64;
pub use operator::OperatorMatrix;
pub use poly::{lie_derivative_field, lie_derivative_function, multiply_function_field, PolyFunction, PolyVectorField};
pub use poly_map::{compose_truncated, invert_truncated, pushforward_truncated, PolyMap};
pub use probe::{gperp_injectivity, h0_sigma_structure, neg_laurent_matrix_sigma, neg_laurent_matrix_theta};
pub use resonance::{
    enumerate_resonances, poincare_check, poincare_dulac_support, resonance_bound, resonant_basis, split_resonant,
    PoincareCertificate, Resonance, ResonantBasis, Spectrum,
};
pub use scalar::{GaussianRational, Scalar};
pub use scan::{perturbation_safety_scan, transversality_scan, TransversalityReport};
pub use versal::{commuting_kernel, direct_sum_check, kodaira_spencer_class, l_xi_matrix_on_g, versal_space, VersalResult};
