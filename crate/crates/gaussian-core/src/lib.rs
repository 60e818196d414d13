//! Finite-dimensional Gaussian probability spaces and the operators attached
//! to them: translation densities, coherent vectors with their operator
//! algebra (phase dilations, modulations, translations, contraction
//! channels), Maharam extensions, heat-kernel smoothing on the line, and the
//! rotation conjugacy between product actions and skew products.
//!
//! Everything here works on explicit truncations: a Gaussian space is
//! `R^d` with the standard Gaussian measure, and all closed forms are exact
//! identities at that level, checked against Monte-Carlo oracles in the
//! test suite.

mod coherent;
mod contraction;
mod convolve;
mod error;
mod gaussian;
mod maharam;
mod rng;
mod vector;
mod zaction;

pub use coherent::{coherent_apply, coherent_inner, CoherentOp, CoherentVector};
pub use contraction::{contraction_channel_mc, psd_sqrt, Contraction};
pub use convolve::{gauss_convolve, GriddedFunction};
pub use error::{GaussError, Result};
pub use gaussian::{
    characteristic_check, log_rn_translation, sample_gaussian, standard_normal_vector,
    CharacteristicCheck,
};
pub use maharam::{maharam_invariance_mc, maharam_translate, InvarianceCheck, MaharamPoint};
pub use rng::{mc_over_substreams, mc_over_substreams_vec, stream_rng, McAccumulator, McEstimate, SUBSTREAMS};
pub use vector::RealVector;
pub use zaction::{
    apply_scaled, maharam_step as maharam_action_step, rn_log_scaled, rotation_conjugacy_check,
    ZAffineAction,
};
