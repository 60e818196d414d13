//! Growth exponents and entropy for affine isometric actions given by their
//! cocycle growth data.
//!
//! The central object is the [`GrowthProfile`]: for each cutoff `s`, the mass
//! of group elements whose cocycle norm stays at or below `s`. Two exponents
//! are read off it: the Poincare exponent
//!
//! ```text
//! delta = limsup_s log |{g : |c_g|^2 <= s}| / s,
//! ```
//!
//! which drives the dissipativity window of the scaled Gaussian action in the
//! scale parameter `t`, and the polynomial exponent
//! `log lambda{|c(g)| <= s} / log s`, which separates conservative from
//! dissipative skew products. Free groups supply the worked model: the word
//! metric has `|c_g|^2 = |g|`, every exponent reduces to radial counts, and
//! the radial dynamic program gives the entropy and drift of the uniform
//! random walk together with the entropy-versus-drift inequality
//! `h <= delta * |alpha|^2`. A locally finite tower construction provides the
//! opposite extreme, a cocycle with polynomial exponent ~0 whose skew product
//! is dissipative.

pub mod embed;
pub mod error;
pub mod free_group;
pub mod profile;
pub mod radial;
pub mod tower;

pub use embed::{edge_indicator_validation, EdgeIndicatorCheck};
pub use error::{GrowthError, Result};
pub use free_group::{
    koopman_l2_report, koopman_partial_sums, tdiss_window, FreeGroupModel, KoopmanReport,
    SeriesVerdict, TdissWindow,
};
pub use profile::{
    poincare_exponent, skew_delta, DeltaVerdict, GrowthProfile, PoincareReport, ProfileKind,
    SkewDeltaReport, WindowQuotient, DELTA_MARGIN, POINCARE_TAIL_WINDOWS,
};
pub use radial::{
    guivarch_check, guivarch_fixed_point, radial_entropy_drift, EntropyDriftPoint, GuivarchReport,
    RadialWalk, GUIVARCH_TOL, MAX_STEPS,
};
pub use tower::{doubling_tower_sizes, locally_finite_cocycle, TowerReport, MAX_TOWER_LEVELS};
