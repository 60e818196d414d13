use cantor_spectral::{correlation, truncate_to_spectral, CertificateReport, PSequence, Verdict};

use crate::action::AffineZAction;
use crate::error::{DynError, Result};

/// Calibration thresholds for the liminf evidence: the verdict describes
/// the sampled range only. `Holds` means the running minimum of the
/// criterion value dropped below `HOLDS_BELOW` somewhere before the cutoff;
/// `Fails` means it stayed at or above `FAILS_ABOVE` everywhere.
pub const HOLDS_BELOW: f64 = 0.05;
pub const FAILS_ABOVE: f64 = 0.5;

/// Spectral data of an integer action sampled on `0..=a_max`:
/// `correlations[k] = <pi(k) 1, 1>` and `cocycle_norms_sq[k] = ||c_k||^2`
/// (both are even in `k`, so one side suffices).
#[derive(Clone, Debug)]
pub struct ZCriterionData {
    pub correlations: Vec<f64>,
    pub cocycle_norms_sq: Vec<f64>,
}

impl ZCriterionData {
    /// Builds the data for a ternary Cantor measure: correlations from the
    /// digit-product closed form over `terms` factors, cocycle norms from
    /// the level-`level` truncated action's per-block closed form.
    pub fn from_cantor(p: &PSequence, a_max: i64, terms: u64, level: u32) -> Result<Self> {
        if a_max < 1 {
            return Err(DynError::InvalidParameter {
                name: "a_max",
                reason: format!("must be >= 1, got {a_max}"),
            });
        }
        let action = AffineZAction::from_spectral(&truncate_to_spectral(p, level)?, 1.0)?;
        let mut correlations = Vec::with_capacity(a_max as usize + 1);
        let mut cocycle_norms_sq = Vec::with_capacity(a_max as usize + 1);
        for k in 0..=a_max {
            // corr(0) is the total mass of the probability measure.
            let corr = if k == 0 {
                1.0
            } else {
                correlation(p, k, terms)?.value
            };
            correlations.push(corr);
            cocycle_norms_sq.push(action.cocycle_norm_sq(k)?);
        }
        Ok(Self {
            correlations,
            cocycle_norms_sq,
        })
    }
}

fn verdict_from_min(min: f64) -> Verdict {
    if min <= HOLDS_BELOW {
        Verdict::Holds
    } else if min >= FAILS_ABOVE {
        Verdict::Fails
    } else {
        Verdict::UndeterminedAtCutoff
    }
}

fn check_eps_kappa(eps: f64, kappa: f64) -> Result<()> {
    if !(eps.is_finite() && 0.0 < eps && eps < 1.0) {
        return Err(DynError::InvalidParameter {
            name: "eps",
            reason: format!("must lie in (0, 1), got {eps}"),
        });
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(DynError::InvalidParameter {
            name: "kappa",
            reason: format!("must be positive, got {kappa}"),
        });
    }
    Ok(())
}

/// The integer-action ergodicity-criterion functional
///
/// ```text
/// E(a) = |{k in [-a, a] : |corr(k)| >= eps}| / (2a + 1)
///        * max { exp(kappa ||c_k||^2) : |k| <= a },
/// ```
///
/// reported for every `a` up to the data cutoff together with its running
/// minimum. A small value somewhere is liminf-type evidence the criterion
/// holds; staying large through the cutoff is evidence it fails there.
/// Verdicts are statements about the sampled range, never asymptotics.
pub fn criterion_z(data: &ZCriterionData, eps: f64, kappa: f64) -> Result<CertificateReport> {
    check_eps_kappa(eps, kappa)?;
    let len = data.correlations.len();
    if len != data.cocycle_norms_sq.len() || len < 2 {
        return Err(DynError::InvalidParameter {
            name: "data",
            reason: format!(
                "need matching correlation/norm tables of length >= 2, got {len} and {}",
                data.cocycle_norms_sq.len()
            ),
        });
    }
    if data
        .correlations
        .iter()
        .chain(&data.cocycle_norms_sq)
        .any(|v| !v.is_finite())
    {
        return Err(DynError::InvalidParameter {
            name: "data",
            reason: "non-finite entry".into(),
        });
    }
    let a_max = len - 1;
    let mut count = u64::from(data.correlations[0].abs() >= eps);
    let mut max_norm_sq = data.cocycle_norms_sq[0];
    let mut series = Vec::with_capacity(a_max);
    let mut min = f64::INFINITY;
    for a in 1..=a_max {
        if data.correlations[a].abs() >= eps {
            count += 2;
        }
        max_norm_sq = max_norm_sq.max(data.cocycle_norms_sq[a]);
        let frac = count as f64 / (2 * a + 1) as f64;
        let value = if frac == 0.0 {
            0.0
        } else {
            frac * (kappa * max_norm_sq).exp()
        };
        min = min.min(value);
        series.push((a as u64, value));
    }
    Ok(CertificateReport {
        name: "integer-criterion".into(),
        series,
        verdict: verdict_from_min(min),
        cutoff: a_max as u64,
        diagnostic: format!(
            "pair density of |corr| >= {eps} times max exp({kappa} ||c||^2): running minimum \
             {min:.6e} by a = {a_max}; holds-below {HOLDS_BELOW}, fails-above {FAILS_ABOVE}, \
             read at the cutoff only"
        ),
    })
}

/// Witness radii `(n, (3^n - 1)/2)` along which the sparse-square analysis
/// predicts the criterion value eventually decays: indices `n >= 2` with
/// `p_n <= 1 - delta`, taken at least two apart.
///
/// The decay sets in only once enough witnesses have accumulated, far past
/// desk-scale radii; at reachable cutoffs the honest outcome is that the
/// criterion value has not yet started to drop along these radii.
pub fn qualifying_witnesses(p: &PSequence, delta: f64, a_max: i64) -> Result<Vec<(u64, i64)>> {
    if !(delta.is_finite() && 0.0 < delta && delta < 1.0) {
        return Err(DynError::InvalidParameter {
            name: "delta",
            reason: format!("must lie in (0, 1), got {delta}"),
        });
    }
    if a_max < 1 {
        return Err(DynError::InvalidParameter {
            name: "a_max",
            reason: format!("must be >= 1, got {a_max}"),
        });
    }
    let mut out = Vec::new();
    let mut last: Option<u64> = None;
    for n in 2..=39u64 {
        let radius = (3i64.pow(n as u32) - 1) / 2;
        if radius > a_max || n > p.max_index() {
            break;
        }
        if p.p(n)? <= 1.0 - delta && last.is_none_or(|l| n - l >= 2) {
            out.push((n, radius));
            last = Some(n);
        }
    }
    Ok(out)
}

/// The general-group criterion functional on enumerated sets `F_n`:
///
/// ```text
/// E(n) = |{(g, h) in F_n x F_n : |pair_coeff(g, h)| >= eps}| / |F_n|^2
///        * exp(kappa * s_n),   s_n = max { normsq_pairdiff(g, h) },
/// ```
///
/// where `pair_coeff(g, h)` is the matrix coefficient `<pi(g) xi_1,
/// pi(h) xi_2>` and `normsq_pairdiff(g, h)` is `||c_{g^{-1} h}||^2` (every
/// element of `F_n^{-1} F_n` arises from some pair). Same verdict semantics
/// as [`criterion_z`]; callback failures propagate.
pub fn criterion_general<G, C, N>(
    sets: &[Vec<G>],
    mut pair_coeff: C,
    mut normsq_pairdiff: N,
    eps: f64,
    kappa: f64,
) -> Result<CertificateReport>
where
    C: FnMut(&G, &G) -> std::result::Result<f64, String>,
    N: FnMut(&G, &G) -> std::result::Result<f64, String>,
{
    check_eps_kappa(eps, kappa)?;
    if sets.is_empty() {
        return Err(DynError::InvalidParameter {
            name: "sets",
            reason: "need at least one enumerated set".into(),
        });
    }
    let mut series = Vec::with_capacity(sets.len());
    let mut min = f64::INFINITY;
    for (idx, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(DynError::InvalidParameter {
                name: "sets",
                reason: format!("set {idx} is empty"),
            });
        }
        let mut count = 0u64;
        let mut s_n = f64::NEG_INFINITY;
        for g in set {
            for h in set {
                let coeff = pair_coeff(g, h).map_err(|reason| DynError::Callback { reason })?;
                let norm_sq =
                    normsq_pairdiff(g, h).map_err(|reason| DynError::Callback { reason })?;
                if !(coeff.is_finite() && norm_sq.is_finite()) {
                    return Err(DynError::Callback {
                        reason: format!("non-finite callback value ({coeff}, {norm_sq})"),
                    });
                }
                if coeff.abs() >= eps {
                    count += 1;
                }
                s_n = s_n.max(norm_sq);
            }
        }
        let pairs = (set.len() * set.len()) as f64;
        let frac = count as f64 / pairs;
        let value = if frac == 0.0 {
            0.0
        } else {
            frac * (kappa * s_n).exp()
        };
        min = min.min(value);
        series.push((idx as u64 + 1, value));
    }
    Ok(CertificateReport {
        name: "general-criterion".into(),
        series,
        verdict: verdict_from_min(min),
        cutoff: sets.len() as u64,
        diagnostic: format!(
            "pair fraction with |coefficient| >= {eps} times exp({kappa} s_n) over {} enumerated \
             sets: running minimum {min:.6e}; read at the cutoff only",
            sets.len()
        ),
    })
}
