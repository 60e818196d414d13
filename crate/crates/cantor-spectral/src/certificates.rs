use serde::Serialize;

use crate::error::{CantorError, Result};
use crate::psequence::{PRule, PSequence};
use crate::terms::RTerms;

/// Outcome of a series certificate.
///
/// `Holds` and `Fails` are only issued when the rule family admits an exact
/// tail model (eventually zero, geometric ratio, or the sparse-square
/// harmonic form); otherwise the report stays undetermined at its cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    UndeterminedAtCutoff,
}

/// A certified series diagnostic: the partial data actually computed, the
/// verdict, and a human-readable justification.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub name: String,
    /// `(index, value)` rows; partial sums for the coboundary series,
    /// ratios for the ergodicity condition.
    pub series: Vec<(u64, f64)>,
    pub verdict: Verdict,
    pub cutoff: u64,
    pub diagnostic: String,
}

impl CertificateReport {
    /// Running minimum of the series values, for liminf-style plots.
    pub fn running_min(&self) -> Vec<(u64, f64)> {
        let mut min = f64::INFINITY;
        self.series
            .iter()
            .map(|&(n, v)| {
                min = min.min(v);
                (n, min)
            })
            .collect()
    }
}

/// Tail behaviour of the term sequence `r_m`, derived exactly from the rule.
enum TailModel {
    /// All but finitely many terms vanish; the series is a finite sum.
    EventuallyZero,
    /// Eventual term ratio `9 p`.
    Geometric { ratio: f64 },
    /// Sparse-square terms `r_{k^2} = 9 (1 - p_{k^2}) / k`.
    Harmonic,
}

fn tail_model(p: &PSequence) -> TailModel {
    match p.rule() {
        PRule::Example83 => TailModel::Harmonic,
        PRule::Const { p } => {
            if *p == 0.0 || *p == 1.0 {
                TailModel::EventuallyZero
            } else {
                TailModel::Geometric { ratio: 9.0 * p }
            }
        }
        PRule::List { values, tail } => {
            if values.contains(&0.0) || *tail == 0.0 || *tail == 1.0 {
                TailModel::EventuallyZero
            } else {
                TailModel::Geometric { ratio: 9.0 * tail }
            }
        }
    }
}

/// True when `sum (1 - p_m)` converges, i.e. the measure has atoms and the
/// series criteria lose their dynamical meaning.
fn has_atoms(p: &PSequence) -> bool {
    match p.rule() {
        PRule::Example83 => false,
        PRule::Const { p } => *p == 1.0,
        PRule::List { tail, .. } => *tail == 1.0,
    }
}

/// Certifies convergence of `sum_m r_m`, the criterion deciding whether the
/// additive cocycle is a coboundary.  The series rows are partial sums.
pub fn coboundary_report(p: &PSequence, cutoff: u64) -> Result<CertificateReport> {
    check_cutoff(p, cutoff)?;
    let mut series = Vec::with_capacity(cutoff as usize);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (i, term) in RTerms::new(p).take(cutoff as usize).enumerate() {
        let r = term?;
        if sum.is_finite() && r.is_finite() {
            let y = r - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        } else {
            sum = f64::INFINITY;
        }
        series.push((i as u64 + 1, sum));
    }
    let (verdict, mut diagnostic) = match tail_model(p) {
        TailModel::EventuallyZero => (
            Verdict::Holds,
            "all but finitely many terms vanish; the series is a finite sum".to_string(),
        ),
        TailModel::Geometric { ratio } if ratio < 1.0 => (
            Verdict::Holds,
            format!("eventual term ratio {ratio} < 1; geometric tail converges"),
        ),
        TailModel::Geometric { ratio } => (
            Verdict::Fails,
            format!("eventual term ratio {ratio} >= 1; terms do not tend to zero"),
        ),
        TailModel::Harmonic => (
            Verdict::Fails,
            "square terms 9 (1 - p_{k^2}) / k dominate a harmonic series".to_string(),
        ),
    };
    if has_atoms(p) {
        diagnostic.push_str(
            "; note: sum (1 - p_m) converges, the measure has atoms and the \
             series no longer decides coboundary membership",
        );
    }
    Ok(CertificateReport {
        name: "coboundary".into(),
        series,
        verdict,
        cutoff,
        diagnostic,
    })
}

/// Certifies `liminf_n S_n / N_n = 0`, where `S_n` is the partial coboundary
/// sum and `N_n` counts indices with `p_k <= 1 - delta`.  Rows are the
/// ratios at every index where the count is positive.
pub fn condition_ratio(p: &PSequence, delta: f64, cutoff: u64) -> Result<CertificateReport> {
    check_cutoff(p, cutoff)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CantorError::InvalidParameter {
            name: "delta",
            reason: format!("must lie in (0, 1), got {delta}"),
        });
    }
    let threshold = 1.0 - delta;
    let mut series = Vec::new();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut count = 0u64;
    for (i, term) in RTerms::new(p).take(cutoff as usize).enumerate() {
        let n = i as u64 + 1;
        let r = term?;
        if sum.is_finite() && r.is_finite() {
            let y = r - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        } else {
            sum = f64::INFINITY;
        }
        if p.p(n)? <= threshold {
            count += 1;
        }
        if count > 0 {
            series.push((n, sum / count as f64));
        }
    }

    // Exact tail analysis: does the count grow without bound, and how does
    // the sum behave against it?
    let (verdict, diagnostic) = match p.rule() {
        PRule::Example83 => (
            Verdict::Holds,
            "at n = K^2 the ratio is ~ 9 H_K / K, which decreases to zero".to_string(),
        ),
        PRule::Const { p: c } => {
            if *c > threshold {
                (
                    Verdict::UndeterminedAtCutoff,
                    format!("no index has p_n <= {threshold}; the count is identically zero"),
                )
            } else if 9.0 * c < 1.0 {
                (
                    Verdict::Holds,
                    "sum converges while the count grows linearly; ratio tends to zero"
                        .to_string(),
                )
            } else {
                (
                    Verdict::Fails,
                    format!(
                        "term ratio {} >= 1 keeps the ratio bounded below by a positive constant",
                        9.0 * c
                    ),
                )
            }
        }
        PRule::List { values, tail } => {
            let finite_sum = values.contains(&0.0) || *tail == 0.0 || *tail == 1.0;
            if *tail <= threshold {
                if finite_sum || 9.0 * tail < 1.0 {
                    (
                        Verdict::Holds,
                        "sum converges while the count grows linearly; ratio tends to zero"
                            .to_string(),
                    )
                } else {
                    (
                        Verdict::Fails,
                        "geometric terms outrun the linear count; ratio stays bounded below"
                            .to_string(),
                    )
                }
            } else if values.iter().any(|&v| v <= threshold) {
                (
                    Verdict::Fails,
                    "only finitely many indices count while the sum stays positive; \
                     the ratio has a positive limit"
                        .to_string(),
                )
            } else {
                (
                    Verdict::UndeterminedAtCutoff,
                    format!("no index has p_n <= {threshold}; the count is identically zero"),
                )
            }
        }
    };
    Ok(CertificateReport {
        name: "condition-ratio".into(),
        series,
        verdict,
        cutoff,
        diagnostic,
    })
}

/// First index `n` such that `p_n, ..., p_{n+k}` all lie in `[1 - delta, 1]`,
/// searching windows that fit below the cutoff.
pub fn near_one_window(p: &PSequence, delta: f64, k: u64, cutoff: u64) -> Result<Option<u64>> {
    check_cutoff(p, cutoff)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CantorError::InvalidParameter {
            name: "delta",
            reason: format!("must lie in (0, 1), got {delta}"),
        });
    }
    let mut run = 0u64;
    for n in 1..=cutoff {
        if p.p(n)? >= 1.0 - delta {
            run += 1;
            if run > k {
                return Ok(Some(n - k));
            }
        } else {
            run = 0;
        }
    }
    Ok(None)
}

fn check_cutoff(p: &PSequence, cutoff: u64) -> Result<()> {
    if cutoff == 0 || cutoff > p.max_index() {
        return Err(CantorError::InvalidParameter {
            name: "cutoff",
            reason: format!("must lie in 1..={}, got {cutoff}", p.max_index()),
        });
    }
    Ok(())
}
