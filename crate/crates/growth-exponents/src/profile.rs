use std::fmt;

use crate::error::{GrowthError, Result};

/// Normalization of the cutoff axis of a [`GrowthProfile`].
///
/// The Poincare exponent reads cutoffs on `|c_g|^2`, the skew-product
/// exponent reads cutoffs on `|c_g|`; keeping the kind on the profile stops
/// the two estimators from being fed the wrong axis silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Cutoffs are values of `|c_g|^2`.
    NormSquared,
    /// Cutoffs are values of `|c_g|`.
    Norm,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::NormSquared => write!(f, "norm-squared"),
            ProfileKind::Norm => write!(f, "norm"),
        }
    }
}

/// Cumulative growth data of a cocycle: for each cutoff `s`, the total count
/// (or Haar mass) of group elements whose cocycle norm lies at or below `s`.
///
/// Cutoffs are strictly increasing starting at `0`, counts are non-decreasing,
/// and the count at `0` is at least `1` because the identity always satisfies
/// `|c_e| = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    points: Vec<(f64, f64)>,
    kind: ProfileKind,
}

impl GrowthProfile {
    /// Builds a profile from explicit `(cutoff, cumulative count)` points.
    pub fn from_points(kind: ProfileKind, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(GrowthError::InvalidParameter {
                name: "points",
                reason: "profile must contain at least one point".into(),
            });
        }
        for &(s, c) in &points {
            if !s.is_finite() || !c.is_finite() {
                return Err(GrowthError::InvalidParameter {
                    name: "points",
                    reason: format!("non-finite entry ({s}, {c})"),
                });
            }
        }
        if points[0].0 != 0.0 {
            return Err(GrowthError::InvalidParameter {
                name: "points",
                reason: format!("first cutoff must be 0, got {}", points[0].0),
            });
        }
        if points[0].1 < 1.0 {
            return Err(GrowthError::InvalidParameter {
                name: "points",
                reason: format!("count at cutoff 0 must be >= 1, got {}", points[0].1),
            });
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(GrowthError::InvalidParameter {
                    name: "points",
                    reason: format!("cutoffs not strictly increasing at {}", w[1].0),
                });
            }
            if w[1].1 < w[0].1 {
                return Err(GrowthError::InvalidParameter {
                    name: "points",
                    reason: format!("counts decrease at cutoff {}", w[1].0),
                });
            }
        }
        Ok(Self { points, kind })
    }

    /// Builds a profile from one norm value per group element (unit masses).
    ///
    /// The values must include `0` for the identity; equal values are merged
    /// into a single cumulative point.
    pub fn from_values(kind: ProfileKind, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(GrowthError::InvalidParameter {
                name: "values",
                reason: "need at least one value".into(),
            });
        }
        let mut sorted = values.to_vec();
        for &v in &sorted {
            if !v.is_finite() || v < 0.0 {
                return Err(GrowthError::InvalidParameter {
                    name: "values",
                    reason: format!("norm value {v} is not a finite non-negative number"),
                });
            }
        }
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        if sorted[0] != 0.0 {
            return Err(GrowthError::InvalidParameter {
                name: "values",
                reason: "values must include 0 for the identity element".into(),
            });
        }
        let mut points: Vec<(f64, f64)> = Vec::new();
        let mut count = 0.0_f64;
        for &v in &sorted {
            count += 1.0;
            match points.last_mut() {
                Some(last) if last.0 == v => last.1 = count,
                _ => points.push((v, count)),
            }
        }
        Self::from_points(kind, points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Largest cutoff covered by the profile.
    pub fn max_cutoff(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// Re-expresses the cutoff axis on `|c_g|^2`; counts are unchanged.
    pub fn to_norm_squared(&self) -> Self {
        match self.kind {
            ProfileKind::NormSquared => self.clone(),
            ProfileKind::Norm => Self {
                points: self.points.iter().map(|&(s, c)| (s * s, c)).collect(),
                kind: ProfileKind::NormSquared,
            },
        }
    }

    /// Re-expresses the cutoff axis on `|c_g|`; counts are unchanged.
    pub fn to_norm(&self) -> Self {
        match self.kind {
            ProfileKind::Norm => self.clone(),
            ProfileKind::NormSquared => Self {
                points: self.points.iter().map(|&(s, c)| (s.sqrt(), c)).collect(),
                kind: ProfileKind::Norm,
            },
        }
    }

    /// Serializes the profile as `s,count` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,count\n");
        for &(s, c) in &self.points {
            out.push_str(&format!("{s},{c}\n"));
        }
        out
    }

    /// Parses a profile from the CSV form written by [`Self::to_csv`].
    pub fn from_csv(kind: ProfileKind, text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if idx == 0 {
                if line.trim() != "s,count" {
                    return Err(GrowthError::CsvParse {
                        line: 1,
                        reason: format!("expected header `s,count`, got `{line}`"),
                    });
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let parse = |field: Option<&str>, what: &str| -> Result<f64> {
                field
                    .ok_or_else(|| GrowthError::CsvParse {
                        line: idx + 1,
                        reason: format!("missing {what}"),
                    })?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| GrowthError::CsvParse {
                        line: idx + 1,
                        reason: format!("bad {what}: {e}"),
                    })
            };
            let s = parse(fields.next(), "cutoff")?;
            let c = parse(fields.next(), "count")?;
            if fields.next().is_some() {
                return Err(GrowthError::CsvParse {
                    line: idx + 1,
                    reason: "more than two fields".into(),
                });
            }
            points.push((s, c));
        }
        Self::from_points(kind, points)
    }
}

/// One tail window of the Poincare estimator.
#[derive(Debug, Clone, Copy)]
pub struct WindowQuotient {
    /// Window lower edge (exclusive) on the cutoff axis.
    pub lo: f64,
    /// Window upper edge (inclusive).
    pub hi: f64,
    /// Number of count increments that fell inside the window.
    pub spans: usize,
    /// Aggregate difference quotient of log-increments over the window.
    pub value: f64,
}

/// Result of the Poincare-exponent estimator.
#[derive(Debug, Clone)]
pub struct PoincareReport {
    /// Max of the tail-window difference quotients.
    pub estimate: f64,
    /// Per-window quotients, outermost window first.
    pub window_quotients: Vec<WindowQuotient>,
    /// True when no dyadic window held two increments and the estimator fell
    /// back to one aggregate quotient over the largest decade.
    pub fallback_used: bool,
}

impl PoincareReport {
    /// Spread of the window quotients; `None` with fewer than two windows.
    pub fn window_sensitivity(&self) -> Option<f64> {
        if self.window_quotients.len() < 2 {
            return None;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in &self.window_quotients {
            lo = lo.min(w.value);
            hi = hi.max(w.value);
        }
        Some(hi - lo)
    }
}

/// Number of dyadic tail windows scanned by [`poincare_exponent`].
pub const POINCARE_TAIL_WINDOWS: u32 = 5;

/// Estimates the exponential growth rate `limsup log|{g : |c_g|^2 <= s}| / s`.
///
/// The estimator works on count increments (shell masses), not on the
/// cumulative counts: the log of an increment, differenced across a tail
/// window and divided by the cutoff span, is exact on geometric profiles,
/// whereas the cumulative count carries an `O(1)` offset that pollutes the
/// quotient at any finite radius. The limsup is taken as the max over the
/// last [`POINCARE_TAIL_WINDOWS`] dyadic windows `(s_max/2^{j+1}, s_max/2^j]`;
/// windows holding fewer than two increments are skipped.
pub fn poincare_exponent(profile: &GrowthProfile) -> Result<PoincareReport> {
    if profile.kind() != ProfileKind::NormSquared {
        return Err(GrowthError::KindMismatch {
            expected: ProfileKind::NormSquared,
            got: profile.kind(),
        });
    }
    let points = profile.points();
    if points.len() < 4 {
        return Err(GrowthError::InsufficientData {
            what: "poincare_exponent",
            needed: 4,
            got: points.len(),
        });
    }
    let s_max = profile.max_cutoff();
    // Increment (d count) over (s_i, s_{i+1}], keyed by its right endpoint.
    let mut increments: Vec<(f64, f64)> = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        let d = w[1].1 - w[0].1;
        if d > 0.0 {
            increments.push((w[1].0, d.ln()));
        }
    }
    let mut windows = Vec::new();
    for j in 0..POINCARE_TAIL_WINDOWS {
        let hi = s_max / f64::from(1u32 << j);
        let lo = hi / 2.0;
        let in_window: Vec<&(f64, f64)> = increments
            .iter()
            .filter(|&&(s, _)| s > lo && s <= hi)
            .collect();
        if in_window.len() < 2 {
            continue;
        }
        let (s0, l0) = *in_window[0];
        let (s1, l1) = *in_window[in_window.len() - 1];
        windows.push(WindowQuotient {
            lo,
            hi,
            spans: in_window.len(),
            value: (l1 - l0) / (s1 - s0),
        });
    }
    if windows.is_empty() {
        // Sparse tail: one aggregate quotient over the largest decade.
        let decade: Vec<&(f64, f64)> = increments
            .iter()
            .filter(|&&(s, _)| s >= s_max / 10.0)
            .collect();
        if decade.len() < 2 {
            return Err(GrowthError::InsufficientData {
                what: "poincare_exponent tail",
                needed: 2,
                got: decade.len(),
            });
        }
        let (s0, l0) = *decade[0];
        let (s1, l1) = *decade[decade.len() - 1];
        return Ok(PoincareReport {
            estimate: (l1 - l0) / (s1 - s0),
            window_quotients: Vec::new(),
            fallback_used: true,
        });
    }
    let estimate = windows
        .iter()
        .map(|w| w.value)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PoincareReport {
        estimate,
        window_quotients: windows,
        fallback_used: false,
    })
}

/// Margin around `delta = 1` inside which the skew-product verdict stays
/// undecided between dissipative and conservative.
pub const DELTA_MARGIN: f64 = 0.1;

/// Recurrence verdict of the skew product attached to a growth profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaVerdict {
    /// `delta < 1 - margin`: the skew product is dissipative.
    Dissipative,
    /// `delta > 1 + margin`: the growth is too fast for dissipativity.
    Conservative,
    /// `|delta - 1| <= margin`: the estimator cannot separate the two.
    Boundary,
}

impl fmt::Display for DeltaVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaVerdict::Dissipative => write!(f, "dissipative"),
            DeltaVerdict::Conservative => write!(f, "conservative"),
            DeltaVerdict::Boundary => write!(f, "boundary"),
        }
    }
}

/// Result of the polynomial-growth (log-log slope) estimator.
#[derive(Debug, Clone)]
pub struct SkewDeltaReport {
    /// Least-squares slope of `log mass` against `log cutoff` over the upper
    /// half of the log-cutoff range.
    pub estimate: f64,
    pub verdict: DeltaVerdict,
    /// Margin used for the verdict.
    pub margin: f64,
    /// Number of points in the fit window.
    pub fit_points: usize,
    /// Log-cutoff range of the fit window.
    pub fit_range: (f64, f64),
}

/// Estimates the polynomial exponent `log lambda{g : |c(g)| <= s} / log s`.
///
/// Cutoffs may be spaced doubly exponentially (locally finite towers), so the
/// fit window is the upper half of the log-cutoff range rather than a dyadic
/// window on the cutoff itself; within the window a least-squares line is fit
/// to `(log s, log mass)`.
pub fn skew_delta(profile: &GrowthProfile) -> Result<SkewDeltaReport> {
    if profile.kind() != ProfileKind::Norm {
        return Err(GrowthError::KindMismatch {
            expected: ProfileKind::Norm,
            got: profile.kind(),
        });
    }
    if profile.points().len() < 4 {
        return Err(GrowthError::InsufficientData {
            what: "skew_delta",
            needed: 4,
            got: profile.points().len(),
        });
    }
    let logs: Vec<(f64, f64)> = profile
        .points()
        .iter()
        .filter(|&&(s, _)| s > 0.0)
        .map(|&(s, c)| (s.ln(), c.ln()))
        .collect();
    if logs.len() < 2 {
        return Err(GrowthError::InsufficientData {
            what: "skew_delta positive cutoffs",
            needed: 2,
            got: logs.len(),
        });
    }
    let x_min = logs[0].0;
    let x_max = logs[logs.len() - 1].0;
    let threshold = x_min + (x_max - x_min) / 2.0;
    let mut fit: Vec<(f64, f64)> = logs.iter().copied().filter(|&(x, _)| x >= threshold).collect();
    if fit.len() < 2 {
        fit = logs[logs.len() - 2..].to_vec();
    }
    let n = fit.len() as f64;
    let mean_x = fit.iter().map(|&(x, _)| x).sum::<f64>() / n;
    let mean_y = fit.iter().map(|&(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in &fit {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let estimate = sxy / sxx;
    let verdict = if estimate < 1.0 - DELTA_MARGIN {
        DeltaVerdict::Dissipative
    } else if estimate > 1.0 + DELTA_MARGIN {
        DeltaVerdict::Conservative
    } else {
        DeltaVerdict::Boundary
    };
    Ok(SkewDeltaReport {
        estimate,
        verdict,
        margin: DELTA_MARGIN,
        fit_points: fit.len(),
        fit_range: (fit[0].0, fit[fit.len() - 1].0),
    })
}
