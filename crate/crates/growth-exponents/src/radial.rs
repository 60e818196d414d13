use crate::error::{GrowthError, Result};
use crate::free_group::FreeGroupModel;

/// Largest supported walk length for the radial dynamic program.
pub const MAX_STEPS: u32 = 5000;

/// Tolerance granted to the entropy-versus-drift inequality at finite step
/// counts; pinned to the near-equality slack the free-group models exhibit.
pub const GUIVARCH_TOL: f64 = 0.05;

/// Neumaier-compensated accumulator; the DP rows are built from two-term
/// recurrences, but the entropy and drift reductions sum thousands of terms.
#[derive(Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Exact distribution of the distance from the origin of the uniform random
/// walk on a free group, advanced one convolution at a time.
///
/// From radius `r >= 1` the distance moves to `r + 1` with probability
/// `(2n-1)/2n` and to `r - 1` with probability `1/2n`; from `0` it moves to
/// `1` surely. The degenerate fixed-point walk never moves; it models an
/// affine action with a fixed point, whose entropy and drift both vanish.
#[derive(Debug, Clone)]
pub struct RadialWalk {
    p_up: f64,
    p_down: f64,
    /// `log N(1) = log 2n`; sphere sizes enter the entropy as reference mass.
    ln_first_shell: f64,
    /// `log((2n-1))`, the per-radius sphere growth.
    ln_branch: f64,
    moves: bool,
    row: Vec<f64>,
    step_index: u32,
}

impl RadialWalk {
    /// Radial walk of the uniform step law on the `2n` generators.
    pub fn tree(model: &FreeGroupModel) -> Self {
        let n2 = f64::from(2 * model.n_gens());
        Self {
            p_up: (n2 - 1.0) / n2,
            p_down: 1.0 / n2,
            ln_first_shell: n2.ln(),
            ln_branch: (n2 - 1.0).ln(),
            moves: true,
            row: vec![1.0],
            step_index: 0,
        }
    }

    /// Walk of a single-state model: the distribution stays at radius 0.
    pub fn fixed_point() -> Self {
        Self {
            p_up: 0.0,
            p_down: 0.0,
            ln_first_shell: 0.0,
            ln_branch: 0.0,
            moves: false,
            row: vec![1.0],
            step_index: 0,
        }
    }

    /// Applies one convolution step.
    pub fn advance(&mut self) {
        let len = self.row.len();
        let mut next = vec![0.0; len + 1];
        if self.moves {
            for (r, &mass) in self.row.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                if r == 0 {
                    next[1] += mass;
                } else {
                    next[r + 1] += mass * self.p_up;
                    next[r - 1] += mass * self.p_down;
                }
            }
        } else {
            next[..len].copy_from_slice(&self.row);
        }
        self.row = next;
        self.step_index += 1;
        debug_assert!((self.row_sum() - 1.0).abs() <= 1e-12, "row mass drifted");
    }

    pub fn step_index(&self) -> u32 {
        self.step_index
    }

    /// Distribution of the radius after `step_index` steps; index is radius.
    pub fn distribution(&self) -> &[f64] {
        &self.row
    }

    pub fn row_sum(&self) -> f64 {
        let mut acc = Compensated::default();
        for &q in &self.row {
            acc.add(q);
        }
        acc.value()
    }

    /// Shannon entropy of the word distribution relative to counting measure:
    /// `H = -sum_r q(r) log(q(r) / N(r))` with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        let mut acc = Compensated::default();
        for (r, &q) in self.row.iter().enumerate() {
            if q > 0.0 {
                let ln_sphere = if r == 0 {
                    0.0
                } else {
                    self.ln_first_shell + (r as f64 - 1.0) * self.ln_branch
                };
                acc.add(q * ln_sphere - q * q.ln());
            }
        }
        acc.value()
    }

    /// Mean radius `E|X_k|`; the tree cocycle norm satisfies `|c_g|^2 = |g|`,
    /// so this is also the accumulated squared cocycle norm.
    pub fn drift(&self) -> f64 {
        let mut acc = Compensated::default();
        for (r, &q) in self.row.iter().enumerate() {
            acc.add(r as f64 * q);
        }
        acc.value()
    }
}

/// One row of the entropy/drift table.
#[derive(Debug, Clone, Copy)]
pub struct EntropyDriftPoint {
    pub step: u32,
    /// `H(mu^{*k}) / k`.
    pub entropy_rate: f64,
    /// `E|X_k| / k`.
    pub drift_rate: f64,
}

fn check_steps(steps: u32) -> Result<()> {
    if steps == 0 || steps > MAX_STEPS {
        return Err(GrowthError::StepsOutOfRange {
            steps,
            max: MAX_STEPS,
        });
    }
    Ok(())
}

/// Runs the radial dynamic program and reports `(k, H/k, E|X_k|/k)` for every
/// `k` up to `steps`.
pub fn radial_entropy_drift(
    model: &FreeGroupModel,
    steps: u32,
) -> Result<Vec<EntropyDriftPoint>> {
    check_steps(steps)?;
    let mut walk = RadialWalk::tree(model);
    let mut out = Vec::with_capacity(steps as usize);
    for k in 1..=steps {
        walk.advance();
        out.push(EntropyDriftPoint {
            step: k,
            entropy_rate: walk.entropy() / f64::from(k),
            drift_rate: walk.drift() / f64::from(k),
        });
    }
    Ok(out)
}

/// Entropy-versus-drift comparison `h <= delta * |alpha|^2`.
#[derive(Debug, Clone, Copy)]
pub struct GuivarchReport {
    pub steps: u32,
    /// `H(mu^{*k}) / k` at the final step.
    pub entropy_rate: f64,
    /// `E|X_k| / k` at the final step.
    pub drift_rate: f64,
    /// Poincare exponent entering the bound.
    pub delta: f64,
    /// `delta * drift_rate`.
    pub bound: f64,
    /// `bound - entropy_rate`. At finite `k` the entropy rate sits above its
    /// limit by roughly `(log k) / 2k` (the radial-fluctuation entropy) while
    /// the drift rate converges faster, so this is slightly negative for free
    /// groups even though the limit inequality is an equality.
    pub slack_raw: f64,
    /// `bound + tol - entropy_rate`, the asserted quantity.
    pub slack_with_tol: f64,
    pub tol: f64,
    /// `slack_with_tol >= 0`.
    pub holds: bool,
}

fn guivarch_from_rates(steps: u32, entropy_rate: f64, drift_rate: f64, delta: f64) -> GuivarchReport {
    let bound = delta * drift_rate;
    let slack_raw = bound - entropy_rate;
    let slack_with_tol = slack_raw + GUIVARCH_TOL;
    GuivarchReport {
        steps,
        entropy_rate,
        drift_rate,
        delta,
        bound,
        slack_raw,
        slack_with_tol,
        tol: GUIVARCH_TOL,
        holds: slack_with_tol >= 0.0,
    }
}

/// Checks `h <= delta * drift + tol` on a free-group model after `steps`
/// convolution steps, with `delta = log(2n - 1)`.
pub fn guivarch_check(model: &FreeGroupModel, steps: u32) -> Result<GuivarchReport> {
    let table = radial_entropy_drift(model, steps)?;
    let last = table[table.len() - 1];
    Ok(guivarch_from_rates(
        steps,
        last.entropy_rate,
        last.drift_rate,
        model.poincare_delta(),
    ))
}

/// Degenerate fixed-point model: the walk never leaves the origin, so the
/// entropy and drift rates are both exactly zero and the inequality holds
/// with zero raw slack at every step.
pub fn guivarch_fixed_point(steps: u32) -> Result<GuivarchReport> {
    check_steps(steps)?;
    let mut walk = RadialWalk::fixed_point();
    for _ in 0..steps {
        walk.advance();
    }
    let k = f64::from(steps);
    Ok(guivarch_from_rates(
        steps,
        walk.entropy() / k,
        walk.drift() / k,
        0.0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_step_is_uniform_on_generators() {
        for n in [2u32, 3, 4] {
            let model = FreeGroupModel::new(n).unwrap();
            let table = radial_entropy_drift(&model, 1).unwrap();
            let point = table[0];
            assert_eq!(point.drift_rate, 1.0, "n={n}");
            assert!((point.entropy_rate - f64::from(2 * n).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_stay_normalized_through_four_hundred_steps() {
        for n in [2u32, 3, 4] {
            let model = FreeGroupModel::new(n).unwrap();
            let mut walk = RadialWalk::tree(&model);
            for _ in 0..400 {
                walk.advance();
            }
            assert!((walk.row_sum() - 1.0).abs() <= 1e-12, "n={n}");
            assert_eq!(walk.distribution().len(), 401);
            assert_eq!(walk.step_index(), 400);
        }
    }

    #[test]
    fn rates_at_step_four_hundred_match_frozen_values() {
        let cases = [
            (2u32, 0.5610185875960343, 0.501875),
            (3, 1.083652246699116, 0.6677083333333417),
            (4, 1.469448131645068, 0.7507291666666663),
        ];
        for (n, h_rate, e_rate) in cases {
            let model = FreeGroupModel::new(n).unwrap();
            let table = radial_entropy_drift(&model, 400).unwrap();
            let last = table[table.len() - 1];
            assert!(
                (last.entropy_rate - h_rate).abs() <= 1e-9 * h_rate,
                "n={n} entropy {}",
                last.entropy_rate
            );
            assert!(
                (last.drift_rate - e_rate).abs() <= 1e-9 * e_rate,
                "n={n} drift {}",
                last.drift_rate
            );
        }
    }

    #[test]
    fn rates_approach_the_closed_form_limits() {
        let model = FreeGroupModel::new(2).unwrap();
        let table = radial_entropy_drift(&model, 400).unwrap();
        let last = table[table.len() - 1];
        assert!((last.entropy_rate - model.entropy_limit()).abs() <= 0.03);
        assert!((last.drift_rate - model.drift_limit()).abs() <= 0.01);
    }

    #[test]
    fn entropy_rate_decreases_from_step_two_on() {
        // The source theory does not claim monotonicity; this pins the
        // observed behaviour of the shipped models and should be downgraded
        // to logging if a counterexample model is ever added.
        for n in [2u32, 3, 4] {
            let model = FreeGroupModel::new(n).unwrap();
            let table = radial_entropy_drift(&model, 400).unwrap();
            for w in table[1..].windows(2) {
                assert!(
                    w[1].entropy_rate <= w[0].entropy_rate + 1e-9,
                    "n={n}: H/k rises at k={}",
                    w[1].step
                );
            }
        }
    }

    #[test]
    fn step_guards_reject_zero_and_too_deep() {
        let model = FreeGroupModel::new(2).unwrap();
        assert!(matches!(
            radial_entropy_drift(&model, 0).unwrap_err(),
            GrowthError::StepsOutOfRange { .. }
        ));
        assert!(matches!(
            radial_entropy_drift(&model, MAX_STEPS + 1).unwrap_err(),
            GrowthError::StepsOutOfRange { .. }
        ));
    }

    #[test]
    fn guivarch_near_equality_on_free_groups() {
        let f2 = guivarch_check(&FreeGroupModel::new(2).unwrap(), 400).unwrap();
        assert!((f2.slack_raw - (-0.009652545220726783)).abs() <= 1e-9);
        assert!(f2.holds);
        assert!(f2.slack_with_tol >= -1e-9);
        assert!(f2.slack_raw.abs() < GUIVARCH_TOL);

        let f3 = guivarch_check(&FreeGroupModel::new(3).unwrap(), 400).unwrap();
        let h_limit = (2.0 / 3.0) * 5.0_f64.ln();
        assert!((f3.entropy_rate - h_limit).abs() <= 0.05);
        assert!((f3.bound - h_limit).abs() <= 0.05);
        assert!(f3.holds);
    }

    #[test]
    fn fixed_point_model_has_zero_entropy_and_drift() {
        let report = guivarch_fixed_point(100).unwrap();
        assert_eq!(report.entropy_rate, 0.0);
        assert_eq!(report.drift_rate, 0.0);
        assert_eq!(report.slack_raw, 0.0);
        assert!(report.holds);
    }
}
