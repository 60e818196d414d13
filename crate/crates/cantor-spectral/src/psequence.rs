use serde::{Deserialize, Serialize};

use crate::error::{CantorError, Result};

/// Rule generating the digit-suppression probabilities `p_m`.
///
/// The serialized form tags the variant under `"rule"`, so configs read
/// `{"rule": "const", "p": 0.5}` or `{"rule": "example83"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum PRule {
    /// `p_m = 1` off perfect squares and `p_{k^2} = 3^{-(2+4k)} k / (k+1)`.
    ///
    /// Squares are sparse enough that the condition-ratio certificate holds
    /// even though the coboundary series diverges harmonically.
    Example83,
    /// Constant sequence `p_m = p`.
    Const { p: f64 },
    /// Explicit prefix followed by a constant tail.
    List { values: Vec<f64>, tail: f64 },
}

/// A validated probability sequence `p_1, p_2, ...` with a query cutoff.
///
/// Indices are 1-based to match the digit positions they control.
#[derive(Clone, Debug)]
pub struct PSequence {
    rule: PRule,
    max_index: u64,
}

impl PSequence {
    /// Validates every probability the rule can produce and fixes the
    /// largest index this sequence may be queried at.
    pub fn new(rule: PRule, max_index: u64) -> Result<Self> {
        if max_index == 0 {
            return Err(CantorError::InvalidParameter {
                name: "max_index",
                reason: "must be at least 1".into(),
            });
        }
        match &rule {
            PRule::Example83 => {}
            PRule::Const { p } => check_probability(1, *p)?,
            PRule::List { values, tail } => {
                for (i, &v) in values.iter().enumerate() {
                    check_probability(i as u64 + 1, v)?;
                }
                check_probability(values.len() as u64 + 1, *tail)?;
            }
        }
        Ok(Self { rule, max_index })
    }

    /// The sparse-square sequence with the default query cutoff.
    pub fn example83(max_index: u64) -> Result<Self> {
        Self::new(PRule::Example83, max_index)
    }

    /// Constant sequence `p_m = p`.
    pub fn constant(p: f64, max_index: u64) -> Result<Self> {
        Self::new(PRule::Const { p }, max_index)
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    /// Same rule with a different query cutoff.
    pub fn with_max_index(&self, max_index: u64) -> Result<Self> {
        Self::new(self.rule.clone(), max_index)
    }

    pub fn rule(&self) -> &PRule {
        &self.rule
    }

    /// `p_m` for `1 <= m <= max_index`.
    pub fn p(&self, m: u64) -> Result<f64> {
        if m == 0 || m > self.max_index {
            return Err(CantorError::IndexOutOfRange {
                index: m,
                max_index: self.max_index,
            });
        }
        Ok(match &self.rule {
            PRule::Example83 => match square_root_of(m) {
                Some(k) => {
                    let k = k as f64;
                    3f64.powi(-(2 + 4 * k as i32)) * k / (k + 1.0)
                }
                None => 1.0,
            },
            PRule::Const { p } => *p,
            PRule::List { values, tail } => values
                .get(m as usize - 1)
                .copied()
                .unwrap_or(*tail),
        })
    }
}

fn check_probability(index: u64, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(CantorError::InvalidProbability { index, value });
    }
    Ok(())
}

/// `Some(k)` when `m = k^2` with `k >= 1`.
fn square_root_of(m: u64) -> Option<u64> {
    let k = (m as f64).sqrt().round() as u64;
    (k >= 1 && k * k == m).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example83_is_one_off_squares() {
        let p = PSequence::example83(1000).unwrap();
        for m in [2, 3, 5, 8, 99, 101, 200] {
            assert_eq!(p.p(m).unwrap(), 1.0);
        }
    }

    #[test]
    fn example83_square_values() {
        let p = PSequence::example83(1000).unwrap();
        // k = 1: 3^-6 / 2, k = 3: 3^-14 * 3/4.
        assert_eq!(p.p(1).unwrap(), 3f64.powi(-6) * 0.5);
        assert_eq!(p.p(9).unwrap(), 3f64.powi(-14) * 0.75);
        assert!(p.p(900).unwrap() < p.p(841).unwrap());
    }

    #[test]
    fn list_rule_falls_back_to_tail() {
        let p = PSequence::new(
            PRule::List {
                values: vec![0.2, 0.4],
                tail: 1.0,
            },
            10,
        )
        .unwrap();
        assert_eq!(p.p(1).unwrap(), 0.2);
        assert_eq!(p.p(2).unwrap(), 0.4);
        assert_eq!(p.p(3).unwrap(), 1.0);
        assert_eq!(p.p(10).unwrap(), 1.0);
    }

    #[test]
    fn out_of_range_and_invalid_probability_are_rejected() {
        let p = PSequence::constant(0.5, 4).unwrap();
        assert!(matches!(
            p.p(0),
            Err(CantorError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            p.p(5),
            Err(CantorError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            PSequence::constant(1.5, 4),
            Err(CantorError::InvalidProbability { .. })
        ));
        assert!(matches!(
            PSequence::new(
                PRule::List {
                    values: vec![0.1, -0.2],
                    tail: 0.0
                },
                4
            ),
            Err(CantorError::InvalidProbability { index: 2, .. })
        ));
    }

    #[test]
    fn rule_serialization_round_trips_with_tag() {
        let json = r#"{"rule":"list","values":[0.1,0.9],"tail":1.0}"#;
        let rule: PRule = serde_json::from_str(json).unwrap();
        assert_eq!(
            rule,
            PRule::List {
                values: vec![0.1, 0.9],
                tail: 1.0
            }
        );
        assert_eq!(serde_json::to_string(&rule).unwrap(), json);
        let e: PRule = serde_json::from_str(r#"{"rule":"example83"}"#).unwrap();
        assert_eq!(e, PRule::Example83);
    }
}
