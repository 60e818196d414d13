use crate::error::{CantorError, Result};
use crate::psequence::PSequence;

/// Deepest supported truncation; `3^13` signed atoms stay comfortably in
/// memory and every atom position is exact in `f64`.
pub const MAX_LEVEL: u32 = 13;

/// Exact atom position `t = numer / 3^level` on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TernaryAngle {
    pub numer: i64,
    pub level: u32,
}

impl TernaryAngle {
    pub fn value(&self) -> f64 {
        self.numer as f64 / 3f64.powi(self.level as i32)
    }
}

/// One atom of a symmetric measure, folded to `t >= 0`.
///
/// The weight is one-sided: an atom with `t > 0` stands for the pair at
/// `+-t`, each carrying `weight`.
#[derive(Clone, Debug)]
pub struct SpectralAtom {
    pub t: f64,
    pub weight: f64,
    /// Present when the position is an exact ternary rational.
    pub exact: Option<TernaryAngle>,
}

/// A finite symmetric atomic measure on the circle, normalized to total
/// mass one counting both signs.
#[derive(Clone, Debug)]
pub struct SpectralAtomSet {
    atoms: Vec<SpectralAtom>,
}

impl SpectralAtomSet {
    /// Validates positions, weights, and the folded mass invariant
    /// `w(0) + 2 sum_{t>0} w(t) = 1` within `1e-12`.
    pub fn new(mut atoms: Vec<SpectralAtom>) -> Result<Self> {
        for atom in &atoms {
            if !(0.0..=0.5).contains(&atom.t) {
                return Err(CantorError::InvalidParameter {
                    name: "t",
                    reason: format!("atom position {} not in [0, 1/2]", atom.t),
                });
            }
            if !(atom.weight.is_finite() && atom.weight >= 0.0) {
                return Err(CantorError::InvalidParameter {
                    name: "weight",
                    reason: format!("atom weight {} invalid", atom.weight),
                });
            }
        }
        atoms.sort_by(|a, b| a.t.total_cmp(&b.t));
        if atoms.windows(2).any(|w| w[0].t == w[1].t) {
            return Err(CantorError::InvalidParameter {
                name: "t",
                reason: "duplicate atom position".into(),
            });
        }
        let total = Self::folded_mass_of(&atoms);
        if (total - 1.0).abs() > 1e-12 {
            return Err(CantorError::MassMismatch { total });
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass at `t = 0`, zero when no such atom exists.
    pub fn zero_weight(&self) -> f64 {
        self.atoms
            .iter()
            .find(|a| a.t == 0.0)
            .map_or(0.0, |a| a.weight)
    }

    /// Total mass counting both half-circles.
    pub fn folded_mass(&self) -> f64 {
        Self::folded_mass_of(&self.atoms)
    }

    fn folded_mass_of(atoms: &[SpectralAtom]) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for a in atoms {
            let v = if a.t == 0.0 { a.weight } else { 2.0 * a.weight };
            let y = v - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }
}

/// Finite truncation of the Cantor measure: digits beyond `level` are set to
/// zero, leaving `3^level` signed atoms at `k / 3^level`.
///
/// Distinct digit strings give distinct balanced-ternary keys, so no weights
/// merge; the folded set keeps `k >= 0` with one-sided weights.
pub fn truncate_to_spectral(p: &PSequence, level: u32) -> Result<SpectralAtomSet> {
    if level == 0 || level > MAX_LEVEL {
        return Err(CantorError::LevelOutOfRange {
            level,
            max: MAX_LEVEL,
        });
    }
    if u64::from(level) > p.max_index() {
        return Err(CantorError::InvalidParameter {
            name: "level",
            reason: format!("exceeds sequence cutoff {}", p.max_index()),
        });
    }
    let mut entries: Vec<(i64, f64)> = vec![(0, 1.0)];
    for m in 1..=level {
        let pm = p.p(u64::from(m))?;
        let side = (1.0 - pm) * 0.5;
        let step = 3i64.pow(level - m);
        let mut next = Vec::with_capacity(entries.len() * 3);
        for &(key, w) in &entries {
            if pm > 0.0 {
                next.push((key, w * pm));
            }
            if side > 0.0 {
                next.push((key + step, w * side));
                next.push((key - step, w * side));
            }
        }
        entries = next;
    }
    debug_assert!({
        let mut keys: Vec<i64> = entries.iter().map(|&(k, _)| k).collect();
        keys.sort_unstable();
        keys.windows(2).all(|w| w[0] < w[1])
    });
    let scale = 3f64.powi(level as i32);
    let atoms: Vec<SpectralAtom> = entries
        .into_iter()
        .filter(|&(key, _)| key >= 0)
        .map(|(key, weight)| SpectralAtom {
            t: key as f64 / scale,
            weight,
            exact: Some(TernaryAngle { numer: key, level }),
        })
        .collect();
    SpectralAtomSet::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psequence::PRule;

    #[test]
    fn deterministic_sequence_truncates_to_point_mass() {
        let p = PSequence::constant(1.0, 20).unwrap();
        let set = truncate_to_spectral(&p, 5).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.zero_weight(), 1.0);
        assert_eq!(set.atoms()[0].t, 0.0);
    }

    #[test]
    fn fair_digits_at_level_two_give_expected_weights() {
        let p = PSequence::constant(0.5, 20).unwrap();
        let set = truncate_to_spectral(&p, 2).unwrap();
        // Folded keys 0..4 over denominator 9.
        assert_eq!(set.len(), 5);
        let weight_at = |numer: i64| {
            set.atoms()
                .iter()
                .find(|a| a.exact == Some(TernaryAngle { numer, level: 2 }))
                .unwrap()
                .weight
        };
        assert_eq!(weight_at(0), 0.25);
        assert_eq!(weight_at(1), 0.125);
        assert_eq!(weight_at(2), 0.0625);
        assert_eq!(weight_at(3), 0.125);
        assert_eq!(weight_at(4), 0.0625);
        assert!((set.folded_mass() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn sparse_square_level_eight_has_five_folded_atoms() {
        // Only m = 1 and m = 4 branch below level 8.
        let p = PSequence::example83(20).unwrap();
        let set = truncate_to_spectral(&p, 8).unwrap();
        assert_eq!(set.len(), 5);
        let numers: Vec<i64> = set
            .atoms()
            .iter()
            .map(|a| a.exact.unwrap().numer)
            .collect();
        assert_eq!(numers, vec![0, 81, 2106, 2187, 2268]);
        assert!((set.folded_mass() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn level_bounds_are_enforced() {
        let p = PSequence::constant(0.5, 20).unwrap();
        assert!(matches!(
            truncate_to_spectral(&p, 0),
            Err(CantorError::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            truncate_to_spectral(&p, 14),
            Err(CantorError::LevelOutOfRange { .. })
        ));
        let short = PSequence::constant(0.5, 3).unwrap();
        assert!(truncate_to_spectral(&short, 4).is_err());
    }

    #[test]
    fn hand_built_sets_must_balance_mass() {
        let bad = SpectralAtomSet::new(vec![
            SpectralAtom {
                t: 0.0,
                weight: 0.5,
                exact: None,
            },
            SpectralAtom {
                t: 0.2,
                weight: 0.2,
                exact: None,
            },
        ]);
        assert!(matches!(bad, Err(CantorError::MassMismatch { .. })));
        let good = SpectralAtomSet::new(vec![
            SpectralAtom {
                t: 0.0,
                weight: 0.6,
                exact: None,
            },
            SpectralAtom {
                t: 0.2,
                weight: 0.2,
                exact: None,
            },
        ])
        .unwrap();
        assert_eq!(good.zero_weight(), 0.6);
        let rule = PRule::List {
            values: vec![0.0],
            tail: 1.0,
        };
        let p = PSequence::new(rule, 8).unwrap();
        let set = truncate_to_spectral(&p, 2).unwrap();
        // Single digit +-1 at m = 1: folded atom at 1/3 with weight 1/2.
        assert_eq!(set.len(), 1);
        assert_eq!(set.atoms()[0].exact, Some(TernaryAngle { numer: 3, level: 2 }));
        assert_eq!(set.atoms()[0].weight, 0.5);
    }
}
