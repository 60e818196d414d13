use std::f64::consts::{PI, TAU};

use cantor_spectral::{SpectralAtomSet, TernaryAngle};
use gaussian_core::{apply_scaled, rn_log_scaled, RealVector, ZAffineAction};
use num_complex::Complex64;

use crate::error::{DynError, Result};

/// Largest frequency accepted by the closed-form cocycle evaluators; keeps
/// `a * numer` exactly representable in the ternary angle reduction.
pub const MAX_FREQUENCY: i64 = 1 << 40;

/// Deepest exact ternary angle; `|a| * 3^level` stays well inside `i128`.
pub const MAX_TURNS_LEVEL: u32 = 40;

/// A rotation angle measured in turns (fractions of a full circle).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Turns {
    /// Exactly `numer / 3^level` turns; multiples reduce by integer
    /// remainder, so rational relations like `3^level * angle = 0 (mod 1)`
    /// hold bitwise.
    Ternary { numer: i64, level: u32 },
    /// Arbitrary real turns, reduced in floating point; multiples of large
    /// frequencies lose precision at the usual `|a| * eps` rate.
    Real(f64),
}

impl Turns {
    /// `a` times the angle, reduced to `[0, 1)` turns.
    pub fn times_mod_1(&self, a: i64) -> f64 {
        match *self {
            Turns::Ternary { numer, level } => {
                let modulus = 3i128.pow(level);
                let r = (i128::from(a) * i128::from(numer)).rem_euclid(modulus);
                r as f64 / modulus as f64
            }
            Turns::Real(t) => {
                let f = (a as f64 * t).rem_euclid(1.0);
                // rem_euclid may round up to the modulus for tiny negatives.
                if f >= 1.0 {
                    0.0
                } else {
                    f
                }
            }
        }
    }
}

/// One orthogonal block of the representation together with its component
/// of the generator cocycle `c_1`.
#[derive(Clone, Debug)]
pub enum Block {
    /// A 2-dimensional rotation by `turns` per generator step; `gen` is the
    /// `c_1`-component in the block's complex coordinate `x_1 + i x_2`.
    Rotation { turns: Turns, gen: Complex64 },
    /// A 1-dimensional fixed coordinate; `c_1` contributes `gen` there.
    Trivial { gen: f64 },
}

impl Block {
    fn dim(&self) -> usize {
        match self {
            Block::Rotation { .. } => 2,
            Block::Trivial { .. } => 1,
        }
    }
}

/// `C_a = 1 + lambda + ... + lambda^{a-1}` for `lambda = e^{2 pi i f}` (the
/// geometric sum extended to all integers), evaluated in closed form as
///
/// ```text
/// C_a = sin(pi f_a) e^{i pi f_a} / (sin(pi f_1) e^{i pi f_1}),
/// ```
///
/// where `f_a = a f mod 1`. Both factors are `2 pi`-periodic in the angle,
/// so the reduction is exact; in particular `C_a = 0` bitwise whenever the
/// reduced `f_a` is exactly zero, and `C_a = a` for the trivial angle.
fn rotation_multiplier(turns: Turns, a: i64) -> Complex64 {
    let f1 = turns.times_mod_1(1);
    if f1 == 0.0 {
        return Complex64::new(a as f64, 0.0);
    }
    let fa = turns.times_mod_1(a);
    let num = Complex64::from_polar((PI * fa).sin(), PI * fa);
    let den = Complex64::from_polar((PI * f1).sin(), PI * f1);
    num / den
}

/// An affine action of the integers on `R^d`: an orthogonal block rotation
/// `pi(a)` plus the translation `scale * c_a`, where `c` is the cocycle
/// generated by the per-block components of `c_1`. Everything about step
/// `a` is evaluated in closed form per block, never by composing `a` maps.
#[derive(Clone, Debug)]
pub struct AffineZAction {
    blocks: Vec<Block>,
    scale: f64,
    dim: usize,
}

impl AffineZAction {
    pub fn new(blocks: Vec<Block>, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(DynError::InvalidParameter {
                name: "scale",
                reason: format!("must be finite and >= 0, got {scale}"),
            });
        }
        if blocks.is_empty() {
            return Err(DynError::InvalidParameter {
                name: "blocks",
                reason: "at least one block is required".into(),
            });
        }
        for block in &blocks {
            match block {
                Block::Rotation { turns, gen } => {
                    if !(gen.re.is_finite() && gen.im.is_finite()) {
                        return Err(DynError::InvalidParameter {
                            name: "gen",
                            reason: "rotation generator component must be finite".into(),
                        });
                    }
                    match *turns {
                        Turns::Ternary { level, .. } => {
                            if level == 0 || level > MAX_TURNS_LEVEL {
                                return Err(DynError::InvalidParameter {
                                    name: "turns",
                                    reason: format!(
                                        "ternary level {level} outside 1..={MAX_TURNS_LEVEL}"
                                    ),
                                });
                            }
                        }
                        Turns::Real(t) => {
                            if !t.is_finite() {
                                return Err(DynError::InvalidParameter {
                                    name: "turns",
                                    reason: "real angle must be finite".into(),
                                });
                            }
                        }
                    }
                }
                Block::Trivial { gen } => {
                    if !gen.is_finite() {
                        return Err(DynError::InvalidParameter {
                            name: "gen",
                            reason: "trivial generator component must be finite".into(),
                        });
                    }
                }
            }
        }
        let dim = blocks.iter().map(Block::dim).sum();
        Ok(Self { blocks, scale, dim })
    }

    /// Realizes a folded spectral measure: one trivial coordinate for the
    /// atom at `t = 0` with `c_1`-component `sqrt(w_0)`, and one rotation
    /// block per atom `t > 0` with component `sqrt(2 w)` (the two signs
    /// folded into one complex coordinate). Exact ternary positions become
    /// exact ternary angles.
    pub fn from_spectral(atoms: &SpectralAtomSet, scale: f64) -> Result<Self> {
        let blocks = atoms
            .atoms()
            .iter()
            .map(|atom| {
                if atom.t == 0.0 {
                    Block::Trivial {
                        gen: atom.weight.sqrt(),
                    }
                } else {
                    let turns = match atom.exact {
                        Some(TernaryAngle { numer, level }) => Turns::Ternary { numer, level },
                        None => Turns::Real(atom.t),
                    };
                    Block::Rotation {
                        turns,
                        gen: Complex64::new((2.0 * atom.weight).sqrt(), 0.0),
                    }
                }
            })
            .collect();
        Self::new(blocks, scale)
    }

    /// A copy whose cocycle vanishes on the fixed blocks. Removing the
    /// drift component leaves `c_1` orthogonal to the invariant vectors,
    /// the recurrent regime for the associated skew product.
    pub fn without_trivial_drift(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|block| match block {
                Block::Trivial { .. } => Block::Trivial { gen: 0.0 },
                other => other.clone(),
            })
            .collect();
        Self {
            blocks,
            scale: self.scale,
            dim: self.dim,
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// The generator cocycle `c_1` in block coordinates.
    pub fn cocycle_gen(&self) -> RealVector {
        self.cocycle(1)
    }

    pub fn check_frequency(a: i64) -> Result<()> {
        if a.abs() > MAX_FREQUENCY {
            Err(DynError::FrequencyTooLarge { a })
        } else {
            Ok(())
        }
    }

    fn check_point(&self, a: i64, x: &RealVector) -> Result<()> {
        Self::check_frequency(a)?;
        if x.dim() != self.dim {
            return Err(DynError::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// `a . x = pi(a) x + scale * c_a`.
    pub fn act(&self, a: i64, x: &RealVector) -> Result<RealVector> {
        self.check_point(a, x)?;
        Ok(apply_scaled(self, self.scale, a, x))
    }

    /// `log omega(a, x) = log d(a^{-1} mu)/d mu (x)` for the scaled action:
    /// `-||scale * c_a||^2 / 2 + <x, scale * c_{-a}>`.
    pub fn rn_log(&self, a: i64, x: &RealVector) -> Result<f64> {
        self.check_point(a, x)?;
        Ok(rn_log_scaled(self, self.scale, a, x))
    }

    /// `||c_a||^2` of the unscaled cocycle, summed per block in closed form.
    pub fn cocycle_norm_sq(&self, a: i64) -> Result<f64> {
        Self::check_frequency(a)?;
        Ok(self
            .blocks
            .iter()
            .map(|block| match block {
                Block::Rotation { turns, gen } => {
                    (rotation_multiplier(*turns, a) * gen).norm_sqr()
                }
                Block::Trivial { gen } => {
                    let v = a as f64 * gen;
                    v * v
                }
            })
            .sum())
    }
}

impl ZAffineAction for AffineZAction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_linear(&self, a: i64, x: &RealVector) -> RealVector {
        assert_eq!(x.dim(), self.dim, "dimension mismatch in apply_linear");
        let xs = x.coords();
        let mut out = Vec::with_capacity(self.dim);
        let mut i = 0;
        for block in &self.blocks {
            match block {
                Block::Rotation { turns, .. } => {
                    let (s, c) = (TAU * turns.times_mod_1(a)).sin_cos();
                    out.push(c * xs[i] - s * xs[i + 1]);
                    out.push(s * xs[i] + c * xs[i + 1]);
                    i += 2;
                }
                Block::Trivial { .. } => {
                    out.push(xs[i]);
                    i += 1;
                }
            }
        }
        RealVector::new(out)
    }

    fn cocycle(&self, a: i64) -> RealVector {
        let mut out = Vec::with_capacity(self.dim);
        for block in &self.blocks {
            match block {
                Block::Rotation { turns, gen } => {
                    let z = rotation_multiplier(*turns, a) * gen;
                    out.push(z.re);
                    out.push(z.im);
                }
                Block::Trivial { gen } => out.push(a as f64 * gen),
            }
        }
        RealVector::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cantor_spectral::{truncate_to_spectral, PSequence};
    use gaussian_core::stream_rng;
    use rand::Rng;

    fn sample_action(seed: u64) -> AffineZAction {
        let mut rng = stream_rng(seed, 0);
        let mut blocks = vec![Block::Trivial {
            gen: rng.random::<f64>() - 0.5,
        }];
        for _ in 0..3 {
            blocks.push(Block::Rotation {
                turns: Turns::Real(rng.random::<f64>()),
                gen: Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            });
        }
        AffineZAction::new(blocks, 0.7).unwrap()
    }

    #[test]
    fn ternary_turns_reduce_exactly() {
        let t = Turns::Ternary { numer: 7, level: 4 };
        assert_eq!(t.times_mod_1(81), 0.0);
        assert_eq!(t.times_mod_1(-81), 0.0);
        // 7 * 35 = 245 = 3 * 81 + 2 mod 81.
        assert_eq!(t.times_mod_1(35), 2.0 / 81.0);
        assert_eq!(t.times_mod_1(-1), 74.0 / 81.0);
    }

    #[test]
    fn multiplier_matches_geometric_sum() {
        for &turns in &[
            Turns::Ternary { numer: 5, level: 3 },
            Turns::Real(0.137),
            Turns::Real(std::f64::consts::SQRT_2 - 1.0),
        ] {
            let lambda = Complex64::from_polar(1.0, TAU * turns.times_mod_1(1));
            for a in [-7i64, -1, 0, 1, 2, 9] {
                let direct = if a >= 0 {
                    (0..a).map(|k| lambda.powi(k as i32)).sum::<Complex64>()
                } else {
                    -(1..=-a).map(|k| lambda.powi(-(k as i32))).sum::<Complex64>()
                };
                let closed = rotation_multiplier(turns, a);
                assert!(
                    (closed - direct).norm() <= 1e-12 * (1.0 + direct.norm()),
                    "turns {turns:?} a {a}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn multiplier_vanishes_bitwise_at_full_periods() {
        let turns = Turns::Ternary {
            numer: 26,
            level: 4,
        };
        for k in 1..=5i64 {
            let z = rotation_multiplier(turns, 81 * k);
            assert_eq!(z, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn cocycle_identity_holds() {
        let action = sample_action(11);
        let mut rng = stream_rng(11, 1);
        for _ in 0..200 {
            let a = rng.random_range(-50i64..=50);
            let b = rng.random_range(-50i64..=50);
            let lhs = action.cocycle(a + b);
            let rhs = action.cocycle(a).add(&action.apply_linear(a, &action.cocycle(b)));
            assert!(lhs.sub(&rhs).norm() <= 1e-10, "a {a} b {b}");
        }
    }

    #[test]
    fn act_at_zero_is_identity_and_rn_log_zero() {
        let action = sample_action(3);
        let x = RealVector::new(vec![0.3, -1.2, 0.8, 0.1, 2.0, -0.7, 0.4]);
        assert_eq!(action.act(0, &x).unwrap(), x);
        assert_eq!(action.rn_log(0, &x).unwrap(), 0.0);
    }

    #[test]
    fn pmp_scale_zero_has_zero_rn_log() {
        let mut action = sample_action(5);
        action.scale = 0.0;
        let x = RealVector::new(vec![0.3, -1.2, 0.8, 0.1, 2.0, -0.7, 0.4]);
        for a in [-9i64, 1, 4, 23] {
            assert_eq!(action.rn_log(a, &x).unwrap(), 0.0);
        }
    }

    #[test]
    fn frequency_guard_trips() {
        let action = sample_action(7);
        let x = RealVector::zeros(action.dim());
        let err = action.act(MAX_FREQUENCY + 1, &x).unwrap_err();
        assert!(matches!(err, DynError::FrequencyTooLarge { .. }));
    }

    #[test]
    fn dimension_guard_trips() {
        let action = sample_action(7);
        let err = action.rn_log(1, &RealVector::zeros(2)).unwrap_err();
        assert!(matches!(err, DynError::DimensionMismatch { .. }));
    }

    #[test]
    fn spectral_norms_match_atom_sums() {
        // Truncated sparse-square measure at level 8: the block closed form
        // must reproduce the independently computed atom sums.
        let p = PSequence::example83(64).unwrap();
        let atoms = truncate_to_spectral(&p, 8).unwrap();
        let action = AffineZAction::from_spectral(&atoms, 1.0).unwrap();
        let n1 = action.cocycle_norm_sq(1).unwrap();
        assert!((n1 - 1.0).abs() <= 1e-12, "{n1}");
        let n3 = action.cocycle_norm_sq(3).unwrap();
        assert!((n3 - 0.024159817645871413).abs() <= 1e-12, "{n3}");
        // All reduced rotation angles have denominator 81, so once the
        // drift block is removed the cocycle vanishes bitwise at multiples.
        let centered = action.without_trivial_drift();
        assert_eq!(centered.cocycle_norm_sq(81).unwrap(), 0.0);
        assert_eq!(centered.cocycle_norm_sq(-6561).unwrap(), 0.0);
    }
}
