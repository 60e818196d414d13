use crate::error::{GaussError, Result};
use crate::maharam::MaharamPoint;
use crate::vector::RealVector;

/// An affine isometric action of the integers on `R^d`: an orthogonal part
/// `pi(a)` and a cocycle `c_a` satisfying `c_{a+b} = c_a + pi(a) c_b`.
/// The scaled family `x -> pi(a) x + t c_a` shares the same data for every
/// coupling `t`, so implementations expose the unscaled cocycle.
pub trait ZAffineAction {
    fn dim(&self) -> usize;

    /// `pi(a) x`.
    fn apply_linear(&self, a: i64, x: &RealVector) -> RealVector;

    /// The unscaled cocycle `c_a`.
    fn cocycle(&self, a: i64) -> RealVector;
}

/// Log Radon-Nikodym derivative `log d(a^{-1} mu)/d mu` of the coupling-`u`
/// action at `x`: `-u^2 ||c_a||^2 / 2 + u <x, c_{-a}>`.
pub fn rn_log_scaled<A: ZAffineAction + ?Sized>(action: &A, u: f64, a: i64, x: &RealVector) -> f64 {
    let ca = action.cocycle(a);
    let cneg = action.cocycle(-a);
    -0.5 * u * u * ca.norm_sq() + u * x.dot(&cneg)
}

/// `pi(a) x + u c_a`, the coupling-`u` affine action.
pub fn apply_scaled<A: ZAffineAction + ?Sized>(action: &A, u: f64, a: i64, x: &RealVector) -> RealVector {
    action.apply_linear(a, x).add(&action.cocycle(a).scale(u))
}

/// One step of the Maharam extension of the coupling-`u` action:
/// `(x, t) -> (a . x, t + log rn(a, x))`.
pub fn maharam_step<A: ZAffineAction + ?Sized>(
    action: &A,
    u: f64,
    a: i64,
    p: &MaharamPoint,
) -> MaharamPoint {
    MaharamPoint {
        x: apply_scaled(action, u, a, &p.x),
        t: p.t + rn_log_scaled(action, u, a, &p.x),
    }
}

/// Fixed interior heights for the Maharam-extension comparison; the
/// identity holds pointwise in these coordinates, so any values do.
const MAHARAM_HEIGHTS: (f64, f64) = (0.3, -0.45);

/// Checks two exact conjugacies between scaled copies of an affine action,
/// for a point `(p, q)` on the unit circle, and returns the largest
/// coordinate deviation over both.
///
/// First, with `R(x, y) = (p x - q y, q x + p y)` on the doubled space:
/// `(alpha^p_a x alpha^q_a) (R(x, y)) = R(alpha_a x, pi_a y)`.
///
/// Second, on Maharam extensions: with
/// `Xi(w, s, w', s') = (p w - q w', p^2 s + p q s', q w + p w', q^2 s - p q s')`
/// and the reflected skew product `beta_a(w, s) = (pi_a w, s - <w, c_{-a}>)`,
/// the product of the coupling-`p` and coupling-`q` Maharam extensions
/// satisfies `(sigma^p_a x sigma^q_a) Xi = Xi (sigma_a x beta_a)`.
pub fn rotation_conjugacy_check<A: ZAffineAction + ?Sized>(
    action: &A,
    p: f64,
    q: f64,
    x: &RealVector,
    y: &RealVector,
    a: i64,
) -> Result<f64> {
    let norm_sq = p * p + q * q;
    if (norm_sq - 1.0).abs() > 1e-12 {
        return Err(GaussError::NotOnUnitCircle { norm_sq });
    }
    let d = action.dim();
    if x.dim() != d {
        return Err(GaussError::DimensionMismatch { expected: d, got: x.dim() });
    }
    if y.dim() != d {
        return Err(GaussError::DimensionMismatch { expected: d, got: y.dim() });
    }

    let mut worst = 0.0f64;
    let mut track = |u: &RealVector, v: &RealVector| {
        for (a_, b_) in u.coords().iter().zip(v.coords()) {
            worst = worst.max((a_ - b_).abs());
        }
    };

    // Plain rotation trick.
    let rx = x.scale(p).sub(&y.scale(q));
    let ry = x.scale(q).add(&y.scale(p));
    let lhs1 = apply_scaled(action, p, a, &rx);
    let lhs2 = apply_scaled(action, q, a, &ry);
    let ax = apply_scaled(action, 1.0, a, x);
    let py = action.apply_linear(a, y);
    let rhs1 = ax.scale(p).sub(&py.scale(q));
    let rhs2 = ax.scale(q).add(&py.scale(p));
    track(&lhs1, &rhs1);
    track(&lhs2, &rhs2);

    // Maharam extensions.
    let (s, s2) = MAHARAM_HEIGHTS;
    let xi_map = |w: &RealVector, s: f64, w2: &RealVector, s2: f64| {
        (
            MaharamPoint { x: w.scale(p).sub(&w2.scale(q)), t: p * p * s + p * q * s2 },
            MaharamPoint { x: w.scale(q).add(&w2.scale(p)), t: q * q * s - p * q * s2 },
        )
    };
    let (u1, u2) = xi_map(x, s, y, s2);
    let lhs_m1 = maharam_step(action, p, a, &u1);
    let lhs_m2 = maharam_step(action, q, a, &u2);

    let sig = maharam_step(action, 1.0, a, &MaharamPoint { x: x.clone(), t: s });
    let beta = MaharamPoint {
        x: action.apply_linear(a, y),
        t: s2 - y.dot(&action.cocycle(-a)),
    };
    let (rhs_m1, rhs_m2) = xi_map(&sig.x, sig.t, &beta.x, beta.t);

    track(&lhs_m1.x, &rhs_m1.x);
    track(&lhs_m2.x, &rhs_m2.x);
    worst = worst.max((lhs_m1.t - rhs_m1.t).abs());
    worst = worst.max((lhs_m2.t - rhs_m2.t).abs());

    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal concrete action: one rotation block with a translation part.
    struct BlockAction {
        angle: f64,
        gen: [f64; 2],
    }

    impl ZAffineAction for BlockAction {
        fn dim(&self) -> usize {
            2
        }

        fn apply_linear(&self, a: i64, x: &RealVector) -> RealVector {
            let th = self.angle * a as f64;
            let (s, c) = th.sin_cos();
            RealVector::new(vec![c * x[0] - s * x[1], s * x[0] + c * x[1]])
        }

        fn cocycle(&self, a: i64) -> RealVector {
            // c_a = sum_{k=0}^{a-1} pi(k) c_1, extended to negative a by
            // c_{-a} = -pi(-a) c_a.
            let mut acc = [0.0f64; 2];
            let (steps, sign, base) = if a >= 0 { (a, 1.0, 0) } else { (-a, -1.0, a) };
            for k in 0..steps {
                let th = self.angle * (base + k) as f64;
                let (s, c) = th.sin_cos();
                acc[0] += sign * (c * self.gen[0] - s * self.gen[1]);
                acc[1] += sign * (s * self.gen[0] + c * self.gen[1]);
            }
            RealVector::new(vec![acc[0], acc[1]])
        }
    }

    #[test]
    fn cocycle_identity_holds() {
        let act = BlockAction { angle: 1.234, gen: [0.7, -0.2] };
        for (a, b) in [(3i64, 4i64), (-2, 5), (6, -6), (-3, -1)] {
            let lhs = act.cocycle(a + b);
            let rhs = act.cocycle(a).add(&act.apply_linear(a, &act.cocycle(b)));
            assert!(lhs.sub(&rhs).norm() < 1e-12, "a={a} b={b}");
        }
    }

    #[test]
    fn conjugacies_are_exact() {
        let act = BlockAction { angle: 0.9273, gen: [0.4, 0.1] };
        let x = RealVector::new(vec![0.8, -0.3]);
        let y = RealVector::new(vec![-0.5, 1.2]);
        let err = rotation_conjugacy_check(&act, 0.6, 0.8, &x, &y, 7).unwrap();
        assert!(err < 1e-9, "conjugacy deviation {err}");
    }

    #[test]
    fn off_circle_pq_rejected() {
        let act = BlockAction { angle: 0.5, gen: [0.0, 0.0] };
        let x = RealVector::zeros(2);
        let err = rotation_conjugacy_check(&act, 0.6, 0.9, &x, &x, 1);
        assert!(matches!(err, Err(GaussError::NotOnUnitCircle { .. })));
    }
}
