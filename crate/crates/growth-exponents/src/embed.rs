use std::collections::HashMap;

use crate::error::{GrowthError, Result};

/// Ball-size cap for the explicit embedding; the validation is a desk-scale
/// certificate, not a production path.
const MAX_BALL_ELEMENTS: usize = 20_000;

/// Result of materializing the edge-indicator embedding on a ball.
#[derive(Debug, Clone, Copy)]
pub struct EdgeIndicatorCheck {
    pub n_gens: u32,
    pub radius: u32,
    /// Number of reduced words enumerated.
    pub elements: usize,
    /// Unordered pairs compared.
    pub pairs_checked: usize,
    /// Max of `| |c_g|^2 - |g| |` over the ball; integer arithmetic, so any
    /// nonzero value is a genuine failure.
    pub max_norm_error: u64,
    /// Max of `| |i(g) - i(h)|^2 - d(g, h) |` over all pairs.
    pub max_pair_error: u64,
}

impl EdgeIndicatorCheck {
    /// True when the negative-type identity held exactly everywhere.
    pub fn exact(&self) -> bool {
        self.max_norm_error == 0 && self.max_pair_error == 0
    }
}

fn inverse(letter: u8) -> u8 {
    letter ^ 1
}

/// Concatenates two reduced words and cancels at the seam.
fn reduced_product(g: &[u8], h: &[u8]) -> Vec<u8> {
    let mut out = g.to_vec();
    for &letter in h {
        if out.last() == Some(&inverse(letter)) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    out
}

fn word_inverse(g: &[u8]) -> Vec<u8> {
    g.iter().rev().map(|&l| inverse(l)).collect()
}

/// All reduced words of length at most `radius`, by breadth-first extension.
fn enumerate_ball(n_gens: u32, radius: u32) -> Vec<Vec<u8>> {
    let letters: Vec<u8> = (0..2 * n_gens as u8).collect();
    let mut ball: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(frontier.len() * (letters.len() - 1));
        for word in &frontier {
            for &letter in &letters {
                if word.last() == Some(&inverse(letter)) {
                    continue;
                }
                let mut extended = word.clone();
                extended.push(letter);
                next.push(extended);
            }
        }
        ball.extend(next.iter().cloned());
        frontier = next;
    }
    ball
}

/// Accumulates the edge coefficients of `i(g) - i(h)` and returns the squared
/// norm. Each non-root vertex names the edge to its parent, so `i(g)` is the
/// sum of indicators over the proper prefixes of `g` extended by one letter.
fn pair_norm_sq(g: &[u8], h: &[u8]) -> u64 {
    let mut coeffs: HashMap<&[u8], i64> = HashMap::new();
    for end in 1..=g.len() {
        *coeffs.entry(&g[..end]).or_insert(0) += 1;
    }
    for end in 1..=h.len() {
        *coeffs.entry(&h[..end]).or_insert(0) -= 1;
    }
    coeffs.values().map(|&c| (c * c) as u64).sum()
}

/// Materializes the edge-indicator embedding of the Cayley tree on a ball and
/// checks the negative-type identity `|i(g) - i(h)|^2 = d(g, h)` exactly,
/// including the basepoint case `|c_g|^2 = |g|`.
///
/// Every estimator in this crate represents the tree action through radial
/// counts only; this is the one place the underlying Hilbert-space embedding
/// is built coordinate by coordinate to certify that representation.
pub fn edge_indicator_validation(n_gens: u32, radius: u32) -> Result<EdgeIndicatorCheck> {
    if n_gens < 2 {
        return Err(GrowthError::InvalidParameter {
            name: "n_gens",
            reason: format!("free-group rank must be >= 2, got {n_gens}"),
        });
    }
    if radius == 0 {
        return Err(GrowthError::InvalidParameter {
            name: "radius",
            reason: "radius must be >= 1".into(),
        });
    }
    let ball = enumerate_ball(n_gens, radius);
    if ball.len() > MAX_BALL_ELEMENTS {
        return Err(GrowthError::InvalidParameter {
            name: "radius",
            reason: format!(
                "ball holds {} elements, cap is {MAX_BALL_ELEMENTS}",
                ball.len()
            ),
        });
    }
    let empty: Vec<u8> = Vec::new();
    let mut max_norm_error = 0u64;
    for g in &ball {
        let norm_sq = pair_norm_sq(g, &empty);
        max_norm_error = max_norm_error.max(norm_sq.abs_diff(g.len() as u64));
    }
    let mut max_pair_error = 0u64;
    let mut pairs_checked = 0usize;
    for (i, g) in ball.iter().enumerate() {
        let g_inv = word_inverse(g);
        for h in &ball[i + 1..] {
            let distance = reduced_product(&g_inv, h).len() as u64;
            let norm_sq = pair_norm_sq(g, h);
            max_pair_error = max_pair_error.max(norm_sq.abs_diff(distance));
            pairs_checked += 1;
        }
    }
    Ok(EdgeIndicatorCheck {
        n_gens,
        radius,
        elements: ball.len(),
        pairs_checked,
        max_norm_error,
        max_pair_error,
    })
}
