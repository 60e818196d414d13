use crate::error::Result;
use crate::psequence::PSequence;

const LN_3: f64 = 1.0986122886681098;

/// Iterator over the coboundary series terms
/// `r_m = 3^{2m} p_1 ... p_{m-1} (1 - p_m)`.
///
/// The prefix product is carried as a compensated sum of logarithms, so
/// ten thousand near-unit factors lose no relative accuracy.  A zero
/// probability sends the prefix to `-inf` and every later term to zero; a
/// genuinely divergent sequence may overflow a term to `+inf`, which callers
/// treat as a divergence witness rather than an error.
pub struct RTerms<'a> {
    p: &'a PSequence,
    m: u64,
    log_prefix: f64,
    comp: f64,
}

impl<'a> RTerms<'a> {
    pub fn new(p: &'a PSequence) -> Self {
        Self {
            p,
            m: 0,
            log_prefix: 0.0,
            comp: 0.0,
        }
    }

    /// Index of the term the next `next()` call will produce.
    pub fn next_index(&self) -> u64 {
        self.m + 1
    }
}

impl Iterator for RTerms<'_> {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Self::Item> {
        self.m += 1;
        let pm = match self.p.p(self.m) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let weight = 1.0 - pm;
        let r = if weight == 0.0 || self.log_prefix == f64::NEG_INFINITY {
            0.0
        } else if self.m <= 322 {
            // 9^m still finite here; keeps small cases exact.
            9f64.powi(self.m as i32) * self.log_prefix.exp() * weight
        } else {
            (2.0 * self.m as f64 * LN_3 + self.log_prefix).exp() * weight
        };
        if pm == 0.0 {
            self.log_prefix = f64::NEG_INFINITY;
        } else if self.log_prefix.is_finite() {
            let y = pm.ln() - self.comp;
            let t = self.log_prefix + y;
            self.comp = (t - self.log_prefix) - y;
            self.log_prefix = t;
        }
        Some(Ok(r))
    }
}

/// Single term `r_m`.
pub fn r_term(p: &PSequence, m: u64) -> Result<f64> {
    let mut it = RTerms::new(p);
    let mut last = 0.0;
    for _ in 0..m {
        last = it.next().expect("RTerms is infinite")?;
    }
    Ok(last)
}

/// Partial sums `(m, r_1 + ... + r_m)` for `m = 1..=cutoff`, compensated.
pub fn r_partial_sums(p: &PSequence, cutoff: u64) -> Result<Vec<(u64, f64)>> {
    let mut out = Vec::with_capacity(cutoff as usize);
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
        out.push((i as u64 + 1, sum));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero_gives_single_term_nine() {
        let p = PSequence::constant(0.0, 100).unwrap();
        let sums = r_partial_sums(&p, 50).unwrap();
        assert_eq!(r_term(&p, 1).unwrap(), 9.0);
        assert_eq!(r_term(&p, 2).unwrap(), 0.0);
        assert_eq!(sums.last().unwrap().1, 9.0);
    }

    #[test]
    fn constant_rule_matches_geometric_closed_form() {
        let p = PSequence::constant(0.25, 100).unwrap();
        for m in 1..=20u64 {
            // r_m = 9 (1 - p) (9p)^{m-1}.
            let expect = 9.0 * 0.75 * (9.0 * 0.25f64).powi(m as i32 - 1);
            let got = r_term(&p, m).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn sparse_square_partial_sum_matches_reference() {
        // r_{k^2} = 9 (1 - p_{k^2}) / k and zero off squares; the partial sum
        // through m = 900 is essentially 9 H_30.
        let p = PSequence::example83(1000).unwrap();
        assert_eq!(r_term(&p, 2).unwrap(), 0.0);
        let r4 = r_term(&p, 4).unwrap();
        let expect_r4 = 9.0 * (1.0 - p.p(4).unwrap()) / 2.0;
        assert!((r4 - expect_r4).abs() <= 1e-12 * expect_r4);
        let sums = r_partial_sums(&p, 900).unwrap();
        let total = sums.last().unwrap().1;
        assert!((total - 35.94866005840039).abs() <= 1e-10);
    }

    #[test]
    fn divergent_sequence_overflows_to_infinity() {
        let p = PSequence::constant(0.99, 2000).unwrap();
        let sums = r_partial_sums(&p, 2000).unwrap();
        assert!(sums.last().unwrap().1.is_infinite());
        assert!(sums[0].1.is_finite());
    }
}
