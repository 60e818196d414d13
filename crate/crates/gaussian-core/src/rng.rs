use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Number of independent substreams every Monte-Carlo estimator is split
/// over. Fixed so that results do not depend on how many worker threads
/// execute the substreams.
pub const SUBSTREAMS: u64 = 64;

/// Counter-based generator for substream `stream` of the run keyed by
/// `seed`. Streams with distinct ids never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Streaming mean/variance accumulator (Welford), mergeable across
/// substreams.
#[derive(Clone, Copy, Debug, Default)]
pub struct McAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl McAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Merges `other` into `self`. Merge order is fixed by the caller, so
    /// the combined state is reproducible.
    pub fn merge(&mut self, other: &McAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let delta = other.mean - self.mean;
        let n = n1 + n2;
        self.mean += delta * n2 / n;
        self.m2 += other.m2 + delta * delta * n1 * n2 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero until two samples are seen.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> McEstimate {
        McEstimate {
            value: self.mean(),
            std_error: self.std_error(),
            samples: self.count,
        }
    }
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Distance from `target` measured in standard errors; infinite when the
    /// estimate is degenerate but off target.
    pub fn sigmas_from(&self, target: f64) -> f64 {
        let diff = (self.value - target).abs();
        if diff == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.std_error
        }
    }
}

fn substream_lengths(total: u64) -> Vec<u64> {
    let base = total / SUBSTREAMS;
    let extra = total % SUBSTREAMS;
    (0..SUBSTREAMS).map(|i| base + u64::from(i < extra)).collect()
}

/// Runs `sample` once per draw, splitting `total` draws over the fixed
/// substream layout, and merges the per-stream accumulators in stream
/// order. The result is identical for any number of worker threads.
pub fn mc_over_substreams<F>(seed: u64, total: u64, sample: F) -> McAccumulator
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let lengths = substream_lengths(total);
    let partials: Vec<McAccumulator> = lengths
        .par_iter()
        .enumerate()
        .map(|(i, &len)| {
            let mut rng = stream_rng(seed, i as u64);
            let mut acc = McAccumulator::new();
            for _ in 0..len {
                acc.push(sample(&mut rng));
            }
            acc
        })
        .collect();
    let mut out = McAccumulator::new();
    for acc in &partials {
        out.merge(acc);
    }
    out
}

/// Like [`mc_over_substreams`] but each draw produces `width` correlated
/// components (for example the real and imaginary part of one integrand, or
/// the two sides of an identity evaluated on shared samples).
pub fn mc_over_substreams_vec<F>(seed: u64, total: u64, width: usize, sample: F) -> Vec<McAccumulator>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let lengths = substream_lengths(total);
    let partials: Vec<Vec<McAccumulator>> = lengths
        .par_iter()
        .enumerate()
        .map(|(i, &len)| {
            let mut rng = stream_rng(seed, i as u64);
            let mut accs = vec![McAccumulator::new(); width];
            let mut buf = vec![0.0; width];
            for _ in 0..len {
                sample(&mut rng, &mut buf);
                for (acc, &x) in accs.iter_mut().zip(buf.iter()) {
                    acc.push(x);
                }
            }
            accs
        })
        .collect();
    let mut out = vec![McAccumulator::new(); width];
    for accs in &partials {
        for (o, a) in out.iter_mut().zip(accs.iter()) {
            o.merge(a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn substream_lengths_cover_total() {
        let lens = substream_lengths(1_000_003);
        assert_eq!(lens.iter().sum::<u64>(), 1_000_003);
        assert_eq!(lens.len() as u64, SUBSTREAMS);
    }

    #[test]
    fn accumulator_merge_matches_sequential() {
        let mut rng = stream_rng(11, 0);
        let xs: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
        let mut whole = McAccumulator::new();
        for &x in &xs {
            whole.push(x);
        }
        let mut left = McAccumulator::new();
        let mut right = McAccumulator::new();
        for &x in &xs[..400] {
            left.push(x);
        }
        for &x in &xs[400..] {
            right.push(x);
        }
        left.merge(&right);
        assert!((whole.mean() - left.mean()).abs() < 1e-12);
        assert!((whole.variance() - left.variance()).abs() < 1e-12);
    }

    #[test]
    fn mc_result_independent_of_thread_count() {
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| mc_over_substreams(7, 100_000, |rng| rng.random::<f64>()))
        };
        let a = run(1);
        let b = run(8);
        assert_eq!(a.mean().to_bits(), b.mean().to_bits());
        assert_eq!(a.variance().to_bits(), b.variance().to_bits());
    }
}
