//! Seeded Monte Carlo over TPM trajectories.
//!
//! Sample `j` is always drawn from the 64-bit word at counter position `2j` of
//! one ChaCha8 stream keyed by the seed, so the drawn sequence does not depend
//! on how samples are split across workers. Each worker seeks to the start of
//! its contiguous block and tallies outcome counts; counts are merged in
//! ascending worker order and every estimator is computed from the merged
//! counts in the fixed outcome order (+,+), (+,−), (−,+), (−,−).

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubit::Sign;
use crate::tpm::{free_energy_difference, joint_distribution, ProtocolSpec, MAX_MOMENT_ORDER};

const OUTCOMES: [(Sign, Sign); 4] = [
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
    (Sign::Minus, Sign::Minus),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    seed: u64,
    samples: u64,
    workers: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, samples: u64, workers: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidConfig("samples must be >= 1".into()));
        }
        if workers == 0 {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        Ok(Self { seed, samples, workers })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Half-open sample index ranges, one per worker.
    fn blocks(&self) -> Vec<(u64, u64)> {
        let w = self.workers as u64;
        let base = self.samples / w;
        let extra = self.samples % w;
        let mut start = 0;
        (0..w)
            .map(|i| {
                let len = base + u64::from(i < extra);
                let block = (start, start + len);
                start += len;
                block
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub n: Sign,
    pub m: Sign,
    pub work: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimator: String,
    pub mean: f64,
    /// Sample standard deviation (unbiased) over `sqrt(N)`; 0 when `N = 1`.
    pub std_error: f64,
    pub samples: u64,
    /// False when `N = 1` and the standard error is undefined.
    pub std_error_defined: bool,
}

/// Tallies of the four outcomes in the fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutcomeCounts(pub [u64; 4]);

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn frequency(&self, n: Sign, m: Sign) -> f64 {
        self.0[outcome_index(n, m)] as f64 / self.total() as f64
    }
}

fn outcome_index(n: Sign, m: Sign) -> usize {
    2 * n.index() + m.index()
}

struct InverseCdf {
    cumulative: [f64; 4],
    fallback: usize,
}

impl InverseCdf {
    fn new(spec: &ProtocolSpec) -> Self {
        let joint = joint_distribution(spec);
        let mut cumulative = [0.0; 4];
        let mut acc = 0.0;
        let mut fallback = 0;
        for (i, &(n, m)) in OUTCOMES.iter().enumerate() {
            let p = joint.get(n, m);
            acc += p;
            cumulative[i] = acc;
            if p > 0.0 {
                fallback = i;
            }
        }
        Self { cumulative, fallback }
    }

    fn pick(&self, u: f64) -> usize {
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.fallback)
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn block_rng(seed: u64, start: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * u128::from(start));
    rng
}

/// Runs `job` on every block, in parallel when `workers > 1`; results come back
/// in ascending worker order.
fn per_block<T, F>(cfg: &SamplerConfig, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let blocks = cfg.blocks();
    if blocks.len() == 1 {
        return blocks.iter().map(|&(s, e)| job(s, e)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = blocks
            .iter()
            .map(|&(s, e)| {
                let job = &job;
                scope.spawn(move || job(s, e))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampler worker panicked")).collect()
    })
}

/// Draws `N` i.i.d. outcome pairs from the joint TPM distribution.
pub fn sample_trajectories(spec: &ProtocolSpec, cfg: &SamplerConfig) -> Vec<TrajectorySample> {
    let cdf = InverseCdf::new(spec);
    per_block(cfg, |start, end| {
        let mut rng = block_rng(cfg.seed, start);
        (start..end)
            .map(|_| {
                let (n, m) = OUTCOMES[cdf.pick(uniform(&mut rng))];
                TrajectorySample { n, m, work: spec.work(n, m) }
            })
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Outcome counts over the same draws [`sample_trajectories`] would produce.
pub fn count_outcomes(spec: &ProtocolSpec, cfg: &SamplerConfig) -> OutcomeCounts {
    let cdf = InverseCdf::new(spec);
    let partial = per_block(cfg, |start, end| {
        let mut rng = block_rng(cfg.seed, start);
        let mut counts = [0u64; 4];
        for _ in start..end {
            counts[cdf.pick(uniform(&mut rng))] += 1;
        }
        counts
    });
    let mut total = [0u64; 4];
    for counts in partial {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    OutcomeCounts(total)
}

/// Sample mean and standard error of `f(n, m)` over tallied outcomes.
fn estimate(name: String, counts: &OutcomeCounts, value: impl Fn(Sign, Sign) -> f64) -> EstimateReport {
    let n = counts.total();
    let values: Vec<f64> = OUTCOMES.iter().map(|&(a, b)| value(a, b)).collect();
    let mut sum = 0.0;
    for (c, v) in counts.0.iter().zip(&values) {
        if *c > 0 {
            sum += *c as f64 * v;
        }
    }
    let mean = sum / n as f64;
    let (std_error, defined) = if n > 1 {
        let mut ss = 0.0;
        for (c, v) in counts.0.iter().zip(&values) {
            if *c > 0 {
                ss += *c as f64 * (v - mean) * (v - mean);
            }
        }
        ((ss / (n - 1) as f64 / n as f64).sqrt(), true)
    } else {
        (0.0, false)
    };
    EstimateReport { estimator: name, mean, std_error, samples: n, std_error_defined: defined }
}

/// Estimates `⟨e^{β(W+ΔF)}⟩`, exactly 1 in expectation.
pub fn estimate_jarzynski(spec: &ProtocolSpec, cfg: &SamplerConfig) -> EstimateReport {
    let counts = count_outcomes(spec, cfg);
    jarzynski_from_counts(spec, &counts)
}

pub fn jarzynski_from_counts(spec: &ProtocolSpec, counts: &OutcomeCounts) -> EstimateReport {
    let beta = spec.beta();
    let delta_f = free_energy_difference(spec);
    estimate("jarzynski".into(), counts, |n, m| (beta * (spec.work(n, m) + delta_f)).exp())
}

/// Estimates `⟨W^k⟩` for each requested order.
pub fn estimate_moments(spec: &ProtocolSpec, cfg: &SamplerConfig, orders: &[u32]) -> Result<Vec<EstimateReport>> {
    if let Some(&bad) = orders.iter().find(|&&k| k > MAX_MOMENT_ORDER) {
        return Err(Error::MomentOrderOutOfRange { order: bad, min: 0, max: MAX_MOMENT_ORDER });
    }
    let counts = count_outcomes(spec, cfg);
    Ok(moments_from_counts(spec, &counts, orders))
}

pub fn moments_from_counts(spec: &ProtocolSpec, counts: &OutcomeCounts, orders: &[u32]) -> Vec<EstimateReport> {
    orders
        .iter()
        .map(|&k| estimate(format!("moment_{k}"), counts, |n, m| spec.work(n, m).powi(k as i32)))
        .collect()
}
