use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::risk::ArmDistribution;
use crate::rng::keyed_rng;

/// `KL(B(p) ‖ B(q))` in nats, with `0 · log(0/·) = 0`.
///
/// Returns `+∞` when `q` puts zero mass where `p` does not.
pub fn kl_bernoulli(p: f64, q: f64) -> f64 {
    fn term(a: f64, b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).ln()
        }
    }
    term(p, q) + term(1.0 - p, 1.0 - q)
}

/// Binary test applied to `n` i.i.d. Bernoulli samples. Output `1` means
/// "the samples came from the alternative".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryTest {
    /// `1` when the sample mean falls on the alternative's side of the
    /// midpoint of the two parameters.
    Majority,
    /// `1` when the alternative's likelihood is at least the null's.
    LikelihoodRatio,
}

impl BinaryTest {
    fn decide(self, ones: u64, n: u64, p: f64, q: f64) -> bool {
        match self {
            Self::Majority => {
                let mean = ones as f64 / n as f64;
                let mid = 0.5 * (p + q);
                if q < p {
                    mean < mid
                } else {
                    mean > mid
                }
            }
            Self::LikelihoodRatio => {
                let zeros = (n - ones) as f64;
                let ones = ones as f64;
                let ll = |r: f64| ones * r.ln() + zeros * (1.0 - r).ln();
                ll(q) >= ll(p)
            }
        }
    }
}

/// Monte-Carlo check of `P_ν(φ = 1) + P_ν′(φ = 0) ≥ ½ exp(−n·KL(ν, ν′))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorFloorVerdict {
    pub test: BinaryTest,
    pub n_samples: u64,
    pub error_sum: f64,
    pub sem: f64,
    pub floor: f64,
    pub holds: bool,
}

pub fn bh_error_floor_check(
    nu: &ArmDistribution,
    nu_prime: &ArmDistribution,
    n_samples: u64,
    test: BinaryTest,
    runs: usize,
    seed: u64,
) -> Result<ErrorFloorVerdict> {
    let (p, q) = match (nu, nu_prime) {
        (ArmDistribution::Bernoulli { p }, ArmDistribution::Bernoulli { p: q }) => (*p, *q),
        (a, b) => {
            let family = if matches!(a, ArmDistribution::Bernoulli { .. }) {
                b.family()
            } else {
                a.family()
            };
            return Err(Error::UnsupportedFamily(family));
        }
    };
    if n_samples == 0 || runs < 2 {
        return Err(Error::InvalidParameter(
            "need at least one sample and two runs".into(),
        ));
    }
    // stream 0 draws under ν, stream 1 under ν′
    let errors = |stream: u64, param: f64, error_when: bool| -> f64 {
        let hits: u64 = (0..runs)
            .into_par_iter()
            .map(|i| {
                let mut rng = keyed_rng(seed, stream, i as u64);
                let ones = (0..n_samples)
                    .filter(|_| rng.random::<f64>() < param)
                    .count() as u64;
                u64::from(test.decide(ones, n_samples, p, q) == error_when)
            })
            .sum();
        hits as f64 / runs as f64
    };
    let type1 = errors(0, p, true);
    let type2 = errors(1, q, false);
    let m = runs as f64;
    let sem = (type1 * (1.0 - type1) / m + type2 * (1.0 - type2) / m).sqrt();
    let floor = 0.5 * (-(n_samples as f64) * kl_bernoulli(p, q)).exp();
    let error_sum = type1 + type2;
    Ok(ErrorFloorVerdict {
        test,
        n_samples,
        error_sum,
        sem,
        floor,
        holds: error_sum >= floor - 3.0 * sem,
    })
}
