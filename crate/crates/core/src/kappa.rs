//! The top-degree coefficient vector of a Brunnian string link and the
//! randomized equality harness against the Milnor invariant vector.
//!
//! For a Brunnian link all exponents of the normal form sit in the top
//! degree, indexed by permutations; that exponent vector is the
//! coefficient vector of the link's class in the basis of iterated
//! brackets. The harness samples exponent vectors, rebuilds the link,
//! and demands exact agreement between the normal-form route and the
//! longitude-expansion route.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinat::{sigma_group, Perm};
use crate::error::{Error, Result};
use crate::links::{mu_vector, tau_n_sigma, StringLink};
use crate::rfree::{brunnian_witness, normal_form};

/// Identifier of the PRNG driving every randomized suite, recorded in
/// reports so runs are reproducible from `(algorithm, seed)`.
pub const RNG_ALGORITHM: &str = "chacha8";

pub(crate) fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The coefficient vector of a Brunnian string link in the
/// permutation-indexed top-degree basis, over the full domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaCoeffs {
    components: usize,
    coeffs: BTreeMap<Perm, BigInt>,
}

impl KappaCoeffs {
    pub fn components(&self) -> usize {
        self.components
    }

    pub fn get(&self, sigma: &Perm) -> BigInt {
        self.coeffs.get(sigma).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Perm, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.coeffs.values().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.components,
            "kappa": self
                .coeffs
                .iter()
                .map(|(sigma, v)| {
                    serde_json::json!({
                        "sigma": sigma.one_line(),
                        "value": v.to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Coefficients of a Brunnian string link: the top-degree normal-form
/// exponents `e((1,..,n-1), sigma)`, one per permutation.
pub fn kappa_coeffs(link: &StringLink) -> Result<KappaCoeffs> {
    if let Some(witness) = brunnian_witness(link.word())? {
        return Err(Error::NotBrunnian { witness });
    }
    let n = link.components();
    let nf = normal_form(link.word())?;
    let top: Vec<u32> = (1..=n as u32 - 1).collect();
    let mut coeffs = BTreeMap::new();
    for sigma in sigma_group(n - 1) {
        let e = nf.exponent(&top, &sigma);
        coeffs.insert(sigma, e);
    }
    Ok(KappaCoeffs {
        components: n,
        coeffs,
    })
}

/// One failed trial: the sampled exponents and the invariant vector
/// that disagreed with them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFailure {
    pub seed_index: usize,
    pub exponents: Vec<i64>,
    pub mu: Vec<BigInt>,
}

/// Report of the randomized equality harness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaMuReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<TrialFailure>,
    pub elapsed_ms: u128,
}

impl KappaMuReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// JSON report; timing is optional so that default output is
    /// byte-reproducible for a fixed command and seed.
    pub fn to_json(&self, include_timing: bool) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed.to_string(),
            "rng": RNG_ALGORITHM,
            "failures": self
                .failures
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "seed_index": f.seed_index,
                        "e": f.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                        "mu": f.mu.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>(),
        });
        if include_timing {
            obj["elapsed_ms"] = serde_json::json!(self.elapsed_ms);
        }
        obj
    }
}

/// Sample exponents in `[-5, 5]`, build the canonical product of
/// permutation brackets, and demand that the normal-form coefficients
/// equal the invariant vector entrywise. `corrupt` flips one sign
/// before comparison and exists as a self-test of the harness.
fn run_equality_trials(n: usize, trials: usize, seed: u64, corrupt: bool) -> Result<KappaMuReport> {
    if !(3..=6).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "equality harness supports 3 <= n <= 6, got {n}"
        )));
    }
    let start = Instant::now();
    let mut rng = seeded_rng(seed);
    let perms = sigma_group(n - 1);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let exponents: Vec<i64> = perms.iter().map(|_| rng.random_range(-5..=5)).collect();
        let mut z = StringLink::identity(n);
        for (sigma, &e) in perms.iter().zip(&exponents) {
            z = z.mul(&tau_n_sigma(n, sigma)?.pow(e))?;
        }
        let kappa = kappa_coeffs(&z)?;
        let mut mu = mu_vector(&z)?.values();
        if corrupt {
            if let Some(first) = mu.iter_mut().find(|v| !v.is_zero()) {
                *first = -first.clone();
            } else {
                mu[0] += 1;
            }
        }
        if kappa.values() != mu {
            failures.push(TrialFailure {
                seed_index: trial,
                exponents,
                mu,
            });
        }
    }
    Ok(KappaMuReport {
        n,
        trials,
        seed,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Randomized equality of the coefficient vector and the invariant
/// vector on products of permutation brackets.
pub fn verify_kappa_equals_mu(n: usize, trials: usize, seed: u64) -> Result<KappaMuReport> {
    run_equality_trials(n, trials, seed, false)
}

/// Negative control: the same harness with one invariant sign flipped,
/// which must report failures.
pub fn verify_kappa_equals_mu_negative_control(
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<KappaMuReport> {
    run_equality_trials(n, trials, seed, true)
}

/// Report of the injectivity sampling harness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Number of distinct exponent vectors drawn.
    pub distinct_inputs: usize,
    /// Samples that repeated an earlier exponent vector (not failures).
    pub duplicates: usize,
    /// Pairs of distinct inputs with equal invariant vectors.
    pub collisions: Vec<(Vec<i64>, Vec<i64>)>,
    pub elapsed_ms: u128,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.collisions.is_empty()
    }

    pub fn to_json(&self, include_timing: bool) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed.to_string(),
            "rng": RNG_ALGORITHM,
            "distinct_inputs": self.distinct_inputs,
            "duplicates": self.duplicates,
            "collisions": self
                .collisions
                .iter()
                .map(|(a, b)| serde_json::json!([a, b]))
                .collect::<Vec<_>>(),
        });
        if include_timing {
            obj["elapsed_ms"] = serde_json::json!(self.elapsed_ms);
        }
        obj
    }
}

/// Sample exponent vectors and check that distinct vectors produce
/// distinct invariant vectors. Exact set comparison; duplicates among
/// the samples are counted separately, never as failures.
pub fn verify_injectivity(n: usize, samples: usize, seed: u64) -> Result<InjectivityReport> {
    if !(3..=5).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "injectivity harness supports 3 <= n <= 5, got {n}"
        )));
    }
    let start = Instant::now();
    let mut rng = seeded_rng(seed);
    let perms = sigma_group(n - 1);
    let mut seen_inputs: BTreeMap<Vec<i64>, Vec<BigInt>> = BTreeMap::new();
    let mut by_mu: BTreeMap<Vec<BigInt>, Vec<i64>> = BTreeMap::new();
    let mut duplicates = 0;
    let mut collisions = Vec::new();
    for _ in 0..samples {
        let exponents: Vec<i64> = perms.iter().map(|_| rng.random_range(-5..=5)).collect();
        if seen_inputs.contains_key(&exponents) {
            duplicates += 1;
            continue;
        }
        let mut z = StringLink::identity(n);
        for (sigma, &e) in perms.iter().zip(&exponents) {
            z = z.mul(&tau_n_sigma(n, sigma)?.pow(e))?;
        }
        let mu = mu_vector(&z)?.values();
        if let Some(previous) = by_mu.get(&mu) {
            collisions.push((previous.clone(), exponents.clone()));
        } else {
            by_mu.insert(mu.clone(), exponents.clone());
        }
        seen_inputs.insert(exponents, mu);
    }
    Ok(InjectivityReport {
        n,
        samples,
        seed,
        distinct_inputs: seen_inputs.len(),
        duplicates,
        collisions,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
