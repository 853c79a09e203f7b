//! Composite verification suites: exact identity checks run by the CLI
//! and by the acceptance tests. Each suite reports how many checks ran
//! and how many failed; suites never stop at the first failure.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::combinat::{distinct_sequences, factorial, sigma_group};
use crate::error::Result;
use crate::kappa::{seeded_rng, verify_kappa_equals_mu, KappaMuReport, RNG_ALGORITHM};
use crate::links::{closure_mu, product_formula_sides, tau_n_sigma, StringLink};
use crate::rfree::{quotient_rank, RFWord};
use crate::words::{Letter, Sign, Word};
use crate::{dk, freelie};

/// Outcome of one named suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "checks": self.checks,
            "failures": self.failures,
        })
    }
}

/// Kronecker identity of the permutation brackets: the invariant of
/// `tau(n, sigma)` at index `(1, xi(2), .., xi(n-1))` is 1 exactly when
/// `xi = sigma`, and every shorter distinct-index invariant vanishes.
pub fn kronecker_suite(n: usize) -> Result<SuiteOutcome> {
    let mut checks = 0;
    let mut failures = 0;
    let perms = sigma_group(n - 1);
    for sigma in &perms {
        let link = tau_n_sigma(n, sigma)?;
        for xi in &perms {
            let mut index: Vec<u32> = vec![1];
            index.extend_from_slice(xi.one_line());
            let expected = if xi == sigma {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            checks += 1;
            if closure_mu(&link, &index)? != expected {
                failures += 1;
            }
        }
        // All shorter distinct-index invariants vanish.
        for k in 1..n - 1 {
            for index in distinct_sequences(n - 1, k) {
                checks += 1;
                if !closure_mu(&link, &index)?.is_zero() {
                    failures += 1;
                }
            }
        }
    }
    Ok(SuiteOutcome {
        name: "kronecker",
        checks,
        failures,
    })
}

/// A random freely reduced word of length at most `max_len`.
pub fn random_word(rng: &mut impl Rng, alphabet: usize, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            let gen = rng.random_range(1..=alphabet as u32);
            let sign = if rng.random_bool(0.5) {
                Sign::Pos
            } else {
                Sign::Neg
            };
            Letter::new(gen, sign)
        })
        .collect();
    Word::from_letters(letters, alphabet).expect("letters drawn in range")
}

/// Stacking product formula on random pairs, checked for every
/// distinct-index multiindex up to the top length.
pub fn product_formula_suite(n: usize, pairs: usize, seed: u64) -> Result<SuiteOutcome> {
    let mut rng = seeded_rng(seed);
    let mut checks = 0;
    let mut failures = 0;
    for _ in 0..pairs {
        let z1 = StringLink::new(RFWord::new(random_word(&mut rng, n - 1, 30), n)?);
        let z2 = StringLink::new(RFWord::new(random_word(&mut rng, n - 1, 30), n)?);
        for k in 1..=n - 1 {
            for index in distinct_sequences(n - 1, k) {
                let (lhs, rhs) = product_formula_sides(&z1, &z2, &index)?;
                checks += 1;
                if lhs != rhs {
                    failures += 1;
                }
            }
        }
    }
    Ok(SuiteOutcome {
        name: "product_formula",
        checks,
        failures,
    })
}

/// Rank bookkeeping: the closed quotient-rank formula against
/// enumeration, the multilinear dimension, and the Brunnian kernel.
pub fn rank_suite(n: usize) -> Result<SuiteOutcome> {
    let mut checks = 0;
    let mut failures = 0;
    for k in 1..=n - 1 {
        let r = quotient_rank(n, k)?;
        checks += 1;
        if r.formula != r.enumerated {
            failures += 1;
        }
    }
    let expected = factorial(n as u64 - 2) as usize;
    checks += 1;
    if freelie::multilinear_dim(n)? != expected {
        failures += 1;
    }
    let kernel = dk::btf_kernel_rank(n)?;
    checks += 1;
    if !kernel.verified() {
        failures += 1;
    }
    Ok(SuiteOutcome {
        name: "ranks",
        checks,
        failures,
    })
}

/// Defining-relation certificate for the bracket evaluation, including
/// the corrupted-table negative control.
pub fn four_t_suite(n: usize) -> Result<SuiteOutcome> {
    let mut checks = 0;
    let mut failures = 0;
    checks += 1;
    if !dk::check_4t(n)? {
        failures += 1;
    }
    checks += 1;
    if dk::check_4t_with(n, dk::DkAction::CorruptSign)? {
        failures += 1;
    }
    Ok(SuiteOutcome {
        name: "four_t",
        checks,
        failures,
    })
}

/// The combined report produced by the `verify` command.
#[derive(Debug, Clone)]
pub struct VerifyAllReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub kappa_equals_mu: KappaMuReport,
    pub suites: Vec<SuiteOutcome>,
    pub elapsed_ms: u128,
}

impl VerifyAllReport {
    pub fn passed(&self) -> bool {
        self.kappa_equals_mu.passed() && self.suites.iter().all(SuiteOutcome::passed)
    }

    pub fn to_json(&self, include_timing: bool) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed.to_string(),
            "rng": RNG_ALGORITHM,
            "kappa_equals_mu": self.kappa_equals_mu.to_json(include_timing),
            "suites": self.suites.iter().map(SuiteOutcome::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
        });
        if include_timing {
            obj["elapsed_ms"] = serde_json::json!(self.elapsed_ms);
        }
        obj
    }
}

/// Run the equality harness plus the Kronecker, product-formula, rank,
/// and relation suites at one size.
pub fn verify_all(n: usize, trials: usize, seed: u64) -> Result<VerifyAllReport> {
    let start = Instant::now();
    let kappa_equals_mu = verify_kappa_equals_mu(n, trials, seed)?;
    let suites = vec![
        kronecker_suite(n)?,
        product_formula_suite(n, trials, seed.wrapping_add(1))?,
        rank_suite(n)?,
        four_t_suite(n)?,
    ];
    Ok(VerifyAllReport {
        n,
        trials,
        seed,
        kappa_equals_mu,
        suites,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(kronecker_suite(3).unwrap().passed());
        assert!(product_formula_suite(3, 5, 1).unwrap().passed());
        assert!(rank_suite(3).unwrap().passed());
        assert!(four_t_suite(3).unwrap().passed());
    }

    #[test]
    fn verify_all_small() {
        let report = verify_all(3, 5, 9).unwrap();
        assert!(report.passed());
        let again = verify_all(3, 5, 9).unwrap();
        assert_eq!(report.to_json(false), again.to_json(false));
    }
}
