//! The reduced free group `RF(n-1)`: the quotient of the free group on
//! `tau_1, .., tau_{n-1}` by the relations making each generator commute
//! with all of its conjugates.
//!
//! Equality is decided through the square-free Magnus expansion, which
//! kills exactly the monomials a reduced-word relator produces. The
//! normal form `z = lambda_1 .. lambda_{n-1}`, with each `lambda_k` a
//! canonical product of simple commutators `tau(I, sigma)^e`, is
//! computed by degree peeling: at stage `k` the exponents are the
//! coefficients of indicator monomials in the expansion of the current
//! residual, which is then divided on the left and must reach degree
//! `k + 1`. The residual must be exactly trivial after the last stage;
//! anything else is surfaced as a hard internal error rather than
//! silently absorbed.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::combinat::{binomial, factorial, ordered_multiindices, sigma_group, Perm};
use crate::error::{Error, Result};
use crate::magnus::{magnus, Monomial, NcPoly};
use crate::words::{parse_word, simple_commutator, Word};

/// An element of `RF(n-1)` presented by a freely reduced word over
/// `tau_1, .., tau_{n-1}`; `components` is `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RFWord {
    word: Word,
    components: usize,
}

impl RFWord {
    pub fn new(word: Word, components: usize) -> Result<Self> {
        if components < 1 || word.alphabet() != components - 1 {
            return Err(Error::InvalidArgument(format!(
                "word over alphabet {} cannot represent an element for {} components",
                word.alphabet(),
                components
            )));
        }
        Ok(RFWord { word, components })
    }

    pub fn parse(text: &str, components: usize) -> Result<Self> {
        RFWord::new(parse_word(text, components - 1)?, components)
    }

    pub fn identity(components: usize) -> Self {
        RFWord {
            word: Word::empty(components - 1),
            components,
        }
    }

    pub fn generator(i: u32, components: usize) -> Result<Self> {
        RFWord::new(Word::generator(i, components - 1)?, components)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn mul(&self, other: &RFWord) -> Result<RFWord> {
        if self.components != other.components {
            return Err(Error::ComponentMismatch {
                left: self.components,
                right: other.components,
            });
        }
        Ok(RFWord {
            word: self.word.concat(&other.word)?,
            components: self.components,
        })
    }

    pub fn inverse(&self) -> RFWord {
        RFWord {
            word: self.word.inverse(),
            components: self.components,
        }
    }

    pub fn pow(&self, e: i64) -> RFWord {
        RFWord {
            word: self.word.pow(e),
            components: self.components,
        }
    }

    /// Square-free Magnus expansion at the group's natural truncation
    /// degree `n - 1` (every element of `RF(n-1)` is determined by it).
    pub fn expansion(&self) -> NcPoly {
        let degree = (self.components - 1).max(1);
        magnus(&self.word, degree, true)
    }
}

fn check_same_components(a: &RFWord, b: &RFWord) -> Result<()> {
    if a.components != b.components {
        return Err(Error::ComponentMismatch {
            left: a.components,
            right: b.components,
        });
    }
    Ok(())
}

/// Equality in `RF(n-1)`, decided by comparing square-free Magnus
/// expansions truncated at degree `n - 1`.
pub fn rf_equal(a: &RFWord, b: &RFWord) -> Result<bool> {
    check_same_components(a, b)?;
    if a.word == b.word {
        return Ok(true);
    }
    Ok(a.expansion() == b.expansion())
}

/// Whether a word represents the identity of `RF(n-1)`.
pub fn rf_is_trivial(w: &RFWord) -> bool {
    w.word.is_empty() || w.expansion().is_one()
}

/// Lower-central-series degree: the smallest `d >= 1` such that the
/// square-free expansion has a nonzero term of degree `d`, or `n` (the
/// nilpotency class bound, meaning trivial) when the expansion is 1.
pub fn lcs_degree(w: &RFWord) -> usize {
    match w.expansion().min_positive_degree() {
        Some(d) => d,
        None => w.components,
    }
}

/// The simple commutator `tau(I, sigma) = [tau_{i_1}, tau_{i_sigma(2)},
/// .., tau_{i_sigma(k)}]` for an ordered multiindex `I` and a
/// permutation of `{2, .., k}`.
pub fn tau_i_sigma(index: &[u32], sigma: &Perm, components: usize) -> Result<RFWord> {
    let k = index.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty multiindex".into()));
    }
    if sigma.one_line().len() != k.saturating_sub(1) {
        return Err(Error::MalformedPermutation {
            perm: sigma.one_line().to_vec(),
            domain: format!("{{2,..,{k}}}"),
        });
    }
    let alphabet = components - 1;
    let mut args = Vec::with_capacity(k);
    args.push(Word::generator(index[0], alphabet)?);
    for j in 2..=k {
        let pos = sigma.image(j) as usize;
        args.push(Word::generator(index[pos - 1], alphabet)?);
    }
    RFWord::new(simple_commutator(&args)?, components)
}

/// Key of a normal-form exponent: an ordered multiindex and a
/// permutation, ordered by degree, then `I`, then the one-line notation
/// of `sigma`. This matches the canonical recomposition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfKey {
    pub index: Vec<u32>,
    pub sigma: Perm,
}

impl Ord for NfKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index
            .len()
            .cmp(&other.index.len())
            .then_with(|| self.index.cmp(&other.index))
            .then_with(|| self.sigma.cmp(&other.sigma))
    }
}

impl PartialOrd for NfKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The exponent table `e(I, sigma)` of the normal form
/// `z = lambda_1 .. lambda_{n-1}`. Zero exponents are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    components: usize,
    exponents: BTreeMap<NfKey, BigInt>,
}

impl NormalForm {
    pub fn components(&self) -> usize {
        self.components
    }

    /// Exponent of `tau(I, sigma)`; zero when absent.
    pub fn exponent(&self, index: &[u32], sigma: &Perm) -> BigInt {
        self.exponents
            .get(&NfKey {
                index: index.to_vec(),
                sigma: sigma.clone(),
            })
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Nonzero entries in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&NfKey, &BigInt)> {
        self.exponents.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// True when every nonzero exponent sits in the top degree
    /// `|I| = n - 1` (equivalently, at `I = (1, .., n-1)`).
    pub fn top_degree_only(&self) -> bool {
        self.exponents
            .keys()
            .all(|key| key.index.len() == self.components - 1)
    }

    /// Rebuild the canonical product word `lambda_1 .. lambda_{n-1}`.
    /// Fails only if an exponent is too large to materialize letters.
    pub fn recompose(&self) -> Result<RFWord> {
        let mut acc = RFWord::identity(self.components);
        for (key, e) in &self.exponents {
            let e: i64 = i64::try_from(e.clone()).map_err(|_| {
                Error::InvalidArgument("exponent too large to materialize as a word".into())
            })?;
            let tau = tau_i_sigma(&key.index, &key.sigma, self.components)?;
            acc = acc.mul(&tau.pow(e))?;
        }
        Ok(acc)
    }

    /// Square-free expansion of the recomposition, computed directly on
    /// the series side (no giant intermediate words).
    pub fn expansion(&self) -> Result<NcPoly> {
        let degree = (self.components - 1).max(1);
        let mut acc = NcPoly::one(self.components - 1, degree, true);
        for (key, e) in &self.exponents {
            let tau = tau_i_sigma(&key.index, &key.sigma, self.components)?;
            let base = magnus(tau.word(), degree, true);
            acc = acc.checked_mul(&pow_bigint(&base, e)?)?;
        }
        Ok(acc)
    }

    /// JSON form: `{"n": .., "terms": [{"I": [..], "sigma": [..],
    /// "e": "<decimal>"}]}` in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.components,
            "terms": self
                .exponents
                .iter()
                .map(|(key, e)| {
                    serde_json::json!({
                        "I": key.index,
                        "sigma": key.sigma.one_line(),
                        "e": e.to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn pow_bigint(base: &NcPoly, e: &BigInt) -> Result<NcPoly> {
    let mut acc = NcPoly::one(base.nvars(), base.degree(), base.is_square_free());
    let mut base = if e.is_negative() {
        base.inv()?
    } else {
        base.clone()
    };
    let mut k = e.abs();
    while k.is_positive() {
        if k.bit(0) {
            acc = acc.checked_mul(&base)?;
        }
        k >>= 1;
        if k.is_positive() {
            base = base.checked_mul(&base)?;
        }
    }
    Ok(acc)
}

/// Indicator monomial `X_{i_1} X_{i_sigma(2)} .. X_{i_sigma(k)}` whose
/// coefficient in a degree-`k` residual is the exponent of
/// `tau(I, sigma)`.
fn indicator_monomial(index: &[u32], sigma: &Perm) -> Monomial {
    let k = index.len();
    let mut v = Vec::with_capacity(k);
    v.push(index[0]);
    for j in 2..=k {
        v.push(index[sigma.image(j) as usize - 1]);
    }
    Monomial(v)
}

/// Normal form of an element of `RF(n-1)` by degree peeling.
pub fn normal_form(w: &RFWord) -> Result<NormalForm> {
    normal_form_from_expansion(&w.expansion(), w.components)
}

/// Degree peeling driven by a square-free expansion (the expansion
/// determines the element, so this is equivalent to peeling the word).
pub fn normal_form_from_expansion(p: &NcPoly, components: usize) -> Result<NormalForm> {
    let rank = components - 1;
    let degree = rank.max(1);
    if p.nvars() != rank || p.degree() != degree || !p.is_square_free() {
        return Err(Error::ModeMismatch(format!(
            "expected square-free expansion in {} variables at degree {}",
            rank, degree
        )));
    }
    let mut residual = p.clone();
    let mut exponents = BTreeMap::new();
    for k in 1..=rank {
        // Read every stage-k exponent off the residual before dividing:
        // indicator monomials of the same degree are independent.
        let mut stage: Vec<(NfKey, BigInt)> = Vec::new();
        for index in ordered_multiindices(rank, k) {
            for sigma in sigma_group(k) {
                let e = residual.coeff(&indicator_monomial(&index, &sigma));
                if !e.is_zero() {
                    stage.push((
                        NfKey {
                            index: index.clone(),
                            sigma,
                        },
                        e,
                    ));
                }
            }
        }
        // Divide on the left: residual <- M(lambda_k)^-1 * residual,
        // with the inverse built in reverse canonical order.
        let mut lambda_inv = NcPoly::one(rank, degree, true);
        for (key, e) in stage.iter().rev() {
            let tau = tau_i_sigma(&key.index, &key.sigma, components)?;
            let base = magnus(tau.word(), degree, true);
            lambda_inv = lambda_inv.checked_mul(&pow_bigint(&base, &(-e))?)?;
        }
        residual = lambda_inv.checked_mul(&residual)?;
        exponents.extend(stage);
    }
    if !residual.is_one() {
        return Err(Error::ResidualNontrivial);
    }
    Ok(NormalForm {
        components,
        exponents,
    })
}

/// Strand deletion `delta_j`: the homomorphism killing `tau_j` and
/// shifting higher generators down, landing in `RF(n-2)` for `n-1`
/// components.
pub fn delete_strand(w: &RFWord, j: usize) -> Result<RFWord> {
    let rank = w.components - 1;
    if j < 1 || j > rank {
        return Err(Error::InvalidArgument(format!(
            "strand index {j} out of range [1, {rank}]"
        )));
    }
    let mut letters = Vec::with_capacity(w.word.len());
    for l in w.word.letters() {
        let g = l.gen() as usize;
        if g == j {
            continue;
        }
        let shifted = if g > j { l.gen() - 1 } else { l.gen() };
        letters.push(crate::words::Letter::new(shifted, l.sign()));
    }
    RFWord::new(Word::from_letters(letters, rank - 1)?, w.components - 1)
}

/// First strand whose deletion leaves a nontrivial element, if any.
pub fn brunnian_witness(w: &RFWord) -> Result<Option<usize>> {
    for j in 1..w.components {
        if !rf_is_trivial(&delete_strand(w, j)?) {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Brunnian test: every strand deletion is trivial.
pub fn is_brunnian(w: &RFWord) -> bool {
    brunnian_witness(w).map(|x| x.is_none()).unwrap_or(false)
}

/// Rank of the lower-central-series quotient `RF(n-1)_k / RF(n-1)_{k+1}`
/// by the closed formula and by direct enumeration of the `(I, sigma)`
/// basis; the two counts must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientRank {
    pub formula: u64,
    pub enumerated: u64,
}

pub fn quotient_rank(n: usize, k: usize) -> Result<QuotientRank> {
    if n < 2 || k < 1 || k > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "quotient rank needs 1 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    let formula = factorial(k as u64 - 1) * binomial(n as u64 - 1, k as u64);
    let enumerated = ordered_multiindices(n - 1, k)
        .iter()
        .map(|_| sigma_group(k).len() as u64)
        .sum();
    Ok(QuotientRank {
        formula,
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(text: &str, n: usize) -> RFWord {
        RFWord::parse(text, n).unwrap()
    }

    #[test]
    fn rf_relations_hold() {
        // [tau_i, g tau_i g^-1] = 1 in RF(2).
        let g = rf("t2 t1 t2", 3);
        let ti = rf("t1", 3);
        let conj = g.mul(&ti).unwrap().mul(&g.inverse()).unwrap();
        let comm = ti
            .mul(&conj)
            .unwrap()
            .mul(&ti.inverse())
            .unwrap()
            .mul(&conj.inverse())
            .unwrap();
        assert!(rf_is_trivial(&comm));
        assert!(rf_equal(&comm, &RFWord::identity(3)).unwrap());
    }

    #[test]
    fn rf_equal_distinguishes() {
        assert!(!rf_equal(&rf("t1 t2", 3), &rf("t2 t1", 3)).unwrap());
        let w = rf("t1 t2 t1'", 3);
        assert!(rf_equal(&w, &w).unwrap());
        assert!(matches!(
            rf_equal(&rf("t1", 3), &rf("t1", 4)),
            Err(Error::ComponentMismatch { .. })
        ));
    }

    #[test]
    fn lcs_degrees() {
        assert_eq!(lcs_degree(&rf("t1", 3)), 1);
        assert_eq!(lcs_degree(&rf("[t1,t2]", 3)), 2);
        assert_eq!(lcs_degree(&RFWord::identity(3)), 3);
        assert_eq!(lcs_degree(&rf("[t1,t2,t3]", 4)), 3);
    }

    #[test]
    fn normal_form_of_commutator() {
        let nf = normal_form(&rf("[t1,t2]", 3)).unwrap();
        assert_eq!(nf.exponent(&[1, 2], &Perm::identity(2)), BigInt::from(1));
        assert_eq!(nf.terms().count(), 1);
        assert!(nf.top_degree_only());

        let nf = normal_form(&RFWord::identity(3)).unwrap();
        assert!(nf.is_trivial());
    }

    #[test]
    fn normal_form_of_tau_with_permutation() {
        // tau((1,2,3), (3,2)) in RF(3): a single top-degree exponent.
        let sigma = Perm::new(vec![3, 2]).unwrap();
        let tau = tau_i_sigma(&[1, 2, 3], &sigma, 4).unwrap();
        let nf = normal_form(&tau).unwrap();
        assert_eq!(nf.exponent(&[1, 2, 3], &sigma), BigInt::from(1));
        assert_eq!(nf.terms().count(), 1);
        // The other permutation sees nothing.
        assert_eq!(nf.exponent(&[1, 2, 3], &Perm::identity(3)), BigInt::from(0));
    }

    #[test]
    fn normal_form_round_trip_small() {
        let w = rf("t1 t2 [t1,t2] t2' t1 t1", 3);
        let nf = normal_form(&w).unwrap();
        let back = nf.recompose().unwrap();
        assert!(rf_equal(&w, &back).unwrap());
        assert_eq!(nf.expansion().unwrap(), w.expansion());
        // Idempotence: the normal form of the recomposition is itself.
        assert_eq!(normal_form(&back).unwrap(), nf);
    }

    #[test]
    fn peeling_mixed_degrees_frozen_values() {
        // t1 [t1,t2] t2: stage 1 peels t1 t2; the degree-2 residual is
        // M(t2 t1)^-1 (1+X1)(1 + X1X2 - X2X1)(1+X2), whose X1X2
        // coefficient works out to 1 by hand.
        let w = rf("t1 [t1,t2] t2", 3);
        let nf = normal_form(&w).unwrap();
        assert_eq!(nf.exponent(&[1], &Perm::identity(1)), BigInt::from(1));
        assert_eq!(nf.exponent(&[2], &Perm::identity(1)), BigInt::from(1));
        assert_eq!(nf.exponent(&[1, 2], &Perm::identity(2)), BigInt::from(1));
        assert_eq!(nf.terms().count(), 3);

        // Swapping the outer letters leaves degree 1 alone and shifts
        // the commutator exponent: t2 [t1,t2] t1 = t1 t2 [t1,t2]^0 ...
        // by hand the X1X2 coefficient of the residual is 0.
        let w = rf("t2 [t1,t2] t1", 3);
        let nf = normal_form(&w).unwrap();
        assert_eq!(nf.exponent(&[1], &Perm::identity(1)), BigInt::from(1));
        assert_eq!(nf.exponent(&[2], &Perm::identity(1)), BigInt::from(1));
        assert_eq!(nf.exponent(&[1, 2], &Perm::identity(2)), BigInt::from(0));
    }

    #[test]
    fn delete_strand_examples() {
        assert!(rf_is_trivial(&delete_strand(&rf("[t1,t2]", 3), 1).unwrap()));
        let d = delete_strand(&rf("t1 t2", 4), 3).unwrap();
        assert_eq!(d.components(), 3);
        assert_eq!(d.word(), rf("t1 t2", 3).word());
        // Deleting strand 1 of t1 t2 in RF(3) shifts t2 down.
        let d = delete_strand(&rf("t1 t2", 4), 1).unwrap();
        assert_eq!(d.word(), rf("t1", 3).word());
        assert!(delete_strand(&rf("t1", 3), 5).is_err());
    }

    #[test]
    fn brunnian_examples() {
        assert!(is_brunnian(&rf("[t1,t2]", 3)));
        assert!(!is_brunnian(&rf("t1", 3)));
        assert_eq!(brunnian_witness(&rf("t1", 3)).unwrap(), Some(2));
        // [t1,t2] with a 4th component present is not Brunnian: strand 3
        // deletion leaves [t1,t2].
        assert!(!is_brunnian(&rf("[t1,t2]", 4)));
        assert_eq!(brunnian_witness(&rf("[t1,t2]", 4)).unwrap(), Some(3));
    }

    #[test]
    fn quotient_ranks() {
        let r = quotient_rank(4, 3).unwrap();
        assert_eq!(r.formula, 2);
        assert_eq!(r.enumerated, 2);
        let r = quotient_rank(4, 1).unwrap();
        assert_eq!(r.formula, 3);
        let r = quotient_rank(6, 4).unwrap();
        assert_eq!(r.formula, 30);
        assert_eq!(r.enumerated, 30);
        assert!(quotient_rank(4, 4).is_err());
    }
}
