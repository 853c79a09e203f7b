//! String links with one nontrivial strand and the Milnor invariants of
//! their closures.
//!
//! An element of `C(n;n)` is carried by a word in `tau_1, .., tau_{n-1}`
//! (the generators linking each lower strand with the last one). The
//! n-th longitude of the closure is the same word read in the meridians
//! `m_1, .., m_{n-1}` of the other components, so `mu(I; n)` is a
//! coefficient of its square-free Magnus expansion. Only the target
//! component `n` and distinct-index invariants (the link-homotopy
//! regime) are exposed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinat::{sigma_group, Perm};
use crate::error::{Error, Result};
use crate::magnus::{mu_coeff, NcPoly};
use crate::rfree::{brunnian_witness, tau_i_sigma, RFWord};

/// A string link in `C(n;n)`: `n` strands, all but the last trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringLink {
    word: RFWord,
}

impl StringLink {
    pub fn new(word: RFWord) -> Self {
        StringLink { word }
    }

    pub fn parse(text: &str, components: usize) -> Result<Self> {
        Ok(StringLink::new(RFWord::parse(text, components)?))
    }

    pub fn identity(components: usize) -> Self {
        StringLink::new(RFWord::identity(components))
    }

    pub fn components(&self) -> usize {
        self.word.components()
    }

    pub fn word(&self) -> &RFWord {
        &self.word
    }

    /// Stacking product of string links.
    pub fn mul(&self, other: &StringLink) -> Result<StringLink> {
        Ok(StringLink::new(self.word.mul(&other.word)?))
    }

    pub fn inverse(&self) -> StringLink {
        StringLink::new(self.word.inverse())
    }

    pub fn pow(&self, e: i64) -> StringLink {
        StringLink::new(self.word.pow(e))
    }

    /// Square-free Magnus expansion of the n-th longitude of the
    /// closure (the defining data for every `mu(I; n)` exposed here).
    pub fn longitude_expansion(&self) -> NcPoly {
        self.word.expansion()
    }
}

/// The Brunnian generator `tau(n, sigma) = [tau_1, tau_sigma(2), ..,
/// tau_sigma(n-1)]` for a permutation of `{2, .., n-1}`.
pub fn tau_n_sigma(n: usize, sigma: &Perm) -> Result<StringLink> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "Brunnian generators need at least 2 components".into(),
        ));
    }
    if sigma.one_line().len() != n - 2 {
        return Err(Error::MalformedPermutation {
            perm: sigma.one_line().to_vec(),
            domain: format!("{{2,..,{}}}", n - 1),
        });
    }
    let index: Vec<u32> = (1..=n as u32 - 1).collect();
    Ok(StringLink::new(tau_i_sigma(&index, sigma, n)?))
}

fn check_distinct(index: &[u32], components: usize) -> Result<()> {
    for (k, v) in index.iter().enumerate() {
        if index[..k].contains(v) {
            return Err(Error::RepeatedIndex(index.to_vec()));
        }
        if *v < 1 || *v as usize >= components {
            return Err(Error::GeneratorOutOfRange {
                id: *v,
                alphabet: components - 1,
            });
        }
    }
    Ok(())
}

/// Milnor invariant `mu(I; n)` of the closure, for a distinct-index
/// multiindex over `{1, .., n-1}`: the coefficient of `X_I` in the
/// longitude expansion.
pub fn closure_mu(link: &StringLink, index: &[u32]) -> Result<BigInt> {
    check_distinct(index, link.components())?;
    mu_coeff(&link.longitude_expansion(), index)
}

/// The full top-degree invariant vector of a Brunnian string link:
/// `sigma -> mu(1, sigma(2), .., sigma(n-1); n)` over all permutations
/// of `{2, .., n-1}` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuVector {
    components: usize,
    entries: BTreeMap<Perm, BigInt>,
}

impl MuVector {
    pub fn components(&self) -> usize {
        self.components
    }

    pub fn get(&self, sigma: &Perm) -> BigInt {
        self.entries
            .get(sigma)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Entries over the full permutation domain, lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Perm, &BigInt)> {
        self.entries.iter()
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.entries.values().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Zero::is_zero)
    }

    /// JSON form: `{"n": .., "mu": [{"sigma": [..], "value": "<dec>"}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.components,
            "mu": self
                .entries
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

/// All top-degree invariants of a Brunnian string link. Non-Brunnian
/// inputs are rejected: their invariants carry indeterminacy this crate
/// does not model.
pub fn mu_vector(link: &StringLink) -> Result<MuVector> {
    if let Some(witness) = brunnian_witness(link.word())? {
        return Err(Error::NotBrunnian { witness });
    }
    let n = link.components();
    let expansion = link.longitude_expansion();
    let mut entries = BTreeMap::new();
    for sigma in sigma_group(n - 1) {
        let mut index: Vec<u32> = Vec::with_capacity(n - 1);
        index.push(1);
        index.extend(sigma.one_line());
        entries.insert(sigma, mu_coeff(&expansion, &index)?);
    }
    Ok(MuVector {
        components: n,
        entries,
    })
}

/// Both sides of the stacking product formula for `mu(I; n)`:
/// `mu(I)(z1 z2) = mu(I)(z1) + mu(I)(z2) + sum over proper splittings
/// I = (head | tail) of mu(head)(z1) mu(tail)(z2)`. The left side is
/// computed independently from the concatenated word.
pub fn product_formula_sides(
    z1: &StringLink,
    z2: &StringLink,
    index: &[u32],
) -> Result<(BigInt, BigInt)> {
    let lhs = closure_mu(&z1.mul(z2)?, index)?;
    let e1 = z1.longitude_expansion();
    let e2 = z2.longitude_expansion();
    check_distinct(index, z1.components())?;
    let mut rhs = mu_coeff(&e1, index)? + mu_coeff(&e2, index)?;
    for cut in 1..index.len() {
        rhs += mu_coeff(&e1, &index[..cut])? * mu_coeff(&e2, &index[cut..])?;
    }
    Ok((lhs, rhs))
}

/// Whether the product formula holds for this pair and multiindex (it
/// always should; the check exists as a machine-verifiable identity).
pub fn check_product_formula(z1: &StringLink, z2: &StringLink, index: &[u32]) -> Result<bool> {
    let (lhs, rhs) = product_formula_sides(z1, z2, index)?;
    Ok(lhs == rhs)
}

/// Conjugation invariance of `mu(I; n)` on Brunnian inputs: Brunnian
/// string links are central, so `lambda z lambda^-1` and `z` have equal
/// invariants. Both sides are computed independently.
pub fn conjugation_invariance(z: &StringLink, lambda: &StringLink, index: &[u32]) -> Result<bool> {
    if let Some(witness) = brunnian_witness(z.word())? {
        return Err(Error::NotBrunnian { witness });
    }
    let conjugated = lambda.mul(z)?.mul(&lambda.inverse())?;
    Ok(closure_mu(&conjugated, index)? == closure_mu(z, index)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfree::is_brunnian;
    use num_bigint::BigInt;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn tau_n_sigma_shapes() {
        let t3 = tau_n_sigma(3, &Perm::identity(2)).unwrap();
        assert_eq!(
            t3.word().word(),
            StringLink::parse("[t1,t2]", 3).unwrap().word().word()
        );
        let t4a = tau_n_sigma(4, &Perm::new(vec![2, 3]).unwrap()).unwrap();
        assert_eq!(
            t4a.word().word(),
            StringLink::parse("[t1,t2,t3]", 4).unwrap().word().word()
        );
        let t4b = tau_n_sigma(4, &Perm::new(vec![3, 2]).unwrap()).unwrap();
        assert_eq!(
            t4b.word().word(),
            StringLink::parse("[t1,t3,t2]", 4).unwrap().word().word()
        );
        assert!(is_brunnian(t4b.word()));
        assert!(tau_n_sigma(4, &Perm::identity(2)).is_err());
    }

    #[test]
    fn closure_mu_kronecker_small() {
        let t3 = tau_n_sigma(3, &Perm::identity(2)).unwrap();
        assert_eq!(closure_mu(&t3, &[1, 2]).unwrap(), int(1));

        let sigma = Perm::new(vec![3, 2]).unwrap();
        let t4 = tau_n_sigma(4, &sigma).unwrap();
        assert_eq!(closure_mu(&t4, &[1, 3, 2]).unwrap(), int(1));
        assert_eq!(closure_mu(&t4, &[1, 2, 3]).unwrap(), int(0));
        // Shorter distinct-index invariants vanish.
        for index in [&[1u32, 2][..], &[2, 3], &[1], &[3, 1]] {
            assert_eq!(closure_mu(&t4, index).unwrap(), int(0));
        }

        let trivial = StringLink::identity(4);
        assert_eq!(closure_mu(&trivial, &[1, 2, 3]).unwrap(), int(0));

        assert!(matches!(
            closure_mu(&t4, &[1, 1]),
            Err(Error::RepeatedIndex(_))
        ));
    }

    #[test]
    fn mu_vector_indicator_and_linearity() {
        let sigma = Perm::new(vec![3, 2]).unwrap();
        let t4 = tau_n_sigma(4, &sigma).unwrap();
        let v = mu_vector(&t4).unwrap();
        assert_eq!(v.get(&sigma), int(1));
        assert_eq!(v.get(&Perm::new(vec![2, 3]).unwrap()), int(0));

        // Product of powers reads exponents back.
        let a = tau_n_sigma(4, &Perm::new(vec![2, 3]).unwrap()).unwrap();
        let z = a.pow(2).mul(&t4.pow(-1)).unwrap();
        let v = mu_vector(&z).unwrap();
        assert_eq!(v.get(&Perm::new(vec![2, 3]).unwrap()), int(2));
        assert_eq!(v.get(&sigma), int(-1));

        assert!(mu_vector(&StringLink::identity(4)).unwrap().is_zero());
        assert!(matches!(
            mu_vector(&StringLink::parse("t1", 4).unwrap()),
            Err(Error::NotBrunnian { .. })
        ));
    }

    #[test]
    fn product_formula_basic() {
        // z1 = z2 = t1 in C(3;3), I = (1): both sides are 2.
        let z = StringLink::parse("t1", 3).unwrap();
        let (lhs, rhs) = product_formula_sides(&z, &z, &[1]).unwrap();
        assert_eq!(lhs, int(2));
        assert_eq!(rhs, int(2));

        let t3 = tau_n_sigma(3, &Perm::identity(2)).unwrap();
        assert!(check_product_formula(&t3, &StringLink::identity(3), &[1, 2]).unwrap());

        // A pair with a genuinely nonzero cross term.
        let z1 = StringLink::parse("t1 [t1,t2]", 3).unwrap();
        let z2 = StringLink::parse("t2 t1'", 3).unwrap();
        for index in [&[1u32][..], &[2], &[1, 2], &[2, 1]] {
            assert!(check_product_formula(&z1, &z2, index).unwrap());
        }
    }

    #[test]
    fn mu_vector_json_shape() {
        let t3 = tau_n_sigma(3, &Perm::identity(2)).unwrap();
        let v = mu_vector(&t3).unwrap().to_json();
        assert_eq!(v["n"], 3);
        assert_eq!(v["mu"][0]["sigma"], serde_json::json!([2]));
        assert_eq!(v["mu"][0]["value"], "1");
    }

    #[test]
    fn conjugation_invariance_examples() {
        let t3 = tau_n_sigma(3, &Perm::identity(2)).unwrap();
        let lam = StringLink::parse("t1", 3).unwrap();
        assert!(conjugation_invariance(&t3, &lam, &[1, 2]).unwrap());
        assert!(conjugation_invariance(&t3, &StringLink::identity(3), &[1, 2]).unwrap());

        let sigma = Perm::new(vec![3, 2]).unwrap();
        let t4 = tau_n_sigma(4, &sigma).unwrap();
        let lam = StringLink::parse("t2 t3' t1 t1", 4).unwrap();
        assert!(conjugation_invariance(&t4, &lam, &[1, 3, 2]).unwrap());
    }
}
