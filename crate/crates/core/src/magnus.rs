//! Truncated noncommutative power series over the integers and the
//! Magnus expansion.
//!
//! The Magnus expansion embeds a free group into `Z<<X_1,..,X_n>>` via
//! `m_i -> 1 + X_i` and `m_i^-1 -> 1 - X_i + X_i^2 - ..`. All arithmetic
//! here is exact (arbitrary-precision integers) and truncated at a fixed
//! total degree. In square-free (reduced) mode every monomial with a
//! repeated variable is dropped as well; that quotient ring is the
//! natural target for link-homotopy invariants, where the expansion of
//! an inverse collapses to `1 - X_i` exactly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::{Sign, Word};

/// A noncommutative monomial `X_{i_1} .. X_{i_m}`, ordered by length
/// first and lexicographically within a length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn has_repeat(&self) -> bool {
        // degrees stay tiny; quadratic scan beats allocating a set
        self.0
            .iter()
            .enumerate()
            .any(|(k, v)| self.0[..k].contains(v))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("")?;
            }
            write!(f, "X{i}")?;
        }
        Ok(())
    }
}

/// A truncated noncommutative polynomial with exact integer
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcPoly {
    nvars: usize,
    degree: usize,
    square_free: bool,
    terms: BTreeMap<Monomial, BigInt>,
}

impl NcPoly {
    pub fn zero(nvars: usize, degree: usize, square_free: bool) -> Self {
        assert!(degree >= 1, "truncation degree must be at least 1");
        NcPoly {
            nvars,
            degree,
            square_free,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, degree: usize, square_free: bool) -> Self {
        let mut p = NcPoly::zero(nvars, degree, square_free);
        p.terms.insert(Monomial::one(), BigInt::one());
        p
    }

    /// Build from explicit terms, dropping anything outside the
    /// truncation (and repeated-index monomials in square-free mode).
    pub fn from_terms(
        nvars: usize,
        degree: usize,
        square_free: bool,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self> {
        let mut p = NcPoly::zero(nvars, degree, square_free);
        for (m, c) in terms {
            if let Some(&bad) = m.0.iter().find(|&&i| i == 0 || i as usize > nvars) {
                return Err(Error::GeneratorOutOfRange {
                    id: bad,
                    alphabet: nvars,
                });
            }
            p.accumulate(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_square_free(&self) -> bool {
        self.square_free
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    /// Coefficient of the given monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    fn keeps(&self, m: &Monomial) -> bool {
        m.degree() <= self.degree && !(self.square_free && m.has_repeat())
    }

    fn accumulate(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() || !self.keeps(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_mode(&self, other: &NcPoly) -> Result<()> {
        if self.nvars != other.nvars
            || self.degree != other.degree
            || self.square_free != other.square_free
        {
            return Err(Error::ModeMismatch(format!(
                "({} vars, degree {}, square_free {}) vs ({} vars, degree {}, square_free {})",
                self.nvars,
                self.degree,
                self.square_free,
                other.nvars,
                other.degree,
                other.square_free
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_mode(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &NcPoly) -> Result<NcPoly> {
        self.check_mode(other)?;
        let mut out = NcPoly::zero(self.nvars, self.degree, self.square_free);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > self.degree {
                    continue;
                }
                let mut m = ma.0.clone();
                m.extend_from_slice(&mb.0);
                out.accumulate(Monomial(m), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> NcPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    /// Multiplicative inverse up to truncation. The constant term must
    /// be a unit (+1 or -1); higher terms are nilpotent under
    /// truncation, so the geometric series terminates.
    pub fn inv(&self) -> Result<NcPoly> {
        let c0 = self.coeff(&Monomial::one());
        if !c0.is_one() && c0 != -BigInt::one() {
            return Err(Error::InvalidArgument(
                "series is not invertible: constant term is not a unit".into(),
            ));
        }
        // self = u(1 + N) with N of positive degree; inverse is
        // u(1 - N + N^2 - ..) which stops at the truncation degree.
        let unit = NcPoly::from_terms(
            self.nvars,
            self.degree,
            self.square_free,
            [(Monomial::one(), c0.clone())],
        )?;
        let nil = self.checked_mul(&unit)?.checked_sub(&NcPoly::one(
            self.nvars,
            self.degree,
            self.square_free,
        ))?;
        let mut acc = NcPoly::one(self.nvars, self.degree, self.square_free);
        let mut power = NcPoly::one(self.nvars, self.degree, self.square_free);
        for _ in 0..self.degree {
            power = power.checked_mul(&nil)?.neg();
            if power.is_zero() {
                break;
            }
            acc = acc.checked_add(&power)?;
        }
        acc.checked_mul(&unit)
    }

    /// Integer power; negative exponents go through `inv`.
    pub fn pow(&self, e: i64) -> Result<NcPoly> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = NcPoly::one(self.nvars, self.degree, self.square_free);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Drop every monomial with a repeated index, landing in the
    /// square-free quotient.
    pub fn square_free_projection(&self) -> NcPoly {
        let mut out = NcPoly::zero(self.nvars, self.degree, true);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    /// Smallest positive degree carrying a nonzero term, if any.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(Monomial::degree)
            .filter(|&d| d > 0)
            .min()
    }

    /// Canonical text form `1 + c.X1X2 + ..` with monomials sorted by
    /// (length, lex).
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if m.degree() == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{mag}.{m}"));
            }
        }
        out
    }

    /// JSON form: a list of `{"monomial": [..], "coeff": "<decimal>"}`
    /// in canonical monomial order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "monomial": m.0,
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

/// Magnus expansion of a word, truncated at `degree`, over the word's
/// own alphabet. Multiplicative by construction: the expansion of a
/// product is the product of expansions.
pub fn magnus(w: &Word, degree: usize, square_free: bool) -> NcPoly {
    let nvars = w.alphabet();
    let mut acc = NcPoly::one(nvars, degree, square_free);
    for l in w.letters() {
        let gen = letter_series(l.gen(), l.sign(), nvars, degree, square_free);
        acc = acc.checked_mul(&gen).expect("mode fixed by construction");
    }
    acc
}

/// Expansion of a single letter: `1 + X_i` or the truncated geometric
/// series `1 - X_i + X_i^2 - ..` (which is exactly `1 - X_i` in
/// square-free mode).
fn letter_series(id: u32, sign: Sign, nvars: usize, degree: usize, square_free: bool) -> NcPoly {
    let mut p = NcPoly::one(nvars, degree, square_free);
    match sign {
        Sign::Pos => {
            p.accumulate(Monomial(vec![id]), BigInt::one());
        }
        Sign::Neg => {
            let top = if square_free { 1 } else { degree };
            let mut c = BigInt::one();
            for d in 1..=top {
                c = -c;
                p.accumulate(Monomial(vec![id; d]), c.clone());
            }
        }
    }
    p
}

/// The coefficient of `X_I` in `p`: the Milnor number `mu(I; j)` when
/// `p` expands the j-th longitude.
pub fn mu_coeff(p: &NcPoly, index: &[u32]) -> Result<BigInt> {
    if index.len() > p.degree() {
        return Err(Error::DegreeExceeded {
            len: index.len(),
            degree: p.degree(),
        });
    }
    Ok(p.coeff(&Monomial(index.to_vec())))
}

/// Table of known lower-order invariants: `(I, j) -> mu(I; j)` keyed by
/// the multiindex and the target component.
pub type MuTable = BTreeMap<(Vec<u32>, u32), BigInt>;

/// The indeterminacy `Delta(I)` for the invariant `mu(I; j)`: the gcd of
/// `mu(J; j')` where `(J; j')` ranges over all sequences obtained from
/// cyclic permutations of `(I, j)` by deleting at least one index and
/// keeping the order of the rest (the last remaining index acts as the
/// target). Returns 0 when every such value vanishes; the residue is
/// then the integer invariant itself.
pub fn delta_indeterminacy(table: &MuTable, index: &[u32], target: u32) -> Result<BigInt> {
    let mut full: Vec<u32> = index.to_vec();
    full.push(target);
    let m = full.len();
    let mut gcd = BigInt::zero();
    for r in 0..m {
        let rotation: Vec<u32> = (0..m).map(|k| full[(k + r) % m]).collect();
        // Proper subsequences, kept in order, of length >= 2.
        for mask in 1u32..(1 << m) - 1 {
            if (mask.count_ones() as usize) < 2 {
                continue;
            }
            let sub: Vec<u32> = (0..m)
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| rotation[k])
                .collect();
            let (head, tail) = sub.split_at(sub.len() - 1);
            let key = (head.to_vec(), tail[0]);
            let value = table.get(&key).ok_or(Error::MissingLowerOrder {
                index: key.0.clone(),
                target: key.1,
            })?;
            gcd = gcd.gcd(value);
        }
    }
    Ok(gcd)
}

/// Residue of `mu` modulo `delta`, normalized to `[0, delta)` for
/// positive `delta`; when the indeterminacy vanishes the invariant is
/// the integer itself.
pub fn mu_bar(mu: &BigInt, delta: &BigInt) -> BigInt {
    if delta.is_zero() {
        mu.clone()
    } else {
        mu.mod_floor(delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn mono(ix: &[u32]) -> Monomial {
        Monomial(ix.to_vec())
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn monomial_order_is_length_then_lex() {
        let mut ms = [
            mono(&[2]),
            mono(&[1, 2]),
            mono(&[1]),
            mono(&[]),
            mono(&[2, 1]),
        ];
        ms.sort();
        assert_eq!(
            ms,
            [
                mono(&[]),
                mono(&[1]),
                mono(&[2]),
                mono(&[1, 2]),
                mono(&[2, 1])
            ]
        );
    }

    #[test]
    fn ring_ops_plain_and_square_free() {
        // (1+X1)(1-X1) = 1 - X1^2 in the plain ring, 1 in square-free mode.
        let plus =
            |sf| NcPoly::from_terms(2, 3, sf, [(mono(&[]), int(1)), (mono(&[1]), int(1))]).unwrap();
        let minus = |sf| {
            NcPoly::from_terms(2, 3, sf, [(mono(&[]), int(1)), (mono(&[1]), int(-1))]).unwrap()
        };
        let plain = plus(false).checked_mul(&minus(false)).unwrap();
        assert_eq!(plain.coeff(&mono(&[1, 1])), int(-1));
        assert_eq!(plain.terms().count(), 2);
        let sf = plus(true).checked_mul(&minus(true)).unwrap();
        assert!(sf.is_one());

        // (1+X1)(1+X2) = 1 + X1 + X2 + X1X2.
        let p =
            NcPoly::from_terms(2, 3, false, [(mono(&[]), int(1)), (mono(&[1]), int(1))]).unwrap();
        let q =
            NcPoly::from_terms(2, 3, false, [(mono(&[]), int(1)), (mono(&[2]), int(1))]).unwrap();
        let pq = p.checked_mul(&q).unwrap();
        assert_eq!(pq.to_text(), "1 + X1 + X2 + X1X2");
        assert!(matches!(
            p.checked_add(&NcPoly::one(2, 4, false)),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn magnus_on_generators() {
        let m1 = parse_word("m1", 2).unwrap();
        let p = magnus(&m1, 3, false);
        assert_eq!(p.to_text(), "1 + X1");

        let m1i = parse_word("m1'", 2).unwrap();
        let q = magnus(&m1i, 3, false);
        assert_eq!(q.to_text(), "1 - X1 + X1X1 - X1X1X1");
        let q_sf = magnus(&m1i, 3, true);
        assert_eq!(q_sf.to_text(), "1 - X1");

        assert!(magnus(&parse_word("e", 2).unwrap(), 3, false).is_one());
    }

    #[test]
    fn magnus_commutator_leading_term() {
        let c = parse_word("[m1,m2]", 2).unwrap();
        let p = magnus(&c, 2, false);
        assert_eq!(p.coeff(&mono(&[1, 2])), int(1));
        assert_eq!(p.coeff(&mono(&[2, 1])), int(-1));
        assert!(!p.is_one());
        assert_eq!(p.to_text(), "1 + X1X2 - X2X1");
    }

    #[test]
    fn mu_coeff_reads_and_checks_degree() {
        let c = parse_word("[m1,m2]", 2).unwrap();
        let p = magnus(&c, 2, false);
        assert_eq!(mu_coeff(&p, &[1, 2]).unwrap(), int(1));
        assert_eq!(mu_coeff(&p, &[2, 1]).unwrap(), int(-1));
        assert_eq!(mu_coeff(&p, &[1]).unwrap(), int(0));
        assert!(matches!(
            mu_coeff(&p, &[1, 2, 1]),
            Err(Error::DegreeExceeded { .. })
        ));
    }

    #[test]
    fn inverse_series_cancels() {
        let w = parse_word("m1 m2 m1' m2 m2", 3).unwrap();
        for sf in [false, true] {
            let p = magnus(&w, 4, sf);
            let q = magnus(&w.inverse(), 4, sf);
            assert!(p.checked_mul(&q).unwrap().is_one());
            assert!(p.inv().unwrap().checked_mul(&p).unwrap().is_one());
        }
    }

    #[test]
    fn delta_gcd_conventions() {
        // All lower invariants zero: vanishing indeterminacy.
        let mut table = MuTable::new();
        for a in 1u32..=3 {
            for b in 1u32..=3 {
                if a != b {
                    table.insert((vec![a], b), int(0));
                }
            }
        }
        assert_eq!(delta_indeterminacy(&table, &[1, 2], 3).unwrap(), int(0));

        // Pairwise linking numbers 2, 3, 4 => gcd 1 for the triple.
        let lk = |a: u32, b: u32| match (a.min(b), a.max(b)) {
            (1, 2) => 2,
            (1, 3) => 3,
            (2, 3) => 4,
            _ => unreachable!(),
        };
        let mut table = MuTable::new();
        for a in 1u32..=3 {
            for b in 1u32..=3 {
                if a != b {
                    table.insert((vec![a], b), int(lk(a, b)));
                }
            }
        }
        assert_eq!(delta_indeterminacy(&table, &[1, 2], 3).unwrap(), int(1));

        // Values {2, 4} only: gcd 2.
        let mut table = MuTable::new();
        for a in 1u32..=3 {
            for b in 1u32..=3 {
                if a != b {
                    let v = if a.min(b) == 1 && a.max(b) == 2 { 2 } else { 4 };
                    table.insert((vec![a], b), int(v));
                }
            }
        }
        assert_eq!(delta_indeterminacy(&table, &[1, 2], 3).unwrap(), int(2));

        // Missing entries surface as errors.
        assert!(matches!(
            delta_indeterminacy(&MuTable::new(), &[1, 2], 3),
            Err(Error::MissingLowerOrder { .. })
        ));
    }

    #[test]
    fn residues() {
        assert_eq!(mu_bar(&int(5), &int(3)), int(2));
        assert_eq!(mu_bar(&int(5), &int(0)), int(5));
        assert_eq!(mu_bar(&int(-1), &int(3)), int(2));
    }

    #[test]
    fn json_shape() {
        let p = magnus(&parse_word("[m1,m2]", 2).unwrap(), 2, false);
        let v = p.to_json();
        assert_eq!(v[0]["monomial"], serde_json::json!([]));
        assert_eq!(v[0]["coeff"], "1");
        assert_eq!(v[1]["monomial"], serde_json::json!([1, 2]));
        assert_eq!(v[2]["coeff"], "-1");
    }

    #[test]
    fn square_free_projection_commutes_with_product() {
        let u = parse_word("m1 m2' m3 m1", 3).unwrap();
        let v = parse_word("m2 m1' m3'", 3).unwrap();
        let plain = magnus(&u.concat(&v).unwrap(), 3, false);
        let sf = magnus(&u.concat(&v).unwrap(), 3, true);
        assert_eq!(plain.square_free_projection(), sf);
    }
}
