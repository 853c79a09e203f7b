//! Free Lie algebras over the exact rationals in the Lyndon basis.
//!
//! Elements are stored as rational combinations of Lyndon words, each
//! standing for its standard bracketing. Brackets of basis elements are
//! rewritten into the basis by the classical recursion: if `u < v` are
//! Lyndon and the standard factorization of `uv` is `(u, v)`, the
//! bracket is the basis element `uv`; otherwise the standard
//! factorization `u = u1 u2` is peeled off with the Jacobi identity.
//!
//! On top of the basis arithmetic this module provides the tensor
//! (universal enveloping) expansion used as a PBW independence oracle,
//! the left-normed generator brackets `B(n, sigma)` spanning the
//! multilinear component, and two independent ways of expressing a
//! multilinear element in that spanning set: a Jacobi rewriting that
//! moves the first generator to the front, and an exact linear solve
//! against the Lyndon expansions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::{distinct_sequences, sigma_group, Perm};
use crate::error::{Error, Result};
use crate::linalg::{determinant, solve_square};
use crate::magnus::Monomial;

/// A Lyndon word over generators `1, .., g`: strictly smaller than each
/// of its proper suffixes in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Vec<u32>);

impl LyndonWord {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if !is_lyndon(&letters) {
            return Err(Error::InvalidArgument(format!(
                "{letters:?} is not a Lyndon word"
            )));
        }
        Ok(LyndonWord(letters))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// The standard bracketing as a tree: a letter is a leaf, longer
    /// words split at the standard factorization.
    pub fn bracketing(&self) -> BracketTree {
        if self.0.len() == 1 {
            return BracketTree::Leaf(self.0[0]);
        }
        let cut = standard_cut(&self.0);
        let left = LyndonWord(self.0[..cut].to_vec());
        let right = LyndonWord(self.0[cut..].to_vec());
        BracketTree::Node(Box::new(left.bracketing()), Box::new(right.bracketing()))
    }
}

pub fn is_lyndon(w: &[u32]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w < &w[i..])
}

/// Position of the standard factorization `w = w[..cut] w[cut..]`: the
/// suffix is the longest proper suffix that is Lyndon.
fn standard_cut(w: &[u32]) -> usize {
    (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("every Lyndon word of length >= 2 has a Lyndon proper suffix")
}

/// An iterated bracket expression: a generator label or an ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketTree {
    Leaf(u32),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    /// Left-normed tree `[[..[l1,l2],..],lk]` over the given labels.
    pub fn left_normed(labels: &[u32]) -> Result<Self> {
        let (&first, rest) = labels
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty bracket".into()))?;
        let mut tree = BracketTree::Leaf(first);
        for &l in rest {
            tree = BracketTree::Node(Box::new(tree), Box::new(BracketTree::Leaf(l)));
        }
        Ok(tree)
    }

    pub fn degree(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Node(l, r) => l.degree() + r.degree(),
        }
    }

    pub fn leaves(&self, out: &mut Vec<u32>) {
        match self {
            BracketTree::Leaf(l) => out.push(*l),
            BracketTree::Node(l, r) => {
                l.leaves(out);
                r.leaves(out);
            }
        }
    }

    /// Evaluate in the free Lie algebra on `gens` generators.
    pub fn eval(&self, gens: usize) -> Result<LieElt> {
        match self {
            BracketTree::Leaf(l) => LieElt::generator(*l, gens),
            BracketTree::Node(l, r) => lie_bracket(&l.eval(gens)?, &r.eval(gens)?),
        }
    }
}

/// An element of the free Lie algebra on `gens` generators, stored in
/// the Lyndon basis with exact rational coefficients. Zero coefficients
/// are never kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieElt {
    gens: usize,
    terms: BTreeMap<LyndonWord, BigRational>,
}

impl LieElt {
    pub fn zero(gens: usize) -> Self {
        LieElt {
            gens,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(label: u32, gens: usize) -> Result<Self> {
        if label < 1 || label as usize > gens {
            return Err(Error::GeneratorOutOfRange {
                id: label,
                alphabet: gens,
            });
        }
        let mut terms = BTreeMap::new();
        terms.insert(LyndonWord(vec![label]), BigRational::one());
        Ok(LieElt { gens, terms })
    }

    pub fn basis_element(word: LyndonWord, gens: usize) -> Result<Self> {
        if let Some(&bad) = word.letters().iter().find(|&&l| l < 1 || l as usize > gens) {
            return Err(Error::GeneratorOutOfRange {
                id: bad,
                alphabet: gens,
            });
        }
        let mut terms = BTreeMap::new();
        terms.insert(word, BigRational::one());
        Ok(LieElt { gens, terms })
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonWord, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &LyndonWord) -> BigRational {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, word: LyndonWord, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_gens(&self, other: &LieElt) -> Result<()> {
        if self.gens != other.gens {
            return Err(Error::GeneratorSetMismatch {
                left: self.gens,
                right: other.gens,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LieElt) -> Result<LieElt> {
        self.check_gens(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LieElt) -> Result<LieElt> {
        self.check_gens(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.accumulate(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &BigRational) -> LieElt {
        if factor.is_zero() {
            return LieElt::zero(self.gens);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= factor.clone();
        }
        out
    }

    pub fn neg(&self) -> LieElt {
        self.scale(&-BigRational::one())
    }

    /// True when every term has degree `degree` and uses each of the
    /// letters `1, .., degree` exactly once.
    pub fn is_multilinear(&self, degree: usize) -> bool {
        self.terms.keys().all(|w| {
            w.degree() == degree && {
                let mut seen = vec![false; degree];
                w.letters().iter().all(|&l| {
                    let idx = l as usize - 1;
                    idx < degree && !std::mem::replace(&mut seen[idx], true)
                })
            }
        })
    }

    /// JSON form: a list of `{"lyndon_word": [..], "coeff": "p/q"}` in
    /// lexicographic word order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({
                        "lyndon_word": w.letters(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

/// Lie bracket, bilinear over the Lyndon basis rewriting.
pub fn lie_bracket(a: &LieElt, b: &LieElt) -> Result<LieElt> {
    a.check_gens(b)?;
    let mut out = LieElt::zero(a.gens);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let product = bracket_basis(wa, wb, a.gens)?;
            for (w, c) in product.terms {
                out.accumulate(w, c * ca * cb);
            }
        }
    }
    Ok(out)
}

/// Bracket of two Lyndon basis elements, rewritten into the basis.
fn bracket_basis(u: &LyndonWord, v: &LyndonWord, gens: usize) -> Result<LieElt> {
    if u == v {
        return Ok(LieElt::zero(gens));
    }
    if u.0 > v.0 {
        return Ok(bracket_basis(v, u, gens)?.neg());
    }
    // u < v: uv is Lyndon. Its standard factorization is (u, v) exactly
    // when u is a letter or the standard suffix of u is >= v.
    let standard = u.0.len() == 1 || {
        let cut = standard_cut(&u.0);
        u.0[cut..] >= v.0[..]
    };
    if standard {
        let mut w = u.0.clone();
        w.extend_from_slice(&v.0);
        return LieElt::basis_element(LyndonWord(w), gens);
    }
    // Peel u = u1 u2 and apply [[u1,u2],v] = [[u1,v],u2] + [u1,[u2,v]].
    let cut = standard_cut(&u.0);
    let u1 = LyndonWord(u.0[..cut].to_vec());
    let u2 = LyndonWord(u.0[cut..].to_vec());
    let left = lie_bracket(
        &bracket_basis(&u1, v, gens)?,
        &LieElt::basis_element(u2.clone(), gens)?,
    )?;
    let right = lie_bracket(
        &LieElt::basis_element(u1, gens)?,
        &bracket_basis(&u2, v, gens)?,
    )?;
    left.add(&right)
}

/// Left-normed bracket `[[..[g1,g2],..],gk]` of generator labels.
pub fn left_normed(labels: &[u32], gens: usize) -> Result<LieElt> {
    BracketTree::left_normed(labels)?.eval(gens)
}

/// The spanning bracket `B(n, sigma) = [x_1, x_sigma(2), ..,
/// x_sigma(n-1)]` of the multilinear component on `n - 1` generators.
pub fn bn_sigma(n: usize, sigma: &Perm) -> Result<LieElt> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "the multilinear spanning set needs n >= 3".into(),
        ));
    }
    if sigma.one_line().len() != n - 2 {
        return Err(Error::MalformedPermutation {
            perm: sigma.one_line().to_vec(),
            domain: format!("{{2,..,{}}}", n - 1),
        });
    }
    let mut labels = Vec::with_capacity(n - 1);
    labels.push(1);
    labels.extend_from_slice(sigma.one_line());
    left_normed(&labels, n - 1)
}

// ---------------------------------------------------------------------
// Universal enveloping (tensor) expansion
// ---------------------------------------------------------------------

/// A noncommutative polynomial with exact rational coefficients, the
/// image of Lie elements in the tensor algebra. No truncation: inputs
/// are homogeneous of small degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPoly {
    vars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl TensorPoly {
    pub fn zero(vars: usize) -> Self {
        TensorPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn variable(i: u32, vars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![i]), BigRational::one());
        TensorPoly { vars, terms }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
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

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.0.clone();
                m.extend_from_slice(&mb.0);
                out.accumulate(Monomial(m), ca * cb);
            }
        }
        out
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &TensorPoly) -> TensorPoly {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Expansion in the tensor algebra: generators map to variables and
/// brackets to commutators. Injective on each graded piece by PBW.
pub fn uea_expand(a: &LieElt) -> TensorPoly {
    let mut out = TensorPoly::zero(a.gens);
    for (w, c) in &a.terms {
        let expanded = expand_tree(&w.bracketing(), a.gens);
        for (m, cm) in expanded.terms {
            out.accumulate(m, cm * c);
        }
    }
    out
}

fn expand_tree(tree: &BracketTree, vars: usize) -> TensorPoly {
    match tree {
        BracketTree::Leaf(l) => TensorPoly::variable(*l, vars),
        BracketTree::Node(l, r) => expand_tree(l, vars).commutator(&expand_tree(r, vars)),
    }
}

/// Coefficient of `x_1 x_xi(2) .. x_xi(n-1)` in the tensor expansion of
/// `B(n, sigma)`: the Kronecker delta of the two permutations.
pub fn pbw_leading_coeff(n: usize, sigma: &Perm, xi: &Perm) -> Result<BigRational> {
    let b = bn_sigma(n, sigma)?;
    if xi.one_line().len() != n - 2 {
        return Err(Error::MalformedPermutation {
            perm: xi.one_line().to_vec(),
            domain: format!("{{2,..,{}}}", n - 1),
        });
    }
    let mut monomial = Vec::with_capacity(n - 1);
    monomial.push(1);
    monomial.extend_from_slice(xi.one_line());
    Ok(uea_expand(&b).coeff(&Monomial(monomial)))
}

/// The full delta matrix `(sigma, xi) -> pbw_leading_coeff`, in
/// lexicographic permutation order.
pub fn pbw_delta_matrix(n: usize) -> Result<Vec<Vec<BigRational>>> {
    let perms = sigma_group(n - 1);
    let mut rows = Vec::with_capacity(perms.len());
    for sigma in &perms {
        let expansion = uea_expand(&bn_sigma(n, sigma)?);
        let mut row = Vec::with_capacity(perms.len());
        for xi in &perms {
            let mut monomial = Vec::with_capacity(n - 1);
            monomial.push(1);
            monomial.extend_from_slice(xi.one_line());
            row.push(expansion.coeff(&Monomial(monomial)));
        }
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------
// Multilinear component and the two rewriting routes
// ---------------------------------------------------------------------

/// Lyndon words spanning the multilinear degree-(n-1) component: each
/// letter `1, .., n-1` exactly once. They all start with the letter 1.
pub fn multilinear_lyndon_words(n: usize) -> Vec<LyndonWord> {
    distinct_sequences(n - 1, n - 1)
        .into_iter()
        .filter(|w| is_lyndon(w))
        .map(LyndonWord)
        .collect()
}

/// Dimension of the multilinear component by explicit enumeration.
pub fn multilinear_dim(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "multilinear component needs n >= 3".into(),
        ));
    }
    Ok(multilinear_lyndon_words(n).len())
}

fn check_multilinear(a: &LieElt, n: usize) -> Result<()> {
    if a.gens != n - 1 {
        return Err(Error::GeneratorSetMismatch {
            left: a.gens,
            right: n - 1,
        });
    }
    if !a.is_multilinear(n - 1) {
        return Err(Error::NotMultilinear(format!(
            "expected every term to use each of 1..{} exactly once",
            n - 1
        )));
    }
    Ok(())
}

type SeqComb = BTreeMap<Vec<u32>, BigInt>;

fn seq_accumulate(map: &mut SeqComb, seq: Vec<u32>, coeff: BigInt) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(seq) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += coeff;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Rewrite a bracket tree as an integer combination of left-normed
/// sequences by repeatedly expanding the right subtree with
/// `[a,[b,c]] = [[a,b],c] - [[a,c],b]`.
fn left_normalize(tree: &BracketTree) -> SeqComb {
    let mut out = SeqComb::new();
    match tree {
        BracketTree::Leaf(l) => {
            out.insert(vec![*l], BigInt::one());
        }
        BracketTree::Node(left, right) => match right.as_ref() {
            BracketTree::Leaf(r) => {
                for (mut seq, c) in left_normalize(left) {
                    seq.push(*r);
                    seq_accumulate(&mut out, seq, c);
                }
            }
            BracketTree::Node(r1, r2) => {
                let a = BracketTree::Node(
                    Box::new(BracketTree::Node(left.clone(), r1.clone())),
                    r2.clone(),
                );
                let b = BracketTree::Node(
                    Box::new(BracketTree::Node(left.clone(), r2.clone())),
                    r1.clone(),
                );
                for (seq, c) in left_normalize(&a) {
                    seq_accumulate(&mut out, seq, c);
                }
                for (seq, c) in left_normalize(&b) {
                    seq_accumulate(&mut out, seq, -c);
                }
            }
        },
    }
    out
}

/// Rewrite a left-normed multilinear sequence as a combination of
/// left-normed sequences starting with the letter 1, shuffling 1 to the
/// front with the Jacobi identity `[[a,b],c] = [[c,b],a] - [[c,a],b]`.
fn shuffle_front(seq: &[u32]) -> SeqComb {
    let mut out = SeqComb::new();
    if seq[0] == 1 {
        out.insert(seq.to_vec(), BigInt::one());
        return out;
    }
    let k = seq
        .iter()
        .position(|&l| l == 1)
        .expect("multilinear sequence contains the letter 1");
    if k + 1 < seq.len() {
        // [prefix-with-1, rest..]: shuffle the prefix, then extend.
        for (pseq, c) in shuffle_front(&seq[..=k]) {
            let mut full = pseq;
            full.extend_from_slice(&seq[k + 1..]);
            seq_accumulate(&mut out, full, c);
        }
        return out;
    }
    if seq.len() == 2 {
        // [b, 1] = -[1, b].
        out.insert(vec![1, seq[0]], -BigInt::one());
        return out;
    }
    // seq = A ++ [b, 1]: apply [[A,b],1] = [[1,b],A] - [[1,A],b],
    // then flatten both right-hand trees back to left-normed form.
    let a_tree = BracketTree::left_normed(&seq[..seq.len() - 2]).expect("nonempty");
    let b = seq[seq.len() - 2];
    let one_b = BracketTree::Node(
        Box::new(BracketTree::Leaf(1)),
        Box::new(BracketTree::Leaf(b)),
    );
    let term1 = BracketTree::Node(Box::new(one_b), Box::new(a_tree.clone()));
    let term2 = BracketTree::Node(
        Box::new(BracketTree::Node(
            Box::new(BracketTree::Leaf(1)),
            Box::new(a_tree),
        )),
        Box::new(BracketTree::Leaf(b)),
    );
    for (seq, c) in left_normalize(&term1) {
        debug_assert_eq!(seq[0], 1);
        seq_accumulate(&mut out, seq, c);
    }
    for (seq, c) in left_normalize(&term2) {
        debug_assert_eq!(seq[0], 1);
        seq_accumulate(&mut out, seq, -c);
    }
    out
}

/// Express a multilinear element as `sum_sigma c_sigma B(n, sigma)` by
/// the Jacobi shuffling route. The companion `rewrite_to_basis_linsolve`
/// derives the same coefficients independently; the two must agree.
pub fn rewrite_to_basis(a: &LieElt, n: usize) -> Result<BTreeMap<Perm, BigRational>> {
    check_multilinear(a, n)?;
    let mut out: BTreeMap<Perm, BigRational> = BTreeMap::new();
    for (word, coeff) in &a.terms {
        let normed = left_normalize(&word.bracketing());
        for (seq, c) in normed {
            for (fronted, c2) in shuffle_front(&seq) {
                let sigma = Perm::new(fronted[1..].to_vec())?;
                let delta = BigRational::from_integer(c.clone() * c2) * coeff;
                let entry = out.entry(sigma).or_insert_with(BigRational::zero);
                *entry += delta;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Express a multilinear element in the `B(n, sigma)` spanning set by
/// solving against their Lyndon expansions (exact rational elimination).
pub fn rewrite_to_basis_linsolve(a: &LieElt, n: usize) -> Result<BTreeMap<Perm, BigRational>> {
    check_multilinear(a, n)?;
    let words = multilinear_lyndon_words(n);
    let perms = sigma_group(n - 1);
    // Columns are the B(n, sigma) in the Lyndon word coordinates; the
    // matrix is square because both families span the same component.
    let mut matrix = vec![vec![BigRational::zero(); perms.len()]; words.len()];
    for (col, sigma) in perms.iter().enumerate() {
        let b = bn_sigma(n, sigma)?;
        for (row, word) in words.iter().enumerate() {
            matrix[row][col] = b.coeff(word);
        }
    }
    let rhs: Vec<BigRational> = words.iter().map(|w| a.coeff(w)).collect();
    let solution = solve_square(&matrix, &rhs).ok_or_else(|| {
        Error::InvalidArgument("multilinear spanning set is singular (unexpected)".into())
    })?;
    let mut out = BTreeMap::new();
    for (sigma, value) in perms.into_iter().zip(solution) {
        if !value.is_zero() {
            out.insert(sigma, value);
        }
    }
    Ok(out)
}

/// Determinant of the PBW delta matrix; 1 exactly when the leading
/// monomials are the identity pattern.
pub fn pbw_delta_det(n: usize) -> Result<BigRational> {
    Ok(determinant(&pbw_delta_matrix(n)?))
}
