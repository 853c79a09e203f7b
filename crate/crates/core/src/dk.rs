//! The Drinfeld-Kohno Lie algebra of the configuration space and the
//! graded model of the free part of the torus group.
//!
//! As a vector space the algebra is a direct sum of free Lie algebras:
//! factor `j` is free on the generators `B_{j+1,1}, .., B_{j+1,j}`
//! (indices canonicalized to `i < k`, with `B_{i,k} = -B_{k,i}`
//! absorbed as a sign). The bracket is evaluated through the iterated
//! semidirect-product structure: within a factor it is the free
//! bracket; an element of a lower factor acts on a higher factor as a
//! derivation, determined on generators by
//!
//! ```text
//!   [B_{p,i}, B_{c,m}] = 0                    (m not in {i, p})
//!   [B_{p,i}, B_{c,i}] =  [B_{c,i}, B_{c,p}]
//!   [B_{p,i}, B_{c,p}] = -[B_{c,i}, B_{c,p}]
//! ```
//!
//! for `i < p < c`, and extended to brackets by commutators of
//! derivations. The derivation table is not taken on faith: `check_4T`
//! verifies every instance of the defining relations under the
//! implemented bracket, and a deliberately corrupted table is detectable
//! as a negative control.
//!
//! Torus elements model the associated graded of the free part of the
//! torus group: a map from ordered multiindices (supports inside the
//! torus coordinates) to homogeneous algebra elements. Brackets with
//! overlapping support vanish; disjoint supports merge with the sign
//! `(-1)^w`, `w` counting the transpositions needed to interleave them.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::{distinct_sequences, sigma_group, Perm};
use crate::error::{Error, Result};
use crate::freelie::{
    lie_bracket, multilinear_lyndon_words, pbw_delta_det, BracketTree, LieElt, LyndonWord,
};
use crate::linalg::{row_reduce, sparse_rank};

/// A canonical generator `B_{k,i}` with `i < k`. Rendered as `B<k>,<i>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DkGen {
    pub upper: u32,
    pub lower: u32,
}

impl DkGen {
    pub fn new(upper: u32, lower: u32) -> Result<Self> {
        if lower < 1 || lower >= upper {
            return Err(Error::InvalidArgument(format!(
                "B{upper},{lower} is not canonical (need 1 <= i < k)"
            )));
        }
        Ok(DkGen { upper, lower })
    }
}

impl fmt::Display for DkGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{},{}", self.upper, self.lower)
    }
}

fn render_bracketing(tree: &BracketTree, upper: u32, out: &mut String) {
    match tree {
        BracketTree::Leaf(l) => out.push_str(&format!("B{upper},{l}")),
        BracketTree::Node(a, b) => {
            out.push('[');
            render_bracketing(a, upper, out);
            out.push(',');
            render_bracketing(b, upper, out);
            out.push(']');
        }
    }
}

/// An element of the algebra for `n` points: one free-Lie component per
/// factor, factor `f` (0-based) on `f + 1` generators with upper index
/// `f + 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkElt {
    n: usize,
    factors: Vec<LieElt>,
}

impl DkElt {
    pub fn zero(n: usize) -> Self {
        DkElt {
            n,
            factors: (0..n.saturating_sub(1))
                .map(|f| LieElt::zero(f + 1))
                .collect(),
        }
    }

    /// The generator `B_{k,i}` (in either index order; `B_{i,k}` with
    /// `i < k` contributes with a minus sign).
    pub fn generator(n: usize, k: u32, i: u32) -> Result<Self> {
        if k == i || k < 1 || i < 1 || k as usize > n || i as usize > n {
            return Err(Error::InvalidArgument(format!(
                "B{k},{i} is not a generator for {n} points"
            )));
        }
        let (upper, lower, negate) = if i < k { (k, i, false) } else { (i, k, true) };
        let mut out = DkElt::zero(n);
        let factor = upper as usize - 2;
        let gen = LieElt::generator(lower, upper as usize - 1)?;
        out.factors[factor] = if negate { gen.neg() } else { gen };
        Ok(out)
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn factor(&self, f: usize) -> &LieElt {
        &self.factors[f]
    }

    pub fn factors(&self) -> &[LieElt] {
        &self.factors
    }

    pub fn from_factor(n: usize, f: usize, elt: LieElt) -> Result<Self> {
        let mut out = DkElt::zero(n);
        if f >= out.factors.len() || elt.gens() != f + 1 {
            return Err(Error::InvalidArgument(format!(
                "factor {f} of the algebra on {n} points has {} generators, got {}",
                f + 1,
                elt.gens()
            )));
        }
        out.factors[f] = elt;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().all(LieElt::is_zero)
    }

    /// The common degree of all terms, if the element is homogeneous
    /// and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degree = None;
        for factor in &self.factors {
            for (word, _) in factor.terms() {
                match degree {
                    None => degree = Some(word.degree()),
                    Some(d) if d != word.degree() => return None,
                    Some(_) => {}
                }
            }
        }
        degree
    }

    fn check_points(&self, other: &DkElt) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ComponentMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &DkElt) -> Result<DkElt> {
        self.check_points(other)?;
        let factors = self
            .factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(DkElt { n: self.n, factors })
    }

    pub fn sub(&self, other: &DkElt) -> Result<DkElt> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DkElt {
        DkElt {
            n: self.n,
            factors: self.factors.iter().map(LieElt::neg).collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> DkElt {
        DkElt {
            n: self.n,
            factors: self.factors.iter().map(|x| x.scale(factor)).collect(),
        }
    }
}

impl fmt::Display for DkElt {
    /// Sum of bracketings in `B<k>,<i>` labels, e.g.
    /// `[B3,1,B3,2] - 2.B2,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, factor) in self.factors.iter().enumerate() {
            let upper = idx as u32 + 2;
            for (word, coeff) in factor.terms() {
                let mut rendered = String::new();
                render_bracketing(&word.bracketing(), upper, &mut rendered);
                let mag = if coeff < &BigRational::zero() {
                    -coeff.clone()
                } else {
                    coeff.clone()
                };
                if first {
                    if coeff < &BigRational::zero() {
                        f.write_str("-")?;
                    }
                    first = false;
                } else if coeff < &BigRational::zero() {
                    f.write_str(" - ")?;
                } else {
                    f.write_str(" + ")?;
                }
                if mag.is_one() {
                    f.write_str(&rendered)?;
                } else {
                    write!(f, "{mag}.{rendered}")?;
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// The generator-level derivation table behind the cross-factor
/// bracket. `Standard` is the table above; `CorruptSign` flips one sign
/// and exists as a negative control for the relation checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkAction {
    Standard,
    CorruptSign,
}

impl DkAction {
    /// Image of the local generator `m` of the factor with upper index
    /// `c` under the derivation of `B_{p,i}` (`i < p < c`).
    fn on_generator(&self, p: u32, i: u32, m: u32, c: usize) -> Result<LieElt> {
        let gens = c - 1;
        if m != i && m != p {
            return Ok(LieElt::zero(gens));
        }
        let base = lie_bracket(&LieElt::generator(i, gens)?, &LieElt::generator(p, gens)?)?;
        let positive = m == i;
        let value = if positive { base } else { base.neg() };
        Ok(match self {
            DkAction::Standard => value,
            DkAction::CorruptSign if positive => value.neg(),
            DkAction::CorruptSign => value,
        })
    }
}

/// Apply the derivation of a single acting basis tree (a standard
/// bracketing in the factor with upper index `p`) to a target element of
/// the factor with upper index `c`. Brackets act as commutators of
/// derivations.
fn apply_tree_derivation(
    action: DkAction,
    p: u32,
    tree: &BracketTree,
    target: &LieElt,
    c: usize,
) -> Result<LieElt> {
    match tree {
        BracketTree::Leaf(i) => apply_gen_derivation(action, p, *i, target, c),
        BracketTree::Node(l, r) => {
            let rt = apply_tree_derivation(action, p, r, target, c)?;
            let lrt = apply_tree_derivation(action, p, l, &rt, c)?;
            let lt = apply_tree_derivation(action, p, l, target, c)?;
            let rlt = apply_tree_derivation(action, p, r, &lt, c)?;
            lrt.sub(&rlt)
        }
    }
}

/// Derivation of the generator `B_{p,i}` on a full element of the
/// factor with upper index `c`: Leibniz over each standard bracketing.
fn apply_gen_derivation(
    action: DkAction,
    p: u32,
    i: u32,
    target: &LieElt,
    c: usize,
) -> Result<LieElt> {
    let gens = c - 1;
    let mut out = LieElt::zero(gens);
    for (word, coeff) in target.terms() {
        let derived = derive_word_tree(action, p, i, &word.bracketing(), c)?;
        out = out.add(&derived.scale(coeff))?;
    }
    Ok(out)
}

fn derive_word_tree(
    action: DkAction,
    p: u32,
    i: u32,
    tree: &BracketTree,
    c: usize,
) -> Result<LieElt> {
    let gens = c - 1;
    match tree {
        BracketTree::Leaf(m) => action.on_generator(p, i, *m, c),
        BracketTree::Node(l, r) => {
            // Subtrees of a standard bracketing are standard
            // bracketings of Lyndon subwords; evaluate them directly.
            let dl = derive_word_tree(action, p, i, l, c)?;
            let dr = derive_word_tree(action, p, i, r, c)?;
            let le = l.eval(gens)?;
            let re = r.eval(gens)?;
            lie_bracket(&dl, &re)?.add(&lie_bracket(&le, &dr)?)
        }
    }
}

/// Derivation of an arbitrary acting element (living in the factor with
/// upper index `p`) on a target factor element (upper index `c > p`).
fn apply_derivation(
    action: DkAction,
    p: u32,
    acting: &LieElt,
    target: &LieElt,
    c: usize,
) -> Result<LieElt> {
    let mut out = LieElt::zero(c - 1);
    for (word, coeff) in acting.terms() {
        let image = apply_tree_derivation(action, p, &word.bracketing(), target, c)?;
        out = out.add(&image.scale(coeff))?;
    }
    Ok(out)
}

/// The Lie bracket with an explicit derivation table.
pub fn dk_bracket_with(a: &DkElt, b: &DkElt, action: DkAction) -> Result<DkElt> {
    a.check_points(b)?;
    let n = a.n;
    let mut out = DkElt::zero(n);
    for f in 0..n.saturating_sub(1) {
        let c = f + 2;
        let mut acc = lie_bracket(&a.factors[f], &b.factors[f])?;
        for lower in 0..f {
            let p = lower as u32 + 2;
            if !a.factors[lower].is_zero() && !b.factors[f].is_zero() {
                acc = acc.add(&apply_derivation(
                    action,
                    p,
                    &a.factors[lower],
                    &b.factors[f],
                    c,
                )?)?;
            }
            if !b.factors[lower].is_zero() && !a.factors[f].is_zero() {
                acc = acc.sub(&apply_derivation(
                    action,
                    p,
                    &b.factors[lower],
                    &a.factors[f],
                    c,
                )?)?;
            }
        }
        out.factors[f] = acc;
    }
    Ok(out)
}

/// The Lie bracket with the standard derivation table.
pub fn dk_bracket(a: &DkElt, b: &DkElt) -> Result<DkElt> {
    dk_bracket_with(a, b, DkAction::Standard)
}

/// Verify every instance of the defining relations under the
/// implemented bracket: antisymmetry of the generators, vanishing of
/// brackets over disjoint index pairs (all ordered choices of four
/// distinct indices), and the triple relations
/// `[B_{b,a}, B_{c,a} + B_{c,b}] = 0` (all ordered choices of three).
pub fn check_4t_with(n: usize, action: DkAction) -> Result<bool> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "relation check needs at least 3 points".into(),
        ));
    }
    // Antisymmetry is absorbed at construction; confirm it.
    for pair in distinct_sequences(n, 2) {
        let (i, j) = (pair[0], pair[1]);
        let sum = DkElt::generator(n, i, j)?.add(&DkElt::generator(n, j, i)?)?;
        if !sum.is_zero() {
            return Ok(false);
        }
    }
    // Disjoint pairs commute.
    if n >= 4 {
        for q in distinct_sequences(n, 4) {
            let x = DkElt::generator(n, q[1], q[0])?;
            let y = DkElt::generator(n, q[3], q[2])?;
            if !dk_bracket_with(&x, &y, action)?.is_zero() {
                return Ok(false);
            }
        }
    }
    // Triple relations. Each relation is indexed by unordered pairs:
    // the canonical generator of one pair brackets to zero against the
    // sum of the canonical generators of the other two (equivalently,
    // the sum over the triple is central in its subalgebra). Signed
    // reorderings of a pair are not independent instances; they differ
    // from these by the antisymmetry checked above.
    for t in distinct_sequences(n, 3) {
        let canonical = |x: u32, y: u32| DkElt::generator(n, x.max(y), x.min(y));
        let (a, b, c) = (t[0], t[1], t[2]);
        let x = canonical(a, b)?;
        let y = canonical(a, c)?.add(&canonical(b, c)?)?;
        if !dk_bracket_with(&x, &y, action)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relation check with the standard table.
pub fn check_4t(n: usize) -> Result<bool> {
    check_4t_with(n, DkAction::Standard)
}

// ---------------------------------------------------------------------
// Torus elements
// ---------------------------------------------------------------------

/// An element of the associated graded of the free part of the torus
/// group: ordered multiindex supports in `{1, .., dim}` mapped to
/// homogeneous algebra values of matching degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElt {
    conf: usize,
    dim: usize,
    graded: BTreeMap<Vec<u32>, DkElt>,
}

impl TorusElt {
    pub fn zero(conf: usize, dim: usize) -> Self {
        TorusElt {
            conf,
            dim,
            graded: BTreeMap::new(),
        }
    }

    /// Number of configuration points of the target algebra.
    pub fn conf_points(&self) -> usize {
        self.conf
    }

    /// Number of torus coordinates indexing supports.
    pub fn torus_dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.graded.is_empty()
    }

    /// Build from explicit graded pieces. Supports must be strictly
    /// increasing sequences in `{1, .., dim}` and every value must be
    /// homogeneous of degree equal to its support length.
    pub fn from_graded(
        conf: usize,
        dim: usize,
        parts: impl IntoIterator<Item = (Vec<u32>, DkElt)>,
    ) -> Result<Self> {
        let mut out = TorusElt::zero(conf, dim);
        for (support, value) in parts {
            let increasing = support.windows(2).all(|w| w[0] < w[1]);
            if !increasing || support.iter().any(|&l| l < 1 || l as usize > dim) {
                return Err(Error::InvalidArgument(format!(
                    "support {support:?} is not an ordered multiindex in [1, {dim}]"
                )));
            }
            if value.points() != conf {
                return Err(Error::ComponentMismatch {
                    left: value.points(),
                    right: conf,
                });
            }
            if !value.is_zero() && value.homogeneous_degree() != Some(support.len()) {
                return Err(Error::InvalidArgument(format!(
                    "graded piece at {support:?} is not homogeneous of degree {}",
                    support.len()
                )));
            }
            out.insert(support, value)?;
        }
        Ok(out)
    }

    pub fn graded(&self) -> impl Iterator<Item = (&Vec<u32>, &DkElt)> {
        self.graded.iter()
    }

    pub fn value_at(&self, support: &[u32]) -> Option<&DkElt> {
        self.graded.get(support)
    }

    fn insert(&mut self, support: Vec<u32>, value: DkElt) -> Result<()> {
        if value.is_zero() {
            return Ok(());
        }
        match self.graded.entry(support) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&value)?;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &TorusElt) -> Result<TorusElt> {
        if self.conf != other.conf || self.dim != other.dim {
            return Err(Error::ComponentMismatch {
                left: self.conf,
                right: other.conf,
            });
        }
        let mut out = self.clone();
        for (support, value) in &other.graded {
            out.insert(support.clone(), value.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> TorusElt {
        TorusElt {
            conf: self.conf,
            dim: self.dim,
            graded: self
                .graded
                .iter()
                .map(|(s, v)| (s.clone(), v.neg()))
                .collect(),
        }
    }
}

impl fmt::Display for TorusElt {
    /// One line per graded piece. A generator placed on a singleton
    /// support renders as `t<k>,<i>(<l>)`; anything else as
    /// `(support): value`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.graded.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (support, value) in &self.graded {
            if !first {
                f.write_str("\n")?;
            }
            first = false;
            let single = if support.len() == 1 {
                single_generator(value)
            } else {
                None
            };
            match single {
                Some(gen) => write!(f, "t{},{}({})", gen.upper, gen.lower, support[0])?,
                None => {
                    let list = support
                        .iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(",");
                    write!(f, "({list}): {value}")?;
                }
            }
        }
        Ok(())
    }
}

/// If the value is exactly one canonical generator with coefficient 1,
/// return it.
fn single_generator(value: &DkElt) -> Option<DkGen> {
    let mut found = None;
    for (idx, factor) in value.factors().iter().enumerate() {
        for (word, coeff) in factor.terms() {
            if found.is_some() || word.degree() != 1 || !coeff.is_one() {
                return None;
            }
            found = Some(DkGen {
                upper: idx as u32 + 2,
                lower: word.letters()[0],
            });
        }
    }
    found
}

/// The generator `t_{k,i}(l)`: the algebra generator `B_{k,i}` placed on
/// the length-1 support `(l)`.
pub fn torus_generator(n: usize, k: u32, i: u32, l: u32) -> Result<TorusElt> {
    if l < 1 || l as usize > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "support coordinate {l} out of range [1, {}]",
            n - 1
        )));
    }
    let mut out = TorusElt::zero(n, n - 1);
    out.insert(vec![l], DkElt::generator(n, k, i)?)?;
    Ok(out)
}

/// Number of out-of-order pairs between two disjoint sorted supports:
/// the count of `(i, j)` with `i` in the first, `j` in the second, and
/// `i > j`.
fn interleave_inversions(left: &[u32], right: &[u32]) -> usize {
    left.iter()
        .map(|&i| right.iter().filter(|&&j| i > j).count())
        .sum()
}

fn merge_supports(left: &[u32], right: &[u32]) -> Vec<u32> {
    let mut merged: Vec<u32> = left.iter().chain(right).copied().collect();
    merged.sort_unstable();
    merged
}

/// The graded commutator: homogeneous pieces with overlapping supports
/// vanish; disjoint pieces combine on the merged support with value
/// `(-1)^w [alpha, beta]` and `w` the interleaving inversion count,
/// extended bilinearly.
pub fn fox_bracket(u: &TorusElt, v: &TorusElt) -> Result<TorusElt> {
    if u.conf != v.conf || u.dim != v.dim {
        return Err(Error::ComponentMismatch {
            left: u.conf,
            right: v.conf,
        });
    }
    let mut out = TorusElt::zero(u.conf, u.dim);
    for (is, alpha) in &u.graded {
        for (js, beta) in &v.graded {
            if is.iter().any(|i| js.contains(i)) {
                continue;
            }
            let w = interleave_inversions(is, js);
            let mut value = dk_bracket(alpha, beta)?;
            if w % 2 == 1 {
                value = value.neg();
            }
            out.insert(merge_supports(is, js), value)?;
        }
    }
    Ok(out)
}

/// The deletion map for configuration point `i`: kills every generator
/// `B_{k,j}` with `k = i` or `j = i`, relabels the survivors into the
/// algebra on one fewer point, and leaves supports untouched.
pub fn psi_delete(u: &TorusElt, i: usize) -> Result<TorusElt> {
    if i < 1 || i > u.conf {
        return Err(Error::InvalidArgument(format!(
            "configuration point {i} out of range [1, {}]",
            u.conf
        )));
    }
    let mut out = TorusElt::zero(u.conf - 1, u.dim);
    for (support, value) in &u.graded {
        let image = psi_delete_elt(value, i)?;
        out.insert(support.clone(), image)?;
    }
    Ok(out)
}

fn psi_delete_elt(value: &DkElt, i: usize) -> Result<DkElt> {
    let n = value.points();
    let mut out = DkElt::zero(n - 1);
    for (f, factor) in value.factors().iter().enumerate() {
        let upper = f + 2;
        if upper == i {
            continue;
        }
        let new_upper = if upper > i { upper - 1 } else { upper };
        if new_upper < 2 {
            // Only for upper = 2, i = 1: the lone generator label is i,
            // so every word dies below.
            continue;
        }
        let target_factor = new_upper - 2;
        let mut image = LieElt::zero(new_upper - 1);
        'words: for (word, coeff) in factor.terms() {
            let mut letters = Vec::with_capacity(word.degree());
            for &m in word.letters() {
                if m as usize == i {
                    continue 'words;
                }
                letters.push(if m as usize > i { m - 1 } else { m });
            }
            // Order-preserving relabeling keeps Lyndon words Lyndon and
            // commutes with the standard bracketing.
            let relabeled = LyndonWord::new(letters)?;
            image = image.add(&LieElt::basis_element(relabeled, new_upper - 1)?.scale(coeff))?;
        }
        if !image.is_zero() {
            out = out.add(&DkElt::from_factor(n - 1, target_factor, image)?)?;
        }
    }
    Ok(out)
}

/// The iterated brackets `t(n, sigma) = [t_{n,1}(1), t_{n,sigma(2)}
/// (sigma(2)), .., t_{n,sigma(n-1)}(sigma(n-1))]` over all permutations
/// in lexicographic order. Each is supported on the full multiindex
/// `(1, .., n-1)` and killed by every deletion.
pub fn btf_basis(n: usize) -> Result<Vec<TorusElt>> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "Brunnian basis needs at least 3 points".into(),
        ));
    }
    let mut out = Vec::new();
    for sigma in sigma_group(n - 1) {
        let mut t = torus_generator(n, n as u32, 1, 1)?;
        for j in 2..=n - 1 {
            let l = sigma.image(j);
            t = fox_bracket(&t, &torus_generator(n, n as u32, l, l)?)?;
        }
        out.push(t);
    }
    Ok(out)
}

/// The permutation-indexed basis together with its permutations, for
/// callers that need the labels.
pub fn btf_basis_labeled(n: usize) -> Result<Vec<(Perm, TorusElt)>> {
    Ok(sigma_group(n - 1).into_iter().zip(btf_basis(n)?).collect())
}

/// The sign relating each iterated bracket `t(n, sigma)` to the plain
/// left-normed generator bracket: the top-support value of `t(n, sigma)`
/// equals `sign * [B_{n,1}, B_{n,sigma(2)}, ..]`. The signs accumulate
/// from the `(-1)^w` interleaving rule, so they are computed and
/// reported rather than assumed.
pub fn btf_realized_signs(n: usize) -> Result<Vec<(Perm, i8)>> {
    let top: Vec<u32> = (1..=n as u32 - 1).collect();
    let mut out = Vec::new();
    for (sigma, t) in btf_basis_labeled(n)? {
        let value = t
            .value_at(&top)
            .ok_or_else(|| Error::InvalidArgument("bracket lost its top support".into()))?;
        let mut labels = vec![1u32];
        labels.extend_from_slice(sigma.one_line());
        let plain = DkElt::from_factor(n, n - 2, crate::freelie::left_normed(&labels, n - 1)?)?;
        let sign = if *value == plain {
            1
        } else if *value == plain.neg() {
            -1
        } else {
            return Err(Error::InvalidArgument(
                "top-support value is not plus or minus the generator bracket".into(),
            ));
        };
        out.push((sigma, sign));
    }
    Ok(out)
}

/// Outcome of the Brunnian kernel computation on the top graded piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BtfKernel {
    /// Nullity of the stacked deletion maps (row reduction route).
    pub kernel_rank: usize,
    /// The expected rank `(n-2)!`.
    pub expected: usize,
    /// Rank of the basis value vectors inside the kernel (direct
    /// reduction).
    pub span_rank: usize,
    /// Whether every basis element is annihilated by every deletion.
    pub basis_in_kernel: bool,
    /// Whether the tensor-expansion leading-coefficient matrix has
    /// determinant one (the independence route).
    pub pbw_det_is_one: bool,
}

impl BtfKernel {
    /// True exactly when both routes agree that the kernel is the span
    /// of the `(n-2)!` iterated brackets.
    pub fn verified(&self) -> bool {
        self.kernel_rank == self.expected
            && self.span_rank == self.expected
            && self.basis_in_kernel
            && self.pbw_det_is_one
    }
}

/// Basis of the degree-`(n-1)` graded piece of the algebra: pairs of a
/// factor index and a Lyndon word of that length over the factor's
/// alphabet.
fn top_degree_basis(n: usize) -> Vec<(usize, LyndonWord)> {
    let degree = n - 1;
    let mut basis = Vec::new();
    for f in 0..n - 1 {
        let gens = f + 1;
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        // Enumerate all words of the right length, keep the Lyndon ones.
        while let Some(word) = stack.pop() {
            if word.len() == degree {
                if crate::freelie::is_lyndon(&word) {
                    basis.push((f, LyndonWord::new(word).expect("checked")));
                }
                continue;
            }
            for l in 1..=gens as u32 {
                let mut next = word.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    basis.sort_by(|(fa, wa), (fb, wb)| fa.cmp(fb).then_with(|| wa.cmp(wb)));
    basis
}

fn coords_in_top_basis(
    value: &DkElt,
    index: &BTreeMap<(usize, LyndonWord), usize>,
    dim: usize,
) -> Result<Vec<BigRational>> {
    let mut coords = vec![BigRational::zero(); dim];
    for (f, factor) in value.factors().iter().enumerate() {
        for (word, coeff) in factor.terms() {
            let key = (f, word.clone());
            let col = *index.get(&key).ok_or_else(|| {
                Error::InvalidArgument("value outside the top graded piece".into())
            })?;
            coords[col] = coeff.clone();
        }
    }
    Ok(coords)
}

/// Compute the common kernel of all deletion maps on the top graded
/// piece by exact row reduction, and certify that it coincides with the
/// span of the `(n-2)!` iterated brackets (whose independence follows
/// independently from the tensor-expansion determinant).
pub fn btf_kernel_rank(n: usize) -> Result<BtfKernel> {
    if n < 3 {
        return Err(Error::InvalidArgument(
            "kernel computation needs at least 3 points".into(),
        ));
    }
    let basis = top_degree_basis(n);
    let index: BTreeMap<(usize, LyndonWord), usize> = basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(col, key)| (key, col))
        .collect();
    let ncols = basis.len();

    // Stack the deletion maps: one block of rows per configuration
    // point, rows indexed by target basis elements.
    let mut buckets: BTreeMap<(usize, usize, LyndonWord), Vec<(usize, BigRational)>> =
        BTreeMap::new();
    for r in 1..=n {
        for (col, (f, word)) in basis.iter().enumerate() {
            let source = DkElt::from_factor(n, *f, LieElt::basis_element(word.clone(), f + 1)?)?;
            let image = psi_delete_elt(&source, r)?;
            for (tf, factor) in image.factors().iter().enumerate() {
                for (tword, coeff) in factor.terms() {
                    buckets
                        .entry((r, tf, tword.clone()))
                        .or_default()
                        .push((col, coeff.clone()));
                }
            }
        }
    }
    let rows: Vec<Vec<(usize, BigRational)>> = buckets.into_values().collect();
    let rank = sparse_rank(rows, ncols);
    let kernel_rank = ncols - rank;

    // The claimed spanning set: check membership and its own rank.
    let expected = multilinear_lyndon_words(n).len();
    let labeled = btf_basis_labeled(n)?;
    let top_support: Vec<u32> = (1..=n as u32 - 1).collect();
    let mut basis_in_kernel = true;
    let mut span_rows = Vec::with_capacity(labeled.len());
    for (_, t) in &labeled {
        for r in 1..=n {
            if !psi_delete(t, r)?.is_zero() {
                basis_in_kernel = false;
            }
        }
        let value = t
            .value_at(&top_support)
            .ok_or_else(|| Error::InvalidArgument("bracket lost its top support".into()))?;
        span_rows.push(coords_in_top_basis(value, &index, ncols)?);
    }
    let span_rank = row_reduce(&mut span_rows);
    let pbw_det_is_one = pbw_delta_det(n)?.is_one();

    Ok(BtfKernel {
        kernel_rank,
        expected,
        span_rank,
        basis_in_kernel,
        pbw_det_is_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_canonicalization() {
        let b = DkElt::generator(4, 2, 1).unwrap();
        assert!(!b.is_zero());
        let anti = DkElt::generator(4, 1, 2).unwrap();
        assert!(b.add(&anti).unwrap().is_zero());
        assert!(DkElt::generator(4, 3, 3).is_err());
        assert!(DkGen::new(3, 3).is_err());
    }

    #[test]
    fn label_rendering() {
        assert_eq!(DkGen::new(3, 1).unwrap().to_string(), "B3,1");
        let b = dk_bracket(
            &DkElt::generator(3, 3, 1).unwrap(),
            &DkElt::generator(3, 3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(b.to_string(), "[B3,1,B3,2]");
        assert_eq!(DkElt::generator(3, 1, 2).unwrap().to_string(), "-B2,1");
        assert_eq!(DkElt::zero(3).to_string(), "0");

        let t = torus_generator(4, 4, 2, 3).unwrap();
        assert_eq!(t.to_string(), "t4,2(3)");
        let pair = fox_bracket(
            &torus_generator(3, 3, 1, 1).unwrap(),
            &torus_generator(3, 3, 2, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(pair.to_string(), "(1,2): [B3,1,B3,2]");
    }

    #[test]
    fn disjoint_pairs_commute() {
        let x = DkElt::generator(4, 2, 1).unwrap();
        let y = DkElt::generator(4, 4, 3).unwrap();
        assert!(dk_bracket(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn triple_relation_holds() {
        let x = DkElt::generator(3, 2, 1).unwrap();
        let y = DkElt::generator(3, 3, 1)
            .unwrap()
            .add(&DkElt::generator(3, 3, 2).unwrap())
            .unwrap();
        assert!(dk_bracket(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn same_factor_bracket_is_free() {
        let n = 4;
        let x = DkElt::generator(n, 4, 1).unwrap();
        let y = DkElt::generator(n, 4, 2).unwrap();
        let b = dk_bracket(&x, &y).unwrap();
        let expected = lie_bracket(
            &LieElt::generator(1, 3).unwrap(),
            &LieElt::generator(2, 3).unwrap(),
        )
        .unwrap();
        assert_eq!(b.factor(2), &expected);
        assert!(b.factor(0).is_zero() && b.factor(1).is_zero());
    }

    #[test]
    fn cross_factor_action_value() {
        // [B_{2,1}, B_{3,1}] = [B_{3,1}, B_{3,2}] inside factor 2.
        let x = DkElt::generator(3, 2, 1).unwrap();
        let y = DkElt::generator(3, 3, 1).unwrap();
        let b = dk_bracket(&x, &y).unwrap();
        let expected = lie_bracket(
            &LieElt::generator(1, 2).unwrap(),
            &LieElt::generator(2, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(b.factor(1), &expected);
    }

    #[test]
    fn relations_verified_and_corruptible() {
        assert!(check_4t(3).unwrap());
        assert!(check_4t(4).unwrap());
        assert!(!check_4t_with(4, DkAction::CorruptSign).unwrap());
        assert!(check_4t(2).is_err());
    }

    #[test]
    fn jacobi_across_factors() {
        // Random-ish mixed elements; the semidirect evaluation must
        // satisfy the Jacobi identity exactly.
        let n = 4;
        let x = DkElt::generator(n, 2, 1).unwrap();
        let y = DkElt::generator(n, 3, 1)
            .unwrap()
            .add(&DkElt::generator(n, 4, 2).unwrap())
            .unwrap();
        let z = DkElt::generator(n, 4, 3)
            .unwrap()
            .add(&DkElt::generator(n, 3, 2).unwrap())
            .unwrap();
        let j = dk_bracket(&dk_bracket(&x, &y).unwrap(), &z)
            .unwrap()
            .add(&dk_bracket(&dk_bracket(&y, &z).unwrap(), &x).unwrap())
            .unwrap()
            .add(&dk_bracket(&dk_bracket(&z, &x).unwrap(), &y).unwrap())
            .unwrap();
        assert!(j.is_zero());
    }

    #[test]
    fn fox_bracket_signs_and_overlap() {
        let n = 3;
        let a = torus_generator(n, 3, 1, 1).unwrap();
        let b = torus_generator(n, 3, 2, 2).unwrap();
        // Same support: zero.
        let same = fox_bracket(&a, &torus_generator(n, 3, 2, 1).unwrap()).unwrap();
        assert!(same.is_zero());
        // Disjoint, ordered: w = 0, positive sign.
        let ab = fox_bracket(&a, &b).unwrap();
        let value = ab.value_at(&[1, 2]).unwrap();
        let expected = dk_bracket(
            &DkElt::generator(n, 3, 1).unwrap(),
            &DkElt::generator(n, 3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(value, &expected);
        // Swapped supports: w = 1, sign flips relative to the bracket.
        let ba = fox_bracket(&b, &a).unwrap();
        let value_ba = ba.value_at(&[1, 2]).unwrap();
        let expected_ba = dk_bracket(
            &DkElt::generator(n, 3, 2).unwrap(),
            &DkElt::generator(n, 3, 1).unwrap(),
        )
        .unwrap()
        .neg();
        assert_eq!(value_ba, &expected_ba);
    }

    #[test]
    fn deletion_on_generators() {
        let n = 3;
        let t = torus_generator(n, 3, 1, 1).unwrap();
        assert!(psi_delete(&t, 3).unwrap().is_zero());
        assert!(psi_delete(&t, 1).unwrap().is_zero());
        let kept = psi_delete(&t, 2).unwrap();
        assert_eq!(kept.conf_points(), 2);
        let v = kept.value_at(&[1]).unwrap();
        assert_eq!(v, &DkElt::generator(2, 2, 1).unwrap());
    }

    #[test]
    fn brunnian_basis_killed_by_deletions() {
        let n = 4;
        for t in btf_basis(n).unwrap() {
            assert_eq!(t.graded().count(), 1);
            assert!(t.value_at(&[1, 2, 3]).is_some());
            for r in 1..=n {
                assert!(psi_delete(&t, r).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kernel_rank_small() {
        let k = btf_kernel_rank(3).unwrap();
        assert_eq!(k.kernel_rank, 1);
        assert!(k.verified());
        let k = btf_kernel_rank(4).unwrap();
        assert_eq!(k.kernel_rank, 2);
        assert!(k.verified());
    }

    #[test]
    fn realized_signs_are_plus_minus_one() {
        for n in 3..=5 {
            let signs = btf_realized_signs(n).unwrap();
            assert_eq!(
                signs.len(),
                crate::combinat::factorial(n as u64 - 2) as usize
            );
            for (sigma, sign) in &signs {
                assert!(*sign == 1 || *sign == -1, "n={n}, sigma={sigma:?}");
            }
        }
        // n = 3: t(3, id) = [t_{3,1}(1), t_{3,2}(2)] has no interleaving
        // inversions, so the sign is +1.
        assert_eq!(btf_realized_signs(3).unwrap()[0].1, 1);
    }
}
