//! Small combinatorial helpers: permutations of `{2,..,k}` in one-line
//! notation, ordered multiindices, factorials and binomials.
//!
//! Everything here enumerates in lexicographic order so that downstream
//! serializations are canonical.

use crate::error::{Error, Result};

/// A permutation of the set `{2, 3, .., k}` in one-line notation:
/// `images[j]` is the image of `2 + j`.
///
/// The empty permutation (for `k <= 1`) is allowed and represents the
/// unique permutation of the empty set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    /// Build from one-line notation; validates that `images` is a
    /// bijection of `{2, .., images.len() + 1}`.
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &v in &images {
            let ok = v >= 2 && (v as usize) <= k + 1 && !seen[v as usize - 2];
            if !ok {
                return Err(Error::MalformedPermutation {
                    perm: images.clone(),
                    domain: format!("{{2,..,{}}}", k + 1),
                });
            }
            seen[v as usize - 2] = true;
        }
        Ok(Perm { images })
    }

    /// The identity permutation of `{2, .., k}`.
    pub fn identity(k: usize) -> Self {
        Perm {
            images: (2..=k as u32).collect(),
        }
    }

    /// Image of `j` (which must lie in `{2, .., k}`).
    pub fn image(&self, j: usize) -> u32 {
        self.images[j - 2]
    }

    /// One-line notation `(sigma(2), .., sigma(k))`.
    pub fn one_line(&self) -> &[u32] {
        &self.images
    }
}

/// All permutations of `{2, .., k}` in lexicographic one-line order.
/// For `k <= 1` the single empty permutation is returned.
pub fn sigma_group(k: usize) -> Vec<Perm> {
    let items: Vec<u32> = (2..=k as u32).collect();
    permutations_lex(&items)
        .into_iter()
        .map(|images| Perm { images })
        .collect()
}

/// All permutations of `items` (assumed sorted ascending) in
/// lexicographic order.
pub fn permutations_lex(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];
    fn rec(items: &[u32], used: &mut [bool], current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == items.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                current.push(items[i]);
                rec(items, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(items, &mut used, &mut current, &mut out);
    out
}

/// Ordered multiindices `1 <= i_1 < .. < i_k <= max` in lexicographic
/// order.
pub fn ordered_multiindices(max: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(max: u32, k: usize, start: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for v in start..=max {
            if (max - v + 1) as usize >= remaining {
                current.push(v);
                rec(max, k, v + 1, current, out);
                current.pop();
            }
        }
    }
    if k <= max {
        rec(max as u32, k, 1, &mut current, &mut out);
    }
    out
}

/// All sequences of length `k` with pairwise distinct entries drawn from
/// `{1, .., max}`, in lexicographic order.
pub fn distinct_sequences(max: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(max: u32, k: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in 1..=max {
            if !current.contains(&v) {
                current.push(v);
                rec(max, k, current, out);
                current.pop();
            }
        }
    }
    if k <= max {
        rec(max as u32, k, &mut current, &mut out);
    }
    out
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_group_sizes_and_order() {
        assert_eq!(sigma_group(1), vec![Perm::identity(1)]);
        assert_eq!(sigma_group(2).len(), 1);
        assert_eq!(sigma_group(4).len(), 6);
        let perms = sigma_group(3);
        assert_eq!(perms[0].one_line(), &[2, 3]);
        assert_eq!(perms[1].one_line(), &[3, 2]);
    }

    #[test]
    fn perm_validation() {
        assert!(Perm::new(vec![2, 3]).is_ok());
        assert!(Perm::new(vec![3, 3]).is_err());
        assert!(Perm::new(vec![1, 2]).is_err());
        assert!(Perm::new(vec![]).is_ok());
    }

    #[test]
    fn multiindices_lex() {
        assert_eq!(
            ordered_multiindices(3, 2),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(ordered_multiindices(2, 3), Vec::<Vec<u32>>::new());
        assert_eq!(ordered_multiindices(3, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(factorial(6), 720);
    }
}
