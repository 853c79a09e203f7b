//! Exact linear algebra over the rationals: row reduction, solving, and
//! nullspace dimensions for the small dense/sparse systems that arise in
//! basis rewriting and kernel computations.

use num_rational::BigRational;
use num_traits::Zero;

/// Reduce a dense matrix (rows of equal length) to row echelon form in
/// place; returns the rank. Exact arithmetic, partial "pivoting" by
/// first nonzero entry.
pub(crate) fn row_reduce(rows: &mut [Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        for entry in rows[rank].iter_mut() {
            *entry /= pivot.clone();
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (entry, pivot_entry) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *entry -= factor.clone() * pivot_entry.clone();
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank of a sparse matrix given as rows of `(column, coefficient)`
/// pairs over `ncols` columns.
pub(crate) fn sparse_rank(rows: Vec<Vec<(usize, BigRational)>>, ncols: usize) -> usize {
    // Echelon by pivot column; rows here are tiny, so a map of pivots
    // with on-demand elimination is enough.
    let mut pivots: Vec<Option<Vec<(usize, BigRational)>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut row = normalize(row);
        while let Some(&(lead, _)) = row.first() {
            match &pivots[lead] {
                None => {
                    let lead_coeff = row[0].1.clone();
                    for (_, c) in row.iter_mut() {
                        *c /= lead_coeff.clone();
                    }
                    pivots[lead] = Some(row);
                    rank += 1;
                    break;
                }
                Some(pivot) => {
                    let factor = row[0].1.clone();
                    row = sub_scaled(&row, pivot, &factor);
                }
            }
        }
    }
    rank
}

fn normalize(mut row: Vec<(usize, BigRational)>) -> Vec<(usize, BigRational)> {
    row.sort_by_key(|&(c, _)| c);
    row.retain(|(_, v)| !v.is_zero());
    row
}

fn sub_scaled(
    row: &[(usize, BigRational)],
    pivot: &[(usize, BigRational)],
    factor: &BigRational,
) -> Vec<(usize, BigRational)> {
    let mut out: Vec<(usize, BigRational)> = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        match (row.get(i), pivot.get(j)) {
            (Some(&(ci, ref vi)), Some(&(cj, ref vj))) if ci == cj => {
                let v = vi.clone() - factor.clone() * vj.clone();
                if !v.is_zero() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ci, ref vi)), Some(&(cj, _))) if ci < cj => {
                out.push((ci, vi.clone()));
                i += 1;
            }
            (Some(_), Some(&(cj, ref vj))) => {
                let v = -(factor.clone() * vj.clone());
                if !v.is_zero() {
                    out.push((cj, v));
                }
                j += 1;
            }
            (Some(&(ci, ref vi)), None) => {
                out.push((ci, vi.clone()));
                i += 1;
            }
            (None, Some(&(cj, ref vj))) => {
                let v = -(factor.clone() * vj.clone());
                if !v.is_zero() {
                    out.push((cj, v));
                }
                j += 1;
            }
            (None, None) => break,
        }
    }
    out
}

/// Solve the square system `m x = rhs` exactly; `None` if singular.
pub(crate) fn solve_square(
    m: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Option<Vec<BigRational>> {
    let dim = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let rank = row_reduce(&mut aug);
    if rank < dim {
        return None;
    }
    // After full reduction the leading block is the identity.
    let mut x = vec![BigRational::zero(); dim];
    for row in aug {
        let lead = row[..dim].iter().position(|v| !v.is_zero())?;
        x[lead] = row[dim].clone();
    }
    Some(x)
}

/// Determinant of a square matrix, exact.
pub(crate) fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let dim = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..dim {
        let Some(pivot_row) = (col..dim).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot_row != col {
            a.swap(col, pivot_row);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= pivot.clone();
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if !row[col].is_zero() {
                let factor = row[col].clone() / pivot.clone();
                for (entry, pivot_entry) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *entry -= factor.clone() * pivot_entry.clone();
                }
            }
        }
    }
    det
}
