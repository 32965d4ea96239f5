//! Column-sparse integer matrices and their ranks over `F_p` and `Q`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::inv_mod;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    /// Per column, `(row, value)` sorted by row, no explicit zeros.
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_unstable_by_key(|e| e.0);
                let mut merged: Vec<(u32, i64)> = Vec::with_capacity(c.len());
                for (r, v) in c {
                    assert!((r as usize) < rows, "row {r} out of range {rows}");
                    match merged.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => merged.push((r, v)),
                    }
                }
                merged.retain(|e| e.1 != 0);
                merged
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let columns = (0..cols)
            .map(|c| {
                (0..rows)
                    .filter(|&r| dense[r][c] != 0)
                    .map(|r| (r as u32, dense[r][c]))
                    .collect()
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c]
            .binary_search_by_key(&(r as u32), |e| e.0)
            .map_or(0, |i| self.columns[c][i].1)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut dense = vec![vec![0; self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                dense[r as usize][c] = v;
            }
        }
        dense
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let columns = rhs
            .columns
            .iter()
            .map(|rc| {
                let mut acc: Vec<(u32, i64)> = Vec::new();
                for &(k, v) in rc {
                    acc.extend(self.columns[k as usize].iter().map(|&(r, w)| (r, w * v)));
                }
                acc
            })
            .collect();
        SparseMatrix::from_columns(self.rows, columns)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Same matrix with rows relabelled by `perm[old] = new`.
    pub fn permute_rows(&self, perm: &[usize]) -> SparseMatrix {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|&(r, v)| (perm[r as usize] as u32, v)).collect())
            .collect();
        SparseMatrix::from_columns(self.rows, columns)
    }
}

/// Rank over `F_prime` by sparse column elimination.
///
/// Columns are taken in order of increasing fill; each is reduced against
/// stored pivots keyed by their leading row.
pub fn rank_fp(m: &SparseMatrix, prime: u64) -> usize {
    assert!((2..1 << 32).contains(&prime), "prime must lie in 2..2^32");
    let p = prime;
    let reduce = |v: i64| v.rem_euclid(p as i64) as u64;

    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&c| m.columns[c].len());

    let mut pivots: Vec<Option<Vec<(u32, u64)>>> = vec![None; m.rows];
    let mut acc = vec![0u64; m.rows];
    let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
    let mut rank = 0;

    for c in order {
        for &(r, v) in &m.columns[c] {
            let v = reduce(v);
            if v != 0 {
                acc[r as usize] = v;
                heap.push(Reverse(r));
            }
        }
        while let Some(Reverse(r)) = heap.pop() {
            let lead = acc[r as usize];
            if lead == 0 {
                continue;
            }
            match &pivots[r as usize] {
                Some(pivot) => {
                    // pivot is normalized with entry 1 at row r
                    let scale = p - lead;
                    for &(rr, pv) in pivot {
                        let slot = &mut acc[rr as usize];
                        let before = *slot;
                        *slot = (before + scale * pv) % p;
                        if before == 0 && *slot != 0 {
                            heap.push(Reverse(rr));
                        }
                    }
                }
                None => {
                    let inv = inv_mod(lead, p);
                    let mut column = vec![(r, 1u64)];
                    acc[r as usize] = 0;
                    while let Some(Reverse(rr)) = heap.pop() {
                        let v = acc[rr as usize];
                        if v != 0 {
                            column.push((rr, v * inv % p));
                            acc[rr as usize] = 0;
                        }
                    }
                    pivots[r as usize] = Some(column);
                    rank += 1;
                }
            }
        }
    }
    rank
}

/// Exact rank over `Q` by fraction-free (Bareiss) elimination.
///
/// Runs in `i128` and restarts in `BigInt` on overflow.
pub fn rank_exact(m: &SparseMatrix) -> usize {
    let dense = m.to_dense();
    let small: Vec<Vec<i128>> =
        dense.iter().map(|row| row.iter().map(|&v| i128::from(v)).collect()).collect();
    match bareiss_checked(small) {
        Some(rank) => rank,
        None => {
            let big = dense
                .iter()
                .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            bareiss_big(big)
        }
    }
}

#[allow(clippy::needless_range_loop)] // two rows of `a` are read per step
fn bareiss_checked(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, pr);
        let pivot = a[rank][c];
        for r in rank + 1..rows {
            let factor = a[r][c];
            for k in c + 1..cols {
                let lhs = a[r][k].checked_mul(pivot)?;
                let rhs = a[rank][k].checked_mul(factor)?;
                a[r][k] = lhs.checked_sub(rhs)? / prev;
            }
            a[r][c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

#[allow(clippy::needless_range_loop)] // two rows of `a` are read per step
fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, pr);
        let pivot = a[rank][c].clone();
        for r in rank + 1..rows {
            let factor = a[r][c].clone();
            for k in c + 1..cols {
                let value = (&a[r][k] * &pivot - &a[rank][k] * &factor) / &prev;
                a[r][k] = value;
            }
            a[r][c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    #[test]
    fn trivial_ranks() {
        let z = SparseMatrix::zeros(4, 5);
        assert_eq!(rank_fp(&z, P), 0);
        assert_eq!(rank_exact(&z), 0);
        let id: Vec<Vec<i64>> = (0..6).map(|i| (0..6).map(|j| i64::from(i == j)).collect()).collect();
        let id = SparseMatrix::from_dense(&id);
        assert_eq!(rank_fp(&id, P), 6);
        assert_eq!(rank_exact(&id), 6);
    }

    #[test]
    fn characteristic_dependence() {
        // det = 3: singular mod 3, full rank over Q
        let m = SparseMatrix::from_dense(&[vec![1, 1], vec![-1, 2]]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_fp(&m, 3), 1);
        assert_eq!(rank_fp(&m, 5), 2);
    }

    #[test]
    fn dependent_columns() {
        let m = SparseMatrix::from_dense(&[
            vec![1, 2, 3, 0],
            vec![4, 5, 9, 0],
            vec![7, 8, 15, 0],
        ]);
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(rank_fp(&m, P), 2);
    }

    #[test]
    fn big_fallback_agrees() {
        // Hilbert-like integer matrix with large entries forces the BigInt path
        let n = 14;
        let dense: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| ((i as i64 + 3) * (j as i64 + 5)).pow(5) % 1_000_003 - 500_000).collect())
            .collect();
        let m = SparseMatrix::from_dense(&dense);
        let big: Vec<Vec<BigInt>> =
            dense.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        assert_eq!(rank_exact(&m), bareiss_big(big));
        assert_eq!(rank_exact(&m), rank_fp(&m, P));
    }

    #[test]
    fn product_and_access() {
        let a = SparseMatrix::from_dense(&[vec![1, 0], vec![0, -1], vec![2, 3]]);
        let b = SparseMatrix::from_dense(&[vec![1, 1], vec![1, -1]]);
        let ab = a.mul(&b);
        assert_eq!(ab.to_dense(), vec![vec![1, 1], vec![-1, 1], vec![5, -1]]);
        assert_eq!(a.get(2, 1), 3);
        assert_eq!(a.nnz(), 4);
    }
}
