//! Binomial coefficients and lexicographic enumeration of index tuples.

/// `C(n, k)` with overflow detection; `0` when `k > n`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    u64::try_from(acc).ok()
}

/// Signed variant used by formulas such as `C(k - 1, j)` that may see
/// negative upper arguments; returns `0` outside `0 <= k <= n`.
pub fn binomial_signed(n: i64, k: i64) -> Option<u64> {
    if n < 0 || k < 0 || k > n {
        return Some(0);
    }
    binomial(n as u64, k as u64)
}

/// Pascal table `table[n][k] = C(n, k)` for `n <= max_n`, saturating.
pub fn binomial_table(max_n: usize) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; max_n + 1]; max_n + 1];
    for n in 0..=max_n {
        table[n][0] = 1;
        for k in 1..=n {
            table[n][k] = table[n - 1][k - 1].saturating_add(table[n - 1][k]);
        }
    }
    table
}

/// All strictly increasing `k`-tuples drawn from `0..n`, in lexicographic order.
pub fn lex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // rightmost position that can still advance
        match (0..k).rev().find(|&i| current[i] < n - k + i) {
            None => return out,
            Some(i) => {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
            }
        }
    }
}

/// Position of a strictly increasing tuple in the order produced by
/// [`lex_subsets`]`(n, tuple.len())`.
pub fn lex_rank(n: usize, tuple: &[usize], table: &[Vec<u64>]) -> usize {
    let k = tuple.len();
    let mut rank = 0u64;
    let mut start = 0usize;
    for (pos, &value) in tuple.iter().enumerate() {
        let remaining = k - pos - 1;
        for skipped in start..value {
            rank += table[n - skipped - 1][remaining];
        }
        start = value + 1;
    }
    rank as usize
}

/// Exponent vectors of all monomials of total degree `degree` in `vars`
/// variables, ordered lexicographically with `x_0^degree` first.
pub fn monomials(vars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; vars];
    fill_monomials(&mut current, 0, degree, &mut out);
    out
}

fn fill_monomials(current: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == current.len() {
        current[pos] = left;
        out.push(current.clone());
        return;
    }
    for e in (0..=left).rev() {
        current[pos] = e;
        fill_monomials(current, pos + 1, left - e, out);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(4, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(60, 30), Some(118264581564861424));
        assert_eq!(binomial(200, 100), None);
        assert_eq!(binomial_signed(-1, 0), Some(0));
    }

    #[test]
    fn table_matches_closed_form() {
        let t = binomial_table(20);
        for n in 0..=20u64 {
            for k in 0..=n {
                assert_eq!(t[n as usize][k as usize], binomial(n, k).unwrap());
            }
        }
    }

    #[test]
    fn subsets_are_lex_and_ranked() {
        let t = binomial_table(10);
        for n in 0..=7 {
            for k in 0..=n {
                let subs = lex_subsets(n, k);
                assert_eq!(subs.len() as u64, binomial(n as u64, k as u64).unwrap());
                for (i, s) in subs.iter().enumerate() {
                    assert_eq!(lex_rank(n, s, &t), i);
                }
                assert!(subs.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert!(lex_subsets(2, 3).is_empty());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 2).len(), 3);
        assert_eq!(monomials(3, 3).len(), 10);
        assert_eq!(monomials(4, 4).len(), 35);
        assert_eq!(monomials(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }
}
