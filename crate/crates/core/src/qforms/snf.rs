//! Smith normal form over the integers, used to read invariant factors off a
//! relation matrix.

/// Invariant factors `d_1 | d_2 | ... | d_k` (all `> 1`) of the abelian group
/// presented by the rows of `relations` as relations on `n` generators.
///
/// Every row must have the same length. An empty matrix presents the trivial group
/// only when it has no columns.
#[allow(clippy::needless_range_loop)]
pub fn invariant_factors(relations: &[Vec<i64>]) -> Vec<u64> {
    let rows = relations.len();
    let cols = relations.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = relations
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged relation matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();

    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest non-zero entry of the trailing block becomes the pivot
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }

            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for i in t..rows {
                        m[i][j] -= q * m[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].unsigned_abs() as u64);
    }
    // columns without a pivot would be free generators
    let zero_columns = cols - diag.iter().filter(|&&d| d != 0).count();
    assert_eq!(zero_columns, 0, "relation matrix does not present a finite group");

    let mut out: Vec<u64> = diag.into_iter().filter(|&d| d > 1).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]]), vec![6]);
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 4]]), vec![2, 4]);
        assert_eq!(invariant_factors(&[vec![1]]), Vec::<u64>::new());
        assert_eq!(invariant_factors(&[]), Vec::<u64>::new());
    }

    #[test]
    fn mixed_relations() {
        // <x, y | 4x = 0, 2y = 2x>: y - x has order 2, x has order 4 -> Z/2 x Z/4
        assert_eq!(invariant_factors(&[vec![4, 0], vec![-2, 2]]), vec![2, 4]);
        // <x, y | 4x = 0, 2y = x>: y generates, order 8
        assert_eq!(invariant_factors(&[vec![4, 0], vec![-1, 2]]), vec![8]);
        // Z/6 x Z/10 = Z/2 x Z/30
        assert_eq!(invariant_factors(&[vec![6, 0], vec![0, 10]]), vec![2, 30]);
    }

    #[test]
    fn chain_divides() {
        let f = invariant_factors(&[vec![12, 0, 0], vec![0, 18, 0], vec![0, 0, 8]]);
        assert_eq!(f.iter().product::<u64>(), 12 * 18 * 8);
        assert!(f.windows(2).all(|w| w[1] % w[0] == 0), "{f:?}");
        assert_eq!(f, vec![2, 12, 72]);
    }
}
