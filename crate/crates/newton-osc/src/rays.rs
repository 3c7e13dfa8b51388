//! Extreme rays of a pointed polyhedral cone given by inequalities.

use num_rational::BigRational;

use crate::linalg::{dot_i64, nullspace, rational_to_primitive, to_rational_vec};

/// Extreme rays of `{x : <row, x> >= 0 for all rows}`, assumed pointed.
///
/// Every extreme ray is tight on `dim - 1` linearly independent rows, so
/// enumerating row subsets of that size and taking one-dimensional null
/// spaces finds them all. Exact rational arithmetic throughout; rays come
/// back as primitive integer vectors, deduplicated and sorted.
pub fn extreme_rays(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut found: Vec<Vec<i64>> = Vec::new();
    let k = dim.saturating_sub(1);
    let idx: Vec<usize> = (0..rows.len()).collect();
    for subset in combinations(&idx, k) {
        let sub: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&i| to_rational_vec(&rows[i]))
            .collect();
        let ns = nullspace(&sub, dim);
        if ns.len() != 1 {
            continue;
        }
        let Some(candidate) = rational_to_primitive(&ns[0]) else {
            continue;
        };
        for v in [candidate.clone(), candidate.iter().map(|x| -x).collect()] {
            if rows.iter().all(|row| dot_i64(row, &v) >= 0) {
                if !found.contains(&v) {
                    found.push(v);
                }
                break;
            }
        }
    }
    found.sort();
    found
}

/// All k-element subsets of `items`, in lexicographic index order.
pub fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut stack: Vec<(usize, Vec<T>)> = vec![(0, Vec::new())];
    while let Some((start, current)) = stack.pop() {
        if current.len() == k {
            out.push(current);
            continue;
        }
        let needed = k - current.len();
        // Push in reverse so the traversal emits lexicographic order.
        let upper = items.len() - needed;
        for i in (start..=upper).rev() {
            let mut next = current.clone();
            next.push(items[i].clone());
            stack.push((i + 1, next));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant_rays() {
        // {x >= 0, y >= 0} has extreme rays e1, e2.
        let rows = vec![vec![1, 0], vec![0, 1]];
        let rays = extreme_rays(&rows, 2);
        assert_eq!(rays, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn halfplane_cone_rays() {
        // {x >= 0, x + y >= 0} in 2d: rays (0,1)... no: cone spanned by
        // (0,1) and (1,-1).
        let rows = vec![vec![1, 0], vec![1, 1]];
        let rays = extreme_rays(&rows, 2);
        assert_eq!(rays, vec![vec![0, 1], vec![1, -1]]);
    }

    #[test]
    fn combination_count() {
        let c = combinations(&[0, 1, 2, 3], 2);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![0, 1]);
        assert_eq!(c[5], vec![2, 3]);
    }
}
