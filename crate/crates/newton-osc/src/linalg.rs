//! Exact rational and integer linear algebra for small dense systems.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Rational row-reduction returning the rank. Consumes the rows.
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&i| !rows[i][col].is_zero());
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = &rows[i][col] * &inv;
                for j in col..ncols {
                    let delta = &rows[rank][j] * &factor;
                    rows[i][j] -= delta;
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

pub fn rank_int(rows: &[Vec<i64>]) -> usize {
    rank(rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect())
}

/// Basis of the null space of the row set (vectors x with rows * x = 0).
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_col_of_row = vec![usize::MAX; nrows];
    let mut r = 0;
    for col in 0..ncols {
        let pivot = (r..nrows).find(|&i| !m[i][col].is_zero());
        let Some(pivot) = pivot else { continue };
        m.swap(r, pivot);
        let inv = m[r][col].recip();
        for j in col..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..ncols {
                    let delta = &m[r][j] * &factor;
                    m[i][j] -= delta;
                }
            }
        }
        pivot_col_of_row[r] = col;
        r += 1;
        if r == nrows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row[..r].to_vec();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::from_integer(1.into());
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve the square rational system `A x = b`; `None` if singular.
pub fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in col..=n {
                    let delta = &m[col][j] * &factor;
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant of a small integer matrix, exact in `i128`.
pub fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0] as i128,
        2 => m[0][0] as i128 * m[1][1] as i128 - m[0][1] as i128 * m[1][0] as i128,
        _ => {
            let mut det = 0i128;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                det += sign * m[0][j] as i128 * det_i128(&minor);
            }
            det
        }
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive_i64(v: &[i64]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |acc, &x| gcd_i64(acc, x));
    if g == 0 {
        return None;
    }
    Some(v.iter().map(|&x| x / g).collect())
}

/// Scale a rational direction vector to a primitive integer vector,
/// preserving orientation.
pub fn rational_to_primitive(v: &[BigRational]) -> Option<Vec<i64>> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut lcm = BigInt::from(1);
    for x in v {
        let d = x.denom();
        let g = num_integer::Integer::gcd(&lcm, d);
        lcm = &lcm / g * d;
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num_integer::Integer::gcd(&g, x);
    }
    let out: Vec<i64> = ints
        .iter()
        .map(|x| {
            let reduced = x / &g;
            i64::try_from(&reduced).ok()
        })
        .collect::<Option<Vec<i64>>>()?;
    Some(out)
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn to_rational_vec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank(rows.clone()), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for row in &rows {
            let dot: BigRational = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_2x2() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let b = vec![rat(5), rat(10)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
    }

    #[test]
    fn determinant_small() {
        assert_eq!(det_i128(&[vec![1, 0], vec![2, 3]]), 3);
        assert_eq!(det_i128(&[vec![2, 3], vec![0, 1]]), 2);
        assert_eq!(
            det_i128(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            1
        );
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive_i64(&[2, 4]).unwrap(), vec![1, 2]);
        assert_eq!(primitive_i64(&[0, 3]).unwrap(), vec![0, 1]);
        assert_eq!(primitive_i64(&[2, 3]).unwrap(), vec![2, 3]);
        assert!(primitive_i64(&[0, 0]).is_none());
        let v = vec![BigRational::new(1.into(), 2.into()), rat(3)];
        assert_eq!(rational_to_primitive(&v).unwrap(), vec![1, 6]);
    }
}
