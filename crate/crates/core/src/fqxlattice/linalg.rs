//! Dense linear algebra over `F_q` and determinants over `F_q[x]`.

use std::collections::HashMap;

use crate::algebra::{Fe, FiniteField, Poly, PolyRing};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(f: &FiniteField, m: &mut [Vec<Fe>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = f.inv(m[row][col]);
        for v in m[row].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let c = m[r][col];
                for k in 0..ncols {
                    let t = f.mul(c, m[row][k]);
                    m[r][k] = f.sub(m[r][k], t);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(f: &FiniteField, rows: &[Vec<Fe>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m, ncols).len()
}

/// A basis of `{v : M v = 0}`.
pub fn kernel(f: &FiniteField, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; ncols];
            v[fc] = Fe::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[r][fc]);
            }
            v
        })
        .collect()
}

/// Determinant by Laplace expansion along rows, memoized on column subsets.
pub fn det(ring: &PolyRing, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(n <= 20 && m.iter().all(|r| r.len() == n), "square matrix of size ≤ 20");
    fn go(ring: &PolyRing, m: &[Vec<Poly>], cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        let n = m.len();
        let k = n - cols.count_ones() as usize;
        if cols == 0 {
            return Poly::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = Poly::zero();
        let mut sign_idx = 0;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[k][j].is_zero() {
                let minor = go(ring, m, cols & !(1 << j), memo);
                let t = ring.mul(&m[k][j], &minor);
                acc = if sign_idx % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
            }
            sign_idx += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    go(ring, m, (1u32 << n) - 1, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    #[test]
    fn kernel_is_annihilated() {
        let f = make_field(5, 1).unwrap();
        let rows = vec![
            vec![Fe(1), Fe(2), Fe(3), Fe(4)],
            vec![Fe(2), Fe(4), Fe(1), Fe(3)],
        ];
        let ker = kernel(&f, &rows, 4);
        assert_eq!(ker.len(), 4 - rank(&f, &rows, 4));
        for v in ker {
            for r in &rows {
                let s = r.iter().zip(&v).fold(Fe::ZERO, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn det_small() {
        let r = PolyRing::new(make_field(3, 1).unwrap());
        let m = vec![
            vec![Poly::one(), r.from_ints(&[1, 1])],
            vec![Poly::zero(), r.from_ints(&[0, 0, 1])],
        ];
        assert_eq!(det(&r, &m), r.from_ints(&[0, 0, 1]));
        let m = vec![
            vec![Poly::zero(), Poly::one()],
            vec![Poly::one(), Poly::zero()],
        ];
        assert_eq!(det(&r, &m), r.from_ints(&[-1]));
    }
}
