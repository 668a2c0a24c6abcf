//! Exact linear algebra over `Q(i, sqrt d)`.

use super::field::KElement;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<KElement>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{ v : M v = 0 }` for an `rows x ncols` matrix.
pub fn kernel(rows: &[Vec<KElement>], ncols: usize) -> Vec<Vec<KElement>> {
    let mut m: Vec<Vec<KElement>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![KElement::zero(); ncols];
            v[f] = KElement::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

/// Some solution of `M v = b` (free variables set to zero), if consistent.
pub fn solve(rows: &[Vec<KElement>], rhs: &[KElement], ncols: usize) -> Option<Vec<KElement>> {
    let mut m: Vec<Vec<KElement>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols);
    for r in m.iter().skip(pivots.len()) {
        if !r[ncols].is_zero() {
            return None;
        }
    }
    let mut v = vec![KElement::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = m[r][ncols].clone();
    }
    Some(v)
}

/// Determinant by elimination.
pub fn determinant(m: &[Vec<KElement>]) -> KElement {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = KElement::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return KElement::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det = &det * &a[col][col];
        let inv = a[col][col].inv();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: i64) -> KElement {
        KElement::from_int(n)
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = vec![vec![k(1), k(2), k(3)], vec![k(2), k(4), k(6)]];
        let ker = kernel(&m, 3);
        assert_eq!(ker.len(), 2);
        for v in ker {
            let s = &(&v[0] + &(k(2) * &v[1])) + &(k(3) * &v[2]);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = vec![vec![k(1), k(1)], vec![k(1), k(-1)]];
        assert_eq!(solve(&m, &[k(3), k(1)], 2), Some(vec![k(2), k(1)]));
        let m2 = vec![vec![k(1), k(1)], vec![k(2), k(2)]];
        assert_eq!(solve(&m2, &[k(1), k(3)], 2), None);
    }

    #[test]
    fn det_3x3() {
        let m = vec![
            vec![k(-3), k(1), k(0)],
            vec![k(1), k(-2), k(1)],
            vec![k(0), k(1), k(-1)],
        ];
        assert_eq!(determinant(&m), k(-2));
    }
}
