use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left * m * right = diag(d_1, ..., d_k, 0, ...)`.
///
/// `diag` has `min(rows, cols)` entries, non-negative, each dividing the
/// next, with zeros only at the tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix with the shape of the original input.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.cols());
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form with unimodular transforms, pivoting on the
/// smallest nonzero entry in absolute value.
pub fn smith(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&a, t) else {
                break;
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(&p);
                a.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(&p);
                a.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }

            // pivot row and column are clear; enforce divisibility
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let diag = (0..rows.min(cols)).map(|i| a.get(i, i).clone()).collect();
    SmithForm { diag, left, right }
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    smith(m).rank()
}

/// A Z-basis (as columns) of the integer kernel `{x : m x = 0}`.
pub fn kernel(m: &IntMatrix) -> IntMatrix {
    let s = smith(m);
    let r = s.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    s.right.select_columns(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) {
        let s = smith(m);
        let prod = s.left.mul(m).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal_matrix(), "reconstruction failed for {m}");
        for w in s.diag.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(!w[0].is_zero(), "zero before nonzero in {:?}", s.diag);
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(s.left.is_unimodular());
        assert!(s.right.is_unimodular());
    }

    #[test]
    fn identity_is_fixed() {
        let s = smith(&IntMatrix::identity(2));
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(1)]);
        assert!(s.left.is_identity());
        assert!(s.right.is_identity());
    }

    #[test]
    fn inversion_minus_identity() {
        let s = smith(&IntMatrix::from_i64(&[&[-2]]));
        assert_eq!(s.diag, vec![BigInt::from(2)]);
        check(&IntMatrix::from_i64(&[&[-2]]));
    }

    #[test]
    fn divisibility_fixup_needed() {
        // diag(2, 3) has invariant factors 1, 6
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = smith(&m);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
        check(&m);
    }

    #[test]
    fn rectangular_and_zero() {
        check(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        check(&IntMatrix::from_i64(&[&[0, 0, 0], &[0, 0, 0]]));
        check(&IntMatrix::from_i64(&[&[1, 2], &[3, 4], &[5, 6]]));
        check(&IntMatrix::zeros(0, 3));
        assert_eq!(rank(&IntMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&IntMatrix::identity(4)), 4);
    }

    #[test]
    fn kernel_basis() {
        let m = IntMatrix::from_i64(&[&[1, 1, 0]]);
        let k = kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
    }
}
