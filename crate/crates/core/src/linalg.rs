//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free (Bareiss) on big integers; only the final
//! back-substitution divides, producing exact rational kernel vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer row-echelon form produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    ncols: usize,
}

fn echelon(matrix: &[Vec<BigInt>], ncols: usize) -> Echelon {
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col..ncols {
                // Bareiss step: the division by the previous pivot is exact.
                let v = (&pivot * &row[j] - &factor * &pivot_row[j]) / &prev;
                row[j] = v;
            }
        }
        prev = pivot;
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    for row in rows.iter_mut() {
        let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in row.iter_mut() {
                *x = &*x / &g;
            }
        }
    }
    Echelon {
        rows,
        pivots,
        ncols,
    }
}

/// Rank over the rationals.
pub fn rank(matrix: &[Vec<BigInt>], ncols: usize) -> usize {
    echelon(matrix, ncols).pivots.len()
}

/// A basis of the right kernel `{x : A x = 0}`.
///
/// One vector per free column `f`, with `x_f = 1` and every other free
/// coordinate zero; this is the basis read off the reduced echelon form and
/// depends only on the matrix.
pub fn kernel_basis(matrix: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigRational>> {
    let ech = echelon(matrix, ncols);
    let mut is_pivot = vec![false; ech.ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ech.ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![BigRational::zero(); ech.ncols];
        x[free] = BigRational::one();
        for (i, &p) in ech.pivots.iter().enumerate().rev() {
            let row = &ech.rows[i];
            let mut acc = BigRational::zero();
            for j in (p + 1)..ech.ncols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += BigRational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = -acc / BigRational::from_integer(row[p].clone());
        }
        basis.push(x);
    }
    basis
}

/// Scales a nonzero rational vector to a primitive integer vector whose first
/// nonzero entry is positive. The zero vector is returned unchanged.
pub fn primitive(v: &[BigRational]) -> Vec<BigRational> {
    let Some(first) = v.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let denom_lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if first.is_negative() {
        g = -g;
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

/// Rank of a list of rational vectors of equal length.
pub fn rational_rank(vectors: &[Vec<BigRational>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let ncols = first.len();
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| {
            let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    rank(&rows, ncols)
}

/// Reduced echelon basis that grows one vector at a time and remembers how
/// each stored vector is written in terms of the inserted originals. Used to
/// read off fundamental circuits while growing column sets.
#[derive(Clone, Default)]
pub struct GrowingBasis {
    /// `(pivot position, reduced vector, combination over insertion slots)`.
    rows: Vec<(usize, Vec<BigRational>, Vec<BigRational>)>,
    inserted: usize,
}

pub enum Insert {
    /// The vector was independent and now occupies the next slot.
    Independent(GrowingBasis),
    /// The vector equals this combination of the earlier slots.
    Dependent(Vec<BigRational>),
}

impl GrowingBasis {
    pub fn new() -> Self {
        GrowingBasis::default()
    }

    pub fn len(&self) -> usize {
        self.inserted
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    /// Tries to add `v`; on success returns the enlarged basis and leaves
    /// `self` untouched so callers can backtrack by dropping the result.
    pub fn insert(&self, v: &[BigRational]) -> Insert {
        let slots = self.inserted + 1;
        let mut residual = v.to_vec();
        // residual = v - Σ c_k row_k, tracked as a combination over slots
        let mut combo = vec![BigRational::zero(); slots];
        combo[self.inserted] = BigRational::one();
        for (pivot, row, row_combo) in &self.rows {
            let c = residual[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= &c * x;
                }
            }
            for (k, x) in row_combo.iter().enumerate() {
                if !x.is_zero() {
                    combo[k] -= &c * x;
                }
            }
        }
        match residual.iter().position(|x| !x.is_zero()) {
            None => {
                // 0 = v - Σ ..., so v = -(combo without the last slot)
                combo.pop();
                Insert::Dependent(combo.into_iter().map(|x| -x).collect())
            }
            Some(p) => {
                let lead = residual[p].clone();
                for x in residual.iter_mut() {
                    *x /= &lead;
                }
                for x in combo.iter_mut() {
                    *x /= &lead;
                }
                let mut rows = Vec::with_capacity(self.rows.len() + 1);
                for (pivot, row, row_combo) in &self.rows {
                    let c = row[p].clone();
                    let mut row = row.clone();
                    let mut row_combo = row_combo.clone();
                    row_combo.push(BigRational::zero());
                    if !c.is_zero() {
                        for (r, x) in row.iter_mut().zip(&residual) {
                            if !x.is_zero() {
                                *r -= &c * x;
                            }
                        }
                        for (r, x) in row_combo.iter_mut().zip(&combo) {
                            if !x.is_zero() {
                                *r -= &c * x;
                            }
                        }
                    }
                    rows.push((*pivot, row, row_combo));
                }
                rows.push((p, residual, combo));
                Insert::Independent(GrowingBasis {
                    rows,
                    inserted: slots,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn apply(m: &[Vec<BigInt>], x: &[BigRational]) -> Vec<BigRational> {
        m.iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn kernel_of_two_by_three() {
        let m = int_matrix(&[&[2, 1, 0], &[0, 1, 2]]);
        assert_eq!(kernel_basis(&m, 3), vec![vec![q(1), q(-2), q(1)]]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let id = int_matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(kernel_basis(&id, 3).is_empty());
        let zero = int_matrix(&[&[0, 0, 0]]);
        let k = kernel_basis(&zero, 3);
        assert_eq!(
            k,
            vec![
                vec![q(1), q(0), q(0)],
                vec![q(0), q(1), q(0)],
                vec![q(0), q(0), q(1)]
            ]
        );
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = int_matrix(&[&[3, 6, -1, 4, 0], &[1, 2, 5, 0, 7], &[4, 8, 4, 4, 7]]);
        let k = kernel_basis(&m, 5);
        assert_eq!(k.len(), 5 - rank(&m, 5));
        assert_eq!(rank(&m, 5), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![BigRational::new((-1).into(), 2.into()), q(0), BigRational::new(3.into(), 4.into())];
        assert_eq!(primitive(&v), vec![q(2), q(0), q(-3)]);
    }

    #[test]
    fn growing_basis_reports_combinations() {
        let cols = [vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)], vec![q(2), q(-3), q(-1)]];
        let b0 = GrowingBasis::new();
        let Insert::Independent(b1) = b0.insert(&cols[0]) else { panic!() };
        let Insert::Independent(b2) = b1.insert(&cols[1]) else { panic!() };
        match b2.insert(&cols[2]) {
            Insert::Dependent(c) => assert_eq!(c, vec![q(2), q(-3)]),
            Insert::Independent(_) => panic!("expected dependency"),
        }
        assert_eq!(b2.len(), 2);
    }
}
