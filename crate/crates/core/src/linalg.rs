//! Exact nullspaces by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::field::{FieldSpec, Scalar};

/// Row echelon form of a matrix produced by Bareiss elimination.
pub struct Echelon {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.pivots.len()
    }

    /// A basis of the nullspace, one vector per free column in increasing
    /// column order, with the free coordinate set to 1.
    pub fn nullspace(&self, field: &FieldSpec) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (r, &pc) in self.pivots.iter().enumerate().rev() {
                let row = &self.rows[r];
                let mut acc = field.zero();
                for c in pc + 1..self.cols {
                    if !row[c].is_zero() && !v[c].is_zero() {
                        acc = &acc + &(&row[c] * &v[c]);
                    }
                }
                v[pc] = (-acc).checked_div(&row[pc]).expect("pivot is nonzero");
            }
            basis.push(v);
        }
        basis
    }
}

/// Multiplies a row by the lcm of its denominators so that entries become
/// integral (in `Z` or `Z[sqrt d]`).
fn clear_denominators(row: &mut [Scalar]) {
    let lcm = row
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
    if lcm.is_one() {
        return;
    }
    let factor = BigRational::from_integer(lcm);
    for c in row.iter_mut() {
        if !c.is_zero() {
            *c = match &*c {
                Scalar::Rational(q) => Scalar::Rational(q * &factor),
                Scalar::Quadratic(x) => {
                    let mut y = x.clone();
                    y.a = &y.a * &factor;
                    y.b = &y.b * &factor;
                    Scalar::Quadratic(y)
                }
                Scalar::Prime(_) => c.clone(),
            };
        }
    }
}

/// Bareiss elimination. Every update `(p a_ij - a_ik a_rj) / prev` divides
/// exactly, so integral inputs stay integral throughout.
pub fn echelon(mut rows: Vec<Vec<Scalar>>, cols: usize, field: &FieldSpec) -> Echelon {
    for row in rows.iter_mut() {
        debug_assert_eq!(row.len(), cols);
        clear_denominators(row);
    }
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    let mut pivots = Vec::new();
    let mut prev = field.one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let p = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let scaled = p * &row[j];
                let updated = if factor.is_zero() || pivot_row[j].is_zero() {
                    scaled
                } else {
                    &scaled - &(&factor * &pivot_row[j])
                };
                row[j] = if prev.is_one() {
                    updated
                } else {
                    updated.checked_div(&prev).expect("previous pivot is nonzero")
                };
            }
            row[c] = field.zero();
        }
        prev = p.clone();
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, cols }
}

pub fn nullspace(rows: Vec<Vec<Scalar>>, cols: usize, field: &FieldSpec) -> Vec<Vec<Scalar>> {
    echelon(rows, cols, field).nullspace(field)
}

pub fn nullity(rows: Vec<Vec<Scalar>>, cols: usize, field: &FieldSpec) -> usize {
    echelon(rows, cols, field).nullity()
}

/// Nullity over `F_p` by plain Gaussian elimination. Entries must be reduced.
pub fn nullity_mod(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    use crate::field::{mul_mod, pow_mod};
    let mut r = 0;
    for c in 0..cols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = pow_mod(rows[r][c], p - 2, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..cols {
                row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    cols - r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn apply(rows: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
        rows.iter()
            .map(|r| r.iter().zip(v).fold(Scalar::int(0), |acc, (a, b)| acc + a * b))
            .collect()
    }

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let m = vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[1, 0, 1])];
        let ns = nullspace(m.clone(), 3, &FieldSpec::Rational);
        assert_eq!(ns.len(), 1);
        assert!(apply(&m, &ns[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn fractional_entries() {
        let half = Scalar::ratio(1, 2).unwrap();
        let m = vec![vec![half.clone(), Scalar::int(1), Scalar::int(0)], vec![Scalar::int(0), half, Scalar::int(3)]];
        let ns = nullspace(m.clone(), 3, &FieldSpec::Rational);
        assert_eq!(ns.len(), 1);
        assert!(apply(&m, &ns[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn empty_and_full_rank() {
        assert_eq!(nullity(vec![], 4, &FieldSpec::Rational), 4);
        let id = vec![row(&[1, 0]), row(&[0, 1])];
        assert_eq!(nullity(id, 2, &FieldSpec::Rational), 0);
    }

    #[test]
    fn skipped_columns_keep_elimination_exact() {
        let m = vec![row(&[0, 2, 1, 4]), row(&[0, 4, 2, 1]), row(&[0, 6, 3, 5]), row(&[3, 1, 1, 1])];
        let e = echelon(m.clone(), 4, &FieldSpec::Rational);
        assert_eq!(e.rank(), 3);
        let ns = e.nullspace(&FieldSpec::Rational);
        assert_eq!(ns.len(), 1);
        assert!(apply(&m, &ns[0]).iter().all(Scalar::is_zero));
    }
}
