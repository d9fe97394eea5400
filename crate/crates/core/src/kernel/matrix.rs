//! Dense matrices over the rationals and over prime fields, with
//! deterministic row reduction (first nonzero row in each column is the pivot).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{is_prime, Rational};
use crate::error::{Error, Result};

/// Rank and a basis of the right kernel `{v : M v = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankNullspace<T> {
    pub rank: usize,
    pub nullspace: Vec<Vec<T>>,
}

/// Row-major dense matrix over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds a matrix with `cols` columns from row vectors.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_int_rows(cols: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| super::rational::dot(self.row(r), v))
            .collect())
    }

    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        rref_rational(&mut work, self.rows, self.cols).len()
    }

    pub fn rank_nullspace(&self) -> RankNullspace<Rational> {
        let mut work = self.entries.clone();
        let pivots = rref_rational(&mut work, self.rows, self.cols);
        let nullspace = free_columns(&pivots, self.cols)
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -work[r * self.cols + free].clone();
                }
                v
            })
            .collect();
        RankNullspace {
            rank: pivots.len(),
            nullspace,
        }
    }
}

fn free_columns(pivots: &[usize], cols: usize) -> impl Iterator<Item = usize> + '_ {
    (0..cols).filter(move |c| !pivots.contains(c))
}

/// Reduced row echelon form in place; returns pivot columns in row order.
fn rref_rational(a: &mut [Rational], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                a.swap(p * cols + k, r * cols + k);
            }
        }
        let inv = a[r * cols + c].recip();
        for k in c..cols {
            a[r * cols + k] *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i * cols + c].is_zero() {
                continue;
            }
            let f = a[i * cols + c].clone();
            for k in c..cols {
                let delta = &f * &a[r * cols + k];
                a[i * cols + k] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row-major dense matrix over the prime field 𝔽ₚ, entries stored in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    prime: u64,
    entries: Vec<u64>,
}

/// Largest prime below 2¹⁶.
pub const DEFAULT_PRIME: u64 = 65521;

fn check_modulus(prime: u64) -> Result<()> {
    // products of two residues must fit in u64
    if prime >= 1 << 32 || !is_prime(prime) {
        return Err(Error::InvalidModulus(prime));
    }
    Ok(())
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, prime: u64) -> Result<Self> {
        check_modulus(prime)?;
        Ok(Self {
            rows,
            cols,
            prime,
            entries: vec![0; rows * cols],
        })
    }

    /// Builds a matrix from residues; entries are reduced mod `prime`.
    pub fn from_rows(prime: u64, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        check_modulus(prime)?;
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            entries.extend(row.iter().map(|x| x % prime));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            prime,
            entries,
        })
    }

    pub fn from_i64_rows(prime: u64, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let p = prime as i128;
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p) as u64).collect())
            .collect();
        Self::from_rows(prime, cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        rref_mod(&mut work, self.rows, self.cols, self.prime).len()
    }

    pub fn rank_nullspace(&self) -> RankNullspace<u64> {
        let p = self.prime;
        let mut work = self.entries.clone();
        let pivots = rref_mod(&mut work, self.rows, self.cols, p);
        let nullspace = free_columns(&pivots, self.cols)
            .map(|free| {
                let mut v = vec![0u64; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - work[r * self.cols + free]) % p;
                }
                v
            })
            .collect();
        RankNullspace {
            rank: pivots.len(),
            nullspace,
        }
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn rref_mod(a: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for k in 0..cols {
                a.swap(piv * cols + k, r * cols + k);
            }
        }
        let inv = inv_mod(a[r * cols + c], p);
        for k in c..cols {
            a[r * cols + k] = a[r * cols + k] * inv % p;
        }
        for i in 0..rows {
            let f = a[i * cols + c];
            if i == r || f == 0 {
                continue;
            }
            for k in c..cols {
                let sub = f * a[r * cols + k] % p;
                a[i * cols + k] = (a[i * cols + k] + p - sub) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn identity_has_full_rank() {
        let m = Matrix::from_i64_rows(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let rn = m.rank_nullspace();
        assert_eq!(rn.rank, 2);
        assert!(rn.nullspace.is_empty());
    }

    #[test]
    fn proportional_rows() {
        let m = Matrix::from_i64_rows(2, &[vec![1, 2], vec![2, 4]]).unwrap();
        let rn = m.rank_nullspace();
        assert_eq!(rn.rank, 1);
        assert_eq!(rn.nullspace, vec![vec![rat(-2), rat(1)]]);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(
            FpMatrix::zeros(2, 2, 65535).unwrap_err(),
            Error::InvalidModulus(65535)
        );
        assert!(FpMatrix::from_rows(4, 1, &[vec![1]]).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = Matrix::from_i64_rows(2, &[vec![1, 2], vec![3]]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zeros(0, 3);
        let rn = m.rank_nullspace();
        assert_eq!(rn.rank, 0);
        assert_eq!(rn.nullspace.len(), 3);
        assert_eq!(Matrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn fp_rank_drops_when_prime_divides_minor() {
        // det = 7
        let m = vec![vec![1, 2], vec![3, 13]];
        assert_eq!(FpMatrix::from_i64_rows(7, 2, &m).unwrap().rank(), 1);
        assert_eq!(FpMatrix::from_i64_rows(11, 2, &m).unwrap().rank(), 2);
        assert_eq!(Matrix::from_i64_rows(2, &m).unwrap().rank(), 2);
    }

    fn int_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (
                Just(c),
                prop::collection::vec(prop::collection::vec(-6i64..=6, c), r),
            )
        })
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel((cols, rows) in int_matrix()) {
            let m = Matrix::from_i64_rows(cols, &rows).unwrap();
            let rn = m.rank_nullspace();
            prop_assert_eq!(rn.rank + rn.nullspace.len(), cols);
            for v in &rn.nullspace {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }

            let fp = FpMatrix::from_i64_rows(7, cols, &rows).unwrap();
            let frn = fp.rank_nullspace();
            prop_assert_eq!(frn.rank + frn.nullspace.len(), cols);
            for v in &frn.nullspace {
                for r in 0..fp.rows() {
                    let s = (0..cols).fold(0u64, |acc, c| (acc + fp.get(r, c) * v[c]) % 7);
                    prop_assert_eq!(s, 0);
                }
            }
            // reduction mod p can only lose rank
            prop_assert!(frn.rank <= rn.rank);
        }
    }
}
