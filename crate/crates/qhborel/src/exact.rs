//! Exact dense big-integer matrices and exact rational forward substitution
//! for unitriangular systems.
//!
//! Everything here is arbitrary precision: no entry can overflow and no
//! floating point is involved anywhere. Storage is dense; the matrices in
//! this crate stay at desk scale.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinAlgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not unitriangular under the given order: entry ({row}, {col}) = {value}")]
    NotUnitriangular {
        row: usize,
        col: usize,
        value: BigInt,
    },
}

/// Exact rational vector. `num_rational` keeps every entry in lowest terms
/// with a positive denominator, so the representation is canonical.
pub type RatVec = Vec<BigRational>;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from a list of equal-length rows.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::Shape("rows have unequal lengths".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from machine integers, mostly for fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("literal rows are rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMat {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        let mut sums = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            for (s, x) in sums.iter_mut().zip(self.row(i)) {
                *s += x;
            }
        }
        sums
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Exact matrix-vector product.
    pub fn matvec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::Shape(format!(
                "matrix has {} columns but vector has {} entries",
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (m, x) in self.row(i).iter().zip(v) {
                    if !m.is_zero() && !x.is_zero() {
                        acc += m * x;
                    }
                }
                acc
            })
            .collect())
    }

    /// Exact matrix product `self * other`.
    pub fn matmul(&self, other: &IntMat) -> Result<IntMat, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for IntMat {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solves `m * x = b` exactly by forward substitution, where `m` becomes
/// lower triangular with unit diagonal after simultaneously permuting rows
/// and columns by `order`. The result is reported in the original index
/// order.
pub fn unitriangular_solve(
    m: &IntMat,
    b: &[BigInt],
    order: &[usize],
) -> Result<RatVec, LinAlgError> {
    let n = m.rows();
    if !m.is_square() {
        return Err(LinAlgError::Shape(format!(
            "matrix is {}x{}, expected square",
            m.rows(),
            m.cols()
        )));
    }
    if b.len() != n {
        return Err(LinAlgError::Shape(format!(
            "right-hand side has {} entries, expected {n}",
            b.len()
        )));
    }
    if order.len() != n {
        return Err(LinAlgError::Shape(format!(
            "order has {} entries, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in order {
        if p >= n || seen[p] {
            return Err(LinAlgError::Shape(
                "order is not a permutation of the indices".into(),
            ));
        }
        seen[p] = true;
    }
    for (a, &i) in order.iter().enumerate() {
        if !m[(i, i)].is_one() {
            return Err(LinAlgError::NotUnitriangular {
                row: i,
                col: i,
                value: m[(i, i)].clone(),
            });
        }
        for &j in &order[a + 1..] {
            if !m[(i, j)].is_zero() {
                return Err(LinAlgError::NotUnitriangular {
                    row: i,
                    col: j,
                    value: m[(i, j)].clone(),
                });
            }
        }
    }
    let mut x: RatVec = vec![BigRational::zero(); n];
    for (a, &i) in order.iter().enumerate() {
        let mut acc = BigRational::from(b[i].clone());
        for &j in &order[..a] {
            if !m[(i, j)].is_zero() {
                acc -= BigRational::from(m[(i, j)].clone()) * &x[j];
            }
        }
        x[i] = acc;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(x: i64) -> BigRational {
        BigRational::from(BigInt::from(x))
    }

    /// The 4x4 fixture whose system with all-ones right-hand side has the
    /// frozen solution (1, 1, 0, 1).
    fn fixture_v() -> IntMat {
        IntMat::from_i64_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1]])
    }

    #[test]
    fn solve_fixture_system() {
        let x = unitriangular_solve(&fixture_v(), &ints(&[1, 1, 1, 1]), &[0, 1, 2, 3]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1), rat(0), rat(1)]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let x = unitriangular_solve(&IntMat::identity(3), &ints(&[7, -2, 5]), &[0, 1, 2]).unwrap();
        assert_eq!(x, vec![rat(7), rat(-2), rat(5)]);
    }

    #[test]
    fn solve_forward_substitution() {
        let m = IntMat::from_i64_rows(&[&[1, 0], &[2, 1]]);
        let x = unitriangular_solve(&m, &ints(&[1, 3]), &[0, 1]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
    }

    #[test]
    fn solve_respects_permuted_order() {
        // Lower triangular only after reversing the index order.
        let m = IntMat::from_i64_rows(&[&[1, 2], &[0, 1]]);
        assert!(matches!(
            unitriangular_solve(&m, &ints(&[1, 1]), &[0, 1]),
            Err(LinAlgError::NotUnitriangular { row: 0, col: 1, .. })
        ));
        let x = unitriangular_solve(&m, &ints(&[3, 1]), &[1, 0]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
    }

    #[test]
    fn solve_rejects_bad_inputs() {
        let m = IntMat::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            unitriangular_solve(&m, &ints(&[1, 1]), &[0, 1]),
            Err(LinAlgError::NotUnitriangular { row: 0, col: 0, .. })
        ));
        let id = IntMat::identity(2);
        assert!(unitriangular_solve(&id, &ints(&[1]), &[0, 1]).is_err());
        assert!(unitriangular_solve(&id, &ints(&[1, 1]), &[0, 0]).is_err());
        assert!(unitriangular_solve(&IntMat::zeros(2, 3), &ints(&[1, 1]), &[0, 1]).is_err());
    }

    #[test]
    fn matvec_fixtures() {
        let v = fixture_v().matvec(&ints(&[1, 1, 1, 1])).unwrap();
        assert_eq!(v, ints(&[1, 1, 2, 1]));

        let id = IntMat::identity(3);
        assert_eq!(id.matvec(&ints(&[4, 5, 6])).unwrap(), ints(&[4, 5, 6]));

        // Doubling pattern: row sums 1, 1, 2, 4.
        let m = IntMat::from_i64_rows(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[1, 0, 1, 0],
            &[2, 1, 0, 1],
        ]);
        assert_eq!(m.matvec(&ints(&[1, 1, 1, 1])).unwrap(), ints(&[1, 1, 2, 4]));
    }

    #[test]
    fn matmul_against_identity_and_shapes() {
        let m = fixture_v();
        assert_eq!(m.matmul(&IntMat::identity(4)).unwrap(), m);
        assert_eq!(IntMat::identity(4).matmul(&m).unwrap(), m);
        assert!(m.matmul(&IntMat::zeros(3, 3)).is_err());
    }

    #[test]
    fn transpose_involution_and_sums() {
        let m = IntMat::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.row_sums(), ints(&[6, 15]));
        assert_eq!(m.col_sums(), ints(&[5, 7, 9]));
    }

    prop_compose! {
        /// Random unitriangular matrix with a shuffled evaluation order.
        fn unitriangular()(n in 1usize..7)(
            entries in prop::collection::vec(0i64..20, n * n),
            perm_seed in any::<u64>(),
            n in Just(n),
        ) -> (IntMat, Vec<usize>) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let mut m = IntMat::identity(n);
            for a in 1..n {
                for b in 0..a {
                    m[(order[a], order[b])] = BigInt::from(entries[a * n + b]);
                }
            }
            (m, order)
        }
    }

    proptest! {
        #[test]
        fn solve_then_multiply_round_trips((m, order) in unitriangular(),
                                           xs in prop::collection::vec(-50i64..50, 7)) {
            let n = m.rows();
            let x = ints(&xs[..n]);
            let b = m.matvec(&x).unwrap();
            let solved = unitriangular_solve(&m, &b, &order).unwrap();
            prop_assert!(solved.iter().all(|r| r.is_integer()));
            let back: Vec<BigInt> = solved.iter().map(|r| r.to_integer()).collect();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn matvec_is_linear(us in prop::collection::vec(-30i64..30, 5),
                            vs in prop::collection::vec(-30i64..30, 5),
                            rows in prop::collection::vec(prop::collection::vec(-9i64..9, 5), 4)) {
            let m = IntMat::from_rows(rows.iter().map(|r| ints(r)).collect()).unwrap();
            let u = ints(&us);
            let v = ints(&vs);
            let sum: Vec<BigInt> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            let lhs = m.matvec(&sum).unwrap();
            let rhs: Vec<BigInt> = m
                .matvec(&u)
                .unwrap()
                .iter()
                .zip(m.matvec(&v).unwrap())
                .map(|(a, b)| a + b)
                .collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
