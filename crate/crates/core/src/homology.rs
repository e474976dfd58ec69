//! First homology in the basis of the oriented chain curves `a_1..a_{2g}`.
//!
//! Classes are measured through exact algebraic intersections: an oriented
//! curve contributes an edge cycle (its crossings slid to edge tails) and a
//! flux vector (its signed crossing counts), and pairing a cycle of one curve
//! with the flux of another gives their algebraic intersection.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curves::{pair_chains, NormalCurve, OrientedCurve};
use crate::error::{Error, Result};
use crate::surface::{PolygonSurface, SimplicialMap};

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub n: usize,
    pub entries: Vec<BigInt>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Matrix { n, entries }
    }

    pub fn from_i64(n: usize, rows: &[Vec<i64>]) -> Self {
        Matrix {
            n,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Matrix { n, entries }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j).clone();
            }
        }
        Matrix { n, entries }
    }

    pub fn scale(&self, s: i64) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Replaces `self` by `(I + s·v·wᵀ)·self`.
    pub fn left_rank_one(&mut self, s: i64, v: &[BigInt], w: &[BigInt]) {
        let n = self.n;
        let row: Vec<BigInt> = (0..n)
            .map(|j| (0..n).map(|k| &w[k] * self.get(k, j)).sum::<BigInt>() * s)
            .collect();
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let d = &v[i] * &row[j];
                self.entries[i * n + j] += d;
            }
        }
    }

    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

/// Action of a mapping class on homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyAction {
    pub matrix: Matrix,
    pub character: i8,
}

/// Exact inverse of a small unimodular integer matrix by fraction-free
/// Gauss-Jordan elimination; `None` if it is singular or not unimodular.
fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            row.extend((0..n).map(|j| (i == j) as i128));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let (p, q) = (a[col][col], a[r][col]);
            for c in 0..2 * n {
                a[r][c] = a[r][c] * p - a[col][c] * q;
            }
            let g = a[r].iter().fold(0i128, |g, &x| gcd(g, x));
            if g > 1 {
                a[r].iter_mut().for_each(|x| *x /= g);
            }
        }
    }
    let mut inv = vec![vec![0i64; n]; n];
    for r in 0..n {
        for c in 0..n {
            if a[r][n + c] % a[r][r] != 0 {
                return None;
            }
            inv[r][c] = (a[r][n + c] / a[r][r]) as i64;
        }
    }
    Some(inv)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The chain basis with everything needed to measure classes.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    primal: Vec<Vec<i64>>,
    flux: Vec<Vec<i64>>,
    /// `J[j][k] = ⟨a_j, a_k⟩`.
    pairing: Vec<Vec<i64>>,
    /// Inverse of `Jᵀ`, turning measurements into coordinates.
    solve: Vec<Vec<i64>>,
}

impl HomologyBasis {
    /// `chain` lists `a_1..a_{2g}`.
    pub fn new(s: &PolygonSurface, chain: &[NormalCurve]) -> Result<Self> {
        let oriented: Vec<OrientedCurve> = chain.iter().map(|c| OrientedCurve::new(s, c)).collect::<Result<_>>()?;
        let primal: Vec<Vec<i64>> = oriented.iter().map(|o| o.primal_chain(s.triangulation())).collect();
        let flux: Vec<Vec<i64>> = oriented.iter().map(|o| o.flux(s.num_edges())).collect();
        let n = chain.len();
        let pairing: Vec<Vec<i64>> = (0..n)
            .map(|j| (0..n).map(|k| pair_chains(&primal[j], &flux[k])).collect())
            .collect();
        let transposed: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|k| pairing[k][j]).collect()).collect();
        let solve = unimodular_inverse(&transposed)
            .ok_or_else(|| Error::SeedInvalid("chain curves do not form a homology basis".into()))?;
        Ok(HomologyBasis {
            primal,
            flux,
            pairing,
            solve,
        })
    }

    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    pub fn pairing_matrix(&self) -> Matrix {
        Matrix::from_i64(self.rank(), &self.pairing)
    }

    fn coordinates(&self, measurements: &[i64]) -> Vec<BigInt> {
        self.solve
            .iter()
            .map(|row| row.iter().zip(measurements).map(|(a, b)| BigInt::from(a * b)).sum())
            .collect()
    }

    /// Coordinates of an edge cycle.
    pub fn class_of_chain(&self, chain: &[i64]) -> Vec<BigInt> {
        let m: Vec<i64> = self.flux.iter().map(|f| pair_chains(chain, f)).collect();
        self.coordinates(&m)
    }

    /// Class of the canonically oriented curve.
    pub fn class_of(&self, s: &PolygonSurface, c: &NormalCurve) -> Result<Vec<BigInt>> {
        let o = OrientedCurve::new(s, c)?;
        Ok(self.class_of_chain(&o.primal_chain(s.triangulation())))
    }

    /// `⟨x, y⟩ = xᵀ J y`.
    pub fn form(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let n = self.rank();
        let mut total = BigInt::zero();
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            for k in 0..n {
                if self.pairing[j][k] != 0 {
                    total += &x[j] * &y[k] * self.pairing[j][k];
                }
            }
        }
        total
    }

    /// `J y`, so that `⟨x, y⟩ = x · (J y)`.
    pub fn pair_with(&self, y: &[BigInt]) -> Vec<BigInt> {
        let n = self.rank();
        (0..n)
            .map(|j| (0..n).map(|k| &y[k] * self.pairing[j][k]).sum())
            .collect()
    }

    /// Matrix of a simplicial map, column `j` being the image of `[a_j]`.
    pub fn simplicial_matrix(&self, m: &SimplicialMap) -> Matrix {
        let n = self.rank();
        let cols: Vec<Vec<BigInt>> = self.primal.iter().map(|p| self.class_of_chain(&m.apply_chain(p))).collect();
        let mut entries = vec![BigInt::zero(); n * n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                entries[i * n + j] = col[i].clone();
            }
        }
        Matrix { n, entries }
    }

    /// Checks `Mᵀ J M = χ J`.
    pub fn is_symplectic(&self, a: &HomologyAction) -> bool {
        let j = self.pairing_matrix();
        a.matrix.transpose().mul(&j).mul(&a.matrix) == j.scale(a.character as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_a_tridiagonal_form() {
        let j = vec![
            vec![0, 1, 0, 0],
            vec![-1, 0, -1, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, -1, 0],
        ];
        let inv = unimodular_inverse(&j).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let x: i64 = (0..4).map(|k| j[r][k] * inv[k][c]).sum();
                assert_eq!(x, (r == c) as i64);
            }
        }
        assert!(unimodular_inverse(&[vec![2, 0], vec![0, 1]]).is_none());
    }
}
