//! Exact dense linear algebra over the rationals.
//!
//! Only what the flattened β-systems need: reduced row echelon form with
//! a deterministic pivot order (leftmost nonzero column, then smallest
//! row index) and the kernel basis read off from it, so nullspace bases
//! are reproducible byte-for-byte.

use num_traits::{One, Zero};

use crate::rational::Rat;

#[derive(Clone, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged matrix");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns in order.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = {
                let lead = self.get(row, col).clone();
                Rat::one() / lead
            };
            for j in col..self.cols {
                let v = self.get(row, j) * &inv;
                self.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row || self.get(i, col).is_zero() {
                    continue;
                }
                let f = self.get(i, col).clone();
                for j in col..self.cols {
                    let v = self.get(i, j) - &f * self.get(row, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Kernel basis, one vector per free column, free columns ascending.
    /// Each vector has entry 1 at its free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn m(rows: Vec<Vec<i64>>) -> RatMatrix {
        RatMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rint).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_one_kernel() {
        let a = m(vec![vec![1, 2], vec![2, 4]]);
        let ns = a.nullspace();
        assert_eq!(ns, vec![vec![rint(-2), rint(1)]]);
    }

    #[test]
    fn full_rank_empty_kernel() {
        let a = m(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(a.nullspace().is_empty());
        assert_eq!(a.rank(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(a.rank() + ns.len(), a.cols());
    }

    #[test]
    fn rational_entries() {
        let a = RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(1, 3)],
            vec![rat(3, 2), rint(1)],
        ]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }
}
