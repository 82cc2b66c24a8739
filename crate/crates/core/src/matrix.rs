//! Dense integer matrices with overflow-checked arithmetic.

use crate::error::{Error, Result};
use crate::poly::{self, IntPoly};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let p = self.get(i, k).checked_mul(o.get(k, j)).ok_or(Error::Overflow("matrix product"))?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow("matrix product"))?;
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    /// Exact determinant.
    pub fn det(&self) -> IntPoly {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let m = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| IntPoly::constant(self.get(i, j))).collect())
            .collect();
        poly::det(m)
    }

    /// `det(tI - self)`.
    pub fn char_poly(&self) -> IntPoly {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = IntPoly::constant(-self.get(i, j));
                        if i == j {
                            c + IntPoly::t()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        poly::det(m)
    }

    /// Rank over the rationals, by fraction-free elimination in i128.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> = (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i128).collect()).collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| a[i][c] != 0) else { continue };
            a.swap(rank, p);
            for i in 0..self.rows {
                if i != rank && a[i][c] != 0 {
                    let (f, g) = (a[i][c], a[rank][c]);
                    let pivot = a[rank].clone();
                    for (x, &y) in a[i].iter_mut().zip(&pivot) {
                        *x = *x * g - y * f;
                    }
                    let gcd = a[i].iter().fold(0i128, |x, &y| gcd(x, y.abs()));
                    if gcd > 1 {
                        a[i].iter_mut().for_each(|x| *x /= gcd);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
