//! Block partitions of an index set and the block projector `B`.
//!
//! `B(A)` keeps the entries `A[i][j]` whose row and column indices lie in the
//! same block and zeroes the rest. Everything downstream (the exact transform,
//! the series algebra, the residuals) is phrased in terms of this projector.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::Real;

/// Partition of `{0, …, n−1}` into ordered, nonempty, disjoint blocks.
///
/// Blocks need not be contiguous. Membership is stored as an index → block
/// table so that `same_block` is O(1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    label: Vec<usize>,
}

impl BlockPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("partition of an empty index set".into()));
        }
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Parse(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::Parse(format!(
                        "index {i} in block {b} out of range for dimension {n}"
                    )));
                }
                if label[i] != usize::MAX {
                    return Err(Error::Parse(format!(
                        "index {i} appears in blocks {} and {b}",
                        label[i]
                    )));
                }
                label[i] = b;
            }
        }
        if let Some(i) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Parse(format!("index {i} is not covered by any block")));
        }
        Ok(Self { n, blocks, label })
    }

    /// Contiguous blocks of the given sizes, e.g. `[3, 3, 2]` → `0,1,2;3,4,5;6,7`.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b: Vec<usize> = (start..start + s).collect();
                start += s;
                b
            })
            .collect();
        Self::new(start, blocks)
    }

    pub fn single_block(n: usize) -> Result<Self> {
        Self::new(n, vec![(0..n).collect()])
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| vec![i]).collect())
    }

    /// Parses `"0,1,2;3,4;5,6,7"`; the dimension is the number of indices listed.
    pub fn parse(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for (b, part) in s.split(';').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::Parse(format!("block {b} is empty in {s:?}")));
            }
            let block = part
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("bad index {:?} in block {b} of {s:?}", tok.trim()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn block_of(&self, i: usize) -> usize {
        self.label[i]
    }

    #[inline]
    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.label[i] == self.label[j]
    }

    pub fn check_dim<T: Real>(&self, a: &CMatrix<T>) -> Result<()> {
        if a.dim() == self.n {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "matrix is {0}x{0} but partition covers {1} indices",
                a.dim(),
                self.n
            )))
        }
    }

    /// `B(A)`, without the dimension check.
    pub(crate) fn project_unchecked<T: Real>(&self, a: &CMatrix<T>) -> CMatrix<T> {
        CMatrix::from_fn(self.n, |i, j| {
            if self.same_block(i, j) {
                a[(i, j)]
            } else {
                Complex::zero()
            }
        })
    }

    /// `A − B(A)`, without the dimension check.
    pub(crate) fn off_block_unchecked<T: Real>(&self, a: &CMatrix<T>) -> CMatrix<T> {
        CMatrix::from_fn(self.n, |i, j| {
            if self.same_block(i, j) {
                Complex::zero()
            } else {
                a[(i, j)]
            }
        })
    }
}

impl FromStr for BlockPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&parts.join(";"))
    }
}

/// `B(A)`: zero every entry whose indices lie in different blocks.
pub fn block_project<T: Real>(a: &CMatrix<T>, p: &BlockPartition) -> Result<CMatrix<T>> {
    p.check_dim(a)?;
    Ok(p.project_unchecked(a))
}

/// `‖A − B(A)‖_F`.
pub fn off_block_norm<T: Real>(a: &CMatrix<T>, p: &BlockPartition) -> Result<T> {
    p.check_dim(a)?;
    let mut acc = T::zero();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if !p.same_block(i, j) {
                acc = acc + a[(i, j)].norm_sqr();
            }
        }
    }
    Ok(acc.sqrt())
}

/// Block diagonal within `tol` relative to `‖A‖_F` (default tolerance: [`Real::check_tol`]).
pub fn is_block_diagonal<T: Real>(a: &CMatrix<T>, p: &BlockPartition, tol: Option<T>) -> Result<bool> {
    let tol = tol.unwrap_or_else(T::check_tol);
    Ok(off_block_norm(a, p)? <= tol * a.frobenius_norm())
}
