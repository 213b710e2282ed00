//! Sparse integer matrices with arbitrary-precision entries.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A sparse matrix stored column-wise as sorted `(row, value)` lists with no explicit zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in self.to_dense() {
            writeln!(f, "  {:?}", r.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Self::zero(n, n);
        if c != 0 {
            for i in 0..n {
                m.data[i].push((i, BigInt::from(c)));
            }
        }
        m
    }

    /// From row-major small integers.
    pub fn from_rows(rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        let mut m = Self::zero(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.data[c].push((r, BigInt::from(v)));
                }
            }
        }
        m
    }

    pub fn from_big_rows(rows: usize, cols: usize, entries: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows, cols);
        for (r, row) in entries.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.data[c].push((r, v.clone()));
                }
            }
        }
        m
    }

    /// From `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, trips: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in trips {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            *acc[c].entry(r).or_insert_with(BigInt::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|col| col.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Matrix { rows, cols, data }
    }

    /// From columns given as sparse maps.
    pub fn from_columns(rows: usize, columns: Vec<BTreeMap<usize, BigInt>>) -> Self {
        let cols = columns.len();
        let data = columns
            .into_iter()
            .map(|col| {
                col.into_iter()
                    .filter(|(r, v)| {
                        assert!(*r < rows);
                        !v.is_zero()
                    })
                    .collect()
            })
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.data[c]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self.data[c].binary_search_by_key(&r, |(rr, _)| *rr) {
            Ok(k) => self.data[c][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.to_i64().expect("entry fits in i64")).collect())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.clone())))
    }

    /// `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut data = Vec::with_capacity(other.cols);
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for col in &other.data {
            acc.clear();
            for (k, b) in col {
                for (r, a) in &self.data[*k] {
                    *acc.entry(*r).or_insert_with(BigInt::zero) += a * b;
                }
            }
            data.push(acc.iter().filter(|(_, v)| !v.is_zero()).map(|(r, v)| (*r, v.clone())).collect());
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.lin(other, 1)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.lin(other, -1)
    }

    /// `self + c * other`.
    pub fn lin(&self, other: &Matrix, c: i64) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let c = BigInt::from(c);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge_cols(a, b, &c))
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: i64) -> Matrix {
        if c == 0 {
            return Matrix::zero(self.rows, self.cols);
        }
        let c = BigInt::from(c);
        let data = self.data.iter().map(|col| col.iter().map(|(r, v)| (*r, v * &c)).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(-1)
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
        let mut out = BTreeMap::new();
        for (k, b) in v {
            for (r, a) in &self.data[*k] {
                *out.entry(*r).or_insert_with(BigInt::zero) += a * b;
            }
        }
        out.retain(|_, v: &mut BigInt| !v.is_zero());
        out
    }

    /// Block matrix from a grid of optional blocks; missing blocks are zero.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[Vec<Option<&Matrix>>]) -> Matrix {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut trips = Vec::new();
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(Some(m)) = blocks.get(bi).and_then(|row| row.get(bj)) {
                    assert_eq!((m.rows, m.cols), (rs, cs), "block ({bi},{bj}) shape");
                    trips.extend(m.triplets().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
                }
                c0 += cs;
            }
            r0 += rs;
        }
        Matrix::from_triplets(rows, cols, trips)
    }

    pub fn block_diag(mats: &[&Matrix]) -> Matrix {
        let rs: Vec<usize> = mats.iter().map(|m| m.rows).collect();
        let cs: Vec<usize> = mats.iter().map(|m| m.cols).collect();
        let blocks: Vec<Vec<Option<&Matrix>>> =
            (0..mats.len()).map(|i| (0..mats.len()).map(|j| if i == j { Some(mats[i]) } else { None }).collect()).collect();
        Matrix::block(&rs, &cs, &blocks)
    }

    /// Kronecker product: index `(a, b) ↦ a * other.dim + b`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut trips = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                trips.push((r1 * other.rows + r2, c1 * other.cols + c2, v1 * v2));
            }
        }
        Matrix::from_triplets(self.rows * other.rows, self.cols * other.cols, trips)
    }

    /// Rows selected in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        Matrix::from_triplets(
            rows.len(),
            self.cols,
            self.triplets().filter(|(r, _, _)| pos[*r] != usize::MAX).map(|(r, c, v)| (pos[r], c, v.clone())),
        )
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix { rows: self.rows, cols: cols.len(), data: cols.iter().map(|&c| self.data[c].clone()).collect() }
    }

    pub fn max_abs(&self) -> BigInt {
        self.triplets().map(|(_, _, v)| v.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(c, col)| col.len() == 1 && col[0].0 == c && col[0].1.is_one())
    }
}

fn merge_cols(a: &[(usize, BigInt)], b: &[(usize, BigInt)], c: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, &b[j].1 * c));
            j += 1;
        } else {
            let v = &a[i].1 + &b[j].1 * c;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sparse vector helpers.
pub type SparseVec = BTreeMap<usize, BigInt>;

pub fn vec_add_scaled(acc: &mut SparseVec, v: &SparseVec, c: &BigInt) {
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(BigInt::zero);
        *e += x * c;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

pub fn add_entry(acc: &mut SparseVec, k: usize, c: BigInt) {
    let e = acc.entry(k).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_sum() {
        let a = Matrix::from_rows(2, 3, &[vec![1, 2, 0], vec![0, -1, 3]]);
        let b = Matrix::from_rows(3, 2, &[vec![1, 0], vec![0, 1], vec![2, 2]]);
        assert_eq!(a.mul(&b).to_i64_rows(), vec![vec![1, 2], vec![6, 5]]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.transpose().transpose(), a);
        let k = Matrix::identity(2).kron(&a);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.get(3, 5), BigInt::from(3));
    }

    #[test]
    fn blocks() {
        let a = Matrix::identity(1);
        let b = Matrix::scalar(2, 3);
        let m = Matrix::block_diag(&[&a, &b]);
        assert_eq!(m.to_i64_rows(), vec![vec![1, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]);
    }
}
