//! Dense row-major matrices over Z_p and the column/row blocking used by
//! the sharing scheme.
//!
//! Block indices are 0-based: block `j` of a k-way column partition covers
//! columns `[j*m/k, (j+1)*m/k)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::ONE;
        }
        m
    }

    /// Builds a matrix from raw integers, rejecting any entry `>= p`.
    pub fn from_u64(field: &Field, rows: usize, cols: usize, values: &[u64]) -> Result<Self> {
        let data = values
            .iter()
            .map(|&v| field.checked_elem(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, data)
    }

    /// Like [`Matrix::from_u64`] but takes signed values and reduces them.
    pub fn from_i64(field: &Field, rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| field.from_i64(v)).collect())
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn to_u64(&self) -> Vec<u64> {
        self.data.iter().map(|e| e.value()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    fn same_shape(&self, other: &Matrix, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        let mut out = self.clone();
        out.add_assign(field, other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, field: &Field, other: &Matrix) -> Result<()> {
        self.same_shape(other, "add")?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = field.add(*a, b);
        }
        Ok(())
    }

    pub fn sub(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other, "sub")?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| field.sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, field: &Field, q: FieldElement) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| field.mul(a, q)).collect(),
        }
    }

    /// `self += q * other`
    pub fn add_scaled(&mut self, field: &Field, q: FieldElement, other: &Matrix) -> Result<()> {
        self.same_shape(other, "add_scaled")?;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = field.add(*a, field.mul(q, b));
        }
        Ok(())
    }

    /// Plain product `self * other`.
    pub fn matmul(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[l * other.cols..(l + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = field.add(*d, field.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    /// Copies the `rows x cols` window whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Result<Matrix> {
        if r0 + rows > self.rows || c0 + cols > self.cols {
            return Err(Error::IndexOutOfRange {
                index: (r0 + rows).max(c0 + cols),
                limit: self.rows.max(self.cols),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            data.extend_from_slice(&self.data[r * self.cols + c0..r * self.cols + c0 + cols]);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) -> Result<()> {
        if r0 + block.rows > self.rows || c0 + block.cols > self.cols {
            return Err(Error::IndexOutOfRange {
                index: (r0 + block.rows).max(c0 + block.cols),
                limit: self.rows.max(self.cols),
            });
        }
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols]
                .copy_from_slice(&block.data[r * block.cols..(r + 1) * block.cols]);
        }
        Ok(())
    }

    /// Horizontal concatenation `[B_0, B_1, ...]`.
    pub fn hconcat(blocks: &[Matrix]) -> Result<Matrix> {
        let Some(first) = blocks.first() else {
            return Ok(Matrix::zeros(0, 0));
        };
        let rows = first.rows;
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch("hconcat: ragged row counts".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            out.set_block(0, c0, b)?;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// Vertical stacking.
    pub fn vconcat(blocks: &[Matrix]) -> Result<Matrix> {
        let Some(first) = blocks.first() else {
            return Ok(Matrix::zeros(0, 0));
        };
        let cols = first.cols;
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::DimensionMismatch("vconcat: ragged column counts".into()));
        }
        let mut data = Vec::with_capacity(blocks.iter().map(|b| b.len()).sum());
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        Ok(Matrix { rows, cols, data })
    }
}

/// `a^T * b`, the product every secure multiplication computes.
pub fn matmul_t(field: &Field, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "matmul_t: {}x{} and {}x{} do not share a row count",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.cols, b.cols);
    for r in 0..a.rows {
        let brow = &b.data[r * b.cols..(r + 1) * b.cols];
        for i in 0..a.cols {
            let x = a.data[r * a.cols + i];
            if x.is_zero() {
                continue;
            }
            let dst = &mut out.data[i * b.cols..(i + 1) * b.cols];
            for (d, &y) in dst.iter_mut().zip(brow) {
                *d = field.add(*d, field.mul(x, y));
            }
        }
    }
    Ok(out)
}

/// A matrix split into `k` equal-width column blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnPartition {
    pub source_rows: usize,
    pub source_cols: usize,
    pub blocks: Vec<Matrix>,
}

impl ColumnPartition {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn concat(&self) -> Matrix {
        Matrix::hconcat(&self.blocks).expect("blocks share a row count")
    }
}

/// Splits `a` into `k` column blocks, each `rows x cols/k`.
pub fn partition_columns(a: &Matrix, k: usize) -> Result<ColumnPartition> {
    if k == 0 || a.cols % k != 0 {
        return Err(Error::IndivisibleDimension { dim: a.cols, k });
    }
    let w = a.cols / k;
    let blocks = (0..k)
        .map(|j| a.submatrix(0, j * w, a.rows, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(ColumnPartition {
        source_rows: a.rows,
        source_cols: a.cols,
        blocks,
    })
}

/// Rows `[i*r/k, (i+1)*r/k)` of `f`, for a 0-based block index `i < k`.
pub fn row_slice(f: &Matrix, i: usize, k: usize) -> Result<Matrix> {
    if k == 0 || f.rows % k != 0 {
        return Err(Error::IndivisibleDimension { dim: f.rows, k });
    }
    if i >= k {
        return Err(Error::IndexOutOfRange { index: i, limit: k });
    }
    let h = f.rows / k;
    f.submatrix(i * h, 0, h, f.cols)
}

/// On-disk matrix format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub modulus: u64,
    pub data: Vec<u64>,
}

impl MatrixDoc {
    pub fn from_matrix(field: &Field, m: &Matrix) -> Self {
        MatrixDoc {
            rows: m.rows,
            cols: m.cols,
            modulus: field.modulus(),
            data: m.to_u64(),
        }
    }

    /// Validates the modulus and every entry against `field`.
    pub fn to_matrix(&self, field: &Field) -> Result<Matrix> {
        if self.modulus != field.modulus() {
            return Err(Error::InvalidConfig(format!(
                "matrix modulus {} differs from field modulus {}",
                self.modulus,
                field.modulus()
            )));
        }
        Matrix::from_u64(field, self.rows, self.cols, &self.data)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(format!("matrix JSON: {e}")))
    }
}
