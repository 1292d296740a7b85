//! Small dense complex vectors and matrices.
//!
//! Everything in the sensing chain is tiny (at most 2N x 2N entries), so the
//! arithmetic is plain unblocked loops over `Complex64`. Dimensions are fixed
//! at construction and every binary operation checks conformance.

use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![Complex64::ZERO; len],
        }
    }

    /// Standard basis vector `e_i` of the given length.
    pub fn basis(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.data[i] = Complex64::ONE;
        v
    }

    pub fn from_real(data: &[f64]) -> Self {
        Self {
            data: data.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.data.iter()
    }

    /// Conjugated inner product `self^H other`.
    pub fn dot(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                what: "vector dot",
                expected: format!("{}", self.len()),
                got: format!("{}", other.len()),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                what: "vector add",
                expected: format!("{}", self.len()),
                got: format!("{}", other.len()),
            });
        }
        Ok(Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Rank-one outer product `self * other^H`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        let rows = self.len();
        let cols = other.len();
        let mut data = Vec::with_capacity(rows * cols);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b.conj());
            }
        }
        ComplexMatrix { rows, cols, data }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl FromIterator<Complex64> for ComplexVector {
    fn from_iter<T: IntoIterator<Item = Complex64>>(iter: T) -> Self {
        Self {
            data: iter.into_iter().collect(),
        }
    }
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                what: "matrix construction",
                expected: format!("{} entries", rows * cols),
                got: format!("{}", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::ONE;
        }
        m
    }

    /// Build from column vectors; all columns must share one length.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, ComplexVector::len);
        for c in columns {
            if c.len() != rows {
                return Err(Error::Dimension {
                    what: "matrix from columns",
                    expected: format!("column length {rows}"),
                    got: format!("{}", c.len()),
                });
            }
        }
        let mut data = vec![Complex64::ZERO; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for i in 0..rows {
                data[i * cols + j] = c[i];
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self * v`.
    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                what: "matvec",
                expected: format!("{}", self.cols),
                got: format!("{}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * v[j])
                    .sum::<Complex64>()
            })
            .collect())
    }

    /// `self^H * v`.
    pub fn adjoint_matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                what: "adjoint matvec",
                expected: format!("{}", self.rows),
                got: format!("{}", v.len()),
            });
        }
        Ok((0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.get(i, j).conj() * v[i])
                    .sum::<Complex64>()
            })
            .collect())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Real-valued quadratic form `v^H M v` for Hermitian `M`.
///
/// The imaginary residue of the computed value is checked against a 1e-12
/// relative budget in debug builds and discarded.
pub fn hermitian_quadratic_form(v: &ComplexVector, m: &ComplexMatrix) -> Result<f64> {
    if m.rows() != m.cols() || m.cols() != v.len() {
        return Err(Error::Dimension {
            what: "hermitian quadratic form",
            expected: format!("{0} x {0} matrix with vector {0}", v.len()),
            got: format!("{} x {} with vector {}", m.rows(), m.cols(), v.len()),
        });
    }
    let mv = m.matvec(v)?;
    let value = v.dot(&mv)?;
    debug_assert!(
        value.im.abs() <= 1e-12 * value.re.abs().max(1.0),
        "imaginary residue {} exceeds budget (is M Hermitian?)",
        value.im
    );
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SeededRng;

    fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let z = rng.standard_complex();
                if i == j {
                    m.data[i * n + j] = Complex64::new(z.re, 0.0);
                } else {
                    m.data[i * n + j] = z;
                    m.data[j * n + i] = z.conj();
                }
            }
        }
        m
    }

    #[test]
    fn quadratic_form_identity_basis() {
        let v = ComplexVector::basis(4, 0);
        let m = ComplexMatrix::identity(4);
        assert_eq!(hermitian_quadratic_form(&v, &m).unwrap(), 1.0);
    }

    #[test]
    fn quadratic_form_zero_vector() {
        let v = ComplexVector::zeros(4);
        let m = ComplexMatrix::identity(4);
        assert_eq!(hermitian_quadratic_form(&v, &m).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_form_matches_entrywise_sum() {
        let mut rng = SeededRng::new(11, 0);
        for _ in 0..20 {
            let m = random_hermitian(4, &mut rng);
            let v: ComplexVector = (0..4).map(|_| rng.standard_complex()).collect();
            let got = hermitian_quadratic_form(&v, &m).unwrap();
            // Entrywise oracle: sum_ij conj(v_i) M_ij v_j.
            let mut want = Complex64::ZERO;
            for i in 0..4 {
                for j in 0..4 {
                    want += v[i].conj() * m.get(i, j) * v[j];
                }
            }
            assert!((got - want.re).abs() <= 1e-12 * want.re.abs().max(1.0));
        }
    }

    #[test]
    fn quadratic_form_rejects_mismatched_dims() {
        let v = ComplexVector::zeros(3);
        let m = ComplexMatrix::identity(4);
        assert!(hermitian_quadratic_form(&v, &m).is_err());
    }

    #[test]
    fn dot_rejects_mismatched_lengths() {
        let a = ComplexVector::zeros(3);
        let b = ComplexVector::zeros(4);
        assert!(a.dot(&b).is_err());
    }

    #[test]
    fn outer_product_shape_and_values() {
        let a = ComplexVector::from_real(&[1.0, 2.0]);
        let b = ComplexVector::new(vec![Complex64::new(0.0, 1.0)]);
        let m = a.outer(&b);
        assert_eq!((m.rows(), m.cols()), (2, 1));
        // (1)(i)^* = -i
        assert_eq!(m.get(0, 0), Complex64::new(0.0, -1.0));
        assert_eq!(m.get(1, 0), Complex64::new(0.0, -2.0));
    }

    #[test]
    fn conjugate_symmetry_of_inner_product() {
        let mut rng = SeededRng::new(5, 3);
        for _ in 0..50 {
            let u: ComplexVector = (0..4).map(|_| rng.standard_complex()).collect();
            let v: ComplexVector = (0..4).map(|_| rng.standard_complex()).collect();
            let uv = u.dot(&v).unwrap();
            let vu = v.dot(&u).unwrap();
            assert!((uv - vu.conj()).norm() < 1e-14);
        }
    }
}
