//! Dense real hypermatrices and the multilinear operations on them.
//!
//! Data is stored with the first index varying fastest. That storage order is
//! private; the externally visible layout is pinned by [`Hypermatrix::unfold`]
//! (k-mode unfolding, remaining indices ordered with the lowest mode fastest)
//! and by [`vec`] (column stacking).
//!
//! Indices are 0-based in the API and 1-based in error messages.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix used for factors, unfoldings and gram letters.
pub type RealMatrix = DMatrix<f64>;

/// Default absolute tolerance for [`Hypermatrix::approx_eq`].
pub const DEFAULT_EQ_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Hypermatrix {
    shape: Vec<usize>,
    data: Vec<f64>,
}

fn check_shape(shape: &[usize]) -> Result<usize> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidShape(shape.to_vec()));
    }
    Ok(shape.iter().product())
}

/// Visits every multi-index of `shape` with the first index fastest.
pub(crate) fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut k = 0;
        loop {
            if k == shape.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

impl Hypermatrix {
    /// Builds a hypermatrix from data laid out with the first index fastest.
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let expected = check_shape(&shape)?;
        if data.len() != expected {
            return Err(Error::DataLength {
                shape,
                expected,
                got: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let len = check_shape(&shape)?;
        Ok(Self {
            shape,
            data: vec![0.0; len],
        })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = check_shape(&shape)?;
        let mut data = Vec::with_capacity(len);
        for_each_index(&shape, |idx| data.push(f(idx)));
        Ok(Self { shape, data })
    }

    /// The order-1 hypermatrix `[x]`.
    pub fn scalar(x: f64) -> Self {
        Self {
            shape: vec![1],
            data: vec![x],
        }
    }

    /// Order-1 hypermatrix holding a vector. An empty slice is rejected.
    pub fn from_vector(v: &[f64]) -> Result<Self> {
        Self::new(vec![v.len()], v.to_vec())
    }

    /// Order-2 hypermatrix with the same entries as `m`.
    pub fn from_matrix(m: &RealMatrix) -> Result<Self> {
        // nalgebra is column-major, which is exactly the first-index-fastest layout
        Self::new(vec![m.nrows(), m.ncols()], m.as_slice().to_vec())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Entries with the first index varying fastest.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut off = 0;
        let mut stride = 1;
        for (&i, &n) in idx.iter().zip(&self.shape) {
            debug_assert!(i < n);
            off += i * stride;
            stride *= n;
        }
        off
    }

    /// Entry at a 0-based multi-index. Panics when out of bounds.
    pub fn get(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.order(), "index arity");
        for (k, (&i, &n)) in idx.iter().zip(&self.shape).enumerate() {
            assert!(i < n, "index {i} out of range in mode {}", k + 1);
        }
        self.data[self.offset(idx)]
    }

    /// Outer product: shape is the concatenation of both shapes and
    /// `(A∘B)[i…, j…] = A[i…]·B[j…]`.
    pub fn outer(&self, other: &Hypermatrix) -> Hypermatrix {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut data = Vec::with_capacity(self.len() * other.len());
        for &b in &other.data {
            data.extend(self.data.iter().map(|&a| a * b));
        }
        Hypermatrix { shape, data }
    }

    /// Mode-`k` product: multiplies every mode-`k` fibre by `x`.
    pub fn mode_product(&self, k: usize, x: &RealMatrix) -> Result<Hypermatrix> {
        if k >= self.order() {
            return Err(Error::ModeOutOfRange {
                mode: k + 1,
                order: self.order(),
            });
        }
        let n = self.shape[k];
        if x.ncols() != n {
            return Err(Error::ModeMismatch {
                mode: k + 1,
                expected: n,
                got: x.ncols(),
            });
        }
        let rows = x.nrows();
        let left: usize = self.shape[..k].iter().product();
        let right: usize = self.shape[k + 1..].iter().product();
        let mut shape = self.shape.clone();
        shape[k] = rows;
        check_shape(&shape)?;
        let mut data = vec![0.0; left * rows * right];
        for b in 0..right {
            for j in 0..n {
                let src = &self.data[left * (j + n * b)..left * (j + n * b) + left];
                for r in 0..rows {
                    let w = x[(r, j)];
                    if w == 0.0 {
                        continue;
                    }
                    let dst = &mut data[left * (r + rows * b)..left * (r + rows * b) + left];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }
            }
        }
        Ok(Hypermatrix { shape, data })
    }

    /// Multilinear matrix multiplication `(X₁,…,X_d)*A`.
    pub fn multilinear(&self, mats: &[RealMatrix]) -> Result<Hypermatrix> {
        if mats.len() != self.order() {
            return Err(Error::Arity {
                expected: self.order(),
                got: mats.len(),
            });
        }
        for (k, x) in mats.iter().enumerate() {
            if x.ncols() != self.shape[k] {
                return Err(Error::ModeMismatch {
                    mode: k + 1,
                    expected: self.shape[k],
                    got: x.ncols(),
                });
            }
        }
        let mut out = self.clone();
        for (k, x) in mats.iter().enumerate() {
            out = out.mode_product(k, x)?;
        }
        Ok(out)
    }

    /// k-mode unfolding (0-based `k`). Row index is `i_k`; the column index is
    /// `Σ_{l≠k} i_l · Π_{m<l, m≠k} n_m`.
    pub fn unfold(&self, k: usize) -> Result<RealMatrix> {
        if k >= self.order() {
            return Err(Error::ModeOutOfRange {
                mode: k + 1,
                order: self.order(),
            });
        }
        let n = self.shape[k];
        let left: usize = self.shape[..k].iter().product();
        let right: usize = self.shape[k + 1..].iter().product();
        let mut m = RealMatrix::zeros(n, left * right);
        for b in 0..right {
            for i in 0..n {
                let base = left * (i + n * b);
                for a in 0..left {
                    m[(i, a + left * b)] = self.data[base + a];
                }
            }
        }
        Ok(m)
    }

    /// Inverse of [`Hypermatrix::unfold`].
    pub fn fold(m: &RealMatrix, k: usize, shape: &[usize]) -> Result<Hypermatrix> {
        let len = check_shape(shape)?;
        if k >= shape.len() {
            return Err(Error::ModeOutOfRange {
                mode: k + 1,
                order: shape.len(),
            });
        }
        let n = shape[k];
        if m.nrows() != n || m.nrows() * m.ncols() != len {
            return Err(Error::Shape {
                expected: format!("{}x{}", n, len / n),
                got: vec![m.nrows(), m.ncols()],
            });
        }
        let left: usize = shape[..k].iter().product();
        let right: usize = shape[k + 1..].iter().product();
        let mut data = vec![0.0; len];
        for b in 0..right {
            for i in 0..n {
                let base = left * (i + n * b);
                for a in 0..left {
                    data[base + a] = m[(i, a + left * b)];
                }
            }
        }
        Ok(Hypermatrix {
            shape: shape.to_vec(),
            data,
        })
    }

    /// Reorders axes: output axis `p` is input axis `perm[p]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Hypermatrix> {
        let d = self.order();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Shape {
                expected: format!("a permutation of 0..{d}"),
                got: perm.to_vec(),
            });
        }
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let mut src = vec![0usize; d];
        Hypermatrix::from_fn(shape, |idx| {
            for (p, &i) in idx.iter().enumerate() {
                src[perm[p]] = i;
            }
            self.data[self.offset(&src)]
        })
    }

    /// Matrix view of an order-2 hypermatrix.
    pub fn to_matrix(&self) -> Result<RealMatrix> {
        match self.shape.as_slice() {
            [r, c] => Ok(RealMatrix::from_column_slice(*r, *c, &self.data)),
            _ => Err(Error::Shape {
                expected: "order 2".into(),
                got: self.shape.clone(),
            }),
        }
    }

    /// Column-vector view: order-1 hypermatrices only.
    pub fn to_column(&self) -> Result<RealMatrix> {
        match self.shape.as_slice() {
            [n] => Ok(RealMatrix::from_column_slice(*n, 1, &self.data)),
            _ => Err(Error::Shape {
                expected: "order 1".into(),
                got: self.shape.clone(),
            }),
        }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Hypermatrix {
        Hypermatrix {
            shape: self.shape.clone(),
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `self·a + other·b`; shapes must agree.
    pub fn lin_comb(&self, a: f64, other: &Hypermatrix, b: f64) -> Result<Hypermatrix> {
        if self.shape != other.shape {
            return Err(Error::Shape {
                expected: format!("{:?}", self.shape),
                got: other.shape.clone(),
            });
        }
        Ok(Hypermatrix {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest absolute entrywise difference, or `None` if shapes differ.
    pub fn max_abs_diff(&self, other: &Hypermatrix) -> Option<f64> {
        (self.shape == other.shape).then(|| {
            self.data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        })
    }

    /// Same shape and every entry within `tol` (absolute).
    pub fn approx_eq(&self, other: &Hypermatrix, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }
}

/// `(X₁,…,X_d)*A`.
pub fn multilinear_apply(mats: &[RealMatrix], a: &Hypermatrix) -> Result<Hypermatrix> {
    a.multilinear(mats)
}

/// Column-stacking vectorization.
pub fn vec(m: &RealMatrix) -> Hypermatrix {
    Hypermatrix {
        shape: vec![m.nrows() * m.ncols()],
        data: m.as_slice().to_vec(),
    }
}

/// Kronecker product `X ⊗ Y`.
pub fn kron(x: &RealMatrix, y: &RealMatrix) -> RealMatrix {
    x.kronecker(y)
}
