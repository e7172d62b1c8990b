use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::ComplexMatrix;

/// Orthonormal generalized Gell-Mann basis of traceless Hermitian `d×d`
/// matrices, `Tr(λ_a λ_b) = δ_ab`.
///
/// Order: the symmetric family `(E_jk + E_kj)/√2`, then the antisymmetric
/// family `−i(E_jk − E_kj)/√2`, each over `j < k` in lexicographic order, then
/// the diagonal family `(Σ_{l≤j} E_ll − j·E_{j+1,j+1})/√(j(j+1))` for
/// `j = 1, …, d−1`. For `d = 2` this is `(σx, σy, σz)/√2`.
#[derive(Clone, Debug)]
pub struct GgmBasis {
    d: usize,
    mats: Vec<ComplexMatrix>,
}

impl GgmBasis {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = || DMatrix::<Complex64>::zeros(d, d);
        let mut mats = Vec::with_capacity(d * d - 1);
        for j in 0..d {
            for k in j + 1..d {
                let mut m = zero();
                m[(j, k)] = Complex64::new(s, 0.0);
                m[(k, j)] = Complex64::new(s, 0.0);
                mats.push(m);
            }
        }
        for j in 0..d {
            for k in j + 1..d {
                let mut m = zero();
                m[(j, k)] = Complex64::new(0.0, -s);
                m[(k, j)] = Complex64::new(0.0, s);
                mats.push(m);
            }
        }
        for j in 1..d {
            let norm = ((j * (j + 1)) as f64).sqrt();
            let mut m = zero();
            for l in 0..j {
                m[(l, l)] = Complex64::new(1.0 / norm, 0.0);
            }
            m[(j, j)] = Complex64::new(-(j as f64) / norm, 0.0);
            mats.push(m);
        }
        Ok(Self { d, mats })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of basis elements, `d² − 1`.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn get(&self, a: usize) -> &ComplexMatrix {
        &self.mats[a]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.mats.iter()
    }
}

/// `ggm_basis(d)`.
pub fn ggm_basis(d: usize) -> Result<GgmBasis> {
    GgmBasis::new(d)
}
