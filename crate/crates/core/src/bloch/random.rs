//! Seeded random unitaries and states.
//!
//! All generators take a `u64` seed and use ChaCha8, so outputs are
//! reproducible across platforms.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{apply_local_unitaries, ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};

fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed special unitary of size `d`.
pub fn random_su_with_rng<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(d, d, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / d as f64);
    q * root
}

pub fn random_su(d: usize, seed: u64) -> ComplexMatrix {
    random_su_with_rng(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Density matrix `GG†/Tr(GG†)` with `G` a `D × rank` Ginibre matrix
/// (`rank` defaults to full, giving the Hilbert–Schmidt measure).
pub fn random_density_with_rng<R: Rng>(
    dims: &[usize],
    rank: Option<usize>,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::DimensionTooSmall(d));
    }
    let n: usize = dims.iter().product();
    let k = rank.unwrap_or(n);
    if k == 0 || k > n {
        return Err(Error::Unsupported(format!("rank {k} for a {n}-dimensional state")));
    }
    let g = ginibre(n, k, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(dims.to_vec(), m.unscale(tr))
}

pub fn random_density(dims: &[usize], seed: u64, rank: Option<usize>) -> Result<DensityMatrix> {
    random_density_with_rng(dims, rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random normalized pure state vector.
pub fn random_pure_with_rng<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v = DVector::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v.iter().map(|z| z / norm).collect()
}

/// A state, local unitaries, and the conjugated state.
#[derive(Clone, Debug)]
pub struct LuPair {
    pub rho: DensityMatrix,
    pub unitaries: Vec<ComplexMatrix>,
    pub rho_hat: DensityMatrix,
}

pub fn random_lu_pair(dims: &[usize], seed: u64) -> Result<LuPair> {
    random_lu_pair_with_rank(dims, seed, None)
}

pub fn random_lu_pair_with_rank(dims: &[usize], seed: u64, rank: Option<usize>) -> Result<LuPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = random_density_with_rng(dims, rank, &mut rng)?;
    let unitaries: Vec<ComplexMatrix> = dims.iter().map(|&d| random_su_with_rng(d, &mut rng)).collect();
    let rho_hat = apply_local_unitaries(&rho, &unitaries)?;
    Ok(LuPair {
        rho,
        unitaries,
        rho_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su_is_special_unitary() {
        for d in 2..6 {
            let u = random_su(d, d as u64);
            let dev = (u.adjoint() * &u - ComplexMatrix::identity(d, d)).norm();
            assert!(dev < 1e-12);
            assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        assert_eq!(random_su(3, 11), random_su(3, 11));
        assert_ne!(random_su(3, 11), random_su(3, 12));
        let a = random_density(&[2, 2], 5, Some(2)).unwrap();
        let b = random_density(&[2, 2], 5, Some(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rank_is_respected() {
        let rho = random_density(&[2, 3], 3, Some(2)).unwrap();
        let nonzero = rho.eigenvalues().iter().filter(|&&e| e > 1e-10).count();
        assert_eq!(nonzero, 2);
        assert!(random_density(&[2, 2], 3, Some(5)).is_err());
        assert!(random_density(&[2, 2], 3, Some(0)).is_err());
    }

    #[test]
    fn pure_state_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = random_pure_with_rng(6, &mut rng);
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }
}
