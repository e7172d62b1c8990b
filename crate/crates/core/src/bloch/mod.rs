//! Density matrices and their hypermatrix (Fano) representation.
//!
//! A state on `C^{d₁} ⊗ … ⊗ C^{d_n}` is written
//!
//! ```text
//! ρ = (1/Πd) · ( I + Σ_S Σ_α T_S[α] · λ_{α₁}^{(j₁)} ⋯ λ_{α_m}^{(j_m)} )
//! ```
//!
//! with `S = {j₁ < … < j_m}` ranging over nonempty subsets of subsystems and
//! `λ` the orthonormal generalized Gell-Mann basis ([`GgmBasis`]). With that
//! basis the coefficients are `T_S[α] = c_S · Tr(ρ · λ…)` where
//! `c_S = Π_{k∈S} d_k`; this scaling makes [`reconstruct`] the exact inverse of
//! [`extract_rep`]. Equivalence verdicts do not depend on it because the same
//! per-subset factor multiplies both states.
//!
//! Subsystem order follows the Kronecker product: subsystem 0 is the most
//! significant digit of a basis index.

mod ggm;
pub mod random;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypermatrix::{for_each_index, Hypermatrix, RealMatrix};

pub use ggm::{ggm_basis, GgmBasis};
pub use random::{random_density, random_lu_pair, random_lu_pair_with_rank, random_su, LuPair};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest imaginary part tolerated in a Fano coefficient (before `c_S` scaling).
pub const IMAG_TOL: f64 = 1e-10;

/// Measured deviations of a candidate density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub hermitian_deviation: f64,
    pub trace: Complex64,
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn measure(mat: &ComplexMatrix) -> Self {
        let hermitian_deviation = max_abs(&(mat - mat.adjoint()));
        let sym = (mat + mat.adjoint()).scale(0.5);
        let min_eigenvalue = sym
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        Self {
            hermitian_deviation,
            trace: mat.trace(),
            min_eigenvalue,
        }
    }

    /// Every violated condition, in a fixed order.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        if self.hermitian_deviation > HERMITIAN_TOL {
            out.push(Error::NotHermitian(self.hermitian_deviation));
        }
        let deviation = (self.trace - Complex64::new(1.0, 0.0)).norm();
        if deviation > TRACE_TOL {
            out.push(Error::Trace {
                trace: self.trace.re,
                deviation,
            });
        }
        if self.min_eigenvalue < -PSD_TOL {
            out.push(Error::NotPsd(self.min_eigenvalue));
        }
        out
    }
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A validated density matrix with its subsystem dimensions.
///
/// Hermitian within [`HERMITIAN_TOL`] (and symmetrized on construction), unit
/// trace within [`TRACE_TOL`], smallest eigenvalue at least `−`[`PSD_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, mat: ComplexMatrix) -> Result<Self> {
        check_dims(&dims, &mat)?;
        let diag = Diagnostics::measure(&mat);
        if let Some(err) = diag.violations().into_iter().next() {
            return Err(err);
        }
        let mat = (&mat + mat.adjoint()).scale(0.5);
        Ok(Self { dims, mat })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn from_pure(dims: Vec<usize>, psi: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        Self::new(dims, &v * v.adjoint())
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        let m = ComplexMatrix::identity(n, n).scale(1.0 / n as f64);
        Self::new(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn size(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            dims,
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.mat.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.mat.shape() != other.mat.shape() {
            return f64::INFINITY;
        }
        max_abs(&(&self.mat - &other.mat))
    }
}

fn check_dims(dims: &[usize], mat: &ComplexMatrix) -> Result<()> {
    if mat.nrows() != mat.ncols() {
        return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::DimensionTooSmall(d));
    }
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != mat.nrows() {
        return Err(Error::DimsProduct {
            dims: dims.to_vec(),
            product,
            size: mat.nrows(),
        });
    }
    Ok(())
}

/// A nonempty set of 0-based subsystem indices, kept sorted.
///
/// Ordered by size, then lexicographically; displayed 1-based as a digit
/// string (`{0,1}` → `"12"`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subset(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(&k)
    }

    /// All nonempty subsets of `0..n`, in [`Subset`] order.
    pub fn all_nonempty(n: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (1u32..(1 << n))
            .map(|mask| Subset((0..n).filter(|&k| mask & (1 << k) != 0).collect()))
            .collect();
        out.sort();
        out
    }

    /// Parses the 1-based digit form, e.g. `"13"`.
    pub fn parse(s: &str) -> Result<Self> {
        let members: Option<Vec<usize>> = s
            .chars()
            .map(|c| c.to_digit(10).filter(|&d| d >= 1).map(|d| d as usize - 1))
            .collect();
        match members {
            Some(m) if !m.is_empty() => {
                let sub = Subset::new(m.clone());
                if sub.len() != m.len() {
                    return Err(Error::Parse(format!("repeated subsystem in subset key {s:?}")));
                }
                Ok(sub)
            }
            _ => Err(Error::Parse(format!("invalid subset key {s:?}"))),
        }
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.0 {
            write!(f, "{}", k + 1)?;
        }
        Ok(())
    }
}

/// The hypermatrix representation: one real `T_S` of shape
/// `(δ_{j₁}, …, δ_{j_m})`, `δ_k = d_k² − 1`, per nonempty subset `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypermatrixRep {
    dims: Vec<usize>,
    tensors: BTreeMap<Subset, Hypermatrix>,
}

impl HypermatrixRep {
    /// Checks that every nonempty subset is present with the right shape.
    pub fn new(dims: Vec<usize>, tensors: BTreeMap<Subset, Hypermatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape {
                expected: "at least one subsystem".into(),
                got: dims,
            });
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::DimensionTooSmall(d));
        }
        let subsets = Subset::all_nonempty(dims.len());
        if tensors.len() != subsets.len() {
            return Err(Error::Shape {
                expected: format!("{} tensors, one per nonempty subset", subsets.len()),
                got: vec![tensors.len()],
            });
        }
        for s in &subsets {
            let want: Vec<usize> = s.members().iter().map(|&k| dims[k] * dims[k] - 1).collect();
            match tensors.get(s) {
                Some(t) if t.shape() == want.as_slice() => {}
                Some(t) => {
                    return Err(Error::Shape {
                        expected: format!("T_{s} of shape {want:?}"),
                        got: t.shape().to_vec(),
                    })
                }
                None => {
                    return Err(Error::Shape {
                        expected: format!("a tensor for subset {s}"),
                        got: vec![],
                    })
                }
            }
        }
        Ok(Self { dims, tensors })
    }

    /// All-zero representation (the maximally mixed state).
    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let tensors = Subset::all_nonempty(dims.len())
            .into_iter()
            .map(|s| {
                let shape = s.members().iter().map(|&k| dims[k] * dims[k] - 1).collect();
                Hypermatrix::zeros(shape).map(|t| (s, t))
            })
            .collect::<Result<_>>()?;
        Self::new(dims, tensors)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    /// `δ_k = d_k² − 1` per subsystem.
    pub fn deltas(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d * d - 1).collect()
    }

    /// `T_S` for the 0-based subset `members`. Panics on an invalid subset.
    pub fn t(&self, members: &[usize]) -> &Hypermatrix {
        let s = Subset::new(members.to_vec());
        self.tensors
            .get(&s)
            .unwrap_or_else(|| panic!("no tensor for subset {s}"))
    }

    pub fn get(&self, s: &Subset) -> Option<&Hypermatrix> {
        self.tensors.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &Hypermatrix)> {
        self.tensors.iter()
    }

    /// Replaces one tensor; the shape must match.
    pub fn with_tensor(mut self, s: Subset, t: Hypermatrix) -> Result<Self> {
        match self.tensors.get(&s) {
            Some(old) if old.shape() == t.shape() => {
                self.tensors.insert(s, t);
                Ok(self)
            }
            _ => Err(Error::Shape {
                expected: format!("existing tensor shape for subset {s}"),
                got: t.shape().to_vec(),
            }),
        }
    }

    /// Representation of the partial trace over subsystem `k`: the tensors of
    /// subsets avoiding `k`, re-indexed. Coefficients carry over unchanged.
    pub fn partial_trace(&self, k: usize) -> Result<HypermatrixRep> {
        let n = self.subsystems();
        if k >= n || n < 2 {
            return Err(Error::SubsystemOutOfRange { index: k + 1, count: n });
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &d)| d)
            .collect();
        let tensors = self
            .tensors
            .iter()
            .filter(|(s, _)| !s.contains(k))
            .map(|(s, t)| {
                let shifted = s.members().iter().map(|&j| if j > k { j - 1 } else { j }).collect();
                (Subset::new(shifted), t.clone())
            })
            .collect();
        HypermatrixRep::new(dims, tensors)
    }

    /// Applies one matrix per subsystem to every tensor:
    /// `T_S ← (O_{j₁}, …, O_{j_m}) * T_S`.
    pub fn transport(&self, mats: &[RealMatrix]) -> Result<HypermatrixRep> {
        if mats.len() != self.subsystems() {
            return Err(Error::Arity {
                expected: self.subsystems(),
                got: mats.len(),
            });
        }
        let tensors = self
            .tensors
            .iter()
            .map(|(s, t)| {
                let ms: Vec<RealMatrix> = s.members().iter().map(|&k| mats[k].clone()).collect();
                t.multilinear(&ms).map(|t| (s.clone(), t))
            })
            .collect::<Result<_>>()?;
        Ok(HypermatrixRep {
            dims: self.dims.clone(),
            tensors,
        })
    }

    /// Largest entrywise difference over all tensors.
    pub fn max_abs_diff(&self, other: &HypermatrixRep) -> Option<f64> {
        if self.dims != other.dims {
            return None;
        }
        self.tensors
            .iter()
            .map(|(s, t)| other.tensors.get(s).and_then(|u| t.max_abs_diff(u)))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

/// Digits of a basis index, subsystem 0 most significant.
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn bases(dims: &[usize]) -> Result<Vec<GgmBasis>> {
    dims.iter().map(|&d| GgmBasis::new(d)).collect()
}

/// `Tr(ρ·Λ)` with `Λ = ⊗_k F_k`, `F_k = λ_{α_k}` for `k ∈ S`, identity otherwise.
fn local_expectation(
    mat: &ComplexMatrix,
    dims: &[usize],
    factors: &[Option<&ComplexMatrix>],
) -> Complex64 {
    let n = mat.nrows();
    let mut rd = vec![0usize; dims.len()];
    let mut cd = vec![0usize; dims.len()];
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..n {
        digits(r, dims, &mut rd);
        'col: for c in 0..n {
            digits(c, dims, &mut cd);
            // Λ[c, r]
            let mut w = Complex64::new(1.0, 0.0);
            for (k, f) in factors.iter().enumerate() {
                match f {
                    Some(m) => {
                        let e = m[(cd[k], rd[k])];
                        if e == Complex64::new(0.0, 0.0) {
                            continue 'col;
                        }
                        w *= e;
                    }
                    None => {
                        if cd[k] != rd[k] {
                            continue 'col;
                        }
                    }
                }
            }
            acc += mat[(r, c)] * w;
        }
    }
    acc
}

/// Fano coefficients `T_S[α] = c_S · Tr(ρ·λ_{α₁}^{(j₁)}⋯λ_{α_m}^{(j_m)})`.
pub fn extract_rep(rho: &DensityMatrix) -> Result<HypermatrixRep> {
    let dims = rho.dims();
    let basis = bases(dims)?;
    let mut tensors = BTreeMap::new();
    for s in Subset::all_nonempty(dims.len()) {
        let shape: Vec<usize> = s.members().iter().map(|&k| basis[k].len()).collect();
        let c_s: f64 = s.members().iter().map(|&k| dims[k] as f64).product();
        let mut data = Vec::with_capacity(shape.iter().product());
        let mut factors: Vec<Option<&ComplexMatrix>> = vec![None; dims.len()];
        let mut worst_imag = 0.0f64;
        for_each_index(&shape, |alpha| {
            for (pos, &k) in s.members().iter().enumerate() {
                factors[k] = Some(basis[k].get(alpha[pos]));
            }
            let v = local_expectation(rho.matrix(), dims, &factors);
            worst_imag = worst_imag.max(v.im.abs());
            data.push(c_s * v.re);
        });
        if worst_imag > IMAG_TOL {
            return Err(Error::NotHermitian(worst_imag));
        }
        tensors.insert(s, Hypermatrix::new(shape, data)?);
    }
    HypermatrixRep::new(dims.to_vec(), tensors)
}

/// The matrix `(1/Πd)(I + Σ_S Σ_α T_S[α]·Λ_α)` without validating it.
pub fn reconstruct_matrix(rep: &HypermatrixRep) -> Result<ComplexMatrix> {
    let dims = rep.dims();
    let basis = bases(dims)?;
    let n: usize = dims.iter().product();
    let mut acc = ComplexMatrix::identity(n, n);
    let mut rd = vec![0usize; dims.len()];
    let mut cd = vec![0usize; dims.len()];
    for (s, t) in rep.iter() {
        for_each_index(t.shape(), |alpha| {
            let coeff = t.get(alpha);
            if coeff == 0.0 {
                return;
            }
            for r in 0..n {
                digits(r, dims, &mut rd);
                'col: for c in 0..n {
                    digits(c, dims, &mut cd);
                    let mut w = Complex64::new(coeff, 0.0);
                    for k in 0..dims.len() {
                        match s.members().iter().position(|&j| j == k) {
                            Some(pos) => w *= basis[k].get(alpha[pos])[(rd[k], cd[k])],
                            None if rd[k] != cd[k] => continue 'col,
                            None => {}
                        }
                    }
                    acc[(r, c)] += w;
                }
            }
        });
    }
    Ok(acc.scale(1.0 / n as f64))
}

/// Inverse of [`extract_rep`]. Not every family of tensors is a state; a
/// non-PSD result is reported as a validation error.
pub fn reconstruct(rep: &HypermatrixRep) -> Result<DensityMatrix> {
    DensityMatrix::new(rep.dims().to_vec(), reconstruct_matrix(rep)?)
}

/// Partial trace over the 0-based subsystem `k`.
pub fn partial_trace(rho: &DensityMatrix, k: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if k >= dims.len() || dims.len() < 2 {
        return Err(Error::SubsystemOutOfRange {
            index: k + 1,
            count: dims.len(),
        });
    }
    let rest: Vec<usize> = dims.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &d)| d).collect();
    let m: usize = rest.iter().product();
    let mut out = ComplexMatrix::zeros(m, m);
    let n = rho.size();
    let mut rd = vec![0usize; dims.len()];
    let mut cd = vec![0usize; dims.len()];
    let reduced = |d: &[usize]| -> usize {
        d.iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .fold(0, |acc, (j, &x)| acc * dims[j] + x)
    };
    for r in 0..n {
        digits(r, dims, &mut rd);
        for c in 0..n {
            digits(c, dims, &mut cd);
            if rd[k] == cd[k] {
                out[(reduced(&rd), reduced(&cd))] += rho.matrix()[(r, c)];
            }
        }
    }
    DensityMatrix::new(rest, out)
}

fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - ComplexMatrix::identity(u.nrows(), u.ncols())))
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::NotSquare(u.nrows(), u.ncols()));
    }
    let dev = unitarity_deviation(u);
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// `(U₁⊗…⊗U_n) ρ (U₁⊗…⊗U_n)†`.
pub fn apply_local_unitaries(rho: &DensityMatrix, us: &[ComplexMatrix]) -> Result<DensityMatrix> {
    if us.len() != rho.subsystems() {
        return Err(Error::Arity {
            expected: rho.subsystems(),
            got: us.len(),
        });
    }
    for (k, (u, &d)) in us.iter().zip(rho.dims()).enumerate() {
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::ModeMismatch {
                mode: k + 1,
                expected: d,
                got: u.nrows(),
            });
        }
        check_unitary(u)?;
    }
    let full = us[1..].iter().fold(us[0].clone(), |acc, u| acc.kronecker(u));
    let out = &full * rho.matrix() * full.adjoint();
    DensityMatrix::new(rho.dims().to_vec(), out)
}

/// The real matrix `X` with `U λ_a U† = Σ_b X_ab λ_b`, i.e.
/// `X_ab = Re Tr(λ_b U λ_a U†)`. Orthogonal for unitary `U`; the coefficient
/// transport of ρ ↦ UρU† is `T ↦ Xᵗ T` on that subsystem.
pub fn induced_orthogonal(u: &ComplexMatrix, d: usize) -> Result<RealMatrix> {
    if u.nrows() != d {
        return Err(Error::Shape {
            expected: format!("{d}x{d}"),
            got: vec![u.nrows(), u.ncols()],
        });
    }
    check_unitary(u)?;
    let basis = GgmBasis::new(d)?;
    let n = basis.len();
    let conj: Vec<ComplexMatrix> = basis.iter().map(|l| u * l * u.adjoint()).collect();
    let mut x = RealMatrix::zeros(n, n);
    let mut worst_imag = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let v = (basis.get(b) * &conj[a]).trace();
            worst_imag = worst_imag.max(v.im.abs());
            x[(a, b)] = v.re;
        }
    }
    if worst_imag > IMAG_TOL {
        return Err(Error::NotHermitian(worst_imag));
    }
    Ok(x)
}

/// The per-subsystem coefficient transports `Oₖ = X(Uₖ)ᵗ`.
pub fn transport_orthogonals(us: &[ComplexMatrix]) -> Result<Vec<RealMatrix>> {
    us.iter()
        .map(|u| induced_orthogonal(u, u.nrows()).map(|x| x.transpose()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(vec![2, 2], &[c(s), c(0.0), c(0.0), c(s)]).unwrap()
    }

    fn ghz() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = vec![c(0.0); 8];
        psi[0] = c(s);
        psi[7] = c(s);
        DensityMatrix::from_pure(vec![2, 2, 2], &psi).unwrap()
    }

    #[test]
    fn subset_order_and_display() {
        let all = Subset::all_nonempty(3);
        let names: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["1", "2", "3", "12", "13", "23", "123"]);
        assert_eq!(Subset::parse("13").unwrap(), Subset::new(vec![0, 2]));
        assert!(Subset::parse("0").is_err());
        assert!(Subset::parse("11").is_err());
        assert!(Subset::parse("").is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = ComplexMatrix::identity(2, 2).scale(0.45);
        assert!(matches!(DensityMatrix::new(vec![2], m.clone()), Err(Error::Trace { .. })));
        m[(0, 0)] = c(0.55);
        m[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(vec![2], m.clone()), Err(Error::NotHermitian(_))));
        let neg = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.2), c(-0.2)]));
        assert!(matches!(DensityMatrix::new(vec![2], neg), Err(Error::NotPsd(_))));
        assert!(matches!(
            DensityMatrix::new(vec![2, 2], ComplexMatrix::identity(2, 2).scale(0.5)),
            Err(Error::DimsProduct { .. })
        ));
    }

    #[test]
    fn symmetrizes_small_asymmetry() {
        let mut m = ComplexMatrix::identity(2, 2).scale(0.5);
        m[(0, 1)] = Complex64::new(1e-12, 0.0);
        let rho = DensityMatrix::new(vec![2], m).unwrap();
        assert_eq!(rho.matrix()[(0, 1)], rho.matrix()[(1, 0)].conj());
    }

    #[test]
    fn maximally_mixed_has_zero_tensors() {
        for dims in [vec![2, 2], vec![2, 3], vec![2, 2, 2]] {
            let rep = extract_rep(&DensityMatrix::maximally_mixed(dims).unwrap()).unwrap();
            for (_, t) in rep.iter() {
                assert!(t.norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_state_correlation_tensor() {
        let rep = extract_rep(&bell()).unwrap();
        assert!(rep.t(&[0]).norm() < 1e-14);
        assert!(rep.t(&[1]).norm() < 1e-14);
        let t12 = rep.t(&[0, 1]).to_matrix().unwrap();
        let want = RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, -2.0, 2.0]));
        assert!((t12 - want).abs().max() < 1e-14);
    }

    #[test]
    fn zero_rep_reconstructs_maximally_mixed() {
        let rho = reconstruct(&HypermatrixRep::zeros(vec![2, 3]).unwrap()).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(vec![2, 3]).unwrap()) < 1e-15);
    }

    #[test]
    fn non_state_rep_is_rejected() {
        let rep = HypermatrixRep::zeros(vec![2, 2]).unwrap();
        let big = Hypermatrix::from_vector(&[0.0, 0.0, 5.0]).unwrap();
        let rep = rep.with_tensor(Subset::new(vec![0]), big).unwrap();
        assert!(matches!(reconstruct(&rep), Err(Error::NotPsd(_))));
    }

    #[test]
    fn ghz_partial_trace() {
        let r = partial_trace(&ghz(), 0).unwrap();
        let mut want = ComplexMatrix::zeros(4, 4);
        want[(0, 0)] = c(0.5);
        want[(3, 3)] = c(0.5);
        assert_eq!(r.dims(), &[2, 2]);
        assert!((r.matrix() - want).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = random_density(&[2], 1, None).unwrap();
        let bc = random_density(&[2, 3], 2, None).unwrap();
        let r = partial_trace(&a.tensor(&bc), 0).unwrap();
        assert!(r.max_abs_diff(&bc) < 1e-14);
        assert!((r.matrix().trace() - c(1.0)).norm() < 1e-14);
        let r2 = partial_trace(&a.tensor(&bc), 2).unwrap();
        assert_eq!(r2.dims(), &[2, 2]);
        assert!(partial_trace(&a.tensor(&bc), 3).is_err());
    }

    #[test]
    fn partial_trace_matches_rep_level_trace() {
        let rho = random_density(&[2, 3, 2], 3, None).unwrap();
        let rep = extract_rep(&rho).unwrap();
        for k in 0..3 {
            let direct = extract_rep(&partial_trace(&rho, k).unwrap()).unwrap();
            let via_rep = rep.partial_trace(k).unwrap();
            assert!(direct.max_abs_diff(&via_rep).unwrap() < 1e-12);
        }
    }

    #[test]
    fn identity_unitaries_are_a_no_op() {
        let rho = random_density(&[2, 3], 4, None).unwrap();
        let ids = vec![ComplexMatrix::identity(2, 2), ComplexMatrix::identity(3, 3)];
        assert!(apply_local_unitaries(&rho, &ids).unwrap().max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn unitary_conjugation_preserves_spectrum() {
        let rho = random_density(&[2, 3], 5, None).unwrap();
        let us = vec![random_su(2, 6), random_su(3, 7)];
        let out = apply_local_unitaries(&rho, &us).unwrap();
        for (a, b) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn non_unitary_factor_rejected() {
        let rho = random_density(&[2, 2], 8, None).unwrap();
        let bad = ComplexMatrix::identity(2, 2).scale(1.1);
        let err = apply_local_unitaries(&rho, &[bad.clone(), bad]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary(_)));
        let wrong_size = vec![ComplexMatrix::identity(2, 2), ComplexMatrix::identity(3, 3)];
        assert!(apply_local_unitaries(&rho, &wrong_size).is_err());
    }

    #[test]
    fn induced_orthogonal_of_identity() {
        for d in 2..5 {
            let x = induced_orthogonal(&ComplexMatrix::identity(d, d), d).unwrap();
            assert!((x - RealMatrix::identity(d * d - 1, d * d - 1)).abs().max() < 1e-14);
        }
    }

    #[test]
    fn z_rotation_induces_planar_rotation() {
        // U = diag(e^{-iθ/2}, e^{iθ/2}) rotates σx into cos θ σx + sin θ σy
        let th = 0.7f64;
        let u = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::from_polar(1.0, -th / 2.0),
            Complex64::from_polar(1.0, th / 2.0),
        ]));
        let x = induced_orthogonal(&u, 2).unwrap();
        let want = RealMatrix::from_row_slice(3, 3, &[th.cos(), th.sin(), 0.0, -th.sin(), th.cos(), 0.0, 0.0, 0.0, 1.0]);
        assert!((x - want).abs().max() < 1e-14);
    }

    #[test]
    fn su2_maps_to_so3() {
        for seed in 0..20 {
            let x = induced_orthogonal(&random_su(2, seed), 2).unwrap();
            assert!((x.transpose() * &x - RealMatrix::identity(3, 3)).abs().max() < 1e-10);
            assert!((x.determinant() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn coefficients_transport_under_local_unitaries() {
        let pair = random_lu_pair(&[2, 3], 9).unwrap();
        let rep = extract_rep(&pair.rho).unwrap();
        let rep_hat = extract_rep(&pair.rho_hat).unwrap();
        let os = transport_orthogonals(&pair.unitaries).unwrap();
        assert!(rep.transport(&os).unwrap().max_abs_diff(&rep_hat).unwrap() < 1e-10);
    }
}
