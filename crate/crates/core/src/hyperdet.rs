//! Cayley hyperdeterminants of 2×2×2 and 3×3×3 hypermatrices.
//!
//! `det222` is the classical degree-4 quartic. `det333` follows Schläfli: the
//! mode-3 slices `A₀, A₁, A₂` define the ternary cubic
//! `F(x) = det(x₀A₀ + x₁A₁ + x₂A₂)`, and the hyperdeterminant is (up to a fixed
//! constant) the discriminant of `F`, a polynomial of degree 12 in the cubic's
//! coefficients and hence degree 36 in the entries of `A`.
//!
//! The discriminant is assembled from the cubic's Aronhold invariants `S`
//! (degree 4) and `T` (degree 6) as `Δ = T² − 64·S³`. The invariants are
//! evaluated as the symbolic bracket expressions
//! `S ∝ (abc)(abd)(acd)(bcd)` and `T ∝ (abc)(abd)(ace)(bcf)(def)²`, i.e. as
//! contractions of copies of the symmetric coefficient tensor with Levi-Civita
//! tensors, and scaled so that the Hesse form `x³ + y³ + z³ + 6m·xyz` has
//! `S = m⁴ − m`, `T = 1 − 20m³ − 8m⁶` and therefore `Δ = (1 + 8m³)³`.

use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;

/// Symmetric coefficient tensor `f` of a ternary cubic
/// `F(x) = Σ_{ijk} f[i][j][k]·xᵢxⱼx_k`.
pub type TernaryCubic = [[[f64; 3]; 3]; 3];

fn expect_shape(a: &Hypermatrix, n: usize) -> Result<()> {
    if a.shape() != [n, n, n] {
        return Err(Error::Shape {
            expected: format!("{n}x{n}x{n}"),
            got: a.shape().to_vec(),
        });
    }
    Ok(())
}

/// Cayley's hyperdeterminant of a 2×2×2 hypermatrix.
pub fn det222(a: &Hypermatrix) -> Result<f64> {
    expect_shape(a, 2)?;
    let e = |i: usize, j: usize, k: usize| a.get(&[i, j, k]);
    let (a000, a001, a010, a011) = (e(0, 0, 0), e(0, 0, 1), e(0, 1, 0), e(0, 1, 1));
    let (a100, a101, a110, a111) = (e(1, 0, 0), e(1, 0, 1), e(1, 1, 0), e(1, 1, 1));

    let squares = (a000 * a111).powi(2)
        + (a001 * a110).powi(2)
        + (a010 * a101).powi(2)
        + (a100 * a011).powi(2);
    let cross = a000 * a111 * a001 * a110
        + a000 * a111 * a010 * a101
        + a000 * a111 * a100 * a011
        + a001 * a110 * a010 * a101
        + a001 * a110 * a100 * a011
        + a010 * a101 * a100 * a011;
    let quads = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111;
    Ok(squares - 2.0 * cross + 4.0 * quads)
}

const PERMS3: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
    ([1, 0, 2], -1.0),
];

/// Coefficient tensor of `det(x₀A₀ + x₁A₁ + x₂A₂)` where `A_k[i][j] = A[i,j,k]`.
///
/// Expanded exactly over the six permutations of the Leibniz formula and then
/// symmetrized.
pub fn slice_cubic(a: &Hypermatrix) -> Result<TernaryCubic> {
    expect_shape(a, 3)?;
    // raw[k0][k1][k2] = Σ_σ sgn σ · A[0,σ0,k0]·A[1,σ1,k1]·A[2,σ2,k2]
    let mut raw = [[[0.0; 3]; 3]; 3];
    for (p, sign) in PERMS3 {
        for (k0, plane) in raw.iter_mut().enumerate() {
            let x = sign * a.get(&[0, p[0], k0]);
            for (k1, row) in plane.iter_mut().enumerate() {
                let y = x * a.get(&[1, p[1], k1]);
                for (k2, v) in row.iter_mut().enumerate() {
                    *v += y * a.get(&[2, p[2], k2]);
                }
            }
        }
    }
    let mut f = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let idx = [i, j, k];
                f[i][j][k] = PERMS3
                    .iter()
                    .map(|(p, _)| raw[idx[p[0]]][idx[p[1]]][idx[p[2]]])
                    .sum::<f64>()
                    / 6.0;
            }
        }
    }
    Ok(f)
}

/// A dense tensor over index labels, every index of extent 3.
/// The first label varies fastest.
#[derive(Clone, Debug)]
struct Labeled {
    labels: Vec<u8>,
    data: Vec<f64>,
}

impl Labeled {
    fn cubic(f: &TernaryCubic, labels: [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(27);
        for k in 0..3 {
            for j in 0..3 {
                for i in 0..3 {
                    data.push(f[i][j][k]);
                }
            }
        }
        Self { labels: labels.to_vec(), data }
    }

    fn epsilon(labels: [u8; 3]) -> Self {
        let mut data = vec![0.0; 27];
        for (p, sign) in PERMS3 {
            data[p[0] + 3 * p[1] + 9 * p[2]] = sign;
        }
        Self { labels: labels.to_vec(), data }
    }

    /// Sums over the labels shared by both factors.
    fn contract(&self, other: &Labeled) -> Labeled {
        let shared: Vec<u8> = self.labels.iter().copied().filter(|l| other.labels.contains(l)).collect();
        let out: Vec<u8> = self
            .labels
            .iter()
            .chain(&other.labels)
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let all: Vec<u8> = out.iter().chain(&shared).copied().collect();
        let stride_in = |labels: &[u8]| -> Vec<usize> {
            all.iter()
                .map(|l| labels.iter().position(|m| m == l).map_or(0, |p| 3usize.pow(p as u32)))
                .collect()
        };
        let (sa, sb) = (stride_in(&self.labels), stride_in(&other.labels));
        let out_len = 3usize.pow(out.len() as u32);
        let mut data = vec![0.0; out_len];
        let mut idx = vec![0usize; all.len()];
        let (mut oa, mut ob, mut oo) = (0usize, 0usize, 0usize);
        loop {
            data[oo] += self.data[oa] * other.data[ob];
            // odometer over all labels, maintaining the three offsets
            let mut p = 0;
            loop {
                if p == all.len() {
                    return Labeled { labels: out, data };
                }
                idx[p] += 1;
                oa += sa[p];
                ob += sb[p];
                if p < out.len() {
                    oo += 3usize.pow(p as u32);
                }
                if idx[p] < 3 {
                    break;
                }
                oa -= 3 * sa[p];
                ob -= 3 * sb[p];
                if p < out.len() {
                    oo -= 3 * 3usize.pow(p as u32);
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }
}

/// Contracts a closed network, greedily merging the pair with the smallest
/// intermediate.
fn contract_network(mut factors: Vec<Labeled>) -> f64 {
    while factors.len() > 1 {
        let mut best = (usize::MAX, 0, 1);
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let shared = factors[i].labels.iter().filter(|l| factors[j].labels.contains(l)).count();
                if shared == 0 {
                    continue;
                }
                let size = factors[i].labels.len() + factors[j].labels.len() - 2 * shared;
                if size < best.0 {
                    best = (size, i, j);
                }
            }
        }
        let (_, i, j) = best;
        let b = factors.swap_remove(j);
        let a = factors.swap_remove(i);
        factors.push(a.contract(&b));
    }
    let last = &factors[0];
    debug_assert!(last.labels.is_empty());
    last.data[0]
}

fn bracket_network(f: &TernaryCubic, cubics: &[[u8; 3]], brackets: &[[u8; 3]]) -> f64 {
    let factors = cubics
        .iter()
        .map(|&l| Labeled::cubic(f, l))
        .chain(brackets.iter().map(|&l| Labeled::epsilon(l)))
        .collect();
    contract_network(factors)
}

/// Degree-4 Aronhold invariant, normalized to `m⁴ − m` on the Hesse form.
pub fn aronhold_s(f: &TernaryCubic) -> f64 {
    // symbols a,b,c,d; bracket slots (abc)(abd)(acd)(bcd)
    let raw = bracket_network(
        f,
        &[[0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11]],
        &[[0, 3, 6], [1, 4, 9], [2, 7, 10], [5, 8, 11]],
    );
    raw / 24.0
}

/// Degree-6 Aronhold invariant, normalized to `1 − 20m³ − 8m⁶` on the Hesse form.
pub fn aronhold_t(f: &TernaryCubic) -> f64 {
    // symbols a..f; bracket slots (abc)(abd)(ace)(bcf)(def)(def)
    let raw = bracket_network(
        f,
        &[
            [0, 1, 2],
            [3, 4, 5],
            [6, 7, 8],
            [9, 10, 11],
            [12, 13, 14],
            [15, 16, 17],
        ],
        &[
            [0, 3, 6],
            [1, 4, 9],
            [2, 7, 12],
            [5, 8, 15],
            [10, 13, 16],
            [11, 14, 17],
        ],
    );
    -raw / 6.0
}

/// Discriminant `T² − 64·S³` of a ternary cubic; zero iff the cubic curve is singular.
pub fn cubic_discriminant(f: &TernaryCubic) -> f64 {
    let s = aronhold_s(f);
    let t = aronhold_t(f);
    t * t - 64.0 * s * s * s
}

/// Hyperdeterminant of a 3×3×3 hypermatrix, as the discriminant of its slice cubic.
///
/// Homogeneous of degree 36; `det333((X₁,X₂,X₃)*A) = (det X₁·det X₂·det X₃)¹²·det333(A)`.
pub fn det333(a: &Hypermatrix) -> Result<f64> {
    Ok(cubic_discriminant(&slice_cubic(a)?))
}

/// Degree of the supported hyperdeterminant for an `n×n×n` shape.
pub fn degree(n: usize) -> Option<u32> {
    match n {
        2 => Some(4),
        3 => Some(36),
        _ => None,
    }
}

/// Dispatches on shape: 2×2×2 or 3×3×3.
pub fn hyperdet(a: &Hypermatrix) -> Result<f64> {
    match a.shape() {
        [2, 2, 2] => det222(a),
        [3, 3, 3] => det333(a),
        other => Err(Error::Shape {
            expected: "2x2x2 or 3x3x3".into(),
            got: other.to_vec(),
        }),
    }
}

/// `Det(A) / ‖A‖^m` with `m` the degree: a scale-free value for comparisons.
pub fn normalized_hyperdet(a: &Hypermatrix) -> Result<f64> {
    let value = hyperdet(a)?;
    let m = degree(a.shape()[0]).unwrap_or(1);
    let norm = a.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(value / norm.powi(m as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypermatrix::{for_each_index, RealMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_cube(rng: &mut ChaCha8Rng, n: usize) -> Hypermatrix {
        Hypermatrix::from_fn(vec![n, n, n], |_| rng.random_range(-1.0..1.0)).unwrap()
    }

    fn hesse(m: f64) -> TernaryCubic {
        let mut f = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            f[i][i][i] = 1.0;
        }
        for (p, _) in PERMS3 {
            f[p[0]][p[1]][p[2]] = m;
        }
        f
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    /// Discriminant of the binary quadratic det(x·A₀ + y·A₁) built from the
    /// mode-3 slices; equals the 2×2×2 hyperdeterminant.
    fn det222_via_quadratic(a: &Hypermatrix) -> f64 {
        let s = |k: usize| RealMatrix::from_fn(2, 2, |i, j| a.get(&[i, j, k]));
        let (a0, a1) = (s(0), s(1));
        let c_xx = a0.determinant();
        let c_yy = a1.determinant();
        let c_xy = a0[(0, 0)] * a1[(1, 1)] + a1[(0, 0)] * a0[(1, 1)]
            - a0[(0, 1)] * a1[(1, 0)]
            - a1[(0, 1)] * a0[(1, 0)];
        c_xy * c_xy - 4.0 * c_xx * c_yy
    }

    /// S evaluated as the plain 3¹²-term sum of the bracket expression.
    fn aronhold_s_brute(f: &TernaryCubic) -> f64 {
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            PERMS3.iter().find(|(p, _)| *p == [i, j, k]).map_or(0.0, |(_, s)| *s)
        };
        let mut total = 0.0;
        for_each_index(&[3; 12], |x| {
            let (a, b, c, d) = ([x[0], x[1], x[2]], [x[3], x[4], x[5]], [x[6], x[7], x[8]], [x[9], x[10], x[11]]);
            let e = eps(a[0], b[0], c[0]) * eps(a[1], b[1], d[0]) * eps(a[2], c[1], d[1]) * eps(b[2], c[2], d[2]);
            if e != 0.0 {
                total += e * f[a[0]][a[1]][a[2]] * f[b[0]][b[1]][b[2]] * f[c[0]][c[1]][c[2]] * f[d[0]][d[1]][d[2]];
            }
        });
        total / 24.0
    }

    #[test]
    fn det222_examples() {
        let z = Hypermatrix::zeros(vec![2, 2, 2]).unwrap();
        assert_eq!(det222(&z).unwrap(), 0.0);
        let ghz = Hypermatrix::from_fn(vec![2, 2, 2], |i| if i == [0, 0, 0] || i == [1, 1, 1] { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(det222(&ghz).unwrap(), 1.0);
        let w = Hypermatrix::from_fn(vec![2, 2, 2], |i| if i.iter().sum::<usize>() == 1 { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(det222(&w).unwrap(), 0.0);
    }

    #[test]
    fn w_tensor_has_a_nontrivial_critical_point() {
        // f(x,y,z) = x₀y₀z₁ + x₀y₁z₀ + x₁y₀z₀; grid search for a unit critical point
        let grad = |x: [f64; 2], y: [f64; 2], z: [f64; 2]| {
            [
                y[0] * z[1] + y[1] * z[0],
                y[0] * z[0],
                x[0] * z[1] + x[1] * z[0],
                x[0] * z[0],
                x[0] * y[1] + x[1] * y[0],
                x[0] * y[0],
            ]
        };
        let dirs: Vec<[f64; 2]> = (0..16)
            .map(|t| {
                let th = std::f64::consts::PI * t as f64 / 16.0;
                [th.cos(), th.sin()]
            })
            .collect();
        let found = dirs.iter().any(|&x| {
            dirs.iter()
                .any(|&y| dirs.iter().any(|&z| grad(x, y, z).iter().all(|g| g.abs() < 1e-12)))
        });
        assert!(found);
    }

    #[test]
    fn det222_matches_slice_quadratic_discriminant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = rand_cube(&mut rng, 2);
            let d = det222(&a).unwrap();
            assert!((d - det222_via_quadratic(&a)).abs() < 1e-13);
        }
    }

    #[test]
    fn det222_is_quartic() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = rand_cube(&mut rng, 2);
        for lam in [2.0, 0.5, -3.0] {
            let lhs = det222(&a.scale(lam)).unwrap();
            assert!(rel(lhs, lam.powi(4) * det222(&a).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn det222_transformation_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = rand_cube(&mut rng, 2);
            let xs: Vec<_> = (0..3).map(|_| RealMatrix::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0))).collect();
            let factor: f64 = xs.iter().map(|x| x.determinant()).product();
            let lhs = det222(&a.multilinear(&xs).unwrap()).unwrap();
            assert!(rel(lhs, factor.powi(2) * det222(&a).unwrap()) < 1e-8);
        }
    }

    #[test]
    fn hesse_pencil_invariants() {
        for m in [0.0, 0.3, -0.7, 1.1, -0.5] {
            let f = hesse(m);
            let (s, t) = (aronhold_s(&f), aronhold_t(&f));
            assert!((s - (m.powi(4) - m)).abs() < 1e-12, "S at m={m}: {s}");
            assert!((t - (1.0 - 20.0 * m.powi(3) - 8.0 * m.powi(6))).abs() < 1e-12, "T at m={m}: {t}");
            let disc = cubic_discriminant(&f);
            assert!((disc - (1.0 + 8.0 * m.powi(3)).powi(3)).abs() < 1e-10);
        }
        // x³+y³+z³−3xyz factors into lines: singular
        assert!(cubic_discriminant(&hesse(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn contraction_matches_brute_force_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let a = rand_cube(&mut rng, 3);
        let f = slice_cubic(&a).unwrap();
        assert!(rel(aronhold_s(&f), aronhold_s_brute(&f)) < 1e-12);
    }

    #[test]
    fn slice_cubic_evaluates_the_slice_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = rand_cube(&mut rng, 3);
        let f = slice_cubic(&a).unwrap();
        for _ in 0..5 {
            let x: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let m = RealMatrix::from_fn(3, 3, |i, j| (0..3).map(|k| x[k] * a.get(&[i, j, k])).sum());
            let mut poly = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        poly += f[i][j][k] * x[i] * x[j] * x[k];
                    }
                }
            }
            assert!((poly - m.determinant()).abs() < 1e-13);
        }
    }

    #[test]
    fn det333_degenerate_cases() {
        let z = Hypermatrix::zeros(vec![3, 3, 3]).unwrap();
        assert_eq!(det333(&z).unwrap(), 0.0);
        let e1 = Hypermatrix::from_fn(vec![3, 3, 3], |i| if i == [0, 0, 0] { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(det333(&e1).unwrap(), 0.0);
    }

    #[test]
    fn det333_of_vector_matrix_outer_product_vanishes() {
        // v∘M has the critical point x ⊥ v, yᵗMz = 0
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10 {
            let v = Hypermatrix::from_fn(vec![3], |_| rng.random_range(-1.0..1.0)).unwrap();
            let m = Hypermatrix::from_fn(vec![3, 3], |_| rng.random_range(-1.0..1.0)).unwrap();
            assert!(normalized_hyperdet(&v.outer(&m)).unwrap().abs() < 1e-12);
            assert!(normalized_hyperdet(&m.outer(&v)).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn det333_transformation_law_exponent_twelve() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = rand_cube(&mut rng, 3);
        let mut x = RealMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let d = x.determinant();
        x.row_mut(0).scale_mut(2.0 / d);
        assert!((x.determinant() - 2.0).abs() < 1e-12);
        let i3 = RealMatrix::identity(3, 3);
        let lhs = det333(&a.multilinear(&[x, i3.clone(), i3]).unwrap()).unwrap();
        assert!(rel(lhs / det333(&a).unwrap(), 4096.0) < 1e-6);
    }

    #[test]
    fn det333_homogeneous_of_degree_36() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let a = rand_cube(&mut rng, 3);
        let base = det333(&a).unwrap();
        for lam in [2.0f64, 0.5] {
            assert!(rel(det333(&a.scale(lam)).unwrap(), lam.powi(36) * base) < 1e-6);
        }
    }

    #[test]
    fn shape_errors() {
        let a = Hypermatrix::zeros(vec![2, 2, 3]).unwrap();
        assert!(det222(&a).is_err());
        assert!(det333(&a).is_err());
        assert!(hyperdet(&a).is_err());
    }
}
