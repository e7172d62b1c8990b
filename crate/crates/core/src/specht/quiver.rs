//! Quiver representations and their isometry test via cycle traces.
//!
//! An arrow `α: u → v` carries a `d_v × d_u` matrix. A cycle is a sequence
//! of arrows `(α₁, …, α_l)` with `source(αᵢ) = target(αᵢ₊₁)` cyclically, so
//! that `A_{α₁} A_{α₂} ⋯ A_{α_l}` is defined and square.

use rayon::prelude::*;
use serde::Serialize;

use super::trace::{traces_agree, word_trace, Witness};
use super::words::{min_rotation, reverse_with, Word};
use crate::error::{Error, Result};
use crate::hypermatrix::RealMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    dims: Vec<usize>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// `dims[v]` is the space dimension at vertex `v`; a vertex of dimension
    /// 0 may not carry arrows.
    pub fn new(dims: Vec<usize>, arrows: Vec<Arrow>) -> Result<Self> {
        for a in &arrows {
            if a.source >= dims.len() || a.target >= dims.len() {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} joins a vertex outside 1..={}",
                    a.label,
                    dims.len()
                )));
            }
            if dims[a.source] == 0 || dims[a.target] == 0 {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} touches a zero-dimensional vertex",
                    a.label
                )));
            }
        }
        Ok(Self { dims, arrows })
    }

    /// Convenience constructor labelling arrows `a1, a2, …`.
    pub fn from_edges(dims: Vec<usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let arrows = edges
            .iter()
            .enumerate()
            .map(|(i, &(source, target))| Arrow {
                source,
                target,
                label: format!("a{}", i + 1),
            })
            .collect();
        Self::new(dims, arrows)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.len()
    }

    /// Largest number of parallel arrows between an ordered vertex pair.
    pub fn max_multiplicity(&self) -> usize {
        let mut counts = std::collections::HashMap::new();
        for a in &self.arrows {
            *counts.entry((a.source, a.target)).or_insert(0usize) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }
}

/// The doubled quiver: arrows `0..n` as given, then `α*: v → u` at index
/// `n + i` for each `αᵢ: u → v`.
pub fn quiver_double(q: &Quiver) -> Quiver {
    let stars = q.arrows.iter().map(|a| Arrow {
        source: a.target,
        target: a.source,
        label: format!("{}*", a.label),
    });
    Quiver {
        dims: q.dims.clone(),
        arrows: q.arrows.iter().cloned().chain(stars).collect(),
    }
}

/// Index of `α*` in the doubled quiver of a quiver with `n` arrows.
fn star_map(n: usize) -> Vec<usize> {
    (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect()
}

fn is_cycle(q: &Quiver, w: &[usize]) -> bool {
    let l = w.len();
    (0..l).all(|i| q.arrows[w[i]].source == q.arrows[w[(i + 1) % l]].target)
}

/// Closed walks of exactly `len` arrows, one per rotation class, as their
/// least rotation, in lexicographic order.
fn cycles_of_length(q: &Quiver, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(len);
    for start in 0..q.arrows.len() {
        path.push(start);
        extend_walk(q, len, &mut path, &mut out);
        path.pop();
    }
    out
}

fn extend_walk(q: &Quiver, len: usize, path: &mut Vec<usize>, out: &mut Vec<Word>) {
    let last = *path.last().expect("walk has a first arrow");
    if path.len() == len {
        if q.arrows[last].source == q.arrows[path[0]].target && min_rotation(path) == *path {
            out.push(Word::new(path.clone()));
        }
        return;
    }
    // only walks whose first arrow is minimal can be least rotations
    for next in path[0]..q.arrows.len() {
        if q.arrows[last].source == q.arrows[next].target {
            path.push(next);
            extend_walk(q, len, path, out);
            path.pop();
        }
    }
}

/// Oriented cycles of length `1..=max_len`, canonical up to starting arrow.
pub fn enumerate_cycles(q: &Quiver, max_len: usize) -> Vec<Word> {
    (1..=max_len).flat_map(|l| cycles_of_length(q, l)).collect()
}

/// Smallest `r ≥ 1` with `r(r+1)/2 ≥ m`.
pub fn triangular_root(m: usize) -> usize {
    (1..).find(|r| r * (r + 1) / 2 >= m).expect("unbounded search")
}

/// Sufficient cycle length `((r+2)·Σd)²`, with `r` from the largest arrow
/// multiplicity and Specht bound `φ(n) = n²`.
pub fn word_bound_quiver(q: &Quiver) -> u64 {
    let r = triangular_root(q.max_multiplicity()) as u64;
    let total: u64 = q.dims.iter().map(|&d| d as u64).sum();
    ((r + 2) * total).pow(2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuiverRep {
    quiver: Quiver,
    mats: Vec<RealMatrix>,
}

impl QuiverRep {
    pub fn new(quiver: Quiver, mats: Vec<RealMatrix>) -> Result<Self> {
        if mats.len() != quiver.arrows.len() {
            return Err(Error::InvalidQuiver(format!(
                "{} matrices for {} arrows",
                mats.len(),
                quiver.arrows.len()
            )));
        }
        for (a, m) in quiver.arrows.iter().zip(&mats) {
            let want = (quiver.dims[a.target], quiver.dims[a.source]);
            if m.shape() != want {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.label,
                    want.0,
                    want.1,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self { quiver, mats })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn matrices(&self) -> &[RealMatrix] {
        &self.mats
    }

    /// Representation of the doubled quiver: `A_{α*} = A_αᵗ`.
    pub fn doubled(&self) -> QuiverRep {
        let mats = self
            .mats
            .iter()
            .cloned()
            .chain(self.mats.iter().map(|m| m.transpose()))
            .collect();
        QuiverRep {
            quiver: quiver_double(&self.quiver),
            mats,
        }
    }

    /// `A_α ↦ O_{target} A_α O_{source}ᵗ`.
    pub fn conjugate(&self, orthogonals: &[RealMatrix]) -> Result<QuiverRep> {
        if orthogonals.len() != self.quiver.vertex_count() {
            return Err(Error::Arity {
                expected: self.quiver.vertex_count(),
                got: orthogonals.len(),
            });
        }
        let mats = self
            .quiver
            .arrows
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| &orthogonals[a.target] * m * orthogonals[a.source].transpose())
            .collect();
        QuiverRep::new(self.quiver.clone(), mats)
    }

    /// `trace(A_{α₁} ⋯ A_{α_l})` for a cycle of this quiver.
    pub fn cycle_trace(&self, cycle: &[usize]) -> Result<f64> {
        if cycle.is_empty() || cycle.iter().any(|&a| a >= self.mats.len()) || !is_cycle(&self.quiver, cycle) {
            return Err(Error::InvalidQuiver(format!("{cycle:?} is not an oriented cycle")));
        }
        Ok(word_trace(&self.mats, cycle))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleOutcome {
    pub isometric: bool,
    pub depth: usize,
    pub bound: u64,
    pub cycles_checked: usize,
    pub witness: Option<Witness>,
}

/// Compares cycle traces of the doubled representations over every cycle of
/// length `≤ min(max_len, bound)`. A cycle and its reversed starred image
/// have equal traces, so only one of each pair is evaluated.
pub fn quiver_isometric(a: &QuiverRep, b: &QuiverRep, max_len: usize, tol: f64) -> Result<CycleOutcome> {
    if a.quiver != b.quiver {
        return Err(Error::QuiverMismatch("representations live on different quivers".into()));
    }
    if max_len == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::Unsupported("cycle length and tolerance must be positive".into()));
    }
    let bound = word_bound_quiver(&a.quiver);
    let depth = (max_len as u64).min(bound) as usize;
    let (da, db) = (a.doubled(), b.doubled());
    let stars = star_map(a.mats.len());
    let norms = |r: &QuiverRep| -> Vec<f64> { r.mats.iter().map(|m| m.norm()).collect() };
    let (na, nb) = (norms(&da), norms(&db));

    let mut checked = 0;
    for len in 1..=depth {
        let reps: Vec<Word> = cycles_of_length(&da.quiver, len)
            .into_iter()
            .filter(|w| *w.letters() <= *min_rotation(&reverse_with(w.letters(), &stars)))
            .collect();
        checked += reps.len();
        let found = reps
            .par_iter()
            .map(|w| {
                let c = w.letters();
                let (lhs, rhs) = (word_trace(&da.mats, c), word_trace(&db.mats, c));
                let scale = c
                    .iter()
                    .map(|&i| na[i])
                    .product::<f64>()
                    .max(c.iter().map(|&i| nb[i]).product::<f64>());
                (!traces_agree(lhs, rhs, scale, tol)).then(|| Witness {
                    word: c.to_vec(),
                    lhs,
                    rhs,
                })
            })
            .find_first(|r| r.is_some());
        if let Some(witness) = found.flatten() {
            return Ok(CycleOutcome {
                isometric: false,
                depth,
                bound,
                cycles_checked: checked,
                witness: Some(witness),
            });
        }
    }
    Ok(CycleOutcome {
        isometric: true,
        depth,
        bound,
        cycles_checked: checked,
        witness: None,
    })
}
