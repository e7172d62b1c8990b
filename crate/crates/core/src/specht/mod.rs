//! Trace-identity tests for simultaneous orthogonal equivalence.
//!
//! Two families `(A₁,…,A_k)`, `(B₁,…,B_k)` of `m`-row real matrices satisfy
//! `Bᵢ = O Aᵢ P` for orthogonal `O`, `P` iff every word in the gram letters
//! `AᵢAⱼᵗ` has the same trace as the corresponding word in `BᵢBⱼᵗ`. The
//! sufficient word lengths are far beyond reach, so checks run to a chosen
//! depth: a failure is conclusive, a pass is evidence up to that depth.

pub mod quiver;
pub mod trace;
pub mod words;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypermatrix::RealMatrix;

pub use quiver::{
    enumerate_cycles, quiver_double, quiver_isometric, triangular_root, word_bound_quiver, Arrow, CycleOutcome,
    Quiver, QuiverRep,
};
pub use trace::{compare_alphabets, trace_identities_equal, Alphabet, TraceOptions, TraceOutcome, Witness};
pub use words::{enumerate_canonical_words, necklace_count, necklaces, Word};

/// Real matrices sharing a row count.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    members: Vec<RealMatrix>,
}

impl MatrixFamily {
    pub fn new(members: Vec<RealMatrix>) -> Result<Self> {
        if let Some(first) = members.first() {
            for (i, m) in members.iter().enumerate() {
                if m.nrows() != first.nrows() {
                    return Err(Error::RowMismatch {
                        member: i + 1,
                        expected: first.nrows(),
                        got: m.nrows(),
                    });
                }
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[RealMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.members.first().map_or(0, |m| m.nrows())
    }

    pub fn gram_alphabet(&self) -> Vec<RealMatrix> {
        gram_letters(&self.members, &[(0, self.members.len())])
    }
}

/// Letters `AᵢAⱼᵗ` for all ordered pairs, index `i·k + j`.
pub fn gram_alphabet(members: &[RealMatrix]) -> Result<Vec<RealMatrix>> {
    Ok(MatrixFamily::new(members.to_vec())?.gram_alphabet())
}

/// Ordered-pair letters within each block `[start, end)`, blocks in order.
/// Each `(j,i)` letter is stored as the exact transpose of `(i,j)`.
fn gram_letters(members: &[RealMatrix], blocks: &[(usize, usize)]) -> Vec<RealMatrix> {
    let mut out = Vec::new();
    for &(s, e) in blocks {
        let k = e - s;
        let mut block: Vec<Option<RealMatrix>> = vec![None; k * k];
        for i in 0..k {
            for j in 0..k {
                let letter = if j < i {
                    block[j * k + i].as_ref().expect("filled earlier").transpose()
                } else {
                    &members[s + i] * members[s + j].transpose()
                };
                block[i * k + j] = Some(letter);
            }
        }
        out.extend(block.into_iter().map(|m| m.expect("filled")));
    }
    out
}

fn gram_transpose_map(block_sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut offset = 0;
    for &k in block_sizes {
        for i in 0..k {
            for j in 0..k {
                out.push(offset + j * k + i);
            }
        }
        offset += k * k;
    }
    out
}

fn gram_alphabet_checked(members: &[RealMatrix], block_sizes: &[usize]) -> Result<Alphabet> {
    let mut blocks = Vec::new();
    let mut s = 0;
    for &k in block_sizes {
        blocks.push((s, s + k));
        s += k;
    }
    Alphabet::new(gram_letters(members, &blocks))?.with_transpose(gram_transpose_map(block_sizes))
}

/// Renders a gram letter index as `(i,j)` with 1-based member indices.
pub fn gram_letter_name(index: usize, block_sizes: &[usize]) -> String {
    let mut rest = index;
    let mut offset = 0;
    for &k in block_sizes {
        if rest < k * k {
            return format!("({},{})", offset + rest / k + 1, offset + rest % k + 1);
        }
        rest -= k * k;
        offset += k;
    }
    format!("x{index}")
}

/// `[(r+2)(n₁+n₂+m)]²` with `r` the least positive integer satisfying
/// `r(r+1)/2 ≥ max{k, l−k}`.
pub fn word_bound_lemma1(n1: usize, n2: usize, m: usize, k: usize, l: usize) -> u64 {
    let r = triangular_root(k.max(l.saturating_sub(k))) as u64;
    ((r + 2) * (n1 + n2 + m) as u64).pow(2)
}

/// Bound for a single `k`-member family of `m × n` matrices (two-vertex
/// quiver with `k` parallel arrows): `[(r+2)(m+n)]²`.
pub fn word_bound_family(m: usize, n: usize, k: usize) -> u64 {
    let r = triangular_root(k) as u64;
    ((r + 2) * (m + n) as u64).pow(2)
}

/// Bipartite qudit bound for the two-member family `{T₁T₂ᵗ, T₁₂}`:
/// `16(δ₁+δ₂)²`.
pub fn word_bound_bipartite(delta1: usize, delta2: usize) -> u64 {
    word_bound_family(delta1, delta2, 2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyOutcome {
    pub equal: bool,
    pub depth: usize,
    pub bound: u64,
    pub words_checked: usize,
    pub sampled: usize,
    /// Failing word with letters rendered as `(i,j)` gram pairs.
    pub witness: Option<String>,
    pub witness_len: Option<usize>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
}

impl FamilyOutcome {
    fn from_trace(out: TraceOutcome, bound: u64, block_sizes: &[usize]) -> Self {
        let w = out.witness.as_ref();
        Self {
            equal: out.equal,
            depth: out.depth,
            bound,
            words_checked: out.words_checked,
            sampled: out.sampled,
            witness: w.map(|w| Word::new(w.word.clone()).render(|l| gram_letter_name(l, block_sizes))),
            witness_len: w.map(|w| w.word.len()),
            lhs: w.map(|w| w.lhs),
            rhs: w.map(|w| w.rhs),
        }
    }
}

fn check_shapes(a: &[RealMatrix], b: &[RealMatrix]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::AlphabetMismatch(format!("{} members versus {}", a.len(), b.len())));
    }
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        if x.shape() != y.shape() {
            return Err(Error::AlphabetMismatch(format!(
                "member {} is {}x{} versus {}x{}",
                i + 1,
                x.nrows(),
                x.ncols(),
                y.nrows(),
                y.ncols()
            )));
        }
    }
    Ok(())
}

fn depth_for(opts: &TraceOptions, bound: u64) -> TraceOptions {
    let mut o = opts.clone();
    o.max_len = (o.max_len as u64).min(bound).max(1) as usize;
    o.sample_max_len = (o.sample_max_len as u64).min(bound) as usize;
    o
}

/// Is there `O`, `P` orthogonal with `Bᵢ = O Aᵢ P` for all `i`? Compares the
/// full ordered-pair gram alphabets to depth `min(opts.max_len, bound)`.
pub fn family_isometric(a: &[RealMatrix], b: &[RealMatrix], opts: &TraceOptions) -> Result<FamilyOutcome> {
    check_shapes(a, b)?;
    let fa = MatrixFamily::new(a.to_vec())?;
    MatrixFamily::new(b.to_vec())?;
    let cols = a.first().map_or(0, |m| m.ncols());
    if let Some((i, m)) = a.iter().enumerate().find(|(_, m)| m.ncols() != cols) {
        return Err(Error::AlphabetMismatch(format!(
            "member {} has {} columns, expected {cols}",
            i + 1,
            m.ncols()
        )));
    }
    let bound = word_bound_family(fa.rows(), cols, a.len().max(1));
    let sizes = [a.len()];
    let out = compare_alphabets(
        &gram_alphabet_checked(a, &sizes)?,
        &gram_alphabet_checked(b, &sizes)?,
        &depth_for(opts, bound),
    )?;
    Ok(FamilyOutcome::from_trace(out, bound, &sizes))
}

/// Two-block version: `B = (O A₁ Õ₁, …, O A_k Õ₁, O A_{k+1} Õ₂, …, O A_l Õ₂)`.
/// Letters are the ordered within-block gram products; depth is
/// `min(opts.max_len, word_bound_lemma1)`. `k = l` gives a single block.
pub fn lemma1_isometric(a: &[RealMatrix], b: &[RealMatrix], k: usize, opts: &TraceOptions) -> Result<FamilyOutcome> {
    check_shapes(a, b)?;
    let l = a.len();
    if k == 0 || k > l {
        return Err(Error::AlphabetMismatch(format!("left block size {k} for {l} members")));
    }
    let fa = MatrixFamily::new(a.to_vec())?;
    MatrixFamily::new(b.to_vec())?;
    let block_cols = |range: &[RealMatrix]| -> Result<usize> {
        let c = range[0].ncols();
        match range.iter().find(|m| m.ncols() != c) {
            Some(m) => Err(Error::AlphabetMismatch(format!(
                "block members must share a column count ({c} versus {})",
                m.ncols()
            ))),
            None => Ok(c),
        }
    };
    let n1 = block_cols(&a[..k])?;
    let n2 = if k < l { block_cols(&a[k..])? } else { 0 };
    let bound = word_bound_lemma1(n1, n2, fa.rows(), k, l);
    let sizes: Vec<usize> = if k < l { vec![k, l - k] } else { vec![k] };
    let out = compare_alphabets(
        &gram_alphabet_checked(a, &sizes)?,
        &gram_alphabet_checked(b, &sizes)?,
        &depth_for(opts, bound),
    )?;
    Ok(FamilyOutcome::from_trace(out, bound, &sizes))
}
