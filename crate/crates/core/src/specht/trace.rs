//! Word-trace comparison between two alphabets of square matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::words::{canonical_under, class_representatives, Word};
use crate::error::{Error, Result};
use crate::hypermatrix::RealMatrix;

/// Square letters plus an optional involution `t` with `letter[t[i]] = letter[i]ᵗ`.
///
/// With the involution, a word and its reversal-with-involution have equal
/// traces (`Tr W = Tr Wᵗ`), so only one of each pair is evaluated.
#[derive(Clone, Debug)]
pub struct Alphabet {
    letters: Vec<RealMatrix>,
    transpose: Option<Vec<usize>>,
}

impl Alphabet {
    pub fn new(letters: Vec<RealMatrix>) -> Result<Self> {
        if let Some(m) = letters.first() {
            let n = m.nrows();
            for (i, l) in letters.iter().enumerate() {
                if l.nrows() != n || l.ncols() != n {
                    return Err(Error::AlphabetMismatch(format!(
                        "letter {} is {}x{}, expected {n}x{n}",
                        i + 1,
                        l.nrows(),
                        l.ncols()
                    )));
                }
            }
        }
        Ok(Self {
            letters,
            transpose: None,
        })
    }

    /// Attaches a transpose pairing. Each `letters[t[i]]` must equal
    /// `letters[i]ᵗ` (checked to within 1e−12 relative).
    pub fn with_transpose(mut self, t: Vec<usize>) -> Result<Self> {
        if t.len() != self.letters.len() || t.iter().enumerate().any(|(i, &j)| j >= t.len() || t[j] != i) {
            return Err(Error::AlphabetMismatch("transpose map is not an involution".into()));
        }
        for (i, &j) in t.iter().enumerate() {
            let a = &self.letters[i];
            let dev = (a.transpose() - &self.letters[j]).abs().max();
            if dev > 1e-12 * a.abs().max().max(1.0) {
                return Err(Error::AlphabetMismatch(format!(
                    "letter {} is not the transpose of letter {}",
                    j + 1,
                    i + 1
                )));
            }
        }
        self.transpose = Some(t);
        Ok(self)
    }

    pub fn letters(&self) -> &[RealMatrix] {
        &self.letters
    }

    pub fn transpose_map(&self) -> Option<&[usize]> {
        self.transpose.as_deref()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn size(&self) -> usize {
        self.letters.first().map_or(0, |m| m.nrows())
    }

    fn norms(&self) -> Vec<f64> {
        self.letters.iter().map(|m| m.norm()).collect()
    }

    /// `Tr(letter[w₁] ⋯ letter[w_l])`.
    pub fn trace(&self, word: &[usize]) -> f64 {
        word_trace(&self.letters, word)
    }
}

/// Error-free transformation of `a + b`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Dot product in twice-working precision (Ogita–Rump–Oishi Dot2).
fn dot2(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for (x, y) in pairs {
        let p = x * y;
        let pe = x.mul_add(y, -p);
        let (t, se) = two_sum(s, p);
        s = t;
        c += se + pe;
    }
    s + c
}

/// Trace of a letter product (letters may be rectangular as long as the
/// product is square). The product of all but the last letter is
/// formed in working precision; the final contraction `Σ P_ij L_ji` is
/// compensated.
pub fn word_trace(letters: &[RealMatrix], word: &[usize]) -> f64 {
    let (&last, head) = word.split_last().expect("nonempty word");
    let z = &letters[last];
    match head.split_first() {
        None => dot2((0..z.nrows()).map(|i| (z[(i, i)], 1.0))),
        Some((&first, rest)) => {
            let p = rest.iter().fold(letters[first].clone(), |acc, &l| acc * &letters[l]);
            let (r, c) = p.shape();
            dot2((0..r).flat_map(|i| (0..c).map(move |j| (i, j))).map(|(i, j)| (p[(i, j)], z[(j, i)])))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub word: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceOutcome {
    pub equal: bool,
    /// Exhaustive depth actually used.
    pub depth: usize,
    pub words_checked: usize,
    pub sampled: usize,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceOptions {
    pub max_len: usize,
    pub tol: f64,
    /// Extra random words with lengths in `max_len+1 ..= sample_max_len`.
    pub samples: usize,
    pub sample_max_len: usize,
    pub seed: u64,
}

impl TraceOptions {
    pub fn exhaustive(max_len: usize, tol: f64) -> Self {
        Self {
            max_len,
            tol,
            samples: 0,
            sample_max_len: 0,
            seed: 0,
        }
    }
}

/// `|a − b| ≤ tol · max(1, |a|, |b|, scale)`, where `scale` bounds the
/// rounding growth of the product.
pub fn traces_agree(a: f64, b: f64, scale: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs()).max(scale)
}

fn scale_of(na: &[f64], nb: &[f64], word: &[usize]) -> f64 {
    let pa: f64 = word.iter().map(|&l| na[l]).product();
    let pb: f64 = word.iter().map(|&l| nb[l]).product();
    pa.max(pb)
}

/// Compares `Tr w(A)` and `Tr w(B)` over every class representative of
/// length `≤ opts.max_len`. On failure the witness is the least failing word
/// in length-then-lexicographic order, independent of scheduling.
pub fn compare_alphabets(a: &Alphabet, b: &Alphabet, opts: &TraceOptions) -> Result<TraceOutcome> {
    if a.len() != b.len() {
        return Err(Error::AlphabetMismatch(format!(
            "{} letters versus {}",
            a.len(),
            b.len()
        )));
    }
    if a.size() != b.size() {
        return Err(Error::AlphabetMismatch(format!(
            "{0}x{0} letters versus {1}x{1}",
            a.size(),
            b.size()
        )));
    }
    if opts.max_len == 0 || opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Unsupported("word length and tolerance must be positive".into()));
    }
    // quotient by transposition only when both sides support it
    let inv = match (a.transpose_map(), b.transpose_map()) {
        (Some(x), Some(y)) if x == y => Some(x.to_vec()),
        _ => None,
    };
    let (na, nb) = (a.norms(), b.norms());
    let check = |w: &[usize]| -> Option<Witness> {
        let (lhs, rhs) = (a.trace(w), b.trace(w));
        (!traces_agree(lhs, rhs, scale_of(&na, &nb, w), opts.tol)).then(|| Witness {
            word: w.to_vec(),
            lhs,
            rhs,
        })
    };

    let mut checked = 0usize;
    if !a.is_empty() {
        for group in class_representatives(a.len(), opts.max_len, inv.as_deref()) {
            checked += group.len();
            let found = group.par_iter().map(|w| check(w.letters())).find_first(|r| r.is_some());
            if let Some(Some(witness)) = found {
                return Ok(TraceOutcome {
                    equal: false,
                    depth: opts.max_len,
                    words_checked: checked,
                    sampled: 0,
                    witness: Some(witness),
                });
            }
        }
    }

    let mut witness = None;
    let mut sampled = 0;
    if opts.samples > 0 && opts.sample_max_len > opts.max_len && !a.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let words: Vec<Word> = (0..opts.samples)
            .map(|_| {
                let len = rng.random_range(opts.max_len + 1..=opts.sample_max_len);
                let w: Vec<usize> = (0..len).map(|_| rng.random_range(0..a.len())).collect();
                canonical_under(&w, inv.as_deref())
            })
            .collect();
        sampled = words.len();
        witness = words
            .par_iter()
            .filter_map(|w| check(w.letters()).map(|x| (w.clone(), x)))
            .min_by(|x, y| x.0.cmp(&y.0))
            .map(|(_, x)| x);
    }
    Ok(TraceOutcome {
        equal: witness.is_none(),
        depth: opts.max_len,
        words_checked: checked,
        sampled,
        witness,
    })
}

/// Exhaustive comparison of two plain alphabets up to length `max_len`.
pub fn trace_identities_equal(
    letters_a: &[RealMatrix],
    letters_b: &[RealMatrix],
    max_len: usize,
    tol: f64,
) -> Result<TraceOutcome> {
    let a = Alphabet::new(letters_a.to_vec())?;
    let b = Alphabet::new(letters_b.to_vec())?;
    for (i, (x, y)) in letters_a.iter().zip(letters_b).enumerate() {
        if x.shape() != y.shape() {
            return Err(Error::AlphabetMismatch(format!("letter {} differs in size", i + 1)));
        }
    }
    compare_alphabets(&a, &b, &TraceOptions::exhaustive(max_len, tol))
}
