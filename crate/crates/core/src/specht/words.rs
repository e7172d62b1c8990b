//! Words over a finite alphabet, up to rotation.
//!
//! Trace is invariant under cyclic rotation, so one representative per
//! necklace suffices. Representatives are the lexicographically smallest
//! rotation; necklaces of one length come out of [`necklaces`] in
//! lexicographic order.

use std::fmt;

/// A nonempty sequence of letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest rotation.
    pub fn canonical(&self) -> Word {
        Word(min_rotation(&self.0))
    }

    /// Formats each letter with `name`, joined by spaces.
    pub fn render(&self, name: impl Fn(usize) -> String) -> String {
        self.0.iter().map(|&l| name(l)).collect::<Vec<_>>().join(" ")
    }
}

/// Length first, then lexicographic: the order witnesses are minimized in.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|l| format!("x{l}")))
    }
}

/// Lexicographically least rotation.
pub fn min_rotation(s: &[usize]) -> Vec<usize> {
    let n = s.len();
    let best = (1..n).fold(0, |best, r| {
        let less = (0..n)
            .map(|t| s[(r + t) % n].cmp(&s[(best + t) % n]))
            .find(|o| o.is_ne())
            .is_some_and(|o| o.is_lt());
        if less {
            r
        } else {
            best
        }
    });
    (0..n).map(|t| s[(best + t) % n]).collect()
}

/// All necklaces of exactly length `n` over `k` letters, in lexicographic
/// order (Fredricksen–Kessler–Maiorana).
pub fn necklaces(k: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let mut a = vec![0usize; n + 1];
    fkm(1, 1, k, n, &mut a, &mut out);
    out
}

fn fkm(t: usize, p: usize, k: usize, n: usize, a: &mut [usize], out: &mut Vec<Word>) {
    if t > n {
        if n.is_multiple_of(p) {
            out.push(Word(a[1..=n].to_vec()));
        }
        return;
    }
    a[t] = a[t - p];
    fkm(t + 1, p, k, n, a, out);
    for j in a[t - p] + 1..k {
        a[t] = j;
        fkm(t + 1, t, k, n, a, out);
    }
}

/// One representative per necklace for every length `1..=max_len`, shortest
/// first.
pub fn enumerate_canonical_words(k: usize, max_len: usize) -> Vec<Word> {
    (1..=max_len).flat_map(|n| necklaces(k, n)).collect()
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn totient(n: u128) -> u128 {
    (1..=n).filter(|&j| gcd(j, n) == 1).count() as u128
}

/// Number of necklaces of length `n` over `k` letters:
/// `(1/n) Σ_{d|n} φ(d) k^{n/d}`.
pub fn necklace_count(k: u64, n: u32) -> u128 {
    if n == 0 {
        return 0;
    }
    let n = n as u128;
    let sum: u128 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| totient(d) * (k as u128).pow((n / d) as u32))
        .sum();
    sum / n
}

/// The word read backwards with every letter mapped through `involution`.
pub fn reverse_with(word: &[usize], involution: &[usize]) -> Vec<usize> {
    word.iter().rev().map(|&l| involution[l]).collect()
}

/// Representative of the class generated by rotation and by
/// reversal-with-involution: the smaller of the two least rotations.
pub fn canonical_under(word: &[usize], involution: Option<&[usize]>) -> Word {
    let a = min_rotation(word);
    match involution {
        Some(inv) => {
            let b = min_rotation(&reverse_with(word, inv));
            Word(a.min(b))
        }
        None => Word(a),
    }
}

/// Necklace representatives of length `1..=max_len` that are also minimal
/// under reversal-with-involution, grouped by length (each group sorted).
pub fn class_representatives(k: usize, max_len: usize, involution: Option<&[usize]>) -> Vec<Vec<Word>> {
    (1..=max_len)
        .map(|n| {
            let all = necklaces(k, n);
            match involution {
                None => all,
                Some(inv) => all
                    .into_iter()
                    .filter(|w| w.0 <= min_rotation(&reverse_with(&w.0, inv)))
                    .collect(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute_necklaces(k: usize, n: usize) -> HashSet<Vec<usize>> {
        let total = k.pow(n as u32);
        (0..total)
            .map(|mut x| {
                let w: Vec<usize> = (0..n)
                    .map(|_| {
                        let d = x % k;
                        x /= k;
                        d
                    })
                    .collect();
                (0..n).map(|r| [&w[r..], &w[..r]].concat()).min().unwrap()
            })
            .collect()
    }

    #[test]
    fn min_rotation_matches_brute_force() {
        let cases: [&[usize]; 6] = [&[0], &[1, 0], &[2, 1, 2, 1], &[1, 1, 0, 1, 1, 0, 1], &[3, 0, 0, 3, 0], &[2, 2, 2]];
        for s in cases {
            let want = (0..s.len()).map(|r| [&s[r..], &s[..r]].concat()).min().unwrap();
            assert_eq!(min_rotation(s), want, "{s:?}");
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_canonical_words(3, 1).len(), 3);
        assert_eq!(necklaces(3, 2).len(), 6);
        assert_eq!(necklaces(2, 3).len(), 4);
        assert_eq!(necklace_count(3, 2), 6);
        assert_eq!(necklace_count(2, 3), 4);
    }

    #[test]
    fn necklaces_match_brute_force_and_are_sorted() {
        for k in 1..=3 {
            for n in 1..=6 {
                let got = necklaces(k, n);
                let set: HashSet<Vec<usize>> = got.iter().map(|w| w.0.clone()).collect();
                assert_eq!(set, brute_necklaces(k, n), "k={k} n={n}");
                assert_eq!(set.len(), got.len());
                assert!(got.windows(2).all(|p| p[0].0 < p[1].0));
                assert!(got.iter().all(|w| w.canonical() == *w));
            }
        }
    }

    #[test]
    fn involution_classes_cover_every_necklace() {
        // letters (i,j) over a 2-member family: index 2i+j, transpose swaps 1 and 2
        let inv = [0, 2, 1, 3];
        for n in 1..=5 {
            let reps = &class_representatives(4, n, Some(&inv))[n - 1];
            let covered: HashSet<Vec<usize>> = reps
                .iter()
                .flat_map(|w| {
                    [min_rotation(&w.0), min_rotation(&reverse_with(&w.0, &inv))]
                })
                .collect();
            assert_eq!(covered.len() as u128, necklace_count(4, n as u32));
            for w in reps {
                assert_eq!(canonical_under(&w.0, Some(&inv)), *w);
            }
        }
    }

    #[test]
    fn word_order_is_length_then_lex() {
        assert!(Word::new(vec![3]) < Word::new(vec![0, 0]));
        assert!(Word::new(vec![0, 1]) < Word::new(vec![1, 0]));
    }
}
