//! Quasi-LU equivalence checks for bipartite and tripartite states.
//!
//! Every criterion marked [`Role::Necessary`] compares LU invariants, so a
//! failure proves the states are not (quasi-)LU equivalent. Trace identities
//! are only checked to a finite word depth, so passing is evidence up to that
//! depth unless the depth reaches the sufficient bound.

mod report;

use std::fmt;

use nalgebra::SVD;
use serde::Serialize;

use crate::bloch::{extract_rep, DensityMatrix, HypermatrixRep};
use crate::error::{Error, Result};
use crate::hyperdet::normalized_hyperdet;
use crate::hypermatrix::{Hypermatrix, RealMatrix};
use crate::specht::{family_isometric, lemma1_isometric, word_bound_lemma1, FamilyOutcome, TraceOptions};

pub use report::{CheckReport, Criterion, Overall, Role, Verdict};

/// An admissible `(i, j₁, j₂, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Choice {
    #[serde(rename = "1,2,2,3")]
    C1223,
    #[serde(rename = "2,1,1,3")]
    C2113,
    #[serde(rename = "3,3,1,2")]
    C3312,
}

impl Choice {
    pub const ALL: [Choice; 3] = [Choice::C1223, Choice::C2113, Choice::C3312];

    /// 0-based `(i, j₁, j₂, k)`.
    pub fn indices(self) -> (usize, usize, usize, usize) {
        match self {
            Choice::C1223 => (0, 1, 1, 2),
            Choice::C2113 => (1, 0, 0, 2),
            Choice::C3312 => (2, 2, 0, 1),
        }
    }

    /// Accepts `1223`, `1,2,2,3` or `(1,2,2,3)`.
    pub fn parse(s: &str) -> Result<Choice> {
        let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
        match digits.as_str() {
            "1223" => Ok(Choice::C1223),
            "2113" => Ok(Choice::C2113),
            "3312" => Ok(Choice::C3312),
            _ => Err(Error::Parse(format!(
                "unknown choice {s:?}; expected 1223, 2113, 3312 or all"
            ))),
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j1, j2, k) = self.indices();
        write!(f, "({},{},{},{})", i + 1, j1 + 1, j2 + 1, k + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiceSet {
    One(Choice),
    All,
}

impl ChoiceSet {
    pub fn choices(self) -> Vec<Choice> {
        match self {
            ChoiceSet::One(c) => vec![c],
            ChoiceSet::All => Choice::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Criterion 5 on the `T_i ∘ T_{j₂k}` Gram.
    Strict,
    /// Replaces the `T_i ∘ T_{j₂k}` slot by `T_i ∘ T_{j₂} ∘ T_k` and relaxes
    /// `T_{j₂k} ≠ 0`.
    Fallback,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub max_word_len: usize,
    pub tol: f64,
    pub choice: ChoiceSet,
    pub mode: Mode,
    pub qubit_det_check: bool,
    /// Tensors with Frobenius norm at or below this count as zero.
    pub zero_tol: f64,
    /// Relative tolerance for hyperdeterminant equalities.
    pub det_tol: f64,
    /// Random words beyond the exhaustive depth (0 disables sampling).
    pub samples: usize,
    pub sample_max_len: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_word_len: 4,
            tol: 1e-8,
            choice: ChoiceSet::All,
            mode: Mode::Strict,
            qubit_det_check: true,
            zero_tol: 1e-10,
            det_tol: 1e-6,
            samples: 0,
            sample_max_len: 0,
            seed: 0,
        }
    }
}

impl CheckOptions {
    fn validate(&self) -> Result<()> {
        if self.max_word_len == 0 {
            return Err(Error::Unsupported("maximum word length must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Unsupported("tolerance must be positive".into()));
        }
        Ok(())
    }

    fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            max_len: self.max_word_len,
            tol: self.tol,
            samples: self.samples,
            sample_max_len: self.sample_max_len,
            seed: self.seed,
        }
    }
}

fn agree(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

fn column(t: &Hypermatrix) -> RealMatrix {
    RealMatrix::from_column_slice(t.len(), 1, t.data())
}

/// `T_ij` as a `δ_i × δ_j` matrix, with `T_ij := T_jiᵗ` for `i > j`.
fn pair_matrix(rep: &HypermatrixRep, i: usize, j: usize) -> Result<RealMatrix> {
    let m = rep.t(&[i, j]).to_matrix()?;
    Ok(if i < j { m } else { m.transpose() })
}

fn subset_name(members: &[usize]) -> String {
    members.iter().map(|k| (k + 1).to_string()).collect()
}

fn same_dims(a: &HypermatrixRep, b: &HypermatrixRep) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::StateMismatch(format!(
            "subsystem dimensions {:?} versus {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// Zero-tensor log for the listed subsets of both states.
fn zero_tensors(a: &HypermatrixRep, b: &HypermatrixRep, subsets: &[&[usize]], zero_tol: f64) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (label, rep) in [("first", a), ("second", b)] {
        for s in subsets {
            let n = rep.t(s).norm();
            if n <= zero_tol {
                out.push((
                    subset_name(s),
                    format!("T_{} of the {label} state is numerically zero (norm {n:.3e})", subset_name(s)),
                ));
            }
        }
    }
    out
}

fn trace_criterion(id: &str, name: &str, out: &FamilyOutcome) -> Criterion {
    let (verdict, detail) = if out.equal {
        (
            Verdict::Pass,
            format!(
                "{} words agree to depth {} (sufficient depth {})",
                out.words_checked, out.depth, out.bound
            ),
        )
    } else {
        (
            Verdict::Fail,
            format!(
                "trace {:.12e} versus {:.12e}",
                out.lhs.unwrap_or(f64::NAN),
                out.rhs.unwrap_or(f64::NAN)
            ),
        )
    };
    let mut detail = detail;
    if out.sampled > 0 {
        detail.push_str(&format!("; {} longer words sampled", out.sampled));
    }
    Criterion::new(id, name, Role::Necessary, verdict, detail).with_witness(out.witness.clone(), out.witness_len)
}

/// `Det(T_i ∘ T_S)` for each `(i, S)`, compared after normalization.
fn det_criterion(id: &str, terms: &[(usize, &[usize])], a: &HypermatrixRep, b: &HypermatrixRep, tol: f64) -> Result<Criterion> {
    let mut parts = Vec::new();
    let mut ok = true;
    let mut all_vanish = true;
    for &(i, s) in terms {
        let (da, db) = (
            normalized_hyperdet(&a.t(&[i]).outer(a.t(s)))?,
            normalized_hyperdet(&b.t(&[i]).outer(b.t(s)))?,
        );
        let pass = (da - db).abs() <= tol * da.abs().max(db.abs()) + DET_FLOOR;
        ok &= pass;
        all_vanish &= da.abs() <= DET_FLOOR && db.abs() <= DET_FLOOR;
        parts.push(format!("Det(T_{}∘T_{}): {da:.3e} vs {db:.3e}", i + 1, subset_name(s)));
    }
    let mut detail = parts.join("; ");
    if all_vanish {
        detail.push_str("; both sides vanish (Det of a vector-matrix outer product is identically zero)");
    }
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    Ok(Criterion::new(id, "hyperdeterminant equalities", Role::LuUpgrade, verdict, detail))
}

/// Absolute floor for normalized hyperdeterminant comparisons.
const DET_FLOOR: f64 = 1e-12;

struct BipartiteInternal {
    report: CheckReport,
    certified: bool,
}

fn bipartite(a: &HypermatrixRep, b: &HypermatrixRep, opts: &CheckOptions) -> Result<BipartiteInternal> {
    same_dims(a, b)?;
    opts.validate()?;
    if a.subsystems() != 2 {
        return Err(Error::Unsupported(format!(
            "bipartite check needs 2 subsystems, got {}",
            a.subsystems()
        )));
    }
    let zeros = zero_tensors(a, b, &[&[0], &[1], &[0, 1]], opts.zero_tol);
    let preconditions: Vec<String> = zeros.iter().map(|(_, m)| m.clone()).collect();
    let mut criteria = Vec::new();

    let norms: Vec<(f64, f64)> = (0..2).map(|i| (a.t(&[i]).norm(), b.t(&[i]).norm())).collect();
    let matches: Vec<bool> = norms.iter().map(|&(x, y)| agree(x, y, opts.tol)).collect();
    let detail = norms
        .iter()
        .enumerate()
        .map(|(i, (x, y))| format!("|T_{}| {x:.12e} vs {y:.12e}", i + 1))
        .collect::<Vec<_>>()
        .join("; ");
    let norm_verdict = if matches.iter().any(|&m| m) { Verdict::Pass } else { Verdict::Fail };
    criteria.push(Criterion::new("norms", "norm condition", Role::Necessary, norm_verdict, detail));

    let family = |r: &HypermatrixRep| -> Result<Vec<RealMatrix>> {
        Ok(vec![column(r.t(&[0])) * column(r.t(&[1])).transpose(), r.t(&[0, 1]).to_matrix()?])
    };
    let traces = family_isometric(&family(a)?, &family(b)?, &opts.trace_options())?;
    criteria.push(trace_criterion("traces", "trace identities", &traces));

    let qubits = a.dims().iter().all(|&d| d == 2);
    let det = if !qubits {
        Criterion::new("det", "hyperdeterminant equalities", Role::LuUpgrade, Verdict::NotApplicable, "not all subsystems are qubits")
    } else if !opts.qubit_det_check {
        Criterion::new("det", "hyperdeterminant equalities", Role::LuUpgrade, Verdict::NotApplicable, "disabled")
    } else {
        det_criterion("det", &[(0, &[0, 1]), (1, &[0, 1])], a, b, opts.det_tol)?
    };
    let det_pass = det.verdict == Verdict::Pass;
    criteria.push(det);

    let mut notes = Vec::new();
    let complete = traces.depth as u64 >= traces.bound;
    let failed = criteria.iter().any(|c| c.role == Role::Necessary && c.verdict == Verdict::Fail);
    let certified = !failed && preconditions.is_empty() && complete;
    let overall = if failed {
        Overall::NotEquivalent
    } else if !preconditions.is_empty() {
        Overall::Inconclusive
    } else if certified && qubits && det_pass {
        Overall::LuCertified
    } else if certified {
        Overall::QuasiLuCertified
    } else {
        Overall::ConsistentWithQuasiLu
    };
    if !failed && !complete {
        notes.push(format!(
            "trace identities checked to depth {} of the sufficient {}",
            traces.depth, traces.bound
        ));
    }
    if qubits && opts.qubit_det_check && !det_pass {
        notes.push("hyperdeterminants differ: not LU equivalent even if quasi-LU equivalent".into());
    }
    Ok(BipartiteInternal {
        report: CheckReport {
            dims: a.dims().to_vec(),
            overall,
            depth: traces.depth,
            tolerance: opts.tol,
            criteria,
            preconditions,
            notes,
        },
        certified,
    })
}

/// Bipartite check on hypermatrix representations.
pub fn check_bipartite_rep(a: &HypermatrixRep, b: &HypermatrixRep, opts: &CheckOptions) -> Result<CheckReport> {
    bipartite(a, b, opts).map(|r| r.report)
}

pub fn check_bipartite(rho: &DensityMatrix, rho_hat: &DensityMatrix, opts: &CheckOptions) -> Result<CheckReport> {
    check_states(rho, rho_hat, 2)?;
    check_bipartite_rep(&extract_rep(rho)?, &extract_rep(rho_hat)?, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignOutcome {
    pub verdict: Verdict,
    pub lhs: f64,
    pub rhs: f64,
}

/// `T_iᵗ T_ij T_j` for the first and second representation; equal signs
/// pass, opposite signs fail, and a value within `tol` (relative to the
/// norms involved) on either side is inconclusive. Indices are 0-based.
pub fn sign_condition(a: &HypermatrixRep, b: &HypermatrixRep, pair: (usize, usize), tol: f64) -> Result<SignOutcome> {
    same_dims(a, b)?;
    let (i, j) = pair;
    let n = a.subsystems();
    if i >= n || j >= n || i == j {
        return Err(Error::SubsystemOutOfRange { index: i.max(j) + 1, count: n });
    }
    let scalar = |r: &HypermatrixRep| -> Result<(f64, f64)> {
        let (ti, tj, tij) = (column(r.t(&[i])), column(r.t(&[j])), pair_matrix(r, i, j)?);
        let s = (ti.transpose() * &tij * &tj)[(0, 0)];
        Ok((s, ti.norm() * tij.norm() * tj.norm()))
    };
    let ((lhs, sa), (rhs, sb)) = (scalar(a)?, scalar(b)?);
    let verdict = if lhs.abs() <= tol * sa.max(1.0) || rhs.abs() <= tol * sb.max(1.0) {
        Verdict::Inconclusive
    } else if lhs.signum() == rhs.signum() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(SignOutcome { verdict, lhs, rhs })
}

/// The five matrices `(A₁,…,A₅)` for `choice`:
/// `(T₁₂₃)_(i)`, `(T₁∘T₂₃)_(i)`, `(T₂∘T₁₃)` in mode order `(1,2,3)` unfolded
/// at `i`, `(T₁₂∘T₃)_(i)`, `T_i`. In fallback mode the `T_i ∘ T_{j₂k}` slot
/// becomes `(T_i∘T_{j₂}∘T_k)_(1)`.
pub fn lemma1_family(rep: &HypermatrixRep, choice: Choice, mode: Mode) -> Result<Vec<RealMatrix>> {
    if rep.subsystems() != 3 {
        return Err(Error::Unsupported("tripartite representation required".into()));
    }
    let (i, _, j2, k) = choice.indices();
    let t = |s: &[usize]| rep.t(s);
    let a1 = t(&[0, 1, 2]).unfold(i)?;
    let a2 = t(&[0]).outer(t(&[1, 2])).unfold(i)?;
    let a3 = t(&[1]).outer(t(&[0, 2])).permute_axes(&[1, 0, 2])?.unfold(i)?;
    let a4 = t(&[0, 1]).outer(t(&[2])).unfold(i)?;
    let a5 = column(t(&[i]));
    let mut family = vec![a1, a2, a3, a4, a5];
    if mode == Mode::Fallback {
        family[i + 1] = t(&[i]).outer(t(&[j2])).outer(t(&[k])).unfold(0)?;
    }
    Ok(family)
}

/// The matrix whose Gram criterion 5 inspects.
fn criterion5_matrix(rep: &HypermatrixRep, choice: Choice, mode: Mode) -> Result<RealMatrix> {
    let (i, _, j2, k) = choice.indices();
    let t = |s: &[usize]| rep.t(s);
    match (mode, choice) {
        (Mode::Fallback, _) => t(&[i]).outer(t(&[j2])).outer(t(&[k])).unfold(0),
        (Mode::Strict, Choice::C3312) => t(&[j2, k]).outer(t(&[i])).unfold(2),
        (Mode::Strict, _) => t(&[i]).outer(t(&[j2, k])).unfold(0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvertibilityOutcome {
    pub verdict: Verdict,
    /// Singular values of the Gram, descending.
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl InvertibilityOutcome {
    /// Second largest singular value (0 for a 1×1 Gram).
    pub fn sigma2(&self) -> f64 {
        self.singular_values.get(1).copied().unwrap_or(0.0)
    }
}

fn gram_outcome(g: &RealMatrix, tol: f64) -> InvertibilityOutcome {
    let mut sv: Vec<f64> = SVD::new(g.clone(), false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_min = sv.last().copied().unwrap_or(0.0);
    let verdict = if sigma_max > 0.0 && sigma_min > tol * sigma_max {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    InvertibilityOutcome {
        verdict,
        singular_values: sv,
        sigma_min,
        sigma_max,
    }
}

/// Criterion 5: invertibility of `MᵗM` via `σ_min > tol·σ_max`, with
/// `M = (T_i∘T_{j₂k})_(i)`, or `(T_{j₂k}∘T_i)_(i)` for `(3,3,1,2)`, or
/// `(T_i∘T_{j₂}∘T_k)_(1)` in fallback mode.
pub fn invertibility_condition(rep: &HypermatrixRep, choice: Choice, mode: Mode, tol: f64) -> Result<InvertibilityOutcome> {
    let m = criterion5_matrix(rep, choice, mode)?;
    Ok(gram_outcome(&(m.transpose() * &m), tol))
}

/// Beyond the strict criterion: the accumulated Gram `Σ_{α≤4} A_αᵗA_α` of
/// the first block of the family. Each relation `B_α = O_i A_α Õᵗ` gives
/// `B_αᵗB_α = Õ A_αᵗA_α Õᵗ`, so an invertible sum pins `Õ` as well. Never
/// used for the verdict.
pub fn invertibility_extension(rep: &HypermatrixRep, choice: Choice, mode: Mode, tol: f64) -> Result<InvertibilityOutcome> {
    let family = lemma1_family(rep, choice, mode)?;
    let g = family[..4]
        .iter()
        .map(|a| a.transpose() * a)
        .reduce(|x, y| x + y)
        .expect("four members");
    Ok(gram_outcome(&g, tol))
}

const NORM_PATTERNS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 0, 2), (2, 0, 1)];
const SIGN_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

fn norm_criterion(a: &HypermatrixRep, b: &HypermatrixRep, opts: &CheckOptions) -> Criterion {
    let mut parts = Vec::new();
    let mut ok = true;
    for (i, j, k) in NORM_PATTERNS {
        let (ni, nih) = (a.t(&[i]).norm(), b.t(&[i]).norm());
        let (njk, njkh, label) = match opts.mode {
            Mode::Strict => (a.t(&[j, k]).norm(), b.t(&[j, k]).norm(), format!("T_{}{}", j + 1, k + 1)),
            Mode::Fallback => (
                a.t(&[j]).norm() * a.t(&[k]).norm(),
                b.t(&[j]).norm() * b.t(&[k]).norm(),
                format!("T_{}∘T_{}", j + 1, k + 1),
            ),
        };
        let pass = agree(ni, nih, opts.tol) || agree(njk, njkh, opts.tol);
        ok &= pass;
        parts.push(format!(
            "|T_{}| {ni:.6e} vs {nih:.6e}, |{label}| {njk:.6e} vs {njkh:.6e}",
            i + 1
        ));
    }
    let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
    Criterion::new("1", "norm conditions", Role::Necessary, verdict, parts.join("; "))
}

fn sign_criterion(a: &HypermatrixRep, b: &HypermatrixRep, tol: f64) -> Result<Criterion> {
    let mut parts = Vec::new();
    let mut verdicts = Vec::new();
    for (i, j) in SIGN_PAIRS {
        let s = sign_condition(a, b, (i, j), tol)?;
        parts.push(format!("({},{}): {:.6e} vs {:.6e} {}", i + 1, j + 1, s.lhs, s.rhs, s.verdict));
        verdicts.push(s.verdict);
    }
    // the scalar itself is invariant, so any determinable mismatch is conclusive
    let verdict = if verdicts.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if verdicts.contains(&Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(Criterion::new("2", "sign condition", Role::Necessary, verdict, parts.join("; ")))
}

struct ChoiceResult {
    criteria: Vec<Criterion>,
    preconditions_ok: bool,
    certified: bool,
    depth: usize,
    complete: bool,
}

fn run_choice(
    a: &HypermatrixRep,
    b: &HypermatrixRep,
    choice: Choice,
    opts: &CheckOptions,
    zeros: &[(String, String)],
    shared_pass: bool,
) -> Result<ChoiceResult> {
    let (i, _, j2, k) = choice.indices();
    let label = Some(choice.to_string());
    let deltas = a.deltas();
    let jk = subset_name(&[j2, k]);
    let preconditions_ok = zeros
        .iter()
        .all(|(s, _)| s == "123" || (opts.mode == Mode::Fallback && *s == jk));
    let mut criteria = Vec::new();

    let fa = lemma1_family(a, choice, opts.mode)?;
    let fb = lemma1_family(b, choice, opts.mode)?;
    let traces = lemma1_isometric(&fa, &fb, 4, &opts.trace_options())?;
    debug_assert_eq!(traces.bound, word_bound_lemma1(deltas[j2] * deltas[k], 1, deltas[i], 4, 5));
    criteria.push(trace_criterion("3", "trace identities", &traces).for_choice(label.clone()));

    let sub_opts = CheckOptions {
        qubit_det_check: false,
        ..opts.clone()
    };
    let sub = bipartite(&a.partial_trace(i)?, &b.partial_trace(i)?, &sub_opts)?;
    let verdict = match sub.report.overall {
        Overall::NotEquivalent => Verdict::Fail,
        Overall::Inconclusive => Verdict::Inconclusive,
        _ => Verdict::Pass,
    };
    let failing = sub.report.failures().next();
    let detail = match failing {
        Some(c) => format!("{}: {}", c.name, c.detail),
        None => format!("partial traces over subsystem {}: {}", i + 1, sub.report.overall),
    };
    let (w, wl) = failing.map_or((None, None), |c| (c.witness.clone(), c.witness_len));
    criteria.push(
        Criterion::new("4", "partial-trace check", Role::Necessary, verdict, detail)
            .for_choice(label.clone())
            .with_witness(w, wl),
    );

    let inv = invertibility_condition(a, choice, opts.mode, opts.tol)?;
    let size = inv.singular_values.len();
    criteria.push(
        Criterion::new(
            "5",
            "Gram invertibility",
            Role::Sufficient,
            inv.verdict,
            format!(
                "{size}x{size} Gram, sigma_max {:.3e}, sigma_2 {:.3e}, sigma_min {:.3e}",
                inv.sigma_max,
                inv.sigma2(),
                inv.sigma_min
            ),
        )
        .for_choice(label.clone()),
    );
    let ext = invertibility_extension(a, choice, opts.mode, opts.tol)?;
    criteria.push(
        Criterion::new(
            "5-ext",
            "Gram invertibility, accumulated A1..A4 extension",
            Role::Diagnostic,
            ext.verdict,
            format!(
                "sigma_max {:.3e}, sigma_min {:.3e}; informational only",
                ext.sigma_max, ext.sigma_min
            ),
        )
        .for_choice(label),
    );

    let complete = traces.depth as u64 >= traces.bound;
    let certified = shared_pass
        && preconditions_ok
        && traces.equal
        && complete
        && sub.certified
        && inv.verdict == Verdict::Pass;
    Ok(ChoiceResult {
        criteria,
        preconditions_ok,
        certified,
        depth: traces.depth,
        complete,
    })
}

/// Tripartite check on hypermatrix representations.
pub fn check_tripartite_rep(a: &HypermatrixRep, b: &HypermatrixRep, opts: &CheckOptions) -> Result<CheckReport> {
    same_dims(a, b)?;
    opts.validate()?;
    if a.subsystems() != 3 {
        return Err(Error::Unsupported(format!(
            "tripartite check needs 3 subsystems, got {}",
            a.subsystems()
        )));
    }
    let zeros = zero_tensors(
        a,
        b,
        &[&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]],
        opts.zero_tol,
    );
    let mut criteria = vec![norm_criterion(a, b, opts), sign_criterion(a, b, opts.tol)?];
    let shared_pass = criteria.iter().all(|c| c.verdict == Verdict::Pass);

    let mut results = Vec::new();
    for choice in opts.choice.choices() {
        let r = run_choice(a, b, choice, opts, &zeros, shared_pass)?;
        criteria.extend(r.criteria.iter().cloned());
        results.push(r);
    }

    let qubits = a.dims().iter().all(|&d| d == 2);
    let det = if !qubits {
        Criterion::new("6", "hyperdeterminant equalities", Role::LuUpgrade, Verdict::NotApplicable, "not all subsystems are qubits")
    } else if !opts.qubit_det_check {
        Criterion::new("6", "hyperdeterminant equalities", Role::LuUpgrade, Verdict::NotApplicable, "disabled")
    } else {
        det_criterion("6", &[(0, &[0, 1]), (0, &[0, 2]), (1, &[1, 2])], a, b, opts.det_tol)?
    };
    let det_pass = det.verdict == Verdict::Pass;
    criteria.push(det);

    let failed = criteria.iter().any(|c| c.role == Role::Necessary && c.verdict == Verdict::Fail);
    let any_precondition = results.iter().any(|r| r.preconditions_ok);
    let certified = results.iter().any(|r| r.certified);
    let overall = if failed {
        Overall::NotEquivalent
    } else if !any_precondition {
        Overall::Inconclusive
    } else if certified && qubits && det_pass {
        Overall::LuCertified
    } else if certified {
        Overall::QuasiLuCertified
    } else {
        Overall::ConsistentWithQuasiLu
    };

    let mut notes = Vec::new();
    if !failed {
        if let Some(r) = results.iter().find(|r| !r.complete) {
            notes.push(format!("trace identities checked to depth {}, below the sufficient bound", r.depth));
        }
        if criteria.iter().any(|c| c.id == "5" && c.verdict == Verdict::Fail) {
            notes.push(
                "criterion 5 Gram is singular (its matrix is an outer product, so rank <= 1); certification is unavailable"
                    .into(),
            );
        }
    }
    if opts.mode == Mode::Strict && zeros.iter().any(|(s, _)| s.len() == 2) {
        notes.push("a pair tensor is zero; fallback mode relaxes T_{j2k} != 0".into());
    }
    if qubits && opts.qubit_det_check && !det_pass {
        notes.push("hyperdeterminants differ: not LU equivalent even if quasi-LU equivalent".into());
    }
    Ok(CheckReport {
        dims: a.dims().to_vec(),
        overall,
        depth: results.iter().map(|r| r.depth).min().unwrap_or(opts.max_word_len),
        tolerance: opts.tol,
        criteria,
        preconditions: zeros.into_iter().map(|(_, m)| m).collect(),
        notes,
    })
}

pub fn check_tripartite(rho: &DensityMatrix, rho_hat: &DensityMatrix, opts: &CheckOptions) -> Result<CheckReport> {
    check_states(rho, rho_hat, 3)?;
    check_tripartite_rep(&extract_rep(rho)?, &extract_rep(rho_hat)?, opts)
}

fn check_states(rho: &DensityMatrix, rho_hat: &DensityMatrix, n: usize) -> Result<()> {
    if rho.dims() != rho_hat.dims() {
        return Err(Error::StateMismatch(format!(
            "subsystem dimensions {:?} versus {:?}",
            rho.dims(),
            rho_hat.dims()
        )));
    }
    if rho.subsystems() != n {
        return Err(Error::Unsupported(format!(
            "expected {n} subsystems, got {}",
            rho.subsystems()
        )));
    }
    Ok(())
}

/// Dispatches on the number of subsystems.
pub fn check_rep(a: &HypermatrixRep, b: &HypermatrixRep, opts: &CheckOptions) -> Result<CheckReport> {
    same_dims(a, b)?;
    match a.subsystems() {
        2 => check_bipartite_rep(a, b, opts),
        3 => check_tripartite_rep(a, b, opts),
        n => Err(Error::Unsupported(format!(
            "checks exist for 2 or 3 subsystems, got {n}"
        ))),
    }
}

pub fn check(rho: &DensityMatrix, rho_hat: &DensityMatrix, opts: &CheckOptions) -> Result<CheckReport> {
    if rho.dims() != rho_hat.dims() {
        return Err(Error::StateMismatch(format!(
            "subsystem dimensions {:?} versus {:?}",
            rho.dims(),
            rho_hat.dims()
        )));
    }
    check_rep(&extract_rep(rho)?, &extract_rep(rho_hat)?, opts)
}
