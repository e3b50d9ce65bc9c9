//! Run configuration, the report records produced by each command and their
//! JSON, CSV and text renderings.
//!
//! Rationals are always written as `num/den` strings. The JSON layout is
//! described by `docs/report.schema.json`.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use crate::dynamical::{apply_dynscript, cyclic_gram, DynAtom, DynScript};
use crate::error::{Error, Result};
use crate::formulas::{
    arranged_singular_params, b_total, genericity_witness, random_generic_params, singular_criterion,
};
use crate::freealg::enumerate_pbw;
use crate::qscalars::{fmt_rational, rat, Params, Rational, WeightContent};
use crate::suites::{canonical_inverse_check, content_determinants, run_suite, Suite, SuiteConfig, SuiteOutcome};
use crate::verma::{Verma, VermaVector};

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Parameters shared by all commands, as given on the command line.
#[derive(Clone, Debug, Default)]
pub struct RunSettings {
    pub n: usize,
    pub q: Option<Rational>,
    pub z: Option<Vec<Rational>>,
    pub seed: Option<u64>,
    pub depth: Option<u32>,
    pub trials: u32,
}

impl RunSettings {
    /// Depth, defaulting to the profile depth for the rank.
    pub fn depth(&self) -> u32 {
        self.depth.unwrap_or_else(|| SuiteConfig::profile(self.n).depth)
    }

    /// The main specialization: explicit `z`, else a seeded random generic
    /// weight, else the default profile. An explicit `q` always wins.
    pub fn base_params(&self) -> Result<Params> {
        let base = match (&self.z, self.seed) {
            (Some(z), _) => Params::new(self.n, self.q.clone().unwrap_or_else(|| rat(2)), z.clone())?,
            (None, Some(seed)) => random_generic_params(self.n, seed, self.depth())?,
            (None, None) => Params::default_profile(self.n)?,
        };
        match &self.q {
            Some(q) if q != base.q() => Params::new(self.n, q.clone(), base.z().to_vec()),
            _ => Ok(base),
        }
    }

    /// The main specialization followed by `trials` random generic ones.
    pub fn all_params(&self) -> Result<Vec<Params>> {
        let mut out = vec![self.base_params()?];
        let start = self.seed.unwrap_or(0).wrapping_add(1);
        for k in 0..self.trials as u64 {
            out.push(random_generic_params(self.n, start.wrapping_add(k), self.depth())?);
        }
        Ok(out)
    }
}

/// Parameter echo included in every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamsInfo {
    pub n: usize,
    pub q: String,
    pub z: Vec<String>,
}

impl From<&Params> for ParamsInfo {
    fn from(p: &Params) -> Self {
        ParamsInfo { n: p.rank(), q: fmt_rational(p.q()), z: p.z().iter().map(fmt_rational).collect() }
    }
}

/// A failure that prevented a command from producing results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    pub witness: Option<String>,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let (kind, witness) = match e {
            Error::IndexOutOfRange { .. } => ("IndexOutOfRange", None),
            Error::BadRootRange { .. } => ("BadRootRange", None),
            Error::InvalidParams(_) => ("InvalidParams", None),
            Error::ZeroPower => ("ZeroPower", None),
            Error::ContentMismatch { .. } => ("ContentMismatch", None),
            Error::MalformedPermutation(_) => ("MalformedPermutation", None),
            Error::DegenerateWeight { witness } => ("DegenerateWeight", Some(witness.clone())),
            Error::InternalInvariantViolation(_) => ("InternalInvariantViolation", None),
            Error::Formula(_) => ("FormulaDiscrepancy", None),
            Error::Parse(_) => ("Parse", None),
        };
        ErrorInfo { kind: kind.into(), message: e.to_string(), witness }
    }
}

/// Cyclic pairing of the dynamical bases at one content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramBlock {
    pub content: Vec<i32>,
    pub arrays: Vec<String>,
    /// `pairing[a][b] = v^* ě(k_a) f̂(l_b) v`.
    pub pairing: Vec<Vec<String>>,
    /// The predicted diagonal `B_l`.
    pub norms: Vec<String>,
    pub diagonal: bool,
    pub norms_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramReport {
    #[serde(flatten)]
    pub params: ParamsInfo,
    pub depth: u32,
    pub blocks: Vec<GramBlock>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub depth: u32,
    pub power: u32,
    pub outcomes: Vec<SuiteOutcome>,
    pub discrepancy_count: u64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaisedEntry {
    pub i: usize,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularReport {
    #[serde(flatten)]
    pub params: ParamsInfo,
    pub k: usize,
    pub m: u32,
    /// Whether the scalar criterion `[λ_kn − m + 1]_q = 0` holds.
    pub criterion: bool,
    pub vector_nonzero: bool,
    pub raised: Vec<RaisedEntry>,
    /// Whether every raising operator kills the vector.
    pub singular: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseBlock {
    pub content: Vec<i32>,
    pub dimension: usize,
    pub left_identity: bool,
    pub right_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseReport {
    #[serde(flatten)]
    pub params: ParamsInfo,
    pub depth: u32,
    pub blocks: Vec<InverseBlock>,
    pub error: Option<ErrorInfo>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipBlock {
    pub content: Vec<i32>,
    pub original_det: String,
    pub flipped_det: String,
    pub original_independent: bool,
    pub flipped_independent: bool,
    /// Every `B_l` of this content is nonzero, so the original vectors must be independent.
    pub original_generic: bool,
    /// The same for the flipped vectors (norms at the mirrored weight).
    pub flipped_generic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipReport {
    #[serde(flatten)]
    pub params: ParamsInfo,
    pub depth: u32,
    pub blocks: Vec<FlipBlock>,
    pub passed: bool,
}

/// The result of one command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Gram(GramReport),
    Verify(VerifyReport),
    Singular(SingularReport),
    Inverse(InverseReport),
    FlipCompare(FlipReport),
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Gram(r) => r.passed,
            Report::Verify(r) => r.passed,
            Report::Singular(r) => r.passed,
            Report::Inverse(r) => r.passed,
            Report::FlipCompare(r) => r.passed,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string())),
            Format::Csv => render_csv(self),
            Format::Text => Ok(render_text(self)),
        }
    }
}

// ---------------------------------------------------------------------------
// Commands

/// Cyclic pairing matrices of the dynamical bases for every content up to `depth`.
pub fn gram(p: &Params, depth: u32) -> Result<Report> {
    let e = Verma::new(p.clone());
    let mut blocks = Vec::new();
    for m in WeightContent::all_up_to_degree(p.rank(), depth as i32) {
        let pbw = e.pbw_list(&m);
        let g = cyclic_gram(&e, &m)?;
        let norms: Vec<Rational> = pbw.iter().map(|l| b_total(p, l)).collect::<Result<_>>()?;
        let diagonal = g.iter().enumerate().all(|(a, row)| row.iter().enumerate().all(|(b, x)| a == b || x.is_zero()));
        let norms_match = norms.iter().enumerate().all(|(a, b)| g[a][a] == *b);
        blocks.push(GramBlock {
            content: m.0.clone(),
            arrays: pbw.iter().map(|l| l.to_string()).collect(),
            pairing: g.iter().map(|row| row.iter().map(fmt_rational).collect()).collect(),
            norms: norms.iter().map(fmt_rational).collect(),
            diagonal,
            norms_match,
        });
    }
    let passed = blocks.iter().all(|b| b.diagonal && b.norms_match);
    Ok(Report::Gram(GramReport { params: p.into(), depth, blocks, passed }))
}

/// Runs the selected suites at every specialization.
pub fn verify(params: &[Params], suites: &[Suite], cfg: &SuiteConfig) -> Report {
    let outcomes: Vec<SuiteOutcome> =
        params.iter().flat_map(|p| suites.iter().map(move |&s| run_suite(s, p, cfg))).collect();
    let discrepancy_count = outcomes.iter().map(|o| o.discrepancy_count).sum();
    let passed = outcomes.iter().all(|o| o.passed);
    let n = params.first().map_or(0, Params::rank);
    Report::Verify(VerifyReport { n, depth: cfg.depth, power: cfg.power, outcomes, discrepancy_count, passed })
}

/// How the weight is chosen for the singular-vector command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Arrangement {
    /// Use the given weight unchanged.
    None,
    /// Replace `z_k` so that `q^{λ_kn} = q^{m−1}`.
    Positive,
    /// Replace `z_k` so that `q^{λ_kn} = −q^{m−1}`.
    Negative,
}

/// Tests whether `f̂_{kn}^m v_λ` is singular and whether that agrees with the criterion.
pub fn singular(p: &Params, k: usize, m: u32, arrangement: Arrangement) -> Result<Report> {
    let p = match arrangement {
        Arrangement::None => p.clone(),
        Arrangement::Positive => arranged_singular_params(p, k, m, false)?,
        Arrangement::Negative => arranged_singular_params(p, k, m, true)?,
    };
    let criterion = singular_criterion(&p, k, m)?;
    let n = p.rank();
    let e = Verma::new(p.clone());
    let x = apply_dynscript(&e, &DynScript(vec![DynAtom::Fhat(k, n); m as usize]), &VermaVector::highest(n))?;
    let raised: Vec<RaisedEntry> =
        (1..=n).map(|i| Ok(RaisedEntry { i, zero: e.act_e(i, &x)?.is_zero() })).collect::<Result<_>>()?;
    let singular = raised.iter().all(|r| r.zero);
    let vector_nonzero = !x.is_zero();
    let passed = vector_nonzero && singular == criterion;
    Ok(Report::Singular(SingularReport {
        params: (&p).into(),
        k,
        m,
        criterion,
        vector_nonzero,
        raised,
        singular,
        passed,
    }))
}

/// Checks that the canonical element built from the dynamical bases inverts the Gram matrix.
pub fn inverse(p: &Params, depth: u32) -> Result<Report> {
    let fail = |err: &Error| {
        Report::Inverse(InverseReport {
            params: p.into(),
            depth,
            blocks: Vec::new(),
            error: Some(err.into()),
            passed: false,
        })
    };
    if let Some(w) = genericity_witness(p, depth)? {
        return Ok(fail(&Error::DegenerateWeight { witness: w.to_string() }));
    }
    let e = Verma::new(p.clone());
    let mut blocks = Vec::new();
    for m in WeightContent::all_up_to_degree(p.rank(), depth as i32) {
        let (left_identity, right_identity) = canonical_inverse_check(&e, &m)?;
        blocks.push(InverseBlock {
            content: m.0.clone(),
            dimension: e.pbw_list(&m).len(),
            left_identity,
            right_identity,
        });
    }
    let passed = blocks.iter().all(|b| b.left_identity && b.right_identity);
    Ok(Report::Inverse(InverseReport { params: p.into(), depth, blocks, error: None, passed }))
}

/// Compares the original and diagram-flipped dynamical bases content by content.
pub fn flip_compare(p: &Params, depth: u32) -> Result<Report> {
    let n = p.rank();
    let e = Verma::new(p.clone());
    let mirrored = p.with_z(p.z().iter().rev().cloned().collect())?;
    let mut blocks = Vec::new();
    for m in WeightContent::all_up_to_degree(n, depth as i32) {
        let (d0, d1) = content_determinants(&e, &m)?;
        let nonzero_norms = |q: &Params, c: &WeightContent| -> Result<bool> {
            for l in enumerate_pbw(n, c) {
                if b_total(q, &l)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let reversed = WeightContent(m.0.iter().rev().copied().collect());
        blocks.push(FlipBlock {
            content: m.0.clone(),
            original_det: fmt_rational(&d0),
            flipped_det: fmt_rational(&d1),
            original_independent: !d0.is_zero(),
            flipped_independent: !d1.is_zero(),
            original_generic: nonzero_norms(p, &m)?,
            flipped_generic: nonzero_norms(&mirrored, &reversed)?,
        });
    }
    let passed = blocks
        .iter()
        .all(|b| (!b.original_generic || b.original_independent) && (!b.flipped_generic || b.flipped_independent));
    Ok(Report::FlipCompare(FlipReport { params: p.into(), depth, blocks, passed }))
}

// ---------------------------------------------------------------------------
// Rendering

fn join_content(c: &[i32]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn render_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    match report {
        Report::Gram(r) => {
            w.write_record(["content", "row", "column", "value", "norm"]).map_err(io)?;
            for b in &r.blocks {
                for (a, row) in b.pairing.iter().enumerate() {
                    for (c, x) in row.iter().enumerate() {
                        let norm = if a == c { b.norms[a].as_str() } else { "" };
                        w.write_record([&join_content(&b.content), &b.arrays[a], &b.arrays[c], x, norm]).map_err(io)?;
                    }
                }
            }
        }
        Report::Verify(r) => {
            w.write_record([
                "suite",
                "n",
                "q",
                "z",
                "depth",
                "passed",
                "skipped",
                "checks",
                "failures",
                "discrepancies",
                "counterexample",
            ])
            .map_err(io)?;
            for o in &r.outcomes {
                w.write_record([
                    o.suite.name(),
                    &o.n.to_string(),
                    &o.q,
                    &o.z.join(";"),
                    &o.depth.to_string(),
                    &o.passed.to_string(),
                    o.skipped.as_deref().unwrap_or(""),
                    &o.checks.to_string(),
                    &o.failures.to_string(),
                    &o.discrepancy_count.to_string(),
                    o.counterexample.as_deref().unwrap_or(""),
                ])
                .map_err(io)?;
            }
        }
        Report::Singular(r) => {
            w.write_record(["k", "m", "criterion", "i", "raised_zero"]).map_err(io)?;
            for x in &r.raised {
                w.write_record([
                    &r.k.to_string(),
                    &r.m.to_string(),
                    &r.criterion.to_string(),
                    &x.i.to_string(),
                    &x.zero.to_string(),
                ])
                .map_err(io)?;
            }
        }
        Report::Inverse(r) => {
            w.write_record(["content", "dimension", "left_identity", "right_identity", "error"]).map_err(io)?;
            if let Some(err) = &r.error {
                w.write_record(["", "", "", "", &err.message]).map_err(io)?;
            }
            for b in &r.blocks {
                w.write_record([
                    &join_content(&b.content),
                    &b.dimension.to_string(),
                    &b.left_identity.to_string(),
                    &b.right_identity.to_string(),
                    "",
                ])
                .map_err(io)?;
            }
        }
        Report::FlipCompare(r) => {
            w.write_record(["content", "original_det", "flipped_det", "original_generic", "flipped_generic"])
                .map_err(io)?;
            for b in &r.blocks {
                w.write_record([
                    &join_content(&b.content),
                    &b.original_det,
                    &b.flipped_det,
                    &b.original_generic.to_string(),
                    &b.flipped_generic.to_string(),
                ])
                .map_err(io)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn params_line(p: &ParamsInfo) -> String {
    format!("n={} q={} z=({})", p.n, p.q, p.z.join(","))
}

fn render_text(report: &Report) -> String {
    let mut s = String::new();
    match report {
        Report::Gram(r) => {
            let _ = writeln!(s, "cyclic pairing of dynamical bases, {}, depth {}", params_line(&r.params), r.depth);
            for b in &r.blocks {
                let _ = writeln!(
                    s,
                    "content {}: dimension {}, diagonal {}, norms {}",
                    join_content(&b.content),
                    b.arrays.len(),
                    verdict(b.diagonal),
                    verdict(b.norms_match)
                );
                for (a, l) in b.arrays.iter().enumerate() {
                    let _ = writeln!(s, "  B{l} = {}", b.norms[a]);
                }
            }
        }
        Report::Verify(r) => {
            for o in &r.outcomes {
                let state = match &o.skipped {
                    Some(reason) => format!("SKIP ({reason})"),
                    None => verdict(o.passed).to_string(),
                };
                let _ = writeln!(
                    s,
                    "{:<24} q={} z=({}) depth {}: {state}, {} checks",
                    o.suite.name(),
                    o.q,
                    o.z.join(","),
                    o.depth,
                    o.checks
                );
                if let Some(c) = &o.counterexample {
                    let _ = writeln!(s, "    first counterexample: {c}");
                }
                for d in &o.discrepancies {
                    let _ = writeln!(
                        s,
                        "    {} at {}: formula {}, engine {}",
                        d.formula, d.point, d.formula_value, d.engine_value
                    );
                }
                for note in &o.notes {
                    let _ = writeln!(s, "    note: {note}");
                }
            }
            let _ = writeln!(s, "formula discrepancies: {}", r.discrepancy_count);
        }
        Report::Singular(r) => {
            let _ =
                writeln!(s, "singular vector test for fhat{}{}^{}, {}", r.k, r.params.n, r.m, params_line(&r.params));
            let _ = writeln!(s, "  criterion holds: {}", r.criterion);
            for x in &r.raised {
                let _ = writeln!(s, "  e{} image is zero: {}", x.i, x.zero);
            }
            let _ = writeln!(s, "  singular: {}, vector nonzero: {}", r.singular, r.vector_nonzero);
        }
        Report::Inverse(r) => {
            let _ = writeln!(s, "inverse Gram check, {}, depth {}", params_line(&r.params), r.depth);
            if let Some(err) = &r.error {
                let _ = writeln!(s, "  error {}: {}", err.kind, err.message);
            }
            for b in &r.blocks {
                let _ = writeln!(
                    s,
                    "  content {} (dimension {}): {}",
                    join_content(&b.content),
                    b.dimension,
                    verdict(b.left_identity && b.right_identity)
                );
            }
        }
        Report::FlipCompare(r) => {
            let _ = writeln!(s, "original vs flipped dynamical bases, {}, depth {}", params_line(&r.params), r.depth);
            for b in &r.blocks {
                let _ = writeln!(
                    s,
                    "  content {}: original det {} (generic {}), flipped det {} (generic {})",
                    join_content(&b.content),
                    b.original_det,
                    b.original_generic,
                    b.flipped_det,
                    b.flipped_generic
                );
            }
        }
    }
    let _ = writeln!(s, "overall: {}", verdict(report.passed()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::ratio;

    fn profile(n: usize) -> Params {
        Params::default_profile(n).unwrap()
    }

    #[test]
    fn gram_passes_and_serializes_rationals_as_strings() {
        let r = gram(&profile(2), 3).unwrap();
        assert!(r.passed());
        let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["command"], "gram");
        assert_eq!(v["q"], "2/1");
        let first = &v["blocks"][1]["norms"][0];
        assert!(first.as_str().unwrap().contains('/'));
    }

    #[test]
    fn degenerate_inverse_reports_witness() {
        let p = Params::new(2, rat(2), vec![rat(3), ratio(1, 4)]).unwrap();
        let r = inverse(&p, 3).unwrap();
        assert!(!r.passed());
        let Report::Inverse(inv) = &r else { panic!("wrong report") };
        let err = inv.error.as_ref().unwrap();
        assert_eq!(err.kind, "DegenerateWeight");
        assert_eq!(err.witness.as_deref(), Some("(2,0|1)"));
    }

    #[test]
    fn singular_agrees_with_criterion_both_ways() {
        for arrangement in [Arrangement::None, Arrangement::Positive, Arrangement::Negative] {
            let r = singular(&profile(3), 2, 2, arrangement).unwrap();
            let Report::Singular(s) = &r else { panic!("wrong report") };
            assert!(s.passed);
            assert_eq!(s.criterion, arrangement != Arrangement::None);
        }
    }

    #[test]
    fn flip_compare_detects_degeneration() {
        let p = Params::new(2, rat(2), vec![rat(3), ratio(1, 4)]).unwrap();
        let Report::FlipCompare(r) = flip_compare(&p, 3).unwrap() else { panic!("wrong report") };
        assert!(r.passed);
        let b = r.blocks.iter().find(|b| b.content == vec![2, 1]).unwrap();
        assert!(!b.original_independent && b.flipped_independent && !b.original_generic);
    }

    #[test]
    fn csv_and_text_render() {
        let r = verify(&[profile(2)], &[Suite::RowCommutativity], &SuiteConfig { depth: 2, power: 2 });
        let csv = r.render(Format::Csv).unwrap();
        assert!(csv.starts_with("suite,n,q,z"));
        assert!(csv.contains("row-commutativity,2,2/1,3/1;5/1"));
        assert!(r.render(Format::Text).unwrap().contains("overall: PASS"));
    }

    #[test]
    fn settings_choose_parameters() {
        let s = RunSettings { n: 2, trials: 2, ..Default::default() };
        let ps = s.all_params().unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[0], profile(2));
        let s = RunSettings { n: 2, q: Some(ratio(3, 2)), ..Default::default() };
        assert_eq!(s.base_params().unwrap().q(), &ratio(3, 2));
        assert_eq!(s.depth(), 4);
        let s = RunSettings { n: 2, seed: Some(5), ..Default::default() };
        assert_eq!(s.base_params().unwrap(), s.base_params().unwrap());
    }
}
