//! Verification suites.
//!
//! Each suite checks one family of identities at one specialization of the
//! highest weight. The engine (generator actions and pairings, built only from
//! the defining relations) is ground truth; closed formulas are compared
//! against it and every disagreement is recorded as a [`FormulaDiscrepancy`].
//! An engine error inside a suite counts as a failed check, never as a pass.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamical::{
    apply_atom, apply_dynscript, coordinate_matrix, cyclic_gram, echeck_monomial, ehat_monomial, ehat_sigma_monomial,
    fcheck_monomial, fhat_flip_monomial, fhat_monomial, pair_dyn, DynAtom, DynScript,
};
use crate::error::{Error, Result};
use crate::formulas::{
    a_row, arranged_singular_params, arrays_up_to, b_row, b_total, c_km, compare, d_il, genericity_witness,
    longest_root_power_norm, phi_monomial, random_generic_params, reduction_sides, root_power_norm, singular_criterion,
    sl3_closed_form, two_root_pairing, FormulaDiscrepancy,
};
use crate::freealg::{
    enumerate_pbw, enumerate_words, expand_root_vector, serre_span, TriangularArray, WeightSpace, Word,
};
use crate::linalg::{determinant, is_identity, mat_mul, transpose, Matrix};
use crate::qscalars::{cartan_pairing, fmt_rational, Params, Rational, WeightContent};
use crate::verma::{EScript, Verma, VermaVector};

/// The available suites. Names are stable and used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DefiningRelations,
    DimensionOracle,
    CyclicDiagonal,
    ContravariantDiagonal,
    RowFactors,
    RowCommutativity,
    OrderingIndependence,
    AlternativeDisplays,
    RaisingOnDynamical,
    Sl3ClosedForm,
    RootPowerNorms,
    ReductionIdentities,
    InversePairing,
    SingularVectors,
    FlipDegeneration,
    RootVectorCommutation,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::DefiningRelations,
        Suite::DimensionOracle,
        Suite::CyclicDiagonal,
        Suite::ContravariantDiagonal,
        Suite::RowFactors,
        Suite::RowCommutativity,
        Suite::OrderingIndependence,
        Suite::AlternativeDisplays,
        Suite::RaisingOnDynamical,
        Suite::Sl3ClosedForm,
        Suite::RootPowerNorms,
        Suite::ReductionIdentities,
        Suite::InversePairing,
        Suite::SingularVectors,
        Suite::FlipDegeneration,
        Suite::RootVectorCommutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DefiningRelations => "defining-relations",
            Suite::DimensionOracle => "dimension-oracle",
            Suite::CyclicDiagonal => "cyclic-diagonal",
            Suite::ContravariantDiagonal => "contravariant-diagonal",
            Suite::RowFactors => "row-factors",
            Suite::RowCommutativity => "row-commutativity",
            Suite::OrderingIndependence => "ordering-independence",
            Suite::AlternativeDisplays => "alternative-displays",
            Suite::RaisingOnDynamical => "raising-on-dynamical",
            Suite::Sl3ClosedForm => "sl3-closed-form",
            Suite::RootPowerNorms => "root-power-norms",
            Suite::ReductionIdentities => "reduction-identities",
            Suite::InversePairing => "inverse-pairing",
            Suite::SingularVectors => "singular-vectors",
            Suite::FlipDegeneration => "flip-degeneration",
            Suite::RootVectorCommutation => "root-vector-commutation",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Suite::DefiningRelations => "commutator, torus and Serre relations as operators on basis vectors",
            Suite::DimensionOracle => "PBW count equals words minus Serre rank; rewriting agrees with elimination",
            Suite::CyclicDiagonal => "cyclic pairing of the dynamical bases is diagonal with entries B_l",
            Suite::ContravariantDiagonal => "contravariant Gram of the dynamical basis is diagonal with entries B_l",
            Suite::RowFactors => "single-row norms, replacement factors and the two-root pairing",
            Suite::RowCommutativity => "dynamical root vectors sharing a first index commute",
            Suite::OrderingIndependence => "positive dynamical monomials do not depend on the order within rows",
            Suite::AlternativeDisplays => "the commutator-style expression of the dynamical root vectors",
            Suite::RaisingOnDynamical => "raising operators on dynamical vectors built from singular inputs",
            Suite::Sl3ClosedForm => "rank-two closed product for B_l against the general formula and the engine",
            Suite::RootPowerNorms => "pairing of powers of root vectors with their dynamical duals",
            Suite::ReductionIdentities => "recursions for D_il and the reduction modulo the lower root ideal",
            Suite::InversePairing => "the canonical element built from the dynamical bases inverts the Gram matrix",
            Suite::SingularVectors => "dynamical Serre relation, intertwining and singular vector criteria",
            Suite::FlipDegeneration => {
                "the original and diagram-flipped dynamical bases at generic and special weights"
            }
            Suite::RootVectorCommutation => "commutation of root vectors and membership in root ideals",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.iter().copied().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Parse(format!("unknown suite {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Size limits for one suite run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Largest total content degree of tested weights and vectors.
    pub depth: u32,
    /// Largest exponent for suites that raise a root vector to a power.
    pub power: u32,
}

impl SuiteConfig {
    /// The default profile: depth 4 up to rank 2, depth 3 above; powers up to 3.
    pub fn profile(n: usize) -> Self {
        SuiteConfig { depth: if n <= 2 { 4 } else { 3 }, power: 3 }
    }
}

/// A formula disagreement in serializable form, rationals written `num/den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyRecord {
    pub formula: String,
    pub point: String,
    pub formula_value: String,
    pub engine_value: String,
}

impl From<&FormulaDiscrepancy> for DiscrepancyRecord {
    fn from(d: &FormulaDiscrepancy) -> Self {
        DiscrepancyRecord {
            formula: d.formula.clone(),
            point: d.point.clone(),
            formula_value: fmt_rational(&d.formula_value),
            engine_value: fmt_rational(&d.engine_value),
        }
    }
}

/// The result of one suite at one specialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub n: usize,
    pub q: String,
    pub z: Vec<String>,
    pub depth: u32,
    pub power: u32,
    pub passed: bool,
    /// Set when the suite does not apply to these parameters (for example a rank restriction).
    pub skipped: Option<String>,
    pub checks: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
    pub discrepancy_count: u64,
    /// The first few discrepancies; `discrepancy_count` has the total.
    pub discrepancies: Vec<DiscrepancyRecord>,
    pub notes: Vec<String>,
}

const KEPT_DISCREPANCIES: usize = 16;

#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    counterexample: Option<String>,
    discrepancy_count: u64,
    discrepancies: Vec<FormulaDiscrepancy>,
    notes: Vec<String>,
    skipped: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failures += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(what);
        }
    }

    fn compare(
        &mut self,
        formula: &str,
        point: impl FnOnce() -> String,
        formula_value: Rational,
        engine_value: Rational,
    ) {
        self.checks += 1;
        if let Err(d) = compare(formula, point, formula_value, engine_value) {
            self.discrepancy_count += 1;
            if self.discrepancies.len() < KEPT_DISCREPANCIES {
                self.discrepancies.push(*d);
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.skipped = Some(reason.into());
    }
}

/// Runs one suite at one specialization.
pub fn run_suite(suite: Suite, p: &Params, cfg: &SuiteConfig) -> SuiteOutcome {
    let e = Verma::new(p.clone());
    let mut t = Tally::default();
    let result = match suite {
        Suite::DefiningRelations => defining_relations(&e, cfg, &mut t),
        Suite::DimensionOracle => dimension_oracle(&e, cfg, &mut t),
        Suite::CyclicDiagonal => cyclic_diagonal(&e, cfg, &mut t),
        Suite::ContravariantDiagonal => contravariant_diagonal(&e, cfg, &mut t),
        Suite::RowFactors => row_factors(&e, cfg, &mut t),
        Suite::RowCommutativity => row_commutativity(&e, cfg, &mut t),
        Suite::OrderingIndependence => ordering_independence(&e, cfg, &mut t),
        Suite::AlternativeDisplays => alternative_displays(&e, cfg, &mut t),
        Suite::RaisingOnDynamical => raising_on_dynamical(&e, cfg, &mut t),
        Suite::Sl3ClosedForm => sl3_closed_form_suite(&e, cfg, &mut t),
        Suite::RootPowerNorms => root_power_norms(&e, cfg, &mut t),
        Suite::ReductionIdentities => reduction_identities(&e, cfg, &mut t),
        Suite::InversePairing => inverse_pairing(&e, cfg, &mut t),
        Suite::SingularVectors => singular_vectors(&e, cfg, &mut t),
        Suite::FlipDegeneration => flip_degeneration(&e, cfg, &mut t),
        Suite::RootVectorCommutation => root_vector_commutation(&e, cfg, &mut t),
    };
    if let Err(err) = result {
        t.fail(format!("engine error: {err}"));
    }
    if t.checks == 0 && t.failures == 0 && t.skipped.is_none() {
        t.skip("no instances at this rank and depth");
    }
    SuiteOutcome {
        suite,
        n: p.rank(),
        q: fmt_rational(p.q()),
        z: p.z().iter().map(fmt_rational).collect(),
        depth: cfg.depth,
        power: cfg.power,
        passed: t.failures == 0 && t.discrepancy_count == 0,
        skipped: t.skipped,
        checks: t.checks,
        failures: t.failures,
        counterexample: t.counterexample,
        discrepancy_count: t.discrepancy_count,
        discrepancies: t.discrepancies.iter().map(DiscrepancyRecord::from).collect(),
        notes: t.notes,
    }
}

/// The default profile followed by `trials` random specializations generic up to `depth`.
pub fn specializations(n: usize, trials: u32, seed: u64, depth: u32) -> Result<Vec<Params>> {
    let mut out = vec![Params::default_profile(n)?];
    for k in 0..trials as u64 {
        out.push(random_generic_params(n, seed.wrapping_add(k), depth)?);
    }
    Ok(out)
}

/// Runs every listed suite at every listed specialization.
pub fn run_suites(suites: &[Suite], params: &[Params], cfg: &SuiteConfig) -> Vec<SuiteOutcome> {
    params.iter().flat_map(|p| suites.iter().map(move |&s| run_suite(s, p, cfg))).collect()
}

// ---------------------------------------------------------------------------
// Helpers

fn basis_upto(e: &Verma, depth: u32) -> Vec<(TriangularArray, VermaVector)> {
    WeightContent::all_up_to_degree(e.rank(), depth as i32)
        .iter()
        .flat_map(|m| e.pbw_list(m).iter().map(|l| (l.clone(), VermaVector::basis(l.clone()))).collect::<Vec<_>>())
        .collect()
}

fn same(a: &VermaVector, b: &VermaVector) -> bool {
    a.sub(b).is_zero()
}

fn atom(e: &Verma, a: DynAtom, v: &VermaVector) -> Result<VermaVector> {
    apply_atom(e, a, v)
}

fn script(e: &Verma, atoms: &[DynAtom], v: &VermaVector) -> Result<VermaVector> {
    apply_dynscript(e, &DynScript(atoms.to_vec()), v)
}

fn f_word(e: &Verma, letters: &[usize], v: &VermaVector) -> Result<VermaVector> {
    e.act_word(&Word::from_letters(letters), v)
}

fn e_word(e: &Verma, letters: &[usize], v: &VermaVector) -> Result<VermaVector> {
    e.apply_escript(&EScript(letters.to_vec()), v)
}

/// `c` with `x = c·w` when `w ≠ 0`; `None` when no such scalar exists.
fn proportion(x: &VermaVector, w: &VermaVector) -> Option<Rational> {
    let (l, c) = w.coords().iter().next()?;
    let ratio = x.coord(l) / c;
    same(x, &w.scale(&ratio)).then_some(ratio)
}

fn label(l: &TriangularArray) -> String {
    format!("f{l}v")
}

/// All permutations of `0..k`, identity first.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for t in 0..used.len() {
            if !used[t] {
                used[t] = true;
                prefix.push(t);
                go(prefix, used, out);
                prefix.pop();
                used[t] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Every choice of one permutation per row.
fn row_permutations(l: &TriangularArray) -> Vec<Vec<Vec<usize>>> {
    let mut acc: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for k in 1..=l.rank() {
        let size = l.row(k).iter().sum::<u32>() as usize;
        let perms = permutations(size);
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |s| {
                    let mut next = prefix.clone();
                    next.push(s.clone());
                    next
                })
            })
            .collect();
    }
    acc
}

/// Arrays whose only nonzero row is `k`, of total content degree at most `depth`.
fn single_row_arrays(n: usize, k: usize, depth: u32) -> Vec<TriangularArray> {
    arrays_up_to(n, depth)
        .into_iter()
        .filter(|l| l.total() > 0 && (1..=n).all(|r| r == k || l.row(r).iter().all(|&x| x == 0)))
        .collect()
}

fn power_array(n: usize, i: usize, j: usize, l: u32) -> TriangularArray {
    let mut a = TriangularArray::zero(n);
    a.set(i, j, l);
    a
}

// ---------------------------------------------------------------------------
// Suites

fn defining_relations(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let two = p.q_int(2);
    for (l, v) in basis_upto(e, cfg.depth) {
        let m = v.content().clone();
        for i in 1..=n {
            for j in 1..=n {
                let comm = e.act_e(i, &e.act_f(j, &v)?)?.sub(&e.act_f(j, &e.act_e(i, &v)?)?);
                let want = if i == j { v.scale(&p.mu_bracket(&m, i, i, 0)) } else { VermaVector::zero(m.clone()) };
                t.check(same(&comm, &want), || format!("[e{i},f{j}] on {}", label(&l)));

                let a = cartan_pairing(n, i, j)?;
                let conj_e = e.act_t(i, false, &e.act_e(j, &e.act_t(i, true, &v)?)?)?;
                t.check(same(&conj_e, &e.act_e(j, &v)?.scale(&p.q_pow(a))), || {
                    format!("t{i} e{j} t{i}^-1 on {}", label(&l))
                });
                let conj_f = e.act_t(i, false, &e.act_f(j, &e.act_t(i, true, &v)?)?)?;
                t.check(same(&conj_f, &e.act_f(j, &v)?.scale(&p.q_pow(-a))), || {
                    format!("t{i} f{j} t{i}^-1 on {}", label(&l))
                });

                if i.abs_diff(j) == 1 {
                    let es = e_word(e, &[i, i, j], &v)?.sub(&e_word(e, &[i, j, i], &v)?.scale(&two)).add(&e_word(
                        e,
                        &[j, i, i],
                        &v,
                    )?);
                    t.check(es.is_zero(), || format!("e-Serre ({i},{j}) on {}", label(&l)));
                    let fs = f_word(e, &[i, i, j], &v)?.sub(&f_word(e, &[i, j, i], &v)?.scale(&two)).add(&f_word(
                        e,
                        &[j, i, i],
                        &v,
                    )?);
                    t.check(fs.is_zero(), || format!("f-Serre ({i},{j}) on {}", label(&l)));
                } else if i + 1 < j {
                    let es = e_word(e, &[i, j], &v)?.sub(&e_word(e, &[j, i], &v)?);
                    t.check(es.is_zero(), || format!("e{i} e{j} = e{j} e{i} on {}", label(&l)));
                    let fs = f_word(e, &[i, j], &v)?.sub(&f_word(e, &[j, i], &v)?);
                    t.check(fs.is_zero(), || format!("f{i} f{j} = f{j} f{i} on {}", label(&l)));
                }
            }
        }
    }
    Ok(())
}

fn dimension_oracle(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let one = Rational::one();
    for m in WeightContent::all_up_to_degree(n, cfg.depth as i32) {
        let words = enumerate_words(n, &m);
        let pbw = enumerate_pbw(n, &m);
        let serre = serre_span(p, &m)?;
        t.check(pbw.len() + serre.rank() == words.len(), || {
            format!("content {m}: {} PBW arrays, {} words, Serre rank {}", pbw.len(), words.len(), serre.rank())
        });
        t.check(e.pbw_list(&m).len() == pbw.len(), || format!("content {m}: cached PBW list has the wrong length"));

        let space = WeightSpace::build(p, &m)?;
        for w in space.words() {
            let dense = space.straighten_dense(&crate::freealg::FreeElement::monomial(n, w.clone(), one.clone()));
            let rewritten = e.straightener().word_times(w, &TriangularArray::zero(n))?;
            let agree = rewritten.keys().all(|l| space.pbw_position(l).is_some())
                && space.pbw().iter().zip(&dense).all(|(l, d)| rewritten.get(l).cloned().unwrap_or_default() == *d);
            t.check(agree, || format!("content {m}: rewriting and elimination disagree on word {w:?}"));
        }
    }
    Ok(())
}

fn cyclic_diagonal(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let p = e.params();
    for m in WeightContent::all_up_to_degree(e.rank(), cfg.depth as i32) {
        let pbw = e.pbw_list(&m);
        let g = cyclic_gram(e, &m)?;
        for (a, k) in pbw.iter().enumerate() {
            for (b, l) in pbw.iter().enumerate() {
                if a == b {
                    t.compare("diagonal norm B_l", || format!("{p}, l={l}"), b_total(p, l)?, g[a][b].clone());
                } else {
                    t.check(g[a][b].is_zero(), || {
                        format!("cyclic pairing of k={k} with l={l} is {}", fmt_rational(&g[a][b]))
                    });
                }
            }
        }
    }
    Ok(())
}

fn contravariant_diagonal(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let p = e.params();
    let top = VermaVector::highest(e.rank());
    for m in WeightContent::all_up_to_degree(e.rank(), cfg.depth as i32) {
        let pbw = e.pbw_list(&m);
        let std = e.pbw_basis(&m)?;
        let g_std = e.gram_contravariant(&m, &std)?;
        t.check(g_std == transpose(&g_std), || format!("standard Gram at {m} is not symmetric"));

        let vectors: Vec<VermaVector> =
            pbw.iter().map(|l| apply_dynscript(e, &fhat_monomial(l), &top)).collect::<Result<_>>()?;
        let g = e.gram_contravariant(&m, &vectors)?;
        for (a, k) in pbw.iter().enumerate() {
            let s = ehat_monomial(k);
            for (b, l) in pbw.iter().enumerate() {
                let via_script = pair_dyn(e, &s, &vectors[b])?;
                t.check(via_script == g[a][b], || {
                    format!("contravariant pairing of k={k}, l={l} differs from the positive monomial pairing")
                });
                if a == b {
                    t.compare("contravariant norm B_l", || format!("{p}, l={l}"), b_total(p, l)?, g[a][b].clone());
                } else {
                    t.check(g[a][b].is_zero(), || format!("contravariant pairing of k={k} with l={l} is nonzero"));
                }
            }
        }
    }
    Ok(())
}

fn row_factors(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let top = VermaVector::highest(n);
    let zero = WeightContent::zero(n);
    for k in 1..=n {
        for l in single_row_arrays(n, k, cfg.depth) {
            let row = l.row(k).to_vec();
            let dynamic = apply_dynscript(e, &fhat_monomial(&l), &top)?;
            // The highest weight vector is singular for every root, so the row norm applies at each k.
            t.compare(
                "row norm B_row",
                || format!("{p}, row {k} = {l}"),
                b_row(p, &zero, k, &row)?,
                pair_dyn(e, &echeck_monomial(&l), &dynamic)?,
            );
            if k == 1 {
                let standard = VermaVector::basis(l.clone());
                let normal = ehat_monomial(&l);
                t.compare(
                    "row replacement factor A_row",
                    || format!("{p}, row {l}"),
                    a_row(p, &zero, 1, &row)? * pair_dyn(e, &normal, &standard)?,
                    pair_dyn(e, &normal, &dynamic)?,
                );
                let product = (1..=n).try_fold(Rational::one(), |acc, j| {
                    Ok::<_, Error>(acc * root_power_norm(p, &zero, j, l.get(1, j))?)
                })?;
                t.compare(
                    "product of root power norms",
                    || format!("{p}, row {l}"),
                    product,
                    pair_dyn(e, &echeck_monomial(&l), &standard)?,
                );
            }
        }
    }
    for mm in 2..=n {
        for k in 1..mm {
            let s =
                DynScript(vec![DynAtom::Ehat(1, mm), DynAtom::Ehat(1, k), DynAtom::Fhat(1, mm), DynAtom::Fhat(1, k)]);
            t.compare(
                "two-root pairing",
                || format!("{p}, roots (1,{k}) and (1,{mm})"),
                two_root_pairing(p, &zero, k, mm)?,
                pair_dyn(e, &s, &top)?,
            );
        }
    }
    Ok(())
}

fn row_commutativity(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    for (l, v) in basis_upto(e, cfg.depth) {
        for i in 1..=n {
            for k in i..=n {
                for m in k + 1..=n {
                    let (fa, fb) = (DynAtom::Fhat(i, k), DynAtom::Fhat(i, m));
                    let lhs = script(e, &[fa, fb], &v)?;
                    let rhs = script(e, &[fb, fa], &v)?;
                    t.check(same(&lhs, &rhs), || format!("fhat{i}{k} and fhat{i}{m} on {}", label(&l)));
                    let (ea, eb) = (DynAtom::Ehat(i, k), DynAtom::Ehat(i, m));
                    let lhs = script(e, &[ea, eb], &v)?;
                    let rhs = script(e, &[eb, ea], &v)?;
                    t.check(same(&lhs, &rhs), || format!("ehat{i}{k} and ehat{i}{m} on {}", label(&l)));
                }
            }
        }
        for m in 2..=n {
            let lhs = script(e, &[DynAtom::F(1), DynAtom::Fhat(1, m)], &v)?;
            let rhs = script(e, &[DynAtom::Fhat(1, m), DynAtom::F(1)], &v)?;
            t.check(same(&lhs, &rhs), || format!("f1 and fhat1{m} on {}", label(&l)));
            let lhs = script(e, &[DynAtom::E(1), DynAtom::Ehat(1, m)], &v)?;
            let rhs = script(e, &[DynAtom::Ehat(1, m), DynAtom::E(1)], &v)?;
            t.check(same(&lhs, &rhs), || format!("e1 and ehat1{m} on {}", label(&l)));
        }
    }
    Ok(())
}

fn ordering_independence(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let basis = basis_upto(e, cfg.depth);
    for l in arrays_up_to(n, cfg.depth) {
        let normal = ehat_monomial(&l);
        let mut variants: HashSet<DynScript> = HashSet::new();
        for sigma in row_permutations(&l) {
            variants.insert(ehat_sigma_monomial(&l, &sigma)?);
        }
        variants.insert(echeck_monomial(&l));
        variants.remove(&normal);
        let c = l.content();
        for (b, v) in &basis {
            if !v.content().sub(&c).is_admissible() {
                continue;
            }
            let reference = apply_dynscript(e, &normal, v)?;
            for s in &variants {
                let other = apply_dynscript(e, s, v)?;
                t.check(same(&reference, &other), || format!("row reordering of e-monomial {l} on {}", label(b)));
            }
            let f1 = apply_dynscript(e, &fhat_monomial(&l), v)?;
            let f2 = apply_dynscript(e, &fcheck_monomial(&l), v)?;
            t.check(same(&f1, &f2), || format!("row reordering of f-monomial {l} on {}", label(b)));
        }
    }
    Ok(())
}

fn alternative_displays(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    for (l, v) in basis_upto(e, cfg.depth) {
        let m = v.content().clone();
        for i in 1..=n {
            for k in i + 1..=n {
                // f̂_ik = f_i f̂_{i+1,k} [h_{i+1,k}+1] − f̂_{i+1,k} f_i [h_{i+1,k}], brackets at the input weight.
                let lhs = atom(e, DynAtom::Fhat(i, k), &v)?;
                let a = script(e, &[DynAtom::F(i), DynAtom::Fhat(i + 1, k)], &v)?.scale(&p.mu_bracket(&m, i + 1, k, 1));
                let b = script(e, &[DynAtom::Fhat(i + 1, k), DynAtom::F(i)], &v)?.scale(&p.mu_bracket(&m, i + 1, k, 0));
                t.check(same(&lhs, &a.sub(&b)), || format!("commutator form of fhat{i}{k} on {}", label(&l)));

                // ê_ik = [h_{i+1,k}+1] ê_{i+1,k} e_i − [h_{i+1,k}] e_i ê_{i+1,k}, brackets at the output weight.
                let out = m.sub(&WeightContent::root(n, i, k));
                if !out.is_admissible() {
                    continue;
                }
                let lhs = atom(e, DynAtom::Ehat(i, k), &v)?;
                let a =
                    script(e, &[DynAtom::Ehat(i + 1, k), DynAtom::E(i)], &v)?.scale(&p.mu_bracket(&out, i + 1, k, 1));
                let b =
                    script(e, &[DynAtom::E(i), DynAtom::Ehat(i + 1, k)], &v)?.scale(&p.mu_bracket(&out, i + 1, k, 0));
                t.check(same(&lhs, &a.sub(&b)), || format!("commutator form of ehat{i}{k} on {}", label(&l)));
            }
        }
    }
    Ok(())
}

fn raising_on_dynamical(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    for m in WeightContent::all_up_to_degree(n, cfg.depth as i32) {
        for i in 1..=n {
            for j in i + 1..=n {
                let upper: Vec<usize> = (i + 1..=j).collect();
                for w in e.joint_kernel(&m, &upper)? {
                    let x = atom(e, DynAtom::Fhat(i, j), &w)?;
                    for &k in &upper {
                        t.check(e.act_e(k, &x)?.is_zero(), || {
                            format!("e{k} fhat{i}{j} w nonzero for w in the kernel of e{i}+1..e{j} at {m}")
                        });
                    }
                }
                let all: Vec<usize> = (i..=j).collect();
                for w in e.joint_kernel(&m, &all)? {
                    let x = atom(e, DynAtom::Fhat(i, j), &w)?;
                    let want = atom(e, DynAtom::Fhat(i + 1, j), &w)?.scale(&p.mu_bracket(&m, i, j, 0));
                    t.check(same(&e.act_e(i, &x)?, &want), || {
                        format!("e{i} fhat{i}{j} w at {m} differs from the bracket times fhat{}{j} w", i + 1)
                    });
                }
            }
        }
    }
    // Vectors built from the rows above k are singular for the simple roots k..n.
    let top = VermaVector::highest(n);
    for l in arrays_up_to(n, cfg.depth) {
        let Some(k) = (1..=n).rev().find(|&k| l.row(k).iter().any(|&x| x > 0)).map(|k| k + 1) else {
            continue;
        };
        let x = apply_dynscript(e, &fhat_monomial(&l), &top)?;
        for s in k..=n {
            t.check(e.act_e(s, &x)?.is_zero(), || format!("e{s} does not kill the dynamical vector {l}"));
        }
    }
    Ok(())
}

fn sl3_closed_form_suite(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let p = e.params();
    if p.rank() != 2 {
        t.skip("the closed product is stated for rank 2");
        return Ok(());
    }
    let top = VermaVector::highest(2);
    for total in 0..=cfg.depth {
        for m in 0..=total {
            for l in 0..=total - m {
                let k = total - m - l;
                let arr = TriangularArray::from_entries(2, vec![m, l, k])?;
                let closed = sl3_closed_form(p, m, l, k)?;
                t.compare(
                    "rank-two closed product vs B_l",
                    || format!("{p}, (m,l,k)=({m},{l},{k})"),
                    closed.clone(),
                    b_total(p, &arr)?,
                );
                let engine = pair_dyn(e, &echeck_monomial(&arr), &apply_dynscript(e, &fhat_monomial(&arr), &top)?)?;
                t.compare("rank-two closed product", || format!("{p}, (m,l,k)=({m},{l},{k})"), closed, engine);
            }
        }
    }
    Ok(())
}

fn root_power_norms(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let zero = WeightContent::zero(n);
    for j in 1..=n {
        for l in 1..=cfg.power {
            let v = VermaVector::basis(power_array(n, 1, j, l));
            let engine = pair_dyn(e, &DynScript(vec![DynAtom::Ehat(1, j); l as usize]), &v)?;
            let formula = if j == n { longest_root_power_norm(p, &zero, l) } else { root_power_norm(p, &zero, j, l)? };
            t.compare("root power norm", || format!("{p}, root (1,{j}), power {l}"), formula, engine.clone());
            if l == 1 {
                t.compare(
                    "root power norm at power one",
                    || format!("{p}, root (1,{j})"),
                    c_km(p, &zero, 1, j)?,
                    engine,
                );
            }
        }
    }
    Ok(())
}

fn reduction_identities(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let zero = WeightContent::zero(n);
    if n >= 2 {
        for m in WeightContent::all_up_to_degree(n, 1) {
            for i in 1..=n {
                for l in 1..=cfg.power {
                    let r = reduction_sides(p, &m, i, l)?;
                    t.compare("recursion for D_il", || format!("{p}, weight {m}, i={i}, l={l}"), r.rhs, r.lhs);
                }
            }
        }
    }
    for i in 1..=n {
        let phi = phi_monomial(n, i)?;
        for l in 1..=cfg.power {
            let x = e.apply_escript(&phi, &VermaVector::basis(power_array(n, 1, n, l)))?;
            let w = VermaVector::basis(power_array(n, 1, n, l - 1));
            let d = d_il(p, &zero, i, l)?;
            if n == 1 {
                t.compare(
                    "reduction coefficient D_il",
                    || format!("{p}, i={i}, l={l}"),
                    d,
                    x.coord(&power_array(n, 1, n, l - 1)),
                );
                continue;
            }
            let px = e.ideal_quotient_project(2, &x)?;
            let pw = e.ideal_quotient_project(2, &w)?;
            let pivot = pw.residue.iter().position(|c| !c.is_zero());
            let Some(pivot) = pivot else {
                t.fail(format!("f_1n^{} v lies in the lower root ideal", l - 1));
                continue;
            };
            let c = &px.residue[pivot] / &pw.residue[pivot];
            let proportional = px.residue.iter().zip(&pw.residue).all(|(a, b)| *a == &c * b);
            t.check(proportional, || {
                format!("phi_{i} f_1n^{l} v is not a multiple of f_1n^{} v modulo the lower ideal", l - 1)
            });
            t.compare("reduction coefficient D_il", || format!("{p}, i={i}, l={l}"), d.clone(), c);
            let diff = x.sub(&w.scale(&d));
            t.check(e.ideal_quotient_project(2, &diff)?.in_ideal, || {
                format!("phi_{i} f_1n^{l} v − D f_1n^{} v is not in the lower root ideal", l - 1)
            });
        }
    }
    Ok(())
}

fn inverse_pairing(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let p = e.params();
    if let Some(w) = genericity_witness(p, cfg.depth)? {
        t.fail(format!("weight is degenerate: B_l vanishes at l={w}"));
        return Ok(());
    }
    for m in WeightContent::all_up_to_degree(e.rank(), cfg.depth as i32) {
        let (left, right) = canonical_inverse_check(e, &m)?;
        t.check(left, || format!("canonical element times Gram is not the identity at {m}"));
        t.check(right, || format!("Gram times canonical element is not the identity at {m}"));
    }
    Ok(())
}

/// Builds `K[b][a] = Σ_l F[l][b]·Č[l][a] / B_l` from the coordinates of the
/// dynamical vectors `f̂(l)v` and `f̌(l)v`, and reports whether `K·G` and `G·K`
/// are the identity for the standard contravariant Gram matrix `G` at `m`.
/// Requires `B_l ≠ 0` for every array of content `m`.
pub fn canonical_inverse_check(e: &Verma, m: &WeightContent) -> Result<(bool, bool)> {
    let p = e.params();
    let pbw = e.pbw_list(m);
    let fhat: Vec<DynScript> = pbw.iter().map(fhat_monomial).collect();
    let fcheck: Vec<DynScript> = pbw.iter().map(fcheck_monomial).collect();
    let f = coordinate_matrix(e, m, &fhat)?;
    let c = coordinate_matrix(e, m, &fcheck)?;
    let g = e.gram_contravariant(m, &e.pbw_basis(m)?)?;
    let d = pbw.len();
    let mut k: Matrix = vec![vec![Rational::zero(); d]; d];
    for (x, l) in pbw.iter().enumerate() {
        let norm = b_total(p, l)?;
        if norm.is_zero() {
            return Err(Error::DegenerateWeight { witness: l.to_string() });
        }
        let inv = norm.recip();
        for b in 0..d {
            if f[x][b].is_zero() {
                continue;
            }
            let fb = &f[x][b] * &inv;
            for a in 0..d {
                k[b][a] += &fb * &c[x][a];
            }
        }
    }
    Ok((is_identity(&mat_mul(&k, &g)), is_identity(&mat_mul(&g, &k))))
}

fn singular_vectors(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let top = VermaVector::highest(n);
    let two = p.q_int(2);

    if n >= 2 {
        let fh = DynAtom::Fhat(2, n);
        for (l, v) in basis_upto(e, cfg.depth) {
            let a = script(e, &[DynAtom::F(1), fh, fh], &v)?;
            let b = script(e, &[fh, DynAtom::F(1), fh], &v)?;
            let c = script(e, &[fh, fh, DynAtom::F(1)], &v)?;
            t.check(a.sub(&b.scale(&two)).add(&c).is_zero(), || format!("dynamical Serre relation on {}", label(&l)));

            let lhs = script(e, &[DynAtom::Fbar, fh], &v)?;
            let rhs = script(e, &[fh, DynAtom::Fhat(1, n)], &v)?;
            t.check(same(&lhs, &rhs), || format!("barred vector intertwining on {}", label(&l)));

            if v.content().degree() as u32 >= cfg.depth {
                continue;
            }
            let m = v.content().clone();
            let e1v = e.act_e(1, &v)?;
            for pw in 1..=cfg.power {
                let lhs = e.act_e(1, &script(e, &vec![DynAtom::Fhat(1, n); pw as usize], &v)?)?;
                let mut lower = vec![fh];
                lower.extend(std::iter::repeat_n(DynAtom::Fhat(1, n), pw as usize - 1));
                let main = script(e, &lower, &v)?.scale(&(p.q_int(pw as i32) * p.mu_bracket(&m, 1, n, 1 - pw as i32)));
                let rest = script(e, &vec![DynAtom::Fbar; pw as usize], &e1v)?;
                t.check(same(&lhs, &main.add(&rest)), || format!("raising a power {pw} of fhat1{n} on {}", label(&l)));
            }
        }
    }

    let zero = WeightContent::zero(n);
    for k in 1..=n {
        for m in 1..=cfg.power {
            let x = script(e, &vec![DynAtom::Fhat(k, n); m as usize], &top)?;
            let mut lower: Vec<DynAtom> = vec![DynAtom::Fhat(k, n); m as usize - 1];
            if k < n {
                lower.insert(0, DynAtom::Fhat(k + 1, n));
            }
            let w = script(e, &lower, &top)?;
            let coeff = p.q_int(m as i32) * p.mu_bracket(&zero, k, n, 1 - m as i32);
            for i in 1..=n {
                let y = e.act_e(i, &x)?;
                if i != k {
                    t.check(y.is_zero(), || format!("e{i} fhat{k}{n}^{m} v is nonzero"));
                } else {
                    match proportion(&y, &w) {
                        Some(c) => t.compare(
                            "raising a power of a dynamical root vector",
                            || format!("{p}, k={k}, m={m}"),
                            coeff.clone(),
                            c,
                        ),
                        None => t.fail(format!("e{k} fhat{k}{n}^{m} v is not a multiple of the lowered vector")),
                    }
                }
            }

            if singular_criterion(p, k, m)? {
                let all_zero = (1..=n).map(|i| e.act_e(i, &x)).collect::<Result<Vec<_>>>()?.iter().all(|y| y.is_zero());
                t.check(all_zero, || format!("criterion holds but fhat{k}{n}^{m} v is not singular"));
            } else {
                t.check(!e.act_e(k, &x)?.is_zero(), || format!("criterion fails but e{k} kills fhat{k}{n}^{m} v"));
            }
            for negative in [false, true] {
                let pa = arranged_singular_params(p, k, m, negative)?;
                t.check(singular_criterion(&pa, k, m)?, || format!("arranged weight {pa} misses the criterion"));
                let ea = Verma::new(pa.clone());
                let xa = apply_dynscript(&ea, &DynScript(vec![DynAtom::Fhat(k, n); m as usize]), &top)?;
                t.check(!xa.is_zero(), || format!("fhat{k}{n}^{m} v vanishes at {pa}"));
                for i in 1..=n {
                    t.check(ea.act_e(i, &xa)?.is_zero(), || format!("e{i} fhat{k}{n}^{m} v nonzero at arranged {pa}"));
                }
                nonvanishing(&ea, t)?;
            }
        }
    }
    nonvanishing(e, t)
}

fn nonvanishing(e: &Verma, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let top = VermaVector::highest(n);
    for i in 1..=n {
        for k in i..=n {
            t.check(!atom(e, DynAtom::Fhat(i, k), &top)?.is_zero(), || {
                format!("fhat{i}{k} v vanishes at {}", e.params())
            });
        }
    }
    Ok(())
}

/// Determinants of the coordinate matrices of the original dynamical vectors
/// `f̂(l)v` and of the diagram-flipped ones, both of content `m`.
pub fn content_determinants(e: &Verma, m: &WeightContent) -> Result<(Rational, Rational)> {
    let n = e.rank();
    let orig: Vec<DynScript> = e.pbw_list(m).iter().map(fhat_monomial).collect();
    let mirrored = WeightContent(m.0.iter().rev().copied().collect());
    let flip: Vec<DynScript> = enumerate_pbw(n, &mirrored).iter().map(fhat_flip_monomial).collect();
    Ok((determinant(&coordinate_matrix(e, m, &orig)?), determinant(&coordinate_matrix(e, m, &flip)?)))
}

fn flip_degeneration(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let generic = genericity_witness(p, cfg.depth)?.is_none();
    let mirror_z: Vec<Rational> = p.z().iter().rev().cloned().collect();
    let mirror_generic = genericity_witness(&p.with_z(mirror_z)?, cfg.depth)?.is_none();
    for m in WeightContent::all_up_to_degree(n, cfg.depth as i32) {
        let (d0, d1) = content_determinants(e, &m)?;
        if generic {
            t.check(!d0.is_zero(), || format!("original dynamical basis degenerates at {m} for a generic weight"));
        }
        if mirror_generic {
            t.check(!d1.is_zero(), || format!("flipped dynamical basis degenerates at {m} for a generic weight"));
        }
    }
    if !(generic && mirror_generic) {
        t.note("weight is not generic for both orientations; only the applicable determinants were checked");
    }
    if n != 2 {
        return Ok(());
    }
    // Arrange q^{λ_2} = q^{-2}: the original basis degenerates at content (2,1), the flipped one does not.
    let special = q_inverse_square(p);
    for (slot, content) in [(1usize, [2, 1]), (0usize, [1, 2])] {
        let mut z = p.z().to_vec();
        z[slot] = special.clone();
        let pa = p.with_z(z)?;
        let ea = Verma::new(pa.clone());
        let m = WeightContent::new(content.to_vec());
        let (d0, d1) = content_determinants(&ea, &m)?;
        let g = determinant(&ea.gram_contravariant(&m, &ea.pbw_basis(&m)?)?);
        t.check(!g.is_zero(), || format!("standard Gram degenerates at {m} for {pa}"));
        if slot == 1 {
            let witness = TriangularArray::from_entries(2, vec![2, 0, 1])?;
            t.check(b_total(&pa, &witness)?.is_zero(), || format!("B_(2,0,1) does not vanish at {pa}"));
            t.check(d0.is_zero(), || format!("original dynamical basis is independent at {m} for {pa}"));
            t.check(!d1.is_zero(), || format!("flipped dynamical basis degenerates at {m} for {pa}"));
        } else {
            t.check(!d0.is_zero(), || format!("original dynamical basis degenerates at {m} for {pa}"));
            t.check(d1.is_zero(), || format!("flipped dynamical basis is independent at {m} for {pa}"));
        }
    }
    Ok(())
}

fn q_inverse_square(p: &Params) -> Rational {
    p.q_pow(-2)
}

fn root_vector_commutation(e: &Verma, cfg: &SuiteConfig, t: &mut Tally) -> Result<()> {
    let n = e.rank();
    let p = e.params();
    let q = p.q().clone();
    let basis = basis_upto(e, cfg.depth);
    let mut stated_exponent_failures = 0u64;
    let mut stated_exponent_trials = 0u64;
    for i in 1..=n {
        for j in i + 1..=n {
            let fij = expand_root_vector(p, i, j)?;
            let lower = expand_root_vector(p, i + 1, j)?;
            let left = expand_root_vector(p, i, j - 1)?;
            for (l, v) in &basis {
                let m = v.content();
                let fv = e.act_free(&fij, v)?;
                for k in i + 1..j {
                    let a = e.act_f(k, &fv)?.sub(&e.act_free(&fij, &e.act_f(k, v)?)?);
                    t.check(a.is_zero(), || format!("[f{k}, f{i}{j}] on {}", label(l)));
                    let b = e.act_e(k, &fv)?.sub(&e.act_free(&fij, &e.act_e(k, v)?)?);
                    t.check(b.is_zero(), || format!("[e{k}, f{i}{j}] on {}", label(l)));
                }
                let a = e.act_free(&fij, &e.act_f(i, v)?)?.sub(&e.act_f(i, &fv)?.scale(&q));
                t.check(a.is_zero(), || format!("q-commutator of f{i}{j} and f{i} on {}", label(l)));
                let b = e.act_f(j, &fv)?.sub(&e.act_free(&fij, &e.act_f(j, v)?)?.scale(&q));
                t.check(b.is_zero(), || format!("q-commutator of f{j} and f{i}{j} on {}", label(l)));

                let ei = e.act_e(i, &fv)?.sub(&e.act_free(&fij, &e.act_e(i, v)?)?);
                let want = e.act_free(&lower, v)?.scale(&p.q_power_of_weight(m, i).recip());
                t.check(same(&ei, &want), || format!("[e{i}, f{i}{j}] on {}", label(l)));

                let ej = e.act_e(j, &fv)?.sub(&e.act_free(&fij, &e.act_e(j, v)?)?);
                let base = e.act_free(&left, v)?.scale(&-q.clone());
                let with_hj = base.scale(&p.q_power_of_weight(m, j));
                t.check(same(&ej, &with_hj), || {
                    format!("[e{j}, f{i}{j}] with the Cartan factor of index {j} on {}", label(l))
                });
                stated_exponent_trials += 1;
                if !same(&ej, &base.scale(&p.q_power_of_weight(m, i))) {
                    stated_exponent_failures += 1;
                }
            }
        }
    }
    if stated_exponent_trials > 0 {
        t.note(format!(
            "[e_j, f_ij] = -q f_(i,j-1) q^(h_j) holds on every tested vector; the variant with q^(h_i) fails on {stated_exponent_failures} of {stated_exponent_trials}"
        ));
    }

    // Non-identity orderings of f_1..f_m push a basis vector into the lower root ideal.
    for m in 2..=n {
        for sigma in permutations(m).into_iter().skip(1) {
            let letters: Vec<usize> = sigma.iter().map(|&s| s + 1).collect();
            for (l, v) in &basis {
                if v.content().degree() as u32 + m as u32 > cfg.depth {
                    continue;
                }
                let y = f_word(e, &letters, v)?;
                t.check(e.ideal_quotient_project_range(2, m, &y)?.in_ideal, || {
                    format!("f{letters:?} {} is not in the ideal of roots 2..{m}", label(l))
                });
            }
        }
    }

    // Commutators of positive monomials in e_i..e_k with f_jm land in the ideal of roots j+1..m.
    for m in 2..=n {
        for j in 1..m {
            let fjm = expand_root_vector(p, j, m)?;
            for i in 1..=j {
                for k in j..m {
                    let letters: Vec<usize> = (i..=k).collect();
                    let mut words: Vec<Vec<usize>> = letters.iter().map(|&a| vec![a]).collect();
                    for &a in &letters {
                        for &b in &letters {
                            words.push(vec![a, b]);
                        }
                    }
                    for u in &words {
                        let u = EScript(u.clone());
                        for (l, v) in &basis {
                            if v.content().degree() as u32 + (m - j + 1) as u32 > cfg.depth {
                                continue;
                            }
                            let c = e
                                .apply_escript(&u, &e.act_free(&fjm, v)?)?
                                .sub(&e.act_free(&fjm, &e.apply_escript(&u, v)?)?);
                            if !c.content().is_admissible() || c.is_zero() {
                                t.check(true, String::new);
                                continue;
                            }
                            t.check(e.ideal_quotient_project_range(j + 1, m, &c)?.in_ideal, || {
                                format!(
                                    "[e{:?}, f{j}{m}] {} is not in the ideal of roots {}..{m}",
                                    u.0,
                                    label(l),
                                    j + 1
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
