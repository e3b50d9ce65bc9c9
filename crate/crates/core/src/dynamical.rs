//! Dynamical root vectors and their PBW monomials, realized as operators.
//!
//! A dynamical root vector is a combination of Chevalley monomials with
//! coefficients in the Cartan subalgebra. On a weight vector those
//! coefficients are numbers, so every atom here is an operator on
//! [`VermaVector`]s built recursively from `f_i`/`e_i`:
//!
//! * `f̂_{ik} = q⁻¹[f_i, f̂_{i+1,k}]_q [h_{i+1,k}]_q + f_i f̂_{i+1,k} q^{h_{i+1,k}}`;
//!   the Cartan factors stand on the right, so they are evaluated at the
//!   weight of the input vector.
//! * `ê_{ik} = q⁻¹[h_{i+1,k}]_q [ê_{i+1,k}, e_i]_q + q^{h_{i+1,k}} ê_{i+1,k} e_i`;
//!   the Cartan factors stand on the left, so they are evaluated at the
//!   weight of the output vector.
//!
//! Here `h_{ik} = h_i + … + h_k + k − i`, whose exponential at a weight is
//! [`Params::mu_power`](crate::qscalars::Params::mu_power).
//!
//! The *flipped* system is the image of the above under the diagram
//! automorphism `α_i ↔ α_{n+1−i}`: its recursion peels the largest index.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::freealg::{FreeElement, TriangularArray};
use crate::qscalars::{check_index, Params, Rational, WeightContent};
use crate::verma::{read_top, Verma, VermaVector, WordModule};

/// One operator in a dynamical script.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynAtom {
    F(usize),
    E(usize),
    Fhat(usize, usize),
    Ehat(usize, usize),
    /// The barred vector `f̄_{1n} = f_1 f̂_{2n}[h_{2n}+2]_q − f̂_{2n} f_1 [h_{2n}+1]_q`.
    Fbar,
    FhatFlip(usize, usize),
    EhatFlip(usize, usize),
}

impl DynAtom {
    /// Signed content change produced by the atom (positive = lowering the weight).
    pub fn shift(&self, n: usize) -> WeightContent {
        let root = |i: usize, k: usize| WeightContent::root(n, i, k);
        match *self {
            DynAtom::F(i) => root(i, i),
            DynAtom::E(i) => WeightContent::zero(n).sub(&root(i, i)),
            DynAtom::Fhat(i, k) | DynAtom::FhatFlip(i, k) => root(i, k),
            DynAtom::Ehat(i, k) | DynAtom::EhatFlip(i, k) => WeightContent::zero(n).sub(&root(i, k)),
            DynAtom::Fbar => root(1, n),
        }
    }

    /// Image under the diagram automorphism `i ↦ n + 1 − i`.
    pub fn mirrored(&self, n: usize) -> DynAtom {
        let r = |i: usize| n + 1 - i;
        match *self {
            DynAtom::F(i) => DynAtom::F(r(i)),
            DynAtom::E(i) => DynAtom::E(r(i)),
            DynAtom::Fhat(i, k) => DynAtom::FhatFlip(r(k), r(i)),
            DynAtom::Ehat(i, k) => DynAtom::EhatFlip(r(k), r(i)),
            DynAtom::FhatFlip(i, k) => DynAtom::Fhat(r(k), r(i)),
            DynAtom::EhatFlip(i, k) => DynAtom::Ehat(r(k), r(i)),
            DynAtom::Fbar => DynAtom::Fbar,
        }
    }
}

impl fmt::Display for DynAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynAtom::F(i) => write!(f, "f{i}"),
            DynAtom::E(i) => write!(f, "e{i}"),
            DynAtom::Fhat(i, k) => write!(f, "fhat{i}{k}"),
            DynAtom::Ehat(i, k) => write!(f, "ehat{i}{k}"),
            DynAtom::Fbar => write!(f, "fbar"),
            DynAtom::FhatFlip(i, k) => write!(f, "fhat'{i}{k}"),
            DynAtom::EhatFlip(i, k) => write!(f, "ehat'{i}{k}"),
        }
    }
}

/// A product of atoms written left to right; the rightmost atom acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DynScript(pub Vec<DynAtom>);

impl DynScript {
    pub fn atoms(&self) -> &[DynAtom] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other` (so `other` acts first).
    pub fn then_after(&self, other: &DynScript) -> DynScript {
        DynScript(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn mirrored(&self, n: usize) -> DynScript {
        DynScript(self.0.iter().map(|a| a.mirrored(n)).collect())
    }
}

impl fmt::Display for DynScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn check_range(n: usize, i: usize, k: usize) -> Result<()> {
    check_index(n, i)?;
    check_index(n, k)?;
    if i > k {
        return Err(Error::BadRootRange { i, j: k });
    }
    Ok(())
}

/// A realization of `M_λ` on which the dynamical operators can act.
///
/// [`Verma`] works in straightened PBW coordinates; [`WordModule`] works with
/// unstraightened word expansions and is meant for pairings in large weight spaces.
pub trait Backend {
    type Vector: Clone + PartialEq + fmt::Debug;

    fn params(&self) -> &Params;
    fn content(v: &Self::Vector) -> &WeightContent;
    fn zero_vector(content: WeightContent) -> Self::Vector;
    fn act_f(&self, i: usize, v: &Self::Vector) -> Result<Self::Vector>;
    fn act_e(&self, i: usize, v: &Self::Vector) -> Result<Self::Vector>;
    /// `a·x + b·y`; a zero operand adopts the weight of the other.
    fn combine(a: &Rational, x: &Self::Vector, b: &Rational, y: &Self::Vector) -> Self::Vector;
    /// Coefficient of `v_λ` (zero unless the vector has the top weight).
    fn top(v: &Self::Vector) -> Rational;

    fn rank(&self) -> usize {
        self.params().rank()
    }
}

impl Backend for Verma {
    type Vector = VermaVector;

    fn params(&self) -> &Params {
        Verma::params(self)
    }

    fn content(v: &VermaVector) -> &WeightContent {
        v.content()
    }

    fn zero_vector(content: WeightContent) -> VermaVector {
        VermaVector::zero(content)
    }

    fn act_f(&self, i: usize, v: &VermaVector) -> Result<VermaVector> {
        Verma::act_f(self, i, v)
    }

    fn act_e(&self, i: usize, v: &VermaVector) -> Result<VermaVector> {
        Verma::act_e(self, i, v)
    }

    fn combine(a: &Rational, x: &VermaVector, b: &Rational, y: &VermaVector) -> VermaVector {
        x.scale(a).add(&y.scale(b))
    }

    fn top(v: &VermaVector) -> Rational {
        read_top(v)
    }
}

impl Backend for WordModule {
    type Vector = FreeElement;

    fn params(&self) -> &Params {
        WordModule::params(self)
    }

    fn content(v: &FreeElement) -> &WeightContent {
        v.content()
    }

    fn zero_vector(content: WeightContent) -> FreeElement {
        FreeElement::zero(content)
    }

    fn act_f(&self, i: usize, v: &FreeElement) -> Result<FreeElement> {
        WordModule::act_f(self, i, v)
    }

    fn act_e(&self, i: usize, v: &FreeElement) -> Result<FreeElement> {
        WordModule::act_e(self, i, v)
    }

    fn combine(a: &Rational, x: &FreeElement, b: &Rational, y: &FreeElement) -> FreeElement {
        match (x.is_zero(), y.is_zero()) {
            (true, _) => y.scale(b),
            (_, true) => x.scale(a),
            _ => x.scale(a).add(&y.scale(b)),
        }
    }

    fn top(v: &FreeElement) -> Rational {
        WordModule::read_top(v)
    }
}

/// `f̂_{ik} · v`.
pub fn apply_fhat<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    check_range(e.rank(), i, k)?;
    fhat(e, i, k, v)
}

/// `x·(q⁻¹B + Q) − y·B`: the common shape of every recursion step below.
fn recursion_step<B: Backend>(p: &Params, big_q: &Rational, x: &B::Vector, y: &B::Vector) -> B::Vector {
    let b = p.bracket(big_q);
    let first = p.q_pow(-1) * &b + big_q;
    B::combine(&first, x, &-b, y)
}

fn fhat<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    if i == k {
        return e.act_f(i, v);
    }
    let p = e.params();
    let big_q = p.mu_pow(B::content(v), i + 1, k);
    let f_then_hat = e.act_f(i, &fhat(e, i + 1, k, v)?)?;
    let hat_then_f = fhat(e, i + 1, k, &e.act_f(i, v)?)?;
    Ok(recursion_step::<B>(p, &big_q, &f_then_hat, &hat_then_f))
}

/// `ê_{ik} · v`.
pub fn apply_ehat<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    check_range(e.rank(), i, k)?;
    ehat(e, i, k, v)
}

fn ehat<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    if i == k {
        return e.act_e(i, v);
    }
    let p = e.params();
    let out = B::content(v).sub(&WeightContent::root(e.rank(), i, k));
    let big_q = p.mu_pow(&out, i + 1, k);
    let w1 = ehat(e, i + 1, k, &e.act_e(i, v)?)?;
    let w2 = e.act_e(i, &ehat(e, i + 1, k, v)?)?;
    Ok(recursion_step::<B>(p, &big_q, &w1, &w2))
}

/// `f̄_{1n} · v`.
pub fn apply_fbar<B: Backend>(e: &B, v: &B::Vector) -> Result<B::Vector> {
    let n = e.rank();
    if n < 2 {
        return Err(Error::InvalidParams("the barred vector needs rank at least 2".into()));
    }
    let p = e.params();
    let mu = p.mu_pow(B::content(v), 2, n);
    let b2 = p.bracket(&(&mu * p.q_pow(2)));
    let b1 = p.bracket(&(&mu * p.q()));
    let left = e.act_f(1, &fhat(e, 2, n, v)?)?;
    let right = fhat(e, 2, n, &e.act_f(1, v)?)?;
    Ok(B::combine(&b2, &left, &-b1, &right))
}

/// Flipped `f̂'_{ik} · v`: the recursion peels `f_k` off `f̂'_{i,k−1}`.
pub fn apply_fhat_flip<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    check_range(e.rank(), i, k)?;
    fhat_flip(e, i, k, v)
}

fn fhat_flip<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    if i == k {
        return e.act_f(i, v);
    }
    let p = e.params();
    let big_q = p.mu_pow(B::content(v), i, k - 1);
    let f_then_hat = e.act_f(k, &fhat_flip(e, i, k - 1, v)?)?;
    let hat_then_f = fhat_flip(e, i, k - 1, &e.act_f(k, v)?)?;
    Ok(recursion_step::<B>(p, &big_q, &f_then_hat, &hat_then_f))
}

/// Flipped `ê'_{ik} · v`.
pub fn apply_ehat_flip<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    check_range(e.rank(), i, k)?;
    ehat_flip(e, i, k, v)
}

fn ehat_flip<B: Backend>(e: &B, i: usize, k: usize, v: &B::Vector) -> Result<B::Vector> {
    if i == k {
        return e.act_e(i, v);
    }
    let p = e.params();
    let out = B::content(v).sub(&WeightContent::root(e.rank(), i, k));
    let big_q = p.mu_pow(&out, i, k - 1);
    let w1 = ehat_flip(e, i, k - 1, &e.act_e(k, v)?)?;
    let w2 = e.act_e(k, &ehat_flip(e, i, k - 1, v)?)?;
    Ok(recursion_step::<B>(p, &big_q, &w1, &w2))
}

pub fn apply_atom<B: Backend>(e: &B, atom: DynAtom, v: &B::Vector) -> Result<B::Vector> {
    match atom {
        DynAtom::F(i) => {
            check_index(e.rank(), i)?;
            e.act_f(i, v)
        }
        DynAtom::E(i) => {
            check_index(e.rank(), i)?;
            e.act_e(i, v)
        }
        DynAtom::Fhat(i, k) => apply_fhat(e, i, k, v),
        DynAtom::Ehat(i, k) => apply_ehat(e, i, k, v),
        DynAtom::Fbar => apply_fbar(e, v),
        DynAtom::FhatFlip(i, k) => apply_fhat_flip(e, i, k, v),
        DynAtom::EhatFlip(i, k) => apply_ehat_flip(e, i, k, v),
    }
}

/// Applies a script right to left.
pub fn apply_dynscript<B: Backend>(e: &B, s: &DynScript, v: &B::Vector) -> Result<B::Vector> {
    s.0.iter().rev().try_fold(v.clone(), |acc, &a| apply_atom(e, a, &acc))
}

/// The coefficient of `v_λ` in `s · v`.
pub fn pair_dyn<B: Backend>(e: &B, s: &DynScript, v: &B::Vector) -> Result<Rational> {
    Ok(B::top(&apply_dynscript(e, s, v)?))
}

fn repeat(out: &mut Vec<DynAtom>, atom: DynAtom, times: u32) {
    out.extend(std::iter::repeat_n(atom, times as usize));
}

/// `f̂(l) = f̂(l_n)⋯f̂(l_1)` with `f̂(l_k) = f̂_{kn}^{l_{kn}}⋯f̂_{kk}^{l_{kk}}`.
pub fn fhat_monomial(l: &TriangularArray) -> DynScript {
    let n = l.rank();
    let mut atoms = Vec::new();
    for k in (1..=n).rev() {
        for j in (k..=n).rev() {
            repeat(&mut atoms, DynAtom::Fhat(k, j), l.get(k, j));
        }
    }
    DynScript(atoms)
}

/// Row `k` of the normally ordered positive monomial: `ê_{kk}^{l_{kk}}⋯ê_{kn}^{l_{kn}}`.
fn ehat_row(l: &TriangularArray, k: usize) -> Vec<DynAtom> {
    let mut atoms = Vec::new();
    for j in k..=l.rank() {
        repeat(&mut atoms, DynAtom::Ehat(k, j), l.get(k, j));
    }
    atoms
}

/// Normal ordering `ê(l) = ê(l_1)⋯ê(l_n)` with `ê(l_k) = ê_{kk}^{l_{kk}}⋯ê_{kn}^{l_{kn}}`.
pub fn ehat_monomial(l: &TriangularArray) -> DynScript {
    DynScript((1..=l.rank()).flat_map(|k| ehat_row(l, k)).collect())
}

/// Alternative ordering `ě(l) = ě(l_1)⋯ě(l_n)` with `ě(l_k) = ê_{kn}^{l_{kn}}⋯ê_{kk}^{l_{kk}}`.
pub fn echeck_monomial(l: &TriangularArray) -> DynScript {
    let n = l.rank();
    let mut atoms = Vec::new();
    for k in 1..=n {
        for j in (k..=n).rev() {
            repeat(&mut atoms, DynAtom::Ehat(k, j), l.get(k, j));
        }
    }
    DynScript(atoms)
}

/// `ω(ě(l)) = f̌(l_n)⋯f̌(l_1)` with `f̌(l_k) = f̂_{kk}^{l_{kk}}⋯f̂_{kn}^{l_{kn}}`.
pub fn fcheck_monomial(l: &TriangularArray) -> DynScript {
    let n = l.rank();
    let mut atoms = Vec::new();
    for k in (1..=n).rev() {
        for j in k..=n {
            repeat(&mut atoms, DynAtom::Fhat(k, j), l.get(k, j));
        }
    }
    DynScript(atoms)
}

/// `ê_σ(l)`: row `k` of the normal monomial with its factors rearranged by `sigma[k−1]`.
///
/// `sigma[k−1]` must be a permutation of `0..|l_k|` (the number of factors in
/// row `k`); position `t` of the new row holds factor `sigma[k−1][t]` of the old one.
pub fn ehat_sigma_monomial(l: &TriangularArray, sigma: &[Vec<usize>]) -> Result<DynScript> {
    let n = l.rank();
    if sigma.len() != n {
        return Err(Error::MalformedPermutation(format!("expected {n} row permutations, got {}", sigma.len())));
    }
    let mut atoms = Vec::new();
    for k in 1..=n {
        let row = ehat_row(l, k);
        let s = &sigma[k - 1];
        let mut seen = vec![false; row.len()];
        if s.len() != row.len() || s.iter().any(|&t| t >= row.len() || std::mem::replace(&mut seen[t], true)) {
            return Err(Error::MalformedPermutation(format!(
                "row {k} has {} factors but the permutation is {s:?}",
                row.len()
            )));
        }
        atoms.extend(s.iter().map(|&t| row[t]));
    }
    Ok(DynScript(atoms))
}

/// Flipped negative monomial: the diagram-automorphism image of `f̂(l)`.
/// Its content is `content(l)` reversed.
pub fn fhat_flip_monomial(l: &TriangularArray) -> DynScript {
    fhat_monomial(l).mirrored(l.rank())
}

/// Flipped positive monomial: the image of `ě(l)`.
pub fn echeck_flip_monomial(l: &TriangularArray) -> DynScript {
    echeck_monomial(l).mirrored(l.rank())
}

/// Dense coordinates of `s · v_λ` for each script, over the PBW list of content `m`.
pub fn coordinate_matrix(e: &Verma, m: &WeightContent, scripts: &[DynScript]) -> Result<Vec<Vec<Rational>>> {
    let pbw = e.pbw_list(m);
    let top = VermaVector::highest(e.rank());
    scripts.iter().map(|s| Ok(apply_dynscript(e, s, &top)?.dense(&pbw))).collect()
}

/// `v_λ^* ě(k) f̂(l) v_λ` for all `k, l` of content `m`, rows indexed by `k`.
pub fn cyclic_gram(e: &Verma, m: &WeightContent) -> Result<Vec<Vec<Rational>>> {
    let pbw = e.pbw_list(m);
    let top = VermaVector::highest(e.rank());
    let vectors: Vec<VermaVector> =
        pbw.iter().map(|l| apply_dynscript(e, &fhat_monomial(l), &top)).collect::<Result<_>>()?;
    pbw.iter()
        .map(|k| {
            let s = echeck_monomial(k);
            vectors.iter().map(|v| pair_dyn(e, &s, v)).collect()
        })
        .collect()
}

/// The zero-or-one check used for diagonal matrices.
pub fn is_diagonal(g: &[Vec<Rational>]) -> bool {
    g.iter().enumerate().all(|(a, row)| row.iter().enumerate().all(|(b, x)| a == b || x.is_zero()))
}

/// Whether two scripts agree on a vector.
pub fn scripts_agree(e: &Verma, a: &DynScript, b: &DynScript, v: &VermaVector) -> Result<bool> {
    Ok(apply_dynscript(e, a, v)? == apply_dynscript(e, b, v)?)
}

/// `Σ_i c_i · s_i · v` for a list of scaled scripts.
pub fn apply_combination<B: Backend>(e: &B, terms: &[(Rational, DynScript)], v: &B::Vector) -> Result<B::Vector> {
    let one = Rational::from_integer(1.into());
    let mut out = B::zero_vector(B::content(v).clone());
    for (c, s) in terms {
        let w = apply_dynscript(e, s, v)?;
        out = B::combine(&one, &out, c, &w);
    }
    Ok(out)
}
