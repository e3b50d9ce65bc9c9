//! Closed-form scalar functions and the genericity guard.
//!
//! Every function takes the weight as a [`WeightContent`] (the weight
//! `μ = λ − Σ m_j α_j`), so the same code evaluates at the highest weight and
//! at the intermediate weights of a PBW monomial. Empty products are 1.
//!
//! Notation: `μ_{sr} = μ_s + … + μ_r + r − s`; a factor `[μ_{sr} + c]_q` is
//! evaluated through the power `q^{μ_{sr}} · q^c`.

use std::fmt;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::freealg::{enumerate_pbw, TriangularArray};
use crate::qscalars::{check_index, fmt_rational, Params, Rational, WeightContent};
use crate::verma::EScript;

/// A closed formula disagreeing with the engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaDiscrepancy {
    pub formula: String,
    pub point: String,
    pub formula_value: Rational,
    pub engine_value: Rational,
}

impl FormulaDiscrepancy {
    pub fn new(
        formula: impl Into<String>,
        point: impl Into<String>,
        formula_value: Rational,
        engine_value: Rational,
    ) -> Self {
        FormulaDiscrepancy { formula: formula.into(), point: point.into(), formula_value, engine_value }
    }
}

impl fmt::Display for FormulaDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} disagrees with the engine at {}: formula gives {}, engine gives {}",
            self.formula,
            self.point,
            fmt_rational(&self.formula_value),
            fmt_rational(&self.engine_value)
        )
    }
}

impl std::error::Error for FormulaDiscrepancy {}

/// Compares a formula value with the engine value.
pub fn compare(
    formula: &str,
    point: impl FnOnce() -> String,
    formula_value: Rational,
    engine_value: Rational,
) -> std::result::Result<(), Box<FormulaDiscrepancy>> {
    if formula_value == engine_value {
        Ok(())
    } else {
        Err(Box::new(FormulaDiscrepancy::new(formula, point(), formula_value, engine_value)))
    }
}

/// The contents of the weights `λ_{l,0}, …, λ_{l,n}` reached by applying the rows of `l` in turn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSeq {
    pub contents: Vec<WeightContent>,
}

pub fn weight_sequence(l: &TriangularArray) -> WeightSeq {
    let n = l.rank();
    let mut contents = vec![WeightContent::zero(n)];
    for k in 1..=n {
        let next = contents[k - 1].add(&l.row_content(k));
        contents.push(next);
    }
    WeightSeq { contents }
}

/// `∏_{i=0}^{count−1} [μ_{sr} + shift − i]_q`.
fn falling(p: &Params, m: &WeightContent, s: usize, r: usize, shift: i32, count: u32) -> Rational {
    let base = p.mu_pow(m, s, r);
    (0..count as i32).fold(Rational::one(), |acc, i| acc * p.bracket(&(&base * p.q_pow(shift - i))))
}

/// `C_{km}(μ) = ∏_{i=k}^{m} [μ_{im}]_q`.
pub fn c_km(p: &Params, m: &WeightContent, k: usize, mm: usize) -> Result<Rational> {
    check_index(p.rank(), k)?;
    check_index(p.rank(), mm)?;
    if k > mm {
        return Err(Error::BadRootRange { i: k, j: mm });
    }
    Ok((k..=mm).fold(Rational::one(), |acc, i| acc * p.mu_bracket(m, i, mm, 0)))
}

fn check_row(p: &Params, k: usize, row: &[u32]) -> Result<()> {
    check_index(p.rank(), k)?;
    let want = p.rank() - k + 1;
    if row.len() != want {
        return Err(Error::InvalidParams(format!("row {k} needs {want} entries, got {}", row.len())));
    }
    Ok(())
}

/// Row `k` entry `l_{kr}` from a row slice `(l_{kk}, …, l_{kn})`.
fn entry(row: &[u32], k: usize, r: usize) -> u32 {
    row[r - k]
}

/// `A_{l,k}(μ) = ∏_{k+1 ≤ s ≤ r ≤ n} ∏_{i=0}^{l_{kr}−1} [μ_{sr} − i + l_{k,s−1} + 1]_q`.
///
/// This is the factor picked up when the dynamical row monomial is replaced by
/// the standard one in the row pairing.
pub fn a_row(p: &Params, m: &WeightContent, k: usize, row: &[u32]) -> Result<Rational> {
    check_row(p, k, row)?;
    let n = p.rank();
    let mut acc = Rational::one();
    for s in k + 1..=n {
        let shift = entry(row, k, s - 1) as i32 + 1;
        for r in s..=n {
            acc *= falling(p, m, s, r, shift, entry(row, k, r));
        }
    }
    Ok(acc)
}

/// The row pairing `v_μ^* ě(l_k) f̂(l_k) v_μ` for a vector singular for the roots `k..n`:
/// `∏_r [l_{kr}]_q! · ∏_{k ≤ s ≤ r ≤ n} ∏_{i=0}^{l_{kr}−1} [μ_{sr} − i]_q · A_{l,k}(μ)`.
pub fn b_row(p: &Params, m: &WeightContent, k: usize, row: &[u32]) -> Result<Rational> {
    let a = a_row(p, m, k, row)?;
    let n = p.rank();
    let mut acc = a;
    for r in k..=n {
        let lr = entry(row, k, r);
        acc *= p.q_factorial(lr);
        for s in k..=r {
            acc *= falling(p, m, s, r, 0, lr);
        }
    }
    Ok(acc)
}

/// `B_l(λ) = B_{l_1}(λ_{l,0}) ⋯ B_{l_n}(λ_{l,n−1})`.
pub fn b_total(p: &Params, l: &TriangularArray) -> Result<Rational> {
    if l.rank() != p.rank() {
        return Err(Error::InvalidParams(format!("array of rank {} for parameters of rank {}", l.rank(), p.rank())));
    }
    let seq = weight_sequence(l);
    let mut acc = Rational::one();
    for k in 1..=p.rank() {
        acc *= b_row(p, &seq.contents[k - 1], k, l.row(k))?;
    }
    Ok(acc)
}

/// The closed formula for rank 2, with `m = l_{11}`, `l = l_{12}`, `k = l_{22}`:
/// `[l]![m]![k]! ∏_{i<k}[λ_2 − i + m − l] ∏_{i<l}[λ_2 − i + m + 1] ∏_{i<l}[λ_2 − i] ∏_{i<l}[λ_{12} − i] ∏_{i<m}[λ_1 − i]`.
pub fn sl3_closed_form(p: &Params, m: u32, l: u32, k: u32) -> Result<Rational> {
    if p.rank() != 2 {
        return Err(Error::InvalidParams("the closed form is stated for rank 2".into()));
    }
    let top = WeightContent::zero(2);
    let (mi, li) = (m as i32, l as i32);
    Ok(p.q_factorial(l)
        * p.q_factorial(m)
        * p.q_factorial(k)
        * falling(p, &top, 2, 2, mi - li, k)
        * falling(p, &top, 2, 2, mi + 1, l)
        * falling(p, &top, 2, 2, 0, l)
        * falling(p, &top, 1, 2, 0, l)
        * falling(p, &top, 1, 1, 0, m))
}

/// `[l]_q! ∏_{i=0}^{l−1} ∏_{s=1}^{j} [μ_{sj} − i]_q`: the pairing of `ê_{1j}^l` with `f_{1j}^l`.
pub fn root_power_norm(p: &Params, m: &WeightContent, j: usize, l: u32) -> Result<Rational> {
    check_index(p.rank(), j)?;
    Ok((1..=j).fold(p.q_factorial(l), |acc, s| acc * falling(p, m, s, j, 0, l)))
}

/// [`root_power_norm`] for the longest root `α_{1n}`.
pub fn longest_root_power_norm(p: &Params, m: &WeightContent, l: u32) -> Rational {
    (1..=p.rank()).fold(p.q_factorial(l), |acc, s| acc * falling(p, m, s, p.rank(), 0, l))
}

/// The pairing `v^* ê_{1m} ê_{1k} f̂_{1m} f̂_{1k} v` for `k < m`:
/// `∏_{j=2}^{k}[μ_{jk}+1] ∏_{j=2}^{k}[μ_{jm}+1] [μ_{k+1,m}+2] ∏_{j=k+2}^{m}[μ_{jm}+1] C_{1k} C_{1m}`.
pub fn two_root_pairing(p: &Params, m: &WeightContent, k: usize, mm: usize) -> Result<Rational> {
    check_index(p.rank(), k)?;
    check_index(p.rank(), mm)?;
    if k >= mm {
        return Err(Error::BadRootRange { i: k, j: mm });
    }
    let mut acc = c_km(p, m, 1, k)? * c_km(p, m, 1, mm)?;
    for j in 2..=k {
        acc *= p.mu_bracket(m, j, k, 1) * p.mu_bracket(m, j, mm, 1);
    }
    acc *= p.mu_bracket(m, k + 1, mm, 2);
    for j in k + 2..=mm {
        acc *= p.mu_bracket(m, j, mm, 1);
    }
    Ok(acc)
}

/// The positive monomials `φ_1 = e_1⋯e_n`, `φ_i = e_i⋯e_n e_{i−1}⋯e_1`, `φ_n = e_n⋯e_1`.
pub fn phi_monomial(n: usize, i: usize) -> Result<EScript> {
    check_index(n, i)?;
    Ok(EScript((i..=n).chain((1..i).rev()).collect()))
}

/// `q^{±(μ_a + … + μ_b)}`-type products: `∏_{s=a}^{b} q^{μ_s}`.
fn weight_power(p: &Params, m: &WeightContent, a: usize, b: usize) -> Rational {
    (a..=b).fold(Rational::one(), |acc, s| acc * p.q_power_of_weight(m, s))
}

/// The scalars `D_{i,l}(μ)` describing `φ_i f_{1n}^l v` modulo the left ideal of
/// root vectors `f_{jk}` with `j ≥ 2`:
///
/// * `D_{1,l} = q^{1−l}[l] (−q)^{n−1} q^{μ_2+…+μ_n} [μ_1]`,
/// * `D_{i,l} = q^{1−l}[l] (−q)^{n−i} q^{−μ_1−…−μ_{i−1}+μ_{i+1}+…+μ_n} [μ_i]` for `1 < i < n`,
/// * `D_{n,l} = q^{1−l}[l] q^{l−1} q^{−μ_1−…−μ_{n−1}} [μ_n − l + 1]`.
///
/// At rank 1 the single monomial is `e_1` and the last form applies.
pub fn d_il(p: &Params, m: &WeightContent, i: usize, l: u32) -> Result<Rational> {
    let n = p.rank();
    check_index(n, i)?;
    if l == 0 {
        return Err(Error::InvalidParams("D is defined for l ≥ 1".into()));
    }
    let li = l as i32;
    let lead = p.q_pow(1 - li) * p.q_int(li);
    let sign_q = |e: usize| -> Rational {
        let x = p.q_pow(e as i32);
        if e % 2 == 1 {
            -x
        } else {
            x
        }
    };
    if i == n {
        let below = weight_power(p, m, 1, n - 1).recip();
        return Ok(lead * p.q_pow(li - 1) * below * p.mu_bracket(m, n, n, 1 - li));
    }
    if i == 1 {
        return Ok(lead * sign_q(n - 1) * weight_power(p, m, 2, n) * p.mu_bracket(m, 1, 1, 0));
    }
    let pw = weight_power(p, m, i + 1, n) / weight_power(p, m, 1, i - 1);
    Ok(lead * sign_q(n - i) * pw * p.mu_bracket(m, i, i, 0))
}

/// One side-by-side evaluation of a reduction identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCheck {
    pub i: usize,
    pub l: u32,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Both sides of the reduction identities at weight `m`, for `l ≥ 1` (`l' = l − 1`):
///
/// * `i = 1`: `D_{1,l}(μ) − q^{−l'}[l](−1)^{n−1} q^{μ_{1n}−l'}[l'] = q^{−l'}[l] D_{1,1}(μ − l'α_{1n})`,
/// * `i ≥ 2`: `D_{i,l}(μ) = q^{−l'}[l] D_{i,1}(μ − l'α_{1n})`.
///
/// Shifting by `l'α_{1n}` adds `l'` to every content entry. Requires rank ≥ 2.
pub fn reduction_sides(p: &Params, m: &WeightContent, i: usize, l: u32) -> Result<ReductionCheck> {
    let n = p.rank();
    if n < 2 {
        return Err(Error::InvalidParams("the reduction identities are stated for rank at least 2".into()));
    }
    let lp = l as i32 - 1;
    let shifted = WeightContent(m.0.iter().map(|x| x + lp).collect());
    let factor = p.q_pow(-lp) * p.q_int(l as i32);
    let rhs = &factor * d_il(p, &shifted, i, 1)?;
    let mut lhs = d_il(p, m, i, l)?;
    if i == 1 {
        let sign = if (n - 1).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        lhs -= factor * sign * p.mu_pow(m, 1, n) * p.q_pow(-lp) * p.q_int(lp);
    }
    Ok(ReductionCheck { i, l, lhs, rhs })
}

/// True iff `[μ_{kn} − m + 1]_q = 0` at the highest weight, i.e. `(q^{1−m} q^{λ_{kn}})² = 1`.
pub fn singular_criterion(p: &Params, k: usize, m: u32) -> Result<bool> {
    let n = p.rank();
    check_index(n, k)?;
    if m == 0 {
        return Err(Error::InvalidParams("the exponent m must be positive".into()));
    }
    let big_q = p.q_pow(1 - m as i32) * p.mu_pow(&WeightContent::zero(n), k, n);
    Ok(crate::qscalars::bracket_power_vanishes(&big_q))
}

/// A highest weight making `f̂_{kn}^m v_λ` singular: keeps `z_s` for `s ≠ k` and
/// solves `q^{λ_{kn}} = sign · q^{m−1}` for `z_k`.
pub fn arranged_singular_params(p: &Params, k: usize, m: u32, negative: bool) -> Result<Params> {
    let n = p.rank();
    check_index(n, k)?;
    let rest = p.z()[k..].iter().fold(Rational::one(), |acc, z| acc * z);
    let mut zk = p.q_pow(m as i32 - 1 - (n - k) as i32) / rest;
    if negative {
        zk = -zk;
    }
    let mut z = p.z().to_vec();
    z[k - 1] = zk;
    p.with_z(z)
}

/// Arrays in the order the genericity search visits them: by degree, then by
/// content, then with larger leading exponents first.
pub(crate) fn arrays_up_to(n: usize, depth: u32) -> Vec<TriangularArray> {
    let mut out = Vec::new();
    for m in WeightContent::all_up_to_degree(n, depth as i32) {
        let mut ls = enumerate_pbw(n, &m);
        ls.reverse();
        out.extend(ls);
    }
    out
}

/// Every array of total content degree at most `depth` with `B_l = 0`.
pub fn degenerate_arrays(p: &Params, depth: u32) -> Result<Vec<TriangularArray>> {
    let mut out = Vec::new();
    for l in arrays_up_to(p.rank(), depth) {
        if b_total(p, &l)?.is_zero() {
            out.push(l);
        }
    }
    Ok(out)
}

/// The first array (in search order) with `B_l = 0`, if any.
pub fn genericity_witness(p: &Params, depth: u32) -> Result<Option<TriangularArray>> {
    for l in arrays_up_to(p.rank(), depth) {
        if b_total(p, &l)?.is_zero() {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// True iff `B_l ≠ 0` for every array of total content degree at most `depth`.
pub fn genericity_check(p: &Params, depth: u32) -> Result<bool> {
    Ok(genericity_witness(p, depth)?.is_none())
}

/// Errors with the first witness when the weight is not generic up to `depth`.
pub fn require_generic(p: &Params, depth: u32) -> Result<()> {
    match genericity_witness(p, depth)? {
        None => Ok(()),
        Some(l) => Err(Error::DegenerateWeight { witness: l.to_string() }),
    }
}

/// Deterministic random parameters, redrawn until generic up to `depth`.
pub fn random_generic_params(n: usize, seed: u64, depth: u32) -> Result<Params> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let p = Params::random(n, &mut rng)?;
        if genericity_check(&p, depth)? {
            return Ok(p);
        }
    }
    Err(Error::InvalidParams(format!("no generic specialization found for seed {seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::{rat, ratio};
    use proptest::prelude::*;

    fn arr(n: usize, e: &[u32]) -> TriangularArray {
        TriangularArray::from_entries(n, e.to_vec()).unwrap()
    }

    fn top(n: usize) -> WeightContent {
        WeightContent::zero(n)
    }

    #[test]
    fn weight_sequences() {
        let s = weight_sequence(&arr(2, &[1, 1, 1]));
        let c = |v: &[i32]| WeightContent::new(v.to_vec());
        assert_eq!(s.contents, vec![c(&[0, 0]), c(&[2, 1]), c(&[2, 2])]);
        assert!(weight_sequence(&TriangularArray::zero(3)).contents.iter().all(WeightContent::is_zero));
        let l = arr(3, &[1, 0, 2, 1, 1, 3]);
        assert_eq!(weight_sequence(&l).contents[3], l.content());
    }

    #[test]
    fn c_values() {
        let p = Params::default_profile(2).unwrap();
        assert_eq!(c_km(&p, &top(2), 1, 2).unwrap(), ratio(899, 45) * ratio(16, 5));
        assert_eq!(c_km(&p, &top(2), 2, 2).unwrap(), p.bracket(&rat(5)));
        assert!(c_km(&p, &top(2), 2, 1).is_err());
    }

    #[test]
    fn row_factors() {
        let p = Params::default_profile(2).unwrap();
        assert_eq!(a_row(&p, &top(2), 2, &[3]).unwrap(), rat(1));
        // rank 2, row 1 = (m, l): ∏_{i<l} [λ_2 − i + m + 1]
        for (m, l) in [(0u32, 1u32), (2, 1), (1, 3)] {
            let want = falling(&p, &top(2), 2, 2, m as i32 + 1, l);
            assert_eq!(a_row(&p, &top(2), 1, &[m, l]).unwrap(), want);
        }
        assert_eq!(b_row(&p, &top(2), 1, &[0, 0]).unwrap(), rat(1));
        let p1 = Params::new(1, rat(2), vec![rat(3)]).unwrap();
        for l in 0..4 {
            assert_eq!(b_row(&p1, &top(1), 1, &[l]).unwrap(), p1.q_factorial(l) * falling(&p1, &top(1), 1, 1, 0, l));
        }
        assert!(a_row(&p, &top(2), 1, &[1]).is_err());
    }

    #[test]
    fn b_total_examples() {
        let p = Params::default_profile(2).unwrap();
        assert_eq!(b_total(&p, &TriangularArray::zero(2)).unwrap(), rat(1));
        let want = p.mu_bracket(&top(2), 2, 2, 1) * c_km(&p, &top(2), 1, 2).unwrap();
        assert_eq!(b_total(&p, &arr(2, &[0, 1, 0])).unwrap(), want);
        for m in 0..3 {
            for l in 0..3 {
                for k in 0..3 {
                    assert_eq!(b_total(&p, &arr(2, &[m, l, k])).unwrap(), sl3_closed_form(&p, m, l, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn root_power_values() {
        let p = Params::default_profile(2).unwrap();
        assert_eq!(longest_root_power_norm(&p, &top(2), 0), rat(1));
        let want = p.q_factorial(2)
            * p.mu_bracket(&top(2), 1, 2, 0)
            * p.mu_bracket(&top(2), 1, 2, -1)
            * p.mu_bracket(&top(2), 2, 2, 0)
            * p.mu_bracket(&top(2), 2, 2, -1);
        assert_eq!(longest_root_power_norm(&p, &top(2), 2), want);
        assert_eq!(longest_root_power_norm(&p, &top(2), 1), c_km(&p, &top(2), 1, 2).unwrap());
        assert_eq!(root_power_norm(&p, &top(2), 2, 2).unwrap(), want);
        assert_eq!(root_power_norm(&p, &top(2), 1, 1).unwrap(), p.mu_bracket(&top(2), 1, 1, 0));
        assert!(root_power_norm(&p, &top(2), 3, 1).is_err());
    }

    #[test]
    fn example_value_is_a_row_norm() {
        let p = Params::default_profile(3).unwrap();
        for (k, mm) in [(1, 2), (1, 3), (2, 3)] {
            let mut row = vec![0u32; 3];
            row[k - 1] = 1;
            row[mm - 1] = 1;
            assert_eq!(two_root_pairing(&p, &top(3), k, mm).unwrap(), b_row(&p, &top(3), 1, &row).unwrap());
        }
        assert!(two_root_pairing(&p, &top(3), 2, 2).is_err());
    }

    #[test]
    fn phi_monomials() {
        assert_eq!(phi_monomial(2, 1).unwrap(), EScript(vec![1, 2]));
        assert_eq!(phi_monomial(2, 2).unwrap(), EScript(vec![2, 1]));
        assert_eq!(phi_monomial(3, 2).unwrap(), EScript(vec![2, 3, 1]));
        assert_eq!(phi_monomial(3, 3).unwrap(), EScript(vec![3, 2, 1]));
        assert!(phi_monomial(3, 4).is_err());
    }

    #[test]
    fn reductions_hold() {
        for n in 2..=3 {
            let p = Params::default_profile(n).unwrap();
            for i in 1..=n {
                for l in 1..=4 {
                    let r = reduction_sides(&p, &top(n), i, l).unwrap();
                    assert_eq!(r.lhs, r.rhs, "n={n} i={i} l={l}");
                }
            }
        }
        let p = Params::default_profile(2).unwrap();
        // l = 1 is a tautology; l = 2 at i = n is the q^{-1}[2] shift.
        let d22 = d_il(&p, &top(2), 2, 2).unwrap();
        let shifted = WeightContent::new(vec![1, 1]);
        assert_eq!(d22, p.q_pow(-1) * p.q_int(2) * d_il(&p, &shifted, 2, 1).unwrap());
    }

    #[test]
    fn genericity() {
        let p = Params::default_profile(2).unwrap();
        assert!(genericity_check(&p, 0).unwrap());
        assert!(genericity_check(&p, 4).unwrap());
        let d = p.with_z(vec![rat(3), ratio(1, 4)]).unwrap();
        assert!(genericity_check(&d, 2).unwrap());
        assert_eq!(genericity_witness(&d, 3).unwrap(), Some(arr(2, &[2, 0, 1])));
        assert!(degenerate_arrays(&d, 3).unwrap().contains(&arr(2, &[1, 1, 0])));
        assert!(matches!(require_generic(&d, 3), Err(Error::DegenerateWeight { .. })));
    }

    #[test]
    fn singular_criteria() {
        let p = Params::default_profile(2).unwrap();
        for k in 1..=2 {
            for m in 1..=5 {
                assert!(!singular_criterion(&p, k, m).unwrap());
            }
        }
        let s = p.with_z(vec![ratio(1, 6), rat(3)]).unwrap();
        assert!(singular_criterion(&s, 1, 1).unwrap());
        let p1 = Params::new(1, rat(2), vec![rat(8)]).unwrap();
        assert!(singular_criterion(&p1, 1, 4).unwrap());
        for neg in [false, true] {
            let a = arranged_singular_params(&p, 1, 3, neg).unwrap();
            assert!(singular_criterion(&a, 1, 3).unwrap());
            assert!(!singular_criterion(&a, 1, 2).unwrap());
        }
    }

    #[test]
    fn random_generic_is_deterministic() {
        let a = random_generic_params(2, 7, 3).unwrap();
        let b = random_generic_params(2, 7, 3).unwrap();
        assert_eq!(a.z(), b.z());
        assert_eq!(a.q(), b.q());
        assert!(genericity_check(&a, 3).unwrap());
    }

    #[test]
    fn discrepancy_reports_both_values() {
        let d = compare("norm", || "q=2".into(), rat(1), ratio(1, 2)).unwrap_err();
        let s = d.to_string();
        assert!(s.contains("1/1") && s.contains("1/2") && s.contains("q=2"));
        assert!(compare("norm", || unreachable!(), rat(3), rat(3)).is_ok());
    }

    proptest! {
        #[test]
        fn sl3_closed_form_matches_rows(m in 0u32..4, l in 0u32..4, k in 0u32..4, z1 in 2i64..9, z2 in 2i64..9) {
            let p = Params::new(2, rat(3), vec![ratio(z1, 7), ratio(11, z2)]).unwrap();
            let arr = TriangularArray::from_entries(2, vec![m, l, k]).unwrap();
            prop_assert_eq!(b_total(&p, &arr).unwrap(), sl3_closed_form(&p, m, l, k).unwrap());
        }

        #[test]
        fn reductions_at_random_weights(z1 in 2i64..9, z2 in 2i64..9, z3 in 2i64..9, l in 1u32..5) {
            let p = Params::new(3, ratio(3, 2), vec![rat(z1), ratio(1, z2), ratio(z3, 5)]).unwrap();
            for i in 1..=3 {
                let r = reduction_sides(&p, &WeightContent::zero(3), i, l).unwrap();
                prop_assert_eq!(r.lhs, r.rhs);
            }
        }
    }
}
