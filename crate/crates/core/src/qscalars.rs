//! Exact scalars: rationals, q-brackets, the A-type Cartan pairing and the
//! specialization of highest weights to rational parameters.
//!
//! A highest weight `λ` never appears symbolically. Each `q^{λ_i}` is a fixed
//! rational `z_i`, and every weight that occurs in a Verma module is recorded
//! by its content `m`, meaning `μ = λ − Σ_j m_j α_j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Always `num/den`, also for integers, so that output never looks like a float.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `a/b` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

/// `(α_i, α_j)` for the A_n Dynkin diagram, 1-based.
pub fn cartan_pairing(n: usize, i: usize, j: usize) -> Result<i32> {
    check_index(n, i)?;
    check_index(n, j)?;
    Ok(cartan_entry(i, j))
}

#[inline]
pub(crate) fn cartan_entry(i: usize, j: usize) -> i32 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

pub(crate) fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        Err(Error::IndexOutOfRange { index: i, rank: n })
    } else {
        Ok(())
    }
}

/// A weight `λ − Σ_j m_j α_j`, stored by its content `m`.
///
/// Entries of a vector's content are non-negative. A negative entry can only
/// arise from lowering past the top (`e_i` applied with `m_i = 0`) and names
/// an empty weight space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightContent(pub Vec<i32>);

impl WeightContent {
    pub fn zero(n: usize) -> Self {
        WeightContent(vec![0; n])
    }

    pub fn new(m: Vec<i32>) -> Self {
        WeightContent(m)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// True when no entry is negative, i.e. the weight space can be non-empty.
    pub fn is_admissible(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().sum()
    }

    /// Component `i`, 1-based.
    pub fn get(&self, i: usize) -> i32 {
        self.0[i - 1]
    }

    pub fn add(&self, other: &WeightContent) -> WeightContent {
        WeightContent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &WeightContent) -> WeightContent {
        WeightContent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Content shifted by `c` copies of the simple root `α_i` (1-based).
    pub fn with_simple(&self, i: usize, c: i32) -> WeightContent {
        let mut m = self.0.clone();
        m[i - 1] += c;
        WeightContent(m)
    }

    /// Content of the positive root `α_i + … + α_k`.
    pub fn root(n: usize, i: usize, k: usize) -> WeightContent {
        let mut m = vec![0; n];
        for x in &mut m[i - 1..k] {
            *x = 1;
        }
        WeightContent(m)
    }

    /// Every admissible content of total degree exactly `d`, in lexicographic order.
    pub fn all_of_degree(n: usize, d: i32) -> Vec<WeightContent> {
        fn rec(n: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<WeightContent>) {
            if cur.len() == n - 1 {
                cur.push(left);
                out.push(WeightContent(cur.clone()));
                cur.pop();
                return;
            }
            for a in 0..=left {
                cur.push(a);
                rec(n, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Every admissible content of total degree at most `d`, by degree.
    pub fn all_up_to_degree(n: usize, d: i32) -> Vec<WeightContent> {
        (0..=d).flat_map(|k| Self::all_of_degree(n, k)).collect()
    }
}

impl fmt::Display for WeightContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Rank, deformation parameter and highest-weight specialization
/// `z_i = q^{λ_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    n: usize,
    q: Rational,
    z: Vec<Rational>,
    q_inv: Rational,
    q_diff: Rational,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z: Vec<String> = self.z.iter().map(fmt_rational).collect();
        write!(f, "q={} z=({})", fmt_rational(&self.q), z.join(","))
    }
}

impl Params {
    pub fn new(n: usize, q: Rational, z: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("rank must be at least 1".into()));
        }
        if z.len() != n {
            return Err(Error::InvalidParams(format!("expected {n} highest-weight values, got {}", z.len())));
        }
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::InvalidParams(format!("q must avoid 0, 1 and -1 (got {})", fmt_rational(&q))));
        }
        if let Some(k) = z.iter().position(Zero::is_zero) {
            return Err(Error::InvalidParams(format!("z_{} is zero", k + 1)));
        }
        let q_inv = q.recip();
        let q_diff = &q - &q_inv;
        Ok(Params { n, q, z, q_inv, q_diff })
    }

    /// `q = 2`, `z = (3, 5, 7, 11, …)`.
    pub fn default_profile(n: usize) -> Result<Self> {
        let z = first_odd_primes(n).into_iter().map(rat).collect();
        Params::new(n, rat(2), z)
    }

    /// Draws `q` and every `z_i` as ratios of small primes. No genericity
    /// check happens here; see [`crate::formulas::random_generic_params`].
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        const PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
        let draw = |rng: &mut R| -> Rational {
            loop {
                let a = *PRIMES.choose(rng).unwrap();
                let b = if rng.gen_bool(0.5) { 1 } else { *PRIMES.choose(rng).unwrap() };
                let sign = if rng.gen_bool(0.2) { -1 } else { 1 };
                let r = ratio(sign * a, b);
                if !r.abs().is_one() {
                    return r;
                }
            }
        };
        let q = draw(rng);
        let z = (0..n).map(|_| draw(rng)).collect();
        Params::new(n, q, z)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn z(&self) -> &[Rational] {
        &self.z
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(&self, k: i32) -> Rational {
        if k >= 0 {
            self.q.pow(k)
        } else {
            self.q_inv.pow(-k)
        }
    }

    /// The same rank and `q` with a different highest weight.
    pub fn with_z(&self, z: Vec<Rational>) -> Result<Self> {
        Params::new(self.n, self.q.clone(), z)
    }

    /// `q^{(μ, α_i)}` for `μ = λ − Σ_j m_j α_j`.
    pub fn q_power_of_weight(&self, m: &WeightContent, i: usize) -> Rational {
        let mut e = 0i32;
        for j in 1..=self.n {
            e -= m.get(j) * cartan_entry(j, i);
        }
        &self.z[i - 1] * self.q_pow(e)
    }

    /// `[x]_q` given `Q = q^x`.
    pub fn q_bracket_from_power(&self, big_q: &Rational) -> Result<Rational> {
        if big_q.is_zero() {
            return Err(Error::ZeroPower);
        }
        Ok(self.bracket(big_q))
    }

    /// Infallible bracket for powers known to be nonzero (products of `q` and `z`).
    pub(crate) fn bracket(&self, big_q: &Rational) -> Rational {
        (big_q - big_q.recip()) / &self.q_diff
    }

    pub fn q_int(&self, k: i32) -> Rational {
        self.bracket(&self.q_pow(k))
    }

    pub fn q_factorial(&self, k: u32) -> Rational {
        (1..=k as i32).fold(Rational::one(), |acc, j| acc * self.q_int(j))
    }

    /// `q^{μ_{ij}}` where `μ_{ij} = μ_i + … + μ_j + j − i`.
    pub fn mu_power(&self, m: &WeightContent, i: usize, j: usize) -> Result<Rational> {
        check_index(self.n, i)?;
        check_index(self.n, j)?;
        if i > j {
            return Err(Error::BadRootRange { i, j });
        }
        Ok(self.mu_pow(m, i, j))
    }

    pub(crate) fn mu_pow(&self, m: &WeightContent, i: usize, j: usize) -> Rational {
        (i..=j).fold(self.q_pow((j - i) as i32), |acc, s| acc * self.q_power_of_weight(m, s))
    }

    /// `[μ_{ij} + shift]_q`.
    pub(crate) fn mu_bracket(&self, m: &WeightContent, i: usize, j: usize, shift: i32) -> Rational {
        self.bracket(&(self.mu_pow(m, i, j) * self.q_pow(shift)))
    }
}

/// `[x]_q = 0` exactly when `Q = q^x` is `±1`.
pub fn bracket_power_vanishes(big_q: &Rational) -> bool {
    big_q.abs().is_one()
}

fn first_odd_primes(n: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 3i64;
    while out.len() < n {
        if (3..).step_by(2).take_while(|d| d * d <= c).all(|d| c % d != 0) {
            out.push(c);
        }
        c += 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p235() -> Params {
        Params::new(2, rat(2), vec![rat(3), rat(5)]).unwrap()
    }

    #[test]
    fn cartan_pairing_entries() {
        assert_eq!(cartan_pairing(3, 1, 1).unwrap(), 2);
        assert_eq!(cartan_pairing(3, 1, 2).unwrap(), -1);
        assert_eq!(cartan_pairing(3, 1, 3).unwrap(), 0);
        assert!(matches!(cartan_pairing(3, 0, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(cartan_pairing(3, 1, 4).is_err());
    }

    #[test]
    fn weight_powers() {
        let p = p235();
        let m0 = WeightContent::zero(2);
        assert_eq!(p.q_power_of_weight(&m0, 1), rat(3));
        let m = WeightContent::new(vec![1, 0]);
        assert_eq!(p.q_power_of_weight(&m, 1), ratio(3, 4));
        assert_eq!(p.q_power_of_weight(&m, 2), rat(10));
    }

    #[test]
    fn brackets_and_factorials() {
        let p = p235();
        assert_eq!(p.q_bracket_from_power(&rat(1)).unwrap(), rat(0));
        assert_eq!(p.q_bracket_from_power(&rat(2)).unwrap(), rat(1));
        assert_eq!(p.q_bracket_from_power(&rat(4)).unwrap(), ratio(5, 2));
        assert!(matches!(p.q_bracket_from_power(&rat(0)), Err(Error::ZeroPower)));
        assert_eq!(p.q_int(-2), ratio(-5, 2));
        assert_eq!(p.q_factorial(0), rat(1));
        assert_eq!(p.q_factorial(3), ratio(105, 8));
    }

    #[test]
    fn mu_powers() {
        let p = p235();
        let m0 = WeightContent::zero(2);
        assert_eq!(p.mu_power(&m0, 1, 2).unwrap(), rat(30));
        let m = WeightContent::new(vec![1, 0]);
        assert_eq!(p.mu_power(&m, 1, 2).unwrap(), rat(15));
        assert_eq!(p.mu_power(&m, 2, 2).unwrap(), p.q_power_of_weight(&m, 2));
        assert!(matches!(p.mu_power(&m, 2, 1), Err(Error::BadRootRange { .. })));
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(2, rat(1), vec![rat(3), rat(5)]).is_err());
        assert!(Params::new(2, rat(-1), vec![rat(3), rat(5)]).is_err());
        assert!(Params::new(2, rat(0), vec![rat(3), rat(5)]).is_err());
        assert!(Params::new(2, rat(2), vec![rat(3), rat(0)]).is_err());
        assert!(Params::new(2, rat(2), vec![rat(3)]).is_err());
        assert!(Params::new(0, rat(2), vec![]).is_err());
        let d = Params::default_profile(4).unwrap();
        assert_eq!(d.z(), &[rat(3), rat(5), rat(7), rat(11)]);
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational(" -6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&rat(5)), "5/1");
        assert_eq!(parse_rational_list("1/6,3").unwrap(), vec![ratio(1, 6), rat(3)]);
    }

    #[test]
    fn content_enumeration() {
        assert_eq!(WeightContent::all_of_degree(3, 2).len(), 6);
        assert_eq!(WeightContent::all_up_to_degree(2, 3).len(), 10);
        assert_eq!(WeightContent::root(3, 2, 3).0, vec![0, 1, 1]);
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..30).prop_filter("nonzero", |(a, _)| *a != 0).prop_map(|(a, b)| ratio(a, b))
    }

    fn some_q() -> impl Strategy<Value = Rational> {
        nonzero_rational().prop_filter("q not ±1", |q| !q.abs().is_one())
    }

    proptest! {
        #[test]
        fn bracket_three_term_recurrence(q in some_q(), big_q in nonzero_rational()) {
            let p = Params::new(1, q.clone(), vec![rat(3)]).unwrap();
            let lhs = p.bracket(&(&big_q * &q)) + p.bracket(&(&big_q / &q));
            let rhs = (&q + q.recip()) * p.bracket(&big_q);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_is_odd(q in some_q(), big_q in nonzero_rational()) {
            let p = Params::new(1, q, vec![rat(3)]).unwrap();
            prop_assert_eq!(p.bracket(&big_q.recip()), -p.bracket(&big_q));
        }

        #[test]
        fn mu_power_splits(q in some_q(), z in prop::collection::vec(nonzero_rational(), 4),
                           m in prop::collection::vec(0i32..4, 4),
                           (i, j, k) in (1usize..=4, 1usize..=4, 1usize..=4)) {
            let mut idx = [i, j, k];
            idx.sort();
            let [i, j, k] = idx;
            prop_assume!(j < k);
            let p = Params::new(4, q, z).unwrap();
            let m = WeightContent::new(m);
            let whole = p.mu_power(&m, i, k).unwrap();
            let split = p.q() * p.mu_power(&m, i, j).unwrap() * p.mu_power(&m, j + 1, k).unwrap();
            prop_assert_eq!(whole, split);
        }
    }
}
