//! The Verma module `M_λ`, one weight space at a time.
//!
//! Vectors carry coordinates over the straightened PBW basis `f(l) v_λ` of
//! their weight space. Negative generators act by multiplying on the left and
//! straightening by rewriting; positive generators are commuted past the
//! leftmost root vector using `[e_i, f_j] = δ_ij [h_i]_q` and `e_i v_λ = 0`.
//! Positive elements are never straightened: they exist only as scripts
//! applied to vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freealg::{
    accumulate, enumerate_pbw, expand_pbw_monomial, expand_root_vector, FreeElement, PbwTerms, Straightener,
    TriangularArray, WeightSpace, Word,
};
use crate::linalg::{self, Echelon, Matrix};
use crate::qscalars::{check_index, Params, Rational, WeightContent};

/// A weight vector of `M_λ` in PBW coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VermaVector {
    content: WeightContent,
    coords: BTreeMap<TriangularArray, Rational>,
}

impl VermaVector {
    pub fn zero(content: WeightContent) -> Self {
        VermaVector { content, coords: BTreeMap::new() }
    }

    /// `v_λ`.
    pub fn highest(n: usize) -> Self {
        Self::basis(TriangularArray::zero(n))
    }

    /// `f(l) v_λ`.
    pub fn basis(l: TriangularArray) -> Self {
        let mut coords = BTreeMap::new();
        let content = l.content();
        coords.insert(l, Rational::one());
        VermaVector { content, coords }
    }

    pub fn from_coords(content: WeightContent, coords: BTreeMap<TriangularArray, Rational>) -> Self {
        let coords = coords.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        VermaVector { content, coords }
    }

    pub fn content(&self) -> &WeightContent {
        &self.content
    }

    pub fn coords(&self) -> &BTreeMap<TriangularArray, Rational> {
        &self.coords
    }

    pub fn coord(&self, l: &TriangularArray) -> Rational {
        self.coords.get(l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn add_to(&mut self, l: &TriangularArray, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coords.get_mut(l) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.coords.remove(l);
                }
            }
            None => {
                self.coords.insert(l.clone(), c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> VermaVector {
        if c.is_zero() {
            return VermaVector::zero(self.content.clone());
        }
        VermaVector {
            content: self.content.clone(),
            coords: self.coords.iter().map(|(l, x)| (l.clone(), x * c)).collect(),
        }
    }

    /// Sum of two vectors of one weight. Zero vectors adopt the other weight.
    pub fn add(&self, other: &VermaVector) -> VermaVector {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        debug_assert_eq!(self.content, other.content);
        let mut out = self.clone();
        for (l, c) in &other.coords {
            out.add_to(l, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &VermaVector) -> VermaVector {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Dense coordinates over the given PBW list.
    pub fn dense(&self, pbw: &[TriangularArray]) -> Vec<Rational> {
        pbw.iter().map(|l| self.coord(l)).collect()
    }
}

impl fmt::Display for VermaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·f{l}v")?;
        }
        Ok(())
    }
}

/// A monomial `e_{i_1} ⋯ e_{i_k}`; the rightmost letter acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EScript(pub Vec<usize>);

impl EScript {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn content(&self, n: usize) -> WeightContent {
        let mut m = vec![0; n];
        for &i in &self.0 {
            m[i - 1] += 1;
        }
        WeightContent(m)
    }
}

/// The Chevalley involution on a negative monomial: `f_{i_1}⋯f_{i_k} ↦ e_{i_k}⋯e_{i_1}`.
pub fn omega(word: &Word) -> EScript {
    EScript(word.letters().rev().collect())
}

/// Result of projecting onto the quotient by a root-vector left ideal.
#[derive(Clone, Debug)]
pub struct IdealProjection {
    pub in_ideal: bool,
    /// Reduced representative of the class, dense over the weight-space PBW list.
    pub residue: Vec<Rational>,
    /// Dimension of the ideal's component at this weight.
    pub ideal_dim: usize,
}

/// `M_λ` at a fixed specialization, with write-once caches.
///
/// Products are straightened by rewriting ([`Straightener`]), so no weight
/// space is ever eliminated densely except through [`Verma::space`].
#[derive(Debug)]
pub struct Verma {
    params: Params,
    straightener: Straightener,
    spaces: Mutex<HashMap<WeightContent, Arc<WeightSpace>>>,
    pbw_lists: Mutex<HashMap<WeightContent, Arc<Vec<TriangularArray>>>>,
    /// `e_i f(l) v_λ` per `(i, l)`.
    e_images: Mutex<HashMap<(usize, TriangularArray), Arc<PbwTerms>>>,
    expansions: Mutex<HashMap<TriangularArray, Arc<FreeElement>>>,
}

fn cached<K: std::hash::Hash + Eq + Clone, V>(
    table: &Mutex<HashMap<K, Arc<V>>>,
    key: &K,
    build: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    if let Some(v) = table.lock().unwrap().get(key) {
        return Ok(v.clone());
    }
    // Built outside the lock; a racing builder produces an identical value.
    let v = Arc::new(build()?);
    Ok(table.lock().unwrap().entry(key.clone()).or_insert(v).clone())
}

impl Verma {
    pub fn new(params: Params) -> Self {
        Verma {
            straightener: Straightener::new(&params),
            params,
            spaces: Mutex::new(HashMap::new()),
            pbw_lists: Mutex::new(HashMap::new()),
            e_images: Mutex::new(HashMap::new()),
            expansions: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// The rewriting engine behind the module structure.
    pub fn straightener(&self) -> &Straightener {
        &self.straightener
    }

    pub fn rank(&self) -> usize {
        self.params.rank()
    }

    /// Dense weight-space data (words, Serre span). Expensive at large contents.
    pub fn space(&self, m: &WeightContent) -> Result<Arc<WeightSpace>> {
        cached(&self.spaces, m, || WeightSpace::build(&self.params, m))
    }

    /// The PBW list of content `m`, in [`enumerate_pbw`] order.
    pub fn pbw_list(&self, m: &WeightContent) -> Arc<Vec<TriangularArray>> {
        cached(&self.pbw_lists, m, || Ok(enumerate_pbw(self.rank(), m))).expect("enumeration cannot fail")
    }

    pub fn pbw_basis(&self, m: &WeightContent) -> Result<Vec<VermaVector>> {
        Ok(self.pbw_list(m).iter().cloned().map(VermaVector::basis).collect())
    }

    fn collect_terms<'a>(
        &self,
        out: WeightContent,
        terms: impl IntoIterator<Item = (&'a TriangularArray, Rational)>,
    ) -> VermaVector {
        let mut v = VermaVector::zero(out);
        for (l, c) in terms {
            v.add_to(l, c);
        }
        v
    }

    /// `f_i · v`.
    pub fn act_f(&self, i: usize, v: &VermaVector) -> Result<VermaVector> {
        check_index(self.rank(), i)?;
        let mut out = VermaVector::zero(v.content.with_simple(i, 1));
        for (l, c) in &v.coords {
            for (u, d) in self.straightener.simple_times(i, l)?.iter() {
                out.add_to(u, c * d);
            }
        }
        Ok(out)
    }

    /// `e_i f(l) v_λ`, peeling the leftmost root vector:
    /// `e_i f_r u = [e_i, f_r] u + f_r e_i u`, with the commutator pushed
    /// through the word expansion of `f_r`.
    fn e_image(&self, i: usize, l: &TriangularArray) -> Result<Arc<PbwTerms>> {
        cached(&self.e_images, &(i, l.clone()), || {
            let n = self.rank();
            let Some((a, b)) =
                (1..=n).rev().flat_map(|k| (k..=n).rev().map(move |j| (k, j))).find(|&(k, j)| l.get(k, j) > 0)
            else {
                return Ok(Vec::new());
            };
            let mut rest = l.clone();
            rest.set(a, b, l.get(a, b) - 1);
            let rest_content = rest.content();
            let mut acc = BTreeMap::new();
            for (w, c) in expand_root_vector(&self.params, a, b)?.terms() {
                let letters = &w.0;
                let mut suffix = rest_content.clone();
                for s in (0..letters.len()).rev() {
                    let j = letters[s] as usize;
                    if j == i {
                        let h = self.params.bracket(&self.params.q_power_of_weight(&suffix, i));
                        if !h.is_zero() {
                            let mut shorter = letters.clone();
                            shorter.remove(s);
                            for (u, d) in self.straightener.word_times(&Word(shorter), &rest)? {
                                accumulate(&mut acc, u, c * &h * d);
                            }
                        }
                    }
                    suffix = suffix.with_simple(j, 1);
                }
            }
            for (u, d) in self.e_image(i, &rest)?.iter() {
                for (t, x) in self.straightener.root_times(a, b, u)?.iter() {
                    accumulate(&mut acc, t.clone(), d * x);
                }
            }
            Ok(acc.into_iter().collect())
        })
    }

    /// `e_i · v`. Lowering past the top gives the zero vector of an empty weight.
    pub fn act_e(&self, i: usize, v: &VermaVector) -> Result<VermaVector> {
        check_index(self.rank(), i)?;
        let out = v.content.with_simple(i, -1);
        if v.is_zero() || !out.is_admissible() {
            return Ok(VermaVector::zero(out));
        }
        let mut acc = VermaVector::zero(out);
        for (l, c) in &v.coords {
            for (u, d) in self.e_image(i, l)?.iter() {
                acc.add_to(u, c * d);
            }
        }
        Ok(acc)
    }

    /// `t_i^{±1} · v`.
    pub fn act_t(&self, i: usize, inverse: bool, v: &VermaVector) -> Result<VermaVector> {
        check_index(self.rank(), i)?;
        let t = self.params.q_power_of_weight(&v.content, i);
        Ok(v.scale(&if inverse { t.recip() } else { t }))
    }

    /// `[h_i + shift]_q · v`, the bracket evaluated at the weight of `v`.
    pub fn cartan_bracket(&self, i: usize, j: usize, shift: i32, v: &VermaVector) -> Rational {
        self.params.mu_bracket(&v.content, i, j, shift)
    }

    /// Applies a word of negative generators, rightmost letter first.
    pub fn act_word(&self, w: &Word, v: &VermaVector) -> Result<VermaVector> {
        w.letters().rev().try_fold(v.clone(), |acc, i| self.act_f(i, &acc))
    }

    /// Applies a free-algebra element in the negative generators.
    pub fn act_free(&self, x: &FreeElement, v: &VermaVector) -> Result<VermaVector> {
        let mut out = VermaVector::zero(v.content.add(x.content()));
        for (w, c) in x.terms() {
            out = out.add(&self.act_word(w, v)?.scale(c));
        }
        Ok(out)
    }

    /// Applies `ω(x)` for a negative element `x`, i.e. the matching positive element.
    pub fn act_omega(&self, x: &FreeElement, v: &VermaVector) -> Result<VermaVector> {
        let mut out = VermaVector::zero(v.content.sub(x.content()));
        for (w, c) in x.terms() {
            out = out.add(&self.apply_escript(&omega(w), v)?.scale(c));
        }
        Ok(out)
    }

    pub fn apply_escript(&self, s: &EScript, v: &VermaVector) -> Result<VermaVector> {
        s.0.iter().rev().try_fold(v.clone(), |acc, &i| self.act_e(i, &acc))
    }

    /// The coefficient of `v_λ` in `s · v`; zero when the weights differ.
    pub fn pair_cyclic(&self, s: &EScript, v: &VermaVector) -> Result<Rational> {
        Ok(read_top(&self.apply_escript(s, v)?))
    }

    /// Word expansion of a vector: `Σ c_w · w` with `v = Σ c_w w v_λ`.
    pub fn word_expansion(&self, v: &VermaVector) -> Result<FreeElement> {
        if v.is_zero() {
            return Ok(FreeElement::zero(v.content.clone()));
        }
        let mut out = FreeElement::zero(v.content.clone());
        for (l, c) in &v.coords {
            let e = cached(&self.expansions, l, || Ok(expand_pbw_monomial(&self.params, l)))?;
            out = out.add(&e.scale(c));
        }
        Ok(out)
    }

    /// `⟨θ(x), y⟩` where `θ(u v_λ) = v_λ^* ω(u)`.
    pub fn pair_contravariant(&self, x: &VermaVector, y: &VermaVector) -> Result<Rational> {
        if x.content != y.content {
            return Ok(Rational::zero());
        }
        let mut acc = Rational::zero();
        for (w, c) in self.word_expansion(x)?.terms() {
            acc += c * self.pair_cyclic(&omega(w), y)?;
        }
        Ok(acc)
    }

    /// Contravariant Gram matrix of a family of vectors of content `m`.
    pub fn gram_contravariant(&self, m: &WeightContent, vectors: &[VermaVector]) -> Result<Matrix> {
        for v in vectors {
            if !v.is_zero() && &v.content != m {
                return Err(Error::ContentMismatch { expected: m.to_string(), found: v.content.to_string() });
            }
        }
        let expansions: Vec<FreeElement> = vectors.iter().map(|x| self.word_expansion(x)).collect::<Result<_>>()?;
        // ⟨θ(w v_λ), y⟩ for every word w that occurs, then combine rows.
        let mut by_word: HashMap<&Word, Vec<Rational>> = HashMap::new();
        for x in &expansions {
            for w in x.terms().keys() {
                if !by_word.contains_key(w) {
                    let row = vectors.iter().map(|y| self.pair_cyclic(&omega(w), y)).collect::<Result<_>>()?;
                    by_word.insert(w, row);
                }
            }
        }
        Ok(expansions
            .iter()
            .map(|x| {
                (0..vectors.len())
                    .map(|b| x.terms().iter().fold(Rational::zero(), |acc, (w, c)| acc + c * &by_word[w][b]))
                    .collect()
            })
            .collect())
    }

    /// The subspace `Σ_{j0 ≤ j ≤ k ≤ j1} f_{jk} M_λ` at content `m`, echelonized over the PBW list.
    pub fn root_ideal(&self, j0: usize, j1: usize, m: &WeightContent) -> Result<Echelon> {
        let n = self.rank();
        check_index(n, j0)?;
        check_index(n, j1)?;
        let pbw = self.pbw_list(m);
        let mut ideal = Echelon::new(pbw.len());
        for j in j0..=j1 {
            for k in j..=j1 {
                let rest = m.sub(&WeightContent::root(n, j, k));
                if !rest.is_admissible() {
                    continue;
                }
                for l in self.pbw_list(&rest).iter() {
                    let image = self.straightener.root_times(j, k, l)?;
                    ideal.insert(self.collect_terms(m.clone(), image.iter().map(|(u, c)| (u, c.clone()))).dense(&pbw));
                }
            }
        }
        Ok(ideal)
    }

    /// Whether `v` lies in `Σ_{j ≥ j0} f_{jk} M_λ`, with the residue class modulo it.
    pub fn ideal_quotient_project(&self, j0: usize, v: &VermaVector) -> Result<IdealProjection> {
        self.ideal_quotient_project_range(j0, self.rank(), v)
    }

    pub fn ideal_quotient_project_range(&self, j0: usize, j1: usize, v: &VermaVector) -> Result<IdealProjection> {
        let ideal = self.root_ideal(j0, j1, &v.content)?;
        let mut residue = v.dense(&self.pbw_list(&v.content));
        ideal.reduce(&mut residue);
        Ok(IdealProjection { in_ideal: residue.iter().all(Zero::is_zero), residue, ideal_dim: ideal.rank() })
    }

    /// Vectors of content `m` killed by every `e_k`, `k ∈ indices`: a basis of the joint kernel.
    pub fn joint_kernel(&self, m: &WeightContent, indices: &[usize]) -> Result<Vec<VermaVector>> {
        let pbw = self.pbw_list(m);
        let basis = self.pbw_basis(m)?;
        let mut rows: Matrix = Vec::new();
        for &k in indices {
            let out = m.with_simple(k, -1);
            if !out.is_admissible() {
                continue;
            }
            let tgt = self.pbw_list(&out);
            let images: Vec<Vec<Rational>> =
                basis.iter().map(|b| Ok(self.act_e(k, b)?.dense(&tgt))).collect::<Result<_>>()?;
            rows.extend(linalg::transpose(&images));
        }
        let dim = pbw.len();
        let kernel = if rows.is_empty() { linalg::identity(dim) } else { linalg::kernel(&rows, dim) };
        Ok(kernel
            .into_iter()
            .map(|x| VermaVector::from_coords(m.clone(), pbw.iter().cloned().zip(x).collect()))
            .collect())
    }
}

/// `M_λ` through unstraightened word expansions: a [`FreeElement`] `x` stands for `x v_λ`.
///
/// Generators act without any reference to the Serre ideal, so this is cheap in
/// weight spaces far too large to straighten. Distinct elements may represent
/// the same vector; only scalars read off at the top weight are meaningful.
#[derive(Clone, Debug)]
pub struct WordModule {
    params: Params,
}

impl WordModule {
    pub fn new(params: Params) -> Self {
        WordModule { params }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `v_λ`.
    pub fn highest(&self) -> FreeElement {
        FreeElement::unit(self.params.rank())
    }

    /// `f_i · x`: prefix every word.
    pub fn act_f(&self, i: usize, x: &FreeElement) -> Result<FreeElement> {
        check_index(self.params.rank(), i)?;
        let prefix = Word::from_letters(&[i]);
        let terms = x.terms().iter().map(|(w, c)| (prefix.concat(w), c.clone())).collect();
        Ok(FreeElement::collect_terms(x.content().with_simple(i, 1), terms))
    }

    /// `e_i · x`, pushing `e_i` through each word onto `v_λ`.
    pub fn act_e(&self, i: usize, x: &FreeElement) -> Result<FreeElement> {
        let n = self.params.rank();
        check_index(n, i)?;
        let out = x.content().with_simple(i, -1);
        let mut terms: BTreeMap<Word, Rational> = BTreeMap::new();
        if out.is_admissible() {
            for (w, c) in x.terms() {
                let letters = &w.0;
                let mut suffix = WeightContent::zero(n);
                for s in (0..letters.len()).rev() {
                    let j = letters[s] as usize;
                    if j == i {
                        let h = self.params.bracket(&self.params.q_power_of_weight(&suffix, i));
                        if !h.is_zero() {
                            let mut rest = letters.clone();
                            rest.remove(s);
                            *terms.entry(Word(rest)).or_insert_with(Rational::zero) += c * h;
                        }
                    }
                    suffix = suffix.with_simple(j, 1);
                }
            }
        }
        Ok(FreeElement::collect_terms(out, terms))
    }

    /// Coefficient of `v_λ`: the empty-word coefficient at content zero.
    pub fn read_top(x: &FreeElement) -> Rational {
        if x.content().is_zero() {
            x.coeff(&Word::empty())
        } else {
            Rational::zero()
        }
    }
}

/// Coefficient of `v_λ` in a vector (zero unless the vector has the top weight).
pub fn read_top(v: &VermaVector) -> Rational {
    if !v.content.is_zero() {
        return Rational::zero();
    }
    v.coords.values().next().cloned().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{straighten, word};
    use crate::qscalars::{rat, WeightContent};

    fn arr(n: usize, e: &[u32]) -> TriangularArray {
        TriangularArray::from_entries(n, e.to_vec()).unwrap()
    }

    fn c(v: &[i32]) -> WeightContent {
        WeightContent::new(v.to_vec())
    }

    #[test]
    fn lowering_from_the_top() {
        let v = Verma::new(Params::default_profile(2).unwrap());
        let top = VermaVector::highest(2);
        assert_eq!(v.act_f(1, &top).unwrap(), VermaVector::basis(arr(2, &[1, 0, 0])));
        assert!(v.act_e(1, &top).unwrap().is_zero());
        assert!(v.act_f(3, &top).is_err());
    }

    #[test]
    fn act_f_matches_straightening_of_words() {
        let p = Params::default_profile(2).unwrap();
        let v = Verma::new(p.clone());
        let top = VermaVector::highest(2);
        let x = v.act_f(2, &v.act_f(1, &top).unwrap()).unwrap();
        assert_eq!(x, VermaVector::basis(arr(2, &[1, 0, 1])));
        for w in [word(&[1, 1, 2]), word(&[1, 2, 1]), word(&[2, 1, 1])] {
            let got = v.act_word(&w, &top).unwrap();
            let want = straighten(&p, &c(&[2, 1]), &FreeElement::monomial(2, w, rat(1))).unwrap();
            assert_eq!(got.coords(), &want);
        }
        let f12 = crate::freealg::expand_root_vector(&p, 1, 2).unwrap();
        let lhs = v.act_f(1, &v.act_free(&f12, &top).unwrap()).unwrap();
        let f1f12 = FreeElement::monomial(2, word(&[1]), rat(1)).mul(&f12);
        assert_eq!(lhs.coords(), &straighten(&p, &c(&[2, 1]), &f1f12).unwrap());
    }

    /// Raising on PBW vectors agrees with pushing `e_i` through unstraightened words.
    fn raising_matches_word_module(p: &Params, m: &WeightContent) {
        let v = Verma::new(p.clone());
        let words = WordModule::new(p.clone());
        for b in v.pbw_basis(m).unwrap() {
            let x = v.word_expansion(&b).unwrap();
            for i in 1..=p.rank() {
                let out = m.with_simple(i, -1);
                if !out.is_admissible() {
                    continue;
                }
                let want = straighten(p, &out, &words.act_e(i, &x).unwrap()).unwrap();
                assert_eq!(v.act_e(i, &b).unwrap().coords(), &want, "e_{i} on {b} at {m}");
            }
        }
    }

    #[test]
    fn raising_matches_word_pushing() {
        let p2 = Params::default_profile(2).unwrap();
        for m in [c(&[1, 1]), c(&[2, 1]), c(&[2, 2]), c(&[3, 2])] {
            raising_matches_word_module(&p2, &m);
        }
        let p3 = Params::default_profile(3).unwrap();
        for m in [c(&[1, 1, 1]), c(&[1, 2, 1]), c(&[2, 1, 2])] {
            raising_matches_word_module(&p3, &m);
        }
    }

    #[test]
    fn word_module_pairings_match() {
        let p = Params::default_profile(2).unwrap();
        let v = Verma::new(p.clone());
        let words = WordModule::new(p.clone());
        let m = c(&[2, 2]);
        let basis = v.pbw_basis(&m).unwrap();
        let gram = v.gram_contravariant(&m, &basis).unwrap();
        for (a, x) in basis.iter().enumerate() {
            let xw = v.word_expansion(x).unwrap();
            for (b, y) in basis.iter().enumerate() {
                let yw = v.word_expansion(y).unwrap();
                let mut acc = rat(0);
                for (w, cw) in xw.terms() {
                    let mut z = yw.clone();
                    for &i in omega(w).0.iter().rev() {
                        z = words.act_e(i, &z).unwrap();
                    }
                    acc += cw * WordModule::read_top(&z);
                }
                assert_eq!(acc, gram[a][b]);
            }
        }
    }

    #[test]
    fn raising_on_sl2_strings() {
        let p = Params::new(1, rat(3), vec![crate::qscalars::ratio(5, 7)]).unwrap();
        let v = Verma::new(p.clone());
        let mut x = VermaVector::highest(1);
        for m in 1..=4 {
            let next = v.act_f(1, &x).unwrap();
            let back = v.act_e(1, &next).unwrap();
            // e f^m v = [m][λ - m + 1] f^{m-1} v
            let coef = p.q_int(m) * p.bracket(&(&p.z()[0] * p.q_pow(1 - m)));
            assert_eq!(back, x.scale(&coef));
            x = next;
        }
        let f1 = v.act_f(1, &VermaVector::highest(1)).unwrap();
        assert_eq!(
            v.apply_escript(&EScript(vec![1]), &f1).unwrap(),
            VermaVector::highest(1).scale(&p.bracket(&p.z()[0]))
        );
    }

    #[test]
    fn cartan_action() {
        let p = Params::default_profile(2).unwrap();
        let v = Verma::new(p.clone());
        let top = VermaVector::highest(2);
        assert_eq!(v.act_t(1, false, &top).unwrap(), top.scale(&rat(3)));
        assert_eq!(v.act_t(1, true, &top).unwrap(), top.scale(&crate::qscalars::ratio(1, 3)));
        let f1 = v.act_f(1, &top).unwrap();
        assert_eq!(v.act_t(2, false, &f1).unwrap(), f1.scale(&rat(10)));
    }

    #[test]
    fn omega_reverses() {
        assert_eq!(omega(&word(&[1])), EScript(vec![1]));
        assert_eq!(omega(&word(&[1, 2])), EScript(vec![2, 1]));
        assert_eq!(omega(&word(&[1, 2, 1])), EScript(vec![1, 2, 1]));
    }

    #[test]
    fn cyclic_pairing_basics() {
        let p = Params::default_profile(2).unwrap();
        let v = Verma::new(p.clone());
        let top = VermaVector::highest(2);
        assert_eq!(v.pair_cyclic(&EScript::default(), &top).unwrap(), rat(1));
        let f1 = v.act_f(1, &top).unwrap();
        let f2 = v.act_f(2, &top).unwrap();
        assert_eq!(v.pair_cyclic(&EScript(vec![1]), &f1).unwrap(), p.bracket(&rat(3)));
        assert_eq!(v.pair_cyclic(&EScript(vec![1]), &f2).unwrap(), rat(0));
        assert_eq!(v.pair_cyclic(&EScript(vec![1, 1]), &f1).unwrap(), rat(0));
    }

    #[test]
    fn contravariant_gram_small_cases() {
        let p1 = Params::new(1, rat(2), vec![rat(3)]).unwrap();
        let v1 = Verma::new(p1.clone());
        assert_eq!(v1.gram_contravariant(&c(&[0]), &[VermaVector::highest(1)]).unwrap(), vec![vec![rat(1)]]);
        let f1 = v1.act_f(1, &VermaVector::highest(1)).unwrap();
        assert_eq!(v1.gram_contravariant(&c(&[1]), &[f1]).unwrap(), vec![vec![p1.bracket(&rat(3))]]);

        let v2 = Verma::new(Params::default_profile(3).unwrap());
        for m in WeightContent::all_up_to_degree(3, 3) {
            let basis = v2.pbw_basis(&m).unwrap();
            let g = v2.gram_contravariant(&m, &basis).unwrap();
            assert_eq!(g, linalg::transpose(&g), "content {m}");
        }
    }

    #[test]
    fn ideal_projection() {
        let v = Verma::new(Params::default_profile(2).unwrap());
        let top = VermaVector::highest(2);
        let f2f1 = v.act_word(&word(&[2, 1]), &top).unwrap();
        assert!(v.ideal_quotient_project(2, &f2f1).unwrap().in_ideal);
        let f1f2 = v.act_word(&word(&[1, 2]), &top).unwrap();
        let pr = v.ideal_quotient_project(2, &f1f2).unwrap();
        assert!(!pr.in_ideal);
        assert_eq!(pr.ideal_dim, 1);
        assert!(pr.residue.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn joint_kernel_of_top_weight_space() {
        let v = Verma::new(Params::default_profile(2).unwrap());
        let k = v.joint_kernel(&c(&[1, 0]), &[2]).unwrap();
        assert_eq!(k.len(), 1);
        let k = v.joint_kernel(&c(&[1, 1]), &[1, 2]).unwrap();
        assert!(k.is_empty());
    }
}
