//! Words in the negative Chevalley generators, the Serre ideal one content at
//! a time, and straightening to PBW coordinates.
//!
//! For a content `m` the space of words is finite. The Serre ideal meets it in
//! the span of all `u·r·v` with `r` a defining relation; the PBW monomials of
//! content `m` span a complement. Straightening is a change of coordinates
//! onto that complement, computed once per content by exact elimination.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon};
use crate::qscalars::{check_index, rat, Params, Rational, WeightContent};

/// A monomial `f_{i_1} ⋯ f_{i_k}` read left to right; letters are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&i| i as u8).collect())
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().map(|&c| c as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn content(&self, n: usize) -> WeightContent {
        let mut m = vec![0; n];
        for i in self.letters() {
            m[i - 1] += 1;
        }
        WeightContent(m)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for i in self.letters() {
            write!(f, "f{i}")?;
        }
        Ok(())
    }
}

/// A rational combination of words that all share one content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    content: WeightContent,
    terms: BTreeMap<Word, Rational>,
}

impl FreeElement {
    pub fn zero(content: WeightContent) -> Self {
        FreeElement { content, terms: BTreeMap::new() }
    }

    /// Builds an element from a term map, dropping zero coefficients.
    pub fn collect_terms(content: WeightContent, terms: BTreeMap<Word, Rational>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FreeElement { content, terms }
    }

    pub fn unit(n: usize) -> Self {
        Self::monomial(n, Word::empty(), Rational::one())
    }

    pub fn monomial(n: usize, w: Word, c: Rational) -> Self {
        let mut e = FreeElement::zero(w.content(n));
        e.add_term(w, c);
        e
    }

    pub fn content(&self) -> &WeightContent {
        &self.content
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(w.content(self.content.rank()), self.content);
        let slot = self.terms.entry(w).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Rational) -> FreeElement {
        let mut out = FreeElement::zero(self.content.clone());
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut out = self.clone();
        for (w, v) in &other.terms {
            out.add_term(w.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Concatenation product.
    pub fn mul(&self, other: &FreeElement) -> FreeElement {
        let mut out = FreeElement::zero(self.content.add(&other.content));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> FreeElement {
        (0..k).fold(FreeElement::unit(self.content.rank()), |acc, _| acc.mul(self))
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{w}")?;
        }
        Ok(())
    }
}

/// Exponents `l_{ij}`, `1 ≤ i ≤ j ≤ n`, stored row by row:
/// `(l_{11}, …, l_{1n}, l_{22}, …, l_{nn})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangularArray {
    n: usize,
    entries: Vec<u32>,
}

impl TriangularArray {
    pub fn zero(n: usize) -> Self {
        TriangularArray { n, entries: vec![0; n * (n + 1) / 2] }
    }

    pub fn from_entries(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * (n + 1) / 2 {
            return Err(Error::InvalidParams(format!(
                "triangular array for rank {n} needs {} entries, got {}",
                n * (n + 1) / 2,
                entries.len()
            )));
        }
        Ok(TriangularArray { n, entries })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i <= j && j <= self.n);
        (i - 1) * (2 * self.n + 2 - i) / 2 + (j - i)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[self.offset(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        let o = self.offset(i, j);
        self.entries[o] = v;
    }

    /// Row `k`: `(l_{kk}, …, l_{kn})`.
    pub fn row(&self, k: usize) -> &[u32] {
        let start = self.offset(k, k);
        &self.entries[start..start + self.n - k + 1]
    }

    pub fn row_content(&self, k: usize) -> WeightContent {
        let mut m = vec![0i32; self.n];
        for j in k..=self.n {
            let c = self.get(k, j) as i32;
            for x in &mut m[k - 1..j] {
                *x += c;
            }
        }
        WeightContent(m)
    }

    pub fn content(&self) -> WeightContent {
        (1..=self.n).fold(WeightContent::zero(self.n), |acc, k| acc.add(&self.row_content(k)))
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }
}

impl fmt::Display for TriangularArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for k in 1..=self.n {
            if k > 1 {
                write!(f, "|")?;
            }
            for (j, x) in self.row(k).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

/// All words of content `m` in lexicographic order.
pub fn enumerate_words(n: usize, m: &WeightContent) -> Vec<Word> {
    fn rec(left: &mut [i32], cur: &mut Vec<u8>, out: &mut Vec<Word>) {
        if left.iter().all(|&x| x == 0) {
            out.push(Word(cur.clone()));
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i as u8 + 1);
                rec(left, cur, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    if !m.is_admissible() {
        return Vec::new();
    }
    debug_assert_eq!(m.rank(), n);
    let mut out = Vec::new();
    rec(&mut m.0.clone(), &mut Vec::new(), &mut out);
    out
}

/// All triangular arrays with content `m`, in lexicographic order of entries.
pub fn enumerate_pbw(n: usize, m: &WeightContent) -> Vec<TriangularArray> {
    // Row k is fixed once rows 1..k-1 are: content_k minus what earlier rows
    // put at k must be split among l_{k,k..n}, subject to later constraints.
    fn rec(
        n: usize,
        pos: usize,
        slots: &[(usize, usize)],
        left: &mut Vec<i32>,
        cur: &mut Vec<u32>,
        out: &mut Vec<TriangularArray>,
    ) {
        if pos == slots.len() {
            if left.iter().all(|&x| x == 0) {
                out.push(TriangularArray { n, entries: cur.clone() });
            }
            return;
        }
        let (i, j) = slots[pos];
        // l_{ij} uses one unit of every simple root i..=j.
        let cap = left[i - 1..j].iter().copied().min().unwrap_or(0).max(0);
        for v in 0..=cap {
            for x in &mut left[i - 1..j] {
                *x -= v;
            }
            cur.push(v as u32);
            // Once slot (i, n) is done, simple root i can receive nothing more.
            if j < n || left[i - 1] == 0 {
                rec(n, pos + 1, slots, left, cur, out);
            }
            cur.pop();
            for x in &mut left[i - 1..j] {
                *x += v;
            }
        }
    }
    if !m.is_admissible() {
        return Vec::new();
    }
    let slots: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    rec(n, 0, &slots, &mut m.0.clone(), &mut Vec::new(), &mut out);
    out
}

/// `f_{ij}` expanded in words, from `f_{ij} = f_i f_{i+1,j} − q f_{i+1,j} f_i`.
pub fn expand_root_vector(p: &Params, i: usize, j: usize) -> Result<FreeElement> {
    let n = p.rank();
    check_index(n, i)?;
    check_index(n, j)?;
    if i > j {
        return Err(Error::BadRootRange { i, j });
    }
    Ok(root_vector(p, i, j))
}

fn root_vector(p: &Params, i: usize, j: usize) -> FreeElement {
    let n = p.rank();
    let fi = FreeElement::monomial(n, Word::from_letters(&[i]), Rational::one());
    if i == j {
        return fi;
    }
    let rest = root_vector(p, i + 1, j);
    fi.mul(&rest).sub(&rest.mul(&fi).scale(p.q()))
}

/// `f(l) = f(l_n) ⋯ f(l_1)` with `f(l_k) = f_{kn}^{l_{kn}} ⋯ f_{kk}^{l_{kk}}`.
pub fn expand_pbw_monomial(p: &Params, l: &TriangularArray) -> FreeElement {
    let n = p.rank();
    let mut out = FreeElement::unit(n);
    for k in (1..=n).rev() {
        for j in (k..=n).rev() {
            let e = l.get(k, j);
            if e > 0 {
                out = out.mul(&root_vector(p, k, j).pow(e));
            }
        }
    }
    out
}

/// The defining relations of the negative part, as elements of the free algebra.
pub fn serre_relations(p: &Params) -> Vec<FreeElement> {
    let n = p.rank();
    let two = p.q_int(2);
    let w = |ls: &[usize]| Word::from_letters(ls);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i.abs_diff(j) == 1 {
                let mut r = FreeElement::monomial(n, w(&[i, i, j]), Rational::one());
                r.add_term(w(&[i, j, i]), -two.clone());
                r.add_term(w(&[j, i, i]), Rational::one());
                out.push(r);
            } else if i < j && j - i > 1 {
                let mut r = FreeElement::monomial(n, w(&[i, j]), Rational::one());
                r.add_term(w(&[j, i]), -Rational::one());
                out.push(r);
            }
        }
    }
    out
}

/// Everything needed to work inside one content of the negative part.
#[derive(Debug)]
pub struct WeightSpace {
    content: WeightContent,
    words: Vec<Word>,
    word_index: HashMap<Word, usize>,
    pbw: Vec<TriangularArray>,
    pbw_index: HashMap<TriangularArray, usize>,
    pbw_expansions: Vec<FreeElement>,
    serre: Echelon,
    /// Row `w`: PBW coordinates of the word `w`.
    word_to_pbw: Vec<Vec<Rational>>,
}

impl WeightSpace {
    pub fn build(p: &Params, m: &WeightContent) -> Result<Self> {
        let n = p.rank();
        let words = enumerate_words(n, m);
        let word_index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let pbw = enumerate_pbw(n, m);
        let pbw_index = pbw.iter().cloned().enumerate().map(|(k, l)| (l, k)).collect();
        let dim = words.len();

        let mut serre = Echelon::new(dim);
        for r in serre_relations(p) {
            let rest = m.sub(r.content());
            if !rest.is_admissible() {
                continue;
            }
            for w in enumerate_words(n, &rest) {
                for cut in 0..=w.len() {
                    let (u, v) = w.0.split_at(cut);
                    let (u, v) = (Word(u.to_vec()), Word(v.to_vec()));
                    let mut row = vec![Rational::zero(); dim];
                    for (x, c) in r.terms() {
                        row[word_index[&u.concat(x).concat(&v)]] += c;
                    }
                    serre.insert(row);
                }
            }
        }

        let pbw_expansions: Vec<FreeElement> = pbw.iter().map(|l| expand_pbw_monomial(p, l)).collect();
        let free = serre.free_columns();
        if free.len() != pbw.len() {
            return Err(Error::InternalInvariantViolation(format!(
                "content {m}: quotient has dimension {} but there are {} PBW monomials",
                free.len(),
                pbw.len()
            )));
        }
        let to_vec = |e: &FreeElement| {
            let mut v = vec![Rational::zero(); dim];
            for (w, c) in e.terms() {
                v[word_index[w]] = c.clone();
            }
            v
        };
        let reduced_on_free = |mut v: Vec<Rational>| {
            serre.reduce(&mut v);
            free.iter().map(|&c| v[c].clone()).collect::<Vec<_>>()
        };
        let t: linalg::Matrix = pbw_expansions.iter().map(|e| reduced_on_free(to_vec(e))).collect();
        let t_inv = linalg::inverse(&t).ok_or_else(|| {
            Error::InternalInvariantViolation(format!(
                "content {m}: PBW monomials are dependent modulo the Serre ideal"
            ))
        })?;
        let word_to_pbw = (0..dim)
            .map(|k| {
                let mut e = vec![Rational::zero(); dim];
                e[k] = Rational::one();
                let r = reduced_on_free(e);
                linalg::mat_mul(&vec![r], &t_inv).pop().unwrap_or_default()
            })
            .collect();

        Ok(WeightSpace { content: m.clone(), words, word_index, pbw, pbw_index, pbw_expansions, serre, word_to_pbw })
    }

    pub fn content(&self) -> &WeightContent {
        &self.content
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn pbw(&self) -> &[TriangularArray] {
        &self.pbw
    }

    pub fn pbw_position(&self, l: &TriangularArray) -> Option<usize> {
        self.pbw_index.get(l).copied()
    }

    pub fn word_position(&self, w: &Word) -> Option<usize> {
        self.word_index.get(w).copied()
    }

    pub fn pbw_expansion(&self, k: usize) -> &FreeElement {
        &self.pbw_expansions[k]
    }

    pub fn serre(&self) -> &Echelon {
        &self.serre
    }

    /// PBW coordinates of a single word.
    pub fn word_coords(&self, k: usize) -> &[Rational] {
        &self.word_to_pbw[k]
    }

    pub fn word_vector(&self, x: &FreeElement) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.words.len()];
        for (w, c) in x.terms() {
            v[self.word_index[w]] += c;
        }
        v
    }

    /// PBW coordinates of `x`, dense over [`Self::pbw`].
    pub fn straighten_dense(&self, x: &FreeElement) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.pbw.len()];
        for (w, c) in x.terms() {
            for (o, s) in out.iter_mut().zip(&self.word_to_pbw[self.word_index[w]]) {
                if !s.is_zero() {
                    *o += c * s;
                }
            }
        }
        out
    }

    /// Word expansion of a PBW coordinate vector.
    pub fn expand(&self, coords: &[Rational]) -> FreeElement {
        let mut out = FreeElement::zero(self.content.clone());
        for (c, e) in coords.iter().zip(&self.pbw_expansions) {
            if !c.is_zero() {
                out = out.add(&e.scale(c));
            }
        }
        out
    }
}

/// Reduced row echelon basis of the Serre ideal at content `m`, as coordinate
/// rows over [`enumerate_words`].
pub fn serre_span(p: &Params, m: &WeightContent) -> Result<Echelon> {
    Ok(WeightSpace::build(p, m)?.serre.clone())
}

/// Unique PBW coordinates of `x`, checked by re-expanding and reducing the
/// difference against the Serre ideal.
pub fn straighten(p: &Params, m: &WeightContent, x: &FreeElement) -> Result<BTreeMap<TriangularArray, Rational>> {
    if x.content() != m {
        return Err(Error::ContentMismatch { expected: m.to_string(), found: x.content().to_string() });
    }
    let space = WeightSpace::build(p, m)?;
    let coords = space.straighten_dense(x);
    let diff = x.sub(&space.expand(&coords));
    if !space.serre.contains(&space.word_vector(&diff)) {
        return Err(Error::InternalInvariantViolation(format!(
            "straightening at {m} left a residue outside the Serre ideal"
        )));
    }
    Ok(space.pbw.iter().zip(coords).filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l.clone(), c)).collect())
}

/// Sparse PBW coordinates.
pub type PbwTerms = Vec<(TriangularArray, Rational)>;

/// Recursion bound for [`Straightener`]; reaching it means the rewriting does not terminate.
const REWRITE_DEPTH_LIMIT: usize = 512;

/// Straightening by rewriting, for weight spaces too large for dense elimination.
///
/// A root vector times a PBW monomial is already ordered when the root comes
/// first in the PBW order; otherwise the out-of-order pair at the front is
/// replaced by the straightened product of the two root vectors (computed
/// once, densely, in its small weight space) and the procedure recurses.
/// Results are memoized per `(root, monomial)`.
#[derive(Debug)]
pub struct Straightener {
    params: Params,
    /// Roots `(i, j)` in PBW order, left to right.
    order: Vec<(usize, usize)>,
    pairs: Mutex<HashMap<(usize, usize), Arc<PbwTerms>>>,
    memo: Mutex<HashMap<(usize, TriangularArray), Arc<PbwTerms>>>,
}

impl Straightener {
    pub fn new(p: &Params) -> Self {
        let n = p.rank();
        let order = (1..=n).rev().flat_map(|k| (k..=n).rev().map(move |j| (k, j))).collect();
        Straightener { params: p.clone(), order, pairs: Mutex::new(HashMap::new()), memo: Mutex::new(HashMap::new()) }
    }

    /// Position of `f_{ij}` in the PBW order (row `n` first, each row from `j = n` down).
    pub fn position(&self, i: usize, j: usize) -> usize {
        let n = self.params.rank();
        (n - i) * (n - i + 1) / 2 + (n - j)
    }

    fn leftmost(&self, l: &TriangularArray) -> Option<usize> {
        self.order.iter().position(|&(i, j)| l.get(i, j) > 0)
    }

    fn bumped(&self, l: &TriangularArray, a: usize, by: i64) -> TriangularArray {
        let (i, j) = self.order[a];
        let mut out = l.clone();
        out.set(i, j, (l.get(i, j) as i64 + by) as u32);
        out
    }

    /// PBW coordinates of `f_a f_b` for roots at positions `a > b`.
    fn pair(&self, a: usize, b: usize) -> Result<Arc<PbwTerms>> {
        if let Some(t) = self.pairs.lock().unwrap().get(&(a, b)) {
            return Ok(t.clone());
        }
        let ((i, j), (k, m)) = (self.order[a], self.order[b]);
        let x = root_vector(&self.params, i, j).mul(&root_vector(&self.params, k, m));
        let space = WeightSpace::build(&self.params, x.content())?;
        let terms: PbwTerms =
            space.pbw().iter().cloned().zip(space.straighten_dense(&x)).filter(|(_, c)| !c.is_zero()).collect();
        let terms = Arc::new(terms);
        Ok(self.pairs.lock().unwrap().entry((a, b)).or_insert(terms).clone())
    }

    /// PBW coordinates of `f_{ij} · f(l)`.
    pub fn root_times(&self, i: usize, j: usize, l: &TriangularArray) -> Result<Arc<PbwTerms>> {
        check_index(self.params.rank(), i)?;
        check_index(self.params.rank(), j)?;
        if i > j {
            return Err(Error::BadRootRange { i, j });
        }
        self.times(self.position(i, j), l, 0)
    }

    /// PBW coordinates of `f_i · f(l)`.
    pub fn simple_times(&self, i: usize, l: &TriangularArray) -> Result<Arc<PbwTerms>> {
        self.root_times(i, i, l)
    }

    fn times(&self, a: usize, l: &TriangularArray, depth: usize) -> Result<Arc<PbwTerms>> {
        if depth > REWRITE_DEPTH_LIMIT {
            return Err(Error::InternalInvariantViolation("PBW rewriting did not terminate".into()));
        }
        let key = (a, l.clone());
        if let Some(t) = self.memo.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let terms = match self.leftmost(l) {
            Some(b) if b < a => {
                let rest = self.bumped(l, b, -1);
                let mut acc = BTreeMap::new();
                for (t, c) in self.pair(a, b)?.iter() {
                    for (u, d) in self.monomial_times(t, rest.clone(), depth + 1)? {
                        accumulate(&mut acc, u, c * d);
                    }
                }
                acc.into_iter().collect()
            }
            _ => vec![(self.bumped(l, a, 1), Rational::one())],
        };
        let terms = Arc::new(terms);
        Ok(self.memo.lock().unwrap().entry(key).or_insert(terms).clone())
    }

    /// `f(t) · f(rest)`, inserting the factors of `f(t)` right to left.
    fn monomial_times(
        &self,
        t: &TriangularArray,
        rest: TriangularArray,
        depth: usize,
    ) -> Result<BTreeMap<TriangularArray, Rational>> {
        let mut acc = BTreeMap::from([(rest, Rational::one())]);
        for a in (0..self.order.len()).rev() {
            let (i, j) = self.order[a];
            for _ in 0..t.get(i, j) {
                let mut next = BTreeMap::new();
                for (u, c) in &acc {
                    for (w, d) in self.times(a, u, depth)?.iter() {
                        accumulate(&mut next, w.clone(), c * d);
                    }
                }
                acc = next;
            }
        }
        Ok(acc)
    }

    /// PBW coordinates of `x · f(l)` for a word `x`.
    pub fn word_times(&self, w: &Word, l: &TriangularArray) -> Result<BTreeMap<TriangularArray, Rational>> {
        let mut acc = BTreeMap::from([(l.clone(), Rational::one())]);
        for i in w.letters().rev() {
            check_index(self.params.rank(), i)?;
            let a = self.position(i, i);
            let mut next = BTreeMap::new();
            for (u, c) in &acc {
                for (v, d) in self.times(a, u, 0)?.iter() {
                    accumulate(&mut next, v.clone(), c * d);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// PBW coordinates of a free-algebra element.
    pub fn straighten(&self, x: &FreeElement) -> Result<BTreeMap<TriangularArray, Rational>> {
        let top = TriangularArray::zero(self.params.rank());
        let mut acc = BTreeMap::new();
        for (w, c) in x.terms() {
            for (l, d) in self.word_times(w, &top)? {
                accumulate(&mut acc, l, c * d);
            }
        }
        Ok(acc)
    }
}

/// Adds `c` at `k`, dropping entries that cancel.
pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, k: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Multinomial coefficient `|m|! / ∏ m_i!`.
pub fn multinomial(m: &WeightContent) -> u64 {
    let mut acc = 1u64;
    let mut total = 0u64;
    for &k in &m.0 {
        for j in 1..=k as u64 {
            total += 1;
            acc = acc * total / j;
        }
    }
    acc
}

#[allow(dead_code)]
pub(crate) fn word(ls: &[usize]) -> Word {
    Word::from_letters(ls)
}

#[allow(dead_code)]
pub(crate) fn word_elem(n: usize, ls: &[usize]) -> FreeElement {
    FreeElement::monomial(n, Word::from_letters(ls), rat(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qscalars::ratio;
    use proptest::prelude::*;

    fn p2() -> Params {
        Params::default_profile(2).unwrap()
    }

    fn c(v: &[i32]) -> WeightContent {
        WeightContent::new(v.to_vec())
    }

    /// The rewriting straightener agrees with dense elimination on every word.
    fn rewriting_matches_dense(p: &Params, m: &WeightContent) {
        let st = Straightener::new(p);
        let space = WeightSpace::build(p, m).unwrap();
        for w in space.words() {
            let x = FreeElement::monomial(p.rank(), w.clone(), Rational::one());
            let dense: BTreeMap<_, _> =
                space.pbw().iter().cloned().zip(space.straighten_dense(&x)).filter(|(_, c)| !c.is_zero()).collect();
            assert_eq!(st.straighten(&x).unwrap(), dense, "word {w:?} at {m}");
        }
    }

    #[test]
    fn rewriting_straightener_rank_two() {
        let p = p2();
        for m in [c(&[1, 1]), c(&[2, 1]), c(&[1, 2]), c(&[2, 2]), c(&[3, 2]), c(&[2, 3])] {
            rewriting_matches_dense(&p, &m);
        }
    }

    #[test]
    fn rewriting_straightener_rank_three() {
        let p = Params::default_profile(3).unwrap();
        for m in [c(&[1, 1, 1]), c(&[1, 2, 1]), c(&[2, 1, 1]), c(&[1, 1, 2]), c(&[2, 2, 1])] {
            rewriting_matches_dense(&p, &m);
        }
    }

    #[test]
    fn ordered_products_are_untouched() {
        let p = p2();
        let st = Straightener::new(&p);
        let mut l = TriangularArray::zero(2);
        l.set(1, 1, 1);
        // f_22 precedes f_11, so f_2 f_11 is already a PBW monomial.
        let out = st.simple_times(2, &l).unwrap();
        let mut want = l.clone();
        want.set(2, 2, 1);
        assert_eq!(*out, vec![(want, Rational::one())]);
        assert!(st.root_times(2, 1, &l).is_err());
    }

    fn arr(n: usize, e: &[u32]) -> TriangularArray {
        TriangularArray::from_entries(n, e.to_vec()).unwrap()
    }

    #[test]
    fn words_by_content() {
        let w = enumerate_words(2, &c(&[2, 1]));
        assert_eq!(w, vec![word(&[1, 1, 2]), word(&[1, 2, 1]), word(&[2, 1, 1])]);
        assert_eq!(enumerate_words(3, &c(&[1, 1, 1])).len(), 6);
        assert_eq!(enumerate_words(2, &c(&[0, 0])), vec![Word::empty()]);
        assert_eq!(multinomial(&c(&[2, 2, 1])), 30);
    }

    #[test]
    fn pbw_by_content() {
        assert_eq!(enumerate_pbw(2, &c(&[2, 1])), vec![arr(2, &[1, 1, 0]), arr(2, &[2, 0, 1])]);
        assert_eq!(enumerate_pbw(2, &c(&[1, 1])), vec![arr(2, &[0, 1, 0]), arr(2, &[1, 0, 1])]);
        assert_eq!(enumerate_pbw(3, &c(&[0, 0, 0])), vec![TriangularArray::zero(3)]);
        for l in enumerate_pbw(3, &c(&[2, 2, 1])) {
            assert_eq!(l.content(), c(&[2, 2, 1]));
        }
    }

    #[test]
    fn triangular_rows() {
        let l = arr(3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(l.row(1), &[1, 2, 3]);
        assert_eq!(l.row(2), &[4, 5]);
        assert_eq!(l.row(3), &[6]);
        assert_eq!(l.get(2, 3), 5);
        assert_eq!(l.row_content(1), c(&[6, 5, 3]));
        assert_eq!(l.content(), c(&[6, 14, 14]));
    }

    #[test]
    fn root_vector_expansions() {
        let p = Params::default_profile(3).unwrap();
        let q = p.q().clone();
        assert_eq!(expand_root_vector(&p, 1, 1).unwrap(), word_elem(3, &[1]));
        let mut f12 = word_elem(3, &[1, 2]);
        f12.add_term(word(&[2, 1]), -q.clone());
        assert_eq!(expand_root_vector(&p, 1, 2).unwrap(), f12);
        let mut f13 = word_elem(3, &[1, 2, 3]);
        f13.add_term(word(&[1, 3, 2]), -q.clone());
        f13.add_term(word(&[2, 3, 1]), -q.clone());
        f13.add_term(word(&[3, 2, 1]), &q * &q);
        assert_eq!(expand_root_vector(&p, 1, 3).unwrap(), f13);
        assert!(matches!(expand_root_vector(&p, 2, 1), Err(Error::BadRootRange { .. })));
    }

    #[test]
    fn pbw_monomial_expansions() {
        let p = p2();
        let q = p.q().clone();
        assert_eq!(expand_pbw_monomial(&p, &TriangularArray::zero(2)), FreeElement::unit(2));
        let mut e = word_elem(2, &[1, 2, 1]);
        e.add_term(word(&[2, 1, 1]), -q);
        assert_eq!(expand_pbw_monomial(&p, &arr(2, &[1, 1, 0])), e);
        assert_eq!(expand_pbw_monomial(&p, &arr(2, &[2, 0, 1])), word_elem(2, &[2, 1, 1]));
    }

    #[test]
    fn serre_spans() {
        let p = p2();
        let s = serre_span(&p, &c(&[2, 1])).unwrap();
        assert_eq!(s.rank(), 1);
        let mut r = vec![rat(1), -p.q_int(2), rat(1)];
        assert!(s.contains(&r));
        r[1] = rat(0);
        assert!(!s.contains(&r));

        let p3 = Params::default_profile(3).unwrap();
        let s = serre_span(&p3, &c(&[1, 0, 1])).unwrap();
        assert_eq!(s.rank(), 1);
        // words: f1f3, f3f1
        assert!(s.contains(&[rat(1), rat(-1)]));
        assert_eq!(serre_span(&p3, &c(&[1, 0, 0])).unwrap().rank(), 0);
    }

    #[test]
    fn straightening_examples() {
        let p = p2();
        let q = p.q().clone();
        let m = c(&[2, 1]);
        let s = straighten(&p, &m, &word_elem(2, &[1, 1, 2])).unwrap();
        assert_eq!(s[&arr(2, &[1, 1, 0])], p.q_int(2));
        assert_eq!(s[&arr(2, &[2, 0, 1])], &q * &q);
        let s = straighten(&p, &m, &word_elem(2, &[1, 2, 1])).unwrap();
        assert_eq!(s[&arr(2, &[1, 1, 0])], rat(1));
        assert_eq!(s[&arr(2, &[2, 0, 1])], q.clone());
        // f(1,0,1) = f2 f1 is already ordered
        let s = straighten(&p, &c(&[1, 1]), &word_elem(2, &[2, 1])).unwrap();
        assert_eq!(s[&arr(2, &[1, 0, 1])], rat(1));
        assert_eq!(s.get(&arr(2, &[0, 1, 0])), None);
        let s = straighten(&p, &c(&[1, 1]), &word_elem(2, &[1, 2])).unwrap();
        assert_eq!(s[&arr(2, &[0, 1, 0])], rat(1));
        assert_eq!(s[&arr(2, &[1, 0, 1])], q);
        assert!(straighten(&p, &c(&[1, 0]), &word_elem(2, &[1, 2])).is_err());
        let _ = ratio(1, 2);
    }

    #[test]
    fn dimension_oracle_and_round_trip() {
        for (n, d) in [(1usize, 4), (2, 5), (3, 4)] {
            let p = Params::default_profile(n).unwrap();
            for m in WeightContent::all_up_to_degree(n, d) {
                let space = WeightSpace::build(&p, &m).unwrap();
                assert_eq!(space.pbw().len(), enumerate_words(n, &m).len() - space.serre().rank(), "content {m}");
                for (k, l) in space.pbw().iter().enumerate() {
                    let x = expand_pbw_monomial(&p, l);
                    let v = space.straighten_dense(&x);
                    for (j, c) in v.iter().enumerate() {
                        assert_eq!(*c, if j == k { rat(1) } else { rat(0) });
                    }
                }
            }
        }
    }

    #[test]
    fn serre_span_ignores_insertion_order() {
        let p = Params::default_profile(3).unwrap();
        let m = c(&[2, 1, 1]);
        let s = serre_span(&p, &m).unwrap();
        let rev = Echelon::from_rows(s.dim(), s.rows().iter().rev().cloned());
        assert_eq!(rev.rows(), s.rows());
        assert_eq!(rev.pivots(), s.pivots());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn straighten_is_linear(a in -5i64..6, b in -5i64..6,
                                xs in prop::collection::vec(-3i64..4, 12),
                                ys in prop::collection::vec(-3i64..4, 12)) {
            let p = Params::default_profile(3).unwrap();
            let m = c(&[2, 1, 1]);
            let space = WeightSpace::build(&p, &m).unwrap();
            let build = |cs: &[i64]| {
                let mut e = FreeElement::zero(m.clone());
                for (w, &k) in space.words().iter().zip(cs) {
                    e.add_term(w.clone(), rat(k));
                }
                e
            };
            let (x, y) = (build(&xs), build(&ys));
            let combo = x.scale(&rat(a)).add(&y.scale(&rat(b)));
            let lhs = space.straighten_dense(&combo);
            let sx = space.straighten_dense(&x);
            let sy = space.straighten_dense(&y);
            for k in 0..lhs.len() {
                prop_assert_eq!(&lhs[k], &(rat(a) * &sx[k] + rat(b) * &sy[k]));
            }
        }
    }
}
