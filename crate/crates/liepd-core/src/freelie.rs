//! The free Lie algebra `L(X)` in its Lyndon-word basis.
//!
//! A basis element is a Lyndon word together with its standard (right)
//! bracketing. Expanding that bracketing through `[a, b] = ab - ba` into
//! the free associative algebra sends a Lyndon word `w` to `w` plus
//! graded-lex larger words of the same degree, so normal forms can be
//! computed by peeling leading words off the associative image. This is
//! also how arbitrary bracket expressions are normalized and how brackets
//! of normal forms are recombined.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::freeassoc::{show_x, AssocElement, Word, XGen};
use crate::scalars::Field;
use std::collections::BTreeMap;

/// `true` when the word is strictly smaller than all of its proper
/// rotations (the empty word is not Lyndon).
pub fn is_lyndon(w: &Word) -> bool {
    let letters = w.letters();
    let n = letters.len();
    if n == 0 {
        return false;
    }
    for i in 1..n {
        let rotation: Vec<XGen> = letters[i..].iter().chain(letters[..i].iter()).copied().collect();
        if letters >= &rotation[..] {
            return false;
        }
    }
    true
}

/// All Lyndon words over `xs` of length `1..=max_deg`, in graded-lex
/// order. Empty alphabets give an empty list.
pub fn lyndon_words(xs: &[XGen], max_deg: usize) -> Vec<Word> {
    if xs.is_empty() || max_deg == 0 {
        return Vec::new();
    }
    debug_assert!(xs.windows(2).all(|p| p[0] < p[1]), "alphabet must be sorted");
    let k = xs.len();
    // Duval's generation: all Lyndon words of length <= max_deg over a
    // k-letter alphabet, visited in lexicographic order.
    let mut words: Vec<Word> = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        words.push(Word::from_letters(w.iter().map(|&i| xs[i]).collect()));
        let m = w.len();
        while w.len() < max_deg {
            let next = w[w.len() - m];
            w.push(next);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    words.sort();
    words
}

/// The standard right factorization `w = u v` of a Lyndon word of length
/// at least two: `v` is the lexicographically least proper suffix, which
/// is also the longest proper Lyndon suffix.
pub fn standard_factorization(w: &Word) -> Result<(Word, Word)> {
    let letters = w.letters();
    if letters.len() < 2 || !is_lyndon(w) {
        return Err(Error::Validation(format!(
            "standard factorization needs a Lyndon word of length >= 2, got {w}"
        )));
    }
    let mut best = 1;
    for i in 2..letters.len() {
        if letters[i..] < letters[best..] {
            best = i;
        }
    }
    let u = Word::from_letters(letters[..best].to_vec());
    let v = Word::from_letters(letters[best..].to_vec());
    debug_assert!(is_lyndon(&u) && is_lyndon(&v));
    Ok((u, v))
}

/// A fully bracketed expression over the `x` generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BracketTree {
    Leaf(XGen),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf(x) => write!(f, "{x}"),
            BracketTree::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

/// The standard bracketing of a Lyndon word, built by recursing on the
/// standard factorization.
pub fn standard_bracketing(w: &Word) -> Result<BracketTree> {
    let letters = w.letters();
    match letters.len() {
        0 => Err(Error::Validation("the empty word has no bracketing".into())),
        1 => Ok(BracketTree::Leaf(letters[0])),
        _ => {
            let (u, v) = standard_factorization(w)?;
            Ok(BracketTree::Node(
                Box::new(standard_bracketing(&u)?),
                Box::new(standard_bracketing(&v)?),
            ))
        }
    }
}

/// A Lyndon word paired with its standard bracketing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LyndonBasisElement {
    pub word: Word,
    pub bracketing: BracketTree,
}

impl LyndonBasisElement {
    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

impl fmt::Display for LyndonBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bracketing)
    }
}

type BasisCache = HashMap<(Vec<XGen>, usize), Arc<Vec<LyndonBasisElement>>>;

static BASIS_CACHE: Lazy<Mutex<BasisCache>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// The Lyndon basis of `L(X)` up to degree `max_deg`, in graded-lex
/// order. Results are cached per `(alphabet, degree)`.
pub fn lyndon_basis(xs: &[XGen], max_deg: usize) -> Arc<Vec<LyndonBasisElement>> {
    let key = (xs.to_vec(), max_deg);
    if let Some(hit) = BASIS_CACHE.lock().expect("basis cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let basis: Vec<LyndonBasisElement> = lyndon_words(xs, max_deg)
        .into_iter()
        .map(|word| {
            let bracketing = standard_bracketing(&word).expect("Lyndon words have bracketings");
            LyndonBasisElement { word, bracketing }
        })
        .collect();
    let basis = Arc::new(basis);
    BASIS_CACHE
        .lock()
        .expect("basis cache poisoned")
        .insert(key, Arc::clone(&basis));
    basis
}

/// Expands a bracketing into the free associative algebra via
/// `[a, b] = ab - ba`.
pub fn expand_bracketing<F: Field>(tree: &BracketTree, xs: &[XGen]) -> Result<AssocElement<F>> {
    match tree {
        BracketTree::Leaf(x) => AssocElement::generator(xs.to_vec(), *x),
        BracketTree::Node(l, r) => {
            let a = expand_bracketing::<F>(l, xs)?;
            let b = expand_bracketing::<F>(r, xs)?;
            a.mul(&b)?.sub(&b.mul(&a)?)
        }
    }
}

/// An element of `L(X)` in normal form: a combination of Lyndon words,
/// each standing for its standard bracketing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieElement<F: Field> {
    xs: Vec<XGen>,
    terms: BTreeMap<Word, F>,
}

impl<F: Field> LieElement<F> {
    pub fn zero(xs: Vec<XGen>) -> Self {
        LieElement { xs, terms: BTreeMap::new() }
    }

    pub fn generator(xs: Vec<XGen>, x: XGen) -> Result<Self> {
        if !xs.contains(&x) {
            return Err(Error::ContextMismatch(format!(
                "generator {x} is outside the alphabet {}",
                show_x(&xs)
            )));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Word::single(x), F::one());
        Ok(LieElement { xs, terms })
    }

    /// Builds an element from explicit Lyndon-word coordinates.
    pub fn from_terms(xs: Vec<XGen>, entries: Vec<(Word, F)>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (w, c) in entries {
            if !is_lyndon(&w) {
                return Err(Error::NotLieElement(w.to_string()));
            }
            for letter in w.letters() {
                if !xs.contains(letter) {
                    return Err(Error::ContextMismatch(format!(
                        "letter {letter} of {w} is outside the alphabet {}",
                        show_x(&xs)
                    )));
                }
            }
            if !c.is_zero() {
                let prev = terms.insert(w.clone(), c);
                if prev.is_some() {
                    return Err(Error::Validation(format!("duplicate Lyndon word {w}")));
                }
            }
        }
        Ok(LieElement { xs, terms })
    }

    pub fn alphabet(&self) -> &[XGen] {
        &self.xs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.xs != other.xs {
            return Err(Error::ContextMismatch(format!(
                "x-alphabets differ: {} vs {}",
                show_x(&self.xs),
                show_x(&other.xs)
            )));
        }
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let entry = terms.entry(w.clone()).or_insert_with(F::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(w);
            }
        }
        Ok(LieElement { xs: self.xs.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.xs.clone());
        }
        let terms = self.terms.iter().map(|(w, a)| (w.clone(), a.mul(c))).collect();
        LieElement { xs: self.xs.clone(), terms }
    }

    pub fn truncate(&self, d: usize) -> Self {
        let terms = self.terms.iter().filter(|(w, _)| w.len() <= d).map(|(w, c)| (w.clone(), c.clone())).collect();
        LieElement { xs: self.xs.clone(), terms }
    }

    pub fn widen(&self, xs: Vec<XGen>) -> Result<Self> {
        for w in self.terms.keys() {
            for letter in w.letters() {
                if !xs.contains(letter) {
                    return Err(Error::ContextMismatch(format!(
                        "letter {letter} is outside the alphabet {}",
                        show_x(&xs)
                    )));
                }
            }
        }
        Ok(LieElement { xs, terms: self.terms.clone() })
    }

    pub fn map_coeffs<G: Field>(&self, f: &dyn Fn(&F) -> Result<G>) -> Result<LieElement<G>> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let c = f(c)?;
            if !c.is_zero() {
                terms.insert(w.clone(), c);
            }
        }
        Ok(LieElement { xs: self.xs.clone(), terms })
    }
}

impl LieElement<crate::scalars::Scalar> {
    pub fn into_field<G: Field>(&self) -> Result<LieElement<G>> {
        self.map_coeffs(&|c| G::from_rational(c))
    }
}

impl<F: Field> fmt::Display for LieElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.terms.iter().map(|(w, c)| {
            let bracketing = standard_bracketing(w).expect("stored words are Lyndon");
            (bracketing.to_string(), c.clone())
        });
        crate::freeassoc::format_signed_sum(f, &mut it)
    }
}

/// The injection of `L(X)` into `A(X)` sending a basis element to the
/// expansion of its standard bracketing.
pub fn embed_assoc<F: Field>(l: &LieElement<F>) -> Result<AssocElement<F>> {
    let mut acc = AssocElement::zero(l.xs.clone());
    for (w, c) in &l.terms {
        let tree = standard_bracketing(w)?;
        let expanded = expand_bracketing::<F>(&tree, &l.xs)?;
        acc = acc.add(&expanded.scale(c))?;
    }
    Ok(acc)
}

/// Rewrites an associative element that lies in the image of `L(X)` into
/// Lyndon coordinates by repeatedly subtracting the expansion of the
/// leading word's standard bracketing. Errors when some leading word is
/// not Lyndon, which certifies the element is not a Lie element.
pub fn lie_from_assoc<F: Field>(a: &AssocElement<F>) -> Result<LieElement<F>> {
    let mut residual = a.clone();
    let mut terms: BTreeMap<Word, F> = BTreeMap::new();
    while let Some((word, coeff)) = residual.leading().map(|(w, c)| (w.clone(), c.clone())) {
        if !is_lyndon(&word) {
            return Err(Error::NotLieElement(word.to_string()));
        }
        let tree = standard_bracketing(&word)?;
        let expanded = expand_bracketing::<F>(&tree, a.alphabet())?;
        residual = residual.sub(&expanded.scale(&coeff))?;
        terms.insert(word, coeff);
    }
    Ok(LieElement { xs: a.alphabet().to_vec(), terms })
}

/// The Lie bracket of two normal forms, recombined through the
/// associative embedding.
pub fn lie_bracket<F: Field>(a: &LieElement<F>, b: &LieElement<F>) -> Result<LieElement<F>> {
    let ea = embed_assoc(a)?;
    let eb = embed_assoc(b)?;
    let commutator = ea.mul(&eb)?.sub(&eb.mul(&ea)?)?;
    lie_from_assoc(&commutator)
}

/// A bracket expression prior to normalization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LieExpr<F: Field> {
    Zero,
    Gen(XGen),
    Scale(F, Box<LieExpr<F>>),
    Sum(Box<LieExpr<F>>, Box<LieExpr<F>>),
    Bracket(Box<LieExpr<F>>, Box<LieExpr<F>>),
}

impl<F: Field> LieExpr<F> {
    /// Expands the expression in the free associative algebra.
    pub fn expand_assoc(&self, xs: &[XGen]) -> Result<AssocElement<F>> {
        match self {
            LieExpr::Zero => Ok(AssocElement::zero(xs.to_vec())),
            LieExpr::Gen(x) => AssocElement::generator(xs.to_vec(), *x),
            LieExpr::Scale(c, e) => Ok(e.expand_assoc(xs)?.scale(c)),
            LieExpr::Sum(a, b) => a.expand_assoc(xs)?.add(&b.expand_assoc(xs)?),
            LieExpr::Bracket(a, b) => {
                let ea = a.expand_assoc(xs)?;
                let eb = b.expand_assoc(xs)?;
                ea.mul(&eb)?.sub(&eb.mul(&ea)?)
            }
        }
    }
}

/// Normalizes a bracket expression into Lyndon coordinates.
pub fn lie_normal_form<F: Field>(expr: &LieExpr<F>, xs: &[XGen]) -> Result<LieElement<F>> {
    lie_from_assoc(&expr.expand_assoc(xs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Scalar;
    use proptest::prelude::*;

    fn xg(i: u32) -> XGen {
        XGen(i)
    }

    fn word(ls: &[u32]) -> Word {
        Word::from_letters(ls.iter().map(|&i| XGen(i)).collect())
    }

    /// Independent dimension oracle: the necklace-counting formula
    /// `(1/n) * sum over d | n of mu(d) k^(n/d)` for the number of Lyndon
    /// words of length n over k letters.
    fn necklace_count(k: u64, n: u64) -> u64 {
        fn mobius(mut n: u64) -> i64 {
            let mut mu = 1i64;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    mu = -mu;
                }
                p += 1;
            }
            if n > 1 {
                mu = -mu;
            }
            mu
        }
        let mut total = 0i64;
        for d in 1..=n {
            if n % d == 0 {
                total += mobius(d) * (k as i64).pow((n / d) as u32);
            }
        }
        (total / n as i64) as u64
    }

    #[test]
    fn lyndon_flags() {
        assert!(is_lyndon(&word(&[1])));
        assert!(is_lyndon(&word(&[1, 2])));
        assert!(!is_lyndon(&word(&[2, 1])));
        assert!(!is_lyndon(&word(&[1, 1])));
        assert!(is_lyndon(&word(&[1, 1, 2])));
        assert!(is_lyndon(&word(&[1, 2, 2])));
        assert!(!is_lyndon(&Word::empty()));
    }

    #[test]
    fn two_letter_basis_matches_known_lists() {
        let xs = [xg(1), xg(2)];
        let basis = lyndon_basis(&xs, 2);
        let printed: Vec<String> = basis.iter().map(|b| b.to_string()).collect();
        assert_eq!(printed, vec!["x1", "x2", "[x1,x2]"]);

        let basis3 = lyndon_basis(&xs, 3);
        let printed3: Vec<String> = basis3.iter().map(|b| b.to_string()).collect();
        assert_eq!(
            printed3,
            vec!["x1", "x2", "[x1,x2]", "[x1,[x1,x2]]", "[[x1,x2],x2]"]
        );
    }

    #[test]
    fn per_degree_counts_match_the_necklace_oracle() {
        // Frozen expected values, cross-checked against the oracle below:
        // two letters, degrees 1..=6 -> 2, 1, 2, 3, 6, 9
        // three letters, degrees 1..=4 -> 3, 3, 8, 18
        let expect2 = [2usize, 1, 2, 3, 6, 9];
        let expect3 = [3usize, 3, 8, 18];
        for (k, expect) in [(2u32, &expect2[..]), (3u32, &expect3[..])] {
            let xs: Vec<XGen> = (1..=k).map(XGen).collect();
            let basis = lyndon_basis(&xs, expect.len());
            for (i, want) in expect.iter().enumerate() {
                let deg = i + 1;
                let got = basis.iter().filter(|b| b.degree() == deg).count();
                assert_eq!(got, *want, "k={k}, degree {deg}");
                assert_eq!(got as u64, necklace_count(k as u64, deg as u64));
            }
        }
    }

    #[test]
    fn one_letter_algebra_is_abelian() {
        let xs = [xg(1)];
        let basis = lyndon_basis(&xs, 6);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].to_string(), "x1");
        assert!(lyndon_words(&[], 4).is_empty());
    }

    #[test]
    fn standard_factorization_recurses_to_known_bracketings() {
        assert_eq!(standard_bracketing(&word(&[1, 1, 2])).unwrap().to_string(), "[x1,[x1,x2]]");
        assert_eq!(standard_bracketing(&word(&[1, 2, 2])).unwrap().to_string(), "[[x1,x2],x2]");
        assert_eq!(
            standard_bracketing(&word(&[1, 1, 2, 2])).unwrap().to_string(),
            "[x1,[[x1,x2],x2]]"
        );
    }

    #[test]
    fn embedding_of_a_degree_three_basis_element() {
        let xs = vec![xg(1), xg(2)];
        let l = LieElement::<Scalar>::from_terms(xs, vec![(word(&[1, 1, 2]), Scalar::from_int(1))]).unwrap();
        let a = embed_assoc(&l).unwrap();
        assert_eq!(a.to_string(), "x1*x1*x2 - 2*x1*x2*x1 + x2*x1*x1");
    }

    #[test]
    fn embedding_is_triangular_with_unit_leading_coefficient() {
        let xs: Vec<XGen> = vec![xg(1), xg(2), xg(3)];
        for b in lyndon_basis(&xs, 4).iter() {
            let a = expand_bracketing::<Scalar>(&b.bracketing, &xs).unwrap();
            let (lead, c) = a.leading().unwrap();
            assert_eq!(lead, &b.word);
            assert_eq!(c, &Scalar::from_int(1));
        }
    }

    #[test]
    fn normal_form_flips_bracket_orientation() {
        let xs = vec![xg(1), xg(2)];
        let expr: LieExpr<Scalar> = LieExpr::Bracket(
            Box::new(LieExpr::Bracket(Box::new(LieExpr::Gen(xg(1))), Box::new(LieExpr::Gen(xg(2))))),
            Box::new(LieExpr::Gen(xg(1))),
        );
        let nf = lie_normal_form(&expr, &xs).unwrap();
        assert_eq!(nf.to_string(), "-1*[x1,[x1,x2]]");
    }

    #[test]
    fn non_lie_elements_are_rejected() {
        let xs = vec![xg(1), xg(2)];
        let x1 = AssocElement::<Scalar>::generator(xs.clone(), xg(1)).unwrap();
        let x1x1 = x1.mul(&x1).unwrap();
        match lie_from_assoc(&x1x1) {
            Err(Error::NotLieElement(w)) => assert_eq!(w, "x1*x1"),
            other => panic!("expected NotLieElement, got {other:?}"),
        }
    }

    fn arb_expr(max_x: u32) -> impl Strategy<Value = LieExpr<Scalar>> {
        let leaf = (1..=max_x).prop_map(|i| LieExpr::Gen(XGen(i)));
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| LieExpr::Bracket(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| LieExpr::Sum(Box::new(a), Box::new(b))),
                ((-3i64..=3), inner).prop_map(|(c, e)| LieExpr::Scale(Scalar::from_int(c), Box::new(e))),
            ]
        })
    }

    proptest! {
        // The round trip through Lyndon coordinates must reproduce the
        // direct associative expansion exactly.
        #[test]
        fn normal_form_preserves_the_associative_image(expr in arb_expr(3)) {
            let xs: Vec<XGen> = vec![xg(1), xg(2), xg(3)];
            let direct = expr.expand_assoc(&xs).unwrap();
            let nf = lie_normal_form(&expr, &xs).unwrap();
            prop_assert_eq!(embed_assoc(&nf).unwrap(), direct);
        }

        #[test]
        fn bracket_is_alternating(expr in arb_expr(2)) {
            let xs: Vec<XGen> = vec![xg(1), xg(2)];
            let a = lie_normal_form(&expr, &xs).unwrap();
            prop_assert!(lie_bracket(&a, &a).unwrap().is_zero());
        }

        #[test]
        fn jacobi_holds(e1 in arb_expr(2), e2 in arb_expr(2), e3 in arb_expr(2)) {
            let xs: Vec<XGen> = vec![xg(1), xg(2)];
            let a = lie_normal_form(&e1, &xs).unwrap();
            let b = lie_normal_form(&e2, &xs).unwrap();
            let c = lie_normal_form(&e3, &xs).unwrap();
            let j = lie_bracket(&lie_bracket(&a, &b).unwrap(), &c).unwrap()
                .add(&lie_bracket(&lie_bracket(&b, &c).unwrap(), &a).unwrap()).unwrap()
                .add(&lie_bracket(&lie_bracket(&c, &a).unwrap(), &b).unwrap()).unwrap();
            prop_assert!(j.is_zero());
        }
    }
}
