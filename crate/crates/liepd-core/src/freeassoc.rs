//! The free unital associative algebra `A(X)` and the free module `A(X)Y`
//! over it, with exact sparse coefficients.
//!
//! Words are ordered graded-lexicographically (length first, then letters
//! left to right, then the module generator index). That single order
//! fixes canonical printing and the leading-term extraction the Lie layer
//! relies on.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

/// A generator of the first sort, drawn from the countable pool `x1, x2, …`.
/// Indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct XGen(pub u32);

/// A generator of the second sort, drawn from the pool `y1, y2, …`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct YGen(pub u32);

impl fmt::Display for XGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for YGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}", self.0)
    }
}

/// An associative word in the `x` generators. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word(Vec<XGen>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(x: XGen) -> Self {
        Word(vec![x])
    }

    pub fn from_letters(letters: Vec<XGen>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[XGen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl Ord for Word {
    /// Graded-lex: shorter words first, ties broken letter by letter.
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
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A basis monomial `w·y` of the free module, of degree `|w| + 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ModTerm {
    pub word: Word,
    pub y: YGen,
}

impl ModTerm {
    pub fn degree(&self) -> usize {
        self.word.len() + 1
    }
}

impl fmt::Display for ModTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "{}", self.y)
        } else {
            write!(f, "{}*{}", self.word, self.y)
        }
    }
}

fn check_same_x(a: &[XGen], b: &[XGen]) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch(format!(
            "x-alphabets differ: {} vs {}",
            show_x(a),
            show_x(b)
        )));
    }
    Ok(())
}

fn check_same_y(a: &[YGen], b: &[YGen]) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch(format!(
            "y-alphabets differ: {} vs {}",
            show_y(a),
            show_y(b)
        )));
    }
    Ok(())
}

pub(crate) fn show_x(xs: &[XGen]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub(crate) fn show_y(ys: &[YGen]) -> String {
    let parts: Vec<String> = ys.iter().map(|y| y.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// An element of `A(X)`: a finite rational (or prime-field) combination of
/// words, stored sparsely with nonzero coefficients only.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AssocElement<F: Field> {
    xs: Vec<XGen>,
    terms: BTreeMap<Word, F>,
}

impl<F: Field> AssocElement<F> {
    pub fn zero(xs: Vec<XGen>) -> Self {
        AssocElement { xs, terms: BTreeMap::new() }
    }

    /// The unit of the algebra: the empty word with coefficient one.
    pub fn unit(xs: Vec<XGen>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Word::empty(), F::one());
        AssocElement { xs, terms }
    }

    pub fn monomial(xs: Vec<XGen>, word: Word, coeff: F) -> Result<Self> {
        for letter in word.letters() {
            if !xs.contains(letter) {
                return Err(Error::ContextMismatch(format!(
                    "letter {letter} of {word} is outside the alphabet {}",
                    show_x(&xs)
                )));
            }
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        Ok(AssocElement { xs, terms })
    }

    pub fn generator(xs: Vec<XGen>, x: XGen) -> Result<Self> {
        Self::monomial(xs, Word::single(x), F::one())
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

    /// The graded-lex smallest word with nonzero coefficient.
    pub fn leading(&self) -> Option<(&Word, &F)> {
        self.terms.iter().next()
    }

    /// Highest total degree among the terms; `None` when zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_x(&self.xs, &other.xs)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_into(&mut terms, w.clone(), c.clone());
        }
        Ok(AssocElement { xs: self.xs.clone(), terms })
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
        AssocElement { xs: self.xs.clone(), terms }
    }

    /// The associative product, by concatenating words termwise.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same_x(&self.xs, &other.xs)?;
        let mut terms = BTreeMap::new();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                add_into(&mut terms, w1.concat(w2), c1.mul(c2));
            }
        }
        Ok(AssocElement { xs: self.xs.clone(), terms })
    }

    /// Drops the terms of degree greater than `d`.
    pub fn truncate(&self, d: usize) -> Self {
        let terms = self.terms.iter().filter(|(w, _)| w.len() <= d).map(|(w, c)| (w.clone(), c.clone())).collect();
        AssocElement { xs: self.xs.clone(), terms }
    }

    /// The same element over a larger alphabet.
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
        Ok(AssocElement { xs, terms: self.terms.clone() })
    }

    /// Maps the coefficients into another field.
    pub fn map_coeffs<G: Field>(&self, f: &dyn Fn(&F) -> Result<G>) -> Result<AssocElement<G>> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            let c = f(c)?;
            if !c.is_zero() {
                terms.insert(w.clone(), c);
            }
        }
        Ok(AssocElement { xs: self.xs.clone(), terms })
    }
}

impl AssocElement<Scalar> {
    /// Converts rational coefficients into any target field.
    pub fn into_field<G: Field>(&self) -> Result<AssocElement<G>> {
        self.map_coeffs(&|c| G::from_rational(c))
    }
}

fn add_into<K: Ord, F: Field>(terms: &mut BTreeMap<K, F>, key: K, c: F) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(existing) => {
            let sum = existing.add(&c);
            if sum.is_zero() {
                terms.remove(&key);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(key, c);
        }
    }
}

/// An element of the free module `A(X)Y`: a combination of monomials `w·y`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModuleElement<F: Field> {
    xs: Vec<XGen>,
    ys: Vec<YGen>,
    terms: BTreeMap<ModTerm, F>,
}

impl<F: Field> ModuleElement<F> {
    pub fn zero(xs: Vec<XGen>, ys: Vec<YGen>) -> Self {
        ModuleElement { xs, ys, terms: BTreeMap::new() }
    }

    pub fn monomial(xs: Vec<XGen>, ys: Vec<YGen>, term: ModTerm, coeff: F) -> Result<Self> {
        for letter in term.word.letters() {
            if !xs.contains(letter) {
                return Err(Error::ContextMismatch(format!(
                    "letter {letter} of {term} is outside the alphabet {}",
                    show_x(&xs)
                )));
            }
        }
        if !ys.contains(&term.y) {
            return Err(Error::ContextMismatch(format!(
                "generator {} of {term} is outside the alphabet {}",
                term.y,
                show_y(&ys)
            )));
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(term, coeff);
        }
        Ok(ModuleElement { xs, ys, terms })
    }

    pub fn generator(xs: Vec<XGen>, ys: Vec<YGen>, y: YGen) -> Result<Self> {
        Self::monomial(xs, ys, ModTerm { word: Word::empty(), y }, F::one())
    }

    pub fn x_alphabet(&self) -> &[XGen] {
        &self.xs
    }

    pub fn y_alphabet(&self) -> &[YGen] {
        &self.ys
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModTerm, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &ModTerm) -> F {
        self.terms.get(t).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|t| t.degree()).max()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_x(&self.xs, &other.xs)?;
        check_same_y(&self.ys, &other.ys)?;
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            add_into(&mut terms, t.clone(), c.clone());
        }
        Ok(ModuleElement { xs: self.xs.clone(), ys: self.ys.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.xs.clone(), self.ys.clone());
        }
        let terms = self.terms.iter().map(|(t, a)| (t.clone(), a.mul(c))).collect();
        ModuleElement { xs: self.xs.clone(), ys: self.ys.clone(), terms }
    }

    pub fn truncate(&self, d: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(t, _)| t.degree() <= d)
            .map(|(t, c)| (t.clone(), c.clone()))
            .collect();
        ModuleElement { xs: self.xs.clone(), ys: self.ys.clone(), terms }
    }

    pub fn widen(&self, xs: Vec<XGen>, ys: Vec<YGen>) -> Result<Self> {
        for t in self.terms.keys() {
            for letter in t.word.letters() {
                if !xs.contains(letter) {
                    return Err(Error::ContextMismatch(format!(
                        "letter {letter} is outside the alphabet {}",
                        show_x(&xs)
                    )));
                }
            }
            if !ys.contains(&t.y) {
                return Err(Error::ContextMismatch(format!(
                    "generator {} is outside the alphabet {}",
                    t.y,
                    show_y(&ys)
                )));
            }
        }
        Ok(ModuleElement { xs, ys, terms: self.terms.clone() })
    }

    pub fn map_coeffs<G: Field>(&self, f: &dyn Fn(&F) -> Result<G>) -> Result<ModuleElement<G>> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            let c = f(c)?;
            if !c.is_zero() {
                terms.insert(t.clone(), c);
            }
        }
        Ok(ModuleElement { xs: self.xs.clone(), ys: self.ys.clone(), terms })
    }
}

impl ModuleElement<Scalar> {
    pub fn into_field<G: Field>(&self) -> Result<ModuleElement<G>> {
        self.map_coeffs(&|c| G::from_rational(c))
    }
}

/// Left multiplication of a module element by an algebra element:
/// `(w, (w', y)) goes to (w w', y)` extended bilinearly.
pub fn module_mul<F: Field>(a: &AssocElement<F>, v: &ModuleElement<F>) -> Result<ModuleElement<F>> {
    check_same_x(a.alphabet(), v.x_alphabet())?;
    let mut terms = BTreeMap::new();
    for (w1, c1) in a.terms() {
        for (t, c2) in v.terms() {
            let term = ModTerm { word: w1.concat(&t.word), y: t.y };
            add_into(&mut terms, term, c1.mul(c2));
        }
    }
    Ok(ModuleElement { xs: v.xs.clone(), ys: v.ys.clone(), terms })
}

/// Shared canonical printer for signed sums of monomials.
///
/// Terms arrive in canonical order. The leading coefficient keeps its
/// sign (`-1*x1 …`), later terms are joined with ` + ` / ` - `, and unit
/// coefficients are dropped in front of a monomial.
pub(crate) fn format_signed_sum<F: Field>(
    f: &mut fmt::Formatter<'_>,
    terms: &mut dyn Iterator<Item = (String, F)>,
) -> fmt::Result {
    let mut first = true;
    let minus_one = F::one().neg();
    for (mono, coeff) in terms {
        debug_assert!(!coeff.is_zero());
        let (lead, magnitude) = if first {
            (String::new(), coeff)
        } else {
            // Negative rationals print with a literal leading '-'; reuse
            // that to decide the join sign, falling back to '+' for fields
            // without a meaningful sign (prime fields).
            let printed = coeff.to_string();
            if let Some(stripped) = printed.strip_prefix('-') {
                let _ = stripped;
                (" - ".to_string(), coeff.neg())
            } else {
                (" + ".to_string(), coeff)
            }
        };
        first = false;
        f.write_str(&lead)?;
        if mono.is_empty() {
            write!(f, "{magnitude}")?;
        } else if magnitude == F::one() {
            f.write_str(&mono)?;
        } else if !first && magnitude == minus_one && lead.is_empty() {
            // Unreachable by construction; kept so the match is total in spirit.
            write!(f, "{magnitude}*{mono}")?;
        } else {
            write!(f, "{magnitude}*{mono}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<F: Field> fmt::Display for AssocElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.terms.iter().map(|(w, c)| {
            let mono = if w.is_empty() { String::new() } else { w.to_string() };
            (mono, c.clone())
        });
        format_signed_sum(f, &mut it)
    }
}

impl<F: Field> fmt::Display for ModuleElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut it = self.terms.iter().map(|(t, c)| (t.to_string(), c.clone()));
        format_signed_sum(f, &mut it)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs2() -> Vec<XGen> {
        vec![XGen(1), XGen(2)]
    }

    fn ys1() -> Vec<YGen> {
        vec![YGen(1)]
    }

    fn word(ls: &[u32]) -> Word {
        Word::from_letters(ls.iter().map(|&i| XGen(i)).collect())
    }

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn word_order_is_graded_then_lex() {
        assert!(Word::empty() < word(&[1]));
        assert!(word(&[2]) < word(&[1, 1]));
        assert!(word(&[1, 1]) < word(&[1, 2]));
        assert!(word(&[1, 2]) < word(&[2, 1]));
        assert!(word(&[2, 2]) < word(&[1, 1, 1]));
    }

    #[test]
    fn product_concatenates_words() {
        let x1 = AssocElement::<Scalar>::generator(xs2(), XGen(1)).unwrap();
        let x2 = AssocElement::<Scalar>::generator(xs2(), XGen(2)).unwrap();
        let sum = x1.add(&x2).unwrap();
        let prod = sum.mul(&x1).unwrap();
        assert_eq!(prod.coeff(&word(&[1, 1])), q(1));
        assert_eq!(prod.coeff(&word(&[2, 1])), q(1));
        assert_eq!(prod.to_string(), "x1*x1 + x2*x1");
    }

    #[test]
    fn unit_is_neutral() {
        let one = AssocElement::<Scalar>::unit(xs2());
        let x1 = AssocElement::<Scalar>::generator(xs2(), XGen(1)).unwrap();
        assert_eq!(one.mul(&x1).unwrap(), x1);
        assert_eq!(x1.mul(&one).unwrap(), x1);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x1 = AssocElement::<Scalar>::generator(xs2(), XGen(1)).unwrap();
        assert!(x1.sub(&x1).unwrap().is_zero());
        assert_eq!(x1.sub(&x1).unwrap().to_string(), "0");
    }

    #[test]
    fn module_monomials_attach_y() {
        let v = ModuleElement::<Scalar>::generator(xs2(), ys1(), YGen(1)).unwrap();
        let x1 = AssocElement::<Scalar>::generator(xs2(), XGen(1)).unwrap();
        let x1v = module_mul(&x1, &v).unwrap();
        assert_eq!(x1v.to_string(), "x1*y1");
        let x2 = AssocElement::<Scalar>::generator(xs2(), XGen(2)).unwrap();
        let x2x1v = module_mul(&x2, &x1v).unwrap();
        assert_eq!(x2x1v.to_string(), "x2*x1*y1");
        assert_eq!(x2x1v.degree(), Some(3));
    }

    #[test]
    fn mismatched_contexts_error() {
        let a = AssocElement::<Scalar>::generator(vec![XGen(1)], XGen(1)).unwrap();
        let b = AssocElement::<Scalar>::generator(xs2(), XGen(2)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch(_))));
        let v1 = ModuleElement::<Scalar>::generator(vec![XGen(1)], ys1(), YGen(1)).unwrap();
        assert!(matches!(module_mul(&b, &v1), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn letters_outside_the_alphabet_are_rejected() {
        let r = AssocElement::<Scalar>::monomial(vec![XGen(1)], word(&[1, 2]), q(1));
        assert!(matches!(r, Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn signed_sum_printing() {
        let x1 = AssocElement::<Scalar>::generator(xs2(), XGen(1)).unwrap();
        let x2 = AssocElement::<Scalar>::generator(xs2(), XGen(2)).unwrap();
        let e = x1.sub(&x2.scale(&Scalar::new(1, 2).unwrap())).unwrap();
        assert_eq!(e.to_string(), "x1 - 1/2*x2");
        let neg = e.neg();
        assert_eq!(neg.to_string(), "-1*x1 + 1/2*x2");
        let c = AssocElement::<Scalar>::monomial(xs2(), Word::empty(), Scalar::new(3, 2).unwrap()).unwrap();
        assert_eq!(c.to_string(), "3/2");
    }

    #[test]
    fn truncation_drops_high_degree() {
        let x1 = AssocElement::<Scalar>::generator(xs2(), XGen(1)).unwrap();
        let e = x1.mul(&x1).unwrap().add(&x1).unwrap();
        assert_eq!(e.truncate(1).to_string(), "x1");
    }
}
