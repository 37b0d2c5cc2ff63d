//! Degree-truncated coordinates on a free representation.
//!
//! A [`DegreeSlice`] fixes the finite list of Lyndon words and module
//! monomials of degree at most `d` over a context `W(X, Y)` and converts
//! elements to and from dense coordinate vectors. The congruence and
//! word-classification layers do all of their linear algebra through it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::freeassoc::{ModTerm, ModuleElement, Word, XGen, YGen};
use crate::freelie::{lyndon_basis, LieElement};
use crate::representation::FreeRep;
use crate::scalars::Field;

/// The degree-`<= d` slice of `W(X, Y)`, with a fixed graded-lex basis
/// enumeration on both sorts.
#[derive(Clone, Debug)]
pub struct DegreeSlice {
    rep: FreeRep,
    d: usize,
    lwords: Vec<Word>,
    vmonos: Vec<ModTerm>,
    lindex: HashMap<Word, usize>,
    vindex: HashMap<ModTerm, usize>,
}

impl DegreeSlice {
    pub fn new(rep: &FreeRep, d: usize) -> Self {
        let lwords: Vec<Word> = lyndon_basis(rep.xs(), d).iter().map(|b| b.word.clone()).collect();
        let mut vmonos: Vec<ModTerm> = Vec::new();
        if !rep.ys().is_empty() && d >= 1 {
            let mut words: Vec<Word> = vec![Word::empty()];
            let mut frontier = words.clone();
            for _ in 1..d {
                let mut next = Vec::new();
                for w in &frontier {
                    for &x in rep.xs() {
                        next.push(Word::single(x).concat(w));
                    }
                }
                words.extend(next.iter().cloned());
                frontier = next;
            }
            for w in words {
                for &y in rep.ys() {
                    vmonos.push(ModTerm { word: w.clone(), y });
                }
            }
            vmonos.sort();
        }
        let lindex = lwords.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let vindex = vmonos.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        DegreeSlice { rep: rep.clone(), d, lwords, vmonos, lindex, vindex }
    }

    pub fn rep(&self) -> &FreeRep {
        &self.rep
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn l_dim(&self) -> usize {
        self.lwords.len()
    }

    pub fn v_dim(&self) -> usize {
        self.vmonos.len()
    }

    pub fn l_words(&self) -> &[Word] {
        &self.lwords
    }

    pub fn v_monomials(&self) -> &[ModTerm] {
        &self.vmonos
    }

    /// The Lie-sort basis as elements.
    pub fn l_basis_elements<F: Field>(&self) -> Vec<LieElement<F>> {
        self.lwords
            .iter()
            .map(|w| {
                LieElement::from_terms(self.rep.xs().to_vec(), vec![(w.clone(), F::one())])
                    .expect("basis words are Lyndon")
            })
            .collect()
    }

    /// The module-sort basis as elements.
    pub fn v_basis_elements<F: Field>(&self) -> Vec<ModuleElement<F>> {
        self.vmonos
            .iter()
            .map(|t| {
                ModuleElement::monomial(self.rep.xs().to_vec(), self.rep.ys().to_vec(), t.clone(), F::one())
                    .expect("basis monomials fit the context")
            })
            .collect()
    }

    /// Coordinates of a Lie element; errors when a term exceeds the
    /// truncation degree.
    pub fn l_coords<F: Field>(&self, e: &LieElement<F>) -> Result<Vec<F>> {
        let mut coords = vec![F::zero(); self.lwords.len()];
        for (w, c) in e.terms() {
            match self.lindex.get(w) {
                Some(&i) => coords[i] = c.clone(),
                None => {
                    return Err(Error::Indeterminate(
                        self.d,
                        format!("term of degree {} exceeds the slice", w.len()),
                    ))
                }
            }
        }
        Ok(coords)
    }

    /// Coordinates after truncating away the terms beyond the slice.
    pub fn l_coords_trunc<F: Field>(&self, e: &LieElement<F>) -> Vec<F> {
        self.l_coords(&e.truncate(self.d)).expect("truncated element fits")
    }

    pub fn v_coords<F: Field>(&self, e: &ModuleElement<F>) -> Result<Vec<F>> {
        let mut coords = vec![F::zero(); self.vmonos.len()];
        for (t, c) in e.terms() {
            match self.vindex.get(t) {
                Some(&i) => coords[i] = c.clone(),
                None => {
                    return Err(Error::Indeterminate(
                        self.d,
                        format!("term of degree {} exceeds the slice", t.degree()),
                    ))
                }
            }
        }
        Ok(coords)
    }

    pub fn v_coords_trunc<F: Field>(&self, e: &ModuleElement<F>) -> Vec<F> {
        self.v_coords(&e.truncate(self.d)).expect("truncated element fits")
    }

    pub fn l_from_coords<F: Field>(&self, coords: &[F]) -> LieElement<F> {
        assert_eq!(coords.len(), self.lwords.len());
        let entries: Vec<(Word, F)> = self
            .lwords
            .iter()
            .zip(coords.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        LieElement::from_terms(self.rep.xs().to_vec(), entries).expect("basis words are Lyndon")
    }

    pub fn v_from_coords<F: Field>(&self, coords: &[F]) -> ModuleElement<F> {
        assert_eq!(coords.len(), self.vmonos.len());
        let mut acc = ModuleElement::zero(self.rep.xs().to_vec(), self.rep.ys().to_vec());
        for (t, c) in self.vmonos.iter().zip(coords.iter()) {
            if !c.is_zero() {
                let mono =
                    ModuleElement::monomial(self.rep.xs().to_vec(), self.rep.ys().to_vec(), t.clone(), c.clone())
                        .expect("basis monomials fit the context");
                acc = acc.add(&mono).expect("same context");
            }
        }
        acc
    }

    /// Concatenated coordinates (Lie block, then module block) for a pair.
    pub fn pair_coords<F: Field>(&self, l: &LieElement<F>, v: &ModuleElement<F>) -> Result<Vec<F>> {
        let mut c = self.l_coords(l)?;
        c.extend(self.v_coords(v)?);
        Ok(c)
    }

    pub fn pair_dim(&self) -> usize {
        self.l_dim() + self.v_dim()
    }

    /// Splits concatenated coordinates back into a pair of elements.
    pub fn pair_from_coords<F: Field>(&self, coords: &[F]) -> (LieElement<F>, ModuleElement<F>) {
        assert_eq!(coords.len(), self.pair_dim());
        let (lc, vc) = coords.split_at(self.l_dim());
        (self.l_from_coords(lc), self.v_from_coords(vc))
    }

    /// Column flags selecting the Lie block of the concatenated coordinates.
    pub fn l_block_flags(&self) -> Vec<bool> {
        let mut f = vec![true; self.l_dim()];
        f.extend(std::iter::repeat(false).take(self.v_dim()));
        f
    }

    /// Column flags selecting the module block.
    pub fn v_block_flags(&self) -> Vec<bool> {
        let mut f = vec![false; self.l_dim()];
        f.extend(std::iter::repeat(true).take(self.v_dim()));
        f
    }

    /// Indices of this slice's Lie basis inside a larger context's slice.
    /// Errors unless `self`'s context is generator-wise contained in
    /// `outer`'s and the degrees agree.
    pub fn l_embedding(&self, outer: &DegreeSlice) -> Result<Vec<usize>> {
        self.check_nested(outer)?;
        self.lwords
            .iter()
            .map(|w| {
                outer
                    .lindex
                    .get(w)
                    .copied()
                    .ok_or_else(|| Error::Validation(format!("word {w} missing from the outer slice")))
            })
            .collect()
    }

    pub fn v_embedding(&self, outer: &DegreeSlice) -> Result<Vec<usize>> {
        self.check_nested(outer)?;
        self.vmonos
            .iter()
            .map(|t| {
                outer
                    .vindex
                    .get(t)
                    .copied()
                    .ok_or_else(|| Error::Validation(format!("monomial {t} missing from the outer slice")))
            })
            .collect()
    }

    fn check_nested(&self, outer: &DegreeSlice) -> Result<()> {
        let nested = self.rep.xs().iter().all(|x| outer.rep.xs().contains(x))
            && self.rep.ys().iter().all(|y| outer.rep.ys().contains(y));
        if !nested {
            return Err(Error::ContextMismatch(format!(
                "{} is not contained in {}",
                self.rep, outer.rep
            )));
        }
        if self.d != outer.d {
            return Err(Error::Validation(format!(
                "truncation degrees differ: {} vs {}",
                self.d, outer.d
            )));
        }
        Ok(())
    }
}

/// Re-exported generator types used in slice basis listings.
pub type SliceBasis = (Vec<Word>, Vec<(Word, YGen)>);

#[allow(unused)]
fn _assert_types(x: XGen) -> XGen {
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::FreeRep;
    use crate::scalars::Scalar;

    fn rep(nx: u32, ny: u32) -> FreeRep {
        FreeRep::new(
            (1..=nx).map(XGen).collect(),
            (1..=ny).map(YGen).collect(),
        )
        .unwrap()
    }

    #[test]
    fn dimensions_count_words_and_monomials() {
        let s = DegreeSlice::new(&rep(2, 1), 3);
        // Lyndon: x1, x2, [x1,x2], [x1,[x1,x2]], [[x1,x2],x2]
        assert_eq!(s.l_dim(), 5);
        // Monomials: (1 + 2 + 4) words times 1 generator.
        assert_eq!(s.v_dim(), 7);
    }

    #[test]
    fn coordinates_roundtrip() {
        let r = rep(2, 2);
        let s = DegreeSlice::new(&r, 3);
        let mut coords = vec![Scalar::zero(); s.l_dim()];
        coords[0] = Scalar::from_int(2);
        coords[2] = Scalar::new(-1, 2).unwrap();
        let e = s.l_from_coords(&coords);
        assert_eq!(s.l_coords(&e).unwrap(), coords);

        let mut vcoords = vec![Scalar::zero(); s.v_dim()];
        vcoords[1] = Scalar::from_int(5);
        let v = s.v_from_coords(&vcoords);
        assert_eq!(s.v_coords(&v).unwrap(), vcoords);
    }

    #[test]
    fn out_of_slice_terms_are_flagged() {
        let r = rep(2, 1);
        let small = DegreeSlice::new(&r, 1);
        let big = DegreeSlice::new(&r, 2);
        let mut coords = vec![Scalar::zero(); big.l_dim()];
        *coords.last_mut().unwrap() = Scalar::from_int(1); // [x1,x2]
        let e = big.l_from_coords(&coords);
        assert!(matches!(small.l_coords(&e), Err(Error::Indeterminate(1, _))));
        assert!(small.l_coords_trunc(&e).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn nested_embeddings_find_shared_basis() {
        let inner = DegreeSlice::new(&rep(1, 1), 2);
        let outer = DegreeSlice::new(&rep(2, 2), 2);
        let lmap = inner.l_embedding(&outer).unwrap();
        assert_eq!(lmap.len(), inner.l_dim());
        let vmap = inner.v_embedding(&outer).unwrap();
        for (i, &j) in vmap.iter().enumerate() {
            assert_eq!(inner.v_monomials()[i], outer.v_monomials()[j]);
        }
        assert!(outer.l_embedding(&inner).is_err());
    }
}
