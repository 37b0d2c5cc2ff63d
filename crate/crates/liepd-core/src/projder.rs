//! Lie algebras carrying a projection that is also a derivation.
//!
//! Every representation `(L, V)` merges into a single Lie algebra
//! `M = L ⊕ V` with bracket
//! `[l1 + v1, l2 + v2] = [l1, l2] + l1 . v2 - l2 . v1`
//! and the projection `p(l + v) = v` onto the module part. `p` is
//! idempotent and a derivation of the merged bracket, and those two laws
//! characterise the merged objects: splitting along `ker p` / `im p`
//! recovers the representation. [`PdElement`] implements the merged
//! arithmetic over any [`Representation`]; [`FinPdModel`] is the
//! structure-constant form on which the splitting direction is computed
//! honestly (null space, column space, re-derived constants).
//!
//! The merge of a free representation on equally many generators of each
//! sort is itself free on `m_i = x_i + y_i`; [`FreePd`] fixes that
//! presentation and [`PdHom`] evaluates homomorphisms given on the
//! `m_i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::freeassoc::format_signed_sum;
use crate::freelie::standard_bracketing;
use crate::linalg::{kernel_basis, mat_mul, vec_is_zero, RowSpace};
use crate::representation::{FinRep, FreeRep, RepHom, Representation};
use crate::scalars::Field;

/// An element `l + v` of the merged algebra over a representation `T`.
#[derive(Clone, PartialEq, Debug)]
pub struct PdElement<F: Field, T: Representation<F>> {
    ctx: T,
    l: T::L,
    v: T::V,
}

impl<F: Field, T: Representation<F>> PdElement<F, T> {
    pub fn new(ctx: T, l: T::L, v: T::V) -> Self {
        PdElement { ctx, l, v }
    }

    pub fn zero(ctx: T) -> Self {
        let l = ctx.l_zero();
        let v = ctx.v_zero();
        PdElement { ctx, l, v }
    }

    pub fn from_lie(ctx: T, l: T::L) -> Self {
        let v = ctx.v_zero();
        PdElement { ctx, l, v }
    }

    pub fn from_module(ctx: T, v: T::V) -> Self {
        let l = ctx.l_zero();
        PdElement { ctx, l, v }
    }

    pub fn ctx(&self) -> &T {
        &self.ctx
    }

    pub fn l_part(&self) -> &T::L {
        &self.l
    }

    pub fn v_part(&self) -> &T::V {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.l == self.ctx.l_zero() && self.v == self.ctx.v_zero()
    }

    /// The projection `p`: kills the Lie part, keeps the module part.
    pub fn p(&self) -> Self {
        PdElement { ctx: self.ctx.clone(), l: self.ctx.l_zero(), v: self.v.clone() }
    }

    /// The complement `r = id - p`: keeps the Lie part.
    pub fn r(&self) -> Self {
        PdElement { ctx: self.ctx.clone(), l: self.l.clone(), v: self.ctx.v_zero() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(PdElement {
            ctx: self.ctx.clone(),
            l: self.ctx.l_add(&self.l, &other.l)?,
            v: self.ctx.v_add(&self.v, &other.v)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Self {
        PdElement {
            ctx: self.ctx.clone(),
            l: self.ctx.l_scale(c, &self.l),
            v: self.ctx.v_scale(c, &self.v),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    /// The merged bracket
    /// `[l1 + v1, l2 + v2] = [l1, l2] + l1 . v2 - l2 . v1`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        let lie = ctx.bracket(&self.l, &other.l)?;
        let forward = ctx.action(&self.l, &other.v)?;
        let backward = ctx.action(&other.l, &self.v)?;
        Ok(PdElement {
            ctx: ctx.clone(),
            l: lie,
            v: ctx.v_sub(&forward, &backward)?,
        })
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch("merged elements live over different representations".into()));
        }
        Ok(())
    }
}

/// Merged bracket as a free function, for call sites that read better
/// applicatively.
pub fn pd_bracket<F: Field, T: Representation<F>>(
    a: &PdElement<F, T>,
    b: &PdElement<F, T>,
) -> Result<PdElement<F, T>> {
    a.bracket(b)
}

impl<F: Field> PdElement<F, FreeRep> {
    /// Drops every homogeneous component of degree above `d`.
    pub fn truncate(&self, d: usize) -> Self {
        PdElement {
            ctx: self.ctx.clone(),
            l: self.l.truncate(d),
            v: self.v.truncate(d),
        }
    }

    /// Largest degree among the components, or 0 for the zero element.
    pub fn max_degree(&self) -> usize {
        self.l.degree().unwrap_or(0).max(self.v.degree().unwrap_or(0))
    }
}

impl<F: Field> fmt::Display for PdElement<F, FreeRep> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lie = self.l.terms().map(|(w, c)| {
            let tree = standard_bracketing(w).expect("basis words are nonempty");
            (tree.to_string(), c.clone())
        });
        let module = self.v.terms().map(|(t, c)| (t.to_string(), c.clone()));
        let mut it = lie.chain(module);
        format_signed_sum(f, &mut it)
    }
}

/// The merge of a free representation on alphabets of equal size, free as
/// a projection-derivation algebra on the sums `m_i = x_i + y_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreePd {
    rep: FreeRep,
}

impl FreePd {
    pub fn new(rep: FreeRep) -> Result<Self> {
        if !rep.is_balanced() {
            return Err(Error::RankMismatch(format!(
                "{rep} has {} Lie and {} module generators; the merge is free only when they match",
                rep.xs().len(),
                rep.ys().len()
            )));
        }
        Ok(FreePd { rep })
    }

    pub fn standard(rank: u32) -> Self {
        FreePd { rep: FreeRep::standard(rank, rank) }
    }

    pub fn rep(&self) -> &FreeRep {
        &self.rep
    }

    pub fn rank(&self) -> usize {
        self.rep.xs().len()
    }

    /// The `i`-th free generator `m_i = x_i + y_i` (0-based).
    pub fn generator<F: Field>(&self, i: usize) -> Result<PdElement<F, FreeRep>> {
        let x = *self
            .rep
            .xs()
            .get(i)
            .ok_or(Error::ArityMismatch { expected: self.rank(), got: i + 1 })?;
        let y = self.rep.ys()[i];
        Ok(PdElement::new(
            self.rep.clone(),
            self.rep.lie_generator::<F>(x)?,
            self.rep.module_generator::<F>(y)?,
        ))
    }

    pub fn generators<F: Field>(&self) -> Result<Vec<PdElement<F, FreeRep>>> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }
}

/// A homomorphism of merged algebras out of a free merge. It is stored
/// as the underlying representation homomorphism; the two descriptions
/// determine each other through [`free_gen_transform`].
#[derive(Clone, PartialEq, Debug)]
pub struct PdHom<F: Field, T: Representation<F>> {
    source: FreePd,
    inner: RepHom<F, T>,
}

impl<F: Field, T: Representation<F>> PdHom<F, T> {
    /// Builds the unique homomorphism sending each free generator `m_i`
    /// to the prescribed image. Images may be arbitrary merged elements.
    pub fn from_generator_images(source: FreePd, target: T, images: &[PdElement<F, T>]) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::ArityMismatch { expected: source.rank(), got: images.len() });
        }
        let phi = images.iter().map(|m| m.l_part().clone()).collect();
        let psi = images.iter().map(|m| m.v_part().clone()).collect();
        let inner = RepHom::new(source.rep().clone(), target, phi, psi)?;
        Ok(PdHom { source, inner })
    }

    pub fn from_rep_hom(inner: RepHom<F, T>) -> Result<Self> {
        let source = FreePd::new(inner.source().clone())?;
        Ok(PdHom { source, inner })
    }

    pub fn source(&self) -> &FreePd {
        &self.source
    }

    pub fn target(&self) -> &T {
        self.inner.target()
    }

    pub fn rep_hom(&self) -> &RepHom<F, T> {
        &self.inner
    }

    pub fn generator_images(&self) -> Result<Vec<PdElement<F, T>>> {
        (0..self.source.rank())
            .map(|i| {
                Ok(PdElement::new(
                    self.target().clone(),
                    self.inner.phi_images()[i].clone(),
                    self.inner.psi_images()[i].clone(),
                ))
            })
            .collect()
    }

    /// Applies the homomorphism sortwise; this is the unique bracket- and
    /// projection-preserving extension of the generator images.
    pub fn eval(&self, m: &PdElement<F, FreeRep>) -> Result<PdElement<F, T>> {
        Ok(PdElement::new(
            self.target().clone(),
            self.inner.eval_lie(m.l_part())?,
            self.inner.eval_module(m.v_part())?,
        ))
    }
}

/// The two equivalent generator descriptions of a homomorphism out of a
/// free merge: images of the `m_i = x_i + y_i` determine a representation
/// homomorphism with `phi(x_i) = r(f(m_i))` and `psi(y_i) = p(f(m_i))`,
/// because any projection-compatible map must send `x_i = r(m_i)` to the
/// `r`-part of the image and `y_i = p(m_i)` to the `p`-part.
pub fn free_gen_transform<F: Field, T: Representation<F>>(
    source: &FreePd,
    target: T,
    images: &[PdElement<F, T>],
) -> Result<RepHom<F, T>> {
    Ok(PdHom::from_generator_images(source.clone(), target, images)?.inner)
}

/// Hom direction of the merge: a representation homomorphism `(phi, psi)`
/// is the same data as the merged homomorphism `phi ⊕ psi`.
pub fn functor_f_hom<F: Field, T: Representation<F>>(h: &RepHom<F, T>) -> Result<PdHom<F, T>> {
    PdHom::from_rep_hom(h.clone())
}

/// Hom direction of the splitting: restricting a merged homomorphism to
/// `ker p` and `im p` recovers the pair `(phi, psi)`.
pub fn functor_finv_hom<F: Field, T: Representation<F>>(h: &PdHom<F, T>) -> RepHom<F, T> {
    h.rep_hom().clone()
}

/// A finite-dimensional Lie algebra with a projection-derivation, in
/// structure-constant form. Validation enforces the whole axiom set:
/// an alternating bracket satisfying Jacobi, `p . p = p`, and the
/// derivation law `p[a, b] = [p(a), b] + [a, p(b)]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinPdModel<F: Field> {
    dim: usize,
    /// `c[(i*dim + j)*dim + k]` is the coefficient of `e_k` in `[e_i, e_j]`.
    c: Vec<F>,
    /// Matrix of `p` acting on column vectors.
    p: Vec<Vec<F>>,
}

impl<F: Field> FinPdModel<F> {
    pub fn new(dim: usize, entries: &[(usize, usize, usize, F)], p: Vec<Vec<F>>) -> Result<Self> {
        let mut c = vec![F::zero(); dim * dim * dim];
        for (i, j, k, coeff) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::Validation(format!(
                    "structure constant index ({i},{j},{k}) out of range for dimension {dim}"
                )));
            }
            c[(i * dim + j) * dim + k] = c[(i * dim + j) * dim + k].add(coeff);
        }
        if p.len() != dim || p.iter().any(|row| row.len() != dim) {
            return Err(Error::Validation(format!("projection matrix is not {dim} x {dim}")));
        }
        let model = FinPdModel { dim, c, p };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for k in 0..n {
                if !self.c[(i * n + i) * n + k].is_zero() {
                    return Err(Error::Validation(format!("bracket is not alternating at basis vector {i}")));
                }
            }
            for j in 0..n {
                for k in 0..n {
                    if self.c[(i * n + j) * n + k] != self.c[(j * n + i) * n + k].neg() {
                        return Err(Error::Validation(format!(
                            "structure constants are not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ei = self.basis(i);
                    let ej = self.basis(j);
                    let ek = self.basis(k);
                    let mut total = vec![F::zero(); n];
                    for (a, b, cv) in [(&ei, &ej, &ek), (&ej, &ek, &ei), (&ek, &ei, &ej)] {
                        let inner = self.bracket_vec(a, b);
                        total = crate::linalg::vec_add(&total, &self.bracket_vec(&inner, cv));
                    }
                    if !vec_is_zero(&total) {
                        return Err(Error::Validation(format!(
                            "Jacobi identity fails on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        if mat_mul(&self.p, &self.p) != self.p {
            return Err(Error::Validation("p is not idempotent".into()));
        }
        // Derivation law on basis pairs (bilinearity extends it).
        for i in 0..n {
            for j in 0..n {
                let ei = self.basis(i);
                let ej = self.basis(j);
                let lhs = self.apply_p(&self.bracket_vec(&ei, &ej));
                let rhs = crate::linalg::vec_add(
                    &self.bracket_vec(&self.apply_p(&ei), &ej),
                    &self.bracket_vec(&ei, &self.apply_p(&ej)),
                );
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "p is not a derivation on basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &F {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn projection(&self) -> &Vec<Vec<F>> {
        &self.p
    }

    pub fn basis(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.dim];
        v[i] = F::one();
        v
    }

    pub fn bracket_vec(&self, a: &[F], b: &[F]) -> Vec<F> {
        let n = self.dim;
        let mut out = vec![F::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let prod = ai.mul(bj);
                for (k, o) in out.iter_mut().enumerate() {
                    *o = o.add(&prod.mul(&self.c[(i * n + j) * n + k]));
                }
            }
        }
        out
    }

    pub fn apply_p(&self, v: &[F]) -> Vec<F> {
        crate::linalg::mat_vec(&self.p, v)
    }
}

/// Object direction of the merge: a finite representation becomes the
/// structure-constant algebra on `L ⊕ V` with `p` the projection onto
/// the `V` block.
pub fn functor_f<F: Field>(rep: &FinRep<F>) -> Result<FinPdModel<F>> {
    let n = rep.lie_dim();
    let m = rep.module_dim();
    let dim = n + m;
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = rep.structure_constant(i, j, k);
                if !c.is_zero() {
                    entries.push((i, j, k, c.clone()));
                }
            }
        }
    }
    // [e_i, f_j] = e_i . f_j lands in the module block; antisymmetric partner
    // filled in explicitly.
    for i in 0..n {
        for j in 0..m {
            for (k, coeff) in rep.action_matrix(i).iter().map(|row| &row[j]).enumerate() {
                if !coeff.is_zero() {
                    entries.push((i, n + j, n + k, coeff.clone()));
                    entries.push((n + j, i, n + k, coeff.neg()));
                }
            }
        }
    }
    let mut p = vec![vec![F::zero(); dim]; dim];
    for d in n..dim {
        p[d][d] = F::one();
    }
    FinPdModel::new(dim, &entries, p)
}

/// The splitting of a finite merged algebra, together with the bases
/// along which it was computed.
#[derive(Clone, Debug)]
pub struct SplitModel<F: Field> {
    pub rep: FinRep<F>,
    /// Basis of `ker p` in the ambient coordinates.
    pub kernel_basis: Vec<Vec<F>>,
    /// Basis of `im p` in the ambient coordinates.
    pub image_basis: Vec<Vec<F>>,
}

/// Object direction of the splitting: computes `ker p` and `im p`
/// honestly, re-derives structure constants and action matrices in those
/// bases, and validates the result as a representation.
///
/// The split exists only when the image of `p` brackets to zero. Over
/// fields where 2 is invertible that is a consequence of the axioms
/// (idempotence forces the eigenvalue-2 component `[p(a), p(b)]` to
/// vanish); in characteristic 2 it is an extra hypothesis, so it is
/// checked and reported rather than assumed.
pub fn functor_finv<F: Field>(model: &FinPdModel<F>) -> Result<SplitModel<F>> {
    let dim = model.dim();
    // Columns of p are the images of the basis vectors.
    let columns: Vec<Vec<F>> = (0..dim)
        .map(|j| (0..dim).map(|i| model.projection()[i][j].clone()).collect())
        .collect();
    let kernel = kernel_basis(&columns, dim);
    let mut image_rows = RowSpace::new(dim);
    for col in &columns {
        image_rows.insert(col.clone());
    }
    let image: Vec<Vec<F>> = image_rows.basis().to_vec();
    let n = kernel.len();
    let m = image.len();
    if n + m != dim {
        return Err(Error::Validation(
            "kernel and image of p do not decompose the space (p is not a projection)".into(),
        ));
    }

    // Coordinates of an ambient vector in the combined (kernel, image)
    // basis, via its own projections: v = (v - p(v)) + p(v).
    let kernel_space = RowSpace::from_rows(dim, kernel.clone());
    let image_space = RowSpace::from_rows(dim, image.clone());
    let coords_in = |space: &RowSpace<F>, basis: &[Vec<F>], v: &[F]| -> Result<Vec<F>> {
        if !space.contains(v) {
            return Err(Error::Validation("bracket leaves the expected block of the splitting".into()));
        }
        // Solve by elimination against the echelon basis: each basis row
        // has a pivot column with a monic entry and zeros elsewhere in
        // that column, so coefficients read off directly.
        let mut rest = v.to_vec();
        let mut coeffs = vec![F::zero(); basis.len()];
        for (idx, row) in basis.iter().enumerate() {
            let pivot = row
                .iter()
                .position(|c| !c.is_zero())
                .expect("echelon basis rows are nonzero");
            let coeff = rest[pivot].clone();
            if coeff.is_zero() {
                continue;
            }
            for (r, b) in rest.iter_mut().zip(row.iter()) {
                *r = r.sub(&coeff.mul(b));
            }
            coeffs[idx] = coeff;
        }
        if !vec_is_zero(&rest) {
            return Err(Error::Validation("vector does not reduce against the block basis".into()));
        }
        Ok(coeffs)
    };

    // Structure constants of ker p in the kernel basis.
    let mut entries = Vec::new();
    for (i, a) in kernel.iter().enumerate() {
        for (j, b) in kernel.iter().enumerate() {
            let br = model.bracket_vec(a, b);
            let coeffs = coords_in(&kernel_space, &kernel, &br)?;
            for (k, coeff) in coeffs.into_iter().enumerate() {
                if !coeff.is_zero() {
                    entries.push((i, j, k, coeff));
                }
            }
        }
    }
    // The image must be abelian for the module structure to exist.
    for a in &image {
        for b in &image {
            if !vec_is_zero(&model.bracket_vec(a, b)) {
                return Err(Error::Validation(
                    "image of p is not abelian, so the algebra does not split into a representation".into(),
                ));
            }
        }
    }
    // Action matrices of the kernel basis on the image basis.
    let mut act = Vec::with_capacity(n);
    for a in &kernel {
        let mut mat = vec![vec![F::zero(); m]; m];
        for (j, b) in image.iter().enumerate() {
            let br = model.bracket_vec(a, b);
            let coeffs = coords_in(&image_space, &image, &br)?;
            for (k, coeff) in coeffs.into_iter().enumerate() {
                mat[k][j] = coeff;
            }
        }
        act.push(mat);
    }
    let rep = FinRep::new(n, m, &entries, act)?;
    Ok(SplitModel { rep, kernel_basis: kernel, image_basis: image })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeassoc::{XGen, YGen};
    use crate::scalars::{FpScalar, Scalar};
    use proptest::prelude::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn qv(ns: &[i64]) -> Vec<Scalar> {
        ns.iter().map(|&n| q(n)).collect()
    }

    fn w22() -> FreeRep {
        FreeRep::standard(2, 2)
    }

    fn gen_m(i: u32) -> PdElement<Scalar, FreeRep> {
        let rep = w22();
        PdElement::new(
            rep.clone(),
            rep.lie_generator::<Scalar>(XGen(i)).unwrap(),
            rep.module_generator::<Scalar>(YGen(i)).unwrap(),
        )
    }

    #[test]
    fn merged_bracket_of_mixed_elements() {
        // [x1 + y1, x2] = [x1,x2] - x2*y1.
        let rep = w22();
        let m1 = gen_m(1);
        let x2 = PdElement::from_lie(rep.clone(), rep.lie_generator::<Scalar>(XGen(2)).unwrap());
        let b = m1.bracket(&x2).unwrap();
        assert_eq!(b.to_string(), "[x1,x2] - x2*y1");
        // And with the module part on the other side the action flips sign.
        let b2 = x2.bracket(&m1).unwrap();
        assert_eq!(b2.to_string(), "-1*[x1,x2] + x2*y1");
    }

    #[test]
    fn projection_splits_sorts() {
        let m1 = gen_m(1);
        assert_eq!(m1.p().to_string(), "y1");
        assert_eq!(m1.r().to_string(), "x1");
        assert_eq!(m1.p().add(&m1.r()).unwrap(), m1);
    }

    fn small_pd_element(coeffs: [i64; 6]) -> PdElement<Scalar, FreeRep> {
        // Span: x1, x2, [x1,x2] on the Lie side; y1, y2, x1*y2 on the module side.
        let rep = w22();
        let x1 = rep.lie_generator::<Scalar>(XGen(1)).unwrap();
        let x2 = rep.lie_generator::<Scalar>(XGen(2)).unwrap();
        let b12 = crate::freelie::lie_bracket(&x1, &x2).unwrap();
        let l = x1
            .scale(&q(coeffs[0]))
            .add(&x2.scale(&q(coeffs[1])))
            .unwrap()
            .add(&b12.scale(&q(coeffs[2])))
            .unwrap();
        let y1 = rep.module_generator::<Scalar>(YGen(1)).unwrap();
        let y2 = rep.module_generator::<Scalar>(YGen(2)).unwrap();
        let x1y2 = crate::representation::act(&x1, &y2).unwrap();
        let v = y1
            .scale(&q(coeffs[3]))
            .add(&y2.scale(&q(coeffs[4])))
            .unwrap()
            .add(&x1y2.scale(&q(coeffs[5])))
            .unwrap();
        PdElement::new(rep, l, v)
    }

    proptest! {
        #[test]
        fn p_is_an_idempotent_derivation_and_the_bracket_is_lie(
            a in proptest::array::uniform6(-3i64..=3),
            b in proptest::array::uniform6(-3i64..=3),
            c in proptest::array::uniform6(-3i64..=3),
        ) {
            let ea = small_pd_element(a);
            let eb = small_pd_element(b);
            let ec = small_pd_element(c);
            // Idempotence.
            prop_assert_eq!(ea.p().p(), ea.p());
            // Derivation law.
            let lhs = ea.bracket(&eb).unwrap().p();
            let rhs = ea.p().bracket(&eb).unwrap().add(&ea.bracket(&eb.p()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            // Alternating.
            prop_assert!(ea.bracket(&ea).unwrap().is_zero());
            // Jacobi.
            let jac = ea
                .bracket(&eb.bracket(&ec).unwrap())
                .unwrap()
                .add(&eb.bracket(&ec.bracket(&ea).unwrap()).unwrap())
                .unwrap()
                .add(&ec.bracket(&ea.bracket(&eb).unwrap()).unwrap())
                .unwrap();
            prop_assert!(jac.is_zero());
        }
    }

    #[test]
    fn free_merge_requires_balanced_alphabets() {
        let unbalanced = FreeRep::new(vec![XGen(1), XGen(2)], vec![YGen(1)]).unwrap();
        assert!(matches!(FreePd::new(unbalanced), Err(Error::RankMismatch(_))));
        let pd = FreePd::standard(2);
        let gens = pd.generators::<Scalar>().unwrap();
        assert_eq!(gens[0].to_string(), "x1 + y1");
        assert_eq!(gens[1].to_string(), "x2 + y2");
    }

    #[test]
    fn generator_images_and_rep_hom_determine_each_other() {
        let pd = FreePd::standard(2);
        let target = w22();
        // m1 -> m2, m2 -> [m1, m2] + m1's module part.
        let m2 = gen_m(2);
        let mixed = gen_m(1).bracket(&gen_m(2)).unwrap().add(&gen_m(1).p()).unwrap();
        let hom =
            PdHom::from_generator_images(pd.clone(), target.clone(), &[m2.clone(), mixed.clone()]).unwrap();
        // The underlying pair maps x_i to the r-parts and y_i to the p-parts.
        assert_eq!(hom.rep_hom().phi_images()[0], *m2.l_part());
        assert_eq!(hom.rep_hom().psi_images()[1], *mixed.v_part());
        let back = hom.generator_images().unwrap();
        assert_eq!(back[0], m2);
        assert_eq!(back[1], mixed);
        // free_gen_transform is the same construction.
        let rh = free_gen_transform(&pd, target, &[m2, mixed]).unwrap();
        assert_eq!(&rh, hom.rep_hom());
    }

    #[test]
    fn pd_hom_eval_commutes_with_bracket_and_p() {
        let pd = FreePd::standard(2);
        let images = [gen_m(2), gen_m(1).bracket(&gen_m(2)).unwrap()];
        let hom = PdHom::from_generator_images(pd.clone(), w22(), &images).unwrap();
        let a = gen_m(1).bracket(&gen_m(2)).unwrap().add(&gen_m(1)).unwrap();
        let b = gen_m(2).scale(&q(3)).sub(&gen_m(1).p()).unwrap();
        let lhs = hom.eval(&a.bracket(&b).unwrap()).unwrap();
        let rhs = hom.eval(&a).unwrap().bracket(&hom.eval(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(hom.eval(&a.p()).unwrap(), hom.eval(&a).unwrap().p());
    }

    fn solvable_rep() -> FinRep<Scalar> {
        FinRep::new(
            2,
            2,
            &[(0, 1, 1, q(1)), (1, 0, 1, q(-1))],
            vec![
                vec![qv(&[1, 0]), qv(&[0, 0])],
                vec![qv(&[0, 1]), qv(&[0, 0])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn merge_then_split_recovers_a_finite_representation() {
        let rep = solvable_rep();
        let merged = functor_f(&rep).unwrap();
        assert_eq!(merged.dim(), 4);
        // Mixed bracket [e1, f1] = f1 (the first action matrix fixes f1).
        let e1 = merged.basis(0);
        let f1 = merged.basis(2);
        assert_eq!(merged.bracket_vec(&e1, &f1), qv(&[0, 0, 1, 0]));
        let split = functor_finv(&merged).unwrap();
        assert_eq!(split.rep, rep);
        assert_eq!(split.kernel_basis, vec![qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0])]);
        assert_eq!(split.image_basis, vec![qv(&[0, 0, 1, 0]), qv(&[0, 0, 0, 1])]);
    }

    #[test]
    fn split_recovers_representations_off_the_standard_blocks() {
        // Conjugate the merged solvable model by mixing a kernel and an
        // image direction: e1' = e1 + f1 is still killed by a suitably
        // transported p. Rather than conjugating by hand, build the model
        // directly: dim 2, [a, b] = b with p projecting onto b's line.
        let model = FinPdModel::new(
            2,
            &[(0, 1, 1, q(1)), (1, 0, 1, q(-1))],
            vec![qv(&[0, 0]), qv(&[0, 1])],
        )
        .unwrap();
        let split = functor_finv(&model).unwrap();
        assert_eq!(split.rep.lie_dim(), 1);
        assert_eq!(split.rep.module_dim(), 1);
        // The single action matrix is multiplication by 1.
        assert_eq!(split.rep.action_matrix(0), &vec![qv(&[1])]);
    }

    #[test]
    fn validation_rejects_non_derivations() {
        // Projection onto the *kernel-side* line: p(a) = a with [a, b] = b.
        // Then p[a,b] = p(b) = 0 but [p(a), b] = b, so p is not a derivation.
        let err = FinPdModel::new(
            2,
            &[(0, 1, 1, q(1)), (1, 0, 1, q(-1))],
            vec![qv(&[1, 0]), qv(&[0, 0])],
        );
        assert!(matches!(err, Err(Error::Validation(msg)) if msg.contains("derivation")));
    }

    #[test]
    fn characteristic_two_split_can_fail_on_non_abelian_image() {
        type F2 = FpScalar<2>;
        let one = F2::one();
        // dim 3: kernel line e0; image plane f1, f2 with [f1, f2] = e0.
        // Idempotence and the derivation law hold (2 = 0), Jacobi holds,
        // but the image is not abelian, so no representation splits it.
        let p = vec![
            vec![F2::zero(), F2::zero(), F2::zero()],
            vec![F2::zero(), one.clone(), F2::zero()],
            vec![F2::zero(), F2::zero(), one.clone()],
        ];
        let model = FinPdModel::new(
            3,
            &[(1, 2, 0, one.clone()), (2, 1, 0, one.clone())],
            p,
        )
        .unwrap();
        let err = functor_finv(&model);
        assert!(matches!(err, Err(Error::Validation(msg)) if msg.contains("abelian")));
    }

    #[test]
    fn hom_functors_are_mutually_inverse_on_the_nose() {
        let pd = FreePd::standard(2);
        let images = [gen_m(2), gen_m(1)];
        let hom = PdHom::from_generator_images(pd, w22(), &images).unwrap();
        let back = functor_f_hom(&functor_finv_hom(&hom)).unwrap();
        assert_eq!(back, hom);
        let rh = functor_finv_hom(&functor_f_hom(hom.rep_hom()).unwrap());
        assert_eq!(&rh, hom.rep_hom());
    }
}
