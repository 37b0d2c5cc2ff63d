//! Finitely generated congruence pairs on free representations, the
//! Galois operators relating them to solution sets over a target
//! representation, the β relation on homomorphisms, restriction and
//! extension between nested free contexts, and transport along the
//! merge functor.
//!
//! Everything here is degree-truncated: a [`CongruencePair`] carries its
//! bound `d` and all statements it makes are "verified up to degree d".
//! The objects being modeled are infinite-dimensional; the truncated
//! slices are the only desk-scale semantics on offer.
//!
//! The prime operator `T ↦ solutions(T)` is only computable when the
//! homomorphism set is finite, so [`solutions_of`] and everything built
//! on it require a finite coefficient field and treat the target as a
//! finite model — an oracle for the Galois laws, not the theory's
//! natural habitat (an infinite field of characteristic zero). Every
//! [`ClosureReport`] repeats that caveat.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::freeassoc::{ModuleElement, Word};
use crate::freelie::{lie_bracket, LieElement};
use crate::linalg::{kernel_basis, vec_is_zero, RowSpace};
use crate::projder::{PdElement, PdHom};
use crate::representation::{act, FinRep, FreeRep, RepHom};
use crate::scalars::Field;
use crate::slices::DegreeSlice;

/// Cap on the number of generator assignments [`solutions_of`] will
/// enumerate.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 16;

/// A pair `(T₁, T₂)` of an ideal slice of the free Lie algebra and a
/// compatible submodule slice of the free module, generated by finitely
/// many elements and saturated up to the truncation degree.
#[derive(Clone, PartialEq, Debug)]
pub struct CongruencePair<F: Field> {
    context: FreeRep,
    degree: usize,
    gens_l: Vec<LieElement<F>>,
    gens_v: Vec<ModuleElement<F>>,
    l_span: RowSpace<F>,
    v_span: RowSpace<F>,
}

fn lie_from_coords<F: Field>(ctx: &FreeRep, slice: &DegreeSlice, row: &[F]) -> LieElement<F> {
    let terms: Vec<(Word, F)> = slice
        .l_words()
        .iter()
        .zip(row.iter())
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (w.clone(), c.clone()))
        .collect();
    LieElement::from_terms(ctx.xs().to_vec(), terms).expect("slice words are Lyndon")
}

fn module_from_coords<F: Field>(ctx: &FreeRep, slice: &DegreeSlice, row: &[F]) -> ModuleElement<F> {
    let mut out = ModuleElement::zero(ctx.xs().to_vec(), ctx.ys().to_vec());
    for (t, c) in slice.v_monomials().iter().zip(row.iter()) {
        if !c.is_zero() {
            let m = ModuleElement::monomial(ctx.xs().to_vec(), ctx.ys().to_vec(), t.clone(), c.clone())
                .expect("slice monomials live in the context");
            out = out.add(&m).expect("same context");
        }
    }
    out
}

fn min_lie_degree<F: Field>(e: &LieElement<F>) -> usize {
    e.terms().map(|(w, _)| w.len()).min().unwrap_or(0)
}

fn min_module_degree<F: Field>(e: &ModuleElement<F>) -> usize {
    e.terms().map(|(t, _)| t.degree()).min().unwrap_or(0)
}

impl<F: Field> CongruencePair<F> {
    /// Generates and saturates the pair: the result is the smallest
    /// degree-`d` slice pair containing the generators that is closed
    /// under bracketing with the ambient Lie algebra, the module action
    /// on it, and acting on the generators' module span.
    pub fn generated(
        context: FreeRep,
        gens_l: Vec<LieElement<F>>,
        gens_v: Vec<ModuleElement<F>>,
        degree: usize,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Validation("closure degree must be at least 1".into()));
        }
        let slice = DegreeSlice::new(&context, degree);
        for g in &gens_l {
            if g.degree().unwrap_or(0) > degree {
                return Err(Error::Indeterminate(
                    degree,
                    format!("generator {g} exceeds the truncation degree"),
                ));
            }
            slice.l_coords(g)?;
        }
        for g in &gens_v {
            if g.degree().unwrap_or(0) > degree {
                return Err(Error::Indeterminate(
                    degree,
                    format!("generator {g} exceeds the truncation degree"),
                ));
            }
            slice.v_coords(g)?;
        }

        let mut l_span = RowSpace::new(slice.l_dim());
        let mut v_span = RowSpace::new(slice.v_dim());
        let mut work_l: VecDeque<LieElement<F>> = gens_l.iter().filter(|g| !g.is_zero()).cloned().collect();
        let mut work_v: VecDeque<ModuleElement<F>> = gens_v.iter().filter(|g| !g.is_zero()).cloned().collect();
        let lyndon = slice.l_basis_elements::<F>();
        let v_basis = slice.v_basis_elements::<F>();
        let x_elems: Vec<LieElement<F>> = context
            .xs()
            .iter()
            .map(|&x| context.lie_generator::<F>(x))
            .collect::<Result<_>>()?;

        loop {
            if let Some(t) = work_l.pop_front() {
                if !l_span.insert(slice.l_coords(&t)?) {
                    continue;
                }
                let t_min = min_lie_degree(&t);
                for b in &lyndon {
                    if t_min + b.degree().unwrap_or(0) > degree {
                        continue;
                    }
                    let br = lie_bracket(&t, b)?.truncate(degree);
                    if !br.is_zero() {
                        work_l.push_back(br);
                    }
                }
                for v in &v_basis {
                    if t_min + min_module_degree(v) > degree {
                        continue;
                    }
                    let av = act(&t, v)?.truncate(degree);
                    if !av.is_zero() {
                        work_v.push_back(av);
                    }
                }
                continue;
            }
            if let Some(s) = work_v.pop_front() {
                if !v_span.insert(slice.v_coords(&s)?) {
                    continue;
                }
                for x in &x_elems {
                    let xs = act(x, &s)?.truncate(degree);
                    if !xs.is_zero() {
                        work_v.push_back(xs);
                    }
                }
                continue;
            }
            break;
        }

        let closure = CongruencePair {
            context,
            degree,
            gens_l,
            gens_v,
            l_span,
            v_span,
        };
        Ok(closure)
    }

    /// The trivial pair `(0, 0)`.
    pub fn zero(context: FreeRep, degree: usize) -> Result<Self> {
        CongruencePair::generated(context, Vec::new(), Vec::new(), degree)
    }

    /// The pair spanning the entire degree-`d` slice.
    pub fn full(context: FreeRep, degree: usize) -> Result<Self> {
        let slice = DegreeSlice::new(&context, degree);
        CongruencePair::generated(
            context.clone(),
            slice.l_basis_elements::<F>(),
            slice.v_basis_elements::<F>(),
            degree,
        )
    }

    pub fn context(&self) -> &FreeRep {
        &self.context
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens_l(&self) -> &[LieElement<F>] {
        &self.gens_l
    }

    pub fn gens_v(&self) -> &[ModuleElement<F>] {
        &self.gens_v
    }

    fn slice(&self) -> DegreeSlice {
        DegreeSlice::new(&self.context, self.degree)
    }

    /// Canonical basis of the closed Lie-side span.
    pub fn closure_l(&self) -> Vec<LieElement<F>> {
        let slice = self.slice();
        self.l_span.basis().iter().map(|r| lie_from_coords(&self.context, &slice, r)).collect()
    }

    /// Canonical basis of the closed module-side span.
    pub fn closure_v(&self) -> Vec<ModuleElement<F>> {
        let slice = self.slice();
        self.v_span.basis().iter().map(|r| module_from_coords(&self.context, &slice, r)).collect()
    }

    pub fn l_rank(&self) -> usize {
        self.l_span.rank()
    }

    pub fn v_rank(&self) -> usize {
        self.v_span.rank()
    }

    /// Membership of a Lie element in the closed span; errors when the
    /// element's degree exceeds the truncation, where membership is
    /// undecidable from the stored data.
    pub fn contains_lie(&self, e: &LieElement<F>) -> Result<bool> {
        if e.degree().unwrap_or(0) > self.degree {
            return Err(Error::Indeterminate(
                self.degree,
                format!("membership of the degree-{} element {e}", e.degree().unwrap_or(0)),
            ));
        }
        Ok(self.l_span.contains(&self.slice().l_coords(e)?))
    }

    /// Membership of a module element in the closed span; same
    /// truncation caveat as [`Self::contains_lie`].
    pub fn contains_module(&self, e: &ModuleElement<F>) -> Result<bool> {
        if e.degree().unwrap_or(0) > self.degree {
            return Err(Error::Indeterminate(
                self.degree,
                format!("membership of the degree-{} element {e}", e.degree().unwrap_or(0)),
            ));
        }
        Ok(self.v_span.contains(&self.slice().v_coords(e)?))
    }

    /// Span inclusion on both sorts (contexts and degrees must agree).
    pub fn is_sub_pair_of(&self, other: &CongruencePair<F>) -> bool {
        self.context == other.context
            && self.degree == other.degree
            && self.l_span.is_subspace_of(&other.l_span)
            && self.v_span.is_subspace_of(&other.v_span)
    }

    /// Span equality on both sorts — the pairs may have been generated
    /// differently.
    pub fn same_spans(&self, other: &CongruencePair<F>) -> bool {
        self.context == other.context
            && self.degree == other.degree
            && self.l_span == other.l_span
            && self.v_span == other.v_span
    }

    pub fn is_full(&self) -> bool {
        let slice = self.slice();
        self.l_span.rank() == slice.l_dim() && self.v_span.rank() == slice.v_dim()
    }

    pub fn is_zero_pair(&self) -> bool {
        self.l_span.rank() == 0 && self.v_span.rank() == 0
    }

    /// Re-verifies the closure invariants from scratch: the Lie span is
    /// an ideal slice, the module span is a submodule slice, and acting
    /// with the Lie span on arbitrary module basis elements lands in the
    /// module span.
    pub fn check_invariants(&self) -> Result<()> {
        let slice = self.slice();
        let lyndon = slice.l_basis_elements::<F>();
        let v_basis = slice.v_basis_elements::<F>();
        for t in self.closure_l() {
            let t_min = min_lie_degree(&t);
            for b in &lyndon {
                if t_min + b.degree().unwrap_or(0) > self.degree {
                    continue;
                }
                let br = lie_bracket(&t, b)?.truncate(self.degree);
                if !self.contains_lie(&br)? {
                    return Err(Error::Validation(format!(
                        "Lie span is not an ideal slice: [{t}, {b}] escapes"
                    )));
                }
            }
            for v in &v_basis {
                if t_min + min_module_degree(v) > self.degree {
                    continue;
                }
                let av = act(&t, v)?.truncate(self.degree);
                if !self.contains_module(&av)? {
                    return Err(Error::Validation(format!(
                        "compatibility fails: {t} acting on {v} escapes the module span"
                    )));
                }
            }
        }
        for s in self.closure_v() {
            for &x in self.context.xs() {
                let xe = self.context.lie_generator::<F>(x)?;
                let xs = act(&xe, &s)?.truncate(self.degree);
                if !self.contains_module(&xs)? {
                    return Err(Error::Validation(format!(
                        "module span is not a submodule slice: {x} acting on {s} escapes"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Display for CongruencePair<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "congruence pair on {}, verified up to degree {}", self.context, self.degree)?;
        let l_parts: Vec<String> = self.closure_l().iter().map(|e| e.to_string()).collect();
        let v_parts: Vec<String> = self.closure_v().iter().map(|e| e.to_string()).collect();
        writeln!(f, "  T1 = span{{{}}}", l_parts.join(", "))?;
        write!(f, "  T2 = span{{{}}}", v_parts.join(", "))
    }
}

/// Saturates a pair anew from its closure basis; the spans are already
/// saturated, so this is the identity on spans (and a cheap idempotence
/// check).
pub fn congruence_close<F: Field>(t: &CongruencePair<F>) -> Result<CongruencePair<F>> {
    CongruencePair::generated(t.context().clone(), t.closure_l(), t.closure_v(), t.degree())
}

fn enumerate_vectors<F: Field>(elems: &[F], len: usize) -> Vec<Vec<F>> {
    let mut out: Vec<Vec<F>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for prefix in &out {
            for e in elems {
                let mut v = prefix.clone();
                v.push(e.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All homomorphisms `W(X,Y) → H` whose kernel pair contains `T`,
/// found by exhaustively assigning generator images over the finite
/// coefficient field. Checking the generators suffices: kernels are
/// congruences, hence contain the whole generated pair once they
/// contain its generators.
pub fn solutions_of<F: Field>(
    t: &CongruencePair<F>,
    h: &FinRep<F>,
    budget: u128,
) -> Result<Vec<RepHom<F, FinRep<F>>>> {
    let elems = F::elements().ok_or_else(|| {
        Error::Validation("solution enumeration requires a finite coefficient field".into())
    })?;
    let q = elems.len() as u128;
    let slots = h.lie_dim() * t.context().xs().len() + h.module_dim() * t.context().ys().len();
    let mut needed: u128 = 1;
    for _ in 0..slots {
        needed = needed
            .checked_mul(q)
            .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
    }

    let n = h.lie_dim();
    let m = h.module_dim();
    let nx = t.context().xs().len();
    let ny = t.context().ys().len();
    let mut sols = Vec::new();
    for assignment in enumerate_vectors(&elems, slots) {
        let phi: Vec<Vec<F>> = (0..nx).map(|i| assignment[i * n..(i + 1) * n].to_vec()).collect();
        let base = nx * n;
        let psi: Vec<Vec<F>> = (0..ny)
            .map(|j| assignment[base + j * m..base + (j + 1) * m].to_vec())
            .collect();
        let hom = RepHom::new(t.context().clone(), h.clone(), phi, psi)?;
        let mut kills = true;
        for g in t.gens_l() {
            if !vec_is_zero(&hom.eval_lie(g)?) {
                kills = false;
                break;
            }
        }
        if kills {
            for g in t.gens_v() {
                if !vec_is_zero(&hom.eval_module(g)?) {
                    kills = false;
                    break;
                }
            }
        }
        if kills {
            sols.push(hom);
        }
    }
    Ok(sols)
}

/// The degree-`d` kernel-pair intersection of a finite set of
/// homomorphisms `W → H`, as a congruence pair.
pub fn kernel_intersection<F: Field>(
    homs: &[RepHom<F, FinRep<F>>],
    context: &FreeRep,
    degree: usize,
) -> Result<CongruencePair<F>> {
    let slice = DegreeSlice::new(context, degree);
    let l_elems = slice.l_basis_elements::<F>();
    let mut images_l = Vec::with_capacity(l_elems.len());
    for e in &l_elems {
        let mut stacked = Vec::new();
        for h in homs {
            stacked.extend(h.eval_lie(e)?);
        }
        images_l.push(stacked);
    }
    let codim_l = homs.iter().map(|h| h.target().lie_dim()).sum();
    let gens_l: Vec<LieElement<F>> = kernel_basis(&images_l, codim_l)
        .iter()
        .map(|row| lie_from_coords(context, &slice, row))
        .collect();

    let v_elems = slice.v_basis_elements::<F>();
    let mut images_v = Vec::with_capacity(v_elems.len());
    for e in &v_elems {
        let mut stacked = Vec::new();
        for h in homs {
            stacked.extend(h.eval_module(e)?);
        }
        images_v.push(stacked);
    }
    let codim_v = homs.iter().map(|h| h.target().module_dim()).sum();
    let gens_v: Vec<ModuleElement<F>> = kernel_basis(&images_v, codim_v)
        .iter()
        .map(|row| module_from_coords(context, &slice, row))
        .collect();

    CongruencePair::generated(context.clone(), gens_l, gens_v, degree)
}

/// The double-prime operator: the intersection of the kernels of all
/// solutions of `T`. Always contains `T` and is idempotent.
pub fn double_prime<F: Field>(
    t: &CongruencePair<F>,
    h: &FinRep<F>,
    budget: u128,
) -> Result<CongruencePair<F>> {
    let sols = solutions_of(t, h, budget)?;
    kernel_intersection(&sols, t.context(), t.degree())
}

/// One prime-double-prime round over a finite model, with the closedness
/// verdict.
#[derive(Clone, Debug)]
pub struct ClosureReport<F: Field> {
    pub original: CongruencePair<F>,
    pub solutions: usize,
    pub double: CongruencePair<F>,
    pub is_closed: bool,
}

impl<F: Field> fmt::Display for ClosureReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "finite-model oracle: homomorphisms are enumerated over a finite field only to make \
             the solution operators computable; the theory's standing ground field is infinite \
             of characteristic zero"
        )?;
        writeln!(f, "{}", self.original)?;
        writeln!(f, "solutions over the target: {}", self.solutions)?;
        writeln!(f, "double prime:")?;
        writeln!(f, "{}", self.double)?;
        write!(
            f,
            "closed: {} (verified up to degree {})",
            if self.is_closed { "yes" } else { "no" },
            self.original.degree()
        )
    }
}

pub fn closure_report<F: Field>(
    t: &CongruencePair<F>,
    h: &FinRep<F>,
    budget: u128,
) -> Result<ClosureReport<F>> {
    let sols = solutions_of(t, h, budget)?;
    let double = kernel_intersection(&sols, t.context(), t.degree())?;
    let is_closed = double.same_spans(t);
    Ok(ClosureReport { original: t.clone(), solutions: sols.len(), double, is_closed })
}

/// Two homomorphisms into a free representation are β-related modulo
/// `T` when corresponding generator images differ by elements of the
/// closure; the ideal/submodule structure propagates this to all
/// elements of the source. Errors with `Indeterminate` when an image
/// difference exceeds the truncation degree.
pub fn beta_related<F: Field>(
    h1: &RepHom<F, FreeRep>,
    h2: &RepHom<F, FreeRep>,
    t: &CongruencePair<F>,
) -> Result<bool> {
    if h1.source() != h2.source() || h1.target() != h2.target() {
        return Err(Error::ContextMismatch(
            "the β relation needs a shared source and a shared target".into(),
        ));
    }
    if h1.target() != t.context() {
        return Err(Error::ContextMismatch(
            "the congruence pair must live in the homomorphisms' target".into(),
        ));
    }
    for &x in h1.source().xs() {
        let delta = h1.x_image(x)?.sub(h2.x_image(x)?)?;
        if !t.contains_lie(&delta)? {
            return Ok(false);
        }
    }
    for &y in h1.source().ys() {
        let delta = h1.y_image(y)?.sub(h2.y_image(y)?)?;
        if !t.contains_module(&delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction of a congruence pair to a nested free context: the
/// degree-wise intersection of the closure spans with the sub-context's
/// slice.
pub fn restrict_congruence<F: Field>(t: &CongruencePair<F>, sub: &FreeRep) -> Result<CongruencePair<F>> {
    if !sub.is_sub_context_of(t.context()) {
        return Err(Error::ContextMismatch(format!(
            "{sub} is not a sub-context of {}",
            t.context()
        )));
    }
    let slice = t.slice();
    let keep_l: Vec<bool> = slice
        .l_words()
        .iter()
        .map(|w| w.letters().iter().all(|x| sub.xs().contains(x)))
        .collect();
    let gens_l: Vec<LieElement<F>> = t
        .l_span
        .intersect_coordinates(&keep_l)
        .iter()
        .map(|row| {
            let terms: Vec<(Word, F)> = slice
                .l_words()
                .iter()
                .zip(row.iter())
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect();
            LieElement::from_terms(sub.xs().to_vec(), terms).expect("kept words use sub-context letters")
        })
        .collect();
    let keep_v: Vec<bool> = slice
        .v_monomials()
        .iter()
        .map(|m| {
            m.word.letters().iter().all(|x| sub.xs().contains(x)) && sub.ys().contains(&m.y)
        })
        .collect();
    let gens_v: Vec<ModuleElement<F>> = t
        .v_span
        .intersect_coordinates(&keep_v)
        .iter()
        .map(|row| {
            let mut out = ModuleElement::zero(sub.xs().to_vec(), sub.ys().to_vec());
            for (m, c) in slice.v_monomials().iter().zip(row.iter()) {
                if !c.is_zero() {
                    let mono =
                        ModuleElement::monomial(sub.xs().to_vec(), sub.ys().to_vec(), m.clone(), c.clone())
                            .expect("kept monomials use sub-context letters");
                    out = out.add(&mono).expect("same context");
                }
            }
            out
        })
        .collect();
    CongruencePair::generated(sub.clone(), gens_l, gens_v, t.degree())
}

/// Extension of a congruence pair to an ambient free context: its
/// closure basis is reinterpreted over the larger alphabets and then
/// saturated there.
pub fn extend_to<F: Field>(t: &CongruencePair<F>, ambient: &FreeRep) -> Result<CongruencePair<F>> {
    if !t.context().is_sub_context_of(ambient) {
        return Err(Error::ContextMismatch(format!(
            "{} is not a sub-context of {ambient}",
            t.context()
        )));
    }
    let gens_l: Vec<LieElement<F>> = t
        .closure_l()
        .iter()
        .map(|e| {
            let terms: Vec<(Word, F)> = e.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
            LieElement::from_terms(ambient.xs().to_vec(), terms)
                .expect("sub-context words remain Lyndon in the ambient alphabet")
        })
        .collect();
    let gens_v: Vec<ModuleElement<F>> = t
        .closure_v()
        .iter()
        .map(|e| {
            let mut out = ModuleElement::zero(ambient.xs().to_vec(), ambient.ys().to_vec());
            for (m, c) in e.terms() {
                let mono =
                    ModuleElement::monomial(ambient.xs().to_vec(), ambient.ys().to_vec(), m.clone(), c.clone())
                        .expect("sub-context monomials embed");
                out = out.add(&mono).expect("same context");
            }
            out
        })
        .collect();
    CongruencePair::generated(ambient.clone(), gens_l, gens_v, t.degree())
}

/// A congruence slice on the merged side: a degree-truncated subspace of
/// the free merged algebra that decomposes along the two sorts.
#[derive(Clone, PartialEq, Debug)]
pub struct PdCongruence<F: Field> {
    context: FreeRep,
    degree: usize,
    span: RowSpace<F>,
}

impl<F: Field> PdCongruence<F> {
    pub fn context(&self) -> &FreeRep {
        &self.context
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    fn slice(&self) -> DegreeSlice {
        DegreeSlice::new(&self.context, self.degree)
    }

    /// Canonical basis, as merged elements.
    pub fn basis_elements(&self) -> Vec<PdElement<F, FreeRep>> {
        let slice = self.slice();
        let l_dim = slice.l_dim();
        self.span
            .basis()
            .iter()
            .map(|row| {
                let l = lie_from_coords(&self.context, &slice, &row[..l_dim]);
                let v = module_from_coords(&self.context, &slice, &row[l_dim..]);
                PdElement::new(self.context.clone(), l, v)
            })
            .collect()
    }

    pub fn contains(&self, e: &PdElement<F, FreeRep>) -> Result<bool> {
        if e.ctx() != &self.context {
            return Err(Error::ContextMismatch("element lives in a different context".into()));
        }
        if e.max_degree() > self.degree {
            return Err(Error::Indeterminate(
                self.degree,
                format!("membership of the degree-{} element {e}", e.max_degree()),
            ));
        }
        let coords = self.slice().pair_coords(e.l_part(), e.v_part())?;
        Ok(self.span.contains(&coords))
    }

    pub fn same_spans(&self, other: &PdCongruence<F>) -> bool {
        self.context == other.context && self.degree == other.degree && self.span == other.span
    }
}

impl<F: Field> fmt::Display for PdCongruence<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "merged congruence slice on the free merge of {}, verified up to degree {}",
            self.context, self.degree
        )?;
        let parts: Vec<String> = self.basis_elements().iter().map(|e| e.to_string()).collect();
        write!(f, "  T = span{{{}}}", parts.join(", "))
    }
}

/// Transports a congruence pair along the merge functor: the two sorts'
/// spans are stacked into one subspace of the free merged algebra. The
/// context must be balanced for the merge to be free.
pub fn transport_f_congruence<F: Field>(t: &CongruencePair<F>) -> Result<PdCongruence<F>> {
    if !t.context().is_balanced() {
        return Err(Error::RankMismatch(format!(
            "merged transport needs equally many generators of each sort, got {}",
            t.context()
        )));
    }
    let slice = t.slice();
    let l_dim = slice.l_dim();
    let v_dim = slice.v_dim();
    let mut span = RowSpace::new(l_dim + v_dim);
    for row in t.l_span.basis() {
        let mut stacked = row.clone();
        stacked.extend(std::iter::repeat_with(F::zero).take(v_dim));
        span.insert(stacked);
    }
    for row in t.v_span.basis() {
        let mut stacked = vec![F::zero(); l_dim];
        stacked.extend(row.iter().cloned());
        span.insert(stacked);
    }
    Ok(PdCongruence { context: t.context().clone(), degree: t.degree(), span })
}

/// Transports a merged congruence slice back: intersect with the two
/// sorts (the projection kernel and image) and rebuild the pair.
pub fn transport_finv_congruence<F: Field>(p: &PdCongruence<F>) -> Result<CongruencePair<F>> {
    let slice = p.slice();
    let l_dim = slice.l_dim();
    let v_dim = slice.v_dim();
    let mut keep_l = vec![true; l_dim];
    keep_l.extend(std::iter::repeat(false).take(v_dim));
    let gens_l: Vec<LieElement<F>> = p
        .span
        .intersect_coordinates(&keep_l)
        .iter()
        .map(|row| lie_from_coords(&p.context, &slice, &row[..l_dim]))
        .collect();
    let keep_v: Vec<bool> = keep_l.iter().map(|k| !k).collect();
    let gens_v: Vec<ModuleElement<F>> = p
        .span
        .intersect_coordinates(&keep_v)
        .iter()
        .map(|row| module_from_coords(&p.context, &slice, &row[l_dim..]))
        .collect();
    CongruencePair::generated(p.context.clone(), gens_l, gens_v, p.degree)
}

/// The β relation on the merged side: generator image differences must
/// lie in the congruence slice.
pub fn pd_beta_related<F: Field>(
    h1: &PdHom<F, FreeRep>,
    h2: &PdHom<F, FreeRep>,
    p: &PdCongruence<F>,
) -> Result<bool> {
    if h1.source() != h2.source() || h1.target() != h2.target() {
        return Err(Error::ContextMismatch(
            "the β relation needs a shared source and a shared target".into(),
        ));
    }
    if h1.target() != &p.context {
        return Err(Error::ContextMismatch(
            "the congruence slice must live in the homomorphisms' target".into(),
        ));
    }
    let images1 = h1.generator_images()?;
    let images2 = h2.generator_images()?;
    for (a, b) in images1.iter().zip(images2.iter()) {
        if !p.contains(&a.sub(b)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every closed pair over the finite model `h`: the kernels of all
/// homomorphisms, saturated under pairwise intersection. (Closed sets
/// are exactly intersections of solution kernels; pairwise saturation
/// reaches every finite intersection.)
pub fn closed_lattice<F: Field>(
    context: &FreeRep,
    h: &FinRep<F>,
    degree: usize,
    budget: u128,
) -> Result<Vec<CongruencePair<F>>> {
    let everything = CongruencePair::zero(context.clone(), degree)?;
    let homs = solutions_of(&everything, h, budget)?;
    let mut lattice: Vec<CongruencePair<F>> = Vec::new();
    for hom in &homs {
        let pair = kernel_intersection(std::slice::from_ref(hom), context, degree)?;
        if !lattice.iter().any(|p| p.same_spans(&pair)) {
            lattice.push(pair);
        }
    }
    loop {
        let mut added = false;
        let current = lattice.clone();
        for (i, a) in current.iter().enumerate() {
            for b in current.iter().skip(i + 1) {
                let meet = intersect_pairs(a, b)?;
                if !lattice.iter().any(|p| p.same_spans(&meet)) {
                    lattice.push(meet);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    lattice.sort_by_key(|p| (p.l_rank(), p.v_rank()));
    Ok(lattice)
}

/// Sort-wise span intersection of two pairs over the same context and
/// degree.
pub fn intersect_pairs<F: Field>(
    a: &CongruencePair<F>,
    b: &CongruencePair<F>,
) -> Result<CongruencePair<F>> {
    if a.context != b.context || a.degree != b.degree {
        return Err(Error::ContextMismatch(
            "intersection needs matching contexts and degrees".into(),
        ));
    }
    let slice = a.slice();
    let gens_l: Vec<LieElement<F>> = span_intersection(&a.l_span, &b.l_span)
        .iter()
        .map(|row| lie_from_coords(&a.context, &slice, row))
        .collect();
    let gens_v: Vec<ModuleElement<F>> = span_intersection(&a.v_span, &b.v_span)
        .iter()
        .map(|row| module_from_coords(&a.context, &slice, row))
        .collect();
    CongruencePair::generated(a.context.clone(), gens_l, gens_v, a.degree)
}

/// Basis of `span(a) ∩ span(b)`: null vectors of `(u, v) ↦ Σuᵢaᵢ − Σvⱼbⱼ`
/// give the common combinations.
fn span_intersection<F: Field>(a: &RowSpace<F>, b: &RowSpace<F>) -> Vec<Vec<F>> {
    let cols = a.cols();
    let mut images: Vec<Vec<F>> = a.basis().to_vec();
    images.extend(b.basis().iter().map(|r| r.iter().map(|c| c.neg()).collect::<Vec<F>>()));
    let mut out = RowSpace::new(cols);
    for null in kernel_basis(&images, cols) {
        let mut combo = vec![F::zero(); cols];
        for (coef, row) in null.iter().take(a.rank()).zip(a.basis()) {
            for (c, r) in combo.iter_mut().zip(row.iter()) {
                *c = c.add(&coef.mul(r));
            }
        }
        out.insert(combo);
    }
    out.basis().to_vec()
}

/// Set equality of two closed-pair lattices (order-insensitive, by span
/// comparison).
pub fn same_lattice<F: Field>(a: &[CongruencePair<F>], b: &[CongruencePair<F>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| p.same_spans(q)))
        && b.iter().all(|q| a.iter().any(|p| p.same_spans(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeassoc::{XGen, YGen};
    use crate::projder::functor_f_hom;
    use crate::scalars::{FpScalar, Scalar};

    type F2 = FpScalar<2>;

    fn w21() -> FreeRep {
        FreeRep::new(vec![XGen(1), XGen(2)], vec![YGen(1)]).unwrap()
    }

    fn w11() -> FreeRep {
        FreeRep::standard(1, 1)
    }

    fn lie_gen(ctx: &FreeRep, i: u32) -> LieElement<Scalar> {
        ctx.lie_generator::<Scalar>(XGen(i)).unwrap()
    }

    #[test]
    fn closure_of_a_single_lie_generator_saturates_by_hand() {
        let ctx = w21();
        let t = CongruencePair::generated(ctx.clone(), vec![lie_gen(&ctx, 1)], vec![], 3).unwrap();
        let x1 = lie_gen(&ctx, 1);
        let x2 = lie_gen(&ctx, 2);
        let b = lie_bracket(&x1, &x2).unwrap();
        assert!(t.contains_lie(&b).unwrap());
        assert!(t.contains_lie(&lie_bracket(&x1, &b).unwrap()).unwrap());
        assert!(t.contains_lie(&lie_bracket(&x2, &b).unwrap()).unwrap());
        let y1 = ctx.module_generator::<Scalar>(YGen(1)).unwrap();
        assert!(t.contains_module(&act(&x1, &y1).unwrap()).unwrap());
        // x2 alone is not swallowed.
        assert!(!t.contains_lie(&x2).unwrap());
        // Hand count at degree 3: the ideal of x1 misses only the pure
        // x2 line in degree 1 and nothing from degree >= 2.
        let slice = DegreeSlice::new(&ctx, 3);
        assert_eq!(t.l_rank(), slice.l_dim() - 1);
        t.check_invariants().unwrap();
    }

    #[test]
    fn closure_of_a_module_generator_is_the_full_cyclic_submodule() {
        let ctx = w11();
        let y1 = ctx.module_generator::<Scalar>(YGen(1)).unwrap();
        let t = CongruencePair::generated(ctx.clone(), vec![], vec![y1], 3).unwrap();
        assert_eq!(t.l_rank(), 0);
        let slice = DegreeSlice::new(&ctx, 3);
        assert_eq!(t.v_rank(), slice.v_dim());
        t.check_invariants().unwrap();
    }

    #[test]
    fn empty_generators_give_the_zero_pair() {
        let t = CongruencePair::<Scalar>::zero(w21(), 3).unwrap();
        assert!(t.is_zero_pair());
        assert_eq!(congruence_close(&t).unwrap().l_rank(), 0);
    }

    #[test]
    fn closing_is_idempotent_on_spans() {
        let ctx = w21();
        let t = CongruencePair::generated(ctx, vec![lie_gen(&w21(), 1)], vec![], 3).unwrap();
        let closed = congruence_close(&t).unwrap();
        assert!(closed.same_spans(&t));
        assert!(congruence_close(&closed).unwrap().same_spans(&t));
    }

    #[test]
    fn oversized_generators_are_refused() {
        let ctx = w21();
        let x1 = lie_gen(&ctx, 1);
        let x2 = lie_gen(&ctx, 2);
        let deep = lie_bracket(&x1, &lie_bracket(&x1, &x2).unwrap()).unwrap();
        let t = CongruencePair::generated(ctx, vec![deep], vec![], 2);
        assert!(matches!(t, Err(Error::Indeterminate(2, _))));
    }

    fn zero_model() -> FinRep<F2> {
        FinRep::zero(1, 1)
    }

    fn acting_model() -> FinRep<F2> {
        // One-dimensional abelian algebra acting by the identity.
        FinRep::new(1, 1, &[], vec![vec![vec![F2::one()]]]).unwrap()
    }

    #[test]
    fn solutions_of_the_trivial_pair_is_the_full_hom_set() {
        let t = CongruencePair::<F2>::zero(w11(), 3).unwrap();
        let sols = solutions_of(&t, &zero_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(sols.len(), 4);
    }

    #[test]
    fn solutions_of_the_full_pair_over_the_acting_model_is_the_zero_hom() {
        let t = CongruencePair::<F2>::full(w11(), 3).unwrap();
        let sols = solutions_of(&t, &acting_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(vec_is_zero(sols[0].x_image(XGen(1)).unwrap()));
        assert!(vec_is_zero(sols[0].y_image(YGen(1)).unwrap()));
    }

    #[test]
    fn budget_is_enforced() {
        let t = CongruencePair::<F2>::zero(w11(), 2).unwrap();
        let err = solutions_of(&t, &zero_model(), 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 4, budget: 3 }));
    }

    #[test]
    fn generator_filter_agrees_with_closure_basis_filter() {
        let ctx = w11();
        let x1 = ctx.lie_generator::<F2>(XGen(1)).unwrap();
        let t = CongruencePair::generated(ctx.clone(), vec![x1], vec![], 3).unwrap();
        let sols = solutions_of(&t, &acting_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        for hom in &sols {
            for g in t.closure_l() {
                assert!(vec_is_zero(&hom.eval_lie(&g).unwrap()));
            }
            for g in t.closure_v() {
                assert!(vec_is_zero(&hom.eval_module(&g).unwrap()));
            }
        }
    }

    #[test]
    fn double_prime_contains_and_is_idempotent() {
        let ctx = w11();
        let y1 = ctx.module_generator::<F2>(YGen(1)).unwrap();
        let t = CongruencePair::generated(ctx, vec![], vec![y1], 3).unwrap();
        let d1 = double_prime(&t, &acting_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(t.is_sub_pair_of(&d1));
        let d2 = double_prime(&d1, &acting_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(d1.same_spans(&d2));
        d1.check_invariants().unwrap();
    }

    #[test]
    fn double_prime_against_the_zero_model_is_everything() {
        let t = CongruencePair::<F2>::zero(w11(), 2).unwrap();
        // Over the zero model every hom kills every element of positive
        // bracket/action degree, but generators can map to the nonzero
        // scalar line; only the 4 homs exist and one of them is injective
        // on generators... the kernels still intersect to the pair killed
        // by all four, which keeps degree >= 2 only.
        let d = double_prime(&t, &zero_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        // Brackets and actions vanish in the zero model, so everything of
        // degree >= 2 is in every kernel; the generators x1, y1 are not.
        let ctx = t.context().clone();
        let x1 = ctx.lie_generator::<F2>(XGen(1)).unwrap();
        assert!(!d.contains_lie(&x1).unwrap());
        let y1 = ctx.module_generator::<F2>(YGen(1)).unwrap();
        let x1y1 = act(&x1, &y1).unwrap();
        assert!(d.contains_module(&x1y1).unwrap());
    }

    #[test]
    fn closure_report_marks_closed_pairs() {
        let ctx = w11();
        let t = CongruencePair::<F2>::zero(ctx, 2).unwrap();
        let report = closure_report(&t, &acting_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(report.solutions, 4);
        let rendered = report.to_string();
        assert!(rendered.contains("finite-model oracle"), "{rendered}");
        assert!(rendered.contains("verified up to degree 2"), "{rendered}");
        // The zero pair is closed over the faithful acting model iff the
        // kernels of all four homs intersect to zero; report says which.
        assert_eq!(report.is_closed, report.double.same_spans(&t));
    }

    #[test]
    fn beta_relation_reflexive_full_and_trivial_cases() {
        let ctx = w11();
        let target = w11();
        let x1 = lie_gen(&target, 1);
        let y1 = target.module_generator::<Scalar>(YGen(1)).unwrap();
        let h1 = RepHom::new(ctx.clone(), target.clone(), vec![x1.clone()], vec![y1.clone()]).unwrap();
        let h2 = RepHom::new(
            ctx.clone(),
            target.clone(),
            vec![x1.scale(&Scalar::from_int(2))],
            vec![y1.clone()],
        )
        .unwrap();
        let zero = CongruencePair::<Scalar>::zero(target.clone(), 3).unwrap();
        assert!(beta_related(&h1, &h1, &zero).unwrap());
        assert!(!beta_related(&h1, &h2, &zero).unwrap());
        let full = CongruencePair::<Scalar>::full(target.clone(), 3).unwrap();
        assert!(beta_related(&h1, &h2, &full).unwrap());
    }

    #[test]
    fn beta_generator_check_agrees_with_spanning_check() {
        // T generated by x1; two homs differing by multiples of x1 and
        // by x1-action terms are related, and then every degree-<=d
        // basis element's images differ by closure members.
        let ctx = w11();
        let target = w21();
        let t = CongruencePair::generated(target.clone(), vec![lie_gen(&target, 1)], vec![], 3).unwrap();
        let x2 = lie_gen(&target, 2);
        let mixed = x2.add(&lie_gen(&target, 1)).unwrap();
        let y1 = target.module_generator::<Scalar>(YGen(1)).unwrap();
        let h1 = RepHom::new(ctx.clone(), target.clone(), vec![x2.clone()], vec![y1.clone()]).unwrap();
        let h2 = RepHom::new(ctx.clone(), target.clone(), vec![mixed], vec![y1.clone()]).unwrap();
        assert!(beta_related(&h1, &h2, &t).unwrap());
        let slice = DegreeSlice::new(&ctx, 3);
        for e in slice.l_basis_elements::<Scalar>() {
            let delta = h1.eval_lie(&e).unwrap().sub(&h2.eval_lie(&e).unwrap()).unwrap();
            assert!(t.contains_lie(&delta.truncate(3)).unwrap() || delta.degree().unwrap_or(0) > 3);
        }
        for e in slice.v_basis_elements::<Scalar>() {
            let delta = h1.eval_module(&e).unwrap().sub(&h2.eval_module(&e).unwrap()).unwrap();
            assert!(t.contains_module(&delta.truncate(3)).unwrap() || delta.degree().unwrap_or(0) > 3);
        }
    }

    #[test]
    fn restriction_of_the_x2_ideal_to_the_x1_line_is_zero() {
        let ambient = FreeRep::new(vec![XGen(1), XGen(2)], vec![]).unwrap();
        let sub = FreeRep::new(vec![XGen(1)], vec![]).unwrap();
        let t = CongruencePair::generated(ambient.clone(), vec![lie_gen(&ambient, 2)], vec![], 3).unwrap();
        let r = restrict_congruence(&t, &sub).unwrap();
        assert!(r.is_zero_pair());
        let full = CongruencePair::<Scalar>::full(ambient, 3).unwrap();
        let r_full = restrict_congruence(&full, &sub).unwrap();
        assert!(r_full.is_full());
    }

    #[test]
    fn restriction_needs_nesting() {
        let t = CongruencePair::<Scalar>::zero(w11(), 2).unwrap();
        let other = FreeRep::new(vec![XGen(5)], vec![YGen(5)]).unwrap();
        assert!(matches!(restrict_congruence(&t, &other), Err(Error::ContextMismatch(_))));
    }

    #[test]
    fn extension_then_restriction_returns_the_closed_pair() {
        let sub = w11();
        let ambient = FreeRep::standard(2, 2);
        let y1 = sub.module_generator::<F2>(YGen(1)).unwrap();
        let t = CongruencePair::generated(sub.clone(), vec![], vec![y1], 2).unwrap();
        let extended = extend_to(&t, &ambient).unwrap();
        // The extension saturates with the ambient letters too.
        assert!(extended.v_rank() >= t.v_rank());
        let back = restrict_congruence(&extended, &sub).unwrap();
        assert!(t.is_sub_pair_of(&back));
    }

    #[test]
    fn transport_round_trip_is_the_identity_on_spans() {
        let ctx = FreeRep::standard(2, 2);
        let t =
            CongruencePair::generated(ctx.clone(), vec![lie_gen(&ctx, 1)], vec![], 3).unwrap();
        let merged = transport_f_congruence(&t).unwrap();
        assert_eq!(merged.rank(), t.l_rank() + t.v_rank());
        let back = transport_finv_congruence(&merged).unwrap();
        assert!(back.same_spans(&t));

        let zero = CongruencePair::<Scalar>::zero(ctx, 2).unwrap();
        let merged_zero = transport_f_congruence(&zero).unwrap();
        assert_eq!(merged_zero.rank(), 0);
        assert!(transport_finv_congruence(&merged_zero).unwrap().same_spans(&zero));
    }

    #[test]
    fn transport_requires_a_balanced_context() {
        let t = CongruencePair::<Scalar>::zero(w21(), 2).unwrap();
        assert!(matches!(transport_f_congruence(&t), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn beta_is_invariant_under_merging() {
        let ctx = w11();
        let target = w11();
        let x1 = lie_gen(&target, 1);
        let y1 = target.module_generator::<Scalar>(YGen(1)).unwrap();
        let x1y1 = act(&x1, &y1).unwrap();
        let t = CongruencePair::generated(target.clone(), vec![], vec![x1y1.clone()], 3).unwrap();
        let h1 = RepHom::new(ctx.clone(), target.clone(), vec![x1.clone()], vec![y1.clone()]).unwrap();
        let h2 = RepHom::new(
            ctx.clone(),
            target.clone(),
            vec![x1.clone()],
            vec![y1.add(&x1y1).unwrap()],
        )
        .unwrap();
        let related = beta_related(&h1, &h2, &t).unwrap();
        assert!(related);
        let merged_t = transport_f_congruence(&t).unwrap();
        let m1 = functor_f_hom(&h1).unwrap();
        let m2 = functor_f_hom(&h2).unwrap();
        assert_eq!(pd_beta_related(&m1, &m2, &merged_t).unwrap(), related);

        let zero = CongruencePair::<Scalar>::zero(target.clone(), 3).unwrap();
        assert!(!beta_related(&h1, &h2, &zero).unwrap());
        assert!(!pd_beta_related(&m1, &m2, &transport_f_congruence(&zero).unwrap()).unwrap());
    }

    #[test]
    fn lattice_over_the_acting_model_is_intersection_closed() {
        let ctx = w11();
        let lattice = closed_lattice(&ctx, &acting_model(), 2, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(!lattice.is_empty());
        // The full pair (kernel of the zero hom) is always present.
        assert!(lattice.iter().any(|p| p.is_full()));
        for a in &lattice {
            a.check_invariants().unwrap();
            for b in &lattice {
                let meet = intersect_pairs(a, b).unwrap();
                assert!(lattice.iter().any(|p| p.same_spans(&meet)));
            }
        }
        assert!(same_lattice(&lattice, &lattice));
    }

    #[test]
    fn kernel_pairs_satisfy_the_congruence_invariants() {
        let ctx = w11();
        let everything = CongruencePair::<F2>::zero(ctx.clone(), 3).unwrap();
        let homs = solutions_of(&everything, &acting_model(), DEFAULT_ENUMERATION_BUDGET).unwrap();
        for hom in &homs {
            let pair = kernel_intersection(std::slice::from_ref(hom), &ctx, 3).unwrap();
            pair.check_invariants().unwrap();
            // Saturation must not grow a kernel pair: kernels are closed.
            let closed = congruence_close(&pair).unwrap();
            assert!(closed.same_spans(&pair));
        }
    }
}
