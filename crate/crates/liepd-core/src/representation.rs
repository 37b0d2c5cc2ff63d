//! 2-sorted representations of Lie algebras: a Lie algebra `L` together
//! with a module `V` over the free unital associative algebra and an
//! action of `L` on `V`.
//!
//! Two kinds of objects are implemented behind one [`Representation`]
//! trait: the free representation `W(X, Y) = (L(X), A(X)Y)` and finite
//! dimensional models given by structure constants. Homomorphisms are
//! pairs `(phi, psi)` with `phi(l) . psi(v) = psi(l . v)`; a [`RepHom`]
//! stores generator images and evaluates everywhere by freeness.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::freeassoc::{module_mul, ModTerm, ModuleElement, Word, XGen, YGen};
use crate::freelie::{embed_assoc, lie_bracket, BracketTree, LieElement};
use crate::linalg::{mat_mul, mat_sub, mat_vec, vec_add, vec_is_zero, vec_scale, RowSpace};
use crate::scalars::Field;
use crate::slices::DegreeSlice;

/// A free representation context `W(X, Y)`: an ordered alphabet of Lie
/// generators and an ordered alphabet of module generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FreeRep {
    xs: Vec<XGen>,
    ys: Vec<YGen>,
}

impl FreeRep {
    /// Builds a context; the alphabets are sorted and must be duplicate
    /// free. Either side may be empty.
    pub fn new(mut xs: Vec<XGen>, mut ys: Vec<YGen>) -> Result<Self> {
        xs.sort();
        ys.sort();
        if xs.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Validation("duplicate x generator".into()));
        }
        if ys.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Validation("duplicate y generator".into()));
        }
        Ok(FreeRep { xs, ys })
    }

    /// The context `W({x1..xn}, {y1..yn})` used for standard constructions.
    pub fn standard(nx: u32, ny: u32) -> Self {
        FreeRep {
            xs: (1..=nx).map(XGen).collect(),
            ys: (1..=ny).map(YGen).collect(),
        }
    }

    pub fn xs(&self) -> &[XGen] {
        &self.xs
    }

    pub fn ys(&self) -> &[YGen] {
        &self.ys
    }

    /// `true` when both sorts have the same number of generators, the
    /// condition under which the splitting functor produces a free object.
    pub fn is_balanced(&self) -> bool {
        self.xs.len() == self.ys.len()
    }

    pub fn x_position(&self, x: XGen) -> Option<usize> {
        self.xs.iter().position(|&g| g == x)
    }

    pub fn y_position(&self, y: YGen) -> Option<usize> {
        self.ys.iter().position(|&g| g == y)
    }

    pub fn lie_generator<F: Field>(&self, x: XGen) -> Result<LieElement<F>> {
        LieElement::generator(self.xs.clone(), x)
    }

    pub fn module_generator<F: Field>(&self, y: YGen) -> Result<ModuleElement<F>> {
        ModuleElement::generator(self.xs.clone(), self.ys.clone(), y)
    }

    /// `true` when every generator of `self` appears in `other`.
    pub fn is_sub_context_of(&self, other: &FreeRep) -> bool {
        self.xs.iter().all(|x| other.xs.contains(x)) && self.ys.iter().all(|y| other.ys.contains(y))
    }
}

impl fmt::Display for FreeRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.xs.iter().map(|x| x.to_string()).collect();
        let ys: Vec<String> = self.ys.iter().map(|y| y.to_string()).collect();
        write!(f, "W({}; {})", xs.join(","), ys.join(","))
    }
}

/// An element of either sort of a representation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RepElement<F: Field> {
    Lie(LieElement<F>),
    Module(ModuleElement<F>),
}

impl<F: Field> fmt::Display for RepElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepElement::Lie(l) => write!(f, "{l}"),
            RepElement::Module(v) => write!(f, "{v}"),
        }
    }
}

/// The action of the free Lie algebra on the free module, through the
/// associative embedding.
pub fn act<F: Field>(l: &LieElement<F>, v: &ModuleElement<F>) -> Result<ModuleElement<F>> {
    module_mul(&embed_assoc(l)?, v)
}

/// The operations a 2-sorted representation exposes. Algorithms that work
/// for any target (hom evaluation, the projection-derivation layer, the
/// word calculus) are written against this trait.
pub trait Representation<F: Field>: Clone + PartialEq + fmt::Debug {
    type L: Clone + PartialEq + Eq + fmt::Debug;
    type V: Clone + PartialEq + Eq + fmt::Debug;

    fn l_zero(&self) -> Self::L;
    fn v_zero(&self) -> Self::V;
    fn l_add(&self, a: &Self::L, b: &Self::L) -> Result<Self::L>;
    fn v_add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn l_scale(&self, c: &F, a: &Self::L) -> Self::L;
    fn v_scale(&self, c: &F, a: &Self::V) -> Self::V;
    fn bracket(&self, a: &Self::L, b: &Self::L) -> Result<Self::L>;
    fn action(&self, l: &Self::L, v: &Self::V) -> Result<Self::V>;

    fn l_sub(&self, a: &Self::L, b: &Self::L) -> Result<Self::L> {
        self.l_add(a, &self.l_scale(&F::one().neg(), b))
    }

    fn v_sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V> {
        self.v_add(a, &self.v_scale(&F::one().neg(), b))
    }
}

impl<F: Field> Representation<F> for FreeRep {
    type L = LieElement<F>;
    type V = ModuleElement<F>;

    fn l_zero(&self) -> Self::L {
        LieElement::zero(self.xs.clone())
    }

    fn v_zero(&self) -> Self::V {
        ModuleElement::zero(self.xs.clone(), self.ys.clone())
    }

    fn l_add(&self, a: &Self::L, b: &Self::L) -> Result<Self::L> {
        a.add(b)
    }

    fn v_add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V> {
        a.add(b)
    }

    fn l_scale(&self, c: &F, a: &Self::L) -> Self::L {
        a.scale(c)
    }

    fn v_scale(&self, c: &F, a: &Self::V) -> Self::V {
        a.scale(c)
    }

    fn bracket(&self, a: &Self::L, b: &Self::L) -> Result<Self::L> {
        lie_bracket(a, b)
    }

    fn action(&self, l: &Self::L, v: &Self::V) -> Result<Self::V> {
        act(l, v)
    }
}

/// A finite-dimensional representation: an `n`-dimensional Lie algebra
/// given by structure constants and an `m`-dimensional module given by
/// one action matrix per Lie basis vector. All defining identities are
/// validated eagerly at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinRep<F: Field> {
    n: usize,
    m: usize,
    /// `c[(i*n + j)*n + k]` is the coefficient of `e_k` in `[e_i, e_j]`.
    c: Vec<F>,
    /// `act[i]` is the `m x m` matrix of `e_i` acting on the module.
    act: Vec<Vec<Vec<F>>>,
}

impl<F: Field> FinRep<F> {
    /// Builds and validates a finite representation from sparse structure
    /// constants `(i, j, k, coeff)` (0-based) and explicit action
    /// matrices.
    pub fn new(n: usize, m: usize, entries: &[(usize, usize, usize, F)], act: Vec<Vec<Vec<F>>>) -> Result<Self> {
        let mut c = vec![F::zero(); n * n * n];
        for (i, j, k, coeff) in entries {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Validation(format!(
                    "structure constant index ({i},{j},{k}) out of range for dimension {n}"
                )));
            }
            c[(i * n + j) * n + k] = c[(i * n + j) * n + k].add(coeff);
        }
        if act.len() != n {
            return Err(Error::Validation(format!(
                "expected {n} action matrices, got {}",
                act.len()
            )));
        }
        for (i, a) in act.iter().enumerate() {
            if a.len() != m || a.iter().any(|row| row.len() != m) {
                return Err(Error::Validation(format!("action matrix {i} is not {m} x {m}")));
            }
        }
        let rep = FinRep { n, m, c, act };
        rep.validate()?;
        Ok(rep)
    }

    /// The `n`- and `m`-dimensional zero representation; `n = m = 0` is
    /// the terminal object with exactly one incoming homomorphism.
    pub fn zero(n: usize, m: usize) -> Self {
        FinRep {
            n,
            m,
            c: vec![F::zero(); n * n * n],
            act: vec![vec![vec![F::zero(); m]; m]; n],
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        // The bracket must be alternating, not merely antisymmetric —
        // over a field of characteristic 2 the two differ.
        for i in 0..n {
            for k in 0..n {
                if !self.c[(i * n + i) * n + k].is_zero() {
                    return Err(Error::Validation(format!(
                        "structure constants are not alternating at ({i},{i},{k})"
                    )));
                }
            }
        }
        // Antisymmetry of the bracket on basis vectors.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = &self.c[(i * n + j) * n + k];
                    let rhs = self.c[(j * n + i) * n + k].neg();
                    if *lhs != rhs {
                        return Err(Error::Validation(format!(
                            "structure constants are not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // Jacobi on basis triples.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ei = self.basis_l(i);
                    let ej = self.basis_l(j);
                    let ek = self.basis_l(k);
                    let mut total = vec![F::zero(); n];
                    for (a, b, cv) in [(&ei, &ej, &ek), (&ej, &ek, &ei), (&ek, &ei, &ej)] {
                        let inner = self.bracket_vec(a, b);
                        total = vec_add(&total, &self.bracket_vec(&inner, cv));
                    }
                    if !vec_is_zero(&total) {
                        return Err(Error::Validation(format!(
                            "Jacobi identity fails on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // The action must represent the bracket: act([e_i, e_j]) equals
        // the commutator of the action matrices.
        for i in 0..n {
            for j in 0..n {
                let mut lhs = vec![vec![F::zero(); self.m]; self.m];
                for k in 0..n {
                    let coeff = &self.c[(i * n + j) * n + k];
                    if !coeff.is_zero() {
                        for (r, row) in self.act[k].iter().enumerate() {
                            for (s, v) in row.iter().enumerate() {
                                lhs[r][s] = lhs[r][s].add(&v.mul(coeff));
                            }
                        }
                    }
                }
                let commutator = mat_sub(&mat_mul(&self.act[i], &self.act[j]), &mat_mul(&self.act[j], &self.act[i]));
                if lhs != commutator {
                    return Err(Error::Validation(format!(
                        "action does not represent the bracket of basis vectors ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn lie_dim(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &F {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn action_matrix(&self, i: usize) -> &Vec<Vec<F>> {
        &self.act[i]
    }

    pub fn basis_l(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.n];
        v[i] = F::one();
        v
    }

    pub fn basis_v(&self, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); self.m];
        v[i] = F::one();
        v
    }

    pub fn bracket_vec(&self, a: &[F], b: &[F]) -> Vec<F> {
        let n = self.n;
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

    pub fn act_vec(&self, l: &[F], v: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.m];
        for (i, li) in l.iter().enumerate() {
            if li.is_zero() {
                continue;
            }
            out = vec_add(&out, &vec_scale(li, &mat_vec(&self.act[i], v)));
        }
        out
    }
}

impl<F: Field> Representation<F> for FinRep<F> {
    type L = Vec<F>;
    type V = Vec<F>;

    fn l_zero(&self) -> Self::L {
        vec![F::zero(); self.n]
    }

    fn v_zero(&self) -> Self::V {
        vec![F::zero(); self.m]
    }

    fn l_add(&self, a: &Self::L, b: &Self::L) -> Result<Self::L> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::ContextMismatch("Lie coordinate length mismatch".into()));
        }
        Ok(vec_add(a, b))
    }

    fn v_add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V> {
        if a.len() != self.m || b.len() != self.m {
            return Err(Error::ContextMismatch("module coordinate length mismatch".into()));
        }
        Ok(vec_add(a, b))
    }

    fn l_scale(&self, c: &F, a: &Self::L) -> Self::L {
        vec_scale(c, a)
    }

    fn v_scale(&self, c: &F, a: &Self::V) -> Self::V {
        vec_scale(c, a)
    }

    fn bracket(&self, a: &Self::L, b: &Self::L) -> Result<Self::L> {
        if a.len() != self.n || b.len() != self.n {
            return Err(Error::ContextMismatch("Lie coordinate length mismatch".into()));
        }
        Ok(self.bracket_vec(a, b))
    }

    fn action(&self, l: &Self::L, v: &Self::V) -> Result<Self::V> {
        if l.len() != self.n || v.len() != self.m {
            return Err(Error::ContextMismatch("coordinate length mismatch".into()));
        }
        Ok(self.act_vec(l, v))
    }
}

/// A homomorphism pair out of a free representation, stored by generator
/// images and evaluated everywhere by the universal property.
#[derive(Clone, PartialEq, Debug)]
pub struct RepHom<F: Field, T: Representation<F>> {
    source: FreeRep,
    target: T,
    phi: Vec<T::L>,
    psi: Vec<T::V>,
}

impl<F: Field, T: Representation<F>> RepHom<F, T> {
    pub fn new(source: FreeRep, target: T, phi: Vec<T::L>, psi: Vec<T::V>) -> Result<Self> {
        if phi.len() != source.xs().len() {
            return Err(Error::ArityMismatch { expected: source.xs().len(), got: phi.len() });
        }
        if psi.len() != source.ys().len() {
            return Err(Error::ArityMismatch { expected: source.ys().len(), got: psi.len() });
        }
        Ok(RepHom { source, target, phi, psi })
    }

    pub fn source(&self) -> &FreeRep {
        &self.source
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn phi_images(&self) -> &[T::L] {
        &self.phi
    }

    pub fn psi_images(&self) -> &[T::V] {
        &self.psi
    }

    pub fn x_image(&self, x: XGen) -> Result<&T::L> {
        let pos = self
            .source
            .x_position(x)
            .ok_or_else(|| Error::ContextMismatch(format!("{x} is not a generator of {}", self.source)))?;
        Ok(&self.phi[pos])
    }

    pub fn y_image(&self, y: YGen) -> Result<&T::V> {
        let pos = self
            .source
            .y_position(y)
            .ok_or_else(|| Error::ContextMismatch(format!("{y} is not a generator of {}", self.source)))?;
        Ok(&self.psi[pos])
    }

    fn eval_tree(&self, tree: &BracketTree) -> Result<T::L> {
        match tree {
            BracketTree::Leaf(x) => Ok(self.x_image(*x)?.clone()),
            BracketTree::Node(l, r) => {
                let a = self.eval_tree(l)?;
                let b = self.eval_tree(r)?;
                self.target.bracket(&a, &b)
            }
        }
    }

    /// Image of a Lie-sort element.
    pub fn eval_lie(&self, e: &LieElement<F>) -> Result<T::L> {
        if e.alphabet() != self.source.xs() {
            return Err(Error::ContextMismatch(format!(
                "element context does not match the source {}",
                self.source
            )));
        }
        let mut out = self.target.l_zero();
        for (w, c) in e.terms() {
            let tree = crate::freelie::standard_bracketing(w)?;
            let val = self.eval_tree(&tree)?;
            out = self.target.l_add(&out, &self.target.l_scale(c, &val))?;
        }
        Ok(out)
    }

    /// Image of a module-sort element: a monomial `x_{i1}…x_{is} y` maps
    /// to the nested action of the letter images on the image of `y`.
    pub fn eval_module(&self, e: &ModuleElement<F>) -> Result<T::V> {
        if e.x_alphabet() != self.source.xs() || e.y_alphabet() != self.source.ys() {
            return Err(Error::ContextMismatch(format!(
                "element context does not match the source {}",
                self.source
            )));
        }
        let mut out = self.target.v_zero();
        for (t, c) in e.terms() {
            let mut val = self.y_image(t.y)?.clone();
            for &x in t.word.letters().iter().rev() {
                val = self.target.action(self.x_image(x)?, &val)?;
            }
            out = self.target.v_add(&out, &self.target.v_scale(c, &val))?;
        }
        Ok(out)
    }

    pub fn eval(&self, e: &RepElement<F>) -> Result<TargetElement<F, T>> {
        Ok(match e {
            RepElement::Lie(l) => TargetElement::Lie(self.eval_lie(l)?),
            RepElement::Module(v) => TargetElement::Module(self.eval_module(v)?),
        })
    }
}

impl<F: Field> RepHom<F, FreeRep> {
    pub fn identity(rep: &FreeRep) -> Self {
        let phi = rep
            .xs()
            .iter()
            .map(|&x| rep.lie_generator::<F>(x).expect("generator in context"))
            .collect();
        let psi = rep
            .ys()
            .iter()
            .map(|&y| rep.module_generator::<F>(y).expect("generator in context"))
            .collect();
        RepHom { source: rep.clone(), target: rep.clone(), phi, psi }
    }
}

/// `second . first`, defined when `first` lands in the free source of
/// `second`.
pub fn compose<F: Field, T: Representation<F>>(
    second: &RepHom<F, T>,
    first: &RepHom<F, FreeRep>,
) -> Result<RepHom<F, T>> {
    if first.target() != second.source() {
        return Err(Error::ContextMismatch(format!(
            "composition mismatch: {} vs {}",
            first.target(),
            second.source()
        )));
    }
    let phi = first.phi_images().iter().map(|l| second.eval_lie(l)).collect::<Result<Vec<_>>>()?;
    let psi = first.psi_images().iter().map(|v| second.eval_module(v)).collect::<Result<Vec<_>>>()?;
    RepHom::new(first.source().clone(), second.target().clone(), phi, psi)
}

/// A value of either sort in a representation `T`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TargetElement<F: Field, T: Representation<F>> {
    Lie(T::L),
    Module(T::V),
}

/// Anything that maps both sorts of a free representation into a target
/// linearly. [`RepHom`] gives the free extension; [`BasisMapPair`] allows
/// arbitrary (possibly non-homomorphic) tables for testing the checker.
pub trait PairMap<F: Field, T: Representation<F>> {
    fn pair_source(&self) -> &FreeRep;
    fn pair_target(&self) -> &T;
    fn map_lie(&self, e: &LieElement<F>) -> Result<T::L>;
    fn map_module(&self, e: &ModuleElement<F>) -> Result<T::V>;
}

impl<F: Field, T: Representation<F>> PairMap<F, T> for RepHom<F, T> {
    fn pair_source(&self) -> &FreeRep {
        &self.source
    }

    fn pair_target(&self) -> &T {
        &self.target
    }

    fn map_lie(&self, e: &LieElement<F>) -> Result<T::L> {
        self.eval_lie(e)
    }

    fn map_module(&self, e: &ModuleElement<F>) -> Result<T::V> {
        self.eval_module(e)
    }
}

/// A linear pair given by explicit images of the basis up to a degree
/// bound. It need not be a homomorphism; `hom_check` exists to find out.
#[derive(Clone, Debug)]
pub struct BasisMapPair<F: Field, T: Representation<F>> {
    source: FreeRep,
    target: T,
    degree: usize,
    l_images: HashMap<Word, T::L>,
    v_images: HashMap<ModTerm, T::V>,
}

impl<F: Field, T: Representation<F>> BasisMapPair<F, T> {
    /// Tabulates an existing pair map on the basis up to `degree`.
    pub fn tabulate<P: PairMap<F, T>>(p: &P, degree: usize) -> Result<Self> {
        let source = p.pair_source().clone();
        let slice = DegreeSlice::new(&source, degree);
        let mut l_images = HashMap::new();
        for (w, e) in slice.l_words().iter().zip(slice.l_basis_elements::<F>()) {
            l_images.insert(w.clone(), p.map_lie(&e)?);
        }
        let mut v_images = HashMap::new();
        for (t, e) in slice.v_monomials().iter().zip(slice.v_basis_elements::<F>()) {
            v_images.insert(t.clone(), p.map_module(&e)?);
        }
        Ok(BasisMapPair { source, target: p.pair_target().clone(), degree, l_images, v_images })
    }

    /// Overrides the image of one module basis monomial.
    pub fn override_module_image(&mut self, t: ModTerm, image: T::V) {
        self.v_images.insert(t, image);
    }

    /// Overrides the image of one Lie basis word.
    pub fn override_lie_image(&mut self, w: Word, image: T::L) {
        self.l_images.insert(w, image);
    }
}

impl<F: Field, T: Representation<F>> PairMap<F, T> for BasisMapPair<F, T> {
    fn pair_source(&self) -> &FreeRep {
        &self.source
    }

    fn pair_target(&self) -> &T {
        &self.target
    }

    fn map_lie(&self, e: &LieElement<F>) -> Result<T::L> {
        let mut out = self.target.l_zero();
        for (w, c) in e.terms() {
            let img = self.l_images.get(w).ok_or_else(|| {
                Error::Indeterminate(self.degree, format!("no tabulated image for {w}"))
            })?;
            out = self.target.l_add(&out, &self.target.l_scale(c, img))?;
        }
        Ok(out)
    }

    fn map_module(&self, e: &ModuleElement<F>) -> Result<T::V> {
        let mut out = self.target.v_zero();
        for (t, c) in e.terms() {
            let img = self.v_images.get(t).ok_or_else(|| {
                Error::Indeterminate(self.degree, format!("no tabulated image for {t}"))
            })?;
            out = self.target.v_add(&out, &self.target.v_scale(c, img))?;
        }
        Ok(out)
    }
}

/// Outcome of checking the compatibility identity
/// `phi(l) . psi(v) = psi(l . v)` on basis pairs up to a total degree.
#[derive(Clone, Debug)]
pub struct HomCheckReport {
    pub degree: usize,
    pub checked_pairs: usize,
    /// Printed `(l, v)` witnesses for every violated pair.
    pub violations: Vec<(String, String)>,
}

impl HomCheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for HomCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "ok: {} basis pairs up to total degree {}", self.checked_pairs, self.degree)
        } else {
            writeln!(f, "FAIL: {} violations up to total degree {}", self.violations.len(), self.degree)?;
            for (l, v) in &self.violations {
                writeln!(f, "  ({l}, {v})")?;
            }
            Ok(())
        }
    }
}

/// Verifies the homomorphism identity on all basis pairs with
/// `deg(l) + deg(v) <= d`.
pub fn hom_check<F: Field, T: Representation<F>, P: PairMap<F, T>>(p: &P, d: usize) -> Result<HomCheckReport> {
    let source = p.pair_source().clone();
    let slice = DegreeSlice::new(&source, d);
    let target = p.pair_target().clone();
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let l_basis = slice.l_basis_elements::<F>();
    let v_basis = slice.v_basis_elements::<F>();
    for (lw, le) in slice.l_words().iter().zip(l_basis.iter()) {
        for (vt, ve) in slice.v_monomials().iter().zip(v_basis.iter()) {
            if lw.len() + vt.degree() > d {
                continue;
            }
            checked += 1;
            let lhs = target.action(&p.map_lie(le)?, &p.map_module(ve)?)?;
            let rhs = p.map_module(&act(le, ve)?)?;
            if lhs != rhs {
                violations.push((le.to_string(), ve.to_string()));
            }
        }
    }
    Ok(HomCheckReport { degree: d, checked_pairs: checked, violations })
}

/// A coproduct of two free representations: the union context after
/// renaming the second factor's clashing generators to fresh indices,
/// with the two injections and enough bookkeeping to build mediating
/// homomorphisms.
#[derive(Clone, Debug)]
pub struct Coproduct<F: Field> {
    pub rep: FreeRep,
    pub inj1: RepHom<F, FreeRep>,
    pub inj2: RepHom<F, FreeRep>,
    /// Position in `rep.xs()` of each generator of the first factor.
    x_from1: Vec<usize>,
    x_from2: Vec<usize>,
    y_from1: Vec<usize>,
    y_from2: Vec<usize>,
}

/// Builds the coproduct `W(X1, Y1) ⊔ W(X2, Y2) = W(X3, Y3)` with
/// `|X3| = |X1| + |X2|` and `|Y3| = |Y1| + |Y2|`. Generators of the
/// second factor that clash with the first are renamed to fresh pool
/// indices past every index in use.
pub fn coproduct<F: Field>(w1: &FreeRep, w2: &FreeRep) -> Result<Coproduct<F>> {
    let mut next_x = w1
        .xs()
        .iter()
        .chain(w2.xs().iter())
        .map(|x| x.0)
        .max()
        .unwrap_or(0)
        + 1;
    let mut next_y = w1
        .ys()
        .iter()
        .chain(w2.ys().iter())
        .map(|y| y.0)
        .max()
        .unwrap_or(0)
        + 1;
    let mut xs = w1.xs().to_vec();
    let mut renamed_x = Vec::new();
    for &x in w2.xs() {
        let fresh = if xs.contains(&x) {
            let f = XGen(next_x);
            next_x += 1;
            f
        } else {
            x
        };
        xs.push(fresh);
        renamed_x.push(fresh);
    }
    let mut ys = w1.ys().to_vec();
    let mut renamed_y = Vec::new();
    for &y in w2.ys() {
        let fresh = if ys.contains(&y) {
            let f = YGen(next_y);
            next_y += 1;
            f
        } else {
            y
        };
        ys.push(fresh);
        renamed_y.push(fresh);
    }
    let rep = FreeRep::new(xs, ys)?;
    let x_from1: Vec<usize> = w1.xs().iter().map(|&x| rep.x_position(x).expect("kept")).collect();
    let y_from1: Vec<usize> = w1.ys().iter().map(|&y| rep.y_position(y).expect("kept")).collect();
    let x_from2: Vec<usize> = renamed_x.iter().map(|&x| rep.x_position(x).expect("inserted")).collect();
    let y_from2: Vec<usize> = renamed_y.iter().map(|&y| rep.y_position(y).expect("inserted")).collect();

    let inj = |src: &FreeRep, x_map: &[usize], y_map: &[usize]| -> Result<RepHom<F, FreeRep>> {
        let phi = x_map
            .iter()
            .map(|&i| rep.lie_generator::<F>(rep.xs()[i]))
            .collect::<Result<Vec<_>>>()?;
        let psi = y_map
            .iter()
            .map(|&i| rep.module_generator::<F>(rep.ys()[i]))
            .collect::<Result<Vec<_>>>()?;
        RepHom::new(src.clone(), rep.clone(), phi, psi)
    };
    let inj1 = inj(w1, &x_from1, &y_from1)?;
    let inj2 = inj(w2, &x_from2, &y_from2)?;
    Ok(Coproduct { rep, inj1, inj2, x_from1, x_from2, y_from1, y_from2 })
}

/// The unique homomorphism out of the coproduct restricting to `a1` and
/// `a2` along the injections.
pub fn mediating_hom<F: Field, T: Representation<F>>(
    cop: &Coproduct<F>,
    a1: &RepHom<F, T>,
    a2: &RepHom<F, T>,
) -> Result<RepHom<F, T>> {
    if a1.source() != cop.inj1.source() || a2.source() != cop.inj2.source() {
        return Err(Error::ContextMismatch("mediator factors must start at the coproduct factors".into()));
    }
    if a1.target() != a2.target() {
        return Err(Error::ContextMismatch("mediator factors must share a target".into()));
    }
    let mut phi: Vec<Option<T::L>> = vec![None; cop.rep.xs().len()];
    let mut psi: Vec<Option<T::V>> = vec![None; cop.rep.ys().len()];
    for (src_pos, &dst_pos) in cop.x_from1.iter().enumerate() {
        phi[dst_pos] = Some(a1.phi_images()[src_pos].clone());
    }
    for (src_pos, &dst_pos) in cop.x_from2.iter().enumerate() {
        phi[dst_pos] = Some(a2.phi_images()[src_pos].clone());
    }
    for (src_pos, &dst_pos) in cop.y_from1.iter().enumerate() {
        psi[dst_pos] = Some(a1.psi_images()[src_pos].clone());
    }
    for (src_pos, &dst_pos) in cop.y_from2.iter().enumerate() {
        psi[dst_pos] = Some(a2.psi_images()[src_pos].clone());
    }
    RepHom::new(
        cop.rep.clone(),
        a1.target().clone(),
        phi.into_iter().map(|o| o.expect("every generator originates in a factor")).collect(),
        psi.into_iter().map(|o| o.expect("every generator originates in a factor")).collect(),
    )
}

/// The pair `(dim L/[L,L], dim V/<X>V)` of a free context, computed on
/// the degree-`<= d` slice by honest span arithmetic rather than by
/// reading off the alphabets.
pub fn rank_invariants<F: Field>(rep: &FreeRep, d: usize) -> Result<(usize, usize)> {
    if d == 0 {
        return Err(Error::Validation("rank invariants need degree >= 1".into()));
    }
    let slice = DegreeSlice::new(rep, d);
    let l_basis = slice.l_basis_elements::<F>();
    let mut derived = RowSpace::<F>::new(slice.l_dim());
    for (i, a) in l_basis.iter().enumerate() {
        for b in l_basis.iter().skip(i + 1) {
            let da = a.degree().unwrap_or(0);
            let db = b.degree().unwrap_or(0);
            if da + db > d {
                continue;
            }
            let br = lie_bracket(a, b)?;
            derived.insert(slice.l_coords(&br)?);
        }
    }
    let rank_x = slice.l_dim() - derived.rank();

    let mut xv = RowSpace::<F>::new(slice.v_dim());
    for mono in slice.v_basis_elements::<F>() {
        if mono.degree().unwrap_or(0) >= d {
            continue;
        }
        for &x in rep.xs() {
            let xl = rep.lie_generator::<F>(x)?;
            xv.insert(slice.v_coords(&act(&xl, &mono)?)?);
        }
    }
    let rank_y = slice.v_dim() - xv.rank();
    Ok((rank_x, rank_y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeassoc::Word;
    use crate::scalars::{FpScalar, Scalar};

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn qv(ns: &[i64]) -> Vec<Scalar> {
        ns.iter().map(|&n| q(n)).collect()
    }

    fn rep21() -> FreeRep {
        FreeRep::new(vec![XGen(1), XGen(2)], vec![YGen(1)]).unwrap()
    }

    /// The 1-dimensional Lie algebra acting on a 1-dimensional module by
    /// the scalar `mu`.
    fn scalar_model(mu: i64) -> FinRep<Scalar> {
        FinRep::new(1, 1, &[], vec![vec![vec![q(mu)]]]).unwrap()
    }

    /// The 2-dimensional solvable algebra `[e1, e2] = e2` acting on Q^2
    /// by matrices with the same commutator.
    fn solvable_model() -> FinRep<Scalar> {
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
    fn finrep_validation_rejects_bad_data() {
        // Not antisymmetric.
        assert!(matches!(
            FinRep::new(2, 1, &[(0, 1, 0, q(1))], vec![vec![vec![q(0)]], vec![vec![q(0)]]]),
            Err(Error::Validation(_))
        ));
        // Action matrices fail the commutator condition: [e1,e2] = e2 but
        // the matrices commute.
        assert!(matches!(
            FinRep::new(
                2,
                1,
                &[(0, 1, 1, q(1)), (1, 0, 1, q(-1))],
                vec![vec![vec![q(1)]], vec![vec![q(1)]]],
            ),
            Err(Error::Validation(_))
        ));
        // The solvable model is fine.
        let _ = solvable_model();
    }

    #[test]
    fn hom_eval_threads_action_matrices() {
        // x1 maps to e1 with action (mu), y1 to f1; then x1*x1*y1 maps to mu^2 f1.
        let h = RepHom::new(
            FreeRep::new(vec![XGen(1)], vec![YGen(1)]).unwrap(),
            scalar_model(3),
            vec![qv(&[1])],
            vec![qv(&[1])],
        )
        .unwrap();
        let src = h.source().clone();
        let v = src.module_generator::<Scalar>(YGen(1)).unwrap();
        let x = src.lie_generator::<Scalar>(XGen(1)).unwrap();
        let xxv = act(&x, &act(&x, &v).unwrap()).unwrap();
        assert_eq!(h.eval_module(&xxv).unwrap(), qv(&[9]));
    }

    #[test]
    fn free_endomorphism_evaluation() {
        let r = rep21();
        let h = RepHom::new(
            r.clone(),
            r.clone(),
            vec![
                r.lie_generator::<Scalar>(XGen(2)).unwrap(),
                r.lie_generator::<Scalar>(XGen(1)).unwrap(),
            ],
            vec![r.module_generator::<Scalar>(YGen(1)).unwrap()],
        )
        .unwrap();
        // [x1,x2] maps to [x2,x1] = -[x1,x2].
        let b = lie_bracket(
            &r.lie_generator::<Scalar>(XGen(1)).unwrap(),
            &r.lie_generator::<Scalar>(XGen(2)).unwrap(),
        )
        .unwrap();
        assert_eq!(h.eval_lie(&b).unwrap(), b.neg());
    }

    #[test]
    fn hom_check_passes_free_extensions_and_catches_planted_errors() {
        let h = RepHom::new(
            FreeRep::new(vec![XGen(1)], vec![YGen(1)]).unwrap(),
            scalar_model(2),
            vec![qv(&[1])],
            vec![qv(&[1])],
        )
        .unwrap();
        assert!(hom_check(&h, 3).unwrap().passed());

        let mut table = BasisMapPair::tabulate(&h, 3).unwrap();
        table.override_module_image(
            ModTerm { word: Word::single(XGen(1)), y: YGen(1) },
            qv(&[7]),
        );
        let report = hom_check(&table, 3).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|(l, v)| l == "x1" && v == "y1"));
    }

    #[test]
    fn self_bracket_is_rejected_in_characteristic_two() {
        // [e1, e1] = e2 is antisymmetric mod 2 but not alternating.
        type F = FpScalar<2>;
        let bad = FinRep::<F>::new(2, 0, &[(0, 0, 1, F::one())], vec![vec![], vec![]]);
        assert!(matches!(bad, Err(Error::Validation(msg)) if msg.contains("alternating")));
    }

    #[test]
    fn hom_check_over_a_prime_field() {
        type F = FpScalar<2>;
        let model = FinRep::<F>::zero(1, 1);
        let h = RepHom::new(
            FreeRep::new(vec![XGen(1)], vec![YGen(1)]).unwrap(),
            model,
            vec![vec![F::one()]],
            vec![vec![F::one()]],
        )
        .unwrap();
        assert!(hom_check(&h, 2).unwrap().passed());
    }

    #[test]
    fn coproduct_of_disjoint_contexts_keeps_names() {
        let w1 = FreeRep::new(vec![XGen(1)], vec![YGen(1)]).unwrap();
        let w2 = FreeRep::new(vec![XGen(2)], vec![YGen(2)]).unwrap();
        let cop = coproduct::<Scalar>(&w1, &w2).unwrap();
        assert_eq!(cop.rep.to_string(), "W(x1,x2; y1,y2)");
    }

    #[test]
    fn coproduct_renames_clashes_and_mediates() {
        let w = FreeRep::new(vec![XGen(1)], vec![YGen(1)]).unwrap();
        let cop = coproduct::<Scalar>(&w, &w).unwrap();
        assert_eq!(cop.rep.xs().len(), 2);
        assert_eq!(cop.rep.to_string(), "W(x1,x2; y1,y2)");

        // Mediate two maps into the solvable model and check both triangles.
        let target = solvable_model();
        let a1 = RepHom::new(w.clone(), target.clone(), vec![qv(&[1, 0])], vec![qv(&[0, 1])]).unwrap();
        let a2 = RepHom::new(w.clone(), target.clone(), vec![qv(&[0, 1])], vec![qv(&[1, 1])]).unwrap();
        let med = mediating_hom(&cop, &a1, &a2).unwrap();
        for (inj, a) in [(&cop.inj1, &a1), (&cop.inj2, &a2)] {
            let through = compose(&med, inj).unwrap();
            assert_eq!(through.phi_images(), a.phi_images());
            assert_eq!(through.psi_images(), a.psi_images());
        }
    }

    #[test]
    fn rank_invariants_read_off_generator_counts() {
        assert_eq!(rank_invariants::<Scalar>(&rep21(), 3).unwrap(), (2, 1));
        let w03 = FreeRep::new(vec![], vec![YGen(1), YGen(2), YGen(3)]).unwrap();
        assert_eq!(rank_invariants::<Scalar>(&w03, 3).unwrap(), (0, 3));
        let w10 = FreeRep::new(vec![XGen(1)], vec![]).unwrap();
        assert_eq!(rank_invariants::<Scalar>(&w10, 4).unwrap(), (1, 0));
    }
}
