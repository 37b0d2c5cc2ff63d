//! Seeded, reproducible generators for test corpora: random scalars,
//! elements of the free algebras, bracket expressions, homomorphisms out
//! of free representations, and a small pool of verified
//! finite-dimensional representations.
//!
//! Everything is driven by a ChaCha stream cipher so that a corpus is a
//! pure function of its seed — reruns and failures replay exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::freeassoc::{ModuleElement, XGen};
use crate::freelie::{LieElement, LieExpr};
use crate::projder::{FreePd, PdElement};
use crate::representation::{FinRep, FreeRep, RepHom};
use crate::scalars::{Field, Scalar};
use crate::slices::DegreeSlice;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Integer scalar in `[-max_abs, max_abs]`.
    pub fn scalar(&mut self, max_abs: i64) -> Scalar {
        Scalar::from_int(self.int(-max_abs, max_abs))
    }

    /// Nonzero scalar with numerator in `[-max_abs, max_abs]` and
    /// denominator in `{1, 2, 3}`.
    pub fn nonzero_ratio(&mut self, max_abs: i64) -> Scalar {
        let mut n = 0;
        while n == 0 {
            n = self.int(-max_abs, max_abs);
        }
        Scalar::new(n, self.int(1, 3)).expect("denominator is positive")
    }

    /// Random combination of `terms` Lyndon basis elements of degree at
    /// most `degree`, with small integer coefficients.
    pub fn lie_element(&mut self, ctx: &FreeRep, degree: usize, terms: usize) -> LieElement<Scalar> {
        let basis = DegreeSlice::new(ctx, degree).l_basis_elements::<Scalar>();
        let mut out = LieElement::zero(ctx.xs().to_vec());
        if basis.is_empty() {
            return out;
        }
        for _ in 0..terms {
            let pick = basis[self.index(basis.len())].scale(&self.scalar(3));
            out = out.add(&pick).expect("same alphabet");
        }
        out
    }

    /// Random combination of `terms` module monomials of degree at most
    /// `degree`.
    pub fn module_element(&mut self, ctx: &FreeRep, degree: usize, terms: usize) -> ModuleElement<Scalar> {
        let basis = DegreeSlice::new(ctx, degree).v_basis_elements::<Scalar>();
        let mut out = ModuleElement::zero(ctx.xs().to_vec(), ctx.ys().to_vec());
        if basis.is_empty() {
            return out;
        }
        for _ in 0..terms {
            let pick = basis[self.index(basis.len())].scale(&self.scalar(3));
            out = out.add(&pick).expect("same context");
        }
        out
    }

    /// Random element of a free merged algebra, both parts of degree at
    /// most `degree`.
    pub fn pd_element(&mut self, pd: &FreePd, degree: usize, terms: usize) -> PdElement<Scalar, FreeRep> {
        let l = self.lie_element(pd.rep(), degree, terms);
        let v = self.module_element(pd.rep(), degree, terms);
        PdElement::new(pd.rep().clone(), l, v)
    }

    /// Random bracket expression whose fully expanded degree is at most
    /// `budget` (at least 1). Brackets split the budget between their
    /// arguments; sums and scalings keep it.
    pub fn lie_expr(&mut self, xs: &[XGen], budget: usize) -> LieExpr<Scalar> {
        assert!(budget >= 1, "degree budget must be positive");
        assert!(!xs.is_empty(), "need at least one letter");
        let gen = LieExpr::Gen(xs[self.index(xs.len())]);
        if budget == 1 {
            return if self.int(0, 4) == 0 {
                LieExpr::Scale(self.nonzero_ratio(2), Box::new(gen))
            } else {
                gen
            };
        }
        match self.int(0, 5) {
            0 => LieExpr::Sum(
                Box::new(self.lie_expr(xs, budget)),
                Box::new(self.lie_expr(xs, budget)),
            ),
            1 => LieExpr::Scale(self.nonzero_ratio(2), Box::new(self.lie_expr(xs, budget))),
            _ => {
                let left = self.int(1, (budget - 1) as i64) as usize;
                LieExpr::Bracket(
                    Box::new(self.lie_expr(xs, left)),
                    Box::new(self.lie_expr(xs, budget - left)),
                )
            }
        }
    }

    /// Homomorphism out of a free representation into a finite model:
    /// the generator images are uniform coordinate vectors, and any
    /// assignment extends to a homomorphism by freeness.
    pub fn rep_hom_into_fin(
        &mut self,
        source: &FreeRep,
        target: &FinRep<Scalar>,
    ) -> RepHom<Scalar, FinRep<Scalar>> {
        let phi = source
            .xs()
            .iter()
            .map(|_| (0..target.lie_dim()).map(|_| self.scalar(2)).collect())
            .collect();
        let psi = source
            .ys()
            .iter()
            .map(|_| (0..target.module_dim()).map(|_| self.scalar(2)).collect())
            .collect();
        RepHom::new(source.clone(), target.clone(), phi, psi).expect("free source admits any images")
    }

    /// Homomorphism between free representations with random images of
    /// degree at most `degree`.
    pub fn rep_hom_free(
        &mut self,
        source: &FreeRep,
        target: &FreeRep,
        degree: usize,
        terms: usize,
    ) -> RepHom<Scalar, FreeRep> {
        let phi = source.xs().iter().map(|_| self.lie_element(target, degree, terms)).collect();
        let psi = source.ys().iter().map(|_| self.module_element(target, degree, terms)).collect();
        RepHom::new(source.clone(), target.clone(), phi, psi).expect("free source admits any images")
    }

    /// Rewrites the module in a random new basis (unipotent times
    /// invertible diagonal), conjugating every action matrix; the Lie
    /// structure is untouched, so validity is preserved.
    pub fn twist_module_basis(&mut self, rep: &FinRep<Scalar>) -> FinRep<Scalar> {
        let m = rep.module_dim();
        let mut basis = identity_matrix(m);
        let mut inverse = identity_matrix(m);
        // Diagonal part.
        for i in 0..m {
            let d = self.nonzero_ratio(2);
            basis[i][i] = d.clone();
            inverse[i][i] = d.inv().expect("nonzero");
        }
        // One unipotent shear, if there is room for one.
        if m >= 2 {
            let i = self.index(m - 1);
            let j = i + 1 + self.index(m - 1 - i);
            let c = self.scalar(2);
            // (I + c E_ij) B and B^{-1} (I - c E_ij) stay mutually inverse.
            let shear = add_elementary(&identity_matrix(m), i, j, &c);
            let unshear = add_elementary(&identity_matrix(m), i, j, &c.neg());
            basis = mat_mul_scalar(&shear, &basis);
            inverse = mat_mul_scalar(&inverse, &unshear);
        }
        let act: Vec<Vec<Vec<Scalar>>> = (0..rep.lie_dim())
            .map(|i| {
                let columns: Vec<Vec<Scalar>> =
                    (0..m).map(|c| rep.act_vec(&rep.basis_l(i), &rep.basis_v(c))).collect();
                let a: Vec<Vec<Scalar>> =
                    (0..m).map(|r| (0..m).map(|c| columns[c][r].clone()).collect()).collect();
                mat_mul_scalar(&inverse, &mat_mul_scalar(&a, &basis))
            })
            .collect();
        let entries: Vec<(usize, usize, usize, Scalar)> = (0..rep.lie_dim())
            .flat_map(|i| {
                (0..rep.lie_dim()).flat_map(move |j| {
                    (0..rep.lie_dim()).map(move |k| (i, j, k))
                })
            })
            .map(|(i, j, k)| (i, j, k, rep.structure_constant(i, j, k).clone()))
            .filter(|(_, _, _, c)| !c.is_zero())
            .collect();
        FinRep::new(rep.lie_dim(), m, &entries, act).expect("conjugation preserves validity")
    }
}

fn identity_matrix(m: usize) -> Vec<Vec<Scalar>> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

fn add_elementary(mat: &[Vec<Scalar>], i: usize, j: usize, c: &Scalar) -> Vec<Vec<Scalar>> {
    let mut out = mat.to_vec();
    out[i][j] = out[i][j].add(c);
    out
}

fn mat_mul_scalar(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let p = if n == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    let mut acc = Scalar::zero();
                    for (k, bk) in b.iter().enumerate() {
                        acc = acc.add(&a[i][k].mul(&bk[j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Small verified finite-dimensional representations over the rationals:
/// the zero structure, an abelian algebra with commuting diagonal
/// action, a solvable algebra acting faithfully, a Heisenberg algebra,
/// a simple three-dimensional algebra with its defining module, and a
/// one-dimensional algebra acting nilpotently. Each is checked by
/// construction.
pub fn fin_rep_pool() -> Vec<FinRep<Scalar>> {
    let one = Scalar::one;
    let int = Scalar::from_int;
    let mut pool = vec![FinRep::zero(1, 1)];
    // Abelian, commuting diagonal action.
    pool.push(
        FinRep::new(
            2,
            2,
            &[],
            vec![
                vec![vec![int(1), int(0)], vec![int(0), int(2)]],
                vec![vec![int(3), int(0)], vec![int(0), int(-1)]],
            ],
        )
        .expect("abelian pool entry"),
    );
    // Solvable: [e1, e2] = e2 with a faithful two-dimensional action.
    pool.push(
        FinRep::new(
            2,
            2,
            &[(0, 1, 1, one()), (1, 0, 1, int(-1))],
            vec![
                vec![vec![int(1), int(0)], vec![int(0), int(0)]],
                vec![vec![int(0), int(1)], vec![int(0), int(0)]],
            ],
        )
        .expect("solvable pool entry"),
    );
    // Heisenberg: [e1, e2] = e3, center acting by zero.
    pool.push(
        FinRep::new(
            3,
            1,
            &[(0, 1, 2, one()), (1, 0, 2, int(-1))],
            vec![vec![vec![int(0)]], vec![vec![int(0)]], vec![vec![int(0)]]],
        )
        .expect("Heisenberg pool entry"),
    );
    // Simple three-dimensional: [e, f] = h, [h, e] = 2e, [h, f] = -2f,
    // acting on its defining two-dimensional module.
    pool.push(
        FinRep::new(
            3,
            2,
            &[
                (0, 1, 2, one()),
                (1, 0, 2, int(-1)),
                (2, 0, 0, int(2)),
                (0, 2, 0, int(-2)),
                (2, 1, 1, int(-2)),
                (1, 2, 1, int(2)),
            ],
            vec![
                vec![vec![int(0), int(1)], vec![int(0), int(0)]],
                vec![vec![int(0), int(0)], vec![int(1), int(0)]],
                vec![vec![int(1), int(0)], vec![int(0), int(-1)]],
            ],
        )
        .expect("simple pool entry"),
    );
    // One-dimensional abelian acting by a nilpotent shear.
    pool.push(
        FinRep::new(1, 2, &[], vec![vec![vec![int(0), int(1)], vec![int(0), int(0)]]])
            .expect("nilpotent pool entry"),
    );
    pool
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{embed_assoc, lie_normal_form};
    use crate::projder::functor_f;
    use crate::representation::hom_check;

    #[test]
    fn same_seed_replays_the_same_corpus() {
        let ctx = FreeRep::standard(2, 2);
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            assert_eq!(a.lie_element(&ctx, 3, 3), b.lie_element(&ctx, 3, 3));
            assert_eq!(a.module_element(&ctx, 3, 3), b.module_element(&ctx, 3, 3));
            assert_eq!(a.lie_expr(&[XGen(1), XGen(2)], 4), b.lie_expr(&[XGen(1), XGen(2)], 4));
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let ctx = FreeRep::standard(2, 2);
        let mut a = Sampler::new(1);
        let mut b = Sampler::new(2);
        let same = (0..10).all(|_| a.lie_element(&ctx, 3, 3) == b.lie_element(&ctx, 3, 3));
        assert!(!same);
    }

    #[test]
    fn sampled_expressions_respect_the_degree_budget() {
        let xs = [XGen(1), XGen(2), XGen(3)];
        let mut s = Sampler::new(11);
        for _ in 0..50 {
            let expr = s.lie_expr(&xs, 5);
            let nf = lie_normal_form(&expr, &xs).unwrap();
            assert!(nf.degree().unwrap_or(0) <= 5, "{nf}");
        }
    }

    #[test]
    fn normal_forms_match_the_associative_expansion() {
        let xs = [XGen(1), XGen(2)];
        let mut s = Sampler::new(23);
        for _ in 0..30 {
            let expr = s.lie_expr(&xs, 4);
            let nf = lie_normal_form(&expr, &xs).unwrap();
            assert_eq!(embed_assoc(&nf).unwrap(), expr.expand_assoc(&xs).unwrap());
        }
    }

    #[test]
    fn pool_entries_are_valid_and_survive_the_merge() {
        for rep in fin_rep_pool() {
            functor_f(&rep).unwrap();
        }
    }

    #[test]
    fn twisting_preserves_validity_and_dimensions() {
        let mut s = Sampler::new(5);
        for rep in fin_rep_pool() {
            let twisted = s.twist_module_basis(&rep);
            assert_eq!(twisted.lie_dim(), rep.lie_dim());
            assert_eq!(twisted.module_dim(), rep.module_dim());
        }
    }

    #[test]
    fn sampled_homs_out_of_free_sources_check_out() {
        let source = FreeRep::standard(2, 1);
        let mut s = Sampler::new(41);
        for rep in fin_rep_pool() {
            let h = s.rep_hom_into_fin(&source, &rep);
            assert!(hom_check(&h, 3).unwrap().passed());
        }
        let target = FreeRep::standard(2, 2);
        let h = s.rep_hom_free(&source, &target, 2, 2);
        assert!(hom_check(&h, 3).unwrap().passed());
    }
}
