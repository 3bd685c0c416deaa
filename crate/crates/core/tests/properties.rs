mod common;

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgeom::algebra::{automorphisms, builtin, PointSpace};
use lgeom::bits::BitSet;
use lgeom::formula::parse_formula;
use lgeom::semantics::{lker_from_values, pullback_index_map, quantify_exists, Evaluator, FragmentValues};
use lgeom::terms::compose_term_maps;
use lgeom::{
    ConstantPolicy, FiniteAlgebra, Formula, Fragment, FragmentTable, Limits, Term, TermMap, ValueSet, VarContext,
};

struct Case {
    h: FiniteAlgebra,
    table: FragmentTable,
    values: FragmentValues,
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let mut out = Vec::new();
        for h in [
            builtin::cyclic(2),
            builtin::cyclic(3),
            builtin::klein4(),
            builtin::left_zero(2),
        ] {
            for k in 1..=2 {
                let f = Fragment::new(VarContext::window(k), 2, h.signature(), ConstantPolicy::Free);
                let table = f.build().unwrap();
                let values = FragmentValues::compute(&table, &h).unwrap();
                out.push(Case {
                    h: h.clone(),
                    table,
                    values,
                });
            }
        }
        let z3c = builtin::cyclic(3).adjoin_constants().unwrap();
        let f = Fragment::new(VarContext::window(1), 2, z3c.signature(), ConstantPolicy::Include);
        let table = f.build().unwrap();
        let values = FragmentValues::compute(&table, &z3c).unwrap();
        out.push(Case { h: z3c, table, values });
        out
    })
}

fn random_term(rng: &mut ChaCha8Rng, sort: &VarContext, h: &FiniteAlgebra, size: usize) -> Term {
    if size == 0 || rng.gen_bool(0.4) {
        return Term::Var(sort.vars()[rng.gen_range(0..sort.len())]);
    }
    let op = rng.gen_range(0..h.signature().ops().len());
    let arity = h.signature().ops()[op].arity;
    Term::App(op, (0..arity).map(|_| random_term(rng, sort, h, size - 1)).collect())
}

fn random_map(seed: u64, sort: &VarContext, h: &FiniteAlgebra) -> TermMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = sort.vars().iter().map(|_| random_term(&mut rng, sort, h, 2)).collect();
    TermMap::new(sort.clone(), sort.clone(), images).unwrap()
}

fn pick(case: usize, i: usize) -> (&'static Case, usize) {
    let c = &cases()[case % cases().len()];
    (c, i % c.table.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_formulas_parse_back(case in 0usize..64, i in 0usize..100_000) {
        let (c, i) = pick(case, i);
        let u = c.table.formula(i);
        let text = c.table.show(i);
        let back = parse_formula(&text, c.table.sort(), c.h.signature()).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn fragment_position_inverts_formula(case in 0usize..64, i in 0usize..100_000) {
        let (c, i) = pick(case, i);
        prop_assert_eq!(c.table.position(&c.table.formula(i)), Some(i));
    }

    #[test]
    fn val_matches_satisfaction(case in 0usize..64, i in 0usize..100_000) {
        let (c, i) = pick(case, i);
        prop_assert_eq!(c.values.bits(i), &common::truth_bits(&c.table.formula(i), &c.h));
    }

    #[test]
    fn boolean_connectives_are_set_operations(case in 0usize..64, i in 0usize..100_000, j in 0usize..100_000) {
        let (c, i) = pick(case, i);
        let j = j % c.table.len();
        let ev = Evaluator::new(&c.h);
        let (u, v) = (c.table.formula(i), c.table.formula(j));
        let (a, b) = (c.values.bits(i), c.values.bits(j));
        prop_assert_eq!(ev.val(&Formula::and(u.clone(), v.clone()).unwrap()).unwrap().into_bits(), a.intersection(b));
        prop_assert_eq!(ev.val(&Formula::or(u.clone(), v).unwrap()).unwrap().into_bits(), a.union(b));
        prop_assert_eq!(ev.val(&Formula::not(u)).unwrap().into_bits(), a.complement());
    }

    #[test]
    fn forall_is_dual_of_exists(case in 0usize..64, i in 0usize..100_000, x in 0usize..2) {
        let (c, i) = pick(case, i);
        let x = c.table.sort().vars()[x % c.table.sort().len()];
        let ev = Evaluator::new(&c.h);
        let u = c.table.formula(i);
        let all = ev.val(&Formula::forall(x, u.clone()).unwrap()).unwrap();
        let dual = ev.val(&Formula::not(Formula::exists(x, Formula::not(u)).unwrap())).unwrap();
        prop_assert_eq!(all, dual);
    }

    #[test]
    fn quantifier_axioms(case in 0usize..64, i in 0usize..100_000, j in 0usize..100_000, x in 0usize..2) {
        let (c, i) = pick(case, i);
        let j = j % c.table.len();
        let x = c.table.sort().vars()[x % c.table.sort().len()];
        let a = c.values.value(i);
        let b = c.values.value(j);
        let ea = quantify_exists(&a, x).unwrap();
        let eb = quantify_exists(&b, x).unwrap();
        prop_assert!(a.is_subset(&ea));
        prop_assert_eq!(quantify_exists(&ea, x).unwrap(), ea.clone());
        prop_assert_eq!(quantify_exists(&a.intersection(&eb), x).unwrap(), ea.intersection(&eb));
        prop_assert_eq!(quantify_exists(&a.union(&b), x).unwrap(), ea.union(&eb));
    }

    #[test]
    fn substitution_commutes_with_pullback(case in 0usize..64, i in 0usize..100_000, seed: u64) {
        let (c, i) = pick(case, i);
        let s = random_map(seed, c.table.sort(), &c.h);
        let ev = Evaluator::new(&c.h);
        let sub = ev.val(&Formula::subst(s.clone(), c.table.formula(i)).unwrap()).unwrap();
        let map = pullback_index_map(&s, &c.h, &Limits::default()).unwrap();
        let pulled = BitSet::from_bools(map.iter().map(|&k| c.values.bits(i).contains(k)));
        prop_assert_eq!(sub.bits(), &pulled);
        prop_assert_eq!(sub.bits(), &common::truth_bits(&Formula::subst(s, c.table.formula(i)).unwrap(), &c.h));
    }

    #[test]
    fn pullback_is_functorial(case in 0usize..64, i in 0usize..100_000, s1: u64, s2: u64) {
        let (c, i) = pick(case, i);
        let limits = Limits::default();
        let a = random_map(s1, c.table.sort(), &c.h);
        let b = random_map(s2, c.table.sort(), &c.h);
        let ma = pullback_index_map(&a, &c.h, &limits).unwrap();
        let mb = pullback_index_map(&b, &c.h, &limits).unwrap();
        let mab = pullback_index_map(&compose_term_maps(&b, &a).unwrap(), &c.h, &limits).unwrap();
        let bits = c.values.bits(i);
        let stepwise = BitSet::from_bools(mb.iter().map(|&k| bits.contains(ma[k])));
        let direct = BitSet::from_bools(mab.iter().map(|&k| bits.contains(k)));
        prop_assert_eq!(stepwise, direct);
    }

    #[test]
    fn galois_closure_laws(case in 0usize..64, mask: u64, extra in 0usize..1000) {
        let c = &cases()[case % cases().len()];
        let n = c.values.space().len();
        let a = BitSet::from_bools((0..n).map(|p| mask >> (p % 64) & 1 == 1));
        let mut b = a.clone();
        b.insert(extra % n);
        let al = c.values.closure_bits(&a);
        let all = c.values.solution_bits(&al);
        prop_assert!(a.is_subset(&all));
        prop_assert!(c.values.closure_bits(&b).is_subset(&al));
        prop_assert_eq!(c.values.closure_bits(&all), al);
    }

    #[test]
    fn kernels_are_ultrafilters(case in 0usize..64, p in 0usize..1000, i in 0usize..100_000, j in 0usize..100_000) {
        let (c, i) = pick(case, i);
        let j = j % c.table.len();
        let space = c.values.space();
        let mu = space.point(p % space.len());
        let kernel = lker_from_values(&mu, &c.values).unwrap();
        let ev = Evaluator::new(&c.h);
        let (u, v) = (c.table.formula(i), c.table.formula(j));
        let inside = |w: &Formula| ev.val(w).unwrap().contains_point(&mu);
        prop_assert_eq!(kernel.members.contains(i), inside(&u));
        prop_assert!(inside(&u) != inside(&Formula::not(u.clone())));
        prop_assert_eq!(
            inside(&Formula::and(u.clone(), v.clone()).unwrap()),
            kernel.members.contains(i) && kernel.members.contains(j)
        );
        prop_assert_eq!(
            inside(&Formula::or(u, v).unwrap()),
            kernel.members.contains(i) || kernel.members.contains(j)
        );
    }

    #[test]
    fn kernels_are_constant_on_orbits(case in 0usize..64, p in 0usize..1000, g in 0usize..100) {
        let c = &cases()[case % cases().len()];
        let group = automorphisms(&c.h);
        let sigma = &group[g % group.len()];
        let space = c.values.space();
        let mu = space.point(p % space.len());
        let moved = lgeom::algebra::Point::new(mu.ctx().clone(), mu.values().iter().map(|&a| sigma.apply(a)).collect());
        let k1 = lker_from_values(&mu, &c.values).unwrap();
        let k2 = lker_from_values(&moved, &c.values).unwrap();
        prop_assert_eq!(k1.members, k2.members);
    }

    #[test]
    fn theory_is_kernel_meet(case in 0usize..64) {
        let c = &cases()[case % cases().len()];
        let mut meet = BitSet::full(c.values.len());
        for p in 0..c.values.space().len() {
            meet.intersect_with(&c.values.kernel_bits(p));
        }
        prop_assert_eq!(c.values.theory_bits(), meet);
    }
}

/// Relabeling the carrier transports value sets pointwise, so theories agree.
#[test]
fn relabeled_copy_has_the_same_theory() {
    let z3 = builtin::cyclic(3);
    let z3r = builtin::relabeled_z3();
    let iso = lgeom::algebra::is_isomorphic(&z3, &z3r).unwrap().unwrap();
    for k in 1..=2 {
        let f = Fragment::new(VarContext::window(k), 2, z3.signature(), ConstantPolicy::Free);
        let table = f.build().unwrap();
        let v1 = FragmentValues::compute(&table, &z3).unwrap();
        let v2 = FragmentValues::compute(&table, &z3r).unwrap();
        assert_eq!(v1.theory_bits(), v2.theory_bits());
        let space = PointSpace::new(VarContext::window(k), 3).unwrap();
        for i in 0..table.len() {
            let moved: Vec<usize> = v1
                .bits(i)
                .iter()
                .map(|p| space.index_of(&space.coords(p).iter().map(|&a| iso[a]).collect::<Vec<_>>()))
                .collect();
            assert_eq!(
                &BitSet::from_indices(space.len(), moved),
                v2.bits(i),
                "{}",
                table.show(i)
            );
        }
    }
}

#[test]
fn orbit_closure_is_inside_every_fragment_closure() {
    for c in cases() {
        let space = c.values.space().clone();
        for p in 0..space.len() {
            let single = BitSet::from_indices(space.len(), [p]);
            let closed = c.values.solution_bits(&c.values.closure_bits(&single));
            let orbit = lgeom::algebra::orbit_closure(&ValueSet::from_bits(space.clone(), single), &c.h);
            assert!(orbit.bits().is_subset(&closed));
        }
    }
}
