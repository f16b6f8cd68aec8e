//! Randomized invariants over small Weyl groups.

use std::sync::OnceLock;

use mg_core::sheaf::Sheaf;
use mg_core::verify::subsets;
use mg_core::{zmod, Combination, GradedPoly, GradedRank, Hecke, LaurentPoly, LinearForm, Rat, Setting, WeylGroup};
use proptest::prelude::*;

const LABELS: [&str; 4] = ["A2", "B2", "G2", "A3"];

fn groups() -> &'static Vec<WeylGroup> {
    static G: OnceLock<Vec<WeylGroup>> = OnceLock::new();
    G.get_or_init(|| LABELS.iter().map(|l| WeylGroup::from_label(l).unwrap()).collect())
}

fn poly(nvars: usize, terms: &[(Vec<u32>, i64)]) -> GradedPoly {
    GradedPoly::from_terms(nvars, terms.iter().map(|(e, c)| (e.iter().take(nvars).copied().collect(), Rat::int(*c))))
}

fn terms_strategy() -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), -5i64..=5), 0..5)
}

fn linear_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 3).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lifting_lemma(gi in 0usize..4, s in 0usize..3, u in 0usize..24, v in 0usize..24) {
        let g = &groups()[gi];
        let (s, u, v) = (s % g.rank(), u % g.size(), v % g.size());
        let vs = g.rmul(v, s);
        prop_assume!(g.length(vs) < g.length(v) && g.bruhat_lt(u, v));
        let us = g.rmul(u, s);
        if g.length(us) < g.length(u) {
            prop_assert!(g.bruhat_lt(us, vs));
        } else {
            prop_assert!(g.bruhat_leq(us, v) && g.bruhat_leq(u, vs));
        }
    }

    #[test]
    fn simple_reflection_leaving_minimal_reps_returns(gi in 0usize..4, ji in 0usize..8, x in 0usize..24, s in 0usize..3) {
        let g = &groups()[gi];
        let subs = subsets(g.rank());
        let pd = g.parabolic(&subs[ji % subs.len()]).unwrap();
        let x = pd.reps[x % pd.reps.len()];
        let sx = g.lmul(s % g.rank(), x);
        if !pd.is_rep(sx) {
            prop_assert_eq!(pd.min_rep(sx), x);
        }
    }

    #[test]
    fn coset_factorization_is_length_additive(gi in 0usize..4, ji in 0usize..8, x in 0usize..24) {
        let g = &groups()[gi];
        let subs = subsets(g.rank());
        let pd = g.parabolic(&subs[ji % subs.len()]).unwrap();
        let x = x % g.size();
        let (a, b) = pd.factorize(x);
        prop_assert_eq!(g.mul(a, b), x);
        prop_assert!(pd.is_rep(a) && pd.in_parabolic_subgroup(b));
        prop_assert_eq!(g.length(x), g.length(a) + g.length(b));
    }

    #[test]
    fn bar_is_an_involution(gi in 0usize..4, terms in prop::collection::vec((0usize..24, -3i32..=3, -4i64..=4), 0..6)) {
        let g = &groups()[gi];
        let h = Hecke::new(g);
        let mut c = Combination::zero();
        for (x, e, k) in terms {
            c.add_term(x % g.size(), &LaurentPoly::monomial(e, k));
        }
        prop_assert_eq!(h.bar(&h.bar(&c)), c);
    }

    #[test]
    fn division_and_reduction(p in terms_strategy(), l in linear_strategy()) {
        let p = poly(3, &p);
        let l = LinearForm::from_ints(&l).unwrap();
        let pl = &p * &l.to_poly();
        prop_assert_eq!(pl.divide_by_linear(&l), Some(p.clone()));
        prop_assert!(pl.reduce_mod_linear(&l).is_zero());
        let r = p.reduce_mod_linear(&l);
        prop_assert_eq!(r.reduce_mod_linear(&l), r.clone());
        prop_assert!((&p - &r).divide_by_linear(&l).is_some());
    }

    #[test]
    fn group_action_is_multiplicative(x in 0usize..24, y in 0usize..24, p in terms_strategy(), q in terms_strategy()) {
        let g = &groups()[3];
        let (x, y) = (x % g.size(), y % g.size());
        let (p, q) = (poly(3, &p), poly(3, &q));
        let (ex, ey) = (g.element(x), g.element(y));
        prop_assert_eq!((&p * &q).apply_group_element(ex), &p.apply_group_element(ex) * &q.apply_group_element(ex));
        let xy = g.element(g.mul(x, y));
        prop_assert_eq!(p.apply_group_element(xy), p.apply_group_element(ey).apply_group_element(ex));
    }

    #[test]
    fn graded_rank_inverts_hilbert(degrees in prop::collection::vec(0i32..5, 1..4), n in 1usize..4) {
        let degrees: Vec<i32> = degrees.iter().map(|d| 2 * d).collect();
        let rk = GradedRank::from_degrees(&degrees);
        let bound = 2 * 4 + 2 * 2 + 4;
        let h = rk.hilbert(n, bound);
        prop_assert_eq!(zmod::graded_rank(&h, n, bound).unwrap(), rk);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariant_split_round_trip(gi in 0usize..2, ji in 0usize..4, s in 0usize..2, d in 0i32..3, coeffs in prop::collection::vec(-4i64..=4, 40)) {
        let g = &groups()[gi];
        let subs = subsets(g.rank());
        let pd = g.parabolic(&subs[ji % subs.len()]).unwrap();
        let set = Setting::new(g, &pd);
        let z = Sheaf::structure_sheaf(&set.graph);
        let all: Vec<usize> = (0..set.graph.num_vertices()).collect();
        let d = 2 * d;
        let space = z.sections(&all, d);
        let nv = g.rank();
        let mut t = vec![GradedPoly::zero(nv); all.len()];
        for (b, c) in space.basis(d).iter().zip(&coeffs) {
            for (x, part) in b.iter().enumerate() {
                t[x] = &t[x] + &part[0].scale(&Rat::int(*c));
            }
        }
        let (plus, minus) = zmod::invariant_split(&set, s, &all, &t).unwrap();
        let alpha = GradedPoly::var(nv, s);
        let back: Vec<GradedPoly> = plus.iter().zip(&minus).map(|(a, b)| a + &(&alpha * b)).collect();
        prop_assert_eq!(back, t);
        prop_assert_eq!(zmod::sigma_involution(&set, s, &all, &plus).unwrap(), plus);
        prop_assert_eq!(zmod::sigma_involution(&set, s, &all, &minus).unwrap(), minus);
    }
}
