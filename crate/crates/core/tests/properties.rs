use proptest::prelude::*;

use stable_kneser::coloring::{erdos_coloring, greedy_coloring};
use stable_kneser::composition::{compose_witness, direct_finder, index_map, CompositionPlan};
use stable_kneser::hypergraph::{find_disjoint_tuple, is_proper, monochromatic_edge};
use stable_kneser::sets::{enumerate_stable, is_stable};
use stable_kneser::solver::{chromatic_number, colorable};
use stable_kneser::tucker::{schrijver_witness, SignedLabeling};
use stable_kneser::{Coloring, KSubset, KneserInstance, SignVector, StabilityVariant};

fn sign_vector(max_n: usize) -> impl Strategy<Value = SignVector> {
    prop::sample::select(vec![2usize, 3, 5, 7]).prop_flat_map(move |p| {
        prop::collection::vec(0..=p as u8, 1..=max_n)
            .prop_map(move |e| SignVector::new(p, e).unwrap())
    })
}

fn variant() -> impl Strategy<Value = StabilityVariant> {
    prop_oneof![
        Just(StabilityVariant::Unrestricted),
        (1usize..=4).prop_map(StabilityVariant::almost),
        (1usize..=4).prop_map(StabilityVariant::cyclic),
    ]
}

// Longest subsequence of non-zero entries with consecutive entries distinct,
// by dynamic programming over the last chosen value.
fn alt_oracle(x: &SignVector) -> usize {
    let mut best = vec![0usize; x.p() + 1];
    for &e in x.entries().iter().filter(|&&e| e != 0) {
        let e = e as usize;
        let other = (1..=x.p())
            .filter(|&j| j != e)
            .map(|j| best[j])
            .max()
            .unwrap_or(0);
        best[e] = best[e].max(other + 1);
    }
    best.into_iter().max().unwrap()
}

fn naive_stable(set: &KSubset, v: StabilityVariant) -> bool {
    let el = set.elements();
    let n = set.n();
    el.iter().enumerate().all(|(i, &a)| {
        el[i + 1..].iter().all(|&b| {
            let d = b - a;
            match v {
                StabilityVariant::Unrestricted => true,
                StabilityVariant::Almost { s } => d >= s,
                StabilityVariant::Cyclic { s } => d >= s && d <= n - s,
            }
        })
    })
}

// Every r-subset of every color class, checked for pairwise disjointness.
fn naive_proper(inst: &KneserInstance, c: &Coloring) -> bool {
    fn any_disjoint(class: &[u64], r: usize, start: usize, used: u64) -> bool {
        if r == 0 {
            return true;
        }
        (start..class.len())
            .any(|i| class[i] & used == 0 && any_disjoint(class, r - 1, i + 1, used | class[i]))
    }
    c.classes().iter().all(|class| {
        let masks: Vec<u64> = class.iter().map(|&v| inst.vertices()[v].mask()).collect();
        !any_disjoint(&masks, inst.r(), 0, 0)
    })
}

fn instance(max_n: usize) -> impl Strategy<Value = KneserInstance> {
    (2usize..=3, 1usize..=3, variant(), 2usize..=max_n).prop_filter_map(
        "non-empty",
        |(r, k, v, n)| {
            if k > n {
                return None;
            }
            KneserInstance::new(n, k, r, v)
                .ok()
                .filter(|i| !i.is_empty())
        },
    )
}

fn instance_with_coloring(
    max_n: usize,
    max_vertices: usize,
) -> impl Strategy<Value = (KneserInstance, Coloring)> {
    instance(max_n)
        .prop_filter("small", move |i| i.len() <= max_vertices)
        .prop_flat_map(|inst| {
            let len = inst.len();
            (Just(inst), 1u32..=4).prop_flat_map(move |(inst, t)| {
                prop::collection::vec(1..=t, len).prop_map(move |colors| {
                    let c = Coloring::new(&inst, colors, t).unwrap();
                    (inst.clone(), c)
                })
            })
        })
}

fn reflect(set: &KSubset) -> KSubset {
    let n = set.n();
    let el: Vec<usize> = set.elements().iter().rev().map(|i| n + 1 - i).collect();
    KSubset::new(n, &el).unwrap()
}

// Smallest t admitting a proper coloring. Colorings are enumerated up to
// renaming of colors: vertex i may use at most one color beyond those seen.
fn brute_chi(inst: &KneserInstance) -> usize {
    fn extend(inst: &KneserInstance, t: u32, colors: &mut Vec<u32>, used: u32) -> bool {
        if colors.len() == inst.len() {
            return is_proper(inst, &Coloring::new(inst, colors.clone(), t).unwrap());
        }
        (1..=(used + 1).min(t)).any(|c| {
            colors.push(c);
            let ok = extend(inst, t, colors, used.max(c));
            colors.pop();
            ok
        })
    }
    (1..=inst.len().max(1))
        .find(|&t| extend(inst, t as u32, &mut Vec::new(), 0))
        .unwrap_or(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn alt_matches_dynamic_programming(x in sign_vector(16)) {
        prop_assert_eq!(x.alt(), alt_oracle(&x));
    }

    #[test]
    fn alt_is_monotone_under_subvectors(y in sign_vector(24), keep in prop::collection::vec(any::<bool>(), 24)) {
        let entries: Vec<u8> = y.entries().iter().zip(&keep).map(|(&e, &k)| if k { e } else { 0 }).collect();
        let x = SignVector::new(y.p(), entries).unwrap();
        prop_assert!(x.is_subvector(&y).unwrap());
        prop_assert!(x.alt() <= y.alt());
    }

    #[test]
    fn shifts_preserve_alt_and_compose(x in sign_vector(24), a in 0usize..7) {
        let a = a % x.p();
        let shifted = x.omega_shift(a);
        prop_assert_eq!(shifted.alt(), x.alt());
        prop_assert_eq!(shifted.omega_shift((x.p() - a) % x.p()), x.clone());
        prop_assert_eq!(x.omega_shift(0), x);
    }

    #[test]
    fn is_stable_matches_pairwise_definition(n in 1usize..=16, mask in any::<u16>(), v in variant()) {
        let mask = mask as u64 & ((1u64 << n) - 1);
        prop_assume!(mask != 0);
        let set = KSubset::from_mask(n, mask).unwrap();
        prop_assert_eq!(is_stable(&set, v), naive_stable(&set, v));
    }

    #[test]
    fn cyclic_vertices_are_almost_stable(n in 1usize..=14, k in 1usize..=5, s in 1usize..=5) {
        prop_assume!(k <= n);
        let almost = enumerate_stable(n, k, StabilityVariant::almost(s)).unwrap();
        for set in enumerate_stable(n, k, StabilityVariant::cyclic(s)).unwrap() {
            prop_assert!(almost.binary_search(&set).is_ok());
        }
    }

    #[test]
    fn enumeration_is_sorted_and_exact(n in 1usize..=12, k in 1usize..=4, v in variant()) {
        prop_assume!(k <= n);
        let sets = enumerate_stable(n, k, v).unwrap();
        prop_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        let expected = (1u64..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .filter(|&m| naive_stable(&KSubset::from_mask(n, m).unwrap(), v))
            .count();
        prop_assert_eq!(sets.len(), expected);
    }

    #[test]
    fn proper_iff_no_monochromatic_edge((inst, c) in instance_with_coloring(10, 40)) {
        let edge = monochromatic_edge(&inst, &c);
        prop_assert_eq!(is_proper(&inst, &c), edge.is_none());
        if let Some(w) = edge {
            prop_assert!(w.certifies(&inst, &c));
        }
    }

    #[test]
    fn properness_matches_naive_check((inst, c) in instance_with_coloring(9, 16)) {
        prop_assert_eq!(is_proper(&inst, &c), naive_proper(&inst, &c));
    }

    #[test]
    fn reflection_preserves_almost_stable_properness(
        n in 2usize..=9, k in 1usize..=3, s in 1usize..=3, r in 2usize..=3, seed in any::<u64>()
    ) {
        prop_assume!(k <= n);
        let inst = KneserInstance::new(n, k, r, StabilityVariant::almost(s)).unwrap();
        prop_assume!(!inst.is_empty());
        for set in inst.vertices() {
            prop_assert!(inst.index_of(&reflect(set)).is_some());
        }
        let c = Coloring::from_fn(&inst, |set| 1 + ((set.mask().wrapping_mul(seed | 1) >> 7) % 3) as u32).unwrap();
        let mirrored = Coloring::from_fn(&inst, |set| c.color_of(&inst, &reflect(set)).unwrap()).unwrap();
        prop_assert_eq!(is_proper(&inst, &c), is_proper(&inst, &mirrored));
    }

    #[test]
    fn disjoint_tuple_is_a_packing(n in 2usize..=10, k in 1usize..=3, r in 2usize..=4, v in variant()) {
        prop_assume!(k <= n);
        let sets = enumerate_stable(n, k, v).unwrap();
        match find_disjoint_tuple(&sets, r).unwrap() {
            Some(w) => {
                prop_assert_eq!(w.vertices.len(), r);
                prop_assert!(w.is_pairwise_disjoint());
            }
            None => prop_assert!(r * k > n || sets.len() < r || !naive_packing(&sets, r)),
        }
    }

    #[test]
    fn greedy_and_erdos_are_proper(inst in instance(11)) {
        prop_assert!(is_proper(&inst, &greedy_coloring(&inst)));
        if inst.n() >= inst.r() * inst.k() {
            let e = erdos_coloring(inst.n(), inst.k(), inst.r()).unwrap().restrict(&inst).unwrap();
            prop_assert!(is_proper(&inst, &e));
        }
    }

    #[test]
    fn index_map_multiplies_gaps(
        n in 4usize..=20, n1 in 2usize..=6, k in 1usize..=3, s1 in 1usize..=3, s2 in 1usize..=3, pick in any::<prop::sample::Index>()
    ) {
        prop_assume!(k <= n1 && n1 <= n);
        let outer = enumerate_stable(n, n1, StabilityVariant::almost(s1)).unwrap();
        prop_assume!(!outer.is_empty());
        let a = *pick.get(&outer);
        for b in enumerate_stable(n1, k, StabilityVariant::almost(s2)).unwrap() {
            let s = index_map(&a, &b).unwrap();
            prop_assert!(is_stable(&s, StabilityVariant::almost(s1 * s2)));
            prop_assert!(s.is_within(a.mask()));
        }
    }
}

fn naive_packing(sets: &[KSubset], r: usize) -> bool {
    fn go(sets: &[KSubset], r: usize, start: usize, used: u64) -> bool {
        r == 0
            || (start..sets.len()).any(|i| {
                sets[i].mask() & used == 0 && go(sets, r - 1, i + 1, used | sets[i].mask())
            })
    }
    go(sets, r, 0, 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_matches_brute_force(inst in instance(9).prop_filter("tiny", |i| i.len() <= 9)) {
        let rep = chromatic_number(&inst).unwrap();
        prop_assert_eq!(rep.chi, Some(brute_chi(&inst)));
        let c = rep.witness_coloring.unwrap();
        prop_assert!(is_proper(&inst, &c));
    }

    #[test]
    fn colorable_returns_proper_colorings(inst in instance(10).prop_filter("small", |i| i.len() <= 40), t in 1usize..=5) {
        if let Some(c) = colorable(&inst, t) {
            prop_assert!(is_proper(&inst, &c));
            prop_assert!(c.max_color() as usize <= t);
        }
    }

    #[test]
    fn relaxing_stability_never_lowers_chi(n in 4usize..=9, k in 1usize..=3, s in 1usize..=3, r in 2usize..=3) {
        prop_assume!(k <= n);
        let cyc = KneserInstance::new(n, k, r, StabilityVariant::cyclic(s)).unwrap();
        let alm = KneserInstance::new(n, k, r, StabilityVariant::almost(s)).unwrap();
        prop_assume!(alm.len() <= 60);
        let a = chromatic_number(&cyc).unwrap().chi.unwrap();
        let b = chromatic_number(&alm).unwrap().chi.unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn schrijver_witness_on_random_undercolorings(n in 4usize..=8, k in 1usize..=3, seed in any::<u64>()) {
        prop_assume!(2 * k <= n);
        let inst = KneserInstance::new(n, k, 2, StabilityVariant::cyclic(2)).unwrap();
        let t = (n - 2 * k + 1) as u64;
        let c = Coloring::from_fn(&inst, |s| 1 + ((s.mask() ^ seed).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 40) as u32 % t as u32).unwrap();
        let w = schrijver_witness(&inst, &c).unwrap();
        prop_assert!(w.witness.certifies(&inst, &c));
        prop_assert!(w.witness.vertices.iter().all(|s| is_stable(s, StabilityVariant::cyclic(2))));
    }

    #[test]
    fn signed_labels_are_antipodal(n in 2usize..=9, k in 1usize..=3, signs in prop::collection::vec(0u8..=2, 9), seed in any::<u32>()) {
        prop_assume!(2 * k <= n);
        let x = SignVector::new(2, signs[..n].to_vec()).unwrap();
        prop_assume!(!x.is_zero());
        let inst = KneserInstance::new(n, k, 2, StabilityVariant::cyclic(2)).unwrap();
        let t = (n - 2 * k + 1) as u32;
        let c = Coloring::from_fn(&inst, |s| 1 + (s.mask() as u32 ^ seed) % t).unwrap();
        let lab = SignedLabeling::new(&inst, &c).unwrap();
        prop_assert_eq!(lab.label(&x.negate()).unwrap(), -lab.label(&x).unwrap());
    }

    #[test]
    fn composition_witnesses_are_valid(
        k in 1usize..=2, t in 1usize..=2, extra in 0usize..=2, seed in any::<u64>(), plan_kind in 0usize..3
    ) {
        let plan = match plan_kind {
            0 => CompositionPlan::new(vec![(2, 2), (2, 2)]).unwrap(),
            1 => CompositionPlan::new(vec![(2, 1), (2, 2)]).unwrap(),
            _ => CompositionPlan::new(vec![(3, 1), (2, 2)]).unwrap(),
        };
        let n = (t - 1) * (plan.r() - 1) + plan.r() * k + extra;
        prop_assume!(n <= 16);
        let inst = KneserInstance::new(n, k, plan.r(), StabilityVariant::almost(plan.s())).unwrap();
        let c = Coloring::from_fn(&inst, |s| 1 + ((s.mask() ^ seed).wrapping_mul(0x2545_f491_4f6c_dd1d) >> 33) as u32 % t as u32).unwrap();
        let w = compose_witness(&plan, &inst, &c, t, &direct_finder).unwrap();
        prop_assert_eq!(w.vertices.len(), plan.r());
        prop_assert!(w.certifies(&inst, &c));
        prop_assert!(w.vertices.iter().all(|s| is_stable(s, StabilityVariant::almost(plan.s()))));
    }
}
