use proptest::prelude::*;

use nibble::finisher::finish;
use nibble::generators::{fixture, generate, uniform_lists, Family, GenSpec, FIXTURES};
use nibble::graph::{
    color_degree, is_proper, is_proper_list_coloring, max_metrics, max_s_codegree, preprocess, s_color_codegree,
};
use nibble::lab::{
    convex_distance, directional_distance, distance_lower_bound, exact_tail, random_structure, Flavor,
};
use nibble::nibble::{build_nibble_schedule, run_nibble, NibbleConfig, OverrideParams};
use nibble::partition::{build_schedule, part_within_bounds, random_bipartition};
use nibble::sparsify::sparsify;
use nibble::wcp::{exact_survival_probability, run_round, RoundParams};
use nibble::{Graph, ListAssignment, PartialColoring};

fn pair(n: usize, p: f64, q: u32, ell: usize, seed: u64) -> (Graph, ListAssignment) {
    let g = generate(&GenSpec::gnp(n, p, seed)).unwrap();
    let l = uniform_lists(n, q, ell, seed ^ 0x5eed).unwrap();
    (g, l)
}

/// Brute force over all s-subsets and colors.
fn exhaustive_metrics(g: &Graph, l: &ListAssignment, s: usize) -> (usize, usize) {
    let n = g.n();
    let colors: Vec<u32> = (1..=l.max_color()).collect();
    let mut cd = 0;
    for v in 0..n {
        for &c in l.list(v) {
            cd = cd.max(g.neighbors(v).iter().filter(|&&u| l.contains(u, c)).count());
        }
    }
    let mut cod = 0;
    let mut tuple: Vec<usize> = (0..s).collect();
    if s <= n {
        loop {
            for &c in &colors {
                if tuple.iter().all(|&v| l.contains(v, c)) {
                    let k = (0..n)
                        .filter(|&w| l.contains(w, c) && tuple.iter().all(|&v| g.has_edge(v, w)))
                        .count();
                    cod = cod.max(k);
                }
            }
            let Some(i) = (0..s).rev().find(|&i| tuple[i] < n - s + i) else { break };
            tuple[i] += 1;
            for j in i + 1..s {
                tuple[j] = tuple[j - 1] + 1;
            }
        }
    }
    (cd, cod)
}

#[test]
fn metrics_match_brute_force_on_fixtures() {
    for name in FIXTURES {
        let g = fixture(name).unwrap();
        for q in [1, 3, 5] {
            let l = uniform_lists(g.n(), 5, q, 1).unwrap();
            for s in 2..=3 {
                let m = max_metrics(&g, &l, s);
                assert_eq!((m.max_color_degree, m.max_codegree), exhaustive_metrics(&g, &l, s), "{name} q={q} s={s}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn color_degree_at_most_degree(n in 2usize..30, p in 0.0f64..0.6, ell in 1usize..6, seed in any::<u64>()) {
        let (g, l) = pair(n, p, 8, ell, seed);
        for v in 0..n {
            for &c in l.list(v) {
                prop_assert!(color_degree(&g, &l, v, c).unwrap() <= g.degree(v));
            }
        }
    }

    #[test]
    fn codegree_symmetric_under_permutation(n in 3usize..20, p in 0.2f64..0.8, seed in any::<u64>()) {
        let (g, l) = pair(n, p, 4, 3, seed);
        for c in 1..=4 {
            let a = s_color_codegree(&g, &l, &[0, 1, 2], c).unwrap();
            for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                prop_assert_eq!(a, s_color_codegree(&g, &l, &perm, c).unwrap());
            }
        }
    }

    #[test]
    fn metrics_match_brute_force(n in 2usize..12, p in 0.0f64..0.8, ell in 1usize..5, s in 2usize..4, seed in any::<u64>()) {
        let (g, l) = pair(n, p, 6, ell, seed);
        let m = max_metrics(&g, &l, s);
        prop_assert_eq!((m.max_color_degree, m.max_codegree), exhaustive_metrics(&g, &l, s));
    }

    #[test]
    fn preprocess_idempotent_and_exact(n in 2usize..30, p in 0.0f64..0.5, ell in 1usize..6, seed in any::<u64>()) {
        let (g, l) = pair(n, p, 10, 6, seed);
        let (g1, l1) = preprocess(&g, &l, ell).unwrap();
        let (g2, l2) = preprocess(&g1, &l1, ell).unwrap();
        prop_assert_eq!(&g1, &g2);
        prop_assert_eq!(&l1, &l2);
        prop_assert!((0..n).all(|v| l1.list(v).len() == ell));
        prop_assert!(g1.edges().all(|(u, v)| l1.intersects(u, v) && g.has_edge(u, v)));
    }

    #[test]
    fn generated_graphs_are_simple_and_capped(n in 4usize..60, deg in 1.0f64..12.0, cap in 1usize..4, seed in any::<u64>(), fam in 0usize..4) {
        let family = [Family::Gnp, Family::BipartiteRandom, Family::BlowupCycle, Family::KstFreeSample][fam];
        let spec = GenSpec {
            family,
            n,
            target_degree: deg,
            p: None,
            codegree_cap: Some(cap),
            s: 2,
            seed,
            fixture: None,
            lists: None,
        };
        if let Ok(g) = generate(&spec) {
            for v in 0..g.n() {
                prop_assert!(!g.neighbors(v).contains(&v));
                prop_assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
                prop_assert!(g.neighbors(v).iter().all(|&u| g.has_edge(u, v)));
            }
            let m = max_metrics(&g, &ListAssignment::full_palette(g.n(), 1), 2);
            prop_assert!(m.max_codegree <= cap);
        }
    }

    #[test]
    fn bipartition_is_partition_within_bounds(n in 10usize..120, p in 0.05f64..0.3, seed in any::<u64>()) {
        let g = generate(&GenSpec::gnp(n, p, seed)).unwrap();
        let (d, t) = (g.max_degree() as f64, max_s_codegree(&g, 2) as f64);
        if let Ok(b) = random_bipartition(&g, 2, d, t, seed, 100) {
            let mut all: Vec<usize> = b.parts.concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert!(b.parts.iter().all(|part| part_within_bounds(&g, part, 2, d, t)));
        }
    }

    #[test]
    fn partition_ratio_below_inverse_zeta(delta in 16.0f64..1e5, zeta in 0.01f64..0.99, s in 2usize..4) {
        let sch = build_schedule(delta, zeta, 0.1, s).unwrap();
        for i in 1..sch.i_star {
            prop_assert!(sch.d_seq[i] / sch.t_seq[i] < 1.0 / zeta);
        }
    }

    #[test]
    fn round_contract(n in 2usize..40, p in 0.0f64..0.4, ell in 2usize..8, eta in 0.0f64..0.9, seed in any::<u64>()) {
        let (g, l) = pair(n, p, 12, ell, seed);
        let g = g.filter_edges(|u, v| l.intersects(u, v));
        let d = max_metrics(&g, &l, 2).max_color_degree.max(1) as f64;
        let params = RoundParams::new(d, ell, 2, eta).unwrap();
        let out = run_round(&g, &l, &params, seed).unwrap();
        prop_assert!(is_proper_list_coloring(&g, &l, &out.coloring));
        prop_assert_eq!(&out.kept, &out.coloring.uncolored());
        for (i, &v) in out.kept.iter().enumerate() {
            for &u in g.neighbors(v) {
                if let Some(c) = out.coloring.get(u) {
                    prop_assert!(!out.lists.contains(i, c));
                }
            }
            prop_assert!(out.lists.list(i).iter().all(|&c| l.contains(v, c)));
        }
        prop_assert_eq!(out, run_round(&g, &l, &params, seed).unwrap());
    }

    #[test]
    fn survival_is_exactly_keep(n in 2usize..16, p in 0.1f64..0.9, ell in 2usize..6, eta in 0.01f64..0.99, slack in 0.0f64..4.0, seed in any::<u64>()) {
        let (g, l) = pair(n, p, 8, ell, seed);
        let g = g.filter_edges(|u, v| l.intersects(u, v));
        let d = max_metrics(&g, &l, 2).max_color_degree.max(1) as f64 + slack;
        let params = RoundParams::new(d, ell, 2, eta).unwrap();
        for v in 0..n {
            let c = l.list(v)[0];
            let pr = exact_survival_probability(&g, &l, &params, v, c).unwrap();
            prop_assert!((pr - params.keep).abs() <= 1e-12);
        }
    }

    #[test]
    fn nibble_coloring_grows_and_stays_proper(n in 10usize..80, p in 0.05f64..0.3, extra in 0u32..6, seed in any::<u64>()) {
        let g = generate(&GenSpec::gnp(n, p, seed)).unwrap();
        let l = ListAssignment::full_palette(n, g.max_degree() as u32 + 1 + extra);
        let lenient = OverrideParams { eta: None, codegree_exponent: 1.0, error_exponent: 1.0 };
        let out = run_nibble(&g, &l, &NibbleConfig::override_mode(0.1, 2, lenient), seed).unwrap();
        let mut phi = PartialColoring::new(n);
        let mut colored = 0;
        for r in &out.rounds {
            for &(v, c) in &r.colored {
                prop_assert!(phi.get(v).is_none());
                phi.set(v, c);
            }
            colored += r.colored.len();
            prop_assert_eq!(phi.domain_size(), colored);
            prop_assert!(is_proper_list_coloring(&g, &l, &phi));
            prop_assert_eq!(r.remaining, n - colored);
        }
        prop_assert_eq!(&out.remaining, &phi.uncolored());
        let induced = g.induced(&out.remaining);
        for (u, v) in out.graph.edges() {
            prop_assert!(induced.has_edge(u, v));
        }
        for (u, v) in induced.edges() {
            let shared = out.lists.list(u).iter().any(|&c| out.lists.contains(v, c));
            prop_assert!(!shared || out.graph.has_edge(u, v));
        }
    }

    #[test]
    fn schedule_invariants(d in 20.0f64..1e7, eps in 0.05f64..0.33) {
        let s = build_nibble_schedule(d, eps).unwrap();
        prop_assert!(s.len() <= s.iteration_cap);
        for i in 0..s.keep_seq.len() {
            prop_assert!(s.keep_seq[i] * s.uncolor_seq[i] < s.keep_seq[i]);
        }
        for c in s.ratio_checks.iter().chain(&s.hat_checks) {
            prop_assert!(!c.hypotheses_hold || c.holds);
        }
    }

    #[test]
    fn finisher_total_and_proper(n in 1usize..80, p in 0.0f64..0.3, extra in 0u32..40, seed in any::<u64>()) {
        let g = generate(&GenSpec::gnp(n, p, seed)).unwrap();
        let l = ListAssignment::full_palette(n, g.max_degree() as u32 + 1 + extra);
        let (phi, _) = finish(&g, &l, seed, 20).unwrap();
        prop_assert!(phi.is_total() && is_proper(&g, &phi));
        prop_assert_eq!(phi, finish(&g, &l, seed, 20).unwrap().0);
    }

    #[test]
    fn tails_are_probabilities(seed in any::<u64>(), tau in 0.0f64..12.0) {
        let e = random_structure(seed, 8, 8, Flavor::Exceptional).unwrap();
        let t = exact_tail(&e.space, e.structure.as_dyn(), tau).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&t));
        let mut mass = 0.0;
        e.space.for_each(|_, p| mass += p).unwrap();
        prop_assert!((mass - 1.0f64).abs() <= 1e-12);
    }

    #[test]
    fn convex_distance_dominates_directions(m in 2usize..7, seed in any::<u64>(), k in 1usize..8) {
        let mut rng = nibble::rng::rng_from_seed(seed);
        use rand::Rng as _;
        let set: Vec<Vec<usize>> = (0..k).map(|_| (0..m).map(|_| rng.gen_range(0..2)).collect()).collect();
        let x: Vec<usize> = (0..m).map(|_| rng.gen_range(0..2)).collect();
        let d = convex_distance(&x, &set).unwrap();
        for i in 0..m {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            prop_assert!(d + 1e-12 >= directional_distance(&x, &set, &e));
        }
        let lb = distance_lower_bound(&x, &set, 300, seed).unwrap();
        prop_assert!(lb <= d + 1e-9 && d - lb <= 1e-6);
    }

    #[test]
    fn sparsified_edges_are_a_subset(n in 2usize..60, p in 0.0f64..0.5, q in 1u32..20, ell in 1usize..4, seed in any::<u64>()) {
        let g = generate(&GenSpec::gnp(n, p, seed)).unwrap();
        let ell = ell.min(q as usize);
        let (l, e) = sparsify(&g, q, ell, seed).unwrap();
        prop_assert!(e.edges().all(|(u, v)| g.has_edge(u, v) && l.intersects(u, v)));
        prop_assert_eq!(e.m(), g.edges().filter(|&(u, v)| l.intersects(u, v)).count());
    }
}
