use approx::relative_eq;
use proptest::prelude::*;
use triadic_core::analysis::ranking_concordance;
use triadic_core::indices::{koczkodaj_index, natural_index, saaty_ci, scale_dependent_index, IndexDescriptor};
use triadic_core::report::to_fixed_json;
use triadic_core::{
    audit, catalog, check_axiom, eval_catalog, lookup, AuditConfig, Axiom, Permutation, Triad, Verdict,
};

fn triad() -> impl Strategy<Value = Triad> {
    let e = -(9f64.ln())..9f64.ln();
    (e.clone(), e.clone(), e).prop_map(|(a, b, c)| Triad::new(a.exp(), b.exp(), c.exp()).unwrap())
}

fn consistent_triad() -> impl Strategy<Value = Triad> {
    let w = 0.1f64..10.0;
    (w.clone(), w.clone(), w).prop_map(|(a, b, c)| Triad::from_weights(a, b, c).unwrap())
}

fn close(a: f64, b: f64) -> bool {
    relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-12)
}

proptest! {
    #[test]
    fn scaling_keeps_ratio(t in triad(), k in 0.1f64..10.0) {
        prop_assert!(close(t.scale(k).unwrap().consistency_ratio(), t.consistency_ratio()));
    }

    #[test]
    fn power_raises_ratio(t in triad(), b in -3.0f64..3.0) {
        let p = t.power(b).unwrap();
        prop_assert!(close(p.consistency_ratio(), t.consistency_ratio().powf(b)));
    }

    #[test]
    fn canonical_ratio_is_natural(t in triad(), k in 0.1f64..10.0) {
        let x = t.consistency_ratio();
        let r = t.canonicalize().ratio;
        prop_assert!(close(r, x.max(1.0 / x)));
        for perm in Permutation::all(3) {
            prop_assert!(close(t.permuted(&perm).unwrap().canonicalize().ratio, r));
        }
        prop_assert!(close(t.transpose().canonicalize().ratio, r));
        prop_assert!(close(t.scale(k).unwrap().canonicalize().ratio, r));
    }

    #[test]
    fn canonical_trace_replays_exactly(t in triad()) {
        let form = t.canonicalize();
        let steps = form.replay(&t);
        prop_assert_eq!(steps.last().copied(), Some(form.canonical_triad()));
        prop_assert_eq!(form.canonical_triad(), Triad::new(1.0, form.ratio, 1.0).unwrap());
    }

    #[test]
    fn permutation_inverse_round_trip(t in triad(), which in 0usize..6) {
        let perm = &Permutation::all(3)[which];
        let m = t.to_matrix();
        let back = m.apply_permutation(perm).unwrap().apply_permutation(&perm.inverse()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn natural_at_least_one(t in triad(), c in consistent_triad()) {
        prop_assert!(natural_index(&t) >= 1.0);
        prop_assert_eq!(natural_index(&t) <= 1.0 + 1e-9, t.is_consistent());
        prop_assert!((natural_index(&c) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn scale_dependent_zero_iff_consistent(t in triad(), c in consistent_triad()) {
        prop_assert!(scale_dependent_index(&t) >= 0.0);
        prop_assert!(scale_dependent_index(&c) <= 1e-9 * c.t13().max(1.0) * 10.0);
        if !t.is_consistent() {
            prop_assert!(scale_dependent_index(&t) > 0.0);
        }
    }

    #[test]
    fn koczkodaj_natural_identity(t in triad()) {
        prop_assert!(close(koczkodaj_index(&t), 1.0 - 1.0 / natural_index(&t)));
    }

    #[test]
    fn cx2_is_negated_natural(t in triad()) {
        prop_assert_eq!(eval_catalog("cx2", &t).unwrap(), -natural_index(&t));
    }

    #[test]
    fn discretised_tracks_natural(s in triad(), t in triad()) {
        let d = |x: &Triad| eval_catalog("discretised_natural", x).unwrap();
        if natural_index(&s) <= natural_index(&t) {
            prop_assert!(d(&s) <= d(&t));
        }
        if natural_index(&t) >= 2.0 {
            prop_assert_eq!(d(&t), 2.0);
        }
    }

    #[test]
    fn ratio_indices_are_invariant(t in triad(), k in 0.1f64..10.0) {
        let hta = Triad::new(1.0, t.t13() / t.t23() / t.t12(), 1.0).unwrap();
        let base = t.scale(1.0 / t.t12()).unwrap();
        for f in [natural_index, koczkodaj_index, saaty_ci] {
            let v = f(&t);
            for perm in Permutation::all(3) {
                prop_assert!(close(f(&t.permuted(&perm).unwrap()), v));
            }
            prop_assert!(close(f(&t.transpose()), v));
            prop_assert!(close(f(&t.scale(k).unwrap()), v));
            prop_assert!(close(f(&base.hta_reduce()), f(&base)));
            prop_assert!(close(f(&hta), v));
        }
    }
}

fn quick(samples: usize, seed: u64) -> AuditConfig {
    AuditConfig::default().with_samples(samples).with_seed(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn every_failure_replays(seed in 0u64..1000) {
        for index in catalog() {
            let report = audit(index, &Axiom::ALL, &quick(40, seed)).unwrap();
            for v in &report.verdicts {
                match (&v.status, &v.witness) {
                    (Verdict::Fail, Some(w)) => {
                        prop_assert!(w.replay(index).is_ok(), "{} {}: {:?}", index.id, v.axiom, w.replay(index));
                        // A witness survives a trip through the report format.
                        let json = to_fixed_json(w).unwrap();
                        let back: triadic_core::Witness = serde_json::from_str(&json).unwrap();
                        prop_assert_eq!(&back, w);
                        prop_assert!(back.replay(index).is_ok());
                    }
                    (Verdict::Pass, None) => {}
                    other => prop_assert!(false, "inconsistent verdict {:?}", other),
                }
            }
        }
    }

    #[test]
    fn more_samples_never_unfail(seed in 0u64..1000, which in 0usize..12) {
        let index = &catalog()[which];
        let small = audit(index, &Axiom::ALL, &quick(20, seed)).unwrap();
        let large = audit(index, &Axiom::ALL, &quick(200, seed)).unwrap();
        for (s, l) in small.verdicts.iter().zip(&large.verdicts) {
            if s.status == Verdict::Fail {
                prop_assert_eq!(l.status, Verdict::Fail);
                prop_assert_eq!(&l.witness, &s.witness);
            }
        }
    }

    #[test]
    fn functions_of_canonical_ratio_pass_ipa(
        seed in 0u64..1000,
        p in 0.2f64..3.0,
        c in 0.5f64..5.0,
        step in 1.1f64..3.0,
    ) {
        let shapes = [
            IndexDescriptor::custom("power", move |t: &Triad| t.canonicalize().ratio.powf(p)),
            IndexDescriptor::custom("wave", move |t: &Triad| (c * t.canonicalize().ratio).sin()),
            IndexDescriptor::custom("steps", move |t: &Triad| (t.canonicalize().ratio / step).floor()),
        ];
        for index in &shapes {
            let v = check_axiom(index, Axiom::Ipa, &quick(100, seed)).unwrap();
            prop_assert_eq!(v.status, Verdict::Pass, "{}: {:?}", index.id, v.witness);
        }
    }

    #[test]
    fn concordance_swap_symmetry(seed in 0u64..1000, a in 0usize..12, b in 0usize..12) {
        let (ia, ib) = (&catalog()[a], &catalog()[b]);
        let cfg = quick(300, seed);
        let ab = ranking_concordance(ia, ib, &cfg).unwrap();
        let ba = ranking_concordance(ib, ia, &cfg).unwrap();
        prop_assert_eq!(ab.concordant, ba.concordant);
        prop_assert_eq!(ab.discordant, ba.discordant);
        prop_assert_eq!(ab.ties_a_only, ba.ties_b_only);
        prop_assert_eq!(ab.ties_b_only, ba.ties_a_only);
        prop_assert_eq!(ab.ties_both, ba.ties_both);
        prop_assert_eq!(ab.kendall_tau_b, ba.kendall_tau_b);
    }

    #[test]
    fn increasing_transforms_of_natural_agree(seed in 0u64..1000, p in 0.1f64..4.0) {
        let f = IndexDescriptor::custom("bent", move |t: &Triad| natural_index(t).powf(p) + natural_index(t).ln());
        let stats = ranking_concordance(lookup("natural").unwrap(), &f, &quick(500, seed)).unwrap();
        prop_assert_eq!(stats.discordant, 0);
        prop_assert_eq!(stats.kendall_tau_b, Some(1.0));
    }
}

#[test]
fn audits_are_deterministic_across_thread_counts() {
    let cfg = quick(300, 5);
    let index = lookup("saaty_ci").unwrap();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| audit(index, &Axiom::ALL, &cfg).unwrap());
    let parallel = audit(index, &Axiom::ALL, &cfg).unwrap();
    assert_eq!(to_fixed_json(&serial).unwrap(), to_fixed_json(&parallel).unwrap());
    // Axiom order in the request does not matter.
    let mut reversed = Axiom::ALL.to_vec();
    reversed.reverse();
    assert_eq!(audit(index, &reversed, &cfg).unwrap(), parallel);
}
