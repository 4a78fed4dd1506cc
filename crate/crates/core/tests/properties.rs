mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rinf_core::classify::StepKind;
use rinf_core::{
    automorphisms_finite, classify, family_of, kb_complete, reidemeister_finite_burnside, survivors_census,
    todd_coxeter, twisted_classes_finite, verify_goldberg, BraidGroupId, Family, FiniteEndo, FiniteGroup, Flavor,
    GoldbergStatus, KbBudget, Letter, ReidemeisterCount, Rule, SurfaceSpec, Verdict, Word, DEFAULT_MAX_COSETS,
};

fn random_word(gens: &[rinf_core::GeneratorSymbol], len: usize, rng: &mut ChaCha8Rng) -> Word {
    Word::reduce((0..len).map(|_| Letter::new(gens[rng.gen_range(0..gens.len())].clone(), rng.gen_bool(0.5))))
}

#[test]
fn goldberg_grid_certificates_are_consistent() {
    for p in 1..=3 {
        for n in 1..=2 {
            for spec in [SurfaceSpec::sphere(p + 1), SurfaceSpec::orientable(1, p), SurfaceSpec::non_orientable(1, p).unwrap()] {
                let cert = verify_goldberg(spec, n, &KbBudget::default()).unwrap();
                assert!(!matches!(cert.status, GoldbergStatus::Refuted { .. }), "{spec} n={n}");
                if cert.status.is_verified() {
                    assert_eq!(cert.quotient.abelian_invariants(), cert.target.abelian_invariants(), "{spec} n={n}");
                }
                if spec.orientable {
                    assert!(survivors_census(&cert.quotient).other.is_empty(), "{spec} n={n}");
                }
            }
        }
    }
}

#[test]
fn rewriting_and_enumeration_agree_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for f in common::fixtures() {
        let gens = f.presentation.generators().to_vec();
        if gens.is_empty() {
            continue;
        }
        let rs = kb_complete(f.presentation.relators(), &gens, &KbBudget::default()).unwrap();
        let table = todd_coxeter(&f.presentation, DEFAULT_MAX_COSETS).unwrap();
        for _ in 0..200 {
            let u = random_word(&gens, rng.gen_range(0..12), &mut rng);
            let v = random_word(&gens, rng.gen_range(0..12), &mut rng);
            let by_table = table.trace(0, &u).unwrap() == table.trace(0, &v).unwrap();
            assert_eq!(rs.words_equal(&u, &v).unwrap(), by_table, "{}: {u} vs {v}", f.name);
        }
    }
}

fn random_small_group(rng: &mut ChaCha8Rng, pool: &[FiniteGroup]) -> FiniteGroup {
    loop {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if a.order() * b.order() <= 24 {
            return a.product(b);
        }
    }
}

#[test]
fn orbit_counting_matches_burnside_on_random_groups() {
    let pool: Vec<FiniteGroup> = common::fixtures().iter().filter(|f| f.order <= 12).map(common::group).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let g = random_small_group(&mut rng, &pool);
        let autos = automorphisms_finite(&g, 24).unwrap();
        for f in autos.iter().take(24) {
            let orbits = twisted_classes_finite(&g, f).len() as u64;
            assert_eq!(ReidemeisterCount::finite(orbits), reidemeister_finite_burnside(&g, f));
        }
    }
}

#[test]
fn inner_twists_preserve_reidemeister_numbers() {
    for fixture in common::fixtures() {
        let g = common::group(&fixture);
        for f in automorphisms_finite(&g, 16).unwrap() {
            let r = twisted_classes_finite(&g, &f).len();
            for c in 0..g.order() {
                let twisted = f.compose(&FiniteEndo::conjugation(&g, c));
                assert_eq!(twisted_classes_finite(&g, &twisted).len(), r, "{}", fixture.name);
            }
        }
    }
}

#[test]
fn classification_is_total_and_coherent() {
    for g in 0..=5 {
        for p in 0..=5 {
            let surface = SurfaceSpec::orientable(g, p);
            let family = family_of(surface).unwrap();
            for n in 1..=10 {
                let run = |flavor| classify(BraidGroupId { surface, strands: n, flavor }).unwrap();
                let pure = run(Flavor::Pure);
                let full = run(Flavor::Full);
                assert_eq!(pure, run(Flavor::Pure));
                for s in [&pure, &full] {
                    assert!(s.trace.is_well_founded());
                    if s.verdict != Verdict::Unknown {
                        assert!(s.trace.steps.iter().any(|st| matches!(st.kind, StepKind::Axiom | StepKind::Computation)));
                    }
                }
                if family != Family::F3 {
                    assert_eq!(pure.verdict, full.verdict, "({g},{p},{n})");
                } else {
                    assert_eq!(pure.verdict == Verdict::Unknown, n >= 2);
                }
            }
        }
    }
}

#[test]
fn small_no_verdicts_link_computations() {
    let finite = [(0, 0, 2, Flavor::Pure), (0, 0, 3, Flavor::Pure), (0, 0, 2, Flavor::Full), (0, 0, 3, Flavor::Full)];
    for (g, p, n, flavor) in finite {
        let s = classify(BraidGroupId { surface: SurfaceSpec::orientable(g, p), strands: n, flavor }).unwrap();
        assert_eq!(s.verdict, Verdict::No);
        let last = s.trace.steps.last().unwrap();
        assert_eq!(last.rule, Rule::FiniteGroupNo);
        let linked = last
            .premises
            .iter()
            .filter_map(|&i| s.trace.steps[i].computation.as_ref())
            .find(|c| c.operation == "min_reidemeister_finite")
            .unwrap();
        assert!(!linked.value.is_infinite());
    }
    let infinite_cyclic = [(0, 1, 2, Flavor::Pure), (0, 1, 2, Flavor::Full), (0, 2, 1, Flavor::Pure)];
    for (g, p, n, flavor) in infinite_cyclic {
        let s = classify(BraidGroupId { surface: SurfaceSpec::orientable(g, p), strands: n, flavor }).unwrap();
        assert_eq!(s.verdict, Verdict::No);
        let c = s.trace.steps.iter().find_map(|st| st.computation.as_ref()).unwrap();
        assert_eq!(c.operation, "reidemeister_abelian");
        assert_eq!(c.input, "[[-1]]");
        assert_eq!(c.value, ReidemeisterCount::finite(2));
    }
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let cert = verify_goldberg(SurfaceSpec::orientable(1, 1), 2, &KbBudget::default()).unwrap();
    let a = serde_json::to_string(&cert).unwrap();
    let b = serde_json::to_string(&verify_goldberg(SurfaceSpec::orientable(1, 1), 2, &KbBudget::default()).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let back: rinf_core::Presentation = serde_json::from_value(v["quotient"].clone()).unwrap();
    assert_eq!(back, cert.quotient);
    for f in common::fixtures() {
        let g = common::group(&f);
        let text = serde_json::to_string(&g).unwrap();
        let again: FiniteGroup = serde_json::from_str(&text).unwrap();
        assert_eq!(again, g);
    }
}
