use liegen_core::classical::{
    centralizer_dim_lie, class_rep, group_dim, orbit_dim, AlgebraKind, ClassLabel, MatrixAlgebra, Partition,
};
use liegen_core::genconj::{e_of_class, GenerationWitness, GroupSpec, Problem, SeedOutcome};
use liegen_core::liealg::derived_subalgebra;
use liegen_core::reps::{build_for_group, generic_freeness_sample, FreenessVerdict, ModuleTag};
use liegen_core::{ChevalleyAlgebra, Isogeny, LieAlgebra, TypeLabel};
use proptest::prelude::*;

#[test]
fn witnesses_survive_serialization() {
    let spec = GroupSpec::new(TypeLabel::B, 3, 5).unwrap();
    let label = ClassLabel::RootElement;
    let e = e_of_class(spec, &label).unwrap();
    let problem = Problem::for_class(spec, &label).unwrap();
    let outcomes = problem.search(e, 16, &[4, 5]).unwrap();
    for o in &outcomes {
        let SeedOutcome::Found(w) = o else { panic!("no witness for seed: {o:?}") };
        let text = serde_json::to_string(w).unwrap();
        let back: GenerationWitness = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, w);
        assert_eq!(problem.replay(&back), (w.generated_dim, true));
    }
    assert_eq!(outcomes, problem.search(e, 16, &[4, 5]).unwrap());
}

#[test]
fn chevalley_and_matrix_type_a_agree() {
    for (n, p) in [(3, 5), (4, 2), (4, 3)] {
        let chev = ChevalleyAlgebra::new(TypeLabel::A, n - 1, p, Isogeny::SimplyConnected).unwrap();
        let sl = MatrixAlgebra::realize(AlgebraKind::Sl, n, p).unwrap();
        assert_eq!(chev.dim(), sl.dim());
        assert_eq!(derived_subalgebra(&chev).dim(), derived_subalgebra(&sl).dim(), "sl_{n} p={p}");
    }
}

#[test]
fn adjoint_module_matches_group_dimension() {
    let spec = GroupSpec::new(TypeLabel::C, 3, 7).unwrap();
    let (_, m) = build_for_group(spec, &ModuleTag::AdjointFactor).unwrap();
    assert_eq!(m.dim(), 21);
    let r = generic_freeness_sample(&m, 8, &[1, 2]);
    // a regular semisimple element is centralized by a Cartan subalgebra
    assert_eq!(r.generic_stabilizer_dim(), Some(3));
    assert_eq!(r.verdict, FreenessVerdict::Not);
}

fn small_algebra() -> impl Strategy<Value = (TypeLabel, usize, u32)> {
    prop_oneof![
        (1usize..4).prop_map(|r| (TypeLabel::A, r)),
        (2usize..4).prop_map(|r| (TypeLabel::B, r)),
        (2usize..4).prop_map(|r| (TypeLabel::C, r)),
        Just((TypeLabel::D, 4)),
        Just((TypeLabel::G, 2)),
    ]
    .prop_flat_map(|(t, r)| prop::sample::select(vec![2u32, 3, 5, 7]).prop_map(move |p| (t, r, p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn root_groups_are_automorphisms(
        (t, r, p) in small_algebra(),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let alg = ChevalleyAlgebra::new(t, r, p, Isogeny::Adjoint).unwrap();
        let f = alg.field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = f.random_vector(&mut rng, alg.dim());
        let y = f.random_vector(&mut rng, alg.dim());
        let root = rng.gen_range(0..alg.num_root_groups());
        let s = f.random(&mut rng);
        let g = |v: &[u32]| alg.apply_root_group(root, s, v);
        prop_assert_eq!(alg.bracket(&g(&x), &g(&y)), g(&alg.bracket(&x, &y)));
    }

    #[test]
    fn gl_orbit_dims_match_centralizers(parts in prop::collection::vec(1usize..4, 1..5), p in prop::sample::select(vec![2u32, 3, 5])) {
        let partition = Partition::new(parts).unwrap();
        let n = partition.weight();
        let alg = MatrixAlgebra::realize(AlgebraKind::Gl, n, p).unwrap();
        let label = ClassLabel::nilpotent(partition);
        let x = class_rep(&label, &alg).unwrap();
        prop_assert_eq!(
            orbit_dim(&label, AlgebraKind::Gl, n, p).unwrap(),
            group_dim(AlgebraKind::Gl, n) - centralizer_dim_lie(&alg, &x)
        );
    }
}
