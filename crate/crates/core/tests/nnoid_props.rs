use ch2noid::exactnum::{resultant, ProjPoint};
use ch2noid::nnoid::{
    build_higgs, classify_puncture, random_nnoid, trace_phi_squared, EndType, Nilpotency, NnoidSpec,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_instances_satisfy_the_data_invariants(seed in any::<u64>(), n in 4usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_nnoid(n, &mut rng).unwrap();
        prop_assert_eq!(data.n(), n);
        prop_assert!(data.omega().residues().iter().all(|r| !r.is_zero()));
        let total = data.omega().residues().iter().fold(ch2noid::exactnum::GaussianRational::zero(), |a, r| &a + r);
        prop_assert!(total.is_zero());
        prop_assert!(!resultant(data.g1(), data.g2()).unwrap().is_zero());
        for p in data.punctures().iter() {
            prop_assert!(!data.q().eval(&ProjPoint::Finite(p.clone())).is_zero());
        }
        // The serialized form validates back to the same data.
        let spec = NnoidSpec::from_data(&data);
        let json = serde_json::to_string(&spec).unwrap();
        let back: NnoidSpec = serde_json::from_str(&json).unwrap();
        let (again, chart) = back.normalize().unwrap();
        prop_assert!(chart.is_identity());
        prop_assert_eq!(NnoidSpec::from_data(&again), spec);
    }

    #[test]
    fn traces_vanish_and_ends_are_type_ii(seed in any::<u64>(), n in 4usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_nnoid(n, &mut rng).unwrap();
        let phi = build_higgs(&data);
        prop_assert!(phi.trace().is_zero());
        prop_assert!(trace_phi_squared(&phi).is_zero());
        for i in 0..n {
            let r = classify_puncture(&data, &phi, i).unwrap();
            prop_assert!(r.methods_agree);
            prop_assert_eq!(r.nilpotency, Nilpotency::Index(3));
            prop_assert_eq!(r.end_type, Some(EndType::TypeII));
            prop_assert!(r.flag_axioms_hold);
        }
    }

    #[test]
    fn moving_a_puncture_to_infinity_keeps_the_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_nnoid(5, &mut rng).unwrap();
        let mut spec = NnoidSpec::from_data(&data);
        // Send the last puncture to ∞ by a Möbius map applied to every piece of data.
        let a = data.punctures().points()[4].clone();
        let to_inf = ch2noid::sphere::Mobius::invert_around(&a);
        spec.punctures = spec.punctures.iter().map(|p| to_inf.apply(p)).collect();
        prop_assert_eq!(&spec.punctures[4], &ProjPoint::Infinity);
        spec.g1 = to_inf.push_forward(&spec.g1);
        spec.g2 = to_inf.push_forward(&spec.g2);
        spec.q = to_inf.push_forward(&spec.q);
        let (moved, _) = spec.normalize().unwrap();
        let phi = build_higgs(&moved);
        prop_assert!(trace_phi_squared(&phi).is_zero());
        for i in 0..5 {
            prop_assert_eq!(classify_puncture(&moved, &phi, i).unwrap().end_type, Some(EndType::TypeII));
        }
    }
}
