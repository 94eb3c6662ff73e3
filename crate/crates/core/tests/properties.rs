use proptest::prelude::*;
use sill_core::bridge::{disentangle, translate_typed};
use sill_core::congruence::{equiv_cp, equiv_hcp, rewrites_cp, rewrites_hcp};
use sill_core::harness::{float_mixes, gen_cp, gen_hcp, GenConfig};
use sill_core::reduction::{dm_less, reduce, Process};
use sill_core::surface::{parse_cp, parse_hcp, parse_type, Dialect};
use sill_core::typecheck::{check_cp, check_hcp_at, revalidate_cp, revalidate_hcp, CheckOptions};
use sill_core::{cp_to_hcp, Type};

fn cfg(dialect: Dialect) -> GenConfig {
    GenConfig {
        seed: 7,
        dialect,
        ..GenConfig::default()
    }
}

fn types() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![
        Just(Type::One),
        Just(Type::Bot),
        Just(Type::Zero),
        Just(Type::Top)
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        (inner.clone(), inner, 0..4u8).prop_map(|(a, b, k)| match k {
            0 => Type::tensor(a, b),
            1 => Type::par(a, b),
            2 => Type::plus(a, b),
            _ => Type::with(a, b),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn duality_is_an_involution(a in types()) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.dual().size(), a.size());
        prop_assert_ne!(a.dual(), a);
    }

    #[test]
    fn types_round_trip(a in types()) {
        prop_assert_eq!(parse_type(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn cp_terms_round_trip(i in 0..5000usize) {
        let (t, _, _) = gen_cp(&cfg(Dialect::Cp), i);
        prop_assert_eq!(parse_cp(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn hcp_terms_round_trip(i in 0..5000usize) {
        let (t, _, _) = gen_hcp(&cfg(Dialect::Hcp), i);
        prop_assert_eq!(parse_hcp(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn generated_derivations_revalidate(i in 0..5000usize) {
        let (_, _, d) = gen_cp(&cfg(Dialect::Cp), i);
        prop_assert!(revalidate_cp(&d));
        let (_, _, h) = gen_hcp(&cfg(Dialect::Hcp), i);
        prop_assert!(revalidate_hcp(&h));
    }

    #[test]
    fn cp_reduction_preserves_the_environment(i in 0..5000usize) {
        let (t, env, _) = gen_cp(&cfg(Dialect::Cp), i);
        for s in reduce(&t).steps {
            prop_assert!(check_cp(&s.term, &env).is_ok(), "{} : {}", s.term, env);
        }
    }

    #[test]
    fn hcp_reduction_preserves_the_hyper_environment(i in 0..5000usize) {
        let (t, _, d) = gen_hcp(&cfg(Dialect::Hcp), i);
        for s in reduce(&t).steps {
            prop_assert!(check_hcp_at(&s.term, &d.hyper, CheckOptions::default()).is_ok());
        }
    }

    #[test]
    fn every_redex_decreases_the_measure(i in 0..5000usize) {
        let (t, _, _) = gen_cp(&cfg(Dialect::Cp), i);
        for r in t.find_redexes() {
            let u = t.step(&r).unwrap();
            prop_assert!(dm_less(&u.measure(), &t.measure()), "{} on {}", r, t);
        }
    }

    #[test]
    fn rewrites_stay_congruent(i in 0..5000usize) {
        let (t, env, _) = gen_cp(&cfg(Dialect::Cp), i);
        for u in rewrites_cp(&t) {
            prop_assert!(equiv_cp(&t, &u) && equiv_cp(&u, &t));
            prop_assert!(check_cp(&u, &env).is_ok());
        }
        let (h, _, d) = gen_hcp(&cfg(Dialect::Hcp), i);
        for k in rewrites_hcp(&h) {
            prop_assert!(equiv_hcp(&h, &k) && equiv_hcp(&k, &h));
            prop_assert!(check_hcp_at(&k, &d.hyper, CheckOptions::default()).is_ok());
        }
    }

    #[test]
    fn translation_keeps_the_term_and_environment(i in 0..5000usize) {
        let (t, env, d) = gen_cp(&cfg(Dialect::Cp), i);
        let h = translate_typed(&d).unwrap();
        prop_assert_eq!(&h.term, &cp_to_hcp(&t));
        prop_assert_eq!(h.hyper.flatten(), Some(env));
    }

    #[test]
    fn disentangled_components_recombine(i in 0..5000usize) {
        let (_, _, d) = gen_hcp(&cfg(Dialect::Hcp), i);
        let r = disentangle(&d).unwrap();
        prop_assert_eq!(r.derivations.len(), d.hyper.envs().len());
        prop_assert!(equiv_hcp(&r.recombined, &float_mixes(&d)));
    }
}
