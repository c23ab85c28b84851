//! Property tests over randomly generated words, tuples and quadratic words.

use proptest::prelude::*;

use quadgroup::group::{tuple_conjugacy_key, FreeGroup, Group};
use quadgroup::product::{FactorSpec, ProductGroup};
use quadgroup::quadratic::{canonicalize, classify_quadratic, polygon_type, FormKind};
use quadgroup::surface::{apply_move, generating_moves, relator_value, Move, SurfaceGroupSpec};
use quadgroup::words::{Letter, Word};

fn word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    prop::collection::vec(prop::sample::select(letters), 0..=max_len).prop_map(|raw| Word::from_signed(&raw))
}

fn z2_z3() -> ProductGroup {
    ProductGroup::new(vec![FactorSpec::Cyclic { order: 2 }, FactorSpec::Cyclic { order: 3 }]).unwrap()
}

/// Random, not necessarily reduced, syllable sequences in Z2 * Z3.
fn product_element() -> impl Strategy<Value = String> {
    prop::collection::vec((0usize..2, 1u32..3), 0..6).prop_map(|syllables| {
        let parts: Vec<String> = syllables
            .into_iter()
            .map(|(f, e)| if f == 0 { "0:1".to_string() } else { format!("1:{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    })
}

/// Each of `n` variables appears exactly twice with arbitrary signs.
fn quadratic_word(max_vars: u32) -> impl Strategy<Value = Word> {
    (1..=max_vars)
        .prop_flat_map(|n| {
            let slots: Vec<u32> = (1..=n).flat_map(|v| [v, v]).collect();
            (Just(slots.clone()).prop_shuffle(), prop::collection::vec(any::<bool>(), slots.len()))
        })
        .prop_map(|(slots, signs)| Word::from_letters(slots.into_iter().zip(signs).map(|(v, s)| Letter::new(v, s))))
}

fn is_freely_reduced(w: &Word) -> bool {
    w.letters().windows(2).all(|p| p[0] != p[1].inverse())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn free_group_axioms(x in word(3, 10), y in word(3, 10), z in word(3, 10)) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert_eq!(x.mul(&Word::identity()), x.clone());
        prop_assert!(is_freely_reduced(&x.mul(&y)));
        prop_assert_eq!(x.mul(&y).inverse(), y.inverse().mul(&x.inverse()));
    }

    #[test]
    fn commutator_and_powers(x in word(2, 8), y in word(2, 8), p in -4i64..5, q in -4i64..5) {
        let c = Word::commutator(&x, &y);
        prop_assert!(c.in_commutator_subgroup());
        prop_assert_eq!(Word::commutator(&y, &x), c.inverse());
        prop_assert_eq!(x.pow(p).mul(&x.pow(-p)), Word::identity());
        prop_assert_eq!(x.pow(p).mul(&x.pow(q)), x.pow(p + q));
    }

    #[test]
    fn cyclic_reduction_is_a_conjugate(x in word(3, 12)) {
        let (core, conj) = x.cyclic_core();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(conj.mul(&core).mul(&conj.inverse()), x);
    }

    #[test]
    fn text_round_trip(x in word(4, 12)) {
        let text = x.to_text(quadgroup::words::Alphabet::Generators);
        prop_assert_eq!(Word::parse(&text).unwrap(), x);
    }

    #[test]
    fn product_group_axioms(a in product_element(), b in product_element(), c in product_element()) {
        let g = z2_z3();
        let (a, b, c) = (g.parse(&a).unwrap(), g.parse(&b).unwrap(), g.parse(&c).unwrap());
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        prop_assert!(g.is_identity(&g.mul(&a, &g.inverse(&a))));
        prop_assert_eq!(g.parse(&g.format(&a)).unwrap(), a);
    }

    #[test]
    fn tuple_key_is_conjugation_invariant(t in prop::collection::vec(word(2, 6), 1..4), by in word(2, 6)) {
        let g = FreeGroup::new(2);
        let conj: Vec<Word> = t.iter().map(|x| g.conjugate(x, &by)).collect();
        let key = tuple_conjugacy_key(&g, &t);
        prop_assert_eq!(tuple_conjugacy_key(&g, &conj), key.clone());
        // The key is itself a conjugate of the tuple.
        prop_assert_eq!(tuple_conjugacy_key(&g, &key), key);
    }

    #[test]
    fn product_tuple_key_is_conjugation_invariant(t in prop::collection::vec(product_element(), 1..4), by in product_element()) {
        let g = z2_z3();
        let t: Vec<_> = t.iter().map(|x| g.parse(x).unwrap()).collect();
        let by = g.parse(&by).unwrap();
        let conj: Vec<_> = t.iter().map(|x| g.conjugate(x, &by)).collect();
        prop_assert_eq!(tuple_conjugacy_key(&g, &conj), tuple_conjugacy_key(&g, &t));
    }

    #[test]
    fn orientable_moves_preserve_homomorphisms(a in word(2, 4), b in word(2, 4), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..12)) {
        let g = FreeGroup::new(2);
        let spec = SurfaceGroupSpec::orientable(2);
        let moves: Vec<Move<Word>> = generating_moves(&spec);
        // [a,b][b,a] = 1
        let mut tuple = vec![a.clone(), b.clone(), b, a];
        for pick in picks {
            let m = pick.get(&moves);
            let next = apply_move(&g, &tuple, m);
            prop_assert!(relator_value(&g, &spec, &next).is_identity(), "{m}");
            prop_assert_eq!(apply_move(&g, &next, &m.inverse(&g)), tuple.clone());
            tuple = next;
        }
    }

    #[test]
    fn klein_moves_preserve_homomorphisms(x in word(2, 5), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..12)) {
        let g = FreeGroup::new(2);
        let spec = SurfaceGroupSpec::non_orientable(2);
        let moves: Vec<Move<Word>> = generating_moves(&spec);
        let mut tuple = vec![x.clone(), x.inverse()];
        for pick in picks {
            let m = pick.get(&moves);
            let next = apply_move(&g, &tuple, m);
            prop_assert!(relator_value(&g, &spec, &next).is_identity(), "{m}");
            prop_assert_eq!(apply_move(&g, &next, &m.inverse(&g)), tuple.clone());
            tuple = next;
        }
    }

    #[test]
    fn canonical_form_matches_polygon_type(w in quadratic_word(5)) {
        let q = classify_quadratic(&w, w.max_generator()).unwrap();
        let (form, sub) = canonicalize(&q);
        let surface = polygon_type(&q);
        match form.kind {
            FormKind::Orientable => prop_assert!(surface.orientable),
            FormKind::NonOrientable => prop_assert!(!surface.orientable),
            FormKind::Trivial => prop_assert_eq!(surface.genus, 0),
        }
        prop_assert_eq!(form.genus, surface.genus);
        prop_assert_eq!(sub.replay(q.word()), form.word());
        prop_assert_eq!(sub.apply(q.word()), form.word());
    }
}
