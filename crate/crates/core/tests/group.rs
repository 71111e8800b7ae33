use proptest::prelude::*;

use torsionlab::group::{fox_derivative, parse_presentation, GroupRingElement, Word};

const GENS: usize = 3;

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0..GENS, prop::bool::ANY), 0..24)
        .prop_map(|v| Word::from_powers(&v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect::<Vec<_>>()))
}

fn element(w: &Word) -> GroupRingElement {
    GroupRingElement::from_word(w.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fundamental_identity(w in word()) {
        // sum_i dw/dx_i (x_i - 1) = w - 1
        let mut lhs = GroupRingElement::zero();
        for g in 0..GENS {
            let x = element(&Word::generator(g)).sub(&GroupRingElement::one());
            lhs = lhs.add(&fox_derivative(&w, g).mul(&x));
        }
        prop_assert_eq!(lhs, element(&w).sub(&GroupRingElement::one()));
    }

    #[test]
    fn product_rule(u in word(), v in word()) {
        for g in 0..GENS {
            let lhs = fox_derivative(&u.mul(&v), g);
            let rhs = fox_derivative(&u, g).add(&element(&u).mul(&fox_derivative(&v, g)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_rule(u in word()) {
        for g in 0..GENS {
            let lhs = fox_derivative(&u.inverse(), g);
            let rhs = element(&u.inverse()).mul(&fox_derivative(&u, g)).neg();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn words_round_trip_through_text(w in word()) {
        let p = parse_presentation("gens a b c ;").unwrap();
        let text = w.format(&p.generators);
        let back = if text.is_empty() || text == "1" { Word::empty() } else { p.parse_word(&text).unwrap() };
        prop_assert_eq!(back, w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
    }
}

#[test]
fn knot_presentations_have_deficiency_one() {
    for text in [
        "gens x y ; let W = x^-1 y x y^-1 ; rel W x W^-1 y^-1 ;",
        "gens a b ; rel a b a b^-1 a^-1 b^-1 ;",
        "gens a b ; let w = b a b^-1 a^-1 b^-1 a b ; rel a w a^-1 w^-1 ;",
    ] {
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.deficiency(), 1, "{text}");
        for r in &p.relators {
            assert!(r.is_reduced());
            assert_eq!(r.exponent_sums(p.num_generators()).iter().sum::<i64>(), 0);
        }
    }
}
