use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wcbv::lambda::random::random_closed_term;
use wcbv::lambda::{cbn_step, cbv_step_leftmost, parse_term, reduce, reduce_with, Policy, Strategy, Term};

fn term(seed: u64, size: u64) -> Term {
    random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_the_identity(seed in any::<u64>(), size in 2u64..60) {
        let t = term(seed, size);
        let back = parse_term(&t.to_string()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.size(), size);
    }

    #[test]
    fn random_policy_agrees_with_leftmost(seed in any::<u64>(), size in 2u64..40, policy_seed in any::<u64>()) {
        let t = term(seed, size);
        let left = reduce(&t, Strategy::Cbv, 500);
        prop_assume!(left.outcome.is_normal());
        let rand = reduce_with(&t, Policy::Random { seed: policy_seed }, 500);
        prop_assert!(rand.outcome.is_normal());
        prop_assert_eq!(rand.steps, left.steps);
        prop_assert!(rand.outcome.term().alpha_eq(left.outcome.term()));
    }

    #[test]
    fn steps_add_up(seed in any::<u64>(), size in 2u64..40, cut in 0u64..20) {
        let t = term(seed, size);
        let whole = reduce(&t, Strategy::Cbv, 300);
        prop_assume!(whole.outcome.is_normal());
        let first = reduce(&t, Strategy::Cbv, cut);
        let rest = reduce(first.outcome.term(), Strategy::Cbv, 300);
        prop_assert_eq!(first.steps + rest.steps, whole.steps);
        prop_assert!(rest.outcome.term().alpha_eq(whole.outcome.term()));
    }

    #[test]
    fn reduction_keeps_terms_closed(seed in any::<u64>(), size in 2u64..40) {
        let mut t = term(seed, size);
        let mut n = t.clone();
        for _ in 0..100 {
            match cbv_step_leftmost(&t) {
                Some(next) => { prop_assert!(next.is_closed()); t = next; }
                None => break,
            }
        }
        for _ in 0..100 {
            match cbn_step(&n) {
                Some(next) => { prop_assert!(next.is_closed()); n = next; }
                None => break,
            }
        }
        prop_assert_eq!(reduce(&t, Strategy::Cbv, 0).open_argument_steps, 0);
    }

    #[test]
    fn closed_normal_forms_are_values(seed in any::<u64>(), size in 2u64..40) {
        let t = term(seed, size);
        let r = reduce(&t, Strategy::Cbv, 300);
        if r.outcome.is_normal() {
            prop_assert!(r.outcome.term().is_abs());
        }
        let r = reduce(&t, Strategy::Cbn, 300);
        if r.outcome.is_normal() {
            prop_assert!(r.outcome.term().is_abs());
        }
    }
}

#[test]
fn worked_example_reduces_in_two_steps() {
    let m = parse_term("(\\x. (\\y. x) x) (\\z. z)").unwrap();
    let r = reduce(&m, Strategy::Cbv, 10);
    assert_eq!(r.steps, 2);
    assert!(r.outcome.term().alpha_eq(&parse_term("\\z. z").unwrap()));
}
