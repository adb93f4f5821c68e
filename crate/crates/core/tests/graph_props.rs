use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wcbv::crs::{find_redexes, reduce_crs};
use wcbv::encode::encode_cbv;
use wcbv::graph::{find_redex, graph_reduce, GraphOutcome, GraphSystem, TermGraph};
use wcbv::lambda::random::{random_closed_term, two_tower};
use wcbv::lambda::{reduce, Strategy, Term};

fn term(seed: u64, size: u64) -> Term {
    random_closed_term(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graphs_reduce_in_exactly_the_term_steps(seed in any::<u64>(), size in 2u64..40) {
        let m = term(seed, size);
        let phi = encode_cbv(&m).unwrap();
        let gs = GraphSystem::from_crs(&phi.system);
        let crs = reduce_crs(&phi.system, &phi.term, 300);
        let run = graph_reduce(TermGraph::from_term(&phi.term), &gs, 300).unwrap();
        prop_assert_eq!(run.steps, crs.steps);
        prop_assert_eq!(run.outcome.is_normal(), crs.outcome.is_normal());
        let unfolded = run.graph.to_term().unwrap();
        prop_assert_eq!(&unfolded, crs.outcome.term());
        // Normal forms correspond.
        prop_assert_eq!(find_redex(&run.graph, &gs).is_none(), find_redexes(&phi.system, &unfolded).is_empty());
    }

    #[test]
    fn graph_sizes_and_work_stay_bounded(seed in any::<u64>(), size in 2u64..40) {
        let m = term(seed, size);
        let phi = encode_cbv(&m).unwrap();
        let gs = GraphSystem::from_crs(&phi.system);
        let run = graph_reduce(TermGraph::from_term(&phi.term), &gs, 300).unwrap();
        let rules: usize = gs.rules().iter().map(|r| r.graph.len()).sum();
        for (i, &n) in run.sizes.iter().enumerate() {
            prop_assert!(n as u64 <= (i as u64 + 1) * m.size());
            if i > 0 {
                prop_assert!(n <= run.sizes[i - 1] + gs.max_growth());
            }
        }
        for (i, &w) in run.visits.iter().enumerate() {
            let n = run.sizes[i];
            prop_assert!(w as usize <= 2 * (n + gs.max_growth() + 1) * (rules + 1));
        }
    }
}

#[test]
fn tower_normal_forms_are_linear_chains() {
    for n in 1..=16 {
        let m = two_tower(n);
        let phi = encode_cbv(&m).unwrap();
        let run = graph_reduce(TermGraph::from_term(&phi.term), &GraphSystem::from_crs(&phi.system), 1000).unwrap();
        assert!(matches!(run.outcome, GraphOutcome::NormalForm(_)));
        assert_eq!(run.steps, n as u64);
        assert_eq!(run.graph.len(), n + 1);
        assert_eq!(run.steps, reduce(&m, Strategy::Cbv, 1000).steps);
    }
}
