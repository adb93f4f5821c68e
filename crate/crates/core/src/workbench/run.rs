use std::time::Instant;

use super::report::{CostReport, EngineRun, OutcomeKind};
use super::{DEFAULT_BUDGET, DEFAULT_UNFOLD_LIMIT, LAMBDA_BUDGET_FACTOR};
use crate::crs::{reduce_crs_with, CrsOutcome, CrsReduction, CrsSystem, CrsTerm, NormalKind};
use crate::encode::{encode_cbn, encode_cbv, AbstractionTable, EncodeError};
use crate::graph::{graph_reduce, GraphOutcome, GraphRun, GraphSystem, TermGraph};
use crate::lambda::{reduce, reduce_with, Policy, Reduction, Strategy, Term};
use crate::scott::{ScottContext, ScottError};

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub budget: u64,
    pub policy: Policy,
    pub unfold_limit: u64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            budget: DEFAULT_BUDGET,
            policy: Policy::Leftmost,
            unfold_limit: DEFAULT_UNFOLD_LIMIT,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

fn lambda_run(engine: &str, r: &Reduction, millis: f64) -> EngineRun {
    let outcome = if r.outcome.is_normal() {
        OutcomeKind::NormalForm
    } else {
        OutcomeKind::BudgetExhausted
    };
    let mut run = EngineRun::new(engine, outcome, r.steps);
    run.result = Some(r.outcome.term().to_string());
    run.millis = millis;
    run
}

fn crs_kind(o: &CrsOutcome) -> OutcomeKind {
    match o {
        CrsOutcome::NormalForm(_, NormalKind::ConstructorTerm) => OutcomeKind::NormalForm,
        CrsOutcome::NormalForm(_, NormalKind::Stuck) => OutcomeKind::Stuck,
        CrsOutcome::BudgetExhausted(_) => OutcomeKind::BudgetExhausted,
    }
}

fn graph_kind(o: &GraphOutcome) -> OutcomeKind {
    match o {
        GraphOutcome::NormalForm(NormalKind::ConstructorTerm) => OutcomeKind::NormalForm,
        GraphOutcome::NormalForm(NormalKind::Stuck) => OutcomeKind::Stuck,
        GraphOutcome::BudgetExhausted => OutcomeKind::BudgetExhausted,
    }
}

/// Evaluates a λ-term directly. The policy applies to call-by-value only.
pub fn eval_lambda(m: &Term, strategy: Strategy, cfg: &RunConfig) -> EngineRun {
    let (r, ms) = match strategy {
        Strategy::Cbv => timed(|| reduce_with(m, cfg.policy, cfg.budget)),
        Strategy::Cbn => timed(|| reduce(m, Strategy::Cbn, cfg.budget)),
    };
    let engine = match strategy {
        Strategy::Cbv => "lambda-cbv",
        Strategy::Cbn => "lambda-cbn",
    };
    lambda_run(engine, &r, ms)
}

struct Encoded {
    run: EngineRun,
    readback: Option<Term>,
}

fn encoded_run(engine: &str, table: &AbstractionTable, r: &CrsReduction, millis: f64) -> Encoded {
    let mut run = EngineRun::new(engine, crs_kind(&r.outcome), r.steps);
    run.millis = millis;
    let readback = table.readback(r.outcome.term()).ok();
    run.result = Some(match &readback {
        Some(t) => t.to_string(),
        None => r.outcome.term().to_string(),
    });
    Encoded { run, readback }
}

fn phi_crs(m: &Term, cfg: &RunConfig) -> Result<(Encoded, crate::encode::PhiImage), EncodeError> {
    let phi = encode_cbv(m)?;
    let (r, ms) = timed(|| reduce_crs_with(&phi.system, &phi.term, cfg.policy, cfg.budget));
    Ok((encoded_run("phi-crs", &phi.table, &r, ms), phi))
}

/// The Φ image of `m` on the rewriting engine; the result is read back.
pub fn eval_phi_crs(m: &Term, cfg: &RunConfig) -> Result<EngineRun, EncodeError> {
    Ok(phi_crs(m, cfg)?.0.run)
}

fn psi_crs(m: &Term, cfg: &RunConfig) -> Result<Encoded, EncodeError> {
    let psi = encode_cbn(m)?;
    let (r, ms) = timed(|| reduce_crs_with(&psi.system, &psi.term, cfg.policy, cfg.budget));
    Ok(encoded_run("psi-crs", &psi.table, &r, ms))
}

/// The Ψ image of `m` on the rewriting engine; the result is read back.
pub fn eval_psi_crs(m: &Term, cfg: &RunConfig) -> Result<EngineRun, EncodeError> {
    Ok(psi_crs(m, cfg)?.run)
}

struct Graphed {
    run: EngineRun,
    graph: Option<GraphRun>,
    unfolded: Option<CrsTerm>,
    violation: Option<String>,
}

fn graph_run(engine: &str, sys: &CrsSystem, t: &CrsTerm, cfg: &RunConfig) -> Graphed {
    let gs = GraphSystem::from_crs(sys);
    let (r, ms) = timed(|| graph_reduce(TermGraph::from_term(t), &gs, cfg.budget));
    match r {
        Err(v) => {
            let mut run = EngineRun::new(engine, OutcomeKind::BudgetExhausted, v.step);
            run.millis = ms;
            Graphed {
                run,
                graph: None,
                unfolded: None,
                violation: Some(v.to_string()),
            }
        }
        Ok(g) => {
            let mut run = EngineRun::new(engine, graph_kind(&g.outcome), g.steps);
            run.millis = ms;
            run.size_series = Some(g.sizes.clone());
            run.node_visits = Some(g.visits.iter().sum());
            let unfolded = g.graph.to_term_bounded(cfg.unfold_limit).ok();
            run.unfolded = Some(unfolded.is_some());
            Graphed {
                run,
                graph: Some(g),
                unfolded,
                violation: None,
            }
        }
    }
}

/// The Φ image of `m` on the graph engine. The result is the read-back
/// λ-term when the unfolding is within the limit.
pub fn eval_phi_graph(m: &Term, cfg: &RunConfig) -> Result<EngineRun, EncodeError> {
    let phi = encode_cbv(m)?;
    let mut g = graph_run("phi-graph", &phi.system, &phi.term, cfg);
    g.run.result = g.unfolded.and_then(|t| phi.readback(&t).ok()).map(|t| t.to_string());
    Ok(g.run)
}

/// A closed term of a rewrite system on the rewriting engine.
pub fn eval_crs(sys: &CrsSystem, t: &CrsTerm, cfg: &RunConfig) -> EngineRun {
    let (r, ms) = timed(|| reduce_crs_with(sys, t, cfg.policy, cfg.budget));
    let mut run = EngineRun::new("crs", crs_kind(&r.outcome), r.steps);
    run.result = Some(r.outcome.term().to_string());
    run.millis = ms;
    run
}

/// A closed term of a rewrite system on the graph engine.
pub fn eval_graph_crs(sys: &CrsSystem, t: &CrsTerm, cfg: &RunConfig) -> EngineRun {
    let mut g = graph_run("graph", sys, t, cfg);
    g.run.result = g.unfolded.map(|t| t.to_string());
    g.run
}

/// The Scott translation `⎡t⎤′` under weak call-by-value.
pub fn eval_scott(sys: &CrsSystem, t: &CrsTerm, cfg: &RunConfig) -> Result<EngineRun, ScottError> {
    let m = ScottContext::new(sys).translate(t)?;
    let (r, ms) = timed(|| reduce_with(&m, cfg.policy, cfg.budget));
    Ok(lambda_run("scott-lambda-cbv", &r, ms))
}

fn either_terminated(a: &EngineRun, b: &EngineRun) -> bool {
    a.terminated() || b.terminated()
}

fn alpha(a: &Option<Term>, b: &Term) -> bool {
    a.as_ref().is_some_and(|a| a.alpha_eq(b))
}

/// Runs all five engines on a closed λ-term and checks the simulation
/// results that apply to the runs that terminated.
pub fn compare_engines(m: &Term, input: &str, cfg: &RunConfig) -> Result<CostReport, EncodeError> {
    let mut report = CostReport::new("compare", input, &m.to_string());
    let (cbv, ms) = timed(|| reduce_with(m, cfg.policy, cfg.budget));
    let cbv_run = lambda_run("lambda-cbv", &cbv, ms);
    let (phi, image) = phi_crs(m, cfg)?;
    let mut graph = graph_run("phi-graph", &image.system, &image.term, cfg);
    let graph_back = graph.unfolded.as_ref().and_then(|t| image.readback(t).ok());
    graph.run.result = graph_back.as_ref().map(|t| t.to_string());
    let (cbn, ms) = timed(|| reduce(m, Strategy::Cbn, cfg.budget));
    let cbn_run = lambda_run("lambda-cbn", &cbn, ms);
    let psi = psi_crs(m, cfg)?;

    if either_terminated(&cbv_run, &phi.run) {
        report.check(
            "cbv_steps_equal_phi_crs",
            cbv_run.terminated() && phi.run.terminated() && cbv_run.steps == phi.run.steps,
            format!("{} vs {}", cbv_run.steps, phi.run.steps),
        );
    }
    if cbv_run.terminated() && phi.run.terminated() {
        report.check(
            "cbv_readback_phi_crs",
            alpha(&phi.readback, cbv.outcome.term()),
            "read-back normal form is alpha-equal to the lambda normal form",
        );
    }
    if either_terminated(&cbv_run, &graph.run) {
        report.check(
            "cbv_steps_equal_phi_graph",
            cbv_run.terminated() && graph.run.terminated() && cbv_run.steps == graph.run.steps,
            format!("{} vs {}", cbv_run.steps, graph.run.steps),
        );
    }
    if cbv_run.terminated() && graph.run.terminated() && graph.unfolded.is_some() {
        report.check(
            "cbv_readback_phi_graph",
            alpha(&graph_back, cbv.outcome.term()),
            "unfolded graph reads back to the lambda normal form",
        );
    }
    if let Some(v) = &graph.violation {
        report.check("graph_constructor_shared", false, v.clone());
    }
    if let Some(g) = &graph.graph {
        if graph.run.terminated() {
            report.check("graph_constructor_shared", true, "after every step");
        }
        let size = m.size();
        let worst = g
            .sizes
            .iter()
            .enumerate()
            .find(|(i, n)| **n as u64 > (*i as u64 + 1) * size);
        if graph.run.terminated() || worst.is_some() {
            report.check(
                "graph_size_bound",
                worst.is_none(),
                match worst {
                    None => format!("node count after step i is at most (i+1)*{size}"),
                    Some((i, n)) => format!("{n} nodes after step {i} exceeds {}", (i as u64 + 1) * size),
                },
            );
        }
    }
    if cbn_run.terminated() && psi.run.terminated() {
        let (n, k) = (cbn_run.steps, psi.run.steps);
        report.check("cbn_step_bounds", n <= k && k <= 2 * n, format!("n={n}, m={k}"));
        report.check(
            "cbn_readback_psi_crs",
            alpha(&psi.readback, cbn.outcome.term()),
            "read-back normal form is alpha-equal to the head normal form",
        );
    }

    report.push_run(cbv_run);
    report.push_run(phi.run);
    report.push_run(graph.run);
    report.push_run(cbn_run);
    report.push_run(psi.run);
    report.relate("phi-crs", "lambda-cbv");
    report.relate("phi-graph", "lambda-cbv");
    report.relate("psi-crs", "lambda-cbn");
    Ok(report)
}

/// Runs a closed term on the rewriting engine, the graph engine and its
/// Scott translation, and checks that the three agree. The β budget is
/// `LAMBDA_BUDGET_FACTOR` times the rewriting budget.
pub fn roundtrip_check(sys: &CrsSystem, t: &CrsTerm, input: &str, cfg: &RunConfig) -> Result<CostReport, ScottError> {
    let mut report = CostReport::new("roundtrip", input, &t.to_string());
    let crs = eval_crs(sys, t, cfg);
    let mut graph = graph_run("graph", sys, t, cfg);
    graph.run.result = graph.unfolded.as_ref().map(|t| t.to_string());
    let ctx = ScottContext::new(sys);
    let lambda_budget = cfg.budget.saturating_mul(LAMBDA_BUDGET_FACTOR);
    let (verdict, ms) = timed(|| ctx.simulate_and_check(t, cfg.budget, lambda_budget));
    let verdict = verdict?;
    let outcome = if verdict.lambda_normalized {
        OutcomeKind::NormalForm
    } else {
        OutcomeKind::BudgetExhausted
    };
    let mut scott = EngineRun::new("scott-lambda-cbv", outcome, verdict.beta_steps);
    scott.millis = ms;

    if either_terminated(&crs, &graph.run) {
        report.check(
            "graph_steps_equal_crs",
            crs.terminated() && graph.run.terminated() && crs.steps == graph.run.steps,
            format!("{} vs {}", crs.steps, graph.run.steps),
        );
    }
    if crs.terminated() && graph.run.terminated() && graph.run.unfolded == Some(true) {
        report.check(
            "graph_result_equal_crs",
            graph.run.result == crs.result,
            "unfolded graph normal form equals the term normal form",
        );
    }
    if let Some(v) = &graph.violation {
        report.check("graph_constructor_shared", false, v.clone());
    } else if graph.run.terminated() {
        report.check("graph_constructor_shared", true, "after every step");
    }
    report.check(
        "scott_simulation",
        verdict.agree,
        format!("{:?} clause; {} beta steps for {} rewrite steps", verdict.clause, verdict.beta_steps, verdict.crs_steps),
    );

    report.push_run(crs);
    report.push_run(graph.run);
    report.push_run(scott);
    report.relate("scott-lambda-cbv", "crs");
    report.relate("graph", "crs");
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crs::{parse_system, parse_term_in};
    use crate::lambda::parse_term;
    use crate::lambda::random::{omega, two_tower};

    fn lam(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn identity_redex_takes_one_step_everywhere() {
        let r = compare_engines(&lam("(\\x. x) (\\y. y)"), "id", &RunConfig::default()).unwrap();
        for e in ["lambda-cbv", "phi-crs", "phi-graph", "lambda-cbn"] {
            assert_eq!(r.run(e).unwrap().steps, 1, "{e}");
        }
        assert!(r.all_hold());
    }

    #[test]
    fn worked_example_agrees() {
        let r = compare_engines(&lam("(\\x. (\\y. x) x) (\\z. z)"), "ex1", &RunConfig::default()).unwrap();
        assert_eq!(r.run("lambda-cbv").unwrap().steps, 2);
        assert_eq!(r.run("lambda-cbv").unwrap().result.as_deref(), Some("\\z. z"));
        assert_eq!(r.run("phi-crs").unwrap().steps, 2);
        assert_eq!(r.run("phi-graph").unwrap().steps, 2);
        let n = r.run("lambda-cbn").unwrap().steps;
        let m = r.run("psi-crs").unwrap().steps;
        assert!(n <= m && m <= 2 * n);
        assert!(r.all_hold(), "{}", r.to_json());
        assert!(r.theorems.iter().any(|t| t.name == "cbn_step_bounds"));
    }

    #[test]
    fn omega_exhausts_and_flags_nothing() {
        let cfg = RunConfig {
            budget: 200,
            ..RunConfig::default()
        };
        let r = compare_engines(&omega(), "omega", &cfg).unwrap();
        assert!(r.runs.iter().all(|run| run.outcome == OutcomeKind::BudgetExhausted));
        assert!(r.theorems.is_empty(), "{:?}", r.theorems);
    }

    #[test]
    fn tower_skips_large_unfoldings() {
        let cfg = RunConfig {
            unfold_limit: 5,
            ..RunConfig::default()
        };
        let r = compare_engines(&two_tower(10), "tower", &cfg).unwrap();
        assert_eq!(r.run("phi-graph").unwrap().size_series.as_ref().unwrap().last(), Some(&11));
        let g = r.run("phi-graph").unwrap();
        assert_eq!(g.unfolded, Some(false));
        assert_eq!(g.result, None);
        assert!(r.all_hold(), "{}", r.to_json_untimed());
    }

    #[test]
    fn reports_are_deterministic() {
        let m = lam("(\\f. \\x. f (f x)) (\\y. y) (\\q. q)");
        let a = compare_engines(&m, "m", &RunConfig::default()).unwrap();
        let b = compare_engines(&m, "m", &RunConfig::default()).unwrap();
        assert_eq!(a.to_json_untimed(), b.to_json_untimed());
    }

    const ADD: &str = "constructor zero/0; constructor succ/1; function add/2; function stuck/0;
        rule add(zero, y) -> y; rule add(succ(x), y) -> succ(add(x, y));";

    #[test]
    fn roundtrip_add_and_stuck() {
        let s = parse_system(ADD).unwrap().system;
        let t = parse_term_in(&s, "add(succ(succ(zero)), succ(zero))").unwrap();
        let r = roundtrip_check(&s, &t, "add", &RunConfig::default()).unwrap();
        assert!(r.all_hold(), "{}", r.to_json());
        assert_eq!(r.run("crs").unwrap().steps, 3);
        assert_eq!(r.run("graph").unwrap().steps, 3);

        let t = parse_term_in(&s, "add(stuck, zero)").unwrap();
        let r = roundtrip_check(&s, &t, "stuck", &RunConfig::default()).unwrap();
        assert_eq!(r.run("crs").unwrap().outcome, OutcomeKind::Stuck);
        assert!(r.all_hold(), "{}", r.to_json());

        let t = parse_term_in(&s, "stuck").unwrap();
        let r = roundtrip_check(&s, &t, "empty", &RunConfig::default()).unwrap();
        assert_eq!(r.run("crs").unwrap().steps, 0);
        assert!(r.all_hold());
    }
}
