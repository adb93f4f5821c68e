use super::context::{Namer, ScottContext};
use super::ScottError;
use crate::crs::{CrsTerm, CrsTermKind};
use crate::lambda::Term;
use crate::name::Name;

/// A pattern with anonymous variables; constructors by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Pat {
    Var,
    Con(usize, Vec<Pat>),
}

impl Pat {
    pub(super) fn from_crs(ctx: &ScottContext, p: &CrsTerm) -> Result<Pat, ScottError> {
        match p.kind() {
            CrsTermKind::Var(_) => Ok(Pat::Var),
            CrsTermKind::Node(s, children) => {
                if !s.is_constructor() {
                    return Err(ScottError::NotAPattern);
                }
                let i = ctx.constructor_index(s.name)?;
                let children = children
                    .iter()
                    .map(|c| Pat::from_crs(ctx, c))
                    .collect::<Result<_, _>>()?;
                Ok(Pat::Con(i, children))
            }
        }
    }

    fn constructor_count(&self) -> usize {
        match self {
            Pat::Var => 0,
            Pat::Con(_, c) => 1 + c.iter().map(Pat::constructor_count).sum::<usize>(),
        }
    }

    fn variable_count(&self) -> usize {
        match self {
            Pat::Var => 1,
            Pat::Con(_, c) => c.iter().map(Pat::variable_count).sum(),
        }
    }
}

fn overlap(a: &Pat, b: &Pat) -> bool {
    match (a, b) {
        (Pat::Var, _) | (_, Pat::Var) => true,
        (Pat::Con(i, xs), Pat::Con(j, ys)) => i == j && xs.iter().zip(ys).all(|(x, y)| overlap(x, y)),
    }
}

pub(super) fn check_sequences(alphas: &[Vec<Pat>], m: usize) -> Result<(), ScottError> {
    for (index, a) in alphas.iter().enumerate() {
        if a.len() != m {
            return Err(ScottError::LengthMismatch {
                index,
                expected: m,
                found: a.len(),
            });
        }
    }
    for (i, a) in alphas.iter().enumerate() {
        for (j, b) in alphas.iter().enumerate().skip(i + 1) {
            if a.iter().zip(b).all(|(p, q)| overlap(p, q)) {
                return Err(ScottError::Overlap(i, j));
            }
        }
    }
    Ok(())
}

/// How a continuation is adapted when descending into column `i` for
/// constructor `j`.
enum Adapter {
    /// The pattern had constructor `j` at the column: `λx.x`.
    Identity,
    /// The pattern had a variable at the column, with `before` variables to
    /// its left and `after` to its right.
    Rebuild { before: usize, after: usize },
}

/// Builds the matcher `M^m_{α_1…α_n}`.
///
/// Applied to `m` Scott-encoded scrutinees and `n` continuations it reduces,
/// in a number of steps independent of the scrutinees' sizes, to
/// `V_i X_1 … X_k U` when sequence `α_i` matches (binding `X_1 … X_k`, left
/// to right), and to `⊥` when nothing matches or a scrutinee is `⊥`.
/// Continuations take one extra, ignored argument `U` after their bindings
/// so that their bodies are not evaluated before a branch is selected.
pub(super) fn compile(ctx: &ScottContext, names: &mut Namer, alphas: &[Vec<Pat>], m: usize) -> Term {
    let n = alphas.len();
    let xs = names.many("mx", m);
    if n == 0 {
        return Term::abs_many(&xs, ctx.bottom());
    }
    let p: usize = alphas.iter().flatten().map(Pat::constructor_count).sum();
    if p == 0 {
        debug_assert_eq!(n, 1, "variable-only sequences overlap");
        return leaf(ctx, names, &xs);
    }
    let column = (0..m)
        .find(|&c| alphas.iter().any(|a| matches!(a[c], Pat::Con(..))))
        .expect("some column holds a constructor");
    let ys = names.many("my", n);
    let others: Vec<Name> = xs
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != column)
        .map(|(_, &x)| x)
        .collect();

    let mut branches = Vec::with_capacity(ctx.constructor_count() + 1);
    for j in 0..ctx.constructor_count() {
        let arity = ctx.constructor_arity(j);
        let mut betas = Vec::new();
        let mut adapters = Vec::new();
        for (q, alpha) in alphas.iter().enumerate() {
            let expanded: Vec<Pat> = match &alpha[column] {
                Pat::Con(k, _) if *k != j => continue,
                Pat::Con(_, subpatterns) => {
                    adapters.push((q, Adapter::Identity));
                    subpatterns.clone()
                }
                Pat::Var => {
                    let before = alpha[..column].iter().map(Pat::variable_count).sum();
                    let after = alpha[column + 1..].iter().map(Pat::variable_count).sum();
                    adapters.push((q, Adapter::Rebuild { before, after }));
                    vec![Pat::Var; arity]
                }
            };
            let mut beta = alpha[..column].to_vec();
            beta.extend(expanded);
            beta.extend_from_slice(&alpha[column + 1..]);
            betas.push(beta);
        }
        let sub = compile(ctx, names, &betas, m - 1 + arity);
        let zs = names.many("mz", arity);
        let scrutinees = xs[..column]
            .iter()
            .chain(zs.iter())
            .chain(xs[column + 1..].iter())
            .map(|&x| Term::var(x));
        let continuations = adapters.iter().map(|(q, adapter)| {
            let w = match adapter {
                Adapter::Identity => {
                    let x = names.fresh("mw");
                    Term::abs(x, Term::var(x))
                }
                Adapter::Rebuild { before, after } => rebuild(ctx, names, j, *before, *after),
            };
            Term::app(w, Term::var(ys[*q]))
        });
        let body = Term::app_many(sub, scrutinees.chain(continuations).collect::<Vec<_>>());
        branches.push(Term::abs_many(&zs, Term::abs_many(&others, Term::abs_many(&ys, body))));
    }
    branches.push(Term::abs_many(&others, Term::abs_many(&ys, ctx.bottom())));

    let selected = Term::app_many(Term::var(xs[column]), branches);
    let body = Term::app_many(
        Term::app_many(selected, others.iter().map(|&x| Term::var(x))),
        ys.iter().map(|&y| Term::var(y)),
    );
    Term::abs_many(&xs, Term::abs_many(&ys, body))
}

/// `λx.λy_1…y_t.λx_1…x_a.λz_1…z_u. x y_1…y_t (⎡c_j⎤ x_1…x_a) z_1…z_u`:
/// regroups the fields of constructor `j` into the single value a
/// variable pattern expects.
fn rebuild(ctx: &ScottContext, names: &mut Namer, j: usize, before: usize, after: usize) -> Term {
    let x = names.fresh("ax");
    let ys = names.many("ay", before);
    let fields = names.many("af", ctx.constructor_arity(j));
    let zs = names.many("az", after);
    let value = Term::app_many(ctx.plain_constructor(j), fields.iter().map(|&f| Term::var(f)));
    let body = Term::app_many(
        Term::var(x),
        ys.iter()
            .map(|&y| Term::var(y))
            .chain([value])
            .chain(zs.iter().map(|&z| Term::var(z)))
            .collect::<Vec<_>>(),
    );
    Term::abs(
        x,
        Term::abs_many(&ys, Term::abs_many(&fields, Term::abs_many(&zs, body))),
    )
}

/// `λx_1…x_m.λy. C_1` where `C_k` inspects `x_k` and continues with
/// `C_{k+1}` unless it is `⊥`, and `C_{m+1} = y x_1 … x_m U`.
///
/// Inspection is `x_k K_1 … K_g K_⊥ (λd.C_{k+1})` with
/// `K_j = λz_1…z_{ar(c_j)}.λc. (λp_1…p_e. c U) U…U` and `K_⊥ = λc.⊥`,
/// where `e = a − ar(c_j)` pads every handler to the largest arity `a`, so
/// an inspection costs the same number of steps whatever the value's head.
fn leaf(ctx: &ScottContext, names: &mut Namer, xs: &[Name]) -> Term {
    let widest = (0..ctx.constructor_count()).map(|j| ctx.constructor_arity(j)).max().unwrap_or(0);
    let y = names.fresh("ly");
    let mut body = Term::app(
        Term::app_many(Term::var(y), xs.iter().map(|&x| Term::var(x))),
        ctx.unit(),
    );
    for &x in xs.iter().rev() {
        let d = names.fresh("ld");
        let rest = Term::abs(d, body);
        let mut handlers: Vec<Term> = (0..ctx.constructor_count())
            .map(|j| {
                let arity = ctx.constructor_arity(j);
                let zs = names.many("lz", arity);
                let c = names.fresh("lc");
                let ps = names.many("lp", widest - arity);
                let padded = Term::app_many(
                    Term::abs_many(&ps, Term::app(Term::var(c), ctx.unit())),
                    ps.iter().map(|_| ctx.unit()),
                );
                Term::abs_many(&zs, Term::abs(c, padded))
            })
            .collect();
        let c = names.fresh("lc");
        handlers.push(Term::abs(c, ctx.bottom()));
        body = Term::app(Term::app_many(Term::var(x), handlers), rest);
    }
    Term::abs_many(xs, Term::abs(y, body))
}
