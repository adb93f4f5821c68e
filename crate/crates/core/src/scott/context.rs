use std::collections::HashMap;

use super::fixpoint::fixpoint_family;
use super::matcher::{self, Pat};
use super::ScottError;
use crate::crs::{CrsSystem, CrsTerm, CrsTermKind, Sym};
use crate::lambda::Term;
use crate::name::Name;

/// Generator of binder names that are unique within one compilation, so no
/// generated binder ever shadows another.
#[derive(Debug, Default)]
pub(super) struct Namer {
    next: usize,
}

impl Namer {
    pub(super) fn fresh(&mut self, stem: &str) -> Name {
        self.next += 1;
        Name::new(&format!("{stem}{}", self.next))
    }

    pub(super) fn many(&mut self, stem: &str, n: usize) -> Vec<Name> {
        (0..n).map(|_| self.fresh(stem)).collect()
    }
}

/// The λ-side image of a rewrite system: Scott encodings for its
/// constructors `c_1 … c_g` and interpretations for its function symbols
/// `f_1 … f_h`, both enumerated in declaration order.
#[derive(Debug, Clone)]
pub struct ScottContext {
    system: CrsSystem,
    constructors: Vec<Sym>,
    functions: Vec<Sym>,
    constructor_index: HashMap<Name, usize>,
    function_index: HashMap<Name, usize>,
    bottom: Term,
    unit: Term,
    plain: Vec<Term>,
    strict: Vec<Term>,
    interpretations: Vec<Term>,
}

fn encoding_binders(g: usize) -> (Vec<Name>, Name) {
    let xs = (1..=g).map(|k| Name::new(&format!("s{k}"))).collect();
    (xs, Name::new("se"))
}

impl ScottContext {
    pub fn new(system: &CrsSystem) -> ScottContext {
        let constructors = system.signature().constructors();
        let functions = system.signature().functions();
        let constructor_index = constructors.iter().enumerate().map(|(i, s)| (s.name, i)).collect();
        let function_index = functions.iter().enumerate().map(|(i, s)| (s.name, i)).collect();
        let g = constructors.len();
        let (xs, e) = encoding_binders(g);
        let bottom = Term::abs_many(&xs, Term::abs(e, Term::var(e)));
        let u = Name::new("u");
        let mut ctx = ScottContext {
            system: system.clone(),
            constructors,
            functions,
            constructor_index,
            function_index,
            bottom,
            unit: Term::abs(u, Term::var(u)),
            plain: Vec::new(),
            strict: Vec::new(),
            interpretations: Vec::new(),
        };
        let mut names = Namer::default();
        ctx.plain = (0..g).map(|i| ctx.build_plain(&mut names, i)).collect();
        ctx.strict = (0..g).map(|i| ctx.build_strict(&mut names, i)).collect();
        ctx.interpretations = ctx.build_functions(&mut names);
        ctx
    }

    pub fn system(&self) -> &CrsSystem {
        &self.system
    }

    pub fn constructors(&self) -> &[Sym] {
        &self.constructors
    }

    pub fn functions(&self) -> &[Sym] {
        &self.functions
    }

    pub fn constructor_count(&self) -> usize {
        self.constructors.len()
    }

    pub fn constructor_arity(&self, i: usize) -> usize {
        self.constructors[i].arity
    }

    pub fn constructor_index(&self, name: Name) -> Result<usize, ScottError> {
        self.constructor_index
            .get(&name)
            .copied()
            .ok_or(ScottError::UnknownConstructor(name))
    }

    pub fn function_index(&self, name: Name) -> Result<usize, ScottError> {
        self.function_index
            .get(&name)
            .copied()
            .ok_or(ScottError::UnknownSymbol(name))
    }

    /// The error value `⊥ = λx_1…x_g.λy.y`.
    pub fn bottom(&self) -> Term {
        self.bottom.clone()
    }

    /// The dummy argument `λu.u` that forces a suspended computation.
    pub fn unit(&self) -> Term {
        self.unit.clone()
    }

    /// `⎡c_i(t_1, …, t_n)⎤ = λx_1…x_g.λy. x_i ⎡t_1⎤ … ⎡t_n⎤`.
    pub fn encode(&self, t: &CrsTerm) -> Result<Term, ScottError> {
        let (xs, e) = encoding_binders(self.constructor_count());
        // Post-order over an explicit stack: encoded terms can be very deep.
        let mut done: Vec<Term> = Vec::new();
        let mut stack: Vec<(&CrsTerm, bool)> = vec![(t, false)];
        while let Some((t, expanded)) = stack.pop() {
            match t.kind() {
                CrsTermKind::Var(x) => return Err(ScottError::OpenTerm(*x)),
                CrsTermKind::Node(s, children) => {
                    if !s.is_constructor() {
                        return Err(ScottError::UnknownConstructor(s.name));
                    }
                    let i = self.constructor_index(s.name)?;
                    if !expanded {
                        stack.push((t, true));
                        stack.extend(children.iter().rev().map(|c| (c, false)));
                    } else {
                        let fields = done.split_off(done.len() - children.len());
                        let body = Term::app_many(Term::var(xs[i]), fields);
                        done.push(Term::abs_many(&xs, Term::abs(e, body)));
                    }
                }
            }
        }
        Ok(done.pop().expect("one encoded term"))
    }

    /// `⎡c_i⎤ = λx_1…x_a.λy_1…y_g.λz. y_i x_1 … x_a`: applied to `a`
    /// encodings it yields the encoding of the constructed term in `a` steps.
    pub fn plain_constructor(&self, i: usize) -> Term {
        self.plain[i].clone()
    }

    /// The error-strict constructor `⎡c_i⎤′`: like [`Self::plain_constructor`]
    /// on encodings, but `⊥` as soon as any argument is `⊥`.
    pub fn strict_constructor(&self, i: usize) -> Term {
        self.strict[i].clone()
    }

    /// `⎡f_i⎤′`, the interpretation of the `i`-th function symbol. For a
    /// nullary symbol this already runs the function.
    pub fn function_term(&self, i: usize) -> Term {
        if self.functions[i].arity == 0 {
            Term::app(self.interpretations[i].clone(), self.unit())
        } else {
            self.interpretations[i].clone()
        }
    }

    /// `⎡t⎤′` for a closed term: constructors by their strict versions,
    /// function symbols by their interpretations.
    pub fn translate(&self, t: &CrsTerm) -> Result<Term, ScottError> {
        match t.kind() {
            CrsTermKind::Var(x) => Err(ScottError::OpenTerm(*x)),
            CrsTermKind::Node(s, children) => {
                let head = if s.is_constructor() {
                    self.strict_constructor(self.constructor_index(s.name)?)
                } else {
                    let i = self.function_index(s.name)?;
                    if children.is_empty() {
                        return Ok(self.function_term(i));
                    }
                    self.interpretations[i].clone()
                };
                let args = children
                    .iter()
                    .map(|c| self.translate(c))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app_many(head, args))
            }
        }
    }

    /// The λ-term a run of `t` is compared against. A call `f(v_1, …, v_n)`
    /// on constructor terms becomes `⎡f⎤′ ⎡v_1⎤ … ⎡v_n⎤`, a constructor term
    /// its own encoding; anything else falls back to [`Self::translate`].
    pub fn call_term(&self, t: &CrsTerm) -> Result<Term, ScottError> {
        match t.kind() {
            CrsTermKind::Node(s, children) if !s.is_constructor() && children.iter().all(|c| c.is_constructor_term()) => {
                let i = self.function_index(s.name)?;
                let args = children.iter().map(|c| self.encode(c)).collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app_many(self.function_term(i), args))
            }
            _ if t.is_constructor_term() => self.encode(t),
            _ => self.translate(t),
        }
    }

    /// `M^m_{α_1…α_n}` for the given pattern sequences (see the module
    /// documentation of the matcher for its reduction behaviour).
    pub fn compile_match(&self, alphas: &[Vec<CrsTerm>], m: usize) -> Result<Term, ScottError> {
        let pats = alphas
            .iter()
            .map(|a| a.iter().map(|p| Pat::from_crs(self, p)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        matcher::check_sequences(&pats, m)?;
        Ok(matcher::compile(self, &mut Namer::default(), &pats, m))
    }

    fn build_plain(&self, names: &mut Namer, i: usize) -> Term {
        let xs = names.many("cx", self.constructor_arity(i));
        let ys = names.many("cy", self.constructor_count());
        let z = names.fresh("cz");
        let body = Term::app_many(Term::var(ys[i]), xs.iter().map(|&x| Term::var(x)));
        Term::abs_many(&xs, Term::abs_many(&ys, Term::abs(z, body)))
    }

    /// `M^i_ε`, built from the full-arity end: `M^i_{x_1…x_a}` is the
    /// encoding with free fields, and `M^i_{x_1…x_m}` (m < a) inspects its
    /// next argument, continuing with `M^i_{x_1…x_{m+1}}` on an encoding and
    /// discarding the remaining arguments on `⊥`.
    fn build_strict(&self, names: &mut Namer, i: usize) -> Term {
        let arity = self.constructor_arity(i);
        let g = self.constructor_count();
        let xs = names.many("kx", arity);
        let full = |names: &mut Namer, j: usize, fields: &[Name]| {
            let ys = names.many("ky", g);
            let z = names.fresh("kz");
            let body = Term::app_many(Term::var(ys[j]), fields.iter().map(|&x| Term::var(x)));
            Term::abs_many(&ys, Term::abs(z, body))
        };
        let mut current = full(names, i, &xs);
        for m in (0..arity).rev() {
            let next = Term::abs(xs[m], current);
            let handlers: Vec<Term> = (0..g)
                .map(|j| {
                    let zs = names.many("kf", self.constructor_arity(j));
                    let rebuilt = full(names, j, &zs);
                    Term::abs_many(&zs, Term::app(next.clone(), rebuilt))
                })
                .collect();
            let rest = names.many("kr", arity - m - 1);
            let discard = Term::abs_many(&rest, self.bottom());
            let y = names.fresh("kv");
            current = Term::abs(
                y,
                Term::app(Term::app_many(Term::var(y), handlers), discard),
            );
        }
        current
    }

    /// `⎡f_i⎤′ = H_i V_1 … V_h` with
    /// `V_i = λx_1…x_h.λy_1…y_a. M_{α_i} y_1 … y_a W_i^1 … W_i^n` and
    /// `W_i^j = λz_1…z_k.λd.⟪t_i^j⟫`. Nullary symbols get a dummy parameter
    /// after `x_1…x_h` so that they can be called through a recursion
    /// variable.
    fn build_functions(&self, names: &mut Namer) -> Vec<Term> {
        let h = self.functions.len();
        if h == 0 {
            return Vec::new();
        }
        let (hs, _) = fixpoint_family(h);
        let values: Vec<Term> = (0..h)
            .map(|i| {
                let f = self.functions[i];
                let xs = names.many("rx", h);
                let ys = names.many("ry", f.arity.max(1));
                let ys = if f.arity == 0 { ys } else { ys[..f.arity].to_vec() };
                let rules: Vec<_> = self
                    .system
                    .rules()
                    .iter()
                    .filter(|r| r.function.name == f.name)
                    .collect();
                let alphas: Vec<Vec<Pat>> = rules
                    .iter()
                    .map(|r| {
                        r.args
                            .iter()
                            .map(|p| Pat::from_crs(self, p).expect("validated pattern"))
                            .collect()
                    })
                    .collect();
                let matcher = matcher::compile(self, names, &alphas, f.arity);
                let continuations = rules.iter().map(|r| {
                    let vars: Vec<Name> = r.args.iter().flat_map(|p| p.variables()).collect();
                    let binders: Vec<Name> = vars.iter().map(|_| names.fresh("wz")).collect();
                    let d = names.fresh("wd");
                    let body = self.translate_rhs(&r.rhs, &vars, &binders, &xs);
                    Term::abs_many(&binders, Term::abs(d, body))
                });
                let scrutinees = if f.arity == 0 { Vec::new() } else { ys.clone() };
                let call = Term::app_many(
                    matcher,
                    scrutinees
                        .iter()
                        .map(|&y| Term::var(y))
                        .chain(continuations)
                        .collect::<Vec<_>>(),
                );
                Term::abs_many(&xs, Term::abs_many(&ys, call))
            })
            .collect();
        hs.iter()
            .map(|hi| Term::app_many(hi.clone(), values.iter().cloned()))
            .collect()
    }

    /// `⟪t⟫`: rule variables become the continuation's binders,
    /// constructors their strict versions, function symbols the recursion
    /// variables.
    fn translate_rhs(&self, t: &CrsTerm, vars: &[Name], binders: &[Name], rec: &[Name]) -> Term {
        match t.kind() {
            CrsTermKind::Var(x) => {
                let k = vars.iter().position(|v| v == x).expect("rhs variable bound by lhs");
                Term::var(binders[k])
            }
            CrsTermKind::Node(s, children) => {
                let args = children.iter().map(|c| self.translate_rhs(c, vars, binders, rec));
                if s.is_constructor() {
                    let i = self.constructor_index[&s.name];
                    Term::app_many(self.strict_constructor(i), args.collect::<Vec<_>>())
                } else {
                    let i = self.function_index[&s.name];
                    if children.is_empty() {
                        Term::app(Term::var(rec[i]), self.unit())
                    } else {
                        Term::app_many(Term::var(rec[i]), args.collect::<Vec<_>>())
                    }
                }
            }
        }
    }
}
