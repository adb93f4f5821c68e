use super::table::{app_sym, rule_var, AbstractionTable};
use super::{EncodeError, APP};
use crate::crs::{print_system, CrsRule, CrsSystem, CrsTerm, CrsTermKind, Signature};
use crate::lambda::{Term, TermKind};
use crate::name::Name;

/// A closed λ-term compiled for call-by-value simulation.
#[derive(Debug, Clone)]
pub struct PhiImage {
    pub term: CrsTerm,
    pub system: CrsSystem,
    pub table: AbstractionTable,
}

impl PhiImage {
    pub fn readback(&self, t: &CrsTerm) -> Result<Term, EncodeError> {
        self.table.readback(t)
    }

    /// The system and term in `.trs` syntax, preceded by a comment block
    /// listing the abstraction behind every constructor.
    pub fn to_text(&self) -> String {
        format!(
            "{}{}",
            self.table.symbol_table_comment(),
            print_system(&self.system, std::slice::from_ref(&self.term))
        )
    }
}

/// `[M]`, with free variables translated by `env`. When `frozen` is set,
/// applications become the constructor `capp` instead of `app`.
pub(super) fn translate(
    table: &AbstractionTable,
    m: &Term,
    env: &dyn Fn(Name) -> CrsTerm,
    frozen: bool,
) -> CrsTerm {
    match m.kind() {
        TermKind::Var(x) => env(*x),
        TermKind::Abs(..) => {
            let entry = table
                .lookup(m)
                .expect("every abstraction subterm of the source is in the table");
            CrsTerm::node(entry.sym, entry.free.iter().map(|x| env(*x)).collect::<Vec<_>>())
        }
        TermKind::App(f, a) => {
            let sym = if frozen { super::table::capp_sym() } else { app_sym() };
            CrsTerm::node(
                sym,
                vec![translate(table, f, env, frozen), translate(table, a, env, frozen)],
            )
        }
    }
}

/// Environment mapping an abstraction's binder to `v0` and its free
/// variables to `v1…vn`.
pub(super) fn rule_env(binder: Name, free: &[Name]) -> impl Fn(Name) -> CrsTerm + '_ {
    move |x| {
        if x == binder {
            CrsTerm::var(rule_var(0))
        } else {
            let i = free
                .iter()
                .position(|&y| y == x)
                .expect("variable is free in the abstraction");
            CrsTerm::var(rule_var(i + 1))
        }
    }
}

pub(super) fn closed_env(x: Name) -> CrsTerm {
    panic!("closed term has free variable `{x}`")
}

pub(super) fn constructor_pattern(table: &AbstractionTable, i: usize) -> CrsTerm {
    let e = &table.entries()[i];
    CrsTerm::node(e.sym, (1..=e.free.len()).map(|k| CrsTerm::var(rule_var(k))).collect::<Vec<_>>())
}

pub(super) fn check_closed(m: &Term) -> Result<(), EncodeError> {
    match m.free_vars().first() {
        Some(x) => Err(EncodeError::OpenTerm(*x)),
        None => Ok(()),
    }
}

/// Compiles a closed term into `app`-based rules with one rule
/// `app(c_{x,M}(x1,…,xn), x) → [M]` per abstraction subterm.
pub fn encode_cbv(m: &Term) -> Result<PhiImage, EncodeError> {
    check_closed(m)?;
    let table = AbstractionTable::from_term(m);
    let mut signature = Signature::new().with(app_sym());
    for e in table.entries() {
        signature = signature.with(e.sym);
    }
    let rules = (0..table.len())
        .map(|i| {
            let e = &table.entries()[i];
            let env = rule_env(e.binder, &e.free);
            CrsRule::new(
                app_sym(),
                vec![constructor_pattern(&table, i), CrsTerm::var(rule_var(0))],
                translate(&table, &e.body, &env, false),
            )
        })
        .collect();
    let system = CrsSystem::new(signature, rules).expect("generated system is orthogonal");
    let term = translate(&table, m, &closed_env, false);
    Ok(PhiImage {
        term,
        system,
        table,
    })
}

/// Canonical terms: constructor terms, and `app(u, v)` with `u`, `v`
/// canonical.
pub fn is_canonical(t: &CrsTerm) -> bool {
    match t.kind() {
        CrsTermKind::Var(_) => false,
        CrsTermKind::Node(s, c) if s.name.as_str() == APP && c.len() == 2 => {
            is_canonical(&c[0]) && is_canonical(&c[1])
        }
        CrsTermKind::Node(..) => t.is_constructor_term(),
    }
}
