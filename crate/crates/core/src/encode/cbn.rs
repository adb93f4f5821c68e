use super::cbv::{check_closed, closed_env, constructor_pattern, rule_env, translate};
use super::table::{app_sym, capp_sym, AbstractionTable};
use super::{EncodeError, APP};
use crate::crs::{print_system, CrsRule, CrsSystem, CrsTerm, CrsTermKind, Signature};
use crate::lambda::{Term, TermKind};

/// A closed λ-term compiled for call-by-name simulation.
#[derive(Debug, Clone)]
pub struct PsiImage {
    pub term: CrsTerm,
    pub system: CrsSystem,
    pub table: AbstractionTable,
    /// Index of `app(capp(x, y), z) → app(app(x, y), z)` among the rules.
    pub administrative_rule: usize,
}

impl PsiImage {
    pub fn readback(&self, t: &CrsTerm) -> Result<Term, EncodeError> {
        self.table.readback(t)
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}{}",
            self.table.symbol_table_comment(),
            print_system(&self.system, std::slice::from_ref(&self.term))
        )
    }
}

fn v(name: &str) -> CrsTerm {
    CrsTerm::var(name)
}

fn app(a: CrsTerm, b: CrsTerm) -> CrsTerm {
    CrsTerm::node(app_sym(), vec![a, b])
}

fn capp(a: CrsTerm, b: CrsTerm) -> CrsTerm {
    CrsTerm::node(capp_sym(), vec![a, b])
}

/// Compiles a closed term for call-by-name. Arguments are translated with
/// `capp` (frozen), the function spine with `app`. Abstractions whose body
/// is a variable get the four special rule families that thaw a frozen
/// result; every other abstraction gets `app(c_{y,N}(y1,…,ym), y) → [N]`.
pub fn encode_cbn(m: &Term) -> Result<PsiImage, EncodeError> {
    check_closed(m)?;
    let table = AbstractionTable::from_term(m);
    let mut signature = Signature::new().with(app_sym()).with(capp_sym());
    for e in table.entries() {
        signature = signature.with(e.sym);
    }
    let mut rules = Vec::new();
    for (i, e) in table.entries().iter().enumerate() {
        let head = constructor_pattern(&table, i);
        match e.body.kind() {
            TermKind::Var(z) if *z == e.binder => {
                rules.push(CrsRule::new(
                    app_sym(),
                    vec![head.clone(), capp(v("w"), v("f"))],
                    app(v("w"), v("f")),
                ));
                for d in 0..table.len() {
                    let value = constructor_pattern(&table, d);
                    rules.push(CrsRule::new(app_sym(), vec![head.clone(), value.clone()], value));
                }
            }
            TermKind::Var(_) => {
                rules.push(CrsRule::new(
                    app_sym(),
                    vec![CrsTerm::node(e.sym, vec![capp(v("f"), v("g"))]), v("h")],
                    app(v("f"), v("g")),
                ));
                for d in 0..table.len() {
                    let value = constructor_pattern(&table, d);
                    rules.push(CrsRule::new(
                        app_sym(),
                        vec![CrsTerm::node(e.sym, vec![value.clone()]), v("h")],
                        value,
                    ));
                }
            }
            _ => {
                let env = rule_env(e.binder, &e.free);
                rules.push(CrsRule::new(
                    app_sym(),
                    vec![head, CrsTerm::var(super::table::rule_var(0))],
                    translate_main(&table, &e.body, &env),
                ));
            }
        }
    }
    let administrative_rule = rules.len();
    rules.push(CrsRule::new(
        app_sym(),
        vec![capp(v("x"), v("y")), v("z")],
        app(app(v("x"), v("y")), v("z")),
    ));
    let system = CrsSystem::new(signature, rules).expect("generated system is orthogonal");
    let term = translate_main(&table, m, &closed_env);
    Ok(PsiImage {
        term,
        system,
        table,
        administrative_rule,
    })
}

/// The main map: `app` along the function spine, frozen `capp` inside
/// arguments.
fn translate_main(
    table: &AbstractionTable,
    m: &Term,
    env: &dyn Fn(crate::name::Name) -> CrsTerm,
) -> CrsTerm {
    match m.kind() {
        TermKind::App(f, a) => app(translate_main(table, f, env), translate(table, a, env, true)),
        _ => translate(table, m, env, true),
    }
}

/// Canonical terms for call-by-name: abstraction-rooted constructor terms,
/// and `app(u, v)` with `u` canonical and `v` a constructor term.
pub fn psi_is_canonical(t: &CrsTerm) -> bool {
    match t.kind() {
        CrsTermKind::Var(_) => false,
        CrsTermKind::Node(s, c) if s.name.as_str() == APP && c.len() == 2 => {
            psi_is_canonical(&c[0]) && c[1].is_constructor_term()
        }
        CrsTermKind::Node(s, _) => {
            s.is_constructor() && s.name.as_str() != super::CAPP && t.is_constructor_term()
        }
    }
}
