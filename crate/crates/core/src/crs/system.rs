use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use super::term::{CrsTerm, CrsTermKind, Sym, SymKind};
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(Name),
    #[error("symbol `{0}` is not declared")]
    UnknownSymbol(Name),
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: Name,
        expected: usize,
        found: usize,
    },
    #[error("rule {rule}: left-hand side must be rooted at a function symbol")]
    HeadNotFunction { rule: usize },
    #[error("rule {rule}: argument {argument} of the left-hand side is not a constructor pattern")]
    NotAPattern { rule: usize, argument: usize },
    #[error("rule {rule}: variable `{var}` occurs more than once in the left-hand side")]
    NonLinearLhs { rule: usize, var: Name },
    #[error("rule {rule}: variable `{var}` of the right-hand side is not bound by the left-hand side")]
    UnboundVariable { rule: usize, var: Name },
    #[error("rules {first} and {second} overlap")]
    Overlap { first: usize, second: usize },
}

/// Constructors and function symbols, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    symbols: IndexMap<Name, Sym>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn declare(&mut self, sym: Sym) -> Result<(), ValidationError> {
        if self.symbols.contains_key(&sym.name) {
            return Err(ValidationError::DuplicateSymbol(sym.name));
        }
        self.symbols.insert(sym.name, sym);
        Ok(())
    }

    pub fn with(mut self, sym: Sym) -> Signature {
        self.declare(sym).expect("duplicate symbol");
        self
    }

    pub fn get(&self, name: Name) -> Option<Sym> {
        self.symbols.get(&name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.symbols.values().copied()
    }

    pub fn constructors(&self) -> Vec<Sym> {
        self.symbols().filter(|s| s.is_constructor()).collect()
    }

    pub fn functions(&self) -> Vec<Sym> {
        self.symbols().filter(|s| !s.is_constructor()).collect()
    }

    /// Checks that every symbol of `t` is declared with the arity it is used at.
    pub fn check_term(&self, t: &CrsTerm) -> Result<(), ValidationError> {
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            if let CrsTermKind::Node(s, children) = t.kind() {
                let declared = self.get(s.name).ok_or(ValidationError::UnknownSymbol(s.name))?;
                if declared.arity != children.len() || declared.kind != s.kind {
                    return Err(ValidationError::ArityMismatch {
                        symbol: s.name,
                        expected: declared.arity,
                        found: children.len(),
                    });
                }
                stack.extend(children.iter());
            }
        }
        Ok(())
    }
}

/// `f(p1, …, pn) → rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrsRule {
    pub function: Sym,
    pub args: Vec<CrsTerm>,
    pub rhs: CrsTerm,
}

impl CrsRule {
    pub fn new(function: Sym, args: Vec<CrsTerm>, rhs: CrsTerm) -> CrsRule {
        CrsRule { function, args, rhs }
    }

    pub fn lhs(&self) -> CrsTerm {
        CrsTerm::node(self.function, self.args.clone())
    }
}

impl fmt::Display for CrsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs(), self.rhs)
    }
}

#[derive(Debug, Clone, Default)]
struct RuleIndex {
    by_first_root: HashMap<Name, Vec<usize>>,
    first_is_var: Vec<usize>,
}

/// A validated orthogonal constructor rewrite system.
#[derive(Debug, Clone)]
pub struct CrsSystem {
    signature: Signature,
    rules: Vec<CrsRule>,
    index: HashMap<Name, RuleIndex>,
}

fn overlaps(p: &CrsTerm, q: &CrsTerm) -> bool {
    match (p.kind(), q.kind()) {
        (CrsTermKind::Var(_), _) | (_, CrsTermKind::Var(_)) => true,
        (CrsTermKind::Node(s, a), CrsTermKind::Node(t, b)) => {
            s.name == t.name && a.iter().zip(b.iter()).all(|(x, y)| overlaps(x, y))
        }
    }
}

impl CrsSystem {
    /// Checks arities, the constructor-pattern shape of every left-hand side,
    /// left-linearity, rhs variable binding and pairwise non-overlap.
    pub fn new(signature: Signature, rules: Vec<CrsRule>) -> Result<CrsSystem, ValidationError> {
        for (i, rule) in rules.iter().enumerate() {
            if rule.function.kind != SymKind::Function {
                return Err(ValidationError::HeadNotFunction { rule: i });
            }
            signature.check_term(&rule.lhs())?;
            signature.check_term(&rule.rhs)?;
            for (j, arg) in rule.args.iter().enumerate() {
                if !arg.is_pattern() {
                    return Err(ValidationError::NotAPattern {
                        rule: i,
                        argument: j,
                    });
                }
            }
            let mut seen = Vec::new();
            for arg in &rule.args {
                for x in arg.variables() {
                    if seen.contains(&x) {
                        return Err(ValidationError::NonLinearLhs { rule: i, var: x });
                    }
                    seen.push(x);
                }
            }
            if let Some(x) = rule.rhs.variables().into_iter().find(|x| !seen.contains(x)) {
                return Err(ValidationError::UnboundVariable { rule: i, var: x });
            }
        }
        let mut index: HashMap<Name, RuleIndex> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            let entry = index.entry(rule.function.name).or_default();
            match rule.args.first().and_then(|a| a.root()) {
                Some(root) => entry.by_first_root.entry(root.name).or_default().push(i),
                None => entry.first_is_var.push(i),
            }
        }
        let system = CrsSystem {
            signature,
            rules,
            index,
        };
        for (i, a) in system.rules.iter().enumerate() {
            for (j, b) in system.rules.iter().enumerate().skip(i + 1) {
                if a.function.name == b.function.name
                    && a.args.iter().zip(b.args.iter()).all(|(p, q)| overlaps(p, q))
                {
                    return Err(ValidationError::Overlap {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(system)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[CrsRule] {
        &self.rules
    }

    /// Rules for `function` whose first argument pattern could match a term
    /// rooted at `first_root` (`None` when the function is nullary).
    pub fn candidates(&self, function: Name, first_root: Option<Name>) -> impl Iterator<Item = usize> + '_ {
        let entry = self.index.get(&function);
        let specific = entry
            .zip(first_root)
            .and_then(|(e, r)| e.by_first_root.get(&r))
            .map(|v| v.as_slice())
            .unwrap_or(&[]);
        let general = entry.map(|e| e.first_is_var.as_slice()).unwrap_or(&[]);
        specific.iter().chain(general.iter()).copied()
    }

    /// Checks that `t` is well formed over this signature.
    pub fn check_term(&self, t: &CrsTerm) -> Result<(), ValidationError> {
        self.signature.check_term(t)
    }
}
