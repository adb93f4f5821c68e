use std::fmt;
use std::sync::Arc;

use crate::name::Name;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymKind {
    Constructor,
    Function,
}

/// A signature symbol: name, arity and whether it is a constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sym {
    pub name: Name,
    pub arity: usize,
    pub kind: SymKind,
}

impl Sym {
    pub fn constructor(name: impl Into<Name>, arity: usize) -> Sym {
        Sym {
            name: name.into(),
            arity,
            kind: SymKind::Constructor,
        }
    }

    pub fn function(name: impl Into<Name>, arity: usize) -> Sym {
        Sym {
            name: name.into(),
            arity,
            kind: SymKind::Function,
        }
    }

    pub fn is_constructor(&self) -> bool {
        self.kind == SymKind::Constructor
    }
}

/// A first-order term, shared through `Arc`.
///
/// Each node caches its length (number of symbol and variable occurrences)
/// and whether it contains variables or function symbols, so the
/// classification predicates are O(1).
#[derive(Clone)]
pub struct CrsTerm(Arc<Node>);

struct Node {
    kind: CrsTermKind,
    size: u64,
    has_var: bool,
    has_function: bool,
}

pub enum CrsTermKind {
    Var(Name),
    Node(Sym, Box<[CrsTerm]>),
}

impl CrsTerm {
    pub fn var(x: impl Into<Name>) -> CrsTerm {
        CrsTerm(Arc::new(Node {
            kind: CrsTermKind::Var(x.into()),
            size: 1,
            has_var: true,
            has_function: false,
        }))
    }

    /// Builds `sym(children…)`. Panics if the child count differs from the
    /// arity.
    pub fn node(sym: Sym, children: impl Into<Box<[CrsTerm]>>) -> CrsTerm {
        let children = children.into();
        assert_eq!(
            children.len(),
            sym.arity,
            "symbol {} applied to the wrong number of arguments",
            sym.name
        );
        let size = children
            .iter()
            .fold(1u64, |acc, c| acc.saturating_add(c.size()));
        let has_var = children.iter().any(|c| c.0.has_var);
        let has_function = !sym.is_constructor() || children.iter().any(|c| c.0.has_function);
        CrsTerm(Arc::new(Node {
            kind: CrsTermKind::Node(sym, children),
            size,
            has_var,
            has_function,
        }))
    }

    pub fn constant(sym: Sym) -> CrsTerm {
        CrsTerm::node(sym, Vec::new())
    }

    pub fn kind(&self) -> &CrsTermKind {
        &self.0.kind
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn root(&self) -> Option<Sym> {
        match self.kind() {
            CrsTermKind::Var(_) => None,
            CrsTermKind::Node(s, _) => Some(*s),
        }
    }

    pub fn children(&self) -> &[CrsTerm] {
        match self.kind() {
            CrsTermKind::Var(_) => &[],
            CrsTermKind::Node(_, c) => c,
        }
    }

    /// Only constructors (no variables, no function symbols).
    pub fn is_constructor_term(&self) -> bool {
        !self.0.has_var && !self.0.has_function
    }

    /// Constructors and variables only.
    pub fn is_pattern(&self) -> bool {
        !self.0.has_function
    }

    /// No variables.
    pub fn is_closed(&self) -> bool {
        !self.0.has_var
    }

    pub fn contains_function(&self) -> bool {
        self.0.has_function
    }

    pub fn ptr_eq(&self, other: &CrsTerm) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Variables in left-to-right occurrence order, with repetitions.
    pub fn variables(&self) -> Vec<Name> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t.kind() {
                CrsTermKind::Var(x) => out.push(*x),
                CrsTermKind::Node(_, c) => stack.extend(c.iter().rev()),
            }
        }
        out
    }

    /// Occurrences of the symbol named `name`.
    pub fn count_symbol(&self, name: Name) -> u64 {
        let mut n = 0u64;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let CrsTermKind::Node(s, c) = t.kind() {
                if s.name == name {
                    n += 1;
                }
                stack.extend(c.iter());
            }
        }
        n
    }

    /// The subterm at `position` (a path of child indices).
    pub fn at(&self, position: &[usize]) -> Option<&CrsTerm> {
        let mut t = self;
        for &i in position {
            t = t.children().get(i)?;
        }
        Some(t)
    }

    /// Replaces the subterm at `position`, sharing everything off the path.
    pub fn replace_at(&self, position: &[usize], with: CrsTerm) -> CrsTerm {
        match position.split_first() {
            None => with,
            Some((&i, rest)) => {
                let CrsTermKind::Node(s, children) = self.kind() else {
                    panic!("position runs through a variable");
                };
                let mut children = children.to_vec();
                children[i] = children[i].replace_at(rest, with);
                CrsTerm::node(*s, children)
            }
        }
    }

    /// Instantiates variables; unbound variables are left in place.
    pub fn instantiate(&self, lookup: &dyn Fn(Name) -> Option<CrsTerm>) -> CrsTerm {
        if self.is_closed() {
            return self.clone();
        }
        match self.kind() {
            CrsTermKind::Var(x) => lookup(*x).unwrap_or_else(|| self.clone()),
            CrsTermKind::Node(s, c) => {
                CrsTerm::node(*s, c.iter().map(|c| c.instantiate(lookup)).collect::<Vec<_>>())
            }
        }
    }
}

// Deep terms are released from an explicit worklist instead of recursively.
impl Drop for Node {
    fn drop(&mut self) {
        let CrsTermKind::Node(_, children) = &mut self.kind else {
            return;
        };
        if children.iter().all(|c| Arc::strong_count(&c.0) > 1) {
            return;
        }
        let mut worklist: Vec<CrsTerm> = std::mem::take(children).into_vec();
        while let Some(mut t) = worklist.pop() {
            if let Some(node) = Arc::get_mut(&mut t.0) {
                if let CrsTermKind::Node(_, children) = &mut node.kind {
                    worklist.extend(std::mem::take(children).into_vec());
                }
            }
        }
    }
}

impl PartialEq for CrsTerm {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.size() != other.size() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (CrsTermKind::Var(x), CrsTermKind::Var(y)) => x == y,
            (CrsTermKind::Node(s, a), CrsTermKind::Node(t, b)) => s == t && a == b,
            _ => false,
        }
    }
}

impl Eq for CrsTerm {}

impl fmt::Display for CrsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            CrsTermKind::Var(x) => write!(f, "{x}"),
            CrsTermKind::Node(s, c) if c.is_empty() => write!(f, "{}", s.name),
            CrsTermKind::Node(s, c) => {
                write!(f, "{}(", s.name)?;
                for (i, child) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{child}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for CrsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> CrsTerm {
        CrsTerm::constant(Sym::constructor("zero", 0))
    }

    fn succ(t: CrsTerm) -> CrsTerm {
        CrsTerm::node(Sym::constructor("succ", 1), vec![t])
    }

    #[test]
    fn classification() {
        let add = Sym::function("add", 2);
        let t = CrsTerm::node(add, vec![succ(zero()), CrsTerm::var("y")]);
        assert!(!t.is_closed());
        assert!(!t.is_pattern());
        assert!(succ(CrsTerm::var("x")).is_pattern());
        assert!(succ(zero()).is_constructor_term());
        assert!(!succ(CrsTerm::var("x")).is_constructor_term());
    }

    #[test]
    fn count_symbol_examples() {
        let app = Sym::function("app", 2);
        let capp = Sym::constructor("capp", 2);
        let t = CrsTerm::node(
            app,
            vec![
                CrsTerm::node(capp, vec![CrsTerm::var("x"), CrsTerm::var("y")]),
                CrsTerm::var("z"),
            ],
        );
        assert_eq!(t.count_symbol(Name::new("app")), 1);
        assert_eq!(succ(succ(zero())).count_symbol(Name::new("succ")), 2);
        assert_eq!(succ(zero()).count_symbol(Name::new("nil")), 0);
    }

    #[test]
    fn display_prints_constants_bare() {
        assert_eq!(succ(succ(zero())).to_string(), "succ(succ(zero))");
    }

    #[test]
    fn replace_at_rebuilds_only_the_path() {
        let t = succ(succ(zero()));
        let u = t.replace_at(&[0, 0], succ(zero()));
        assert_eq!(u, succ(succ(succ(zero()))));
        assert_eq!(t.at(&[0, 0]), Some(&zero()));
    }
}
