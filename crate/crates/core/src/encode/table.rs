use std::collections::HashMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

use super::{EncodeError, APP, CAPP};
use crate::crs::{CrsTerm, CrsTermKind, Sym};
use crate::lambda::{Term, TermKind};
use crate::name::Name;

/// The constructor standing for one α-class of abstractions.
#[derive(Debug, Clone)]
pub struct AbstractionConstructor {
    pub sym: Sym,
    pub binder: Name,
    pub body: Term,
    /// `FV(λbinder.body)`, in identifier order; one constructor argument each.
    pub free: Vec<Name>,
}

impl AbstractionConstructor {
    pub fn abstraction(&self) -> Term {
        Term::abs(self.binder, self.body.clone())
    }
}

/// All abstraction subterms of a source term, up to α-equivalence, each
/// with a stable constructor name derived from a hash of its nameless form.
#[derive(Debug, Clone, Default)]
pub struct AbstractionTable {
    entries: Vec<AbstractionConstructor>,
    by_key: HashMap<String, usize>,
    by_name: HashMap<Name, usize>,
}

impl AbstractionTable {
    /// Registers every abstraction subterm of `m`, outermost first.
    pub fn from_term(m: &Term) -> AbstractionTable {
        let mut table = AbstractionTable::default();
        for abs in m.abstraction_subterms() {
            table.intern(&abs);
        }
        table
    }

    fn intern(&mut self, abs: &Term) -> usize {
        let key = abs.nameless_key();
        if let Some(&i) = self.by_key.get(&key) {
            return i;
        }
        let TermKind::Abs(binder, body) = abs.kind() else {
            panic!("only abstractions get constructors");
        };
        let digest = Sha256::digest(key.as_bytes());
        let hex = digest.iter().fold(String::new(), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        });
        // Lengthen the prefix on the (unlikely) event of a clash.
        let name = (8..=hex.len())
            .step_by(8)
            .map(|len| Name::new(&format!("lam_{}", &hex[..len])))
            .find(|n| !self.by_name.contains_key(n))
            .expect("sha256 prefixes exhausted");
        let entry = AbstractionConstructor {
            sym: Sym::constructor(name, abs.free_vars().len()),
            binder: *binder,
            body: body.clone(),
            free: abs.free_vars().to_vec(),
        };
        let i = self.entries.len();
        self.entries.push(entry);
        self.by_key.insert(key, i);
        self.by_name.insert(name, i);
        i
    }

    pub fn entries(&self) -> &[AbstractionConstructor] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: Name) -> Option<&AbstractionConstructor> {
        self.by_name.get(&name).map(|&i| &self.entries[i])
    }

    /// The constructor for an abstraction that occurs in the source.
    pub fn lookup(&self, abs: &Term) -> Option<&AbstractionConstructor> {
        self.by_key.get(&abs.nameless_key()).map(|&i| &self.entries[i])
    }

    /// True iff every constructor in `t` other than `capp` names an
    /// abstraction of the source.
    pub fn covers(&self, t: &CrsTerm) -> bool {
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            if let CrsTermKind::Node(s, c) = t.kind() {
                if s.is_constructor() && s.name.as_str() != CAPP && !self.by_name.contains_key(&s.name) {
                    return false;
                }
                stack.extend(c.iter());
            }
        }
        true
    }

    /// `⟨t⟩`: `app` and `capp` read back as application, a constructor as
    /// its abstraction with the arguments substituted for the free
    /// variables.
    pub fn readback(&self, t: &CrsTerm) -> Result<Term, EncodeError> {
        match t.kind() {
            CrsTermKind::Var(x) => Ok(Term::var(*x)),
            CrsTermKind::Node(s, c) if s.name.as_str() == APP || s.name.as_str() == CAPP => {
                if c.len() != 2 {
                    return Err(EncodeError::NotReadable(s.name));
                }
                Ok(Term::app(self.readback(&c[0])?, self.readback(&c[1])?))
            }
            CrsTermKind::Node(s, c) => {
                let entry = self.get(s.name).ok_or(EncodeError::UnknownConstructor(s.name))?;
                let pairs = entry
                    .free
                    .iter()
                    .zip(c.iter())
                    .map(|(x, t)| Ok((*x, self.readback(t)?)))
                    .collect::<Result<Vec<_>, EncodeError>>()?;
                Ok(entry.abstraction().substitute_many(&pairs))
            }
        }
    }

    /// A `#` comment block mapping constructor names to the abstractions
    /// they stand for.
    pub fn symbol_table_comment(&self) -> String {
        let mut out = String::from("# abstraction constructors:\n");
        for e in &self.entries {
            writeln!(out, "#   {} = {}", e.sym.name, e.abstraction()).unwrap();
        }
        out
    }
}

/// `app` as a function symbol.
pub(super) fn app_sym() -> Sym {
    Sym::function(APP, 2)
}

pub(super) fn capp_sym() -> Sym {
    Sym::constructor(CAPP, 2)
}

/// Rule-local variable names: `v0` for the binder, `v1…vn` for the free
/// variables of the abstraction.
pub(super) fn rule_var(i: usize) -> Name {
    Name::new(&format!("v{i}"))
}
