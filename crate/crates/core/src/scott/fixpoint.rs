use crate::lambda::Term;
use crate::name::Name;

/// `H_1, …, H_n` such that `H_i V_1 … V_n` reduces in exactly `2n` weak
/// call-by-value steps to `V_i (λz.H_1 V_1 … V_n z) … (λz.H_n V_1 … V_n z)`
/// for any values `V_j`. Returns the terms and the step bound `2n`.
///
/// `H_i = M_i M_1 … M_n` with
/// `M_j = λx_1…x_n.λy_1…y_n. y_j (λz.x_1 x_1…x_n y_1…y_n z) … (λz.x_n x_1…x_n y_1…y_n z)`.
pub fn fixpoint_family(n: usize) -> (Vec<Term>, u64) {
    assert!(n >= 1, "a fixed-point family needs at least one member");
    let xs: Vec<Name> = (1..=n).map(|k| Name::new(&format!("fx{k}"))).collect();
    let ys: Vec<Name> = (1..=n).map(|k| Name::new(&format!("fy{k}"))).collect();
    let z = Name::new("fz");
    let vars = |names: &[Name]| names.iter().map(|&x| Term::var(x)).collect::<Vec<_>>();
    let unfold = |k: usize| {
        let args = vars(&xs).into_iter().chain(vars(&ys)).chain([Term::var(z)]);
        Term::abs(z, Term::app_many(Term::var(xs[k]), args))
    };
    let ms: Vec<Term> = (0..n)
        .map(|j| {
            let body = Term::app_many(Term::var(ys[j]), (0..n).map(unfold));
            Term::abs_many(&xs, Term::abs_many(&ys, body))
        })
        .collect();
    let hs = (0..n)
        .map(|i| Term::app_many(ms[i].clone(), ms.iter().cloned()))
        .collect();
    (hs, 2 * n as u64)
}

/// The expected result of unfolding `H_i V_1 … V_n`:
/// `V_i (λz.H_1 V_1 … V_n z) … (λz.H_n V_1 … V_n z)`.
pub fn fixpoint_unfolding(hs: &[Term], values: &[Term], i: usize) -> Term {
    let z = Name::new("fz");
    let guarded = hs.iter().map(|h| {
        Term::abs(
            z,
            Term::app(Term::app_many(h.clone(), values.iter().cloned()), Term::var(z)),
        )
    });
    Term::app_many(values[i].clone(), guarded)
}
