use std::collections::BTreeSet;

use crate::syntax::{next, subst_term, var, Context, DSubst, Name, Subst, Term, Tm};

use super::{synth, whnf};

/// Canonical form of a delayed substitution relative to the body it scopes over.
///
/// Binding terms are put in weak-head normal form, bindings of the form
/// `x <- next ξ' s` are flattened into the outer substitution with `s`
/// substituted for `x`, bindings the body does not use are dropped, and the
/// rest are ordered by first use in the body.
pub fn normalize_dsubst(ctx: &Context, xi: &DSubst, body: &Tm) -> (DSubst, Tm) {
    // a later binding with the same name shadows an earlier one
    let mut pending: Vec<(Name, Tm)> = Vec::new();
    for (k, (x, t)) in xi.bindings().iter().enumerate() {
        if !xi.bindings()[k + 1..].iter().any(|(y, _)| y == x) {
            pending.push((x.clone(), t.clone()));
        }
    }

    let mut body = body.clone();
    let mut out: Vec<(Name, Tm)> = Vec::new();
    let mut rest = pending.into_iter().collect::<std::collections::VecDeque<_>>();
    while let Some((x, t)) = rest.pop_front() {
        let v = whnf(ctx, &t);
        let Term::Next(inner, s) = &*v else {
            out.push((x, v));
            continue;
        };

        // binders of the inner substitution join the outer one
        let mut taken: BTreeSet<Name> = body.free_names();
        taken.extend(out.iter().map(|(y, _)| y.clone()));
        taken.extend(rest.iter().map(|(y, _)| y.clone()));
        let mut ren = Subst::new();
        let mut inner_names = Vec::new();
        for (y, u) in inner.bindings() {
            let y2 = if taken.contains(y) { y.fresh() } else { y.clone() };
            if y2 != *y {
                ren = ren.with_term(y, &var(y2.clone()));
            }
            taken.insert(y2.clone());
            inner_names.push(y2.clone());
            out.push((y2, u.clone()));
        }
        let s = ren.apply(s);

        // outer binders must not capture free names of `s`
        let captured: BTreeSet<Name> = s
            .free_names()
            .into_iter()
            .filter(|n| !inner_names.contains(n))
            .filter(|n| *n != x && (out.iter().any(|(y, _)| y == n) || rest.iter().any(|(y, _)| y == n)))
            .collect();
        for c in captured {
            let fresh = c.fresh();
            body = subst_term(&body, &c, &var(fresh.clone()));
            for (y, _) in out.iter_mut().chain(rest.iter_mut()) {
                if *y == c {
                    *y = fresh.clone();
                }
            }
        }
        body = subst_term(&body, &x, &s);
    }

    let (mut kept, pinned) = drop_unused(ctx, out, &body);
    // exchange only applies to independent bindings
    if !pinned {
        let order = body.free_names_ordered();
        kept.sort_by_key(|(x, _)| order.iter().position(|y| y == x));
    }
    (DSubst(kept), body)
}

/// Whether the type of a binding term may mention earlier bindings: it is a
/// later type under a nonempty substitution, or cannot be read off.
fn may_depend(ctx: &Context, t: &Tm) -> bool {
    synth(ctx, t).is_none_or(|ty| !matches!(&*whnf(ctx, &ty), Term::Later(xi, _) if xi.is_empty()))
}

/// Keep the bindings the body uses, and every binding before a kept one
/// that may depend on it. The flag reports whether any dependency was kept.
pub(crate) fn drop_unused(ctx: &Context, binds: Vec<(Name, Tm)>, body: &Tm) -> (Vec<(Name, Tm)>, bool) {
    let mut keep = vec![false; binds.len()];
    let mut pinned = false;
    for (k, (x, t)) in binds.iter().enumerate().rev() {
        keep[k] = pinned || body.mentions(x);
        if keep[k] && !pinned && k > 0 {
            pinned = may_depend(ctx, t);
        }
    }
    let kept = binds.into_iter().zip(keep).filter_map(|(b, k)| k.then_some(b)).collect();
    (kept, pinned)
}

/// Weak-head normal form of `next ξ t`: [`normalize_dsubst`] followed by
/// `next [x <- u] x = u`.
pub fn normalize_next(ctx: &Context, xi: &DSubst, body: &Tm) -> Tm {
    let (xi, body) = normalize_dsubst(ctx, xi, body);
    if let ([(x, u)], Term::Var(y)) = (xi.bindings(), &*body) {
        if x == y {
            return u.clone();
        }
    }
    next(xi, body)
}
