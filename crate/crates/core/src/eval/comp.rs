use crate::syntax::{
    app, comp, fst, pair, papp, plam, snd, subst_interval, subst_term, var, Context, Face, Interval, Name,
    System, Term, Tm,
};

use super::{lam_annotated, select_system, whnf};

/// `transp^i A a`, composition with the empty system.
pub fn transport(i: &Name, ty: &Tm, a: &Tm) -> Tm {
    comp(i.clone(), ty.clone(), System::empty(), a.clone())
}

/// `fill^i A [φ ↦ u] a0 = comp^j A[i∧j/i] [φ ↦ u[i∧j/i], (i=0) ↦ a0] a0`.
///
/// The result mentions `i`; at `i = 0` it is `a0`, at `i = 1` the composite.
pub fn fill(i: &Name, ty: &Tm, system: &System, a0: &Tm) -> Tm {
    let j = i.fresh();
    let ij = Interval::meet(Interval::Name(i.clone()), Interval::Name(j.clone()));
    let mut branches: Vec<(Face, Tm)> = system
        .branches()
        .iter()
        .map(|(f, u)| (f.clone(), subst_interval(u, i, &ij)))
        .collect();
    branches.push((Face::eq0(i.clone()), a0.clone()));
    comp(j, subst_interval(ty, i, &ij), System::new(branches), a0.clone())
}

/// Weak-head normal form of `comp^i A [sys] a0`.
pub fn eval_comp(ctx: &Context, i: &Name, ty: &Tm, system: &System, a0: &Tm) -> Tm {
    if let Some(u) = select_system(ctx, system) {
        return whnf(ctx, &subst_interval(&u, i, &Interval::One));
    }
    let live: Vec<(Face, Tm)> = system
        .branches()
        .iter()
        .filter(|(f, _)| !ctx.restriction().split(f).is_empty())
        .cloned()
        .collect();

    let j = ctx.fresh_for(i);
    let rename = |t: &Tm| {
        if j == *i {
            t.clone()
        } else {
            subst_interval(t, i, &Interval::Name(j.clone()))
        }
    };
    let i = j.clone();
    let ty = rename(ty);
    let system = System(live.iter().map(|(f, u)| (f.clone(), rename(u))).collect());

    let stuck = || comp(i.clone(), ty.clone(), system.clone(), a0.clone());
    let line = ctx.push_interval(i.clone());
    let tyw = whnf(&line, &ty);
    let iv = Interval::Name(i.clone());

    match &*tyw {
        Term::Pi(x, b, c) => {
            // transport the argument backwards along the domain
            let y = x.fresh();
            let yv = var(y.clone());
            let b_rev = subst_interval(b, &i, &Interval::neg(iv.clone()));
            let w = fill(&i, &b_rev, &System::empty(), &yv);
            let y_tilde = subst_interval(&w, &i, &Interval::neg(iv.clone()));
            let body = comp(
                i.clone(),
                subst_term(c, x, &y_tilde),
                system.map_terms(|u| app(u.clone(), y_tilde.clone())),
                app(a0.clone(), subst_interval(&y_tilde, &i, &Interval::Zero)),
            );
            lam_annotated(y, subst_interval(b, &i, &Interval::One), body)
        }
        Term::Sigma(x, b, c) => {
            let sys1 = system.map_terms(|u| fst(u.clone()));
            let first = comp(i.clone(), b.clone(), sys1.clone(), fst(a0.clone()));
            let c = if c.mentions(x) {
                subst_term(c, x, &fill(&i, b, &sys1, &fst(a0.clone())))
            } else {
                c.clone()
            };
            let second = comp(i.clone(), c, system.map_terms(|u| snd(u.clone())), snd(a0.clone()));
            pair(first, second)
        }
        Term::Path(b, l, r) => {
            let k = Name::new("j").fresh();
            let kv = Interval::Name(k.clone());
            let mut branches: Vec<(Face, Tm)> = system
                .branches()
                .iter()
                .map(|(f, u)| (f.clone(), papp(u.clone(), kv.clone())))
                .collect();
            branches.push((Face::eq0(k.clone()), l.clone()));
            branches.push((Face::eq1(k.clone()), r.clone()));
            plam(
                k.clone(),
                comp(i.clone(), b.clone(), System::new(branches), papp(a0.clone(), kv)),
            )
        }
        // no equation for composition at later types
        Term::Later(..) => stuck(),
        _ => {
            // constant lines with constant sides: nothing to transport. A side
            // is constant when it agrees with the base on its face.
            let constant = !tyw.mentions(&i)
                && system.branches().iter().all(|(f, u)| {
                    !u.mentions(&i) || line.restrict(f).iter().all(|c| crate::check::convert(c, u, a0, &tyw))
                });
            if constant {
                return whnf(ctx, a0);
            }
            if !matches!(&*tyw, Term::Nat) {
                return stuck();
            }
            match numeral_sides(&line, &system, a0) {
                Some(None) => crate::syntax::zero(),
                Some(Some((sides, a))) => crate::syntax::suc(comp(i.clone(), ty.clone(), sides, a)),
                None => stuck(),
            }
        }
    }
}

/// When the base and every side start with the same constructor of `N`:
/// `None` for zero, otherwise the predecessors.
fn numeral_sides(line: &Context, system: &System, a0: &Tm) -> Option<Option<(System, Tm)>> {
    let head = |ctx: &Context, t: &Tm| match &*whnf(ctx, t) {
        Term::Zero => Some(None),
        Term::Suc(n) => Some(Some(n.clone())),
        _ => None,
    };
    let base = head(line, a0)?;
    let mut preds = Vec::new();
    for (f, u) in system.branches() {
        let restricted = line.restrict(f);
        let ctx = match restricted.as_slice() {
            [one] => one,
            _ => line,
        };
        match (head(ctx, u)?, &base) {
            (None, None) => {}
            (Some(n), Some(_)) => preds.push((f.clone(), n)),
            _ => return None,
        }
    }
    Some(base.map(|a| (System::new(preds), a)))
}
