//! Weak-head evaluation and read-back.
//!
//! [`whnf`] head-reduces a well-typed term until no rule applies. Ill-typed
//! input never panics; it just stays stuck.

use crate::syntax::{
    app, dfix, fix, later, next, papp, path, pi, plam, sigma, subst_interval, subst_term, suc, var,
    Context, DSubst, Endpoint, Interval, Name, System, Term, Tm,
};

mod comp;
mod dsubst;

pub use comp::{eval_comp, fill, transport};
pub use dsubst::{normalize_dsubst, normalize_next};

/// Weak-head normal form of `t` in `ctx`.
pub fn whnf(ctx: &Context, t: &Tm) -> Tm {
    let mut t = t.clone();
    loop {
        let step = match &*t {
            Term::Var(x) => match ctx.lookup_def(x) {
                Some(body) => body.clone(),
                None => return t,
            },
            Term::App(f, a) => {
                let f = whnf(ctx, f);
                match &*f {
                    Term::Lam(x, _, body) => subst_term(body, x, a),
                    _ => return app(f, a.clone()),
                }
            }
            Term::Fst(p) => {
                let p = whnf(ctx, p);
                match &*p {
                    Term::Pair(a, _) => a.clone(),
                    _ => return crate::syntax::fst(p),
                }
            }
            Term::Snd(p) => {
                let p = whnf(ctx, p);
                match &*p {
                    Term::Pair(_, b) => b.clone(),
                    _ => return crate::syntax::snd(p),
                }
            }
            Term::NatRec {
                motive,
                zero,
                succ,
                target,
            } => {
                let n = whnf(ctx, target);
                match &*n {
                    Term::Zero => zero.clone(),
                    Term::Suc(m) => {
                        let rec = std::sync::Arc::new(Term::NatRec {
                            motive: motive.clone(),
                            zero: zero.clone(),
                            succ: succ.clone(),
                            target: m.clone(),
                        });
                        app(app(succ.clone(), m.clone()), rec)
                    }
                    _ => {
                        return std::sync::Arc::new(Term::NatRec {
                            motive: motive.clone(),
                            zero: zero.clone(),
                            succ: succ.clone(),
                            target: n,
                        })
                    }
                }
            }
            Term::PApp(p, r) => {
                let p = whnf(ctx, p);
                if let Term::PLam(i, body) = &*p {
                    subst_interval(body, i, r)
                } else {
                    match endpoint_of(ctx, &p, r) {
                        Some(t) => t,
                        None => return papp(p, r.clone()),
                    }
                }
            }
            Term::Comp {
                name,
                ty,
                system,
                base,
            } => return eval_comp(ctx, name, ty, system, base),
            Term::Sys(system) => match select_system(ctx, system) {
                Some(u) => u,
                None => return t,
            },
            Term::Later(xi, a) => {
                let (xi, a) = normalize_dsubst(ctx, xi, a);
                return later(xi, a);
            }
            Term::Next(xi, body) => return normalize_next(ctx, xi, body),
            Term::DFix {
                dir,
                name,
                ty,
                body,
            } => match ctx.restriction().decide(dir) {
                Some(Endpoint::One) => {
                    let d0 = dfix(Interval::Zero, name.clone(), ty.clone(), body.clone());
                    return next(DSubst::empty(), subst_term(body, name, &d0));
                }
                Some(Endpoint::Zero) if *dir != Interval::Zero => {
                    return dfix(Interval::Zero, name.clone(), ty.clone(), body.clone())
                }
                _ => return t,
            },
            _ => return t,
        };
        t = step;
    }
}

/// `p r` for a neutral `p : Path A a b` when `r` is forced to an endpoint.
fn endpoint_of(ctx: &Context, p: &Tm, r: &Interval) -> Option<Tm> {
    let e = ctx.restriction().decide(r)?;
    let ty = whnf(ctx, &synth(ctx, p)?);
    match (&*ty, e) {
        (Term::Path(_, a, _), Endpoint::Zero) => Some(a.clone()),
        (Term::Path(_, _, b), Endpoint::One) => Some(b.clone()),
        _ => None,
    }
}

/// The first branch whose face is entailed by the restriction of `ctx`.
pub fn select_system(ctx: &Context, system: &System) -> Option<Tm> {
    system
        .branches()
        .iter()
        .find(|(f, _)| ctx.restriction().entails(f))
        .map(|(_, u)| u.clone())
}

/// The type of a neutral term, read off its head. Returns `None` for
/// anything that is not an elimination of a typed variable.
pub fn synth(ctx: &Context, t: &Tm) -> Option<Tm> {
    match &**t {
        Term::Var(x) => ctx.lookup_type(x).flatten(),
        Term::App(f, a) => {
            let ty = whnf(ctx, &synth(ctx, f)?);
            match &*ty {
                Term::Pi(x, _, b) => Some(subst_term(b, x, a)),
                _ => None,
            }
        }
        Term::Fst(p) => match &*whnf(ctx, &synth(ctx, p)?) {
            Term::Sigma(_, a, _) => Some(a.clone()),
            _ => None,
        },
        Term::Snd(p) => match &*whnf(ctx, &synth(ctx, p)?) {
            Term::Sigma(x, _, b) => Some(subst_term(b, x, &crate::syntax::fst(p.clone()))),
            _ => None,
        },
        Term::PApp(p, _) => match &*whnf(ctx, &synth(ctx, p)?) {
            Term::Path(a, _, _) => Some(a.clone()),
            _ => None,
        },
        Term::NatRec { motive, target, .. } => Some(app(motive.clone(), target.clone())),
        Term::Comp { name, ty, .. } => Some(subst_interval(ty, name, &Interval::One)),
        Term::DFix { ty, .. } => Some(later(DSubst::empty(), ty.clone())),
        _ => None,
    }
}

/// The path `⟨i⟩ fix^i x : A. t` from `fix x. t` to its one-step unfolding.
pub fn unfold_path(x: &Name, ty: &Tm, t: &Tm) -> Tm {
    let mut i = Name::new("i");
    if t.mentions(&i) || ty.mentions(&i) {
        i = i.fresh();
    }
    plam(i.clone(), fix(Interval::Name(i), x.clone(), ty.clone(), t.clone()))
}

/// Pick a binder name fresh for `ctx` and rename `body` accordingly.
pub(crate) fn open(ctx: &Context, x: &Name, body: &Tm) -> (Name, Tm) {
    let y = ctx.fresh_for(x);
    if y == *x {
        (y, body.clone())
    } else {
        let b = subst_term(body, x, &var(y.clone()));
        (y, b)
    }
}

pub(crate) fn open_interval(ctx: &Context, i: &Name, body: &Tm) -> (Name, Tm) {
    let j = ctx.fresh_for(i);
    if j == *i {
        (j, body.clone())
    } else {
        let b = subst_interval(body, i, &Interval::Name(j.clone()));
        (j, b)
    }
}

/// Full normal form, reducing under binders. Types are threaded through
/// where known so that path endpoints of bound variables still compute.
pub fn normalize(ctx: &Context, t: &Tm) -> Tm {
    nf(ctx, t, None)
}

/// [`normalize`] for a term known to have type `ty`.
pub fn normalize_at(ctx: &Context, t: &Tm, ty: &Tm) -> Tm {
    nf(ctx, t, Some(ty))
}

fn nf(ctx: &Context, t: &Tm, ty: Option<&Tm>) -> Tm {
    use std::sync::Arc;
    if ctx.restriction().is_absurd() {
        return t.clone();
    }
    let v = whnf(ctx, t);
    let ty = ty.map(|ty| whnf(ctx, ty));
    match &*v {
        Term::Var(_) | Term::Zero | Term::Nat | Term::Univ => v,
        Term::Lam(x, ann, body) => {
            let (y, body) = open(ctx, x, body);
            let (dom, cod) = match (ty.as_deref(), ann) {
                (Some(Term::Pi(z, a, b)), _) => (Some(a.clone()), Some(subst_term(b, z, &var(y.clone())))),
                (_, Some(a)) => (Some(a.clone()), None),
                _ => (None, None),
            };
            let ann = ann.as_ref().map(|a| nf(ctx, a, None));
            let inner = ctx.push_var(y.clone(), dom);
            Arc::new(Term::Lam(y, ann, nf(&inner, &body, cod.as_ref())))
        }
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            let (y, b) = open(ctx, x, b);
            let inner = ctx.push_var(y.clone(), Some(a.clone()));
            let a = nf(ctx, a, None);
            let b = nf(&inner, &b, None);
            if matches!(&*v, Term::Pi(..)) {
                pi(y, a, b)
            } else {
                sigma(y, a, b)
            }
        }
        Term::Pair(a, b) => {
            let (ta, tb) = match ty.as_deref() {
                Some(Term::Sigma(x, ta, tb)) => (Some(ta.clone()), Some(subst_term(tb, x, a))),
                _ => (None, None),
            };
            crate::syntax::pair(nf(ctx, a, ta.as_ref()), nf(ctx, b, tb.as_ref()))
        }
        Term::Suc(n) => suc(nf(ctx, n, Some(&crate::syntax::nat()))),
        Term::Path(a, l, r) => path(nf(ctx, a, None), nf(ctx, l, Some(a)), nf(ctx, r, Some(a))),
        Term::PLam(i, body) => {
            let (j, body) = open_interval(ctx, i, body);
            let inner = ctx.push_interval(j.clone());
            let a = match ty.as_deref() {
                Some(Term::Path(a, _, _)) => Some(a.clone()),
                _ => None,
            };
            plam(j, nf(&inner, &body, a.as_ref()))
        }
        Term::App(f, a) => {
            let dom = synth(ctx, f).map(|fty| whnf(ctx, &fty)).and_then(|fty| match &*fty {
                Term::Pi(_, d, _) => Some(d.clone()),
                _ => None,
            });
            app(nf(ctx, f, None), nf(ctx, a, dom.as_ref()))
        }
        Term::Fst(p) => crate::syntax::fst(nf(ctx, p, None)),
        Term::Snd(p) => crate::syntax::snd(nf(ctx, p, None)),
        Term::PApp(p, r) => papp(nf(ctx, p, None), r.simplify()),
        Term::NatRec {
            motive,
            zero,
            succ,
            target,
        } => Arc::new(Term::NatRec {
            motive: nf(ctx, motive, None),
            zero: nf(ctx, zero, None),
            succ: nf(ctx, succ, None),
            target: nf(ctx, target, Some(&crate::syntax::nat())),
        }),
        Term::Comp {
            name,
            ty: a,
            system,
            base,
        } => {
            let j = ctx.fresh_for(name);
            let ren = |u: &Tm| {
                if j == *name {
                    u.clone()
                } else {
                    subst_interval(u, name, &Interval::Name(j.clone()))
                }
            };
            let a = ren(a);
            let inner = ctx.push_interval(j.clone());
            let branches = system
                .branches()
                .iter()
                .map(|(f, u)| {
                    let u = ren(u);
                    let parts = inner.restrict(f);
                    let u = match parts.as_slice() {
                        [one] => nf(one, &u, Some(&a)),
                        _ => u,
                    };
                    (f.clone(), u)
                })
                .collect();
            let base = nf(ctx, base, Some(&subst_interval(&a, &j, &Interval::Zero)));
            let a = nf(&inner, &a, None);
            crate::syntax::comp(j, a, System::new(branches), base)
        }
        Term::Sys(system) => {
            let branches = system
                .branches()
                .iter()
                .map(|(f, u)| {
                    let parts = ctx.restrict(f);
                    let u = match parts.as_slice() {
                        [one] => nf(one, u, ty.as_ref()),
                        _ => u.clone(),
                    };
                    (f.clone(), u)
                })
                .collect();
            Arc::new(Term::Sys(System::new(branches)))
        }
        Term::Later(xi, a) => {
            let (xi, inner) = nf_dsubst(ctx, xi);
            let a = nf(&inner, &rename_body(&xi, a), None);
            later(prune(ctx, xi.0, &a), a)
        }
        Term::Next(xi, body) => {
            let body_ty = match ty.as_deref() {
                Some(Term::Later(txi, a)) if txi.is_empty() => Some(a.clone()),
                _ => None,
            };
            let (xi, inner) = nf_dsubst(ctx, xi);
            let body = nf(&inner, &rename_body(&xi, body), body_ty.as_ref());
            let xi = prune(ctx, xi.0, &body);
            match (xi.bindings(), &*body) {
                ([(x, u)], Term::Var(y)) if x == y => u.clone(),
                _ => next(xi, body),
            }
        }
        Term::DFix {
            dir,
            name,
            ty: a,
            body,
        } => {
            let (y, body) = open(ctx, name, body);
            let inner = ctx.push_var(y.clone(), Some(later(DSubst::empty(), a.clone())));
            let b = nf(&inner, &body, Some(a));
            dfix(dir.simplify(), y, nf(ctx, a, None), b)
        }
    }
}

struct Renamed(DSubst, Vec<(Name, Name)>);

/// Drop bindings that normalization of the body made unused.
fn prune(ctx: &Context, xi: DSubst, body: &Tm) -> DSubst {
    DSubst(dsubst::drop_unused(ctx, xi.0, body).0)
}

/// Normalize binding terms and extend the context with the bound names,
/// typed where the binding's type is a closed `▷A`.
fn nf_dsubst(ctx: &Context, xi: &DSubst) -> (Renamed, Context) {
    let mut inner = ctx.clone();
    let mut out = Vec::new();
    let mut renames = Vec::new();
    for (x, t) in xi.bindings() {
        let bty = synth(ctx, t).map(|ty| whnf(ctx, &ty)).and_then(|ty| match &*ty {
            Term::Later(txi, a) if txi.is_empty() => Some(a.clone()),
            _ => None,
        });
        let y = inner.fresh_for(x);
        if y != *x {
            renames.push((x.clone(), y.clone()));
        }
        out.push((y.clone(), nf(ctx, t, None)));
        inner = inner.push_var(y, bty);
    }
    (Renamed(DSubst(out), renames), inner)
}

fn rename_body(xi: &Renamed, body: &Tm) -> Tm {
    let mut sub = crate::syntax::Subst::new();
    for (x, y) in &xi.1 {
        sub = sub.with_term(x, &var(y.clone()));
    }
    sub.apply(body)
}

/// Wrap an unannotated lambda's domain for display.
pub(crate) fn lam_annotated(x: Name, dom: Tm, body: Tm) -> Tm {
    std::sync::Arc::new(Term::Lam(x, Some(dom), body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{fst, lam, nat, numeral, pair, zero, Face, Global, Globals};
    use std::sync::Arc;

    fn ctx_with(vars: &[(&str, Tm)]) -> Context {
        let mut ctx = Context::default();
        for (x, ty) in vars {
            ctx = ctx.push_var(Name::new(x), Some(ty.clone()));
        }
        ctx
    }

    #[test]
    fn beta_rules() {
        let ctx = Context::default();
        let t = app(lam("x", suc(var("x"))), zero());
        assert_eq!(whnf(&ctx, &t), suc(zero()));
        assert_eq!(whnf(&ctx, &fst(pair(zero(), nat()))), zero());
        let p = plam("i", papp(var("q"), Interval::neg(Interval::name("i"))));
        let t = papp(p, Interval::name("k"));
        assert_eq!(
            whnf(&ctx, &t),
            papp(var("q"), Interval::neg(Interval::name("k")))
        );
    }

    #[test]
    fn path_endpoints_of_neutrals() {
        let ctx = ctx_with(&[("p", path(nat(), var("a"), var("b")))]);
        assert_eq!(whnf(&ctx, &papp(var("p"), Interval::Zero)), var("a"));
        assert_eq!(whnf(&ctx, &papp(var("p"), Interval::One)), var("b"));
        let stuck = papp(var("p"), Interval::name("i"));
        assert_eq!(whnf(&ctx, &stuck), stuck);
    }

    #[test]
    fn natrec_computes() {
        let ctx = Context::default();
        // addition by recursion on the second argument
        let add = |m: Tm, n: Tm| {
            Arc::new(Term::NatRec {
                motive: lam("_", nat()),
                zero: m,
                succ: lam("k", lam("r", suc(var("r")))),
                target: n,
            })
        };
        let t = add(numeral(2), numeral(3));
        assert_eq!(normalize(&ctx, &t).as_numeral(), Some(5));
    }

    #[test]
    fn system_selection() {
        let ctx = Context::default().push_interval(Name::new("i"));
        let sys = System::new(vec![(Face::eq0("i"), var("t1")), (Face::eq1("i"), var("t2"))]);
        assert_eq!(select_system(&ctx, &sys), None);
        let restricted = &ctx.restrict(&Face::eq1("i"))[0];
        assert_eq!(select_system(restricted, &sys), Some(var("t2")));
        let absurd = ctx.with_restriction(crate::cofib::Restriction::absurd());
        assert_eq!(select_system(&absurd, &sys), Some(var("t1")));
    }

    #[test]
    fn dfix_unfolds_only_at_one() {
        let ctx = Context::default();
        let d1 = dfix(Interval::One, "x", nat(), zero());
        assert!(matches!(&*whnf(&ctx, &d1), Term::Next(xi, b) if xi.is_empty() && **b == Term::Zero));
        let d0 = dfix(Interval::Zero, "x", nat(), zero());
        assert_eq!(whnf(&ctx, &d0), d0);
    }

    #[test]
    fn globals_unfold() {
        let mut g = Globals::new();
        g.insert(
            Name::new("two"),
            Global {
                ty: nat(),
                body: Some(numeral(2)),
            },
        );
        let ctx = Context::new(Arc::new(g));
        assert_eq!(whnf(&ctx, &var("two")), numeral(2));
        // a local binder shadows the global
        let shadowed = ctx.push_var(Name::new("two"), Some(nat()));
        assert_eq!(whnf(&shadowed, &var("two")), var("two"));
    }

    #[test]
    fn unfold_path_endpoints() {
        let ctx = Context::default();
        let t = suc(zero());
        let p = unfold_path(&Name::new("x"), &nat(), &t);
        assert_eq!(whnf(&ctx, &papp(p.clone(), Interval::Zero)), t);
        assert_eq!(whnf(&ctx, &papp(p, Interval::One)), t);
    }
}
