//! Judgemental equality.
//!
//! Comparison is type-directed where a type is known (η for Π, Σ and path
//! types) and structural on weak-head normal forms otherwise. Terms of later
//! type are compared by merging their delayed substitutions into a common
//! extension of the context and comparing the bodies there.

use log::{log_enabled, trace, Level};

use crate::eval::{synth, whnf};
use crate::syntax::{
    alpha_eq, app, arrow, fst, nat, papp, pi, snd, subst_interval, subst_term, suc, univ, var, Context, DSubst,
    Face, Interval, Name, Subst, System, Term, Tm,
};

/// `Γ ⊢ a = b : A`.
pub fn convert(ctx: &Context, a: &Tm, b: &Tm, ty: &Tm) -> bool {
    conv(ctx, a, b, Some(ty))
}

/// `Γ ⊢ A = B` for types, or untyped comparison of terms.
pub fn convert_types(ctx: &Context, a: &Tm, b: &Tm) -> bool {
    conv(ctx, a, b, None)
}

pub(crate) fn conv(ctx: &Context, a: &Tm, b: &Tm, ty: Option<&Tm>) -> bool {
    if ctx.restriction().is_absurd() || alpha_eq(a, b) {
        return true;
    }
    let ok = typed(ctx, a, b, ty);
    if log_enabled!(Level::Trace) {
        use crate::surface::pretty;
        trace!(
            "{} {} == {}{}",
            if ok { "ok  " } else { "FAIL" },
            pretty::term(a),
            pretty::term(b),
            match ty {
                Some(ty) => format!(" : {}", pretty::term(ty)),
                None => String::new(),
            }
        );
    }
    ok
}

fn typed(ctx: &Context, a: &Tm, b: &Tm, ty: Option<&Tm>) -> bool {
    let Some(ty) = ty else {
        return structural(ctx, a, b, None);
    };
    let tyw = whnf(ctx, ty);
    match &*tyw {
        Term::Pi(x, dom, cod) => {
            let y = ctx.fresh_for(x);
            let inner = ctx.push_var(y.clone(), Some(dom.clone()));
            let yv = var(y);
            conv(&inner, &app(a.clone(), yv.clone()), &app(b.clone(), yv.clone()), Some(&subst_term(cod, x, &yv)))
        }
        Term::Sigma(x, fa, fb) => {
            let (a1, b1) = (fst(a.clone()), fst(b.clone()));
            conv(ctx, &a1, &b1, Some(fa))
                && conv(ctx, &snd(a.clone()), &snd(b.clone()), Some(&subst_term(fb, x, &a1)))
        }
        Term::Path(pa, _, _) => {
            let i = ctx.fresh_for(&Name::new("i"));
            let inner = ctx.push_interval(i.clone());
            let iv = Interval::Name(i);
            conv(&inner, &papp(a.clone(), iv.clone()), &papp(b.clone(), iv), Some(pa))
        }
        Term::Later(..) => delayed(ctx, &whnf(ctx, a), &whnf(ctx, b), Some(&tyw), Mode::Next),
        _ => structural(ctx, a, b, Some(&tyw)),
    }
}

/// A stuck system at the head of an elimination spine.
fn stuck_system(t: &Tm) -> Option<&System> {
    match &**t {
        Term::Sys(s) => Some(s),
        Term::App(f, _) | Term::Fst(f) | Term::Snd(f) | Term::PApp(f, _) => stuck_system(f),
        Term::NatRec { target, .. } => stuck_system(target),
        _ => None,
    }
}

fn structural(ctx: &Context, a: &Tm, b: &Tm, ty: Option<&Tm>) -> bool {
    let a = whnf(ctx, a);
    let b = whnf(ctx, b);
    if alpha_eq(&a, &b) {
        return true;
    }
    // compare face by face where a system has not been resolved
    if let Some(sys) = stuck_system(&a).or_else(|| stuck_system(&b)) {
        if !ctx.restriction().entails(&sys.extent()) {
            return false;
        }
        return sys
            .branches()
            .iter()
            .all(|(f, _)| ctx.restrict(f).iter().all(|c| conv(c, &a, &b, ty)));
    }
    match (&*a, &*b) {
        (Term::Lam(x, ann, t), Term::Lam(y, _, u)) => {
            let z = ctx.fresh_for(x);
            let zv = var(z.clone());
            let inner = ctx.push_var(z, ann.clone());
            conv(&inner, &subst_term(t, x, &zv), &subst_term(u, y, &zv), None)
        }
        (Term::Lam(x, ann, t), _) | (_, Term::Lam(x, ann, t)) => {
            let other = if matches!(&*a, Term::Lam(..)) { &b } else { &a };
            let z = ctx.fresh_for(x);
            let zv = var(z.clone());
            let inner = ctx.push_var(z, ann.clone());
            conv(&inner, &subst_term(t, x, &zv), &app(other.clone(), zv), None)
        }
        (Term::Pair(a1, a2), Term::Pair(b1, b2)) => conv(ctx, a1, b1, None) && conv(ctx, a2, b2, None),
        (Term::Pair(p1, p2), _) | (_, Term::Pair(p1, p2)) => {
            let other = if matches!(&*a, Term::Pair(..)) { &b } else { &a };
            conv(ctx, p1, &fst(other.clone()), None) && conv(ctx, p2, &snd(other.clone()), None)
        }
        (Term::PLam(i, t), Term::PLam(j, u)) => {
            let k = ctx.fresh_for(i);
            let kv = Interval::Name(k.clone());
            let inner = ctx.push_interval(k);
            conv(&inner, &subst_interval(t, i, &kv), &subst_interval(u, j, &kv), None)
        }
        (Term::PLam(i, t), _) | (_, Term::PLam(i, t)) => {
            let other = if matches!(&*a, Term::PLam(..)) { &b } else { &a };
            let k = ctx.fresh_for(i);
            let kv = Interval::Name(k.clone());
            let inner = ctx.push_interval(k);
            conv(&inner, &subst_interval(t, i, &kv), &papp(other.clone(), kv), None)
        }
        (Term::Next(..), _) | (_, Term::Next(..)) => delayed(ctx, &a, &b, ty, Mode::Next),
        (Term::Later(..), Term::Later(..)) => delayed(ctx, &a, &b, None, Mode::Later),
        (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2)) | (Term::Sigma(x, a1, b1), Term::Sigma(y, a2, b2)) => {
            if !conv(ctx, a1, a2, None) {
                return false;
            }
            let z = ctx.fresh_for(x);
            let zv = var(z.clone());
            let inner = ctx.push_var(z, Some(a1.clone()));
            conv(&inner, &subst_term(b1, x, &zv), &subst_term(b2, y, &zv), None)
        }
        (Term::Path(a1, l1, r1), Term::Path(a2, l2, r2)) => {
            conv(ctx, a1, a2, None) && conv(ctx, l1, l2, Some(a1)) && conv(ctx, r1, r2, Some(a1))
        }
        (Term::Suc(m), Term::Suc(n)) => conv(ctx, m, n, Some(&nat())),
        _ => neutral(ctx, &a, &b),
    }
}

/// Comparison of neutral spines. Both sides are in weak-head normal form.
fn neutral(ctx: &Context, a: &Tm, b: &Tm) -> bool {
    match (&**a, &**b) {
        (Term::Var(x), Term::Var(y)) => x == y,
        (Term::App(f, x), Term::App(g, y)) => {
            if !neutral(ctx, f, g) {
                return false;
            }
            let dom = synth(ctx, f).map(|t| whnf(ctx, &t)).and_then(|t| match &*t {
                Term::Pi(_, d, _) => Some(d.clone()),
                _ => None,
            });
            conv(ctx, x, y, dom.as_ref())
        }
        (Term::Fst(p), Term::Fst(q)) | (Term::Snd(p), Term::Snd(q)) => neutral(ctx, p, q),
        (Term::PApp(p, r), Term::PApp(q, s)) => ctx.restriction().iv_equal(r, s) && neutral(ctx, p, q),
        (
            Term::NatRec {
                motive: m1,
                zero: z1,
                succ: s1,
                target: t1,
            },
            Term::NatRec {
                motive: m2,
                zero: z2,
                succ: s2,
                target: t2,
            },
        ) => {
            let n = Name::new("n").fresh();
            let nv = var(n.clone());
            let step = pi(
                n,
                nat(),
                arrow(app(m1.clone(), nv.clone()), app(m1.clone(), suc(nv))),
            );
            neutral(ctx, t1, t2)
                && conv(ctx, m1, m2, Some(&arrow(nat(), univ())))
                && conv(ctx, z1, z2, Some(&app(m1.clone(), crate::syntax::zero())))
                && conv(ctx, s1, s2, Some(&step))
        }
        (Term::Comp { .. }, Term::Comp { .. }) => comp_eq(ctx, a, b),
        (
            Term::DFix {
                dir: r1,
                name: x,
                ty: a1,
                body: t1,
            },
            Term::DFix {
                dir: r2,
                name: y,
                ty: a2,
                body: t2,
            },
        ) => {
            if !(ctx.restriction().iv_equal(r1, r2) && conv(ctx, a1, a2, None)) {
                return false;
            }
            let z = ctx.fresh_for(x);
            let zv = var(z.clone());
            let inner = ctx.push_var(z, Some(crate::syntax::later(DSubst::empty(), a1.clone())));
            conv(&inner, &subst_term(t1, x, &zv), &subst_term(t2, y, &zv), Some(a1))
        }
        _ => false,
    }
}

fn comp_eq(ctx: &Context, a: &Tm, b: &Tm) -> bool {
    let (
        Term::Comp {
            name: i1,
            ty: a1,
            system: s1,
            base: b1,
        },
        Term::Comp {
            name: i2,
            ty: a2,
            system: s2,
            base: b2,
        },
    ) = (&**a, &**b)
    else {
        return false;
    };
    let k = ctx.fresh_for(i1);
    let kv = Interval::Name(k.clone());
    let line = ctx.push_interval(k.clone());
    let a1 = subst_interval(a1, i1, &kv);
    let a2 = subst_interval(a2, i2, &kv);
    if !conv(&line, &a1, &a2, None) {
        return false;
    }
    if !conv(ctx, b1, b2, Some(&subst_interval(&a1, &k, &Interval::Zero))) {
        return false;
    }
    if !ctx.restriction().face_equal(&s1.extent(), &s2.extent()) {
        return false;
    }
    for (f, u) in s1.branches() {
        let u = subst_interval(u, i1, &kv);
        for (g, v) in s2.branches() {
            let v = subst_interval(v, i2, &kv);
            for c in line.restrict(&Face::and(f.clone(), g.clone())) {
                if !conv(&c, &u, &v, Some(&a1)) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Next,
    Later,
}

/// A context extended by the bindings of several delayed substitutions,
/// identifying bindings whose terms are convertible.
struct Pool {
    base: Context,
    ctx: Context,
    binds: Vec<(Name, Tm)>,
}

impl Pool {
    fn new(ctx: &Context) -> Pool {
        Pool {
            base: ctx.clone(),
            ctx: ctx.clone(),
            binds: Vec::new(),
        }
    }

    /// Add a binding `x <- t` and return the name it is known by.
    fn add(&mut self, x: &Name, t: &Tm) -> Name {
        if let Some((y, _)) = self.binds.iter().find(|(_, u)| conv(&self.base, t, u, None)) {
            return y.clone();
        }
        let ty = self.binding_type(t);
        let y = self.ctx.fresh_for(x);
        self.ctx = self.ctx.push_var(y.clone(), ty);
        self.binds.push((y.clone(), t.clone()));
        y
    }

    /// `A` for a binding term of type `▷ξ A`, with `ξ` merged into the pool.
    fn binding_type(&mut self, t: &Tm) -> Option<Tm> {
        let ty = whnf(&self.base, &synth(&self.base, t)?);
        match &*ty {
            Term::Later(xi, a) => {
                let sub = self.add_all(xi);
                Some(sub.apply(a))
            }
            _ => None,
        }
    }

    fn add_all(&mut self, xi: &DSubst) -> Subst {
        let mut sub = Subst::new();
        for (x, t) in xi.bindings() {
            let y = self.add(x, t);
            if y != *x {
                sub = sub.with_term(x, &var(y));
            }
        }
        sub
    }
}

fn delayed(ctx: &Context, a: &Tm, b: &Tm, ty: Option<&Tm>, mode: Mode) -> bool {
    fn split(t: &Tm, mode: Mode) -> Option<(DSubst, Tm)> {
        match (&**t, mode) {
            (Term::Next(xi, body), Mode::Next) | (Term::Later(xi, body), Mode::Later) => {
                Some((xi.clone(), body.clone()))
            }
            // η: n = next [x <- n] x
            (_, Mode::Next) => {
                let x = Name::new("x").fresh();
                Some((DSubst(vec![(x.clone(), t.clone())]), var(x)))
            }
            _ => None,
        }
    }
    let (Some((xi1, b1)), Some((xi2, b2))) = (split(a, mode), split(b, mode)) else {
        return false;
    };
    let mut pool = Pool::new(ctx);
    let body_ty = match ty.map(|t| &**t) {
        Some(Term::Later(txi, ta)) => Some(pool.add_all(txi).apply(ta)),
        _ => None,
    };
    let s1 = pool.add_all(&xi1);
    let s2 = pool.add_all(&xi2);
    let inner = pool.ctx.clone();
    conv(&inner, &s1.apply(&b1), &s2.apply(&b2), body_ty.as_ref())
}
