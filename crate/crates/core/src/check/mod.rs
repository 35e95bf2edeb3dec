//! Bidirectional type checking.
//!
//! Introduction forms are checked against a type; variables, eliminators and
//! annotated forms have their type inferred. Whenever checking falls back to
//! inference, the inferred and expected types are compared with [`conv`].

use crate::eval::{open, open_interval, whnf};
use crate::syntax::{
    app, arrow, later, nat, path, pi, sigma, subst_interval, subst_term, suc, univ, var, Context, DSubst, Face,
    Interval, Name, Subst, System, Term, Tm,
};
use crate::surface::pretty;

pub mod conv;
mod error;

pub use conv::{convert, convert_types};
pub use error::{ErrorCode, Span, TypeError};

pub type Result<T> = std::result::Result<T, TypeError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JudgementKind {
    Check,
    Infer,
    ConvertType,
    ConvertTerm,
    FaceEq,
    IntervalEq,
}

/// A judgement that was derived while checking, kept for testing.
#[derive(Clone, Debug)]
pub struct Judgement {
    pub kind: JudgementKind,
    pub ctx: Context,
    /// For `Check` and `Infer`: the term and its type. For conversions: both sides.
    pub subjects: Vec<Tm>,
}

/// A type checker, optionally recording every judgement it derives.
#[derive(Default)]
pub struct Checker {
    record: bool,
    judgements: Vec<Judgement>,
}

fn err(ctx: &Context, code: ErrorCode, msg: impl Into<String>) -> TypeError {
    TypeError::new(code, msg).with_context(ctx.render())
}

fn mismatch(ctx: &Context, code: ErrorCode, msg: &str, expected: &Tm, actual: &Tm) -> TypeError {
    err(ctx, code, msg).with_types(
        pretty::term(&crate::eval::normalize(ctx, expected)),
        pretty::term(&crate::eval::normalize(ctx, actual)),
    )
}

impl Checker {
    pub fn new() -> Checker {
        Checker::default()
    }

    pub fn recording() -> Checker {
        Checker {
            record: true,
            judgements: Vec::new(),
        }
    }

    pub fn judgements(&self) -> &[Judgement] {
        &self.judgements
    }

    pub fn take_judgements(&mut self) -> Vec<Judgement> {
        std::mem::take(&mut self.judgements)
    }

    fn note(&mut self, kind: JudgementKind, ctx: &Context, subjects: Vec<Tm>) {
        if self.record {
            self.judgements.push(Judgement {
                kind,
                ctx: ctx.clone(),
                subjects,
            });
        }
    }

    fn check_interval(&self, ctx: &Context, r: &Interval) -> Result<()> {
        match r.names().into_iter().find(|n| !ctx.has_interval(n)) {
            Some(n) => Err(err(ctx, ErrorCode::UnboundName, format!("interval name `{n}` is not in scope"))),
            None => Ok(()),
        }
    }

    fn check_face(&self, ctx: &Context, f: &Face) -> Result<()> {
        match f.names().into_iter().find(|n| !ctx.has_interval(n)) {
            Some(n) => Err(err(ctx, ErrorCode::UnboundName, format!("interval name `{n}` is not in scope"))),
            None => Ok(()),
        }
    }

    /// `Γ ⊢ t : A`, returning `A`.
    pub fn infer(&mut self, ctx: &Context, t: &Tm) -> Result<Tm> {
        let ty = self.infer_inner(ctx, t)?;
        self.note(JudgementKind::Infer, ctx, vec![t.clone(), ty.clone()]);
        Ok(ty)
    }

    fn infer_inner(&mut self, ctx: &Context, t: &Tm) -> Result<Tm> {
        match &**t {
            Term::Var(x) => match ctx.lookup_type(x) {
                Some(Some(ty)) => Ok(ty),
                Some(None) => Err(err(ctx, ErrorCode::CannotInfer, format!("`{x}` has no known type"))),
                None if ctx.has_interval(x) => Err(err(
                    ctx,
                    ErrorCode::UnboundVariable,
                    format!("`{x}` is an interval name, not a term"),
                )),
                None => Err(err(ctx, ErrorCode::UnboundVariable, format!("unbound variable `{x}`"))),
            },
            Term::App(f, a) => {
                let fty = self.infer(ctx, f)?;
                let w = whnf(ctx, &fty);
                match &*w {
                    Term::Pi(x, dom, cod) => {
                        self.check(ctx, a, dom)?;
                        Ok(subst_term(cod, x, a))
                    }
                    _ => Err(err(
                        ctx,
                        ErrorCode::NotAFunction,
                        format!("`{}` is applied but has type {}", pretty::term(f), pretty::term(&w)),
                    )),
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let pty = self.infer(ctx, p)?;
                let w = whnf(ctx, &pty);
                match (&**t, &*w) {
                    (Term::Fst(_), Term::Sigma(_, a, _)) => Ok(a.clone()),
                    (Term::Snd(_), Term::Sigma(x, _, b)) => Ok(subst_term(b, x, &crate::syntax::fst(p.clone()))),
                    _ => Err(err(
                        ctx,
                        ErrorCode::NotAPair,
                        format!("`{}` is projected but has type {}", pretty::term(p), pretty::term(&w)),
                    )),
                }
            }
            Term::PApp(p, r) => {
                self.check_interval(ctx, r)?;
                let pty = self.infer(ctx, p)?;
                let w = whnf(ctx, &pty);
                match &*w {
                    Term::Path(a, _, _) => Ok(a.clone()),
                    _ => Err(err(
                        ctx,
                        ErrorCode::NotAPath,
                        format!("`{}` is applied to an interval but has type {}", pretty::term(p), pretty::term(&w)),
                    )),
                }
            }
            Term::NatRec {
                motive,
                zero,
                succ,
                target,
            } => {
                self.check(ctx, motive, &arrow(nat(), univ()))?;
                self.check(ctx, zero, &app(motive.clone(), crate::syntax::zero()))?;
                let mut n = Name::new("n");
                if motive.mentions(&n) {
                    n = n.fresh();
                }
                let nv = var(n.clone());
                let step = pi(
                    n,
                    nat(),
                    arrow(app(motive.clone(), nv.clone()), app(motive.clone(), suc(nv))),
                );
                self.check(ctx, succ, &step)?;
                self.check(ctx, target, &nat())?;
                Ok(app(motive.clone(), target.clone()))
            }
            Term::Zero => Ok(nat()),
            Term::Suc(n) => {
                self.check(ctx, n, &nat())?;
                Ok(nat())
            }
            Term::Nat => Ok(univ()),
            Term::Univ => Err(err(ctx, ErrorCode::UniverseHasNoType, "the universe U has no type")),
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
                self.check(ctx, a, &univ())?;
                let (y, b) = open(ctx, x, b);
                self.check(&ctx.push_var(y, Some(a.clone())), &b, &univ())?;
                Ok(univ())
            }
            Term::Path(a, l, r) => {
                self.check(ctx, a, &univ())?;
                self.check(ctx, l, a)?;
                self.check(ctx, r, a)?;
                Ok(univ())
            }
            Term::Later(xi, a) => {
                let (inner, _, ren) = self.check_dsubst(ctx, xi)?;
                self.check(&inner, &ren.apply(a), &univ())?;
                Ok(univ())
            }
            Term::Lam(x, Some(a), body) => {
                self.check_type(ctx, a)?;
                let (y, body) = open(ctx, x, body);
                let b = self.infer(&ctx.push_var(y.clone(), Some(a.clone())), &body)?;
                Ok(pi(y, a.clone(), b))
            }
            Term::Lam(x, None, _) => Err(err(
                ctx,
                ErrorCode::CannotInfer,
                format!("cannot infer the type of the unannotated lambda binding `{x}`"),
            )),
            Term::Pair(a, b) => {
                let ta = self.infer(ctx, a)?;
                let tb = self.infer(ctx, b)?;
                Ok(sigma("_", ta, tb))
            }
            Term::PLam(i, body) => {
                let (j, body) = open_interval(ctx, i, body);
                let a = self.infer(&ctx.push_interval(j.clone()), &body)?;
                if a.mentions(&j) {
                    return Err(err(
                        ctx,
                        ErrorCode::CannotInfer,
                        "cannot infer a path type whose underlying type varies",
                    ));
                }
                Ok(path(
                    a,
                    subst_interval(&body, &j, &Interval::Zero),
                    subst_interval(&body, &j, &Interval::One),
                ))
            }
            Term::Comp {
                name,
                ty,
                system,
                base,
            } => self.infer_comp(ctx, name, ty, system, base),
            Term::Sys(_) => Err(err(ctx, ErrorCode::CannotInfer, "a system can only be checked against a type")),
            Term::Next(xi, body) => {
                let (inner, xi, ren) = self.check_dsubst(ctx, xi)?;
                let b = self.infer(&inner, &ren.apply(body))?;
                Ok(later(xi, b))
            }
            Term::DFix {
                dir,
                name,
                ty,
                body,
            } => {
                self.check_interval(ctx, dir)?;
                self.check_type(ctx, ty)?;
                let (y, body) = open(ctx, name, body);
                let inner = ctx.push_var(y, Some(later(DSubst::empty(), ty.clone())));
                self.check(&inner, &body, ty)?;
                Ok(later(DSubst::empty(), ty.clone()))
            }
        }
    }

    fn infer_comp(&mut self, ctx: &Context, i: &Name, ty: &Tm, system: &System, base: &Tm) -> Result<Tm> {
        for (f, _) in system.branches() {
            self.check_face(ctx, f)?;
        }
        let j = ctx.fresh_for(i);
        let jv = Interval::Name(j.clone());
        let ren = |t: &Tm| if j == *i { t.clone() } else { subst_interval(t, i, &jv) };
        let ty = ren(ty);
        let branches: Vec<(Face, Tm)> = system.branches().iter().map(|(f, u)| (f.clone(), ren(u))).collect();

        let line = ctx.push_interval(j.clone());
        self.check_type(&line, &ty)?;
        for (f, u) in &branches {
            for c in line.restrict(f) {
                self.check(&c, u, &ty)?;
            }
        }
        self.compatible(&line, &branches, &ty)?;

        let ty0 = subst_interval(&ty, &j, &Interval::Zero);
        self.check(ctx, base, &ty0)?;
        for (f, u) in &branches {
            let u0 = subst_interval(u, &j, &Interval::Zero);
            for c in ctx.restrict(f) {
                if !conv::conv(&c, base, &u0, Some(&ty0)) {
                    return Err(mismatch(
                        &c,
                        ErrorCode::ConversionFailure,
                        "the base of the composition does not agree with the system at 0",
                        &u0,
                        base,
                    ));
                }
            }
        }
        Ok(subst_interval(&ty, &j, &Interval::One))
    }

    fn compatible(&mut self, ctx: &Context, branches: &[(Face, Tm)], ty: &Tm) -> Result<()> {
        for (k, (f, u)) in branches.iter().enumerate() {
            for (g, v) in &branches[k + 1..] {
                for c in ctx.restrict(&Face::and(f.clone(), g.clone())) {
                    if !conv::conv(&c, u, v, Some(ty)) {
                        return Err(mismatch(
                            &c,
                            ErrorCode::SystemIncompatible,
                            &format!(
                                "system branches on {} and {} disagree where they overlap",
                                pretty::face(f),
                                pretty::face(g)
                            ),
                            u,
                            v,
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Check the bindings of a delayed substitution, returning the extended
    /// context, the substitution with binders renamed apart from the
    /// context, and the renaming to apply to the body.
    pub fn check_dsubst(&mut self, ctx: &Context, xi: &DSubst) -> Result<(Context, DSubst, Subst)> {
        let mut inner = ctx.clone();
        let mut out: Vec<(Name, Tm)> = Vec::new();
        let mut ren = Subst::new();
        for (x, t) in xi.bindings() {
            let ty = self.infer(ctx, t)?;
            let w = whnf(ctx, &ty);
            let Term::Later(txi, a) = &*w else {
                return Err(err(
                    ctx,
                    ErrorCode::NotALater,
                    format!(
                        "the delayed substitution binds `{x}` to `{}` of type {}, which is not a later type",
                        pretty::term(t),
                        pretty::term(&w)
                    ),
                ));
            };
            let mut sub = Subst::new();
            for (z, w) in txi.bindings() {
                match out.iter().find(|(_, s)| conv::conv(ctx, w, s, None)) {
                    Some((y, _)) => sub = sub.with_term(z, &var(y.clone())),
                    None => {
                        return Err(err(
                            ctx,
                            ErrorCode::DelayedSubstMismatch,
                            format!(
                                "the type of `{}` depends on the delayed binding `{z} <- {}`, which is not among the preceding bindings",
                                pretty::term(t),
                                pretty::term(w)
                            ),
                        ))
                    }
                }
            }
            let a = sub.apply(a);
            let y = inner.fresh_for(x);
            if y != *x {
                ren = ren.with_term(x, &var(y.clone()));
            }
            inner = inner.push_var(y.clone(), Some(a));
            out.push((y, t.clone()));
        }
        Ok((inner, DSubst(out), ren))
    }

    /// `Γ ⊢ t : A`.
    pub fn check(&mut self, ctx: &Context, t: &Tm, ty: &Tm) -> Result<()> {
        self.check_inner(ctx, t, ty)?;
        self.note(JudgementKind::Check, ctx, vec![t.clone(), ty.clone()]);
        Ok(())
    }

    fn check_inner(&mut self, ctx: &Context, t: &Tm, ty: &Tm) -> Result<()> {
        if ctx.restriction().is_absurd() {
            return Ok(());
        }
        let tyw = whnf(ctx, ty);
        match (&**t, &*tyw) {
            (Term::Lam(x, ann, body), Term::Pi(y, dom, cod)) => {
                if let Some(a) = ann {
                    self.check_type(ctx, a)?;
                    if !conv::conv(ctx, a, dom, None) {
                        return Err(mismatch(
                            ctx,
                            ErrorCode::ConversionFailure,
                            "the annotated domain differs from the expected one",
                            dom,
                            a,
                        ));
                    }
                }
                let (z, body) = open(ctx, x, body);
                let cod = subst_term(cod, y, &var(z.clone()));
                self.check(&ctx.push_var(z, Some(dom.clone())), &body, &cod)
            }
            (Term::Lam(..), Term::Univ | Term::Nat | Term::Sigma(..) | Term::Path(..) | Term::Later(..)) => {
                Err(err(
                    ctx,
                    ErrorCode::ConversionFailure,
                    format!("a function was given where a value of type {} was expected", pretty::term(&tyw)),
                ))
            }
            (Term::Pair(a, b), Term::Sigma(x, ta, tb)) => {
                self.check(ctx, a, ta)?;
                self.check(ctx, b, &subst_term(tb, x, a))
            }
            (Term::PLam(i, body), Term::Path(a, l, r)) => {
                let (j, body) = open_interval(ctx, i, body);
                self.check(&ctx.push_interval(j.clone()), &body, a)?;
                for (e, expected) in [(Interval::Zero, l), (Interval::One, r)] {
                    let got = subst_interval(&body, &j, &e);
                    if !conv::conv(ctx, &got, expected, Some(a)) {
                        let which = if e == Interval::Zero { 0 } else { 1 };
                        return Err(mismatch(
                            ctx,
                            ErrorCode::EndpointMismatch,
                            &format!("the path abstraction has the wrong endpoint at {which}"),
                            expected,
                            &got,
                        ));
                    }
                }
                Ok(())
            }
            (Term::Sys(system), _) => self.check_system(ctx, system, ty),
            (Term::Next(xi, body), Term::Later(txi, ta)) => {
                let (inner, xi, ren) = self.check_dsubst(ctx, xi)?;
                let mut sub = Subst::new();
                let mut aligned = true;
                for (y, u) in txi.bindings() {
                    match xi.bindings().iter().find(|(_, s)| conv::conv(ctx, s, u, None)) {
                        Some((x, _)) => sub = sub.with_term(y, &var(x.clone())),
                        None => aligned = false,
                    }
                }
                if aligned {
                    self.check(&inner, &ren.apply(body), &sub.apply(ta))
                } else {
                    self.by_inference(ctx, t, ty)
                }
            }
            _ => self.by_inference(ctx, t, ty),
        }
    }

    fn by_inference(&mut self, ctx: &Context, t: &Tm, ty: &Tm) -> Result<()> {
        let got = self.infer(ctx, t)?;
        if conv::conv(ctx, &got, ty, None) {
            self.note(JudgementKind::ConvertType, ctx, vec![got, ty.clone()]);
            Ok(())
        } else {
            Err(mismatch(
                ctx,
                ErrorCode::ConversionFailure,
                &format!("`{}` does not have the expected type", pretty::term(t)),
                ty,
                &got,
            ))
        }
    }

    /// `Γ ⊢ A type`.
    pub fn check_type(&mut self, ctx: &Context, ty: &Tm) -> Result<()> {
        match &**ty {
            Term::Univ | Term::Nat => Ok(()),
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
                self.check_type(ctx, a)?;
                let (y, b) = open(ctx, x, b);
                self.check_type(&ctx.push_var(y, Some(a.clone())), &b)
            }
            Term::Path(a, l, r) => {
                self.check_type(ctx, a)?;
                self.check(ctx, l, a)?;
                self.check(ctx, r, a)
            }
            Term::Later(xi, a) => {
                let (inner, _, ren) = self.check_dsubst(ctx, xi)?;
                self.check_type(&inner, &ren.apply(a))
            }
            Term::Sys(system) => self.check_system(ctx, system, &univ()),
            _ => {
                let got = self.infer(ctx, ty)?;
                let w = whnf(ctx, &got);
                if matches!(&*w, Term::Univ) {
                    Ok(())
                } else {
                    Err(err(
                        ctx,
                        ErrorCode::UniverseExpected,
                        format!("`{}` is used as a type but has type {}", pretty::term(ty), pretty::term(&w)),
                    ))
                }
            }
        }
    }

    /// `Γ ⊢ [φ1 t1, ..., φn tn] : A`: coverage and pairwise agreement.
    pub fn check_system(&mut self, ctx: &Context, system: &System, ty: &Tm) -> Result<()> {
        for (f, _) in system.branches() {
            self.check_face(ctx, f)?;
        }
        if !ctx.restriction().entails(&system.extent()) {
            return Err(err(
                ctx,
                ErrorCode::FaceNotCovered,
                format!(
                    "the faces of the system cover only {}",
                    pretty::face(&crate::cofib::face_dnf(&system.extent()).to_face())
                ),
            ));
        }
        for (f, u) in system.branches() {
            for c in ctx.restrict(f) {
                self.check(&c, u, ty)?;
            }
        }
        self.compatible(ctx, system.branches(), ty)
    }
}

pub fn infer(ctx: &Context, t: &Tm) -> Result<Tm> {
    Checker::new().infer(ctx, t)
}

pub fn check(ctx: &Context, t: &Tm, ty: &Tm) -> Result<()> {
    Checker::new().check(ctx, t, ty)
}

pub fn check_type(ctx: &Context, ty: &Tm) -> Result<()> {
    Checker::new().check_type(ctx, ty)
}

pub fn check_system(ctx: &Context, system: &System, ty: &Tm) -> Result<()> {
    Checker::new().check_system(ctx, system, ty)
}
