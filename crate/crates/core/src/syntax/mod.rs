//! Abstract syntax of terms, interval elements and faces.
//!
//! Terms are represented with explicit names. Binders are renamed on demand
//! by the substitution machinery in [`subst`], and terms are compared up to
//! α-equivalence with [`alpha_eq`].

use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

mod alpha;
mod context;
mod subst;

pub use alpha::alpha_eq;
pub use context::{Context, Entry, Global, Globals};
pub use subst::{subst_interval, subst_term, Subst};

/// A variable or interval name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

static FRESH: AtomicU64 = AtomicU64::new(0);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name without any `'N` suffix added by [`Name::fresh`].
    pub fn stem(&self) -> &str {
        let s = self.as_str();
        match s.rfind('\'') {
            Some(pos) if pos > 0 && pos + 1 < s.len() && s[pos + 1..].chars().all(|c| c.is_ascii_digit()) => &s[..pos],
            _ => s,
        }
    }

    /// A name that has never been handed out before in this process.
    pub fn fresh(&self) -> Name {
        let n = FRESH.fetch_add(1, Ordering::Relaxed);
        Name::new(&format!("{}'{}", self.stem(), n))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

/// An endpoint of the interval.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Endpoint {
    Zero,
    One,
}

impl Endpoint {
    pub fn flip(self) -> Endpoint {
        match self {
            Endpoint::Zero => Endpoint::One,
            Endpoint::One => Endpoint::Zero,
        }
    }

    pub fn to_interval(self) -> Interval {
        match self {
            Endpoint::Zero => Interval::Zero,
            Endpoint::One => Interval::One,
        }
    }
}

/// An element of the free De Morgan algebra on names.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Interval {
    Zero,
    One,
    Name(Name),
    Neg(Box<Interval>),
    Meet(Box<Interval>, Box<Interval>),
    Join(Box<Interval>, Box<Interval>),
}

impl Interval {
    pub fn name(n: impl Into<Name>) -> Interval {
        Interval::Name(n.into())
    }

    pub fn neg(r: Interval) -> Interval {
        Interval::Neg(Box::new(r))
    }

    pub fn meet(r: Interval, s: Interval) -> Interval {
        Interval::Meet(Box::new(r), Box::new(s))
    }

    pub fn join(r: Interval, s: Interval) -> Interval {
        Interval::Join(Box::new(r), Box::new(s))
    }

    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Interval::Zero | Interval::One => {}
            Interval::Name(n) => {
                out.insert(n.clone());
            }
            Interval::Neg(r) => r.collect_names(out),
            Interval::Meet(r, s) | Interval::Join(r, s) => {
                r.collect_names(out);
                s.collect_names(out);
            }
        }
    }

    pub fn mentions(&self, x: &Name) -> bool {
        match self {
            Interval::Zero | Interval::One => false,
            Interval::Name(n) => n == x,
            Interval::Neg(r) => r.mentions(x),
            Interval::Meet(r, s) | Interval::Join(r, s) => r.mentions(x) || s.mentions(x),
        }
    }

    /// Replace names using `f`; names for which `f` returns `None` are kept.
    pub fn subst_with(&self, f: &dyn Fn(&Name) -> Option<Interval>) -> Interval {
        match self {
            Interval::Zero => Interval::Zero,
            Interval::One => Interval::One,
            Interval::Name(n) => f(n).unwrap_or_else(|| self.clone()),
            Interval::Neg(r) => Interval::neg(r.subst_with(f)),
            Interval::Meet(r, s) => Interval::meet(r.subst_with(f), s.subst_with(f)),
            Interval::Join(r, s) => Interval::join(r.subst_with(f), s.subst_with(f)),
        }
    }

    /// Fold away constants: `¬0 = 1`, `0 ∧ r = 0`, `1 ∨ r = 1`, `¬¬r = r` and so on.
    /// The result is equal to `self` in every De Morgan algebra.
    pub fn simplify(&self) -> Interval {
        match self {
            Interval::Zero | Interval::One | Interval::Name(_) => self.clone(),
            Interval::Neg(r) => match r.simplify() {
                Interval::Zero => Interval::One,
                Interval::One => Interval::Zero,
                Interval::Neg(inner) => *inner,
                other => Interval::neg(other),
            },
            Interval::Meet(r, s) => match (r.simplify(), s.simplify()) {
                (Interval::Zero, _) | (_, Interval::Zero) => Interval::Zero,
                (Interval::One, x) | (x, Interval::One) => x,
                (x, y) => Interval::meet(x, y),
            },
            Interval::Join(r, s) => match (r.simplify(), s.simplify()) {
                (Interval::One, _) | (_, Interval::One) => Interval::One,
                (Interval::Zero, x) | (x, Interval::Zero) => x,
                (x, y) => Interval::join(x, y),
            },
        }
    }
}

/// An element of the face lattice.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Face {
    Bot,
    Top,
    Eq(Name, Endpoint),
    And(Box<Face>, Box<Face>),
    Or(Box<Face>, Box<Face>),
}

impl Face {
    pub fn eq0(n: impl Into<Name>) -> Face {
        Face::Eq(n.into(), Endpoint::Zero)
    }

    pub fn eq1(n: impl Into<Name>) -> Face {
        Face::Eq(n.into(), Endpoint::One)
    }

    pub fn and(a: Face, b: Face) -> Face {
        Face::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Face, b: Face) -> Face {
        Face::Or(Box::new(a), Box::new(b))
    }

    pub fn join_all(faces: impl IntoIterator<Item = Face>) -> Face {
        faces.into_iter().fold(Face::Bot, |acc, f| match acc {
            Face::Bot => f,
            acc => Face::or(acc, f),
        })
    }

    pub fn names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    pub(crate) fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Face::Bot | Face::Top => {}
            Face::Eq(n, _) => {
                out.insert(n.clone());
            }
            Face::And(a, b) | Face::Or(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    pub fn mentions(&self, x: &Name) -> bool {
        match self {
            Face::Bot | Face::Top => false,
            Face::Eq(n, _) => n == x,
            Face::And(a, b) | Face::Or(a, b) => a.mentions(x) || b.mentions(x),
        }
    }

    /// Substitute interval elements for names. An atom `(i = 1)` becomes the
    /// face image of the substituted element, `(i = 0)` the image of its negation.
    pub fn subst_with(&self, f: &dyn Fn(&Name) -> Option<Interval>) -> Face {
        match self {
            Face::Bot | Face::Top => self.clone(),
            Face::Eq(n, e) => match f(n) {
                None => self.clone(),
                Some(r) => match e {
                    Endpoint::One => crate::cofib::face_of_interval(&r),
                    Endpoint::Zero => crate::cofib::face_of_interval(&Interval::neg(r)),
                },
            },
            Face::And(a, b) => Face::and(a.subst_with(f), b.subst_with(f)),
            Face::Or(a, b) => Face::or(a.subst_with(f), b.subst_with(f)),
        }
    }

    /// Fold away `0F` and `1F` where they are absorbed.
    pub fn simplify(&self) -> Face {
        match self {
            Face::Bot | Face::Top | Face::Eq(..) => self.clone(),
            Face::And(a, b) => match (a.simplify(), b.simplify()) {
                (Face::Bot, _) | (_, Face::Bot) => Face::Bot,
                (Face::Top, x) | (x, Face::Top) => x,
                (x, y) => Face::and(x, y),
            },
            Face::Or(a, b) => match (a.simplify(), b.simplify()) {
                (Face::Top, _) | (_, Face::Top) => Face::Top,
                (Face::Bot, x) | (x, Face::Bot) => x,
                (x, y) => Face::or(x, y),
            },
        }
    }
}

pub type Tm = Arc<Term>;

/// A list of faces paired with the terms defined on them.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct System(pub Vec<(Face, Tm)>);

impl System {
    /// Build a system with its branches sorted by the canonical order on faces.
    pub fn new(mut branches: Vec<(Face, Tm)>) -> System {
        branches.sort_by_cached_key(|(f, _)| crate::cofib::face_dnf(f));
        System(branches)
    }

    pub fn empty() -> System {
        System(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn branches(&self) -> &[(Face, Tm)] {
        &self.0
    }

    /// The join of all faces of the system.
    pub fn extent(&self) -> Face {
        Face::join_all(self.0.iter().map(|(f, _)| f.clone()))
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Tm) -> Tm) -> System {
        System(self.0.iter().map(|(face, t)| (face.clone(), f(t))).collect())
    }
}

/// A delayed substitution `[x1 <- t1, ..., xn <- tn]`.
///
/// The terms live in the outer context; the names scope over the body of the
/// `▷` or `next` the substitution is attached to.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct DSubst(pub Vec<(Name, Tm)>);

impl DSubst {
    pub fn empty() -> DSubst {
        DSubst(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn bindings(&self) -> &[(Name, Tm)] {
        &self.0
    }

    pub fn binds(&self, x: &Name) -> bool {
        self.0.iter().any(|(y, _)| y == x)
    }
}

/// Kernel terms. Types are terms (the universe is Russell-style).
#[derive(Clone, PartialEq, Debug)]
pub enum Term {
    Var(Name),
    /// `λx. t`, with an optional domain annotation.
    Lam(Name, Option<Tm>, Tm),
    App(Tm, Tm),
    Pi(Name, Tm, Tm),
    Pair(Tm, Tm),
    Fst(Tm),
    Snd(Tm),
    Sigma(Name, Tm, Tm),
    Zero,
    Suc(Tm),
    /// `natrec P z s n` with motive `P : N → U`, `z : P 0` and
    /// `s : (m : N) → P m → P (suc m)`.
    NatRec {
        motive: Tm,
        zero: Tm,
        succ: Tm,
        target: Tm,
    },
    Nat,
    Univ,
    Path(Tm, Tm, Tm),
    PLam(Name, Tm),
    PApp(Tm, Interval),
    /// `comp^i A [φ1 ↦ u1, ...] a0`; `name` is bound in `ty` and in the system terms.
    Comp {
        name: Name,
        ty: Tm,
        system: System,
        base: Tm,
    },
    Sys(System),
    Later(DSubst, Tm),
    Next(DSubst, Tm),
    /// `dfix^r x : A. t`, of type `▷A`.
    DFix {
        dir: Interval,
        name: Name,
        ty: Tm,
        body: Tm,
    },
}

pub fn var(x: impl Into<Name>) -> Tm {
    Arc::new(Term::Var(x.into()))
}

pub fn lam(x: impl Into<Name>, body: Tm) -> Tm {
    Arc::new(Term::Lam(x.into(), None, body))
}

pub fn app(f: Tm, a: Tm) -> Tm {
    Arc::new(Term::App(f, a))
}

pub fn pi(x: impl Into<Name>, a: Tm, b: Tm) -> Tm {
    Arc::new(Term::Pi(x.into(), a, b))
}

pub fn arrow(a: Tm, b: Tm) -> Tm {
    pi("_", a, b)
}

pub fn sigma(x: impl Into<Name>, a: Tm, b: Tm) -> Tm {
    Arc::new(Term::Sigma(x.into(), a, b))
}

pub fn pair(a: Tm, b: Tm) -> Tm {
    Arc::new(Term::Pair(a, b))
}

pub fn fst(p: Tm) -> Tm {
    Arc::new(Term::Fst(p))
}

pub fn snd(p: Tm) -> Tm {
    Arc::new(Term::Snd(p))
}

pub fn nat() -> Tm {
    Arc::new(Term::Nat)
}

pub fn univ() -> Tm {
    Arc::new(Term::Univ)
}

pub fn zero() -> Tm {
    Arc::new(Term::Zero)
}

pub fn suc(t: Tm) -> Tm {
    Arc::new(Term::Suc(t))
}

pub fn numeral(n: u64) -> Tm {
    (0..n).fold(zero(), |t, _| suc(t))
}

pub fn path(a: Tm, t: Tm, u: Tm) -> Tm {
    Arc::new(Term::Path(a, t, u))
}

pub fn plam(i: impl Into<Name>, t: Tm) -> Tm {
    Arc::new(Term::PLam(i.into(), t))
}

pub fn papp(p: Tm, r: Interval) -> Tm {
    Arc::new(Term::PApp(p, r))
}

pub fn comp(i: impl Into<Name>, ty: Tm, system: System, base: Tm) -> Tm {
    Arc::new(Term::Comp {
        name: i.into(),
        ty,
        system,
        base,
    })
}

pub fn later(xi: DSubst, a: Tm) -> Tm {
    Arc::new(Term::Later(xi, a))
}

pub fn next(xi: DSubst, t: Tm) -> Tm {
    Arc::new(Term::Next(xi, t))
}

pub fn dfix(dir: Interval, x: impl Into<Name>, ty: Tm, body: Tm) -> Tm {
    Arc::new(Term::DFix {
        dir,
        name: x.into(),
        ty,
        body,
    })
}

/// `fix^r x : A. t`, i.e. `t[dfix^r x : A. t / x]`.
pub fn fix(dir: Interval, x: impl Into<Name>, ty: Tm, body: Tm) -> Tm {
    let x = x.into();
    let d = dfix(dir, x.clone(), ty, body.clone());
    subst_term(&body, &x, &d)
}

impl Term {
    /// All free term variables and interval names.
    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut |n| {
            out.insert(n.clone());
        });
        out
    }

    /// Free names in order of first occurrence (left to right, pre-order).
    pub fn free_names_ordered(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        self.collect_free(&mut Vec::new(), &mut |n| {
            if !out.contains(n) {
                out.push(n.clone());
            }
        });
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut dyn FnMut(&Name)) {
        fn note(n: &Name, bound: &[Name], out: &mut dyn FnMut(&Name)) {
            if !bound.contains(n) {
                out(n);
            }
        }
        fn interval(r: &Interval, bound: &[Name], out: &mut dyn FnMut(&Name)) {
            for n in r.names() {
                note(&n, bound, out);
            }
        }
        fn face(f: &Face, bound: &[Name], out: &mut dyn FnMut(&Name)) {
            for n in f.names() {
                note(&n, bound, out);
            }
        }
        match self {
            Term::Var(x) => note(x, bound, out),
            Term::Lam(x, ann, body) => {
                if let Some(a) = ann {
                    a.collect_free(bound, out);
                }
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) | Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Fst(a) | Term::Snd(a) | Term::Suc(a) => a.collect_free(bound, out),
            Term::Zero | Term::Nat | Term::Univ => {}
            Term::NatRec {
                motive,
                zero,
                succ,
                target,
            } => {
                for t in [motive, zero, succ, target] {
                    t.collect_free(bound, out);
                }
            }
            Term::Path(a, t, u) => {
                for x in [a, t, u] {
                    x.collect_free(bound, out);
                }
            }
            Term::PLam(i, t) => {
                bound.push(i.clone());
                t.collect_free(bound, out);
                bound.pop();
            }
            Term::PApp(t, r) => {
                t.collect_free(bound, out);
                interval(r, bound, out);
            }
            Term::Comp {
                name,
                ty,
                system,
                base,
            } => {
                base.collect_free(bound, out);
                for (f, _) in system.branches() {
                    face(f, bound, out);
                }
                bound.push(name.clone());
                ty.collect_free(bound, out);
                for (_, u) in system.branches() {
                    u.collect_free(bound, out);
                }
                bound.pop();
            }
            Term::Sys(system) => {
                for (f, u) in system.branches() {
                    face(f, bound, out);
                    u.collect_free(bound, out);
                }
            }
            Term::Later(xi, body) | Term::Next(xi, body) => {
                for (_, t) in xi.bindings() {
                    t.collect_free(bound, out);
                }
                let depth = bound.len();
                bound.extend(xi.bindings().iter().map(|(x, _)| x.clone()));
                body.collect_free(bound, out);
                bound.truncate(depth);
            }
            Term::DFix {
                dir,
                name,
                ty,
                body,
            } => {
                interval(dir, bound, out);
                ty.collect_free(bound, out);
                bound.push(name.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Whether `x` occurs free.
    pub fn mentions(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Lam(y, ann, body) => {
                ann.as_ref().is_some_and(|a| a.mentions(x)) || (y != x && body.mentions(x))
            }
            Term::Pi(y, a, b) | Term::Sigma(y, a, b) => a.mentions(x) || (y != x && b.mentions(x)),
            Term::App(a, b) | Term::Pair(a, b) => a.mentions(x) || b.mentions(x),
            Term::Fst(a) | Term::Snd(a) | Term::Suc(a) => a.mentions(x),
            Term::Zero | Term::Nat | Term::Univ => false,
            Term::NatRec {
                motive,
                zero,
                succ,
                target,
            } => [motive, zero, succ, target].iter().any(|t| t.mentions(x)),
            Term::Path(a, t, u) => a.mentions(x) || t.mentions(x) || u.mentions(x),
            Term::PLam(i, t) => i != x && t.mentions(x),
            Term::PApp(t, r) => t.mentions(x) || r.mentions(x),
            Term::Comp {
                name,
                ty,
                system,
                base,
            } => {
                base.mentions(x)
                    || system.branches().iter().any(|(f, _)| f.mentions(x))
                    || (name != x
                        && (ty.mentions(x) || system.branches().iter().any(|(_, u)| u.mentions(x))))
            }
            Term::Sys(system) => system
                .branches()
                .iter()
                .any(|(f, u)| f.mentions(x) || u.mentions(x)),
            Term::Later(xi, body) | Term::Next(xi, body) => {
                xi.bindings().iter().any(|(_, t)| t.mentions(x))
                    || (!xi.binds(x) && body.mentions(x))
            }
            Term::DFix {
                dir,
                name,
                ty,
                body,
            } => dir.mentions(x) || ty.mentions(x) || (name != x && body.mentions(x)),
        }
    }

    /// Closed numerals `suc (... zero)` as a number.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0;
        let mut t = self;
        loop {
            match t {
                Term::Zero => return Some(n),
                Term::Suc(inner) => {
                    n += 1;
                    t = inner;
                }
                _ => return None,
            }
        }
    }
}

/// The set of free names of a term (term variables and interval names).
pub fn free_names(t: &Term) -> BTreeSet<Name> {
    t.free_names()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_names_of_binders() {
        // ⟨i⟩ p i
        let t = plam("i", papp(var("p"), Interval::name("i")));
        assert_eq!(t.free_names(), BTreeSet::from([Name::new("p")]));

        // ▷[x <- t] x
        let t = later(DSubst(vec![(Name::new("x"), var("t"))]), var("x"));
        assert_eq!(t.free_names(), BTreeSet::from([Name::new("t")]));

        // comp^i A [(j=0) ↦ u] a0 with i free in A and u
        let a = app(var("A"), papp(var("q"), Interval::name("i")));
        let u = papp(var("u"), Interval::name("i"));
        let t = comp("i", a, System::new(vec![(Face::eq0("j"), u)]), var("a0"));
        let expected: BTreeSet<Name> = ["A", "q", "u", "j", "a0"].into_iter().map(Name::new).collect();
        assert_eq!(t.free_names(), expected);
    }

    #[test]
    fn fresh_names_keep_stem() {
        let x = Name::new("x");
        let y = x.fresh();
        assert_ne!(x, y);
        assert_eq!(y.stem(), "x");
        assert_eq!(y.fresh().stem(), "x");
        assert_eq!(Name::new("x'").stem(), "x'");
    }

    #[test]
    fn interval_simplify_constants() {
        let r = Interval::join(Interval::neg(Interval::One), Interval::meet(Interval::name("i"), Interval::One));
        assert_eq!(r.simplify(), Interval::name("i"));
        assert_eq!(Interval::neg(Interval::neg(Interval::name("i"))).simplify(), Interval::name("i"));
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral(3).as_numeral(), Some(3));
        assert_eq!(var("n").as_numeral(), None);
    }
}
