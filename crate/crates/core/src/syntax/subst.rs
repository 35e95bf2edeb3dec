use std::collections::BTreeSet;
use std::sync::Arc;

use super::{DSubst, Face, Interval, Name, System, Term, Tm};

#[derive(Clone, Debug)]
enum Repl {
    Term(Tm),
    Interval(Interval),
}

/// A simultaneous, capture-avoiding substitution of terms for variables and
/// interval elements for names.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    map: Vec<(Name, Repl)>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn term(x: &Name, t: &Tm) -> Subst {
        Subst::new().with_term(x, t)
    }

    pub fn interval(i: &Name, r: &Interval) -> Subst {
        Subst::new().with_interval(i, r)
    }

    pub fn with_term(mut self, x: &Name, t: &Tm) -> Subst {
        self.map.push((x.clone(), Repl::Term(t.clone())));
        self
    }

    pub fn with_interval(mut self, i: &Name, r: &Interval) -> Subst {
        self.map.push((i.clone(), Repl::Interval(r.clone())));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, t: &Tm) -> Tm {
        if self.map.is_empty() || !self.map.iter().any(|(x, _)| t.mentions(x)) {
            return t.clone();
        }
        let mut avoid = BTreeSet::new();
        for (_, r) in &self.map {
            match r {
                Repl::Term(t) => avoid.extend(t.free_names()),
                Repl::Interval(r) => r.collect_names(&mut avoid),
            }
        }
        let mut st = State {
            env: self.map.iter().map(|(x, r)| (x.clone(), Some(r.clone()))).collect(),
            avoid,
        };
        st.term(t)
    }

    pub fn apply_interval(&self, r: &Interval) -> Interval {
        let st = State {
            env: self.map.iter().map(|(x, r)| (x.clone(), Some(r.clone()))).collect(),
            avoid: BTreeSet::new(),
        };
        st.interval(r)
    }

    pub fn apply_face(&self, f: &Face) -> Face {
        let st = State {
            env: self.map.iter().map(|(x, r)| (x.clone(), Some(r.clone()))).collect(),
            avoid: BTreeSet::new(),
        };
        st.face(f)
    }
}

/// `t[s/x]`.
pub fn subst_term(t: &Tm, x: &Name, s: &Tm) -> Tm {
    Subst::term(x, s).apply(t)
}

/// `t[r/i]`.
pub fn subst_interval(t: &Tm, i: &Name, r: &Interval) -> Tm {
    Subst::interval(i, r).apply(t)
}

#[derive(Clone, Copy)]
enum Kind {
    Term,
    Interval,
}

struct State {
    // `None` marks a binder that shadows the name.
    env: Vec<(Name, Option<Repl>)>,
    avoid: BTreeSet<Name>,
}

impl State {
    fn lookup(&self, x: &Name) -> Option<&Repl> {
        self.env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .and_then(|(_, r)| r.as_ref())
    }

    fn enter(&mut self, x: &Name, kind: Kind) -> Name {
        if self.avoid.contains(x) {
            let y = x.fresh();
            let repl = match kind {
                Kind::Term => Repl::Term(Arc::new(Term::Var(y.clone()))),
                Kind::Interval => Repl::Interval(Interval::Name(y.clone())),
            };
            self.env.push((x.clone(), Some(repl)));
            y
        } else {
            self.env.push((x.clone(), None));
            x.clone()
        }
    }

    fn leave(&mut self, n: usize) {
        for _ in 0..n {
            self.env.pop();
        }
    }

    fn interval(&self, r: &Interval) -> Interval {
        let out = r.subst_with(&|n| match self.lookup(n) {
            Some(Repl::Interval(s)) => Some(s.clone()),
            _ => None,
        });
        if out != *r {
            out.simplify()
        } else {
            out
        }
    }

    fn face(&self, f: &Face) -> Face {
        let out = f.subst_with(&|n| match self.lookup(n) {
            Some(Repl::Interval(s)) => Some(s.clone()),
            _ => None,
        });
        if out != *f {
            out.simplify()
        } else {
            out
        }
    }

    fn term(&mut self, t: &Tm) -> Tm {
        let new = match &**t {
            Term::Var(x) => {
                return match self.lookup(x) {
                    Some(Repl::Term(s)) => s.clone(),
                    _ => t.clone(),
                }
            }
            Term::Zero | Term::Nat | Term::Univ => return t.clone(),
            Term::Lam(x, ann, body) => {
                let ann = ann.as_ref().map(|a| self.term(a));
                let y = self.enter(x, Kind::Term);
                let body = self.term(body);
                self.leave(1);
                Term::Lam(y, ann, body)
            }
            Term::Pi(x, a, b) => {
                let a = self.term(a);
                let y = self.enter(x, Kind::Term);
                let b = self.term(b);
                self.leave(1);
                Term::Pi(y, a, b)
            }
            Term::Sigma(x, a, b) => {
                let a = self.term(a);
                let y = self.enter(x, Kind::Term);
                let b = self.term(b);
                self.leave(1);
                Term::Sigma(y, a, b)
            }
            Term::App(a, b) => Term::App(self.term(a), self.term(b)),
            Term::Pair(a, b) => Term::Pair(self.term(a), self.term(b)),
            Term::Fst(a) => Term::Fst(self.term(a)),
            Term::Snd(a) => Term::Snd(self.term(a)),
            Term::Suc(a) => Term::Suc(self.term(a)),
            Term::NatRec {
                motive,
                zero,
                succ,
                target,
            } => Term::NatRec {
                motive: self.term(motive),
                zero: self.term(zero),
                succ: self.term(succ),
                target: self.term(target),
            },
            Term::Path(a, x, y) => Term::Path(self.term(a), self.term(x), self.term(y)),
            Term::PLam(i, body) => {
                let j = self.enter(i, Kind::Interval);
                let body = self.term(body);
                self.leave(1);
                Term::PLam(j, body)
            }
            Term::PApp(p, r) => Term::PApp(self.term(p), self.interval(r)),
            Term::Comp {
                name,
                ty,
                system,
                base,
            } => {
                let base = self.term(base);
                let faces: Vec<Face> = system.branches().iter().map(|(f, _)| self.face(f)).collect();
                let j = self.enter(name, Kind::Interval);
                let ty = self.term(ty);
                let terms: Vec<Tm> = system.branches().iter().map(|(_, u)| self.term(u)).collect();
                self.leave(1);
                Term::Comp {
                    name: j,
                    ty,
                    system: System::new(faces.into_iter().zip(terms).collect()),
                    base,
                }
            }
            Term::Sys(system) => {
                let branches = system
                    .branches()
                    .iter()
                    .map(|(f, u)| (self.face(f), self.term(u)))
                    .collect();
                Term::Sys(System::new(branches))
            }
            Term::Later(xi, body) => {
                let (xi, body) = self.delayed(xi, body);
                Term::Later(xi, body)
            }
            Term::Next(xi, body) => {
                let (xi, body) = self.delayed(xi, body);
                Term::Next(xi, body)
            }
            Term::DFix {
                dir,
                name,
                ty,
                body,
            } => {
                let dir = self.interval(dir);
                let ty = self.term(ty);
                let y = self.enter(name, Kind::Term);
                let body = self.term(body);
                self.leave(1);
                Term::DFix {
                    dir,
                    name: y,
                    ty,
                    body,
                }
            }
        };
        Arc::new(new)
    }

    fn delayed(&mut self, xi: &DSubst, body: &Tm) -> (DSubst, Tm) {
        let terms: Vec<Tm> = xi.bindings().iter().map(|(_, t)| self.term(t)).collect();
        let names: Vec<Name> = xi
            .bindings()
            .iter()
            .map(|(x, _)| self.enter(x, Kind::Term))
            .collect();
        let body = self.term(body);
        self.leave(names.len());
        (DSubst(names.into_iter().zip(terms).collect()), body)
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn no_capture() {
        // (λy. x)[0/x] = λy. 0
        let t = lam("y", var("x"));
        assert_eq!(subst_term(&t, &"x".into(), &zero()), lam("y", zero()));
    }

    #[test]
    fn identity_and_shadowing() {
        let s = app(var("f"), var("z"));
        assert_eq!(subst_term(&var("x"), &"x".into(), &s), s);
        let t = lam("x", var("x"));
        assert_eq!(subst_term(&t, &"x".into(), &s), t);
    }

    #[test]
    fn renames_binder_that_would_capture() {
        // (λy. x)[y/x] must not become λy. y
        let t = lam("y", var("x"));
        let out = subst_term(&t, &"x".into(), &var("y"));
        match &*out {
            Term::Lam(z, _, body) => {
                assert_ne!(z.as_str(), "y");
                assert_eq!(**body, Term::Var("y".into()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn interval_substitution() {
        // (⟨j⟩ p j)[0/i] is unchanged
        let t = plam("j", papp(var("p"), Interval::name("j")));
        assert_eq!(subst_interval(&t, &"i".into(), &Interval::Zero), t);
        // (p i)[1/i] = p 1
        let t = papp(var("p"), Interval::name("i"));
        assert_eq!(subst_interval(&t, &"i".into(), &Interval::One), papp(var("p"), Interval::One));
        // (dfix^i x.t)[1/i] = dfix^1 x.t
        let t = dfix(Interval::name("i"), "x", nat(), var("x"));
        assert_eq!(
            subst_interval(&t, &"i".into(), &Interval::One),
            dfix(Interval::One, "x", nat(), var("x"))
        );
    }

    #[test]
    fn faces_follow_interval_substitution() {
        // [(i=1) ↦ a][j∧k / i] has face (j=1)∧(k=1)
        let t = Arc::new(Term::Sys(System::new(vec![(Face::eq1("i"), var("a"))])));
        let r = Interval::meet(Interval::name("j"), Interval::name("k"));
        let out = subst_interval(&t, &"i".into(), &r);
        match &*out {
            Term::Sys(s) => assert_eq!(s.branches()[0].0, Face::and(Face::eq1("j"), Face::eq1("k"))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn delayed_binders_scope_over_body_only() {
        // (▷[x <- x] x)[t/x] = ▷[x <- t] x
        let t = later(DSubst(vec![("x".into(), var("x"))]), var("x"));
        let out = subst_term(&t, &"x".into(), &var("t"));
        assert_eq!(out, later(DSubst(vec![("x".into(), var("t"))]), var("x")));
    }
}
