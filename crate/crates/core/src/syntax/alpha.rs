use super::{DSubst, Face, Interval, Name, System, Term};

/// Syntactic equality up to renaming of bound variables and names.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    Alpha::default().term(a, b)
}

#[derive(Default)]
struct Alpha {
    left: Vec<Name>,
    right: Vec<Name>,
}

impl Alpha {
    fn name(&self, x: &Name, y: &Name) -> bool {
        let i = self.left.iter().rposition(|n| n == x);
        let j = self.right.iter().rposition(|n| n == y);
        match (i, j) {
            (None, None) => x == y,
            (i, j) => i == j,
        }
    }

    fn push(&mut self, x: &Name, y: &Name) {
        self.left.push(x.clone());
        self.right.push(y.clone());
    }

    fn pop(&mut self, n: usize) {
        for _ in 0..n {
            self.left.pop();
            self.right.pop();
        }
    }

    fn interval(&self, r: &Interval, s: &Interval) -> bool {
        match (r, s) {
            (Interval::Zero, Interval::Zero) | (Interval::One, Interval::One) => true,
            (Interval::Name(x), Interval::Name(y)) => self.name(x, y),
            (Interval::Neg(a), Interval::Neg(b)) => self.interval(a, b),
            (Interval::Meet(a1, b1), Interval::Meet(a2, b2))
            | (Interval::Join(a1, b1), Interval::Join(a2, b2)) => {
                self.interval(a1, a2) && self.interval(b1, b2)
            }
            _ => false,
        }
    }

    fn face(&self, f: &Face, g: &Face) -> bool {
        match (f, g) {
            (Face::Bot, Face::Bot) | (Face::Top, Face::Top) => true,
            (Face::Eq(x, e1), Face::Eq(y, e2)) => e1 == e2 && self.name(x, y),
            (Face::And(a1, b1), Face::And(a2, b2)) | (Face::Or(a1, b1), Face::Or(a2, b2)) => {
                self.face(a1, a2) && self.face(b1, b2)
            }
            _ => false,
        }
    }

    fn under(&mut self, x: &Name, y: &Name, a: &Term, b: &Term) -> bool {
        self.push(x, y);
        let out = self.term(a, b);
        self.pop(1);
        out
    }

    fn system_faces(&self, s1: &System, s2: &System) -> bool {
        s1.branches().len() == s2.branches().len()
            && s1
                .branches()
                .iter()
                .zip(s2.branches())
                .all(|((f, _), (g, _))| self.face(f, g))
    }

    fn system_terms(&mut self, s1: &System, s2: &System) -> bool {
        s1.branches()
            .iter()
            .zip(s2.branches())
            .all(|((_, u), (_, v))| self.term(u, v))
    }

    fn delayed(&mut self, xi1: &DSubst, b1: &Term, xi2: &DSubst, b2: &Term) -> bool {
        if xi1.len() != xi2.len() {
            return false;
        }
        for ((_, t), (_, u)) in xi1.bindings().iter().zip(xi2.bindings()) {
            if !self.term(t, u) {
                return false;
            }
        }
        for ((x, _), (y, _)) in xi1.bindings().iter().zip(xi2.bindings()) {
            self.push(x, y);
        }
        let out = self.term(b1, b2);
        self.pop(xi1.len());
        out
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        if std::ptr::eq(a, b) && self.left == self.right {
            return true;
        }
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => self.name(x, y),
            (Term::Lam(x, a1, t1), Term::Lam(y, a2, t2)) => {
                let ann = match (a1, a2) {
                    (Some(a1), Some(a2)) => self.term(a1, a2),
                    (None, None) => true,
                    _ => false,
                };
                ann && self.under(x, y, t1, t2)
            }
            (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2))
            | (Term::Sigma(x, a1, b1), Term::Sigma(y, a2, b2)) => {
                self.term(a1, a2) && self.under(x, y, b1, b2)
            }
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                self.term(f1, f2) && self.term(a1, a2)
            }
            (Term::Fst(a), Term::Fst(b)) | (Term::Snd(a), Term::Snd(b)) | (Term::Suc(a), Term::Suc(b)) => {
                self.term(a, b)
            }
            (Term::Zero, Term::Zero) | (Term::Nat, Term::Nat) | (Term::Univ, Term::Univ) => true,
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
            ) => self.term(m1, m2) && self.term(z1, z2) && self.term(s1, s2) && self.term(t1, t2),
            (Term::Path(a1, x1, y1), Term::Path(a2, x2, y2)) => {
                self.term(a1, a2) && self.term(x1, x2) && self.term(y1, y2)
            }
            (Term::PLam(i, t1), Term::PLam(j, t2)) => self.under(i, j, t1, t2),
            (Term::PApp(p1, r1), Term::PApp(p2, r2)) => self.interval(r1, r2) && self.term(p1, p2),
            (
                Term::Comp {
                    name: i,
                    ty: a1,
                    system: s1,
                    base: b1,
                },
                Term::Comp {
                    name: j,
                    ty: a2,
                    system: s2,
                    base: b2,
                },
            ) => {
                if !(self.system_faces(s1, s2) && self.term(b1, b2)) {
                    return false;
                }
                self.push(i, j);
                let out = self.term(a1, a2) && self.system_terms(s1, s2);
                self.pop(1);
                out
            }
            (Term::Sys(s1), Term::Sys(s2)) => self.system_faces(s1, s2) && self.system_terms(s1, s2),
            (Term::Later(xi1, b1), Term::Later(xi2, b2)) | (Term::Next(xi1, b1), Term::Next(xi2, b2)) => {
                self.delayed(xi1, b1, xi2, b2)
            }
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
            ) => self.interval(r1, r2) && self.term(a1, a2) && self.under(x, y, t1, t2),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn renamed_binders_are_equal() {
        assert!(alpha_eq(&lam("x", var("x")), &lam("y", var("y"))));
        assert!(!alpha_eq(&lam("x", var("y")), &lam("y", var("y"))));
        assert!(alpha_eq(
            &plam("i", papp(var("p"), Interval::name("i"))),
            &plam("j", papp(var("p"), Interval::name("j")))
        ));
    }

    #[test]
    fn free_names_must_match() {
        assert!(!alpha_eq(&var("x"), &var("y")));
        assert!(alpha_eq(&var("x"), &var("x")));
    }
}
