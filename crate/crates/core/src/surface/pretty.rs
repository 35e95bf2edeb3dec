//! Rendering of terms in the surface syntax.
//!
//! Output always parses back to an α-equivalent term. Bound names are tidied:
//! each binder is shown under the shortest variant of its stem (`x`, `x1`,
//! `x2`, ...) that does not clash with a free name or an enclosing binder, so
//! the names produced by fresh-name generation never leak into output.

use std::collections::BTreeSet;

use crate::syntax::{DSubst, Endpoint, Face, Interval, Name, System, Term, Tm};

use super::{Decl, DeclKind, SourceModule};

// precedence levels
const TOP: u8 = 0;
const ARROW: u8 = 1;
const PROD: u8 = 2;
const PREFIX: u8 = 4;
const PATHAPP: u8 = 5;
const APP: u8 = 6;
const POSTFIX: u8 = 7;

struct Printer {
    free: BTreeSet<String>,
    scope: Vec<(Name, String)>,
}

impl Printer {
    fn new(free: impl IntoIterator<Item = Name>) -> Printer {
        Printer {
            free: free.into_iter().map(|n| n.as_str().to_string()).collect(),
            scope: Vec::new(),
        }
    }

    fn show(&self, x: &Name) -> String {
        match self.scope.iter().rev().find(|(y, _)| y == x) {
            Some((_, s)) => s.clone(),
            None => x.as_str().to_string(),
        }
    }

    /// Choose a display name for a binder; `used` says whether it occurs in its scope.
    fn bind(&mut self, x: &Name, used: bool) -> String {
        let stem = x.stem();
        let stem = if stem.is_empty() || super::lexer::is_keyword(stem) || (stem == "_" && used) {
            "x"
        } else {
            stem
        };
        let taken = |s: &str| self.free.contains(s) || self.scope.iter().any(|(_, d)| d == s);
        let mut shown = stem.to_string();
        let mut k = 1;
        while taken(&shown) && shown != "_" {
            shown = format!("{stem}{k}");
            k += 1;
        }
        self.scope.push((x.clone(), shown.clone()));
        shown
    }

    fn unbind(&mut self, n: usize) {
        for _ in 0..n {
            self.scope.pop();
        }
    }

    fn interval(&self, r: &Interval, prec: u8) -> String {
        match r {
            Interval::Zero => "0".into(),
            Interval::One => "1".into(),
            Interval::Name(n) => self.show(n),
            Interval::Neg(r) => format!("-{}", self.interval(r, 3)),
            Interval::Meet(a, b) => paren(prec > 2, format!("{} /\\ {}", self.interval(a, 2), self.interval(b, 3))),
            Interval::Join(a, b) => paren(prec > 1, format!("{} \\/ {}", self.interval(a, 1), self.interval(b, 2))),
        }
    }

    fn face(&self, f: &Face, prec: u8) -> String {
        match f {
            Face::Bot => "0F".into(),
            Face::Top => "1F".into(),
            Face::Eq(n, e) => format!("({} = {})", self.show(n), if *e == Endpoint::Zero { 0 } else { 1 }),
            Face::And(a, b) => paren(prec > 2, format!("{} /\\ {}", self.face(a, 2), self.face(b, 3))),
            Face::Or(a, b) => paren(prec > 1, format!("{} \\/ {}", self.face(a, 1), self.face(b, 2))),
        }
    }

    fn system(&mut self, s: &System, line: Option<&Name>) -> String {
        let mut parts = Vec::new();
        for (f, u) in s.branches() {
            let face = self.face(f, 0);
            let body = match line {
                Some(i) => format!("<{}> {}", self.show(i), self.term(u, TOP)),
                None => self.term(u, TOP),
            };
            parts.push(format!("{face} -> {body}"));
        }
        if parts.is_empty() {
            "[]".into()
        } else {
            format!("[ {} ]", parts.join(", "))
        }
    }

    /// Prints a delayed substitution and binds its names; the caller unbinds.
    fn dsubst(&mut self, xi: &DSubst, body: Option<&Tm>) -> (String, usize) {
        let terms: Vec<String> = xi.bindings().iter().map(|(_, t)| self.term(t, TOP)).collect();
        let mut parts = Vec::new();
        for ((x, _), t) in xi.bindings().iter().zip(terms) {
            let shown = self.bind(x, body.is_none_or(|b| b.mentions(x)));
            parts.push(format!("{shown} <- {t}"));
        }
        (format!("[{}]", parts.join(", ")), xi.len())
    }

    fn term(&mut self, t: &Tm, prec: u8) -> String {
        if let Some(n) = t.as_numeral() {
            return n.to_string();
        }
        match &**t {
            Term::Var(x) => self.show(x),
            Term::Lam(x, ann, body) => {
                let ann = ann.as_ref().map(|a| self.term(a, TOP));
                let shown = self.bind(x, body.mentions(x));
                let b = self.term(body, TOP);
                self.unbind(1);
                let head = match ann {
                    Some(a) => format!("\\({shown} : {a})"),
                    None => format!("\\{shown}"),
                };
                paren(prec > TOP, format!("{head} -> {b}"))
            }
            Term::Pi(x, a, b) => {
                if b.mentions(x) {
                    let a = self.term(a, TOP);
                    let shown = self.bind(x, true);
                    let b = self.term(b, TOP);
                    self.unbind(1);
                    paren(prec > ARROW, format!("({shown} : {a}) -> {b}"))
                } else {
                    let a = self.term(a, PROD);
                    let b = self.term(b, TOP);
                    paren(prec > ARROW, format!("{a} -> {b}"))
                }
            }
            Term::Sigma(x, a, b) => {
                if b.mentions(x) {
                    let a = self.term(a, TOP);
                    let shown = self.bind(x, true);
                    let b = self.term(b, PROD);
                    self.unbind(1);
                    paren(prec > ARROW, format!("({shown} : {a}) * {b}"))
                } else {
                    let a = self.term(a, PREFIX);
                    let b = self.term(b, PROD);
                    paren(prec > PROD, format!("{a} * {b}"))
                }
            }
            Term::Pair(a, b) => format!("({}, {})", self.term(a, TOP), self.term(b, TOP)),
            Term::Fst(p) => format!("{}.1", self.term(p, POSTFIX)),
            Term::Snd(p) => format!("{}.2", self.term(p, POSTFIX)),
            Term::App(f, a) => {
                let f = self.term(f, APP);
                let a = self.term(a, POSTFIX);
                paren(prec > APP, format!("{f} {a}"))
            }
            Term::Zero => "0".into(),
            Term::Suc(n) => {
                let n = self.term(n, POSTFIX);
                paren(prec > APP, format!("suc {n}"))
            }
            Term::NatRec {
                motive,
                zero,
                succ,
                target,
            } => {
                let args: Vec<String> = [motive, zero, succ, target].iter().map(|a| self.term(a, POSTFIX)).collect();
                paren(prec > APP, format!("natrec {}", args.join(" ")))
            }
            Term::Nat => "N".into(),
            Term::Univ => "U".into(),
            Term::Path(a, l, r) => {
                let args: Vec<String> = [a, l, r].iter().map(|a| self.term(a, POSTFIX)).collect();
                paren(prec > APP, format!("Path {}", args.join(" ")))
            }
            Term::PLam(i, body) => {
                let shown = self.bind(i, body.mentions(i));
                let b = self.term(body, TOP);
                self.unbind(1);
                paren(prec > TOP, format!("<{shown}> {b}"))
            }
            Term::PApp(p, r) => {
                let p = self.term(p, PATHAPP);
                paren(prec > PATHAPP, format!("{p} @ {}", self.interval(r, 3)))
            }
            Term::Comp {
                name,
                ty,
                system,
                base,
            } => {
                let base = self.term(base, POSTFIX);
                let used = ty.mentions(name) || system.branches().iter().any(|(_, u)| u.mentions(name));
                let shown = self.bind(name, used);
                let ty = self.term(ty, TOP);
                let sys = self.system(system, Some(name));
                self.unbind(1);
                paren(prec > APP, format!("comp (<{shown}> {ty}) {base} {sys}"))
            }
            Term::Sys(s) => self.system(s, None),
            Term::Later(xi, a) => {
                let (ds, n) = self.dsubst(xi, Some(a));
                let a = self.term(a, PREFIX);
                self.unbind(n);
                let ds = if xi.is_empty() && !a.starts_with('[') {
                    String::new()
                } else {
                    format!("{ds} ")
                };
                paren(prec > PREFIX, format!("|> {ds}{a}"))
            }
            Term::Next(xi, t) => {
                let (ds, n) = self.dsubst(xi, Some(t));
                let body = self.term(t, PREFIX);
                self.unbind(n);
                // an empty substitution must still be written when the body starts with `[`
                let ds = if xi.is_empty() && !body.starts_with('[') {
                    String::new()
                } else {
                    format!("{ds} ")
                };
                paren(prec > PREFIX, format!("next {ds}{body}"))
            }
            Term::DFix { dir, name, ty, body } => {
                let dir = self.interval(dir, 0);
                let ty = self.term(ty, TOP);
                let shown = self.bind(name, body.mentions(name));
                let b = self.term(body, TOP);
                self.unbind(1);
                paren(prec > TOP, format!("dfix [{dir}] {shown} : {ty} . {b}"))
            }
        }
    }
}

fn paren(yes: bool, s: String) -> String {
    if yes {
        format!("({s})")
    } else {
        s
    }
}

/// Render a term.
pub fn term(t: &Tm) -> String {
    Printer::new(t.free_names()).term(t, TOP)
}

/// Render a term, treating `globals` as names that binders must not shadow.
pub fn term_avoiding(t: &Tm, globals: impl IntoIterator<Item = Name>) -> String {
    let mut free = t.free_names();
    free.extend(globals);
    Printer::new(free).term(t, TOP)
}

pub fn interval(r: &Interval) -> String {
    Printer::new(r.names()).interval(r, 0)
}

pub fn face(f: &Face) -> String {
    Printer::new(f.names()).face(f, 0)
}

pub fn dsubst(xi: &DSubst) -> String {
    let mut free = BTreeSet::new();
    for (_, t) in xi.bindings() {
        free.extend(t.free_names());
    }
    Printer::new(free).dsubst(xi, None).0
}

fn decl(d: &Decl, globals: &BTreeSet<Name>) -> String {
    let show = |t: &Tm| term_avoiding(t, globals.iter().cloned());
    match &d.kind {
        DeclKind::Postulate { ty } => format!("postulate {} : {}", d.name, show(ty)),
        DeclKind::Def { ty, body } => format!("{} : {} =\n  {}", d.name, show(ty), show(body)),
    }
}

/// Render a whole module; the result parses back to an α-equivalent module.
pub fn module(m: &SourceModule) -> String {
    let mut out = format!("module {} where\n", m.name);
    for (i, _) in &m.imports {
        out.push_str(&format!("import {i}\n"));
    }
    let globals: BTreeSet<Name> = m.decls.iter().map(|d| d.name.clone()).collect();
    for d in &m.decls {
        out.push('\n');
        out.push_str(&decl(d, &globals));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_term;
    use crate::syntax::alpha_eq;

    fn round_trip(src: &str) {
        let t = parse_term(src).unwrap();
        let shown = term(&t);
        assert!(alpha_eq(&parse_term(&shown).unwrap(), &t), "{src} printed as {shown}");
    }

    #[test]
    fn dependent_domains_are_parenthesized() {
        round_trip("((x : A) -> P x) -> B");
        round_trip("((x : A) * P x) -> B");
        round_trip("((x : A) * P x) * B");
        round_trip("(x : A) -> (y : B) * Q x y");
    }

    #[test]
    fn used_wildcards_are_renamed() {
        let t = crate::syntax::lam("_", crate::syntax::var("_"));
        assert_eq!(term(&t), "\\x -> x");
    }
}
