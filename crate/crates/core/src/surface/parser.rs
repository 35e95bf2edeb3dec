use crate::check::{ErrorCode, Span, TypeError};
use crate::syntax::{
    app, comp, dfix, fix, fst, later, lam, next, numeral, pair, papp, path, pi, plam, sigma, snd, subst_interval,
    suc, var, DSubst, Face, Interval, Name, System, Term, Tm,
};
use std::sync::Arc;

use super::lexer::{is_keyword, lex, Tok, Token};
use super::{Decl, DeclKind, SourceModule};

type PResult<T> = Result<T, TypeError>;

fn syntax_error(message: impl Into<String>, span: Span) -> TypeError {
    TypeError::new(ErrorCode::SyntaxError, message).at(span)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let k = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[k].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, what: &str) -> PResult<T> {
        Err(syntax_error(format!("expected {what}, found {}", self.peek().describe()), self.span()))
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn is_keyword_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.is_keyword_ident(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// A name in binding position.
    fn binder(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if is_keyword(&s) => Err(syntax_error(
                format!("the reserved word `{s}` cannot be used as a name"),
                self.span(),
            )),
            Tok::Ident(s) => {
                self.bump();
                Ok(Name::new(&s))
            }
            _ => self.unexpected("a name"),
        }
    }

    fn binders_until(&mut self, stop: &Tok) -> PResult<Vec<Name>> {
        let mut names = vec![self.binder()?];
        while self.peek() != stop {
            names.push(self.binder()?);
        }
        Ok(names)
    }

    /// `(` ident+ `:` at the cursor.
    fn at_telescope(&self) -> bool {
        if *self.peek() != Tok::LParen {
            return false;
        }
        let mut n = 1;
        while matches!(self.peek_at(n), Tok::Ident(s) if !is_keyword(s)) {
            n += 1;
        }
        n > 1 && *self.peek_at(n) == Tok::Colon
    }

    /// `(x y : A)` groups.
    fn telescope(&mut self) -> PResult<Vec<(Name, Tm)>> {
        let mut out = Vec::new();
        while self.at_telescope() {
            self.bump();
            let names = self.binders_until(&Tok::Colon)?;
            self.expect(Tok::Colon, "`:`")?;
            let ty = self.term()?;
            self.expect(Tok::RParen, "`)`")?;
            for x in names {
                out.push((x, ty.clone()));
            }
        }
        Ok(out)
    }

    pub fn term(&mut self) -> PResult<Tm> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let mut params: Vec<(Name, Option<Tm>)> = Vec::new();
                loop {
                    if self.at_telescope() {
                        for (x, ty) in self.telescope()? {
                            params.push((x, Some(ty)));
                        }
                    } else if matches!(self.peek(), Tok::Ident(_)) {
                        params.push((self.binder()?, None));
                    } else {
                        break;
                    }
                }
                if params.is_empty() {
                    return self.unexpected("a lambda binder");
                }
                self.expect(Tok::Arrow, "`->`")?;
                let body = self.term()?;
                Ok(params
                    .into_iter()
                    .rev()
                    .fold(body, |b, (x, ty)| Arc::new(Term::Lam(x, ty, b))))
            }
            Tok::Lt => {
                self.bump();
                let names = self.binders_until(&Tok::Gt)?;
                self.expect(Tok::Gt, "`>`")?;
                let body = self.term()?;
                Ok(names.into_iter().rev().fold(body, |b, i| plam(i, b)))
            }
            Tok::Ident(s) if s == "dfix" || s == "fix" => {
                let is_fix = s == "fix";
                self.bump();
                let dir = if self.eat(&Tok::LBracket) {
                    let r = self.interval()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    r
                } else {
                    Interval::Zero
                };
                let x = self.binder()?;
                self.expect(Tok::Colon, "`:` and the type of the fixed point")?;
                let ty = self.term()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(if is_fix {
                    fix(dir, x, ty, body)
                } else {
                    dfix(dir, x, ty, body)
                })
            }
            _ => self.arrow(),
        }
    }

    fn arrow(&mut self) -> PResult<Tm> {
        let lhs = self.prod()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.term()?;
            Ok(pi("_", lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn prod(&mut self) -> PResult<Tm> {
        if self.at_telescope() {
            let tele = self.telescope()?;
            let (body, dependent_pi) = if self.eat(&Tok::Arrow) {
                (self.term()?, true)
            } else if self.eat(&Tok::Star) {
                (self.prod()?, false)
            } else {
                return self.unexpected("`->` or `*` after a telescope");
            };
            return Ok(tele.into_iter().rev().fold(body, |b, (x, a)| {
                if dependent_pi {
                    pi(x, a, b)
                } else {
                    sigma(x, a, b)
                }
            }));
        }
        let lhs = self.applicative()?;
        if self.eat(&Tok::Star) {
            let rhs = self.prod()?;
            Ok(sigma("_", lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    /// `f <*> a` is `next [f' <- f, a' <- a] f' a'`.
    fn applicative(&mut self) -> PResult<Tm> {
        let mut lhs = self.prefix()?;
        while self.eat(&Tok::Ap) {
            let rhs = self.prefix()?;
            let f = Name::new("f").fresh();
            let a = Name::new("a").fresh();
            lhs = next(
                DSubst(vec![(f.clone(), lhs), (a.clone(), rhs)]),
                app(var(f), var(a)),
            );
        }
        Ok(lhs)
    }

    fn at_dsubst(&self) -> bool {
        *self.peek() == Tok::LBracket
            && (*self.peek_at(1) == Tok::RBracket
                || (matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::LeftArrow))
    }

    fn dsubst(&mut self) -> PResult<DSubst> {
        if !self.at_dsubst() {
            return Ok(DSubst::empty());
        }
        self.bump();
        let mut out = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                let x = self.binder()?;
                self.expect(Tok::LeftArrow, "`<-`")?;
                let t = self.term()?;
                out.push((x, t));
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `]`")?;
            }
        }
        Ok(DSubst(out))
    }

    fn prefix(&mut self) -> PResult<Tm> {
        if self.eat(&Tok::Later) {
            let xi = self.dsubst()?;
            let a = self.prefix()?;
            return Ok(later(xi, a));
        }
        if self.eat_keyword("next") || self.eat_keyword("pure") {
            let xi = self.dsubst()?;
            let t = self.prefix()?;
            return Ok(next(xi, t));
        }
        self.path_app()
    }

    fn path_app(&mut self) -> PResult<Tm> {
        let mut t = self.application()?;
        while self.eat(&Tok::At) {
            let r = self.interval_atom()?;
            t = papp(t, r);
        }
        Ok(t)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || matches!(s.as_str(), "U" | "N" | "zero"),
            Tok::Num(_) | Tok::LParen | Tok::LBracket => true,
            _ => false,
        }
    }

    fn application(&mut self) -> PResult<Tm> {
        let head = match self.peek().clone() {
            Tok::Ident(s) if s == "suc" => {
                self.bump();
                suc(self.postfix()?)
            }
            Tok::Ident(s) if s == "natrec" => {
                self.bump();
                let motive = self.postfix()?;
                let zero = self.postfix()?;
                let succ = self.postfix()?;
                let target = self.postfix()?;
                Arc::new(Term::NatRec {
                    motive,
                    zero,
                    succ,
                    target,
                })
            }
            Tok::Ident(s) if s == "Path" => {
                self.bump();
                let a = self.postfix()?;
                let l = self.postfix()?;
                let r = self.postfix()?;
                path(a, l, r)
            }
            Tok::Ident(s) if s == "comp" => {
                self.bump();
                let line = self.postfix()?;
                let base = self.postfix()?;
                let sys = self.system()?;
                make_comp(line, sys, base)
            }
            Tok::Ident(s) if s == "transport" => {
                self.bump();
                let line = self.postfix()?;
                let base = self.postfix()?;
                make_comp(line, System::empty(), base)
            }
            _ => self.postfix()?,
        };
        let mut t = head;
        while self.starts_atom() {
            let a = self.postfix()?;
            t = app(t, a);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> PResult<Tm> {
        let mut t = self.atom()?;
        loop {
            if self.eat(&Tok::Proj1) {
                t = fst(t);
            } else if self.eat(&Tok::Proj2) {
                t = snd(t);
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> PResult<Tm> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "U" => {
                self.bump();
                Ok(Arc::new(Term::Univ))
            }
            Tok::Ident(s) if s == "N" => {
                self.bump();
                Ok(Arc::new(Term::Nat))
            }
            Tok::Ident(s) if s == "zero" => {
                self.bump();
                Ok(Arc::new(Term::Zero))
            }
            Tok::Ident(s) if s == "_" => Err(syntax_error("`_` cannot be used as a term", self.span())),
            Tok::Ident(s) if is_keyword(&s) => Err(syntax_error(
                format!("the reserved word `{s}` cannot appear here"),
                self.span(),
            )),
            Tok::Ident(s) => {
                self.bump();
                Ok(var(s.as_str()))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(numeral(n))
            }
            Tok::LParen => {
                self.bump();
                let mut items = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    items.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                let last = items.pop().expect("at least one item");
                Ok(items.into_iter().rev().fold(last, |acc, t| pair(t, acc)))
            }
            Tok::LBracket => Ok(Arc::new(Term::Sys(self.system()?))),
            _ => self.unexpected("a term"),
        }
    }

    fn system(&mut self) -> PResult<System> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut branches = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                let f = self.face()?;
                self.expect(Tok::Arrow, "`->`")?;
                let u = self.term()?;
                branches.push((f, u));
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `]`")?;
            }
        }
        Ok(System::new(branches))
    }

    fn face(&mut self) -> PResult<Face> {
        let mut f = self.face_conj()?;
        while self.eat(&Tok::Join) {
            f = Face::or(f, self.face_conj()?);
        }
        Ok(f)
    }

    fn face_conj(&mut self) -> PResult<Face> {
        let mut f = self.face_atom()?;
        loop {
            if self.eat(&Tok::Meet) {
                f = Face::and(f, self.face_atom()?);
            } else if *self.peek() == Tok::LParen {
                // juxtaposed atoms are a conjunction
                f = Face::and(f, self.face_atom()?);
            } else {
                return Ok(f);
            }
        }
    }

    fn face_atom(&mut self) -> PResult<Face> {
        match self.peek() {
            Tok::FaceBot => {
                self.bump();
                Ok(Face::Bot)
            }
            Tok::FaceTop => {
                self.bump();
                Ok(Face::Top)
            }
            Tok::LParen if *self.peek_at(2) == Tok::Equals => {
                self.bump();
                let i = self.binder()?;
                self.expect(Tok::Equals, "`=`")?;
                let f = match self.bump() {
                    Tok::Num(0) => Face::eq0(i),
                    Tok::Num(1) => Face::eq1(i),
                    _ => {
                        self.pos -= 1;
                        return self.unexpected("`0` or `1`");
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::LParen => {
                self.bump();
                let f = self.face()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.unexpected("a face such as `(i = 0)`"),
        }
    }

    fn interval(&mut self) -> PResult<Interval> {
        let mut r = self.interval_conj()?;
        while self.eat(&Tok::Join) {
            r = Interval::join(r, self.interval_conj()?);
        }
        Ok(r)
    }

    fn interval_conj(&mut self) -> PResult<Interval> {
        let mut r = self.interval_atom()?;
        while self.eat(&Tok::Meet) {
            r = Interval::meet(r, self.interval_atom()?);
        }
        Ok(r)
    }

    fn interval_atom(&mut self) -> PResult<Interval> {
        match self.peek().clone() {
            Tok::Num(0) => {
                self.bump();
                Ok(Interval::Zero)
            }
            Tok::Num(1) => {
                self.bump();
                Ok(Interval::One)
            }
            Tok::Minus => {
                self.bump();
                Ok(Interval::neg(self.interval_atom()?))
            }
            Tok::LParen => {
                self.bump();
                let r = self.interval()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(r)
            }
            Tok::Ident(_) => Ok(Interval::Name(self.binder()?)),
            _ => self.unexpected("an interval element"),
        }
    }
}

/// `comp L a0 [φ -> u]`: the line `L` is `<i> A` or a path of types, and
/// each branch `u` is `<i> v` or a path.
fn make_comp(line: Tm, sys: System, base: Tm) -> Tm {
    let all_abstracted = sys.branches().iter().all(|(_, u)| matches!(&**u, Term::PLam(..)));
    let (i, ty) = match &*line {
        Term::PLam(i, a) if all_abstracted => (i.clone(), a.clone()),
        Term::PLam(i, a) => {
            let j = i.fresh();
            (j.clone(), subst_interval(a, i, &Interval::Name(j)))
        }
        _ => {
            let j = Name::new("i").fresh();
            (j.clone(), papp(line.clone(), Interval::Name(j)))
        }
    };
    let iv = Interval::Name(i.clone());
    let branches = sys
        .branches()
        .iter()
        .map(|(f, u)| {
            let v = match &**u {
                Term::PLam(k, v) if *k == i => v.clone(),
                Term::PLam(k, v) => subst_interval(v, k, &iv),
                _ => papp(u.clone(), iv.clone()),
            };
            (f.clone(), v)
        })
        .collect();
    comp(i, ty, System::new(branches), base)
}

fn lex_err(e: super::lexer::LexError) -> TypeError {
    syntax_error(e.message, e.span)
}

/// Parse a single term, e.g. the argument of `normalize -e`.
pub fn parse_term(src: &str) -> PResult<Tm> {
    let mut p = Parser::new(lex(src).map_err(lex_err)?);
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(t)
}

/// Parse a module. A token in the first column starts a new top-level item;
/// continuation lines must be indented.
pub fn parse_module(src: &str) -> PResult<SourceModule> {
    let toks = lex(src).map_err(lex_err)?;
    let mut chunks: Vec<Vec<Token>> = Vec::new();
    for t in toks {
        if t.tok == Tok::Eof {
            break;
        }
        if t.span.start.1 == 1 || chunks.is_empty() {
            chunks.push(Vec::new());
        }
        chunks.last_mut().expect("pushed above").push(t);
    }

    let mut module = SourceModule {
        name: "Main".into(),
        imports: Vec::new(),
        decls: Vec::new(),
    };
    for (k, chunk) in chunks.into_iter().enumerate() {
        let first = chunk[0].span;
        let end = chunk.last().expect("chunks are nonempty").span.end;
        let mut toks = chunk;
        // end-of-item marker placed where the next item starts
        toks.push(Token {
            tok: Tok::Eof,
            span: Span {
                start: end,
                end,
            },
        });
        let mut p = Parser::new(toks);
        let span = Span { start: first.start, end };
        if p.eat_keyword("module") {
            if k != 0 {
                return Err(syntax_error("`module` must be the first item of a file", first));
            }
            let name = p.binder()?;
            if !p.eat_keyword("where") {
                return p.unexpected("`where`");
            }
            module.name = name.as_str().to_string();
        } else if p.eat_keyword("import") {
            let name = p.binder()?;
            module.imports.push((name.as_str().to_string(), span));
        } else if p.is_keyword_ident("data") {
            return Err(syntax_error("`data` declarations are not supported", first));
        } else {
            let postulate = p.eat_keyword("postulate");
            let name = p.binder()?;
            let tele = p.telescope()?;
            p.expect(Tok::Colon, "`:`")?;
            let ty = p.term()?;
            let close = |t: Tm, as_pi: bool| {
                tele.iter().rev().fold(t, |b, (x, a)| {
                    if as_pi {
                        pi(x.clone(), a.clone(), b)
                    } else {
                        lam(x.clone(), b)
                    }
                })
            };
            let kind = if postulate {
                DeclKind::Postulate { ty: close(ty, true) }
            } else {
                p.expect(Tok::Equals, "`=` and a definition (or use `postulate`)")?;
                let body = p.term()?;
                DeclKind::Def {
                    ty: close(ty, true),
                    body: close(body, false),
                }
            };
            module.decls.push(Decl { name, kind, span });
        }
        if *p.peek() != Tok::Eof {
            return p.unexpected("the end of the declaration");
        }
    }
    Ok(module)
}
