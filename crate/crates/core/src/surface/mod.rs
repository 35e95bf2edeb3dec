//! Concrete syntax: lexing, parsing and printing of `.ctt` modules.

use crate::check::Span;
use crate::syntax::{Name, Tm};

pub mod lexer;
mod parser;
pub mod pretty;

pub use parser::{parse_module, parse_term};

#[derive(Clone, Debug)]
pub struct SourceModule {
    pub name: String,
    pub imports: Vec<(String, Span)>,
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug)]
pub struct Decl {
    pub name: Name,
    pub kind: DeclKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum DeclKind {
    Def { ty: Tm, body: Tm },
    Postulate { ty: Tm },
}

impl Decl {
    pub fn ty(&self) -> &Tm {
        match &self.kind {
            DeclKind::Def { ty, .. } | DeclKind::Postulate { ty } => ty,
        }
    }

    pub fn body(&self) -> Option<&Tm> {
        match &self.kind {
            DeclKind::Def { body, .. } => Some(body),
            DeclKind::Postulate { .. } => None,
        }
    }
}
