use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{Face, Interval, Name, Subst, Tm};
use crate::cofib::Restriction;

/// A top-level constant: a definition when `body` is present, a postulate otherwise.
#[derive(Clone, Debug)]
pub struct Global {
    pub ty: Tm,
    pub body: Option<Tm>,
}

/// The append-only table of checked top-level declarations.
#[derive(Clone, Debug, Default)]
pub struct Globals {
    map: HashMap<Name, Global>,
    order: Vec<Name>,
}

impl Globals {
    pub fn new() -> Globals {
        Globals::default()
    }

    pub fn insert(&mut self, name: Name, global: Global) {
        if self.map.insert(name.clone(), global).is_none() {
            self.order.push(name);
        }
    }

    pub fn get(&self, name: &Name) -> Option<&Global> {
        self.map.get(name)
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.map.contains_key(name)
    }

    /// Declarations in the order they were added.
    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Global)> {
        self.order.iter().map(move |n| (n, &self.map[n]))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

#[derive(Clone, Debug)]
pub enum Entry {
    /// A term variable; the type is absent only for binders met during
    /// untyped comparison.
    Var(Name, Option<Tm>),
    Interval(Name),
    Restrict(Face),
}

/// A typing context: globals, a telescope of local entries, and the
/// accumulated face restriction (always a single conjunction of atoms).
#[derive(Clone, Debug)]
pub struct Context {
    globals: Arc<Globals>,
    entries: Vec<Entry>,
    restriction: Restriction,
}

impl Default for Context {
    fn default() -> Self {
        Context::new(Arc::new(Globals::new()))
    }
}

impl Context {
    pub fn new(globals: Arc<Globals>) -> Context {
        Context {
            globals,
            entries: Vec::new(),
            restriction: Restriction::top(),
        }
    }

    pub fn globals(&self) -> &Arc<Globals> {
        &self.globals
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn restriction(&self) -> &Restriction {
        &self.restriction
    }

    /// Whether `x` is bound as a local variable, interval name or global.
    pub fn is_bound(&self, x: &Name) -> bool {
        self.globals.contains(x)
            || self.entries.iter().any(|e| match e {
                Entry::Var(y, _) | Entry::Interval(y) => y == x,
                Entry::Restrict(_) => false,
            })
    }

    pub fn has_interval(&self, x: &Name) -> bool {
        self.entries.iter().rev().any(|e| matches!(e, Entry::Interval(y) if y == x))
    }

    /// The type of a local variable or global. `Some(None)` means bound but untyped.
    pub fn lookup_type(&self, x: &Name) -> Option<Option<Tm>> {
        for e in self.entries.iter().rev() {
            match e {
                Entry::Var(y, ty) if y == x => return Some(ty.clone()),
                Entry::Interval(y) if y == x => return None,
                _ => {}
            }
        }
        self.globals.get(x).map(|g| Some(g.ty.clone()))
    }

    /// The body of a global definition, unless shadowed by a local binder.
    pub fn lookup_def(&self, x: &Name) -> Option<&Tm> {
        let shadowed = self.entries.iter().any(|e| match e {
            Entry::Var(y, _) | Entry::Interval(y) => y == x,
            Entry::Restrict(_) => false,
        });
        if shadowed {
            return None;
        }
        self.globals.get(x).and_then(|g| g.body.as_ref())
    }

    /// A name for a new binder based on `x`, fresh for this context.
    pub fn fresh_for(&self, x: &Name) -> Name {
        if self.is_bound(x) || x.as_str() == "_" {
            x.fresh()
        } else {
            x.clone()
        }
    }

    pub fn push_var(&self, x: Name, ty: Option<Tm>) -> Context {
        let mut ctx = self.clone();
        ctx.entries.push(Entry::Var(x, ty));
        ctx
    }

    pub fn push_interval(&self, i: Name) -> Context {
        let mut ctx = self.clone();
        ctx.entries.push(Entry::Interval(i));
        ctx
    }

    /// Restrict by a face. Since restrictions are kept as single
    /// conjunctions, a disjunctive face yields one context per disjunct;
    /// an inconsistent restriction yields none.
    pub fn restrict(&self, face: &Face) -> Vec<Context> {
        self.restriction
            .split(face)
            .into_iter()
            .map(|(r, conj)| {
                let mut ctx = self.clone();
                ctx.entries.push(Entry::Restrict(conj));
                ctx.restriction = r;
                ctx
            })
            .collect()
    }

    /// The same context under an explicit restriction, which may be absurd.
    pub fn with_restriction(&self, restriction: Restriction) -> Context {
        let mut ctx = self.clone();
        ctx.restriction = restriction;
        ctx
    }

    /// Substitute `r` for the interval name `i` throughout the context and
    /// remove `i`. Restrictions that mention `i` are re-imposed, so the result
    /// may split.
    pub fn subst_interval(&self, i: &Name, r: &Interval) -> Vec<Context> {
        let sub = Subst::interval(i, r);
        let mut out = vec![Context::new(self.globals.clone())];
        for e in &self.entries {
            match e {
                Entry::Interval(j) if j == i => {}
                Entry::Interval(j) => {
                    for c in &mut out {
                        c.entries.push(Entry::Interval(j.clone()));
                    }
                }
                Entry::Var(x, ty) => {
                    let ty = ty.as_ref().map(|t| sub.apply(t));
                    for c in &mut out {
                        c.entries.push(Entry::Var(x.clone(), ty.clone()));
                    }
                }
                Entry::Restrict(f) => {
                    let f = sub.apply_face(f);
                    out = out.iter().flat_map(|c| c.restrict(&f)).collect();
                }
            }
        }
        out
    }

    /// A short human-readable rendering of the local part of the context.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if !out.is_empty() {
                out.push_str(", ");
            }
            match e {
                Entry::Var(x, Some(ty)) => {
                    let _ = write!(out, "{x} : {}", crate::surface::pretty::term(ty));
                }
                Entry::Var(x, None) => {
                    let _ = write!(out, "{x}");
                }
                Entry::Interval(i) => {
                    let _ = write!(out, "{i} : I");
                }
                Entry::Restrict(f) => {
                    let _ = write!(out, "{}", crate::surface::pretty::face(f));
                }
            }
        }
        out
    }
}
