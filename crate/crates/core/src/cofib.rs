//! Decision procedures for the interval and the face lattice.
//!
//! Interval equality is decided by evaluating both sides under every
//! assignment of their names into the four-element De Morgan algebra
//! `{0, a, b, 1}` (with `¬a = a`, `¬b = b`), which generates the variety of
//! De Morgan algebras. Faces are put into a canonical disjunctive normal form:
//! an antichain of consistent conjunctions of atoms.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Endpoint, Face, Interval, Name};

/// A vectorised table of De Morgan values, one per valuation.
///
/// The four-element algebra is encoded as pairs `(x, y)` of booleans with
/// componentwise lattice operations and `¬(x, y) = (¬y, ¬x)`.
#[derive(Clone, PartialEq, Eq)]
struct Table {
    x: Vec<u64>,
    y: Vec<u64>,
}

struct Valuations<'a> {
    names: &'a [Name],
    count: usize,
    words: usize,
}

impl<'a> Valuations<'a> {
    fn new(names: &'a [Name]) -> Self {
        let count = 1usize << (2 * names.len());
        Valuations {
            names,
            count,
            words: count.div_ceil(64),
        }
    }

    fn mask_last(&self, mut t: Table) -> Table {
        let extra = self.words * 64 - self.count;
        if extra > 0 {
            let keep = u64::MAX >> extra;
            if let Some(w) = t.x.last_mut() {
                *w &= keep;
            }
            if let Some(w) = t.y.last_mut() {
                *w &= keep;
            }
        }
        t
    }

    fn constant(&self, bit: bool) -> Table {
        let w = if bit { u64::MAX } else { 0 };
        self.mask_last(Table {
            x: vec![w; self.words],
            y: vec![w; self.words],
        })
    }

    fn name(&self, k: usize) -> Table {
        let mut t = Table {
            x: vec![0; self.words],
            y: vec![0; self.words],
        };
        for v in 0..self.count {
            // digit 0 ↦ 0, 1 ↦ a = (1,0), 2 ↦ b = (0,1), 3 ↦ 1
            let digit = (v >> (2 * k)) & 3;
            if digit & 1 != 0 {
                t.x[v / 64] |= 1 << (v % 64);
            }
            if digit & 2 != 0 {
                t.y[v / 64] |= 1 << (v % 64);
            }
        }
        t
    }

    fn eval(&self, r: &Interval) -> Table {
        match r {
            Interval::Zero => self.constant(false),
            Interval::One => self.constant(true),
            Interval::Name(n) => {
                let k = self.names.iter().position(|m| m == n).expect("name collected");
                self.name(k)
            }
            Interval::Neg(r) => {
                let t = self.eval(r);
                self.mask_last(Table {
                    x: t.y.iter().map(|w| !w).collect(),
                    y: t.x.iter().map(|w| !w).collect(),
                })
            }
            Interval::Meet(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                Table {
                    x: a.x.iter().zip(&b.x).map(|(p, q)| p & q).collect(),
                    y: a.y.iter().zip(&b.y).map(|(p, q)| p & q).collect(),
                }
            }
            Interval::Join(a, b) => {
                let (a, b) = (self.eval(a), self.eval(b));
                Table {
                    x: a.x.iter().zip(&b.x).map(|(p, q)| p | q).collect(),
                    y: a.y.iter().zip(&b.y).map(|(p, q)| p | q).collect(),
                }
            }
        }
    }
}

/// Equality in the free De Morgan algebra.
pub fn iv_equal(r: &Interval, s: &Interval) -> bool {
    if r == s {
        return true;
    }
    let mut names = r.names();
    names.extend(s.names());
    let names: Vec<Name> = names.into_iter().collect();
    let vals = Valuations::new(&names);
    vals.eval(r) == vals.eval(s)
}

/// A conjunction of face atoms: a partial map from names to endpoints.
pub type Conjunction = BTreeMap<Name, Endpoint>;

/// Canonical form of a face: an antichain of consistent conjunctions.
/// The empty antichain is `0F`; the antichain holding the empty conjunction is `1F`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct FaceDnf(BTreeSet<Conjunction>);

impl FaceDnf {
    pub fn bot() -> FaceDnf {
        FaceDnf(BTreeSet::new())
    }

    pub fn top() -> FaceDnf {
        FaceDnf(BTreeSet::from([Conjunction::new()]))
    }

    pub fn atom(n: &Name, e: Endpoint) -> FaceDnf {
        FaceDnf(BTreeSet::from([Conjunction::from([(n.clone(), e)])]))
    }

    pub fn conjunctions(&self) -> impl Iterator<Item = &Conjunction> {
        self.0.iter()
    }

    pub fn is_bot(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.0.iter().any(|c| c.is_empty())
    }

    fn from_conjunctions(conjs: impl IntoIterator<Item = Conjunction>) -> FaceDnf {
        let all: Vec<Conjunction> = conjs.into_iter().collect();
        let mut keep = BTreeSet::new();
        for (k, c) in all.iter().enumerate() {
            // c is redundant if some other conjunction is a strict subset
            // (or an equal one appears earlier)
            let redundant = all.iter().enumerate().any(|(l, d)| {
                l != k && is_subset(d, c) && (d.len() < c.len() || l < k)
            });
            if !redundant {
                keep.insert(c.clone());
            }
        }
        FaceDnf(keep)
    }

    pub fn or(&self, other: &FaceDnf) -> FaceDnf {
        FaceDnf::from_conjunctions(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn and(&self, other: &FaceDnf) -> FaceDnf {
        let mut out = Vec::new();
        for c in &self.0 {
            for d in &other.0 {
                if let Some(m) = merge(c, d) {
                    out.push(m);
                }
            }
        }
        FaceDnf::from_conjunctions(out)
    }

    /// `ψ ≤ φ` in the face lattice.
    pub fn leq(&self, other: &FaceDnf) -> bool {
        self.0.iter().all(|c| other.0.iter().any(|d| is_subset(d, c)))
    }

    /// Render back to a formula.
    pub fn to_face(&self) -> Face {
        Face::join_all(self.0.iter().map(conjunction_face))
    }
}

pub fn conjunction_face(c: &Conjunction) -> Face {
    c.iter().fold(Face::Top, |acc, (n, e)| {
        let atom = Face::Eq(n.clone(), *e);
        match acc {
            Face::Top => atom,
            acc => Face::and(acc, atom),
        }
    })
}

fn is_subset(small: &Conjunction, big: &Conjunction) -> bool {
    small.iter().all(|(n, e)| big.get(n) == Some(e))
}

fn merge(c: &Conjunction, d: &Conjunction) -> Option<Conjunction> {
    let mut out = c.clone();
    for (n, e) in d {
        match out.get(n) {
            Some(f) if f != e => return None,
            _ => {
                out.insert(n.clone(), *e);
            }
        }
    }
    Some(out)
}

pub fn face_dnf(phi: &Face) -> FaceDnf {
    match phi {
        Face::Bot => FaceDnf::bot(),
        Face::Top => FaceDnf::top(),
        Face::Eq(n, e) => FaceDnf::atom(n, *e),
        Face::And(a, b) => face_dnf(a).and(&face_dnf(b)),
        Face::Or(a, b) => face_dnf(a).or(&face_dnf(b)),
    }
}

/// `restriction ⊢ ψ1 = ψ2`, i.e. `restriction ∧ ψ1 = restriction ∧ ψ2`.
pub fn face_equal(restriction: &Face, psi1: &Face, psi2: &Face) -> bool {
    let r = face_dnf(restriction);
    r.and(&face_dnf(psi1)) == r.and(&face_dnf(psi2))
}

/// `restriction ⊢ ψ = 1F`.
pub fn face_entails(restriction: &Face, psi: &Face) -> bool {
    face_equal(restriction, psi, &Face::Top)
}

/// The image of `r` under the lattice homomorphism `r ↦ (r = 1)`.
pub fn face_of_interval(r: &Interval) -> Face {
    fn go(r: &Interval, negated: bool) -> Face {
        match r {
            Interval::Zero if negated => Face::Top,
            Interval::Zero => Face::Bot,
            Interval::One if negated => Face::Bot,
            Interval::One => Face::Top,
            Interval::Name(n) if negated => Face::eq0(n.clone()),
            Interval::Name(n) => Face::eq1(n.clone()),
            Interval::Neg(r) => go(r, !negated),
            Interval::Meet(a, b) if negated => Face::or(go(a, true), go(b, true)),
            Interval::Meet(a, b) => Face::and(go(a, false), go(b, false)),
            Interval::Join(a, b) if negated => Face::and(go(a, true), go(b, true)),
            Interval::Join(a, b) => Face::or(go(a, false), go(b, false)),
        }
    }
    go(r, false).simplify()
}

/// `∀i. φ`: the largest face not mentioning `i` below `φ`.
pub fn forall_name(i: &Name, phi: &Face) -> Face {
    let dnf = face_dnf(phi);
    FaceDnf::from_conjunctions(dnf.0.into_iter().filter(|c| !c.contains_key(i))).to_face()
}

/// A face restriction in force in a context: a single conjunction of atoms,
/// or the absurd restriction `0F`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Restriction(Option<Conjunction>);

impl Restriction {
    pub fn top() -> Restriction {
        Restriction(Some(Conjunction::new()))
    }

    pub fn absurd() -> Restriction {
        Restriction(None)
    }

    pub fn from_conjunction(c: Conjunction) -> Restriction {
        Restriction(Some(c))
    }

    pub fn is_absurd(&self) -> bool {
        self.0.is_none()
    }

    pub fn assignment(&self) -> Option<&Conjunction> {
        self.0.as_ref()
    }

    pub fn to_face(&self) -> Face {
        match &self.0 {
            None => Face::Bot,
            Some(c) => conjunction_face(c),
        }
    }

    fn lookup(&self, n: &Name) -> Option<Interval> {
        self.0.as_ref()?.get(n).map(|e| e.to_interval())
    }

    /// `r` with the assigned names replaced by their endpoints.
    pub fn apply_interval(&self, r: &Interval) -> Interval {
        match &self.0 {
            Some(c) if !c.is_empty() => r.subst_with(&|n| self.lookup(n)).simplify(),
            _ => r.simplify(),
        }
    }

    pub fn apply_face(&self, f: &Face) -> Face {
        match &self.0 {
            Some(c) if !c.is_empty() => f.subst_with(&|n| self.lookup(n)).simplify(),
            _ => f.simplify(),
        }
    }

    /// Whether `r` is forced to an endpoint.
    pub fn decide(&self, r: &Interval) -> Option<Endpoint> {
        match self.apply_interval(r) {
            Interval::Zero => Some(Endpoint::Zero),
            Interval::One => Some(Endpoint::One),
            _ if self.is_absurd() => Some(Endpoint::One),
            r if iv_equal(&r, &Interval::Zero) => Some(Endpoint::Zero),
            r if iv_equal(&r, &Interval::One) => Some(Endpoint::One),
            _ => None,
        }
    }

    pub fn iv_equal(&self, r: &Interval, s: &Interval) -> bool {
        self.is_absurd() || iv_equal(&self.apply_interval(r), &self.apply_interval(s))
    }

    pub fn entails(&self, f: &Face) -> bool {
        self.is_absurd() || face_dnf(&self.apply_face(f)).is_top()
    }

    pub fn face_equal(&self, f: &Face, g: &Face) -> bool {
        self.is_absurd() || face_dnf(&self.apply_face(f)) == face_dnf(&self.apply_face(g))
    }

    /// Split `self ∧ φ` into its consistent disjuncts. Each result carries
    /// the extended restriction and the added conjunction.
    pub fn split(&self, phi: &Face) -> Vec<(Restriction, Face)> {
        let Some(current) = &self.0 else {
            return Vec::new();
        };
        face_dnf(&self.apply_face(phi))
            .conjunctions()
            .filter_map(|c| merge(current, c).map(|m| (Restriction(Some(m)), conjunction_face(c))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(n: &str) -> Interval {
        Interval::name(n)
    }

    #[test]
    fn de_morgan_law() {
        let lhs = Interval::neg(Interval::meet(i("i"), i("j")));
        let rhs = Interval::join(Interval::neg(i("i")), Interval::neg(i("j")));
        assert!(iv_equal(&lhs, &rhs));
        assert!(iv_equal(&i("i"), &i("i")));
    }

    #[test]
    fn excluded_middle_fails() {
        // i ∨ ¬i ≠ 1: under i ↦ a the left side is a
        assert!(!iv_equal(&Interval::join(i("i"), Interval::neg(i("i"))), &Interval::One));
        assert!(!iv_equal(&Interval::meet(i("i"), Interval::neg(i("i"))), &Interval::Zero));
    }

    #[test]
    fn face_normal_forms() {
        // (i=0) ∧ (i=1) = 0F
        assert!(face_dnf(&Face::and(Face::eq0("i"), Face::eq1("i"))).is_bot());
        // absorption
        let f = Face::or(Face::eq1("i"), Face::and(Face::eq1("i"), Face::eq0("j")));
        assert_eq!(face_dnf(&f), face_dnf(&Face::eq1("i")));
        // 1F ∨ φ = 1F
        assert!(face_dnf(&Face::or(Face::Top, Face::eq0("k"))).is_top());
    }

    #[test]
    fn restricted_face_equality() {
        let r = Face::eq1("i");
        assert!(face_equal(&r, &Face::and(Face::eq1("i"), Face::eq0("j")), &Face::eq0("j")));
        assert!(!face_equal(&Face::Top, &Face::eq0("i"), &Face::eq1("i")));
        assert!(face_equal(&Face::Bot, &Face::eq0("i"), &Face::eq1("k")));
    }

    #[test]
    fn entailment() {
        assert!(face_entails(&Face::eq1("i"), &Face::eq1("i")));
        assert!(face_entails(&Face::and(Face::eq1("i"), Face::eq0("j")), &Face::eq0("j")));
        assert!(!face_entails(&Face::eq1("i"), &Face::eq0("j")));
    }

    #[test]
    fn face_of_interval_examples() {
        assert_eq!(face_of_interval(&i("i")), Face::eq1("i"));
        assert_eq!(face_of_interval(&Interval::neg(i("i"))), Face::eq0("i"));
        assert_eq!(
            face_of_interval(&Interval::meet(i("i"), i("j"))),
            Face::and(Face::eq1("i"), Face::eq1("j"))
        );
    }

    #[test]
    fn forall_examples() {
        let n = Name::new("i");
        assert_eq!(
            face_dnf(&forall_name(&n, &Face::or(Face::eq0("i"), Face::eq1("j")))),
            face_dnf(&Face::eq1("j"))
        );
        assert_eq!(face_dnf(&forall_name(&n, &Face::eq1("j"))), face_dnf(&Face::eq1("j")));
        assert!(face_dnf(&forall_name(&n, &Face::eq0("i"))).is_bot());
    }

    #[test]
    fn restriction_decides_intervals() {
        let r = Restriction::from_conjunction(Conjunction::from([(Name::new("i"), Endpoint::One)]));
        assert_eq!(r.decide(&i("i")), Some(Endpoint::One));
        assert_eq!(r.decide(&Interval::neg(i("i"))), Some(Endpoint::Zero));
        assert_eq!(r.decide(&Interval::meet(i("i"), i("j"))), None);
        assert!(r.iv_equal(&Interval::meet(i("i"), i("j")), &i("j")));
        assert!(r.entails(&Face::or(Face::eq1("i"), Face::eq0("j"))));
        let parts = r.split(&Face::or(Face::eq0("i"), Face::eq0("j")));
        assert_eq!(parts.len(), 1);
        assert!(Restriction::absurd().split(&Face::Top).is_empty());
    }
}
