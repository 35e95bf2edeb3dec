//! Independent oracles for the interval and face solvers, plus generators.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use gctt::cofib::{face_dnf, face_entails, face_equal, face_of_interval, forall_name, iv_equal};
use gctt::syntax::{Endpoint, Face, Interval, Name};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<Name> {
    ["i", "j", "k", "l", "m", "n"][..n].iter().map(|s| Name::new(s)).collect()
}

// The four-element De Morgan algebra. A and B are the two fixed points of
// negation and are incomparable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Dm {
    Z,
    A,
    B,
    O,
}

fn dm_meet(x: Dm, y: Dm) -> Dm {
    match (x, y) {
        (Dm::O, v) | (v, Dm::O) => v,
        (Dm::Z, _) | (_, Dm::Z) => Dm::Z,
        (u, v) if u == v => u,
        _ => Dm::Z,
    }
}

fn dm_join(x: Dm, y: Dm) -> Dm {
    match (x, y) {
        (Dm::Z, v) | (v, Dm::Z) => v,
        (Dm::O, _) | (_, Dm::O) => Dm::O,
        (u, v) if u == v => u,
        _ => Dm::O,
    }
}

fn dm_neg(x: Dm) -> Dm {
    match x {
        Dm::Z => Dm::O,
        Dm::O => Dm::Z,
        v => v,
    }
}

pub fn dm_eval(r: &Interval, names: &[Name], val: &[Dm]) -> Dm {
    match r {
        Interval::Zero => Dm::Z,
        Interval::One => Dm::O,
        Interval::Name(n) => val[names.iter().position(|m| m == n).expect("name in scope")],
        Interval::Neg(a) => dm_neg(dm_eval(a, names, val)),
        Interval::Meet(a, b) => dm_meet(dm_eval(a, names, val), dm_eval(b, names, val)),
        Interval::Join(a, b) => dm_join(dm_eval(a, names, val), dm_eval(b, names, val)),
    }
}

/// Value table of `r` over every valuation of `names` into the algebra.
pub fn dm_table(r: &Interval, names: &[Name]) -> Vec<Dm> {
    let all = [Dm::Z, Dm::A, Dm::B, Dm::O];
    let n = names.len();
    (0..4usize.pow(n as u32))
        .map(|mut code| {
            let val: Vec<Dm> = (0..n)
                .map(|_| {
                    let v = all[code % 4];
                    code /= 4;
                    v
                })
                .collect();
            dm_eval(r, names, &val)
        })
        .collect()
}

/// Per name: 0 makes `(i = 0)` true, 1 makes `(i = 1)` true, 2 makes neither true.
pub fn face_eval(f: &Face, names: &[Name], val: &[u8]) -> bool {
    match f {
        Face::Bot => false,
        Face::Top => true,
        Face::Eq(n, e) => {
            let v = val[names.iter().position(|m| m == n).expect("name in scope")];
            v == if *e == Endpoint::Zero { 0 } else { 1 }
        }
        Face::And(a, b) => face_eval(a, names, val) && face_eval(b, names, val),
        Face::Or(a, b) => face_eval(a, names, val) || face_eval(b, names, val),
    }
}

pub fn face_table(f: &Face, names: &[Name]) -> Vec<bool> {
    let n = names.len();
    (0..3usize.pow(n as u32))
        .map(|mut code| {
            let val: Vec<u8> = (0..n)
                .map(|_| {
                    let v = (code % 3) as u8;
                    code /= 3;
                    v
                })
                .collect();
            face_eval(f, names, &val)
        })
        .collect()
}

fn table_and(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

fn table_leq(a: &[bool], b: &[bool]) -> bool {
    a.iter().zip(b).all(|(x, y)| !*x || *y)
}

/// Every interval expression over `names` with exactly `size` nodes.
pub fn intervals_of_size(names: &[Name], size: usize, memo: &mut Vec<Vec<Interval>>) -> Vec<Interval> {
    while memo.len() <= size {
        let s = memo.len();
        let mut out = Vec::new();
        if s == 1 {
            out.push(Interval::Zero);
            out.push(Interval::One);
            out.extend(names.iter().map(|n| Interval::Name(n.clone())));
        } else if s > 1 {
            for a in &memo[s - 1] {
                out.push(Interval::neg(a.clone()));
            }
            for left in 1..s - 1 {
                let right = s - 1 - left;
                for a in &memo[left] {
                    for b in &memo[right] {
                        out.push(Interval::meet(a.clone(), b.clone()));
                        out.push(Interval::join(a.clone(), b.clone()));
                    }
                }
            }
        }
        memo.push(out);
    }
    memo[size].clone()
}

pub fn intervals_up_to(names: &[Name], size: usize) -> Vec<Interval> {
    let mut memo = Vec::new();
    (1..=size).flat_map(|s| intervals_of_size(names, s, &mut memo)).collect()
}

/// Every face over `names` with at most `ops` connectives.
pub fn faces_up_to(names: &[Name], ops: usize) -> Vec<Face> {
    let mut by_ops: Vec<Vec<Face>> = vec![{
        let mut leaves = vec![Face::Bot, Face::Top];
        for n in names {
            leaves.push(Face::eq0(n.clone()));
            leaves.push(Face::eq1(n.clone()));
        }
        leaves
    }];
    for k in 1..=ops {
        let mut out = Vec::new();
        for left in 0..k {
            let right = k - 1 - left;
            for a in &by_ops[left] {
                for b in &by_ops[right] {
                    out.push(Face::and(a.clone(), b.clone()));
                    out.push(Face::or(a.clone(), b.clone()));
                }
            }
        }
        by_ops.push(out);
    }
    by_ops.concat()
}

pub fn random_interval(rng: &mut impl Rng, names: &[Name], depth: u32) -> Interval {
    if depth == 0 || rng.gen_ratio(1, 5) {
        return match rng.gen_range(0..8) {
            0 => Interval::Zero,
            1 => Interval::One,
            _ => Interval::Name(names[rng.gen_range(0..names.len())].clone()),
        };
    }
    match rng.gen_range(0..3) {
        0 => Interval::neg(random_interval(rng, names, depth - 1)),
        1 => Interval::meet(random_interval(rng, names, depth - 1), random_interval(rng, names, depth - 1)),
        _ => Interval::join(random_interval(rng, names, depth - 1), random_interval(rng, names, depth - 1)),
    }
}

/// Rewrite `r` by De Morgan identities at random positions.
pub fn rewrite_interval(rng: &mut impl Rng, names: &[Name], r: &Interval) -> Interval {
    let r = match r {
        Interval::Neg(a) => Interval::neg(rewrite_interval(rng, names, a)),
        Interval::Meet(a, b) => Interval::meet(rewrite_interval(rng, names, a), rewrite_interval(rng, names, b)),
        Interval::Join(a, b) => Interval::join(rewrite_interval(rng, names, a), rewrite_interval(rng, names, b)),
        leaf => leaf.clone(),
    };
    if !rng.gen_ratio(1, 3) {
        return r;
    }
    match (rng.gen_range(0..7), &r) {
        (0, _) => Interval::neg(Interval::neg(r)),
        (1, Interval::Meet(a, b)) => Interval::meet((**b).clone(), (**a).clone()),
        (1, Interval::Join(a, b)) => Interval::join((**b).clone(), (**a).clone()),
        (2, Interval::Neg(a)) => match &**a {
            Interval::Meet(x, y) => Interval::join(Interval::neg((**x).clone()), Interval::neg((**y).clone())),
            Interval::Join(x, y) => Interval::meet(Interval::neg((**x).clone()), Interval::neg((**y).clone())),
            _ => r,
        },
        (3, Interval::Meet(a, b)) => match &**b {
            Interval::Join(x, y) => Interval::join(
                Interval::meet((**a).clone(), (**x).clone()),
                Interval::meet((**a).clone(), (**y).clone()),
            ),
            _ => r,
        },
        (4, _) => {
            let y = random_interval(rng, names, 2);
            Interval::join(r.clone(), Interval::meet(r, y))
        }
        (5, _) => Interval::meet(Interval::join(r, Interval::Zero), Interval::One),
        (6, _) => Interval::meet(r.clone(), r),
        _ => r,
    }
}

pub fn random_face(rng: &mut impl Rng, names: &[Name], depth: u32) -> Face {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..12) {
            0 => Face::Bot,
            1 => Face::Top,
            k => {
                let n = names[rng.gen_range(0..names.len())].clone();
                if k % 2 == 0 {
                    Face::eq0(n)
                } else {
                    Face::eq1(n)
                }
            }
        };
    }
    if rng.gen_bool(0.5) {
        Face::and(random_face(rng, names, depth - 1), random_face(rng, names, depth - 1))
    } else {
        Face::or(random_face(rng, names, depth - 1), random_face(rng, names, depth - 1))
    }
}

/// Mismatches between `iv_equal` and the valuation oracle on every pair of
/// expressions over three names with at most five nodes.
pub fn iv_exhaustive_mismatches() -> (usize, usize) {
    let ns = names(3);
    let all = intervals_up_to(&ns, 5);
    let tables: Vec<Vec<Dm>> = all.iter().map(|r| dm_table(r, &ns)).collect();
    let mut mismatches = 0;
    let mut pairs = 0;
    for (a, ta) in all.iter().zip(&tables) {
        for (b, tb) in all.iter().zip(&tables) {
            pairs += 1;
            if iv_equal(a, b) != (ta == tb) {
                mismatches += 1;
            }
        }
    }
    (mismatches, pairs)
}

/// Every interval expression over `names` of depth at most `depth`.
pub fn intervals_of_depth(names: &[Name], depth: usize) -> Vec<Interval> {
    let mut all = vec![Interval::Zero, Interval::One];
    all.extend(names.iter().map(|n| Interval::Name(n.clone())));
    for _ in 0..depth {
        let mut next = all[..2 + names.len()].to_vec();
        for a in &all {
            next.push(Interval::neg(a.clone()));
        }
        for a in &all {
            for b in &all {
                next.push(Interval::meet(a.clone(), b.clone()));
                next.push(Interval::join(a.clone(), b.clone()));
            }
        }
        all = next;
    }
    all
}

/// Mismatches on all pairs of expressions over three names of depth at most
/// `depth`. Expressions are grouped by oracle table; each is compared with
/// its group's first member, and group representatives with each other.
pub fn iv_depth_mismatches(depth: usize) -> (usize, usize) {
    let ns = names(3);
    let all = intervals_of_depth(&ns, depth);
    let mut groups: BTreeMap<Vec<Dm>, Vec<&Interval>> = BTreeMap::new();
    for r in &all {
        groups.entry(dm_table(r, &ns)).or_default().push(r);
    }
    let reps: Vec<&Interval> = groups.values().map(|g| g[0]).collect();
    let mut mismatches = 0;
    for g in groups.values() {
        for r in g {
            mismatches += usize::from(!iv_equal(g[0], r) || !iv_equal(r, g[0]));
        }
    }
    for (k, a) in reps.iter().enumerate() {
        for b in &reps[k + 1..] {
            mismatches += usize::from(iv_equal(a, b));
        }
    }
    (mismatches, all.len())
}

/// Mismatches on `count` random pairs over five names; half of the pairs are
/// related by identity-preserving rewrites.
pub fn iv_random_mismatches(count: usize, seed: u64) -> (usize, usize) {
    let ns = names(5);
    let mut rng = rng(seed);
    let mut mismatches = 0;
    let mut equal = 0;
    for k in 0..count {
        let a = random_interval(&mut rng, &ns, 6);
        let b = if k % 2 == 0 {
            rewrite_interval(&mut rng, &ns, &a)
        } else {
            random_interval(&mut rng, &ns, 6)
        };
        let oracle = dm_table(&a, &ns) == dm_table(&b, &ns);
        equal += oracle as usize;
        if iv_equal(&a, &b) != oracle {
            mismatches += 1;
        }
    }
    (mismatches, equal)
}

/// Canonicity of `face_dnf` on every face over three names with at most two
/// connectives: equal normal forms exactly when truth tables agree. Grouping
/// by table and by normal form decides all pairs at once.
pub fn face_dnf_exhaustive_mismatches() -> (usize, usize) {
    use std::collections::HashMap;
    let ns = names(3);
    let all = faces_up_to(&ns, 2);
    let mut by_table: HashMap<Vec<bool>, String> = HashMap::new();
    let mut by_dnf: HashMap<String, Vec<bool>> = HashMap::new();
    let mut mismatches = 0;
    for f in &all {
        let t = face_table(f, &ns);
        let d = format!("{:?}", face_dnf(f));
        if by_table.entry(t.clone()).or_insert_with(|| d.clone()) != &d {
            mismatches += 1;
        }
        if by_dnf.entry(d).or_insert_with(|| t.clone()) != &t {
            mismatches += 1;
        }
    }
    (mismatches, all.len())
}

/// `face_equal` and `face_entails` against truth tables, for every
/// restriction and pair of faces with at most one connective over three names.
pub fn face_relations_exhaustive_mismatches() -> (usize, usize) {
    let ns = names(3);
    let small = faces_up_to(&ns, 1);
    let tables: Vec<Vec<bool>> = small.iter().map(|f| face_table(f, &ns)).collect();
    let mut mismatches = 0;
    let mut cases = 0;
    for (r, tr) in small.iter().zip(&tables) {
        for (a, ta) in small.iter().zip(&tables) {
            let ra = table_and(tr, ta);
            cases += 1;
            if face_entails(r, a) != table_leq(tr, ta) {
                mismatches += 1;
            }
            for (b, tb) in small.iter().zip(&tables) {
                cases += 1;
                if face_equal(r, a, b) != (ra == table_and(tr, tb)) {
                    mismatches += 1;
                }
            }
        }
    }
    (mismatches, cases)
}

pub fn face_random_mismatches(count: usize, seed: u64) -> usize {
    let ns = names(5);
    let mut rng = rng(seed);
    let mut mismatches = 0;
    for _ in 0..count {
        let r = random_face(&mut rng, &ns, 3);
        let a = random_face(&mut rng, &ns, 5);
        let b = if rng.gen_bool(0.5) {
            Face::or(a.clone(), Face::and(a.clone(), random_face(&mut rng, &ns, 3)))
        } else {
            random_face(&mut rng, &ns, 5)
        };
        let (tr, ta, tb) = (face_table(&r, &ns), face_table(&a, &ns), face_table(&b, &ns));
        if face_equal(&r, &a, &b) != (table_and(&tr, &ta) == table_and(&tr, &tb)) {
            mismatches += 1;
        }
        if face_entails(&r, &a) != table_leq(&tr, &ta) {
            mismatches += 1;
        }
        if (face_dnf(&a) == face_dnf(&b)) != (ta == tb) {
            mismatches += 1;
        }
    }
    mismatches
}

/// Violations of `ψ ≤ ∀i.φ ⇔ ψ ≤ φ` for every `i`-free `ψ` over two other
/// names with at most one connective, and every `φ` over three names with at
/// most two connectives. A result mentioning `i` also counts as a violation.
pub fn forall_violations() -> (usize, usize) {
    let ns = names(3);
    let i = &ns[0];
    let psis = faces_up_to(&ns[1..], 1);
    let phis = faces_up_to(&ns, 2);
    let psi_tables: Vec<Vec<bool>> = psis.iter().map(|p| face_table(p, &ns)).collect();
    let mut violations = 0;
    let mut checked = 0;
    for phi in &phis {
        let all = forall_name(i, phi);
        if all.mentions(i) {
            violations += 1;
        }
        let (tphi, tall) = (face_table(phi, &ns), face_table(&all, &ns));
        for tpsi in &psi_tables {
            checked += 1;
            if table_leq(tpsi, &tall) != table_leq(tpsi, &tphi) {
                violations += 1;
            }
        }
    }
    (violations, checked)
}

/// `face_of_interval` preserves meets, joins and the constants on random input.
pub fn face_of_interval_violations(count: usize, seed: u64) -> usize {
    let ns = names(4);
    let mut rng = rng(seed);
    let mut bad = 0;
    for _ in 0..count {
        let r = random_interval(&mut rng, &ns, 4);
        let s = random_interval(&mut rng, &ns, 4);
        let meet = face_of_interval(&Interval::meet(r.clone(), s.clone()));
        let join = face_of_interval(&Interval::join(r.clone(), s.clone()));
        let (fr, fs) = (face_of_interval(&r), face_of_interval(&s));
        if face_dnf(&meet) != face_dnf(&Face::and(fr.clone(), fs.clone())) {
            bad += 1;
        }
        if face_dnf(&join) != face_dnf(&Face::or(fr, fs)) {
            bad += 1;
        }
    }
    bad
}
