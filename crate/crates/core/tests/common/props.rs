//! Properties of the kernel, stated over typing judgements recorded while
//! checking the corpus. Each property takes a seed that picks the judgement
//! and any random choices, and reports a counterexample as text.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;

use gctt::check::{convert, convert_types, Checker, JudgementKind};
use gctt::driver::{check_file, check_source, Loaded};
use gctt::eval::{normalize_at, normalize_dsubst, whnf};
use gctt::surface::{parse_term, pretty};
use gctt::syntax::{
    alpha_eq, app, fst, lam, later, nat, next, pair, papp, path, pi, plam, sigma, snd, subst_interval, suc, var,
    Context, DSubst, Entry, Interval, Name, Term, Tm,
};
use rand::seq::SliceRandom;
use rand::Rng;

use super::rng;

pub const POSITIVE: &[&str] = &[
    "paths.ctt",
    "later.ctt",
    "fixpoints.ctt",
    "streams.ctt",
    "guardedY.ctt",
    "zipWith_preserves_comm.ctt",
    "canonicity.ctt",
];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn load(file: &str) -> Loaded {
    check_file(&corpus_dir().join(file)).unwrap_or_else(|f| panic!("{}", f.diagnostic().render()))
}

#[derive(Clone)]
pub struct Judged {
    pub ctx: Context,
    pub term: Tm,
    pub ty: Tm,
}

pub struct Pool {
    pub all: Vec<Judged>,
    /// Judgements in contexts that bind interval names.
    pub with_intervals: Vec<Judged>,
    /// Closed judgements grouped by the normal form of their type, each
    /// group extended with convertible variants of its members.
    pub buckets: Vec<Vec<Judged>>,
    /// Terms of the form `next ξ t` or `▷ξ A`.
    pub delayed: Vec<Judged>,
}

fn interval_names(ctx: &Context) -> Vec<Name> {
    ctx.entries()
        .iter()
        .filter_map(|e| match e {
            Entry::Interval(i) => Some(i.clone()),
            _ => None,
        })
        .collect()
}

fn record(loaded: &Loaded, out: &mut Vec<Judged>) {
    let ctx = loaded.context();
    let mut checker = Checker::recording();
    for d in &loaded.module.decls {
        if let Some(body) = d.body() {
            checker.check(&ctx, body, d.ty()).expect("corpus declarations check");
        }
    }
    for j in checker.take_judgements() {
        if matches!(j.kind, JudgementKind::Check | JudgementKind::Infer) && j.subjects.len() == 2 {
            out.push(Judged {
                ctx: j.ctx,
                term: j.subjects[0].clone(),
                ty: j.subjects[1].clone(),
            });
        }
    }
}

// A module of delayed substitutions that the corpus files do not exercise
// on their own: nested `next`, shadowing and unused bindings.
const DELAYED_SRC: &str = "module delayed where
postulate a : |> N
postulate b : |> N
postulate f : N -> N -> N
postulate P : N -> U
postulate p : |> [x <- a] P x
";

fn random_delayed(rng: &mut impl Rng) -> String {
    let sources = ["a", "b", "next 3", "next [z <- a] f z z", "next [z <- b, w <- a] f w 1"];
    let n = rng.gen_range(0..4);
    let names: Vec<String> = (0..n).map(|k| ["x", "y", "u", "x"][k].to_string()).collect();
    let binds: Vec<String> = names
        .iter()
        .map(|x| format!("{x} <- {}", sources.choose(rng).expect("nonempty")))
        .collect();
    let mut atoms: Vec<String> = names.clone();
    atoms.push("2".into());
    let body = match rng.gen_range(0..3) {
        0 => atoms.choose(rng).expect("nonempty").clone(),
        1 => format!("f {} {}", atoms.choose(rng).expect("nonempty"), atoms.choose(rng).expect("nonempty")),
        _ => format!("suc {}", atoms.choose(rng).expect("nonempty")),
    };
    if rng.gen_bool(0.3) {
        format!("|> [{}] P ({body})", binds.join(", "))
    } else {
        format!("next [{}] {body}", binds.join(", "))
    }
}

fn build() -> Pool {
    let mut all = Vec::new();
    for file in POSITIVE {
        record(&load(file), &mut all);
    }
    let mut seen = std::collections::HashSet::new();
    all.retain(|j| seen.insert(format!("{} |- {} : {}", j.ctx.render(), pretty::term(&j.term), pretty::term(&j.ty))));

    let playground = check_source(DELAYED_SRC).unwrap_or_else(|f| panic!("{}", f.diagnostic().render()));
    let pctx = playground.context();
    let mut r = rng(99);
    let mut extra = Vec::new();
    while extra.len() < 200 {
        let src = random_delayed(&mut r);
        let t = parse_term(&src).expect("generated terms parse");
        if let Ok(ty) = gctt::check::infer(&pctx, &t) {
            extra.push(Judged {
                ctx: pctx.clone(),
                term: t,
                ty,
            });
        }
    }

    let delayed: Vec<Judged> = all
        .iter()
        .filter(|j| matches!(&*j.term, Term::Next(..) | Term::Later(..)))
        .cloned()
        .chain(extra)
        .collect();
    let with_intervals: Vec<Judged> = all.iter().filter(|j| !interval_names(&j.ctx).is_empty()).cloned().collect();

    let mut groups: BTreeMap<String, Vec<Judged>> = BTreeMap::new();
    for j in all.iter().filter(|j| j.ctx.entries().is_empty()) {
        let key = pretty::term(&normalize_at(&j.ctx, &j.ty, &gctt::syntax::univ()));
        let group = groups.entry(key).or_default();
        for v in variants(j) {
            group.push(Judged {
                ctx: j.ctx.clone(),
                term: v,
                ty: j.ty.clone(),
            });
        }
    }
    let buckets = groups.into_values().filter(|g| g.len() >= 3).collect();

    Pool {
        all,
        with_intervals,
        buckets,
        delayed,
    }
}

pub fn pool() -> &'static Pool {
    static POOL: OnceLock<Pool> = OnceLock::new();
    POOL.get_or_init(build)
}

fn fresh(stem: &str) -> Name {
    Name::new(stem).fresh()
}

/// One η-expansion of `t` at its type, or a β-redex around it.
pub fn eta(ctx: &Context, t: &Tm, ty: &Tm) -> Tm {
    match &*whnf(ctx, ty) {
        Term::Pi(..) => {
            let y = fresh("y");
            lam(y.clone(), app(t.clone(), var(y)))
        }
        Term::Sigma(..) => pair(fst(t.clone()), snd(t.clone())),
        Term::Path(..) => {
            let k = fresh("k");
            plam(k.clone(), papp(t.clone(), Interval::Name(k)))
        }
        Term::Later(xi, _) if xi.is_empty() => {
            let y = fresh("y");
            next(DSubst(vec![(y.clone(), t.clone())]), var(y))
        }
        _ => {
            let y = fresh("y");
            app(std::sync::Arc::new(Term::Lam(y.clone(), Some(ty.clone()), var(y))), t.clone())
        }
    }
}

/// Terms convertible with `j.term` by construction.
pub fn variants(j: &Judged) -> Vec<Tm> {
    vec![
        j.term.clone(),
        whnf(&j.ctx, &j.term),
        normalize_at(&j.ctx, &j.term, &j.ty),
        eta(&j.ctx, &j.term, &j.ty),
    ]
}

fn show(ctx: &Context, t: &Tm) -> String {
    let ctx_text = ctx.render();
    if ctx_text.is_empty() {
        pretty::term(t)
    } else {
        format!("{} |- {}", ctx_text, pretty::term(t))
    }
}

fn pick<'a, T>(r: &mut impl Rng, xs: &'a [T]) -> &'a T {
    xs.choose(r).expect("nonempty pool")
}

pub fn reflexive_and_variants(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let j = pick(&mut r, &pool().all);
    let vs = variants(j);
    let a = pick(&mut r, &vs);
    let b = pick(&mut r, &vs);
    if !convert(&j.ctx, a, a, &j.ty) {
        return Err(format!("not reflexive: {}", show(&j.ctx, a)));
    }
    if !convert(&j.ctx, a, b, &j.ty) || !convert(&j.ctx, b, a, &j.ty) {
        return Err(format!("variants differ: {} and {}", show(&j.ctx, a), pretty::term(b)));
    }
    Ok(())
}

pub fn symmetric(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let group = pick(&mut r, &pool().buckets);
    let a = pick(&mut r, group);
    let b = pick(&mut r, group);
    let ab = convert(&a.ctx, &a.term, &b.term, &a.ty);
    let ba = convert(&a.ctx, &b.term, &a.term, &a.ty);
    if ab != ba {
        return Err(format!("{} vs {}: {ab} one way, {ba} the other", pretty::term(&a.term), pretty::term(&b.term)));
    }
    Ok(())
}

pub fn transitive(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let group = pick(&mut r, &pool().buckets);
    let (a, b, c) = (pick(&mut r, group), pick(&mut r, group), pick(&mut r, group));
    let (ctx, ty) = (&a.ctx, &a.ty);
    if convert(ctx, &a.term, &b.term, ty) && convert(ctx, &b.term, &c.term, ty) && !convert(ctx, &a.term, &c.term, ty) {
        return Err(format!(
            "{} = {} = {} but not the outer pair",
            pretty::term(&a.term),
            pretty::term(&b.term),
            pretty::term(&c.term)
        ));
    }
    Ok(())
}

pub fn congruence(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let j = pick(&mut r, &pool().all);
    let (ctx, ty) = (&j.ctx, &j.ty);
    let vs = variants(j);
    let (t, u) = (pick(&mut r, &vs).clone(), pick(&mut r, &vs).clone());
    let head = whnf(ctx, ty);
    let mut cases: Vec<(Tm, Tm, Tm)> = Vec::new();
    let z = fresh("z");
    cases.push((
        pair(t.clone(), t.clone()),
        pair(u.clone(), t.clone()),
        sigma(fresh("w"), ty.clone(), ty.clone()),
    ));
    cases.push((
        std::sync::Arc::new(Term::Lam(z.clone(), Some(nat()), t.clone())),
        std::sync::Arc::new(Term::Lam(z.clone(), Some(nat()), u.clone())),
        pi(z, nat(), ty.clone()),
    ));
    let k = fresh("k");
    cases.push((
        plam(k.clone(), t.clone()),
        plam(k, u.clone()),
        path(ty.clone(), t.clone(), t.clone()),
    ));
    cases.push((
        next(DSubst::empty(), t.clone()),
        next(DSubst::empty(), u.clone()),
        later(DSubst::empty(), ty.clone()),
    ));
    match &*head {
        Term::Path(a, _, _) => {
            let mut ends = vec![Interval::Zero, Interval::One];
            ends.extend(interval_names(ctx).into_iter().map(Interval::Name));
            let e = pick(&mut r, &ends).clone();
            cases.push((papp(t.clone(), e.clone()), papp(u.clone(), e), a.clone()));
        }
        Term::Sigma(x, a, b) => {
            cases.push((fst(t.clone()), fst(u.clone()), a.clone()));
            let b = gctt::syntax::subst_term(b, x, &fst(t.clone()));
            cases.push((snd(t.clone()), snd(u.clone()), b));
        }
        Term::Nat => cases.push((suc(t.clone()), suc(u.clone()), nat())),
        Term::Univ => {
            cases.push((
                later(DSubst::empty(), t.clone()),
                later(DSubst::empty(), u.clone()),
                gctt::syntax::univ(),
            ));
            cases.push((
                pi(fresh("v"), t.clone(), nat()),
                pi(fresh("v"), u.clone(), nat()),
                gctt::syntax::univ(),
            ));
        }
        _ => {}
    }
    let (lhs, rhs, cty) = pick(&mut r, &cases);
    if !convert(ctx, lhs, rhs, cty) {
        return Err(format!("congruence fails: {} vs {}", show(ctx, lhs), pretty::term(rhs)));
    }
    Ok(())
}

pub fn whnf_idempotent(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let j = pick(&mut r, &pool().all);
    let w = whnf(&j.ctx, &j.term);
    if !alpha_eq(&whnf(&j.ctx, &w), &w) {
        return Err(format!("whnf is not idempotent on {}", show(&j.ctx, &j.term)));
    }
    let text = pretty::term(&w);
    let reparsed = parse_term(&text).map_err(|e| format!("rendering `{text}` does not parse: {e:?}"))?;
    if !alpha_eq(&whnf(&j.ctx, &reparsed), &w) {
        return Err(format!("whnf of the rendering `{text}` differs"));
    }
    if !alpha_eq(&whnf(&j.ctx, &j.term), &w) {
        return Err(format!("whnf is not deterministic on {}", show(&j.ctx, &j.term)));
    }
    Ok(())
}

pub fn interval_stable(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let j = pick(&mut r, &pool().with_intervals);
    let names = interval_names(&j.ctx);
    let i = pick(&mut r, &names).clone();
    let others: Vec<Name> = names.iter().filter(|n| **n != i).cloned().collect();
    let atom = |r: &mut rand_chacha::ChaCha8Rng| -> Interval {
        match r.gen_range(0..4) {
            0 => Interval::Zero,
            1 => Interval::One,
            _ if others.is_empty() => Interval::Zero,
            _ => Interval::Name(pick(r, &others).clone()),
        }
    };
    let s = match r.gen_range(0..4) {
        0 => Interval::neg(atom(&mut r)),
        1 => Interval::meet(atom(&mut r), atom(&mut r)),
        2 => Interval::join(atom(&mut r), Interval::neg(atom(&mut r))),
        _ => atom(&mut r),
    };
    let w = whnf(&j.ctx, &j.term);
    for ctx2 in j.ctx.subst_interval(&i, &s) {
        let lhs = whnf(&ctx2, &subst_interval(&j.term, &i, &s));
        let rhs = subst_interval(&w, &i, &s);
        let ty = subst_interval(&j.ty, &i, &s);
        if !convert(&ctx2, &lhs, &rhs, &ty) {
            return Err(format!(
                "substituting {} for {i} in {}: {} vs {}",
                pretty::interval(&s),
                show(&j.ctx, &j.term),
                pretty::term(&lhs),
                pretty::term(&rhs)
            ));
        }
    }
    Ok(())
}

fn rebuild(t: &Tm, xi: DSubst, body: Tm) -> Tm {
    match &**t {
        Term::Later(..) => later(xi, body),
        _ => next(xi, body),
    }
}

pub fn dsubst_normal(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let j = pick(&mut r, &pool().delayed);
    let (xi, body) = match &*j.term {
        Term::Later(xi, b) | Term::Next(xi, b) => (xi, b),
        _ => unreachable!("the pool holds delayed terms only"),
    };
    let (xi1, b1) = normalize_dsubst(&j.ctx, xi, body);
    let (xi2, b2) = normalize_dsubst(&j.ctx, &xi1, &b1);
    let once = rebuild(&j.term, xi1, b1);
    let twice = rebuild(&j.term, xi2, b2);
    if !alpha_eq(&once, &twice) {
        return Err(format!(
            "not idempotent on {}: {} then {}",
            show(&j.ctx, &j.term),
            pretty::term(&once),
            pretty::term(&twice)
        ));
    }
    let same = match &*j.term {
        Term::Later(..) => convert_types(&j.ctx, &j.term, &once),
        _ => convert(&j.ctx, &j.term, &once, &j.ty),
    };
    if !same {
        return Err(format!("{} is not convertible with its normal form {}", show(&j.ctx, &j.term), pretty::term(&once)));
    }
    Ok(())
}

/// For every definition `x : A = t`, the rendered weak-head and full normal
/// forms of `t` parse and check at `A`.
pub fn subject_reduction_failures() -> Vec<String> {
    let mut out = Vec::new();
    for file in POSITIVE {
        let loaded = load(file);
        let ctx = loaded.context();
        let globals: Vec<Name> = loaded.globals.iter().map(|(n, _)| n.clone()).collect();
        for d in &loaded.module.decls {
            let Some(body) = d.body() else { continue };
            for (how, t) in [("whnf", whnf(&ctx, body)), ("nf", normalize_at(&ctx, body, d.ty()))] {
                let text = pretty::term_avoiding(&t, globals.iter().cloned());
                match parse_term(&text) {
                    Err(e) => out.push(format!("{file}: {} {how} does not parse: {e:?}", d.name)),
                    Ok(t) => {
                        if let Err(e) = gctt::check::check(&ctx, &t, d.ty()) {
                            out.push(format!("{file}: {} {how} `{text}` does not check: {e}", d.name));
                        }
                    }
                }
            }
        }
    }
    out
}
