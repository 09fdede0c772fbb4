//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use hoterm::criteria::Lpo;
use hoterm::format::Hrs;
use hoterm::graph::cyclic_components;
use hoterm::pfp::safe_subterms;
use hoterm::rewrite::Rewriter;
use hoterm::sdp::candidates;
use hoterm::term::{
    apply_subst, normalize, normalize_checked, subterms, Atom, Preterm, Signature, Substitution,
    Term,
};
use hoterm::types::{Name, SimpleType};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DECLS: &str = "\
basic nat list
sig 0 : nat
sig s : nat -> nat
sig nil : list
sig cons : nat -> list -> list
sig add mul : nat -> nat -> nat
sig foldl : (nat -> nat -> nat) -> nat -> list -> nat
sig map : (nat -> nat) -> list -> list
sig twice : (nat -> nat) -> nat -> nat
var F : nat -> nat -> nat
var G : nat -> nat
var X Y Z : nat
var K L : list
";

/// Symbols usable as rule heads in generated systems.
const HEADS: [&str; 5] = ["add", "mul", "foldl", "map", "twice"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The declaration block's signature with its atoms listed by kind.
pub struct Universe {
    pub hrs: Hrs,
    pub symbols: Vec<(Name, SimpleType)>,
    pub vars: Vec<(Name, SimpleType)>,
}

impl Universe {
    pub fn new() -> Universe {
        let hrs = Hrs::parse(DECLS).unwrap();
        let mut symbols = Vec::new();
        let mut vars = Vec::new();
        for line in DECLS.lines() {
            let mut words = line.split_whitespace();
            let kind = words.next();
            let names: Vec<&str> = words.take_while(|w| *w != ":").collect();
            for n in names {
                match kind {
                    Some("sig") => symbols.push((
                        Name::from(n),
                        hrs.signature().symbol_type(n).unwrap().clone(),
                    )),
                    Some("var") => {
                        vars.push((Name::from(n), hrs.signature().var_type(n).unwrap().clone()))
                    }
                    _ => {}
                }
            }
        }
        Universe { hrs, symbols, vars }
    }

    pub fn sig(&self) -> &Signature {
        self.hrs.signature()
    }

    pub fn ty(&self, name: &str) -> SimpleType {
        self.sig()
            .symbol_type(name)
            .or_else(|| self.sig().var_type(name))
            .unwrap()
            .clone()
    }
}

fn nat() -> SimpleType {
    SimpleType::basic("nat")
}

/// Random well-typed preterms, with β-redexes and η-short atoms mixed in.
pub struct PretermGen<'a> {
    pub u: &'a Universe,
    pub rng: ChaCha8Rng,
    /// Free variables the generator may use.
    pub free: Vec<(Name, SimpleType)>,
    pub redex_rate: f64,
    fresh: usize,
}

impl<'a> PretermGen<'a> {
    pub fn new(u: &'a Universe, rng: ChaCha8Rng) -> Self {
        PretermGen {
            u,
            rng,
            free: u.vars.clone(),
            redex_rate: 0.15,
            fresh: 0,
        }
    }

    pub fn closed(mut self) -> Self {
        self.free.clear();
        self
    }

    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("b{}", self.fresh)
    }

    pub fn gen(&mut self, ty: &SimpleType, fuel: usize) -> Preterm {
        let mut ctx = Vec::new();
        self.preterm(ty, &mut ctx, fuel)
    }

    fn atoms(&self, ctx: &[(String, SimpleType)]) -> Vec<(String, SimpleType)> {
        let mut out: Vec<(String, SimpleType)> = self
            .u
            .symbols
            .iter()
            .chain(self.free.iter())
            .map(|(n, t)| (n.to_string(), t.clone()))
            .collect();
        out.extend(ctx.iter().cloned());
        out
    }

    fn preterm(
        &mut self,
        ty: &SimpleType,
        ctx: &mut Vec<(String, SimpleType)>,
        fuel: usize,
    ) -> Preterm {
        if !ty.is_basic() {
            let exact: Vec<String> = self
                .atoms(ctx)
                .into_iter()
                .filter(|(_, t)| t == ty)
                .map(|(n, _)| n)
                .collect();
            if !exact.is_empty() && self.rng.gen_bool(0.3) {
                return Preterm::ident(exact.choose(&mut self.rng).unwrap());
            }
            let (domains, base) = ty.decompose();
            let names: Vec<String> = domains.iter().map(|_| self.fresh_name()).collect();
            let depth = ctx.len();
            for (n, d) in names.iter().zip(&domains) {
                ctx.push((n.clone(), (*d).clone()));
            }
            let body = self.preterm(&SimpleType::Basic(base.clone()), ctx, fuel);
            ctx.truncate(depth);
            let binders = names
                .iter()
                .map(String::as_str)
                .zip(domains.iter().map(|d| (*d).clone()))
                .collect();
            return Preterm::typed_lam(binders, body);
        }
        if fuel > 0 && self.rng.gen_bool(self.redex_rate) {
            let sigma = if self.rng.gen_bool(0.7) {
                nat()
            } else {
                SimpleType::arrow(nat(), nat())
            };
            let x = self.fresh_name();
            ctx.push((x.clone(), sigma.clone()));
            let body = self.preterm(ty, ctx, fuel - 1);
            ctx.pop();
            let arg = self.preterm(&sigma, ctx, fuel - 1);
            return Preterm::app(
                Preterm::typed_lam(vec![(x.as_str(), sigma)], body),
                vec![arg],
            );
        }
        let mut heads: Vec<(String, SimpleType)> = self
            .atoms(ctx)
            .into_iter()
            .filter(|(_, t)| t.result() == ty.result())
            .collect();
        if fuel == 0 {
            heads.retain(|(_, t)| t.is_basic());
        }
        let (name, hty) = heads.choose(&mut self.rng).unwrap().clone();
        let (domains, _) = hty.decompose();
        let domains: Vec<SimpleType> = domains.into_iter().cloned().collect();
        if domains.is_empty() {
            return Preterm::ident(&name);
        }
        let args = domains
            .iter()
            .map(|d| self.preterm(d, ctx, fuel.saturating_sub(1)))
            .collect();
        Preterm::app(Preterm::ident(&name), args)
    }

    /// A closed normal term of type `ty`.
    pub fn closed_term(u: &Universe, rng: &mut ChaCha8Rng, ty: &SimpleType, fuel: usize) -> Term {
        let mut g = PretermGen::new(u, ChaCha8Rng::seed_from_u64(rng.gen())).closed();
        normalize_checked(&g.gen(ty, fuel), u.sig(), ty).unwrap()
    }
}

/// A random linear pattern of type `ty` drawing variables from `pool`.
fn pattern(
    u: &Universe,
    rng: &mut ChaCha8Rng,
    ty: &SimpleType,
    pool: &mut Vec<&'static str>,
    depth: usize,
) -> String {
    let take = |want: &SimpleType, pool: &mut Vec<&'static str>| -> Option<&'static str> {
        let i = pool.iter().position(|v| &u.ty(v) == want)?;
        Some(pool.remove(i))
    };
    match ty.to_string().as_str() {
        "nat" => {
            let roll = rng.gen_range(0..4);
            if roll < 2 {
                if let Some(v) = take(ty, pool) {
                    return v.to_string();
                }
            }
            if roll == 2 && depth > 0 {
                return format!("s({})", pattern(u, rng, ty, pool, depth - 1));
            }
            "0".to_string()
        }
        "list" => {
            let roll = rng.gen_range(0..4);
            if roll < 2 {
                if let Some(v) = take(ty, pool) {
                    return v.to_string();
                }
            }
            if roll == 2 && depth > 0 {
                let h = pattern(u, rng, &nat(), pool, depth - 1);
                let t = pattern(u, rng, ty, pool, depth - 1);
                return format!("cons({h}, {t})");
            }
            "nil".to_string()
        }
        "nat -> nat" => match (rng.gen_range(0..3), take(ty, pool)) {
            (0 | 1, Some(g)) => format!("\\x. {g}(x)"),
            _ => "\\x. s(x)".to_string(),
        },
        "nat -> nat -> nat" => match (rng.gen_range(0..3), take(ty, pool)) {
            (0, Some(f)) => format!("\\x y. {f}(x, y)"),
            (1, Some(f)) => format!("\\x y. {f}(y, x)"),
            _ => "\\x y. add(x, y)".to_string(),
        },
        other => panic!("no pattern generator for {other}"),
    }
}

/// Text of a random pattern HRS over [`DECLS`] with `n` rules.
pub fn random_hrs_text(u: &Universe, rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut text = String::from(DECLS);
    for i in 0..n {
        let head = *HEADS.choose(rng).unwrap();
        let hty = u.ty(head);
        let (domains, base) = hty.decompose();
        let mut pool = vec!["F", "G", "X", "Y", "Z", "K", "L"];
        pool.shuffle(rng);
        let args: Vec<String> = domains
            .iter()
            .map(|d| pattern(u, rng, d, &mut pool, 2))
            .collect();
        let lhs_text = format!("{head}({})", args.join(", "));
        let lhs = u.hrs.parse_term(&lhs_text).unwrap();
        let fv = lhs.free_vars();
        let mut g = PretermGen::new(u, ChaCha8Rng::seed_from_u64(rng.gen()));
        g.free.retain(|(v, _)| fv.contains(v));
        let base_ty = SimpleType::Basic(base.clone());
        let rhs = normalize_checked(&g.gen(&base_ty, 3), u.sig(), &base_ty).unwrap();
        text.push_str(&format!("rule r{i}: {lhs} -> {rhs}\n"));
    }
    text
}

/// A first-order term over named symbols and variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Fo {
    Var(String),
    App(String, Vec<Fo>),
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fo::Var(x) => write!(f, "{x}"),
            Fo::App(g, args) if args.is_empty() => write!(f, "{g}"),
            Fo::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Fo {
    pub fn of(t: &Term) -> Fo {
        assert!(t.binders().is_empty(), "not first-order: {t}");
        let args = t.raw_args().iter().map(Fo::of).collect();
        match t.top() {
            Atom::Sym(f) => Fo::App(f.to_string(), args),
            Atom::Var(x) => Fo::Var(x.to_string()),
            Atom::Bound(_) => panic!("not first-order: {t}"),
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Fo::Var(x) => Term::apply(Atom::var(x), Vec::new(), "nat"),
            Fo::App(f, args) => {
                Term::apply(Atom::sym(f), args.iter().map(Fo::to_term).collect(), "nat")
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        match self {
            Fo::Var(x) => BTreeSet::from([x.clone()]),
            Fo::App(_, args) => args.iter().flat_map(Fo::vars).collect(),
        }
    }

    /// Every subterm, the term itself first.
    pub fn subterms(&self) -> Vec<Fo> {
        let mut out = vec![self.clone()];
        if let Fo::App(_, args) = self {
            for a in args {
                out.extend(a.subterms());
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Fo::Var(_) => 1,
            Fo::App(_, args) => 1 + args.iter().map(Fo::size).sum::<usize>(),
        }
    }

    pub fn subst(&self, theta: &BTreeMap<String, Fo>) -> Fo {
        match self {
            Fo::Var(x) => theta.get(x).cloned().unwrap_or_else(|| self.clone()),
            Fo::App(f, args) => Fo::App(f.clone(), args.iter().map(|a| a.subst(theta)).collect()),
        }
    }
}

/// Textbook lexicographic path order; `prec` is highest first.
pub fn lpo_oracle(prec: &[String], s: &Fo, t: &Fo) -> bool {
    let rank = |f: &str| prec.iter().position(|g| g == f);
    match (s, t) {
        (Fo::Var(_), _) => false,
        (_, Fo::Var(x)) => s != t && s.vars().contains(x),
        (Fo::App(f, ss), Fo::App(g, ts)) => {
            if ss.iter().any(|si| si == t || lpo_oracle(prec, si, t)) {
                return true;
            }
            let all = ts.iter().all(|tj| lpo_oracle(prec, s, tj));
            if f == g {
                let first_diff = ss.iter().zip(ts).find(|(a, b)| a != b);
                all && matches!(first_diff, Some((a, b)) if lpo_oracle(prec, a, b))
            } else {
                let above = matches!((rank(f), rank(g)), (Some(a), Some(b)) if a < b);
                all && above
            }
        }
    }
}

pub const FO_SYMBOLS: [(&str, usize); 6] = [
    ("0", 0),
    ("s", 1),
    ("g", 1),
    ("add", 2),
    ("mul", 2),
    ("f", 3),
];
pub const FO_VARS: [&str; 3] = ["X", "Y", "Z"];

/// A random first-order term with at most `budget` nodes.
pub fn random_fo(rng: &mut ChaCha8Rng, budget: usize) -> Fo {
    if budget <= 1 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            Fo::Var(FO_VARS.choose(rng).unwrap().to_string())
        } else {
            Fo::App("0".to_string(), Vec::new())
        };
    }
    let fits: Vec<(&str, usize)> = FO_SYMBOLS
        .iter()
        .copied()
        .filter(|(_, n)| *n >= 1 && *n < budget)
        .collect();
    let (f, n) = *fits.choose(rng).unwrap();
    let mut left = budget - 1;
    let mut args = Vec::new();
    for i in 0..n {
        let share = if i + 1 == n {
            left
        } else {
            rng.gen_range(1..=left - (n - 1 - i))
        };
        let a = random_fo(rng, share);
        left -= a.size().min(left);
        left = left.max(n - 1 - i);
        args.push(a);
    }
    Fo::App(f.to_string(), args)
}

pub fn random_precedence(rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut prec: Vec<String> = FO_SYMBOLS.iter().map(|(f, _)| f.to_string()).collect();
    prec.shuffle(rng);
    let keep = rng.gen_range(0..=prec.len());
    prec.truncate(keep);
    prec
}

/// Maximal strongly connected subsets with an internal arc, by subset enumeration.
pub fn brute_force_components(n: usize, arcs: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
    let reach_within = |set: &[usize], from: usize, to: usize| -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &w in set {
                if arcs.contains(&(v, w)) {
                    if w == to {
                        return true;
                    }
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        false
    };
    let mut good: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if set
            .iter()
            .all(|&a| set.iter().all(|&b| reach_within(&set, a, b)))
        {
            good.push(set);
        }
    }
    let maximal: Vec<Vec<usize>> = good
        .iter()
        .filter(|s| {
            !good
                .iter()
                .any(|t| t.len() > s.len() && s.iter().all(|x| t.contains(x)))
        })
        .cloned()
        .collect();
    let mut out = maximal;
    out.sort();
    out
}

/// Dependency pairs of a first-order system: `l# -> t#` for each defined-rooted
/// subterm `t` of `r` that is not a proper subterm of `l`.
pub fn first_order_dps(rules: &[(Fo, Fo)]) -> BTreeSet<String> {
    let defined: BTreeSet<String> = rules
        .iter()
        .filter_map(|(l, _)| match l {
            Fo::App(f, _) => Some(f.clone()),
            Fo::Var(_) => None,
        })
        .collect();
    let mark = |t: &Fo| match t {
        Fo::App(f, a) => Fo::App(format!("{f}#"), a.clone()),
        v => v.clone(),
    };
    let mut out = BTreeSet::new();
    for (l, r) in rules {
        let proper: Vec<Fo> = l.subterms().into_iter().skip(1).collect();
        for t in r.subterms() {
            if let Fo::App(g, _) = &t {
                if defined.contains(g) && !proper.contains(&t) {
                    out.insert(format!("{} -> {}", mark(l), mark(&t)));
                }
            }
        }
    }
    out
}

/// Runs `property` on `cases` seeds from a fixed-seed runner.
pub fn run_property(
    cases: u32,
    property: fn(u64) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&any::<u64>(), property).map_err(|e| match e {
        TestError::Fail(reason, seed) => format!("seed {seed}: {reason}"),
        TestError::Abort(reason) => format!("aborted: {reason}"),
    })
}

// Properties. Each takes a seed and drives a ChaCha generator from it.

pub fn prop_normalization_idempotent(seed: u64) -> Result<(), TestCaseError> {
    let u = Universe::new();
    let mut r = rng(seed);
    let ty = [
        nat(),
        SimpleType::basic("list"),
        SimpleType::arrow(nat(), nat()),
    ]
    .choose(&mut r)
    .unwrap()
    .clone();
    let mut g = PretermGen::new(&u, r);
    let p = g.gen(&ty, 4);
    let t = normalize(&p, u.sig()).map_err(|e| TestCaseError::fail(format!("{p}: {e}")))?;
    prop_assert_eq!(t.ty(), &ty);
    let again =
        normalize(&t.to_preterm(), u.sig()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&again, &t, "preterm {}", p);
    Ok(())
}

pub fn prop_term_print_roundtrip(seed: u64) -> Result<(), TestCaseError> {
    let u = Universe::new();
    let mut g = PretermGen::new(&u, rng(seed));
    let t = normalize(&g.gen(&nat(), 4), u.sig()).unwrap();
    let back = u
        .hrs
        .parse_term(&t.to_string())
        .map_err(|e| TestCaseError::fail(format!("{t}: {e}")))?;
    prop_assert_eq!(back, t);
    Ok(())
}

pub fn prop_hrs_print_roundtrip(seed: u64) -> Result<(), TestCaseError> {
    let u = Universe::new();
    let mut r = rng(seed);
    let n = r.gen_range(0..5);
    let text = random_hrs_text(&u, &mut r, n);
    let h1 = Hrs::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    let printed = h1.print();
    let h2 = Hrs::parse(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
    prop_assert_eq!(&h2, &h1);
    prop_assert_eq!(h2.print(), printed);
    Ok(())
}

/// `s -> t` implies `sθ↓ ->* tθ↓` within a bounded search.
pub fn prop_substitution_closure(seed: u64) -> Result<(), TestCaseError> {
    let u = Universe::new();
    let mut r = rng(seed);
    let text = random_hrs_text(&u, &mut r, 3);
    let hrs = Hrs::parse(&text).unwrap();
    let rw = Rewriter::new(&hrs).unwrap();
    let rule = hrs.rules().choose(&mut r).unwrap();

    // an instance of the lhs, with some rule variables left free
    let mut sigma = Substitution::new();
    for (v, ty) in rule.lhs().var_types() {
        if r.gen_bool(0.6) {
            sigma
                .insert(v, PretermGen::closed_term(&u, &mut r, &ty, 2))
                .unwrap();
        }
    }
    let redex = apply_subst(rule.lhs(), &sigma).unwrap();
    let s = if redex.base().as_ref() == "nat" && r.gen_bool(0.5) {
        let ctx = u.hrs.parse_term("add(s(0), X)").unwrap();
        Term::apply(
            Atom::sym("add"),
            vec![redex, ctx.raw_args()[1].clone()],
            "nat",
        )
    } else {
        redex
    };
    let steps = rw.rewrite_step(&s);
    prop_assert!(!steps.is_empty(), "no redex in {}", s);
    let step = steps.choose(&mut r).unwrap();

    let mut theta = Substitution::new();
    for (v, ty) in s.var_types() {
        theta
            .insert(v, PretermGen::closed_term(&u, &mut r, &ty, 2))
            .unwrap();
    }
    let s_theta = apply_subst(&s, &theta).unwrap();
    let t_theta = apply_subst(&step.term, &theta).unwrap();
    prop_assert!(
        rw.reaches(&s_theta, &t_theta, 20),
        "{} -> {} but not {} ->* {}",
        s,
        step.term,
        s_theta,
        t_theta
    );
    Ok(())
}

/// Safe sets consist of arguments of `l` and basic subterms of `l` over `FV(l)`.
pub fn prop_safe_within_sub(seed: u64) -> Result<(), TestCaseError> {
    let u = Universe::new();
    let mut r = rng(seed);
    let text = random_hrs_text(&u, &mut r, 3);
    let hrs = Hrs::parse(&text).unwrap();
    for rule in hrs.rules() {
        let l = rule.lhs();
        let fv = l.free_vars();
        let sub = subterms(l);
        let args = l.args();
        let safe = safe_subterms(rule);
        for s in &safe.safe {
            if args.contains(s) {
                continue;
            }
            prop_assert!(
                safe.from_basic.contains(s),
                "{} is neither an argument nor from safe_B",
                s
            );
        }
        for s in &safe.from_basic {
            prop_assert!(s.ty().is_basic(), "{} is not basic", s);
            prop_assert!(s.free_vars().is_subset(&fv), "{} escapes FV(l)", s);
            prop_assert!(sub.contains(s), "{} not in Sub({})", s, l);
        }
        for a in &args {
            prop_assert!(sub.contains(a));
        }
    }
    Ok(())
}

pub fn prop_candidates_free_vars(seed: u64) -> Result<(), TestCaseError> {
    let u = Universe::new();
    let mut g = PretermGen::new(&u, rng(seed));
    let t = normalize(&g.gen(&nat(), 4), u.sig()).unwrap();
    let fv = t.free_vars();
    let cands = candidates(&t);
    prop_assert!(cands.contains(&t));
    for c in &cands {
        prop_assert!(c.free_vars().is_subset(&fv), "candidate {} of {}", c, t);
    }
    Ok(())
}

/// Irreflexivity, transitivity, subterm property, substitution closure and
/// agreement with [`lpo_oracle`].
pub fn prop_path_order_laws(seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let prec = random_precedence(&mut r);
    let lpo = Lpo::new(prec.iter().map(|f| Name::from(f.as_str())).collect());
    let gt = |a: &Fo, b: &Fo| lpo.gt(&a.to_term(), &b.to_term());

    let a = random_fo(&mut r, 12);
    let subs = a.subterms();
    let b = if r.gen_bool(0.5) {
        subs.choose(&mut r).unwrap().clone()
    } else {
        random_fo(&mut r, 12)
    };
    let c = if r.gen_bool(0.5) {
        b.subterms().choose(&mut r).unwrap().clone()
    } else {
        random_fo(&mut r, 12)
    };

    prop_assert!(!gt(&a, &a), "irreflexivity fails on {}", a);
    for (x, y) in [(&a, &b), (&b, &c), (&a, &c), (&b, &a)] {
        prop_assert_eq!(gt(x, y), lpo_oracle(&prec, x, y), "{} vs {}", x, y);
    }
    for s in subs.iter().skip(1) {
        if s != &a {
            prop_assert!(gt(&a, s), "subterm property fails: {} vs {}", a, s);
        }
    }
    if gt(&a, &b) && gt(&b, &c) {
        prop_assert!(gt(&a, &c), "transitivity fails: {} > {} > {}", a, b, c);
    }
    if gt(&a, &b) {
        let theta: BTreeMap<String, Fo> = FO_VARS
            .iter()
            .map(|x| (x.to_string(), random_fo(&mut r, 4)))
            .collect();
        prop_assert!(
            gt(&a.subst(&theta), &b.subst(&theta)),
            "substitution closure fails on {} > {}",
            a,
            b
        );
    }
    Ok(())
}

pub fn prop_scc_brute_force(seed: u64) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=8);
    let density = r.gen_range(0.05..0.4);
    let arcs: BTreeSet<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|_| r.gen_bool(density))
        .collect();
    let got = cyclic_components(n, &arcs);
    prop_assert_eq!(&got, &brute_force_components(n, &arcs), "arcs {:?}", arcs);
    // each arc on a cycle lies inside exactly one component
    for &(a, b) in &arcs {
        let on_cycle = a == b
            || brute_force_components(n, &arcs)
                .iter()
                .any(|c| c.contains(&a) && c.contains(&b));
        let hits = got
            .iter()
            .filter(|c| c.contains(&a) && c.contains(&b))
            .count();
        prop_assert_eq!(hits, usize::from(on_cycle));
    }
    Ok(())
}
