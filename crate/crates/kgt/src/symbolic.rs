//! Formal generator algebra for the label maps induced by a cocycle chain.
//!
//! Generators are path symbols: `S(lambda)` over the base graph, `S_n(mu)`
//! over a level's skew product, and crossed labels `SG_n(lambda, g)`. Up to
//! two trailing group legs `u_n(g)` record tensor factors. Maps send
//! generators to integer formal sums and extend linearly; identities are
//! checked by evaluating both routes on every generator up to a degree
//! bound and comparing canonical forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::rc::Rc;

use serde::Serialize;

use crate::chain::CocycleChain;
use crate::cover::{quotient_sequence, CoveringSequence};
use crate::degree::Degree;
use crate::error::{KgtError, Result};
use crate::group::Gel;
use crate::kgraph::Path;
use crate::skew::SkewGraph;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    /// s_lambda for a base-graph path.
    Base(Path),
    /// s_mu for a path of the level-n skew product.
    Level(usize, Path),
    /// The crossed label (s_lambda, g) with g in G_n.
    Crossed(usize, Path, Gel),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Leg {
    pub level: usize,
    pub elem: Gel,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub symbol: Symbol,
    pub legs: Vec<Leg>,
}

impl Term {
    pub fn base(path: Path) -> Term {
        Term {
            symbol: Symbol::Base(path),
            legs: Vec::new(),
        }
    }

    pub fn level(n: usize, path: Path) -> Term {
        Term {
            symbol: Symbol::Level(n, path),
            legs: Vec::new(),
        }
    }

    pub fn crossed(n: usize, path: Path, g: Gel) -> Term {
        Term {
            symbol: Symbol::Crossed(n, path, g),
            legs: Vec::new(),
        }
    }
}

/// Finite integer combination of terms in canonical (sorted, zero-free) form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum(BTreeMap<Term, i64>);

impl FormalSum {
    pub fn zero() -> FormalSum {
        FormalSum::default()
    }

    pub fn singleton(term: Term) -> FormalSum {
        let mut m = BTreeMap::new();
        m.insert(term, 1);
        FormalSum(m)
    }

    pub fn add(&mut self, term: Term, coeff: i64) {
        let entry = self.0.entry(term).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            let dead: Vec<Term> = self
                .0
                .iter()
                .filter(|(_, &c)| c == 0)
                .map(|(t, _)| t.clone())
                .collect();
            for t in dead {
                self.0.remove(&t);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, i64)> {
        self.0.iter().map(|(t, &c)| (t, c))
    }

    pub fn support_size(&self) -> usize {
        self.0.len()
    }
}

type MapFn = Rc<dyn Fn(&Term) -> Result<FormalSum>>;

/// A linear map on generators.
#[derive(Clone)]
pub struct GenMap {
    f: MapFn,
}

impl GenMap {
    pub fn new(f: impl Fn(&Term) -> Result<FormalSum> + 'static) -> GenMap {
        GenMap { f: Rc::new(f) }
    }

    pub fn identity() -> GenMap {
        GenMap::new(|t| Ok(FormalSum::singleton(t.clone())))
    }

    pub fn apply(&self, term: &Term) -> Result<FormalSum> {
        (self.f)(term)
    }

    pub fn apply_sum(&self, sum: &FormalSum) -> Result<FormalSum> {
        let mut out = FormalSum::zero();
        for (term, coeff) in sum.terms() {
            for (img, c) in self.apply(term)?.terms() {
                out.add(img.clone(), coeff * c);
            }
        }
        Ok(out)
    }

    /// Apply `self`, then `next`, extended linearly.
    pub fn then(&self, next: &GenMap) -> GenMap {
        let first = self.clone();
        let second = next.clone();
        GenMap::new(move |t| second.apply_sum(&first.apply(t)?))
    }
}

/// Chain data with every level's skew product and the quotient coverings.
pub struct SymbolicContext {
    pub cc: CocycleChain,
    pub skews: Vec<SkewGraph>,
    pub seq: CoveringSequence,
}

impl SymbolicContext {
    pub fn new(cc: &CocycleChain) -> Result<SymbolicContext> {
        let (skews, seq) = quotient_sequence(cc, cc.len())?;
        Ok(SymbolicContext {
            cc: cc.clone(),
            skews,
            seq,
        })
    }

    pub fn levels(&self) -> usize {
        self.cc.len()
    }

    pub fn term_string(&self, term: &Term) -> String {
        let mut s = String::new();
        match &term.symbol {
            Symbol::Base(p) => {
                let d = self.cc.graph().describe(p);
                let _ = write!(
                    s,
                    "S({})",
                    if p.is_vertex() {
                        d.range
                    } else {
                        d.edges.join(".")
                    }
                );
            }
            Symbol::Level(n, p) => {
                let d = self.seq.graph(*n).describe(p);
                let _ = write!(
                    s,
                    "S{n}({})",
                    if p.is_vertex() {
                        d.range
                    } else {
                        d.edges.join(".")
                    }
                );
            }
            Symbol::Crossed(n, p, g) => {
                let d = self.cc.graph().describe(p);
                let name = self.cc.group(*n).name(*g);
                let _ = write!(
                    s,
                    "SG{n}({}, {name})",
                    if p.is_vertex() {
                        d.range
                    } else {
                        d.edges.join(".")
                    }
                );
            }
        }
        for leg in &term.legs {
            let _ = write!(
                s,
                " * u{}({})",
                leg.level,
                self.cc.group(leg.level).name(leg.elem)
            );
        }
        s
    }

    fn sum_string(&self, sum: &FormalSum) -> String {
        if sum.support_size() == 0 {
            return "0".into();
        }
        sum.terms()
            .map(|(t, c)| {
                if c == 1 {
                    self.term_string(t)
                } else {
                    format!("{c}*{}", self.term_string(t))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The label map of level n: S(lambda) -> S(lambda) * u_n(c_n(lambda)), a
/// fresh leg ahead of any existing ones.
pub fn coaction_map(ctx: &SymbolicContext, n: usize) -> Result<GenMap> {
    if n < 1 || n > ctx.levels() {
        return Err(KgtError::IndexOutOfRange(n, ctx.levels()));
    }
    let cocycle = ctx.cc.cocycle(n).clone();
    Ok(GenMap::new(move |t| match &t.symbol {
        Symbol::Base(p) => {
            let mut out = t.clone();
            out.legs.insert(
                0,
                Leg {
                    level: n,
                    elem: cocycle.of_path(p),
                },
            );
            Ok(FormalSum::singleton(out))
        }
        _ => Err(KgtError::Internal("label map expects a base symbol".into())),
    }))
}

/// Duplicate the leading leg: u(g) -> u(g) * u(g).
pub fn comultiply_first_leg() -> GenMap {
    GenMap::new(|t| {
        let mut out = t.clone();
        if let Some(first) = out.legs.first().cloned() {
            out.legs.insert(1, first);
        }
        Ok(FormalSum::singleton(out))
    })
}

/// Push the leading leg down one level: u_{n+1}(g) -> u_n(q_n(g)).
pub fn project_first_leg(ctx: &SymbolicContext, n: usize) -> Result<GenMap> {
    if n < 1 || n + 1 > ctx.levels() {
        return Err(KgtError::IndexOutOfRange(n, ctx.levels().saturating_sub(1)));
    }
    let chain = ctx.cc.chain().clone();
    Ok(GenMap::new(move |t| {
        let mut out = t.clone();
        match out.legs.first_mut() {
            Some(leg) if leg.level == n + 1 => {
                leg.level = n;
                leg.elem = chain.step_down(n, leg.elem);
                Ok(FormalSum::singleton(out))
            }
            _ => Err(KgtError::Internal(format!(
                "expected a leading level-{} leg",
                n + 1
            ))),
        }
    }))
}

/// The fiber sum of the level-n covering: S_n(mu) -> sum of S_{n+1}(mu')
/// over the lifts of mu.
pub fn fiber_inclusion(ctx: &SymbolicContext, n: usize) -> Result<GenMap> {
    if n < 1 || n + 1 > ctx.levels() {
        return Err(KgtError::IndexOutOfRange(n, ctx.levels().saturating_sub(1)));
    }
    let dom = ctx.seq.graph(n + 1).clone();
    let cod = ctx.seq.graph(n).clone();
    let map = ctx.seq.map(n).clone();
    Ok(GenMap::new(move |t| match &t.symbol {
        Symbol::Level(level, p) if *level == n => {
            let mut out = FormalSum::zero();
            for lift in map.path_fiber(&dom, &cod, p) {
                let mut img = t.clone();
                img.symbol = Symbol::Level(n + 1, lift);
                out.add(img, 1);
            }
            Ok(out)
        }
        _ => Err(KgtError::Internal(format!(
            "fiber inclusion expects a level-{n} symbol"
        ))),
    }))
}

/// The crossed-label fiber sum: SG_n(lambda, g) -> sum over the coset of g.
pub fn crossed_fiber_inclusion(ctx: &SymbolicContext, n: usize) -> Result<GenMap> {
    if n < 1 || n + 1 > ctx.levels() {
        return Err(KgtError::IndexOutOfRange(n, ctx.levels().saturating_sub(1)));
    }
    let chain = ctx.cc.chain().clone();
    Ok(GenMap::new(move |t| match &t.symbol {
        Symbol::Crossed(level, p, g) if *level == n => {
            let mut out = FormalSum::zero();
            for lift in chain.group(n + 1).elements() {
                if chain.step_down(n, lift) == *g {
                    let mut img = t.clone();
                    img.symbol = Symbol::Crossed(n + 1, p.clone(), lift);
                    out.add(img, 1);
                }
            }
            Ok(out)
        }
        _ => Err(KgtError::Internal(format!(
            "crossed inclusion expects level {n}"
        ))),
    }))
}

/// Relabel skew-product generators as crossed labels:
/// S_n((lambda, g)) -> SG_n(lambda, g).
pub fn crossed_relabel(ctx: &SymbolicContext, n: usize) -> Result<GenMap> {
    if n < 1 || n > ctx.levels() {
        return Err(KgtError::IndexOutOfRange(n, ctx.levels()));
    }
    let skew = ctx.skews[n - 1].clone();
    let base = ctx.cc.graph().clone();
    Ok(GenMap::new(move |t| match &t.symbol {
        Symbol::Level(level, p) if *level == n => {
            let (lambda, g) = skew.project_path(&base, p);
            let mut img = t.clone();
            img.symbol = Symbol::Crossed(n, lambda, g);
            Ok(FormalSum::singleton(img))
        }
        _ => Err(KgtError::Internal(format!(
            "relabeling expects a level-{n} symbol"
        ))),
    }))
}

/// Inverse of [`crossed_relabel`].
pub fn crossed_relabel_inv(ctx: &SymbolicContext, n: usize) -> Result<GenMap> {
    if n < 1 || n > ctx.levels() {
        return Err(KgtError::IndexOutOfRange(n, ctx.levels()));
    }
    let skew = ctx.skews[n - 1].clone();
    let base = ctx.cc.graph().clone();
    let cocycle = ctx.cc.cocycle(n).clone();
    Ok(GenMap::new(move |t| match &t.symbol {
        Symbol::Crossed(level, p, g) if *level == n => {
            let mut img = t.clone();
            img.symbol = Symbol::Level(n, skew.lift_path(&base, &cocycle, p, *g));
            Ok(FormalSum::singleton(img))
        }
        _ => Err(KgtError::Internal(format!(
            "relabeling expects a level-{n} crossed symbol"
        ))),
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckFailure {
    pub generator: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub level: usize,
    pub generators: usize,
    pub pass: bool,
    pub failures: Vec<CheckFailure>,
}

/// Evaluate two maps on a generator set and compare canonical forms.
pub fn maps_agree(
    ctx: &SymbolicContext,
    name: &str,
    level: usize,
    generators: &[Term],
    lhs: &GenMap,
    rhs: &GenMap,
) -> Result<CheckReport> {
    let mut failures = Vec::new();
    for t in generators {
        let a = lhs.apply(t)?;
        let b = rhs.apply(t)?;
        if a != b {
            failures.push(CheckFailure {
                generator: ctx.term_string(t),
                lhs: ctx.sum_string(&a),
                rhs: ctx.sum_string(&b),
            });
        }
    }
    Ok(CheckReport {
        name: name.to_string(),
        level,
        generators: generators.len(),
        pass: failures.is_empty(),
        failures,
    })
}

/// Base-graph generators up to the diagonal degree bound.
pub fn base_generators(ctx: &SymbolicContext, bound: u32) -> Vec<Term> {
    let g = ctx.cc.graph();
    Degree::grid(&Degree::diagonal(g.rank(), bound))
        .into_iter()
        .flat_map(|d| g.paths_of_degree(&d, None))
        .map(Term::base)
        .collect()
}

/// Level-n skew-product generators up to the bound.
pub fn level_generators(ctx: &SymbolicContext, n: usize, bound: u32) -> Vec<Term> {
    let g = ctx.seq.graph(n);
    Degree::grid(&Degree::diagonal(g.rank(), bound))
        .into_iter()
        .flat_map(|d| g.paths_of_degree(&d, None))
        .map(|p| Term::level(n, p))
        .collect()
}

/// (delta x 1) o delta = (1 x comult) o delta on every generator.
pub fn check_coaction_identity(ctx: &SymbolicContext, n: usize, bound: u32) -> Result<CheckReport> {
    let delta = coaction_map(ctx, n)?;
    let lhs = delta.then(&delta);
    let rhs = delta.then(&comultiply_first_leg());
    maps_agree(
        ctx,
        "coaction identity",
        n,
        &base_generators(ctx, bound),
        &lhs,
        &rhs,
    )
}

/// (1 x q_n) o delta_{n+1} = delta_n on every generator.
pub fn check_projection_triangle(
    ctx: &SymbolicContext,
    n: usize,
    bound: u32,
) -> Result<CheckReport> {
    let lhs = coaction_map(ctx, n + 1)?.then(&project_first_leg(ctx, n)?);
    let rhs = coaction_map(ctx, n)?;
    maps_agree(
        ctx,
        "projection triangle",
        n,
        &base_generators(ctx, bound),
        &lhs,
        &rhs,
    )
}

/// relabel_{n+1} o fiber-inclusion = crossed-fiber-inclusion o relabel_n.
pub fn check_inclusion_square(ctx: &SymbolicContext, n: usize, bound: u32) -> Result<CheckReport> {
    let lhs = fiber_inclusion(ctx, n)?.then(&crossed_relabel(ctx, n + 1)?);
    let rhs = crossed_relabel(ctx, n)?.then(&crossed_fiber_inclusion(ctx, n)?);
    maps_agree(
        ctx,
        "inclusion square",
        n,
        &level_generators(ctx, n, bound),
        &lhs,
        &rhs,
    )
}

/// Every identity at every admissible level.
pub fn run_all_checks(ctx: &SymbolicContext, bound: u32) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in 1..=ctx.levels() {
        out.push(check_coaction_identity(ctx, n, bound)?);
    }
    for n in 1..ctx.levels() {
        out.push(check_projection_triangle(ctx, n, bound)?);
        out.push(check_inclusion_square(ctx, n, bound)?);
    }
    Ok(out)
}
