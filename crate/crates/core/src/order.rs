//! Rewriting of exotic forests into forests without connecting lianas, and
//! the order conditions assembled from it.
//!
//! Two moves are available. An edge-liana inversion (ELI) takes a connecting
//! liana, detaches one end from its parent `q`, reattaches that end to `q`'s
//! parent (or makes it a root), and inserts `q` with its remaining subtree
//! above the other end. Integration by parts (IBP) takes a liana whose end
//! `g` is a root: `g` reattaches below every black vertex with coefficient
//! -1, plus one term with coefficient -2 in which `g` is removed and its
//! partner is recolored black.
//!
//! The rewriting drives the minimal connecting liana: its shallow end under
//! the default direction, the opposite end (pushed until it roots) under the
//! alternate direction.

use crate::error::{ForestError, Result};
use crate::forest::{canonicalize_parts, sigma, Deco, Forest, Size};
use crate::rational::{q_zero, qi, Q};
use crate::series::FormalSum;
use crate::weights::{
    elementary_weight, render_combination, symbol_value, weight_symbol, Tableau, WeightSymbol,
};
use num::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliDirection {
    /// Move the minimal liana's shallow end one step towards the root.
    Shallow,
    /// Drive the opposite end of the minimal liana until it becomes a root.
    Deep,
}

impl Default for EliDirection {
    fn default() -> Self {
        EliDirection::Shallow
    }
}

/// A connecting liana: ends in different components. `v1` is the end with
/// the shortest path to its root, ties broken by vertex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectingLiana {
    pub label: u32,
    pub v1: usize,
    pub v2: usize,
}

/// Labels of all connecting lianas.
pub fn connecting_lianas(f: &Forest) -> Vec<ConnectingLiana> {
    let ids = f.component_ids();
    let mut out = Vec::new();
    for label in f.liana_labels() {
        let (a, b) = f.liana_ends(label).expect("validated liana");
        if ids[a] != ids[b] {
            let ka = depth_key(f, a);
            let kb = depth_key(f, b);
            let (v1, v2) = if ka <= kb { (a, b) } else { (b, a) };
            out.push(ConnectingLiana { label, v1, v2 });
        }
    }
    out
}

/// Aroma-resident ends sort after every tree-resident end so the driven end
/// always has a genuine root path when one exists.
fn depth_key(f: &Forest, v: usize) -> (usize, usize) {
    let aroma = if f.in_aroma(v) { 1 } else { 0 };
    (aroma * 10_000 + f.depth(v), v)
}

/// The minimal connecting liana by (depth of v1, v1, v2).
pub fn minimal_connecting_liana(f: &Forest) -> Result<ConnectingLiana> {
    connecting_lianas(f)
        .into_iter()
        .min_by_key(|l| (depth_key(f, l.v1), l.v2))
        .ok_or(ForestError::NoConnectingLiana)
}

/// One edge-liana inversion moving `v1`. `v2` must be the other end of the
/// same connecting liana. Returns the canonical result.
pub fn eli_step(f: &Forest, v1: usize, v2: usize) -> Result<Forest> {
    check_liana_pair(f, v1, v2)?;
    let mut w = WForest::from_forest(f);
    w.eli(v1, v2)?;
    Ok(w.to_forest().0)
}

/// Integration by parts on a liana whose end `g` is a root. Returns the
/// signed combination of results.
pub fn ibp_step(f: &Forest, g: usize) -> Result<FormalSum> {
    let partner = f
        .liana_partner(g)
        .ok_or_else(|| ForestError::Precondition(format!("vertex {g} is not a liana end")))?;
    check_liana_pair(f, g, partner)?;
    if f.parent(g).is_some() {
        return Err(ForestError::Precondition(format!(
            "vertex {g} is not a root"
        )));
    }
    let w = WForest::from_forest(f);
    let mut out = FormalSum::zero();
    for branch in w.ibp_branches(g, partner) {
        let coeff = match branch.kind {
            BranchKind::Attach(_) => qi(-1),
            BranchKind::Blacken => qi(-2),
        };
        out.add_term(branch.forest.to_forest().0, coeff);
    }
    Ok(out)
}

fn check_liana_pair(f: &Forest, a: usize, b: usize) -> Result<()> {
    match (f.deco(a), f.deco(b)) {
        (Deco::Liana(x), Deco::Liana(y)) if x == y && a != b => {}
        _ => {
            return Err(ForestError::Precondition(format!(
                "vertices {a},{b} are not the two ends of one liana"
            )))
        }
    }
    let ids = f.component_ids();
    if ids[a] == ids[b] {
        return Err(ForestError::Precondition(
            "liana is not connecting".to_string(),
        ));
    }
    Ok(())
}

/// Working forest with stable vertex identities; the labeling that
/// transformation chains act on.
#[derive(Debug, Clone)]
struct WForest {
    parents: Vec<Option<usize>>,
    decos: Vec<Deco>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BranchKind {
    Attach(usize),
    Blacken,
}

struct Branch {
    forest: WForest,
    kind: BranchKind,
}

impl WForest {
    fn from_forest(f: &Forest) -> WForest {
        WForest {
            parents: f.vertices().map(|v| f.parent(v)).collect(),
            decos: f.vertices().map(|v| f.deco(v)).collect(),
        }
    }

    fn to_forest(&self) -> (Forest, Vec<usize>) {
        let parents: Vec<Option<u32>> = self.parents.iter().map(|p| p.map(|v| v as u32)).collect();
        canonicalize_parts(&parents, &self.decos)
    }

    fn len(&self) -> usize {
        self.parents.len()
    }

    fn component_ids(&self) -> Vec<usize> {
        let n = self.len();
        let mut id = vec![usize::MAX; n];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = self.parents[v] {
                adj[v].push(p);
                adj[p].push(v);
            }
        }
        let mut next = 0;
        for s in 0..n {
            if id[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            id[s] = next;
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if id[u] == usize::MAX {
                        id[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        id
    }

    fn depth_key(&self, v: usize) -> (usize, usize) {
        // distance walked before hitting a root or revisiting (cycle)
        let mut seen = vec![false; self.len()];
        let mut cur = v;
        let mut d = 0;
        let mut cyclic = false;
        loop {
            if seen[cur] {
                cyclic = true;
                break;
            }
            seen[cur] = true;
            match self.parents[cur] {
                None => break,
                Some(p) => {
                    d += 1;
                    cur = p;
                }
            }
        }
        let aroma = if cyclic { 1 } else { 0 };
        // distance to the cycle rather than the walk length
        if cyclic {
            // recompute: steps until first vertex that lies on the cycle
            let mut d2 = 0;
            let mut cur = v;
            while !self.vertex_on_cycle(cur) {
                d2 += 1;
                cur = self.parents[cur].unwrap();
            }
            (aroma * 10_000 + d2, v)
        } else {
            (aroma * 10_000 + d, v)
        }
    }

    fn vertex_on_cycle(&self, v: usize) -> bool {
        // v lies on a cycle iff walking up from parent(v) returns to v
        let mut cur = match self.parents[v] {
            None => return false,
            Some(p) => p,
        };
        for _ in 0..=self.len() {
            if cur == v {
                return true;
            }
            match self.parents[cur] {
                None => return false,
                Some(p) => cur = p,
            }
        }
        false
    }

    fn connecting(&self) -> Vec<(u32, usize, usize)> {
        let ids = self.component_ids();
        let mut ends: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for v in 0..self.len() {
            if let Deco::Liana(k) = self.decos[v] {
                ends.entry(k).or_default().push(v);
            }
        }
        let mut out = Vec::new();
        for (k, vs) in ends {
            if let [a, b] = vs.as_slice() {
                if ids[*a] != ids[*b] {
                    let (v1, v2) = if self.depth_key(*a) <= self.depth_key(*b) {
                        (*a, *b)
                    } else {
                        (*b, *a)
                    };
                    out.push((k, v1, v2));
                }
            }
        }
        out
    }

    fn minimal_connecting(&self) -> Option<(u32, usize, usize)> {
        self.connecting()
            .into_iter()
            .min_by_key(|&(_, v1, v2)| (self.depth_key(v1), v2))
    }

    /// Moves `m` one step towards its root; `o` is the liana's other end.
    fn eli(&mut self, m: usize, o: usize) -> Result<()> {
        let q = self.parents[m].ok_or_else(|| {
            ForestError::Precondition(format!("end {m} is already a root"))
        })?;
        if self.vertex_on_cycle(q) {
            return Err(ForestError::UnsupportedTransformation(
                "liana end hangs directly on an aroma cycle".to_string(),
            ));
        }
        let r = self.parents[q];
        self.parents[m] = r;
        self.parents[q] = self.parents[o];
        self.parents[o] = Some(q);
        Ok(())
    }

    /// All IBP branches for liana root `g` with partner `w`.
    fn ibp_branches(&self, g: usize, w: usize) -> Vec<Branch> {
        let mut out = Vec::new();
        for v in 0..self.len() {
            if self.decos[v] == Deco::Black {
                let mut copy = self.clone();
                copy.parents[g] = Some(v);
                out.push(Branch {
                    forest: copy,
                    kind: BranchKind::Attach(v),
                });
            }
        }
        // blacken: remove g, recolor the partner
        let mut remap: Vec<Option<usize>> = Vec::with_capacity(self.len());
        let mut parents = Vec::new();
        let mut decos = Vec::new();
        let mut next = 0usize;
        for v in 0..self.len() {
            if v == g {
                remap.push(None);
            } else {
                remap.push(Some(next));
                next += 1;
            }
        }
        for v in 0..self.len() {
            if v == g {
                continue;
            }
            parents.push(self.parents[v].and_then(|p| remap[p]));
            decos.push(if v == w { Deco::Black } else { self.decos[v] });
        }
        out.push(Branch {
            forest: WForest { parents, decos },
            kind: BranchKind::Blacken,
        });
        out
    }
}

/// One audited rewriting step with canonical before/after snapshots.
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub kind: StepKind,
    pub before: Forest,
    pub after: Forest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Eli,
    /// Attachment below the given canonical vertex of `before`.
    IbpAttach(usize),
    IbpBlacken,
}

/// A labeled transformation chain with its sign/factor bookkeeping.
#[derive(Debug, Clone)]
pub struct TransformationChain {
    pub steps: Vec<ChainStep>,
    pub coeff: Q,
    pub final_forest: Forest,
}

/// Deduplicated per-application events, for the integral-invariance oracle.
#[derive(Debug, Clone)]
pub enum StepEvent {
    Eli { before: Forest, after: Forest },
    Ibp { before: Forest, after: FormalSum },
}

#[derive(Debug, Clone)]
pub struct Algorithm1Run {
    pub input: Forest,
    pub a_of_pi: FormalSum,
    pub chains: Vec<TransformationChain>,
    pub events: Vec<StepEvent>,
}

/// Expands an exotic forest into forests without connecting lianas.
pub fn run_algorithm1(f: &Forest, dir: EliDirection) -> Result<Algorithm1Run> {
    let mut ctx = RunCtx {
        dir,
        a: FormalSum::zero(),
        chains: Vec::new(),
        events: Vec::new(),
        seen_events: std::collections::BTreeSet::new(),
    };
    let w = WForest::from_forest(f);
    rec(&w, Vec::new(), 0, 0, None, &mut ctx, 0)?;
    Ok(Algorithm1Run {
        input: f.clone(),
        a_of_pi: ctx.a,
        chains: ctx.chains,
        events: ctx.events,
    })
}

struct RunCtx {
    dir: EliDirection,
    a: FormalSum,
    chains: Vec<TransformationChain>,
    events: Vec<StepEvent>,
    seen_events: std::collections::BTreeSet<String>,
}

fn rec(
    w: &WForest,
    steps: Vec<ChainStep>,
    n_attach: u32,
    n_blacken: u32,
    active: Option<usize>,
    ctx: &mut RunCtx,
    depth: usize,
) -> Result<()> {
    if depth > 64 {
        return Err(ForestError::UnsupportedTransformation(
            "rewriting exceeded the step budget".to_string(),
        ));
    }
    // choose the liana and the end to process
    let choice: Option<(usize, usize)> = match (ctx.dir, active) {
        (EliDirection::Deep, Some(m)) => {
            // keep driving the same end while its liana connects
            w.connecting()
                .into_iter()
                .find(|&(_, v1, v2)| v1 == m || v2 == m)
                .map(|(_, v1, v2)| if v1 == m { (v1, v2) } else { (v2, v1) })
        }
        _ => None,
    };
    let choice = match choice {
        Some(c) => Some(c),
        None => w.minimal_connecting().map(|(_, v1, v2)| match ctx.dir {
            EliDirection::Shallow => (v1, v2),
            EliDirection::Deep => {
                if w.parents[v1].is_none() {
                    (v1, v2) // v1 roots: IBP regardless of direction
                } else {
                    (v2, v1)
                }
            }
        }),
    };

    let (mover, other) = match choice {
        None => {
            // no connecting lianas: the chain terminates here
            let coeff = qi(-1).pow(n_attach as i32) * qi(-2).pow(n_blacken as i32);
            let final_forest = w.to_forest().0;
            ctx.a.add_term(final_forest.clone(), coeff.clone());
            ctx.chains.push(TransformationChain {
                steps,
                coeff,
                final_forest,
            });
            return Ok(());
        }
        Some(c) => c,
    };

    let before = w.to_forest().0;
    if w.parents[mover].is_none() {
        // IBP over every branch
        let branches = w.ibp_branches(mover, other);
        let mut after_sum = FormalSum::zero();
        for branch in &branches {
            let c = match branch.kind {
                BranchKind::Attach(_) => qi(-1),
                BranchKind::Blacken => qi(-2),
            };
            after_sum.add_term(branch.forest.to_forest().0, c);
        }
        record_event(
            ctx,
            StepEvent::Ibp {
                before: before.clone(),
                after: after_sum,
            },
        );
        for branch in branches {
            let after = branch.forest.to_forest().0;
            let mut steps2 = steps.clone();
            let (kind, na, nb) = match branch.kind {
                BranchKind::Attach(v) => (StepKind::IbpAttach(v), n_attach + 1, n_blacken),
                BranchKind::Blacken => (StepKind::IbpBlacken, n_attach, n_blacken + 1),
            };
            steps2.push(ChainStep {
                kind,
                before: before.clone(),
                after,
            });
            rec(&branch.forest, steps2, na, nb, None, ctx, depth + 1)?;
        }
        Ok(())
    } else {
        let mut next = w.clone();
        next.eli(mover, other)?;
        let after = next.to_forest().0;
        record_event(
            ctx,
            StepEvent::Eli {
                before: before.clone(),
                after: after.clone(),
            },
        );
        let mut steps2 = steps;
        steps2.push(ChainStep {
            kind: StepKind::Eli,
            before,
            after,
        });
        let next_active = match ctx.dir {
            EliDirection::Deep => Some(mover),
            EliDirection::Shallow => None,
        };
        rec(&next, steps2, n_attach, n_blacken, next_active, ctx, depth + 1)
    }
}

fn record_event(ctx: &mut RunCtx, ev: StepEvent) {
    let key = match &ev {
        StepEvent::Eli { before, after } => format!("E|{}|{}", before.key(), after.key()),
        StepEvent::Ibp { before, after } => {
            let mut parts: Vec<String> = after
                .iter()
                .map(|(f, c)| format!("{}*{}", crate::rational::format_q(c), f.key()))
                .collect();
            parts.sort();
            format!("I|{}|{}", before.key(), parts.join("+"))
        }
    };
    if ctx.seen_events.insert(key) {
        ctx.events.push(ev);
    }
}

/// One order condition: a target forest without connecting lianas together
/// with the combination of source-forest coefficients whose vanishing it
/// demands.
#[derive(Debug, Clone)]
pub struct OrderCondition {
    pub target: Forest,
    pub sigma_target: u64,
    /// `c_pi` per source forest: `sigma(target)/sigma(pi) * <A(pi), target>`.
    pub terms: Vec<(Forest, Q)>,
    /// The same combination with sources merged by weight monomial.
    pub symbolic: Vec<(WeightSymbol, Q)>,
    pub redundant: bool,
}

impl OrderCondition {
    pub fn size(&self) -> Size {
        self.target.size()
    }

    pub fn render(&self, latex: bool) -> String {
        render_combination(&self.symbolic, latex)
    }

    /// Exact evaluation on a tableau.
    pub fn eval(&self, t: &Tableau) -> Q {
        self.symbolic
            .iter()
            .map(|(sym, c)| c.clone() * symbol_value(sym, t))
            .sum()
    }
}

/// Exact evaluation of a condition on a tableau via the source terms, a
/// second route kept for cross-checking `OrderCondition::eval`.
pub fn omega_eval(cond: &OrderCondition, t: &Tableau) -> Q {
    cond.terms
        .iter()
        .map(|(src, c)| c.clone() * elementary_weight(src, t))
        .sum()
}

#[derive(Debug)]
pub struct OrderConditionSet {
    pub order: u32,
    pub conditions: Vec<OrderCondition>,
    pub runs: Vec<Algorithm1Run>,
}

/// Generates all order conditions for sizes `1..=order`: for each target
/// without connecting lianas, the combination over same-size sources `pi`
/// of `a(pi) * sigma(target)/sigma(pi) * <A(pi), target>`.
///
/// Sources and targets are aroma-free: stochastic Runge-Kutta coefficient
/// maps vanish on aromas and the rewriting keeps aroma-free forests
/// aroma-free, so aroma targets carry trivial conditions.
pub fn assemble_omega(order: u32, dir: EliDirection, bound: Size) -> Result<OrderConditionSet> {
    if 2 * order > bound.0 {
        return Err(ForestError::SizeBoundExceeded {
            size: Size(2 * order).to_string(),
            bound: bound.to_string(),
        });
    }
    let mut conditions = Vec::new();
    let mut runs = Vec::new();
    for k in 1..=order {
        let sources =
            crate::enumerate::family_at(2 * k, crate::enumerate::Family::ExoticForests, true);
        let mut a_maps: Vec<(Forest, FormalSum, u64)> = Vec::new();
        for src in sources {
            let run = run_algorithm1(&src, dir)?;
            a_maps.push((src.clone(), run.a_of_pi.clone(), sigma(&src)));
            runs.push(run);
        }
        let targets: Vec<Forest> = a_maps
            .iter()
            .map(|(f, _, _)| f.clone())
            .filter(|f| connecting_lianas(f).is_empty())
            .collect();
        for target in targets {
            let st = sigma(&target);
            let mut terms: Vec<(Forest, Q)> = Vec::new();
            let mut symbolic: BTreeMap<WeightSymbol, Q> = BTreeMap::new();
            for (src, a_of_src, ssrc) in &a_maps {
                let hit = a_of_src.coeff(target.key());
                if hit.is_zero() {
                    continue;
                }
                let c = hit * qi(st as i64) / qi(*ssrc as i64);
                let sym = weight_symbol(src);
                *symbolic.entry(sym).or_insert_with(q_zero) += &c;
                terms.push((src.clone(), c));
            }
            let symbolic: Vec<(WeightSymbol, Q)> = symbolic
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            conditions.push(OrderCondition {
                sigma_target: st,
                redundant: target.roots().len() >= 2,
                target,
                terms,
                symbolic,
            });
        }
    }
    conditions.sort_by_key(|c| {
        (
            c.target.size2(),
            c.target.count_liana_ends(),
            c.target.key().to_string(),
        )
    });
    Ok(OrderConditionSet {
        order,
        conditions,
        runs,
    })
}

/// Splits conditions into survivors and redundant ones: a condition is
/// redundant when its target concatenates two valid exotic forests, i.e.
/// has at least two roots, so its value is a product of smaller conditions.
pub fn reduce_by_multiplicativity(
    conds: &[OrderCondition],
) -> (Vec<&OrderCondition>, Vec<&OrderCondition>) {
    conds.iter().partition(|c| !c.redundant)
}

/// Symbolic product of two condition combinations; monomials multiply by
/// concatenation of their grafted forests.
pub fn symbolic_product(
    a: &[(WeightSymbol, Q)],
    b: &[(WeightSymbol, Q)],
) -> Vec<(WeightSymbol, Q)> {
    let mut out: BTreeMap<WeightSymbol, Q> = BTreeMap::new();
    for (sa, ca) in a {
        for (sb, cb) in b {
            let fa = crate::text::parse(&sa.key).expect("monomial parses");
            let fb = crate::text::parse(&sb.key).expect("monomial parses");
            let prod = crate::forest::concat(&fa, &fb);
            let sym = WeightSymbol {
                key: prod.key().to_string(),
            };
            *out.entry(sym).or_insert_with(q_zero) += ca.clone() * cb;
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Evaluation report of a tableau against the assembled conditions.
#[derive(Debug)]
pub struct MethodReport {
    pub values: Vec<(String, Q)>,
    pub satisfied_order: u32,
    pub first_failure: Option<(String, Q)>,
}

pub fn check_method(set: &OrderConditionSet, t: &Tableau) -> MethodReport {
    let mut values = Vec::new();
    let mut first_failure = None;
    for cond in &set.conditions {
        let v = cond.eval(t);
        if !v.is_zero() && first_failure.is_none() {
            first_failure = Some((cond.target.key().to_string(), v.clone()));
        }
        values.push((cond.target.key().to_string(), v));
    }
    let mut satisfied = 0;
    'orders: for k in 1..=set.order {
        for cond in &set.conditions {
            if cond.target.size2() == 2 * k && !cond.eval(t).is_zero() {
                break 'orders;
            }
        }
        satisfied = k;
    }
    MethodReport {
        values,
        satisfied_order: satisfied,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn f(key: &str) -> Forest {
        parse(key).unwrap()
    }

    #[test]
    fn connecting_liana_detection() {
        let pi = f("b[1],b[1]");
        let ls = connecting_lianas(&pi);
        assert_eq!(ls.len(), 1);
        let pi = f("b[1,1]");
        assert!(connecting_lianas(&pi).is_empty());
        assert!(matches!(
            minimal_connecting_liana(&pi),
            Err(ForestError::NoConnectingLiana)
        ));
    }

    #[test]
    fn minimal_liana_of_nested_example() {
        let pi = f("b[1,1,b[2]],b[2]");
        let l = minimal_connecting_liana(&pi).unwrap();
        // the connecting liana is the one spanning components; its shallow
        // end is the child of the second component's root
        assert_eq!(pi.deco(l.v1).class(), 2);
        assert_eq!(pi.depth(l.v1), 1);
        assert_eq!(pi.depth(l.v2), 2);
    }

    #[test]
    fn eli_on_symmetric_pair() {
        let pi = f("b[1],b[1]");
        let l = minimal_connecting_liana(&pi).unwrap();
        let out = eli_step(&pi, l.v1, l.v2).unwrap();
        assert_eq!(out.key(), f("1,b[b[1]]").key());
    }

    #[test]
    fn eli_displayed_scheme() {
        // moving the deep end of b_A[b_B[1]],b_C[1] gives b_A[1],b_C[b_B[1]]
        let pi = f("b[b[1]],b[1]");
        let l = minimal_connecting_liana(&pi).unwrap();
        let out = eli_step(&pi, l.v2, l.v1).unwrap();
        assert_eq!(out.key(), f("b[1],b[b[1]]").key());
        // moving the shallow end pushes it out as a root
        let out = eli_step(&pi, l.v1, l.v2).unwrap();
        assert_eq!(out.key(), f("1,b[b[b[1]]]").key());
    }

    #[test]
    fn eli_size_preserved_and_still_connecting() {
        let pi = f("b[1],b[1]");
        let l = minimal_connecting_liana(&pi).unwrap();
        let out = eli_step(&pi, l.v1, l.v2).unwrap();
        assert_eq!(out.size2(), pi.size2());
        assert_eq!(connecting_lianas(&out).len(), 1);
    }

    #[test]
    fn eli_rejects_root_end() {
        let pi = f("1,b[1]");
        let l = minimal_connecting_liana(&pi).unwrap();
        assert!(eli_step(&pi, l.v1, l.v2).is_err());
    }

    #[test]
    fn ibp_of_first_chain() {
        let pi = f("1,b[b[1]]");
        let l = minimal_connecting_liana(&pi).unwrap();
        let out = ibp_step(&pi, l.v1).unwrap();
        assert_eq!(out.coeff(f("b[1,b[1]]").key()), qi(-1));
        assert_eq!(out.coeff(f("b[b[1,1]]").key()), qi(-1));
        assert_eq!(out.coeff(f("b[b[b]]").key()), qi(-2));
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn ibp_third_chain() {
        let pi = f("1,b[b[b,1]]");
        let l = minimal_connecting_liana(&pi).unwrap();
        let out = ibp_step(&pi, l.v1).unwrap();
        assert_eq!(out.coeff(f("b[1,b[b,1]]").key()), qi(-1));
        assert_eq!(out.coeff(f("b[b[1,b,1]]").key()), qi(-1));
        assert_eq!(out.coeff(f("b[b[b[1],1]]").key()), qi(-1));
        assert_eq!(out.coeff(f("b[b[b,b]]").key()), qi(-2));
    }

    #[test]
    fn ibp_on_bare_pair() {
        let pi = f("1,1");
        let l = minimal_connecting_liana(&pi).unwrap();
        let out = ibp_step(&pi, l.v1).unwrap();
        assert_eq!(out.coeff("b"), qi(-2));
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn algorithm_on_first_chain() {
        let run = run_algorithm1(&f("b[1],b[1]"), EliDirection::Shallow).unwrap();
        assert_eq!(run.a_of_pi.coeff(f("b[1,b[1]]").key()), qi(-1));
        assert_eq!(run.a_of_pi.coeff(f("b[b[1,1]]").key()), qi(-1));
        assert_eq!(run.a_of_pi.coeff(f("b[b[b]]").key()), qi(-2));
        assert_eq!(run.a_of_pi.len(), 3);
        assert_eq!(run.chains.len(), 3);
        for chain in &run.chains {
            assert_eq!(chain.steps[0].kind, StepKind::Eli);
            assert_eq!(chain.steps[0].after.key(), f("1,b[b[1]]").key());
            // every step preserves the graded size
            for s in &chain.steps {
                assert_eq!(s.before.size2(), s.after.size2());
            }
        }
    }

    #[test]
    fn algorithm_trivial_on_hat_forests() {
        for key in ["b", "b[b]", "b[1,1]", "b,b", "b[1,1,2,2]"] {
            let run = run_algorithm1(&f(key), EliDirection::Shallow).unwrap();
            assert_eq!(run.a_of_pi.coeff(f(key).key()), qi(1));
            assert_eq!(run.a_of_pi.len(), 1);
        }
    }

    #[test]
    fn algorithm_on_bare_pair() {
        let run = run_algorithm1(&f("1,1"), EliDirection::Shallow).unwrap();
        assert_eq!(run.a_of_pi.coeff("b"), qi(-2));
        assert_eq!(run.a_of_pi.len(), 1);
    }

    #[test]
    fn label_independence_of_a() {
        // the same class entered through different labelings/orders
        let variants = ["b[1,2,b[2,1]]", "b[2,1,b[1,2]]", "b[1,2,b[1,2]]"];
        let base = run_algorithm1(&f("b[1,2,b[1,2]]"), EliDirection::Shallow).unwrap();
        for v in variants {
            let run = run_algorithm1(&f(v), EliDirection::Shallow).unwrap();
            assert_eq!(run.a_of_pi, base.a_of_pi, "A differs for labeling {v}");
        }
        let variants = ["b[2],b[1,1,b[2]]", "b[1,1,b[2]],b[2]"];
        let base = run_algorithm1(&f(variants[0]), EliDirection::Shallow).unwrap();
        for v in variants {
            let run = run_algorithm1(&f(v), EliDirection::Shallow).unwrap();
            assert_eq!(run.a_of_pi, base.a_of_pi, "A differs for ordering {v}");
        }
    }

    #[test]
    fn deep_direction_reproduces_middle_chain() {
        let run = run_algorithm1(&f("b[1,1,b[2]],b[2]"), EliDirection::Deep).unwrap();
        let mid1 = f("b[1,1,2],b[b[2]]");
        let mid2 = f("2,b[b[b[1,1,2]]]");
        let chain = run
            .chains
            .iter()
            .find(|c| c.final_forest.key() == f("b[2,b[b[1,1,2]]]").key())
            .expect("chain reaching the first attach term");
        assert_eq!(chain.steps.len(), 3);
        assert_eq!(chain.steps[0].after.key(), mid1.key());
        assert_eq!(chain.steps[1].after.key(), mid2.key());
        assert_eq!(chain.coeff, qi(-1));
        // blacken final with coefficient -2
        let blacken = run
            .chains
            .iter()
            .find(|c| c.final_forest.key() == f("b[b[b[1,1,b]]]").key())
            .expect("blacken chain");
        assert_eq!(blacken.coeff, qi(-2));
        assert_eq!(run.a_of_pi.coeff(f("b[b[b[1,1,2,2]]]").key()), qi(-1));
    }

    #[test]
    fn omega_order_one() {
        let set = assemble_omega(1, EliDirection::Shallow, Size(8)).unwrap();
        assert_eq!(set.conditions.len(), 1);
        let cond = &set.conditions[0];
        assert_eq!(cond.target.key(), "b");
        assert_eq!(cond.render(false), "Σ b_i − 1");
        let t = Tableau::euler_maruyama();
        assert!(cond.eval(&t).is_zero());
        assert_eq!(omega_eval(cond, &t), cond.eval(&t));
    }

    #[test]
    fn condition_counts_by_order() {
        let set = assemble_omega(3, EliDirection::Shallow, Size(8)).unwrap();
        let count_at = |k: u32| {
            set.conditions
                .iter()
                .filter(|c| c.target.size2() == 2 * k)
                .count()
        };
        assert_eq!(count_at(1), 1);
        assert_eq!(count_at(2), 3);
        assert_eq!(count_at(3), 9);
        let (survivors, redundant) = reduce_by_multiplicativity(&set.conditions);
        assert_eq!(redundant.len(), 4);
        assert_eq!(survivors.len(), 9);
        for c in survivors {
            assert_eq!(c.target.roots().len(), 1);
        }
    }

    #[test]
    fn euler_maruyama_method_report() {
        let set = assemble_omega(2, EliDirection::Shallow, Size(8)).unwrap();
        let report = check_method(&set, &Tableau::euler_maruyama());
        assert_eq!(report.satisfied_order, 1);
        let (target, value) = report.first_failure.expect("order 2 fails");
        assert_eq!(target, "b[b]");
        assert_eq!(value, crate::rational::q(1, 2));
    }
}
