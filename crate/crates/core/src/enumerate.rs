//! Exhaustive enumeration of grafted and exotic trees and forests by size.
//!
//! Bicolored shapes (black vertices plus grafted slots) are generated
//! recursively; exotic families arise by pairing the slots into lianas and
//! deduplicating canonical keys, the same construction used by the
//! expectation map.

use crate::error::{ForestError, Result};
use crate::forest::{validate, Deco, Forest, RawForest, Size};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    GraftedTrees,
    GraftedForests,
    ExoticTrees,
    ExoticForests,
}

/// Default enumeration bound: size 4.
pub const DEFAULT_BOUND: Size = Size(8);

/// Bicolored tree shape; a non-black root is a bare grafted slot.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Shape {
    black: bool,
    children: Vec<Shape>,
}

impl Shape {
    fn size2(&self) -> u32 {
        let own = if self.black { 2 } else { 1 };
        own + self.children.iter().map(Shape::size2).sum::<u32>()
    }

    fn text(&self) -> String {
        let mut parts: Vec<String> = self.children.iter().map(Shape::text).collect();
        parts.sort();
        let mut s = if self.black { "b".into() } else { "x".to_string() };
        if !parts.is_empty() {
            s.push('[');
            s.push_str(&parts.join(","));
            s.push(']');
        }
        s
    }
}

/// All bicolored trees of exact size, children canonically sorted.
fn trees_of_size(size2: u32) -> Vec<Shape> {
    fn pool_upto(max: u32) -> Vec<Shape> {
        let mut all = Vec::new();
        for s in 1..=max {
            all.extend(trees_of_size(s));
        }
        all.sort_by_key(|t| (t.size2(), t.text()));
        all
    }
    let mut out = Vec::new();
    if size2 == 1 {
        out.push(Shape {
            black: false,
            children: Vec::new(),
        });
    }
    if size2 >= 2 {
        let budget = size2 - 2;
        let pool = pool_upto(budget.max(1));
        let mut cur = Vec::new();
        multisets(&pool, budget, pool.len(), &mut cur, &mut |children| {
            out.push(Shape {
                black: true,
                children: children.to_vec(),
            });
        });
    }
    out
}

/// Multisets from `pool` (indices non-increasing, so each multiset once)
/// with sizes summing to `budget`.
fn multisets(
    pool: &[Shape],
    budget: u32,
    max_idx: usize,
    cur: &mut Vec<Shape>,
    visit: &mut dyn FnMut(&[Shape]),
) {
    if budget == 0 {
        visit(cur);
        return;
    }
    for i in 0..max_idx {
        if pool[i].size2() <= budget {
            cur.push(pool[i].clone());
            multisets(pool, budget - pool[i].size2(), i + 1, cur, visit);
            cur.pop();
        }
    }
}

/// An aroma is a directed cycle of black-rooted pendant trees, identified up
/// to rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
struct AromaShape {
    pendants: Vec<Shape>,
}

impl AromaShape {
    fn size2(&self) -> u32 {
        self.pendants.iter().map(Shape::size2).sum()
    }

    fn text(&self) -> String {
        format!(
            "({})",
            self.pendants
                .iter()
                .map(Shape::text)
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

fn aromas_of_size(size2: u32) -> Vec<AromaShape> {
    let pendants: Vec<Shape> = (2..=size2)
        .flat_map(trees_of_size)
        .filter(|t| t.black)
        .collect();
    let mut seqs: Vec<Vec<Shape>> = Vec::new();
    fn rec(pendants: &[Shape], left: u32, cur: &mut Vec<Shape>, out: &mut Vec<Vec<Shape>>) {
        if left == 0 {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for p in pendants {
            if p.size2() <= left {
                cur.push(p.clone());
                rec(pendants, left - p.size2(), cur, out);
                cur.pop();
            }
        }
    }
    rec(&pendants, size2, &mut Vec::new(), &mut seqs);
    // keep one representative per rotation class
    let mut seen = BTreeMap::new();
    for seq in seqs {
        let texts: Vec<String> = seq.iter().map(Shape::text).collect();
        let k = texts.len();
        let min_rot = (0..k)
            .map(|r| {
                (0..k)
                    .map(|i| texts[(r + i) % k].clone())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .min()
            .unwrap();
        seen.entry(min_rot).or_insert(AromaShape { pendants: seq });
    }
    seen.into_values().collect()
}

#[derive(Debug, Clone)]
enum Component {
    Tree(Shape),
    Aroma(AromaShape),
}

impl Component {
    fn size2(&self) -> u32 {
        match self {
            Component::Tree(t) => t.size2(),
            Component::Aroma(a) => a.size2(),
        }
    }

    fn text(&self) -> String {
        match self {
            Component::Tree(t) => t.text(),
            Component::Aroma(a) => a.text(),
        }
    }
}

/// Bicolored forests of exact size for the requested root structure:
/// `single_root` yields aromatic trees (one tree plus aromas), otherwise at
/// least one tree and any number of aromas.
fn bicolored_at(size2: u32, single_root: bool, aroma_free: bool) -> Vec<RawForest> {
    let mut comps: Vec<Component> = Vec::new();
    for s in 1..=size2 {
        comps.extend(trees_of_size(s).into_iter().map(Component::Tree));
        if !aroma_free {
            comps.extend(aromas_of_size(s).into_iter().map(Component::Aroma));
        }
    }
    comps.sort_by_key(|c| (c.size2(), c.text()));

    let mut picks: Vec<Vec<Component>> = Vec::new();
    fn rec(
        comps: &[Component],
        left: u32,
        max_idx: usize,
        cur: &mut Vec<Component>,
        out: &mut Vec<Vec<Component>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 0..max_idx {
            if comps[i].size2() <= left {
                cur.push(comps[i].clone());
                rec(comps, left - comps[i].size2(), i + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(&comps, size2, comps.len(), &mut Vec::new(), &mut picks);

    picks
        .into_iter()
        .filter(|pick| {
            let trees = pick
                .iter()
                .filter(|c| matches!(c, Component::Tree(_)))
                .count();
            if single_root {
                trees == 1
            } else {
                trees >= 1
            }
        })
        .map(|pick| realize(&pick))
        .collect()
}

/// Builds raw vertex data from component shapes, slots decorated grafted.
fn realize(components: &[Component]) -> RawForest {
    let mut raw = RawForest::default();
    fn add_tree(t: &Shape, raw: &mut RawForest) -> usize {
        let v = raw.decos.len();
        raw.decos
            .push(if t.black { Deco::Black } else { Deco::Grafted });
        for c in &t.children {
            let u = add_tree(c, raw);
            raw.edges.push((u, v));
        }
        v
    }
    for comp in components {
        match comp {
            Component::Tree(t) => {
                add_tree(t, &mut raw);
            }
            Component::Aroma(a) => {
                let roots: Vec<usize> =
                    a.pendants.iter().map(|p| add_tree(p, &mut raw)).collect();
                let k = roots.len();
                for i in 0..k {
                    raw.edges.push((roots[i], roots[(i + 1) % k]));
                }
            }
        }
    }
    raw
}

/// All ways to pair the given vertices, as lists of pairs.
pub(crate) fn perfect_pairings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for i in 1..items.len() {
        let partner = items[i];
        let rest: Vec<usize> = items[1..]
            .iter()
            .copied()
            .filter(|&v| v != partner)
            .collect();
        for mut tail in perfect_pairings(&rest) {
            tail.insert(0, (first, partner));
            out.push(tail);
        }
    }
    out
}

/// Exact-size enumeration for one family, canonical and duplicate-free.
pub fn family_at(size2: u32, family: Family, aroma_free: bool) -> Vec<Forest> {
    let single_root = matches!(family, Family::GraftedTrees | Family::ExoticTrees);
    let exotic = matches!(family, Family::ExoticTrees | Family::ExoticForests);
    let mut out: BTreeMap<String, Forest> = BTreeMap::new();
    for raw in bicolored_at(size2, single_root, aroma_free) {
        if exotic {
            let slots: Vec<usize> = (0..raw.decos.len())
                .filter(|&v| raw.decos[v] == Deco::Grafted)
                .collect();
            if slots.len() % 2 != 0 {
                continue;
            }
            for pairing in perfect_pairings(&slots) {
                let mut decos = raw.decos.clone();
                for (label, (a, b)) in pairing.iter().enumerate() {
                    decos[*a] = Deco::Liana(label as u32 + 1);
                    decos[*b] = Deco::Liana(label as u32 + 1);
                }
                let f = validate(&RawForest {
                    decos,
                    edges: raw.edges.clone(),
                })
                .expect("enumerated forest is valid");
                out.entry(f.key().to_string()).or_insert(f);
            }
        } else {
            let f = validate(&raw).expect("enumerated forest is valid");
            out.entry(f.key().to_string()).or_insert(f);
        }
    }
    out.into_values().collect()
}

/// Complete list of all family members of size up to `max_size`, in
/// canonical-key order. Fails when the requested size exceeds `bound`.
pub fn enumerate_bounded(
    max_size: Size,
    family: Family,
    aroma_free: bool,
    bound: Size,
) -> Result<Vec<Forest>> {
    if max_size > bound {
        return Err(ForestError::SizeBoundExceeded {
            size: max_size.to_string(),
            bound: bound.to_string(),
        });
    }
    let mut all = Vec::new();
    for s in 1..=max_size.0 {
        all.extend(family_at(s, family, aroma_free));
    }
    all.sort_by(|a, b| a.key().cmp(b.key()));
    Ok(all)
}

/// [`enumerate_bounded`] with the default bound of size 4.
pub fn enumerate(max_size: Size, family: Family, aroma_free: bool) -> Result<Vec<Forest>> {
    enumerate_bounded(max_size, family, aroma_free, DEFAULT_BOUND)
}

/// Forests of exact size with the given decoration counts, used to
/// enumerate candidates when dualizing the coproduct. Cycle count is exact;
/// the liana-end count must be even.
pub(crate) fn decorated_candidates(
    size2: u32,
    n_grafted: usize,
    n_liana_ends: usize,
    n_cycles: usize,
) -> Vec<Forest> {
    let mut out: BTreeMap<String, Forest> = BTreeMap::new();
    for raw in bicolored_at(size2, false, false) {
        let slots: Vec<usize> = (0..raw.decos.len())
            .filter(|&v| raw.decos[v] == Deco::Grafted)
            .collect();
        if slots.len() != n_grafted + n_liana_ends {
            continue;
        }
        for chosen in subsets_of_size(&slots, n_liana_ends) {
            for pairing in perfect_pairings(&chosen) {
                let mut decos = raw.decos.clone();
                for (label, (a, b)) in pairing.iter().enumerate() {
                    decos[*a] = Deco::Liana(label as u32 + 1);
                    decos[*b] = Deco::Liana(label as u32 + 1);
                }
                let f = validate(&RawForest {
                    decos,
                    edges: raw.edges.clone(),
                })
                .expect("candidate forest is valid");
                if f.cycle_count() == n_cycles {
                    out.entry(f.key().to_string()).or_insert(f);
                }
            }
        }
    }
    out.into_values().collect()
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    #[test]
    fn grafted_tree_counts_by_size() {
        let expected = [1usize, 1, 2, 4, 8, 16];
        for (i, want) in expected.iter().enumerate() {
            let got = family_at(i as u32 + 1, Family::GraftedTrees, false).len();
            assert_eq!(got, *want, "grafted trees at size2={}", i + 1);
        }
    }

    #[test]
    fn exotic_tree_counts_by_size() {
        assert_eq!(family_at(2, Family::ExoticTrees, false).len(), 1);
        assert_eq!(family_at(4, Family::ExoticTrees, false).len(), 4);
        assert_eq!(family_at(6, Family::ExoticTrees, false).len(), 16);
    }

    #[test]
    fn exotic_forests_of_size_one() {
        let got = enumerate(Size(2), Family::ExoticForests, true).unwrap();
        let keys: Vec<&str> = got.iter().map(|f| f.key()).collect();
        assert_eq!(keys, vec!["1,1", "b"]);
        // with aromas allowed nothing else appears at size 1: a bare aroma
        // has no root and is not a forest
        let got = enumerate(Size(2), Family::ExoticForests, false).unwrap();
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn size_bound_enforced() {
        assert!(matches!(
            enumerate(Size(9), Family::GraftedTrees, false),
            Err(ForestError::SizeBoundExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_contains_known_trees() {
        let trees = enumerate(Size(6), Family::ExoticTrees, false).unwrap();
        for key in ["b", "b[1,1]", "(b[1]),1", "(b[1,1,2]),2", "b[1,1,2,2]"] {
            let want = parse(key).unwrap();
            assert!(
                trees.iter().any(|f| f.key() == want.key()),
                "missing {key}"
            );
        }
    }

    #[test]
    fn lists_are_in_key_order_and_unique() {
        let all = enumerate(Size(6), Family::ExoticForests, false).unwrap();
        for w in all.windows(2) {
            assert!(w[0].key() < w[1].key());
        }
    }
}
