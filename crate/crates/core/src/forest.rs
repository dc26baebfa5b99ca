//! Decorated aromatic forests in canonical form.
//!
//! A forest is a directed graph in which every vertex has at most one
//! outgoing edge, pointing towards the root of its component. Components
//! with a root are trees; rootless components contain exactly one directed
//! cycle and are called aromas. Vertices are decorated black, grafted, or as
//! one end of a liana (a pair of grafted vertices sharing a label).
//!
//! Canonical form is a minimal string: children sorted bytewise, aroma
//! cycles at their minimal rotation, liana labels minimized over all label
//! permutations. Equal keys hold exactly for isomorphic forests (lianas up
//! to relabeling), which the test suite checks against a brute-force
//! isomorphism search.

use crate::error::{ForestError, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Vertex decoration. Liana labels are canonicalized to `1..=L` in order of
/// first appearance in the canonical string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Deco {
    Black,
    Grafted,
    Liana(u32),
}

impl Deco {
    /// Decoration class, ignoring liana labels.
    pub fn class(&self) -> u8 {
        match self {
            Deco::Black => 0,
            Deco::Grafted => 1,
            Deco::Liana(_) => 2,
        }
    }

    /// Half-units of size: black vertices weigh 1, grafted and liana ends 1/2.
    pub fn size2(&self) -> u32 {
        match self {
            Deco::Black => 2,
            _ => 1,
        }
    }
}

/// Graded size in half-integer units (grafted vertices weigh 1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Size(pub u32);

impl Size {
    pub fn half_units(&self) -> u32 {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for Size {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}

/// Unvalidated input: a decoration per vertex plus `(child, parent)` edges.
#[derive(Debug, Clone, Default)]
pub struct RawForest {
    pub decos: Vec<Deco>,
    pub edges: Vec<(usize, usize)>,
}

/// A validated forest in canonical form. Vertices are indexed in canonical
/// linearization order, so the index itself is the total vertex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    parents: Vec<Option<u32>>,
    decos: Vec<Deco>,
    key: String,
}

/// Vertex bijection between two forests preserving edges and decoration
/// classes, with lianas matched as pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub map: Vec<usize>,
}

impl IsoWitness {
    pub fn identity(n: usize) -> Self {
        IsoWitness {
            map: (0..n).collect(),
        }
    }

    /// `self` maps A -> B, `next` maps B -> C; the result maps A -> C.
    pub fn compose(&self, next: &IsoWitness) -> IsoWitness {
        IsoWitness {
            map: self.map.iter().map(|&v| next.map[v]).collect(),
        }
    }

    /// Checks that the bijection preserves edges, decoration classes and the
    /// liana pairing between `a` and `b`.
    pub fn verify(&self, a: &Forest, b: &Forest) -> bool {
        if self.map.len() != a.len() || a.len() != b.len() {
            return false;
        }
        let mut seen = vec![false; b.len()];
        for &w in &self.map {
            if w >= b.len() || seen[w] {
                return false;
            }
            seen[w] = true;
        }
        for v in 0..a.len() {
            let w = self.map[v];
            if a.deco(v).class() != b.deco(w).class() {
                return false;
            }
            match (a.parent(v), b.parent(w)) {
                (None, None) => {}
                (Some(p), Some(q)) if self.map[p] == q => {}
                _ => return false,
            }
            if let Some(pv) = a.liana_partner(v) {
                if b.liana_partner(w) != Some(self.map[pv]) {
                    return false;
                }
            }
        }
        true
    }
}

impl Forest {
    /// The empty forest, the unit of concatenation.
    pub fn empty() -> Forest {
        Forest {
            parents: Vec::new(),
            decos: Vec::new(),
            key: String::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    /// Canonical key; doubles as the serialization in the text grammar.
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v].map(|p| p as usize)
    }

    pub fn deco(&self, v: usize) -> Deco {
        self.decos[v]
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.vertices()
            .filter(|&u| self.parents[u] == Some(v as u32))
            .collect()
    }

    pub fn size(&self) -> Size {
        Size(self.decos.iter().map(|d| d.size2()).sum())
    }

    pub fn size2(&self) -> u32 {
        self.size().0
    }

    pub fn count_black(&self) -> usize {
        self.decos.iter().filter(|d| matches!(d, Deco::Black)).count()
    }

    pub fn count_grafted(&self) -> usize {
        self.decos
            .iter()
            .filter(|d| matches!(d, Deco::Grafted))
            .count()
    }

    pub fn count_liana_ends(&self) -> usize {
        self.decos
            .iter()
            .filter(|d| matches!(d, Deco::Liana(_)))
            .count()
    }

    pub fn liana_labels(&self) -> Vec<u32> {
        let mut labels: Vec<u32> = self
            .decos
            .iter()
            .filter_map(|d| match d {
                Deco::Liana(k) => Some(*k),
                _ => None,
            })
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Both ends of the liana with the given label, in vertex order.
    pub fn liana_ends(&self, label: u32) -> Option<(usize, usize)> {
        let ends: Vec<usize> = self
            .vertices()
            .filter(|&v| self.decos[v] == Deco::Liana(label))
            .collect();
        match ends.as_slice() {
            [a, b] => Some((*a, *b)),
            _ => None,
        }
    }

    pub fn liana_partner(&self, v: usize) -> Option<usize> {
        match self.decos[v] {
            Deco::Liana(k) => {
                let (a, b) = self.liana_ends(k)?;
                Some(if a == v { b } else { a })
            }
            _ => None,
        }
    }

    /// Component id per vertex, ordered by least vertex.
    pub fn component_ids(&self) -> Vec<usize> {
        component_ids(&self.parents)
    }

    pub fn component_count(&self) -> usize {
        self.component_ids().iter().max().map_or(0, |m| m + 1)
    }

    pub fn roots(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.parents[v].is_none()).collect()
    }

    /// True if some component is an aroma (contains a cycle).
    pub fn has_aroma(&self) -> bool {
        self.cycle_count() > 0
    }

    /// Number of directed cycles, i.e. of aroma components.
    pub fn cycle_count(&self) -> usize {
        let ids = self.component_ids();
        let ncomp = self.component_count();
        let mut has_root = vec![false; ncomp];
        for v in self.vertices() {
            if self.parents[v].is_none() {
                has_root[ids[v]] = true;
            }
        }
        has_root.iter().filter(|r| !**r).count()
    }

    /// Distance to the component's root, or to its cycle for aroma vertices
    /// (cycle vertices have depth 0).
    pub fn depth(&self, v: usize) -> usize {
        let cyc = cycle_vertices(&self.parents);
        let mut d = 0;
        let mut cur = v;
        loop {
            if cyc[cur] {
                return d;
            }
            match self.parent(cur) {
                None => return d,
                Some(p) => {
                    d += 1;
                    cur = p;
                }
            }
        }
    }

    /// True when `v` lies in a rootless component.
    pub fn in_aroma(&self, v: usize) -> bool {
        let ids = self.component_ids();
        let my = ids[v];
        !self
            .vertices()
            .any(|u| ids[u] == my && self.parents[u].is_none())
    }

    /// The total vertex order is the canonical linearization, which is just
    /// the vertex index.
    pub fn vertex_order(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    pub fn to_raw(&self) -> RawForest {
        RawForest {
            decos: self.decos.clone(),
            edges: self
                .vertices()
                .filter_map(|v| self.parent(v).map(|p| (v, p)))
                .collect(),
        }
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

const MAX_LIANAS: usize = 8;

/// Validates raw data and returns the canonical forest.
///
/// Rejects a second outgoing edge, children under grafted or liana vertices,
/// liana labels not used exactly twice, and nonempty forests without a root.
pub fn validate(raw: &RawForest) -> Result<Forest> {
    let n = raw.decos.len();
    let mut parents: Vec<Option<u32>> = vec![None; n];
    for &(c, p) in &raw.edges {
        if c >= n || p >= n {
            return Err(ForestError::Precondition(format!(
                "edge ({c},{p}) out of range"
            )));
        }
        if parents[c].is_some() {
            return Err(ForestError::TwoOutgoingEdges { vertex: c });
        }
        parents[c] = Some(p as u32);
        if raw.decos[p].class() != 0 {
            return Err(ForestError::DecoratedVertexHasChild { vertex: p });
        }
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for d in &raw.decos {
        if let Deco::Liana(k) = d {
            *counts.entry(*k).or_insert(0) += 1;
        }
    }
    for (label, count) in &counts {
        if *count != 2 {
            return Err(ForestError::LianaMultiplicityNot2 {
                label: *label,
                count: *count,
            });
        }
    }
    if counts.len() > MAX_LIANAS {
        return Err(ForestError::TooManyLianas {
            count: counts.len(),
            max: MAX_LIANAS,
        });
    }
    if n > 0 && parents.iter().all(|p| p.is_some()) {
        return Err(ForestError::PureAromaForest);
    }
    Ok(canonicalize_parts(&parents, &raw.decos).0)
}

/// Like [`validate`] but also returns the map from input vertex indices to
/// canonical indices.
pub fn validate_with_witness(raw: &RawForest) -> Result<(Forest, Vec<usize>)> {
    let f = validate(raw)?;
    let n = raw.decos.len();
    let mut parents: Vec<Option<u32>> = vec![None; n];
    for &(c, p) in &raw.edges {
        parents[c] = Some(p as u32);
    }
    let (_, witness) = canonicalize_parts(&parents, &raw.decos);
    Ok((f, witness))
}

/// Re-canonicalizes a forest; idempotent by construction.
pub fn canonicalize(f: &Forest) -> Forest {
    canonicalize_parts(&f.parents, &f.decos).0
}

/// Canonicalization used internally on already-validated structure. Returns
/// the forest and the old-index -> new-index map.
pub(crate) fn canonicalize_parts(
    parents: &[Option<u32>],
    decos: &[Deco],
) -> (Forest, Vec<usize>) {
    let n = parents.len();
    if n == 0 {
        return (Forest::empty(), Vec::new());
    }

    // Children excluding cycle edges, so pendant trees can be rendered.
    let cyc = cycle_vertices(parents);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = parents[v] {
            let p = p as usize;
            if !(cyc[v] && cyc[p]) {
                children[p].push(v);
            }
        }
    }

    // Original liana labels -> dense indices.
    let mut label_ix: BTreeMap<u32, usize> = BTreeMap::new();
    for d in decos {
        if let Deco::Liana(k) = d {
            let next = label_ix.len();
            label_ix.entry(*k).or_insert(next);
        }
    }
    let nl = label_ix.len();

    let ids = component_ids(parents);
    let ncomp = ids.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut comp_vertices: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in 0..n {
        comp_vertices[ids[v]].push(v);
    }
    let comp_has_liana: Vec<bool> = comp_vertices
        .iter()
        .map(|vs| vs.iter().any(|&v| matches!(decos[v], Deco::Liana(_))))
        .collect();

    let token = |v: usize, perm: &[u32]| -> String {
        match decos[v] {
            Deco::Black => "b".to_string(),
            Deco::Grafted => "x".to_string(),
            Deco::Liana(k) => perm[label_ix[&k]].to_string(),
        }
    };

    // Renders the component containing `comp` under a labeling and returns
    // (string, linearized vertices).
    fn tree_string(
        v: usize,
        children: &[Vec<usize>],
        token: &dyn Fn(usize) -> String,
    ) -> (String, Vec<usize>) {
        let mut parts: Vec<(String, Vec<usize>)> = children[v]
            .iter()
            .map(|&c| tree_string(c, children, token))
            .collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut s = token(v);
        let mut lin = vec![v];
        if !parts.is_empty() {
            s.push('[');
            for (i, (ps, pl)) in parts.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(ps);
                lin.extend_from_slice(pl);
            }
            s.push(']');
        }
        (s, lin)
    }

    let render_component = |comp: usize, perm: &[u32]| -> (String, Vec<usize>) {
        let vs = &comp_vertices[comp];
        let tk = |v: usize| token(v, perm);
        let root = vs.iter().copied().find(|&v| parents[v].is_none());
        if let Some(r) = root {
            tree_string(r, &children, &tk)
        } else {
            // Aroma: walk the cycle following parents and pick the minimal
            // rotation of the pendant-tree sequence.
            let start = *vs.iter().find(|&&v| cyc[v]).expect("aroma has a cycle");
            let mut cycle = vec![start];
            let mut cur = parents[start].unwrap() as usize;
            while cur != start {
                cycle.push(cur);
                cur = parents[cur].unwrap() as usize;
            }
            let rendered: Vec<(String, Vec<usize>)> = cycle
                .iter()
                .map(|&c| tree_string(c, &children, &tk))
                .collect();
            let k = cycle.len();
            let mut best: Option<(String, usize)> = None;
            for r in 0..k {
                let mut s = String::from("(");
                for i in 0..k {
                    if i > 0 {
                        s.push(',');
                    }
                    s.push_str(&rendered[(r + i) % k].0);
                }
                s.push(')');
                if best.as_ref().map_or(true, |(bs, _)| s < *bs) {
                    best = Some((s, r));
                }
            }
            let (s, r) = best.unwrap();
            let mut lin = Vec::new();
            for i in 0..k {
                lin.extend_from_slice(&rendered[(r + i) % k].1);
            }
            (s, lin)
        }
    };

    // Liana-free components only need rendering once.
    let identity_perm: Vec<u32> = (1..=nl as u32).collect();
    let fixed: Vec<Option<(String, Vec<usize>)>> = (0..ncomp)
        .map(|c| {
            if comp_has_liana[c] {
                None
            } else {
                Some(render_component(c, &identity_perm))
            }
        })
        .collect();

    let assemble = |perm: &[u32]| -> (String, Vec<usize>) {
        let mut parts: Vec<(String, Vec<usize>)> = (0..ncomp)
            .map(|c| match &fixed[c] {
                Some(p) => p.clone(),
                None => render_component(c, perm),
            })
            .collect();
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut key = String::new();
        let mut lin = Vec::new();
        for (i, (s, l)) in parts.iter().enumerate() {
            if i > 0 {
                key.push(',');
            }
            key.push_str(s);
            lin.extend_from_slice(l);
        }
        (key, lin)
    };

    let mut best: Option<(String, Vec<usize>, Vec<u32>)> = None;
    let mut perm: Vec<u32> = identity_perm.clone();
    permute_labels(&mut perm, 0, &mut |p| {
        let (key, lin) = assemble(p);
        if best.as_ref().map_or(true, |(bk, _, _)| key < *bk) {
            best = Some((key, lin, p.to_vec()));
        }
    });
    let (key, lin, perm) = best.unwrap();

    let mut new_index = vec![0usize; n];
    for (new, &old) in lin.iter().enumerate() {
        new_index[old] = new;
    }
    let mut new_parents = vec![None; n];
    let mut new_decos = vec![Deco::Black; n];
    for old in 0..n {
        let new = new_index[old];
        new_parents[new] = parents[old].map(|p| new_index[p as usize] as u32);
        new_decos[new] = match decos[old] {
            Deco::Liana(k) => Deco::Liana(perm[label_ix[&k]]),
            d => d,
        };
    }
    (
        Forest {
            parents: new_parents,
            decos: new_decos,
            key,
        },
        new_index,
    )
}

fn permute_labels(perm: &mut Vec<u32>, i: usize, visit: &mut dyn FnMut(&[u32])) {
    if i == perm.len() {
        visit(perm);
        return;
    }
    for j in i..perm.len() {
        perm.swap(i, j);
        permute_labels(perm, i + 1, visit);
        perm.swap(i, j);
    }
}

fn component_ids(parents: &[Option<u32>]) -> Vec<usize> {
    let n = parents.len();
    let mut id = vec![usize::MAX; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = parents[v] {
            adj[v].push(p as usize);
            adj[p as usize].push(v);
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

/// Marks vertices lying on a directed cycle.
fn cycle_vertices(parents: &[Option<u32>]) -> Vec<bool> {
    let n = parents.len();
    let mut on_cycle = vec![false; n];
    // state: 0 unvisited, 1 on current path, 2 done
    let mut state = vec![0u8; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = s;
        loop {
            if state[cur] == 1 {
                // found a new cycle: mark from `cur` to end of path
                let pos = path.iter().position(|&v| v == cur).unwrap();
                for &v in &path[pos..] {
                    on_cycle[v] = true;
                }
                break;
            }
            if state[cur] == 2 {
                break;
            }
            state[cur] = 1;
            path.push(cur);
            match parents[cur] {
                Some(p) => cur = p as usize,
                None => break,
            }
        }
        for &v in &path {
            state[v] = 2;
        }
    }
    on_cycle
}

/// Symmetry coefficient: the order of the automorphism group, with lianas
/// matched up to label renaming.
pub fn sigma(f: &Forest) -> u64 {
    count_embeddings(f, f, false).0
}

/// Finds one isomorphism between two forests, if any. Backtracking search,
/// independent of the canonical keys; used as the oracle for key equality.
pub fn find_isomorphism(a: &Forest, b: &Forest) -> Option<IsoWitness> {
    if a.len() != b.len() {
        return None;
    }
    let (_, w) = count_embeddings(a, b, true);
    w.map(|map| IsoWitness { map })
}

pub fn isomorphic(a: &Forest, b: &Forest) -> bool {
    a.key() == b.key()
}

/// Counts structure-preserving bijections a -> b. With `first_only` stops at
/// the first one and returns it.
fn count_embeddings(a: &Forest, b: &Forest, first_only: bool) -> (u64, Option<Vec<usize>>) {
    let n = a.len();
    if b.len() != n {
        return (0, None);
    }
    let partner_a: Vec<Option<usize>> = (0..n).map(|v| a.liana_partner(v)).collect();
    let partner_b: Vec<Option<usize>> = (0..n).map(|v| b.liana_partner(v)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut count = 0u64;
    let mut found: Option<Vec<usize>> = None;

    fn rec(
        v: usize,
        n: usize,
        a: &Forest,
        b: &Forest,
        partner_a: &[Option<usize>],
        partner_b: &[Option<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        count: &mut u64,
        found: &mut Option<Vec<usize>>,
        first_only: bool,
    ) {
        if v == n {
            *count += 1;
            if first_only && found.is_none() {
                *found = Some(map.clone());
            }
            return;
        }
        'cand: for w in 0..n {
            if used[w] || a.deco(v).class() != b.deco(w).class() {
                continue;
            }
            match (a.parent(v), b.parent(w)) {
                (None, None) => {}
                (Some(p), Some(q)) => {
                    if map[p] != usize::MAX && map[p] != q {
                        continue;
                    }
                }
                _ => continue,
            }
            // reverse edge constraint: mapped children of v must sit under w
            for u in 0..v {
                if a.parent(u) == Some(v) && b.parent(map[u]) != Some(w) {
                    continue 'cand;
                }
            }
            if let Some(pv) = partner_a[v] {
                if map[pv] != usize::MAX && partner_b[w] != Some(map[pv]) {
                    continue;
                }
            }
            map[v] = w;
            used[w] = true;
            rec(
                v + 1,
                n,
                a,
                b,
                partner_a,
                partner_b,
                map,
                used,
                count,
                found,
                first_only,
            );
            map[v] = usize::MAX;
            used[w] = false;
            if first_only && found.is_some() {
                return;
            }
        }
    }

    rec(
        0,
        n,
        a,
        b,
        &partner_a,
        &partner_b,
        &mut map,
        &mut used,
        &mut count,
        &mut found,
        first_only,
    );
    (count, found)
}

/// Concatenation (disjoint union). Liana labels of the operands are kept
/// disjoint automatically. Also returns witnesses from each operand's
/// vertices into the result.
pub fn concat_with_witness(a: &Forest, b: &Forest) -> (Forest, IsoWitness, IsoWitness) {
    let shift = a.liana_labels().iter().max().copied().unwrap_or(0);
    let na = a.len();
    let mut parents: Vec<Option<u32>> = a.parents.clone();
    let mut decos = a.decos.clone();
    for v in 0..b.len() {
        parents.push(b.parents[v].map(|p| p + na as u32));
        decos.push(match b.decos[v] {
            Deco::Liana(k) => Deco::Liana(k + shift),
            d => d,
        });
    }
    let (f, w) = canonicalize_parts(&parents, &decos);
    let wa = IsoWitness {
        map: (0..na).map(|v| w[v]).collect(),
    };
    let wb = IsoWitness {
        map: (0..b.len()).map(|v| w[na + v]).collect(),
    };
    (f, wa, wb)
}

pub fn concat(a: &Forest, b: &Forest) -> Forest {
    concat_with_witness(a, b).0
}
