//! Linear combinations of forests and the products on them: grafting, the
//! root-splitting coproduct, its dual, the composition product, and the
//! sigma-scaling that relates the last two.
//!
//! All coefficients are exact rationals.

use crate::enumerate::decorated_candidates;
use crate::error::{ForestError, Result};
use crate::forest::{canonicalize_parts, sigma, Deco, Forest, Size};
use crate::rational::{q_one, q_zero, Q};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Finite linear combination of canonical forests with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalSum {
    terms: BTreeMap<String, (Forest, Q)>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    pub fn from_forest(f: Forest) -> Self {
        let mut s = FormalSum::zero();
        s.add_term(f, q_one());
        s
    }

    pub fn add_term(&mut self, f: Forest, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(f.key().to_string())
            .or_insert_with(|| (f, q_zero()));
        entry.1 += c;
        if entry.1.is_zero() {
            let key = entry.0.key().to_string();
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &FormalSum) {
        for (f, c) in other.iter() {
            self.add_term(f.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &FormalSum, factor: &Q) {
        for (f, c) in other.iter() {
            self.add_term(f.clone(), c.clone() * factor);
        }
    }

    pub fn scale(&mut self, factor: &Q) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for (_, c) in self.terms.values_mut() {
            *c *= factor;
        }
    }

    pub fn coeff(&self, key: &str) -> Q {
        self.terms
            .get(key)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(q_zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Forest, &Q)> {
        self.terms.values().map(|(f, c)| (f, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest term size in half-units.
    pub fn max_size2(&self) -> u32 {
        self.iter().map(|(f, _)| f.size2()).max().unwrap_or(0)
    }

    /// Drops all terms of size above the bound.
    pub fn truncate(&self, max_size2: u32) -> FormalSum {
        let mut out = FormalSum::zero();
        for (f, c) in self.iter() {
            if f.size2() <= max_size2 {
                out.add_term(f.clone(), c.clone());
            }
        }
        out
    }
}

/// Sum of ordered tensor pairs of forests, the output of the coproduct.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorSum {
    terms: BTreeMap<(String, String), (Forest, Forest, Q)>,
}

impl TensorSum {
    pub fn add_term(&mut self, left: Forest, right: Forest, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (left.key().to_string(), right.key().to_string());
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| (left, right, q_zero()));
        entry.2 += c;
        if entry.2.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, left_key: &str, right_key: &str) -> Q {
        self.terms
            .get(&(left_key.to_string(), right_key.to_string()))
            .map(|(_, _, c)| c.clone())
            .unwrap_or_else(q_zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Forest, &Forest, &Q)> {
        self.terms.values().map(|(l, r, c)| (l, r, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

/// Total coefficient functions on forests, table- or rule-backed; the domain
/// is canonical forests only.
pub trait CoefficientMap {
    fn coeff(&self, f: &Forest) -> Q;
}

impl<F: Fn(&Forest) -> Q> CoefficientMap for F {
    fn coeff(&self, f: &Forest) -> Q {
        self(f)
    }
}

/// The counit: 1 on the empty forest, 0 elsewhere.
pub struct Counit;

impl CoefficientMap for Counit {
    fn coeff(&self, f: &Forest) -> Q {
        if f.is_empty() {
            q_one()
        } else {
            q_zero()
        }
    }
}

/// Table-backed map, defaulting to 0 off the table. The empty key holds the
/// value on the empty forest.
#[derive(Debug, Clone, Default)]
pub struct TableMap {
    pub table: BTreeMap<String, Q>,
}

impl CoefficientMap for TableMap {
    fn coeff(&self, f: &Forest) -> Q {
        self.table.get(f.key()).cloned().unwrap_or_else(q_zero)
    }
}

/// Grafting of one forest onto another: every tree of the left operand
/// attaches its root below some vertex of the right operand, in all ways;
/// attachments onto grafted or liana vertices vanish; rootless components of
/// the left operand concatenate.
pub fn graft_forests(a: &Forest, b: &Forest) -> FormalSum {
    attach_sum(a, b, false)
}

/// Bilinear extension of [`graft_forests`].
pub fn graft(a: &FormalSum, b: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (fa, ca) in a.iter() {
        for (fb, cb) in b.iter() {
            out.add_scaled(&graft_forests(fa, fb), &(ca.clone() * cb));
        }
    }
    out
}

/// Composition product computed directly: like grafting, but each tree of
/// the left operand may also stay unattached (concatenate). This is the
/// labeled-sum route, kept independent of [`gl_product`] as a cross-check.
pub fn gl_product_direct(a: &FormalSum, b: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (fa, ca) in a.iter() {
        for (fb, cb) in b.iter() {
            out.add_scaled(&attach_sum(fa, fb, true), &(ca.clone() * cb));
        }
    }
    out
}

fn attach_sum(a: &Forest, b: &Forest, allow_concat: bool) -> FormalSum {
    let roots = a.roots();
    let targets: Vec<Option<usize>> = {
        let mut t: Vec<Option<usize>> = b
            .vertices()
            .filter(|&v| b.deco(v) == Deco::Black)
            .map(Some)
            .collect();
        if allow_concat {
            t.push(None);
        }
        t
    };
    if !roots.is_empty() && targets.is_empty() {
        return FormalSum::zero();
    }
    let shift = b.liana_labels().iter().max().copied().unwrap_or(0);
    let nb = b.len();
    let m = roots.len();
    let mut out = FormalSum::zero();
    let mut assignment = vec![0usize; m];
    loop {
        let mut parents: Vec<Option<u32>> =
            (0..nb).map(|v| b.parent(v).map(|p| p as u32)).collect();
        let mut decos: Vec<Deco> = b.vertices().map(|v| b.deco(v)).collect();
        for v in a.vertices() {
            parents.push(a.parent(v).map(|p| (p + nb) as u32));
            decos.push(match a.deco(v) {
                Deco::Liana(k) => Deco::Liana(k + shift),
                d => d,
            });
        }
        for (i, &r) in roots.iter().enumerate() {
            if let Some(target) = targets[assignment[i]] {
                parents[nb + r] = Some(target as u32);
            }
        }
        let (f, _) = canonicalize_parts(&parents, &decos);
        out.add_term(f, q_one());

        // next assignment in mixed radix; done once every slot wraps
        let mut i = 0;
        while i < m {
            assignment[i] += 1;
            if assignment[i] < targets.len() {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == m {
            return out;
        }
    }
}

/// Root-splitting coproduct. Sums over parent-closed vertex subsets `S`
/// (the right factor); the complement keeps cut branches as new roots. A
/// term is kept only when each factor is empty or has a root, and no liana
/// has its two ends separated.
pub fn ck_coproduct(f: &Forest) -> TensorSum {
    let n = f.len();
    assert!(n <= 24, "coproduct limited to 24 vertices");
    let liana_pairs: Vec<(usize, usize)> = f
        .liana_labels()
        .iter()
        .map(|&k| f.liana_ends(k).unwrap())
        .collect();
    let mut out = TensorSum::default();
    'mask: for mask in 0u32..(1u32 << n) {
        let in_s = |v: usize| mask >> v & 1 == 1;
        for v in 0..n {
            if in_s(v) {
                if let Some(p) = f.parent(v) {
                    if !in_s(p) {
                        continue 'mask;
                    }
                }
            }
        }
        for &(a, b) in &liana_pairs {
            if in_s(a) != in_s(b) {
                continue 'mask;
            }
        }
        let s_count = (0..n).filter(|&v| in_s(v)).count();
        // right factor: roots survive restriction unchanged
        if s_count > 0 && !(0..n).any(|v| in_s(v) && f.parent(v).is_none()) {
            continue;
        }
        // left factor: a vertex cut from a parent in S becomes a root
        if s_count < n
            && !(0..n).any(|v| {
                !in_s(v) && f.parent(v).map_or(true, |p| in_s(p))
            })
        {
            continue;
        }
        let right = restrict(f, &|v| in_s(v));
        let left = restrict(f, &|v| !in_s(v));
        out.add_term(left, right, q_one());
    }
    out
}

fn restrict(f: &Forest, keep: &dyn Fn(usize) -> bool) -> Forest {
    let mut index = vec![usize::MAX; f.len()];
    let mut decos = Vec::new();
    for v in f.vertices() {
        if keep(v) {
            index[v] = decos.len();
            decos.push(f.deco(v));
        }
    }
    let mut parents: Vec<Option<u32>> = vec![None; decos.len()];
    for v in f.vertices() {
        if !keep(v) {
            continue;
        }
        if let Some(p) = f.parent(v) {
            if keep(p) {
                parents[index[v]] = Some(index[p] as u32);
            }
        }
    }
    canonicalize_parts(&parents, &decos).0
}

/// Dual of the coproduct: the coefficient of `pi` in `a ⊛ b` is the
/// coefficient of `a ⊗ b` in the coproduct of `pi`. Computed by enumerating
/// candidate forests of the combined size and dualizing.
pub fn dual_ck(a: &FormalSum, b: &FormalSum, bound: Size) -> Result<FormalSum> {
    let mut out = FormalSum::zero();
    let mut delta_cache: BTreeMap<String, TensorSum> = BTreeMap::new();
    for (fa, ca) in a.iter() {
        for (fb, cb) in b.iter() {
            let size2 = fa.size2() + fb.size2();
            if size2 > bound.0 {
                return Err(ForestError::SizeBoundExceeded {
                    size: Size(size2).to_string(),
                    bound: bound.to_string(),
                });
            }
            if size2 == 0 {
                out.add_term(Forest::empty(), ca.clone() * cb);
                continue;
            }
            let candidates = decorated_candidates(
                size2,
                fa.count_grafted() + fb.count_grafted(),
                fa.count_liana_ends() + fb.count_liana_ends(),
                fa.cycle_count() + fb.cycle_count(),
            );
            for cand in candidates {
                let delta = delta_cache
                    .entry(cand.key().to_string())
                    .or_insert_with(|| ck_coproduct(&cand));
                let c = delta.coeff(fa.key(), fb.key());
                if !c.is_zero() {
                    out.add_term(cand.clone(), c * ca * cb);
                }
            }
        }
    }
    Ok(out)
}

/// Diagonal scaling by the symmetry coefficient.
pub fn a_sigma(s: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (f, c) in s.iter() {
        let sg = Q::from_integer(sigma(f).into());
        out.add_term(f.clone(), c.clone() * sg);
    }
    out
}

/// Exact inverse of [`a_sigma`].
pub fn a_sigma_inv(s: &FormalSum) -> FormalSum {
    let mut out = FormalSum::zero();
    for (f, c) in s.iter() {
        let sg = Q::from_integer(sigma(f).into());
        out.add_term(f.clone(), c.clone() / sg);
    }
    out
}

/// Composition product, computed through the dual coproduct conjugated by
/// the sigma scaling. [`gl_product_direct`] is the independent route.
pub fn gl_product(a: &FormalSum, b: &FormalSum, bound: Size) -> Result<FormalSum> {
    Ok(a_sigma_inv(&dual_ck(&a_sigma(a), &a_sigma(b), bound)?))
}

/// The sum of all family members up to `max_size` weighted by
/// `a(pi)/sigma(pi)`. The empty forest is not included; series that need
/// the unit term add it explicitly.
pub fn delta_sigma(
    map: &dyn CoefficientMap,
    max_size: Size,
    family: crate::enumerate::Family,
    aroma_free: bool,
) -> Result<FormalSum> {
    let forests = crate::enumerate::enumerate(max_size, family, aroma_free)?;
    let mut out = FormalSum::zero();
    for f in forests {
        let sg = Q::from_integer(sigma(&f).into());
        let c = map.coeff(&f) / sg;
        out.add_term(f, c);
    }
    Ok(out)
}

/// Convolution of coefficient maps along the coproduct:
/// `(a * b)(pi) = sum a(left) b(right)`.
pub struct Convolution<'a> {
    pub a: &'a dyn CoefficientMap,
    pub b: &'a dyn CoefficientMap,
}

impl CoefficientMap for Convolution<'_> {
    fn coeff(&self, f: &Forest) -> Q {
        let mut total = q_zero();
        for (left, right, c) in ck_coproduct(f).iter() {
            let va = self.a.coeff(left);
            if va.is_zero() {
                continue;
            }
            let vb = self.b.coeff(right);
            total += va * vb * c;
        }
        total
    }
}

pub fn convolve<'a>(a: &'a dyn CoefficientMap, b: &'a dyn CoefficientMap) -> Convolution<'a> {
    Convolution { a, b }
}

/// JSON rendering of a formal sum: an array of `{forest, coeff}` objects
/// with exact `p/q` coefficients.
pub fn formal_sum_json(s: &FormalSum) -> serde_json::Value {
    serde_json::Value::Array(
        s.iter()
            .map(|(f, c)| {
                serde_json::json!({
                    "forest": f.key(),
                    "coeff": crate::rational::format_q(c),
                })
            })
            .collect(),
    )
}

pub fn tensor_sum_json(s: &TensorSum) -> serde_json::Value {
    serde_json::Value::Array(
        s.iter()
            .map(|(l, r, c)| {
                serde_json::json!({
                    "left": l.key(),
                    "right": r.key(),
                    "coeff": crate::rational::format_q(c),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::concat;
    use crate::rational::qi;
    use crate::text::parse;

    fn sum(key: &str) -> FormalSum {
        FormalSum::from_forest(parse(key).unwrap())
    }

    #[test]
    fn grafting_single_tree() {
        let got = graft(&sum("b"), &sum("b[b]"));
        assert_eq!(got.coeff("b[b[b]]"), qi(1));
        assert_eq!(got.coeff("b[b,b]"), qi(1));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn grafting_onto_empty_vanishes() {
        assert!(graft(&sum("b"), &sum("")).is_zero());
        let pi = sum("b[x,b]");
        assert_eq!(graft(&sum(""), &pi), pi);
    }

    #[test]
    fn grafting_recursions_hold() {
        // (tau . pi1) graft pi2 = tau graft (pi1 graft pi2) - (tau graft pi1) graft pi2
        let cases = [
            ("b", "b", "b[b]"),
            ("b[x]", "b", "b"),
            ("b", "b[1,1]", "b[b]"),
            ("x", "b", "b[b,b]"),
        ];
        for (tau_k, p1_k, p2_k) in cases {
            let tau = sum(tau_k);
            let p1 = sum(p1_k);
            let p2 = sum(p2_k);
            let concat_t_p1 = FormalSum::from_forest(concat(
                &parse(tau_k).unwrap(),
                &parse(p1_k).unwrap(),
            ));
            let lhs = graft(&concat_t_p1, &p2);
            let mut rhs = graft(&tau, &graft(&p1, &p2));
            rhs.add_scaled(&graft(&graft(&tau, &p1), &p2), &qi(-1));
            assert_eq!(lhs, rhs, "forest recursion on ({tau_k},{p1_k},{p2_k})");
        }
        // tau graft (pi1 . pi2) = (tau graft pi1) . pi2 + pi1 . (tau graft pi2)
        for (tau_k, p1_k, p2_k) in [("b", "b", "b[b]"), ("x", "b[b]", "b")] {
            let tau = sum(tau_k);
            let p1 = parse(p1_k).unwrap();
            let p2 = parse(p2_k).unwrap();
            let lhs = graft(&tau, &FormalSum::from_forest(concat(&p1, &p2)));
            let mut rhs = FormalSum::zero();
            for (f, c) in graft(&tau, &FormalSum::from_forest(p1.clone())).iter() {
                rhs.add_term(concat(f, &p2), c.clone());
            }
            for (f, c) in graft(&tau, &FormalSum::from_forest(p2.clone())).iter() {
                rhs.add_term(concat(&p1, f), c.clone());
            }
            assert_eq!(lhs, rhs, "derivation rule on ({tau_k},{p1_k},{p2_k})");
        }
    }

    #[test]
    fn pre_lie_identity() {
        let trees = ["b", "b[b]", "b[x]", "b[b,b]"];
        for f in trees {
            for g in trees {
                for h in trees {
                    let (sf, sg, sh) = (sum(f), sum(g), sum(h));
                    let mut lhs = graft(&sf, &graft(&sg, &sh));
                    lhs.add_scaled(&graft(&graft(&sf, &sg), &sh), &qi(-1));
                    let mut rhs = graft(&sg, &graft(&sf, &sh));
                    rhs.add_scaled(&graft(&graft(&sg, &sf), &sh), &qi(-1));
                    assert_eq!(lhs, rhs, "pre-Lie on ({f},{g},{h})");
                }
            }
        }
    }

    #[test]
    fn coproduct_of_single_vertex() {
        let d = ck_coproduct(&parse("b").unwrap());
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff("", "b"), qi(1));
        assert_eq!(d.coeff("b", ""), qi(1));
    }

    #[test]
    fn coproduct_never_splits_a_liana() {
        let d = ck_coproduct(&parse("b[1,1]").unwrap());
        assert_eq!(d.len(), 3);
        assert_eq!(d.coeff("1,1", "b"), qi(1));
        assert_eq!(d.coeff("", "b[1,1]"), qi(1));
        assert_eq!(d.coeff("b[1,1]", ""), qi(1));
        for (l, r, _) in d.iter() {
            assert_eq!(l.count_liana_ends() % 2, 0);
            assert_eq!(r.count_liana_ends() % 2, 0);
        }
    }

    #[test]
    fn coproduct_multiplicity() {
        let d = ck_coproduct(&parse("b,b").unwrap());
        assert_eq!(d.coeff("b", "b"), qi(2));
    }

    #[test]
    fn dual_ck_unit_and_small_case() {
        let pi = sum("b[x,b]");
        let got = dual_ck(&sum(""), &pi, Size(8)).unwrap();
        assert_eq!(got, pi);
        let got = dual_ck(&sum("b"), &sum("b"), Size(8)).unwrap();
        assert_eq!(got.coeff("b[b]"), qi(1));
        assert_eq!(got.coeff("b,b"), qi(2));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn gl_product_routes_agree_on_examples() {
        let pairs = [
            ("b", "b"),
            ("b", "b[b]"),
            ("b,b", "b"),
            ("b[1,1]", "b"),
            ("1,1", "b"),
            ("x", "b[x]"),
        ];
        for (a, b) in pairs {
            let lhs = gl_product(&sum(a), &sum(b), Size(8)).unwrap();
            let rhs = gl_product_direct(&sum(a), &sum(b));
            assert_eq!(lhs, rhs, "routes disagree on ({a},{b})");
        }
    }

    #[test]
    fn gl_unit_laws() {
        let pi = sum("b[b,x]");
        assert_eq!(gl_product(&sum(""), &pi, Size(8)).unwrap(), pi);
        assert_eq!(gl_product(&pi, &sum(""), Size(8)).unwrap(), pi);
    }

    #[test]
    fn gl_aroma_concatenates() {
        // rootless components of the left operand never attach
        let got = gl_product_direct(&sum("(b),b"), &sum("b"));
        // the single tree of the left attaches or concatenates
        assert_eq!(got.coeff("(b),b,b"), qi(1));
        assert_eq!(got.coeff("(b),b[b]"), qi(1));
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn convolution_counit_is_identity() {
        let table = TableMap {
            table: [("b".to_string(), qi(3)), ("b[b]".to_string(), qi(5))]
                .into_iter()
                .collect(),
        };
        let conv = convolve(&table, &Counit);
        for key in ["b", "b[b]", "b[1,1]"] {
            let f = parse(key).unwrap();
            assert_eq!(conv.coeff(&f), table.coeff(&f));
        }
        let conv = convolve(&Counit, &table);
        for key in ["b", "b[b]"] {
            let f = parse(key).unwrap();
            assert_eq!(conv.coeff(&f), table.coeff(&f));
        }
    }

    #[test]
    fn convolution_on_primitive() {
        // maps with value 1 on the empty forest behave additively on b
        let a = TableMap {
            table: [("".to_string(), qi(1)), ("b".to_string(), qi(4))]
                .into_iter()
                .collect(),
        };
        let b = TableMap {
            table: [("".to_string(), qi(1)), ("b".to_string(), qi(9))]
                .into_iter()
                .collect(),
        };
        let conv = convolve(&a, &b);
        assert_eq!(conv.coeff(&parse("b").unwrap()), qi(13));
    }

    #[test]
    fn a_sigma_examples() {
        let s = a_sigma(&sum("b,b"));
        assert_eq!(s.coeff("b,b"), qi(2));
        let s = a_sigma(&sum("b[1,1,2,2]"));
        assert_eq!(s.coeff("b[1,1,2,2]"), qi(8));
        let mut x = sum("b[x,x]");
        x.add_scaled(&sum("b,b"), &qi(7));
        assert_eq!(a_sigma_inv(&a_sigma(&x)), x);
    }

    #[test]
    fn delta_sigma_constant_map() {
        let ones = |_: &Forest| qi(1);
        let s = delta_sigma(
            &ones,
            Size(2),
            crate::enumerate::Family::ExoticForests,
            true,
        )
        .unwrap();
        assert_eq!(s.coeff("b"), qi(1));
        assert_eq!(s.coeff("1,1"), crate::rational::q(1, 2));
        assert_eq!(s.len(), 2);
        let zero = |_: &Forest| q_zero();
        let s = delta_sigma(
            &zero,
            Size(2),
            crate::enumerate::Family::ExoticForests,
            true,
        )
        .unwrap();
        assert!(s.is_zero());
    }

    /// Composition in the vertex-labeled algebra, where duplicate labels
    /// send a product to zero. Used to pin the displayed labeled examples.
    mod labeled {
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
        pub struct LTree {
            pub label: u32,
            pub children: Vec<LTree>,
        }

        pub fn t(label: u32, children: Vec<LTree>) -> LTree {
            LTree { label, children }
        }

        fn labels(t: &LTree, out: &mut Vec<u32>) {
            out.push(t.label);
            for c in &t.children {
                labels(c, out);
            }
        }

        /// All ways to attach `tree` below one vertex of `host`.
        fn attachments(host: &LTree, tree: &LTree) -> Vec<LTree> {
            let mut out = Vec::new();
            let mut with_here = host.clone();
            with_here.children.push(tree.clone());
            with_here.children.sort();
            out.push(with_here);
            for (i, c) in host.children.iter().enumerate() {
                for sub in attachments(c, tree) {
                    let mut copy = host.clone();
                    copy.children[i] = sub;
                    copy.children.sort();
                    out.push(copy);
                }
            }
            out
        }

        /// Labeled composition of single trees: zero on duplicate labels,
        /// otherwise concatenation plus every attachment.
        pub fn compose(a: &LTree, b: &LTree) -> Vec<Vec<LTree>> {
            let mut la = Vec::new();
            let mut lb = Vec::new();
            labels(a, &mut la);
            labels(b, &mut lb);
            if la.iter().any(|x| lb.contains(x)) {
                return Vec::new();
            }
            let mut out = vec![{
                let mut f = vec![a.clone(), b.clone()];
                f.sort();
                f
            }];
            for host in attachments(b, a) {
                out.push(vec![host]);
            }
            out
        }
    }

    #[test]
    fn labeled_composition_examples() {
        use labeled::*;
        // t1[t2] with t3[t4,t5]: concatenation plus one attachment per vertex
        let left = t(1, vec![t(2, vec![])]);
        let right = t(3, vec![t(4, vec![]), t(5, vec![])]);
        let got = compose(&left, &right);
        assert_eq!(got.len(), 4);
        // duplicate label kills the product
        let left = t(1, vec![]);
        let right = t(3, vec![t(1, vec![])]);
        assert!(compose(&left, &right).is_empty());
    }
}
