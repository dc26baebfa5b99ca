//! Stochastic Runge-Kutta tableaus and elementary weights.
//!
//! The weight of a forest sums over all stage assignments of its black
//! vertices: roots contribute `b_i`, a black child at stage `j` under a
//! vertex at stage `i` contributes `a_ij`, a grafted or liana child under a
//! vertex at stage `i` contributes `d_i`, grafted roots contribute 1, and
//! any forest containing an aroma has weight zero.

use crate::error::{ForestError, Result};
use crate::forest::{canonicalize_parts, Deco, Forest};
use crate::rational::{format_q, parse_q, q_abs, q_one, q_zero, Q};
use num::{One, Signed, Zero};
use rand::Rng;

/// Coefficients of a single-noise stochastic Runge-Kutta scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    pub s: usize,
    pub b: Vec<Q>,
    pub a: Vec<Vec<Q>>,
    pub d: Vec<Q>,
}

impl Tableau {
    pub fn new(b: Vec<Q>, a: Vec<Vec<Q>>, d: Vec<Q>) -> Result<Tableau> {
        let s = b.len();
        if s == 0 {
            return Err(ForestError::DimensionMismatch("empty tableau".into()));
        }
        if a.len() != s || a.iter().any(|row| row.len() != s) || d.len() != s {
            return Err(ForestError::DimensionMismatch(format!(
                "expected {s} stages in every coefficient block"
            )));
        }
        Ok(Tableau { s, b, a, d })
    }

    /// Explicit one-stage scheme: a single drift step plus the noise term.
    pub fn euler_maruyama() -> Tableau {
        Tableau {
            s: 1,
            b: vec![q_one()],
            a: vec![vec![q_zero()]],
            d: vec![q_zero()],
        }
    }

    /// Small random rational entries, for seeded property checks.
    pub fn random<R: Rng>(s: usize, rng: &mut R) -> Tableau {
        let entry = |rng: &mut R| {
            let num = rng.gen_range(-2i64..=2);
            let den = rng.gen_range(1i64..=3);
            crate::rational::q(num, den)
        };
        Tableau {
            s,
            b: (0..s).map(|_| entry(rng)).collect(),
            a: (0..s).map(|_| (0..s).map(|_| entry(rng)).collect()).collect(),
            d: (0..s).map(|_| entry(rng)).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": self.s,
            "b": self.b.iter().map(|x| format_q(x)).collect::<Vec<_>>(),
            "a": self.a.iter().map(|row| row.iter().map(|x| format_q(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "d": self.d.iter().map(|x| format_q(x)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Tableau> {
        fn scalar(v: &serde_json::Value) -> Result<Q> {
            match v {
                serde_json::Value::String(s) => {
                    parse_q(s).ok_or_else(|| ForestError::DimensionMismatch(format!(
                        "bad rational {s:?}"
                    )))
                }
                serde_json::Value::Number(n) => {
                    let i = n.as_i64().ok_or_else(|| {
                        ForestError::DimensionMismatch(format!("bad number {n}"))
                    })?;
                    Ok(crate::rational::qi(i))
                }
                other => Err(ForestError::DimensionMismatch(format!(
                    "expected rational, got {other}"
                ))),
            }
        }
        fn vector(v: &serde_json::Value) -> Result<Vec<Q>> {
            v.as_array()
                .ok_or_else(|| ForestError::DimensionMismatch("expected array".into()))?
                .iter()
                .map(scalar)
                .collect()
        }
        let b = vector(&v["b"])?;
        let d = vector(&v["d"])?;
        let a = v["a"]
            .as_array()
            .ok_or_else(|| ForestError::DimensionMismatch("expected matrix a".into()))?
            .iter()
            .map(vector)
            .collect::<Result<Vec<_>>>()?;
        Tableau::new(b, a, d)
    }
}

/// Elementary weight of a forest. Liana pairings do not matter: the value
/// factors through the forgetful map, so exotic forests are accepted.
pub fn elementary_weight(f: &Forest, t: &Tableau) -> Q {
    if f.has_aroma() {
        return q_zero();
    }
    let mut total = q_one();
    for root in f.roots() {
        total *= match f.deco(root) {
            Deco::Black => {
                let w = stage_weights(f, root, t);
                (0..t.s).map(|i| t.b[i].clone() * &w[i]).sum()
            }
            _ => q_one(),
        };
        if total.is_zero() {
            return total;
        }
    }
    total
}

/// Weight of the subtree at black vertex `v`, per stage of `v`.
fn stage_weights(f: &Forest, v: usize, t: &Tableau) -> Vec<Q> {
    let mut w = vec![q_one(); t.s];
    for u in f.children(v) {
        match f.deco(u) {
            Deco::Black => {
                let wu = stage_weights(f, u, t);
                for i in 0..t.s {
                    let sum: Q = (0..t.s).map(|j| t.a[i][j].clone() * &wu[j]).sum();
                    w[i] *= sum;
                }
            }
            // grafted and liana children contribute d at the parent stage
            _ => {
                for i in 0..t.s {
                    w[i] *= &t.d[i];
                }
            }
        }
    }
    w
}

/// Direct sum over all stage decorations of the black vertices; the oracle
/// for [`elementary_weight`].
pub fn elementary_weight_bruteforce(f: &Forest, t: &Tableau) -> Q {
    if f.has_aroma() {
        return q_zero();
    }
    let blacks: Vec<usize> = f
        .vertices()
        .filter(|&v| f.deco(v) == Deco::Black)
        .collect();
    let pos = |v: usize| blacks.iter().position(|&b| b == v).unwrap();
    let mut total = q_zero();
    let mut stages = vec![0usize; blacks.len()];
    loop {
        let mut term = q_one();
        for (bi, &v) in blacks.iter().enumerate() {
            match f.parent(v) {
                None => term *= &t.b[stages[bi]],
                Some(p) => term *= &t.a[stages[pos(p)]][stages[bi]],
            }
        }
        for v in f.vertices() {
            if f.deco(v).class() != 0 {
                if let Some(p) = f.parent(v) {
                    term *= &t.d[stages[pos(p)]];
                }
            }
        }
        total += term;
        let mut i = 0;
        while i < stages.len() {
            stages[i] += 1;
            if stages[i] < t.s {
                break;
            }
            stages[i] = 0;
            i += 1;
        }
        if i == stages.len() {
            return total;
        }
    }
}

/// The coefficient map of a stochastic Runge-Kutta scheme: elementary
/// weights on grafted forests, zero on aromas, one on the empty forest.
pub struct SrkWeightMap {
    pub tableau: Tableau,
}

impl crate::series::CoefficientMap for SrkWeightMap {
    fn coeff(&self, f: &Forest) -> Q {
        elementary_weight(f, &self.tableau)
    }
}

/// Symbolic monomial of a weight: the grafted image of the forest with
/// isolated grafted roots dropped (they always contribute the factor 1).
/// Two exotic forests with isomorphic grafted images share a symbol. The
/// empty key is the constant monomial 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightSymbol {
    pub key: String,
}

pub fn weight_symbol(f: &Forest) -> WeightSymbol {
    let keep: Vec<bool> = f
        .vertices()
        .map(|v| !(f.deco(v).class() != 0 && f.parent(v).is_none()))
        .collect();
    let mut index = vec![usize::MAX; f.len()];
    let mut decos = Vec::new();
    for v in f.vertices() {
        if keep[v] {
            index[v] = decos.len();
            decos.push(match f.deco(v) {
                Deco::Liana(_) => Deco::Grafted,
                d => d,
            });
        }
    }
    let mut parents: Vec<Option<u32>> = vec![None; decos.len()];
    for v in f.vertices() {
        if keep[v] {
            if let Some(p) = f.parent(v) {
                parents[index[v]] = Some(index[p] as u32);
            }
        }
    }
    let (g, _) = canonicalize_parts(&parents, &decos);
    WeightSymbol {
        key: g.key().to_string(),
    }
}

/// Evaluates a monomial key on a tableau.
pub fn symbol_value(symbol: &WeightSymbol, t: &Tableau) -> Q {
    if symbol.key.is_empty() {
        return q_one();
    }
    let f = crate::text::parse(&symbol.key).expect("weight symbol parses");
    elementary_weight(&f, t)
}

const INDEX_LETTERS: [&str; 9] = ["i", "j", "k", "l", "m", "n", "p", "q", "r"];

/// Renders a monomial as an index sum, e.g. `b_i d_i^2 a_ij`.
pub fn render_symbol(symbol: &WeightSymbol, latex: bool) -> String {
    if symbol.key.is_empty() {
        return "1".to_string();
    }
    let f = crate::text::parse(&symbol.key).expect("weight symbol parses");
    let mut letters = vec![String::new(); f.len()];
    let mut next = 0usize;
    for v in f.vertices() {
        if f.deco(v) == Deco::Black {
            letters[v] = INDEX_LETTERS[next.min(INDEX_LETTERS.len() - 1)].to_string();
            next += 1;
        }
    }
    let mut factors: Vec<String> = Vec::new();
    fn visit(
        f: &Forest,
        v: usize,
        letters: &[String],
        latex: bool,
        factors: &mut Vec<String>,
    ) {
        let me = &letters[v];
        match f.parent(v) {
            None => factors.push(if latex {
                format!("b_{{{me}}}")
            } else {
                format!("b_{me}")
            }),
            Some(p) => {
                let pl = &letters[p];
                factors.push(if latex {
                    format!("a_{{{pl}{me}}}")
                } else {
                    format!("a_{pl}{me}")
                });
            }
        }
        let grafted = f
            .children(v)
            .iter()
            .filter(|&&u| f.deco(u).class() != 0)
            .count();
        if grafted > 0 {
            let base = if latex {
                format!("d_{{{me}}}")
            } else {
                format!("d_{me}")
            };
            factors.push(if grafted == 1 {
                base
            } else {
                format!("{base}^{grafted}")
            });
        }
        for u in f.children(v) {
            if f.deco(u) == Deco::Black {
                visit(f, u, letters, latex, factors);
            }
        }
    }
    for root in f.roots() {
        if f.deco(root) == Deco::Black {
            visit(&f, root, &letters, latex, &mut factors);
        }
    }
    let body = factors.join(" ");
    if latex {
        format!("\\sum {body}")
    } else {
        format!("Σ {body}")
    }
}

/// Renders a symbolic combination `coeff * monomial + ...` deterministically:
/// monomials by descending size then key, the constant last.
pub fn render_combination(terms: &[(WeightSymbol, Q)], latex: bool) -> String {
    let mut sorted: Vec<&(WeightSymbol, Q)> = terms.iter().filter(|(_, c)| !c.is_zero()).collect();
    sorted.sort_by(|(sa, _), (sb, _)| {
        let size = |s: &WeightSymbol| {
            if s.key.is_empty() {
                u32::MAX // constants last
            } else {
                0
            }
        };
        (size(sa), sa.key.clone()).cmp(&(size(sb), sb.key.clone()))
    });
    if sorted.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (sym, c)) in sorted.iter().enumerate() {
        let neg = c.is_negative();
        let mag = q_abs(c);
        if i == 0 {
            if neg {
                out.push_str(if latex { "- " } else { "− " });
            }
        } else if neg {
            out.push_str(if latex { " - " } else { " − " });
        } else {
            out.push_str(" + ");
        }
        let body = render_symbol(sym, latex);
        if sym.key.is_empty() {
            out.push_str(&format_q(&mag));
        } else if mag.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{} {}", format_q(&mag), body));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::text::parse;
    use rand::SeedableRng;

    #[test]
    fn weights_on_value_list() {
        let t = Tableau::random(3, &mut rand_chacha::ChaCha8Rng::seed_from_u64(7));
        let sum_b: Q = t.b.iter().cloned().sum();
        assert_eq!(elementary_weight(&parse("x").unwrap(), &t), qi(1));
        assert_eq!(elementary_weight(&parse("b").unwrap(), &t), sum_b);
        let bd: Q = (0..3).map(|i| t.b[i].clone() * &t.d[i]).sum();
        assert_eq!(elementary_weight(&parse("b[x]").unwrap(), &t), bd);
        let ba: Q = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| t.b[i].clone() * &t.a[i][j])
            .sum();
        assert_eq!(elementary_weight(&parse("b[b]").unwrap(), &t), ba);
        let bda: Q = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| t.b[i].clone() * &t.d[i] * &t.a[i][j])
            .sum();
        assert_eq!(elementary_weight(&parse("b[x,b],x").unwrap(), &t), bda);
        assert_eq!(elementary_weight(&parse("(b),b").unwrap(), &t), qi(0));
    }

    #[test]
    fn factored_matches_bruteforce() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let t = Tableau::random(3, &mut rng);
        let forests = crate::enumerate::enumerate(
            crate::forest::Size(6),
            crate::enumerate::Family::GraftedForests,
            true,
        )
        .unwrap();
        for f in forests.iter().take(40) {
            assert_eq!(
                elementary_weight(f, &t),
                elementary_weight_bruteforce(f, &t),
                "weight mismatch on {}",
                f.key()
            );
        }
    }

    #[test]
    fn weight_is_a_character() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let t = Tableau::random(2, &mut rng);
        let parts = ["b", "b[x]", "b[b]", "x", "b[1,1]"];
        for pa in parts {
            for pb in parts {
                let fa = parse(pa).unwrap();
                let fb = parse(pb).unwrap();
                let cat = crate::forest::concat(&fa, &fb);
                assert_eq!(
                    elementary_weight(&cat, &t),
                    elementary_weight(&fa, &t) * elementary_weight(&fb, &t),
                    "character property on ({pa},{pb})"
                );
            }
        }
    }

    #[test]
    fn symbols_factor_through_forgetting() {
        let a = weight_symbol(&parse("b[1,1]").unwrap());
        let b = weight_symbol(&parse("b[x,x]").unwrap());
        assert_eq!(a, b);
        // isolated grafted roots are dropped
        let c = weight_symbol(&parse("b[1],1").unwrap());
        assert_eq!(c.key, "b[x]");
        let d = weight_symbol(&parse("1,1").unwrap());
        assert_eq!(d.key, "");
    }

    #[test]
    fn rendering_examples() {
        assert_eq!(
            render_symbol(&weight_symbol(&parse("b[x,x]").unwrap()), false),
            "Σ b_i d_i^2"
        );
        assert_eq!(
            render_symbol(&weight_symbol(&parse("b[b[x]]").unwrap()), false),
            "Σ b_i a_ij d_j"
        );
        assert_eq!(
            render_symbol(&weight_symbol(&parse("b[b]").unwrap()), true),
            "\\sum b_{i} a_{ij}"
        );
    }

    #[test]
    fn euler_maruyama_values() {
        let t = Tableau::euler_maruyama();
        assert_eq!(elementary_weight(&parse("b").unwrap(), &t), qi(1));
        assert_eq!(elementary_weight(&parse("b[b]").unwrap(), &t), qi(0));
        assert_eq!(elementary_weight(&parse("b[x]").unwrap(), &t), qi(0));
        assert_eq!(elementary_weight(&parse("b,b").unwrap(), &t), qi(1));
    }

    #[test]
    fn tableau_json_round_trip() {
        let t = Tableau::new(
            vec![q(1, 2), q(1, 2)],
            vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)]],
            vec![qi(0), q(1, 2)],
        )
        .unwrap();
        let v = t.to_json();
        let back = Tableau::from_json(&v).unwrap();
        assert_eq!(t, back);
        assert!(Tableau::from_json(&serde_json::json!({"s":2,"b":["1"],"a":[],"d":[]})).is_err());
    }
}
