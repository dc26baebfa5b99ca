//! Independent analytic verification layer.
//!
//! Forests act as differential operators on polynomials for a polynomial
//! gradient field in dimension 1 or 2. All operator algebra is exact over
//! `Q[sqrt(2)]`; the only floating point is the final quadrature of
//! `polynomial * exp(-V)` against the stationary density.

use crate::error::{ForestError, Result};
use crate::forest::{Deco, Forest};
use crate::rational::{q, q_to_f64, q_zero, qi, Q};
use crate::series::{CoefficientMap, FormalSum};
use num::Zero;
use std::collections::{BTreeMap, HashMap};

/// Elements of `Q[sqrt(2)]`, written `a + b*sqrt(2)`. Odd powers of the
/// noise amplitude stay symbolic so every identity is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q2 {
    pub a: Q,
    pub b: Q,
}

impl Q2 {
    pub fn zero() -> Q2 {
        Q2 {
            a: q_zero(),
            b: q_zero(),
        }
    }

    pub fn one() -> Q2 {
        Q2 {
            a: qi(1),
            b: q_zero(),
        }
    }

    pub fn from_q(a: Q) -> Q2 {
        Q2 { a, b: q_zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Q2) -> Q2 {
        Q2 {
            a: self.a.clone() + &o.a,
            b: self.b.clone() + &o.b,
        }
    }

    pub fn mul(&self, o: &Q2) -> Q2 {
        Q2 {
            a: self.a.clone() * &o.a + self.b.clone() * &o.b * qi(2),
            b: self.a.clone() * &o.b + self.b.clone() * &o.a,
        }
    }

    pub fn scale_q(&self, c: &Q) -> Q2 {
        Q2 {
            a: self.a.clone() * c,
            b: self.b.clone() * c,
        }
    }

    /// Multiplies by `sqrt(2)` to the given power.
    pub fn times_sqrt2_pow(&self, k: u32) -> Q2 {
        let whole = qi(2).pow((k / 2) as i32);
        let scaled = self.scale_q(&whole);
        if k % 2 == 0 {
            scaled
        } else {
            Q2 {
                a: scaled.b.clone() * qi(2),
                b: scaled.a,
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        q_to_f64(&self.a) + q_to_f64(&self.b) * std::f64::consts::SQRT_2
    }
}

/// Monomial exponents over at most four variables: `x1, x2, xi1, xi2`.
pub type Mono = [u8; 4];

/// Sparse exact polynomial over `Q[sqrt(2)]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q2>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Q2) -> Poly {
        let mut p = Poly::zero();
        p.add_term([0; 4], c);
        p
    }

    pub fn one() -> Poly {
        Poly::constant(Q2::one())
    }

    pub fn var(i: usize) -> Poly {
        let mut m = [0u8; 4];
        m[i] = 1;
        let mut p = Poly::zero();
        p.add_term(m, Q2::one());
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Q2) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q2::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q2) -> Poly {
        let mut out = Poly::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v.mul(c));
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Poly {
        self.scale(&Q2::from_q(c.clone()))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let mut m = [0u8; 4];
                for i in 0..4 {
                    m[i] = ma[i].checked_add(mb[i]).expect("degree overflow");
                }
                out.add_term(m, ca.mul(cb));
            }
        }
        out
    }

    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[var] -= 1;
            out.add_term(m2, c.scale_q(&qi(m[var] as i64)));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Q2)> {
        self.terms.iter()
    }

    /// Exact evaluation at a rational point (x variables only; any xi
    /// exponents must have been reduced away first).
    pub fn eval_q(&self, x: &[Q]) -> Q2 {
        let mut total = Q2::zero();
        for (m, c) in &self.terms {
            let mut factor = qi(1);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    assert!(i < x.len(), "unreduced variable in evaluation");
                    factor *= x[i].pow(e as i32);
                }
            }
            total = total.add(&c.scale_q(&factor));
        }
        total
    }

    fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (c.to_f64(), *m))
                .collect(),
        }
    }
}

struct CompiledPoly {
    terms: Vec<(f64, Mono)>,
}

impl CompiledPoly {
    fn eval(&self, x: &[f64; 4]) -> f64 {
        let mut total = 0.0;
        for (c, m) in &self.terms {
            let mut t = *c;
            for i in 0..4 {
                if m[i] > 0 {
                    t *= x[i].powi(m[i] as i32);
                }
            }
            total += t;
        }
        total
    }
}

/// A polynomial Langevin test problem: a confining potential, a drift
/// field (the negated gradient, except for the deliberately asymmetric
/// control), and a polynomial test function.
#[derive(Debug, Clone)]
pub struct PolyProblem {
    pub d: usize,
    pub drift: Vec<Poly>,
    pub potential: Poly,
    pub phi: Poly,
    pub gradient_drift: bool,
    pub name: String,
}

fn xp(i: usize, e: u8) -> Poly {
    let mut m = [0u8; 4];
    m[i] = e;
    let mut p = Poly::zero();
    p.add_term(m, Q2::one());
    p
}

impl PolyProblem {
    /// `V = x^4/4 + x^2/2` on the line, `phi = x^3 + x`.
    pub fn quartic_1d() -> PolyProblem {
        let v = xp(0, 4).scale_q(&q(1, 4)).add(&xp(0, 2).scale_q(&q(1, 2)));
        let f0 = xp(0, 3).scale_q(&qi(-1)).add(&xp(0, 1).scale_q(&qi(-1)));
        let phi = xp(0, 3).add(&xp(0, 1));
        PolyProblem {
            d: 1,
            drift: vec![f0],
            potential: v,
            phi,
            gradient_drift: true,
            name: "quartic-1d".into(),
        }
    }

    /// Coupled quartic well in the plane; the coupling keeps the mixed
    /// derivatives of the drift nonzero so symmetry actually matters.
    pub fn quartic_2d() -> PolyProblem {
        // V = x^4/4 + y^4/4 + x^2/2 + y^2/2 + x y^2 / 4
        let v = xp(0, 4)
            .scale_q(&q(1, 4))
            .add(&xp(1, 4).scale_q(&q(1, 4)))
            .add(&xp(0, 2).scale_q(&q(1, 2)))
            .add(&xp(1, 2).scale_q(&q(1, 2)))
            .add(&xp(0, 1).mul(&xp(1, 2)).scale_q(&q(1, 4)));
        let f0 = xp(0, 3)
            .scale_q(&qi(-1))
            .add(&xp(0, 1).scale_q(&qi(-1)))
            .add(&xp(1, 2).scale_q(&q(-1, 4)));
        let f1 = xp(1, 3)
            .scale_q(&qi(-1))
            .add(&xp(1, 1).scale_q(&qi(-1)))
            .add(&xp(0, 1).mul(&xp(1, 1)).scale_q(&q(-1, 2)));
        let phi = xp(0, 3)
            .add(&xp(0, 1))
            .add(&xp(0, 2).mul(&xp(1, 1)))
            .add(&xp(1, 2));
        PolyProblem {
            d: 2,
            drift: vec![f0, f1],
            potential: v,
            phi,
            gradient_drift: true,
            name: "quartic-2d".into(),
        }
    }

    /// Negative control: the drift is not a gradient (its Jacobian is
    /// asymmetric) while the density still uses the separable quartic.
    pub fn nongradient_2d() -> PolyProblem {
        let v = xp(0, 4)
            .scale_q(&q(1, 4))
            .add(&xp(1, 4).scale_q(&q(1, 4)))
            .add(&xp(0, 2).scale_q(&q(1, 2)))
            .add(&xp(1, 2).scale_q(&q(1, 2)));
        let f0 = xp(0, 3)
            .scale_q(&qi(-1))
            .add(&xp(0, 1).scale_q(&qi(-1)))
            .add(&xp(1, 2));
        let f1 = xp(1, 3).scale_q(&qi(-1)).add(&xp(1, 1).scale_q(&qi(-1)));
        let mut p = PolyProblem::quartic_2d();
        p.drift = vec![f0, f1];
        p.potential = v;
        p.gradient_drift = false;
        p.name = "nongradient-2d".into();
        p
    }
}

const MAX_OPERATOR_SIZE2: u32 = 12;

/// Applies the differential operator of a forest to a polynomial. The
/// result absorbs the noise amplitude `sqrt(2)` per grafted or liana
/// vertex; the caller tracks the accompanying `h^(size)` grade.
pub fn apply_operator(pi: &Forest, psi: &Poly, prob: &PolyProblem) -> Result<Poly> {
    if pi.size2() > MAX_OPERATOR_SIZE2 {
        return Err(ForestError::SizeBoundExceeded {
            size: pi.size().to_string(),
            bound: crate::forest::Size(MAX_OPERATOR_SIZE2).to_string(),
        });
    }
    let n = pi.len();
    let d = prob.d;
    // one summation slot per black or grafted vertex, one shared per liana
    let mut slot = vec![usize::MAX; n];
    let mut nslots = 0usize;
    let mut liana_slot: BTreeMap<u32, usize> = BTreeMap::new();
    for v in 0..n {
        slot[v] = match pi.deco(v) {
            Deco::Liana(k) => *liana_slot.entry(k).or_insert_with(|| {
                let s = nslots;
                nslots += 1;
                s
            }),
            _ => {
                let s = nslots;
                nslots += 1;
                s
            }
        };
    }
    let children: Vec<Vec<usize>> = (0..n).map(|v| pi.children(v)).collect();
    let roots = pi.roots();
    let sqrt2_pow = (pi.count_grafted() + pi.count_liana_ends()) as u32;

    let mut total = Poly::zero();
    let mut assignment = vec![0usize; nslots];
    loop {
        let idx = |v: usize| assignment[slot[v]];
        let mut term = Poly::one();
        let mut zero = false;
        for v in 0..n {
            let mut factor = match pi.deco(v) {
                Deco::Black => prob.drift[idx(v)].clone(),
                Deco::Grafted => Poly::var(2 + idx(v)),
                Deco::Liana(_) => Poly::one(),
            };
            for &u in &children[v] {
                factor = factor.diff(idx(u));
                if factor.is_zero() {
                    zero = true;
                    break;
                }
            }
            if zero {
                break;
            }
            term = term.mul(&factor);
            if term.is_zero() {
                zero = true;
                break;
            }
        }
        if !zero {
            let mut applied = psi.clone();
            for &r in &roots {
                applied = applied.diff(idx(r));
                if applied.is_zero() {
                    break;
                }
            }
            total = total.add(&term.mul(&applied));
        }
        let mut i = 0;
        while i < nslots {
            assignment[i] += 1;
            if assignment[i] < d {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == nslots {
            break;
        }
    }
    Ok(total.scale(&Q2::one().times_sqrt2_pow(sqrt2_pow)))
}

/// `F(pi)[phi]` for the problem's test function, with its grade in half
/// powers of `h`.
pub fn elementary_differential(pi: &Forest, prob: &PolyProblem) -> Result<(u32, Poly)> {
    Ok((pi.size2(), apply_operator(pi, &prob.phi, prob)?))
}

/// Gaussian moment reduction: expectation over the noise components, each
/// independent standard normal, so `E[xi^(2k)] = (2k-1)!!` and odd moments
/// vanish. Removes all xi variables.
pub fn isserlis_reduce(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.iter() {
        let mut moment = qi(1);
        let mut dead = false;
        for xi in 2..4 {
            let e = m[xi] as i64;
            if e % 2 == 1 {
                dead = true;
                break;
            }
            let mut k = e - 1;
            while k > 1 {
                moment *= qi(k);
                k -= 2;
            }
        }
        if dead {
            continue;
        }
        let mut m2 = *m;
        m2[2] = 0;
        m2[3] = 0;
        out.add_term(m2, c.scale_q(&moment));
    }
    out
}

/// Checks the expectation map against Gaussian moment reduction: the
/// reduced operator of a grafted forest equals the operator of its
/// expectation, exactly.
pub fn expectation_consistency(grafted: &Forest, prob: &PolyProblem) -> Result<bool> {
    let lhs = isserlis_reduce(&apply_operator(grafted, &prob.phi, prob)?);
    let mut rhs = Poly::zero();
    for (exotic, c) in crate::stochastic::expectation(grafted).iter() {
        rhs = rhs.add(&apply_operator(exotic, &prob.phi, prob)?.scale_q(c));
    }
    Ok(lhs == rhs)
}

/// Truncated series of differential operators applied to `phi`, graded by
/// half powers of `h`. Includes the unit term `a(empty) * phi` at grade 0.
pub fn s_series_apply(
    map: &dyn CoefficientMap,
    max_size2: u32,
    phi: &Poly,
    prob: &PolyProblem,
) -> Result<BTreeMap<u32, Poly>> {
    let mut grades: BTreeMap<u32, Poly> = BTreeMap::new();
    let unit = map.coeff(&Forest::empty());
    if !unit.is_zero() {
        grades.insert(0, phi.scale_q(&unit));
    }
    let forests = crate::enumerate::enumerate_bounded(
        crate::forest::Size(max_size2),
        crate::enumerate::Family::GraftedForests,
        true,
        crate::forest::Size(max_size2),
    )?;
    for f in forests {
        let c = map.coeff(&f);
        if c.is_zero() {
            continue;
        }
        let sg = Q::from_integer(crate::forest::sigma(&f).into());
        let p = apply_operator(&f, phi, prob)?.scale_q(&(c / sg));
        if p.is_zero() {
            continue;
        }
        let entry = grades.entry(f.size2()).or_insert_with(Poly::zero);
        *entry = entry.add(&p);
    }
    grades.retain(|_, p| !p.is_zero());
    Ok(grades)
}

/// Composition law check: applying the truncated series of `a` to the
/// truncated series of `b` agrees with the series of the convolution
/// `a * b`, grade by grade through `h^(max_size2/2)`, as exact polynomials
/// and at the rational point.
pub fn composition_check(
    a: &dyn CoefficientMap,
    b: &dyn CoefficientMap,
    max_size2: u32,
    prob: &PolyProblem,
) -> Result<bool> {
    let inner = s_series_apply(b, max_size2, &prob.phi, prob)?;

    // lhs: every operator of the a-series applied to every inner grade
    let mut lhs: BTreeMap<u32, Poly> = BTreeMap::new();
    let ua = a.coeff(&Forest::empty());
    for (g, p) in &inner {
        if !ua.is_zero() {
            let entry = lhs.entry(*g).or_insert_with(Poly::zero);
            *entry = entry.add(&p.scale_q(&ua));
        }
    }
    let forests = crate::enumerate::enumerate_bounded(
        crate::forest::Size(max_size2),
        crate::enumerate::Family::GraftedForests,
        true,
        crate::forest::Size(max_size2),
    )?;
    for f in &forests {
        let c = a.coeff(f);
        if c.is_zero() {
            continue;
        }
        let sg = Q::from_integer(crate::forest::sigma(f).into());
        let scale = c / sg;
        for (g, p) in &inner {
            let grade = g + f.size2();
            if grade > max_size2 {
                continue;
            }
            let applied = apply_operator(f, p, prob)?.scale_q(&scale);
            if applied.is_zero() {
                continue;
            }
            let entry = lhs.entry(grade).or_insert_with(Poly::zero);
            *entry = entry.add(&applied);
        }
    }
    lhs.retain(|_, p| !p.is_zero());

    // rhs: the series of the convolution
    let conv = crate::series::convolve(a, b);
    let mut rhs = s_series_apply(&conv, max_size2, &prob.phi, prob)?;
    rhs.retain(|_, p| !p.is_zero());

    let point = [q(3, 5), q(-2, 7)];
    for grade in 0..=max_size2 {
        let l = lhs.get(&grade).cloned().unwrap_or_else(Poly::zero);
        let r = rhs.get(&grade).cloned().unwrap_or_else(Poly::zero);
        if l != r {
            return Ok(false);
        }
        // reduced evaluation at a fixed rational point as a second route
        let lv = isserlis_reduce(&l).eval_q(&point[..prob.d]);
        let rv = isserlis_reduce(&r).eval_q(&point[..prob.d]);
        if lv != rv {
            return Ok(false);
        }
    }
    Ok(true)
}

const QUAD_RANGE: f64 = 10.0;
const QUAD_REL_TOL: f64 = 1e-8;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn composite_1d(g: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (nodes, weights) = gl;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in nodes.iter().zip(weights) {
            total += w * g(mid + 0.5 * h * x);
        }
    }
    total * 0.5 * (b - a) / panels as f64
}

/// Panel-doubling Gauss quadrature with relative tolerance.
fn integrate_1d(g: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let gl = gauss_legendre(24);
    let mut panels = 4;
    let mut prev = composite_1d(g, a, b, panels, &gl);
    while panels <= 512 {
        panels *= 2;
        let next = composite_1d(g, a, b, panels, &gl);
        if (next - prev).abs() <= rel_tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(ForestError::QuadratureNotConverged)
}

fn integrate_2d(g: &dyn Fn(f64, f64) -> f64, r: f64, rel_tol: f64) -> Result<f64> {
    let gl = gauss_legendre(16);
    let mut panels = 4;
    let mut prev = composite_2d(g, r, panels, &gl);
    while panels <= 128 {
        panels *= 2;
        let next = composite_2d(g, r, panels, &gl);
        if (next - prev).abs() <= rel_tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(ForestError::QuadratureNotConverged)
}

fn composite_2d(g: &dyn Fn(f64, f64) -> f64, r: f64, panels: usize, gl: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (nodes, weights) = gl;
    let h = 2.0 * r / panels as f64;
    let mut total = 0.0;
    for px in 0..panels {
        let lox = -r + px as f64 * h;
        let midx = lox + 0.5 * h;
        for py in 0..panels {
            let loy = -r + py as f64 * h;
            let midy = loy + 0.5 * h;
            for (xi, wi) in nodes.iter().zip(weights) {
                let x = midx + 0.5 * h * xi;
                for (yj, wj) in nodes.iter().zip(weights) {
                    let y = midy + 0.5 * h * yj;
                    total += wi * wj * g(x, y);
                }
            }
        }
    }
    total * (h * 0.5) * (h * 0.5)
}

/// Quadrature context for one problem: caches the normalization and every
/// forest integral by canonical key.
pub struct OracleCtx<'p> {
    pub prob: &'p PolyProblem,
    z: f64,
    cache: HashMap<String, f64>,
}

impl<'p> OracleCtx<'p> {
    pub fn new(prob: &'p PolyProblem) -> Result<OracleCtx<'p>> {
        let cv = prob.potential.compile();
        let z = match prob.d {
            1 => integrate_1d(
                &|x| (-cv.eval(&[x, 0.0, 0.0, 0.0])).exp(),
                -QUAD_RANGE,
                QUAD_RANGE,
                QUAD_REL_TOL,
            )?,
            2 => integrate_2d(
                &|x, y| (-cv.eval(&[x, y, 0.0, 0.0])).exp(),
                QUAD_RANGE,
                QUAD_REL_TOL,
            )?,
            _ => {
                return Err(ForestError::DimensionMismatch(
                    "oracle supports d in {1, 2}".into(),
                ))
            }
        };
        Ok(OracleCtx {
            prob,
            z,
            cache: HashMap::new(),
        })
    }

    /// `I(pi)`: the stationary average of the operator applied to the test
    /// function, with `h = 1`.
    pub fn integral(&mut self, pi: &Forest) -> Result<f64> {
        if let Some(v) = self.cache.get(pi.key()) {
            return Ok(*v);
        }
        let poly = apply_operator(pi, &self.prob.phi, self.prob)?;
        let reduced = isserlis_reduce(&poly);
        let cp = reduced.compile();
        let cv = self.prob.potential.compile();
        let z = self.z;
        let value = match self.prob.d {
            1 => integrate_1d(
                &|x| cp.eval(&[x, 0.0, 0.0, 0.0]) * (-cv.eval(&[x, 0.0, 0.0, 0.0])).exp(),
                -QUAD_RANGE,
                QUAD_RANGE,
                QUAD_REL_TOL,
            )? / z,
            _ => integrate_2d(
                &|x, y| cp.eval(&[x, y, 0.0, 0.0]) * (-cv.eval(&[x, y, 0.0, 0.0])).exp(),
                QUAD_RANGE,
                QUAD_REL_TOL,
            )? / z,
        };
        self.cache.insert(pi.key().to_string(), value);
        Ok(value)
    }

    pub fn integral_sum(&mut self, s: &FormalSum) -> Result<f64> {
        let mut total = 0.0;
        for (f, c) in s.iter() {
            total += q_to_f64(c) * self.integral(f)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    #[test]
    fn linear_field_single_vertex() {
        // V = x^2/2, f = -x: the operator of a single black vertex applied
        // to x is -x
        let mut prob = PolyProblem::quartic_1d();
        prob.potential = xp(0, 2).scale_q(&q(1, 2));
        prob.drift = vec![xp(0, 1).scale_q(&qi(-1))];
        prob.phi = xp(0, 1);
        let (grade, p) = elementary_differential(&parse("b").unwrap(), &prob).unwrap();
        assert_eq!(grade, 2);
        assert_eq!(p, xp(0, 1).scale_q(&qi(-1)));
    }

    #[test]
    fn displayed_differential_of_cherry() {
        // the operator of b[b,b] applied to phi is f*f*f'' * phi' in 1d
        let prob = PolyProblem::quartic_1d();
        let (_, got) = elementary_differential(&parse("b[b,b]").unwrap(), &prob).unwrap();
        let f = &prob.drift[0];
        let expect = f.mul(f).mul(&f.diff(0).diff(0)).mul(&prob.phi.diff(0));
        assert_eq!(got, expect);
    }

    #[test]
    fn displayed_exotic_differential() {
        // 2 h^3 sum_ijl d_i f^j d_ij f^l d_l phi, in both dimensions
        for prob in [PolyProblem::quartic_1d(), PolyProblem::quartic_2d()] {
            let (grade, got) = elementary_differential(&parse("b[1,b[1]]").unwrap(), &prob).unwrap();
            assert_eq!(grade, 6);
            let mut expect = Poly::zero();
            for i in 0..prob.d {
                for j in 0..prob.d {
                    for l in 0..prob.d {
                        let term = prob.drift[j]
                            .diff(i)
                            .mul(&prob.drift[l].diff(i).diff(j))
                            .mul(&prob.phi.diff(l));
                        expect = expect.add(&term);
                    }
                }
            }
            assert_eq!(got, expect.scale_q(&qi(2)), "dimension {}", prob.d);
        }
    }

    #[test]
    fn grafted_differential_carries_noise_symbols() {
        let prob = PolyProblem::quartic_1d();
        let (grade, p) = elementary_differential(&parse("x").unwrap(), &prob).unwrap();
        assert_eq!(grade, 1);
        // sqrt(2) xi phi'
        let expect = Poly::var(2).mul(&prob.phi.diff(0)).scale(&Q2 {
            a: q_zero(),
            b: qi(1),
        });
        assert_eq!(p, expect);
    }

    #[test]
    fn generator_identity() {
        // the size-one part of the exact-flow series is f . grad + laplacian
        for prob in [PolyProblem::quartic_1d(), PolyProblem::quartic_2d()] {
            let op_b = apply_operator(&parse("b").unwrap(), &prob.phi, &prob).unwrap();
            let op_pair = apply_operator(&parse("1,1").unwrap(), &prob.phi, &prob).unwrap();
            let sum = op_b.add(&op_pair.scale_q(&q(1, 2)));
            let mut generator = Poly::zero();
            for i in 0..prob.d {
                generator = generator.add(&prob.drift[i].mul(&prob.phi.diff(i)));
                generator = generator.add(&prob.phi.diff(i).diff(i));
            }
            assert_eq!(sum, generator, "dimension {}", prob.d);
        }
    }

    #[test]
    fn expectation_consistency_examples() {
        let prob = PolyProblem::quartic_2d();
        for key in ["b[x,b[x]]", "b[x,x,b[x,x]]", "b[x],x", "x,x"] {
            assert!(
                expectation_consistency(&parse(key).unwrap(), &prob).unwrap(),
                "inconsistent on {key}"
            );
        }
        // odd counts reduce to zero
        let p = apply_operator(&parse("b[x]").unwrap(), &prob.phi, &prob).unwrap();
        assert!(isserlis_reduce(&p).is_zero());
    }

    #[test]
    fn normalization_is_positive() {
        for prob in [
            PolyProblem::quartic_1d(),
            PolyProblem::quartic_2d(),
            PolyProblem::nongradient_2d(),
        ] {
            let ctx = OracleCtx::new(&prob).unwrap();
            assert!(ctx.z > 0.0, "{}", prob.name);
        }
    }

    #[test]
    fn constant_test_function_annihilated() {
        let mut prob = PolyProblem::quartic_1d();
        prob.phi = Poly::one();
        let mut ctx = OracleCtx::new(&prob).unwrap();
        let v = ctx.integral(&parse("b").unwrap()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn displayed_integral_identity() {
        // the first rewriting of the symmetric pair keeps the integral
        let prob = PolyProblem::quartic_1d();
        let mut ctx = OracleCtx::new(&prob).unwrap();
        let a = ctx.integral(&parse("b[1],b[1]").unwrap()).unwrap();
        let b = ctx.integral(&parse("1,b[b[1]]").unwrap()).unwrap();
        assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn quadrature_matches_known_gaussian_moment() {
        // with V = x^2/2 the stationary law is standard normal: E[x^4] = 3
        let mut prob = PolyProblem::quartic_1d();
        prob.potential = xp(0, 2).scale_q(&q(1, 2));
        let cp = xp(0, 4).compile();
        let cv = prob.potential.compile();
        let z = integrate_1d(
            &|x| (-cv.eval(&[x, 0.0, 0.0, 0.0])).exp(),
            -QUAD_RANGE,
            QUAD_RANGE,
            QUAD_REL_TOL,
        )
        .unwrap();
        let m4 = integrate_1d(
            &|x| cp.eval(&[x, 0.0, 0.0, 0.0]) * (-cv.eval(&[x, 0.0, 0.0, 0.0])).exp(),
            -QUAD_RANGE,
            QUAD_RANGE,
            QUAD_REL_TOL,
        )
        .unwrap()
            / z;
        assert!((m4 - 3.0).abs() < 1e-8, "E[x^4] = {m4}");
    }
}
