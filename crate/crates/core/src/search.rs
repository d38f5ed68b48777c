//! Complete bounded searches for preperiodic structure.
//!
//! Every search that scans an integer box is exposed twice: as a kernel over
//! a slice of the outer numerator range (`*_range`) and as the full search.
//! Kernel outputs are sorted, and [`merge_sorted`] over any partition of the
//! outer range reproduces the full result exactly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::dynamics::{orbit_classify, OrbitStatus, PowerMap};
use crate::error::{internal, invalid, Result};
use crate::exactnum::{kth_root_exact, rat_int, Integer, Rational};

/// Integer data of a verified rational cycle `X_1/Z → … → X_n/Z → X_1/Z`
/// of `x^d + C/Z^d`, all in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCertificate {
    pub d: u32,
    pub z: Integer,
    pub xs: Vec<Integer>,
    pub c_num: Integer,
    pub c: Rational,
}

impl CycleCertificate {
    pub fn period(&self) -> usize {
        self.xs.len()
    }

    /// `c ∈ {0, −1}`.
    pub fn is_trivial(&self) -> bool {
        self.c.is_zero() || self.c == rat_int(-1)
    }

    pub fn points(&self) -> Vec<Rational> {
        self.xs
            .iter()
            .map(|x| Rational::new(x.clone(), self.z.clone()))
            .collect()
    }

    fn sort_key(&self) -> (&Integer, &[Integer]) {
        (&self.z, &self.xs)
    }

    /// Builds a certificate from the points of one cycle, rotated so the
    /// smallest point comes first, and verifies it.
    pub fn from_cycle(d: u32, c: &Rational, cycle: &[Rational]) -> Result<Self> {
        let Some(start) = cycle.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).map(|(i, _)| i) else {
            return invalid("empty cycle");
        };
        let z = cycle[start].denom().clone();
        let xs = (0..cycle.len())
            .map(|k| {
                let p = &cycle[(start + k) % cycle.len()];
                p.numer() * (&z / p.denom())
            })
            .collect();
        let cert = CycleCertificate {
            d,
            c_num: c.numer() * (Pow::pow(&z, d) / c.denom()),
            c: c.clone(),
            z,
            xs,
        };
        cert.verify()?;
        Ok(cert)
    }

    /// Re-checks every invariant: lowest terms, consecutive coprimality,
    /// exact closure of the orbit, and exact period.
    pub fn verify(&self) -> Result<()> {
        let n = self.xs.len();
        if n == 0 || !self.z.is_positive() || self.d < 2 {
            return internal("malformed cycle certificate");
        }
        if Rational::new(self.c_num.clone(), Pow::pow(&self.z, self.d)) != self.c {
            return internal("c does not equal C/Z^d");
        }
        for (i, x) in self.xs.iter().enumerate() {
            if !x.gcd(&self.z).is_one() {
                return internal(format!("gcd(X_{}, Z) != 1", i + 1));
            }
            if n > 1 && !x.gcd(&self.xs[(i + 1) % n]).is_one() {
                return internal(format!("gcd(X_{}, X_{}) != 1", i + 1, (i + 1) % n + 1));
            }
        }
        let map = PowerMap::new(self.d, self.c.clone())?;
        let pts = self.points();
        for i in 0..n {
            if map.eval(&pts[i]) != pts[(i + 1) % n] {
                return internal(format!("f(x_{}) != x_{}", i + 1, (i + 1) % n + 1));
            }
        }
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != n {
            return internal("cycle repeats a point before closing");
        }
        Ok(())
    }
}

/// Two distinct rational fixed points `X_1/Z`, `X_2/Z` of `x^d + C/Z^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPair {
    pub d: u32,
    pub x1: Integer,
    pub x2: Integer,
    pub z: Integer,
    pub c_num: Integer,
    pub c: Rational,
}

impl FixedPair {
    pub fn is_trivial(&self) -> bool {
        self.c.is_zero()
    }

    pub fn verify(&self) -> Result<()> {
        let map = PowerMap::new(self.d, self.c.clone())?;
        for x in [&self.x1, &self.x2] {
            let p = Rational::new(x.clone(), self.z.clone());
            if p.denom() != &self.z || map.eval(&p) != p {
                return internal("fixed pair does not verify");
            }
        }
        if self.x1 == self.x2 {
            return internal("fixed pair points coincide");
        }
        Ok(())
    }
}

fn sort_key_fixed(p: &FixedPair) -> (&Integer, &Integer, &Integer) {
    (&p.z, &p.x1, &p.x2)
}

/// Concatenates per-partition results and restores the canonical order.
pub fn merge_sorted<T: Clone, K: Ord>(parts: Vec<Vec<T>>, key: impl Fn(&T) -> K) -> Vec<T> {
    let mut all: Vec<T> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| key(a).cmp(&key(b)));
    all
}

pub fn merge_cycles(parts: Vec<Vec<CycleCertificate>>) -> Vec<CycleCertificate> {
    let mut all: Vec<CycleCertificate> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    all
}

pub fn merge_fixed_pairs(parts: Vec<Vec<FixedPair>>) -> Vec<FixedPair> {
    let mut all: Vec<FixedPair> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| sort_key_fixed(a).cmp(&sort_key_fixed(b)));
    all
}

/// `x^e` for every `x` in `[-w, w]`, as `i128` when everything fits.
enum PowerTable {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl PowerTable {
    fn new(w: i64, e: u32) -> Self {
        let fits = i128::from(w)
            .checked_pow(e)
            .and_then(|v| v.checked_mul(4))
            .is_some();
        if fits {
            PowerTable::Small((-w..=w).map(|x| i128::from(x).pow(e)).collect())
        } else {
            PowerTable::Big((-w..=w).map(|x| Pow::pow(BigInt::from(x), e)).collect())
        }
    }
}

fn iroot_i128(q: i128, k: u32) -> Option<i128> {
    if k == 1 {
        return Some(q);
    }
    let guess = libm::round(libm::pow(q as f64, 1.0 / f64::from(k))) as i128;
    (guess - 1..=guess + 1)
        .filter(|r| *r > 0)
        .find(|r| r.checked_pow(k) == Some(q))
}

/// Which equation the power-difference kernel solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PairEquation {
    /// `X_2^d − X_1^d = (X_1 − X_2) Z^{d−1}`: a two-cycle.
    TwoCycle,
    /// `X_1^d − X_2^d = (X_1 − X_2) Z^{d−1}`: two fixed points.
    FixedPair,
}

struct PairKernel {
    d: u32,
    w: i64,
    eq: PairEquation,
    powers: PowerTable,
    z_pow_limit: Integer,
}

impl PairKernel {
    fn new(d: u32, w: i64, eq: PairEquation) -> Self {
        PairKernel {
            d,
            w,
            eq,
            powers: PowerTable::new(w, d),
            z_pow_limit: Pow::pow(BigInt::from(w), d - 1),
        }
    }

    /// `Z` solving the kernel equation for the ordered pair, if any.
    fn solve(&self, x1: i64, x2: i64) -> Option<Integer> {
        let (i1, i2) = ((x1 + self.w) as usize, (x2 + self.w) as usize);
        let k = self.d - 1;
        let z = match &self.powers {
            PowerTable::Small(p) => {
                let diff = match self.eq {
                    PairEquation::TwoCycle => p[i2] - p[i1],
                    PairEquation::FixedPair => p[i1] - p[i2],
                };
                let q = diff / i128::from(x1 - x2);
                if q <= 0 || q > self.z_pow_limit.to_i128()? {
                    return None;
                }
                BigInt::from(iroot_i128(q, k)?)
            }
            PowerTable::Big(p) => {
                let diff = match self.eq {
                    PairEquation::TwoCycle => &p[i2] - &p[i1],
                    PairEquation::FixedPair => &p[i1] - &p[i2],
                };
                let q = diff / BigInt::from(x1 - x2);
                if !q.is_positive() || q > self.z_pow_limit {
                    return None;
                }
                kth_root_exact(&q, k)?
            }
        };
        let (bx1, bx2) = (BigInt::from(x1), BigInt::from(x2));
        (z.gcd(&bx1).is_one() && z.gcd(&bx2).is_one()).then_some(z)
    }

    fn pairs(&self, x1_range: RangeInclusive<i64>) -> impl Iterator<Item = (i64, i64, Integer)> + '_ {
        let lo = (*x1_range.start()).max(-self.w);
        let hi = (*x1_range.end()).min(self.w);
        (lo..=hi).flat_map(move |x1| {
            (x1 + 1..=self.w)
                .filter(move |&x2| num_integer::gcd(x1, x2) == 1)
                .filter_map(move |x2| self.solve(x1, x2).map(|z| (x1, x2, z)))
        })
    }
}

fn check_box(w: i64) -> Result<()> {
    if w < 1 {
        return invalid("search bound must be positive");
    }
    if w > i64::from(i32::MAX) {
        return invalid("search bound too large");
    }
    Ok(())
}

fn check_even(d: u32) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return invalid(format!("two-cycle search needs even d >= 2, got {d}"));
    }
    Ok(())
}

/// Two-cycles with `max(|X_1|, |X_2|, Z) ≤ w` and `X_1` in `x1_range`.
pub fn two_cycle_search_range(d: u32, w: i64, x1_range: RangeInclusive<i64>) -> Result<Vec<CycleCertificate>> {
    check_even(d)?;
    check_box(w)?;
    let kernel = PairKernel::new(d, w, PairEquation::TwoCycle);
    let mut out = Vec::new();
    for (x1, x2, z) in kernel.pairs(x1_range) {
        let (bx1, bx2) = (BigInt::from(x1), BigInt::from(x2));
        let c_num = &bx2 * Pow::pow(&z, d - 1) - Pow::pow(&bx1, d);
        let cert = CycleCertificate {
            d,
            c: Rational::new(c_num.clone(), Pow::pow(&z, d)),
            c_num,
            z,
            xs: vec![bx1, bx2],
        };
        cert.verify()?;
        out.push(cert);
    }
    Ok(merge_cycles(vec![out]))
}

/// Every rational two-cycle of `x^d + c` (even `d`) whose lowest-terms data
/// satisfies `max(|X_1|, |X_2|, Z) ≤ w`, sorted by `(Z, X_1, X_2)` with
/// `X_1 < X_2`.
pub fn two_cycle_search(d: u32, w: i64) -> Result<Vec<CycleCertificate>> {
    two_cycle_search_range(d, w, -w..=w)
}

/// Fixed pairs with `X_1` in `x1_range`.
pub fn fixed_point_search_range(d: u32, w: i64, x1_range: RangeInclusive<i64>) -> Result<Vec<FixedPair>> {
    if d < 3 {
        return invalid(format!("fixed-point search needs d >= 3, got {d}"));
    }
    check_box(w)?;
    let kernel = PairKernel::new(d, w, PairEquation::FixedPair);
    let mut out = Vec::new();
    for (x1, x2, z) in kernel.pairs(x1_range) {
        let bx1 = BigInt::from(x1);
        let c_num = &bx1 * Pow::pow(&z, d - 1) - Pow::pow(&bx1, d);
        let pair = FixedPair {
            d,
            x1: bx1,
            x2: BigInt::from(x2),
            c: Rational::new(c_num.clone(), Pow::pow(&z, d)),
            c_num,
            z,
        };
        pair.verify()?;
        out.push(pair);
    }
    Ok(merge_fixed_pairs(vec![out]))
}

/// Every pair of distinct rational fixed points `X_1/Z < X_2/Z` of a common
/// `x^d + c` with `max(|X_1|, |X_2|, Z) ≤ w`.
pub fn fixed_point_search(d: u32, w: i64) -> Result<Vec<FixedPair>> {
    fixed_point_search_range(d, w, -w..=w)
}

/// A solution of `X_0^d − R^d = 2 X_0 Z^{d−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Type12Solution {
    pub x0: Integer,
    pub r: Integer,
    pub z: Integer,
}

impl Type12Solution {
    /// `X_0 · R = 0`.
    pub fn is_degenerate(&self) -> bool {
        self.x0.is_zero() || self.r.is_zero()
    }

    /// `R = −X_0`: then `r = −x_0` is itself fixed, not a point of type `1_2`.
    /// Possible only for odd `d`.
    pub fn is_fixed_mirror(&self) -> bool {
        self.r == -&self.x0
    }
}

/// All solutions with `gcd(X_0, Z) = gcd(R, Z) = 1`, `|X_0|, |R| ≤ b`,
/// `1 ≤ Z ≤ b`, and `X_0` in `x0_range`.
pub fn type12_search_range(d: u32, b: i64, x0_range: RangeInclusive<i64>) -> Result<Vec<Type12Solution>> {
    if d < 3 {
        return invalid(format!("type 1_2 search needs d >= 3, got {d}"));
    }
    check_box(b)?;
    let pow_d: Vec<BigInt> = (-b..=b).map(|x| Pow::pow(BigInt::from(x), d)).collect();
    let z_pow: Vec<BigInt> = (0..=b).map(|z| Pow::pow(BigInt::from(z), d - 1)).collect();
    let idx = |x: i64| (x + b) as usize;
    let mut out = Vec::new();
    for x0 in (*x0_range.start()).max(-b)..=(*x0_range.end()).min(b) {
        for z in 1..=b {
            if num_integer::gcd(x0, z) != 1 {
                continue;
            }
            let rhs = BigInt::from(2 * x0) * &z_pow[z as usize];
            for r in -b..=b {
                if num_integer::gcd(r, z) != 1 {
                    continue;
                }
                if &pow_d[idx(x0)] - &pow_d[idx(r)] == rhs {
                    out.push(Type12Solution {
                        x0: BigInt::from(x0),
                        r: BigInt::from(r),
                        z: BigInt::from(z),
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn type12_search(d: u32, b: i64) -> Result<Vec<Type12Solution>> {
    type12_search_range(d, b, -b..=b)
}

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GraphPoint {
    Affine(Rational),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperNode {
    pub point: GraphPoint,
    /// Index of `f(point)` in the node list.
    pub target: usize,
    pub period: usize,
    pub tail: usize,
}

/// `PrePer(f, P^1(Q))` with the functional graph of `f` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperGraph {
    pub d: u32,
    pub c: Rational,
    /// Affine nodes sorted by value, then the point at infinity (last).
    pub nodes: Vec<PreperNode>,
}

impl PreperGraph {
    /// Number of preperiodic points on `P^1(Q)`, counting infinity.
    pub fn count_p1(&self) -> usize {
        self.nodes.len()
    }

    pub fn affine_points(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.nodes.iter().filter_map(|n| match &n.point {
            GraphPoint::Affine(p) => Some(p),
            GraphPoint::Infinity => None,
        })
    }

    pub fn max_period(&self) -> usize {
        self.nodes.iter().map(|n| n.period).max().unwrap_or(1)
    }

    /// Affine cycles, each rotated to start at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<Rational>> {
        let mut out = Vec::new();
        let mut taken = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if node.tail != 0 || taken[i] || node.point == GraphPoint::Infinity {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = i;
            while !taken[j] {
                taken[j] = true;
                if let GraphPoint::Affine(p) = &self.nodes[j].point {
                    cycle.push(p.clone());
                }
                j = self.nodes[j].target;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_certificates(&self) -> Result<Vec<CycleCertificate>> {
        self.cycles()
            .iter()
            .map(|cycle| CycleCertificate::from_cycle(self.d, &self.c, cycle))
            .collect()
    }
}

/// The complete set of rational preperiodic points of `map`.
///
/// Affine candidates are exactly `X/Z` with `Z` the forced denominator and
/// `|X| ≤ Z(|c| + 2)`; each is classified by exact orbit iteration.
pub fn preperiodic_points(map: &PowerMap) -> PreperGraph {
    let mut points: Vec<(Rational, usize, usize)> = Vec::new();
    if let Some(z) = map.forced_denominator() {
        let bound = map.numerator_bound(&z);
        let mut x = -bound.clone();
        while x <= bound {
            if x.gcd(&z).is_one() {
                let p = Rational::new(x.clone(), z.clone());
                let report = orbit_classify(map, &p);
                if let OrbitStatus::Preperiodic { tail, period } = report.status {
                    points.push((p, period, tail));
                }
            }
            x += 1u32;
        }
    }
    let n = points.len();
    let mut nodes: Vec<PreperNode> = points
        .iter()
        .map(|(p, period, tail)| {
            let image = map.eval(p);
            let target = points
                .binary_search_by(|(q, _, _)| q.cmp(&image))
                .expect("image of a preperiodic point is preperiodic");
            PreperNode {
                point: GraphPoint::Affine(p.clone()),
                target,
                period: *period,
                tail: *tail,
            }
        })
        .collect();
    nodes.push(PreperNode {
        point: GraphPoint::Infinity,
        target: n,
        period: 1,
        tail: 0,
    });
    PreperGraph {
        d: map.degree(),
        c: map.param().clone(),
        nodes,
    }
}

/// One `(d, c)` row of a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub d: u32,
    pub c: Rational,
    pub max_period: usize,
    pub count_p1: usize,
    pub cycles: Vec<CycleCertificate>,
}

pub fn sweep_row(d: u32, c: &Rational) -> Result<SweepRow> {
    let graph = preperiodic_points(&PowerMap::new(d, c.clone())?);
    Ok(SweepRow {
        d,
        c: c.clone(),
        max_period: graph.max_period(),
        count_p1: graph.count_p1(),
        cycles: graph.cycle_certificates()?,
    })
}

/// Parameters `c = C/Z^d` in lowest terms with `1 ≤ Z ≤ z_max`, `|C| ≤ height`,
/// sorted and deduplicated.
pub fn sweep_params(d: u32, z_max: i64, height: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for z in 1..=z_max {
        let den = Pow::pow(BigInt::from(z), d);
        for c in -height..=height {
            if num_integer::gcd(c, z) == 1 {
                out.push(Rational::new(BigInt::from(c), den.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The full `(d, c)` task list of a sweep, including any extra parameters.
pub fn sweep_tasks(degrees: &[u32], z_max: i64, height: i64, extra: &[Rational]) -> Vec<(u32, Rational)> {
    let mut tasks = Vec::new();
    for &d in degrees {
        let mut params = sweep_params(d, z_max, height);
        params.extend(extra.iter().cloned());
        params.sort();
        params.dedup();
        tasks.extend(params.into_iter().map(|c| (d, c)));
    }
    tasks
}

/// Runs [`preperiodic_points`] for every parameter of the sweep box.
pub fn sweep(degrees: &[u32], z_max: i64, height: i64, extra: &[Rational]) -> Result<Vec<SweepRow>> {
    if z_max < 1 || height < 0 {
        return invalid("sweep needs z_max >= 1 and height >= 0");
    }
    sweep_tasks(degrees, z_max, height, extra)
        .iter()
        .map(|(d, c)| sweep_row(*d, c))
        .collect()
}

/// Per-clause outcome of the two-cycle/abc system
/// `X_2^d − X_1^d = (X_3 − X_2) Z^{d−1} ≠ 0`, `gcd(X_1, X_2) = 1`,
/// `max(|X_1|, |X_2|, |X_3|) = |X_2|`, `max(|X_2|, |Z|) > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemCheck {
    pub equation: bool,
    pub nonzero: bool,
    pub coprime: bool,
    pub max_position: bool,
    pub nontrivial: bool,
}

impl SystemCheck {
    pub fn holds(&self) -> bool {
        self.equation && self.nonzero && self.coprime && self.max_position && self.nontrivial
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let clauses = [
            (self.equation, "equation"),
            (self.nonzero, "nonzero"),
            (self.coprime, "coprime"),
            (self.max_position, "max-position"),
            (self.nontrivial, "nontrivial"),
        ];
        for (ok, name) in clauses {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

pub fn system_check(x1: &Integer, x2: &Integer, x3: &Integer, z: &Integer, d: u32) -> SystemCheck {
    let lhs = Pow::pow(x2, d) - Pow::pow(x1, d);
    let rhs = (x3 - x2) * Pow::pow(z, d.saturating_sub(1));
    let one = BigInt::one();
    SystemCheck {
        equation: lhs == rhs,
        nonzero: !lhs.is_zero(),
        coprime: x1.gcd(x2) == one,
        max_position: x2.abs() >= x1.abs() && x2.abs() >= x3.abs(),
        nontrivial: x2.abs().max(z.abs()) > one,
    }
}

/// Whether `x` returns to itself within `n` steps.
pub fn returns_within(map: &PowerMap, x: &Rational, n: usize) -> bool {
    let mut cur = map.eval(x);
    for _ in 0..n {
        if &cur == x {
            return true;
        }
        cur = map.eval(&cur);
    }
    false
}
