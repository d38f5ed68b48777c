//! The unicritical map `x ↦ x^d + c`, orbit classification, dynatomic
//! polynomials, and the fixed-pair / two-cycle correspondence for even `d`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{internal, invalid, Result};
use crate::exactnum::{kth_root_exact, mobius, rat_pow, Integer, Rational};
use crate::poly::{sylvester_resultant, Ring, UniPoly};

/// Polynomials in `c` with rational coefficients.
pub type PolyC = UniPoly<Rational>;
/// Polynomials in `x` over `Q[c]`.
pub type PolyXc = UniPoly<PolyC>;
/// Polynomials in `t` over `Q[c]`.
pub type PolyTc = UniPoly<PolyC>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerMap {
    d: u32,
    c: Rational,
}

impl PowerMap {
    pub fn new(d: u32, c: Rational) -> Result<Self> {
        if d < 2 {
            return invalid(format!("degree must be at least 2, got {d}"));
        }
        Ok(PowerMap { d, c })
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn param(&self) -> &Rational {
        &self.c
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        rat_pow(x, self.d) + &self.c
    }

    /// `|c| + 2`: any point strictly outside this radius escapes to infinity.
    pub fn escape_radius(&self) -> Rational {
        self.c.abs() + Rational::from_integer(BigInt::from(2))
    }

    /// The denominator every affine preperiodic point must have: `Z` with
    /// `den(c) = Z^d`. `None` when `den(c)` is not a perfect `d`-th power, in
    /// which case there are no affine preperiodic points at all.
    pub fn forced_denominator(&self) -> Option<Integer> {
        kth_root_exact(self.c.denom(), self.d)
    }

    /// Largest numerator magnitude a preperiodic point `X/Z` can have.
    pub fn numerator_bound(&self, z: &Integer) -> Integer {
        (self.escape_radius() * Rational::from_integer(z.clone())).floor().to_integer()
    }

    /// Iteration backstop for orbit classification.
    fn iteration_limit(&self) -> usize {
        let bound = self
            .forced_denominator()
            .map(|z| self.numerator_bound(&z))
            .and_then(|b| b.to_usize())
            .unwrap_or(usize::MAX / 16);
        4usize.saturating_mul(bound.saturating_mul(2).saturating_add(1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EscapeReason {
    /// The orbit left the disc of radius `|c| + 2`.
    Archimedean,
    /// A point's denominator differs from the forced denominator.
    Denominator,
    /// Hard iteration backstop; unreachable for correct inputs.
    IterationLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    Escaped(EscapeReason),
    /// Tail length `tail` before a cycle of exact period `period`.
    Preperiodic { tail: usize, period: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub start: Rational,
    pub status: OrbitStatus,
    /// Tail then cycle, each point once. For escaped orbits the last point is
    /// the one that triggered the escape.
    pub orbit: Vec<Rational>,
}

impl OrbitReport {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self.status, OrbitStatus::Preperiodic { .. })
    }

    /// `(n, m)`: point of type `n_m`.
    pub fn preperiodic_type(&self) -> Option<(usize, usize)> {
        match self.status {
            OrbitStatus::Preperiodic { tail, period } => Some((period, tail)),
            OrbitStatus::Escaped(_) => None,
        }
    }

    /// The cycle part of the orbit.
    pub fn cycle(&self) -> &[Rational] {
        match self.status {
            OrbitStatus::Preperiodic { tail, .. } => &self.orbit[tail..],
            OrbitStatus::Escaped(_) => &[],
        }
    }
}

/// Classifies the forward orbit of `x` exactly.
pub fn orbit_classify(map: &PowerMap, x: &Rational) -> OrbitReport {
    let radius = map.escape_radius();
    let forced = map.forced_denominator();
    let limit = map.iteration_limit();

    let mut seen: BTreeMap<Rational, usize> = BTreeMap::new();
    let mut orbit = Vec::new();
    let mut cur = x.clone();
    let status = loop {
        if let Some(&first) = seen.get(&cur) {
            break OrbitStatus::Preperiodic {
                tail: first,
                period: orbit.len() - first,
            };
        }
        let escape = if cur.abs() > radius {
            Some(EscapeReason::Archimedean)
        } else if forced.as_ref() != Some(cur.denom()) {
            Some(EscapeReason::Denominator)
        } else if orbit.len() >= limit {
            Some(EscapeReason::IterationLimit)
        } else {
            None
        };
        if let Some(reason) = escape {
            orbit.push(cur);
            break OrbitStatus::Escaped(reason);
        }
        let next = map.eval(&cur);
        seen.insert(cur.clone(), orbit.len());
        orbit.push(cur);
        cur = next;
    };
    OrbitReport {
        start: x.clone(),
        status,
        orbit,
    }
}

/// `(n, m)` when `x` is preperiodic of type `n_m`.
pub fn preperiodic_type(map: &PowerMap, x: &Rational) -> Option<(usize, usize)> {
    orbit_classify(map, x).preperiodic_type()
}

/// `x^d + c` in `Q[c][x]`.
pub fn generic_map(d: u32) -> PolyXc {
    let mut coeffs = alloc::vec![PolyC::zero(); d as usize + 1];
    coeffs[0] = PolyC::var();
    coeffs[d as usize] = PolyC::one();
    PolyXc::new(coeffs)
}

/// The `n`-th iterate of `x^d + c` in `Q[c][x]`.
pub fn iterate_map(d: u32, n: u32) -> PolyXc {
    let c = PolyXc::constant(PolyC::var());
    let mut acc = PolyXc::var();
    for _ in 0..n {
        acc = acc.pow(d).add(&c);
    }
    acc
}

/// Largest period for which dynatomic polynomials are offered.
pub const MAX_DYNATOMIC_PERIOD: u32 = 6;

/// The `n`-th dynatomic polynomial `Φ_n(x, c) = Π_{k | n} (f^k(x) − x)^{μ(n/k)}`.
pub fn dynatomic_poly(d: u32, n: u32) -> Result<PolyXc> {
    if d < 2 {
        return invalid("degree must be at least 2");
    }
    if n == 0 || n > MAX_DYNATOMIC_PERIOD {
        return invalid(format!("period must be in 1..={MAX_DYNATOMIC_PERIOD}"));
    }
    let x = PolyXc::var();
    let mut numer = PolyXc::one();
    let mut denom = PolyXc::one();
    for k in (1..=n).filter(|k| n % k == 0) {
        let factor = || iterate_map(d, k).sub(&x);
        match mobius(u64::from(n / k)) {
            1 => numer = numer.mul(&factor()),
            -1 => denom = denom.mul(&factor()),
            _ => {}
        }
    }
    match numer.exact_div(&denom) {
        Ok(phi) => Ok(phi),
        Err(_) => internal(format!("dynatomic quotient for d={d}, n={n} is not a polynomial")),
    }
}

/// `Res_x(Φ₂(x, c), t − (x + x^d + c))` as a polynomial in `t` over `Q[c]`.
///
/// Its zeros in `t` are the traces `x₁ + x₂` of two-cycles of `x^d + c`.
pub fn trace_resultant(d: u32) -> Result<PolyTc> {
    let phi = dynatomic_poly(d, 2)?;
    // coefficients now live in Q[c][t], outer variable t
    let lift = |a: &PolyC| PolyTc::constant(a.clone());
    let phi_t: UniPoly<PolyTc> = phi.map_coeffs(lift);

    let one = PolyTc::one();
    let t_minus_c = PolyTc::new(alloc::vec![PolyC::var().neg(), PolyC::one()]);
    let mut trace = alloc::vec![PolyTc::zero(); d as usize + 1];
    trace[0] = t_minus_c;
    trace[1] = one.neg();
    trace[d as usize] = trace[d as usize].sub(&one);
    let trace = UniPoly::new(trace);

    sylvester_resultant(&phi_t, &trace)
}

/// A parameter and two points attached to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPair {
    pub c: Rational,
    pub first: Rational,
    pub second: Rational,
}

fn require_even(d: u32) -> Result<()> {
    if d < 2 || d % 2 != 0 {
        return invalid(format!("degree must be even and at least 2, got {d}"));
    }
    Ok(())
}

/// Whether `{y1, y2}` is an exact two-cycle of `x^d + c`.
pub fn is_exact_two_cycle(d: u32, c: &Rational, y1: &Rational, y2: &Rational) -> bool {
    let f = |x: &Rational| rat_pow(x, d) + c;
    y1 != y2 && f(y1) == *y2 && f(y2) == *y1
}

/// Distinct fixed points `x1, x2` of some `x^d + c` (even `d`) give the
/// two-cycle `{−x1, −x2}` of `x^d + c'` with `c' = −x1 − x2^d`.
pub fn fixed_pair_to_two_cycle(d: u32, x1: &Rational, x2: &Rational) -> Result<PointPair> {
    require_even(d)?;
    if x1 == x2 {
        return invalid("fixed points must be distinct");
    }
    if x1 - rat_pow(x1, d) != x2 - rat_pow(x2, d) {
        return invalid("points are not fixed by a common x^d + c");
    }
    let c = -x1 - rat_pow(x2, d);
    let (y1, y2) = (-x1, -x2);
    if !is_exact_two_cycle(d, &c, &y1, &y2) {
        return internal("negated fixed pair is not a two-cycle");
    }
    Ok(PointPair {
        c,
        first: y1,
        second: y2,
    })
}

/// Inverse of [`fixed_pair_to_two_cycle`].
pub fn two_cycle_to_fixed_pair(d: u32, y1: &Rational, y2: &Rational) -> Result<PointPair> {
    require_even(d)?;
    if y1 == y2 {
        return invalid("cycle points must be distinct");
    }
    let c_prime = y1 - rat_pow(y2, d);
    if c_prime != y2 - rat_pow(y1, d) || !is_exact_two_cycle(d, &c_prime, y1, y2) {
        return invalid("points do not form a two-cycle of a common x^d + c");
    }
    let (x1, x2) = (-y1, -y2);
    let c = &x1 - rat_pow(&x1, d);
    let map = PowerMap::new(d, c.clone())?;
    if map.eval(&x1) != x1 || map.eval(&x2) != x2 {
        return internal("negated two-cycle is not a fixed pair");
    }
    Ok(PointPair {
        c,
        first: x1,
        second: x2,
    })
}

/// The `t`-polynomial `1 + 4ct² − 4t³ − t⁶` whose square is the `d = 4`
/// trace resultant.
pub fn quartic_trace_factor() -> PolyTc {
    let q = |n: i64| Rational::from_integer(BigInt::from(n));
    let k = |n: i64| PolyC::constant(q(n));
    PolyTc::new(alloc::vec![
        k(1),
        PolyC::zero(),
        PolyC::monomial(q(4), 1),
        k(-4),
        PolyC::zero(),
        PolyC::zero(),
        k(-1),
    ])
}

/// Evaluates a polynomial in `t` over `Q[c]` at a point.
pub fn eval_tc(p: &PolyTc, t: &Rational, c: &Rational) -> Rational {
    p.map_coeffs(|a| a.eval(c)).eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};
    use alloc::vec;
    use num_traits::Zero;

    fn map(d: u32, c: Rational) -> PowerMap {
        PowerMap::new(d, c).unwrap()
    }

    fn ck(coeffs: &[i64]) -> PolyC {
        PolyC::new(coeffs.iter().map(|&v| rat_int(v)).collect())
    }

    // Re-checks minimality of (m, n) by brute force over smaller pairs.
    fn assert_type_minimal(m: &PowerMap, x: &Rational, tail: usize, period: usize) {
        let iter = |k: usize| (0..k).fold(x.clone(), |acc, _| m.eval(&acc));
        assert_eq!(iter(tail + period), iter(tail));
        for t in 0..=tail {
            for p in 1..=period {
                if (t, p) != (tail, period) {
                    assert_ne!(iter(t + p), iter(t), "smaller type ({p}, {t}) for {x}");
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(map(4, rat(-19561, 10000)).eval(&rat(-13, 10)), rat(9, 10));
        assert_eq!(map(6, rat_int(-1)).eval(&rat_int(0)), rat_int(-1));
        assert_eq!(map(5, rat(7, 32)).eval(&rat_int(0)), rat(7, 32));
        assert!(PowerMap::new(1, rat_int(0)).is_err());
    }

    #[test]
    fn orbit_examples() {
        let r = orbit_classify(&map(4, rat(-19561, 10000)), &rat(9, 10));
        assert_eq!(r.status, OrbitStatus::Preperiodic { tail: 0, period: 2 });
        assert_eq!(r.orbit, vec![rat(9, 10), rat(-13, 10)]);

        let r = orbit_classify(&map(6, rat_int(-1)), &rat_int(1));
        assert_eq!(r.status, OrbitStatus::Preperiodic { tail: 1, period: 2 });
        assert_eq!(r.orbit, vec![rat_int(1), rat_int(0), rat_int(-1)]);

        let r = orbit_classify(&map(4, rat_int(1)), &rat_int(1));
        assert_eq!(r.status, OrbitStatus::Escaped(EscapeReason::Archimedean));
        assert_eq!(r.orbit, vec![rat_int(1), rat_int(2), rat_int(17)]);

        // denominator 3 is not a 4th power: nothing affine is preperiodic
        let r = orbit_classify(&map(4, rat(1, 3)), &rat_int(0));
        assert_eq!(r.status, OrbitStatus::Escaped(EscapeReason::Denominator));
    }

    #[test]
    fn preperiodic_type_examples() {
        assert_eq!(preperiodic_type(&map(6, rat_int(-1)), &rat_int(1)), Some((2, 1)));
        for d in [2, 4, 6, 8] {
            assert_eq!(preperiodic_type(&map(d, rat_int(0)), &rat_int(1)), Some((1, 0)));
        }
        assert_eq!(preperiodic_type(&map(4, rat_int(0)), &rat_int(-1)), Some((1, 1)));
        assert_eq!(preperiodic_type(&map(4, rat_int(1)), &rat_int(1)), None);
    }

    #[test]
    fn reported_types_are_minimal() {
        for d in 2..=6u32 {
            for (cn, z) in [(0, 1), (-1, 1), (-2, 1), (1, 2), (-3, 2), (-21, 2), (-29, 2), (-7, 3)] {
                let m = map(d, rat(cn, i64::pow(z, d)));
                for xn in -12..=12 {
                    for xd in [1, 2, 4] {
                        let x = rat(xn, xd);
                        let r = orbit_classify(&m, &x);
                        if let OrbitStatus::Preperiodic { tail, period } = r.status {
                            assert_type_minimal(&m, &x, tail, period);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dynatomic_examples() {
        let phi = dynatomic_poly(4, 2).unwrap();
        let c = |k: &[i64]| ck(k);
        // x^12 + x^9 + 3c x^8 + x^6 + 2c x^5 + 3c^2 x^4 + x^3 + c x^2 + c^2 x + 1 + c^3
        let mut expect = vec![PolyC::zero(); 13];
        expect[12] = c(&[1]);
        expect[9] = c(&[1]);
        expect[8] = c(&[0, 3]);
        expect[6] = c(&[1]);
        expect[5] = c(&[0, 2]);
        expect[4] = c(&[0, 0, 3]);
        expect[3] = c(&[1]);
        expect[2] = c(&[0, 1]);
        expect[1] = c(&[0, 0, 1]);
        expect[0] = c(&[1, 0, 0, 1]);
        assert_eq!(phi, PolyXc::new(expect));

        let phi = dynatomic_poly(2, 2).unwrap();
        assert_eq!(phi, PolyXc::new(vec![ck(&[1, 1]), ck(&[1]), ck(&[1])]));

        let phi = dynatomic_poly(3, 1).unwrap();
        assert_eq!(phi, PolyXc::new(vec![ck(&[0, 1]), ck(&[-1]), PolyC::zero(), ck(&[1])]));

        assert!(dynatomic_poly(3, 0).is_err());
        assert!(dynatomic_poly(3, 7).is_err());
    }

    #[test]
    fn dynatomic_degrees() {
        for d in 2..=3u32 {
            for n in 1..=4u32 {
                let expect: i64 = (1..=n)
                    .filter(|k| n % k == 0)
                    .map(|k| i64::from(mobius(u64::from(n / k))) * i64::from(d).pow(k))
                    .sum();
                assert_eq!(dynatomic_poly(d, n).unwrap().degree(), Some(expect as usize));
            }
        }
    }

    #[test]
    fn phi1_phi2_product() {
        let x = PolyXc::var();
        for d in 2..=8u32 {
            let phi1 = dynatomic_poly(d, 1).unwrap();
            let phi2 = dynatomic_poly(d, 2).unwrap();
            assert_eq!(phi1.mul(&phi2), iterate_map(d, 2).sub(&x), "d = {d}");
            assert_eq!(phi2.degree(), Some((d * d - d) as usize), "d = {d}");
        }
    }

    #[test]
    fn phi2_roots_are_period_two() {
        let c0 = rat(-19561, 10000);
        let phi = dynatomic_poly(4, 2).unwrap().map_coeffs(|a| a.eval(&c0));
        let m = map(4, c0);
        // rational roots of Φ₂ have the forced denominator 10
        let mut roots = Vec::new();
        for xn in -40..=40 {
            let x = rat(xn, 10);
            if Ring::is_zero(&phi.eval(&x)) {
                assert_eq!(m.eval(&m.eval(&x)), x);
                roots.push(x);
            }
        }
        assert_eq!(roots, vec![rat(-13, 10), rat(9, 10)]);
    }

    #[test]
    fn trace_resultant_small_degree() {
        // d = 2: (t + 1)^2, since the only two-cycle trace is −1
        let r = trace_resultant(2).unwrap();
        let t1 = PolyTc::new(vec![PolyC::one(), PolyC::one()]);
        assert_eq!(r, t1.mul(&t1));
    }

    #[test]
    fn trace_resultant_vanishes_on_cycles() {
        let r = trace_resultant(4).unwrap();
        assert_eq!(r, quartic_trace_factor().mul(&quartic_trace_factor()));
        let c0 = rat(-19561, 10000);
        assert!(Zero::is_zero(&eval_tc(&r, &rat(-2, 5), &c0)));
        let (x1, x2) = (rat(-13, 10), rat(9, 10));
        assert!(Zero::is_zero(&eval_tc(&r, &(&x1 + &x2), &c0)));
        // the trivial cycle {0, -1} of c = -1 has trace -1
        assert!(Zero::is_zero(&eval_tc(&r, &rat_int(-1), &rat_int(-1))));
        assert!(!Zero::is_zero(&eval_tc(&r, &rat_int(1), &rat_int(-1))));
    }

    #[test]
    fn fixed_pair_examples() {
        let p = fixed_pair_to_two_cycle(4, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!((p.c, p.first, p.second), (rat_int(-1), rat_int(0), rat_int(-1)));
        let p = fixed_pair_to_two_cycle(2, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!((p.c, p.first, p.second), (rat_int(-1), rat_int(0), rat_int(-1)));
        assert!(fixed_pair_to_two_cycle(4, &rat_int(1), &rat_int(1)).is_err());
        assert!(fixed_pair_to_two_cycle(4, &rat_int(1), &rat_int(2)).is_err());
        assert!(fixed_pair_to_two_cycle(3, &rat_int(0), &rat_int(1)).is_err());
    }

    #[test]
    fn two_cycle_examples() {
        let p = two_cycle_to_fixed_pair(4, &rat_int(0), &rat_int(-1)).unwrap();
        assert_eq!((p.c, p.first, p.second), (rat_int(0), rat_int(0), rat_int(1)));

        let p = two_cycle_to_fixed_pair(4, &rat(9, 10), &rat(-13, 10)).unwrap();
        let (x1, x2) = (rat(-9, 10), rat(13, 10));
        assert_eq!((&p.first, &p.second), (&x1, &x2));
        assert_eq!(&x1 - rat_pow(&x1, 4), &x2 - rat_pow(&x2, 4));
        assert_eq!(p.c, rat(-15561, 10000));

        let back = fixed_pair_to_two_cycle(4, &p.first, &p.second).unwrap();
        assert_eq!((back.c, back.first, back.second), (rat(-19561, 10000), rat(9, 10), rat(-13, 10)));

        assert!(two_cycle_to_fixed_pair(4, &rat_int(0), &rat_int(1)).is_err());
        assert!(two_cycle_to_fixed_pair(4, &rat_int(2), &rat_int(2)).is_err());
    }
}
