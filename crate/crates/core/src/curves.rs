//! Bounded-height points on `E: y² = −t⁴ − 2t` and `H: y² = x⁵ + 81`, and
//! the degree-4 two-cycle family parametrised by `E`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, Zero};

use crate::dynamics::{dynatomic_poly, orbit_classify, PolyC, PowerMap};
use crate::error::{invalid, Result};
use crate::exactnum::{is_prime, rat_int, rat_pow, square_root_exact, Integer, Rational};
use crate::poly::UniPoly;

/// A rational point `(t, y)` of `y² = −t⁴ − 2t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuarticPoint {
    pub t: Rational,
    pub y: Rational,
}

pub fn on_quartic(t: &Rational, y: &Rational) -> bool {
    y * y == -rat_pow(t, 4) - t * rat_int(2)
}

/// All points with `t = P/Q` in lowest terms, `P` in `p_range`, `|P|, Q ≤ bound`.
pub fn quartic_points_range(bound: i64, p_range: RangeInclusive<i64>) -> Result<Vec<QuarticPoint>> {
    if bound < 1 {
        return invalid("curve search bound must be positive");
    }
    let mut out = Vec::new();
    for p in (*p_range.start()).max(-bound)..=(*p_range.end()).min(bound) {
        let bp = BigInt::from(p);
        let p4: BigInt = Pow::pow(&bp, 4u32);
        for q in 1..=bound {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let bq = BigInt::from(q);
            let v = -&p4 - BigInt::from(2) * &bp * Pow::pow(&bq, 3u32);
            if v.is_negative() {
                continue;
            }
            if let Some(s) = square_root_exact(&v) {
                let t = Rational::new(bp.clone(), bq.clone());
                let q2 = &bq * &bq;
                let y = Rational::new(s.clone(), q2.clone());
                if !s.is_zero() {
                    out.push(QuarticPoint { t: t.clone(), y: -y.clone() });
                }
                out.push(QuarticPoint { t, y });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All points of `E` with `t = P/Q`, `|P|, Q ≤ bound`, sorted by `(t, y)`.
pub fn quartic_points(bound: i64) -> Result<Vec<QuarticPoint>> {
    quartic_points_range(bound, -bound..=bound)
}

/// `(X : Y : Z)` on `Y² = X⁵ + 81 Z¹⁰`, i.e. the affine point `(X/Z², Y/Z⁵)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightedPoint {
    pub x: Integer,
    pub y: Integer,
    pub z: Integer,
}

impl WeightedPoint {
    pub fn on_curve(&self) -> bool {
        &self.y * &self.y == Pow::pow(&self.x, 5u32) + BigInt::from(81) * Pow::pow(&self.z, 10u32)
    }

    pub fn affine(&self) -> (Rational, Rational) {
        (
            Rational::new(self.x.clone(), Pow::pow(&self.z, 2u32)),
            Rational::new(self.y.clone(), Pow::pow(&self.z, 5u32)),
        )
    }
}

/// Residue classes `(X mod p, Z mod p)` where `X⁵ + 81 Z¹⁰` is a square mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSieve {
    pub p: u64,
    admissible: Vec<bool>,
}

impl LocalSieve {
    pub fn admits(&self, x: i64, z: i64) -> bool {
        let p = self.p as i64;
        let (xr, zr) = (x.rem_euclid(p) as usize, z.rem_euclid(p) as usize);
        self.admissible[xr * self.p as usize + zr]
    }

    /// Admissible `(X mod p, Z mod p)` pairs.
    pub fn classes(&self) -> Vec<(u64, u64)> {
        let p = self.p;
        (0..p * p)
            .filter(|&i| self.admissible[i as usize])
            .map(|i| (i / p, i % p))
            .collect()
    }

    /// Fraction of residue classes that survive.
    pub fn density(&self) -> f64 {
        self.classes().len() as f64 / (self.p * self.p) as f64
    }
}

pub fn local_sieve(p: u64) -> Result<LocalSieve> {
    if p > 97 || !is_prime(&BigInt::from(p)) {
        return invalid(format!("sieve modulus must be a prime <= 97, got {p}"));
    }
    let mut squares = vec![false; p as usize];
    for r in 0..p {
        squares[(r * r % p) as usize] = true;
    }
    let pow_mod = |b: u64, e: u32| (0..e).fold(1u64, |acc, _| acc * b % p);
    let mut admissible = vec![false; (p * p) as usize];
    for x in 0..p {
        for z in 0..p {
            let v = (pow_mod(x, 5) + 81 % p * pow_mod(z, 10)) % p;
            admissible[(x * p + z) as usize] = squares[v as usize];
        }
    }
    Ok(LocalSieve { p, admissible })
}

/// Primes used to skip candidates in [`hyperelliptic_points`].
pub const SIEVE_PRIMES: [u64; 4] = [7, 11, 13, 31];

/// Points with `X` in `x_range`, `|X| ≤ bound²`, `1 ≤ Z ≤ bound`,
/// `gcd(X, Z) = 1`, both signs of `Y`.
pub fn hyperelliptic_points_range(bound: i64, x_range: RangeInclusive<i64>) -> Result<Vec<WeightedPoint>> {
    if bound < 1 {
        return invalid("curve search bound must be positive");
    }
    let xmax = bound
        .checked_mul(bound)
        .ok_or_else(|| crate::Error::InvalidInput("curve search bound too large".into()))?;
    let sieves = SIEVE_PRIMES.iter().map(|&p| local_sieve(p)).collect::<Result<Vec<_>>>()?;
    let eighty_one = BigInt::from(81);
    let mut out = Vec::new();
    for z in 1..=bound {
        let tail = &eighty_one * Pow::pow(BigInt::from(z), 10u32);
        for x in (*x_range.start()).max(-xmax)..=(*x_range.end()).min(xmax) {
            if num_integer::gcd(x, z) != 1 || !sieves.iter().all(|s| s.admits(x, z)) {
                continue;
            }
            let v = Pow::pow(BigInt::from(x), 5u32) + &tail;
            if v.is_negative() {
                continue;
            }
            if let Some(y) = square_root_exact(&v) {
                let (bx, bz) = (BigInt::from(x), BigInt::from(z));
                if !y.is_zero() {
                    out.push(WeightedPoint { x: bx.clone(), y: -y.clone(), z: bz.clone() });
                }
                out.push(WeightedPoint { x: bx, y, z: bz });
            }
        }
    }
    out.sort_by(|a, b| (&a.z, &a.x, &a.y).cmp(&(&b.z, &b.x, &b.y)));
    Ok(out)
}

/// All weighted points in the box, sorted by `(Z, X, Y)`.
pub fn hyperelliptic_points(bound: i64) -> Result<Vec<WeightedPoint>> {
    let b2 = bound.saturating_mul(bound);
    hyperelliptic_points_range(bound, -b2..=b2)
}

/// A two-cycle of `x^4 + c` obtained from a point of `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyPoint {
    pub t: Rational,
    pub y: Rational,
    pub c: Rational,
    pub x1: Rational,
    pub x2: Rational,
}

/// `c = (t⁶ + 4t³ − 1)/(4t²)`, `x_{1,2} = (t² ± y)/(2t)`, verified to be a
/// cycle of exact period 2 of `x⁴ + c`.
pub fn family_generator(t: &Rational, y: &Rational) -> Result<FamilyPoint> {
    if t.is_zero() {
        return invalid("family parameter t must be nonzero");
    }
    if !on_quartic(t, y) {
        return invalid(format!("({t}, {y}) is not on y^2 = -t^4 - 2t"));
    }
    let c = (rat_pow(t, 6) + rat_pow(t, 3) * rat_int(4) - rat_int(1)) / (rat_pow(t, 2) * rat_int(4));
    let t2 = t * t;
    let x1 = (&t2 + y) / (t * rat_int(2));
    let x2 = (&t2 - y) / (t * rat_int(2));
    let map = PowerMap::new(4, c.clone())?;
    if map.eval(&x1) != x2 || map.eval(&x2) != x1 || x1 == x2 {
        return crate::error::internal("family point is not a two-cycle");
    }
    if orbit_classify(&map, &x1).preperiodic_type() != Some((2, 0)) {
        return crate::error::internal("family point does not have exact period 2");
    }
    Ok(FamilyPoint { t: t.clone(), y: y.clone(), c, x1, x2 })
}

/// Polynomials in `x` over `Q[t]`.
pub type PolyXt = UniPoly<PolyC>;

/// `64 t⁶ · Φ₂(x, c(t))` for `d = 4`, as a polynomial in `x` over `Q[t]`.
pub fn family_dynatomic() -> Result<PolyXt> {
    let phi = dynatomic_poly(4, 2)?;
    let t = PolyC::var();
    let num = t.pow(6) + t.pow(3).scalar_mul(&rat_int(4)) - PolyC::constant(rat_int(1));
    let den = t.pow(2).scalar_mul(&rat_int(4));
    let deg_c = phi
        .coeffs()
        .iter()
        .filter_map(|a| a.degree())
        .max()
        .unwrap_or(0);
    let cleared = phi.map_coeffs(|a: &PolyC| {
        a.coeffs()
            .iter()
            .enumerate()
            .fold(PolyC::zero(), |acc, (j, aj)| {
                acc + (num.pow(j as u32) * den.pow((deg_c - j) as u32)).scalar_mul(aj)
            })
    });
    Ok(cleared)
}

/// `2t x² − 2t² x + t³ + 1`.
pub fn family_factor() -> PolyXt {
    let t = PolyC::var();
    UniPoly::new(vec![
        t.pow(3) + PolyC::constant(rat_int(1)),
        t.pow(2).scalar_mul(&rat_int(-2)),
        t.scalar_mul(&rat_int(2)),
    ])
}

/// Exact quotient of [`family_dynatomic`] by [`family_factor`] over `Q[t]`.
pub fn family_cofactor() -> Result<PolyXt> {
    let (q, r) = family_dynatomic()?.div_rem(&family_factor())?;
    if !r.is_zero() {
        return crate::error::internal("family factor does not divide the dynatomic polynomial");
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use num_traits::{One, ToPrimitive};

    #[test]
    fn quartic_examples() {
        let pts = quartic_points(5).unwrap();
        assert!(pts.contains(&QuarticPoint { t: rat(-2, 5), y: rat(22, 25) }));
        assert!(pts.contains(&QuarticPoint { t: rat(-2, 5), y: rat(-22, 25) }));
        assert!(pts.contains(&QuarticPoint { t: rat_int(0), y: rat_int(0) }));
        assert!(pts.iter().all(|p| p.t != rat_int(1)));
        assert!(pts.iter().all(|p| on_quartic(&p.t, &p.y)));
        for p in &pts {
            assert!(pts.contains(&QuarticPoint { t: p.t.clone(), y: -p.y.clone() }));
        }
    }

    #[test]
    fn quartic_matches_brute_force() {
        // brute force over rational y = S/Q² with |S| ≤ 2·bound²
        let b = 12;
        let mut brute = Vec::new();
        for p in -b..=b {
            for q in 1..=b {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let t = rat(p, q);
                for s in -2 * b * b..=2 * b * b {
                    let y = rat(s, q * q);
                    if on_quartic(&t, &y) {
                        brute.push(QuarticPoint { t: t.clone(), y });
                    }
                }
            }
        }
        brute.sort();
        assert_eq!(quartic_points(b).unwrap(), brute);
    }

    #[test]
    fn hyperelliptic_examples() {
        let pts = hyperelliptic_points(10).unwrap();
        let summary: Vec<(i64, i64, i64)> = pts
            .iter()
            .map(|p| (p.x.to_i64().unwrap(), p.y.to_i64().unwrap(), p.z.to_i64().unwrap()))
            .collect();
        assert_eq!(
            summary,
            vec![(-2, -7, 1), (-2, 7, 1), (0, -9, 1), (0, 9, 1), (3, -18, 1), (3, 18, 1)]
        );
        assert!(pts.iter().all(WeightedPoint::on_curve));
        let (x, y) = pts[1].affine();
        assert_eq!((x, y), (rat_int(-2), rat_int(7)));
    }

    #[test]
    fn hyperelliptic_sieve_is_sound() {
        // unsieved scan of the same box
        let b = 6i64;
        let mut brute = Vec::new();
        for z in 1..=b {
            for x in -b * b..=b * b {
                if num_integer::gcd(x, z) != 1 {
                    continue;
                }
                let v = i128::from(x).pow(5) + 81 * i128::from(z).pow(10);
                if v < 0 {
                    continue;
                }
                let r = (v as f64).sqrt() as i128;
                for y in [r - 1, r, r + 1] {
                    if y >= 0 && y * y == v {
                        if y != 0 {
                            brute.push((z, x, -y));
                        }
                        brute.push((z, x, y));
                    }
                }
            }
        }
        brute.sort();
        let found: Vec<_> = hyperelliptic_points(b)
            .unwrap()
            .iter()
            .map(|p| (p.z.to_i64().unwrap(), p.x.to_i64().unwrap(), p.y.to_i64().unwrap() as i128))
            .collect();
        assert_eq!(found, brute);
        assert!(hyperelliptic_points(b).unwrap().iter().all(|p| p.z.is_one()));
    }

    #[test]
    fn sieve_examples() {
        let s3 = local_sieve(3).unwrap();
        assert!(s3.admits(0, 1));
        assert!(s3.classes().contains(&(0, 1)));
        let s11 = local_sieve(11).unwrap();
        assert!(s11.density() < 1.0);
        assert!(local_sieve(4).is_err());
        assert!(local_sieve(101).is_err());
        let pts = hyperelliptic_points(10).unwrap();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 97] {
            let s = local_sieve(p).unwrap();
            for pt in &pts {
                assert!(s.admits(pt.x.to_i64().unwrap(), pt.z.to_i64().unwrap()));
            }
        }
    }

    #[test]
    fn family_examples() {
        let f = family_generator(&rat(-2, 5), &rat(22, 25)).unwrap();
        assert_eq!(f.c, rat(-19561, 10000));
        let mut pair = vec![f.x1.clone(), f.x2.clone()];
        pair.sort();
        assert_eq!(pair, vec![rat(-13, 10), rat(9, 10)]);
        assert_eq!(&f.x1 + &f.x2, f.t);
        let g = family_generator(&rat(-2, 5), &rat(-22, 25)).unwrap();
        let mut pair2 = vec![g.x1, g.x2];
        pair2.sort();
        assert_eq!(pair, pair2);
        assert!(family_generator(&rat_int(0), &rat_int(0)).is_err());
        assert!(family_generator(&rat(-2, 5), &rat(1, 2)).is_err());
    }

    #[test]
    fn family_from_every_boxed_point() {
        for p in quartic_points(30).unwrap() {
            if p.t.is_zero() {
                continue;
            }
            let f = family_generator(&p.t, &p.y).unwrap();
            assert_eq!(&f.x1 + &f.x2, p.t);
        }
    }

    #[test]
    fn family_factor_divides_dynatomic() {
        let q = family_cofactor().unwrap();
        assert_eq!(q.degree(), Some(10));
        assert_eq!(family_cofactor().unwrap().mul(&family_factor()), family_dynatomic().unwrap());
        // specialising at t = −2/5 recovers a multiple of (x + 13/10)(x − 9/10)
        let t = rat(-2, 5);
        let spec = PolyC::new(family_factor().coeffs().iter().map(|a| a.eval(&t)).collect());
        let x = PolyC::var();
        let lin = |r: Rational| x.clone() - PolyC::constant(r);
        let target = (lin(rat(-13, 10)) * lin(rat(9, 10))).scalar_mul(&(&t * rat_int(2)));
        assert_eq!(spec, target);
    }
}
