//! abc-triples and the conditional degree bounds derived from them.
//!
//! Bounds are analytic, so they are evaluated in `f64`; every comparison
//! carries a relative guard band of [`GUARD`].

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::exactnum::{radical, Integer};

/// Relative tolerance for floating-point bound comparisons.
pub const GUARD: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcTriple {
    a: Integer,
    b: Integer,
    c: Integer,
}

impl AbcTriple {
    pub fn a(&self) -> &Integer {
        &self.a
    }
    pub fn b(&self) -> &Integer {
        &self.b
    }
    pub fn c(&self) -> &Integer {
        &self.c
    }

    pub fn max_abs(&self) -> Integer {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    /// `rad(|abc|)`.
    pub fn radical(&self) -> Result<Integer> {
        radical(&(&self.a * &self.b * &self.c).abs())
    }
}

pub fn validate_triple(a: Integer, b: Integer, c: Integer) -> Result<AbcTriple> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return invalid("abc triple entries must be nonzero");
    }
    if &a + &b != c {
        return invalid(format!("{a} + {b} != {c}"));
    }
    if !a.gcd(&b).is_one() || !b.gcd(&c).is_one() || !a.gcd(&c).is_one() {
        return invalid("abc triple entries must be pairwise coprime");
    }
    Ok(AbcTriple { a, b, c })
}

/// Natural logarithm of a positive integer of any size.
pub fn ln_int(n: &Integer) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return libm::log(n.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    libm::log(top.to_f64().unwrap_or(f64::INFINITY)) + shift as f64 * core::f64::consts::LN_2
}

/// `log max(|a|, |b|, |c|) / log rad(|abc|)`.
pub fn quality(t: &AbcTriple) -> Result<f64> {
    Ok(ln_int(&t.max_abs()) / ln_int(&t.radical()?))
}

/// One clause `max(|a|, |b|, |c|) < bound`, compared in log space.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundMargin {
    pub name: &'static str,
    /// `ln` of the bound.
    pub ln_bound: f64,
    /// `ln max(|a|, |b|, |c|)`.
    pub ln_max: f64,
}

impl BoundMargin {
    pub fn bound(&self) -> f64 {
        libm::exp(self.ln_bound)
    }

    /// `bound − max`, as a floating-point value.
    pub fn margin(&self) -> f64 {
        libm::exp(self.ln_bound) - libm::exp(self.ln_max)
    }

    pub fn holds(&self) -> bool {
        self.ln_max < self.ln_bound - GUARD * self.ln_bound.abs().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitBound {
    pub radical: Integer,
    pub margins: Vec<BoundMargin>,
}

impl ExplicitBound {
    /// `max < min(N^1.72, 10 N^1.62991, 32 N^1.6)`.
    pub fn holds(&self) -> bool {
        self.margins.iter().all(BoundMargin::holds)
    }
}

pub fn explicit_bound_holds(t: &AbcTriple) -> Result<ExplicitBound> {
    let n = t.radical()?;
    let ln_n = ln_int(&n);
    let ln_max = ln_int(&t.max_abs());
    let clause = |name, factor: f64, exp: f64| BoundMargin {
        name,
        ln_bound: libm::log(factor) + exp * ln_n,
        ln_max,
    };
    Ok(ExplicitBound {
        radical: n,
        margins: alloc::vec![
            clause("N^1.72", 1.0, 1.72),
            clause("10*N^1.62991", 10.0, 1.62991),
            clause("32*N^1.6", 32.0, 1.6),
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    epsilon: f64,
    k: f64,
    base: f64,
}

impl BoundParams {
    pub fn new(epsilon: f64, k: f64, base: f64) -> Result<Self> {
        let finite = epsilon.is_finite() && k.is_finite() && base.is_finite();
        if !finite || epsilon <= 0.0 || k <= 0.0 || base <= 1.0 {
            return invalid("bound parameters need epsilon > 0, K > 0, b > 1");
        }
        Ok(BoundParams { epsilon, k, base })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn base(&self) -> f64 {
        self.base
    }
}

/// `log_b(2^{1+ε} K_ε) + 5 + 4ε`: under the abc-conjecture with these
/// constants, a nontrivial two-cycle with `max(|X_2|, Z) ≥ b` forces `d`
/// below this value.
pub fn degree_bound(p: &BoundParams) -> f64 {
    let e = p.epsilon;
    ((1.0 + e) * core::f64::consts::LN_2 + libm::log(p.k)) / libm::log(p.base) + 5.0 + 4.0 * e
}

fn fixedpoint_exponent(epsilon: f64, d: u32) -> Result<f64> {
    let exp = f64::from(d) - 5.0 - 4.0 * epsilon;
    if exp <= GUARD {
        return invalid(format!("exponent d - 5 - 4*epsilon = {exp} is not positive; the bound is vacuous"));
    }
    Ok(exp)
}

/// `W* = (2^{1+ε} K)^{1/(d−5−4ε)}`: fixed-pair data with `W > W*` contradicts
/// the explicit abc bound.
pub fn fixedpoint_w_bound(epsilon: f64, k: f64, d: u32) -> Result<f64> {
    BoundParams::new(epsilon, k, 2.0)?;
    let exp = fixedpoint_exponent(epsilon, d)?;
    Ok(libm::pow(libm::pow(2.0, 1.0 + epsilon) * k, 1.0 / exp))
}

/// The two sides `(W^{d−5−4ε}, 2^{1+ε} K)` of the fixed-pair inequality.
pub fn fixedpoint_sides(epsilon: f64, k: f64, d: u32, w: f64) -> Result<(f64, f64)> {
    BoundParams::new(epsilon, k, 2.0)?;
    let exp = fixedpoint_exponent(epsilon, d)?;
    Ok((libm::pow(w, exp), libm::pow(2.0, 1.0 + epsilon) * k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;
    use proptest::prelude::*;

    fn triple(a: i64, b: i64, c: i64) -> AbcTriple {
        validate_triple(BigInt::from(a), BigInt::from(b), BigInt::from(c)).unwrap()
    }

    #[test]
    fn validation() {
        triple(1, 8, 9);
        triple(2, 6436341, 6436343);
        triple(-1, 2, 1);
        assert!(validate_triple(BigInt::from(2), BigInt::from(2), BigInt::from(4)).is_err());
        assert!(validate_triple(BigInt::from(1), BigInt::from(2), BigInt::from(4)).is_err());
        assert!(validate_triple(BigInt::from(0), BigInt::from(1), BigInt::from(1)).is_err());
    }

    #[test]
    fn quality_examples() {
        let q = quality(&triple(1, 8, 9)).unwrap();
        assert!((q - libm::log(9.0) / libm::log(6.0)).abs() < 1e-12);
        assert!((q - 1.2263).abs() < 1e-4);
        let t = triple(2, 6436341, 6436343);
        assert_eq!(t.radical().unwrap(), BigInt::from(15042));
        assert!((quality(&t).unwrap() - 1.6299).abs() < 1e-4);
        assert_eq!(quality(&triple(1, 1, 2)).unwrap(), 1.0);
    }

    #[test]
    fn explicit_bound_examples() {
        let e = explicit_bound_holds(&triple(1, 8, 9)).unwrap();
        assert!(e.holds());
        assert!((e.margins[0].bound() - libm::pow(6.0, 1.72)).abs() < 1e-9);
        assert!((e.margins[0].margin() - (21.80 - 9.0)).abs() < 1e-2);
        let e = explicit_bound_holds(&triple(2, 6436341, 6436343)).unwrap();
        assert!(e.holds());
        assert!((e.margins[0].bound() - 1.5e7).abs() / 1.5e7 < 0.05);
        assert!(explicit_bound_holds(&triple(1, 1, 2)).unwrap().holds());
    }

    #[test]
    fn ln_int_handles_huge_values() {
        let n: BigInt = BigInt::from(3).pow(2000u32);
        assert!((ln_int(&n) - 2000.0 * libm::log(3.0)).abs() < 1e-9 * 2000.0);
    }

    #[test]
    fn degree_bound_examples() {
        let p = BoundParams::new(0.72, 1.0, 2.0).unwrap();
        assert!((degree_bound(&p) - 9.6).abs() < 1e-9);
        let p = BoundParams::new(0.62991, 10.0, 1300.0).unwrap();
        let v = degree_bound(&p);
        assert!((v - 7.9984).abs() < 1e-3 && v < 7.999 && v > 7.998);
        let p = BoundParams::new(1.0, 1.0, 2.0).unwrap();
        assert!((degree_bound(&p) - 11.0).abs() < 1e-12);
        assert!(BoundParams::new(0.0, 1.0, 2.0).is_err());
        assert!(BoundParams::new(1.0, -1.0, 2.0).is_err());
        assert!(BoundParams::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn fixedpoint_examples() {
        let w = fixedpoint_w_bound(0.62991, 10.0, 8).unwrap();
        assert!((w - 1273.0).abs() / 1273.0 < 0.01);
        let (lhs, rhs) = fixedpoint_sides(0.62991, 10.0, 8, 1300.0).unwrap();
        assert!(lhs > 31.0 && lhs < 31.5 && rhs < 30.95);
        let w = fixedpoint_w_bound(0.72, 1.0, 10).unwrap();
        assert!((w - libm::pow(2.0, 1.72 / 2.12)).abs() < 1e-12);
        assert!(fixedpoint_w_bound(1.0, 1.0, 9).is_err());
    }

    proptest! {
        #[test]
        fn degree_bound_monotone(e in 0.05f64..2.0, k in 0.1f64..100.0, b in 1.1f64..5000.0) {
            let base = degree_bound(&BoundParams::new(e, k, b).unwrap());
            let wider_b = degree_bound(&BoundParams::new(e, k, b * 1.5).unwrap());
            let bigger_e = degree_bound(&BoundParams::new(e * 1.1, k, b).unwrap());
            let bigger_k = degree_bound(&BoundParams::new(e, k * 1.5, b).unwrap());
            // 2^{1+ε}K > 1 here keeps the log term positive, so it is decreasing in b
            if (1.0 + e) * core::f64::consts::LN_2 + libm::log(k) > 0.0 {
                prop_assert!(wider_b < base);
            }
            prop_assert!(bigger_e > base);
            prop_assert!(bigger_k > base);
        }
    }
}
