//! Fermat–Catalan structure of rational two-cycles of `x^{2k} + c`.
//!
//! A two-cycle `X_1/Z ↔ X_2/Z` of `x^{2k} + c` satisfies
//! `S · D = −Z^{2k−1}` with `S = X_1^k + X_2^k` and
//! `D = (X_1^k − X_2^k)/(X_1 − X_2)`, and `gcd(S, D) = δ ∈ {1, 2}` forces
//! `S = δ Z_1^{2k−1}`.

use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{internal, invalid, Result};
use crate::exactnum::{factorize, kth_root_exact, p_adic_valuation, Integer};
use crate::search::CycleCertificate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FCDecomposition {
    pub k: u32,
    pub x1: Integer,
    pub x2: Integer,
    pub z: Integer,
    pub s: Integer,
    pub d: Integer,
    pub delta: u32,
    pub z1: Integer,
    /// `D = δ^{2k−2} Z_2^{2k−1}` when `D` has that shape.
    pub z2: Option<Integer>,
}

impl FCDecomposition {
    pub fn verify(&self) -> Result<()> {
        let e = 2 * self.k - 1;
        let ok = self.x1.gcd(&self.x2).is_one()
            && self.s == BigInt::from(self.delta) * Pow::pow(&self.z1, e)
            && (&self.s * &self.d) == -Pow::pow(&self.z, e)
            && (self.delta == 1 || self.k % 2 == 0)
            && !self.z1.is_zero()
            && (&self.z % &self.z1).is_zero();
        if !ok {
            return internal("Fermat-Catalan decomposition does not verify");
        }
        if let Some(z2) = &self.z2 {
            let scale: BigInt = Pow::pow(BigInt::from(self.delta), e - 1);
            if self.d != scale * Pow::pow(z2, e) {
                return internal("Z_2 does not verify");
            }
        }
        Ok(())
    }
}

fn power_sum_parts(x1: &Integer, x2: &Integer, k: u32) -> (Integer, Integer) {
    let (a, b) = (Pow::pow(x1, k), Pow::pow(x2, k));
    let s = &a + &b;
    let d = (a - b) / (x1 - x2);
    (s, d)
}

/// `(2k−1)`-th root of `n`, cross-checked against its factorization.
fn audited_root(n: &Integer, e: u32) -> Result<Option<Integer>> {
    let fast = kth_root_exact(n, e);
    if n.is_zero() {
        return Ok(fast);
    }
    let f = factorize(n)?;
    let mut root = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut slow = true;
    for (p, m) in f.factors() {
        if m % e != 0 {
            slow = false;
            break;
        }
        root *= Pow::pow(p, m / e);
    }
    let slow = slow.then_some(root);
    if slow != fast {
        return internal(format!("root extraction disagrees for {n}"));
    }
    Ok(fast)
}

/// Decomposes a verified two-cycle of `x^{2k} + c`.
pub fn decompose_two_cycle(cert: &CycleCertificate) -> Result<FCDecomposition> {
    if cert.period() != 2 || cert.d % 2 != 0 {
        return invalid("decomposition needs a two-cycle of even degree");
    }
    cert.verify()?;
    let k = cert.d / 2;
    let e = 2 * k - 1;
    let (x1, x2) = (cert.xs[0].clone(), cert.xs[1].clone());
    let (s, d) = power_sum_parts(&x1, &x2, k);
    let g = s.gcd(&d);
    let delta: u32 = if g.is_one() {
        1
    } else if g == BigInt::from(2) {
        2
    } else {
        return internal(format!("gcd(S, D) = {g} does not divide 2"));
    };
    if !(&s % delta).is_zero() {
        return internal("delta does not divide S");
    }
    let Some(z1) = audited_root(&(&s / delta), e)? else {
        return internal(format!("S/{delta} = {} is not a {e}-th power", &s / delta));
    };
    let scale: BigInt = Pow::pow(BigInt::from(delta), e - 1);
    let z2 = if (&d % &scale).is_zero() {
        audited_root(&(&d / &scale), e)?
    } else {
        None
    };
    let out = FCDecomposition {
        k,
        x1,
        x2,
        z: cert.z.clone(),
        s,
        d,
        delta,
        z1,
        z2,
    };
    out.verify()?;
    Ok(out)
}

/// `gcd(X_1^k + X_2^k, X_1^k − X_2^k)`, which must divide 2.
pub fn gcd_divides_two(x1: &Integer, x2: &Integer, k: u32) -> Result<Integer> {
    if !x1.gcd(x2).is_one() {
        return invalid("gcd_divides_two needs coprime inputs");
    }
    let (a, b) = (Pow::pow(x1, k), Pow::pow(x2, k));
    let g = (&a + &b).gcd(&(a - b));
    if !(BigInt::from(2) % &g).is_zero() {
        return internal(format!("gcd {g} does not divide 2"));
    }
    Ok(g)
}

/// `v_2((X_1^k − X_2^k)/(X_1 − X_2))` for odd coprime `X_1 ≠ X_2` and odd `k`,
/// which must vanish.
pub fn lte_two_adic(x1: &Integer, x2: &Integer, k: u32) -> Result<u32> {
    if x1.is_even() || x2.is_even() || k % 2 == 0 || x1 == x2 || !x1.gcd(x2).is_one() {
        return invalid("lte_two_adic needs odd coprime X_1 != X_2 and odd k");
    }
    let (_, d) = power_sum_parts(x1, x2, k);
    let v = p_adic_valuation(&d, &BigInt::from(2))?;
    if v != 0 {
        return internal(format!("v_2(D) = {v}, expected 0"));
    }
    Ok(v)
}

/// A coprime solution of `x^k + y^k = δ z^{2k−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureSolution {
    pub x: Integer,
    pub y: Integer,
    pub z: Integer,
}

impl SignatureSolution {
    /// `|xy| ≤ 1`.
    pub fn is_trivial(&self) -> bool {
        (&self.x * &self.y).abs() <= BigInt::one()
    }
}

/// Solutions with `x` in `x_range`, `|x|, |y|, |z| ≤ b`, `gcd(x, y) = 1`,
/// sorted by `(x, y)`.
pub fn signature_search_range(k: u32, delta: u32, b: i64, x_range: RangeInclusive<i64>) -> Result<Vec<SignatureSolution>> {
    if k < 2 || !(delta == 1 || delta == 2) || b < 1 {
        return invalid("signature search needs k >= 2, delta in {1, 2}, B >= 1");
    }
    let e = 2 * k - 1;
    let pows: Vec<BigInt> = (-b..=b).map(|x| Pow::pow(BigInt::from(x), k)).collect();
    let idx = |v: i64| (v + b) as usize;
    let bound = BigInt::from(b);
    let mut out = Vec::new();
    for x in (*x_range.start()).max(-b)..=(*x_range.end()).min(b) {
        for y in -b..=b {
            if num_integer::gcd(x, y) != 1 {
                continue;
            }
            let t = &pows[idx(x)] + &pows[idx(y)];
            if !(&t % delta).is_zero() {
                continue;
            }
            if let Some(z) = kth_root_exact(&(t / delta), e) {
                if z.abs() <= bound {
                    out.push(SignatureSolution {
                        x: BigInt::from(x),
                        y: BigInt::from(y),
                        z,
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn signature_search(k: u32, delta: u32, b: i64) -> Result<Vec<SignatureSolution>> {
    signature_search_range(k, delta, b, -b..=b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nonexistence {
    /// `3 | 2k − 1` and `prime ≥ 5` is the smallest such prime dividing `k`.
    Applies { prime: u64 },
    NotApplicable,
}

pub fn nonexistence_check(k: u64) -> Nonexistence {
    if k == 0 || (2 * k - 1) % 3 != 0 {
        return Nonexistence::NotApplicable;
    }
    let mut n = k;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            if p >= 5 {
                return Nonexistence::Applies { prime: p };
            }
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n >= 5 {
        Nonexistence::Applies { prime: n }
    } else {
        Nonexistence::NotApplicable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::two_cycle_search;
    use proptest::prelude::*;

    fn int(v: i64) -> Integer {
        BigInt::from(v)
    }

    #[test]
    fn decomposition_of_example() {
        let certs = two_cycle_search(4, 13).unwrap();
        let ex = certs.iter().find(|c| c.z == int(10)).unwrap();
        let dec = decompose_two_cycle(ex).unwrap();
        assert_eq!(dec.s, int(250));
        assert_eq!(dec.d, int(-4));
        assert_eq!(dec.delta, 2);
        assert_eq!(dec.z1, int(5));
        assert_eq!(dec.z2, Some(int(-1)));
        assert_eq!(&dec.s * &dec.d, int(-1000));

        let triv = certs.iter().find(|c| c.z.is_one()).unwrap();
        let dec = decompose_two_cycle(triv).unwrap();
        assert_eq!((dec.delta, dec.z1.clone()), (1, int(1)));
    }

    #[test]
    fn decomposition_rejects_fixed_points() {
        let cert = CycleCertificate {
            d: 4,
            z: int(1),
            xs: alloc::vec![int(0)],
            c_num: int(0),
            c: crate::exactnum::rat_int(0),
        };
        assert!(matches!(decompose_two_cycle(&cert), Err(crate::Error::InvalidInput(_))));
    }

    #[test]
    fn decomposes_every_found_cycle() {
        for d in [2u32, 4, 6, 8, 10] {
            for cert in two_cycle_search(d, 60).unwrap() {
                let dec = decompose_two_cycle(&cert).unwrap();
                assert!(dec.delta == 1 || dec.k % 2 == 0);
            }
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_divides_two(&int(-13), &int(9), 2).unwrap(), int(2));
        assert_eq!(gcd_divides_two(&int(3), &int(1), 3).unwrap(), int(2));
        assert_eq!(gcd_divides_two(&int(2), &int(1), 2).unwrap(), int(1));
        assert!(gcd_divides_two(&int(4), &int(2), 2).is_err());
    }

    #[test]
    fn lte_examples() {
        assert_eq!(lte_two_adic(&int(3), &int(1), 3).unwrap(), 0);
        assert_eq!(lte_two_adic(&int(5), &int(3), 3).unwrap(), 0);
        assert_eq!(lte_two_adic(&int(7), &int(-1), 5).unwrap(), 0);
        assert_eq!(power_sum_parts(&int(7), &int(-1), 5).1, int(2101));
        assert!(lte_two_adic(&int(2), &int(1), 3).is_err());
        assert!(lte_two_adic(&int(3), &int(1), 2).is_err());
    }

    fn brute_signature(k: u32, delta: i64, b: i64) -> Vec<(i64, i64, i64)> {
        let e = 2 * k - 1;
        let mut out = Vec::new();
        for x in -b..=b {
            for y in -b..=b {
                for z in -b..=b {
                    if num_integer::gcd(x, y) == 1
                        && i128::from(x).pow(k) + i128::from(y).pow(k) == i128::from(delta) * i128::from(z).pow(e)
                    {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    fn triples(sols: &[SignatureSolution]) -> Vec<(i64, i64, i64)> {
        use num_traits::ToPrimitive;
        sols.iter()
            .map(|s| (s.x.to_i64().unwrap(), s.y.to_i64().unwrap(), s.z.to_i64().unwrap()))
            .collect()
    }

    #[test]
    fn signature_examples() {
        let sols = signature_search(2, 2, 15).unwrap();
        assert!(triples(&sols).contains(&(-13, 9, 5)));
        assert_eq!(triples(&sols), brute_signature(2, 2, 15));

        let sols = signature_search(3, 1, 50).unwrap();
        assert!(sols.iter().all(|s| s.is_trivial()));
        assert_eq!(triples(&sols), brute_signature(3, 1, 50));

        let sols = signature_search(5, 1, 30).unwrap();
        assert!(sols.iter().all(|s| s.is_trivial()));
        assert_eq!(triples(&sols), brute_signature(5, 1, 30));
    }

    #[test]
    fn nonexistence_examples() {
        assert_eq!(nonexistence_check(5), Nonexistence::Applies { prime: 5 });
        assert_eq!(nonexistence_check(2), Nonexistence::NotApplicable);
        assert_eq!(nonexistence_check(35), Nonexistence::Applies { prime: 5 });
        assert_eq!(nonexistence_check(3), Nonexistence::NotApplicable);
        assert_eq!(nonexistence_check(4), Nonexistence::NotApplicable);
        assert_eq!(nonexistence_check(14), Nonexistence::Applies { prime: 7 });
    }

    #[test]
    fn applicable_degrees_have_only_trivial_cycles() {
        for k in 2..=20u64 {
            if let Nonexistence::Applies { .. } = nonexistence_check(k) {
                let certs = two_cycle_search(2 * k as u32, 120).unwrap();
                assert!(certs.iter().all(|c| c.is_trivial()), "k = {k}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn gcd_of_power_sums_divides_two(a in -10_000i64..10_000, b in -10_000i64..10_000, k in 1u32..=7) {
            prop_assume!(num_integer::gcd(a, b) == 1);
            let g = gcd_divides_two(&int(a), &int(b), k).unwrap();
            prop_assert!(g == int(1) || g == int(2));
        }
    }
}
