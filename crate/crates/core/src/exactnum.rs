//! Arbitrary-precision integers and rationals plus the number-theoretic
//! predicates the rest of the crate relies on (factorization, radicals,
//! valuations, exact roots).
//!
//! Integers are `num_bigint::BigInt`; rationals are `num_rational::BigRational`,
//! which already keeps every value in lowest terms with a positive denominator.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_modular::ModularCoreOps;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

pub type Integer = BigInt;
pub type Rational = num_rational::BigRational;

/// Trial division limit before switching to primality testing and Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000;

/// Builds the canonical fraction `num/den`.
pub fn reduce(num: Integer, den: Integer) -> Result<Rational> {
    if den.is_zero() {
        return invalid("zero denominator");
    }
    Ok(Rational::new(num, den))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

/// Shorthand for `num/den` with small parts. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

/// `base^exp` for a rational base.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    Rational::new_raw(
        num_traits::Pow::pow(base.numer(), exp),
        num_traits::Pow::pow(base.denom(), exp),
    )
}

/// Prime factorization of `|n|`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(Integer, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(Integer, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reconstructs `|n|`.
    pub fn product(&self) -> Integer {
        self.factors
            .iter()
            .fold(Integer::one(), |acc, (p, e)| acc * num_traits::Pow::pow(p, *e))
    }

    fn from_primes(mut primes: Vec<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<(Integer, u32)> = Vec::new();
        for p in primes {
            let p = Integer::from(p);
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Factorization { factors }
    }
}

/// Complete, deterministic factorization of `|n|`.
pub fn factorize(n: &Integer) -> Result<Factorization> {
    if n.is_zero() {
        return invalid("cannot factor zero");
    }
    let mut m = n.magnitude().clone();
    let mut primes = Vec::new();

    // native arithmetic while the cofactor fits in u128
    let mut small = m.to_u128();
    for p in trial_divisors() {
        match small {
            Some(s) => {
                let wide = u128::from(p);
                if wide * wide > s {
                    break;
                }
                let mut s = s;
                while s % wide == 0 {
                    s /= wide;
                    primes.push(BigUint::from(p));
                }
                small = Some(s);
                m = BigUint::from(s);
            }
            None => {
                while (&m % p).is_zero() {
                    m /= p;
                    primes.push(BigUint::from(p));
                }
                small = m.to_u128();
            }
        }
    }
    if !m.is_one() {
        split_cofactor(m, &mut primes);
    }
    Ok(Factorization::from_primes(primes))
}

fn trial_divisors() -> impl Iterator<Item = u64> {
    [2u64, 3]
        .into_iter()
        .chain((5..=TRIAL_DIVISION_LIMIT).step_by(2).filter(|p| p % 3 != 0))
}

// `m` has no prime factor up to the trial limit.
fn split_cofactor(m: BigUint, out: &mut Vec<BigUint>) {
    if m.is_one() {
        return;
    }
    let limit = u128::from(TRIAL_DIVISION_LIMIT);
    if m.to_u128().is_some_and(|v| v < limit * limit) || is_prime_biguint(&m) {
        out.push(m);
        return;
    }
    if let Some(r) = exact_root_biguint(&m, 2) {
        split_cofactor(r.clone(), out);
        split_cofactor(r, out);
        return;
    }
    let d = match m.to_u128() {
        Some(small) => BigUint::from(pollard_brent_u128(small)),
        None => pollard_brent(&m),
    };
    split_cofactor(&m / &d, out);
    split_cofactor(d, out);
}

/// Native-word twin of [`pollard_brent`].
fn pollard_brent_u128(n: u128) -> u128 {
    let mut c = 1u128;
    loop {
        let f = |x: u128| x.mulm(x, &n).addm(c, &n);
        let (mut y, mut r, mut q, mut g) = (2u128, 1u64, 1u128, 1u128);
        let (mut x, mut ys) = (y, y);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let batch = core::cmp::min(128, r - k);
                for _ in 0..batch {
                    y = f(y);
                    q = q.mulm(x.abs_diff(y), &n);
                }
                g = q.gcd(&n);
                k += batch;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Finds a nontrivial divisor of the odd composite `n`.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                let batch = core::cmp::min(128, r - k);
                for _ in 0..batch {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

/// Deterministic primality for `|n| < 3.3e24` (Miller–Rabin on the first 13
/// prime bases); above that, Baillie–PSW (no known counterexample).
pub fn is_prime(n: &Integer) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    is_prime_biguint(n.magnitude())
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn is_prime_biguint(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &p in MR_BASES.iter() {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let strong_probable = |a: &BigUint| {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    // Sorenson–Webster bound for the 13-base set.
    let deterministic_below: u128 = 3_317_044_064_679_887_385_961_981;
    if n.to_u128().is_some_and(|v| v < deterministic_below) {
        return MR_BASES.iter().all(|&a| strong_probable(&BigUint::from(a)));
    }
    strong_probable(&two) && strong_lucas_probable_prime(n)
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        core::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == three && n.mod_floor(&BigInt::from(4)) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

// Strong Lucas test with Selfridge parameters (P = 1, Q = (1 - D)/4).
fn strong_lucas_probable_prime(n_u: &BigUint) -> bool {
    if exact_root_biguint(n_u, 2).is_some() {
        return false;
    }
    let n = BigInt::from(n_u.clone());
    let mut d_param = BigInt::from(5);
    loop {
        match jacobi(&d_param, &n) {
            -1 => break,
            0 if d_param.abs() != n => return false,
            _ => {}
        }
        d_param = if d_param.is_positive() {
            -(d_param + BigInt::from(2))
        } else {
            BigInt::from(2) - d_param
        };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d_param) / 4u32;
    let m = |x: BigInt| x.mod_floor(&n);
    let half = |x: BigInt| {
        let x = x.mod_floor(&n);
        if x.is_odd() {
            (x + &n) >> 1
        } else {
            x >> 1
        }
    };

    let n_plus_1: BigInt = &n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let d = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = m(q.clone());
    let bits = d.bits();
    for i in (0..bits - 1).rev() {
        u = m(&u * &v);
        v = m(&v * &v - &qk * 2u32);
        qk = m(&qk * &qk);
        if d.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&d_param * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = m(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = m(&v * &v - &qk * 2u32);
        qk = m(&qk * &qk);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Product of the distinct primes dividing `|n|`; `radical(±1) = 1`.
pub fn radical(n: &Integer) -> Result<Integer> {
    Ok(factorize(n)?.primes().fold(Integer::one(), |acc, p| acc * p))
}

/// Largest `e` with `p^e | n`.
pub fn p_adic_valuation(n: &Integer, p: &Integer) -> Result<u32> {
    if n.is_zero() {
        return invalid("valuation of zero is infinite");
    }
    if !is_prime(p) {
        return invalid("valuation base must be prime");
    }
    let mut m = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

fn exact_root_biguint(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    (num_traits::Pow::pow(&r, k) == *n).then_some(r)
}

/// Returns `r` with `r^k = n` when one exists (the nonnegative one for even `k`).
pub fn kth_root_exact(n: &Integer, k: u32) -> Option<Integer> {
    if k == 0 {
        return None;
    }
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root_biguint(n.magnitude(), k).map(|r| -Integer::from(r));
    }
    exact_root_biguint(n.magnitude(), k).map(Integer::from)
}

// Quadratic residues modulo 64 and 63 as bit masks.
fn qr_masks() -> (u64, u64) {
    let mut m64 = 0u64;
    let mut m63 = 0u64;
    for i in 0..64u64 {
        m64 |= 1 << ((i * i) % 64);
        m63 |= 1 << ((i * i) % 63);
    }
    (m64, m63)
}

/// Square root of a perfect square, with a cheap residue filter mod 64·63.
pub fn square_root_exact(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let (m64, m63) = qr_masks();
    let r = (n % 4032u32).to_u64().unwrap_or(0);
    if m64 >> (r % 64) & 1 == 0 || m63 >> (r % 63) & 1 == 0 {
        return None;
    }
    kth_root_exact(n, 2)
}

/// Möbius function of a small positive integer.
pub fn mobius(n: u64) -> i8 {
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    fn brute_factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn as_small(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors().iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(int(-26), int(20)).unwrap(), rat(-13, 10));
        assert_eq!(reduce(int(9000), int(10000)).unwrap(), rat(9, 10));
        assert!(reduce(int(5), int(0)).is_err());
        let q = reduce(int(3), int(-6)).unwrap();
        assert_eq!((q.numer().clone(), q.denom().clone()), (int(-1), int(2)));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(as_small(&factorize(&int(72)).unwrap()), vec![(2, 3), (3, 2)]);
        assert_eq!(brute_factor(19561), vec![(31, 1), (631, 1)]);
        assert_eq!(as_small(&factorize(&int(19561)).unwrap()), vec![(31, 1), (631, 1)]);
        assert!(factorize(&int(1)).unwrap().is_empty());
        assert!(factorize(&int(-1)).unwrap().is_empty());
        assert!(factorize(&int(0)).is_err());
    }

    #[test]
    fn factorize_beyond_trial_division() {
        // (10^6 + 3)(10^6 + 33) and a 20-digit semiprime
        let p = int(1_000_003);
        let q = int(1_000_033);
        let f = factorize(&(&p * &q)).unwrap();
        assert_eq!(f.factors(), &[(p.clone(), 1), (q.clone(), 1)]);

        let a: Integer = "4294967311".parse().unwrap();
        let b: Integer = "1099511627791".parse().unwrap();
        assert!(is_prime(&a) && is_prime(&b));
        let f = factorize(&(&a * &b * &a)).unwrap();
        assert_eq!(f.factors(), &[(a, 2), (b, 1)]);
    }

    #[test]
    fn primality_large() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes; 2^128 + 1 is composite.
        let m89 = (Integer::one() << 89) - 1;
        let m127 = (Integer::one() << 127) - 1;
        assert!(is_prime(&m89));
        assert!(is_prime(&m127));
        assert!(!is_prime(&((Integer::one() << 128) + 1)));
        assert!(!is_prime(&(&m89 * &m127)));
        // Strong pseudoprime to all 13 bases below 3.3e24 would be caught by Lucas.
        let carmichael = int(561);
        assert!(!is_prime(&carmichael));
    }

    #[test]
    fn radical_examples() {
        assert_eq!(radical(&int(72)).unwrap(), int(6));
        assert_eq!(radical(&int(1)).unwrap(), int(1));
        assert_eq!(radical(&int(30)).unwrap(), int(30));
        assert_eq!(radical(&int(-72)).unwrap(), int(6));
        assert!(radical(&int(0)).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_adic_valuation(&int(250), &int(5)).unwrap(), 3);
        assert_eq!(p_adic_valuation(&int(250), &int(2)).unwrap(), 1);
        assert_eq!(p_adic_valuation(&int(7), &int(3)).unwrap(), 0);
        assert!(p_adic_valuation(&int(7), &int(6)).is_err());
        assert!(p_adic_valuation(&int(0), &int(2)).is_err());
    }

    #[test]
    fn kth_root_examples() {
        assert_eq!(kth_root_exact(&int(1000), 3), Some(int(10)));
        assert_eq!(kth_root_exact(&int(128), 7), Some(int(2)));
        assert_eq!(kth_root_exact(&int(100), 3), None);
        assert_eq!(kth_root_exact(&int(-8), 3), Some(int(-2)));
        assert_eq!(kth_root_exact(&int(-4), 2), None);
        assert_eq!(kth_root_exact(&int(0), 5), Some(int(0)));
        // 1299^7 exceeds f64 integer precision
        let big = num_traits::Pow::pow(&int(1299), 7u32);
        assert_eq!(kth_root_exact(&big, 7), Some(int(1299)));
        assert_eq!(kth_root_exact(&(big + 1), 7), None);
    }

    #[test]
    fn square_filter_agrees_with_root() {
        for n in 0..5000i64 {
            let expect = kth_root_exact(&int(n), 2);
            assert_eq!(square_root_exact(&int(n)), expect, "n = {n}");
        }
    }

    #[test]
    fn mobius_values() {
        let expect = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), m);
        }
    }

    proptest! {
        #[test]
        fn radical_is_submultiplicative(m in 1i64..200_000, n in 1i64..200_000) {
            let (m, n) = (int(m), int(n));
            let lhs = radical(&(&m * &n)).unwrap();
            let rhs = radical(&m).unwrap() * radical(&n).unwrap();
            prop_assert!((&rhs % &lhs).is_zero());
            if m.gcd(&n).is_one() {
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn valuation_is_exact(n in prop::num::i64::ANY.prop_filter("nonzero", |n| *n != 0),
                              p in prop::sample::select(vec![2i64, 3, 5, 7, 11, 13])) {
            let (n, p) = (int(n), int(p));
            let v = p_adic_valuation(&n, &p).unwrap();
            let pv = num_traits::Pow::pow(&p, v);
            prop_assert!((&n % &pv).is_zero());
            prop_assert!(!(&n % (pv * &p)).is_zero());
        }

        #[test]
        fn kth_root_inverts_power(r in -5000i64..5000, k in 1u32..12) {
            let n = num_traits::Pow::pow(&int(r), k);
            let expect = if k % 2 == 0 { int(r.abs()) } else { int(r) };
            prop_assert_eq!(kth_root_exact(&n, k), Some(expect));
        }

        #[test]
        fn reduce_is_idempotent(num in -10_000i64..10_000, den in 1i64..10_000) {
            let q = reduce(int(num), int(den)).unwrap();
            let again = reduce(q.numer().clone(), q.denom().clone()).unwrap();
            prop_assert_eq!(&q, &again);
            prop_assert!(q.numer().gcd(q.denom()).is_one());
        }

        #[test]
        fn factorization_matches_trial_division(n in 1u64..5_000_000_000) {
            let f = factorize(&Integer::from(n)).unwrap();
            prop_assert_eq!(as_small(&f), brute_factor(n));
            prop_assert_eq!(f.product(), Integer::from(n));
        }
    }
}
