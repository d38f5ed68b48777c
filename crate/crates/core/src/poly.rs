//! Dense univariate polynomials over exact coefficient rings.
//!
//! Nesting gives multivariate polynomials: `UniPoly<UniPoly<Rational>>` is
//! `Q[c][x]`, with the outer variable first. Coefficients are stored in
//! ascending degree order and the leading coefficient is never zero.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::exactnum::Rational;

/// An exact commutative integral domain usable as a coefficient ring.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `Some(q)` with `q * rhs == self` when such a `q` exists in the ring.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!Zero::is_zero(rhs)).then(|| self / rhs)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> UniPoly<C> {
    /// Builds a polynomial from ascending coefficients, trimming leading zeros.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial variable itself.
    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = vec![C::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Self {
        Self::new(coeffs.iter().map(C::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `var^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(out)
    }

    pub fn scalar_mul(&self, s: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(C::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Horner evaluation at `v`.
    pub fn eval(&self, v: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.mul(v).add(c))
    }

    /// `self ∘ inner`, i.e. `self(inner(var))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl FnMut(&C) -> D) -> UniPoly<D> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Quotient and remainder by a divisor whose leading coefficient divides
    /// every intermediate leading coefficient. Fails with `InexactDivision`
    /// when some leading-coefficient division is not exact in the ring.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let (dlead, ddeg) = match (divisor.leading(), divisor.degree()) {
            (Some(l), Some(d)) => (l, d),
            _ => return invalid("division by the zero polynomial"),
        };
        let mut rem = self.coeffs.clone();
        let qlen = rem.len().saturating_sub(ddeg);
        let mut quot = vec![C::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + ddeg];
            if top.is_zero() {
                continue;
            }
            let q = top.div_exact(dlead).ok_or(Error::InexactDivision)?;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&q.mul(dc));
            }
            quot[k] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// `h` with `divisor * h == self`, or `InexactDivision`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }
}

impl<C: Ring> Ring for UniPoly<C> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        UniPoly::constant(C::from_rational(q))
    }
    fn add(&self, rhs: &Self) -> Self {
        UniPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        UniPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        UniPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.exact_div(rhs).ok()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<C: Ring> core::ops::$trait<&UniPoly<C>> for &UniPoly<C> {
            type Output = UniPoly<C>;
            fn $method(self, rhs: &UniPoly<C>) -> UniPoly<C> {
                UniPoly::$method(self, rhs)
            }
        }
        impl<C: Ring> core::ops::$trait for UniPoly<C> {
            type Output = UniPoly<C>;
            fn $method(self, rhs: UniPoly<C>) -> UniPoly<C> {
                UniPoly::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<C: Ring> core::ops::Neg for UniPoly<C> {
    type Output = UniPoly<C>;
    fn neg(self) -> UniPoly<C> {
        UniPoly::neg(&self)
    }
}

/// Nested coefficient lists: the interchange form of a (possibly nested)
/// polynomial, ascending degree at every level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffTree {
    Leaf(Rational),
    Node(Vec<CoeffTree>),
}

/// Human-readable and coefficient-list rendering.
pub trait Render {
    /// Descending-degree text; `vars[0]` names the outermost variable.
    fn render(&self, vars: &[&str]) -> String;
    fn coeff_tree(&self) -> CoeffTree;
    #[doc(hidden)]
    fn term_count(&self) -> usize;
    #[doc(hidden)]
    fn is_negative_term(&self) -> bool;
}

impl Render for Rational {
    fn render(&self, _vars: &[&str]) -> String {
        self.to_string()
    }
    fn coeff_tree(&self) -> CoeffTree {
        CoeffTree::Leaf(self.clone())
    }
    fn term_count(&self) -> usize {
        usize::from(!Zero::is_zero(self))
    }
    fn is_negative_term(&self) -> bool {
        self.is_negative()
    }
}

impl<C: Ring + Render> Render for UniPoly<C> {
    fn render(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (var, inner) = vars.split_first().map_or(("x", &[][..]), |(v, r)| (*v, r));
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let term = if mono.is_empty() {
                c.render(inner)
            } else if c.is_one() {
                mono.clone()
            } else if c.neg().is_one() {
                format!("-{mono}")
            } else if c.term_count() > 1 {
                format!("({})*{mono}", c.render(inner))
            } else {
                format!("{}*{mono}", c.render(inner))
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }

    fn coeff_tree(&self) -> CoeffTree {
        CoeffTree::Node(self.coeffs.iter().map(Render::coeff_tree).collect())
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().map(Render::term_count).sum()
    }

    fn is_negative_term(&self) -> bool {
        self.term_count() == 1 && self.coeffs.iter().any(|c| c.is_negative_term())
    }
}

impl<C: Ring + Render> fmt::Display for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&["x", "c", "t"]))
    }
}

/// Sylvester matrix of `p` (deg m) and `q` (deg n): `n` shifted rows of `p`
/// followed by `m` shifted rows of `q`, highest coefficients first.
pub fn sylvester_matrix<C: Ring>(p: &UniPoly<C>, q: &UniPoly<C>) -> Vec<Vec<C>> {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, shifts, deg) in [(p, n, m), (q, m, n)] {
        for i in 0..shifts {
            let mut row = vec![C::zero(); size];
            for k in 0..=deg {
                row[i + k] = poly.coeff(deg - k);
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_determinant<C: Ring>(mut m: Vec<Vec<C>>) -> Result<C> {
    let n = m.len();
    if n == 0 {
        return Ok(C::one());
    }
    let mut negate = false;
    let mut prev = C::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(C::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).ok_or(Error::InexactDivision)?;
            }
            m[i][k] = C::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// Resultant of `p` and `q` with respect to their variable, as the
/// determinant of the Sylvester matrix.
pub fn sylvester_resultant<C: Ring>(p: &UniPoly<C>, q: &UniPoly<C>) -> Result<C> {
    if p.is_zero() || q.is_zero() {
        return invalid("resultant of a zero polynomial");
    }
    if p.is_constant() && q.is_constant() {
        return invalid("resultant needs at least one nonconstant polynomial");
    }
    bareiss_determinant(sylvester_matrix(p, q))
}
