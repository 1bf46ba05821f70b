use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::poly::Poly;
use crate::linalg::Rational;

/// Rational function `num / Π atom_i^{e_i}`.
///
/// Denominator atoms are monic, non-constant and pairwise distinct. After
/// every operation the numerator is divided by atoms as long as that is
/// exact, so shared factors with known atoms never accumulate. Equality is
/// decided by cross-multiplication and does not depend on the
/// representation.
#[derive(Clone)]
pub struct RatFn {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl RatFn {
    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Poly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Vec::new() }
    }

    /// `num / den`; `None` when `den` is the zero polynomial.
    pub fn new(num: Poly, den: &Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let mut out = Self::from_poly(num);
        out.divide_by_poly(den);
        Some(out)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(self.nvars()), |acc, (a, e)| acc.mul(&a.pow(*e)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars());
        }
        RatFn { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn add(&self, rhs: &RatFn) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &RatFn) -> Self {
        self.combine(rhs, true)
    }

    pub fn mul(&self, rhs: &RatFn) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (a, e) in &rhs.den {
            match den.iter_mut().find(|(b, _)| b == a) {
                Some(slot) => slot.1 += e,
                None => den.push((a.clone(), *e)),
            }
        }
        let mut out = RatFn { num: self.num.mul(&rhs.num), den };
        out.cancel();
        out
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut out = RatFn { num: self.denominator(), den: Vec::new() };
        out.divide_by_poly(&self.num);
        Some(out)
    }

    pub fn div(&self, rhs: &RatFn) -> Option<Self> {
        Some(self.mul(&rhs.inv()?))
    }

    pub fn diff(&self, i: usize) -> Self {
        if self.den.is_empty() {
            return Self::from_poly(self.num.diff(i));
        }
        // d(N/Π a^e) = (N'·Π a − N·Σ e·a'·Π_{j≠i} a_j) / Π a^{e+1}
        let atoms: Vec<&Poly> = self.den.iter().map(|(a, _)| a).collect();
        let all = atoms.iter().fold(Poly::one(self.nvars()), |acc, a| acc.mul(a));
        let mut num = self.num.diff(i).mul(&all);
        for (k, (a, e)) in self.den.iter().enumerate() {
            let others = atoms
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(Poly::one(self.nvars()), |acc, (_, b)| acc.mul(b));
            let term = self.num.mul(&a.diff(i)).mul(&others).scale(&Rational::from_integer((*e).into()));
            num = num.sub(&term);
        }
        let den = self.den.iter().map(|(a, e)| (a.clone(), e + 1)).collect();
        let mut out = RatFn { num, den };
        out.cancel();
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.denominator().eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    fn combine(&self, rhs: &RatFn, subtract: bool) -> Self {
        let mut den = self.den.clone();
        for (a, e) in &rhs.den {
            match den.iter_mut().find(|(b, _)| b == a) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => den.push((a.clone(), *e)),
            }
        }
        let lift = |f: &RatFn| {
            let mut num = f.num.clone();
            for (a, e) in &den {
                let have = f.den.iter().find(|(b, _)| b == a).map_or(0, |(_, k)| *k);
                num = num.mul(&a.pow(e - have));
            }
            num
        };
        let (l, r) = (lift(self), lift(rhs));
        let num = if subtract { l.sub(&r) } else { l.add(&r) };
        let mut out = RatFn { num, den };
        out.cancel();
        out
    }

    /// Multiply the denominator by `p`, splitting `p` over known atoms first.
    fn divide_by_poly(&mut self, p: &Poly) {
        let mut rest = p.clone();
        for slot in self.den.iter_mut() {
            while let Some(q) = rest.div_exact(&slot.0) {
                rest = q;
                slot.1 += 1;
            }
        }
        let (c, monic) = rest.make_monic();
        self.num = self.num.scale(&c.recip());
        if monic.as_constant().is_none() {
            self.den.push((monic, 1));
        }
        self.cancel();
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for slot in self.den.iter_mut() {
            while slot.1 > 0 {
                match self.num.div_exact(&slot.0) {
                    Some(q) => {
                        self.num = q;
                        slot.1 -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for RatFn {}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (i, (a, e)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "({a})^{e}")?;
        }
        write!(f, ")")
    }
}

/// Shared arithmetic for tensor-field entries.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_in(nvars: usize) -> Self;
    fn constant_in(nvars: usize, c: Rational) -> Self;
    fn nvars(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Rational) -> Self;
    fn diff(&self, i: usize) -> Self;
    /// Multiplicative inverse, when it exists in this ring.
    fn inv(&self) -> Option<Self>;
    fn one_in(nvars: usize) -> Self {
        Self::constant_in(nvars, Rational::one())
    }
}

impl Scalar for Poly {
    fn zero_in(nvars: usize) -> Self {
        Poly::zero(nvars)
    }
    fn constant_in(nvars: usize, c: Rational) -> Self {
        Poly::constant(nvars, c)
    }
    fn nvars(&self) -> usize {
        Poly::nvars(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn scale(&self, s: &Rational) -> Self {
        Poly::scale(self, s)
    }
    fn diff(&self, i: usize) -> Self {
        Poly::diff(self, i)
    }
    fn inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!c.is_zero()).then(|| Poly::constant(self.nvars(), c.recip()))
    }
}

impl Scalar for RatFn {
    fn zero_in(nvars: usize) -> Self {
        RatFn::zero(nvars)
    }
    fn constant_in(nvars: usize, c: Rational) -> Self {
        RatFn::constant(nvars, c)
    }
    fn nvars(&self) -> usize {
        RatFn::nvars(self)
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        RatFn::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        RatFn::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RatFn::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        RatFn::neg(self)
    }
    fn scale(&self, s: &Rational) -> Self {
        RatFn::scale(self, s)
    }
    fn diff(&self, i: usize) -> Self {
        RatFn::diff(self, i)
    }
    fn inv(&self) -> Option<Self> {
        RatFn::inv(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};

    fn q(n: usize) -> Poly {
        // 1 + x1² + … + xn²
        (0..n).fold(Poly::one(n), |acc, i| acc.add(&Poly::var(n, i).pow(2)))
    }

    #[test]
    fn field_arithmetic() {
        let a = RatFn::new(Poly::var(2, 0), &q(2)).unwrap();
        let b = RatFn::new(Poly::var(2, 1), &q(2).pow(2)).unwrap();
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        assert_eq!(a.mul(&a.inv().unwrap()), RatFn::one(2));
        assert_eq!(a.div(&a).unwrap(), RatFn::one(2));
        let p = s.eval(&[rat(1), rat(1)]).unwrap();
        assert_eq!(p, ratio(1, 3) + ratio(1, 9));
    }

    #[test]
    fn cancellation_keeps_polynomials_polynomial() {
        let a = RatFn::new(q(2).mul(&Poly::var(2, 0)), &q(2)).unwrap();
        assert_eq!(a.as_poly(), Some(&Poly::var(2, 0)));
        let c = RatFn::new(q(2).scale(&rat(4)), &q(2).scale(&rat(2))).unwrap();
        assert_eq!(c.as_poly(), Some(&Poly::constant(2, rat(2))));
    }

    #[test]
    fn quotient_rule() {
        // d/dx1 (1/q) = -2 x1 / q²
        let f = RatFn::new(Poly::one(2), &q(2)).unwrap();
        let want = RatFn::new(Poly::var(2, 0).scale(&rat(-2)), &q(2).pow(2)).unwrap();
        assert_eq!(f.diff(0), want);
        assert!(RatFn::constant(2, rat(5)).diff(1).is_zero());
    }
}
