use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::linalg::Rational;

pub type Exponent = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vectors; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: Rational) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length must equal the number of variables");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        assert_eq!(exp.len(), self.nvars, "exponent length must equal the number of variables");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Exponent, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn add(&self, rhs: &Poly) -> Self {
        self.check(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Self {
        self.check(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, rhs: &Poly) -> Self {
        self.check(rhs);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn diff(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(e[i].into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.check(d);
        let (lead_e, lead_c) = d.leading()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = rem.leading() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let te: Exponent = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let t = Self::monomial(self.nvars, te, c / lead_c);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Scale so that the lex-leading coefficient is 1; returns the factor removed.
    pub fn make_monic(&self) -> (Rational, Poly) {
        match self.leading() {
            None => (Rational::one(), self.clone()),
            Some((_, c)) => {
                let c = c.clone();
                let inv = c.recip();
                (c, self.scale(&inv))
            }
        }
    }

    fn check(&self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomials over different variable sets");
    }
}

/// All exponent vectors in `nvars` variables with total degree `≤ max_degree`,
/// ordered by degree, then lexicographically.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut cur = vec![0u32; nvars];
        fill(&mut out, &mut cur, 0, d);
    }
    out
}

fn fill(out: &mut Vec<Exponent>, cur: &mut Exponent, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(out, cur, pos + 1, left - k);
    }
    cur[pos] = 0;
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{k}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn arithmetic_and_derivatives() {
        let p = x(0).mul(&x(0)).add(&x(1).scale(&rat(3)));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.diff(0), x(0).scale(&rat(2)));
        assert_eq!(p.diff(1), Poly::constant(2, rat(3)));
        assert_eq!(p.eval(&[rat(2), rat(1)]), rat(7));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = Poly::one(2).add(&x(0).mul(&x(0))).add(&x(1).mul(&x(1)));
        let b = x(0).sub(&x(1).scale(&rat(2)));
        let prod = a.mul(&b).mul(&a);
        assert_eq!(prod.div_exact(&a).unwrap(), a.mul(&b));
        assert!(b.div_exact(&a).is_none());
        assert!(a.add(&x(0)).div_exact(&b).is_none());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 3).len(), 20);
        assert_eq!(monomials_up_to(1, 4).len(), 5);
        assert_eq!(monomials_up_to(2, 1), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }
}
