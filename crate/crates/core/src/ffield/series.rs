use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldError, Fp2, Fp2Field};

/// Exponent pair (i, j) of the monomial u^i v^j.
pub type Exponent = (u32, u32);

/// Graded-lexicographic key with u > v.
#[inline]
pub(crate) fn grlex(e: Exponent) -> (u32, u32) {
    (e.0 + e.1, e.0)
}

/// Element of F_{p^2}[[u, v]] modulo all monomials of total degree >= `trunc`.
///
/// Truncation order 1 is the residue field, order 2 is k[u,v]/(u^2, uv, v^2).
/// Terms are stored sparsely; zero coefficients are never kept.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    field: Fp2Field,
    trunc: u32,
    terms: BTreeMap<Exponent, Fp2>,
}

impl Series {
    pub fn zero(field: Fp2Field, trunc: u32) -> Series {
        assert!(trunc >= 1, "truncation order must be positive");
        Series {
            field,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Fp2, trunc: u32) -> Series {
        Series::monomial(c, 0, 0, trunc)
    }

    pub fn one(field: Fp2Field, trunc: u32) -> Series {
        Series::constant(field.one(), trunc)
    }

    pub fn monomial(c: Fp2, i: u32, j: u32, trunc: u32) -> Series {
        let mut s = Series::zero(c.field(), trunc);
        s.add_term((i, j), c);
        s
    }

    pub fn u(field: Fp2Field, trunc: u32) -> Series {
        Series::monomial(field.one(), 1, 0, trunc)
    }

    pub fn v(field: Fp2Field, trunc: u32) -> Series {
        Series::monomial(field.one(), 0, 1, trunc)
    }

    pub fn from_terms(
        field: Fp2Field,
        trunc: u32,
        terms: impl IntoIterator<Item = (Exponent, Fp2)>,
    ) -> Series {
        let mut s = Series::zero(field, trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn field(&self) -> Fp2Field {
        self.field
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, Fp2)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Fp2 {
        self.terms
            .get(&(i, j))
            .copied()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Fp2 {
        self.coeff(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Lowest total degree of a nonzero term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    /// Highest total degree of a nonzero term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|&(i, j)| i + j);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Leading term in graded-lex order with u > v.
    pub fn leading_term(&self) -> Option<(Exponent, Fp2)> {
        self.terms
            .iter()
            .max_by_key(|(&e, _)| grlex(e))
            .map(|(&e, &c)| (e, c))
    }

    pub(crate) fn add_term(&mut self, (i, j): Exponent, c: Fp2) {
        if c.is_zero() || (i as u64 + j as u64) >= self.trunc as u64 {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(|| self.field.zero());
        *slot = *slot + c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn with_truncation(&self, trunc: u32) -> Series {
        Series::from_terms(self.field, trunc, self.terms())
    }

    fn check_compatible(&self, other: &Series) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch);
        }
        if self.trunc != other.trunc {
            return Err(FieldError::TruncationMismatch(self.trunc, other.trunc));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Series) -> Result<Series, FieldError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series, FieldError> {
        self.check_compatible(other)?;
        let mut out = Series::zero(self.field, self.trunc);
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &other.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Fp2) -> Series {
        Series::from_terms(self.field, self.trunc, self.terms().map(|(e, a)| (e, a * c)))
    }

    pub fn shift(&self, di: u32, dj: u32) -> Series {
        Series::from_terms(
            self.field,
            self.trunc,
            self.terms().map(|((i, j), a)| ((i + di, j + dj), a)),
        )
    }

    pub fn pow(&self, mut e: u64) -> Series {
        let mut acc = Series::one(self.field, self.trunc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Absolute Frobenius f -> f^(p^e): coefficients are raised to p^e and
    /// every monomial u^i v^j becomes u^(i p^e) v^(j p^e).
    pub fn frobenius(&self, e: u32) -> Series {
        let q = (self.field.characteristic() as u64).pow(e);
        let mut out = Series::zero(self.field, self.trunc);
        for ((i, j), c) in self.terms() {
            let (ni, nj) = (i as u64 * q, j as u64 * q);
            if ni + nj < self.trunc as u64 {
                out.add_term((ni as u32, nj as u32), c.frobenius_pow(e));
            }
        }
        out
    }

    /// Coefficient-only twist c -> c^(p^e), leaving monomials alone.
    pub fn twist_coefficients(&self, e: u32) -> Series {
        Series::from_terms(
            self.field,
            self.trunc,
            self.terms().map(|(m, c)| (m, c.frobenius_pow(e))),
        )
    }

    /// Evaluates the (polynomial) truncation at (u, v) = (a, b).
    pub fn eval(&self, a: Fp2, b: Fp2) -> Fp2 {
        self.terms().fold(self.field.zero(), |acc, ((i, j), c)| {
            acc + c * a.pow(i as u64) * b.pow(j as u64)
        })
    }

    /// Substitutes u -> a*u + b*v and v -> c*u + d*v (linear change of variables).
    pub fn linear_substitute(&self, a: Fp2, b: Fp2, c: Fp2, d: Fp2) -> Series {
        let u = Series::u(self.field, self.trunc);
        let v = Series::v(self.field, self.trunc);
        let lu = &u.scale(a) + &v.scale(b);
        let lv = &u.scale(c) + &v.scale(d);
        self.terms().fold(Series::zero(self.field, self.trunc), |acc, ((i, j), k)| {
            &acc + &(&lu.pow(i as u64) * &lv.pow(j as u64)).scale(k)
        })
    }

    /// Inverse of a unit, by the geometric series in the maximal ideal.
    pub fn inverse(&self) -> Option<Series> {
        let c = self.constant_term().inverse()?;
        // self = c^-1 (1 - g) with g in the maximal ideal
        let normalized = self.scale(c);
        let g = &Series::one(self.field, self.trunc) - &normalized;
        let mut acc = Series::one(self.field, self.trunc);
        let mut power = Series::one(self.field, self.trunc);
        for _ in 1..self.trunc {
            power = &power * &g;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(acc.scale(c))
    }

    /// Exact quotient by v^k when every term is divisible by it.
    pub fn div_by_v_power(&self, k: u32) -> Option<Series> {
        if self.terms.keys().any(|&(_, j)| j < k) {
            return None;
        }
        Some(Series::from_terms(
            self.field,
            self.trunc,
            self.terms().map(|((i, j), c)| ((i, j - k), c)),
        ))
    }

    /// Smallest power of v occurring, for series in v alone.
    pub fn v_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        self.try_add(o).expect("incompatible series")
    }
}

impl Sub<&Series> for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        self.try_add(&-o).expect("incompatible series")
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        self.try_mul(o).expect("incompatible series")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::from_terms(self.field, self.trunc, self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, o: Series) -> Series {
        &self + &o
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        &self - &o
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        &self * &o
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, var: &str, e: u32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        _ => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        // increasing degree, u before v inside a degree
        terms.sort_by_key(|&(e, _)| (e.0 + e.1, std::cmp::Reverse(e.0)));
        let p = self.field.characteristic();
        for (k, ((i, j), c)) in terms.into_iter().enumerate() {
            let is_monomial = i + j > 0;
            let minus_one = c.in_prime_field() && c.coords().0 == p - 1 && p > 2;
            if k > 0 {
                write!(f, "{}", if minus_one && is_monomial { " - " } else { " + " })?;
            } else if minus_one && is_monomial {
                write!(f, "-")?;
            }
            if !is_monomial {
                write!(f, "{c}")?;
                continue;
            }
            if !(c.is_one() || minus_one) {
                if c.in_prime_field() {
                    write!(f, "{c}*")?;
                } else {
                    write!(f, "({c})*")?;
                }
            }
            fmt_power(f, "u", i)?;
            if i > 0 && j > 0 {
                write!(f, "*")?;
            }
            fmt_power(f, "v", j)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[T={}]({})", self.trunc, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Fp2Field {
        Fp2Field::from_discriminant(3, -4).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = f9();
        let u = Series::u(f, 8);
        let v = Series::v(f, 8);
        let lhs = &(&u + &v) * &(&u - &v);
        let rhs = &u.pow(2) - &v.pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(rhs.to_string(), "u^2 - v^2");
    }

    #[test]
    fn frobenius_twist_of_linear_form() {
        let f = f9();
        let d = f.delta_bar().unwrap();
        let s = &Series::u(f, 10) + &Series::v(f, 10).scale(d);
        let t = s.frobenius(1);
        assert_eq!(t.coeff(3, 0), f.one());
        assert_eq!(t.coeff(0, 3), d.pow(3));
        assert_eq!(t.num_terms(), 2);
        // coefficient-only twist keeps the monomials
        let c = s.twist_coefficients(1);
        assert_eq!(c.coeff(1, 0), f.one());
        assert_eq!(c.coeff(0, 1), d.pow(3));
    }

    #[test]
    fn truncation_drops_high_degrees() {
        let f = f9();
        let u = Series::u(f, 3);
        assert!(u.pow(3).is_zero());
        assert_eq!(u.pow(2).order(), Some(2));
    }

    #[test]
    fn unit_inverse() {
        let f = f9();
        let x = &Series::one(f, 7) + &Series::u(f, 7);
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, Series::one(f, 7));
        assert!(Series::u(f, 7).inverse().is_none());
    }

    #[test]
    fn mismatched_truncation_is_an_error() {
        let f = f9();
        let a = Series::u(f, 4);
        let b = Series::u(f, 5);
        assert!(matches!(
            a.try_mul(&b),
            Err(FieldError::TruncationMismatch(4, 5))
        ));
    }
}
