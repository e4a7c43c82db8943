use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::numtheory::{self, Splitting};

use super::FieldError;

/// The field F_{p^2} presented as F_p[s]/(s^2 - t*s - n).
///
/// For odd p built from a discriminant, `t = 0` and `n = D mod p`, so `s` is the
/// reduction of sqrt(D). For p = 2 the minimal polynomial of omega is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2Field {
    p: u64,
    t: u64,
    n: u64,
    /// s^p written in the basis {1, s}.
    frob_s: (u64, u64),
    /// Whether `s` is the image of delta = sqrt(D) (odd p) or of omega (p = 2).
    gen_is_delta: bool,
}

impl Fp2Field {
    pub fn with_modulus(p: u64, t: u64, n: u64) -> Result<Self, FieldError> {
        if !numtheory::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let (t, n) = (t % p, n % p);
        // s^2 - t s - n has no root in F_p.
        let reducible = (0..p).any(|r| {
            let v = (numtheory::mul_mod(r, r, p) + 2 * p
                - numtheory::mul_mod(t, r, p)
                - n)
                % p;
            v == 0
        });
        if reducible {
            return Err(FieldError::Reducible { p, t, n });
        }
        let mut field = Fp2Field {
            p,
            t,
            n,
            frob_s: (0, 1),
            gen_is_delta: false,
        };
        let s = field.gen();
        let sp = s.pow(p);
        field.frob_s = (sp.c0, sp.c1);
        Ok(field)
    }

    /// F_{p^2} as the residue field O_K / p for an inert prime p.
    pub fn from_discriminant(p: u64, disc: i64) -> Result<Self, FieldError> {
        if !numtheory::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        match numtheory::splitting(disc, p) {
            Splitting::Split => return Err(FieldError::Split { p, disc }),
            Splitting::Ramified => return Err(FieldError::Ramified { p, disc }),
            Splitting::Inert => {}
        }
        let field = if p == 2 {
            // disc = 5 mod 8, omega^2 = omega + (disc - 1)/4.
            let n = ((disc - 1) / 4).rem_euclid(2) as u64;
            Fp2Field::with_modulus(2, 1, n)?
        } else {
            let n = disc.rem_euclid(p as i64) as u64;
            let mut f = Fp2Field::with_modulus(p, 0, n)?;
            f.gen_is_delta = true;
            f
        };
        Ok(field)
    }

    /// Some presentation of F_{p^2}, for computations that do not depend on K.
    pub fn for_prime(p: u64) -> Result<Self, FieldError> {
        if !numtheory::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p == 2 {
            return Fp2Field::with_modulus(2, 1, 1);
        }
        let n = (2..p)
            .find(|&a| numtheory::pow_mod(a, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a non-residue");
        Fp2Field::with_modulus(p, 0, n)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.p * self.p
    }

    pub fn modulus(&self) -> (u64, u64) {
        (self.t, self.n)
    }

    pub fn element(&self, c0: u64, c1: u64) -> Fp2 {
        Fp2 {
            c0: c0 % self.p,
            c1: c1 % self.p,
            field: *self,
        }
    }

    pub fn from_int(&self, a: i64) -> Fp2 {
        self.element(a.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn zero(&self) -> Fp2 {
        self.element(0, 0)
    }

    pub fn one(&self) -> Fp2 {
        self.element(1, 0)
    }

    /// The generator `s` of the presentation.
    pub fn gen(&self) -> Fp2 {
        self.element(0, 1)
    }

    /// Image of delta = sqrt(D), when the field was built from a discriminant
    /// with p odd.
    pub fn delta_bar(&self) -> Option<Fp2> {
        self.gen_is_delta.then(|| self.gen())
    }

    /// All p^2 elements, ordered by (c1, c0).
    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        let p = self.p;
        (0..p).flat_map(move |b| (0..p).map(move |a| self.element(a, b)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2 {
    c0: u64,
    c1: u64,
    field: Fp2Field,
}

impl Fp2 {
    pub fn field(&self) -> Fp2Field {
        self.field
    }

    pub fn coords(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn is_one(&self) -> bool {
        self.c0 == 1 && self.c1 == 0
    }

    /// True when the element lies in the prime field.
    pub fn in_prime_field(&self) -> bool {
        self.c1 == 0
    }

    pub fn pow(&self, mut e: u64) -> Fp2 {
        let mut acc = self.field.one();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// x -> x^p.
    pub fn frobenius(&self) -> Fp2 {
        let f = self.field;
        let (s0, s1) = f.frob_s;
        let p = f.p;
        Fp2 {
            c0: (self.c0 + numtheory::mul_mod(self.c1, s0, p)) % p,
            c1: numtheory::mul_mod(self.c1, s1, p),
            field: f,
        }
    }

    /// x -> x^(p^e).
    pub fn frobenius_pow(&self, e: u32) -> Fp2 {
        if e % 2 == 0 {
            *self
        } else {
            self.frobenius()
        }
    }

    /// Norm to F_p, x^(p+1).
    pub fn norm(&self) -> u64 {
        let n = *self * self.frobenius();
        debug_assert!(n.in_prime_field());
        n.c0
    }

    pub fn inverse(&self) -> Option<Fp2> {
        if self.is_zero() {
            return None;
        }
        let ninv = numtheory::inv_mod(self.norm(), self.field.p)?;
        Some(self.frobenius() * self.field.element(ninv, 0))
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, o: Fp2) -> Fp2 {
        debug_assert_eq!(self.field, o.field);
        let p = self.field.p;
        Fp2 {
            c0: (self.c0 + o.c0) % p,
            c1: (self.c1 + o.c1) % p,
            field: self.field,
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, o: Fp2) -> Fp2 {
        self + (-o)
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    fn neg(self) -> Fp2 {
        let p = self.field.p;
        Fp2 {
            c0: (p - self.c0) % p,
            c1: (p - self.c1) % p,
            field: self.field,
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, o: Fp2) -> Fp2 {
        debug_assert_eq!(self.field, o.field);
        let f = self.field;
        let p = f.p;
        let m = |a, b| numtheory::mul_mod(a, b, p);
        let bb = m(self.c1, o.c1);
        Fp2 {
            c0: (m(self.c0, o.c0) + m(bb, f.n)) % p,
            c1: (m(self.c0, o.c1) + m(self.c1, o.c0) + m(bb, f.t)) % p,
            field: f,
        }
    }
}

impl Div for Fp2 {
    type Output = Fp2;
    fn div(self, o: Fp2) -> Fp2 {
        self * o.inverse().expect("division by zero in F_p^2")
    }
}

impl fmt::Debug for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0, self.c1) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "s"),
            (0, b) => write!(f, "{b}s"),
            (a, 1) => write!(f, "{a}+s"),
            (a, b) => write!(f, "{a}+{b}s"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_is_an_involution_fixing_the_prime_field() {
        for p in [2u64, 3, 5, 7, 11] {
            let f = Fp2Field::for_prime(p).unwrap();
            let mut fixed = 0;
            for x in f.elements() {
                assert_eq!(x.frobenius(), x.pow(p));
                assert_eq!(x.frobenius().frobenius(), x);
                if x.frobenius() == x {
                    fixed += 1;
                }
            }
            assert_eq!(fixed, p);
        }
    }

    #[test]
    fn inverses() {
        let f = Fp2Field::from_discriminant(7, -4).unwrap();
        for x in f.elements().filter(|x| !x.is_zero()) {
            assert!((x * x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn delta_squares_to_discriminant() {
        let f = Fp2Field::from_discriminant(3, -4).unwrap();
        let d = f.delta_bar().unwrap();
        assert_eq!(d * d, f.from_int(-4));
        // frobenius conjugates sqrt(D)
        assert_eq!(d.frobenius(), -d);
    }

    #[test]
    fn construction_gates() {
        assert!(matches!(
            Fp2Field::from_discriminant(5, -4),
            Err(FieldError::Split { .. })
        ));
        assert!(matches!(
            Fp2Field::from_discriminant(7, -7),
            Err(FieldError::Ramified { .. })
        ));
        assert!(matches!(
            Fp2Field::from_discriminant(2, -7),
            Err(FieldError::Split { .. })
        ));
        let f4 = Fp2Field::from_discriminant(2, -3).unwrap();
        assert_eq!(f4.order(), 4);
        assert!(matches!(Fp2Field::for_prime(9), Err(FieldError::NotPrime(9))));
    }
}
