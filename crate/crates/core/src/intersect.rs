//! Intersection numbers on the compactified surface restricted to the
//! supersingular locus Z = Z_1 + ... + Z_n, checked numerically and as
//! polynomial identities in p.
//!
//! Divisor classes are never represented directly; only their intersection
//! numbers and degrees enter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves;
use crate::exact::{Check, Exact};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IError {
    #[error("p = {0} must be at least 2")]
    SmallPrime(u64),
    #[error("component count must be non-negative, got {0}")]
    NegativeCount(BigInt),
    #[error("identity `{0}` failed")]
    IdentityFailed(String),
}

/// Integer polynomial in a formal variable p, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct PolyInP {
    coeffs: Vec<i128>,
}

impl PolyInP {
    pub fn new(mut coeffs: Vec<i128>) -> PolyInP {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyInP { coeffs }
    }

    pub fn constant(c: i128) -> PolyInP {
        PolyInP::new(vec![c])
    }

    pub fn p() -> PolyInP {
        PolyInP::new(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn pow(&self, e: u32) -> PolyInP {
        (0..e).fold(PolyInP::constant(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + BigInt::from(*c))
    }

    /// Exact division by a constant, if every coefficient is divisible.
    pub fn div_exact(&self, d: i128) -> Option<PolyInP> {
        if d == 0 || self.coeffs.iter().any(|c| c % d != 0) {
            return None;
        }
        Some(PolyInP::new(self.coeffs.iter().map(|c| c / d).collect()))
    }
}

impl Add<&PolyInP> for &PolyInP {
    type Output = PolyInP;
    fn add(self, o: &PolyInP) -> PolyInP {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyInP::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0) + o.coeffs.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl Neg for &PolyInP {
    type Output = PolyInP;
    fn neg(self) -> PolyInP {
        PolyInP::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub<&PolyInP> for &PolyInP {
    type Output = PolyInP;
    fn sub(self, o: &PolyInP) -> PolyInP {
        self + &(-o)
    }
}

impl Mul<&PolyInP> for &PolyInP {
    type Output = PolyInP;
    fn mul(self, o: &PolyInP) -> PolyInP {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return PolyInP::default();
        }
        let mut out = vec![0i128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyInP::new(out)
    }
}

macro_rules! owned_op {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyInP {
            type Output = PolyInP;
            fn $m(self, o: PolyInP) -> PolyInP {
                (&self).$m(&o)
            }
        }
    };
}
owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

impl fmt::Display for PolyInP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "p")?,
                (1, _) => write!(f, "{a}p")?,
                (_, 1) => write!(f, "p^{i}")?,
                _ => write!(f, "{a}p^{i}")?,
            }
        }
        Ok(())
    }
}

/// A polynomial identity lhs = rhs in p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicIdentity {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

fn symbolic(name: &str, lhs: PolyInP, rhs: PolyInP) -> SymbolicIdentity {
    SymbolicIdentity {
        name: name.to_string(),
        pass: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// 2g - 2 = p^2 - p - 2 for g = p(p-1)/2.
fn two_g_minus_two() -> PolyInP {
    let p = PolyInP::p();
    &(&p * &p) - &p - PolyInP::constant(2)
}

/// Z_i . K = deg(L^3 restricted to Z_i) = 3(p^2 - 1).
fn zi_k_poly() -> PolyInP {
    let p = PolyInP::p();
    (&p * &p - PolyInP::constant(1)) * PolyInP::constant(3)
}

/// Z_i . Z_i from adjunction 2g - 2 = Z_i.Z_i + Z_i.K.
pub fn self_intersection_poly() -> PolyInP {
    &two_g_minus_two() - &zi_k_poly()
}

/// The closed form -2p^2 - p + 1.
pub fn self_intersection_closed_form() -> PolyInP {
    PolyInP::new(vec![1, -1, -2])
}

pub fn symbolic_identities() -> Vec<SymbolicIdentity> {
    let p = PolyInP::p();
    let one = PolyInP::constant(1);
    let p2m1 = &(&p * &p) - &one;
    let p3p1 = &p.pow(3) + &one;
    vec![
        symbolic(
            "Zi.Zi (adjunction) = -2p^2 - p + 1",
            self_intersection_poly(),
            self_intersection_closed_form(),
        ),
        symbolic(
            "p(p^3+1) + Zi.Zi = (p^2-1)^2",
            &(&p * &p3p1) + &self_intersection_closed_form(),
            p2m1.pow(2),
        ),
        symbolic(
            "Z.Z per component = (p^2-1) deg(L|Z)",
            p2m1.pow(2),
            &p2m1 * &p2m1,
        ),
        symbolic(
            "(p^2-1)^2 + 3(p^2-1) = p^4 + p^2 - 2",
            &p2m1.pow(2) + &(&PolyInP::constant(3) * &p2m1),
            PolyInP::new(vec![-2, 0, 1, 0, 1]),
        ),
        symbolic(
            "(K+C)^2 = 9 c1^2 = 3 c2 per component",
            PolyInP::constant(9),
            &PolyInP::constant(3) * &PolyInP::constant(3),
        ),
        symbolic(
            "p^3 + 1 = (p+1)(p^2-p+1)",
            p3p1.clone(),
            &(&p + &one) * &PolyInP::new(vec![1, -1, 1]),
        ),
        symbolic(
            "p^2 + 1 + 2 g p = p^3 + 1",
            &(&(&p * &p) + &one) + &(&(&(&p * &p) - &p) * &p),
            p3p1,
        ),
    ]
}

fn check_p(p: u64) -> Result<BigInt, IError> {
    if p < 2 {
        return Err(IError::SmallPrime(p));
    }
    Ok(BigInt::from(p))
}

fn check_n(n: &BigInt) -> Result<(), IError> {
    if n.is_negative() {
        return Err(IError::NegativeCount(n.clone()));
    }
    Ok(())
}

/// Z_i . Z_i = (2g - 2) - Z_i . K.
pub fn self_intersection(p: u64) -> Result<BigInt, IError> {
    let pb = check_p(p)?;
    let g = BigInt::from(curves::genus(p));
    let zi_k = zi_k_poly().eval(&pb);
    Ok(2 * g - 2 - zi_k)
}

/// Z . Z = n(p^3+1)p + n Z_i.Z_i, checked against n(p^2-1)^2.
pub fn total_self_intersection(p: u64, n: &BigInt) -> Result<BigInt, IError> {
    let pb = check_p(p)?;
    check_n(n)?;
    let lhs = n * (pb.pow(3) + 1) * &pb + n * self_intersection(p)?;
    let rhs = n * (&pb * &pb - BigInt::from(1)).pow(2);
    if lhs != rhs {
        return Err(IError::IdentityFailed("Z.Z".into()));
    }
    Ok(lhs)
}

/// deg(L|Z_i) = deg(div h_ssp) / #points, where h_ssp vanishes to the given
/// order at each superspecial point on the component.
pub fn degree_l_from_divisor(points: &BigInt, order: u64) -> BigInt {
    points * BigInt::from(order) / points
}

pub fn degree_l_on_component(p: u64) -> Result<BigInt, IError> {
    let pb = check_p(p)?;
    let points = pb.pow(3) + 1;
    Ok(degree_l_from_divisor(&points, p * p - 1))
}

/// g_a(Z) from 2 g_a - 2 = Z.(Z + K), checked against n(p^4+p^2-2)/2 + 1.
pub fn arithmetic_genus(p: u64, n: &BigInt) -> Result<BigInt, IError> {
    let pb = check_p(p)?;
    check_n(n)?;
    let p2m1 = &pb * &pb - 1;
    let z_dot_zk = n * &p2m1 * &p2m1 + 3 * n * &p2m1;
    if (&z_dot_zk % 2u32) != BigInt::zero() {
        return Err(IError::IdentityFailed("g_a integrality".into()));
    }
    let g_a = z_dot_zk / 2 + 1;
    let closed = n * (pb.pow(4) + &pb * &pb - 2) / 2 + 1;
    if g_a != closed {
        return Err(IError::IdentityFailed("g_a closed form".into()));
    }
    Ok(g_a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernReport {
    pub c1_squared: Exact,
    pub k_plus_c_squared: Exact,
    pub c2: Exact,
    pub checks: Vec<Check>,
}

/// From O(Z) = L^(p^2-1): Z.Z = (p^2-1)^2 c1(L)^2, so c1(L)^2 = n; then
/// (K+C)^2 = 9 c1^2 and c2 = (K+C)^2 / 3.
pub fn chern_consistency(p: u64, n: &BigInt, c2_from_l: Option<&Exact>) -> Result<ChernReport, IError> {
    let pb = check_p(p)?;
    let zz = total_self_intersection(p, n)?;
    let p2m1_sq = (&pb * &pb - BigInt::from(1)).pow(2);
    let c1_sq = Exact(num_rational::BigRational::new(zz.clone(), p2m1_sq.clone()));
    let kc = Exact::big(9 * n);
    let c2 = Exact::big(3 * n);
    let mut checks = vec![
        Check::new("Z.Z = (p^2-1)^2 c1(L)^2", Exact::big(zz), Exact(&c1_sq.0 * num_rational::BigRational::from_integer(p2m1_sq))),
        Check::new("n = c1(L)^2", Exact::big(n.clone()), c1_sq.clone()),
        Check::new("9n = (K+C)^2", Exact::big(9 * n), kc.clone()),
        Check::new("9n = 3 c2", Exact::big(9 * n), Exact::big(3 * (3 * n))),
    ];
    if let Some(c2l) = c2_from_l {
        checks.push(Check::new("c2 (intersection) = c2 (L-value)", c2.clone(), c2l.clone()));
    }
    Ok(ChernReport {
        c1_squared: c1_sq,
        k_plus_c_squared: kc,
        c2,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub p: u64,
    pub n: Exact,
    pub zi_zi: Exact,
    pub zi_k: Exact,
    pub z_z: Exact,
    pub deg_l_on_z: Exact,
    pub g_a: Exact,
    /// False when the level is not known to be large enough for the
    /// components to be smooth; numbers then hold after an etale cover.
    pub large_level: bool,
    pub identities: Vec<Check>,
}

impl IntersectionReport {
    pub fn all_pass(&self) -> bool {
        self.identities.iter().all(|c| c.pass)
    }
}

pub fn intersection_report(p: u64, n: &BigInt, large_level: bool) -> Result<IntersectionReport, IError> {
    let pb = check_p(p)?;
    check_n(n)?;
    let zi_zi = self_intersection(p)?;
    let zi_k = zi_k_poly().eval(&pb);
    let z_z_sum = n * (pb.pow(3) + 1) * &pb + n * &zi_zi;
    let z_z_closed = n * (&pb * &pb - BigInt::from(1)).pow(2);
    let deg_l = degree_l_on_component(p)?;
    let g_a = arithmetic_genus(p, n)?;
    let genus = BigInt::from(curves::genus(p));
    let identities = vec![
        Check::new(
            "2g(Zi)-2 = Zi.Zi + Zi.K",
            Exact::big(2 * genus - 2),
            Exact::big(&zi_zi + &zi_k),
        ),
        Check::new(
            "Zi.Zi = -2p^2-p+1",
            Exact::big(zi_zi.clone()),
            Exact::big(self_intersection_closed_form().eval(&pb)),
        ),
        Check::new("Z.Z sum = n(p^2-1)^2", Exact::big(z_z_sum), Exact::big(z_z_closed.clone())),
        Check::new("deg L|Z = p^2-1", Exact::big(deg_l.clone()), Exact::big(&pb * &pb - 1)),
        Check::new(
            "g_a = n(p^4+p^2-2)/2+1",
            Exact::big(g_a.clone()),
            Exact::big(n * (pb.pow(4) + &pb * &pb - 2) / 2 + 1),
        ),
    ];
    Ok(IntersectionReport {
        p,
        n: Exact::big(n.clone()),
        zi_zi: Exact::big(zi_zi),
        zi_k: Exact::big(zi_k),
        z_z: Exact::big(z_z_closed),
        deg_l_on_z: Exact::big(deg_l),
        g_a: Exact::big(g_a),
        large_level,
        identities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn self_intersections() {
        assert_eq!(self_intersection(2).unwrap(), b(-9));
        assert_eq!(self_intersection(3).unwrap(), b(-20));
        assert_eq!(self_intersection_poly(), self_intersection_closed_form());
        assert_eq!(self_intersection_closed_form().to_string(), "-2p^2 - p + 1");
    }

    #[test]
    fn totals() {
        assert_eq!(total_self_intersection(2, &b(1)).unwrap(), b(9));
        assert_eq!(total_self_intersection(3, &b(1)).unwrap(), b(64));
        assert_eq!(degree_l_on_component(2).unwrap(), b(3));
        assert_eq!(degree_l_on_component(3).unwrap(), b(8));
        assert_eq!(arithmetic_genus(3, &b(1)).unwrap(), b(45));
        assert_eq!(arithmetic_genus(2, &b(1)).unwrap(), b(10));
    }

    #[test]
    fn chern() {
        let r = chern_consistency(3, &b(1), Some(&Exact::int(3))).unwrap();
        assert_eq!(r.c1_squared, Exact::int(1));
        assert_eq!(r.c2, Exact::int(3));
        assert!(r.checks.iter().all(|c| c.pass));
        let r = chern_consistency(2, &b(5), None).unwrap();
        assert_eq!(r.c2, Exact::int(15));
        let r = chern_consistency(3, &b(1), Some(&Exact::int(6))).unwrap();
        assert!(!r.checks.last().unwrap().pass);
    }

    #[test]
    fn symbolic_all_pass() {
        for s in symbolic_identities() {
            assert!(s.pass, "{}: {} vs {}", s.name, s.lhs, s.rhs);
        }
    }

    #[test]
    fn report() {
        let r = intersection_report(3, &b(1), true).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.z_z, Exact::int(64));
        assert_eq!(r.zi_k, Exact::int(24));
        assert!(intersection_report(1, &b(1), true).is_err());
        assert!(intersection_report(3, &b(-1), true).is_err());
    }

    #[test]
    fn poly_arithmetic() {
        let p = PolyInP::p();
        let q = &(&p + &PolyInP::constant(1)) * &(&p - &PolyInP::constant(1));
        assert_eq!(q, PolyInP::new(vec![-1, 0, 1]));
        assert_eq!(q.eval(&b(5)), b(24));
        assert_eq!(PolyInP::new(vec![2, 4]).div_exact(2), Some(PolyInP::new(vec![1, 2])));
        assert_eq!(PolyInP::new(vec![1, 4]).div_exact(2), None);
        assert_eq!(PolyInP::new(vec![0, 0]).degree(), None);
    }
}
