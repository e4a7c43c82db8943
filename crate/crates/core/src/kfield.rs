//! Exact arithmetic in an imaginary quadratic field K = Q(sqrt d), the
//! hermitian and polarization forms on K^3, self-duality of O_K-lattices and
//! the type-decomposition idempotents over F_{p^2}.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::ffield::{FieldError, Fp2, Fp2Field};
use crate::numtheory;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("d = {0} is not a negative squarefree integer")]
    BadSquarefree(i64),
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("elements of different quadratic fields")]
    FieldMismatch,
    #[error("lattice basis is degenerate")]
    DegenerateBasis,
    #[error("p = {0} is even; type idempotents need 2 invertible")]
    EvenPrime(u64),
    #[error("p = {p} divides the discriminant {disc}")]
    PrimeDividesDiscriminant { p: u64, disc: i64 },
    #[error("p = {p} splits in the field of discriminant {disc}")]
    SplitPrime { p: u64, disc: i64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The field K = Q(sqrt d) for a negative squarefree d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<QuadField, KError> {
        if d >= 0 || !numtheory::is_squarefree(d.unsigned_abs()) {
            return Err(KError::BadSquarefree(d));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        numtheory::discriminant_of(self.d)
    }

    fn omega_is_half_integral(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// a + b*omega with omega = (1 + sqrt d)/2 or sqrt d.
    pub fn element(&self, a: BigRational, b: BigRational) -> QuadElement {
        QuadElement { a, b, d: self.d }
    }

    pub fn int(&self, a: i64, b: i64) -> QuadElement {
        self.element(rat(a), rat(b))
    }

    pub fn rational(&self, a: BigRational) -> QuadElement {
        self.element(a, BigRational::zero())
    }

    pub fn zero(&self) -> QuadElement {
        self.int(0, 0)
    }

    pub fn one(&self) -> QuadElement {
        self.int(1, 0)
    }

    pub fn omega(&self) -> QuadElement {
        self.int(0, 1)
    }

    /// sqrt(D) with positive imaginary part: 2*omega - 1 or 2*omega.
    pub fn delta(&self) -> QuadElement {
        if self.omega_is_half_integral() {
            self.int(-1, 2)
        } else {
            self.int(0, 2)
        }
    }

    pub fn unit_vector(&self, k: usize) -> Vec<QuadElement> {
        (0..3)
            .map(|i| if i == k { self.one() } else { self.zero() })
            .collect()
    }
}

/// Exact element a + b*omega of K.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl QuadElement {
    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    pub fn coords(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Membership in O_K = Z + Z*omega.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn conj(&self) -> QuadElement {
        if self.d.rem_euclid(4) == 1 {
            // conj(omega) = 1 - omega
            QuadElement {
                a: &self.a + &self.b,
                b: -&self.b,
                d: self.d,
            }
        } else {
            QuadElement {
                a: self.a.clone(),
                b: -&self.b,
                d: self.d,
            }
        }
    }

    pub fn trace(&self) -> BigRational {
        let s = self + &self.conj();
        debug_assert!(s.is_rational());
        s.a
    }

    pub fn norm(&self) -> BigRational {
        let n = self * &self.conj();
        debug_assert!(n.is_rational());
        n.a
    }

    pub fn inverse(&self) -> Option<QuadElement> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(QuadElement {
            a: &c.a / &n,
            b: &c.b / &n,
            d: self.d,
        })
    }

    /// (x - conj x)/delta, always rational.
    pub fn im_delta(&self) -> BigRational {
        let delta = self.field().delta();
        let q = &(self - &self.conj()) / &delta;
        debug_assert!(q.is_rational());
        q.a
    }
}

impl Add<&QuadElement> for &QuadElement {
    type Output = QuadElement;
    fn add(self, o: &QuadElement) -> QuadElement {
        assert_eq!(self.d, o.d, "elements of different fields");
        QuadElement {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.d,
        }
    }
}

impl Sub<&QuadElement> for &QuadElement {
    type Output = QuadElement;
    fn sub(self, o: &QuadElement) -> QuadElement {
        self + &(-o)
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

impl Mul<&QuadElement> for &QuadElement {
    type Output = QuadElement;
    fn mul(self, o: &QuadElement) -> QuadElement {
        assert_eq!(self.d, o.d, "elements of different fields");
        // omega^2 = omega + (d-1)/4, or d
        let (w1, w0) = if self.d.rem_euclid(4) == 1 {
            (rat(1), BigRational::new(BigInt::from(self.d - 1), BigInt::from(4)))
        } else {
            (rat(0), rat(self.d))
        };
        let bb = &self.b * &o.b;
        QuadElement {
            a: &self.a * &o.a + &bb * &w0,
            b: &self.a * &o.b + &self.b * &o.a + &bb * &w1,
            d: self.d,
        }
    }
}

impl Div<&QuadElement> for &QuadElement {
    type Output = QuadElement;
    fn div(self, o: &QuadElement) -> QuadElement {
        self * &o.inverse().expect("division by zero in K")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElement {
            type Output = QuadElement;
            fn $m(self, o: QuadElement) -> QuadElement {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        -&self
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*w", self.b),
            (false, false) => write!(f, "{} + {}*w", self.a, self.b),
        }
    }
}

impl fmt::Debug for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [d={}]", self.d)
    }
}

fn check_len(v: &[QuadElement]) -> Result<(), KError> {
    if v.len() != 3 {
        return Err(KError::DimensionMismatch {
            expected: 3,
            got: v.len(),
        });
    }
    Ok(())
}

/// V = K^3 with the hermitian form given by the anti-diagonal Gram matrix
/// (delta^-1, 1, -delta^-1).
#[derive(Clone, Debug)]
pub struct HermitianSpace {
    field: QuadField,
    gram: Vec<Vec<QuadElement>>,
}

impl HermitianSpace {
    pub fn new(field: QuadField) -> HermitianSpace {
        let dinv = field.delta().inverse().unwrap();
        let z = field.zero();
        let gram = vec![
            vec![z.clone(), z.clone(), dinv.clone()],
            vec![z.clone(), field.one(), z.clone()],
            vec![-&dinv, z.clone(), z],
        ];
        HermitianSpace { field, gram }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn gram(&self) -> &[Vec<QuadElement>] {
        &self.gram
    }

    /// (u, v) = conj(u)^t J v.
    pub fn hermitian_pair(&self, u: &[QuadElement], v: &[QuadElement]) -> Result<QuadElement, KError> {
        check_len(u)?;
        check_len(v)?;
        if u.iter().chain(v).any(|x| x.d != self.field.d) {
            return Err(KError::FieldMismatch);
        }
        let mut acc = self.field.zero();
        for i in 0..3 {
            let ui = u[i].conj();
            for j in 0..3 {
                if !self.gram[i][j].is_zero() {
                    acc = &acc + &(&(&ui * &self.gram[i][j]) * &v[j]);
                }
            }
        }
        Ok(acc)
    }

    /// <u, v> = Im_delta (u, v).
    pub fn polarization_pair(&self, u: &[QuadElement], v: &[QuadElement]) -> Result<BigRational, KError> {
        Ok(self.hermitian_pair(u, v)?.im_delta())
    }

    /// 2(u,v) = <u, delta v> + delta <u, v>.
    pub fn polarization_identity_holds(&self, u: &[QuadElement], v: &[QuadElement]) -> Result<bool, KError> {
        let delta = self.field.delta();
        let dv: Vec<_> = v.iter().map(|x| &delta * x).collect();
        let lhs = &self.field.int(2, 0) * &self.hermitian_pair(u, v)?;
        let rhs = &self.field.rational(self.polarization_pair(u, &dv)?)
            + &(&delta * &self.field.rational(self.polarization_pair(u, v)?));
        Ok(lhs == rhs)
    }

    /// Signature (positive, negative) over R, by hermitian congruence
    /// diagonalization with exact arithmetic.
    pub fn signature(&self) -> (usize, usize) {
        let diag = hermitian_diagonalize(self.gram.clone());
        let pos = diag.iter().filter(|x| x.is_positive()).count();
        let neg = diag.iter().filter(|x| x.is_negative()).count();
        (pos, neg)
    }
}

/// Diagonal of P* H P for a suitable invertible P; entries are rational.
fn hermitian_diagonalize(mut h: Vec<Vec<QuadElement>>) -> Vec<BigRational> {
    let n = h.len();
    let field = h[0][0].field();
    // column i += c col j, row i += conj(c) row j
    let add = |h: &mut Vec<Vec<QuadElement>>, i: usize, j: usize, c: &QuadElement| {
        for r in 0..n {
            let t = &h[r][j] * c;
            h[r][i] = &h[r][i] + &t;
        }
        let cc = c.conj();
        for s in 0..n {
            let t = &cc * &h[j][s];
            h[i][s] = &h[i][s] + &t;
        }
    };
    for k in 0..n {
        if h[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !h[i][i].is_zero()) {
                h.swap(k, i);
                for row in h.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !h[k][j].is_zero()) {
                let c = if h[k][j].trace().is_zero() {
                    field.delta()
                } else {
                    field.one()
                };
                add(&mut h, k, j, &c);
            } else {
                continue;
            }
        }
        let pivot = h[k][k].clone();
        for r in k + 1..n {
            if h[k][r].is_zero() {
                continue;
            }
            let c = -&(&h[k][r] / &pivot);
            add(&mut h, r, k, &c);
        }
    }
    (0..n)
        .map(|i| {
            debug_assert!(h[i][i].is_rational());
            h[i][i].coords().0.clone()
        })
        .collect()
}

/// Three O_K-linearly independent vectors spanning a lattice in K^3.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    vectors: Vec<Vec<QuadElement>>,
}

impl LatticeBasis {
    pub fn new(vectors: Vec<Vec<QuadElement>>) -> Result<LatticeBasis, KError> {
        if vectors.len() != 3 {
            return Err(KError::DimensionMismatch {
                expected: 3,
                got: vectors.len(),
            });
        }
        for v in &vectors {
            check_len(v)?;
        }
        if det3(&vectors).is_zero() {
            return Err(KError::DegenerateBasis);
        }
        Ok(LatticeBasis { vectors })
    }

    /// Span of {delta e1, e2, e3}.
    pub fn standard(field: QuadField) -> LatticeBasis {
        let mut e1 = field.unit_vector(0);
        e1[0] = field.delta();
        LatticeBasis::new(vec![e1, field.unit_vector(1), field.unit_vector(2)]).unwrap()
    }

    pub fn scaled(&self, k: &QuadElement) -> Result<LatticeBasis, KError> {
        LatticeBasis::new(
            self.vectors
                .iter()
                .map(|v| v.iter().map(|x| k * x).collect())
                .collect(),
        )
    }

    pub fn vectors(&self) -> &[Vec<QuadElement>] {
        &self.vectors
    }

    /// Z-basis {b_i, omega b_i} of the underlying rank-6 lattice.
    fn z_basis(&self) -> Vec<Vec<QuadElement>> {
        let field = self.vectors[0][0].field();
        let w = field.omega();
        let mut out = self.vectors.clone();
        out.extend(
            self.vectors
                .iter()
                .map(|v| v.iter().map(|x| &w * x).collect::<Vec<_>>()),
        );
        out
    }
}

fn det3(m: &[Vec<QuadElement>]) -> QuadElement {
    let t = |a: &QuadElement, b: &QuadElement, c: &QuadElement| &(a * b) * c;
    let plus = &(&t(&m[0][0], &m[1][1], &m[2][2]) + &t(&m[0][1], &m[1][2], &m[2][0]))
        + &t(&m[0][2], &m[1][0], &m[2][1]);
    let minus = &(&t(&m[0][2], &m[1][1], &m[2][0]) + &t(&m[0][0], &m[1][2], &m[2][1]))
        + &t(&m[0][1], &m[1][0], &m[2][2]);
    &plus - &minus
}

/// Inverse of a square matrix over a field given by closures, by Gauss-Jordan.
fn invert_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn invert_quad(m: &[Vec<QuadElement>]) -> Option<Vec<Vec<QuadElement>>> {
    let n = m.len();
    let field = m[0][0].field();
    let mut a: Vec<Vec<QuadElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inverse().unwrap();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Gram matrix of the polarization form on the Z-basis {b_i, omega b_i}.
pub fn polarization_gram(space: &HermitianSpace, basis: &LatticeBasis) -> Result<Vec<Vec<BigRational>>, KError> {
    let zb = basis.z_basis();
    zb.iter()
        .map(|x| zb.iter().map(|y| space.polarization_pair(x, y)).collect())
        .collect()
}

/// Whether the lattice equals {u : <u, v> in Z for all v in L}.
///
/// The lattice is inside its dual iff the Z-Gram matrix is integral, and the
/// dual basis lies in the lattice iff the inverse Gram matrix is integral.
pub fn is_self_dual(space: &HermitianSpace, basis: &LatticeBasis) -> Result<bool, KError> {
    let g = polarization_gram(space, basis)?;
    let inside_dual = g.iter().flatten().all(|x| x.is_integer());
    let ginv = invert_rational(&g).ok_or(KError::DegenerateBasis)?;
    let dual_inside = ginv.iter().flatten().all(|x| x.is_integer());
    Ok(inside_dual && dual_inside)
}

/// Self-duality for the hermitian form with respect to O_K.
pub fn is_hermitian_self_dual(space: &HermitianSpace, basis: &LatticeBasis) -> Result<bool, KError> {
    let b = basis.vectors();
    let h: Vec<Vec<QuadElement>> = b
        .iter()
        .map(|x| b.iter().map(|y| space.hermitian_pair(x, y)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let integral = h.iter().flatten().all(QuadElement::is_integral);
    let hinv = invert_quad(&h).ok_or(KError::DegenerateBasis)?;
    Ok(integral && hinv.iter().flatten().all(QuadElement::is_integral))
}

/// Element a + b*(delta (x) 1) of O_K (x) F_{p^2}, where (delta (x) 1)^2 = D.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OkTensor {
    pub a: Fp2,
    pub b: Fp2,
    disc: Fp2,
}

impl OkTensor {
    pub fn add(&self, o: &OkTensor) -> OkTensor {
        OkTensor {
            a: self.a + o.a,
            b: self.b + o.b,
            disc: self.disc,
        }
    }

    pub fn mul(&self, o: &OkTensor) -> OkTensor {
        OkTensor {
            a: self.a * o.a + self.b * o.b * self.disc,
            b: self.a * o.b + self.b * o.a,
            disc: self.disc,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// e_Sigma = 1/2 + (delta (x) delta^-1)/2 and e_Sigma-bar = 1 - e_Sigma in
/// O_K (x) F_{p^2}.
#[derive(Clone, Copy, Debug)]
pub struct TypeIdempotents {
    field: Fp2Field,
    delta_bar: Fp2,
    e_sigma: OkTensor,
    e_sigma_bar: OkTensor,
}

impl TypeIdempotents {
    pub fn new(p: u64, disc: i64) -> Result<TypeIdempotents, KError> {
        if p % 2 == 0 {
            return Err(KError::EvenPrime(p));
        }
        if disc.rem_euclid(p as i64) == 0 {
            return Err(KError::PrimeDividesDiscriminant { p, disc });
        }
        let field = match Fp2Field::from_discriminant(p, disc) {
            Ok(f) => f,
            Err(FieldError::Split { p, disc }) => return Err(KError::SplitPrime { p, disc }),
            Err(e) => return Err(e.into()),
        };
        let delta_bar = field.delta_bar().expect("odd p presentation uses delta");
        let half = field.from_int(2).inverse().unwrap();
        let coef = half * delta_bar.inverse().unwrap();
        let disc_bar = delta_bar * delta_bar;
        let e_sigma = OkTensor {
            a: half,
            b: coef,
            disc: disc_bar,
        };
        let e_sigma_bar = OkTensor {
            a: half,
            b: -coef,
            disc: disc_bar,
        };
        Ok(TypeIdempotents {
            field,
            delta_bar,
            e_sigma,
            e_sigma_bar,
        })
    }

    pub fn field(&self) -> Fp2Field {
        self.field
    }

    pub fn delta_bar(&self) -> Fp2 {
        self.delta_bar
    }

    pub fn e_sigma(&self) -> OkTensor {
        self.e_sigma
    }

    pub fn e_sigma_bar(&self) -> OkTensor {
        self.e_sigma_bar
    }

    /// 1 (x) c.
    pub fn scalar(&self, c: Fp2) -> OkTensor {
        OkTensor {
            a: c,
            b: self.field.zero(),
            disc: self.e_sigma.disc,
        }
    }

    /// delta (x) 1.
    pub fn delta_tensor(&self) -> OkTensor {
        OkTensor {
            a: self.field.zero(),
            b: self.field.one(),
            disc: self.e_sigma.disc,
        }
    }

    pub fn element(&self, a: Fp2, b: Fp2) -> OkTensor {
        OkTensor {
            a,
            b,
            disc: self.e_sigma.disc,
        }
    }

    /// Idempotence, orthogonality and partition of unity.
    pub fn identities_hold(&self) -> bool {
        let (s, sb) = (self.e_sigma, self.e_sigma_bar);
        let one = self.scalar(self.field.one());
        s.mul(&s) == s && sb.mul(&sb) == sb && s.mul(&sb).is_zero() && s.add(&sb) == one
    }

    /// Splits a family of elements into their Sigma and Sigma-bar parts.
    pub fn type_decompose(&self, xs: &[OkTensor]) -> (Vec<OkTensor>, Vec<OkTensor>) {
        xs.iter()
            .map(|x| (self.e_sigma.mul(x), self.e_sigma_bar.mul(x)))
            .unzip()
    }
}
