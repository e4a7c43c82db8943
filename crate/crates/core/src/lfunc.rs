//! Dirichlet L-values of Kronecker characters, the second Chern class of a
//! Picard modular surface, the counts derived from it, and the index of the
//! principal congruence subgroup.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Exact;
use crate::numtheory::{self, Splitting};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p = {p} splits in the field of discriminant {disc}; p must be inert")]
    SplitPrime { p: u64, disc: i64 },
    #[error("p = {p} ramifies in the field of discriminant {disc}; p must be inert")]
    RamifiedPrime { p: u64, disc: i64 },
    #[error("p = {p} divides 2N = {}; p must be prime to 2N", 2 * .level)]
    PrimeDividesLevel { p: u64, level: u64 },
    #[error("level N = {level} not supported: {reason}")]
    BadLevel { level: u64, reason: String },
    #[error("index must be non-negative, got {0}")]
    NegativeIndex(String),
    #[error("ring of size {0} exceeds the enumeration limit of 9")]
    OracleTooLarge(u64),
}

/// The Kronecker character (D / .) of a negative fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KroneckerCharacter {
    disc: i64,
}

impl KroneckerCharacter {
    pub fn new(disc: i64) -> Result<KroneckerCharacter, LError> {
        if disc >= 0 || !numtheory::is_fundamental_discriminant(disc) {
            return Err(LError::NotFundamental(disc));
        }
        Ok(KroneckerCharacter { disc })
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn modulus(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    /// chi(a) for any integer a, including negative a.
    pub fn eval(&self, a: i64) -> i32 {
        let f = self.modulus() as i64;
        numtheory::kronecker(self.disc, a.rem_euclid(f) as u64)
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    // sum_{k=0}^{m} C(m+1, k) B_k = 0, with B_1 = -1/2
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn compute_bernoulli_poly(n: usize, numbers: &[BigRational]) -> Vec<BigRational> {
    // coefficient of x^j is C(n, j) B_{n-j}
    (0..=n)
        .map(|j| BigRational::from_integer(binomial(n as u64, j as u64)) * &numbers[n - j])
        .collect()
}

const MEMO: usize = 8;

fn memo() -> &'static Vec<Vec<BigRational>> {
    static TABLE: OnceLock<Vec<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let numbers = bernoulli_numbers(MEMO);
        (0..=MEMO)
            .map(|n| compute_bernoulli_poly(n, &numbers))
            .collect()
    })
}

/// Coefficients of the Bernoulli polynomial B_n(x), lowest degree first.
pub fn bernoulli_poly(n: usize) -> Vec<BigRational> {
    if n <= MEMO {
        memo()[n].clone()
    } else {
        compute_bernoulli_poly(n, &bernoulli_numbers(n))
    }
}

fn eval_poly(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f).
pub fn gen_bernoulli(n: usize, chi: &KroneckerCharacter) -> BigRational {
    assert!(n >= 1, "generalized Bernoulli numbers start at n = 1");
    let f = chi.modulus();
    let poly = bernoulli_poly(n);
    let fb = BigInt::from(f);
    let mut s = BigRational::zero();
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), fb.clone());
        let v = eval_poly(&poly, &x);
        if c > 0 {
            s += v;
        } else {
            s -= v;
        }
    }
    s * BigRational::from_integer(fb.pow(n as u32 - 1))
}

/// L(1 - n, chi) = -B_{n,chi}/n.
pub fn l_value_neg(n: usize, chi: &KroneckerCharacter) -> BigRational {
    -gen_bernoulli(n, chi) / BigRational::from_integer(BigInt::from(n))
}

/// L(-2, chi), exactly.
pub fn l_value_neg2(chi: &KroneckerCharacter) -> BigRational {
    l_value_neg(3, chi)
}

/// Truncated Dirichlet series with a bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// sum_{k <= terms} chi(k) k^-s for real s > 1.
///
/// The tail is bounded by sum_{k > terms} k^-s <= terms^(1-s)/(s-1). Terms
/// are added from the smallest to the largest so the result is reproducible.
pub fn l_value_series(s: f64, chi: &KroneckerCharacter, terms: u64) -> SeriesValue {
    assert!(s > 1.0, "the series converges absolutely only for s > 1");
    let f = chi.modulus();
    let table: Vec<i32> = (0..f).map(|a| chi.eval(a as i64)).collect();
    let mut acc = 0.0f64;
    for k in (1..=terms).rev() {
        let c = table[(k % f) as usize];
        if c != 0 {
            acc += c as f64 * (k as f64).powf(-s);
        }
    }
    let n = terms.max(1) as f64;
    SeriesValue {
        value: acc,
        tail_bound: n.powf(1.0 - s) / (s - 1.0),
    }
}

/// L(1, chi), by averaging partial sums over one full period of chi.
///
/// The partial sums oscillate with period f around the limit; the average
/// over a period cancels the leading error term.
pub fn l_value_one_series(chi: &KroneckerCharacter, terms: u64) -> f64 {
    let f = chi.modulus();
    let blocks = (terms / f).max(1);
    let end = blocks * f;
    let mut s = 0.0f64;
    for k in (1..=end).rev() {
        let c = chi.eval(k as i64);
        if c != 0 {
            s += c as f64 / k as f64;
        }
    }
    let mut avg = 0.0;
    let mut partial = s;
    for k in end + 1..=end + f {
        let c = chi.eval(k as i64);
        partial += c as f64 / k as f64;
        avg += partial;
    }
    avg / f as f64
}

/// L(0, chi) from L(1, chi) through sqrt|D| L(1, chi) = pi L(0, chi).
pub fn l_value_zero_analytic(chi: &KroneckerCharacter, terms: u64) -> f64 {
    (chi.modulus() as f64).sqrt() * l_value_one_series(chi, terms) / PI
}

fn check_index(index: &BigRational) -> Result<(), LError> {
    if index.is_negative() {
        return Err(LError::NegativeIndex(index.to_string()));
    }
    Ok(())
}

/// c_2 = -index * (3/16) * L(-2, chi_D).
pub fn chern_c2(disc: i64, index: &BigRational) -> Result<BigRational, LError> {
    let chi = KroneckerCharacter::new(disc)?;
    check_index(index)?;
    Ok(-index * BigRational::new(3.into(), 16.into()) * l_value_neg2(&chi))
}

/// index * 3|D|^(5/2) / (32 pi^3) * L(3, chi_D), with L(3) from the series.
pub fn chern_c2_analytic(disc: i64, index: f64, terms: u64) -> Result<f64, LError> {
    let chi = KroneckerCharacter::new(disc)?;
    let l3 = l_value_series(3.0, &chi, terms).value;
    let d = chi.modulus() as f64;
    Ok(index * 3.0 * d.powf(2.5) / (32.0 * PI.powi(3)) * l3)
}

/// Counts attached to a surface with given discriminant, prime, level and
/// congruence index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub disc: i64,
    pub p: u64,
    pub level: u64,
    pub index: Exact,
    pub c2: Exact,
    /// Number of irreducible components of the supersingular locus.
    pub n: Exact,
    /// Number of superspecial points.
    pub n_ssp: Exact,
    /// Arithmetic genus of the supersingular locus.
    pub g_a: Exact,
    pub warnings: Vec<String>,
}

/// Checks that p is an odd prime, inert for D and prime to 2N.
pub fn check_inert_prime(disc: i64, p: u64, level: u64) -> Result<(), LError> {
    if !numtheory::is_prime(p) {
        return Err(LError::NotPrime(p));
    }
    if (2 * level) % p == 0 {
        return Err(LError::PrimeDividesLevel { p, level });
    }
    match numtheory::splitting(disc, p) {
        Splitting::Inert => Ok(()),
        Splitting::Split => Err(LError::SplitPrime { p, disc }),
        Splitting::Ramified => Err(LError::RamifiedPrime { p, disc }),
    }
}

pub fn component_count(
    disc: i64,
    index: &BigRational,
    p: u64,
    level: u64,
) -> Result<SurfaceInvariants, LError> {
    KroneckerCharacter::new(disc)?;
    check_inert_prime(disc, p, level)?;
    let c2 = chern_c2(disc, index)?;
    let n = &c2 / BigRational::from_integer(3.into());
    let pb = BigRational::from_integer(BigInt::from(p));
    let n_ssp = &n * (&pb * &pb - &pb + BigRational::one());
    let p2 = &pb * &pb;
    let g_a = &n * (&p2 * &p2 + &p2 - BigRational::from_integer(2.into()))
        / BigRational::from_integer(2.into())
        + BigRational::one();
    let mut warnings = Vec::new();
    if index.is_zero() {
        warnings.push("index is 0: the surface is empty".to_string());
        log::warn!("component count requested with index 0");
    }
    if disc == -3 {
        warnings.push(
            "D = -3: the group index is 3 times the volume ratio; counts use the group index"
                .to_string(),
        );
    }
    if !n.is_integer() {
        warnings.push(format!("n = {n} is not an integer; the index is probably not a group order"));
    }
    Ok(SurfaceInvariants {
        disc,
        p,
        level,
        index: Exact(index.clone()),
        c2: Exact(c2),
        n: Exact(n),
        n_ssp: Exact(n_ssp),
        g_a: Exact(g_a),
        warnings,
    })
}

/// |SU_3(F_q)| = q^3 (q^2 - 1)(q^3 + 1), the local factor at an inert prime.
pub fn su3_order(q: u64) -> BigInt {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    &q3 * (&q2 - 1) * (&q3 + 1)
}

/// |SL_3(F_l)| = l^3 (l^2 - 1)(l^3 - 1), the local factor at a split prime.
pub fn sl3_order(l: u64) -> BigInt {
    let l = BigInt::from(l);
    let l2 = &l * &l;
    let l3 = &l2 * &l;
    &l3 * (&l2 - 1) * (&l3 - 1)
}

/// [Gamma(1) : Gamma(N)] = |SU(L/NL)| for squarefree N prime to 2D.
///
/// Assumes the reduction map Gamma(1) -> SU(L/NL) is onto.
pub fn index_gamma(level: u64, disc: i64) -> Result<BigInt, LError> {
    KroneckerCharacter::new(disc)?;
    let bad = |reason: &str| LError::BadLevel {
        level,
        reason: reason.to_string(),
    };
    if level == 0 {
        return Err(bad("level must be positive"));
    }
    if !numtheory::is_squarefree(level) {
        return Err(bad("level must be squarefree"));
    }
    if numtheory::gcd(level, 2 * disc.unsigned_abs()) != 1 {
        return Err(bad("level must be prime to 2D"));
    }
    let mut index = BigInt::one();
    for (l, _) in numtheory::factorize(level) {
        index *= match numtheory::splitting(disc, l) {
            Splitting::Inert => su3_order(l),
            Splitting::Split => sl3_order(l),
            Splitting::Ramified => unreachable!("level is prime to D"),
        };
    }
    Ok(index)
}

/// Smallest squarefree N >= 3 prime to 2pD.
pub fn default_level(disc: i64, p: u64) -> u64 {
    let m = 2 * p * disc.unsigned_abs();
    (3..)
        .find(|&n| numtheory::is_squarefree(n) && numtheory::gcd(n, m) == 1)
        .expect("infinitely many candidates")
}

/// The ring O_K / l as F_l[w]/(w^2 - t w - n0) with its involution.
#[derive(Clone, Copy, Debug)]
struct ResidueRing {
    l: i64,
    t: i64,
    n0: i64,
    half_integral: bool,
}

type R2 = (i64, i64);

impl ResidueRing {
    fn new(l: u64, d: i64) -> ResidueRing {
        let l = l as i64;
        let half_integral = d.rem_euclid(4) == 1;
        let (t, n0) = if half_integral {
            (1, ((d - 1) / 4).rem_euclid(l))
        } else {
            (0, d.rem_euclid(l))
        };
        ResidueRing {
            l,
            t,
            n0,
            half_integral,
        }
    }

    fn elements(&self) -> impl Iterator<Item = R2> + '_ {
        (0..self.l).flat_map(move |a| (0..self.l).map(move |b| (a, b)))
    }

    fn add(&self, x: R2, y: R2) -> R2 {
        ((x.0 + y.0) % self.l, (x.1 + y.1) % self.l)
    }

    fn sub(&self, x: R2, y: R2) -> R2 {
        ((x.0 - y.0).rem_euclid(self.l), (x.1 - y.1).rem_euclid(self.l))
    }

    fn mul(&self, x: R2, y: R2) -> R2 {
        let bb = x.1 * y.1;
        (
            (x.0 * y.0 + bb * self.n0).rem_euclid(self.l),
            (x.0 * y.1 + x.1 * y.0 + bb * self.t).rem_euclid(self.l),
        )
    }

    fn conj(&self, x: R2) -> R2 {
        if self.half_integral {
            ((x.0 + x.1) % self.l, (-x.1).rem_euclid(self.l))
        } else {
            (x.0, (-x.1).rem_euclid(self.l))
        }
    }

    fn scalar(&self, a: i64) -> R2 {
        (a.rem_euclid(self.l), 0)
    }

    /// conj(x)^t H y with H the Gram matrix of L in the basis
    /// (delta e1, e2, e3): H[0][2] = H[2][0] = -1, H[1][1] = 1.
    fn form(&self, x: &[R2; 3], y: &[R2; 3]) -> R2 {
        let m = self.scalar(-1);
        let a = self.mul(self.mul(self.conj(x[0]), m), y[2]);
        let b = self.mul(self.conj(x[1]), y[1]);
        let c = self.mul(self.mul(self.conj(x[2]), m), y[0]);
        self.add(self.add(a, b), c)
    }

    fn det(&self, c: &[[R2; 3]; 3]) -> R2 {
        // columns c[j], entry (i, j) = c[j][i]
        let e = |i: usize, j: usize| c[j][i];
        let t = |a, b, cc| self.mul(self.mul(a, b), cc);
        let plus = self.add(
            self.add(t(e(0, 0), e(1, 1), e(2, 2)), t(e(0, 1), e(1, 2), e(2, 0))),
            t(e(0, 2), e(1, 0), e(2, 1)),
        );
        let minus = self.add(
            self.add(t(e(0, 2), e(1, 1), e(2, 0)), t(e(0, 0), e(1, 2), e(2, 1))),
            t(e(0, 1), e(1, 0), e(2, 2)),
        );
        self.sub(plus, minus)
    }
}

/// Order of SU(L / lL) by enumeration: columns are chosen one at a time
/// subject to the Gram constraints, then the determinant is tested.
pub fn brute_force_su3_order(l: u64, d: i64) -> Result<u64, LError> {
    if !numtheory::is_prime(l) {
        return Err(LError::NotPrime(l));
    }
    let size = l * l;
    if size > 9 {
        return Err(LError::OracleTooLarge(size));
    }
    let disc = numtheory::discriminant_of(d);
    if numtheory::splitting(disc, l) == Splitting::Ramified {
        return Err(LError::RamifiedPrime { p: l, disc });
    }
    let r = ResidueRing::new(l, d);
    let elems: Vec<R2> = r.elements().collect();
    let mut vectors = Vec::with_capacity(elems.len().pow(3));
    for &a in &elems {
        for &b in &elems {
            for &c in &elems {
                vectors.push([a, b, c]);
            }
        }
    }
    let zero = r.scalar(0);
    let one = r.scalar(1);
    let minus_one = r.scalar(-1);
    let gram = [[zero, zero, minus_one], [zero, one, zero], [minus_one, zero, zero]];
    let fits = |v: &[R2; 3], j: usize, chosen: &[[R2; 3]]| {
        r.form(v, v) == gram[j][j]
            && chosen
                .iter()
                .enumerate()
                .all(|(i, c)| r.form(c, v) == gram[i][j])
    };
    let mut count = 0u64;
    for c0 in vectors.iter().filter(|v| fits(v, 0, &[])) {
        for c1 in vectors.iter().filter(|v| fits(v, 1, &[*c0])) {
            for c2 in vectors.iter().filter(|v| fits(v, 2, &[*c0, *c1])) {
                if r.det(&[*c0, *c1, *c2]) == one {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Local index factor at l: |SU_3| or |SL_3| depending on how l splits.
pub fn local_index_factor(l: u64, disc: i64) -> Result<BigInt, LError> {
    if !numtheory::is_prime(l) {
        return Err(LError::NotPrime(l));
    }
    match numtheory::splitting(disc, l) {
        Splitting::Inert => Ok(su3_order(l)),
        Splitting::Split => Ok(sl3_order(l)),
        Splitting::Ramified => Err(LError::RamifiedPrime { p: l, disc }),
    }
}

impl SurfaceInvariants {
    /// n_ssp (p + 1) = n (p^3 + 1).
    pub fn incidence_holds(&self) -> bool {
        let p = BigRational::from_integer(BigInt::from(self.p));
        &self.n_ssp.0 * (&p + BigRational::one())
            == &self.n.0 * (&p * &p * &p + BigRational::one())
    }
}
