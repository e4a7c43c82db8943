//! Point counts on the Fermat curve x^(p+1) + y^(p+1) + z^(p+1) = 0 over
//! F_{p^2}, its genus, and the incidence count of superspecial points.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FieldError, Fp2, Fp2Field};
use crate::numtheory;

/// Largest p for which P^2(F_{p^2}) is enumerated.
pub const ENUMERATION_LIMIT: u64 = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("p = {0} exceeds the enumeration limit {ENUMERATION_LIMIT}")]
    TooLarge(u64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FermatCurve {
    field: Fp2Field,
}

impl FermatCurve {
    pub fn new(p: u64) -> Result<FermatCurve, CurveError> {
        Ok(FermatCurve {
            field: Fp2Field::for_prime(p)?,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn field(&self) -> Fp2Field {
        self.field
    }

    pub fn evaluate(&self, x: Fp2, y: Fp2, z: Fp2) -> Fp2 {
        let e = self.characteristic() + 1;
        x.pow(e) + y.pow(e) + z.pow(e)
    }

    /// The partial derivatives are (p+1) x^p, ... and p + 1 is a unit mod p,
    /// so they vanish together only at the origin.
    pub fn is_smooth(&self) -> bool {
        let p = self.characteristic();
        numtheory::gcd(p + 1, p * p) == 1
    }

    /// Normalized representatives (1,y,z), (0,1,z), (0,0,1) of P^2(F_{p^2}).
    pub fn projective_points(&self) -> impl Iterator<Item = [Fp2; 3]> {
        let f = self.field;
        let (zero, one) = (f.zero(), f.one());
        let elems: Vec<Fp2> = f.elements().collect();
        let mut pts = Vec::with_capacity(elems.len() * (elems.len() + 1) + 1);
        for &y in &elems {
            pts.extend(elems.iter().map(|&z| [one, y, z]));
        }
        pts.extend(elems.iter().map(|&z| [zero, one, z]));
        pts.push([zero, zero, one]);
        pts.into_iter()
    }

    pub fn rational_points(&self) -> Vec<[Fp2; 3]> {
        self.projective_points()
            .filter(|[x, y, z]| self.evaluate(*x, *y, *z).is_zero())
            .collect()
    }
}

/// Number of F_{p^2}-points, by exhaustive enumeration.
pub fn count_points(p: u64) -> Result<u64, CurveError> {
    if p > ENUMERATION_LIMIT {
        return Err(CurveError::TooLarge(p));
    }
    Ok(FermatCurve::new(p)?.rational_points().len() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Enumerated,
    FormulaOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub p: u64,
    pub count: BigInt,
    pub provenance: Provenance,
}

/// Enumerated count below the limit, p^3 + 1 above it.
pub fn point_count(p: u64) -> Result<PointCount, CurveError> {
    if p > ENUMERATION_LIMIT {
        if !numtheory::is_prime(p) {
            return Err(FieldError::NotPrime(p).into());
        }
        return Ok(PointCount {
            p,
            count: BigInt::from(p).pow(3) + 1,
            provenance: Provenance::FormulaOnly,
        });
    }
    Ok(PointCount {
        p,
        count: BigInt::from(count_points(p)?),
        provenance: Provenance::Enumerated,
    })
}

/// Genus (d-1)(d-2)/2 of a smooth plane curve of degree d = p + 1.
pub fn genus(p: u64) -> u64 {
    p * (p - 1) / 2
}

/// Points on the line z = 0, the p + 1 solutions of x^(p+1) = -y^(p+1).
pub fn points_at_infinity(p: u64) -> Result<u64, CurveError> {
    if p > ENUMERATION_LIMIT {
        return Err(CurveError::TooLarge(p));
    }
    let c = FermatCurve::new(p)?;
    Ok(c.rational_points().iter().filter(|pt| pt[2].is_zero()).count() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub p: u64,
    pub n: BigInt,
    pub points_per_component: PointCount,
    /// The count equals p^3 + 1.
    pub count_matches: bool,
    /// The count meets the Weil bound p^2 + 1 + 2 g p.
    pub weil_maximal: bool,
    /// n (p^3 + 1) is divisible by p + 1.
    pub divisible: bool,
    /// n (p^3 + 1) / (p + 1).
    pub n_ssp: BigInt,
    /// n_ssp equals n (p^2 - p + 1).
    pub n_ssp_matches: bool,
}

impl IncidenceReport {
    pub fn all_pass(&self) -> bool {
        self.count_matches && self.weil_maximal && self.divisible && self.n_ssp_matches
    }
}

/// Counts superspecial points from component/point incidences: each of the
/// n components carries p^3 + 1 of them and each lies on p + 1 components.
pub fn incidence_consistency(p: u64, n: &BigInt) -> Result<IncidenceReport, CurveError> {
    let pc = point_count(p)?;
    let pb = BigInt::from(p);
    let expected = pb.pow(3) + 1;
    let weil = &pb * &pb + 1 + BigInt::from(2 * genus(p)) * &pb;
    let total = n * &pc.count;
    let q = &pb + 1;
    let divisible = (&total % &q) == BigInt::from(0);
    let n_ssp = &total / &q;
    let n_ssp_matches = n_ssp == n * (&pb * &pb - &pb + 1);
    Ok(IncidenceReport {
        p,
        n: n.clone(),
        count_matches: pc.count == expected,
        weil_maximal: pc.count == weil,
        points_per_component: pc,
        divisible,
        n_ssp,
        n_ssp_matches,
    })
}
