use serde::{Deserialize, Serialize};

use crate::ffield::Fp2;

use super::matrix::{intersect, kernel, same_span, span_rank, twist_vector, Coefficient, Matrix};
use super::module::UnitaryModule;
use super::DError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumLabel {
    MuOrdinary,
    Gss,
    Ssp,
}

impl std::fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StratumLabel::MuOrdinary => "mu_ordinary",
            StratumLabel::Gss => "gss",
            StratumLabel::Ssp => "ssp",
        })
    }
}

fn images(m: &UnitaryModule<Fp2>, gens: &[Vec<Fp2>]) -> Vec<Vec<Fp2>> {
    gens.iter().map(|g| m.verschiebung().apply(g)).collect()
}

fn nonzero(vs: Vec<Vec<Fp2>>) -> Vec<Vec<Fp2>> {
    vs.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect()
}

/// Stratum of a fiber module over F_{p^2}.
///
/// mu-ordinary when the Hasse invariant is a unit, superspecial when V kills
/// omega, general supersingular otherwise; in the last case the module must
/// also satisfy V(L) = ker(V^(p)) meet P^(p).
pub fn classify_stratum(m: &UnitaryModule<Fp2>) -> Result<StratumLabel, DError> {
    m.validate()?;
    let h = m.hasse_invariant()?;
    if !h.coefficient.is_zero() {
        return Ok(StratumLabel::MuOrdinary);
    }
    if images(m, m.hodge()).iter().flatten().all(|x| x.is_zero()) {
        return Ok(StratumLabel::Ssp);
    }
    let like = *m.gram().get(0, 0);
    let vl = nonzero(images(m, &m.l_generators()));
    let v_twisted = m.verschiebung().matrix().twist();
    let p_twisted: Vec<Vec<Fp2>> = m.p_generators().iter().map(|g| twist_vector(g)).collect();
    let ker = kernel(&v_twisted, &like);
    let expected = intersect(&ker, &p_twisted, &like);
    if !same_span(&vl, &expected) {
        return Err(DError::Malformed(
            "V(L) differs from ker V^(p) meet P^(p) on a non-ordinary fiber".into(),
        ));
    }
    Ok(StratumLabel::Gss)
}

/// Ranks attached to the filtration P0 in P and the line V(L) in P^(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationRanks {
    /// rank of P0 = ker(V restricted to P)
    pub p0: usize,
    /// rank of P_mu = V(L), a line in P^(p)
    pub p_mu: usize,
    pub v_injective_on_l: bool,
    /// dimension of V(L) meet P0^(p)
    pub vl_meets_p0: usize,
}

pub fn filtration_ranks(m: &UnitaryModule<Fp2>) -> Result<FiltrationRanks, DError> {
    m.validate()?;
    let like = *m.gram().get(0, 0);
    let p_gens = m.p_generators();
    let vp = images(m, &p_gens);
    let coeffs = kernel(&Matrix::from_columns(&vp)?, &like);
    let p0: Vec<Vec<Fp2>> = coeffs
        .iter()
        .map(|c| {
            (0..6)
                .map(|i| {
                    p_gens
                        .iter()
                        .zip(c)
                        .fold(like.zero_like(), |acc, (g, x)| acc + g[i] * *x)
                })
                .collect()
        })
        .collect();
    let vl = nonzero(images(m, &m.l_generators()));
    let p_twisted: Vec<Vec<Fp2>> = p_gens.iter().map(|g| twist_vector(g)).collect();
    let p0_twisted: Vec<Vec<Fp2>> = p0.iter().map(|g| twist_vector(g)).collect();
    Ok(FiltrationRanks {
        p0: span_rank(&p0),
        p_mu: intersect(&vl, &p_twisted, &like).len(),
        v_injective_on_l: !vl.is_empty(),
        vl_meets_p0: intersect(&vl, &p0_twisted, &like).len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dieudonne::module::{braid3, ssp_display};
    use crate::ffield::Fp2Field;

    #[test]
    fn braid_is_general_supersingular() {
        for (p, d) in [(3, -4), (5, -3), (2, -3), (7, -8)] {
            let m = braid3(p, d).unwrap();
            assert_eq!(classify_stratum(&m).unwrap(), StratumLabel::Gss);
            let r = filtration_ranks(&m).unwrap();
            assert_eq!((r.p0, r.p_mu, r.v_injective_on_l), (1, 1, true));
        }
    }

    #[test]
    fn display_fibers() {
        let p = 3;
        let m = ssp_display(p, -4, 29).unwrap();
        let f = Fp2Field::from_discriminant(p, -4).unwrap();
        let origin = m.specialize(f.zero(), f.zero());
        assert_eq!(classify_stratum(&origin).unwrap(), StratumLabel::Ssp);
        let r = filtration_ranks(&origin).unwrap();
        assert_eq!((r.p0, r.p_mu, r.v_injective_on_l), (2, 0, false));
        let ordinary = m.specialize(f.one(), f.zero());
        assert_eq!(classify_stratum(&ordinary).unwrap(), StratumLabel::MuOrdinary);
        let r = filtration_ranks(&ordinary).unwrap();
        assert_eq!((r.p0, r.p_mu, r.v_injective_on_l, r.vl_meets_p0), (1, 1, true, 0));
    }

    #[test]
    fn supersingular_points_off_the_origin() {
        // points with u^(p+1) + v^(p+1) = 0 and (u, v) != 0 are supersingular
        let p = 3;
        let m = ssp_display(p, -4, 29).unwrap();
        let f = Fp2Field::from_discriminant(p, -4).unwrap();
        for zeta in crate::ffield::roots_of_minus_one(f) {
            let fiber = m.specialize(zeta, f.one());
            assert_eq!(classify_stratum(&fiber).unwrap(), StratumLabel::Gss);
        }
    }
}
