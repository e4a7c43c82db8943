use crate::ffield::{
    local_equation, order_at_origin, roots_of_minus_one, BranchMap, Fp2, Fp2Field, Ideal, Order,
    Series,
};

use super::matrix::{kernel, Matrix};
use super::module::{ssp_covariant, ssp_display, TypeTag, SSP_LIE};
use super::DError;

/// Data attached to the branch u = zeta*v through a superspecial point.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchAnalysis {
    pub zeta: Fp2,
    /// Limit of the line ker(F on Lie) as the point approaches the origin,
    /// in Lie coordinates (f3, e1, e2), normalized projectively.
    pub line: [Fp2; 3],
    /// Branch coefficient of the local secondary invariant, in the branch
    /// parameter u.
    pub htilde: Series,
    /// htilde^(p+1).
    pub hssp: Series,
    pub hssp_order: Order,
}

fn normalize(v: [Fp2; 3]) -> [Fp2; 3] {
    match v.iter().find(|x| !x.is_zero()) {
        Some(first) => {
            let inv = first.inverse().expect("nonzero");
            v.map(|x| x * inv)
        }
        None => v,
    }
}

/// Kernel line of F on Lie along the branch, divided by v and evaluated at
/// v = 0, then moved back from the Frobenius twist.
fn limit_line(cov: &Matrix<Series>, branch: &BranchMap) -> Result<[Fp2; 3], DError> {
    let field = branch.zeta().field();
    let restricted = cov.map(|s| branch.restrict(s));
    let k = restricted
        .entries()
        .filter_map(|s| s.v_valuation())
        .min()
        .ok_or_else(|| DError::Malformed("F vanishes identically on the branch".into()))?;
    let leading = restricted.map(|s| {
        s.div_by_v_power(k)
            .expect("valuation is at least k")
            .constant_term()
    });
    let ker = kernel(&leading, &field.one());
    if ker.len() != 1 {
        return Err(DError::Malformed(format!(
            "limit kernel has dimension {} instead of 1",
            ker.len()
        )));
    }
    // the kernel lives in the twisted Lie algebra; Frobenius is an involution
    // on F_{p^2}, so untwisting applies it once more
    let line = [ker[0][0].frobenius(), ker[0][1].frobenius(), ker[0][2].frobenius()];
    Ok(normalize(line))
}

/// Restricts the superspecial display to the branch u = zeta*v.
///
/// With V(L) = v^k w for a saturated vector w in P^(p), pick c in P^(p) with
/// det[c, w] = 1 (using the trivialization e1 ^ e2 -> f3 of det P), write
/// V^(p)(c) = t * f3^(p^2), and set htilde = t / v^k in the parameter u.
pub fn branch_analysis(p: u64, disc: i64, zeta: Fp2, trunc: u32) -> Result<BranchAnalysis, DError> {
    let field = Fp2Field::from_discriminant(p, disc)?;
    if zeta.field() != field {
        return Err(DError::Field(crate::ffield::FieldError::FieldMismatch));
    }
    let branch = BranchMap::new(zeta)?;
    let cov = ssp_covariant(p, disc, trunc)?;
    let line = limit_line(&cov.frobenius_on(&SSP_LIE)?, &branch)?;

    let m = ssp_display(p, disc, trunc)?;
    let l = m.l_generators();
    let g = &l[0];
    let p_idx: Vec<usize> = (0..6)
        .filter(|&i| m.p_generators().iter().any(|pg| !pg[i].is_zero()))
        .collect();
    if p_idx.len() != 2 {
        return Err(DError::Malformed("P is not a coordinate plane".into()));
    }
    let l_idx = (0..6)
        .find(|&i| TypeTag::of(i) == TypeTag::SigmaBar && !g[i].is_zero())
        .ok_or_else(|| DError::Malformed("L generator vanishes".into()))?;
    let g_unit = g[l_idx].clone();

    let vl: Vec<Series> = m.verschiebung().apply(g).iter().map(|s| branch.restrict(s)).collect();
    let k = vl
        .iter()
        .filter_map(Series::v_valuation)
        .min()
        .ok_or_else(|| DError::Malformed("V(L) vanishes on the branch".into()))?;
    let w: Vec<Series> = vl
        .iter()
        .map(|s| s.div_by_v_power(k).expect("valuation is at least k"))
        .collect();
    if (0..6).any(|i| !p_idx.contains(&i) && !w[i].is_zero()) {
        return Err(DError::Malformed("V(L) does not lie in P^(p)".into()));
    }
    let (i1, i2) = (p_idx[0], p_idx[1]);
    let (w1, w2) = (w[i1].clone(), w[i2].clone());
    let mut c = vec![Series::zero(field, trunc); 6];
    // det[c, w] = c1 w2 - c2 w1 = 1
    if let Some(inv) = w2.inverse() {
        c[i1] = inv;
    } else if let Some(inv) = w1.inverse() {
        c[i2] = -&inv;
    } else {
        return Err(DError::Malformed("V(L) is not saturated after division".into()));
    }
    let vp = m.verschiebung().twist().matrix().map(|s| branch.restrict(s));
    let image = vp.apply(&c);
    let target = branch.restrict(&g_unit.frobenius(2));
    let t = image[l_idx]
        .try_mul(&target.inverse().ok_or(DError::NotProportional)?)?;
    if image
        .iter()
        .enumerate()
        .any(|(i, s)| i != l_idx && !s.is_zero())
    {
        return Err(DError::NotProportional);
    }
    let htilde_v = t
        .div_by_v_power(k)
        .ok_or_else(|| DError::Malformed("htilde has a pole on the branch".into()))?;
    let htilde = branch.to_u_parameter(&htilde_v);
    let hssp = htilde.pow(p + 1);
    let hssp_order = order_at_origin(&hssp, &Ideal::zero(field, trunc));
    Ok(BranchAnalysis {
        zeta,
        line,
        htilde,
        hssp,
        hssp_order,
    })
}

/// One row per root of zeta^(p+1) = -1.
pub fn branch_table(p: u64, disc: i64, trunc: u32) -> Result<Vec<BranchAnalysis>, DError> {
    let field = Fp2Field::from_discriminant(p, disc)?;
    roots_of_minus_one(field)
        .into_iter()
        .map(|z| branch_analysis(p, disc, z, trunc))
        .collect()
}

/// Outcome of the search for G with v G = u^p modulo u^(p+1) + v^(p+1).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GluingReport {
    pub p: u64,
    /// Number of candidates G tried exhaustively (only for p = 2).
    pub exhaustive_candidates: Option<u64>,
    /// Lowest total degree of a nonzero element of the ideal.
    pub ideal_min_degree: u32,
    /// Whether u^p has a nonzero coefficient in some multiple of v.
    pub u_p_divisible_by_v: bool,
    pub obstructed: bool,
}

/// Confirms that htilde = u^p / v does not extend across the origin.
///
/// Every element of (u^(p+1) + v^(p+1)) has order at least p + 1, while the
/// degree-p part of v G - u^p always contains -u^p since no monomial of v G
/// is a pure power of u. For p = 2 all G in the span of {1, u, v} over F_4
/// are also tried directly.
pub fn gluing_obstruction(p: u64, disc: i64, trunc: u32) -> Result<GluingReport, DError> {
    let needed = (2 * p + 2) as u32;
    if trunc < needed {
        return Err(DError::TruncationTooSmall { needed, got: trunc });
    }
    let field = Fp2Field::from_discriminant(p, disc)?;
    let eq = local_equation(field, trunc);
    let ideal = Ideal::new(vec![eq.clone()])?;
    let ideal_min_degree = eq.order().expect("nonzero generator");
    let pe = p as u32;
    // does v * u^i v^j with i + j = p - 1 ever equal u^p?
    let u_p_divisible_by_v = (0..pe).any(|i| (i, pe - 1 - i + 1) == (pe, 0));
    let monomial = ideal_min_degree > pe && !u_p_divisible_by_v;

    let mut exhaustive_candidates = None;
    let mut exhaustive_ok = true;
    if p == 2 {
        let u = Series::u(field, trunc);
        let v = Series::v(field, trunc);
        let one = Series::one(field, trunc);
        let up = u.pow(p);
        let elems: Vec<Fp2> = field.elements().collect();
        let mut count = 0u64;
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    let g = &(&one.scale(a) + &u.scale(b)) + &v.scale(c);
                    let nf = ideal.normal_form(&(&(&v * &g) - &up));
                    if nf.coeff(pe, 0).is_zero() {
                        exhaustive_ok = false;
                    }
                    count += 1;
                }
            }
        }
        exhaustive_candidates = Some(count);
    }
    Ok(GluingReport {
        p,
        exhaustive_candidates,
        ideal_min_degree,
        u_p_divisible_by_v,
        obstructed: monomial && exhaustive_ok,
    })
}
