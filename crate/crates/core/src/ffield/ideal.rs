use serde::{Deserialize, Serialize};

use super::series::Exponent;
use super::{FieldError, Fp2, Fp2Field, Series};

/// A homogeneous ideal of F_{p^2}[[u, v]] given by a fixed generator list.
///
/// Reduction is multivariate division in graded-lex order (u > v) through the
/// generators in the order given. Construction checks that the list is a
/// Groebner basis below the truncation order, so normal forms do not depend on
/// the order in which generators are tried.
#[derive(Clone, Debug)]
pub struct Ideal {
    field: Fp2Field,
    trunc: u32,
    generators: Vec<Series>,
}

/// Vanishing order at the origin of a series in a quotient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Unit,
    Finite(u32),
    /// The normal form vanishes below the truncation order.
    ZeroToTruncation,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Unit => Some(0),
            Order::ZeroToTruncation => None,
        }
    }
}

impl Ideal {
    pub fn zero(field: Fp2Field, trunc: u32) -> Ideal {
        Ideal {
            field,
            trunc,
            generators: Vec::new(),
        }
    }

    pub fn new(generators: Vec<Series>) -> Result<Ideal, FieldError> {
        let first = generators.first().ok_or(FieldError::EmptyIdeal)?;
        let (field, trunc) = (first.field(), first.truncation());
        for g in &generators {
            if g.field() != field {
                return Err(FieldError::FieldMismatch);
            }
            if g.truncation() != trunc {
                return Err(FieldError::TruncationMismatch(trunc, g.truncation()));
            }
            if !g.is_homogeneous() {
                return Err(FieldError::NonHomogeneousGenerator(g.to_string()));
            }
        }
        let generators: Vec<Series> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let ideal = Ideal {
            field,
            trunc,
            generators,
        };
        ideal.check_groebner()?;
        Ok(ideal)
    }

    /// Ideal with the same generators in a different order.
    pub fn reordered(&self, order: &[usize]) -> Ideal {
        Ideal {
            field: self.field,
            trunc: self.trunc,
            generators: order.iter().map(|&k| self.generators[k].clone()).collect(),
        }
    }

    pub fn generators(&self) -> &[Series] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    fn leading_exponents(&self) -> Vec<Exponent> {
        self.generators
            .iter()
            .map(|g| g.leading_term().expect("nonzero generator").0)
            .collect()
    }

    // Buchberger's criterion: every S-polynomial reduces to zero.
    fn check_groebner(&self) -> Result<(), FieldError> {
        let lts: Vec<(Exponent, Fp2)> = self
            .generators
            .iter()
            .map(|g| g.leading_term().expect("nonzero generator"))
            .collect();
        for a in 0..lts.len() {
            for b in a + 1..lts.len() {
                let ((ia, ja), ca) = lts[a];
                let ((ib, jb), cb) = lts[b];
                // coprime leading monomials always reduce to zero
                if (ia.min(ib), ja.min(jb)) == (0, 0) {
                    continue;
                }
                let (li, lj) = (ia.max(ib), ja.max(jb));
                let sa = self.generators[a].shift(li - ia, lj - ja).scale(ca.inverse().unwrap());
                let sb = self.generators[b].shift(li - ib, lj - jb).scale(cb.inverse().unwrap());
                let s = &sa - &sb;
                if !self.normal_form(&s).is_zero() {
                    return Err(FieldError::NotGroebner);
                }
            }
        }
        Ok(())
    }

    /// Remainder of multivariate division by the generator list.
    pub fn normal_form(&self, f: &Series) -> Series {
        let f = f.with_truncation(self.trunc);
        if self.generators.is_empty() {
            return f;
        }
        let lts = self.leading_exponents();
        let mut rem = Series::zero(self.field, self.trunc);
        let mut work = f;
        while let Some(((i, j), c)) = work.leading_term() {
            let divisor = lts.iter().position(|&(gi, gj)| gi <= i && gj <= j);
            match divisor {
                Some(k) => {
                    let g = &self.generators[k];
                    let (_, gc) = g.leading_term().unwrap();
                    let (gi, gj) = lts[k];
                    let q = c * gc.inverse().unwrap();
                    work = &work - &g.shift(i - gi, j - gj).scale(q);
                }
                None => {
                    rem.add_term((i, j), c);
                    work.add_term((i, j), -c);
                }
            }
        }
        rem
    }

    pub fn contains(&self, f: &Series) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Whether u^i v^j is a standard monomial (not a leading monomial multiple).
    fn is_standard(&self, (i, j): Exponent) -> bool {
        self.leading_exponents()
            .iter()
            .all(|&(gi, gj)| !(gi <= i && gj <= j))
    }
}

/// Vanishing order at the origin of `f` in the quotient by `ideal`.
pub fn order_at_origin(f: &Series, ideal: &Ideal) -> Order {
    let nf = ideal.normal_form(f);
    match nf.order() {
        None => Order::ZeroToTruncation,
        Some(0) => Order::Unit,
        Some(k) => Order::Finite(k),
    }
}

/// Dimension over the residue field of k[[u,v]]/ideal, counted through
/// standard monomials below the truncation order.
pub fn quotient_dimension(ideal: &Ideal) -> Result<u64, FieldError> {
    let t = ideal.trunc;
    let mut dim = 0u64;
    let mut top = 0u64;
    for d in 0..t {
        for i in 0..=d {
            if ideal.is_standard((i, d - i)) {
                dim += 1;
                if d == t - 1 {
                    top += 1;
                }
            }
        }
    }
    if top > 0 {
        return Err(FieldError::DimensionNotStabilized(t));
    }
    Ok(dim)
}

/// All zeta in F_{p^2} with zeta^(p+1) = -1, by exhaustive scan.
pub fn roots_of_minus_one(field: Fp2Field) -> Vec<Fp2> {
    let p = field.characteristic();
    let minus_one = -field.one();
    field
        .elements()
        .filter(|z| z.pow(p + 1) == minus_one)
        .collect()
}

/// The branch u = zeta*v of the local model u^(p+1) + v^(p+1) = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchMap {
    zeta: Fp2,
}

impl BranchMap {
    pub fn new(zeta: Fp2) -> Result<BranchMap, FieldError> {
        let field = zeta.field();
        if zeta.pow(field.characteristic() + 1) != -field.one() {
            return Err(FieldError::InvalidBranch(zeta.to_string()));
        }
        Ok(BranchMap { zeta })
    }

    pub fn zeta(&self) -> Fp2 {
        self.zeta
    }

    /// Pull back along u -> zeta*v; the result is a series in v alone.
    pub fn restrict(&self, f: &Series) -> Series {
        Series::from_terms(
            f.field(),
            f.truncation(),
            f.terms()
                .map(|((i, j), c)| ((0, i + j), c * self.zeta.pow(i as u64))),
        )
    }

    /// Rewrite a series in v as a series in the branch parameter u = zeta*v.
    pub fn to_u_parameter(&self, f: &Series) -> Series {
        let zinv = self.zeta.inverse().expect("zeta is nonzero");
        Series::from_terms(
            f.field(),
            f.truncation(),
            f.terms()
                .map(|((i, j), c)| ((i + j, 0), c * zinv.pow(j as u64))),
        )
    }

    /// The ideal (u - zeta*v) cutting out the branch.
    pub fn ideal(&self, trunc: u32) -> Ideal {
        let f = self.zeta.field();
        let g = &Series::u(f, trunc) - &Series::v(f, trunc).scale(self.zeta);
        Ideal::new(vec![g]).expect("principal ideal is a Groebner basis")
    }
}

/// u^(p+1) + v^(p+1), the local equation of the supersingular locus at a
/// superspecial point.
pub fn local_equation(field: Fp2Field, trunc: u32) -> Series {
    let p = field.characteristic() as u32;
    Series::from_terms(
        field,
        trunc,
        [((p + 1, 0), field.one()), ((0, p + 1), field.one())],
    )
}

/// (u^(p+1) + v^(p+1), u^(p^2-1), v^(p^2-1)), the vanishing scheme of the
/// secondary Hasse invariant at a superspecial point.
pub fn vanishing_scheme_ideal(field: Fp2Field, trunc: u32) -> Result<Ideal, FieldError> {
    let p = field.characteristic() as u32;
    let e = p * p - 1;
    Ideal::new(vec![
        local_equation(field, trunc),
        Series::monomial(field.one(), e, 0, trunc),
        Series::monomial(field.one(), 0, e, trunc),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_equation_reduces_to_zero() {
        let f = Fp2Field::from_discriminant(3, -4).unwrap();
        let g = local_equation(f, 20);
        let ideal = Ideal::new(vec![g.clone()]).unwrap();
        assert_eq!(order_at_origin(&g, &ideal), Order::ZeroToTruncation);
    }

    #[test]
    fn order_of_minus_u_is_one() {
        let f = Fp2Field::from_discriminant(3, -4).unwrap();
        let g = -Series::u(f, 5);
        assert_eq!(order_at_origin(&g, &Ideal::zero(f, 5)), Order::Finite(1));
        assert_eq!(
            order_at_origin(&Series::one(f, 5), &Ideal::zero(f, 5)),
            Order::Unit
        );
    }

    #[test]
    fn order_on_branch() {
        for p in [2u64, 3, 5] {
            let f = Fp2Field::for_prime(p).unwrap();
            let t = (p * p * p + 4) as u32;
            let e = (p * p - 1) as u32;
            for z in roots_of_minus_one(f) {
                let br = BranchMap::new(z).unwrap();
                let h = -Series::monomial(f.one(), e, 0, t);
                assert_eq!(order_at_origin(&h, &br.ideal(t)), Order::Finite(e));
            }
        }
    }

    #[test]
    fn residue_field_has_dimension_one() {
        let f = Fp2Field::for_prime(3).unwrap();
        let ideal = Ideal::new(vec![Series::u(f, 6), Series::v(f, 6)]).unwrap();
        assert_eq!(quotient_dimension(&ideal).unwrap(), 1);
    }

    #[test]
    fn vanishing_scheme_for_p2() {
        let f = Fp2Field::for_prime(2).unwrap();
        let ideal = vanishing_scheme_ideal(f, 12).unwrap();
        assert_eq!(quotient_dimension(&ideal).unwrap(), 9);
    }

    #[test]
    fn unstable_dimension_is_reported() {
        let f = Fp2Field::for_prime(3).unwrap();
        let ideal = Ideal::new(vec![local_equation(f, 10)]).unwrap();
        assert!(matches!(
            quotient_dimension(&ideal),
            Err(FieldError::DimensionNotStabilized(10))
        ));
    }

    #[test]
    fn non_groebner_lists_are_rejected() {
        let f = Fp2Field::for_prime(3).unwrap();
        let t = 10;
        let u = Series::u(f, t);
        let v = Series::v(f, t);
        // (u^2 + v^2, uv): S-polynomial v^3 does not reduce
        let g1 = &u.pow(2) + &v.pow(2);
        let g2 = &u * &v;
        assert!(matches!(Ideal::new(vec![g1, g2]), Err(FieldError::NotGroebner)));
        let bad = &u + &v.pow(2);
        assert!(matches!(
            Ideal::new(vec![bad]),
            Err(FieldError::NonHomogeneousGenerator(_))
        ));
    }

    #[test]
    fn roots_count() {
        for p in [2u64, 3, 5, 7] {
            let f = Fp2Field::for_prime(p).unwrap();
            let roots = roots_of_minus_one(f);
            assert_eq!(roots.len() as u64, p + 1);
            for z in roots {
                assert!(z.pow(2 * (p + 1)).is_one());
                if p != 2 {
                    assert!(!z.pow(p + 1).is_one());
                }
            }
        }
    }

    #[test]
    fn branch_lies_on_local_model() {
        let f = Fp2Field::from_discriminant(5, -3).unwrap();
        let g = local_equation(f, 40);
        for z in roots_of_minus_one(f) {
            assert!(BranchMap::new(z).unwrap().restrict(&g).is_zero());
        }
    }
}
