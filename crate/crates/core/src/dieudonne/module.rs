use serde::{Deserialize, Serialize};

use crate::ffield::{local_equation, Fp2, Fp2Field, Ideal, Series};

use super::matrix::{twist_vector, Coefficient, Matrix, TwistedMap};
use super::DError;

pub const E1: usize = 0;
pub const E2: usize = 1;
pub const F3: usize = 2;
pub const F1: usize = 3;
pub const F2: usize = 4;
pub const E3: usize = 5;

pub const LABELS: [&str; 6] = ["e1", "e2", "f3", "f1", "f2", "e3"];

/// Lie coordinates of the covariant superspecial display, in the order
/// (f3, e1, e2).
pub const SSP_LIE: [usize; 3] = [F3, E1, E2];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeTag {
    Sigma,
    SigmaBar,
}

impl TypeTag {
    pub fn of(index: usize) -> TypeTag {
        match index {
            E1 | E2 | E3 => TypeTag::Sigma,
            _ => TypeTag::SigmaBar,
        }
    }

    /// Twisting by Frobenius interchanges the two types.
    pub fn twisted(self, e: i32) -> TypeTag {
        if e.rem_euclid(2) == 0 {
            self
        } else {
            match self {
                TypeTag::Sigma => TypeTag::SigmaBar,
                TypeTag::SigmaBar => TypeTag::Sigma,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Contravariant,
    Covariant,
}

/// Standard symplectic Gram matrix with <e_i, f_j> = -<f_j, e_i> = delta_ij.
pub fn standard_gram<R: Coefficient>(like: &R) -> Matrix<R> {
    Matrix::from_entries(
        6,
        6,
        like,
        &[
            (E1, F1, 1),
            (F1, E1, -1),
            (E2, F2, 1),
            (F2, E2, -1),
            (E3, F3, 1),
            (F3, E3, -1),
        ],
    )
}

/// F determined by V through F^t G = G V, i.e. F = -G V^t G.
pub fn frobenius_from_verschiebung<R: Coefficient>(v: &Matrix<R>, gram: &Matrix<R>) -> Matrix<R> {
    gram.mul(&v.transpose()).mul(gram).negated()
}

/// Rank-6 unitary Dieudonne module with basis (e1, e2, f3, f1, f2, e3).
///
/// V maps D to D^(p) and F maps D^(p) to D. The Hodge filtration is given by
/// generators, each supported on basis vectors of a single type.
#[derive(Clone, PartialEq, Debug)]
pub struct UnitaryModule<R> {
    p: u64,
    variance: Variance,
    gram: Matrix<R>,
    v: TwistedMap<R>,
    f: TwistedMap<R>,
    hodge: Vec<Vec<R>>,
}

fn unit_vector<R: Coefficient>(i: usize, like: &R) -> Vec<R> {
    let mut v = vec![like.zero_like(); 6];
    v[i] = like.one_like();
    v
}

impl<R: Coefficient> UnitaryModule<R> {
    pub fn new(
        p: u64,
        variance: Variance,
        v: Matrix<R>,
        f: Matrix<R>,
        hodge: Vec<Vec<R>>,
    ) -> Result<UnitaryModule<R>, DError> {
        let like = v.get(0, 0).clone();
        let m = UnitaryModule {
            p,
            variance,
            gram: standard_gram(&like),
            v: TwistedMap::new(v, 0, 1),
            f: TwistedMap::new(f, 1, 0),
            hodge,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn gram(&self) -> &Matrix<R> {
        &self.gram
    }

    pub fn verschiebung(&self) -> &TwistedMap<R> {
        &self.v
    }

    pub fn frobenius(&self) -> &TwistedMap<R> {
        &self.f
    }

    pub fn hodge(&self) -> &[Vec<R>] {
        &self.hodge
    }

    fn like(&self) -> &R {
        self.gram.get(0, 0)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<R> {
        unit_vector(i, self.like())
    }

    fn support_type(v: &[R]) -> Option<TypeTag> {
        let mut tags = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| TypeTag::of(i));
        let first = tags.next()?;
        tags.all(|t| t == first).then_some(first)
    }

    /// Hodge generators of type Sigma (spanning P in the contravariant case).
    pub fn hodge_of_type(&self, tag: TypeTag) -> Vec<Vec<R>> {
        self.hodge
            .iter()
            .filter(|g| Self::support_type(g) == Some(tag))
            .cloned()
            .collect()
    }

    pub fn p_generators(&self) -> Vec<Vec<R>> {
        self.hodge_of_type(TypeTag::Sigma)
    }

    pub fn l_generators(&self) -> Vec<Vec<R>> {
        self.hodge_of_type(TypeTag::SigmaBar)
    }

    pub fn pair(&self, x: &[R], y: &[R]) -> R {
        let gy = self.gram.apply(y);
        x.iter()
            .zip(&gy)
            .fold(self.like().zero_like(), |acc, (a, b)| acc.plus(&a.times(b)))
    }

    /// F^t G = G V, the matrix form of <Fx, y> = <x, Vy>^(p).
    pub fn pairing_compatible(&self) -> bool {
        self.f.matrix().transpose().mul(&self.gram) == self.gram.mul(self.v.matrix())
    }

    fn maps_swap_types(m: &Matrix<R>) -> bool {
        (0..6).all(|i| {
            (0..6).all(|j| m.get(i, j).is_zero() || TypeTag::of(i) == TypeTag::of(j).twisted(1))
        })
    }

    /// Checks the Gram matrix, types of F and V, pairing compatibility and the
    /// shape of the Hodge filtration.
    pub fn validate(&self) -> Result<(), DError> {
        let bad = |s: &str| Err(DError::Malformed(s.to_string()));
        if self.gram != standard_gram(self.like()) {
            return bad("Gram matrix is not the standard symplectic form");
        }
        let dims = |m: &Matrix<R>| m.rows() == 6 && m.cols() == 6;
        if !dims(self.v.matrix()) || !dims(self.f.matrix()) {
            return Err(DError::DimensionMismatch);
        }
        if !Self::maps_swap_types(self.v.matrix()) || !Self::maps_swap_types(self.f.matrix()) {
            return bad("F or V does not respect the type decomposition");
        }
        if !self.pairing_compatible() {
            return bad("F and V are not adjoint for the symplectic form");
        }
        if self.hodge.len() != 3 || self.hodge.iter().any(|g| g.len() != 6) {
            return bad("Hodge filtration needs three generators in rank 6");
        }
        if self.hodge.iter().any(|g| Self::support_type(g).is_none()) {
            return bad("Hodge generator mixes types");
        }
        let (sigma, sigma_bar) = (self.p_generators().len(), self.l_generators().len());
        let expected = match self.variance {
            Variance::Contravariant => (2, 1),
            Variance::Covariant => (1, 2),
        };
        if (sigma, sigma_bar) != expected {
            return bad("Hodge filtration has the wrong type");
        }
        for a in &self.hodge {
            for b in &self.hodge {
                if !self.pair(a, b).is_zero() {
                    return bad("Hodge filtration is not isotropic");
                }
            }
        }
        Ok(())
    }

    /// The module on the dual basis: V' = F^t, F' = V^t, Hodge filtration
    /// replaced by its annihilator (identified through the Gram matrix).
    pub fn dualize(&self) -> Result<UnitaryModule<R>, DError> {
        let sign = match self.variance {
            Variance::Contravariant => self.like().one_like(),
            Variance::Covariant => self.like().one_like().negated(),
        };
        let hodge = self
            .hodge
            .iter()
            .map(|g| self.gram.apply(g).iter().map(|x| sign.times(x)).collect())
            .collect();
        let variance = match self.variance {
            Variance::Contravariant => Variance::Covariant,
            Variance::Covariant => Variance::Contravariant,
        };
        UnitaryModule::new(
            self.p,
            variance,
            self.f.matrix().transpose(),
            self.v.matrix().transpose(),
            hodge,
        )
    }

    /// V^(p) after V, a map D -> D^(p^2).
    pub fn v_squared(&self) -> TwistedMap<R> {
        self.v.twist().compose(&self.v).expect("levels match")
    }

    /// c with (V^(p) o V)(g) = c g^(p^2) for the generator g of L.
    pub fn hasse_invariant(&self) -> Result<HasseValue<R>, DError> {
        if self.variance != Variance::Contravariant {
            return Err(DError::Malformed(
                "the Hasse invariant is defined on a contravariant module".into(),
            ));
        }
        let l = self.l_generators();
        let g = l.first().ok_or_else(|| DError::Malformed("no generator for L".into()))?;
        let image = self.v_squared().apply(g);
        let target = twist_vector(&twist_vector(g));
        let k = target
            .iter()
            .position(R::is_unit)
            .ok_or_else(|| DError::Malformed("twisted generator of L is not unimodular".into()))?;
        let c = image[k].times(&target[k].inverse().expect("unit"));
        if image.iter().zip(&target).any(|(a, b)| *a != c.times(b)) {
            return Err(DError::NotProportional);
        }
        Ok(HasseValue {
            coefficient: c,
            weight: self.p * self.p - 1,
        })
    }

    /// F restricted to the given Lie coordinates.
    pub fn frobenius_on(&self, coords: &[usize]) -> Result<Matrix<R>, DError> {
        let rest: Vec<usize> = (0..6).filter(|i| !coords.contains(i)).collect();
        // F must preserve the complementary coordinate span
        let leak = self.f.matrix().submatrix(coords, &rest);
        if !leak.is_zero() {
            return Err(DError::Malformed(
                "F does not descend to the chosen Lie quotient".into(),
            ));
        }
        Ok(self.f.matrix().submatrix(coords, coords))
    }

    /// F o F^(p) on the Lie quotient, in the given coordinates.
    pub fn frobenius_square_on(&self, coords: &[usize]) -> Result<Matrix<R>, DError> {
        let f = self.frobenius_on(coords)?;
        Ok(f.mul(&f.twist()))
    }
}

/// A value of the Hasse invariant together with its weight p^2 - 1.
#[derive(Clone, PartialEq, Debug)]
pub struct HasseValue<R> {
    pub coefficient: R,
    pub weight: u64,
}

impl UnitaryModule<Series> {
    /// The fiber at the point (u, v) = (a, b).
    pub fn specialize(&self, a: Fp2, b: Fp2) -> UnitaryModule<Fp2> {
        let ev = |s: &Series| s.eval(a, b);
        UnitaryModule {
            p: self.p,
            variance: self.variance,
            gram: self.gram.map(ev),
            v: self.v.map_entries(ev),
            f: self.f.map_entries(ev),
            hodge: self.hodge.iter().map(|g| g.iter().map(ev).collect()).collect(),
        }
    }

    pub fn map_series<F: Fn(&Series) -> Series>(&self, f: F) -> UnitaryModule<Series> {
        UnitaryModule {
            p: self.p,
            variance: self.variance,
            gram: self.gram.map(&f),
            v: self.v.map_entries(&f),
            f: self.f.map_entries(&f),
            hodge: self.hodge.iter().map(|g| g.iter().map(&f).collect()).collect(),
        }
    }
}

impl UnitaryModule<Fp2> {
    /// Base change by a symplectic, type-preserving matrix: A on (e1, e2, e3)
    /// and A^-t on (f1, f2, f3).
    pub fn change_basis(&self, a: &Matrix<Fp2>) -> Result<UnitaryModule<Fp2>, DError> {
        let one = *self.like();
        let a_inv = invert3(a).ok_or(DError::Malformed("change of basis is singular".into()))?;
        let c = a_inv.transpose();
        let e = [E1, E2, E3];
        let f = [F1, F2, F3];
        let mut b = Matrix::zeros(6, 6, &one);
        let mut b_inv = Matrix::zeros(6, 6, &one);
        for i in 0..3 {
            for j in 0..3 {
                b.set(e[i], e[j], *a.get(i, j));
                b.set(f[i], f[j], *c.get(i, j));
                b_inv.set(e[i], e[j], *a_inv.get(i, j));
                b_inv.set(f[i], f[j], *a.get(j, i));
            }
        }
        let v = b_inv.twist().mul(self.v.matrix()).mul(&b);
        let fm = b_inv.mul(self.f.matrix()).mul(&b.twist());
        let hodge = self.hodge.iter().map(|g| b_inv.apply(g)).collect();
        UnitaryModule::new(self.p, self.variance, v, fm, hodge)
    }
}

/// Inverse of a 3x3 matrix over F_{p^2} by the adjugate.
pub fn invert3(a: &Matrix<Fp2>) -> Option<Matrix<Fp2>> {
    let m = |i: usize, j: usize| *a.get(i % 3, j % 3);
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    let dinv = det.inverse()?;
    let mut out = Matrix::zeros(3, 3, &det);
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of (j, i)
            let c = m(j + 1, i + 1) * m(j + 2, i + 2) - m(j + 1, i + 2) * m(j + 2, i + 1);
            out.set(i, j, c * dinv);
        }
    }
    Some(out)
}

/// The module of a general supersingular fiber: Ve2 = f3^(p), Vf3 = e1^(p),
/// Vf1 = e2^(p), other basis vectors killed; omega = span{e1, e2, f3}.
pub fn braid3(p: u64, disc: i64) -> Result<UnitaryModule<Fp2>, DError> {
    let field = Fp2Field::from_discriminant(p, disc)?;
    let one = field.one();
    let v = braid_v(&one);
    let f = frobenius_from_verschiebung(&v, &standard_gram(&one));
    let hodge = vec![unit_vector(E1, &one), unit_vector(E2, &one), unit_vector(F3, &one)];
    UnitaryModule::new(p, Variance::Contravariant, v, f, hodge)
}

fn braid_v<R: Coefficient>(like: &R) -> Matrix<R> {
    Matrix::from_entries(6, 6, like, &[(F3, E2, 1), (E1, F3, 1), (E2, F1, 1)])
}

/// First-order deformation of the braid module over k[u,v]/(u,v)^2: the same
/// F and V, with P = span{e1 + u e3, e2 + v e3} and L = span{f3 - u f1 - v f2}.
pub fn gss_deformation(p: u64, disc: i64) -> Result<UnitaryModule<Series>, DError> {
    let field = Fp2Field::from_discriminant(p, disc)?;
    let one = Series::one(field, 2);
    let u = Series::u(field, 2);
    let v = Series::v(field, 2);
    let vm = braid_v(&one);
    let fm = frobenius_from_verschiebung(&vm, &standard_gram(&one));
    let mut p1 = unit_vector(E1, &one);
    p1[E3] = u.clone();
    let mut p2 = unit_vector(E2, &one);
    p2[E3] = v.clone();
    let mut l = unit_vector(F3, &one);
    l[F1] = -&u;
    l[F2] = -&v;
    UnitaryModule::new(p, Variance::Contravariant, vm, fm, vec![p1, p2, l])
}

/// Smallest truncation order accepted for the superspecial display.
pub fn min_display_truncation(p: u64) -> u32 {
    (p * p * p + 2) as u32
}

/// Covariant display at a superspecial point in normalized coordinates:
/// F(f3^(p)) = u e1 + v e2 + e3, F(e1^(p)) = u f3 + f1, F(e2^(p)) = v f3 + f2,
/// F zero on e3^(p), f1^(p), f2^(p). The Lie algebra has coordinates
/// (f3, e1, e2).
pub fn ssp_covariant(p: u64, disc: i64, trunc: u32) -> Result<UnitaryModule<Series>, DError> {
    let needed = min_display_truncation(p);
    if trunc < needed {
        return Err(DError::TruncationTooSmall { needed, got: trunc });
    }
    let field = Fp2Field::from_discriminant(p, disc)?;
    let one = Series::one(field, trunc);
    let u = Series::u(field, trunc);
    let v = Series::v(field, trunc);
    let mut f = Matrix::zeros(6, 6, &one);
    f.set(E1, F3, u.clone());
    f.set(E2, F3, v.clone());
    f.set(E3, F3, one.clone());
    f.set(F3, E1, u);
    f.set(F1, E1, one.clone());
    f.set(F3, E2, v);
    f.set(F2, E2, one.clone());
    let gram = standard_gram(&one);
    // the adjoint relation F^t G = G V solved for V
    let vm = gram.mul(&f.transpose()).mul(&gram).negated();
    let hodge = vec![unit_vector(F1, &one), unit_vector(F2, &one), unit_vector(E3, &one)];
    UnitaryModule::new(p, Variance::Covariant, vm, f, hodge)
}

/// Contravariant superspecial display, the dual of [`ssp_covariant`]:
/// Vf3 = u e1 + v e2, Ve1 = u f3, Ve2 = v f3, Ve3 = f3, Vf1 = e1, Vf2 = e2
/// (images in the twist), omega = span{f3, e1, e2}.
pub fn ssp_display(p: u64, disc: i64, trunc: u32) -> Result<UnitaryModule<Series>, DError> {
    ssp_covariant(p, disc, trunc)?.dualize()
}

/// Whether the Sigma block B of F^2 on Lie coordinates satisfies
/// B * B^(p^2) = 0 modulo u^(p+1) + v^(p+1).
///
/// The entries of the product are homogeneous of degree (p+1)(p^2+1), so the
/// display is built with a truncation just above that.
pub fn sigma_block_nilpotent(p: u64, disc: i64) -> Result<bool, DError> {
    let trunc = ((p + 1) * (p * p + 1) + 1) as u32;
    let b = sigma_block_product(p, disc, trunc)?;
    let field = Fp2Field::from_discriminant(p, disc)?;
    let ideal = Ideal::new(vec![local_equation(field, trunc)])?;
    let nilpotent = b.entries().all(|e| ideal.normal_form(e).is_zero());
    Ok(nilpotent)
}

fn sigma_block_product(p: u64, disc: i64, trunc: u32) -> Result<Matrix<Series>, DError> {
    let f2 = ssp_covariant(p, disc, trunc)?.frobenius_square_on(&SSP_LIE)?;
    let b = f2.submatrix(&[1, 2], &[1, 2]);
    Ok(b.mul(&b.twist_by(2)))
}
