use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use crate::dieudonne::{
    braid3, classify_stratum, ssp_display, Coefficient, Matrix, TwistedMap, UnitaryModule,
};
use crate::ffield::{vanishing_scheme_ideal, Fp2, Fp2Field, Series};
use crate::intersect;
use crate::kfield::{
    is_self_dual, HermitianSpace, LatticeBasis, QuadElement, QuadField, TypeIdempotents,
};
use crate::lfunc;
use crate::numtheory::{self, Splitting};

fn quad(k: QuadField, c: (i64, i64, i64, i64)) -> QuadElement {
    k.element(
        BigRational::new(c.0.into(), c.1.into()),
        BigRational::new(c.2.into(), c.3.into()),
    )
}

fn coeff() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
}

fn vec3() -> impl Strategy<Value = Vec<(i64, i64, i64, i64)>> {
    prop::collection::vec(coeff(), 3)
}

fn fp2(f: Fp2Field, c: (u64, u64)) -> Fp2 {
    f.element(c.0, c.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hermitian_form_is_sesquilinear(u in vec3(), v in vec3(), w in vec3(), a in coeff()) {
        for d in [-1, -2, -7, -11] {
            let k = QuadField::new(d).unwrap();
            let h = HermitianSpace::new(k);
            let u: Vec<_> = u.iter().map(|c| quad(k, *c)).collect();
            let v: Vec<_> = v.iter().map(|c| quad(k, *c)).collect();
            let w: Vec<_> = w.iter().map(|c| quad(k, *c)).collect();
            let a = quad(k, a);
            let uv = h.hermitian_pair(&u, &v).unwrap();
            prop_assert_eq!(h.hermitian_pair(&v, &u).unwrap(), uv.conj());
            // linear in the second slot, conjugate-linear in the first
            let vw: Vec<_> = v.iter().zip(&w).map(|(x, y)| x + y).collect();
            prop_assert_eq!(
                h.hermitian_pair(&u, &vw).unwrap(),
                &uv + &h.hermitian_pair(&u, &w).unwrap()
            );
            let av: Vec<_> = v.iter().map(|x| &a * x).collect();
            prop_assert_eq!(h.hermitian_pair(&u, &av).unwrap(), &a * &uv);
            let au: Vec<_> = u.iter().map(|x| &a * x).collect();
            prop_assert_eq!(h.hermitian_pair(&au, &v).unwrap(), &a.conj() * &uv);
            prop_assert!(h.polarization_identity_holds(&u, &v).unwrap());
            // <a u, v> = <u, conj(a) v>
            let cav: Vec<_> = v.iter().map(|x| &a.conj() * x).collect();
            prop_assert_eq!(
                h.polarization_pair(&au, &v).unwrap(),
                h.polarization_pair(&u, &cav).unwrap()
            );
        }
    }

    #[test]
    fn conjugation_is_a_ring_homomorphism(x in coeff(), y in coeff()) {
        for d in [-1, -2, -3, -7, -11] {
            let k = QuadField::new(d).unwrap();
            let (x, y) = (quad(k, x), quad(k, y));
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            prop_assert_eq!(x.conj().conj(), x.clone());
            prop_assert_eq!(x.im_delta() + x.conj().im_delta(), BigRational::from_integer(0.into()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn default_lattice_is_self_dual_in_any_basis(
        d in prop::sample::select(vec![-1i64, -2, -3, -5, -7, -11, -15]),
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, e in -3i64..=3,
    ) {
        // unipotent change of basis with O_K entries keeps the lattice
        let k = QuadField::new(d).unwrap();
        let l = LatticeBasis::standard(k);
        let vs = l.vectors();
        let x = k.int(a, b);
        let y = k.int(c, e);
        let b0 = vs[0].clone();
        let b1: Vec<_> = vs[1].iter().zip(&vs[0]).map(|(s, t)| s + &(&x * t)).collect();
        let b2: Vec<_> = vs[2]
            .iter()
            .zip(&vs[1])
            .zip(&vs[0])
            .map(|((s, t), r)| &(s + &(&y * t)) + &(&x * r))
            .collect();
        let basis = LatticeBasis::new(vec![b0, b1, b2]).unwrap();
        prop_assert!(is_self_dual(&HermitianSpace::new(k), &basis).unwrap());
    }

    #[test]
    fn idempotent_identities(
        d in prop::sample::select(vec![-1i64, -2, -3, -5, -6, -7, -10, -11, -13, -15, -19]),
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31]),
        a in (0u64..31, 0u64..31), b in (0u64..31, 0u64..31),
    ) {
        let disc = numtheory::discriminant_of(d);
        prop_assume!(numtheory::splitting(disc, p) == Splitting::Inert);
        let t = TypeIdempotents::new(p, disc).unwrap();
        prop_assert!(t.identities_hold());
        let f = t.field();
        let x = t.element(fp2(f, a), fp2(f, b));
        let (s, sb) = t.type_decompose(&[x]);
        prop_assert_eq!(s[0].add(&sb[0]), x);
        // delta acts by delta_bar on the Sigma part
        prop_assert_eq!(
            t.delta_tensor().mul(&s[0]),
            t.scalar(t.delta_bar()).mul(&s[0])
        );
    }

    #[test]
    fn twist_is_a_ring_homomorphism(
        p in prop::sample::select(vec![2u64, 3, 5]),
        x in prop::collection::vec(((0u32..4, 0u32..4), (0u64..5, 0u64..5)), 0..6),
        y in prop::collection::vec(((0u32..4, 0u32..4), (0u64..5, 0u64..5)), 0..6),
    ) {
        let f = Fp2Field::for_prime(p).unwrap();
        let t = 30;
        let mk = |terms: &Vec<((u32, u32), (u64, u64))>| {
            Series::from_terms(f, t, terms.iter().map(|(e, c)| (*e, fp2(f, *c))))
        };
        let (a, b) = (mk(&x), mk(&y));
        prop_assert_eq!((&a * &b).frobenius(1), &a.frobenius(1) * &b.frobenius(1));
        prop_assert_eq!((&a + &b).frobenius(1), &a.frobenius(1) + &b.frobenius(1));
        prop_assert_eq!(
            (&a * &b).twist_coefficients(1),
            &a.twist_coefficients(1) * &b.twist_coefficients(1)
        );
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn twist_functoriality_over_fp2(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        s in prop::collection::vec((0u64..7, 0u64..7), 36),
        t in prop::collection::vec((0u64..7, 0u64..7), 36),
    ) {
        let f = Fp2Field::for_prime(p).unwrap();
        let mk = |c: &Vec<(u64, u64)>| {
            Matrix::from_rows(c.chunks(6).map(|r| r.iter().map(|x| fp2(f, *x)).collect()).collect()).unwrap()
        };
        let outer = TwistedMap::new(mk(&s), 1, 2);
        let inner = TwistedMap::new(mk(&t), 0, 1);
        let lhs = outer.compose(&inner).unwrap().twist();
        let rhs = outer.twist().compose(&inner.twist()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(inner.compose(&inner).is_err());
    }

    #[test]
    fn twist_functoriality_over_series(
        p in prop::sample::select(vec![2u64, 3]),
        s in prop::collection::vec(prop::collection::vec(((0u32..3, 0u32..3), (0u64..3, 0u64..3)), 0..3), 9),
        t in prop::collection::vec(prop::collection::vec(((0u32..3, 0u32..3), (0u64..3, 0u64..3)), 0..3), 9),
    ) {
        let f = Fp2Field::for_prime(p).unwrap();
        let tr = 20;
        let mk = |c: &Vec<Vec<((u32, u32), (u64, u64))>>| {
            let entries: Vec<Series> = c
                .iter()
                .map(|terms| Series::from_terms(f, tr, terms.iter().map(|(e, x)| (*e, fp2(f, *x)))))
                .collect();
            Matrix::from_rows(entries.chunks(3).map(|r| r.to_vec()).collect()).unwrap()
        };
        let outer = TwistedMap::new(mk(&s), 1, 2);
        let inner = TwistedMap::new(mk(&t), 0, 1);
        prop_assert_eq!(
            outer.compose(&inner).unwrap().twist(),
            outer.twist().compose(&inner.twist()).unwrap()
        );
    }

    #[test]
    fn classification_is_invariant_under_base_change(
        which in 0usize..4,
        a in prop::collection::vec((0u64..3, 0u64..3), 9),
    ) {
        let p = 3;
        let f = Fp2Field::from_discriminant(p, -4).unwrap();
        let m: UnitaryModule<Fp2> = match which {
            0 => braid3(p, -4).unwrap(),
            1 => ssp_display(p, -4, 29).unwrap().specialize(f.zero(), f.zero()),
            2 => ssp_display(p, -4, 29).unwrap().specialize(f.one(), f.zero()),
            _ => ssp_display(p, -4, 29).unwrap().specialize(f.gen(), f.one()),
        };
        let a = Matrix::from_rows(a.chunks(3).map(|r| r.iter().map(|x| fp2(f, *x)).collect()).collect()).unwrap();
        prop_assume!(crate::dieudonne::invert3(&a).is_some());
        let moved = m.change_basis(&a).unwrap();
        prop_assert!(moved.pairing_compatible());
        prop_assert_eq!(classify_stratum(&moved).unwrap(), classify_stratum(&m).unwrap());
        prop_assert!(moved.dualize().unwrap().pairing_compatible());
    }

    #[test]
    fn counts_are_linear_in_the_index(
        d in prop::sample::select(vec![-3i64, -4, -7, -8, -11, -15, -19, -20]),
        i1 in 0i64..500, i2 in 0i64..500,
    ) {
        let r = |i: i64| BigRational::from_integer(i.into());
        let c = |i: i64| lfunc::chern_c2(d, &r(i)).unwrap();
        prop_assert_eq!(c(i1 + i2), c(i1) + c(i2));
    }

    #[test]
    fn intersection_numbers_are_linear_in_n(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97]),
        n1 in 0i64..1000, n2 in 0i64..1000,
    ) {
        let b = |n: i64| BigInt::from(n);
        let zz = |n| intersect::total_self_intersection(p, &b(n)).unwrap();
        prop_assert_eq!(zz(n1 + n2), zz(n1) + zz(n2));
        let ga = |n| intersect::arithmetic_genus(p, &b(n)).unwrap() - 1;
        prop_assert_eq!(ga(n1 + n2), ga(n1) + ga(n2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_forms_do_not_depend_on_generator_order(
        p in prop::sample::select(vec![2u64, 3]),
        terms in prop::collection::vec(((0u32..14, 0u32..14), (0u64..3, 0u64..3)), 0..10),
    ) {
        let f = Fp2Field::for_prime(p).unwrap();
        let t = (p * p * p + 4) as u32;
        let ideal = vanishing_scheme_ideal(f, t).unwrap();
        let g = Series::from_terms(f, t, terms.iter().map(|(e, c)| (*e, fp2(f, *c))));
        let a = ideal.normal_form(&g);
        let b = ideal.reordered(&[2, 1, 0]).normal_form(&g);
        let c = ideal.reordered(&[1, 2, 0]).normal_form(&g);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
        prop_assert_eq!(ideal.normal_form(&a), a.clone());
        // differs from g by an element of the ideal
        prop_assert!(ideal.contains(&(&g - &a)));
    }
}

#[test]
fn zero_coefficient_helper_is_consistent() {
    let f = Fp2Field::for_prime(3).unwrap();
    let x = f.element(1, 2);
    assert!(Coefficient::is_unit(&x));
    assert_eq!(Coefficient::frobenius(&x), x.frobenius());
}
