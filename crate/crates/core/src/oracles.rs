//! Independent computations checked against the main code paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::curves;
use crate::dieudonne::{
    gss_deformation, rank, ssp_covariant, ssp_display, Matrix, SSP_LIE,
};
use crate::ffield::{
    order_at_origin, quotient_dimension, vanishing_scheme_ideal, Fp2Field, Ideal, Order, Series,
};
use crate::lfunc::{self, KroneckerCharacter};
use crate::numtheory;

/// dim of k[u,v]_{<T} / I by ranks of the spans of m*g in each degree.
fn quotient_dimension_by_linear_algebra(field: Fp2Field, gens: &[Series], trunc: u32) -> u64 {
    let mut dim = 0u64;
    for d in 0..trunc {
        let mut rows: Vec<Vec<crate::ffield::Fp2>> = Vec::new();
        for g in gens {
            let gd = g.order().unwrap();
            if gd > d {
                continue;
            }
            let k = d - gd;
            for i in 0..=k {
                let prod = &Series::monomial(field.one(), i, k - i, trunc) * g;
                rows.push((0..=d).map(|a| prod.coeff(a, d - a)).collect());
            }
        }
        let r = if rows.is_empty() {
            0
        } else {
            rank(&Matrix::from_rows(rows).unwrap())
        };
        dim += (d + 1) as u64 - r as u64;
    }
    dim
}

#[test]
fn vanishing_scheme_dimension_two_ways() {
    for p in [2u64, 3] {
        let f = Fp2Field::for_prime(p).unwrap();
        let t = (p * p * p + 4) as u32;
        for trunc in [t, t + 4] {
            let ideal = vanishing_scheme_ideal(f, trunc).unwrap();
            let nf_dim = quotient_dimension(&ideal).unwrap();
            let la_dim = quotient_dimension_by_linear_algebra(f, ideal.generators(), trunc);
            assert_eq!(nf_dim, la_dim, "p = {p}, T = {trunc}");
            assert_eq!(nf_dim, (p + 1) * (p * p - 1), "p = {p}, T = {trunc}");
        }
    }
}

#[test]
fn residue_field_has_dimension_one() {
    let f = Fp2Field::for_prime(5).unwrap();
    let ideal = Ideal::new(vec![Series::u(f, 4), Series::v(f, 4)]).unwrap();
    assert_eq!(quotient_dimension(&ideal).unwrap(), 1);
}

#[test]
fn functional_equation_all_discriminants() {
    for d in [-3, -4, -7, -8, -11, -15, -19, -20] {
        let chi = KroneckerCharacter::new(d).unwrap();
        let exact = -(BigRational::new(3.into(), 16.into())) * lfunc::l_value_neg2(&chi);
        let analytic = lfunc::chern_c2_analytic(d, 1.0, 1_000_000).unwrap();
        assert!((analytic - exact.to_f64().unwrap()).abs() < 1e-8, "D = {d}");
    }
}

#[test]
fn bernoulli_against_direct_sum_definition() {
    // B_{n,chi} from the generating function: sum_a chi(a) t e^{at}/(e^{ft}-1),
    // expanded through power sums S_k = sum chi(a) a^k:
    // B_{n,chi} = sum_{k} C(n,k) B_k f^{k-1} S_{n-k}
    let bern = [
        BigRational::new(1.into(), 1.into()),
        BigRational::new((-1).into(), 2.into()),
        BigRational::new(1.into(), 6.into()),
        BigRational::new(0.into(), 1.into()),
    ];
    for d in [-3, -4, -7, -8, -11, -15, -19, -20] {
        let chi = KroneckerCharacter::new(d).unwrap();
        let f = chi.modulus() as i64;
        let n = 3usize;
        let s = |k: usize| -> BigInt {
            (1..=f).map(|a| BigInt::from(chi.eval(a)) * BigInt::from(a).pow(k as u32)).sum()
        };
        let binom = [1, 3, 3, 1];
        let mut total = BigRational::from_integer(0.into());
        for k in 0..=n {
            let fk = BigRational::new(BigInt::from(f).pow(k as u32), BigInt::from(f));
            total += BigRational::from_integer(binom[k].into()) * &bern[k] * fk
                * BigRational::from_integer(s(n - k));
        }
        assert_eq!(total, lfunc::gen_bernoulli(3, &chi), "D = {d}");
    }
}

#[test]
fn su3_enumeration_matches_order_formula() {
    for (l, d) in [(3u64, -1i64), (2, -3), (2, -11), (3, -2), (2, -7), (3, -5)] {
        let disc = numtheory::discriminant_of(d);
        assert_eq!(
            BigInt::from(lfunc::brute_force_su3_order(l, d).unwrap()),
            lfunc::local_index_factor(l, disc).unwrap(),
            "l = {l}, d = {d}"
        );
    }
}

#[test]
fn fermat_counts_meet_the_weil_bound() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let c = curves::count_points(p).unwrap();
        assert_eq!(c, p * p * p + 1);
        assert_eq!(c, p * p + 1 + 2 * curves::genus(p) * p);
    }
}

#[test]
fn hasse_coherence() {
    for (p, d) in [(2u64, -3i64), (3, -4), (5, -3)] {
        let t = (p * p * p + 4) as u32;
        let f = Fp2Field::from_discriminant(p, d).unwrap();
        let h = ssp_display(p, d, t).unwrap().hasse_invariant().unwrap();
        let pe = p as u32 + 1;
        let expected = Series::from_terms(f, t, [((pe, 0), f.one()), ((0, pe), f.one())]);
        assert_eq!(h.coefficient, expected);
        assert_eq!(h.weight, p * p - 1);
        let local = Ideal::new(vec![expected.clone()]).unwrap();
        assert_eq!(order_at_origin(&h.coefficient, &local), Order::ZeroToTruncation);

        let g = gss_deformation(p, d).unwrap().hasse_invariant().unwrap();
        assert_eq!(g.coefficient, -Series::u(f, 2));
        assert_eq!(order_at_origin(&g.coefficient, &Ideal::zero(f, 2)), Order::Finite(1));
    }
}

#[test]
fn frobenius_square_matches_display_matrix() {
    for (p, d) in [(2u64, -3i64), (3, -4), (5, -3)] {
        let t = (p * p * p + 4) as u32;
        let f = Fp2Field::from_discriminant(p, d).unwrap();
        let m = ssp_covariant(p, d, t).unwrap();
        let f2 = m.frobenius_square_on(&SSP_LIE).unwrap();
        let mono = |i: u32, j: u32| Series::monomial(f.one(), i, j, t);
        let q = p as u32;
        let zero = Series::zero(f, t);
        let expected = Matrix::from_rows(vec![
            vec![&mono(q + 1, 0) + &mono(0, q + 1), zero.clone(), zero.clone()],
            vec![zero.clone(), mono(q + 1, 0), mono(1, q)],
            vec![zero, mono(q, 1), mono(0, q + 1)],
        ])
        .unwrap();
        assert_eq!(f2, expected, "p = {p}");
    }
}
