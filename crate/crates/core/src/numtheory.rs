//! Small integer number theory shared by the field and L-function modules.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut k = 3;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            let mut e = 0;
            while n % k == 0 {
                n /= k;
                e += 1;
            }
            out.push((k, e));
        }
        k += if k == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Kronecker symbol (a/n) for n > 0.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.unsigned_abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= twos;
    }
    // Jacobi symbol (a/n) for odd n.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Discriminant of Q(sqrt(d)) for a squarefree d: d if d = 1 mod 4, else 4d.
pub fn discriminant_of(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Squarefree part d with discriminant_of(d) = disc, if disc is a fundamental
/// discriminant.
pub fn squarefree_of_discriminant(disc: i64) -> Option<i64> {
    if disc == 0 || disc == 1 {
        return None;
    }
    if disc.rem_euclid(4) == 1 {
        return is_squarefree(disc.unsigned_abs()).then_some(disc);
    }
    if disc.rem_euclid(4) != 0 {
        return None;
    }
    let m = disc / 4;
    let r = m.rem_euclid(4);
    ((r == 2 || r == 3) && is_squarefree(m.unsigned_abs())).then_some(m)
}

pub fn is_fundamental_discriminant(disc: i64) -> bool {
    squarefree_of_discriminant(disc).is_some()
}

/// How a rational prime behaves in the quadratic field of discriminant `disc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn splitting(disc: i64, p: u64) -> Splitting {
    match kronecker(disc, p) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_euler(a: i64, p: u64) -> i32 {
        let r = a.rem_euclid(p as i64) as u64;
        if r == 0 {
            return 0;
        }
        if pow_mod(r, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion_for_odd_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            for a in -40i64..40 {
                assert_eq!(kronecker(a, p), legendre_euler(a, p), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-11, 2), -1);
    }

    #[test]
    fn fundamental_discriminants() {
        for d in [-3, -4, -7, -8, -11, -15, -19, -20, -24] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [-1, -2, -12, -16, -9, -27, 0, 1] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
        assert_eq!(discriminant_of(-1), -4);
        assert_eq!(discriminant_of(-7), -7);
        assert_eq!(discriminant_of(-2), -8);
        assert_eq!(squarefree_of_discriminant(-20), Some(-5));
    }

    #[test]
    fn splitting_in_gaussian_field() {
        assert_eq!(splitting(-4, 3), Splitting::Inert);
        assert_eq!(splitting(-4, 5), Splitting::Split);
        assert_eq!(splitting(-4, 2), Splitting::Ramified);
        assert_eq!(splitting(-7, 7), Splitting::Ramified);
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert_eq!(inv_mod(3, 7), Some(5));
    }
}
