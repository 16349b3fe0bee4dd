//! Index bounds for hypersurfaces, Euler characteristics of their linear
//! sections, and the twisted Fermat valuation certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::binomial;

fn need_positive(name: &str, x: u64) -> Result<()> {
    if x == 0 {
        Err(Error::Precondition(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// `I_{d,N} = gcd { d/δ : 1 <= δ <= N, δ | d }`.
pub fn index_bound(d: u64, n: u64) -> Result<u64> {
    need_positive("d", d)?;
    need_positive("N", n)?;
    Ok((1..=n.min(d)).filter(|delta| d.is_multiple_of(*delta)).fold(0, |g, delta| g.gcd(&(d / delta))))
}

/// `χ_{d,n} = 1 - (-1)^n C(d-1, n)`.
pub fn chi_hypersurface(d: u64, n: u64) -> Result<BigInt> {
    need_positive("d", d)?;
    need_positive("n", n)?;
    let b = binomial(&BigInt::from(d - 1), n as u32);
    Ok(if n.is_multiple_of(2) { BigInt::one() - b } else { BigInt::one() + b })
}

/// Checks `I_{d,N} = gcd { χ_{d,n} : 1 <= n <= N }`.
pub fn verify_gcd_lemma(d: u64, n: u64) -> Result<bool> {
    let bound = index_bound(d, n)?;
    let mut g = BigInt::zero();
    for k in 1..=n {
        g = g.gcd(&chi_hypersurface(d, k)?);
    }
    Ok(g == BigInt::from(bound))
}

/// Prime factorization by trial division, as `(p, α)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// The smallest `N_0` with `I_{d,N} = 1` exactly when `N >= N_0`: the largest
/// prime power exactly dividing `d`.
pub fn unit_index_threshold(d: u64) -> Result<u64> {
    need_positive("d", d)?;
    Ok(factorize(d).into_iter().map(|(p, a)| p.pow(a)).max().unwrap_or(1))
}

/// `p`-adic valuation of a nonzero integer.
pub fn v_p(n: &BigInt, p: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroVector);
    }
    if p < 2 {
        return Err(Error::Precondition(format!("v_p needs p >= 2, got {p}")));
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Ok(v)
}

/// The largest divisor of `n` that is prime to `m`.
pub fn prime_to_part(n: u64, m: u64) -> Result<u64> {
    need_positive("n", n)?;
    let mut n = n;
    if m == 0 {
        // Everything divides 0, so only 1 is prime to it.
        return Ok(1);
    }
    loop {
        let g = n.gcd(&m);
        if g == 1 {
            return Ok(n);
        }
        n /= g;
    }
}

/// The checkable trace of the twisted Fermat iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatCertificate {
    pub d: u64,
    pub n: u64,
    pub e: u64,
    /// Successive states `a ∈ Z^{N+1}`, starting at zero.
    pub trace: Vec<Vec<u64>>,
    /// `m` of the final state.
    pub final_m: u64,
}

/// `m(a) = min_i (i·e + d·a_i)` and the unique minimizing `i`, if unique.
pub fn fermat_min(d: u64, e: u64, a: &[u64]) -> (u64, Option<usize>) {
    let values: Vec<u64> = a.iter().enumerate().map(|(i, &ai)| i as u64 * e + d * ai).collect();
    let m = *values.iter().min().expect("nonempty state");
    let argmins: Vec<usize> = (0..values.len()).filter(|&i| values[i] == m).collect();
    (m, if argmins.len() == 1 { Some(argmins[0]) } else { None })
}

/// Runs the iteration: from `a = 0`, increment the coordinate minimizing
/// `i·e + d·a_i` until `m(a) > N·e`.
pub fn fermat_certificate(d: u64, n: u64, e: u64) -> Result<FermatCertificate> {
    need_positive("e", e)?;
    let bound = index_bound(d, n)?;
    if e.is_multiple_of(bound) {
        return Err(Error::Precondition(format!(
            "I_{{{d},{n}}} = {bound} divides e = {e}; no certificate exists"
        )));
    }
    let mut a = vec![0u64; n as usize + 1];
    let mut trace = vec![a.clone()];
    loop {
        let (m, argmin) = fermat_min(d, e, &a);
        if m > n * e {
            if a.contains(&0) {
                return Err(Error::Internal(format!("final state {a:?} has a zero coordinate")));
            }
            return Ok(FermatCertificate { d, n, e, trace, final_m: m });
        }
        let i = argmin.ok_or_else(|| Error::Internal(format!("minimizer of i*e + d*a_i is not unique at {a:?}")))?;
        a[i] += 1;
        trace.push(a.clone());
    }
}

impl FermatCertificate {
    /// Re-checks every local invariant of the trace.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        let width = self.n as usize + 1;
        if self.trace.first() != Some(&vec![0; width]) {
            return fail("trace does not start at zero".into());
        }
        let mut prev_m = None;
        for w in self.trace.windows(2) {
            let (m, argmin) = fermat_min(self.d, self.e, &w[0]);
            let Some(i) = argmin else { return fail(format!("tie at {:?}", w[0])) };
            let mut expect = w[0].clone();
            expect[i] += 1;
            if w[1] != expect {
                return fail(format!("step {:?} -> {:?} is not the minimizer step", w[0], w[1]));
            }
            if prev_m.is_some_and(|p| p >= m) {
                return fail(format!("m not strictly increasing at {:?}", w[0]));
            }
            prev_m = Some(m);
        }
        let last = self.trace.last().expect("nonempty trace");
        let (m, _) = fermat_min(self.d, self.e, last);
        if prev_m.is_some_and(|p| p >= m) {
            return fail("m not strictly increasing at the final state".into());
        }
        if m != self.final_m || m <= self.n * self.e || last.contains(&0) {
            return fail(format!("final state {last:?} does not close the certificate"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_bound_examples() {
        assert_eq!(index_bound(6, 3).unwrap(), 1);
        assert_eq!(index_bound(5, 3).unwrap(), 5);
        assert_eq!(index_bound(4, 2).unwrap(), 2);
        assert_eq!(index_bound(12, 4).unwrap(), 1);
        for d in 1..20 {
            for n in d..25 {
                assert_eq!(index_bound(d, n).unwrap(), 1);
            }
        }
        assert!(index_bound(0, 3).is_err());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_hypersurface(6, 2).unwrap(), BigInt::from(-9));
        assert_eq!(chi_hypersurface(6, 3).unwrap(), BigInt::from(11));
        for d in 1..30 {
            assert_eq!(chi_hypersurface(d, 1).unwrap(), BigInt::from(d));
        }
    }

    #[test]
    fn gcd_lemma_examples() {
        assert!(verify_gcd_lemma(6, 3).unwrap());
        assert!(verify_gcd_lemma(5, 3).unwrap());
        for d in 1..40 {
            assert!(verify_gcd_lemma(d, 1).unwrap());
        }
    }

    #[test]
    fn recursion_identity() {
        use crate::exactalg::rat_int;
        for d in 1..=50u64 {
            for n in 2..=50u64 {
                if d % n != 0 {
                    continue;
                }
                let lhs = rat_int(1) - crate::exactalg::Rational::from_integer(chi_hypersurface(d, n).unwrap());
                let prev = rat_int(1) - crate::exactalg::Rational::from_integer(chi_hypersurface(d, n - 1).unwrap());
                let factor = rat_int(1) - crate::exactalg::rat(d as i64, n as i64);
                assert_eq!(lhs, prev * factor, "d={d} N={n}");
            }
        }
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(unit_index_threshold(12).unwrap(), 4);
        assert_eq!(unit_index_threshold(8).unwrap(), 8);
        assert_eq!(unit_index_threshold(6).unwrap(), 3);
        assert_eq!(unit_index_threshold(1).unwrap(), 1);
    }

    #[test]
    fn valuation_at_large_primes() {
        for d in 1..=60u64 {
            for n in 1..=12u64 {
                let bound = BigInt::from(index_bound(d, n).unwrap());
                for p in (n + 1..=50).filter(|&p| is_prime(p)) {
                    assert_eq!(v_p(&bound, p).unwrap(), v_p(&BigInt::from(d), p).unwrap());
                }
            }
        }
    }

    #[test]
    fn prime_to_part_examples() {
        assert_eq!(prime_to_part(12, 2).unwrap(), 3);
        assert_eq!(prime_to_part(360, 6).unwrap(), 5);
        assert_eq!(prime_to_part(7, 5).unwrap(), 7);
    }

    #[test]
    fn fermat_examples() {
        let c = fermat_certificate(2, 1, 1).unwrap();
        assert_eq!(c.trace, vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        assert_eq!(c.final_m, 2);
        c.validate().unwrap();
        assert!(matches!(fermat_certificate(6, 3, 2), Err(Error::Precondition(_))));
        let c = fermat_certificate(5, 3, 3).unwrap();
        assert!(c.trace.last().unwrap().iter().all(|&x| x >= 1));
        c.validate().unwrap();
    }

    #[test]
    fn validate_catches_tampering() {
        let mut c = fermat_certificate(5, 3, 3).unwrap();
        c.trace.swap(1, 2);
        assert!(c.validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn prime_to_part_is_largest_coprime_divisor(n in 1u64..5000, m in 1u64..200) {
                let q = prime_to_part(n, m).unwrap();
                prop_assert_eq!(n % q, 0);
                prop_assert_eq!(q.gcd(&m), 1);
                let brute = (1..=n).filter(|k| n % k == 0 && k.gcd(&m) == 1).max().unwrap();
                prop_assert_eq!(q, brute);
            }

            #[test]
            fn bound_divides_chi(d in 1u64..=50, n in 1u64..=50) {
                let b = BigInt::from(index_bound(d, n).unwrap());
                for k in 1..=n {
                    prop_assert!((chi_hypersurface(d, k).unwrap() % &b).is_zero());
                }
            }
        }
    }
}
