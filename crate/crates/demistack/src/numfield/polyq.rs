//! Dense polynomial arithmetic over the rationals and the integers.
//!
//! Polynomials are coefficient vectors in ascending degree order with no
//! trailing zeros (the zero polynomial is the empty vector). Everything here
//! is exact; no floating point enters any computation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;
pub type ZPoly = Vec<BigInt>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn deg(p: &QPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn is_zero(p: &QPoly) -> bool {
    p.is_empty()
}

pub fn from_int(p: &ZPoly) -> QPoly {
    let mut q: QPoly = p.iter().map(|c| BigRational::from(c.clone())).collect();
    trim(&mut q);
    q
}

/// Clears denominators: returns (integer polynomial, common denominator).
pub fn to_int_scaled(p: &QPoly) -> (ZPoly, BigInt) {
    let mut den = BigInt::one();
    for c in p {
        den = num_integer::lcm(den, c.denom().clone());
    }
    let z = p
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect::<Vec<_>>();
    (z, den)
}

pub fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}

pub fn neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &QPoly, s: &BigRational) -> QPoly {
    if s.is_zero() {
        return Vec::new();
    }
    a.iter().map(|c| c * s).collect()
}

/// Quotient and remainder; the divisor must be nonzero.
pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let db = b.len() - 1;
    let lead_inv = b.last().unwrap().recip();
    let mut rem = a.clone();
    let mut quo: QPoly = Vec::new();
    while rem.len() > db && !rem.is_empty() {
        if rem.len() - 1 < db {
            break;
        }
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap() * &lead_inv;
        if quo.len() < shift + 1 {
            quo.resize(shift + 1, BigRational::zero());
        }
        quo[shift] = &quo[shift] + &c;
        for (j, cb) in b.iter().enumerate() {
            let idx = shift + j;
            let delta = cb * &c;
            rem[idx] = &rem[idx] - &delta;
        }
        trim(&mut rem);
        if db == 0 {
            break;
        }
    }
    trim(&mut quo);
    (quo, rem)
}

pub fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    divrem(a, b).1
}

/// Monic gcd.
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(&mut x);
    x
}

pub fn make_monic(p: &mut QPoly) {
    if let Some(lead) = p.last().cloned() {
        if !lead.is_one() {
            let inv = lead.recip();
            for c in p.iter_mut() {
                *c *= &inv;
            }
        }
    }
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g and g monic.
pub fn xgcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: QPoly = vec![BigRational::one()];
    let mut s1: QPoly = Vec::new();
    let mut t0: QPoly = Vec::new();
    let mut t1: QPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        let t = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if let Some(lead) = r0.last().cloned() {
        if !lead.is_one() {
            let inv = lead.recip();
            r0 = scale(&r0, &inv);
            s0 = scale(&s0, &inv);
            t0 = scale(&t0, &inv);
        }
    }
    (r0, s0, t0)
}

pub fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigRational::from(BigInt::from(i)));
    }
    trim(&mut out);
    out
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Resultant of two polynomials by the Euclidean recurrence.
///
/// With `a` monic this equals the product of `b` over the roots of `a`,
/// which is exactly the field norm used by the callers.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    fn go(a: QPoly, b: QPoly) -> BigRational {
        if a.is_empty() || b.is_empty() {
            return BigRational::zero();
        }
        let m = a.len() - 1;
        let n = b.len() - 1;
        if m == 0 {
            return pow_rat(&a[0], n);
        }
        if n == 0 {
            return pow_rat(&b[0], m);
        }
        if m < n {
            let sign = if (m * n) % 2 == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            return sign * go(b, a);
        }
        let r = rem(&a, &b);
        if r.is_empty() {
            return BigRational::zero();
        }
        let dr = r.len() - 1;
        let sign = if (m * n) % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        let lead = b.last().unwrap().clone();
        sign * pow_rat(&lead, m - dr) * go(b, r)
    }
    go(a.clone(), b.clone())
}

fn pow_rat(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Discriminant of a monic integer polynomial.
pub fn discriminant_monic(f: &ZPoly) -> BigInt {
    let fq = from_int(f);
    let res = resultant(&fq, &derivative(&fq));
    let n = f.len() - 1;
    // disc = (-1)^{n(n-1)/2} * res(f, f') for monic f
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    let val = res.to_integer();
    debug_assert!(res.is_integer());
    BigInt::from(sign) * val
}

/// Cauchy bound: every real root of the monic polynomial lies in (-B, B).
pub fn cauchy_bound(f: &ZPoly) -> BigRational {
    let n = f.len() - 1;
    let mut max = BigRational::zero();
    for c in f.iter().take(n) {
        let a = BigRational::from(c.abs());
        if a > max {
            max = a;
        }
    }
    max + BigRational::one()
}

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(f: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![f.clone(), derivative(f)];
    loop {
        let k = chain.len();
        if chain[k - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = neg(&rem(&chain[k - 2], &chain[k - 1]));
        if r.is_empty() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None; // true = positive
    for p in chain {
        let v = eval(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots of the squarefree `f` in the half-open
/// interval (lo, hi].
pub fn count_roots_in(f: &QPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let chain = sturm_chain(f);
    sign_variations(&chain, lo) - sign_variations(&chain, hi)
}

/// Isolating intervals for all real roots of a monic irreducible integer
/// polynomial, sorted in increasing root order. Each interval (lo, hi) has
/// f(lo)*f(hi) < 0, or is degenerate at an exact rational root for degree 1.
pub fn isolate_real_roots(f: &ZPoly) -> Vec<(BigRational, BigRational)> {
    let fq = from_int(f);
    if fq.len() == 2 {
        // Degree one: the root is rational, -c0.
        let root = -&fq[0];
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        return vec![(&root - &half, &root + &half)];
    }
    let chain = sturm_chain(&fq);
    let bound = cauchy_bound(f);
    let lo = -&bound;
    let hi = bound.clone();
    let total = sign_variations(&chain, &lo) - sign_variations(&chain, &hi);
    let mut out = Vec::new();
    if total == 0 {
        return out;
    }
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            // Refine until the endpoints straddle a sign change of f itself
            // and the interval is reasonably narrow.
            let (mut a, mut b) = (a, b);
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            loop {
                let fa = eval(&fq, &a);
                let fb = eval(&fq, &b);
                if !fa.is_zero()
                    && !fb.is_zero()
                    && fa.is_positive() != fb.is_positive()
                    && &b - &a <= half
                {
                    out.push((a, b));
                    break;
                }
                let mid = (&a + &b) / BigRational::from(BigInt::from(2));
                // The midpoint cannot be a root: f is irreducible of degree >= 2.
                let va = sign_variations(&chain, &a);
                let vm = sign_variations(&chain, &mid);
                if va - vm == 1 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            continue;
        }
        let mid = (&a + &b) / BigRational::from(BigInt::from(2));
        let va = sign_variations(&chain, &a);
        let vm = sign_variations(&chain, &mid);
        let vb = sign_variations(&chain, &b);
        stack.push((a, mid.clone(), va - vm));
        stack.push((mid, b, vm - vb));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// A rational upper bound for the square root of a nonnegative rational,
/// tightened by Newton iterations (which stay above the true value).
pub fn sqrt_upper_bound(x: &BigRational, iterations: u32) -> BigRational {
    assert!(!x.is_negative());
    if x.is_zero() {
        return BigRational::zero();
    }
    // Exact square fast path.
    let ns = x.numer().sqrt();
    let ds = x.denom().sqrt();
    if &(&ns * &ns) == x.numer() && &(&ds * &ds) == x.denom() {
        return BigRational::new(ns, ds);
    }
    let one = BigRational::one();
    let mut r = if *x >= one { x.clone() } else { one };
    let two = BigRational::from(BigInt::from(2));
    for _ in 0..iterations {
        r = (&r + x / &r) / &two;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn poly(cs: &[i64]) -> QPoly {
        let mut p: QPoly = cs.iter().map(|&c| q(c)).collect();
        trim(&mut p);
        p
    }

    #[test]
    fn divrem_reduces_mod_monic() {
        // x^2 mod (x^2 + 1) = -1
        let f = poly(&[1, 0, 1]);
        let x2 = poly(&[0, 0, 1]);
        assert_eq!(rem(&x2, &f), poly(&[-1]));
    }

    #[test]
    fn xgcd_inverts_mod_irreducible() {
        // inverse of x modulo x^2+1 is -x
        let f = poly(&[1, 0, 1]);
        let x = poly(&[0, 1]);
        let (g, s, _) = xgcd(&x, &f);
        assert_eq!(g, poly(&[1]));
        assert_eq!(rem(&mul(&s, &x), &f), poly(&[1]));
        assert_eq!(s, poly(&[0, -1]));
    }

    #[test]
    fn resultant_is_norm_for_monic() {
        // Res(x^2+1, x+4) = (4)^2 + 1 = 17
        let f = poly(&[1, 0, 1]);
        let g = poly(&[4, 1]);
        assert_eq!(resultant(&f, &g), q(17));
        // Res(x^2-x-1, x) = product of roots = -1
        let f2 = poly(&[-1, -1, 1]);
        assert_eq!(resultant(&f2, &poly(&[0, 1])), q(-1));
    }

    #[test]
    fn discriminant_values() {
        // disc(x^2+1) = -4, disc(x^2-x-1) = 5, disc(x) = 1
        assert_eq!(
            discriminant_monic(&vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]),
            BigInt::from(-4)
        );
        assert_eq!(
            discriminant_monic(&vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]),
            BigInt::from(5)
        );
        assert_eq!(
            discriminant_monic(&vec![BigInt::from(0), BigInt::from(1)]),
            BigInt::from(1)
        );
    }

    #[test]
    fn isolates_both_roots_of_golden_polynomial() {
        let f = vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)];
        let roots = isolate_real_roots(&f);
        assert_eq!(roots.len(), 2);
        // Roots are approx -0.618 and 1.618.
        assert!(roots[0].1 < q(0));
        assert!(roots[1].0 > q(1));
    }

    #[test]
    fn x_squared_plus_one_has_no_real_roots() {
        let f = vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        assert!(isolate_real_roots(&f).is_empty());
    }

    #[test]
    fn sqrt_upper_bound_is_above_and_tight() {
        let twenty = q(20);
        let b = sqrt_upper_bound(&twenty, 6);
        assert!(&b * &b >= twenty);
        // within 1e-4 of sqrt(20) = 4.4721...
        assert!(b < BigRational::new(BigInt::from(44722), BigInt::from(10000)));
        // perfect squares are exact
        assert_eq!(sqrt_upper_bound(&q(4), 6), q(2));
        assert_eq!(sqrt_upper_bound(&q(1), 6), q(1));
    }
}
