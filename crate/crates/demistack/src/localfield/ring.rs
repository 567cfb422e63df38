//! Truncated arithmetic in a completion's valuation ring.
//!
//! With Z[theta] maximal at l (Dedekind-checked), the completion factor of f
//! attached to a place lifts by Hensel to F modulo l^M, and O_P/l^M is
//! presented as (Z/l^M)[x]/(F). Completion elements are never materialized
//! as infinite data: every computation happens at an explicit finite
//! precision chosen from the Hensel thresholds of its caller.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::numfield::polymod::{self, FqElem, MPoly};
use crate::numfield::polyq::ZPoly;
use crate::numfield::{FieldElement, FieldSpec, FinitePlace};

use super::LocalFieldError;

/// l-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, ell: u64) -> u32 {
    assert!(!n.is_zero());
    let l = BigInt::from(ell);
    let mut v = 0u32;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&l);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

fn mod_reduce(c: &BigInt, m: &BigInt) -> BigInt {
    c.mod_floor(m)
}

fn poly_mod(p: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out: ZPoly = p.iter().map(|c| mod_reduce(c, m)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn poly_add_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    poly_mod(&out, m)
}

fn poly_sub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_mod(&out, m)
}

fn poly_mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    poly_mod(&out, m)
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn poly_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    let mut rem = poly_mod(a, m);
    let db = b.len() - 1;
    let mut quo: ZPoly = Vec::new();
    while rem.len() > db {
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap().clone();
        if quo.len() < shift + 1 {
            quo.resize(shift + 1, BigInt::zero());
        }
        quo[shift] = mod_reduce(&(&quo[shift] + &c), m);
        for (j, cb) in b.iter().enumerate() {
            let idx = shift + j;
            let delta = mod_reduce(&(cb * &c), m);
            rem[idx] = mod_reduce(&(&rem[idx] - delta), m);
        }
        while rem.last().is_some_and(|c| c.is_zero()) {
            rem.pop();
        }
    }
    (quo, rem)
}

fn scalar_inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    // extended Euclid; gcd(a, m) must be 1
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = &s0 - &q * &s1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    debug_assert!(r0.is_one(), "scalar not invertible");
    s0.mod_floor(m)
}

fn lift_mpoly(p: &MPoly) -> ZPoly {
    p.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from f = g*h and s*g + t*h = 1 (mod m) to the
/// same relations mod m^2, with h kept monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m2: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = poly_sub_mod(f, &poly_mul_mod(g, h, m2), m2);
    let se = poly_mul_mod(s, &e, m2);
    let (q, r) = poly_divrem_monic(&se, h, m2);
    let g_new = poly_add_mod(
        &poly_add_mod(g, &poly_mul_mod(t, &e, m2), m2),
        &poly_mul_mod(&q, g, m2),
        m2,
    );
    let h_new = poly_add_mod(h, &r, m2);
    let b = poly_sub_mod(
        &poly_add_mod(
            &poly_mul_mod(s, &g_new, m2),
            &poly_mul_mod(t, &h_new, m2),
            m2,
        ),
        &[BigInt::one()],
        m2,
    );
    let sb = poly_mul_mod(s, &b, m2);
    let (c, d) = poly_divrem_monic(&sb, &h_new, m2);
    let s_new = poly_sub_mod(s, &d, m2);
    let t_new = poly_sub_mod(
        t,
        &poly_add_mod(&poly_mul_mod(t, &b, m2), &poly_mul_mod(&c, &g_new, m2), m2),
        m2,
    );
    (g_new, h_new, s_new, t_new)
}

/// The valuation ring of a completion truncated at l^precision.
#[derive(Debug, Clone)]
pub struct LocalRing {
    pub ell: u64,
    pub precision: u32,
    pub modulus: BigInt,
    /// Monic Hensel lift of local_factor^e, degree e*d; coefficients in
    /// [0, l^precision).
    pub factor: ZPoly,
    pub place: FinitePlace,
}

impl LocalRing {
    pub fn lift(spec: &FieldSpec, place: &FinitePlace, precision: u32) -> Self {
        let ell = place.rational_prime;
        let modulus = BigInt::from(ell).pow(precision);
        let f_int = spec.min_poly();

        // Group the mod-l factorization into (our factor)^e and the rest.
        let ell_big = BigInt::from(ell);
        let group_mod_l = {
            let mut acc: MPoly = vec![1];
            for _ in 0..place.ramification_index {
                acc = polymod::mul(&acc, &place.local_factor, ell);
            }
            acc
        };
        let f_mod_l = polymod::reduce_int_poly(f_int, ell);
        let rest_mod_l = {
            let (q, r) = polymod::divrem(&f_mod_l, &group_mod_l, ell);
            debug_assert!(r.is_empty());
            q
        };

        if rest_mod_l.len() <= 1 {
            // Single factor group: the completion factor is f itself.
            debug_assert_eq!(rest_mod_l, vec![1]);
            return LocalRing {
                ell,
                precision,
                factor: poly_mod(f_int, &modulus),
                modulus,
                place: place.clone(),
            };
        }

        // Bezout cofactors mod l with s*rest + t*group = 1.
        let (mut r0, mut r1) = (rest_mod_l.clone(), group_mod_l.clone());
        let (mut s0, mut s1): (MPoly, MPoly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (MPoly, MPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (qq, rr) = polymod::divrem(&r0, &r1, ell);
            let ss = polymod::sub(&s0, &polymod::mul(&qq, &s1, ell), ell);
            let tt = polymod::sub(&t0, &polymod::mul(&qq, &t1, ell), ell);
            r0 = r1;
            r1 = rr;
            s0 = s1;
            s1 = ss;
            t0 = t1;
            t1 = tt;
        }
        debug_assert_eq!(r0.len(), 1, "factor groups are coprime mod l");
        let inv = polymod::invm(r0[0], ell);
        let scale = |p: &MPoly| -> MPoly { p.iter().map(|&c| polymod::mulm(c, inv, ell)).collect() };
        let s_l = scale(&s0);
        let t_l = scale(&t0);

        // Quadratic lifting: g = rest, h = group (h stays monic).
        let mut g = lift_mpoly(&rest_mod_l);
        let mut h = lift_mpoly(&group_mod_l);
        let mut s = lift_mpoly(&s_l);
        let mut t = lift_mpoly(&t_l);
        let mut current = 1u32;
        while current < precision {
            // Each quadratic step at most doubles the valid precision.
            current = (current * 2).min(precision);
            let m2 = ell_big.pow(current);
            let (g2, h2, s2, t2) = hensel_step(f_int, &g, &h, &s, &t, &m2);
            g = g2;
            h = h2;
            s = s2;
            t = t2;
        }
        let factor = poly_mod(&h, &modulus);
        debug_assert!(factor.last().is_some_and(|c| c.is_one()));
        debug_assert_eq!(
            factor.len() - 1,
            (place.ramification_index * place.residue_degree) as usize
        );
        LocalRing {
            ell,
            precision,
            factor,
            modulus,
            place: place.clone(),
        }
    }

    pub fn local_degree(&self) -> usize {
        self.factor.len() - 1
    }

    pub fn reduce_poly(&self, p: &[BigInt]) -> ZPoly {
        poly_divrem_monic(p, &self.factor, &self.modulus).1
    }

    pub fn add(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        poly_add_mod(a, b, &self.modulus)
    }

    pub fn sub(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        poly_sub_mod(a, b, &self.modulus)
    }

    pub fn mul(&self, a: &ZPoly, b: &ZPoly) -> ZPoly {
        self.reduce_poly(&poly_mul_mod(a, b, &self.modulus))
    }

    pub fn scale(&self, a: &ZPoly, c: &BigInt) -> ZPoly {
        let scaled: Vec<BigInt> = a.iter().map(|x| x * c).collect();
        poly_mod(&scaled, &self.modulus)
    }

    /// Every coefficient divisible by l^k; equivalently the element lies in
    /// P^{e*k} modulo the working precision.
    pub fn is_zero_mod(&self, a: &ZPoly, k: u32) -> bool {
        let lk = BigInt::from(self.ell).pow(k);
        a.iter().all(|c| (c % &lk).is_zero())
    }

    /// Image in the residue field F_{l^d}.
    pub fn residue(&self, a: &ZPoly) -> FqElem {
        let reduced = polymod::reduce_int_poly(a, self.ell);
        polymod::rem(&reduced, &self.place.local_factor, self.ell)
    }

    /// Embedding of a field element whose denominator may involve l; returns
    /// the digit vector and the precision (<= self.precision) to which it is
    /// valid. Fails with NegativeValuation if the element is not P-integral.
    pub fn embed(&self, a: &FieldElement) -> Result<(ZPoly, u32), LocalFieldError> {
        let den = a.denominator();
        let s = if den.is_one() {
            0
        } else {
            int_valuation(&den, self.ell)
        };
        if s >= self.precision {
            return Err(LocalFieldError::PrecisionOverflow);
        }
        let num: Vec<BigInt> = a
            .coords()
            .iter()
            .map(|c| (c * num_rational::BigRational::from(den.clone())).to_integer())
            .collect();
        let mut digits = self.reduce_poly(&num);
        let unit_part = &den / BigInt::from(self.ell).pow(s);
        if !unit_part.is_one() {
            let inv = scalar_inv_mod(&unit_part, &self.modulus);
            digits = self.scale(&digits, &inv);
        }
        if s > 0 {
            let ls = BigInt::from(self.ell).pow(s);
            for d in digits.iter_mut() {
                let (q, r) = d.div_rem(&ls);
                if !r.is_zero() {
                    return Err(LocalFieldError::NegativeValuation);
                }
                *d = q;
            }
        }
        Ok((digits, self.precision - s))
    }

    /// Visits digit vectors (length = local degree, each digit in
    /// [0, l^digit_precision)) in ascending odometer order; stops early when
    /// the visitor returns true and reports whether that happened.
    pub fn for_each_residue(
        &self,
        digit_precision: u32,
        mut visit: impl FnMut(&ZPoly) -> bool,
    ) -> bool {
        let bound = BigInt::from(self.ell).pow(digit_precision);
        let len = self.local_degree();
        let mut digits: ZPoly = vec![BigInt::zero(); len];
        loop {
            let mut trimmed = digits.clone();
            while trimmed.last().is_some_and(|c| c.is_zero()) {
                trimmed.pop();
            }
            if visit(&trimmed) {
                return true;
            }
            // odometer increment, least significant digit first
            let mut i = 0usize;
            loop {
                if i == len {
                    return false;
                }
                digits[i] += 1;
                if digits[i] < bound {
                    break;
                }
                digits[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    pub fn factor_as_zpoly(&self) -> &ZPoly {
        &self.factor
    }
}
