//! Arithmetic in completions K_v: normalized valuations, residue images,
//! square-class testing with explicit Hensel thresholds, and signs at real
//! places. Verdicts always come with re-checkable witnesses.

pub mod ring;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numfield::polymod::FqElem;
use crate::numfield::polyq;
use crate::numfield::{
    FieldElement, FieldSpec, FinitePlace, NumFieldError, Place, RealPlace,
};
use ring::{int_valuation, LocalRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalFieldError {
    #[error("zero element has no valuation")]
    ZeroElement,
    #[error("element has negative valuation at the place")]
    NegativeValuation,
    #[error("working precision exceeded")]
    PrecisionOverflow,
    #[error(transparent)]
    NumField(#[from] NumFieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealSign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareVerdict {
    Square,
    Nonsquare,
}

/// The re-checkable content behind a square/nonsquare verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareWitness {
    /// s with s^2 = value modulo P^precision (exact when the difference
    /// vanishes identically).
    Root { element: FieldElement },
    /// The valuation is odd.
    OddValuation { valuation: i64 },
    /// Residue image of the unit part is a nonsquare of the residue field
    /// (odd residue characteristic only).
    NonsquareResidue { residue: FqElem },
    /// Exhaustive search modulo l^modulus_exponent found no square root
    /// (even residue characteristic).
    EvenSearchExhausted { modulus_exponent: u32 },
    /// Sign at a real place.
    RealSign { negative: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClassCertificate {
    pub value: FieldElement,
    pub place: Place,
    pub verdict: SquareVerdict,
    pub witness: SquareWitness,
    /// Exponent k: square witnesses satisfy s^2 = value mod P^k, with
    /// k at least 2*e(P|2)*v_P(2) + 1 beyond the valuation of the value.
    pub precision: i64,
}

/// Normalized valuation v_P (a uniformizer has valuation 1).
///
/// The value is read off the l-adic valuation of the resultant of the
/// Hensel-lifted completion factor with the element's numerator: that
/// resultant is the local norm, whose valuation is the residue degree times
/// v_P. Precision is raised until the answer is certain.
pub fn valuation_at(
    spec: &FieldSpec,
    a: &FieldElement,
    place: &FinitePlace,
) -> Result<i64, LocalFieldError> {
    if a.is_zero() {
        return Err(LocalFieldError::ZeroElement);
    }
    let ell = place.rational_prime;
    let den = a.denominator();
    let den_val = if den.is_one() {
        0i64
    } else {
        int_valuation(&den, ell) as i64
    };
    let num: Vec<BigInt> = a
        .coords()
        .iter()
        .map(|c| (c * BigRational::from(den.clone())).to_integer())
        .collect();
    let num_elem = spec
        .element(num.iter().map(|c| BigRational::from(c.clone())).collect())
        .expect("same degree");
    let v_num = integral_valuation(spec, &num_elem, place)?;
    Ok(v_num - place.ramification_index as i64 * den_val)
}

fn integral_valuation(
    spec: &FieldSpec,
    b: &FieldElement,
    place: &FinitePlace,
) -> Result<i64, LocalFieldError> {
    debug_assert!(b.is_integral() && !b.is_zero());
    // Fast path: unit residue.
    if let Some(res) = spec.integral_residue(b, place) {
        if !res.is_empty() {
            return Ok(0);
        }
    }
    let d = place.residue_degree as i64;
    let mut precision = 16u32;
    loop {
        let ring = LocalRing::lift(spec, place, precision);
        let f_lift = polyq::from_int(ring.factor_as_zpoly());
        let r = polyq::resultant(&f_lift, &b.as_poly());
        debug_assert!(r.is_integer());
        let r_int = r.to_integer();
        if !r_int.is_zero() {
            let v = int_valuation(&r_int, place.rational_prime) as i64;
            if v < precision as i64 {
                debug_assert_eq!(v % d, 0, "norm valuation divisible by residue degree");
                return Ok(v / d);
            }
        }
        precision = precision
            .checked_mul(2)
            .filter(|&p| p <= 1 << 14)
            .ok_or(LocalFieldError::PrecisionOverflow)?;
    }
}

/// Image in the residue field; requires v_P(a) >= 0.
pub fn residue_image(
    spec: &FieldSpec,
    a: &FieldElement,
    place: &FinitePlace,
) -> Result<FqElem, LocalFieldError> {
    let den = a.denominator();
    let s = if den.is_one() {
        0
    } else {
        int_valuation(&den, place.rational_prime)
    };
    let ring = LocalRing::lift(spec, place, s + 2);
    let (digits, _) = ring.embed(a)?;
    Ok(ring.residue(&digits))
}

/// A uniformizer of the place: l itself when unramified; the lifted local
/// factor evaluated at theta otherwise (valuation exactly 1 whenever the
/// order is maximal at l, which places_above has already checked).
pub fn uniformizer(spec: &FieldSpec, place: &FinitePlace) -> FieldElement {
    if place.ramification_index == 1 {
        return spec.from_integer(BigInt::from(place.rational_prime));
    }
    let coords: Vec<BigRational> = place
        .local_factor
        .iter()
        .map(|&c| BigRational::from(BigInt::from(c)))
        .collect();
    let p = spec.from_poly(&coords);
    debug_assert_eq!(valuation_at(spec, &p, place), Ok(1));
    p
}

fn pow_signed(
    spec: &FieldSpec,
    a: &FieldElement,
    k: i64,
) -> Result<FieldElement, NumFieldError> {
    if k >= 0 {
        Ok(spec.pow(a, k as u32))
    } else {
        spec.inv(&spec.pow(a, (-k) as u32))
    }
}

/// Hensel threshold beyond the valuation for square testing: 1 at odd
/// places; 2*e*v_P(2) + 3 at even places (a deliberate overshoot of the
/// classical 2*v_P(2) + 1 bound).
pub fn square_threshold(place: &FinitePlace) -> i64 {
    if place.is_even() {
        let e = place.ramification_index as i64;
        2 * e * e + 3
    } else {
        1
    }
}

/// Square-class verdict in K_P with an attached re-checkable witness.
pub fn is_square_at(
    spec: &FieldSpec,
    a: &FieldElement,
    place: &FinitePlace,
) -> Result<SquareClassCertificate, LocalFieldError> {
    if a.is_zero() {
        return Err(LocalFieldError::ZeroElement);
    }
    let v = valuation_at(spec, a, place)?;
    let place_enum = Place::Finite(place.clone());
    if v % 2 != 0 {
        return Ok(SquareClassCertificate {
            value: a.clone(),
            place: place_enum,
            verdict: SquareVerdict::Nonsquare,
            witness: SquareWitness::OddValuation { valuation: v },
            precision: v + 1,
        });
    }
    let pi = uniformizer(spec, place);
    let unit = spec
        .mul(a, &pow_signed(spec, &pi, -v).map_err(LocalFieldError::from)?)
        .clone();
    if !place.is_even() {
        let fq = place.residue_field();
        let r = residue_image(spec, &unit, place)?;
        debug_assert!(!r.is_empty());
        if fq.is_square(&r) {
            let s0 = fq.sqrt(&r).expect("square has a root");
            let s0_elem = spec.from_poly(
                &s0.iter()
                    .map(|&c| BigRational::from(BigInt::from(c)))
                    .collect::<Vec<_>>(),
            );
            let half_pow = pow_signed(spec, &pi, v / 2).map_err(LocalFieldError::from)?;
            let witness = spec.mul(&s0_elem, &half_pow);
            let k = v + 1;
            debug_assert!(verify_root(spec, a, &witness, place, k));
            Ok(SquareClassCertificate {
                value: a.clone(),
                place: place_enum,
                verdict: SquareVerdict::Square,
                witness: SquareWitness::Root { element: witness },
                precision: k,
            })
        } else {
            Ok(SquareClassCertificate {
                value: a.clone(),
                place: place_enum,
                verdict: SquareVerdict::Nonsquare,
                witness: SquareWitness::NonsquareResidue { residue: r },
                precision: v + 1,
            })
        }
    } else {
        // Even residue characteristic: bounded search for a root of the unit
        // part modulo P^{threshold}, scanning representatives mod l^digits.
        let e = place.ramification_index;
        let threshold = square_threshold(place); // 2e^2 + 3
        let digits = (threshold as u32).div_ceil(e);
        let den_margin = {
            let den = unit.denominator();
            if den.is_one() {
                0
            } else {
                int_valuation(&den, place.rational_prime)
            }
        };
        let ring = LocalRing::lift(spec, place, digits + den_margin + 1);
        let (u_digits, valid) = ring.embed(&unit)?;
        debug_assert!(valid >= digits);
        let mut found: Option<Vec<BigInt>> = None;
        ring.for_each_residue(digits, |cand| {
            let sq = ring.mul(cand, cand);
            let diff = ring.sub(&sq, &u_digits);
            if ring.is_zero_mod(&diff, digits) {
                found = Some(cand.clone());
                true
            } else {
                false
            }
        });
        let k = v + (e as i64) * digits as i64;
        match found {
            Some(root_digits) => {
                let root_elem = spec.from_poly(
                    &root_digits
                        .iter()
                        .map(|c| BigRational::from(c.clone()))
                        .collect::<Vec<_>>(),
                );
                let half_pow = pow_signed(spec, &pi, v / 2).map_err(LocalFieldError::from)?;
                let witness = spec.mul(&root_elem, &half_pow);
                debug_assert!(verify_root(spec, a, &witness, place, k));
                Ok(SquareClassCertificate {
                    value: a.clone(),
                    place: place_enum,
                    verdict: SquareVerdict::Square,
                    witness: SquareWitness::Root { element: witness },
                    precision: k,
                })
            }
            None => Ok(SquareClassCertificate {
                value: a.clone(),
                place: place_enum,
                verdict: SquareVerdict::Nonsquare,
                witness: SquareWitness::EvenSearchExhausted {
                    modulus_exponent: digits,
                },
                precision: k,
            }),
        }
    }
}

/// Re-checks s^2 = a mod P^k.
pub fn verify_root(
    spec: &FieldSpec,
    value: &FieldElement,
    root: &FieldElement,
    place: &FinitePlace,
    k: i64,
) -> bool {
    let diff = spec.sub(&spec.mul(root, root), value);
    if diff.is_zero() {
        return true;
    }
    match valuation_at(spec, &diff, place) {
        Ok(v) => v >= k,
        Err(_) => false,
    }
}

/// Full independent re-check of a square-class certificate.
pub fn verify_square_class(spec: &FieldSpec, cert: &SquareClassCertificate) -> bool {
    match (&cert.place, &cert.verdict, &cert.witness) {
        (Place::Finite(place), SquareVerdict::Square, SquareWitness::Root { element }) => {
            let v = match valuation_at(spec, &cert.value, place) {
                Ok(v) => v,
                Err(_) => return false,
            };
            cert.precision >= v + min_square_precision(place)
                && verify_root(spec, &cert.value, element, place, cert.precision)
        }
        (
            Place::Finite(place),
            SquareVerdict::Nonsquare,
            SquareWitness::OddValuation { valuation },
        ) => match valuation_at(spec, &cert.value, place) {
            Ok(v) => v == *valuation && v % 2 != 0,
            Err(_) => false,
        },
        (
            Place::Finite(place),
            SquareVerdict::Nonsquare,
            SquareWitness::NonsquareResidue { residue },
        ) => {
            if place.is_even() {
                return false;
            }
            let recomputed = match is_square_at(spec, &cert.value, place) {
                Ok(c) => c,
                Err(_) => return false,
            };
            recomputed.verdict == SquareVerdict::Nonsquare
                && matches!(
                    &recomputed.witness,
                    SquareWitness::NonsquareResidue { residue: r } if r == residue
                )
        }
        (
            Place::Finite(place),
            SquareVerdict::Nonsquare,
            SquareWitness::EvenSearchExhausted { modulus_exponent },
        ) => {
            if !place.is_even() {
                return false;
            }
            let recomputed = match is_square_at(spec, &cert.value, place) {
                Ok(c) => c,
                Err(_) => return false,
            };
            recomputed.verdict == SquareVerdict::Nonsquare
                && matches!(
                    &recomputed.witness,
                    SquareWitness::EvenSearchExhausted { modulus_exponent: m }
                        if m == modulus_exponent
                )
        }
        (Place::Real(rp), verdict, SquareWitness::RealSign { negative }) => {
            match sign_at(spec, &cert.value, rp) {
                Ok(sign) => {
                    let neg = sign == RealSign::Negative;
                    neg == *negative
                        && (*verdict == SquareVerdict::Nonsquare) == neg
                }
                Err(_) => false,
            }
        }
        _ => false,
    }
}

/// The minimal certificate precision beyond the valuation.
pub fn min_square_precision(place: &FinitePlace) -> i64 {
    if place.is_even() {
        let e = place.ramification_index as i64;
        2 * e * e + 1
    } else {
        1
    }
}

/// Square class at a real place: squares are exactly the positives.
pub fn square_class_at_real(
    spec: &FieldSpec,
    a: &FieldElement,
    rp: &RealPlace,
) -> Result<SquareClassCertificate, LocalFieldError> {
    let sign = sign_at(spec, a, rp)?;
    let negative = sign == RealSign::Negative;
    Ok(SquareClassCertificate {
        value: a.clone(),
        place: Place::Real(rp.clone()),
        verdict: if negative {
            SquareVerdict::Nonsquare
        } else {
            SquareVerdict::Square
        },
        witness: SquareWitness::RealSign { negative },
        precision: 0,
    })
}

/// Sign of the image of the element under the real embedding, decided by
/// interval refinement with exact rational endpoints.
pub fn sign_at(
    spec: &FieldSpec,
    a: &FieldElement,
    rp: &RealPlace,
) -> Result<RealSign, LocalFieldError> {
    if a.is_zero() {
        return Err(LocalFieldError::ZeroElement);
    }
    let g = a.as_poly();
    if g.len() == 1 {
        return Ok(if g[0].is_positive() {
            RealSign::Positive
        } else {
            RealSign::Negative
        });
    }
    if spec.degree() == 1 {
        let root = -BigRational::from(spec.min_poly()[0].clone());
        let val = polyq::eval(&g, &root);
        return Ok(if val.is_positive() {
            RealSign::Positive
        } else {
            RealSign::Negative
        });
    }
    let f = polyq::from_int(spec.min_poly());
    let two = BigRational::from(BigInt::from(2));
    let (mut lo, mut hi) = (rp.lo.clone(), rp.hi.clone());
    loop {
        // |g'| <= sum i*|g_i|*B^{i-1} on [-B, B]
        let b = lo.abs().max(hi.abs());
        let mut deriv_bound = BigRational::zero();
        let mut b_pow = BigRational::one();
        for (i, c) in g.iter().enumerate().skip(1) {
            deriv_bound += BigRational::from(BigInt::from(i)) * c.abs() * &b_pow;
            b_pow *= &b;
        }
        let mid = (&lo + &hi) / &two;
        let val = polyq::eval(&g, &mid);
        let radius = (&hi - &lo) / &two;
        if val.abs() > &deriv_bound * &radius {
            return Ok(if val.is_positive() {
                RealSign::Positive
            } else {
                RealSign::Negative
            });
        }
        let f_lo = polyq::eval(&f, &lo);
        let f_mid = polyq::eval(&f, &mid);
        debug_assert!(!f_mid.is_zero(), "irreducible polynomial has no rational root");
        if f_lo.is_positive() != f_mid.is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}
