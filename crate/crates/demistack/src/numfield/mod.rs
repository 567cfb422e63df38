//! Exact arithmetic in a number field K = Q[x]/(f) presented by a monic
//! irreducible integer polynomial, together with the splitting of rational
//! primes into finite places of the monogenic order Z[theta].
//!
//! The engine works in Z[theta] throughout and checks maximality at every
//! prime it touches with Dedekind's criterion; fields failing the criterion
//! at a needed prime are rejected with a precise error.

pub mod parse;
pub mod polymod;
pub mod polyq;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use polymod::MPoly;
use polyq::{QPoly, ZPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is reducible over the rationals")]
    Reducible,
    #[error("irreducibility could not be decided within the configured search bounds")]
    IrreducibilityUndecided,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero element not allowed here")]
    ZeroElement,
    #[error("unit element not allowed here")]
    UnitElement,
    #[error("element is not integral")]
    NotIntegral,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the desk-scale bound of 10^6")]
    PrimeTooLarge(u64),
    #[error("the order Z[theta] is not maximal at {0}; field unsupported at this prime")]
    OrderNotMaximalAtPrime(u64),
    #[error("coordinate vector has length {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("could not factor norm {0} within desk-scale bounds")]
    NormFactorization(String),
}

/// Residue characteristics stay below this bound; the splitting and
/// enumeration algorithms assume the small-prime regime.
pub const DESK_PRIME_BOUND: u64 = 1_000_000;

/// A number field presented by a monic irreducible integer polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    min_poly: ZPoly,
    degree: usize,
    discriminant: BigInt,
    /// Z[theta] is treated as the full ring of integers; maximality is
    /// re-verified per prime via Dedekind's criterion wherever it matters.
    pub monogenic_assumed: bool,
}

/// An element of K in the power basis 1, theta, ..., theta^{n-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Least common multiple of coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        let mut den = BigInt::one();
        for c in &self.coords {
            den = num_integer::lcm(den, c.denom().clone());
        }
        den
    }

    pub fn as_poly(&self) -> QPoly {
        let mut p = self.coords.clone();
        polyq::trim(&mut p);
        p
    }

    /// Integer coefficient vector of an integral element (untrimmed).
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coords.iter().map(|c| c.to_integer()).collect())
    }
}

/// A finite place of K: a rational prime together with the monic irreducible
/// local factor of f modulo that prime, its ramification index and residue
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePlace {
    pub rational_prime: u64,
    pub local_factor: MPoly,
    pub ramification_index: u32,
    pub residue_degree: u32,
}

impl FinitePlace {
    pub fn residue_field(&self) -> polymod::ResidueField {
        polymod::ResidueField::new(self.rational_prime, self.local_factor.clone())
    }

    pub fn is_even(&self) -> bool {
        self.rational_prime == 2
    }
}

/// A real place: an isolating interval around one real root of f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealPlace {
    pub lo: BigRational,
    pub hi: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Finite(FinitePlace),
    Real(RealPlace),
}

pub fn parse_field(poly_text: &str) -> Result<FieldSpec, NumFieldError> {
    let coeffs = parse::parse_poly(poly_text, 'x')?;
    FieldSpec::new(coeffs)
}

pub fn parse_element(spec: &FieldSpec, text: &str) -> Result<FieldElement, NumFieldError> {
    let coeffs = parse::parse_poly(text, 't')?;
    let q = polyq::from_int(&coeffs);
    Ok(spec.from_poly(&q))
}

impl FieldSpec {
    pub fn new(min_poly: ZPoly) -> Result<Self, NumFieldError> {
        let mut p = min_poly;
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        if p.len() < 2 {
            return Err(NumFieldError::Parse("degree must be at least 1".into()));
        }
        if !p.last().unwrap().is_one() {
            return Err(NumFieldError::NotMonic);
        }
        check_irreducible(&p)?;
        let discriminant = polyq::discriminant_monic(&p);
        Ok(FieldSpec {
            degree: p.len() - 1,
            min_poly: p,
            discriminant,
            monogenic_assumed: true,
        })
    }

    pub fn rationals() -> Self {
        FieldSpec::new(vec![BigInt::zero(), BigInt::one()]).expect("Q is a valid field")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &ZPoly {
        &self.min_poly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn min_poly_text(&self) -> String {
        parse::poly_to_string(&self.min_poly, 'x')
    }

    // ---- element construction ----

    pub fn element(&self, coords: Vec<BigRational>) -> Result<FieldElement, NumFieldError> {
        if coords.len() != self.degree {
            return Err(NumFieldError::DegreeMismatch {
                expected: self.degree,
                got: coords.len(),
            });
        }
        Ok(FieldElement { coords })
    }

    pub fn from_poly(&self, p: &QPoly) -> FieldElement {
        let f = polyq::from_int(&self.min_poly);
        let mut r = polyq::rem(p, &f);
        r.resize(self.degree, BigRational::zero());
        FieldElement { coords: r }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![BigRational::zero(); self.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_integer(BigInt::one())
    }

    pub fn from_integer(&self, n: BigInt) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = BigRational::from(n);
        FieldElement { coords }
    }

    pub fn from_rational(&self, r: BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r;
        FieldElement { coords }
    }

    /// theta, the class of x (zero in the degree-1 case, where theta is the
    /// rational root of the defining polynomial).
    pub fn generator(&self) -> FieldElement {
        if self.degree == 1 {
            return self.from_rational(-BigRational::from(self.min_poly[0].clone()));
        }
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[1] = BigRational::one();
        FieldElement { coords }
    }

    pub fn element_from_int_coords(&self, ints: &[i64]) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        for (i, &v) in ints.iter().enumerate().take(self.degree) {
            coords[i] = BigRational::from(BigInt::from(v));
        }
        FieldElement { coords }
    }

    pub fn element_to_string(&self, a: &FieldElement) -> String {
        let ints: Vec<BigInt>;
        if a.is_integral() {
            ints = a.coords.iter().map(|c| c.to_integer()).collect();
            parse::poly_to_string(&ints, 't')
        } else {
            let parts: Vec<String> = a
                .coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("({c})*t^{i}"))
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join("+")
            }
        }
    }

    // ---- arithmetic ----

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        FieldElement { coords }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x - y)
            .collect();
        FieldElement { coords }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&polyq::mul(&a.as_poly(), &b.as_poly()))
    }

    pub fn mul_int(&self, a: &FieldElement, n: &BigInt) -> FieldElement {
        let s = BigRational::from(n.clone());
        FieldElement {
            coords: a.coords.iter().map(|x| x * &s).collect(),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, NumFieldError> {
        if a.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        let f = polyq::from_int(&self.min_poly);
        let (g, s, _) = polyq::xgcd(&a.as_poly(), &f);
        debug_assert_eq!(g.len(), 1, "min poly irreducible, gcd must be 1");
        Ok(self.from_poly(&s))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, NumFieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, exp: u32) -> FieldElement {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Field norm N_{K/Q}, computed as the resultant of the minimal
    /// polynomial with the representative polynomial of the element.
    pub fn norm(&self, a: &FieldElement) -> BigRational {
        let p = a.as_poly();
        if p.is_empty() {
            return BigRational::zero();
        }
        let f = polyq::from_int(&self.min_poly);
        polyq::resultant(&f, &p)
    }

    pub fn norm_int(&self, a: &FieldElement) -> Result<BigInt, NumFieldError> {
        if !a.is_integral() {
            return Err(NumFieldError::NotIntegral);
        }
        let n = self.norm(a);
        debug_assert!(n.is_integer());
        Ok(n.to_integer())
    }

    pub fn is_unit(&self, a: &FieldElement) -> Result<bool, NumFieldError> {
        Ok(self.norm_int(a)?.abs().is_one())
    }

    /// "Odd" means the support is disjoint from the places above 2, which
    /// for an integral element is equivalent to an odd norm.
    pub fn is_odd_element(&self, a: &FieldElement) -> Result<bool, NumFieldError> {
        let n = self.norm_int(a)?;
        if n.is_zero() {
            return Err(NumFieldError::ZeroElement);
        }
        Ok(num_integer::Integer::is_odd(&n))
    }

    // ---- places ----

    pub fn factor_min_poly_mod(&self, ell: u64) -> Result<Vec<(MPoly, u32)>, NumFieldError> {
        if !polymod::is_prime_u64(ell) {
            return Err(NumFieldError::NotPrime(ell));
        }
        if ell > DESK_PRIME_BOUND {
            return Err(NumFieldError::PrimeTooLarge(ell));
        }
        Ok(polymod::factor(&self.min_poly, ell))
    }

    pub fn places_above(&self, ell: u64) -> Result<Vec<FinitePlace>, NumFieldError> {
        if !polymod::is_prime_u64(ell) {
            return Err(NumFieldError::NotPrime(ell));
        }
        if ell > DESK_PRIME_BOUND {
            return Err(NumFieldError::PrimeTooLarge(ell));
        }
        if !polymod::dedekind_maximal_at(&self.min_poly, ell) {
            return Err(NumFieldError::OrderNotMaximalAtPrime(ell));
        }
        let factors = polymod::factor(&self.min_poly, ell);
        let places: Vec<FinitePlace> = factors
            .into_iter()
            .map(|(g, e)| FinitePlace {
                rational_prime: ell,
                residue_degree: (g.len() - 1) as u32,
                local_factor: g,
                ramification_index: e,
            })
            .collect();
        debug_assert_eq!(
            places
                .iter()
                .map(|p| (p.ramification_index * p.residue_degree) as usize)
                .sum::<usize>(),
            self.degree
        );
        Ok(places)
    }

    pub fn real_places(&self) -> Vec<RealPlace> {
        polyq::isolate_real_roots(&self.min_poly)
            .into_iter()
            .map(|(lo, hi)| RealPlace { lo, hi })
            .collect()
    }

    /// Number of conjugate pairs of complex embeddings.
    pub fn complex_place_pairs(&self) -> usize {
        (self.degree - self.real_places().len()) / 2
    }

    /// Residue image of an integral element at a place (zero test only needs
    /// integer coordinates; the general map lives in the local field layer).
    pub fn integral_residue(&self, a: &FieldElement, place: &FinitePlace) -> Option<MPoly> {
        let ints = a.integer_coords()?;
        let ell = place.rational_prime;
        let reduced = polymod::reduce_int_poly(&ints, ell);
        Some(polymod::rem(&reduced, &place.local_factor, ell))
    }

    /// The finite places where an integral element has positive valuation.
    pub fn ideal_support(&self, a: &FieldElement) -> Result<Vec<FinitePlace>, NumFieldError> {
        if a.is_zero() {
            return Err(NumFieldError::ZeroElement);
        }
        if !a.is_integral() {
            return Err(NumFieldError::NotIntegral);
        }
        let norm = self.norm_int(a)?.abs();
        if norm.is_one() {
            return Ok(Vec::new());
        }
        let primes = factor_bigint(&norm)?;
        let mut out = Vec::new();
        for ell in primes {
            for place in self.places_above(ell)? {
                let res = self.integral_residue(a, &place).expect("integral");
                if res.is_empty() {
                    out.push(place);
                }
            }
        }
        out.sort_by(place_order_key);
        Ok(out)
    }

    /// Some(place) iff the element generates a prime ideal; the place is the
    /// unique member of its support and the valuation there is 1, which for
    /// a single-place support is equivalent to |N(a)| = l^d.
    pub fn is_prime_element(
        &self,
        a: &FieldElement,
    ) -> Result<Option<FinitePlace>, NumFieldError> {
        if a.is_zero() {
            return Err(NumFieldError::ZeroElement);
        }
        if !a.is_integral() {
            return Err(NumFieldError::NotIntegral);
        }
        let norm = self.norm_int(a)?.abs();
        if norm.is_one() {
            return Err(NumFieldError::UnitElement);
        }
        let support = self.ideal_support(a)?;
        if support.len() != 1 {
            return Ok(None);
        }
        let place = support.into_iter().next().unwrap();
        let expected = BigInt::from(place.rational_prime).pow(place.residue_degree);
        if norm == expected {
            Ok(Some(place))
        } else {
            Ok(None)
        }
    }

    /// Square root within K, if one exists. Supported for degrees 1 and 2;
    /// higher degrees are outside the computed-profile range of the engine.
    pub fn sqrt_in_field(&self, u: &FieldElement) -> Result<Option<FieldElement>, NumFieldError> {
        if u.is_zero() {
            return Ok(Some(self.zero()));
        }
        match self.degree {
            1 => {
                let r = &u.coords[0];
                if r.is_negative() {
                    return Ok(None);
                }
                let ns = r.numer().sqrt();
                let ds = r.denom().sqrt();
                if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
                    Ok(Some(self.from_rational(BigRational::new(ns, ds))))
                } else {
                    Ok(None)
                }
            }
            2 => {
                // Solve (c + d*theta)^2 = a + b*theta with theta^2 = -f1*theta - f0.
                let f0 = BigRational::from(self.min_poly[0].clone());
                let f1 = BigRational::from(self.min_poly[1].clone());
                let a = u.coords[0].clone();
                let b = u.coords[1].clone();
                let two = BigRational::from(BigInt::from(2));
                let check = |c: &BigRational, d: &BigRational| -> Option<FieldElement> {
                    let cand = FieldElement {
                        coords: vec![c.clone(), d.clone()],
                    };
                    if self.mul(&cand, &cand) == *u {
                        Some(cand)
                    } else {
                        None
                    }
                };
                // d = 0 branch: c^2 = a, b must be 0.
                if b.is_zero() {
                    if let Some(c) = rational_sqrt(&a) {
                        return Ok(check(&c, &BigRational::zero()));
                    }
                }
                // expansion: (c+d t)^2 = c^2 - d^2 f0 + (2cd - d^2 f1) t
                // b = 2cd - d^2 f1; if d != 0: c = (b + d^2 f1) / (2d), and
                // substituting into a = c^2 - d^2 f0 gives a quadratic in d^2.
                // (f1^2 - 4 f0) D^2 + (2 b f1 - 4 a) D + b^2 = 0 with D = d^2.
                let qa = &f1 * &f1 - BigRational::from(BigInt::from(4)) * &f0;
                let qb = &two * &b * &f1 - BigRational::from(BigInt::from(4)) * &a;
                let qc = &b * &b;
                for d2 in rational_quadratic_roots(&qa, &qb, &qc) {
                    if d2.is_negative() || d2.is_zero() {
                        continue;
                    }
                    if let Some(d) = rational_sqrt(&d2) {
                        for dd in [d.clone(), -d] {
                            if dd.is_zero() {
                                continue;
                            }
                            let c = (&b + &d2 * &f1) / (&two * &dd);
                            if let Some(found) = check(&c, &dd) {
                                return Ok(Some(found));
                            }
                        }
                    }
                }
                Ok(None)
            }
            d => Err(NumFieldError::Parse(format!(
                "square roots in degree-{d} fields are not supported"
            ))),
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

/// Rational roots of a*x^2 + b*x + c (a may be zero).
fn rational_quadratic_roots(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Vec<BigRational> {
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let four = BigRational::from(BigInt::from(4));
    let two = BigRational::from(BigInt::from(2));
    let disc = b * b - four * a * c;
    match rational_sqrt(&disc) {
        None => Vec::new(),
        Some(s) => {
            let r1 = (-b + &s) / (&two * a);
            let r2 = (-b - &s) / (&two * a);
            if r1 == r2 {
                vec![r1]
            } else {
                vec![r1, r2]
            }
        }
    }
}

pub fn place_order_key(a: &FinitePlace, b: &FinitePlace) -> std::cmp::Ordering {
    (a.rational_prime, &a.local_factor, a.ramification_index).cmp(&(
        b.rational_prime,
        &b.local_factor,
        b.ramification_index,
    ))
}

/// Trial-division factorization of a positive integer, returning the sorted
/// distinct prime factors. Desk-scale norms only.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<u64>, NumFieldError> {
    let mut n = n.clone();
    assert!(n.is_positive());
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        if (&n % d).is_zero() {
            out.push(d);
            while (&n % d).is_zero() {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
        if d > 10_000_000 {
            return Err(NumFieldError::NormFactorization(n.to_string()));
        }
    }
    if n > BigInt::one() {
        let last = n
            .to_u64()
            .ok_or_else(|| NumFieldError::NormFactorization(n.to_string()))?;
        out.push(last);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Irreducibility over Q: rational root test, degree-pattern intersection
/// over factorizations modulo the first primes of good reduction, then a
/// deterministic exhaustive factor search for low degrees.
fn check_irreducible(f: &ZPoly) -> Result<(), NumFieldError> {
    let n = f.len() - 1;
    if n == 1 {
        return Ok(());
    }
    let fq = polyq::from_int(f);
    // Repeated factors make the polynomial reducible for degree >= 2.
    if polyq::gcd(&fq, &polyq::derivative(&fq)).len() > 1 {
        return Err(NumFieldError::Reducible);
    }
    if f[0].is_zero() {
        return Err(NumFieldError::Reducible); // x divides
    }
    // Rational (hence integer) roots divide the constant term.
    let c0 = f[0].abs();
    let divisors = divisors_of(&c0);
    if let Some(divs) = &divisors {
        for d in divs {
            for cand in [d.clone(), -d.clone()] {
                if polyq::eval(&fq, &BigRational::from(cand)).is_zero() {
                    return Err(NumFieldError::Reducible);
                }
            }
        }
        if n <= 3 {
            return Ok(()); // a reducible cubic or quadratic has a linear factor
        }
    }

    // Degree-pattern intersection: a proper factor of degree d must be
    // expressible as a subset sum of the factor degrees modulo every prime
    // of good reduction, so an empty intersection proves irreducibility.
    let disc = polyq::discriminant_monic(f);
    let mut allowed: Option<Vec<bool>> = None;
    let mut good_primes = 0usize;
    let mut ell = 2u64;
    let max_rounds = if n <= 4 { 10 } else { 40 };
    while good_primes < max_rounds {
        if polymod::is_prime_u64(ell) && !(&disc % BigInt::from(ell)).is_zero() {
            good_primes += 1;
            let degrees: Vec<usize> = polymod::factor(f, ell)
                .into_iter()
                .map(|(g, _)| g.len() - 1)
                .collect();
            let mut reach = vec![false; n + 1];
            reach[0] = true;
            for d in degrees {
                for i in (0..=(n - d)).rev() {
                    if reach[i] {
                        reach[i + d] = true;
                    }
                }
            }
            let pattern: Vec<bool> = (0..=n)
                .map(|d| d > 0 && d < n && reach[d])
                .collect();
            allowed = Some(match allowed {
                None => pattern,
                Some(prev) => prev
                    .iter()
                    .zip(&pattern)
                    .map(|(&a, &b)| a && b)
                    .collect(),
            });
            if allowed.as_ref().unwrap().iter().all(|&x| !x) {
                return Ok(());
            }
        }
        ell += 1;
    }

    // Bounded search for a monic quadratic factor; for a quartic with no
    // rational root this decides the question completely.
    if let Some(divs) = &divisors {
        if n == 4 {
            return if has_quadratic_factor_quartic(f, divs) {
                Err(NumFieldError::Reducible)
            } else {
                Ok(())
            };
        }
        if n == 5 {
            // deg-5 factors split as (1,4) or (2,3); no root and no quadratic
            // factor therefore proves irreducibility.
            return match has_quadratic_factor_general(f, divs) {
                Some(true) => Err(NumFieldError::Reducible),
                Some(false) => Ok(()),
                None => Err(NumFieldError::IrreducibilityUndecided),
            };
        }
        if has_quadratic_factor_general(f, divs) == Some(true) {
            return Err(NumFieldError::Reducible);
        }
    }
    Err(NumFieldError::IrreducibilityUndecided)
}

fn divisors_of(n: &BigInt) -> Option<Vec<BigInt>> {
    let primes = factor_bigint(n).ok()?;
    let mut rest = n.clone();
    let mut pairs = Vec::new();
    for p in primes {
        let mut k = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            k += 1;
        }
        pairs.push((BigInt::from(p), k));
    }
    if !rest.is_one() {
        return None;
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in pairs {
        let mut next = Vec::new();
        for d in &divs {
            let mut acc = d.clone();
            for _ in 0..=k {
                next.push(acc.clone());
                acc *= &p;
            }
        }
        divs = next;
        if divs.len() > 100_000 {
            return None;
        }
    }
    divs.sort();
    divs.dedup();
    Some(divs)
}

/// Exact decision for quartics: search monic quadratic factor pairs through
/// the divisor pairs of the constant term.
fn has_quadratic_factor_quartic(f: &ZPoly, divisors: &[BigInt]) -> bool {
    let c0 = &f[0];
    let c1 = &f[1];
    let c2 = &f[2];
    let c3 = &f[3];
    let four = BigInt::from(4);
    for b in divisors.iter().flat_map(|d| [d.clone(), -d.clone()]) {
        let d = c0 / &b;
        // a + c = c3, a*c = c2 - b - d, a*d + b*c = c1
        let s = c3.clone();
        let prod = c2 - &b - &d;
        let disc = &s * &s - &four * &prod;
        if disc.is_negative() {
            continue;
        }
        let r = disc.sqrt();
        if &r * &r != disc {
            continue;
        }
        for root in [(&s + &r), (&s - &r)] {
            if (&root % BigInt::from(2)).is_zero() {
                let a = root / BigInt::from(2);
                let c = &s - &a;
                if &a * &d + &b * &c == *c1 {
                    return true;
                }
            }
        }
    }
    false
}

/// Bounded search for a monic quadratic factor of any degree, using the
/// Cauchy bound on roots to cap the linear coefficient. Returns None when
/// the search region exceeds the desk-scale budget and the question stays
/// open.
fn has_quadratic_factor_general(f: &ZPoly, divisors: &[BigInt]) -> Option<bool> {
    let bound = polyq::cauchy_bound(f);
    let b_max = (&bound * &bound).ceil().to_integer();
    let a_max = (bound * BigRational::from(BigInt::from(2))).ceil().to_integer();
    let a_lim = a_max.to_i64()?;
    let candidates = (divisors.len() as u64).checked_mul(2 * a_lim as u64 + 1)?;
    if candidates > 2_000_000 {
        return None;
    }
    let fq = polyq::from_int(f);
    for b in divisors.iter().flat_map(|d| [d.clone(), -d.clone()]) {
        if b.abs() > b_max {
            continue;
        }
        for a in -a_lim..=a_lim {
            let cand = vec![
                BigRational::from(b.clone()),
                BigRational::from(BigInt::from(a)),
                BigRational::one(),
            ];
            if polyq::rem(&fq, &cand).is_empty() {
                return Some(true);
            }
        }
    }
    Some(false)
}
