//! Field arithmetic profiles and the prime-pair search.
//!
//! A profile fixes the data the global argument needs: a positive N with
//! O_K[1/N] a principal ideal domain and generators of its unit group. For
//! degrees one and two the engine computes profiles itself (Minkowski bound,
//! per-place principality by bounded generator search, fundamental unit by a
//! minimal-coefficient Pell scan); higher degrees accept user-supplied
//! profiles with norm-based sanity checks.
//!
//! The pair search scans two deterministic candidate pools in ascending
//! canonical order: p ranges over canonical generators of degree-one places,
//! q over odd rational primes that stay prime in O_K. Candidates are
//! evaluated in parallel; the first qualifying element of each pool wins.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localfield::{self, LocalFieldError, SquareVerdict};
use crate::numfield::polymod::is_prime_u64;
use crate::numfield::{
    factor_bigint, parse_element, parse_field, polyq, FieldElement, FieldSpec, FinitePlace,
    NumFieldError,
};
use crate::stacky::StackyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search exhausted: no qualifying pair with norm bound {bound}")]
    SearchExhausted { bound: u64 },
    #[error("profile computation unsupported in degree {0}; supply a profile")]
    UnsupportedDegree(usize),
    #[error("profile error: {0}")]
    Profile(String),
    #[error(transparent)]
    NumField(#[from] NumFieldError),
    #[error(transparent)]
    Local(#[from] LocalFieldError),
    #[error(transparent)]
    Stacky(#[from] StackyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    UserSupplied,
}

/// Everything the global-emptiness argument needs to know about the field.
#[derive(Debug, Clone)]
pub struct FieldArithmeticProfile {
    pub spec: FieldSpec,
    pub minkowski_bound: BigRational,
    pub trivializing_n: BigInt,
    pub unit_generators: Vec<FieldElement>,
    pub provenance: Provenance,
}

/// (n!/n^n) * (4/pi)^{r2} * sqrt(|disc|) as an exact rational upper bound;
/// pi is replaced by the rational lower bound 3.14, which only enlarges the
/// search region.
pub fn minkowski_bound(spec: &FieldSpec) -> BigRational {
    let n = spec.degree() as u64;
    let mut factorial = BigInt::one();
    for i in 2..=n {
        factorial *= BigInt::from(i);
    }
    let mut n_pow = BigInt::one();
    for _ in 0..n {
        n_pow *= BigInt::from(n);
    }
    let mut bound = BigRational::new(factorial, n_pow);
    let four_over_pi = BigRational::new(BigInt::from(400), BigInt::from(314));
    for _ in 0..spec.complex_place_pairs() {
        bound *= &four_over_pi;
    }
    let disc = BigRational::from(spec.discriminant().abs());
    bound * polyq::sqrt_upper_bound(&disc, 8)
}

/// Sort key realizing the canonical candidate order: coordinates weighted
/// from the highest power down, preferring small magnitudes and non-negative
/// entries (so the canonical associate has minimal non-negative second
/// coordinate, ties broken toward a positive leading coordinate).
pub fn canonical_sort_key(e: &FieldElement) -> Vec<(bool, BigRational)> {
    e.coords()
        .iter()
        .rev()
        .map(|c| (c.is_negative(), c.abs()))
        .collect()
}

/// The units of an imaginary quadratic order, by bounded enumeration of the
/// positive definite norm form.
fn imaginary_units(spec: &FieldSpec) -> Vec<FieldElement> {
    let mut out = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            let cand = spec.element_from_int_coords(&[a, b]);
            if cand.is_zero() {
                continue;
            }
            if spec.norm(&cand) == BigRational::one() {
                out.push(cand);
            }
        }
    }
    out
}

fn multiplicative_order(spec: &FieldSpec, u: &FieldElement) -> u32 {
    let mut acc = u.clone();
    for k in 1..=12 {
        if acc == spec.one() {
            return k;
        }
        acc = spec.mul(&acc, u);
    }
    u32::MAX
}

/// Fundamental unit of a real quadratic order Z[theta], found as the unit
/// with minimal positive theta-coordinate: scan b = 1, 2, ... and solve
/// N(a + b*theta) = +-1 for integer a by a perfect-square test on the
/// discriminant. Normalized to the representative greater than 1 at the
/// place of the larger root.
pub fn fundamental_unit(spec: &FieldSpec) -> Result<FieldElement, SearchError> {
    if spec.degree() != 2 || spec.real_places().is_empty() {
        return Err(SearchError::Profile(
            "fundamental unit requires a real quadratic field".into(),
        ));
    }
    let u = spec.min_poly()[1].clone();
    let w = spec.min_poly()[0].clone();
    let delta = &u * &u - BigInt::from(4) * &w;
    let four = BigInt::from(4);
    for b in 1i64..=10_000_000 {
        let bb = BigInt::from(b);
        let mut hits = Vec::new();
        for n in [BigInt::one(), -BigInt::one()] {
            // a^2 - u a b + (w b^2 - n) = 0
            let disc = &delta * &bb * &bb + &four * &n;
            if disc.is_negative() {
                continue;
            }
            let r = disc.sqrt();
            if &r * &r != disc {
                continue;
            }
            for root in [&u * &bb + &r, &u * &bb - &r] {
                if (&root % BigInt::from(2)).is_zero() {
                    let a = root / BigInt::from(2);
                    let cand = spec
                        .element(vec![
                            BigRational::from(a),
                            BigRational::from(bb.clone()),
                        ])
                        .expect("degree 2");
                    debug_assert_eq!(spec.norm(&cand).abs(), BigRational::one());
                    hits.push(normalize_unit_above_one(spec, &cand));
                }
            }
        }
        if hits.is_empty() {
            continue;
        }
        // The minimal theta-coordinate can be shared by the fundamental
        // unit and its square; return the smallest candidate above 1.
        let place = spec.real_places().into_iter().next_back().expect("real place");
        hits.sort_by(|x, y| {
            if x == y {
                return std::cmp::Ordering::Equal;
            }
            match localfield::sign_at(spec, &spec.sub(y, x), &place) {
                Ok(localfield::RealSign::Positive) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            }
        });
        hits.dedup();
        return Ok(hits.into_iter().next().expect("nonempty"));
    }
    Err(SearchError::Profile(
        "fundamental unit search exceeded the desk-scale bound".into(),
    ))
}

/// Among +-eps^{+-1}, returns the one greater than 1 at the last real place
/// (the larger embedding).
fn normalize_unit_above_one(spec: &FieldSpec, eps: &FieldElement) -> FieldElement {
    let place = spec.real_places().into_iter().next_back().expect("real place");
    let one = spec.one();
    let candidates = [
        eps.clone(),
        spec.neg(eps),
        spec.inv(eps).expect("unit"),
        spec.neg(&spec.inv(eps).expect("unit")),
    ];
    for cand in candidates {
        let diff = spec.sub(&cand, &one);
        if diff.is_zero() {
            continue;
        }
        if localfield::sign_at(spec, &diff, &place) == Ok(localfield::RealSign::Positive) {
            return cand;
        }
    }
    unreachable!("one of the four associates exceeds 1");
}

/// All integral elements with |N| = target inside a complete search box,
/// sorted canonically. For imaginary quadratic fields the box is forced by
/// positive definiteness; for real quadratic fields it comes from
/// normalizing by the fundamental unit, so the list contains a generator
/// whenever one exists.
fn norm_form_solutions(
    spec: &FieldSpec,
    target: &BigInt,
    fund_unit: Option<&FieldElement>,
) -> Result<Vec<FieldElement>, SearchError> {
    assert!(target.is_positive());
    match spec.degree() {
        1 => Ok(vec![
            spec.from_integer(target.clone()),
            spec.from_integer(-target.clone()),
        ]),
        2 => {
            let u = spec.min_poly()[1].clone();
            let w = spec.min_poly()[0].clone();
            let delta = &u * &u - BigInt::from(4) * &w;
            let four = BigInt::from(4);
            let mut out = Vec::new();
            let b_bound: BigInt = if delta.is_negative() {
                // (2a - ub)^2 + |delta| b^2 = 4m
                let lim = (BigInt::from(4) * target) / delta.abs();
                lim.sqrt() + 1
            } else {
                let eps = fund_unit.ok_or_else(|| {
                    SearchError::Profile("real quadratic search requires the fundamental unit".into())
                })?;
                // |sigma_i(x)| <= sqrt(m * E) with E an upper bound for the
                // embeddings of the fundamental unit; then
                // |b| = |sigma1 - sigma2|/sqrt(delta) <= 2 sqrt(mE/delta).
                let root_bound = polyq::cauchy_bound(spec.min_poly());
                let coeffs = eps.coords();
                let e_bound = coeffs[0].abs() + coeffs[1].abs() * &root_bound;
                let me = BigRational::from(target.clone()) * e_bound;
                let sigma_bound = polyq::sqrt_upper_bound(&me, 8);
                let sqrt_delta_lower = {
                    let d = BigRational::from(delta.clone());
                    &d / polyq::sqrt_upper_bound(&d, 8)
                };
                let bb = BigRational::from(BigInt::from(2)) * sigma_bound / sqrt_delta_lower;
                bb.ceil().to_integer() + 1
            };
            let mut b = BigInt::zero();
            while b <= b_bound {
                for bb in [b.clone(), -b.clone()] {
                    if bb.is_zero() && !b.is_zero() {
                        continue;
                    }
                    for n in [target.clone(), -target.clone()] {
                        // a^2 - u a b + (w b^2 - n) = 0
                        let disc = &delta * &bb * &bb + &four * &n;
                        if disc.is_negative() {
                            continue;
                        }
                        let r = disc.sqrt();
                        if &r * &r != disc {
                            continue;
                        }
                        for root in [&u * &bb + &r, &u * &bb - &r] {
                            if (&root % BigInt::from(2)).is_zero() {
                                let a = root / BigInt::from(2);
                                let cand = spec
                                    .element(vec![
                                        BigRational::from(a),
                                        BigRational::from(bb.clone()),
                                    ])
                                    .expect("degree 2");
                                if !out.contains(&cand) {
                                    out.push(cand);
                                }
                            }
                        }
                    }
                }
                b += 1;
            }
            out.sort_by_key(canonical_sort_key);
            Ok(out)
        }
        d => Err(SearchError::UnsupportedDegree(d)),
    }
}

/// Canonical generator of P^k if that ideal power is principal.
fn principal_power_generator(
    spec: &FieldSpec,
    place: &FinitePlace,
    k: u32,
    fund_unit: Option<&FieldElement>,
) -> Result<Option<FieldElement>, SearchError> {
    let target = BigInt::from(place.rational_prime)
        .pow(k * place.residue_degree);
    for cand in norm_form_solutions(spec, &target, fund_unit)? {
        if localfield::valuation_at(spec, &cand, place) == Ok(k as i64) {
            // |N| = l^{kd} and v_P = k force the support to be exactly {P}.
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// Product of the rational primes up to the Minkowski bound carrying a
/// non-principal place; inverting them kills the class group.
pub fn trivializing_n(spec: &FieldSpec) -> Result<BigInt, SearchError> {
    if spec.degree() > 2 {
        return Err(SearchError::UnsupportedDegree(spec.degree()));
    }
    let bound = minkowski_bound(spec);
    let limit = bound.floor().to_integer().to_u64().unwrap_or(0);
    let fund = real_quadratic_unit(spec)?;
    let mut n = BigInt::one();
    for ell in 2..=limit {
        if !is_prime_u64(ell) {
            continue;
        }
        let mut non_principal = false;
        for place in spec.places_above(ell)? {
            if principal_power_generator(spec, &place, 1, fund.as_ref())?.is_none() {
                non_principal = true;
            }
        }
        if non_principal {
            n *= BigInt::from(ell);
        }
    }
    Ok(n)
}

fn real_quadratic_unit(spec: &FieldSpec) -> Result<Option<FieldElement>, SearchError> {
    if spec.degree() == 2 && !spec.real_places().is_empty() {
        Ok(Some(fundamental_unit(spec)?))
    } else {
        Ok(None)
    }
}

/// Generators of the unit group of O_K[1/N], torsion included: the sign or
/// torsion generator, the fundamental unit for real quadratic fields, and
/// for each vector of valuations (a_P) in a box [0, R]^S with R killing
/// every place class, a generator of the principal ideal product when one
/// exists. The box construction makes the list generate the whole group.
pub fn unit_generators(
    spec: &FieldSpec,
    trivializing_n: &BigInt,
) -> Result<Vec<FieldElement>, SearchError> {
    if spec.degree() > 2 {
        return Err(SearchError::UnsupportedDegree(spec.degree()));
    }
    let mut gens: Vec<FieldElement> = Vec::new();
    let fund = real_quadratic_unit(spec)?;
    if spec.degree() == 2 && spec.real_places().is_empty() {
        // torsion generator of maximal order
        let units = imaginary_units(spec);
        let max_order = units
            .iter()
            .map(|u| multiplicative_order(spec, u))
            .max()
            .expect("units exist");
        let mut best: Vec<FieldElement> = units
            .into_iter()
            .filter(|u| multiplicative_order(spec, u) == max_order)
            .collect();
        best.sort_by_key(canonical_sort_key);
        gens.push(best.into_iter().next().expect("nonempty"));
    } else {
        gens.push(spec.from_integer(BigInt::from(-1)));
        if let Some(eps) = &fund {
            gens.push(eps.clone());
        }
    }

    if trivializing_n.is_one() {
        return Ok(gens);
    }
    let primes = factor_bigint(trivializing_n)?;
    if spec.degree() == 1 {
        for ell in primes {
            gens.push(spec.from_integer(BigInt::from(ell)));
        }
        return Ok(gens);
    }

    // Degree 2: generators of the S-unit valuation lattice by box search.
    let mut places: Vec<FinitePlace> = Vec::new();
    for ell in &primes {
        places.extend(spec.places_above(*ell)?);
    }
    if places.len() > 4 {
        return Err(SearchError::Profile(
            "too many places above N for the desk-scale lattice search".into(),
        ));
    }
    let mut orders = Vec::new();
    for place in &places {
        let mut found = None;
        for k in 1..=24u32 {
            if principal_power_generator(spec, place, k, fund.as_ref())?.is_some() {
                found = Some(k);
                break;
            }
        }
        let k = found.ok_or_else(|| {
            SearchError::Profile(format!(
                "no principal power of the place above {} within the desk bound",
                place.rational_prime
            ))
        })?;
        orders.push(k);
    }
    let r = orders.iter().fold(1u32, |acc, &k| num_integer::lcm(acc, k));
    let s = places.len();
    let box_size = (r as u64 + 1).pow(s as u32);
    if box_size > 20_000 {
        return Err(SearchError::Profile(
            "the S-unit search box is too large for desk scale".into(),
        ));
    }
    let mut vector = vec![0u32; s];
    'outer: loop {
        // advance odometer (skip the zero vector)
        let mut i = 0;
        loop {
            if i == s {
                break 'outer;
            }
            vector[i] += 1;
            if vector[i] <= r {
                break;
            }
            vector[i] = 0;
            i += 1;
        }
        // search a generator with v_{P_i} = vector[i]
        let mut target = BigInt::one();
        for (place, &a) in places.iter().zip(&vector) {
            target *= BigInt::from(place.rational_prime).pow(a * place.residue_degree);
        }
        for cand in norm_form_solutions(spec, &target, fund.as_ref())? {
            let ok = places
                .iter()
                .zip(&vector)
                .all(|(place, &a)| {
                    localfield::valuation_at(spec, &cand, place) == Ok(a as i64)
                });
            if ok {
                gens.push(cand);
                break;
            }
        }
    }
    Ok(gens)
}

pub fn compute_profile(spec: &FieldSpec) -> Result<FieldArithmeticProfile, SearchError> {
    let n = trivializing_n(spec)?;
    let units = unit_generators(spec, &n)?;
    Ok(FieldArithmeticProfile {
        minkowski_bound: minkowski_bound(spec),
        trivializing_n: n,
        unit_generators: units,
        spec: spec.clone(),
        provenance: Provenance::Computed,
    })
}

/// Norm sanity for profile generators: |N(u)| must factor entirely over the
/// primes dividing N.
fn check_generator_norms(
    spec: &FieldSpec,
    n: &BigInt,
    gens: &[FieldElement],
) -> Result<(), SearchError> {
    if gens.is_empty() {
        return Err(SearchError::Profile("unit generator list is empty".into()));
    }
    let primes = if n.is_one() {
        Vec::new()
    } else {
        factor_bigint(n)?
    };
    for u in gens {
        let norm = spec
            .norm_int(u)
            .map_err(SearchError::from)?
            .abs();
        if norm.is_zero() {
            return Err(SearchError::Profile("zero unit generator".into()));
        }
        let mut rest = norm;
        for ell in &primes {
            while (&rest % BigInt::from(*ell)).is_zero() {
                rest /= BigInt::from(*ell);
            }
        }
        if !rest.is_one() {
            return Err(SearchError::Profile(format!(
                "generator {} has norm not supported on N",
                spec.element_to_string(u)
            )));
        }
    }
    Ok(())
}

pub fn profile_from_parts(
    spec: &FieldSpec,
    trivializing_n: BigInt,
    unit_generators: Vec<FieldElement>,
) -> Result<FieldArithmeticProfile, SearchError> {
    if !trivializing_n.is_positive() {
        return Err(SearchError::Profile("N must be positive".into()));
    }
    check_generator_norms(spec, &trivializing_n, &unit_generators)?;
    Ok(FieldArithmeticProfile {
        minkowski_bound: minkowski_bound(spec),
        trivializing_n,
        unit_generators,
        spec: spec.clone(),
        provenance: Provenance::UserSupplied,
    })
}

/// On-disk profile override: field polynomial, N, and unit generators in the
/// element grammar.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileFile {
    pub field: String,
    pub trivializing_n: String,
    pub unit_generators: Vec<String>,
}

pub fn parse_profile_bytes(bytes: &[u8]) -> Result<FieldArithmeticProfile, SearchError> {
    let file: ProfileFile = serde_json::from_slice(bytes)
        .map_err(|e| SearchError::Profile(format!("malformed profile: {e}")))?;
    let spec = parse_field(&file.field)?;
    let n: BigInt = file
        .trivializing_n
        .parse()
        .map_err(|_| SearchError::Profile("N must be a decimal integer".into()))?;
    let gens = file
        .unit_generators
        .iter()
        .map(|s| parse_element(&spec, s))
        .collect::<Result<Vec<_>, _>>()?;
    profile_from_parts(&spec, n, gens)
}

/// A search candidate: a canonical prime-element generator with its place.
#[derive(Debug, Clone)]
struct Candidate {
    element: FieldElement,
    place: FinitePlace,
    norm: BigInt,
}

fn candidate_pool(
    profile: &FieldArithmeticProfile,
    bound: u64,
    degree_one_only: bool,
) -> Result<Vec<Candidate>, SearchError> {
    let spec = &profile.spec;
    let fund = real_quadratic_unit(spec)?;
    let n_primes = if profile.trivializing_n.is_one() {
        Vec::new()
    } else {
        factor_bigint(&profile.trivializing_n)?
    };
    let mut out = Vec::new();
    for ell in 3..=bound {
        if !is_prime_u64(ell) || n_primes.contains(&ell) {
            continue;
        }
        for place in spec.places_above(ell)? {
            if degree_one_only && place.residue_degree != 1 {
                continue;
            }
            let norm = BigInt::from(ell).pow(place.residue_degree);
            if norm > BigInt::from(bound) {
                continue;
            }
            if let Some(element) =
                principal_power_generator(spec, &place, 1, fund.as_ref())?
            {
                out.push(Candidate {
                    element,
                    place,
                    norm,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.norm.clone(), canonical_sort_key(&a.element))
            .cmp(&(b.norm.clone(), canonical_sort_key(&b.element)))
    });
    Ok(out)
}

/// Odd rational primes that remain prime elements of O_K, ascending.
fn rational_prime_pool(
    profile: &FieldArithmeticProfile,
    bound: u64,
) -> Result<Vec<Candidate>, SearchError> {
    let spec = &profile.spec;
    let n_primes = if profile.trivializing_n.is_one() {
        Vec::new()
    } else {
        factor_bigint(&profile.trivializing_n)?
    };
    let mut out = Vec::new();
    for ell in 3..=bound {
        if !is_prime_u64(ell) || n_primes.contains(&ell) {
            continue;
        }
        let elem = spec.from_integer(BigInt::from(ell));
        if let Ok(Some(place)) = spec.is_prime_element(&elem) {
            out.push(Candidate {
                norm: BigInt::from(ell).pow(place.residue_degree),
                element: elem,
                place,
            });
        }
    }
    Ok(out)
}

/// The first (in canonical order) odd prime element p, supported at a
/// degree-one place coprime to N, at which every unit generator is a square,
/// and then the first odd rational prime element q, coprime to p and N,
/// that is a nonsquare in the completion at p. Candidates are screened in
/// parallel; the selection is by canonical order regardless of scheduling.
pub fn find_prime_pair(
    profile: &FieldArithmeticProfile,
    bound: u64,
) -> Result<(FieldElement, FieldElement), SearchError> {
    let spec = &profile.spec;
    let p_pool = candidate_pool(profile, bound, true)?;
    let p_flags: Vec<bool> = p_pool
        .par_iter()
        .map(|cand| {
            profile.unit_generators.iter().all(|u| {
                matches!(
                    localfield::is_square_at(spec, u, &cand.place),
                    Ok(cert) if cert.verdict == SquareVerdict::Square
                )
            })
        })
        .collect();
    let p_cand = p_pool
        .iter()
        .zip(&p_flags)
        .find(|(_, &ok)| ok)
        .map(|(c, _)| c)
        .ok_or(SearchError::SearchExhausted { bound })?;

    let q_pool = rational_prime_pool(profile, bound)?;
    let q_flags: Vec<bool> = q_pool
        .par_iter()
        .map(|cand| {
            cand.place != p_cand.place
                && matches!(
                    localfield::is_square_at(spec, &cand.element, &p_cand.place),
                    Ok(cert) if cert.verdict == SquareVerdict::Nonsquare
                )
        })
        .collect();
    let q_cand = q_pool
        .iter()
        .zip(&q_flags)
        .find(|(_, &ok)| ok)
        .map(|(c, _)| c)
        .ok_or(SearchError::SearchExhausted { bound })?;

    Ok((p_cand.element.clone(), q_cand.element.clone()))
}
