//! The quotient-conic stacky curve model attached to a pair of odd coprime
//! prime elements (p, q): its genus, the twist family classified by unit
//! square classes, explicit local integral points at every place, and the
//! global-emptiness verdict that certifies a local-global violation.
//!
//! The verdict vocabulary is {Empty, Inconclusive}: the engine proves
//! emptiness or abstains; it never claims that integral points exist.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hilbert::{self, HilbertError, HilbertValue};
use crate::localfield::{
    self, LocalFieldError, SquareClassCertificate, SquareVerdict,
};
use crate::numfield::{
    factor_bigint, FieldElement, FieldSpec, FinitePlace, NumFieldError, Place,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StackyError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("localized ring is not certified to be a principal ideal domain")]
    NotPid,
    #[error("operation unsupported in degree {0}")]
    UnsupportedDegree(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("global emptiness check was inconclusive: {0}")]
    GlobalCheckInconclusive(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Local(#[from] LocalFieldError),
    #[error(transparent)]
    NumField(#[from] NumFieldError),
}

/// Stabilizer data of a stacky curve: coarse genus plus (order, degree) per
/// stacky point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationDatum {
    pub coarse_genus: u32,
    pub stacky_points: Vec<(u32, u32)>,
}

/// g = coarse + (1/2) * sum (1 - 1/order) * degree, exactly.
pub fn genus(r: &RamificationDatum) -> BigRational {
    let mut g = BigRational::from(BigInt::from(r.coarse_genus));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for &(order, degree) in &r.stacky_points {
        assert!(order >= 2 && degree >= 1);
        let term = BigRational::one()
            - BigRational::new(BigInt::one(), BigInt::from(order));
        g += &half * term * BigRational::from(BigInt::from(degree));
    }
    g
}

/// The model X_(p,q): the mu_2 quotient of the conic z^2 = p*x^2 + q*y^2
/// for odd coprime prime elements p and q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackyCurveModel {
    spec: FieldSpec,
    p: FieldElement,
    q: FieldElement,
    place_of_p: FinitePlace,
    place_of_q: FinitePlace,
}

impl StackyCurveModel {
    pub fn new(
        spec: FieldSpec,
        p: FieldElement,
        q: FieldElement,
    ) -> Result<Self, StackyError> {
        let place_of_p = spec
            .is_prime_element(&p)
            .map_err(|e| StackyError::InvalidModel(format!("p: {e}")))?
            .ok_or_else(|| StackyError::InvalidModel("p is not a prime element".into()))?;
        let place_of_q = spec
            .is_prime_element(&q)
            .map_err(|e| StackyError::InvalidModel(format!("q: {e}")))?
            .ok_or_else(|| StackyError::InvalidModel("q is not a prime element".into()))?;
        if place_of_p == place_of_q {
            return Err(StackyError::InvalidModel(
                "p and q share their supporting place; the pair must be coprime".into(),
            ));
        }
        if place_of_p.is_even() || place_of_q.is_even() {
            return Err(StackyError::InvalidModel(
                "p and q must be odd (supports disjoint from the places above 2)".into(),
            ));
        }
        Ok(StackyCurveModel {
            spec,
            p,
            q,
            place_of_p,
            place_of_q,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> &FieldElement {
        &self.p
    }

    pub fn q(&self) -> &FieldElement {
        &self.q
    }

    pub fn place_of_p(&self) -> &FinitePlace {
        &self.place_of_p
    }

    pub fn place_of_q(&self) -> &FinitePlace {
        &self.place_of_q
    }

    /// The stacky locus is z = 0: two geometric points, each with stabilizer
    /// of order 2, on a coarse space of genus 0.
    pub fn ramification(&self) -> RamificationDatum {
        RamificationDatum {
            coarse_genus: 0,
            stacky_points: vec![(2, 1), (2, 1)],
        }
    }

    /// Always the rational 1/2, via the genus formula.
    pub fn model_genus(&self) -> BigRational {
        genus(&self.ramification())
    }

    pub fn verify_local_everywhere(
        &self,
        extra: &[Place],
    ) -> Result<LocalPointTable, StackyError> {
        local_table(&self.spec, &self.p, &self.q, extra)
    }

    pub fn verify_global_empty(
        &self,
        trivializing_n: &BigInt,
        units: &[FieldElement],
    ) -> Result<GlobalVerdict, StackyError> {
        verify_global_empty(self, trivializing_n, units)
    }
}

/// t*z^2 - p*x^2 - q*y^2 evaluated exactly in K.
pub fn twisted_form(
    spec: &FieldSpec,
    t: &FieldElement,
    p: &FieldElement,
    q: &FieldElement,
    point: &(FieldElement, FieldElement, FieldElement),
) -> FieldElement {
    let (x, y, z) = point;
    let tz = spec.mul(t, &spec.mul(z, z));
    let px = spec.mul(p, &spec.mul(x, x));
    let qy = spec.mul(q, &spec.mul(y, y));
    spec.sub(&spec.sub(&tz, &px), &qy)
}

/// A twist of the model's conic by a unit square class: the equation
/// t*z^2 = p*x^2 + q*y^2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedConic {
    pub model: StackyCurveModel,
    pub t: FieldElement,
}

impl TwistedConic {
    pub fn new(model: StackyCurveModel, t: FieldElement) -> Self {
        TwistedConic { model, t }
    }

    /// t*z^2 - p*x^2 - q*y^2 at a point, exactly.
    pub fn evaluate(&self, point: &(FieldElement, FieldElement, FieldElement)) -> FieldElement {
        twisted_form(
            self.model.spec(),
            &self.t,
            self.model.p(),
            self.model.q(),
            point,
        )
    }
}

/// Which element of the pair twists the conic in a local certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistTag {
    ByP,
    ByQ,
}

/// An explicit integral point on a twisted conic at one place. The rule
/// points (0:1:1) and (1:0:1) satisfy their equations exactly in O_K, so the
/// precision field is None (exact); finite-precision points would carry the
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPointCertificate {
    pub place: Place,
    pub twist: TwistTag,
    pub twist_value: FieldElement,
    pub point: (FieldElement, FieldElement, FieldElement),
    pub precision: Option<i64>,
}

pub const GENERIC_RULE: &str = "chevalley-warning-smooth-lifting";

/// Local verdict table: explicit certificates on the exceptional set S
/// (real places and divisors of 2pq) plus any requested extras; all other
/// places are covered by the recorded generic rule (a smooth conic over O_v
/// has a residue-field point and lifts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPointTable {
    pub entries: Vec<LocalPointCertificate>,
    pub generic_rule: String,
}

/// Certificate for one place, following the twist rule: at real places and
/// places away from q, twist by q and use (0:1:1); at places dividing q
/// (hence away from p), twist by p and use (1:0:1).
pub fn local_point_certificate(
    spec: &FieldSpec,
    p: &FieldElement,
    q: &FieldElement,
    place: &Place,
) -> Result<LocalPointCertificate, StackyError> {
    let divides_q = match place {
        Place::Real(_) => false,
        Place::Finite(fp) => localfield::valuation_at(spec, q, fp)? > 0,
    };
    let (tag, t, point) = if !divides_q {
        (
            TwistTag::ByQ,
            q.clone(),
            (spec.zero(), spec.one(), spec.one()),
        )
    } else {
        if let Place::Finite(fp) = place {
            if localfield::valuation_at(spec, p, fp)? > 0 {
                return Err(StackyError::PreconditionViolated(
                    "p and q share a place; the pair is not coprime".into(),
                ));
            }
        }
        (
            TwistTag::ByP,
            p.clone(),
            (spec.one(), spec.zero(), spec.one()),
        )
    };
    let cert = LocalPointCertificate {
        place: place.clone(),
        twist: tag,
        twist_value: t,
        point,
        precision: None,
    };
    debug_assert!(verify_local_certificate(spec, p, q, &cert));
    Ok(cert)
}

/// Independent re-check of a single local certificate: the twist value is
/// the right element and a unit at the place, the point is primitive, and
/// the twisted equation holds exactly.
pub fn verify_local_certificate(
    spec: &FieldSpec,
    p: &FieldElement,
    q: &FieldElement,
    cert: &LocalPointCertificate,
) -> bool {
    let expected_value = match cert.twist {
        TwistTag::ByP => p,
        TwistTag::ByQ => q,
    };
    if &cert.twist_value != expected_value {
        return false;
    }
    if twisted_form(spec, &cert.twist_value, p, q, &cert.point) != spec.zero() {
        return false;
    }
    let (x, y, z) = &cert.point;
    match &cert.place {
        Place::Real(_) => {
            // the twist value need only be nonzero; the point nontrivial
            !cert.twist_value.is_zero() && !(x.is_zero() && y.is_zero() && z.is_zero())
        }
        Place::Finite(fp) => {
            if localfield::valuation_at(spec, &cert.twist_value, fp) != Ok(0) {
                return false;
            }
            // rule coherence: twist by q away from q, by p at places over q
            let divides_q = match localfield::valuation_at(spec, q, fp) {
                Ok(v) => v > 0,
                Err(_) => return false,
            };
            let expected_tag = if divides_q { TwistTag::ByP } else { TwistTag::ByQ };
            if cert.twist != expected_tag {
                return false;
            }
            // primitivity: some coordinate is a unit at the place
            [x, y, z].iter().any(|c| {
                !c.is_zero() && localfield::valuation_at(spec, c, fp) == Ok(0)
            })
        }
    }
}

fn place_sort_key(place: &Place) -> (u8, u64, Vec<u64>, BigRational) {
    match place {
        Place::Finite(fp) => (
            0,
            fp.rational_prime,
            fp.local_factor.clone(),
            BigRational::zero(),
        ),
        Place::Real(rp) => (1, 0, Vec::new(), rp.lo.clone()),
    }
}

/// Exceptional set S: all real places plus the finite places dividing 2pq.
pub fn exceptional_set(
    spec: &FieldSpec,
    p: &FieldElement,
    q: &FieldElement,
) -> Result<Vec<Place>, StackyError> {
    let two_pq = spec.mul_int(&spec.mul(p, q), &BigInt::from(2));
    let mut places: Vec<Place> = spec
        .ideal_support(&two_pq)?
        .into_iter()
        .map(Place::Finite)
        .collect();
    places.extend(spec.real_places().into_iter().map(Place::Real));
    places.sort_by_key(place_sort_key);
    Ok(places)
}

fn check_coprime_pair(
    spec: &FieldSpec,
    p: &FieldElement,
    q: &FieldElement,
) -> Result<(), StackyError> {
    if p.is_zero() || q.is_zero() {
        return Err(StackyError::InvalidModel("pair elements must be nonzero".into()));
    }
    if !p.is_integral() || !q.is_integral() {
        return Err(StackyError::InvalidModel("pair elements must be integral".into()));
    }
    let sp = spec.ideal_support(p)?;
    let sq = spec.ideal_support(q)?;
    for a in &sp {
        if sq.contains(a) {
            return Err(StackyError::InvalidModel(
                "supports of p and q are not disjoint".into(),
            ));
        }
    }
    Ok(())
}

/// Local point table for a coprime pair; primality is not required here
/// (the local-points argument needs only coprimality).
pub fn local_table(
    spec: &FieldSpec,
    p: &FieldElement,
    q: &FieldElement,
    extra: &[Place],
) -> Result<LocalPointTable, StackyError> {
    check_coprime_pair(spec, p, q)?;
    let mut places = exceptional_set(spec, p, q)?;
    for place in extra {
        if !places.contains(place) {
            places.push(place.clone());
        }
    }
    places.sort_by_key(place_sort_key);
    places.dedup();
    let entries = places
        .iter()
        .map(|v| local_point_certificate(spec, p, q, v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LocalPointTable {
        entries,
        generic_rule: GENERIC_RULE.to_string(),
    })
}

/// Describes a ring whose unit square classes parameterize twists.
#[derive(Debug, Clone)]
pub enum RingDescriptor {
    /// The valuation ring at a finite place.
    LocalAt(FinitePlace),
    /// O_K[1/N]; the caller certifies that it is a principal ideal domain
    /// and that the listed units generate its unit group.
    GlobalLocalization {
        n: BigInt,
        pid_certified: bool,
        unit_generators: Vec<FieldElement>,
    },
}

/// A complete duplicate-free list of representatives of the unit square
/// classes of the described ring.
pub fn twist_classes(
    spec: &FieldSpec,
    ring: &RingDescriptor,
) -> Result<Vec<FieldElement>, StackyError> {
    match ring {
        RingDescriptor::LocalAt(place) => {
            if !place.is_even() {
                // {1, u} for the first nonsquare unit in enumeration order.
                let fq = place.residue_field();
                let count: u64 = fq
                    .order()
                    .try_into()
                    .map_err(|_| StackyError::UnsupportedDegree(spec.degree()))?;
                for idx in 2..count {
                    let r = fq.element_from_index(idx);
                    if !r.is_empty() && !fq.is_square(&r) {
                        let lift = spec.from_poly(
                            &r.iter()
                                .map(|&c| BigRational::from(BigInt::from(c)))
                                .collect::<Vec<_>>(),
                        );
                        return Ok(vec![spec.one(), lift]);
                    }
                }
                unreachable!("odd residue fields have nonsquare units");
            }
            // Even places: unit classes modulo P^{2e*v_P(2)+1}.
            let e = place.ramification_index;
            let k = 2 * e * e + 1;
            let digits = k.div_ceil(e);
            let ring = localfield::ring::LocalRing::lift(spec, place, digits + 1);
            let mut reps: Vec<Vec<BigInt>> = Vec::new();
            ring.for_each_residue(digits, |cand| {
                if ring.residue(cand).is_empty() {
                    return false; // not a unit
                }
                let mut fresh = true;
                for rep in &reps {
                    // cand ~ rep iff cand*rep is a square mod P^k.
                    let prod = ring.mul(cand, rep);
                    let mut is_sq = false;
                    ring.for_each_residue(digits, |s| {
                        let diff = ring.sub(&ring.mul(s, s), &prod);
                        if ring.is_zero_mod(&diff, digits) {
                            is_sq = true;
                            true
                        } else {
                            false
                        }
                    });
                    if is_sq {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    reps.push(cand.clone());
                }
                false
            });
            Ok(reps
                .into_iter()
                .map(|digits| {
                    spec.from_poly(
                        &digits
                            .iter()
                            .map(|c| BigRational::from(c.clone()))
                            .collect::<Vec<_>>(),
                    )
                })
                .collect())
        }
        RingDescriptor::GlobalLocalization {
            n,
            pid_certified,
            unit_generators,
        } => {
            if !pid_certified {
                return Err(StackyError::NotPid);
            }
            if spec.degree() > 2 {
                return Err(StackyError::UnsupportedDegree(spec.degree()));
            }
            let _ = n;
            let m = unit_generators.len();
            if m >= 16 {
                return Err(StackyError::PreconditionViolated(
                    "too many unit generators".into(),
                ));
            }
            let mut reps: Vec<FieldElement> = Vec::new();
            for mask in 0..(1u32 << m) {
                let mut prod = spec.one();
                for (i, g) in unit_generators.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        prod = spec.mul(&prod, g);
                    }
                }
                let mut fresh = true;
                for rep in &reps {
                    // prod ~ rep iff prod*rep is a square in K (both are
                    // units, and the localization is integrally closed).
                    if spec.sqrt_in_field(&spec.mul(&prod, rep))?.is_some() {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    reps.push(prod);
                }
            }
            Ok(reps)
        }
    }
}

/// The bundled witness that X(O_K) is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalEmptinessCertificate {
    pub trivializing_n: BigInt,
    pub unit_generators: Vec<FieldElement>,
    pub unit_square_certs: Vec<SquareClassCertificate>,
    pub q_nonsquare_cert: SquareClassCertificate,
    pub symbol_at_p: HilbertValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlobalVerdict {
    Empty(GlobalEmptinessCertificate),
    Inconclusive { reason: String },
}

/// Decides emptiness of the set of integral points: with O_K[1/N] a PID and
/// the given units generating its unit group, the verdict is Empty iff every
/// unit generator is a square in the completion at p and q is not; the
/// Hilbert symbol (p,q) at that place must then be -1, and both routes are
/// checked against each other.
pub fn verify_global_empty(
    model: &StackyCurveModel,
    trivializing_n: &BigInt,
    units: &[FieldElement],
) -> Result<GlobalVerdict, StackyError> {
    let spec = model.spec();
    if !trivializing_n.is_positive() {
        return Err(StackyError::PreconditionViolated(
            "trivializing N must be a positive integer".into(),
        ));
    }
    if units.is_empty() {
        return Err(StackyError::PreconditionViolated(
            "unit generator list must be nonempty (it includes torsion)".into(),
        ));
    }
    let place_p = model.place_of_p();
    if place_p.is_even() {
        return Err(StackyError::PreconditionViolated("p must be odd".into()));
    }
    if place_p.ramification_index != 1 {
        return Err(StackyError::PreconditionViolated(
            "the place of p must be unramified".into(),
        ));
    }
    let n_primes = if trivializing_n.is_one() {
        Vec::new()
    } else {
        factor_bigint(trivializing_n)?
    };
    for ell in &n_primes {
        if *ell == model.place_of_p().rational_prime || *ell == model.place_of_q().rational_prime {
            return Err(StackyError::PreconditionViolated(
                "p and q must be coprime to the primes dividing N".into(),
            ));
        }
    }
    for u in units {
        let norm = spec.norm_int(u)?.abs();
        if norm.is_zero() {
            return Err(StackyError::PreconditionViolated(
                "unit generator is zero".into(),
            ));
        }
        let mut rest = norm.clone();
        for ell in &n_primes {
            while (&rest % BigInt::from(*ell)).is_zero() {
                rest /= BigInt::from(*ell);
            }
        }
        if !rest.is_one() {
            return Err(StackyError::PreconditionViolated(format!(
                "generator {} is not a unit of O_K[1/N] (norm {})",
                spec.element_to_string(u),
                norm
            )));
        }
    }

    // Condition (1): every unit generator is a square in K_p.
    let mut unit_certs = Vec::with_capacity(units.len());
    for u in units {
        let cert = localfield::is_square_at(spec, u, place_p)?;
        if cert.verdict != SquareVerdict::Square {
            return Ok(GlobalVerdict::Inconclusive {
                reason: format!(
                    "unit generator {} is not a square at the place of p",
                    spec.element_to_string(u)
                ),
            });
        }
        unit_certs.push(cert);
    }
    // Condition (2): q is a nonsquare in K_p.
    let q_cert = localfield::is_square_at(spec, model.q(), place_p)?;
    if q_cert.verdict != SquareVerdict::Nonsquare {
        return Ok(GlobalVerdict::Inconclusive {
            reason: "q is a square at the place of p".into(),
        });
    }
    // Second route: the twisted conic has no K_p-point iff the symbol is -1.
    let symbol = hilbert::hilbert_symbol(
        spec,
        model.p(),
        model.q(),
        &Place::Finite(place_p.clone()),
    )?;
    if symbol != HilbertValue::Minus {
        return Err(StackyError::Hilbert(HilbertError::Internal(
            "q nonsquare at the place of p but the Hilbert symbol is +1".into(),
        )));
    }
    Ok(GlobalVerdict::Empty(GlobalEmptinessCertificate {
        trivializing_n: trivializing_n.clone(),
        unit_generators: units.to_vec(),
        unit_square_certs: unit_certs,
        q_nonsquare_cert: q_cert,
        symbol_at_p: symbol,
    }))
}

/// The full bundled counterexample: model data, genus, local point table,
/// and the global emptiness certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub spec: FieldSpec,
    pub trivializing_n: BigInt,
    pub unit_generators: Vec<FieldElement>,
    pub p: FieldElement,
    pub q: FieldElement,
    pub genus: BigRational,
    pub local_table: LocalPointTable,
    pub global: GlobalEmptinessCertificate,
    pub format_version: u32,
}

pub const REPORT_FORMAT_VERSION: u32 = 1;

pub fn build_counterexample_report(
    model: &StackyCurveModel,
    trivializing_n: &BigInt,
    units: &[FieldElement],
    extra_places: &[Place],
) -> Result<CounterexampleReport, StackyError> {
    let global = match verify_global_empty(model, trivializing_n, units)? {
        GlobalVerdict::Empty(cert) => cert,
        GlobalVerdict::Inconclusive { reason } => {
            return Err(StackyError::GlobalCheckInconclusive(reason));
        }
    };
    let local_table = model.verify_local_everywhere(extra_places)?;
    Ok(CounterexampleReport {
        spec: model.spec().clone(),
        trivializing_n: trivializing_n.clone(),
        unit_generators: units.to_vec(),
        p: model.p().clone(),
        q: model.q().clone(),
        genus: model.model_genus(),
        local_table,
        global,
    format_version: REPORT_FORMAT_VERSION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{parse_element, parse_field};

    fn q_field() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn gaussian() -> FieldSpec {
        parse_field("x^2+1").unwrap()
    }

    fn int(spec: &FieldSpec, n: i64) -> FieldElement {
        spec.from_integer(BigInt::from(n))
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn genus_formula_examples() {
        let half = RamificationDatum {
            coarse_genus: 0,
            stacky_points: vec![(2, 1), (2, 1)],
        };
        assert_eq!(genus(&half), rat(1, 2));
        let none = RamificationDatum {
            coarse_genus: 0,
            stacky_points: vec![],
        };
        assert_eq!(genus(&none), rat(0, 1));
        let third = RamificationDatum {
            coarse_genus: 0,
            stacky_points: vec![(3, 1)],
        };
        assert_eq!(genus(&third), rat(1, 3));
    }

    #[test]
    fn model_genus_is_one_half() {
        let q = q_field();
        let m = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 3)).unwrap();
        assert_eq!(m.model_genus(), rat(1, 2));
        let m = StackyCurveModel::new(q.clone(), int(&q, 13), int(&q, 5)).unwrap();
        assert_eq!(m.model_genus(), rat(1, 2));
        let k = gaussian();
        let p = parse_element(&k, "4+t").unwrap();
        let m = StackyCurveModel::new(k.clone(), p, int(&k, 3)).unwrap();
        assert_eq!(m.model_genus(), rat(1, 2));
    }

    #[test]
    fn model_validation_rejects_bad_pairs() {
        let q = q_field();
        // not prime
        assert!(matches!(
            StackyCurveModel::new(q.clone(), int(&q, 15), int(&q, 7)),
            Err(StackyError::InvalidModel(_))
        ));
        // shared place
        assert!(matches!(
            StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 5)),
            Err(StackyError::InvalidModel(_))
        ));
        // even
        assert!(matches!(
            StackyCurveModel::new(q.clone(), int(&q, 2), int(&q, 3)),
            Err(StackyError::InvalidModel(_))
        ));
    }

    #[test]
    fn fifty_random_models_have_genus_one_half() {
        let q = q_field();
        let odd_primes = [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        let mut count = 0;
        for (i, &a) in odd_primes.iter().enumerate() {
            for &b in &odd_primes[i + 1..] {
                if count >= 25 {
                    break;
                }
                let m = StackyCurveModel::new(q.clone(), int(&q, a), int(&q, b)).unwrap();
                assert_eq!(m.model_genus(), rat(1, 2));
                count += 1;
            }
        }
        // Gaussian prime elements with odd norm.
        let k = gaussian();
        let mut pool = Vec::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let cand = k.element_from_int_coords(&[a, b]);
                if cand.is_zero() {
                    continue;
                }
                if k.norm_int(&cand).unwrap().abs().is_one() {
                    continue;
                }
                if let Ok(Some(place)) = k.is_prime_element(&cand) {
                    if !place.is_even() {
                        pool.push((cand, place));
                    }
                }
            }
        }
        let mut done = 0;
        'outer: for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                if pool[i].1 == pool[j].1 {
                    continue;
                }
                let m = StackyCurveModel::new(k.clone(), pool[i].0.clone(), pool[j].0.clone())
                    .unwrap();
                assert_eq!(m.model_genus(), rat(1, 2));
                let table = m.verify_local_everywhere(&[]).unwrap();
                for e in &table.entries {
                    assert!(verify_local_certificate(&k, m.p(), m.q(), e));
                }
                done += 1;
                if done >= 25 {
                    break 'outer;
                }
            }
        }
        assert!(done >= 25);
    }

    #[test]
    fn trivial_twist_is_the_model_equation() {
        let q = q_field();
        let p = int(&q, 5);
        let qq = int(&q, 3);
        let model = StackyCurveModel::new(q.clone(), p.clone(), qq.clone()).unwrap();
        let twist = TwistedConic::new(model, q.one());
        let pt = (int(&q, 2), int(&q, -1), int(&q, 4));
        // z^2 - p x^2 - q y^2 directly
        let direct = q.sub(
            &q.sub(&q.mul(&pt.2, &pt.2), &q.mul(&p, &q.mul(&pt.0, &pt.0))),
            &q.mul(&qq, &q.mul(&pt.1, &pt.1)),
        );
        assert_eq!(twist.evaluate(&pt), direct);
    }

    #[test]
    fn twist_class_examples() {
        let q = q_field();
        // Z: {1, -1}
        let classes = twist_classes(
            &q,
            &RingDescriptor::GlobalLocalization {
                n: BigInt::one(),
                pid_certified: true,
                unit_generators: vec![int(&q, -1)],
            },
        )
        .unwrap();
        assert_eq!(classes, vec![q.one(), int(&q, -1)]);
        // local ring at v5: {1, 2}
        let v5 = q.places_above(5).unwrap()[0].clone();
        let classes = twist_classes(&q, &RingDescriptor::LocalAt(v5)).unwrap();
        assert_eq!(classes, vec![q.one(), int(&q, 2)]);
        // local ring at v2: {1, 3, 5, 7}
        let v2 = q.places_above(2).unwrap()[0].clone();
        let classes = twist_classes(&q, &RingDescriptor::LocalAt(v2)).unwrap();
        assert_eq!(
            classes,
            vec![q.one(), int(&q, 3), int(&q, 5), int(&q, 7)]
        );
        // PID flag is mandatory for global rings.
        assert!(matches!(
            twist_classes(
                &q,
                &RingDescriptor::GlobalLocalization {
                    n: BigInt::one(),
                    pid_certified: false,
                    unit_generators: vec![int(&q, -1)],
                },
            ),
            Err(StackyError::NotPid)
        ));
    }

    #[test]
    fn local_point_certificate_rules() {
        let q = q_field();
        let p = int(&q, 5);
        let qq = int(&q, 3);
        let v7 = Place::Finite(q.places_above(7).unwrap()[0].clone());
        let c = local_point_certificate(&q, &p, &qq, &v7).unwrap();
        assert_eq!(c.twist, TwistTag::ByQ);
        assert_eq!(c.point, (q.zero(), q.one(), q.one()));
        let v3 = Place::Finite(q.places_above(3).unwrap()[0].clone());
        let c = local_point_certificate(&q, &p, &qq, &v3).unwrap();
        assert_eq!(c.twist, TwistTag::ByP);
        assert_eq!(c.point, (q.one(), q.zero(), q.one()));
        let real = Place::Real(q.real_places()[0].clone());
        let c = local_point_certificate(&q, &p, &qq, &real).unwrap();
        assert_eq!(c.twist, TwistTag::ByQ);
        assert_eq!(c.point, (q.zero(), q.one(), q.one()));
    }

    #[test]
    fn local_table_over_q() {
        let q = q_field();
        let m = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 3)).unwrap();
        let table = m.verify_local_everywhere(&[]).unwrap();
        let primes: Vec<u64> = table
            .entries
            .iter()
            .filter_map(|e| match &e.place {
                Place::Finite(fp) => Some(fp.rational_prime),
                Place::Real(_) => None,
            })
            .collect();
        assert_eq!(primes, vec![2, 3, 5]);
        let reals = table
            .entries
            .iter()
            .filter(|e| matches!(e.place, Place::Real(_)))
            .count();
        assert_eq!(reals, 1);
        assert_eq!(table.generic_rule, GENERIC_RULE);
        for e in &table.entries {
            assert!(verify_local_certificate(&q, m.p(), m.q(), e));
        }
        // order swapped still fine
        let m2 = StackyCurveModel::new(q.clone(), int(&q, 3), int(&q, 5)).unwrap();
        assert!(m2.verify_local_everywhere(&[]).is_ok());
    }

    #[test]
    fn local_table_over_gaussian() {
        let k = gaussian();
        let p = parse_element(&k, "4+t").unwrap();
        let m = StackyCurveModel::new(k.clone(), p, int(&k, 3)).unwrap();
        let table = m.verify_local_everywhere(&[]).unwrap();
        let primes: Vec<u64> = table
            .entries
            .iter()
            .filter_map(|e| match &e.place {
                Place::Finite(fp) => Some(fp.rational_prime),
                Place::Real(_) => None,
            })
            .collect();
        assert_eq!(primes, vec![2, 3, 17]);
        assert!(table
            .entries
            .iter()
            .all(|e| matches!(e.place, Place::Finite(_))));
    }

    #[test]
    fn local_table_for_coprime_nonprime_pair() {
        let q = q_field();
        // 15 and 7: coprime but 15 is not prime; local analysis still works.
        let table = local_table(&q, &int(&q, 15), &int(&q, 7), &[]).unwrap();
        assert!(table.entries.len() >= 4);
        for e in &table.entries {
            assert!(verify_local_certificate(&q, &int(&q, 15), &int(&q, 7), e));
        }
        // overlapping supports are rejected
        assert!(matches!(
            local_table(&q, &int(&q, 15), &int(&q, 5), &[]),
            Err(StackyError::InvalidModel(_))
        ));
    }

    #[test]
    fn global_emptiness_examples() {
        let q = q_field();
        let m = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 3)).unwrap();
        let verdict = m
            .verify_global_empty(&BigInt::one(), &[int(&q, -1)])
            .unwrap();
        match verdict {
            GlobalVerdict::Empty(cert) => {
                assert_eq!(cert.symbol_at_p, HilbertValue::Minus);
                assert_eq!(cert.unit_square_certs.len(), 1);
                assert!(localfield::verify_square_class(&q, &cert.unit_square_certs[0]));
                assert!(localfield::verify_square_class(&q, &cert.q_nonsquare_cert));
            }
            GlobalVerdict::Inconclusive { reason } => panic!("expected Empty: {reason}"),
        }

        let m = StackyCurveModel::new(q.clone(), int(&q, 13), int(&q, 5)).unwrap();
        assert!(matches!(
            m.verify_global_empty(&BigInt::one(), &[int(&q, -1)]).unwrap(),
            GlobalVerdict::Empty(_)
        ));

        let m = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 11)).unwrap();
        assert!(matches!(
            m.verify_global_empty(&BigInt::one(), &[int(&q, -1)]).unwrap(),
            GlobalVerdict::Inconclusive { .. }
        ));
    }

    #[test]
    fn global_preconditions() {
        let q = q_field();
        let m = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 3)).unwrap();
        assert!(matches!(
            m.verify_global_empty(&BigInt::one(), &[]),
            Err(StackyError::PreconditionViolated(_))
        ));
        assert!(matches!(
            m.verify_global_empty(&BigInt::from(-2), &[int(&q, -1)]),
            Err(StackyError::PreconditionViolated(_))
        ));
        // N sharing a prime with p
        assert!(matches!(
            m.verify_global_empty(&BigInt::from(5), &[int(&q, -1)]),
            Err(StackyError::PreconditionViolated(_))
        ));
        // non-unit generator
        assert!(matches!(
            m.verify_global_empty(&BigInt::one(), &[int(&q, 7)]),
            Err(StackyError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn two_emptiness_routes_agree() {
        let q = q_field();
        let odd_primes: Vec<i64> = vec![3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
        let mut checked = 0;
        for &a in &odd_primes {
            for &b in &odd_primes {
                if a == b {
                    continue;
                }
                let p = int(&q, a);
                let qq = int(&q, b);
                let place = q
                    .places_above(a as u64)
                    .unwrap()
                    .into_iter()
                    .next()
                    .unwrap();
                let cert = localfield::is_square_at(&q, &qq, &place).unwrap();
                let symbol =
                    hilbert::hilbert_symbol(&q, &p, &qq, &Place::Finite(place)).unwrap();
                assert_eq!(
                    cert.verdict == SquareVerdict::Nonsquare,
                    symbol == HilbertValue::Minus,
                    "route mismatch for ({a}, {b})"
                );
                checked += 1;
                if checked >= 100 {
                    return;
                }
            }
        }
    }

    #[test]
    fn report_assembly() {
        let q = q_field();
        let m = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 3)).unwrap();
        let report =
            build_counterexample_report(&m, &BigInt::one(), &[int(&q, -1)], &[]).unwrap();
        assert_eq!(report.genus, rat(1, 2));
        assert_eq!(report.local_table.entries.len(), 4);
        assert_eq!(report.format_version, 1);

        let bad = StackyCurveModel::new(q.clone(), int(&q, 5), int(&q, 11)).unwrap();
        assert!(matches!(
            build_counterexample_report(&bad, &BigInt::one(), &[int(&q, -1)], &[]),
            Err(StackyError::GlobalCheckInconclusive(_))
        ));
    }

    #[test]
    fn desk_scale_brute_force_finds_no_points() {
        // For the (5,3) model over Z, neither twist t=1 nor t=-1 admits a
        // primitive solution with small coordinates.
        let bound = 60i64;
        for t in [1i64, -1] {
            for x in -bound..=bound {
                for y in -bound..=bound {
                    let rhs = 5 * x * x + 3 * y * y;
                    let val = t * rhs; // t z^2 = rhs, so z^2 = rhs / t
                    if t == -1 {
                        if rhs > 0 {
                            continue;
                        }
                        if x == 0 && y == 0 {
                            continue;
                        }
                        panic!("negative definite side cannot vanish nontrivially");
                    }
                    let z = (val as f64).sqrt() as i64;
                    for cand in [z - 1, z, z + 1] {
                        if cand >= 0 && cand * cand == val {
                            assert!(
                                x == 0 && y == 0 && cand == 0,
                                "unexpected solution ({x},{y},{cand})"
                            );
                        }
                    }
                }
            }
        }
    }
}
