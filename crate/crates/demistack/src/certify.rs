//! Stable on-disk certificate format and the independent validator.
//!
//! Serialization is canonical: keys sorted, every integer a decimal string,
//! rationals as numerator/denominator pairs, so byte-identical output across
//! runs. Validation trusts nothing from the producer: it reparses the field,
//! rechecks primality, oddness and coprimality of the pair, recomputes the
//! genus, the local point table, the square-class certificates with their
//! canonical witnesses, and the Hilbert symbol, and accepts only when every
//! recomputed object matches the stored one exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::localfield::{SquareClassCertificate, SquareVerdict, SquareWitness};
use crate::numfield::{FieldElement, FieldSpec, FinitePlace, Place, RealPlace};
use crate::search;
use crate::stacky::{
    self, CounterexampleReport, GlobalEmptinessCertificate, GlobalVerdict, LocalPointCertificate,
    LocalPointTable, StackyCurveModel, TwistTag,
};
use crate::hilbert::HilbertValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("malformed certificate input: {0}")]
    MalformedInput(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected(String),
}

// ---- wire DTOs (all numbers as decimal strings) ----

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RatDto {
    num: String,
    den: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDto {
    coords: Vec<RatDto>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum PlaceDto {
    Finite {
        prime: String,
        local_factor: Vec<String>,
        ramification_index: String,
        residue_degree: String,
    },
    Real {
        lo: RatDto,
        hi: RatDto,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum WitnessDto {
    Root { element: ElementDto },
    OddValuation { valuation: String },
    NonsquareResidue { residue: Vec<String> },
    EvenSearchExhausted { modulus_exponent: String },
    RealSign { negative: bool },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareCertDto {
    value: ElementDto,
    place: PlaceDto,
    verdict: String,
    witness: WitnessDto,
    precision: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDto {
    x: ElementDto,
    y: ElementDto,
    z: ElementDto,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalEntryDto {
    place: PlaceDto,
    twist: String,
    twist_value: ElementDto,
    point: PointDto,
    precision: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDto {
    entries: Vec<LocalEntryDto>,
    generic_rule: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalDto {
    trivializing_n: String,
    unit_generators: Vec<ElementDto>,
    unit_square_certs: Vec<SquareCertDto>,
    q_nonsquare_cert: SquareCertDto,
    hilbert_symbol_at_p: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDto {
    min_poly: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDto {
    format_version: String,
    field: FieldDto,
    trivializing_n: String,
    unit_generators: Vec<ElementDto>,
    p: ElementDto,
    q: ElementDto,
    genus: RatDto,
    local_table: TableDto,
    global: GlobalDto,
}

// ---- domain -> wire ----

fn int_str(n: &BigInt) -> String {
    n.to_string()
}

fn rat_dto(r: &BigRational) -> RatDto {
    RatDto {
        num: r.numer().to_string(),
        den: r.denom().to_string(),
    }
}

fn element_dto(e: &FieldElement) -> ElementDto {
    ElementDto {
        coords: e.coords().iter().map(rat_dto).collect(),
    }
}

fn place_dto(place: &Place) -> PlaceDto {
    match place {
        Place::Finite(fp) => PlaceDto::Finite {
            prime: fp.rational_prime.to_string(),
            local_factor: fp.local_factor.iter().map(|c| c.to_string()).collect(),
            ramification_index: fp.ramification_index.to_string(),
            residue_degree: fp.residue_degree.to_string(),
        },
        Place::Real(rp) => PlaceDto::Real {
            lo: rat_dto(&rp.lo),
            hi: rat_dto(&rp.hi),
        },
    }
}

fn witness_dto(w: &SquareWitness) -> WitnessDto {
    match w {
        SquareWitness::Root { element } => WitnessDto::Root {
            element: element_dto(element),
        },
        SquareWitness::OddValuation { valuation } => WitnessDto::OddValuation {
            valuation: valuation.to_string(),
        },
        SquareWitness::NonsquareResidue { residue } => WitnessDto::NonsquareResidue {
            residue: residue.iter().map(|c| c.to_string()).collect(),
        },
        SquareWitness::EvenSearchExhausted { modulus_exponent } => {
            WitnessDto::EvenSearchExhausted {
                modulus_exponent: modulus_exponent.to_string(),
            }
        }
        SquareWitness::RealSign { negative } => WitnessDto::RealSign {
            negative: *negative,
        },
    }
}

fn square_cert_dto(c: &SquareClassCertificate) -> SquareCertDto {
    SquareCertDto {
        value: element_dto(&c.value),
        place: place_dto(&c.place),
        verdict: match c.verdict {
            SquareVerdict::Square => "square".into(),
            SquareVerdict::Nonsquare => "nonsquare".into(),
        },
        witness: witness_dto(&c.witness),
        precision: c.precision.to_string(),
    }
}

fn entry_dto(e: &LocalPointCertificate) -> LocalEntryDto {
    LocalEntryDto {
        place: place_dto(&e.place),
        twist: match e.twist {
            TwistTag::ByP => "p".into(),
            TwistTag::ByQ => "q".into(),
        },
        twist_value: element_dto(&e.twist_value),
        point: PointDto {
            x: element_dto(&e.point.0),
            y: element_dto(&e.point.1),
            z: element_dto(&e.point.2),
        },
        precision: match e.precision {
            None => "exact".into(),
            Some(k) => k.to_string(),
        },
    }
}

fn report_dto(r: &CounterexampleReport) -> ReportDto {
    ReportDto {
        format_version: r.format_version.to_string(),
        field: FieldDto {
            min_poly: r.spec.min_poly().iter().map(int_str).collect(),
        },
        trivializing_n: int_str(&r.trivializing_n),
        unit_generators: r.unit_generators.iter().map(element_dto).collect(),
        p: element_dto(&r.p),
        q: element_dto(&r.q),
        genus: rat_dto(&r.genus),
        local_table: TableDto {
            entries: r.local_table.entries.iter().map(entry_dto).collect(),
            generic_rule: r.local_table.generic_rule.clone(),
        },
        global: GlobalDto {
            trivializing_n: int_str(&r.global.trivializing_n),
            unit_generators: r.global.unit_generators.iter().map(element_dto).collect(),
            unit_square_certs: r
                .global
                .unit_square_certs
                .iter()
                .map(square_cert_dto)
                .collect(),
            q_nonsquare_cert: square_cert_dto(&r.global.q_nonsquare_cert),
            hilbert_symbol_at_p: r.global.symbol_at_p.to_string(),
        },
    }
}

/// Canonical bytes: the DTO is converted through a sorted-key JSON value.
pub fn serialize_report(r: &CounterexampleReport) -> Vec<u8> {
    let value = serde_json::to_value(report_dto(r)).expect("report serializes");
    let mut bytes = serde_json::to_vec(&value).expect("json encodes");
    bytes.push(b'\n');
    bytes
}

// ---- wire -> domain (strict canonical parsing) ----

fn parse_bigint(s: &str) -> Result<BigInt, String> {
    let v: BigInt = s
        .parse()
        .map_err(|_| format!("`{s}` is not a decimal integer"))?;
    if v.to_string() != s {
        return Err(format!("`{s}` is not in canonical decimal form"));
    }
    Ok(v)
}

fn parse_u64(s: &str) -> Result<u64, String> {
    let v = parse_bigint(s)?;
    u64::try_from(v).map_err(|_| format!("`{s}` out of range"))
}

fn parse_u32(s: &str) -> Result<u32, String> {
    let v = parse_bigint(s)?;
    u32::try_from(v).map_err(|_| format!("`{s}` out of range"))
}

fn parse_i64(s: &str) -> Result<i64, String> {
    let v = parse_bigint(s)?;
    i64::try_from(v).map_err(|_| format!("`{s}` out of range"))
}

fn parse_rat(r: &RatDto) -> Result<BigRational, String> {
    let num = parse_bigint(&r.num)?;
    let den = parse_bigint(&r.den)?;
    if !den.is_positive() {
        return Err("denominator must be positive".into());
    }
    let v = BigRational::new(num, den);
    if v.numer().to_string() != r.num || v.denom().to_string() != r.den {
        return Err("rational not in lowest terms".into());
    }
    Ok(v)
}

fn parse_element(spec: &FieldSpec, e: &ElementDto) -> Result<FieldElement, String> {
    let coords = e
        .coords
        .iter()
        .map(parse_rat)
        .collect::<Result<Vec<_>, _>>()?;
    spec.element(coords).map_err(|e| e.to_string())
}

/// A finite place is accepted only if it matches one recomputed from the
/// field; a real place must match a recomputed isolating interval exactly.
fn parse_place(spec: &FieldSpec, p: &PlaceDto) -> Result<Place, String> {
    match p {
        PlaceDto::Finite {
            prime,
            local_factor,
            ramification_index,
            residue_degree,
        } => {
            let ell = parse_u64(prime)?;
            let factor = local_factor
                .iter()
                .map(|c| parse_u64(c))
                .collect::<Result<Vec<_>, _>>()?;
            let e = parse_u32(ramification_index)?;
            let d = parse_u32(residue_degree)?;
            let candidate = FinitePlace {
                rational_prime: ell,
                local_factor: factor,
                ramification_index: e,
                residue_degree: d,
            };
            let known = spec.places_above(ell).map_err(|e| e.to_string())?;
            if known.contains(&candidate) {
                Ok(Place::Finite(candidate))
            } else {
                Err(format!("place above {ell} does not exist in the field"))
            }
        }
        PlaceDto::Real { lo, hi } => {
            let lo = parse_rat(lo)?;
            let hi = parse_rat(hi)?;
            let candidate = RealPlace { lo, hi };
            if spec.real_places().contains(&candidate) {
                Ok(Place::Real(candidate))
            } else {
                Err("real place does not match any isolating interval".into())
            }
        }
    }
}

fn parse_witness(spec: &FieldSpec, w: &WitnessDto) -> Result<SquareWitness, String> {
    Ok(match w {
        WitnessDto::Root { element } => SquareWitness::Root {
            element: parse_element(spec, element)?,
        },
        WitnessDto::OddValuation { valuation } => SquareWitness::OddValuation {
            valuation: parse_i64(valuation)?,
        },
        WitnessDto::NonsquareResidue { residue } => SquareWitness::NonsquareResidue {
            residue: residue
                .iter()
                .map(|c| parse_u64(c))
                .collect::<Result<Vec<_>, _>>()?,
        },
        WitnessDto::EvenSearchExhausted { modulus_exponent } => {
            SquareWitness::EvenSearchExhausted {
                modulus_exponent: parse_u32(modulus_exponent)?,
            }
        }
        WitnessDto::RealSign { negative } => SquareWitness::RealSign {
            negative: *negative,
        },
    })
}

fn parse_square_cert(
    spec: &FieldSpec,
    c: &SquareCertDto,
) -> Result<SquareClassCertificate, String> {
    let verdict = match c.verdict.as_str() {
        "square" => SquareVerdict::Square,
        "nonsquare" => SquareVerdict::Nonsquare,
        other => return Err(format!("unknown verdict `{other}`")),
    };
    Ok(SquareClassCertificate {
        value: parse_element(spec, &c.value)?,
        place: parse_place(spec, &c.place)?,
        verdict,
        witness: parse_witness(spec, &c.witness)?,
        precision: parse_i64(&c.precision)?,
    })
}

fn parse_entry(spec: &FieldSpec, e: &LocalEntryDto) -> Result<LocalPointCertificate, String> {
    let twist = match e.twist.as_str() {
        "p" => TwistTag::ByP,
        "q" => TwistTag::ByQ,
        other => return Err(format!("unknown twist tag `{other}`")),
    };
    let precision = if e.precision == "exact" {
        None
    } else {
        Some(parse_i64(&e.precision)?)
    };
    Ok(LocalPointCertificate {
        place: parse_place(spec, &e.place)?,
        twist,
        twist_value: parse_element(spec, &e.twist_value)?,
        point: (
            parse_element(spec, &e.point.x)?,
            parse_element(spec, &e.point.y)?,
            parse_element(spec, &e.point.z)?,
        ),
        precision,
    })
}

fn parse_symbol(s: &str) -> Result<HilbertValue, String> {
    match s {
        "+1" => Ok(HilbertValue::Plus),
        "-1" => Ok(HilbertValue::Minus),
        other => Err(format!("unknown hilbert value `{other}`")),
    }
}

/// Reconstructs the full domain report from wire data, validating shapes but
/// not yet the mathematics.
fn report_from_dto(dto: &ReportDto) -> Result<CounterexampleReport, String> {
    if dto.format_version != "1" {
        return Err(format!(
            "unsupported format version `{}`",
            dto.format_version
        ));
    }
    let min_poly = dto
        .field
        .min_poly
        .iter()
        .map(|c| parse_bigint(c))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = FieldSpec::new(min_poly).map_err(|e| format!("field: {e}"))?;
    let report = CounterexampleReport {
        trivializing_n: parse_bigint(&dto.trivializing_n)?,
        unit_generators: dto
            .unit_generators
            .iter()
            .map(|e| parse_element(&spec, e))
            .collect::<Result<Vec<_>, _>>()?,
        p: parse_element(&spec, &dto.p)?,
        q: parse_element(&spec, &dto.q)?,
        genus: parse_rat(&dto.genus)?,
        local_table: LocalPointTable {
            entries: dto
                .local_table
                .entries
                .iter()
                .map(|e| parse_entry(&spec, e))
                .collect::<Result<Vec<_>, _>>()?,
            generic_rule: dto.local_table.generic_rule.clone(),
        },
        global: GlobalEmptinessCertificate {
            trivializing_n: parse_bigint(&dto.global.trivializing_n)?,
            unit_generators: dto
                .global
                .unit_generators
                .iter()
                .map(|e| parse_element(&spec, e))
                .collect::<Result<Vec<_>, _>>()?,
            unit_square_certs: dto
                .global
                .unit_square_certs
                .iter()
                .map(|c| parse_square_cert(&spec, c))
                .collect::<Result<Vec<_>, _>>()?,
            q_nonsquare_cert: parse_square_cert(&spec, &dto.global.q_nonsquare_cert)?,
            symbol_at_p: parse_symbol(&dto.global.hilbert_symbol_at_p)?,
        },
        format_version: 1,
        spec,
    };
    Ok(report)
}

pub fn deserialize_report(bytes: &[u8]) -> Result<CounterexampleReport, CertifyError> {
    let dto = parse_dto(bytes)?;
    report_from_dto(&dto).map_err(CertifyError::MalformedInput)
}

fn parse_dto(bytes: &[u8]) -> Result<ReportDto, CertifyError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CertifyError::MalformedInput("certificate is not UTF-8".into()))?;
    serde_json::from_str::<serde_json::Value>(text)
        .map_err(|e| CertifyError::MalformedInput(format!("not JSON: {e}")))
        .and_then(|v| {
            serde_json::from_value::<ReportDto>(v)
                .map_err(|e| CertifyError::MalformedInput(format!("schema: {e}")))
        })
}

/// Recomputes everything from scratch and accepts only on exact agreement:
/// pair primality/oddness/coprimality, the genus, the full local point table
/// with its canonical rule points, every square-class certificate with its
/// canonical witness and precision, and the Hilbert symbol at the place of
/// p. For fields of degree at most two the trivializing N and unit
/// generators are recomputed as well; beyond that they are caller-certified
/// profile data.
pub fn validate_report(bytes: &[u8]) -> Result<Verdict, CertifyError> {
    let dto = match parse_dto(bytes) {
        Ok(dto) => dto,
        Err(CertifyError::MalformedInput(m)) if m.starts_with("schema:") => {
            return Ok(Verdict::Rejected(m));
        }
        Err(e) => return Err(e),
    };
    let report = match report_from_dto(&dto) {
        Ok(r) => r,
        Err(reason) => return Ok(Verdict::Rejected(reason)),
    };
    Ok(match check_report(&report) {
        Ok(()) => Verdict::Accepted,
        Err(reason) => Verdict::Rejected(reason),
    })
}

fn check_report(report: &CounterexampleReport) -> Result<(), String> {
    let spec = &report.spec;

    // The model re-validates primality, coprimality and oddness.
    let model = StackyCurveModel::new(spec.clone(), report.p.clone(), report.q.clone())
        .map_err(|e| format!("model: {e}"))?;

    // Genus: stored value must be the rational 1/2 and match the formula.
    let expected_genus = model.model_genus();
    if report.genus != expected_genus {
        return Err(format!(
            "genus mismatch: stored {}, recomputed {}",
            report.genus, expected_genus
        ));
    }

    // Consistency between the top-level profile data and the global section.
    if report.global.trivializing_n != report.trivializing_n {
        return Err("trivializing N differs between report and certificate".into());
    }
    if report.global.unit_generators != report.unit_generators {
        return Err("unit generators differ between report and certificate".into());
    }

    // For computed-profile degrees the profile is recomputed outright.
    if spec.degree() <= 2 {
        let n = search::trivializing_n(spec).map_err(|e| format!("profile: {e}"))?;
        if n != report.trivializing_n {
            return Err(format!(
                "trivializing N mismatch: stored {}, recomputed {}",
                report.trivializing_n, n
            ));
        }
        let units = search::unit_generators(spec, &n).map_err(|e| format!("profile: {e}"))?;
        if units != report.unit_generators {
            return Err("unit generators do not match the recomputed profile".into());
        }
    }

    // Local table: recompute with the stored places as the requested extras
    // and demand exact equality (covers ordering, rule points, exactness).
    let extras: Vec<Place> = report
        .local_table
        .entries
        .iter()
        .map(|e| e.place.clone())
        .collect();
    let recomputed_table = model
        .verify_local_everywhere(&extras)
        .map_err(|e| format!("local table: {e}"))?;
    if recomputed_table != report.local_table {
        return Err("local point table does not match the canonical recomputation".into());
    }
    for entry in &report.local_table.entries {
        if !stacky::verify_local_certificate(spec, &report.p, &report.q, entry) {
            return Err("a local point certificate fails direct verification".into());
        }
    }

    // Global certificate: recompute and compare exactly.
    let verdict = model
        .verify_global_empty(&report.trivializing_n, &report.unit_generators)
        .map_err(|e| format!("global: {e}"))?;
    let recomputed_global = match verdict {
        GlobalVerdict::Empty(cert) => cert,
        GlobalVerdict::Inconclusive { reason } => {
            return Err(format!("emptiness conditions fail on recomputation: {reason}"));
        }
    };
    if recomputed_global != report.global {
        return Err("global emptiness certificate does not match the recomputation".into());
    }
    if report.global.symbol_at_p != HilbertValue::Minus {
        return Err("hilbert symbol at the place of p must be -1".into());
    }
    // Witness congruences, re-verified directly.
    for cert in report
        .global
        .unit_square_certs
        .iter()
        .chain([&report.global.q_nonsquare_cert])
    {
        if !crate::localfield::verify_square_class(spec, cert) {
            return Err("a square-class certificate fails direct verification".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::parse_field;
    use num_traits::One;
    use crate::stacky::build_counterexample_report;

    fn q_report() -> CounterexampleReport {
        let q = FieldSpec::rationals();
        let model = StackyCurveModel::new(
            q.clone(),
            q.from_integer(BigInt::from(5)),
            q.from_integer(BigInt::from(3)),
        )
        .unwrap();
        build_counterexample_report(
            &model,
            &BigInt::one(),
            &[q.from_integer(BigInt::from(-1))],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn serialization_is_canonical_and_roundtrips() {
        let report = q_report();
        let bytes1 = serialize_report(&report);
        let bytes2 = serialize_report(&report);
        assert_eq!(bytes1, bytes2);
        let back = deserialize_report(&bytes1).unwrap();
        assert_eq!(back, report);
        // genus is encoded as num/den = 1/2
        let text = String::from_utf8(bytes1).unwrap();
        assert!(text.contains(r#""genus":{"den":"2","num":"1"}"#));
    }

    #[test]
    fn valid_report_is_accepted() {
        let bytes = serialize_report(&q_report());
        assert_eq!(validate_report(&bytes).unwrap(), Verdict::Accepted);
    }

    #[test]
    fn genus_tamper_is_rejected() {
        let bytes = serialize_report(&q_report());
        let text = String::from_utf8(bytes).unwrap();
        let tampered = text.replace(r#""genus":{"den":"2","num":"1"}"#, r#""genus":{"den":"3","num":"1"}"#);
        assert_ne!(text, tampered);
        match validate_report(tampered.as_bytes()).unwrap() {
            Verdict::Rejected(reason) => assert!(reason.contains("genus"), "{reason}"),
            v => panic!("expected rejection, got {v:?}"),
        }
    }

    #[test]
    fn q_tamper_is_rejected() {
        let report = q_report();
        let mut tampered = report.clone();
        tampered.q = report.spec.from_integer(BigInt::from(11));
        let bytes = serialize_report(&tampered);
        match validate_report(&bytes).unwrap() {
            Verdict::Rejected(reason) => {
                assert!(reason.contains("recomputation") || reason.contains("emptiness"), "{reason}")
            }
            v => panic!("expected rejection, got {v:?}"),
        }
    }

    #[test]
    fn witness_tamper_is_rejected() {
        // Replace witness 2 for (-1 mod 5) with the equally valid root 3;
        // canonical recomputation must still reject it.
        let bytes = serialize_report(&q_report());
        let text = String::from_utf8(bytes).unwrap();
        let needle = r#""kind":"root""#;
        assert!(text.contains(needle));
        let tampered = text.replace(
            r#""witness":{"element":{"coords":[{"den":"1","num":"2"}]},"kind":"root"}"#,
            r#""witness":{"element":{"coords":[{"den":"1","num":"3"}]},"kind":"root"}"#,
        );
        assert_ne!(text, tampered);
        assert!(matches!(
            validate_report(tampered.as_bytes()).unwrap(),
            Verdict::Rejected(_)
        ));
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(matches!(
            validate_report(b"not json at all"),
            Err(CertifyError::MalformedInput(_))
        ));
        assert!(matches!(
            validate_report(&[0xff, 0xfe]),
            Err(CertifyError::MalformedInput(_))
        ));
        // well-formed JSON with wrong schema is a rejection, not an error
        assert!(matches!(
            validate_report(b"{\"a\": 1}").unwrap(),
            Verdict::Rejected(_)
        ));
    }

    #[test]
    fn gaussian_report_roundtrip() {
        let ki = parse_field("x^2+1").unwrap();
        let p = crate::numfield::parse_element(&ki, "4+t").unwrap();
        let model = StackyCurveModel::new(ki.clone(), p, ki.from_integer(BigInt::from(3))).unwrap();
        let report = build_counterexample_report(
            &model,
            &BigInt::one(),
            &[ki.generator()],
            &[],
        )
        .unwrap();
        let bytes = serialize_report(&report);
        assert_eq!(validate_report(&bytes).unwrap(), Verdict::Accepted);
        assert_eq!(deserialize_report(&bytes).unwrap(), report);
    }

    #[test]
    fn non_canonical_numbers_are_rejected() {
        let bytes = serialize_report(&q_report());
        let text = String::from_utf8(bytes).unwrap();
        // "5" -> "05" somewhere in p
        let tampered = text.replace(
            r#""p":{"coords":[{"den":"1","num":"5"}]}"#,
            r#""p":{"coords":[{"den":"1","num":"05"}]}"#,
        );
        assert_ne!(text, tampered);
        assert!(matches!(
            validate_report(tampered.as_bytes()).unwrap(),
            Verdict::Rejected(_)
        ));
        // reducible rational 2/4
        let tampered = text.replace(
            r#""genus":{"den":"2","num":"1"}"#,
            r#""genus":{"den":"4","num":"2"}"#,
        );
        assert!(matches!(
            validate_report(tampered.as_bytes()).unwrap(),
            Verdict::Rejected(_)
        ));
    }
}
