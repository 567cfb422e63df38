//! Command-line interface: construct / verify / genus / hilbert /
//! local-points, with machine-readable JSON on stdout and diagnostics on
//! stderr.
//!
//! Exit codes: 0 verified or constructed, 1 falsified or rejected,
//! 2 inconclusive, 3 input error.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use crate::certify::{self, CertifyError, Verdict};
use crate::hilbert::{self, HilbertValue};
use crate::numfield::{self, FieldSpec, Place};
use crate::search::{self, FieldArithmeticProfile, SearchError};
use crate::stacky::{self, StackyCurveModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "demistack",
    version,
    about = "Constructs and verifies genus-1/2 stacky curves with local integral points everywhere but no global ones",
    after_help = "Thread count for the parallel search is taken from RAYON_NUM_THREADS."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a qualifying pair (p, q) over the field (or verify an
    /// explicitly given pair) and write a certificate.
    Construct {
        /// Field polynomial in x; defaults to the rationals.
        #[arg(long, default_value = "x")]
        field: String,
        /// Explicit p (element grammar in t); requires --q.
        #[arg(long)]
        p: Option<String>,
        /// Explicit q (element grammar in t); requires --p.
        #[arg(long)]
        q: Option<String>,
        /// Norm bound for the candidate scan.
        #[arg(long, default_value_t = 100)]
        bound: u64,
        /// Profile override file (field, N, unit generators).
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Output path for the certificate; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Extra places to include in the local table (e.g. 7 or 17:1 or inf).
        #[arg(long = "place")]
        places: Vec<String>,
        /// Print progress information to stderr.
        #[arg(short, long, action = clap::ArgAction::Count)]
        verbose: u8,
    },
    /// Re-validate a certificate file from scratch.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Genus of the stacky model attached to a pair.
    Genus {
        #[arg(long, default_value = "x")]
        field: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Hilbert symbol of (p, q) at one place, or the full support table with
    /// the product-formula check when no place is given.
    Hilbert {
        #[arg(long, default_value = "x")]
        field: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Place selector: a prime, prime:index, inf, or inf:index.
        #[arg(long)]
        place: Option<String>,
    },
    /// Local integral-point certificates for a coprime pair.
    LocalPoints {
        #[arg(long, default_value = "x")]
        field: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Extra places to include beyond the exceptional set.
        #[arg(long = "place")]
        places: Vec<String>,
    },
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_INPUT_ERROR
}

fn parse_place_arg(spec: &FieldSpec, text: &str) -> Result<Place, String> {
    let (head, idx) = match text.split_once(':') {
        Some((h, i)) => (
            h,
            i.parse::<usize>().map_err(|_| format!("bad place index in `{text}`"))?,
        ),
        None => (text, 0usize),
    };
    if head == "inf" {
        let reals = spec.real_places();
        return reals
            .get(idx)
            .cloned()
            .map(Place::Real)
            .ok_or_else(|| format!("field has no real place of index {idx}"));
    }
    let ell: u64 = head
        .parse()
        .map_err(|_| format!("place selector `{text}` is neither a prime nor `inf`"))?;
    let places = spec.places_above(ell).map_err(|e| e.to_string())?;
    places
        .get(idx)
        .cloned()
        .map(Place::Finite)
        .ok_or_else(|| format!("no place of index {idx} above {ell}"))
}

fn load_profile(
    field_text: &str,
    path: &Option<PathBuf>,
) -> Result<(FieldSpec, FieldArithmeticProfile), String> {
    match path {
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| format!("cannot read profile: {e}"))?;
            let profile = search::parse_profile_bytes(&bytes).map_err(|e| e.to_string())?;
            if field_text != "x" {
                let requested = numfield::parse_field(field_text).map_err(|e| e.to_string())?;
                if requested != profile.spec {
                    return Err("profile field differs from --field".into());
                }
            }
            Ok((profile.spec.clone(), profile))
        }
        None => {
            let spec = numfield::parse_field(field_text).map_err(|e| e.to_string())?;
            let profile = search::compute_profile(&spec).map_err(|e| e.to_string())?;
            Ok((spec, profile))
        }
    }
}

pub fn dispatch(cli: Cli) -> i32 {
    match cli.command {
        Command::Construct {
            field,
            p,
            q,
            bound,
            profile,
            out,
            places,
            verbose,
        } => construct(field, p, q, bound, profile, out, places, verbose),
        Command::Verify { cert } => verify(cert),
        Command::Genus { field, p, q } => genus_cmd(field, p, q),
        Command::Hilbert { field, p, q, place } => hilbert_cmd(field, p, q, place),
        Command::LocalPoints { field, p, q, places } => local_points(field, p, q, places),
    }
}

#[allow(clippy::too_many_arguments)]
fn construct(
    field: String,
    p: Option<String>,
    q: Option<String>,
    bound: u64,
    profile_path: Option<PathBuf>,
    out: Option<PathBuf>,
    place_args: Vec<String>,
    verbose: u8,
) -> i32 {
    if bound < 2 {
        return fail("--bound must be at least 2");
    }
    let (spec, profile) = match load_profile(&field, &profile_path) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let extra_places = {
        let mut v = Vec::new();
        for s in &place_args {
            match parse_place_arg(&spec, s) {
                Ok(pl) => v.push(pl),
                Err(e) => return fail(e),
            }
        }
        v
    };
    let (pe, qe) = match (&p, &q) {
        (Some(ps), Some(qs)) => {
            let pe = match numfield::parse_element(&spec, ps) {
                Ok(e) => e,
                Err(e) => return fail(format!("--p: {e}")),
            };
            let qe = match numfield::parse_element(&spec, qs) {
                Ok(e) => e,
                Err(e) => return fail(format!("--q: {e}")),
            };
            (pe, qe)
        }
        (None, None) => {
            if verbose > 0 {
                eprintln!(
                    "searching pairs over {} with norm bound {bound}",
                    spec.min_poly_text()
                );
            }
            match search::find_prime_pair(&profile, bound) {
                Ok(pair) => pair,
                Err(SearchError::SearchExhausted { bound }) => {
                    eprintln!("search exhausted: no qualifying pair below norm {bound}");
                    println!(
                        "{}",
                        json!({"verdict": "inconclusive", "reason": "search exhausted"})
                    );
                    return EXIT_INCONCLUSIVE;
                }
                Err(e) => return fail(e),
            }
        }
        _ => return fail("--p and --q must be given together"),
    };
    if verbose > 0 {
        eprintln!(
            "pair: p = {}, q = {}",
            spec.element_to_string(&pe),
            spec.element_to_string(&qe)
        );
    }
    let model = match StackyCurveModel::new(spec.clone(), pe, qe) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let report = match stacky::build_counterexample_report(
        &model,
        &profile.trivializing_n,
        &profile.unit_generators,
        &extra_places,
    ) {
        Ok(r) => r,
        Err(stacky::StackyError::GlobalCheckInconclusive(reason)) => {
            eprintln!("inconclusive: {reason}");
            println!("{}", json!({"verdict": "inconclusive", "reason": reason}));
            return EXIT_INCONCLUSIVE;
        }
        Err(e) => return fail(e),
    };
    let bytes = certify::serialize_report(&report);
    match &out {
        Some(path) => {
            if let Err(e) = fs::write(path, &bytes) {
                return fail(format!("cannot write certificate: {e}"));
            }
            println!(
                "{}",
                json!({
                    "verdict": "constructed",
                    "p": spec.element_to_string(report_p(&report)),
                    "q": spec.element_to_string(report_q(&report)),
                    "certificate": path.display().to_string(),
                })
            );
        }
        None => {
            // the certificate itself is the machine-readable output
            print!("{}", String::from_utf8_lossy(&bytes));
        }
    }
    EXIT_OK
}

fn report_p(r: &stacky::CounterexampleReport) -> &numfield::FieldElement {
    &r.p
}

fn report_q(r: &stacky::CounterexampleReport) -> &numfield::FieldElement {
    &r.q
}

fn verify(cert: PathBuf) -> i32 {
    let bytes = match fs::read(&cert) {
        Ok(b) => b,
        Err(e) => return fail(format!("cannot read certificate: {e}")),
    };
    match certify::validate_report(&bytes) {
        Ok(Verdict::Accepted) => {
            println!("{}", json!({"verdict": "accepted"}));
            EXIT_OK
        }
        Ok(Verdict::Rejected(reason)) => {
            eprintln!("rejected: {reason}");
            println!("{}", json!({"verdict": "rejected", "reason": reason}));
            EXIT_REJECTED
        }
        Err(CertifyError::MalformedInput(m)) => fail(m),
    }
}

fn genus_cmd(field: String, p: String, q: String) -> i32 {
    let spec = match numfield::parse_field(&field) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let pe = match numfield::parse_element(&spec, &p) {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    let qe = match numfield::parse_element(&spec, &q) {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    let model = match StackyCurveModel::new(spec, pe, qe) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let g = model.model_genus();
    println!(
        "{}",
        json!({"genus": {"num": g.numer().to_string(), "den": g.denom().to_string()}})
    );
    EXIT_OK
}

fn place_label(spec: &FieldSpec, place: &Place) -> String {
    match place {
        Place::Finite(fp) => {
            let places = spec
                .places_above(fp.rational_prime)
                .expect("place exists");
            let idx = places.iter().position(|p| p == fp).unwrap_or(0);
            if places.len() > 1 {
                format!("{}:{}", fp.rational_prime, idx)
            } else {
                format!("{}", fp.rational_prime)
            }
        }
        Place::Real(rp) => {
            let reals = spec.real_places();
            let idx = reals.iter().position(|r| r == rp).unwrap_or(0);
            if reals.len() > 1 {
                format!("inf:{idx}")
            } else {
                "inf".to_string()
            }
        }
    }
}

fn hilbert_cmd(field: String, p: String, q: String, place: Option<String>) -> i32 {
    let spec = match numfield::parse_field(&field) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let a = match numfield::parse_element(&spec, &p) {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    let b = match numfield::parse_element(&spec, &q) {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    match place {
        Some(sel) => {
            let pl = match parse_place_arg(&spec, &sel) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            match hilbert::hilbert_symbol(&spec, &a, &b, &pl) {
                Ok(v) => {
                    println!(
                        "{}",
                        json!({"place": place_label(&spec, &pl), "symbol": v.to_string()})
                    );
                    EXIT_OK
                }
                Err(e) => fail(e),
            }
        }
        None => {
            // full table over real places and the support of 2ab
            let den_a = a.denominator();
            let den_b = b.denominator();
            let ai = spec.mul_int(&a, &(&den_a * &den_a));
            let bi = spec.mul_int(&b, &(&den_b * &den_b));
            let two_ab = spec.mul_int(&spec.mul(&ai, &bi), &BigInt::from(2));
            let mut entries = Vec::new();
            let mut product = HilbertValue::Plus;
            let mut places: Vec<Place> =
                spec.real_places().into_iter().map(Place::Real).collect();
            match spec.ideal_support(&two_ab) {
                Ok(sup) => places.extend(sup.into_iter().map(Place::Finite)),
                Err(e) => return fail(e),
            }
            for pl in places {
                match hilbert::hilbert_symbol(&spec, &ai, &bi, &pl) {
                    Ok(v) => {
                        product = product.times(v);
                        entries.push(json!({
                            "place": place_label(&spec, &pl),
                            "symbol": v.to_string(),
                        }));
                    }
                    Err(e) => return fail(e),
                }
            }
            println!(
                "{}",
                json!({
                    "symbols": entries,
                    "product": product.to_string(),
                    "product_formula_holds": product == HilbertValue::Plus,
                })
            );
            EXIT_OK
        }
    }
}

fn local_points(field: String, p: String, q: String, place_args: Vec<String>) -> i32 {
    let spec = match numfield::parse_field(&field) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let pe = match numfield::parse_element(&spec, &p) {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    let qe = match numfield::parse_element(&spec, &q) {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    let mut extras = Vec::new();
    for s in &place_args {
        match parse_place_arg(&spec, s) {
            Ok(pl) => extras.push(pl),
            Err(e) => return fail(e),
        }
    }
    // Local analysis needs only coprimality, not primality.
    let table = match stacky::local_table(&spec, &pe, &qe, &extras) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let entries: Vec<serde_json::Value> = table
        .entries
        .iter()
        .map(|e| {
            json!({
                "place": place_label(&spec, &e.place),
                "twist": match e.twist {
                    stacky::TwistTag::ByP => "p",
                    stacky::TwistTag::ByQ => "q",
                },
                "twist_value": spec.element_to_string(&e.twist_value),
                "point": [
                    spec.element_to_string(&e.point.0),
                    spec.element_to_string(&e.point.1),
                    spec.element_to_string(&e.point.2),
                ],
                "precision": "exact",
            })
        })
        .collect();
    println!(
        "{}",
        json!({"entries": entries, "generic_rule": table.generic_rule})
    );
    EXIT_OK
}
