//! JSON encodings of the library types.
//!
//! Rationals are canonical `"p/q"` strings. Every `*Json` type round-trips
//! through the matching library type; conversion into the library re-runs
//! its constructors, so malformed but well-typed input is rejected with the
//! library error.

use std::collections::BTreeMap;
use std::fmt;

use lacuna_core::corpus::{CorpusEntry, KnownFact};
use lacuna_core::engine::{DimensionCertificate, PartialLacunarySolution, Ray};
use lacuna_core::linalg::KernelBasis;
use lacuna_core::operator::{FiniteSolution, OperatorSpec, ResidueMask};
use lacuna_core::rational::{parse, to_canonical};
use lacuna_core::sequence::{
    FiniteTable, GeometricSupport, Periodic, Polynomial, ResiduePolynomial, SequenceSpec, Window,
};
use lacuna_core::{Error, Rational, Result};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A rational in canonical string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Q, E> {
                parse(s).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(n.into())))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(n.into())))
            }
        }
        d.deserialize_any(V)
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn rs(v: Vec<Q>) -> Vec<Rational> {
    v.into_iter().map(|q| q.0).collect()
}

/// `[lo, hi]`.
pub type WindowJson = [i64; 2];

fn window_json(w: &Window) -> WindowJson {
    [w.lo(), w.hi()]
}

fn window_from(w: WindowJson) -> Result<Window> {
    Window::new(w[0], w[1])
}

/// Sequence encoding, discriminated by `"kind"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceJson {
    #[allow(missing_docs)]
    FiniteTable { anchor: i64, values: Vec<Q>, default: Q },
    #[allow(missing_docs)]
    Periodic { period: u64, values: Vec<Q>, offset: i64 },
    /// `per_class` maps a residue (as a decimal string) to ascending
    /// polynomial coefficients.
    #[allow(missing_docs)]
    ResiduePoly { modulus: u64, per_class: BTreeMap<String, Vec<Q>> },
    #[allow(missing_docs)]
    GeometricSupport {
        scale: u64,
        shift: i64,
        value: Q,
        #[serde(default)]
        allow_negative_m: bool,
    },
}

impl From<&SequenceSpec> for SequenceJson {
    fn from(s: &SequenceSpec) -> Self {
        match s {
            SequenceSpec::FiniteTable(t) => SequenceJson::FiniteTable {
                anchor: t.anchor(),
                values: qs(t.values()),
                default: Q(t.default_value().clone()),
            },
            SequenceSpec::Periodic(p) => {
                SequenceJson::Periodic { period: p.period(), values: qs(p.values()), offset: p.offset() }
            }
            SequenceSpec::ResiduePolynomial(p) => SequenceJson::ResiduePoly {
                modulus: p.modulus(),
                per_class: p.per_class().iter().map(|(c, poly)| (c.to_string(), qs(poly.coeffs()))).collect(),
            },
            SequenceSpec::GeometricSupport(g) => SequenceJson::GeometricSupport {
                scale: g.scale(),
                shift: g.shift(),
                value: Q(g.value().clone()),
                allow_negative_m: g.allow_negative_m(),
            },
        }
    }
}

impl TryFrom<SequenceJson> for SequenceSpec {
    type Error = Error;

    fn try_from(j: SequenceJson) -> Result<Self> {
        Ok(match j {
            SequenceJson::FiniteTable { anchor, values, default } => {
                SequenceSpec::FiniteTable(FiniteTable::new(anchor, rs(values), default.0)?)
            }
            SequenceJson::Periodic { period, values, offset } => {
                if period != values.len() as u64 {
                    return Err(Error::InvalidSequence("period must equal the number of values"));
                }
                SequenceSpec::Periodic(Periodic::new(rs(values), offset)?)
            }
            SequenceJson::ResiduePoly { modulus, per_class } => {
                let mut classes = BTreeMap::new();
                for (c, v) in per_class {
                    let c: u64 =
                        c.parse().map_err(|_| Error::InvalidSequence("residue class keys must be integers"))?;
                    classes.insert(c, Polynomial::new(rs(v)));
                }
                SequenceSpec::ResiduePolynomial(ResiduePolynomial::new(modulus, classes)?)
            }
            SequenceJson::GeometricSupport { scale, shift, value, allow_negative_m } => {
                SequenceSpec::GeometricSupport(GeometricSupport::new(scale, shift, value.0, allow_negative_m)?)
            }
        })
    }
}

/// `{ "order": r, "coeffs": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    #[allow(missing_docs)]
    pub order: usize,
    #[allow(missing_docs)]
    pub coeffs: Vec<SequenceJson>,
}

impl From<&OperatorSpec> for OperatorJson {
    fn from(op: &OperatorSpec) -> Self {
        OperatorJson { order: op.order(), coeffs: op.coeffs().iter().map(SequenceJson::from).collect() }
    }
}

impl TryFrom<OperatorJson> for OperatorSpec {
    type Error = Error;

    fn try_from(j: OperatorJson) -> Result<Self> {
        let coeffs = j.coeffs.into_iter().map(SequenceSpec::try_from).collect::<Result<Vec<_>>>()?;
        OperatorSpec::new(j.order, coeffs)
    }
}

/// `{ "anchor": n, "values": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionJson {
    #[allow(missing_docs)]
    pub anchor: i64,
    #[allow(missing_docs)]
    pub values: Vec<Q>,
}

impl From<&FiniteSolution> for SolutionJson {
    fn from(s: &FiniteSolution) -> Self {
        SolutionJson { anchor: s.anchor(), values: qs(s.values()) }
    }
}

impl TryFrom<SolutionJson> for FiniteSolution {
    type Error = Error;

    fn try_from(j: SolutionJson) -> Result<Self> {
        FiniteSolution::new(j.anchor, rs(j.values))
    }
}

fn solutions_from(v: Vec<SolutionJson>) -> Result<Vec<FiniteSolution>> {
    v.into_iter().map(FiniteSolution::try_from).collect()
}

/// `{ "window": [lo, hi], "vectors": [[...], ...] }`, one dense vector per
/// basis element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBasisJson {
    #[allow(missing_docs)]
    pub window: WindowJson,
    #[allow(missing_docs)]
    pub vectors: Vec<Vec<Q>>,
}

impl From<&KernelBasis> for KernelBasisJson {
    fn from(k: &KernelBasis) -> Self {
        KernelBasisJson { window: window_json(&k.window()), vectors: k.vectors().iter().map(|v| qs(v)).collect() }
    }
}

impl TryFrom<KernelBasisJson> for KernelBasis {
    type Error = Error;

    fn try_from(j: KernelBasisJson) -> Result<Self> {
        let vectors: Vec<Vec<Rational>> = j.vectors.into_iter().map(rs).collect();
        KernelBasis::from_vectors(window_from(j.window)?, &vectors)
    }
}

/// `{ "k": k, "window": [lo, hi], "solutions": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    #[allow(missing_docs)]
    pub k: usize,
    #[allow(missing_docs)]
    pub window: WindowJson,
    #[allow(missing_docs)]
    pub solutions: Vec<SolutionJson>,
}

impl From<&DimensionCertificate> for CertificateJson {
    fn from(c: &DimensionCertificate) -> Self {
        CertificateJson {
            k: c.k,
            window: window_json(&c.window),
            solutions: c.solutions.iter().map(SolutionJson::from).collect(),
        }
    }
}

impl TryFrom<CertificateJson> for DimensionCertificate {
    type Error = Error;

    fn try_from(j: CertificateJson) -> Result<Self> {
        Ok(DimensionCertificate { k: j.k, window: window_from(j.window)?, solutions: solutions_from(j.solutions)? })
    }
}

/// Direction tag of a lacunary prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayJson {
    #[allow(missing_docs)]
    Positive,
    #[allow(missing_docs)]
    Negative,
}

/// `{ "ray": "positive", "blocks": [...], "gap_profile": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LacunaryJson {
    #[allow(missing_docs)]
    pub ray: RayJson,
    #[allow(missing_docs)]
    pub blocks: Vec<SolutionJson>,
    #[allow(missing_docs)]
    pub gap_profile: Vec<i64>,
}

impl From<&PartialLacunarySolution> for LacunaryJson {
    fn from(p: &PartialLacunarySolution) -> Self {
        LacunaryJson {
            ray: match p.ray {
                Ray::Positive => RayJson::Positive,
                Ray::Negative => RayJson::Negative,
            },
            blocks: p.blocks.iter().map(SolutionJson::from).collect(),
            gap_profile: p.gap_profile.clone(),
        }
    }
}

impl TryFrom<LacunaryJson> for PartialLacunarySolution {
    type Error = Error;

    fn try_from(j: LacunaryJson) -> Result<Self> {
        Ok(PartialLacunarySolution {
            ray: match j.ray {
                RayJson::Positive => Ray::Positive,
                RayJson::Negative => Ray::Negative,
            },
            blocks: solutions_from(j.blocks)?,
            gap_profile: j.gap_profile,
        })
    }
}

/// `{ "modulus": m, "allowed": [...] }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskJson {
    #[allow(missing_docs)]
    pub modulus: u64,
    #[allow(missing_docs)]
    pub allowed: Vec<u64>,
}

impl From<&ResidueMask> for MaskJson {
    fn from(m: &ResidueMask) -> Self {
        MaskJson { modulus: m.modulus(), allowed: m.allowed().iter().copied().collect() }
    }
}

/// A known fact, discriminated by `"fact"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum FactJson {
    #[allow(missing_docs)]
    KernelDim { window: WindowJson, dim: usize },
    #[allow(missing_docs)]
    FreeKernelDim { window: WindowJson, dim: usize },
    #[allow(missing_docs)]
    ProjectionDims { ray_start: i64, budget: usize, dims: Vec<usize> },
    #[allow(missing_docs)]
    Certifies { k: usize, budget: u64 },
    #[allow(missing_docs)]
    CertifyInconclusive { k: usize, budget: u64 },
    #[allow(missing_docs)]
    SplitSupports { window: WindowJson, supports: Vec<Vec<i64>> },
    #[allow(missing_docs)]
    ResidueCertified { coeff_masks: Vec<MaskJson>, solution_mask: MaskJson },
    #[allow(missing_docs)]
    BuildsLacunary { gap: i64, budget: u64 },
}

impl From<&KnownFact> for FactJson {
    fn from(f: &KnownFact) -> Self {
        match f {
            KnownFact::KernelDim { window, dim } => FactJson::KernelDim { window: window_json(window), dim: *dim },
            KnownFact::FreeKernelDim { window, dim } => {
                FactJson::FreeKernelDim { window: window_json(window), dim: *dim }
            }
            KnownFact::ProjectionDims { ray_start, budget, dims } => {
                FactJson::ProjectionDims { ray_start: *ray_start, budget: *budget, dims: dims.clone() }
            }
            KnownFact::Certifies { k, budget } => FactJson::Certifies { k: *k, budget: *budget },
            KnownFact::CertifyInconclusive { k, budget } => FactJson::CertifyInconclusive { k: *k, budget: *budget },
            KnownFact::SplitSupports { window, supports } => {
                FactJson::SplitSupports { window: window_json(window), supports: supports.clone() }
            }
            KnownFact::ResidueCertified { coeff_masks, solution_mask } => FactJson::ResidueCertified {
                coeff_masks: coeff_masks.iter().map(MaskJson::from).collect(),
                solution_mask: solution_mask.into(),
            },
            KnownFact::BuildsLacunary { gap, budget } => FactJson::BuildsLacunary { gap: *gap, budget: *budget },
        }
    }
}

/// A full corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryJson {
    #[allow(missing_docs)]
    pub name: String,
    #[allow(missing_docs)]
    pub operator: OperatorJson,
    #[allow(missing_docs)]
    pub sequence: Option<SequenceJson>,
    #[allow(missing_docs)]
    pub known_facts: Vec<FactJson>,
}

impl From<&CorpusEntry> for EntryJson {
    fn from(e: &CorpusEntry) -> Self {
        EntryJson {
            name: e.name.clone(),
            operator: (&e.operator).into(),
            sequence: e.sequence.as_ref().map(SequenceJson::from),
            known_facts: e.known_facts.iter().map(FactJson::from).collect(),
        }
    }
}

/// Manifest line for one corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    #[allow(missing_docs)]
    pub name: String,
    #[allow(missing_docs)]
    pub has_sequence: bool,
    #[allow(missing_docs)]
    pub known_facts: Vec<FactJson>,
}

/// Any serialized object `verify` accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCertificate {
    #[allow(missing_docs)]
    Kernel(KernelBasis),
    #[allow(missing_docs)]
    Dimension(DimensionCertificate),
    #[allow(missing_docs)]
    Lacunary(PartialLacunarySolution),
}

impl AnyCertificate {
    /// Short name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            AnyCertificate::Kernel(_) => "kernel_basis",
            AnyCertificate::Dimension(_) => "dimension_certificate",
            AnyCertificate::Lacunary(_) => "partial_lacunary_solution",
        }
    }

    /// Re-checks the object against `op`.
    pub fn verify(&self, op: &OperatorSpec) -> Result<()> {
        match self {
            AnyCertificate::Kernel(k) => k.verify(op),
            AnyCertificate::Dimension(c) => c.verify(op),
            AnyCertificate::Lacunary(p) => p.verify(op),
        }
    }
}

/// Failure to read one of the documented formats.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    /// Malformed JSON or wrong shape; carries line and column.
    #[error("ParseError in {what}: {source}")]
    Parse {
        /// What was being read.
        what: &'static str,
        /// Underlying error with position.
        source: serde_json::Error,
    },
    /// Well-formed input rejected by the library.
    #[error("{0}")]
    Semantic(#[from] Error),
    /// `verify` input matches none of the certificate shapes.
    #[error("ParseError in certificate: expected one of the keys \"vectors\", \"solutions\" or \"gap_profile\"")]
    UnknownCertificate,
}

fn parse_json<'a, T: Deserialize<'a>>(what: &'static str, text: &'a str) -> std::result::Result<T, FormatError> {
    serde_json::from_str(text).map_err(|source| FormatError::Parse { what, source })
}

/// Reads an operator.
pub fn parse_operator(text: &str) -> std::result::Result<OperatorSpec, FormatError> {
    Ok(parse_json::<OperatorJson>("operator", text)?.try_into()?)
}

/// Reads a sequence.
pub fn parse_sequence(text: &str) -> std::result::Result<SequenceSpec, FormatError> {
    Ok(parse_json::<SequenceJson>("sequence", text)?.try_into()?)
}

/// Reads a kernel basis, dimension certificate or lacunary prefix, choosing
/// by the keys present.
pub fn parse_certificate(text: &str) -> std::result::Result<AnyCertificate, FormatError> {
    let value: serde_json::Value = parse_json("certificate", text)?;
    let has = |k: &str| value.get(k).is_some();
    Ok(if has("vectors") {
        AnyCertificate::Kernel(parse_json::<KernelBasisJson>("certificate", text)?.try_into()?)
    } else if has("solutions") {
        AnyCertificate::Dimension(parse_json::<CertificateJson>("certificate", text)?.try_into()?)
    } else if has("gap_profile") {
        AnyCertificate::Lacunary(parse_json::<LacunaryJson>("certificate", text)?.try_into()?)
    } else {
        return Err(FormatError::UnknownCertificate);
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
