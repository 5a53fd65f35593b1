//! The input record for one equivalence class of quasihereditary algebras:
//! poset, standard/costandard composition multiplicities, Hom-space
//! dimensions between standard modules, and simple dimensions — together
//! with exhaustive consistency validation, the derived filtration matrices
//! and the JSON interchange format.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::IntMat;
use crate::poset::{Poset, PosetError, PosetSpec};

/// Largest integer magnitude representable exactly by a JSON number
/// (2^53 − 1). Anything bigger travels as a decimal string.
pub const MAX_JSON_SAFE_INT: u64 = (1 << 53) - 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: String,
        got: String,
    },
}

/// The full data an equivalence class provides.
///
/// Matrix conventions, all indexed by position in the label list:
/// * `delta[i][j]` — multiplicity of the `j`-th simple in the `i`-th
///   standard module (row = standard, column = simple);
/// * `nabla[i][j]` — same for costandard modules;
/// * `hom[j][i]`   — dimension of the Hom-space from the `j`-th standard
///   module to the `i`-th (row = source);
/// * `simple_dims[i]` — dimension of the `i`-th simple module.
///
/// Immutable after validation; safe to share between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QhData {
    pub poset: Poset,
    pub delta: IntMat,
    pub nabla: IntMat,
    pub hom: IntMat,
    pub simple_dims: Vec<BigInt>,
}

/// Filtration multiplicities of projectives and injectives, derived from the
/// reciprocity transposes `f_delta = nablaᵀ` and `f_nabla = deltaᵀ`.
/// `f_delta[k][j]` counts the `j`-th standard module in a filtration of the
/// `k`-th projective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationMatrices {
    pub f_delta: IntMat,
    pub f_nabla: IntMat,
}

/// One violated consistency rule, with the offending indices and value.
/// Validation collects every violation instead of stopping at the first.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `delta[i][i]` must equal 1.
    DeltaDiagonal { index: usize, value: BigInt },
    /// `nabla[i][i]` must equal 1.
    NablaDiagonal { index: usize, value: BigInt },
    /// `hom[i][i]` must equal 1.
    HomDiagonal { index: usize, value: BigInt },
    /// `delta[i][j]` must vanish unless `j ⊴ i`.
    DeltaSupport {
        row: usize,
        col: usize,
        value: BigInt,
    },
    /// `nabla[i][j]` must vanish unless `j ⊴ i`.
    NablaSupport {
        row: usize,
        col: usize,
        value: BigInt,
    },
    /// `hom[j][i]` must vanish unless `j ⊴ i`.
    HomSupport {
        source: usize,
        target: usize,
        value: BigInt,
    },
    /// `hom[j][i] ≤ delta[i][j]` for `j ≠ i`; genuine data can never exceed
    /// this bound.
    HomExceedsDelta {
        source: usize,
        target: usize,
        hom: BigInt,
        delta: BigInt,
    },
    /// Multiplicities are nonnegative.
    NegativeEntry {
        matrix: &'static str,
        row: usize,
        col: usize,
        value: BigInt,
    },
    /// `simple_dims[i] ≥ 1`.
    SimpleDim { index: usize, value: BigInt },
}

impl Violation {
    /// Stable machine-readable rule name.
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::DeltaDiagonal { .. } => "delta_diagonal",
            Violation::NablaDiagonal { .. } => "nabla_diagonal",
            Violation::HomDiagonal { .. } => "hom_diagonal",
            Violation::DeltaSupport { .. } => "delta_support",
            Violation::NablaSupport { .. } => "nabla_support",
            Violation::HomSupport { .. } => "hom_support",
            Violation::HomExceedsDelta { .. } => "hom_exceeds_delta",
            Violation::NegativeEntry { .. } => "negative_entry",
            Violation::SimpleDim { .. } => "simple_dim",
        }
    }

    /// The offending indices, in the order the rule names them.
    pub fn indices(&self) -> Vec<usize> {
        match self {
            Violation::DeltaDiagonal { index, .. }
            | Violation::NablaDiagonal { index, .. }
            | Violation::HomDiagonal { index, .. }
            | Violation::SimpleDim { index, .. } => vec![*index],
            Violation::DeltaSupport { row, col, .. }
            | Violation::NablaSupport { row, col, .. }
            | Violation::NegativeEntry { row, col, .. } => vec![*row, *col],
            Violation::HomSupport { source, target, .. }
            | Violation::HomExceedsDelta { source, target, .. } => vec![*source, *target],
        }
    }

    /// The offending value.
    pub fn value(&self) -> &BigInt {
        match self {
            Violation::DeltaDiagonal { value, .. }
            | Violation::NablaDiagonal { value, .. }
            | Violation::HomDiagonal { value, .. }
            | Violation::DeltaSupport { value, .. }
            | Violation::NablaSupport { value, .. }
            | Violation::HomSupport { value, .. }
            | Violation::NegativeEntry { value, .. }
            | Violation::SimpleDim { value, .. } => value,
            Violation::HomExceedsDelta { hom, .. } => hom,
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DeltaDiagonal { index, value } => {
                write!(f, "delta[{index}][{index}] = {value}, must equal 1")
            }
            Violation::NablaDiagonal { index, value } => {
                write!(f, "nabla[{index}][{index}] = {value}, must equal 1")
            }
            Violation::HomDiagonal { index, value } => {
                write!(f, "hom[{index}][{index}] = {value}, must equal 1")
            }
            Violation::DeltaSupport { row, col, value } => write!(
                f,
                "delta[{row}][{col}] = {value}, but label {col} is not below label {row}"
            ),
            Violation::NablaSupport { row, col, value } => write!(
                f,
                "nabla[{row}][{col}] = {value}, but label {col} is not below label {row}"
            ),
            Violation::HomSupport {
                source,
                target,
                value,
            } => write!(
                f,
                "hom[{source}][{target}] = {value}, but label {source} is not below label {target}"
            ),
            Violation::HomExceedsDelta {
                source,
                target,
                hom,
                delta,
            } => write!(
                f,
                "hom[{source}][{target}] = {hom} exceeds delta[{target}][{source}] = {delta}"
            ),
            Violation::NegativeEntry {
                matrix,
                row,
                col,
                value,
            } => write!(f, "{matrix}[{row}][{col}] = {value}, must be nonnegative"),
            Violation::SimpleDim { index, value } => {
                write!(f, "simple_dims[{index}] = {value}, must be at least 1")
            }
        }
    }
}

impl QhData {
    /// Assembles a record, checking only shapes (all matrices square of side
    /// `labels.len()`, dimension vector of the same length). Consistency of
    /// the contents is the job of [`QhData::validate`].
    pub fn new(
        poset: Poset,
        delta: IntMat,
        nabla: IntMat,
        hom: IntMat,
        simple_dims: Vec<BigInt>,
    ) -> Result<Self, ModelError> {
        let n = poset.len();
        for (name, m) in [("delta", &delta), ("nabla", &nabla), ("hom", &hom)] {
            if m.rows() != n || m.cols() != n {
                return Err(ModelError::DimensionMismatch {
                    what: format!("matrix `{name}`"),
                    expected: format!("{n}x{n}"),
                    got: format!("{}x{}", m.rows(), m.cols()),
                });
            }
        }
        if simple_dims.len() != n {
            return Err(ModelError::DimensionMismatch {
                what: "vector `simple_dims`".into(),
                expected: format!("{n} entries"),
                got: format!("{} entries", simple_dims.len()),
            });
        }
        Ok(Self {
            poset,
            delta,
            nabla,
            hom,
            simple_dims,
        })
    }

    /// Number of labels.
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// Checks every consistency rule and returns the complete list of
    /// violations, empty exactly when the record is consistent.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        for (name, m) in [("delta", &self.delta), ("nabla", &self.nabla), ("hom", &self.hom)] {
            for i in 0..n {
                for j in 0..n {
                    if m[(i, j)].is_negative() {
                        out.push(Violation::NegativeEntry {
                            matrix: name,
                            row: i,
                            col: j,
                            value: m[(i, j)].clone(),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            if !self.delta[(i, i)].is_one() {
                out.push(Violation::DeltaDiagonal {
                    index: i,
                    value: self.delta[(i, i)].clone(),
                });
            }
            if !self.nabla[(i, i)].is_one() {
                out.push(Violation::NablaDiagonal {
                    index: i,
                    value: self.nabla[(i, i)].clone(),
                });
            }
            if !self.hom[(i, i)].is_one() {
                out.push(Violation::HomDiagonal {
                    index: i,
                    value: self.hom[(i, i)].clone(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || self.poset.leq(j, i) {
                    continue;
                }
                if !self.delta[(i, j)].is_zero() {
                    out.push(Violation::DeltaSupport {
                        row: i,
                        col: j,
                        value: self.delta[(i, j)].clone(),
                    });
                }
                if !self.nabla[(i, j)].is_zero() {
                    out.push(Violation::NablaSupport {
                        row: i,
                        col: j,
                        value: self.nabla[(i, j)].clone(),
                    });
                }
            }
        }
        for source in 0..n {
            for target in 0..n {
                if source == target {
                    continue;
                }
                let h = &self.hom[(source, target)];
                if !self.poset.leq(source, target) {
                    if !h.is_zero() {
                        out.push(Violation::HomSupport {
                            source,
                            target,
                            value: h.clone(),
                        });
                    }
                } else if *h > self.delta[(target, source)] {
                    out.push(Violation::HomExceedsDelta {
                        source,
                        target,
                        hom: h.clone(),
                        delta: self.delta[(target, source)].clone(),
                    });
                }
            }
        }
        for (i, d) in self.simple_dims.iter().enumerate() {
            if *d < BigInt::one() {
                out.push(Violation::SimpleDim {
                    index: i,
                    value: d.clone(),
                });
            }
        }
        out
    }

    /// The reciprocity transposes (see [`FiltrationMatrices`]).
    pub fn filtration_matrices(&self) -> FiltrationMatrices {
        FiltrationMatrices {
            f_delta: self.nabla.transpose(),
            f_nabla: self.delta.transpose(),
        }
    }

    /// Parses the JSON interchange format. Unknown keys are rejected, and
    /// integers above 2^53 − 1 must be written as decimal strings.
    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let raw: RawQhData = serde_json::from_str(text)?;
        let n = raw.labels.len();
        let poset = Poset::build(&PosetSpec {
            labels: raw.labels,
            relations: raw.order,
        })?;
        let delta = mat_from_raw("delta", raw.delta, n)?;
        let nabla = mat_from_raw("nabla", raw.nabla, n)?;
        let hom = mat_from_raw("hom", raw.hom, n)?;
        let simple_dims = raw.simple_dims.into_iter().map(|x| x.0).collect();
        QhData::new(poset, delta, nabla, hom, simple_dims)
    }

    /// Serializes to the JSON interchange format (compact, one line). The
    /// order list is the full strict closure, so reparsing reproduces an
    /// identical record.
    pub fn to_json_string(&self) -> String {
        let raw = RawQhData {
            labels: self.poset.labels().to_vec(),
            order: self.poset.strict_pairs(),
            delta: mat_to_raw(&self.delta),
            nabla: mat_to_raw(&self.nabla),
            hom: mat_to_raw(&self.hom),
            simple_dims: self.simple_dims.iter().cloned().map(JsonInt).collect(),
        };
        serde_json::to_string(&raw).expect("record serializes")
    }
}

fn mat_from_raw(name: &str, rows: Vec<Vec<JsonInt>>, n: usize) -> Result<IntMat, ModelError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(ModelError::DimensionMismatch {
            what: format!("matrix `{name}`"),
            expected: format!("{n}x{n}"),
            got: format!(
                "{} rows of lengths {:?}",
                rows.len(),
                rows.iter().map(|r| r.len()).collect::<Vec<_>>()
            ),
        });
    }
    IntMat::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect(),
    )
    .map_err(|_| ModelError::DimensionMismatch {
        what: format!("matrix `{name}`"),
        expected: "rectangular rows".into(),
        got: "ragged rows".into(),
    })
}

fn mat_to_raw(m: &IntMat) -> Vec<Vec<JsonInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().cloned().map(JsonInt).collect())
        .collect()
}

/// On-disk shape of the interchange format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQhData {
    labels: Vec<String>,
    order: Vec<(String, String)>,
    delta: Vec<Vec<JsonInt>>,
    nabla: Vec<Vec<JsonInt>>,
    hom: Vec<Vec<JsonInt>>,
    simple_dims: Vec<JsonInt>,
}

/// A big integer that serializes as a JSON number when it fits in the safe
/// range and as a decimal string otherwise.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.unsigned_abs() <= MAX_JSON_SAFE_INT => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = JsonInt;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                if v > MAX_JSON_SAFE_INT {
                    return Err(E::custom(format!(
                        "integer {v} exceeds 2^53-1; write it as a decimal string"
                    )));
                }
                Ok(JsonInt(BigInt::from(v)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                if v.unsigned_abs() > MAX_JSON_SAFE_INT {
                    return Err(E::custom(format!(
                        "integer {v} exceeds 2^53-1 in magnitude; write it as a decimal string"
                    )));
                }
                Ok(JsonInt(BigInt::from(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonInt, E> {
                Err(E::custom(format!(
                    "non-integer number {v} is not accepted; write integers only"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.parse::<BigInt>()
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

/// Renders a big integer for report payloads under the same number-or-string
/// rule as the interchange format.
pub fn json_int_value(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() <= MAX_JSON_SAFE_INT => serde_json::Value::from(v),
        _ => serde_json::Value::String(x.to_string()),
    }
}
