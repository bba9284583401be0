//! JSON file formats for rings, groups, character tables, actions, charges,
//! quivers, representations and duality bundles.
//!
//! Matrices are written as lists of rows. Complex numbers are `[re, im]` pairs;
//! character values may also be plain numbers.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_group::{builtin_character_table, builtin_group, CharacterTable, FiniteGroup, GroupError};
use crate::fusion_ring::{builtin_fib, builtin_rep_g, builtin_vec_g, FusionData, FusionError, FusionRing};
use crate::k0_module::{mckay_duality_bundle, CentralCharge, DualityBundle, K0Error, K0ModuleAction};
use crate::quiver_stability::{Interval, Orientation, QuiverError, TypeAQuiver, TypeARep};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
}

/// Failures while turning a parsed file into a mathematical object. Schema problems
/// are the caller's fault; validation failures mean the data is well formed but
/// mathematically wrong.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    K0(#[from] K0Error),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

impl LoadError {
    /// True for shape and schema problems, false for failed mathematical checks.
    pub fn is_schema(&self) -> bool {
        match self {
            LoadError::Format(_) => true,
            LoadError::Fusion(e) => fusion_is_schema(e),
            LoadError::Group(e) => group_is_schema(e),
            LoadError::K0(K0Error::Shape(_)) => true,
            LoadError::K0(K0Error::Fusion(e)) => fusion_is_schema(e),
            LoadError::K0(K0Error::Group(e)) => group_is_schema(e),
            LoadError::Quiver(e) => matches!(
                e,
                QuiverError::Shape(_)
                    | QuiverError::IntervalOutOfRange { .. }
                    | QuiverError::ChargeLength { .. }
                    | QuiverError::DimensionCap(_)
                    | QuiverError::K0(K0Error::Shape(_))
            ),
        }
    }
}

fn fusion_is_schema(e: &FusionError) -> bool {
    matches!(
        e,
        FusionError::Shape(_) | FusionError::IndexOutOfRange { .. } | FusionError::LengthMismatch { .. }
    ) || matches!(e, FusionError::Group(g) if group_is_schema(g))
}

fn group_is_schema(e: &GroupError) -> bool {
    matches!(
        e,
        GroupError::Shape(_)
            | GroupError::TableShape(_)
            | GroupError::UnknownBuiltin(_)
            | GroupError::IrrepOutOfRange { .. }
            | GroupError::RepLength { .. }
    )
}

pub type Rows = Vec<Vec<i64>>;

pub fn matrix_from_rows(rows: &Rows) -> Result<DMatrix<i64>, FormatError> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(FormatError::Schema("matrix rows have different lengths".into()));
    }
    let flat: Vec<i64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(nrows, ncols, &flat))
}

pub fn matrix_to_rows(m: &DMatrix<i64>) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Parses a fusion ring file (`{"basis", "unit", "N"}`) without checking the axioms.
pub fn parse_fusion_data(text: &str) -> Result<FusionData, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Builtin {
        builtin: String,
    },
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

pub fn load_group(text: &str) -> Result<FiniteGroup, LoadError> {
    let g: GroupJson = serde_json::from_str(text).map_err(FormatError::from)?;
    group_from_json(&g)
}

pub fn group_from_json(g: &GroupJson) -> Result<FiniteGroup, LoadError> {
    match g {
        GroupJson::Builtin { builtin } => Ok(builtin_group(builtin)?),
        GroupJson::Table { order, table, labels } => {
            if table.len() != *order {
                return Err(FormatError::Schema(format!("order {order} but {} table rows", table.len())).into());
            }
            Ok(FiniteGroup::new(table.clone(), labels.clone())?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Real(f64),
    Complex([f64; 2]),
}

impl From<ValueJson> for Complex64 {
    fn from(v: ValueJson) -> Self {
        match v {
            ValueJson::Real(x) => Complex64::new(x, 0.0),
            ValueJson::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharTableJson {
    /// The group, when class membership of elements should be checked too.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    pub class_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// `chars[irrep][class]`.
    pub chars: Vec<Vec<ValueJson>>,
}

/// A character table file, or `{"builtin": "S3"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableSource {
    Builtin { builtin: String },
    Explicit(CharTableJson),
}

pub fn load_character_table(text: &str) -> Result<CharacterTable, LoadError> {
    match serde_json::from_str(text).map_err(FormatError::from)? {
        TableSource::Builtin { builtin } => Ok(builtin_character_table(&builtin)?),
        TableSource::Explicit(t) => {
            let class_map = match &t.group {
                Some(g) => Some(group_from_json(g)?.class_map()),
                None => None,
            };
            let characters =
                t.chars.into_iter().map(|row| row.into_iter().map(Complex64::from).collect()).collect();
            Ok(CharacterTable::new(t.class_sizes, characters, t.labels, class_map)?)
        }
    }
}

/// A fusion ring given inline or as `{"builtin": "fib" | "vec:<G>" | "rep:<G>"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingJson {
    Builtin { builtin: String },
    Data(FusionData),
}

pub fn ring_from_json(ring: &RingJson) -> Result<FusionRing, LoadError> {
    match ring {
        RingJson::Data(d) => Ok(FusionRing::try_from(d.clone())?),
        RingJson::Builtin { builtin } => builtin_ring(builtin),
    }
}

pub fn builtin_ring(name: &str) -> Result<FusionRing, LoadError> {
    if name.eq_ignore_ascii_case("fib") {
        return Ok(builtin_fib());
    }
    if let Some(g) = name.strip_prefix("vec:") {
        return Ok(builtin_vec_g(&builtin_group(g)?)?);
    }
    if let Some(g) = name.strip_prefix("rep:") {
        return Ok(builtin_rep_g(&builtin_character_table(g)?)?);
    }
    Err(FormatError::Schema(format!("unknown builtin ring {name:?} (expected fib, vec:<G> or rep:<G>)")).into())
}

/// `matrices[label]` is the action of that simple in row form; column `j` is the
/// image of lattice basis vector `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionJson {
    pub ring: RingJson,
    pub lattice: Vec<String>,
    pub matrices: BTreeMap<String, Rows>,
}

pub fn action_from_json(a: &ActionJson) -> Result<K0ModuleAction, LoadError> {
    let ring = ring_from_json(&a.ring)?;
    let mut matrices = Vec::with_capacity(ring.rank());
    for label in ring.labels() {
        let rows = a
            .matrices
            .get(label)
            .ok_or_else(|| FormatError::Schema(format!("no matrix for simple {label:?}")))?;
        matrices.push(matrix_from_rows(rows)?);
    }
    if let Some(extra) = a.matrices.keys().find(|k| ring.index_of(k).is_none()) {
        return Err(FormatError::Schema(format!("matrix for unknown simple {extra:?}")).into());
    }
    Ok(K0ModuleAction::new(ring, a.lattice.clone(), matrices)?)
}

pub fn action_to_json(action: &K0ModuleAction, ring: RingJson) -> ActionJson {
    let matrices = action
        .ring()
        .labels()
        .iter()
        .zip(action.matrices())
        .map(|(l, m)| (l.clone(), matrix_to_rows(m)))
        .collect();
    ActionJson { ring, lattice: action.lattice().to_vec(), matrices }
}

pub fn load_action(text: &str) -> Result<K0ModuleAction, LoadError> {
    let a: ActionJson = serde_json::from_str(text).map_err(FormatError::from)?;
    action_from_json(&a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeJson {
    pub lattice: Vec<String>,
    pub values: Vec<[f64; 2]>,
}

impl From<&CentralCharge> for ChargeJson {
    fn from(z: &CentralCharge) -> Self {
        ChargeJson { lattice: z.lattice.clone(), values: z.values.iter().map(|v| [v.re, v.im]).collect() }
    }
}

pub fn load_charge(text: &str) -> Result<CentralCharge, LoadError> {
    let c: ChargeJson = serde_json::from_str(text).map_err(FormatError::from)?;
    let values = c.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    Ok(CentralCharge::new(c.lattice, values)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub n: usize,
    pub orientation: Vec<Orientation>,
}

pub fn load_quiver(text: &str) -> Result<TypeAQuiver, LoadError> {
    let q: QuiverJson = serde_json::from_str(text).map_err(FormatError::from)?;
    Ok(TypeAQuiver::new(q.n, q.orientation)?)
}

/// A representation file is a list of `[a, b]` interval bounds.
pub fn load_rep(text: &str, quiver: &TypeAQuiver) -> Result<TypeARep, LoadError> {
    let pairs: Vec<[usize; 2]> = serde_json::from_str(text).map_err(FormatError::from)?;
    let intervals = pairs.iter().map(|&[a, b]| Interval { a, b }).collect();
    Ok(TypeARep::new(quiver, intervals)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum BundleJson {
    /// The McKay bundle of a builtin group and its character table.
    Mckay { mckay: String },
    Explicit {
        forgetful: Rows,
        induction: Rows,
        action_g: ActionJson,
        action_rep_g: ActionJson,
    },
}

pub fn load_bundle(text: &str) -> Result<DualityBundle, LoadError> {
    match serde_json::from_str(text).map_err(FormatError::from)? {
        BundleJson::Mckay { mckay } => {
            let g = builtin_group(&mckay)?;
            let t = builtin_character_table(&mckay)?;
            Ok(mckay_duality_bundle(&g, &t)?)
        }
        BundleJson::Explicit { forgetful, induction, action_g, action_rep_g } => Ok(DualityBundle {
            forgetful: matrix_from_rows(&forgetful)?,
            induction: matrix_from_rows(&induction)?,
            action_g: action_from_json(&action_g)?,
            action_rep_g: action_from_json(&action_rep_g)?,
        }),
    }
}

/// Renders JSON with objects and nested lists indented, but lists whose entries are
/// scalars or lists of scalars kept on one line, so that matrices read as rows.
pub fn render(value: &serde_json::Value) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(value: &serde_json::Value) -> bool {
    use serde_json::Value;
    match value {
        Value::Array(items) => items.iter().all(|v| !matches!(v, Value::Array(_) | Value::Object(_))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::Array(items) => {
            format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", "))
        }
        other => serde_json::to_string(other).expect("serializable"),
    }
}

fn render_into(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Array(items) if items.iter().all(is_flat) => out.push_str(&inline(value)),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render_into(v, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, v)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("serializable"));
                out.push_str(": ");
                render_into(v, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        other => out.push_str(&serde_json::to_string(other).expect("serializable")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k0_module::fib_on_a4_action;

    #[test]
    fn fusion_round_trip() {
        let data = builtin_fib().to_data();
        let text = serde_json::to_string(&data).unwrap();
        assert!(text.contains("\"N\""));
        assert_eq!(parse_fusion_data(&text).unwrap(), data);
    }

    #[test]
    fn action_round_trip() {
        let action = fib_on_a4_action();
        let json = action_to_json(&action, RingJson::Builtin { builtin: "fib".into() });
        let text = serde_json::to_string(&json).unwrap();
        assert_eq!(load_action(&text).unwrap(), action);
    }

    #[test]
    fn action_missing_matrix() {
        let text = r#"{"ring":{"builtin":"fib"},"lattice":["x"],"matrices":{"1":[[1]]}}"#;
        let err = load_action(text).unwrap_err();
        assert!(err.is_schema());
    }

    #[test]
    fn groups_and_tables() {
        assert_eq!(load_group(r#"{"builtin":"S3"}"#).unwrap().order(), 6);
        assert_eq!(load_group(r#"{"order":2,"table":[[0,1],[1,0]]}"#).unwrap().order(), 2);
        let bad = load_group(r#"{"order":2,"table":[[0,1],[1,1]]}"#).unwrap_err();
        assert!(!bad.is_schema());
        let t = load_character_table(
            r#"{"class_sizes":[1,1],"labels":["triv","sign"],"chars":[[1,1],[1,[-1,0]]]}"#,
        )
        .unwrap();
        assert_eq!(t.dims(), vec![1, 1]);
    }

    #[test]
    fn charges_quivers_reps() {
        let z = load_charge(r#"{"lattice":["S1"],"values":[[-1,0]]}"#).unwrap();
        assert_eq!(z.values[0], Complex64::new(-1.0, 0.0));
        let q = load_quiver(r#"{"n":4,"orientation":["R","L","R"]}"#).unwrap();
        assert_eq!(q, TypeAQuiver::bipartite_a4());
        let rep = load_rep("[[2,3],[1,1]]", &q).unwrap();
        assert_eq!(rep.intervals(), &[Interval { a: 1, b: 1 }, Interval { a: 2, b: 3 }]);
        assert!(load_rep("[[2,5]]", &q).unwrap_err().is_schema());
        assert!(load_quiver(r#"{"n":4,"orientation":["R"]}"#).unwrap_err().is_schema());
    }

    #[test]
    fn render_keeps_rows_inline() {
        let v = serde_json::json!({"adj": [[0, 1], [1, 0]], "name": "x", "pieces": [{"a": [1, 2]}]});
        let text = render(&v);
        assert_eq!(
            text,
            "{\n  \"adj\": [[0, 1], [1, 0]],\n  \"name\": \"x\",\n  \"pieces\": [\n    {\n      \"a\": [1, 2]\n    }\n  ]\n}\n"
        );
        assert_eq!(serde_json::from_str::<serde_json::Value>(&text).unwrap(), v);
    }

    #[test]
    fn builtin_bundle() {
        let b = load_bundle(r#"{"mckay":"C2"}"#).unwrap();
        assert_eq!(b.forgetful.shape(), (2, 4));
    }
}
