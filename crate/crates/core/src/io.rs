//! JSON interchange formats.
//!
//! ```text
//! tensor:       {"m", "n", "layout": "dense-i1j1i2j2-rowmajor", "entries"}
//! third order:  {"p", "m", "n", "layout": "dense-kij-rowmajor", "entries"}
//! matrix:       {"rows", "cols", "entries"}            (row-major)
//! ```
//!
//! Readers also accept a command report, taking the payload from its
//! `outputs` field (and from `outputs.tensor` when present).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decomp::{BQDecomposition, TuckerForm, TuckerKind};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensor::{BiquadraticTensor, Tensor4, ThirdOrderTensor};

pub const TENSOR_LAYOUT: &str = "dense-i1j1i2j2-rowmajor";
pub const THIRD_ORDER_LAYOUT: &str = "dense-kij-rowmajor";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub m: usize,
    pub n: usize,
    pub layout: String,
    pub entries: Vec<f64>,
}

impl From<&Tensor4> for TensorJson {
    fn from(t: &Tensor4) -> Self {
        TensorJson {
            m: t.m(),
            n: t.n(),
            layout: TENSOR_LAYOUT.into(),
            entries: t.entries().to_vec(),
        }
    }
}

impl TryFrom<TensorJson> for Tensor4 {
    type Error = Error;
    fn try_from(j: TensorJson) -> Result<Tensor4> {
        if j.layout != TENSOR_LAYOUT {
            return Err(Error::InvalidInput(format!(
                "unsupported tensor layout {:?}, expected {TENSOR_LAYOUT:?}",
                j.layout
            )));
        }
        Tensor4::from_entries(j.m, j.n, j.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThirdOrderJson {
    pub p: usize,
    pub m: usize,
    pub n: usize,
    pub layout: String,
    pub entries: Vec<f64>,
}

impl From<&ThirdOrderTensor> for ThirdOrderJson {
    fn from(t: &ThirdOrderTensor) -> Self {
        let (p, m, n) = t.dims();
        ThirdOrderJson {
            p,
            m,
            n,
            layout: THIRD_ORDER_LAYOUT.into(),
            entries: t.entries().to_vec(),
        }
    }
}

impl TryFrom<ThirdOrderJson> for ThirdOrderTensor {
    type Error = Error;
    fn try_from(j: ThirdOrderJson) -> Result<ThirdOrderTensor> {
        if j.layout != THIRD_ORDER_LAYOUT {
            return Err(Error::InvalidInput(format!(
                "unsupported third-order layout {:?}, expected {THIRD_ORDER_LAYOUT:?}",
                j.layout
            )));
        }
        ThirdOrderTensor::from_entries(j.p, j.m, j.n, j.entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuckerJson {
    pub kind: TuckerKind,
    pub core: TensorJson,
    pub p: Matrix,
    pub q: Matrix,
    pub reconstruction_error: f64,
    pub exact: bool,
}

impl From<&TuckerForm> for TuckerJson {
    fn from(t: &TuckerForm) -> Self {
        TuckerJson {
            kind: t.kind,
            core: TensorJson::from(t.core.as_tensor()),
            p: t.p.clone(),
            q: t.q.clone(),
            reconstruction_error: t.reconstruction_error,
            exact: t.exact,
        }
    }
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

/// Strips a report envelope down to the payload object.
fn payload<'a>(v: &'a Value, key: &str) -> &'a Value {
    let inner = match v.get("outputs") {
        Some(o) if v.get("command").is_some() => o,
        _ => v,
    };
    inner.get(key).filter(|x| x.is_object()).unwrap_or(inner)
}

fn from_payload<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::InvalidInput(format!("not a {what}: {e}")))
}

pub fn tensor_from_value(v: &Value) -> Result<Tensor4> {
    from_payload::<TensorJson>(payload(v, "tensor"), "tensor")?.try_into()
}

pub fn parse_tensor(text: &str) -> Result<Tensor4> {
    tensor_from_value(&parse_value(text)?)
}

/// Parses and validates against an absolute symmetry tolerance.
pub fn parse_biquadratic(text: &str, tol: f64) -> Result<BiquadraticTensor> {
    parse_tensor(text)?.validate(tol)
}

pub fn parse_third_order(text: &str) -> Result<ThirdOrderTensor> {
    let v = parse_value(text)?;
    from_payload::<ThirdOrderJson>(payload(&v, "tensor"), "third-order tensor")?.try_into()
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let v = parse_value(text)?;
    let j: MatrixJson = from_payload(payload(&v, "matrix"), "matrix")?;
    Matrix::from_row_major(j.rows, j.cols, j.entries)
}

pub fn parse_decomposition(text: &str) -> Result<BQDecomposition> {
    let v = parse_value(text)?;
    from_payload::<BQDecomposition>(payload(&v, "decomposition"), "decomposition")?.infer_dims()
}

#[derive(Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

pub fn tensor_to_value(t: &Tensor4) -> Value {
    serde_json::to_value(TensorJson::from(t)).expect("tensor JSON is always serialisable")
}

pub fn third_order_to_value(t: &ThirdOrderTensor) -> Value {
    serde_json::to_value(ThirdOrderJson::from(t)).expect("tensor JSON is always serialisable")
}

pub fn tucker_to_value(t: &TuckerForm) -> Value {
    serde_json::to_value(TuckerJson::from(t)).expect("Tucker JSON is always serialisable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tensor_round_trip() {
        let t = Tensor4::from_fn(2, 3, |a, b, c, d| (a * 27 + b * 9 + c * 3 + d) as f64 * 0.5).unwrap();
        let text = serde_json::to_string(&tensor_to_value(&t)).unwrap();
        assert!(text.contains(r#""layout":"dense-i1j1i2j2-rowmajor""#));
        assert_eq!(parse_tensor(&text).unwrap(), t);
    }

    #[test]
    fn reads_through_report_envelope() {
        let id = BiquadraticTensor::identity(2, 2).unwrap();
        let report = json!({
            "command": "gen",
            "outputs": tensor_to_value(&id),
        });
        assert_eq!(parse_biquadratic(&report.to_string(), 0.0).unwrap(), id);
        let nested = json!({
            "command": "symmetrize",
            "outputs": {"tensor": tensor_to_value(&id), "max_deviation": 0.0},
        });
        assert_eq!(parse_biquadratic(&nested.to_string(), 0.0).unwrap(), id);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(parse_tensor("{"), Err(Error::InvalidInput(_))));
        let wrong_len = json!({"m": 1, "n": 1, "layout": TENSOR_LAYOUT, "entries": [1.0, 2.0]});
        assert!(matches!(
            parse_tensor(&wrong_len.to_string()),
            Err(Error::DimensionMismatch(_))
        ));
        let wrong_layout = json!({"m": 1, "n": 1, "layout": "col-major", "entries": [1.0]});
        assert!(matches!(
            parse_tensor(&wrong_layout.to_string()),
            Err(Error::InvalidInput(_))
        ));
        let asym = json!({"m": 1, "n": 2, "layout": TENSOR_LAYOUT, "entries": [0.0, 4.0, 0.0, 0.0]});
        assert!(matches!(
            parse_biquadratic(&asym.to_string(), 0.0),
            Err(Error::SymmetryViolation(_))
        ));
    }

    #[test]
    fn matrix_and_third_order() {
        let m = parse_matrix(r#"{"rows":2,"cols":1,"entries":[1.0,2.0]}"#).unwrap();
        assert_eq!(m, Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap());
        let t = ThirdOrderTensor::from_fn(2, 1, 2, |k, i, j| (k + i + j) as f64).unwrap();
        let back = parse_third_order(&third_order_to_value(&t).to_string()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn decomposition_round_trip() {
        let text = r#"{"terms":[{"coef":2.0,"x":[1.0,0.0],"y":[0.0,1.0,0.0]}],"reconstruction_error":0.0}"#;
        let d = parse_decomposition(text).unwrap();
        assert_eq!((d.m, d.n), (2, 3));
        assert_eq!(serde_json::to_string(&d).unwrap(), text);
    }
}
