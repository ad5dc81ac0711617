//! Serialization helpers shared by the commands.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use pftl_core::RealEnclosure;

/// Version of every JSON document the tool writes.
pub const SCHEMA: u32 = 1;

/// Integers that fit in `u64` become JSON numbers, larger ones strings.
pub fn uint(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

/// Exact rationals are written as `"p/q"` strings (or `"p"` when integral).
pub fn rat(r: &BigRational) -> Value {
    json!(rat_text(r))
}

pub fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An enclosure as exact endpoints plus outward-rounded floating-point copies for plotting.
pub fn enclosure(e: &RealEnclosure) -> Value {
    json!({
        "lo": rat(e.lo()),
        "hi": rat(e.hi()),
        "lo_f64": e.lo_f64(),
        "hi_f64": e.hi_f64(),
    })
}

/// `{"schema": 1, "command": name, ...fields}` with keys in insertion order.
pub fn document(command: &str, fields: Value) -> Value {
    let mut doc = serde_json::Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("command".into(), json!(command));
    if let Value::Object(map) = fields {
        doc.extend(map);
    }
    Value::Object(doc)
}

/// Shortest decimal rendering of an `f64`, for CSV cells.
pub fn float(x: f64) -> String {
    format!("{x}")
}
