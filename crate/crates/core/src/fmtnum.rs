//! Numeric output policy: every number leaving the tool is rounded to 12
//! significant digits so golden files agree across platforms.

/// Rounds to 12 significant digits by round-tripping through decimal text.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}")
        .parse()
        .expect("decimal round-trip is lossless")
}

/// Formats with the output policy applied; plain decimal, shortest form.
pub fn fmt12(x: f64) -> String {
    if x.is_finite() {
        format!("{}", sig12(x))
    } else if x > 0.0 {
        "inf".to_string()
    } else if x < 0.0 {
        "-inf".to_string()
    } else {
        "nan".to_string()
    }
}

/// Applies [`sig12`] to every number in a JSON tree, in place.
pub fn round_json_numbers(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig12(f)) {
                        *n = rounded;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                round_json_numbers(item);
            }
        }
        serde_json::Value::Object(map) => {
            for (_, item) in map.iter_mut() {
                round_json_numbers(item);
            }
        }
        _ => {}
    }
}
