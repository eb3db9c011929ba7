//! Platform data: the things a `Δ` attribute may be bound to.

use std::fmt;

/// The data kinds a literal can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataKind {
    Bytes,
    String,
    Int,
    Float,
    Bool,
    /// Recognized by the grammar, never evaluated.
    Regex,
}

impl DataKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DataKind::Bytes => "bytes",
            DataKind::String => "string",
            DataKind::Int => "int",
            DataKind::Float => "float",
            DataKind::Bool => "bool",
            DataKind::Regex => "regex",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "bytes" => DataKind::Bytes,
            "string" => DataKind::String,
            "int" => DataKind::Int,
            "float" => DataKind::Float,
            "bool" => DataKind::Bool,
            "regex" => DataKind::Regex,
            _ => return None,
        })
    }
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A piece of data.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Bytes(Vec<u8>),
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    Array(Vec<Value>),
    /// A regex literal, kept verbatim.
    Regex(String),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Bytes(_) => "bytes",
            Value::Str(_) => "string",
            Value::Int(_) => "int",
            Value::Float(_) => "float",
            Value::Bool(_) => "bool",
            Value::Array(_) => "array",
            Value::Regex(_) => "regex",
        }
    }

    pub fn kind(&self) -> Option<DataKind> {
        Some(match self {
            Value::Bytes(_) => DataKind::Bytes,
            Value::Str(_) => DataKind::String,
            Value::Int(_) => DataKind::Int,
            Value::Float(_) => DataKind::Float,
            Value::Bool(_) => DataKind::Bool,
            Value::Regex(_) => DataKind::Regex,
            Value::Array(_) => return None,
        })
    }

    /// The `as-bytes` representation: 8 bytes for numbers, 1 for bools,
    /// UTF-8 for strings.
    pub fn as_bytes(&self) -> Vec<u8> {
        match self {
            Value::Bytes(b) => b.clone(),
            Value::Str(s) => s.as_bytes().to_vec(),
            Value::Int(i) => i.to_be_bytes().to_vec(),
            Value::Float(x) => x.to_be_bytes().to_vec(),
            Value::Bool(b) => vec![u8::from(*b)],
            Value::Regex(r) => r.as_bytes().to_vec(),
            Value::Array(items) => items.iter().flat_map(Value::as_bytes).collect(),
        }
    }

    /// Data equality: same kind and same bytes.
    pub fn data_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Array(a), Value::Array(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.data_eq(y))
            }
            _ => self.kind_name() == other.kind_name() && self.as_bytes() == other.as_bytes(),
        }
    }

    /// Source-literal form, re-parseable by the lexer.
    pub fn to_literal(&self) -> String {
        match self {
            Value::Bytes(b) => bytes_literal(b),
            Value::Str(s) => format!("\"{}\"", escape_string(s)),
            Value::Int(i) => i.to_string(),
            Value::Float(x) => float_literal(*x),
            Value::Bool(true) => "TRUE".into(),
            Value::Bool(false) => "FALSE".into(),
            Value::Regex(r) => r.clone(),
            Value::Array(items) => {
                let inner: Vec<String> = items.iter().map(|v| v.to_literal()).collect();
                format!("(* {})", inner.join(" "))
            }
        }
    }

    /// The payload text used inside XMIR data elements.
    pub fn payload(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::Bool(true) => "TRUE".into(),
            Value::Bool(false) => "FALSE".into(),
            other => other.to_literal(),
        }
    }
}

/// Java-flavoured rendering, used by `sprintf %s` and the CLI.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bytes(b) => f.write_str(&bytes_literal(b)),
            Value::Str(s) => f.write_str(s),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => f.write_str(&java_double(*x)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Regex(r) => f.write_str(r),
            Value::Array(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn bytes_literal(b: &[u8]) -> String {
    match b.len() {
        0 => "--".into(),
        1 => format!("{:02X}-", b[0]),
        _ => b.iter().map(|x| format!("{x:02X}")).collect::<Vec<_>>().join("-"),
    }
}

fn float_literal(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('.') || s.contains('e') || !x.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

/// Approximation of `Double.toString`.
pub fn java_double(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Infinity".into() } else { "-Infinity".into() };
    }
    let abs = x.abs();
    if abs != 0.0 && !(1e-3..1e7).contains(&abs) {
        let s = format!("{x:e}");
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = if mantissa.contains('.') {
            mantissa.to_string()
        } else {
            format!("{mantissa}.0")
        };
        return format!("{mantissa}E{exp}");
    }
    float_literal(x)
}

pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_widths_follow_the_data_table() {
        assert_eq!(Value::Bytes(vec![0x1F, 0xE5, 0x77, 0xA6]).as_bytes().len(), 4);
        assert_eq!(Value::Str("Hello, друг!".into()).as_bytes().len(), 16);
        assert_eq!(Value::Str("\u{5BB6}".into()).as_bytes().len(), 3);
        assert_eq!(Value::Int(1024).as_bytes().len(), 8);
        assert_eq!(Value::Float(3.1415926).as_bytes().len(), 8);
        assert_eq!(Value::Bool(true).as_bytes().len(), 1);
    }

    #[test]
    fn data_equality_is_kind_sensitive() {
        assert!(Value::Int(4).data_eq(&Value::Int(4)));
        assert!(!Value::Int(4).data_eq(&Value::Float(4.0)));
        assert!(!Value::Str("a".into()).data_eq(&Value::Bytes(b"a".to_vec())));
    }

    #[test]
    fn java_rendering() {
        assert_eq!(java_double(45.0), "45.0");
        assert_eq!(java_double(2.4e-34), "2.4E-34");
        assert_eq!(java_double(0.5), "0.5");
        assert_eq!(Value::Bool(true).to_string(), "true");
    }
}
