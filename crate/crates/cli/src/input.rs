//! Parsing of system records from coefficient text or JSON.

use std::fmt;

use qcenter::rational::{format_rational, parse_rational};
use qcenter::{QuadSystem, Rational, SetIndex};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Known verdict attached to a corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub set_index: SetIndex,
    /// `null` for not applicable.
    pub center_count: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub id: String,
    #[serde(serialize_with = "write_coeffs", deserialize_with = "read_coeffs")]
    pub coefficients: [Rational; 12],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

impl SystemRecord {
    pub fn system(&self) -> QuadSystem {
        QuadSystem::from_coeffs(self.coefficients.clone())
    }
}

pub(crate) fn write_coeffs<S: Serializer>(c: &[Rational; 12], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(format_rational))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Text(String),
    Int(i64),
    Float(f64),
}

pub(crate) fn read_coeffs<'de, D: Deserializer<'de>>(d: D) -> Result<[Rational; 12], D::Error> {
    let raw = Vec::<Coefficient>::deserialize(d)?;
    let values = raw
        .into_iter()
        .map(|c| match c {
            Coefficient::Text(t) => parse_rational(&t).map_err(D::Error::custom),
            Coefficient::Int(n) => Ok(Rational::from_integer(n.into())),
            Coefficient::Float(x) => Err(D::Error::custom(format!(
                "{x} is a float; write coefficients as exact rationals such as \"3/7\""
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = values.len();
    values
        .try_into()
        .map_err(|_| D::Error::custom(format!("expected 12 coefficients, found {n}")))
}

/// Input error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// Parses one comma-separated 12-tuple, `line` being its 1-based line number.
pub fn parse_tuple(text: &str, line: usize) -> Result<[Rational; 12], ParseError> {
    let mut values = Vec::with_capacity(12);
    let mut column = 1;
    for field in text.split(',') {
        let lead = field.len() - field.trim_start().len();
        if values.len() == 12 {
            return Err(ParseError {
                line,
                column: column + lead,
                message: "more than 12 coefficients".to_string(),
            });
        }
        let value = parse_rational(field).map_err(|e| ParseError {
            line,
            column: column + lead,
            message: e.to_string(),
        })?;
        values.push(value);
        column += field.chars().count() + 1;
    }
    let found = values.len();
    values.try_into().map_err(|_| ParseError {
        line,
        column: text.chars().count() + 1,
        message: format!("expected 12 coefficients, found {found}"),
    })
}

/// Parsed input: records in order, and the lines that failed.
#[derive(Debug, Default)]
pub struct Parsed {
    pub records: Vec<SystemRecord>,
    pub errors: Vec<ParseError>,
}

/// Parses a JSON array of records, or newline-delimited tuples where blank
/// lines and lines starting with `#` are skipped. A tuple may be preceded by
/// `id:`.
pub fn parse_input(text: &str) -> Result<Parsed, ParseError> {
    if text.trim_start().starts_with('[') {
        let records: Vec<SystemRecord> = serde_json::from_str(text).map_err(|e| ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        return Ok(Parsed {
            records,
            errors: Vec::new(),
        });
    }
    let mut parsed = Parsed::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (id, body, offset) = match raw.split_once(':') {
            Some((id, body)) => (id.trim().to_string(), body, id.chars().count() + 1),
            None => (format!("line-{line}"), raw, 0),
        };
        match parse_tuple(body, line) {
            Ok(coefficients) => parsed.records.push(SystemRecord {
                id,
                coefficients,
                expected: None,
            }),
            Err(mut e) => {
                e.column += offset;
                parsed.errors.push(e);
            }
        }
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcenter::rational::{int, rat};

    #[test]
    fn tuple_with_spaces_and_fractions() {
        let c = parse_tuple(" 0, 0, 1, 1/2,0,0, 0,-1, 0, 0, 0, -3/7", 1).unwrap();
        assert_eq!(c[3], rat(1, 2));
        assert_eq!(c[7], int(-1));
        assert_eq!(c[11], rat(-3, 7));
    }

    #[test]
    fn bad_field_is_located() {
        let e = parse_tuple("0,0,1,0.5,0,0,0,0,0,0,0,0", 4).unwrap_err();
        assert_eq!((e.line, e.column), (4, 7));
    }

    #[test]
    fn short_tuple() {
        let e = parse_tuple("1,2,3", 2).unwrap_err();
        assert!(e.message.contains("found 3"));
    }

    #[test]
    fn lines_with_ids_comments_and_errors() {
        let p = parse_input("# worked\nham: 0,0,1,0,0,-1, 0,-1,0,1,0,0\n\n1,2\n").unwrap();
        assert_eq!(p.records.len(), 1);
        assert_eq!(p.records[0].id, "ham");
        assert_eq!(p.errors.len(), 1);
        assert_eq!(p.errors[0].line, 4);
    }

    #[test]
    fn json_records() {
        let text = r#"[{"id": "a", "coefficients": ["0", 0, "1", 0, 0, "-1", 0, -1, 0, 1, 0, 0],
                        "expected": {"set_index": "M1", "center_count": 2}}]"#;
        let p = parse_input(text).unwrap();
        assert_eq!(
            p.records[0].expected.as_ref().unwrap().center_count,
            Some(2)
        );
        let back: Vec<SystemRecord> =
            serde_json::from_str(&serde_json::to_string(&p.records).unwrap()).unwrap();
        assert_eq!(back, p.records);
    }

    #[test]
    fn json_floats_rejected() {
        let text = r#"[{"id": "a", "coefficients": [0.5, 0, 1, 0, 0, -1, 0, -1, 0, 1, 0, 0]}]"#;
        assert!(parse_input(text).is_err());
    }
}
