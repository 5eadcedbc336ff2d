//! `KEY=VALUE` edits applied to a spec before validation.

use toml::Value;

use crate::error::{Error, Result};
use crate::spec::ExperimentSpec;

/// One parsed `--set` argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub key: String,
    pub value: Value,
}

impl std::str::FromStr for Override {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (key, raw) = s.split_once('=').ok_or_else(|| Error::Override {
            key: s.to_string(),
            reason: "expected KEY=VALUE".into(),
        })?;
        let key = key.trim();
        if key.is_empty() || key.split('.').any(str::is_empty) {
            return Err(Error::Override {
                key: key.to_string(),
                reason: "empty path segment".into(),
            });
        }
        Ok(Override {
            key: key.to_string(),
            value: parse_value(raw.trim()),
        })
    }
}

/// TOML literal if it parses as one, bare string otherwise.
fn parse_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&doc) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

/// Applies overrides in order and re-validates the result.
pub fn apply(spec: &ExperimentSpec, overrides: &[Override]) -> Result<ExperimentSpec> {
    if overrides.is_empty() {
        return Ok(spec.clone());
    }
    let mut root = Value::try_from(spec).map_err(Error::Serialize)?;
    for o in overrides {
        let path = resolve(&root, &o.key)?;
        set(&mut root, &path, o.value.clone(), &o.key)?;
    }
    let spec: ExperimentSpec = root.try_into().map_err(|e: toml::de::Error| Error::Override {
        key: overrides.iter().map(|o| o.key.as_str()).collect::<Vec<_>>().join(","),
        reason: e.message().to_string(),
    })?;
    spec.validate()?;
    Ok(spec)
}

/// Full path for `key`. A key whose first segment is not top-level must name
/// exactly one entry somewhere in the tree (`n_measurements`, `horizon.fixed`).
fn resolve(root: &Value, key: &str) -> Result<Vec<String>> {
    let mut segments: Vec<String> = key.split('.').map(str::to_string).collect();
    if segments.len() > 1 {
        if root.get(&segments[0]).is_none() {
            let mut head = resolve(root, &segments[0])?;
            head.extend(segments.drain(1..));
            return Ok(head);
        }
        return Ok(segments);
    }
    if root.get(key).is_some() || is_known_optional(&[key]) {
        return Ok(segments);
    }
    let mut hits = Vec::new();
    find_leaf(root, key, &mut Vec::new(), &mut hits);
    if hits.is_empty() {
        for section in ["packet", "measurement", "potential", "grid"] {
            if is_known_optional(&[section, key]) {
                return Ok(vec![section.to_string(), key.to_string()]);
            }
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        0 => Err(Error::Override {
            key: key.to_string(),
            reason: "no such key in the spec".into(),
        }),
        _ => Err(Error::Override {
            key: key.to_string(),
            reason: format!(
                "ambiguous, matches {}",
                hits.iter().map(|h| h.join(".")).collect::<Vec<_>>().join(", ")
            ),
        }),
    }
}

/// Optional fields that may be absent from a serialized spec.
fn is_known_optional(path: &[&str]) -> bool {
    matches!(
        path,
        ["packet", "delta_x" | "thermal_a"]
            | ["measurement", "delta_v" | "n_measurements" | "intervals" | "snapshot_runs" | "control_horizon"]
    )
}

fn find_leaf(v: &Value, key: &str, prefix: &mut Vec<String>, hits: &mut Vec<Vec<String>>) {
    if let Value::Table(t) = v {
        for (k, child) in t {
            prefix.push(k.clone());
            if k == key {
                hits.push(prefix.clone());
            } else {
                find_leaf(child, key, prefix, hits);
            }
            prefix.pop();
        }
    }
}

fn set(root: &mut Value, path: &[String], value: Value, key: &str) -> Result<()> {
    let err = |reason: String| Error::Override {
        key: key.to_string(),
        reason,
    };
    let (last, parents) = path.split_last().expect("non-empty path");
    let mut node = root;
    for (depth, seg) in parents.iter().enumerate() {
        node = match node {
            Value::Table(t) => t.get_mut(seg).ok_or_else(|| err(format!("no section `{seg}`")))?,
            Value::Array(a) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| err(format!("`{seg}` is not an index into `{}`", path[..depth].join("."))))?;
                let len = a.len();
                a.get_mut(i).ok_or_else(|| err(format!("index {i} out of range (len {len})")))?
            }
            _ => return Err(err(format!("`{}` is not a section", path[..depth].join(".")))),
        };
    }
    match node {
        Value::Table(t) => {
            let value = match (t.get(last), value) {
                (Some(Value::Array(_)), v @ (Value::Integer(_) | Value::Float(_))) => Value::Array(vec![v]),
                (None, v @ (Value::Integer(_) | Value::Float(_))) if wants_list(last) => Value::Array(vec![v]),
                (Some(Value::Float(_)), Value::Integer(i)) => Value::Float(i as f64),
                (_, v) => v,
            };
            if !t.contains_key(last) && !is_known_optional(&path.iter().map(String::as_str).collect::<Vec<_>>()) {
                return Err(err("no such key in the spec".into()));
            }
            t.insert(last.clone(), value);
            Ok(())
        }
        Value::Array(a) => {
            let i: usize = last.parse().map_err(|_| err(format!("`{last}` is not an index")))?;
            let len = a.len();
            *a.get_mut(i).ok_or_else(|| err(format!("index {i} out of range (len {len})")))? = value;
            Ok(())
        }
        _ => Err(err("parent is not a section".into())),
    }
}

fn wants_list(key: &str) -> bool {
    matches!(key, "n_measurements" | "intervals" | "snapshot_runs")
}
