use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Overlays the flags that were given onto an optional JSON config file.
/// Keys match the long flag names with underscores. Flags win; an absent
/// flag serializes to null and leaves the file value in place.
pub fn merge<T: Serialize + DeserializeOwned>(file: Option<&Path>, flags: &T) -> Result<T> {
    let mut base = match file {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&raw).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => Value::Object(Default::default()),
    };
    let Value::Object(fields) = &mut base else {
        bail!("config file must hold a JSON object");
    };
    let Value::Object(given) = serde_json::to_value(flags)? else {
        unreachable!("argument structs serialize to objects");
    };
    for (key, value) in given {
        if !value.is_null() {
            fields.insert(key, value);
        }
    }
    serde_json::from_value(base).context("invalid configuration")
}

/// Fails with a pointer to the missing flag or config key.
pub fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    match value {
        Some(v) => Ok(v),
        None => bail!("--{flag} is required (flag or config key {:?})", flag.replace('-', "_")),
    }
}
