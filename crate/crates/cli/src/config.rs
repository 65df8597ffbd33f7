//! Parameters from a flat `key = value` file, overridden by flags.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    := blank | comment | entry
//! comment := '#' any*
//! entry   := key ws* '=' ws* value
//! key     := [a-z0-9-]+          (the long flag name without dashes)
//! value   := any* (trimmed; may be empty only where the key allows it)
//! ```
//!
//! The optional key `experiment` must name the subcommand. Unknown keys
//! and repeated keys are errors.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Keys that affect where results go but not what they are.
const PRESENTATION_KEYS: [&str; 3] = ["config", "out", "plot"];

pub struct Params {
    command: &'static str,
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn resolve(
        command: &'static str,
        file: Option<&Path>,
        flags: Vec<(&'static str, Option<String>)>,
    ) -> CliResult<Params> {
        let allowed: Vec<&str> = flags.iter().map(|(k, _)| *k).collect();
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                field: "config".into(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
                    field: format!("line {}", lineno + 1),
                    message: format!("expected \"key = value\", found {line:?}"),
                })?;
                let (key, value) = (key.trim(), value.trim());
                if key == "experiment" {
                    if value != command {
                        return Err(CliError::Config {
                            field: "experiment".into(),
                            message: format!("config is for {value:?}, not {command:?}"),
                        });
                    }
                    continue;
                }
                if !allowed.contains(&key) {
                    return Err(CliError::Config {
                        field: key.into(),
                        message: format!("unknown key for {command}"),
                    });
                }
                if values.insert(key.to_string(), value.to_string()).is_some() {
                    return Err(CliError::Config {
                        field: key.into(),
                        message: "given twice".into(),
                    });
                }
            }
        }
        for (key, value) in flags {
            if let Some(v) = value {
                values.insert(key.to_string(), v);
            }
        }
        Ok(Params { command, values })
    }

    pub fn get<T>(&self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| CliError::Config {
                    field: key.into(),
                    message: format!("invalid value {v:?}: {e}"),
                })
            })
            .transpose()
    }

    /// The value of `key`, recording `default` when it is absent so that
    /// the digest covers every parameter actually used.
    pub fn get_or<T>(&mut self, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.get(key)? {
            Some(v) => Ok(v),
            None => {
                self.values.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn require<T>(&self, key: &str) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)?.ok_or_else(|| CliError::Config {
            field: key.into(),
            message: "required".into(),
        })
    }

    pub fn command(&self) -> &'static str {
        self.command
    }

    /// Resolved parameters that determine the results.
    pub fn canonical(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .filter(|(k, _)| !PRESENTATION_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    /// SHA-256 of the subcommand and its canonical parameters.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        h.update(b"\n");
        for (k, v) in self.canonical() {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A list of integers: `1,2,5` or an inclusive range `1..40`, or both
/// mixed with commas.
pub fn parse_list(field: &str, text: &str) -> CliResult<Vec<usize>> {
    let bad = |part: &str| CliError::Config {
        field: field.into(),
        message: format!("{part:?} is not an integer or an a..b range"),
    };
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad(part))?;
            let b: usize = b.trim().parse().map_err(|_| bad(part))?;
            if a > b {
                return Err(bad(part));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(parse_list("m", "1..3, 7").unwrap(), vec![1, 2, 3, 7]);
        assert!(parse_list("m", "3..1").is_err());
        assert!(parse_list("m", "x").is_err());
    }

    #[test]
    fn flags_override_and_defaults_enter_the_digest() {
        let dir = std::env::temp_dir().join(format!("halfspace-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let file = dir.join("run.conf");
        std::fs::write(&file, "# drift\nexperiment = drift\nsteps = 10\nseed = 3\n").unwrap();
        let flags = || {
            vec![
                ("steps", Some("20".to_string())),
                ("seed", None),
                ("out", None),
            ]
        };
        let mut p = Params::resolve("drift", Some(&file), flags()).unwrap();
        assert_eq!(p.require::<usize>("steps").unwrap(), 20);
        let before = p.digest();
        assert_eq!(p.get_or("level", 0.99).unwrap(), 0.99);
        assert_ne!(p.digest(), before);
        std::fs::write(&file, "color = red\n").unwrap();
        assert!(Params::resolve("drift", Some(&file), flags()).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
