//! One experiment writes into one directory. Every file is written to a
//! temporary name and renamed into place, so a reader never sees a
//! partial file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::Params;
use crate::error::CliResult;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn atomic_write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub struct RunDir {
    dir: PathBuf,
    digest: String,
    seed: Option<u64>,
    started: SystemTime,
}

impl RunDir {
    pub fn create(dir: &Path, params: &Params, seed: Option<u64>) -> CliResult<RunDir> {
        fs::create_dir_all(dir)?;
        Ok(RunDir {
            dir: dir.to_path_buf(),
            digest: params.digest(),
            seed,
            started: SystemTime::now(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// The record as a JSON object carrying tool version, config digest
    /// and seed.
    pub fn stamp<T: Serialize>(&self, record: &T) -> CliResult<Value> {
        let mut v = serde_json::to_value(record)?;
        let obj = match v.as_object_mut() {
            Some(o) => o,
            None => {
                v = json!({ "value": v });
                v.as_object_mut().expect("object")
            }
        };
        obj.insert("tool_version".into(), TOOL_VERSION.into());
        obj.insert("config_digest".into(), self.digest.clone().into());
        if !obj.contains_key("seed") {
            obj.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        }
        Ok(v)
    }

    pub fn write_jsonl(&self, name: &str, records: &[Value]) -> CliResult<()> {
        let mut text = String::new();
        for r in records {
            text.push_str(&serde_json::to_string(r)?);
            text.push('\n');
        }
        atomic_write(&self.path(name), text.as_bytes())
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        atomic_write(&self.path(name), text.as_bytes())
    }

    pub fn write_csv(&self, name: &str, header: &str, rows: &[String]) -> CliResult<()> {
        let mut text = String::from(header);
        text.push('\n');
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        atomic_write(&self.path(name), text.as_bytes())
    }

    /// Timing and invocation details, kept apart from the results.
    pub fn write_metadata(&self, params: &Params, status: &str) -> CliResult<()> {
        let finished = SystemTime::now();
        let secs = |t: SystemTime| {
            t.duration_since(UNIX_EPOCH)
                .map_or(0.0, |d| d.as_secs_f64())
        };
        let mut parameters = Map::new();
        for (k, v) in params.canonical() {
            parameters.insert(k, v.into());
        }
        let meta = json!({
            "command": params.command(),
            "tool_version": TOOL_VERSION,
            "config_digest": self.digest,
            "seed": self.seed,
            "parameters": parameters,
            "argv": std::env::args().collect::<Vec<_>>(),
            "started_unix": secs(self.started),
            "finished_unix": secs(finished),
            "elapsed_seconds": finished.duration_since(self.started).map_or(0.0, |d| d.as_secs_f64()),
            "status": status,
        });
        self.write_json("metadata.json", &meta)
    }
}
