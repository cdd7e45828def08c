use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use rgiso_core::montecarlo::csv::{self, CsvValue};
use rgiso_core::montecarlo::{Bin, HeatCell};

/// Invalid flag combination; exits like a clap usage error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match e.downcast_ref::<rgiso_core::Error>() {
        Some(rgiso_core::Error::UndefinedRate { .. }) => 4,
        Some(_) => 3,
        None => 1,
    }
}

/// Resolved run configuration echoed into every output.
pub struct Meta(BTreeMap<String, Value>);

impl Meta {
    pub fn new(command: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert("command".into(), json!(command));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        Meta(m)
    }

    pub fn set(mut self, key: &str, v: impl Serialize) -> Self {
        self.0.insert(key.into(), serde_json::to_value(v).expect("plain values serialize"));
        self
    }

    pub fn opt<T: Serialize>(self, key: &str, v: Option<T>) -> Self {
        match v {
            Some(v) => self.set(key, v),
            None => self,
        }
    }

    fn pairs(&self) -> Vec<(String, String)> {
        self.0
            .iter()
            .map(|(k, v)| {
                let s = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                (k.clone(), s)
            })
            .collect()
    }

    pub fn csv_header(&self) -> String {
        self.pairs().iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
    }
}

pub struct Sink(Box<dyn Write>);

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        Ok(Sink(match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(BufWriter::new(io::stdout())),
        }))
    }

    pub fn json(&mut self, meta: &Meta, report: Value) -> Result<()> {
        let doc = json!({ "meta": meta.0, "report": report });
        serde_json::to_writer_pretty(&mut self.0, &doc)?;
        writeln!(self.0)?;
        Ok(self.0.flush()?)
    }

    pub fn text(&mut self, s: &str) -> Result<()> {
        self.0.write_all(s.as_bytes())?;
        Ok(self.0.flush()?)
    }

    pub fn containment(&mut self, meta: &Meta, cells: &[HeatCell]) -> Result<()> {
        csv::write_containment(&mut self.0, &meta.pairs(), cells)?;
        Ok(self.0.flush()?)
    }

    pub fn distribution<T: CsvValue>(&mut self, meta: &Meta, bins: &[Bin<T>]) -> Result<()> {
        csv::write_distribution(&mut self.0, &meta.pairs(), bins)?;
        Ok(self.0.flush()?)
    }
}
