use std::io::Write;

use anyhow::Result;
use serde_json::{Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float rounded to 12 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    // avoid printing -0.0
    Value::from(if rounded == 0.0 { 0.0 } else { rounded })
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// A JSON document for one command: schema tag, library version, the
/// resolved parameters, then the result fields.
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, params: Value) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), Value::from(format!("mfq.{command}.v1")));
        fields.insert("version".into(), Value::from(VERSION));
        fields.insert("params".into(), params);
        Self { fields }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.into(), value);
        self
    }

    pub fn print(self) -> Result<()> {
        let mut out = std::io::stdout().lock();
        serde_json::to_writer_pretty(&mut out, &Value::Object(self.fields))?;
        writeln!(out)?;
        Ok(())
    }
}

/// Open the CSV destination: a file when a path is given, stdout otherwise.
pub fn csv_writer(path: Option<&std::path::Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| anyhow::anyhow!("cannot create {}: {e}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// CSV cell text for a float, with the same rounding as the JSON output.
pub fn cell(x: f64) -> String {
    match num(x) {
        Value::Null => String::new(),
        v => v.to_string(),
    }
}
