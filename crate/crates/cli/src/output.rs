//! Report assembly: schema-versioned JSON, CSV rows, and a human-readable
//! pretty mode. Symbolic shorthand appears only in pretty mode; JSON always
//! carries plain `{re, im}` floats.

use crate::{Cli, CliError, OutputFormat, SCHEMA};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

pub fn c64(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn c64_pretty(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

pub fn matrix(m: &heun_unfold_core::Matrix2C) -> Value {
    json!([[c64(m.a11), c64(m.a12)], [c64(m.a21), c64(m.a22)]])
}

/// A report: a JSON document plus optional CSV rows.
pub struct Report {
    pub body: Map<String, Value>,
    pub csv: Option<(String, Vec<String>)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut body = Map::new();
        body.insert("schema".into(), Value::String(SCHEMA.into()));
        body.insert("command".into(), Value::String(command.into()));
        Self { body, csv: None }
    }

    pub fn set(&mut self, key: &str, value: Value) -> &mut Self {
        self.body.insert(key.into(), value);
        self
    }

    pub fn set_csv(&mut self, header: &str, rows: Vec<String>) {
        self.csv = Some((header.to_string(), rows));
    }

    pub fn emit(&self, cli: &Cli) -> Result<(), CliError> {
        let text = match cli.output {
            OutputFormat::Json => {
                serde_json::to_string_pretty(&Value::Object(self.body.clone())).unwrap() + "\n"
            }
            OutputFormat::Csv => match &self.csv {
                Some((header, rows)) => {
                    let mut s = String::from(header);
                    s.push('\n');
                    for r in rows {
                        s.push_str(r);
                        s.push('\n');
                    }
                    s
                }
                None => {
                    // Flatten scalar fields as key,value lines.
                    let mut s = String::from("key,value\n");
                    for (k, v) in &self.body {
                        s.push_str(&format!("{k},{}\n", flat(v)));
                    }
                    s
                }
            },
            OutputFormat::Pretty => {
                let mut s = String::new();
                for (k, v) in &self.body {
                    if k == "schema" {
                        continue;
                    }
                    s.push_str(&format!("{k}: {}\n", pretty(v)));
                }
                s
            }
        };
        match &cli.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn flat(v: &Value) -> String {
    match v {
        Value::Object(m) if m.contains_key("re") && m.contains_key("im") => format!(
            "{}{}{}i",
            m["re"],
            if m["im"].as_f64().unwrap_or(0.0) >= 0.0 {
                "+"
            } else {
                ""
            },
            m["im"]
        ),
        Value::String(s) => s.clone(),
        other => other.to_string().replace(',', ";"),
    }
}

fn pretty(v: &Value) -> String {
    match v {
        Value::Object(m) if m.contains_key("re") && m.contains_key("im") => {
            let re = m["re"].as_f64().unwrap_or(f64::NAN);
            let im = m["im"].as_f64().unwrap_or(f64::NAN);
            c64_pretty(Complex64::new(re, im))
        }
        Value::Object(m) => {
            let fields: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{k}={}", pretty(x)))
                .collect();
            format!("{{{}}}", fields.join(", "))
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(pretty).collect();
            format!("[{}]", items.join(", "))
        }
        other => other.to_string(),
    }
}
