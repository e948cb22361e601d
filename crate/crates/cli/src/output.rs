use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use stable_kneser::Error;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A rendered report and the exit code it implies.
pub struct Outcome {
    pub body: String,
    pub code: u8,
}

impl Outcome {
    pub fn ok(body: String) -> Self {
        Outcome { body, code: 0 }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
}

pub fn emit(body: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
