//! CSV and JSON writers.
//!
//! CSV cells are comma-separated with a mandatory header row; fields never
//! contain commas or quotes here, so no quoting is required. Floats print
//! with 17 significant digits so a reread reproduces them bit-exactly.

use std::io::Write;

pub fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        // integers stay readable
        format!("{v:.1}")
    } else {
        format!("{v:.16e}")
    }
}

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, header: &[&str]) -> std::io::Result<CsvWriter<W>> {
        writeln!(out, "{}", header.join(","))?;
        Ok(CsvWriter { out })
    }

    pub fn row(&mut self, cells: &[String]) -> std::io::Result<()> {
        writeln!(self.out, "{}", cells.join(","))
    }
}

/// Minimal JSON emitter for the flat report structures.
pub struct Json {
    buf: String,
}

impl Json {
    pub fn new() -> Json {
        Json { buf: String::new() }
    }

    pub fn push_raw(&mut self, s: &str) {
        self.buf.push_str(s);
    }

    pub fn string(&mut self, s: &str) {
        self.buf.push('"');
        for ch in s.chars() {
            match ch {
                '"' => self.buf.push_str("\\\""),
                '\\' => self.buf.push_str("\\\\"),
                '\n' => self.buf.push_str("\\n"),
                c if (c as u32) < 0x20 => {
                    self.buf.push_str(&format!("\\u{:04x}", c as u32));
                }
                c => self.buf.push(c),
            }
        }
        self.buf.push('"');
    }

    pub fn number(&mut self, v: f64) {
        if v.is_finite() {
            self.buf.push_str(&format!("{v:.17e}"));
        } else {
            // JSON has no infinities; encode as strings
            self.string(&format!("{v}"));
        }
    }

    pub fn bool(&mut self, v: bool) {
        self.buf.push_str(if v { "true" } else { "false" });
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
