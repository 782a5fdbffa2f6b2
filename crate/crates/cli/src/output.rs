//! Provenance headers and fixed-precision CSV formatting.
//!
//! Every output file starts with '#'-prefixed provenance lines (version and
//! the full run configuration); numbers print with nine significant digits so
//! reruns with identical headers are byte-identical golden files.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Nine-significant-digit scientific formatting; NaN prints as `NaN`.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.8e}")
    }
}

pub struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new(subcommand: &str, config: &[(&str, String)]) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, "# gaussmet {VERSION}");
        let mut line = format!("# command: {subcommand}");
        for (k, v) in config {
            let _ = write!(line, " {k}={v}");
        }
        let _ = writeln!(buf, "{line}");
        CsvDoc { buf }
    }

    pub fn header(&mut self, columns: &[&str]) {
        let _ = writeln!(self.buf, "{}", columns.join(","));
    }

    pub fn row(&mut self, fields: &[String]) {
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn write_to(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.buf.as_bytes())
    }
}
