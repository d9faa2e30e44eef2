use std::io::Write;
use std::path::Path;

use gapless_core::ExtFloat;

pub const ERR_TOKEN: &str = "ERR";

/// 17 significant digits in scientific notation.
pub fn num(x: f64) -> String {
    ExtFloat::from_f64(x).to_sci_string()
}

pub fn ext(x: ExtFloat) -> String {
    x.to_sci_string()
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub fn csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}
