//! Deterministic number formatting: every float is emitted with 17 significant
//! digits so identical inputs produce byte-identical CSV/JSON output.

use serde::Serialize;
use std::io;

/// 17 significant digits, scientific notation.
pub fn fmt_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// JSON with 17-significant-digit floats (compact, LF-free single line).
pub fn to_json_sig17<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization");
    String::from_utf8(out).expect("serde_json emits utf-8")
}
