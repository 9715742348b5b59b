//! Plain-text output helpers shared by the CSV writers.

use std::io::{self, Write};

use crate::scalar::Real;

/// Formats a scalar with 17 significant digits (`d.dddddddddddddddde±x`).
///
/// Seventeen digits round-trip every `f64` exactly, so re-running an
/// experiment reproduces byte-identical files.
pub fn fmt_real<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64().unwrap_or(f64::NAN))
}

/// Writes a header line followed by one comma-separated row per item.
pub fn write_rows<W, I, const N: usize>(mut out: W, header: [&str; N], rows: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = [f64; N]>,
{
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let fields: Vec<String> = row.iter().map(|&x| fmt_real(x)).collect();
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1_f64, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            let s = fmt_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_real(1.0_f64), "1.0000000000000000e0");
    }

    #[test]
    fn rows() {
        let mut buf = Vec::new();
        write_rows(&mut buf, ["a", "b"], [[1.0, 2.0], [3.0, -4.5]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "a,b\n1.0000000000000000e0,2.0000000000000000e0\n3.0000000000000000e0,-4.5000000000000000e0\n"
        );
    }
}
