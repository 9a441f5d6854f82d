//! Report and artifact formatting: `key=value` lines use plain decimals,
//! CSV cells use 17-significant-digit scientific notation, images are
//! ASCII PGM. Everything is deterministic byte-for-byte.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

/// Normalizes the sign of zero so reports and CSV files never print "-0".
pub fn canonical(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Plain decimal for `key=value` report lines.
pub fn report_num(v: f64) -> String {
    format!("{}", canonical(v))
}

/// Two-component vector as `a,b` for report lines.
pub fn report_vec(dx: f64, dy: f64) -> String {
    format!("{},{}", report_num(dx), report_num(dy))
}

/// CSV cell with 17 significant digits (round-trips any f64).
pub fn csv_num(v: f64) -> String {
    format!("{:.16e}", canonical(v))
}

/// Writes a P2 (ASCII) PGM with one pixel per grid cell. Rows are written
/// top-down: the first pixel row is the cell row with the largest `y`.
pub fn write_pgm(
    path: &Path,
    nx: usize,
    ny: usize,
    mut pixel: impl FnMut(usize, usize) -> u8,
) -> io::Result<()> {
    let mut text = String::new();
    let _ = write!(text, "P2\n{nx} {ny}\n255\n");
    for j in (0..ny).rev() {
        for i in 0..nx {
            if i > 0 {
                text.push(' ');
            }
            let _ = write!(text, "{}", pixel(i, j));
        }
        text.push('\n');
    }
    std::fs::write(path, text)
}
