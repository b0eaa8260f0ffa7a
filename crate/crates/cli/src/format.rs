//! Locale-independent CSV number formatting.

/// C-style `%.9e`: nine fraction digits and a signed exponent of at least two
/// digits, e.g. `-7.529000000e-03`.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let s = format!("{x:.9e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

pub fn row(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}
