//! Number formatting shared by text, CSV and JSON output.

/// Round to 12 significant digits and print the shortest form that reads back to it.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    rounded.to_string()
}

/// [`fmt_num`] applied before JSON serialisation.
pub fn round12(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(0.99969999999999), "0.9997");
    }
}
