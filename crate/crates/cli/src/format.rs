/// `x` with ten significant digits, fixed notation for ordinary magnitudes.
pub fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=12).contains(&mag) {
        return format!("{x:.9e}");
    }
    let decimals = (9 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Comment lines echoing a resolved configuration.
pub fn header(command: &str, fields: &[(&str, String)]) -> String {
    let mut out = format!("# aoi {command}\n");
    for (k, v) in fields {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out
}
