use alphaleak::AlphaOrder;

/// Decimal rendering with 12 significant digits.
pub fn significant(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn render_alpha(a: AlphaOrder) -> String {
    a.to_string()
}
