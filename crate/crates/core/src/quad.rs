//! Composite quadrature rules shared by the estimator and risk modules.

/// Trapezoid rule on an equally spaced grid given by the sampled values.
pub fn trapezoid(values: &[f64], spacing: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    spacing * (0.5 * values[0] + interior + 0.5 * values[values.len() - 1])
}

/// Trapezoid rule for `f` sampled on `count` equally spaced points of `[lo, hi]`.
pub fn trapezoid_fn(f: impl Fn(f64) -> f64, lo: f64, hi: f64, count: usize) -> f64 {
    assert!(count >= 2 && hi > lo);
    let spacing = (hi - lo) / (count - 1) as f64;
    let mut acc = 0.5 * (f(lo) + f(hi));
    for i in 1..count - 1 {
        acc += f(lo + i as f64 * spacing);
    }
    acc * spacing
}

/// Composite Simpson rule with `count` points (rounded up to an odd count >= 3).
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, count: usize) -> f64 {
    let count = if count < 3 { 3 } else { count | 1 };
    let spacing = (hi - lo) / (count - 1) as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..count - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * spacing);
    }
    acc * spacing / 3.0
}

/// Composite Simpson over `[lo, hi]` split at the interior `breaks`,
/// distributing roughly `count` points proportionally to segment length.
pub fn simpson_split(f: impl Fn(f64) -> f64, lo: f64, hi: f64, breaks: &[f64], count: usize) -> f64 {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(lo);
    edges.extend(cuts);
    edges.push(hi);
    let total = hi - lo;
    let mut acc = 0.0;
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let pts = ((count as f64 * (b - a) / total).ceil() as usize).max(51);
        acc += simpson(&f, a, b, pts);
    }
    acc
}

/// Cumulative trapezoid integral of equally spaced `values`; output has the
/// same length, starting at 0.
pub fn cumulative_trapezoid(values: &[f64], spacing: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for pair in values.windows(2) {
        acc += 0.5 * (pair[0] + pair[1]) * spacing;
        out.push(acc);
    }
    out
}
