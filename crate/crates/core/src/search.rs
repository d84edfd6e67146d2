//! One-dimensional minimisation: dense scan followed by golden-section
//! refinement of the best bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping when the
/// bracket is narrower than `xtol`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // The midpoint can lose to an interior probe when the bracket holds a jump.
    [(x, fx), (c, fc), (d, fd)].into_iter().fold(
        (x, fx),
        |best, cand| if cand.1 < best.1 { cand } else { best },
    )
}

/// Minimise `f` over `(lo, hi]`: evaluate at `n_scan` equispaced points
/// `lo + k (hi - lo) / n_scan`, `k = 1..=n_scan`, then refine around the best
/// one. Non-finite samples are skipped.
pub fn scan_then_golden(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n_scan: usize,
    xtol: f64,
) -> Option<(f64, f64)> {
    let step = (hi - lo) / n_scan as f64;
    let (best_k, _) = (1..=n_scan)
        .map(|k| (k, f(lo + k as f64 * step)))
        .filter(|(_, v)| v.is_finite())
        .fold(None, |best: Option<(usize, f64)>, cand| match best {
            Some(b) if b.1 <= cand.1 => Some(b),
            _ => Some(cand),
        })?;
    let left = lo + (best_k as f64 - 1.0) * step;
    let right = (lo + (best_k as f64 + 1.0) * step).min(hi);
    let scanned = (lo + best_k as f64 * step, f(lo + best_k as f64 * step));
    let refined = golden_section(&f, left.max(lo + 0.5 * step * 1e-6), right, xtol);
    Some(if refined.1.is_finite() && refined.1 <= scanned.1 {
        refined
    } else {
        scanned
    })
}
