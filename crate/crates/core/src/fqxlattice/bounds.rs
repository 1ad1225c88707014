//! Upper bounds on short-vector counts, in the form they are checked
//! against exact counts.

fn qpow(q: u32, e: i64) -> u128 {
    if e < 0 {
        0
    } else {
        (q as u128).pow(e as u32)
    }
}

/// Rank 2, volume `q^m`: primitive `v` with `deg v ≤ r` number at most
/// `max(q, q^{2r−m+2})`.
pub fn rank2_primitive_bound(q: u32, r: i64, m: i64) -> u128 {
    qpow(q, 1).max(qpow(q, 2 * r - m + 2))
}

/// Rank 2: primitive `(g, h)` with `deg g ≤ r`, `deg h ≤ s` number at most
/// `max(q, q^{r+s−m+2})`.
pub fn rank2_box_primitive_bound(q: u32, r: i64, s: i64, m: i64) -> u128 {
    qpow(q, 1).max(qpow(q, r + s - m + 2))
}

/// Rank `n`, volume `q^m`, first minimum `μ`:
/// `#{deg v ≤ s} ≤ q^{max(0, n(s+1)−m, (n−1)(s+1−μ))}`.
pub fn short_vector_bound(q: u32, n: i64, s: i64, m: i64, mu: i64) -> u128 {
    let e = 0.max(n * (s + 1) - m).max((n - 1) * (s + 1 - mu));
    qpow(q, e)
}

/// Exponent bounding `#{v ∈ Λ_Q : deg_x v ≤ r − 1}` for `r > deg Q`.
pub fn derivative_lattice_exponent(p: u32, r: i64, deg_q: i64) -> Option<f64> {
    let (p, r, dq) = (p as f64, r as f64, deg_q as f64);
    if r <= dq {
        None
    } else if r < 2.0 * dq {
        Some((1.0 - 2.0 / p) * r - (1.0 - 2.0 / p) * dq + 2.0 * p - 1.0)
    } else {
        Some((1.0 - 1.0 / p) * r - dq + 2.0 * p - 1.0)
    }
}
