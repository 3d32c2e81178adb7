use std::cmp::Ordering;
use std::fmt;

use super::pairs::SamplePair;

/// Fewer than two samples, or one coordinate constant across all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegenerateInput;

impl fmt::Display for DegenerateInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DegenerateInput: need two samples and variation in both coordinates")
    }
}

impl std::error::Error for DegenerateInput {}

/// Kendall's τ_b between surrogate and true cost.
pub fn kendall_tau_b(pairs: &[SamplePair]) -> Result<f64, DegenerateInput> {
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.iter().map(|p| (p.phi, p.f)).unzip();
    kendall_tau_b_xy(&x, &y)
}

/// Number of pairs inside runs of equal values of a sorted slice.
fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Stable merge sort that returns the number of inversions.
fn sort_counting_swaps(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = sort_counting_swaps(&mut v[..mid], &mut buf[..mid]);
    swaps += sort_counting_swaps(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..].copy_from_slice(&v[j..]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// τ_b with tie correction in O(n log n) (Knight's algorithm).
pub fn kendall_tau_b_xy(x: &[f64], y: &[f64]) -> Result<f64, DegenerateInput> {
    assert_eq!(x.len(), y.len(), "paired samples");
    let n = x.len() as u64;
    if n < 2 {
        return Err(DegenerateInput);
    }
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(y[a].total_cmp(&y[b])));
    let xs: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();

    let n0 = n * (n - 1) / 2;
    let n1 = tied_pairs(&xs);
    // pairs tied in both coordinates
    let mut n3 = 0;
    let mut run = 1u64;
    for k in 1..idx.len() {
        if xs[k] == xs[k - 1] && ys[k] == ys[k - 1] {
            run += 1;
        } else {
            n3 += run * (run - 1) / 2;
            run = 1;
        }
    }
    n3 += run * (run - 1) / 2;

    let mut buf = vec![0.0; ys.len()];
    let swaps = sort_counting_swaps(&mut ys, &mut buf);
    let n2 = tied_pairs(&ys);
    if n1 == n0 || n2 == n0 {
        return Err(DegenerateInput);
    }
    let numerator = n0 as f64 - n1 as f64 - n2 as f64 + n3 as f64 - 2.0 * swaps as f64;
    let denom = ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt();
    Ok(numerator / denom)
}

/// Share of the best `⌈k·n/100⌉` solutions by true cost that are also among
/// the best `⌈k·n/100⌉` by surrogate. Ties keep sample order.
///
/// Panics on an empty sample or `k_percent` outside `(0, 100]`.
pub fn recall_at_k(pairs: &[SamplePair], k_percent: f64) -> f64 {
    assert!(!pairs.is_empty(), "recall of an empty sample");
    assert!(k_percent > 0.0 && k_percent <= 100.0, "k must lie in (0, 100], got {k_percent}");
    let n = pairs.len();
    // k·n/100 is often an integer that floating point overshoots slightly
    let m = ((k_percent * n as f64 / 100.0) - 1e-9).ceil().max(1.0) as usize;
    let top = |key: fn(&SamplePair) -> f64| {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| key(&pairs[a]).partial_cmp(&key(&pairs[b])).unwrap_or(Ordering::Equal));
        let mut chosen = vec![false; n];
        for &i in &idx[..m] {
            chosen[i] = true;
        }
        chosen
    };
    let by_f = top(|p| p.f);
    let by_phi = top(|p| p.phi);
    let hits = (0..n).filter(|&i| by_f[i] && by_phi[i]).count();
    hits as f64 / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
        let n = x.len();
        let (mut c, mut d, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
        for i in 0..n {
            for j in i + 1..n {
                let sx = (x[i] - x[j]).signum() * ((x[i] != x[j]) as i32 as f64);
                let sy = (y[i] - y[j]).signum() * ((y[i] != y[j]) as i32 as f64);
                match (sx == 0.0, sy == 0.0) {
                    (true, true) => {}
                    (true, false) => tx += 1,
                    (false, true) => ty += 1,
                    (false, false) if sx == sy => c += 1,
                    _ => d += 1,
                }
            }
        }
        let denom = (((c + d + tx) * (c + d + ty)) as f64).sqrt();
        (denom > 0.0).then(|| (c - d) as f64 / denom)
    }

    #[test]
    fn tied_example_by_hand() {
        // pairs (1,2): tied in y; (1,3): concordant; (2,3): tied in x
        // C = 1, D = 0, n0 = 3, n1 = n2 = 1, τ_b = 1 / √(2·2) = 0.5
        let t = kendall_tau_b_xy(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]).unwrap();
        assert!((t - 0.5).abs() < 1e-15);
    }

    #[test]
    fn extremes() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau_b_xy(&x, &[10.0, 20.0, 30.0, 40.0]), Ok(1.0));
        assert_eq!(kendall_tau_b_xy(&x, &[4.0, 3.0, 2.0, 1.0]), Ok(-1.0));
        assert_eq!(kendall_tau_b_xy(&x, &[7.0; 4]), Err(DegenerateInput));
        assert_eq!(kendall_tau_b_xy(&[1.0], &[1.0]), Err(DegenerateInput));
    }

    proptest! {
        #[test]
        fn matches_quadratic_oracle(v in prop::collection::vec((0u8..6, 0u8..6), 2..60)) {
            let x: Vec<f64> = v.iter().map(|p| p.0 as f64).collect();
            let y: Vec<f64> = v.iter().map(|p| p.1 as f64).collect();
            match (kendall_tau_b_xy(&x, &y), naive_tau_b(&x, &y)) {
                (Ok(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12, "{a} vs {b}"),
                (Err(_), None) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }
    }

    fn pairs(v: &[(f64, f64)]) -> Vec<SamplePair> {
        v.iter().map(|&(phi, f)| SamplePair { phi, f }).collect()
    }

    #[test]
    fn recall_twenty_points() {
        let mut v: Vec<(f64, f64)> = (0..20).map(|i| (i as f64, i as f64)).collect();
        v[1].0 = 50.0;
        v[2].0 = 0.5;
        // top 2 by F: {0, 1}; top 2 by φ: {0, 2}
        assert_eq!(recall_at_k(&pairs(&v), 10.0), 0.5);
        assert_eq!(recall_at_k(&pairs(&v), 100.0), 1.0);
    }

    #[test]
    fn recall_rounds_up() {
        let v: Vec<(f64, f64)> = (0..30).map(|i| (i as f64, i as f64)).collect();
        // ⌈1 · 30 / 100⌉ = 1, ⌈5 · 30 / 100⌉ = 2
        assert_eq!(recall_at_k(&pairs(&v), 1.0), 1.0);
        let mut w = v.clone();
        w[1].0 = 99.0;
        assert_eq!(recall_at_k(&pairs(&w), 5.0), 0.5);
        // reversed halves
        let r: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -(i as f64))).collect();
        assert_eq!(recall_at_k(&pairs(&r), 50.0), 0.0);
    }

    #[test]
    #[should_panic]
    fn recall_rejects_empty() {
        recall_at_k(&[], 5.0);
    }

    #[test]
    fn sort_counts_inversions() {
        let mut v = [3.0, 1.0, 2.0, 1.0];
        let mut buf = [0.0; 4];
        // inversions: (3,1) (3,2) (3,1) (2,1)
        assert_eq!(sort_counting_swaps(&mut v, &mut buf), 4);
        assert_eq!(v, [1.0, 1.0, 2.0, 3.0]);
    }
}
