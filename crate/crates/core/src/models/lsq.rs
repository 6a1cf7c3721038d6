//! Small dense least squares via Householder QR.

/// Minimizes `|X b - y|^2` for a row-major `n x p` design matrix.
///
/// Columns are scaled to unit max-norm before factoring so that regressors
/// spanning many orders of magnitude (GDP in dollars next to a constant, or
/// `x^-5`) stay well conditioned. Returns `None` when the design is rank
/// deficient.
pub fn least_squares(design: &[f64], p: usize, ys: &[f64]) -> Option<Vec<f64>> {
    let n = ys.len();
    debug_assert_eq!(design.len(), n * p);
    if n < p || p == 0 {
        return None;
    }

    let mut scale = vec![0.0f64; p];
    for row in design.chunks_exact(p) {
        for (s, v) in scale.iter_mut().zip(row) {
            *s = s.max(v.abs());
        }
    }
    if scale.iter().any(|&s| s == 0.0 || !s.is_finite()) {
        return None;
    }

    // column-major working copy
    let mut a: Vec<Vec<f64>> = (0..p)
        .map(|j| design.chunks_exact(p).map(|row| row[j] / scale[j]).collect())
        .collect();
    let mut b = ys.to_vec();
    let mut diag = vec![0.0f64; p];

    for j in 0..p {
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 * (n as f64).sqrt() {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        // v = a[j..] - alpha e1, stored in place
        a[j][j] -= alpha;
        let vnorm2 = a[j][j..].iter().map(|v| v * v).sum::<f64>();
        diag[j] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let (head, tail) = a.split_at_mut(j + 1);
        let v = &head[j][j..];
        for col in tail.iter_mut() {
            let dot: f64 = v.iter().zip(&col[j..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col[j..].iter_mut().zip(v) {
                *c -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&b[j..]).map(|(x, y)| x * y).sum();
        let f = 2.0 * dot / vnorm2;
        for (c, vi) in b[j..].iter_mut().zip(v) {
            *c -= f * vi;
        }
    }

    // back substitution on R (upper triangle lives above the diagonal of `a`)
    let mut coef = vec![0.0f64; p];
    for j in (0..p).rev() {
        let mut acc = b[j];
        for (k, c) in coef.iter().enumerate().skip(j + 1) {
            acc -= a[k][j] * c;
        }
        coef[j] = acc / diag[j];
    }
    for (c, s) in coef.iter_mut().zip(&scale) {
        *c /= s;
    }
    coef.iter().all(|c| c.is_finite()).then_some(coef)
}
