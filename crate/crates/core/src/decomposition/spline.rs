//! Natural cubic spline envelopes through signal extrema.

use crate::Scalar;

/// Evaluates the natural cubic spline through `(xs, ys)` at the integer
/// abscissae `0..len`. `xs` must be strictly increasing with at least two knots.
pub(crate) fn natural_spline_on_grid<T: Scalar>(xs: &[T], ys: &[T], len: usize) -> Vec<T> {
    let n = xs.len();
    debug_assert!(n >= 2 && ys.len() == n);
    let second = second_derivatives(xs, ys);
    let six = T::lit(6.0);
    let mut out = Vec::with_capacity(len);
    let mut seg = 0;
    for t in 0..len {
        let x = T::from_usize_lossy(t);
        while seg + 2 < n && x > xs[seg + 1] {
            seg += 1;
        }
        let (x0, x1) = (xs[seg], xs[seg + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let y = a * ys[seg]
            + b * ys[seg + 1]
            + ((a * a * a - a) * second[seg] + (b * b * b - b) * second[seg + 1]) * h * h / six;
        out.push(y);
    }
    out
}

/// Second derivatives at the knots with zero curvature at both ends
/// (tridiagonal solve by the Thomas algorithm).
fn second_derivatives<T: Scalar>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    let mut m = vec![T::zero(); n];
    if n < 3 {
        return m;
    }
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    let interior = n - 2;
    let mut diag = Vec::with_capacity(interior);
    let mut upper = Vec::with_capacity(interior);
    let mut lower = Vec::with_capacity(interior);
    let mut rhs = Vec::with_capacity(interior);
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        lower.push(h0);
        diag.push(two * (h0 + h1));
        upper.push(h1);
        rhs.push(six * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0));
    }
    for i in 1..interior {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        let prev = rhs[i - 1];
        rhs[i] -= w * prev;
    }
    let mut sol = vec![T::zero(); interior];
    sol[interior - 1] = rhs[interior - 1] / diag[interior - 1];
    for i in (0..interior - 1).rev() {
        sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
    }
    m[1..n - 1].copy_from_slice(&sol);
    m
}

/// Envelope through the extrema at `idx` (interior sample indices, ascending,
/// at least two), extended by mirroring the two nearest extrema across each
/// boundary sample.
pub(crate) fn envelope<T: Scalar>(signal: &[T], idx: &[usize]) -> Vec<T> {
    let n = signal.len();
    let last = n - 1;
    let k = idx.len();
    let mut xs = Vec::with_capacity(k + 4);
    let mut ys = Vec::with_capacity(k + 4);
    let to_t = |p: isize| T::lit(p as f64);
    for &p in idx[..2].iter().rev() {
        xs.push(to_t(-(p as isize)));
        ys.push(signal[p]);
    }
    for &p in idx {
        xs.push(to_t(p as isize));
        ys.push(signal[p]);
    }
    for &p in idx[k - 2..].iter().rev() {
        xs.push(to_t(2 * last as isize - p as isize));
        ys.push(signal[p]);
    }
    natural_spline_on_grid(&xs, &ys, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_interpolates_knots_and_reproduces_lines() {
        let xs = [0.0, 2.0, 5.0, 9.0];
        let ys = [1.0, 5.0, 11.0, 19.0]; // y = 2x + 1
        let out = natural_spline_on_grid(&xs, &ys, 10);
        for (t, y) in out.iter().enumerate() {
            assert!((y - (2.0 * t as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn spline_matches_hand_solved_system() {
        // Knots (0,0), (1,1), (2,0): the single interior equation gives
        // 4 M1 = 6 (-1 - 1), so M1 = -3 and s(0.5) = 0.5 + (0.125 - 0.5)(-3)/6.
        let xs: [f64; 3] = [0.0, 1.0, 2.0];
        let ys: [f64; 3] = [0.0, 1.0, 0.0];
        let second = second_derivatives(&xs, &ys);
        assert!((second[1] + 3.0).abs() < 1e-15);
        let a: f64 = 0.5;
        let expected = a * 1.0 + (a.powi(3) - a) * -3.0 / 6.0;
        let fine: Vec<f64> = xs.iter().map(|x| x * 2.0).collect();
        let out = natural_spline_on_grid(&fine, &ys, 5);
        assert!((out[1] - expected).abs() < 1e-12);
    }

    #[test]
    fn envelope_of_constant_extrema_is_flat() {
        let n = 64;
        let s: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let maxima: Vec<usize> = (1..n - 1).filter(|&i| s[i] > s[i - 1] && s[i] >= s[i + 1]).collect();
        let env = envelope(&s, &maxima);
        assert_eq!(env.len(), n);
        for &p in &maxima {
            assert!((env[p] - s[p]).abs() < 1e-12);
        }
    }
}
