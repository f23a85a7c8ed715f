use crate::error::{Error, Result};

pub const MAX_ITER: usize = 100;

/// A secular root stored relative to a pole: `lambda = d[origin] + tau`.
///
/// Differences `d_j - lambda` are formed as `(d_j - d[origin]) - tau`, which
/// keeps full relative accuracy next to the origin pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecularRoot {
    pub origin: usize,
    pub tau: f64,
}

impl SecularRoot {
    pub fn value(&self, d: &[f64]) -> f64 {
        d[self.origin] + self.tau
    }

    /// `d_j - lambda`.
    #[inline]
    pub fn delta(&self, d: &[f64], j: usize) -> f64 {
        (d[j] - d[self.origin]) - self.tau
    }
}

/// Root `i` (0-based) of `f(x) = 1 + rho * sum z_j^2 / (d_j - x)`.
///
/// Requires `d` strictly increasing, every `z_j` non-zero and `rho > 0`. Root
/// `i < k - 1` lies in `(d_i, d_{i+1})`, the last in `(d_k, d_k + rho |z|^2]`.
/// Iterates on a two-pole rational model of `f`, falling back to bisection
/// whenever the model step leaves the current bracket.
pub fn secular_solve(d: &[f64], z: &[f64], rho: f64, i: usize) -> Result<SecularRoot> {
    let k = d.len();
    if i >= k || z.len() != k || !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "secular root {i} of a size-{k} problem with rho {rho}"
        )));
    }
    if k == 1 {
        return Ok(SecularRoot {
            origin: 0,
            tau: rho * z[0] * z[0],
        });
    }
    let eps = f64::EPSILON;
    let last = i + 1 == k;

    // Pick the origin pole and the initial bracket in offsets from it.
    let (origin, mut lo, mut hi) = if last {
        let znorm2: f64 = z.iter().map(|x| x * x).sum();
        (k - 1, 0.0, rho * znorm2)
    } else {
        let half = 0.5 * (d[i + 1] - d[i]);
        let f_mid = 1.0 + rho * (0..k).map(|j| z[j] * z[j] / ((d[j] - d[i]) - half)).sum::<f64>();
        if f_mid >= 0.0 {
            (i, 0.0, half)
        } else {
            (i + 1, -((d[i + 1] - d[i]) - half), 0.0)
        }
    };
    let diffs: Vec<f64> = d.iter().map(|dj| dj - d[origin]).collect();
    // Poles of the model: nearest pole on each side of the root's interval.
    let (split, p, q) = if last {
        (k - 1, diffs[k - 2], diffs[k - 1])
    } else {
        (i + 1, diffs[i], diffs[i + 1])
    };

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let (mut psi, mut dpsi, mut phi, mut dphi) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..k {
            let del = diffs[j] - x;
            let t = z[j] * z[j] / del;
            if j < split {
                psi += t;
                dpsi += t / del;
            } else {
                phi += t;
                dphi += t / del;
            }
        }
        let (psi, dpsi, phi, dphi) = (rho * psi, rho * dpsi, rho * phi, rho * dphi);
        let f = 1.0 + psi + phi;
        let err = 8.0 * (phi - psi) + 1.0 + x.abs() * (dpsi + dphi);
        if f.abs() <= eps * err {
            return Ok(SecularRoot { origin, tau: x });
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 2.0 * eps * lo.abs().max(hi.abs()) {
            return Ok(SecularRoot { origin, tau: x });
        }

        let (pl, ql) = (p - x, q - x);
        let s = dpsi * pl * pl;
        let big_s = dphi * ql * ql;
        let c = 1.0 + (psi - dpsi * pl) + (phi - dphi * ql);
        // c h^2 - (c (pl + ql) + s + S) h + pl ql f = 0, h the step from x
        let a2 = c;
        let b2 = -(c * (pl + ql) + s + big_s);
        let c2 = pl * ql * f;
        let step = quadratic_roots(a2, b2, c2)
            .into_iter()
            .flatten()
            .map(|h| x + h)
            .filter(|&y| y > lo && y < hi)
            .min_by(|u, v| (u - x).abs().total_cmp(&(v - x).abs()));
        let next = step.unwrap_or(0.5 * (lo + hi));
        x = if next == x { 0.5 * (lo + hi) } else { next };
    }
    Err(Error::NonConvergence {
        what: "secular equation",
        iterations: MAX_ITER,
    })
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> [Option<f64>; 2] {
    if a == 0.0 {
        return [(b != 0.0).then(|| -c / b), None];
    }
    let disc = b * b - 4.0 * a * c;
    if !(disc >= 0.0) {
        return [None, None];
    }
    let qq = -0.5 * (b + b.signum() * disc.sqrt());
    if qq == 0.0 {
        return [Some(0.0), None];
    }
    [Some(qq / a), Some(c / qq)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pole() {
        let r = secular_solve(&[0.0], &[1.0], 2.0, 0).unwrap();
        assert_eq!(r.value(&[0.0]), 2.0);
    }

    #[test]
    fn two_poles_match_quadratic_formula() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = [0.0, 1.0];
        let z = [h, h];
        let lo = secular_solve(&d, &z, 1.0, 0).unwrap().value(&d);
        let hi = secular_solve(&d, &z, 1.0, 1).unwrap().value(&d);
        let s2 = 2f64.sqrt();
        assert!((lo - (2.0 - s2) / 2.0).abs() < 1e-14, "{lo}");
        assert!((hi - (2.0 + s2) / 2.0).abs() < 1e-14, "{hi}");
    }
}
