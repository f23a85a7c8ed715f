use super::realify;
use crate::error::Result;
use crate::matrix::{c64, BandHermitian, RealSymTridiagonal};
use crate::reflector::{make_reflector, ChaseTag, Layout, Reflector, ReflectorSet, Stage};

const ZERO: c64 = c64::new(0.0, 0.0);
const ONE: c64 = c64::new(1.0, 0.0);

/// Lower band storage wide enough to hold the bulges.
struct Work {
    kd: usize,
    data: Vec<c64>,
}

impl Work {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= j && i - j <= self.kd, "({i}, {j}) outside work band");
        (i - j) + j * (self.kd + 1)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> c64 {
        self.data[self.idx(i, j)]
    }

    /// Entry of the full Hermitian matrix, either triangle.
    #[inline]
    fn herm(&self, i: usize, j: usize) -> c64 {
        if i >= j {
            self.get(i, j)
        } else {
            self.get(j, i).conj()
        }
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut c64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }
}

/// Reduces a band matrix to real tridiagonal form by column-wise bulge
/// chasing.
///
/// Sweep `j` annihilates column `j` below the first sub-diagonal with one
/// reflector, then chases the resulting bulge down the band one block at a
/// time before the next column is touched.
pub fn bulge_chase(band: &BandHermitian) -> Result<(RealSymTridiagonal, ReflectorSet)> {
    let n = band.n();
    let b = band.bandwidth();
    let kd = (2 * b).min(n - 1);
    let mut w = Work {
        kd,
        data: vec![ZERO; (kd + 1) * n],
    };
    for j in 0..n {
        for i in j..n.min(j + b + 1) {
            *w.at(i, j) = band.get(i, j);
        }
    }

    let mut reflectors = Vec::new();
    let mut tags = Vec::new();
    if b > 1 {
        let mut x = Vec::with_capacity(b);
        let mut p = Vec::with_capacity(b);
        for sweep in 0..n.saturating_sub(2) {
            let (mut c, mut r0, mut step) = (sweep, sweep + 1, 0);
            while r0 + 1 < n {
                let r1 = (r0 + b - 1).min(n - 1);
                let len = r1 - r0 + 1;
                x.clear();
                x.extend((r0..=r1).map(|i| w.get(i, c)));
                let (tau, beta) = make_reflector(x[0], &mut x[1..]);
                *w.at(r0, c) = beta;
                for i in r0 + 1..=r1 {
                    *w.at(i, c) = ZERO;
                }
                x[0] = ONE;
                if tau != ZERO {
                    // Left: H^H on the remaining columns of the bulge block.
                    for col in c + 1..r0 {
                        let dot: c64 = (0..len).map(|l| x[l].conj() * w.get(r0 + l, col)).sum();
                        let f = tau.conj() * dot;
                        for l in 0..len {
                            *w.at(r0 + l, col) -= f * x[l];
                        }
                    }
                    // Two-sided on the diagonal block.
                    p.clear();
                    p.extend((0..len).map(|i| tau * (0..len).map(|l| w.herm(r0 + i, r0 + l) * x[l]).sum::<c64>()));
                    let dot: c64 = p.iter().zip(&x).map(|(a, v)| a.conj() * v).sum();
                    let alpha = -0.5 * tau * dot;
                    for (pi, vi) in p.iter_mut().zip(&x) {
                        *pi += alpha * vi;
                    }
                    for jj in 0..len {
                        for ii in jj..len {
                            *w.at(r0 + ii, r0 + jj) -= x[ii] * p[jj].conj() + p[ii] * x[jj].conj();
                        }
                        w.at(r0 + jj, r0 + jj).im = 0.0;
                    }
                    // Right: H on the rows below, creating the next bulge.
                    for s in r1 + 1..n.min(r1 + b + 1) {
                        let dot: c64 = (0..len).map(|l| w.get(s, r0 + l) * x[l]).sum();
                        let f = tau * dot;
                        for l in 0..len {
                            *w.at(s, r0 + l) -= f * x[l].conj();
                        }
                    }
                }
                reflectors.push(Reflector {
                    offset: r0,
                    tau,
                    tail: x[1..].to_vec(),
                });
                tags.push(ChaseTag { sweep, step });
                c = r0;
                r0 = r1 + 1;
                step += 1;
            }
        }
    }

    let d: Vec<f64> = (0..n).map(|i| w.get(i, i).re).collect();
    let sub: Vec<c64> = (0..n - 1).map(|i| w.get(i + 1, i)).collect();
    let (t, phase) = realify(d, &sub)?;
    Ok((
        t,
        ReflectorSet {
            stage: Stage::BulgeChase,
            n,
            reflectors,
            layout: Layout::Chase { tags, bandwidth: b },
            phase,
        },
    ))
}
