//! Orthonormal 2-D real DFT over small planes, with half-spectrum storage.
//!
//! A real h x w plane maps to h x (w/2 + 1) complex bins. Columns 0 and w/2
//! (even w) carry their own mirror rows, every other stored bin stands for a
//! conjugate pair, so the inverse weighs it twice. The inverse is defined for
//! *arbitrary* stored values — it reconstructs the real plane of the
//! Hermitian-symmetrized spectrum — which keeps optimizer-perturbed spectra
//! well-defined and the map linear.
//!
//! Table-based O(n^3) per transform; the planes here are at most 32x32 so
//! this costs less than a single conv layer.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpectrum {
    pub h: usize,
    pub w: usize,
    /// h * (w/2 + 1) each, row-major over (k, l).
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl HalfSpectrum {
    pub fn cols(&self) -> usize {
        self.w / 2 + 1
    }

    #[inline]
    pub fn idx(&self, k: usize, l: usize) -> usize {
        k * self.cols() + l
    }
}

pub struct Dft2 {
    h: usize,
    w: usize,
    cols: usize,
    scale: f64,
    // cos_h[k*h + m] = cos(2 pi k m / h), same layout for the others
    cos_h: Vec<f64>,
    sin_h: Vec<f64>,
    cos_w: Vec<f64>,
    sin_w: Vec<f64>,
}

impl Dft2 {
    pub fn new(h: usize, w: usize) -> Self {
        assert!(h > 0 && w > 0);
        let tau = 2.0 * core::f64::consts::PI;
        let mut cos_h = vec![0.0; h * h];
        let mut sin_h = vec![0.0; h * h];
        for k in 0..h {
            for m in 0..h {
                let ang = tau * (k * m % h) as f64 / h as f64;
                cos_h[k * h + m] = libm::cos(ang);
                sin_h[k * h + m] = libm::sin(ang);
            }
        }
        let cols = w / 2 + 1;
        let mut cos_w = vec![0.0; cols * w];
        let mut sin_w = vec![0.0; cols * w];
        for l in 0..cols {
            for n in 0..w {
                let ang = tau * (l * n % w) as f64 / w as f64;
                cos_w[l * w + n] = libm::cos(ang);
                sin_w[l * w + n] = libm::sin(ang);
            }
        }
        Dft2 {
            h,
            w,
            cols,
            scale: 1.0 / libm::sqrt((h * w) as f64),
            cos_h,
            sin_h,
            cos_w,
            sin_w,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.h, self.w)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Conjugate-pair multiplicity of stored column l.
    #[inline]
    pub fn mult(&self, l: usize) -> f64 {
        if l == 0 || (self.w % 2 == 0 && l == self.w / 2) {
            1.0
        } else {
            2.0
        }
    }

    /// Bins whose basis function has no imaginary part (DC and Nyquist
    /// corners); the imaginary component of a stored value there never
    /// reaches the decoded plane.
    pub fn is_self_conjugate_bin(&self, k: usize, l: usize) -> bool {
        (2 * k) % self.h == 0 && (2 * l) % self.w == 0
    }

    /// Forward transform of a real plane (length h*w).
    pub fn forward(&self, plane: &[f64]) -> HalfSpectrum {
        let (h, w, cols) = (self.h, self.w, self.cols);
        assert_eq!(plane.len(), h * w);
        // stage 1: per-row transform over n -> stored columns l
        let mut row_re = vec![0.0; h * cols];
        let mut row_im = vec![0.0; h * cols];
        for m in 0..h {
            let row = &plane[m * w..(m + 1) * w];
            for l in 0..cols {
                let (cw, sw) = (&self.cos_w[l * w..(l + 1) * w], &self.sin_w[l * w..(l + 1) * w]);
                let mut re = 0.0;
                let mut im = 0.0;
                for n in 0..w {
                    re += row[n] * cw[n];
                    im -= row[n] * sw[n];
                }
                row_re[m * cols + l] = re;
                row_im[m * cols + l] = im;
            }
        }
        // stage 2: per-column transform over m -> rows k
        let mut re = vec![0.0; h * cols];
        let mut im = vec![0.0; h * cols];
        for k in 0..h {
            let (ch, sh) = (&self.cos_h[k * h..(k + 1) * h], &self.sin_h[k * h..(k + 1) * h]);
            for l in 0..cols {
                let mut ar = 0.0;
                let mut ai = 0.0;
                for m in 0..h {
                    let (rr, ri) = (row_re[m * cols + l], row_im[m * cols + l]);
                    // multiply by e^{-2 pi i k m / h}
                    ar += rr * ch[m] + ri * sh[m];
                    ai += ri * ch[m] - rr * sh[m];
                }
                re[k * cols + l] = self.scale * ar;
                im[k * cols + l] = self.scale * ai;
            }
        }
        HalfSpectrum { h, w, re, im }
    }

    /// Inverse transform to a real plane.
    pub fn inverse(&self, spec: &HalfSpectrum) -> Vec<f64> {
        let (h, w, cols) = (self.h, self.w, self.cols);
        assert_eq!(spec.re.len(), h * cols);
        // stage 1: per stored column, inverse transform over k -> rows m
        let mut col_re = vec![0.0; h * cols];
        let mut col_im = vec![0.0; h * cols];
        for m in 0..h {
            for l in 0..cols {
                let mut vr = 0.0;
                let mut vi = 0.0;
                for k in 0..h {
                    let (zr, zi) = (spec.re[k * cols + l], spec.im[k * cols + l]);
                    let (c, s) = (self.cos_h[k * h + m], self.sin_h[k * h + m]);
                    // multiply by e^{+2 pi i k m / h}
                    vr += zr * c - zi * s;
                    vi += zi * c + zr * s;
                }
                let mlt = self.mult(l);
                col_re[m * cols + l] = mlt * vr;
                col_im[m * cols + l] = mlt * vi;
            }
        }
        // stage 2: real part of per-row inverse over l -> columns n
        let mut out = vec![0.0; h * w];
        for m in 0..h {
            let row = &mut out[m * w..(m + 1) * w];
            for l in 0..cols {
                let (vr, vi) = (col_re[m * cols + l], col_im[m * cols + l]);
                let (cw, sw) = (&self.cos_w[l * w..(l + 1) * w], &self.sin_w[l * w..(l + 1) * w]);
                for n in 0..w {
                    // Re((vr + i vi) e^{+2 pi i l n / w})
                    row[n] += vr * cw[n] - vi * sw[n];
                }
            }
        }
        for v in out.iter_mut() {
            *v *= self.scale;
        }
        out
    }

    /// Adjoint of `inverse`: given d(loss)/d(plane), returns
    /// d(loss)/d(spectrum). Equals the forward transform with each stored
    /// column weighted by its multiplicity.
    pub fn inverse_vjp(&self, cot_plane: &[f64]) -> HalfSpectrum {
        let mut spec = self.forward(cot_plane);
        let cols = self.cols;
        for k in 0..self.h {
            for l in 0..cols {
                let mlt = self.mult(l);
                spec.re[k * cols + l] *= mlt;
                spec.im[k * cols + l] *= mlt;
            }
        }
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    /// Literal quadruple-loop inverse over the Hermitian-extended full
    /// spectrum; the independent oracle for `inverse`.
    fn naive_inverse(spec: &HalfSpectrum) -> Vec<f64> {
        let (h, w) = (spec.h, spec.w);
        let cols = w / 2 + 1;
        let tau = 2.0 * core::f64::consts::PI;
        // full spectrum by mirror: Z[k][l] for l > w/2 = conj(Z[(h-k)%h][w-l])
        let full = |k: usize, l: usize| -> (f64, f64) {
            if l < cols {
                (spec.re[k * cols + l], spec.im[k * cols + l])
            } else {
                let km = (h - k) % h;
                let lm = w - l;
                (spec.re[km * cols + lm], -spec.im[km * cols + lm])
            }
        };
        let scale = 1.0 / libm::sqrt((h * w) as f64);
        let mut out = vec![0.0; h * w];
        for m in 0..h {
            for n in 0..w {
                let mut acc = 0.0;
                for k in 0..h {
                    for l in 0..w {
                        let (a, b) = full(k, l);
                        let ang = tau * (k as f64 * m as f64 / h as f64 + l as f64 * n as f64 / w as f64);
                        acc += a * libm::cos(ang) - b * libm::sin(ang);
                    }
                }
                out[m * w + n] = scale * acc;
            }
        }
        out
    }

    fn random_plane(h: usize, w: usize, seed: u64) -> Vec<f64> {
        let mut r = rng::seeded(seed);
        (0..h * w).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect()
    }

    fn random_spec(h: usize, w: usize, seed: u64) -> HalfSpectrum {
        let mut r = rng::seeded(seed);
        let cols = w / 2 + 1;
        HalfSpectrum {
            h,
            w,
            re: (0..h * cols).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect(),
            im: (0..h * cols).map(|_| r.gen::<f64>() * 2.0 - 1.0).collect(),
        }
    }

    #[test]
    fn inverse_matches_naive_oracle() {
        for (h, w, seed) in [(8, 8, 1u64), (5, 7, 2), (4, 6, 3), (1, 8, 4), (8, 1, 5)] {
            let dft = Dft2::new(h, w);
            let spec = random_spec(h, w, seed);
            let fast = dft.inverse(&spec);
            let slow = naive_inverse(&spec);
            for (a, b) in fast.iter().zip(slow.iter()) {
                assert!((a - b).abs() < 1e-10, "{h}x{w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn round_trip_is_identity() {
        for (h, w, seed) in [(8, 8, 10u64), (5, 7, 11), (32, 32, 12)] {
            let dft = Dft2::new(h, w);
            let plane = random_plane(h, w, seed);
            let rec = dft.inverse(&dft.forward(&plane));
            for (a, b) in plane.iter().zip(rec.iter()) {
                assert!((a - b).abs() < 1e-11, "{h}x{w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn inverse_vjp_is_adjoint() {
        // <g, inverse(Z)> must equal <vjp(g), Z> for the real pairing.
        for (h, w, seed) in [(8, 8, 20u64), (6, 5, 21)] {
            let dft = Dft2::new(h, w);
            let z = random_spec(h, w, seed);
            let g = random_plane(h, w, seed + 100);
            let lhs: f64 = g.iter().zip(dft.inverse(&z).iter()).map(|(a, b)| a * b).sum();
            let vjp = dft.inverse_vjp(&g);
            let rhs: f64 = vjp
                .re
                .iter()
                .zip(z.re.iter())
                .chain(vjp.im.iter().zip(z.im.iter()))
                .map(|(a, b)| a * b)
                .sum();
            assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn dc_only_spectrum_is_constant_plane() {
        let dft = Dft2::new(8, 8);
        let cols = 8 / 2 + 1;
        let mut spec = HalfSpectrum { h: 8, w: 8, re: vec![0.0; 8 * cols], im: vec![0.0; 8 * cols] };
        spec.re[0] = 8.0; // DC
        let plane = dft.inverse(&spec);
        for v in plane {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn self_conjugate_imaginary_parts_are_inert() {
        let dft = Dft2::new(8, 8);
        let mut spec = random_spec(8, 8, 30);
        let base = dft.inverse(&spec);
        for (k, l) in [(0usize, 0usize), (4, 0), (0, 4), (4, 4)] {
            assert!(dft.is_self_conjugate_bin(k, l));
            spec.im[spec.idx(k, l)] += 3.5;
        }
        let bumped = dft.inverse(&spec);
        for (a, b) in base.iter().zip(bumped.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
