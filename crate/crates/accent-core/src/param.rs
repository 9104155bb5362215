//! Optimizable image representations.
//!
//! A `ParamState` is the thing the optimizer owns. `init_from_image` encodes
//! a seed image into it, `decode` maps it back to a valid [0,1] pixel image,
//! and `decode_vjp` pulls a pixel-space cotangent back onto the optimizable
//! arrays. Three kinds:
//!
//! * `pixel` — the pre-squash pixel grid itself;
//! * `fourier` — complex half-spectrum coefficients per channel, multiplied
//!   by a fixed low-frequency-boosting weight grid before the inverse DFT;
//! * `maco-phase` — polar form with the magnitude spectrum frozen to the
//!   seed's; only phases move.
//!
//! Decoded values pass through the logistic squash, so seeds are clamped to
//! [EPS, 1-EPS] before the exact inverse (logit) is taken.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::dft::Dft2;
use crate::error::{CoreError, Result};
use crate::tensor::Tensor;

/// Seed clamp margin; also the per-pixel round-trip tolerance.
pub const SEED_EPS: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    Pixel,
    Fourier,
    MacoPhase,
}

impl ParamKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParamKind::Pixel => "pixel",
            ParamKind::Fourier => "fourier",
            ParamKind::MacoPhase => "maco-phase",
        }
    }
}

impl core::str::FromStr for ParamKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pixel" => Ok(ParamKind::Pixel),
            "fourier" => Ok(ParamKind::Fourier),
            "maco-phase" | "maco" => Ok(ParamKind::MacoPhase),
            other => Err(CoreError::config(alloc::format!(
                "unknown parameterization '{other}' (pixel | fourier | maco-phase)"
            ))),
        }
    }
}

/// Non-optimized data carried alongside the optimizable arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Frozen {
    None,
    /// Half-spectrum weight grid (h * (w/2+1)), shared across channels.
    FourierWeights(Vec<f64>),
    /// Seed magnitude spectrum, c * h * (w/2+1); at the DC/Nyquist corner
    /// bins the value is the *signed* real coefficient.
    MacoMagnitude(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamState {
    pub kind: ParamKind,
    pub c: usize,
    pub h: usize,
    pub w: usize,
    /// The optimizable arrays. pixel: [t]; fourier: [re, im]; maco: [phase].
    pub tensors: Vec<Vec<f64>>,
    pub frozen: Frozen,
}

#[inline]
pub fn squash(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + libm::exp(-t))
    } else {
        let e = libm::exp(t);
        e / (1.0 + e)
    }
}

#[inline]
pub fn squash_inverse(x: f64) -> f64 {
    libm::log(x / (1.0 - x))
}

fn clamped_logit(seed: &Tensor) -> Tensor {
    seed.map(|x| squash_inverse(x.clamp(SEED_EPS, 1.0 - SEED_EPS)))
}

/// Frequency weight grid over the full h x w spectrum: inverse normalized
/// frequency radius, floored at the lowest nonzero frequency, rescaled to
/// unit mean gain.
pub fn fourier_weights(h: usize, w_dim: usize) -> Vec<f64> {
    assert!(h > 0 && w_dim > 0);
    let f_min = 1.0 / h.max(w_dim) as f64;
    let mut grid = vec![0.0; h * w_dim];
    for k in 0..h {
        let fy = k.min(h - k) as f64 / h as f64;
        for l in 0..w_dim {
            let fx = l.min(w_dim - l) as f64 / w_dim as f64;
            let r = libm::sqrt(fy * fy + fx * fx);
            grid[k * w_dim + l] = 1.0 / r.max(f_min);
        }
    }
    let mean = grid.iter().sum::<f64>() / grid.len() as f64;
    for v in grid.iter_mut() {
        *v /= mean;
    }
    grid
}

/// The stored-column slice of the full weight grid.
fn half_weights(h: usize, w: usize) -> Vec<f64> {
    let full = fourier_weights(h, w);
    let cols = w / 2 + 1;
    let mut half = vec![0.0; h * cols];
    for k in 0..h {
        for l in 0..cols {
            half[k * cols + l] = full[k * w + l];
        }
    }
    half
}

/// Canonical-bin classification for phase-only states. Within the
/// self-conjugate columns (0 and w/2 for even w) the rows k and h-k mirror
/// each other; decode reconstructs the mirror from the canonical row so the
/// decoded spectrum stays Hermitian-consistent and the magnitude invariant
/// holds exactly.
#[derive(Clone, Copy, PartialEq, Eq)]
enum BinRole {
    /// Free phase, multiplicity handled by the DFT.
    Free,
    /// DC/Nyquist corner: coefficient is the frozen signed magnitude.
    Corner,
    /// Canonical row of a self-conjugate column.
    Canonical { mirror_k: usize },
    /// Mirror row; inert, reconstructed from the canonical row.
    Mirror,
}

fn bin_role(h: usize, w: usize, k: usize, l: usize) -> BinRole {
    let self_conj_col = l == 0 || (w % 2 == 0 && l == w / 2);
    if !self_conj_col {
        return BinRole::Free;
    }
    if (2 * k) % h == 0 {
        return BinRole::Corner;
    }
    let mirror = h - k;
    if k < mirror {
        BinRole::Canonical { mirror_k: mirror }
    } else {
        BinRole::Mirror
    }
}

impl ParamState {
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.c, self.h, self.w)
    }

    fn cols(&self) -> usize {
        self.w / 2 + 1
    }

    /// Decoded image in [0,1] together with the pre-squash plane.
    pub fn decode_with_pre(&self) -> (Tensor, Tensor) {
        let pre = self.decode_pre_squash();
        let img = pre.map(squash);
        (img, pre)
    }

    pub fn decode(&self) -> Tensor {
        self.decode_with_pre().0
    }

    /// The pre-squash image (the inverse-DFT output for spectral kinds).
    pub fn decode_pre_squash(&self) -> Tensor {
        match self.kind {
            ParamKind::Pixel => {
                Tensor::from_vec(self.c, self.h, self.w, self.tensors[0].clone())
            }
            ParamKind::Fourier => {
                let dft = Dft2::new(self.h, self.w);
                let cols = self.cols();
                let weights = match &self.frozen {
                    Frozen::FourierWeights(wts) => wts,
                    _ => unreachable!("fourier state without weights"),
                };
                let mut out = Tensor::zeros(self.c, self.h, self.w);
                let n = self.h * cols;
                for ch in 0..self.c {
                    let re: Vec<f64> = (0..n)
                        .map(|i| self.tensors[0][ch * n + i] * weights[i])
                        .collect();
                    let im: Vec<f64> = (0..n)
                        .map(|i| self.tensors[1][ch * n + i] * weights[i])
                        .collect();
                    let spec = crate::dft::HalfSpectrum { h: self.h, w: self.w, re, im };
                    out.plane_mut(ch).copy_from_slice(&dft.inverse(&spec));
                }
                out
            }
            ParamKind::MacoPhase => {
                let dft = Dft2::new(self.h, self.w);
                let cols = self.cols();
                let n = self.h * cols;
                let mag = match &self.frozen {
                    Frozen::MacoMagnitude(m) => m,
                    _ => unreachable!("maco state without magnitudes"),
                };
                let phase = &self.tensors[0];
                let mut out = Tensor::zeros(self.c, self.h, self.w);
                for ch in 0..self.c {
                    let mut re = vec![0.0; n];
                    let mut im = vec![0.0; n];
                    for k in 0..self.h {
                        for l in 0..cols {
                            let i = k * cols + l;
                            match bin_role(self.h, self.w, k, l) {
                                BinRole::Corner => {
                                    re[i] = mag[ch * n + i];
                                }
                                BinRole::Free => {
                                    let (r, p) = (mag[ch * n + i], phase[ch * n + i]);
                                    re[i] = r * libm::cos(p);
                                    im[i] = r * libm::sin(p);
                                }
                                BinRole::Canonical { mirror_k } => {
                                    let (r, p) = (mag[ch * n + i], phase[ch * n + i]);
                                    let (cr, ci) = (r * libm::cos(p), r * libm::sin(p));
                                    re[i] = cr;
                                    im[i] = ci;
                                    let j = mirror_k * cols + l;
                                    re[j] = cr;
                                    im[j] = -ci;
                                }
                                BinRole::Mirror => {} // written by its canonical row
                            }
                        }
                    }
                    let spec = crate::dft::HalfSpectrum { h: self.h, w: self.w, re, im };
                    out.plane_mut(ch).copy_from_slice(&dft.inverse(&spec));
                }
                out
            }
        }
    }

    /// Pull a pixel-space cotangent back to the optimizable arrays. `image`
    /// must be the decode of this state. Returns the per-tensor gradients and
    /// the number of exactly-saturated squash outputs encountered (those
    /// coordinates carry zero gradient).
    pub fn decode_vjp(&self, image: &Tensor, cot: &Tensor) -> (Vec<Vec<f64>>, usize) {
        debug_assert_eq!(image.shape(), self.shape());
        let mut saturated = 0usize;
        let mut grad_pre = Tensor::zeros(self.c, self.h, self.w);
        for i in 0..image.data.len() {
            let x = image.data[i];
            if x == 0.0 || x == 1.0 {
                saturated += 1;
            }
            grad_pre.data[i] = cot.data[i] * x * (1.0 - x);
        }
        let grads = match self.kind {
            ParamKind::Pixel => vec![grad_pre.data],
            ParamKind::Fourier => {
                let dft = Dft2::new(self.h, self.w);
                let cols = self.cols();
                let n = self.h * cols;
                let weights = match &self.frozen {
                    Frozen::FourierWeights(wts) => wts,
                    _ => unreachable!(),
                };
                let mut g_re = vec![0.0; self.c * n];
                let mut g_im = vec![0.0; self.c * n];
                for ch in 0..self.c {
                    let spec = dft.inverse_vjp(grad_pre.plane(ch));
                    for i in 0..n {
                        g_re[ch * n + i] = spec.re[i] * weights[i];
                        g_im[ch * n + i] = spec.im[i] * weights[i];
                    }
                }
                vec![g_re, g_im]
            }
            ParamKind::MacoPhase => {
                let dft = Dft2::new(self.h, self.w);
                let cols = self.cols();
                let n = self.h * cols;
                let mag = match &self.frozen {
                    Frozen::MacoMagnitude(m) => m,
                    _ => unreachable!(),
                };
                let phase = &self.tensors[0];
                let mut g_phase = vec![0.0; self.c * n];
                for ch in 0..self.c {
                    let spec = dft.inverse_vjp(grad_pre.plane(ch));
                    for k in 0..self.h {
                        for l in 0..cols {
                            let i = k * cols + l;
                            match bin_role(self.h, self.w, k, l) {
                                BinRole::Corner | BinRole::Mirror => {}
                                BinRole::Free => {
                                    let (r, p) = (mag[ch * n + i], phase[ch * n + i]);
                                    let (sp, cp) = (libm::sin(p), libm::cos(p));
                                    g_phase[ch * n + i] =
                                        r * (-sp * spec.re[i] + cp * spec.im[i]);
                                }
                                BinRole::Canonical { mirror_k } => {
                                    let (r, p) = (mag[ch * n + i], phase[ch * n + i]);
                                    let (sp, cp) = (libm::sin(p), libm::cos(p));
                                    let j = mirror_k * cols + l;
                                    // own bin: d(r e^{ip})/dp; mirror bin: d(r e^{-ip})/dp
                                    g_phase[ch * n + i] = r
                                        * (-sp * spec.re[i] + cp * spec.im[i]
                                            - sp * spec.re[j]
                                            - cp * spec.im[j]);
                                }
                            }
                        }
                    }
                }
                vec![g_phase]
            }
        };
        (grads, saturated)
    }
}

/// Encode a seed image (pixels in [0,1]) into an optimizable state whose
/// decode reproduces the seed within `SEED_EPS` per pixel.
pub fn init_from_image(kind: ParamKind, seed: &Tensor) -> Result<ParamState> {
    let (c, h, w) = seed.shape();
    if c == 0 || h == 0 || w == 0 {
        return Err(CoreError::config("seed image has an empty dimension"));
    }
    if !seed.all_finite() {
        return Err(CoreError::numeric(String::from("seed image contains non-finite values")));
    }
    let t = clamped_logit(seed);
    match kind {
        ParamKind::Pixel => Ok(ParamState {
            kind,
            c,
            h,
            w,
            tensors: vec![t.data],
            frozen: Frozen::None,
        }),
        ParamKind::Fourier => {
            let dft = Dft2::new(h, w);
            let weights = half_weights(h, w);
            let cols = w / 2 + 1;
            let n = h * cols;
            let mut re = vec![0.0; c * n];
            let mut im = vec![0.0; c * n];
            for ch in 0..c {
                let spec = dft.forward(t.plane(ch));
                for i in 0..n {
                    re[ch * n + i] = spec.re[i] / weights[i];
                    im[ch * n + i] = spec.im[i] / weights[i];
                }
            }
            Ok(ParamState {
                kind,
                c,
                h,
                w,
                tensors: vec![re, im],
                frozen: Frozen::FourierWeights(weights),
            })
        }
        ParamKind::MacoPhase => {
            let dft = Dft2::new(h, w);
            let cols = w / 2 + 1;
            let n = h * cols;
            let mut mag = vec![0.0; c * n];
            let mut phase = vec![0.0; c * n];
            for ch in 0..c {
                let spec = dft.forward(t.plane(ch));
                for k in 0..h {
                    for l in 0..cols {
                        let i = k * cols + l;
                        let (zr, zi) = (spec.re[i], spec.im[i]);
                        if let BinRole::Corner = bin_role(h, w, k, l) {
                            // imaginary part is exactly zero here; keep the sign
                            mag[ch * n + i] = zr;
                            phase[ch * n + i] = 0.0;
                        } else {
                            mag[ch * n + i] = libm::hypot(zr, zi);
                            phase[ch * n + i] = libm::atan2(zi, zr);
                        }
                    }
                }
            }
            Ok(ParamState {
                kind,
                c,
                h,
                w,
                tensors: vec![phase],
                frozen: Frozen::MacoMagnitude(mag),
            })
        }
    }
}
