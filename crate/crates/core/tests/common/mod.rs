//! Test-only oracles. Nothing here calls into the entropy or threshold
//! modules of the library: entropies are recomputed from their textbook
//! power-sum forms with `powf`, and the threshold scan re-derives the class
//! frequencies `f_i / P` from the raw histogram.
#![allow(dead_code)]

use std::path::PathBuf;

use entropic_threshold::{load_image, GrayImage, Histogram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub enum Oracle {
    Shannon,
    Tsallis(f64),
    Kaniadakis(f64),
}

pub fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

pub fn tsallis(p: &[f64], q: f64) -> f64 {
    let s: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(q)).sum();
    (1.0 - s) / (q - 1.0)
}

pub fn kaniadakis(p: &[f64], k: f64) -> f64 {
    let s: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.powf(1.0 + k) - x.powf(1.0 - k))
        .sum();
    -s / (2.0 * k)
}

pub fn co_kaniadakis(p: &[f64], k: f64) -> f64 {
    let s: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.powf(1.0 + k) + x.powf(1.0 - k))
        .sum();
    s / 2.0
}

/// Total entropy at threshold `t` straight from the per-class sums.
pub fn naive_total(freq: &[f64], t: usize, f: Oracle) -> Option<f64> {
    let pa: f64 = freq[..=t].iter().sum();
    let pb: f64 = freq[t + 1..].iter().sum();
    if pa == 0.0 || pb == 0.0 {
        return None;
    }
    let a: Vec<f64> = freq[..=t].iter().map(|f| f / pa).collect();
    let b: Vec<f64> = freq[t + 1..].iter().map(|f| f / pb).collect();
    Some(match f {
        Oracle::Shannon => shannon(&a) + shannon(&b),
        Oracle::Tsallis(q) => {
            let (sa, sb) = (tsallis(&a, q), tsallis(&b, q));
            sa + sb + (1.0 - q) * sa * sb
        }
        Oracle::Kaniadakis(k) => {
            kaniadakis(&a, k) * co_kaniadakis(&b, k) + kaniadakis(&b, k) * co_kaniadakis(&a, k)
        }
    })
}

/// Brute-force argmax over 0..=254, smallest threshold on ties.
pub fn naive_threshold(counts: &[u64; 256], f: Oracle) -> Option<u8> {
    let n: u64 = counts.iter().sum();
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let mut best: Option<(usize, f64)> = None;
    for t in 0..255 {
        if let Some(v) = naive_total(&freq, t, f) {
            match best {
                Some((_, b)) if v <= b => {}
                _ => best = Some((t, v)),
            }
        }
    }
    best.map(|(t, _)| t as u8)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random probability vector with `n` outcomes, some of them zero.
pub fn random_distribution(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.15) {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let s: f64 = w.iter().sum();
        if s > 0.0 {
            return w.iter().map(|x| x / s).collect();
        }
    }
}

/// 256-bin histogram on a random support of 2..=64 levels with counts in 1..=1000.
pub fn random_sparse_counts(rng: &mut impl Rng) -> [u64; 256] {
    let support = rng.random_range(2..=64);
    let mut counts = [0u64; 256];
    let mut placed = 0;
    while placed < support {
        let level = rng.random_range(0..256);
        if counts[level] == 0 {
            counts[level] = rng.random_range(1..=1000);
            placed += 1;
        }
    }
    counts
}

/// Discretized mixture of two Gaussian bumps, scaled to about `scale` samples.
pub fn bimodal_counts(modes: [(f64, f64, f64); 2], scale: f64) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for (level, c) in counts.iter_mut().enumerate() {
        let x = level as f64;
        let density: f64 = modes
            .iter()
            .map(|&(mean, sigma, weight)| {
                weight * (-0.5 * ((x - mean) / sigma).powi(2)).exp()
                    / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            })
            .sum();
        *c = (density * scale).round() as u64;
    }
    counts
}

/// Two truncated Gaussian modes (±2.5σ) whose Tsallis optimum switches from
/// inside the wide bright mode to the gap between the modes as q grows.
pub fn competing_modes_counts() -> [u64; 256] {
    let bump = |mean: f64, sigma: f64| -> Vec<f64> {
        let raw: Vec<f64> = (0..256)
            .map(|l| {
                let z = (l as f64 - mean) / sigma;
                if z.abs() <= 2.5 {
                    (-0.5 * z * z).exp()
                } else {
                    0.0
                }
            })
            .collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / s).collect()
    };
    let (a, b) = (bump(50.0, 8.0), bump(180.0, 15.0));
    let mut counts = [0u64; 256];
    for l in 0..256 {
        counts[l] = ((0.7 * a[l] + 0.3 * b[l]) * 100_000.0).round() as u64;
    }
    counts
}

pub fn histogram(counts: [u64; 256]) -> Histogram {
    Histogram::from_counts(counts).unwrap()
}

/// A one-column image whose histogram is exactly `counts`.
pub fn image_from_counts(counts: &[u64; 256]) -> GrayImage {
    let pixels: Vec<u8> = counts
        .iter()
        .enumerate()
        .flat_map(|(level, &c)| std::iter::repeat_n(level as u8, c as usize))
        .collect();
    GrayImage::new(1, pixels.len(), pixels).unwrap()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> GrayImage {
    load_image(fixture_path(name)).unwrap()
}

/// The three 512x512 8-bit reference images checked into `tests/fixtures`.
pub const FIXTURES: [&str; 3] = ["lena.pgm", "cameraman.pgm", "ascent.pgm"];
