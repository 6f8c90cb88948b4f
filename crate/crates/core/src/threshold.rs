//! Threshold search, binarization and the edge-pixel measure.

use crate::entropy::{
    coentropy, kaniadakis_compose, kaniadakis_entropy, shannon_entropy, tsallis_compose,
    tsallis_entropy, Distribution, EntropyFunctional,
};
use crate::error::{Error, Result};
use crate::imaging::{BiLevelImage, Binary, GrayImage, Histogram, LEVELS};

/// Largest admissible threshold; at 255 the bright class would be empty.
pub const MAX_THRESHOLD: u8 = 254;

/// One side of a threshold split: the gray levels `lo..=hi`, their total
/// frequency `mass`, and the class-normalized distribution `f_i / mass`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassDistribution {
    lo: u8,
    hi: u8,
    mass: f64,
    dist: Distribution,
}

impl ClassDistribution {
    pub fn lo(&self) -> u8 {
        self.lo
    }

    pub fn hi(&self) -> u8 {
        self.hi
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dist(&self) -> &Distribution {
        &self.dist
    }

    fn from_counts(h: &Histogram, lo: u8, hi: u8) -> Option<Self> {
        let counts = &h.counts()[lo as usize..=hi as usize];
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return None;
        }
        // N_i / N_A is f_i / P_A without the intermediate rounding.
        let probs = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let dist = Distribution::new(probs).expect("class counts normalize");
        Some(Self {
            lo,
            hi,
            mass: n as f64 / h.total() as f64,
            dist,
        })
    }
}

/// Optimal threshold and the entropies that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdResult {
    pub threshold: u8,
    pub total_entropy: f64,
    pub entropy_a: f64,
    pub entropy_b: f64,
}

/// Splits `h` into `A = [0, t]` and `B = [t+1, 255]`. Returns `None` when
/// either class is empty.
pub fn split(h: &Histogram, t: u8) -> Result<Option<(ClassDistribution, ClassDistribution)>> {
    if t > MAX_THRESHOLD {
        return Err(Error::ThresholdOutOfRange(t));
    }
    let a = ClassDistribution::from_counts(h, 0, t);
    let b = ClassDistribution::from_counts(h, t + 1, (LEVELS - 1) as u8);
    Ok(a.zip(b))
}

/// Total entropy of the split at `t` under `f`, or `None` if the split is infeasible.
pub fn total_entropy(h: &Histogram, t: u8, f: &EntropyFunctional) -> Result<Option<f64>> {
    Ok(evaluate(h, t, f)?.map(|r| r.total_entropy))
}

fn evaluate(h: &Histogram, t: u8, f: &EntropyFunctional) -> Result<Option<ThresholdResult>> {
    let Some((a, b)) = split(h, t)? else {
        return Ok(None);
    };
    let (a, b) = (a.dist(), b.dist());
    let (entropy_a, entropy_b, total) = match *f {
        EntropyFunctional::Shannon => {
            let (sa, sb) = (shannon_entropy(a), shannon_entropy(b));
            (sa, sb, sa + sb)
        }
        EntropyFunctional::Tsallis(q) => {
            let (sa, sb) = (tsallis_entropy(a, q), tsallis_entropy(b, q));
            (sa, sb, tsallis_compose(sa, sb, q))
        }
        EntropyFunctional::Kaniadakis(k) => {
            let (sa, sb) = (kaniadakis_entropy(a, k), kaniadakis_entropy(b, k));
            let total = kaniadakis_compose(sa, coentropy(a, k), sb, coentropy(b, k));
            (sa, sb, total)
        }
    };
    Ok(Some(ThresholdResult {
        threshold: t,
        total_entropy: total,
        entropy_a,
        entropy_b,
    }))
}

/// Exhaustive argmax of the total entropy over every feasible `t` in
/// `0..=254`. Ties go to the smallest `t`.
pub fn optimize_threshold(h: &Histogram, f: &EntropyFunctional) -> Result<ThresholdResult> {
    let mut best: Option<ThresholdResult> = None;
    for t in 0..=MAX_THRESHOLD {
        let Some(r) = evaluate(h, t, f)? else {
            continue;
        };
        if best.is_none_or(|b| r.total_entropy > b.total_entropy) {
            best = Some(r);
        }
    }
    best.ok_or(Error::Infeasible)
}

/// Pixels brighter than `t` become white, the rest black.
pub fn binarize(img: &GrayImage, t: u8) -> BiLevelImage {
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| if p > t { Binary::White } else { Binary::Black })
        .collect();
    BiLevelImage::new(img.width(), img.height(), pixels).expect("same dimensions")
}

/// Pixel neighborhood used by [`edge_pixel_count`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }
}

impl TryFrom<u8> for Connectivity {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            _ => Err(Error::Domain(format!("connectivity {n} (expected 4 or 8)"))),
        }
    }
}

/// Counts pixels with at least one in-image neighbor of the opposite value.
pub fn edge_pixel_count(img: &BiLevelImage, connectivity: Connectivity) -> usize {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let offsets = connectivity.offsets();
    let mut count = 0;
    for y in 0..h {
        for x in 0..w {
            let v = img.get(x as usize, y as usize);
            let on_edge = offsets.iter().any(|&(dx, dy)| {
                let (nx, ny) = (x + dx, y + dy);
                nx >= 0 && ny >= 0 && nx < w && ny < h && img.get(nx as usize, ny as usize) != v
            });
            if on_edge {
                count += 1;
            }
        }
    }
    count
}
