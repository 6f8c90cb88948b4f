//! Generalized logarithms, entropy functionals and their composition laws.
//!
//! Every functional sums only over outcomes with positive probability, so
//! `0 ln 0` and `0^(1±κ)` contribute nothing and zero-padding a distribution
//! never changes its entropy. Powers are evaluated as `exp(a ln p)`.

use std::fmt;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Tolerance on `Σ p = 1` accepted by [`Distribution::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Finite discrete probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Rejects negative or non-finite entries and sums further than
    /// [`NORMALIZATION_TOLERANCE`] from one. Inputs are never renormalized.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Domain("distribution has no outcomes".into()));
        }
        if let Some(p) = probs
            .iter()
            .find(|p| !p.is_finite() || **p < 0.0 || **p > 1.0)
        {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Joint distribution of two independent systems, `p_i r_j` in row-major order.
    pub fn product(&self, other: &Distribution) -> Distribution {
        let probs = self
            .probs
            .iter()
            .flat_map(|&p| other.probs.iter().map(move |&r| p * r))
            .collect();
        Distribution { probs }
    }

    fn positive(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs.iter().copied().filter(|&p| p > 0.0)
    }
}

/// Tsallis entropic index `q`: positive, finite and different from one.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct TsallisIndex(f64);

impl TsallisIndex {
    pub fn new(q: f64) -> Result<Self> {
        let reason = if !q.is_finite() {
            "not finite"
        } else if q <= 0.0 {
            "q must be positive"
        } else if q == 1.0 {
            "q = 1 is the Shannon limit"
        } else {
            return Ok(Self(q));
        };
        Err(Error::InvalidIndex {
            kind: "tsallis",
            value: q,
            reason,
        })
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Kaniadakis entropic index `κ` with `0 < |κ| < 1`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct KappaIndex(f64);

impl KappaIndex {
    pub fn new(kappa: f64) -> Result<Self> {
        let k = Self::extended(kappa)?;
        if kappa.abs() >= 1.0 {
            return Err(Error::InvalidIndex {
                kind: "kaniadakis",
                value: kappa,
                reason: "|κ| must be below 1",
            });
        }
        Ok(k)
    }

    /// Any finite non-zero `κ`, including `|κ| ≥ 1`. Only reachable through
    /// the extended index policy.
    pub fn extended(kappa: f64) -> Result<Self> {
        let reason = if !kappa.is_finite() {
            "not finite"
        } else if kappa == 0.0 {
            "κ = 0 is the Shannon limit"
        } else {
            return Ok(Self(kappa));
        };
        Err(Error::InvalidIndex {
            kind: "kaniadakis",
            value: kappa,
            reason,
        })
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntropyKind {
    Shannon,
    Tsallis,
    Kaniadakis,
}

impl fmt::Display for EntropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntropyKind::Shannon => "shannon",
            EntropyKind::Tsallis => "tsallis",
            EntropyKind::Kaniadakis => "kaniadakis",
        })
    }
}

/// Entropy used to score a threshold, together with its entropic index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyFunctional {
    Shannon,
    Tsallis(TsallisIndex),
    Kaniadakis(KappaIndex),
}

impl EntropyFunctional {
    pub fn tsallis(q: f64) -> Result<Self> {
        TsallisIndex::new(q).map(Self::Tsallis)
    }

    pub fn kaniadakis(kappa: f64) -> Result<Self> {
        KappaIndex::new(kappa).map(Self::Kaniadakis)
    }

    pub fn kind(&self) -> EntropyKind {
        match self {
            Self::Shannon => EntropyKind::Shannon,
            Self::Tsallis(_) => EntropyKind::Tsallis,
            Self::Kaniadakis(_) => EntropyKind::Kaniadakis,
        }
    }

    pub fn index(&self) -> Option<f64> {
        match self {
            Self::Shannon => None,
            Self::Tsallis(q) => Some(q.get()),
            Self::Kaniadakis(k) => Some(k.get()),
        }
    }
}

#[inline]
fn pow(p: f64, a: f64) -> f64 {
    (a * p.ln()).exp()
}

/// q-logarithm `(x^(1-q) - 1) / (1 - q)`; the natural log at `q = 1`.
pub fn q_log(x: f64, q: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("q_log of non-positive {x}")));
    }
    if q == 1.0 {
        return Ok(x.ln());
    }
    Ok((pow(x, 1.0 - q) - 1.0) / (1.0 - q))
}

/// κ-logarithm `(x^κ - x^(-κ)) / (2κ)`; the natural log at `κ = 0`.
pub fn kappa_log(x: f64, kappa: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("kappa_log of non-positive {x}")));
    }
    if kappa == 0.0 {
        return Ok(x.ln());
    }
    // x^κ - x^-κ = 2 sinh(κ ln x)
    Ok((kappa * x.ln()).sinh() / kappa)
}

/// `-Σ p ln p`.
pub fn shannon_entropy(d: &Distribution) -> f64 {
    -d.positive().map(|p| p * p.ln()).sum::<f64>()
}

/// `(1 - Σ p^q) / (q - 1)`.
pub fn tsallis_entropy(d: &Distribution, q: TsallisIndex) -> f64 {
    let q = q.get();
    let sum: f64 = d.positive().map(|p| pow(p, q)).sum();
    (1.0 - sum) / (q - 1.0)
}

/// `-(1/2κ) Σ (p^(1+κ) - p^(1-κ))`.
///
/// Evaluated as `-Σ p sinh(κ ln p) / κ`, which is the same sum without the
/// cancellation between the two powers at small `κ`.
pub fn kaniadakis_entropy(d: &Distribution, kappa: KappaIndex) -> f64 {
    let k = kappa.get();
    -d.positive().map(|p| p * (k * p.ln()).sinh()).sum::<f64>() / k
}

/// Co-entropy `(1/2) Σ (p^(1+κ) + p^(1-κ)) = Σ p cosh(κ ln p)`.
pub fn coentropy(d: &Distribution, kappa: KappaIndex) -> f64 {
    let k = kappa.get();
    d.positive().map(|p| p * (k * p.ln()).cosh()).sum()
}

/// Pseudo-additive Tsallis sum `S^A + S^B + (1 - q) S^A S^B`.
pub fn tsallis_compose(s_a: f64, s_b: f64, q: TsallisIndex) -> f64 {
    s_a + s_b + (1.0 - q.get()) * s_a * s_b
}

/// Kaniadakis generalized sum `S^A 𝔖^B + S^B 𝔖^A`.
pub fn kaniadakis_compose(s_a: f64, co_a: f64, s_b: f64, co_b: f64) -> f64 {
    s_a * co_b + s_b * co_a
}

/// `(1/N) ln W` for the multinomial multiplicity `W = N! / Π N_i!`, through
/// log-Gamma so no factorial is ever formed.
pub fn log_multiplicity(counts: &[u64]) -> Result<f64> {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::Domain("multiplicity of an empty scene".into()));
    }
    let ln_fact = |k: u64| ln_gamma(k as f64 + 1.0);
    let ln_w = ln_fact(n) - counts.iter().map(|&c| ln_fact(c)).sum::<f64>();
    Ok(ln_w / n as f64)
}
