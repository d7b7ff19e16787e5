use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Spectrum, SpectrumKind};

/// Spacings below this fraction of the spectral width count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// How the starting index `i` of `r_i = (E_{i+2k} - E_{i+k}) / (E_{i+k} - E_i)` advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMode {
    /// Every `i`.
    #[default]
    Sliding,
    /// `i` in steps of `k`, so no two ratios share a spacing.
    Strided,
}

impl std::str::FromStr for IndexMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sliding" => Ok(IndexMode::Sliding),
            "strided" => Ok(IndexMode::Strided),
            other => Err(Error::InvalidParameter(format!("unknown index mode {other:?}"))),
        }
    }
}

/// k-th order spacing ratios of one spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSequence {
    pub values: Vec<f64>,
    pub k: usize,
    pub mode: IndexMode,
    pub source_len: usize,
}

impl RatioSequence {
    /// Number of ratios a spectrum of `len` levels yields.
    pub fn expected_len(len: usize, k: usize, mode: IndexMode) -> usize {
        if len < 2 * k + 1 {
            return 0;
        }
        match mode {
            IndexMode::Sliding => len - 2 * k,
            IndexMode::Strided => (len - 1) / k - 1,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn ratios_of(levels: &[f64], width: f64, k: usize, step: usize) -> Result<Vec<f64>> {
    let floor = DEGENERACY_TOL * width;
    let mut out = Vec::with_capacity((levels.len() - 2 * k) / step + 1);
    let mut i = 0;
    while i + 2 * k < levels.len() {
        let below = levels[i + k] - levels[i];
        let above = levels[i + 2 * k] - levels[i + k];
        if !(below > floor) || !(above > floor) {
            return Err(Error::DegenerateSpacing { index: out.len() });
        }
        out.push(above / below);
        i += step;
    }
    Ok(out)
}

/// k-th order spacing ratios. Circular spectra are treated as sorted
/// points on a line (no spacing across the branch cut).
pub fn kth_spacing_ratios(s: &Spectrum, k: usize, mode: IndexMode) -> Result<RatioSequence> {
    if k == 0 {
        return Err(Error::InvalidParameter("ratio order k must be positive".into()));
    }
    let levels = s.levels();
    if levels.len() < 2 * k + 1 {
        return Err(Error::TooFewLevels {
            needed: 2 * k + 1,
            got: levels.len(),
        });
    }
    let step = match mode {
        IndexMode::Sliding => 1,
        IndexMode::Strided => k,
    };
    let values = ratios_of(levels, s.width(), k, step)?;
    Ok(RatioSequence {
        values,
        k,
        mode,
        source_len: levels.len(),
    })
}

/// Like [`kth_spacing_ratios`] but wraps around the circle, so a circular
/// spectrum of `n` phases gives `n` sliding ratios.
pub fn kth_spacing_ratios_cyclic(s: &Spectrum, k: usize, mode: IndexMode) -> Result<RatioSequence> {
    if s.kind() != SpectrumKind::Circle {
        return Err(Error::InvalidParameter(
            "cyclic ratios need a circular spectrum".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("ratio order k must be positive".into()));
    }
    let n = s.len();
    if n < 2 * k + 1 {
        return Err(Error::TooFewLevels {
            needed: 2 * k + 1,
            got: n,
        });
    }
    let mut extended = s.levels().to_vec();
    extended.extend(s.levels()[..2 * k].iter().map(|t| t + TAU));
    let step = match mode {
        IndexMode::Sliding => 1,
        IndexMode::Strided => k,
    };
    let mut values = ratios_of(&extended, TAU, k, step)?;
    // starting points must stay within one turn
    let starts = match mode {
        IndexMode::Sliding => n,
        IndexMode::Strided => n.div_ceil(k),
    };
    values.truncate(starts);
    Ok(RatioSequence {
        values,
        k,
        mode,
        source_len: n,
    })
}
