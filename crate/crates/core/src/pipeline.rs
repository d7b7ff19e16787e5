//! Multi-realization experiments: generate spectra, pool ratios, fit.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{
    sample_circular, sample_gaussian, CircularEnsembleSpec, DysonIndex, GaussianEnsembleSpec,
};
use crate::error::{Error, Result};
use crate::io::read_level_file;
use crate::models::{
    build_chiral_chain, build_defect_xxz, build_intermediate_map, build_kicked_top,
    ChiralChainParams, DefectXxzParams, IntermediateMapParams, KickedTopParams,
};
use crate::numerics::{eigenphases_unitary, eigenvalues_hermitian, Spectrum, SpectrumKind, StreamId};
use crate::ratio::{
    fit_values, histogram, kth_spacing_ratios, kth_spacing_ratios_cyclic, predicted_beta_prime,
    FitGrid, FitReport, Histogram, IndexMode,
};

/// Default fraction of levels trimmed from each spectral edge for sources
/// with a non-uniform density of states.
pub const DEFAULT_EDGE_TRIM: f64 = 0.02;

/// Where the spectra of an experiment come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Source {
    Gaussian { beta: DysonIndex, dim: usize },
    Circular { beta: DysonIndex, dim: usize },
    DefectXxz(DefectXxzParams),
    /// `field_seed` is replaced per realization by `(master_seed, i)`.
    ChiralChain(ChiralChainParams),
    KickedTop(KickedTopParams),
    /// `phase_seed` is replaced per realization by `(master_seed, i)`.
    IntermediateMap(IntermediateMapParams),
    File { path: PathBuf },
}

impl Source {
    /// Symmetry class of the source, when it has one.
    pub fn beta(&self) -> Option<DysonIndex> {
        match self {
            Source::Gaussian { beta, .. } | Source::Circular { beta, .. } => Some(*beta),
            Source::DefectXxz(_) | Source::KickedTop(_) => Some(DysonIndex::Orthogonal),
            Source::ChiralChain(_) | Source::IntermediateMap(_) => Some(DysonIndex::Unitary),
            Source::File { .. } => None,
        }
    }

    /// Whether every realization produces the same spectrum.
    pub fn is_deterministic(&self) -> bool {
        matches!(
            self,
            Source::DefectXxz(_) | Source::KickedTop(_) | Source::File { .. }
        )
    }

    pub fn default_trim(&self) -> f64 {
        match self {
            Source::Gaussian { .. } | Source::DefectXxz(_) | Source::ChiralChain(_) => {
                DEFAULT_EDGE_TRIM
            }
            _ => 0.0,
        }
    }

    /// The same source at a different size: matrix dimension for ensembles
    /// and the intermediate map, chain length for spin chains (middle defect,
    /// largest sector), `2j + 1` for the kicked top.
    pub fn with_size(&self, size: usize) -> Result<Source> {
        Ok(match self {
            Source::Gaussian { beta, .. } => Source::Gaussian { beta: *beta, dim: size },
            Source::Circular { beta, .. } => Source::Circular { beta: *beta, dim: size },
            Source::DefectXxz(p) => Source::DefectXxz(DefectXxzParams {
                defect_site: (size / 2).max(1),
                n_up: size / 2,
                sites: size,
                ..p.clone()
            }),
            Source::ChiralChain(p) => Source::ChiralChain(ChiralChainParams {
                sites: size,
                n_up: size / 2,
                ..p.clone()
            }),
            Source::KickedTop(p) => Source::KickedTop(KickedTopParams {
                j: (size.max(1) - 1) as f64 / 2.0,
                ..p.clone()
            }),
            Source::IntermediateMap(p) => Source::IntermediateMap(IntermediateMapParams {
                n: size,
                ..p.clone()
            }),
            Source::File { .. } => {
                return Err(Error::InvalidParameter("a level file has a fixed size".into()))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec {
            bins: 100,
            lo: 0.0,
            hi: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: Source,
    pub realizations: usize,
    pub k_list: Vec<usize>,
    #[serde(default)]
    pub mode: IndexMode,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub fit_grid: FitGrid,
    /// Fraction trimmed from each edge; `None` picks the source default.
    #[serde(default)]
    pub trim: Option<f64>,
    #[serde(default)]
    pub histogram: HistogramSpec,
    /// Include the spacing across the branch cut of circular spectra.
    #[serde(default)]
    pub cyclic: bool,
    /// Symmetry class assumed for sources without one (level files).
    #[serde(default)]
    pub assumed_beta: Option<DysonIndex>,
    /// Also fit each realization on its own (for spread estimates).
    #[serde(default)]
    pub per_realization_fits: bool,
}

impl ExperimentConfig {
    pub fn new(source: Source, realizations: usize, k_list: Vec<usize>) -> Self {
        ExperimentConfig {
            source,
            realizations,
            k_list,
            mode: IndexMode::Sliding,
            master_seed: 0,
            fit_grid: FitGrid::default(),
            trim: None,
            histogram: HistogramSpec::default(),
            cyclic: false,
            assumed_beta: None,
            per_realization_fits: false,
        }
    }

    pub fn effective_trim(&self) -> f64 {
        self.trim.unwrap_or_else(|| self.source.default_trim())
    }

    pub fn beta(&self) -> Option<DysonIndex> {
        self.source.beta().or(self.assumed_beta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter("realizations must be >= 1".into()));
        }
        if self.source.is_deterministic() && self.realizations != 1 {
            return Err(Error::InvalidParameter(
                "deterministic sources take exactly one realization".into(),
            ));
        }
        if self.k_list.is_empty() || self.k_list.contains(&0) {
            return Err(Error::InvalidParameter("k list must hold positive orders".into()));
        }
        let trim = self.effective_trim();
        if !(0.0..0.5).contains(&trim) {
            return Err(Error::InvalidParameter(format!("trim {trim} outside [0, 0.5)")));
        }
        if self.cyclic && trim > 0.0 {
            return Err(Error::InvalidParameter("cyclic ratios need trim = 0".into()));
        }
        self.fit_grid.validate()?;
        if self.histogram.bins == 0 || !(self.histogram.lo < self.histogram.hi) {
            return Err(Error::InvalidParameter("invalid histogram range".into()));
        }
        Ok(())
    }
}

/// Per-order results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub k: usize,
    pub predicted_beta_prime: Option<u32>,
    pub fit: FitReport,
    pub histogram: Histogram,
    pub n: usize,
    /// Fitted index of each realization alone, in realization order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization_fits: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    /// Independent level sequences analyzed (parity blocks count separately).
    pub sequences: usize,
    /// Levels kept after trimming, summed over sequences.
    pub levels: usize,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub orders: Vec<OrderReport>,
    pub meta: ReportMeta,
}

impl ExperimentReport {
    pub fn order(&self, k: usize) -> Option<&OrderReport> {
        self.orders.iter().find(|o| o.k == k)
    }

    /// The report with its timing zeroed; everything else is a pure
    /// function of the config.
    pub fn without_timing(&self) -> ExperimentReport {
        let mut r = self.clone();
        r.meta.wall_seconds = 0.0;
        r
    }
}

/// The level sequences of realization `index`.
pub fn realization_spectra(cfg: &ExperimentConfig, index: usize) -> Result<Vec<Spectrum>> {
    let stream = StreamId::new(cfg.master_seed, index as u64);
    match &cfg.source {
        Source::Gaussian { beta, dim } => {
            let spec = GaussianEnsembleSpec { beta: *beta, dim: *dim };
            Ok(vec![sample_gaussian(spec, &mut stream.stream())?])
        }
        Source::Circular { beta, dim } => {
            let spec = CircularEnsembleSpec { beta: *beta, dim: *dim };
            Ok(vec![sample_circular(spec, &mut stream.stream())?])
        }
        Source::DefectXxz(p) => Ok(vec![eigenvalues_hermitian(&build_defect_xxz(p)?)?]),
        Source::ChiralChain(p) => {
            let p = ChiralChainParams {
                field_seed: stream,
                ..p.clone()
            };
            Ok(vec![eigenvalues_hermitian(&build_chiral_chain(&p)?)?])
        }
        Source::KickedTop(p) => build_kicked_top(p)?
            .iter()
            .map(eigenphases_unitary)
            .collect(),
        Source::IntermediateMap(p) => {
            let p = IntermediateMapParams {
                phase_seed: stream,
                ..p.clone()
            };
            Ok(vec![eigenphases_unitary(&build_intermediate_map(&p)?)?])
        }
        Source::File { path } => Ok(vec![read_level_file(path)?]),
    }
}

struct RealizationRatios {
    per_k: Vec<Vec<f64>>,
    fits: Vec<f64>,
    sequences: usize,
    levels: usize,
}

fn realization_ratios(cfg: &ExperimentConfig, index: usize) -> Result<RealizationRatios> {
    let trim = cfg.effective_trim();
    let spectra = realization_spectra(cfg, index)?;
    let mut per_k = vec![Vec::new(); cfg.k_list.len()];
    let mut levels = 0;
    for s in &spectra {
        let kept = s.trimmed(trim)?;
        levels += kept.len();
        for (slot, &k) in per_k.iter_mut().zip(&cfg.k_list) {
            let rs = if cfg.cyclic && kept.kind() == SpectrumKind::Circle {
                kth_spacing_ratios_cyclic(&kept, k, cfg.mode)?
            } else {
                kth_spacing_ratios(&kept, k, cfg.mode)?
            };
            slot.extend(rs.values);
        }
    }
    let fits = if cfg.per_realization_fits {
        per_k
            .iter()
            .map(|v| Ok(fit_values(v, cfg.fit_grid)?.beta_fit))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(RealizationRatios {
        per_k,
        fits,
        sequences: spectra.len(),
        levels,
    })
}

/// Runs all realizations (in parallel), pools ratios in realization order
/// and fits each order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let start = Instant::now();
    let parts: Vec<RealizationRatios> = (0..cfg.realizations)
        .into_par_iter()
        .map(|i| {
            realization_ratios(cfg, i).map_err(|e| Error::Realization {
                index: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let mut pooled = vec![Vec::new(); cfg.k_list.len()];
    let mut fits = vec![Vec::new(); cfg.k_list.len()];
    let mut sequences = 0;
    let mut levels = 0;
    for part in parts {
        sequences += part.sequences;
        levels += part.levels;
        for (dst, src) in pooled.iter_mut().zip(part.per_k) {
            dst.extend(src);
        }
        for (dst, f) in fits.iter_mut().zip(part.fits) {
            dst.push(f);
        }
    }

    let beta = cfg.beta();
    let orders = cfg
        .k_list
        .iter()
        .zip(&pooled)
        .zip(fits)
        .map(|((&k, values), fits)| {
            let fit = fit_values(values, cfg.fit_grid)?;
            let h = cfg.histogram;
            Ok(OrderReport {
                k,
                predicted_beta_prime: beta.map(|b| predicted_beta_prime(b.value() as u32, k as u32)),
                histogram: histogram(values, h.bins, h.lo, h.hi)?,
                n: values.len(),
                fit,
                realization_fits: cfg.per_realization_fits.then_some(fits),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        config: cfg.clone(),
        orders,
        meta: ReportMeta {
            sequences,
            levels,
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

/// Fitted index at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub size: usize,
    /// `(k, beta_fit)` per requested order.
    pub fits: Vec<(usize, f64)>,
}

/// Fit step used by finite-size scans.
pub const SCAN_FIT_STEP: f64 = 0.5;

/// Repeats the experiment at each size with the same seed and a half-integer grid.
pub fn finite_size_scan(cfg: &ExperimentConfig, sizes: &[usize]) -> Result<Vec<ScanPoint>> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("sizes must be strictly ascending".into()));
    }
    sizes
        .iter()
        .map(|&size| {
            let mut c = cfg.clone();
            c.source = cfg.source.with_size(size)?;
            c.fit_grid.step = SCAN_FIT_STEP;
            let report = run_experiment(&c)?;
            Ok(ScanPoint {
                size,
                fits: report.orders.iter().map(|o| (o.k, o.fit.beta_fit)).collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goe(dim: usize, realizations: usize, k: usize) -> ExperimentConfig {
        ExperimentConfig::new(
            Source::Gaussian {
                beta: DysonIndex::Orthogonal,
                dim,
            },
            realizations,
            vec![k],
        )
    }

    #[test]
    fn pooled_count() {
        let mut cfg = goe(60, 5, 2);
        cfg.trim = Some(0.0);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.orders[0].n, 5 * (60 - 4));
        assert_eq!(r.orders[0].predicted_beta_prime, Some(4));
        cfg.trim = Some(0.1);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.meta.levels, 5 * 48);
        assert_eq!(r.orders[0].n, 5 * (48 - 4));
    }

    #[test]
    fn deterministic_sources_take_one_realization() {
        let mut cfg = ExperimentConfig::new(
            Source::DefectXxz(DefectXxzParams::with_sites(6)),
            2,
            vec![1],
        );
        assert!(matches!(run_experiment(&cfg), Err(Error::InvalidParameter(_))));
        cfg.realizations = 1;
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.meta.sequences, 1);
    }

    #[test]
    fn realization_failure_has_context() {
        let cfg = goe(4, 3, 2);
        match run_experiment(&cfg) {
            Err(Error::Realization { index: 0, source }) => {
                assert!(matches!(*source, Error::TooFewLevels { .. }))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn repeat_runs_match() {
        let cfg = goe(80, 4, 1);
        let a = run_experiment(&cfg).unwrap().without_timing();
        let b = run_experiment(&cfg).unwrap().without_timing();
        assert_eq!(a, b);
    }

    #[test]
    fn scan_requires_ascending_sizes() {
        let cfg = goe(50, 1, 1);
        assert!(finite_size_scan(&cfg, &[100, 50]).is_err());
        assert!(finite_size_scan(&cfg, &[]).is_err());
    }

    #[test]
    fn resizing_sources() {
        let s = Source::DefectXxz(DefectXxzParams::with_sites(14)).with_size(10).unwrap();
        match s {
            Source::DefectXxz(p) => {
                assert_eq!((p.sites, p.n_up, p.defect_site), (10, 5, 5));
            }
            _ => unreachable!(),
        }
        assert!(Source::File { path: "x".into() }.with_size(3).is_err());
    }
}
