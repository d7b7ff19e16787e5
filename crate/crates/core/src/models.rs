//! Physical model systems: two spin-1/2 chains built in fixed-magnetization
//! sectors, the quantum kicked top, and the intermediate map.
//!
//! Spin states are bit-coded: bit `i` of a basis word is site `i + 1`, set
//! for spin up. Matrix elements are accumulated as integer multiples of
//! 1/4 per coupling constant and converted to floating point once per entry.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{hermitian_function, DenseMatrix, StreamId};

/// Default cap on the basis dimension of the spin-chain builders.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// Product-state basis of an `L`-site spin-1/2 chain, optionally restricted
/// to a fixed number of up spins. States are stored in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinBasis {
    sites: usize,
    states: Vec<u64>,
}

impl SpinBasis {
    pub fn sector(sites: usize, n_up: usize) -> Result<Self> {
        if sites == 0 || sites > 63 {
            return Err(Error::InvalidParameter(format!("chain length {sites} out of range")));
        }
        if n_up > sites {
            return Err(Error::SectorEmpty { sites, n_up });
        }
        let states = (0u64..1 << sites)
            .filter(|s| s.count_ones() as usize == n_up)
            .collect();
        Ok(SpinBasis { sites, states })
    }

    pub fn full(sites: usize) -> Result<Self> {
        if sites == 0 || sites > 30 {
            return Err(Error::InvalidParameter(format!("chain length {sites} out of range")));
        }
        Ok(SpinBasis {
            sites,
            states: (0u64..1 << sites).collect(),
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Number of `k`-subsets of `n` items.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn up(state: u64, site: usize) -> bool {
    state >> site & 1 == 1
}

/// Twice the `S^z` eigenvalue of a site: +1 or -1.
fn twice_sz(state: u64, site: usize) -> i64 {
    if up(state, site) {
        1
    } else {
        -1
    }
}

/// Matrix elements of one row, as integer quarter counts per coupling.
#[derive(Debug, Default, Clone, Copy)]
struct Quarters {
    /// real part, one slot per coupling constant
    re: [i64; 4],
    /// imaginary part, one slot per coupling constant
    im: [i64; 4],
    /// real part with per-site coefficients (random fields)
    fields: f64,
}

fn assemble(
    basis: &SpinBasis,
    couplings: [f64; 4],
    mut row_terms: impl FnMut(u64, &mut BTreeMap<u64, Quarters>),
) -> DenseMatrix {
    let n = basis.dim();
    let mut m = DenseMatrix::zeros(n);
    let mut row = BTreeMap::new();
    for (i, &state) in basis.states().iter().enumerate() {
        row.clear();
        row_terms(state, &mut row);
        for (target, q) in &row {
            let j = basis
                .index_of(*target)
                .expect("terms conserve the magnetization sector");
            let re: f64 = (0..4).map(|c| couplings[c] * q.re[c] as f64 / 4.0).sum::<f64>() + q.fields;
            let im: f64 = (0..4).map(|c| couplings[c] * q.im[c] as f64 / 4.0).sum();
            // row_terms lists H|state>, i.e. column i
            m[(j, i)] = Complex64::new(re, im);
        }
    }
    m
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::DimensionOverflow { dim, cap });
    }
    Ok(())
}

/// Which states a chain Hamiltonian is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    /// Fixed number of up spins.
    Magnetization(usize),
    /// All `2^L` product states.
    Full,
}

fn make_basis(sites: usize, sector: Sector, cap: usize) -> Result<SpinBasis> {
    let dim = match sector {
        Sector::Magnetization(n_up) => {
            if n_up > sites {
                return Err(Error::SectorEmpty { sites, n_up });
            }
            binomial(sites, n_up)
        }
        Sector::Full => 1usize.checked_shl(sites as u32).unwrap_or(usize::MAX),
    };
    check_cap(dim, cap)?;
    match sector {
        Sector::Magnetization(n_up) => SpinBasis::sector(sites, n_up),
        Sector::Full => SpinBasis::full(sites),
    }
}

/// XXZ chain with a uniform Zeeman field and one defect site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DefectXxzParams {
    pub sites: usize,
    pub omega: f64,
    pub eps_d: f64,
    /// 1-based defect site.
    pub defect_site: usize,
    pub j_xy: f64,
    pub j_z: f64,
    pub n_up: usize,
    pub basis_cap: usize,
}

impl DefectXxzParams {
    /// Standard parameters for a chain of `sites` spins: defect in the
    /// middle, largest magnetization sector.
    pub fn with_sites(sites: usize) -> Self {
        DefectXxzParams {
            sites,
            omega: 0.0,
            eps_d: 0.5,
            defect_site: (sites / 2).max(1),
            j_xy: 1.0,
            j_z: 0.5,
            n_up: sites / 2,
            basis_cap: DEFAULT_BASIS_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::InvalidParameter("defect XXZ chain needs L >= 2".into()));
        }
        if self.defect_site < 1 || self.defect_site > self.sites {
            return Err(Error::InvalidParameter(format!(
                "defect site {} outside 1..={}",
                self.defect_site, self.sites
            )));
        }
        if self.n_up > self.sites {
            return Err(Error::SectorEmpty {
                sites: self.sites,
                n_up: self.n_up,
            });
        }
        Ok(())
    }
}

impl Default for DefectXxzParams {
    fn default() -> Self {
        Self::with_sites(14)
    }
}

pub fn build_defect_xxz(p: &DefectXxzParams) -> Result<DenseMatrix> {
    build_defect_xxz_in(p, Sector::Magnetization(p.n_up))
}

/// Defect XXZ Hamiltonian on an explicit sector (or the full space).
pub fn build_defect_xxz_in(p: &DefectXxzParams, sector: Sector) -> Result<DenseMatrix> {
    p.validate()?;
    let basis = make_basis(p.sites, sector, p.basis_cap)?;
    let l = p.sites;
    let d = p.defect_site - 1;
    // Zeeman terms: m_i = +-1/2 = +-2 quarters
    let couplings = [p.omega, p.eps_d, p.j_z, p.j_xy];
    Ok(assemble(&basis, couplings, |state, row| {
        let diag = row.entry(state).or_default();
        diag.re[0] += (0..l).map(|i| 2 * twice_sz(state, i)).sum::<i64>();
        diag.re[1] += 2 * twice_sz(state, d);
        diag.re[2] += (0..l - 1)
            .map(|i| twice_sz(state, i) * twice_sz(state, i + 1))
            .sum::<i64>();
        for i in 0..l - 1 {
            if up(state, i) != up(state, i + 1) {
                // (S+S- + S-S+)/2 has element 1/2 = 2 quarters
                row.entry(state ^ (0b11 << i)).or_default().re[3] += 2;
            }
        }
    }))
}

/// Heisenberg chain with random longitudinal fields and a three-spin chiral term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChiralChainParams {
    pub sites: usize,
    pub j1: f64,
    pub j2: f64,
    /// Standard deviation of the Gaussian random fields `h_i`.
    pub h: f64,
    pub field_seed: StreamId,
    pub n_up: usize,
    pub basis_cap: usize,
}

impl ChiralChainParams {
    pub fn with_sites(sites: usize) -> Self {
        ChiralChainParams {
            sites,
            j1: 1.0,
            j2: 1.0,
            h: 1.0,
            field_seed: StreamId::new(0, 0),
            n_up: sites / 2,
            basis_cap: DEFAULT_BASIS_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sites < 3 {
            return Err(Error::InvalidParameter("chiral chain needs L >= 3".into()));
        }
        if self.n_up > self.sites {
            return Err(Error::SectorEmpty {
                sites: self.sites,
                n_up: self.n_up,
            });
        }
        if !(self.h >= 0.0) {
            return Err(Error::InvalidParameter(format!("field scale {} must be >= 0", self.h)));
        }
        Ok(())
    }

    /// The random fields `h_1..h_L` drawn from `field_seed`.
    pub fn fields(&self) -> Vec<f64> {
        let mut rng = self.field_seed.stream();
        (0..self.sites).map(|_| self.h * rng.gaussian()).collect()
    }
}

impl Default for ChiralChainParams {
    fn default() -> Self {
        Self::with_sites(12)
    }
}

pub fn build_chiral_chain(p: &ChiralChainParams) -> Result<DenseMatrix> {
    build_chiral_chain_in(p, Sector::Magnetization(p.n_up))
}

pub fn build_chiral_chain_in(p: &ChiralChainParams, sector: Sector) -> Result<DenseMatrix> {
    p.validate()?;
    let basis = make_basis(p.sites, sector, p.basis_cap)?;
    let fields = p.fields();
    Ok(chiral_chain_matrix(&basis, p.j1, p.j2, &fields))
}

/// The chiral-chain Hamiltonian on `basis` for given fields.
///
/// Open chain: `J1 S_i.S_{i+1}` for `i < L`, `J2 S_i.(S_{i+1} x S_{i+2})` for
/// `i < L - 1`. The triple product is expanded as
/// `(i/2) sum_cyclic S_a^z (S_b^+ S_c^- - S_b^- S_c^+)`.
pub fn chiral_chain_matrix(basis: &SpinBasis, j1: f64, j2: f64, fields: &[f64]) -> DenseMatrix {
    let l = basis.sites();
    assemble(basis, [j1, j2, 0.0, 0.0], |state, row| {
        let diag = row.entry(state).or_default();
        for i in 0..l - 1 {
            diag.re[0] += twice_sz(state, i) * twice_sz(state, i + 1);
        }
        diag.fields += (0..l)
            .map(|i| fields[i] * 0.5 * twice_sz(state, i) as f64)
            .sum::<f64>();
        for i in 0..l - 1 {
            if up(state, i) != up(state, i + 1) {
                // (S+S- + S-S+)/2 has element 1/2 = 2 quarters
                row.entry(state ^ (0b11 << i)).or_default().re[0] += 2;
            }
        }
        for i in 0..l.saturating_sub(2) {
            let triple = [i, i + 1, i + 2];
            // (z, b, c) runs over the cyclic orderings of the triple
            for rot in 0..3 {
                let z = triple[rot];
                let b = triple[(rot + 1) % 3];
                let c = triple[(rot + 2) % 3];
                if up(state, b) == up(state, c) {
                    continue;
                }
                // S_b^+ S_c^- acts when b is down and c is up, with sign +;
                // S_b^- S_c^+ acts when b is up and c is down, with sign -
                let sign = if up(state, c) { 1 } else { -1 };
                let target = state ^ (1 << b) ^ (1 << c);
                // (i/2) * (m_z = +-1/2) * (+-1) = i * sign * twice_sz / 4
                row.entry(target).or_default().im[1] += sign * twice_sz(state, z);
            }
        }
    })
}

/// Quantum kicked top `U = exp(-i q Jz^2 / 2) exp(-i p Jy)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KickedTopParams {
    /// Angular momentum quantum number; `2j` must be a non-negative integer.
    pub j: f64,
    pub p: f64,
    pub q: f64,
    pub parity_split: bool,
}

impl Default for KickedTopParams {
    fn default() -> Self {
        KickedTopParams {
            j: 200.0,
            p: 1.7,
            q: 10.0,
            parity_split: true,
        }
    }
}

impl KickedTopParams {
    fn twice_j(&self) -> Result<usize> {
        let t = 2.0 * self.j;
        if !(t >= 0.0) || (t - t.round()).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "j = {} is not a non-negative half-integer",
                self.j
            )));
        }
        Ok(t.round() as usize)
    }

    pub fn dim(&self) -> Result<usize> {
        Ok(self.twice_j()? + 1)
    }
}

/// Tolerance for the parity blocks of the kicked top to decouple.
pub const BLOCK_TOL: f64 = 1e-8;

/// `J_y` on the `|j, m>` basis, `m = -j..j` ascending.
pub fn angular_momentum_y(twice_j: usize) -> DenseMatrix {
    let dim = twice_j + 1;
    let j = twice_j as f64 / 2.0;
    let m = |a: usize| a as f64 - j;
    DenseMatrix::from_fn(dim, |r, c| {
        // <m+1|J+|m> = sqrt(j(j+1) - m(m+1)), J_y = (J+ - J-)/(2i)
        if r == c + 1 {
            let v = (j * (j + 1.0) - m(c) * (m(c) + 1.0)).sqrt();
            Complex64::new(0.0, -0.5 * v)
        } else if c == r + 1 {
            let v = (j * (j + 1.0) - m(r) * (m(r) + 1.0)).sqrt();
            Complex64::new(0.0, 0.5 * v)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Floquet operator of the kicked top, or its two parity blocks when
/// `parity_split` is set.
pub fn build_kicked_top(p: &KickedTopParams) -> Result<Vec<DenseMatrix>> {
    let u = kicked_top_unitary(p)?;
    if !p.parity_split {
        return Ok(vec![u]);
    }
    let twice_j = p.twice_j()?;
    let r = kicked_top_parity(twice_j)?;
    let (even, odd) = parity_bases(&r, twice_j)?;
    let residual = block_residual(&u, &even, &odd);
    if residual > BLOCK_TOL {
        return Err(Error::NotBlockCommuting { residual });
    }
    Ok(vec![project(&u, &even), project(&u, &odd)])
}

/// The full `(2j+1)`-dimensional Floquet operator.
pub fn kicked_top_unitary(p: &KickedTopParams) -> Result<DenseMatrix> {
    let twice_j = p.twice_j()?;
    let j = twice_j as f64 / 2.0;
    let jy = angular_momentum_y(twice_j);
    let rotation = hermitian_function(&jy, |l| Complex64::from_polar(1.0, -p.p * l))?;
    let dim = twice_j + 1;
    let torsion: Vec<Complex64> = (0..dim)
        .map(|a| {
            let m = a as f64 - j;
            Complex64::from_polar(1.0, -p.q * m * m / 2.0)
        })
        .collect();
    Ok(DenseMatrix::from_fn(dim, |r, c| torsion[r] * rotation[(r, c)]))
}

/// `R = exp(-i pi J_y)`.
pub fn kicked_top_parity(twice_j: usize) -> Result<DenseMatrix> {
    hermitian_function(&angular_momentum_y(twice_j), |l| Complex64::from_polar(1.0, -PI * l))
}

type Basis = Vec<Vec<Complex64>>;

/// Orthonormal eigenbases of `R`, which maps `|m>` to a phase times `|-m>`.
fn parity_bases(r: &DenseMatrix, twice_j: usize) -> Result<(Basis, Basis)> {
    let dim = twice_j + 1;
    // R^2 = (-1)^{2j}; the two eigenvalues mu satisfy mu^2 = R^2
    let rho = if twice_j.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mus = if rho > 0.0 {
        [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
    } else {
        [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]
    };
    let mut bases: [Basis; 2] = [Vec::new(), Vec::new()];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for a in 0..dim {
        let partner = dim - 1 - a;
        let c = r[(partner, a)];
        if (c.norm() - 1.0).abs() > BLOCK_TOL {
            return Err(Error::NotBlockCommuting {
                residual: (c.norm() - 1.0).abs(),
            });
        }
        if partner == a {
            // m = 0: R e_0 = c e_0
            let which = if (c - mus[0]).norm() < (c - mus[1]).norm() { 0 } else { 1 };
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[a] = Complex64::new(1.0, 0.0);
            bases[which].push(v);
        } else if a > partner {
            // m > 0: v = (e_m + conj(mu) R e_m) / sqrt(2)
            for (which, mu) in mus.iter().enumerate() {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[a] = Complex64::new(s, 0.0);
                v[partner] = mu.conj() * c * s;
                bases[which].push(v);
            }
        }
    }
    let [even, odd] = bases;
    Ok((even, odd))
}

/// `P^dag U P` for the basis vectors in `cols`.
fn project(u: &DenseMatrix, cols: &Basis) -> DenseMatrix {
    let n = cols.len();
    let uv: Vec<Vec<Complex64>> = cols.iter().map(|v| apply(u, v)).collect();
    DenseMatrix::from_fn(n, |i, j| inner(&cols[i], &uv[j]))
}

fn apply(u: &DenseMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let dim = u.dim();
    (0..dim)
        .map(|r| (0..dim).map(|c| u[(r, c)] * v[c]).sum())
        .collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn block_residual(u: &DenseMatrix, even: &Basis, odd: &Basis) -> f64 {
    let mut worst = 0.0f64;
    for (from, to) in [(even, odd), (odd, even)] {
        for v in from {
            let uv = apply(u, v);
            for w in to {
                worst = worst.max(inner(w, &uv).norm());
            }
        }
    }
    worst
}

/// The intermediate map `U_ab = e^{-i phi_a}/N (1 - e^{i2pi gamma N}) / (1 - e^{i2pi(a-b+gamma N)/N})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntermediateMapParams {
    pub n: usize,
    pub gamma: f64,
    pub phase_seed: StreamId,
}

/// The golden mean `(sqrt(5) - 1) / 2`.
pub fn golden_mean() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

impl Default for IntermediateMapParams {
    fn default() -> Self {
        IntermediateMapParams {
            n: 2000,
            gamma: golden_mean(),
            phase_seed: StreamId::new(0, 0),
        }
    }
}

impl IntermediateMapParams {
    pub fn phases(&self) -> Vec<f64> {
        let mut rng = self.phase_seed.stream();
        (0..self.n).map(|_| rng.uniform(0.0, TAU)).collect()
    }
}

/// Tolerance on unitarity of the assembled intermediate map.
pub const MAP_UNITARY_TOL: f64 = 1e-8;

pub fn build_intermediate_map(p: &IntermediateMapParams) -> Result<DenseMatrix> {
    if p.n < 2 {
        return Err(Error::InvalidParameter("intermediate map needs N >= 2".into()));
    }
    intermediate_map_with_phases(p.gamma, &p.phases())
}

/// Intermediate map for explicit phases `phi_a`; `N = phases.len()`.
pub fn intermediate_map_with_phases(gamma: f64, phases: &[f64]) -> Result<DenseMatrix> {
    let n = phases.len();
    if n < 2 {
        return Err(Error::InvalidParameter("intermediate map needs N >= 2".into()));
    }
    let gn = gamma * n as f64;
    if (gn - gn.round()).abs() < 1e-9 {
        return Err(Error::DegenerateGamma { product: gn });
    }
    let one = Complex64::new(1.0, 0.0);
    let numerator = one - Complex64::from_polar(1.0, TAU * gn.fract());
    let nf = n as f64;
    // the kernel depends on a - b only
    let kernel: Vec<Complex64> = (0..2 * n - 1)
        .map(|shift| {
            let diff = shift as f64 - (nf - 1.0);
            numerator / (nf * (one - Complex64::from_polar(1.0, TAU * (diff + gn) / nf)))
        })
        .collect();
    let row_phase: Vec<Complex64> = phases.iter().map(|&phi| Complex64::from_polar(1.0, -phi)).collect();
    let u = DenseMatrix::from_fn(n, |a, b| row_phase[a] * kernel[a + n - 1 - b]);
    let deviation = u.unitarity_defect();
    if deviation > MAP_UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u)
}
