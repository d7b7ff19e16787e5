use num_complex::Complex64;
use ratiokit::models::{
    build_chiral_chain_in, build_defect_xxz_in, build_kicked_top, intermediate_map_with_phases,
    kicked_top_parity, kicked_top_unitary, ChiralChainParams, DefectXxzParams, KickedTopParams,
    Sector, SpinBasis,
};
use ratiokit::numerics::{eigenphases_unitary, eigenvalues_hermitian, DenseMatrix, StreamId};
use ratiokit::pipeline::{finite_size_scan, ExperimentConfig, Source};

/// Checks that `full` is block diagonal in the number of up spins and that
/// each block equals `sector(n_up)` entry by entry.
fn assert_blocks(sites: usize, full: &DenseMatrix, sector: impl Fn(usize) -> DenseMatrix) {
    let states = SpinBasis::full(sites).unwrap();
    for (i, &a) in states.states().iter().enumerate() {
        for (j, &b) in states.states().iter().enumerate() {
            if a.count_ones() != b.count_ones() {
                assert_eq!(full[(i, j)], Complex64::new(0.0, 0.0), "leak between sectors");
            }
        }
    }
    for n_up in 0..=sites {
        let block = sector(n_up);
        let basis = SpinBasis::sector(sites, n_up).unwrap();
        assert_eq!(block.dim(), basis.dim());
        for (i, &a) in basis.states().iter().enumerate() {
            for (j, &b) in basis.states().iter().enumerate() {
                assert_eq!(block[(i, j)], full[(a as usize, b as usize)]);
            }
        }
    }
}

#[test]
fn defect_chain_sectors_match_full_space() {
    for sites in 2..=8 {
        let p = DefectXxzParams {
            omega: 0.3,
            eps_d: 0.5,
            defect_site: 2.min(sites),
            ..DefectXxzParams::with_sites(sites)
        };
        let full = build_defect_xxz_in(&p, Sector::Full).unwrap();
        assert_blocks(sites, &full, |n_up| {
            build_defect_xxz_in(&p, Sector::Magnetization(n_up)).unwrap()
        });
    }
}

#[test]
fn chiral_chain_sectors_match_full_space() {
    for sites in 3..=8 {
        let p = ChiralChainParams {
            field_seed: StreamId::new(11, sites as u64),
            ..ChiralChainParams::with_sites(sites)
        };
        let full = build_chiral_chain_in(&p, Sector::Full).unwrap();
        assert_eq!(full.hermitian_defect().2, 0.0);
        assert!(!full.is_real());
        assert_blocks(sites, &full, |n_up| {
            build_chiral_chain_in(&p, Sector::Magnetization(n_up)).unwrap()
        });
    }
}

#[test]
fn sector_spectra_pool_to_full_spectrum() {
    let p = ChiralChainParams::with_sites(6);
    let full = eigenvalues_hermitian(&build_chiral_chain_in(&p, Sector::Full).unwrap()).unwrap();
    let mut pooled: Vec<f64> = (0..=6)
        .flat_map(|n| {
            eigenvalues_hermitian(&build_chiral_chain_in(&p, Sector::Magnetization(n)).unwrap())
                .unwrap()
                .into_levels()
        })
        .collect();
    pooled.sort_by(f64::total_cmp);
    for (a, b) in pooled.iter().zip(full.levels()) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn two_site_defect_chain_eigenvalues() {
    let p = DefectXxzParams {
        sites: 2,
        defect_site: 1,
        n_up: 1,
        ..DefectXxzParams::with_sites(2)
    };
    let m = build_defect_xxz_in(&p, Sector::Magnetization(1)).unwrap();
    let e = eigenvalues_hermitian(&m).unwrap();
    // -J_z/4 -+ sqrt(eps_d^2 + J_xy^2)/2
    let half_root = (0.25f64 + 1.0).sqrt() / 2.0;
    assert!((e.levels()[0] - (-0.125 - half_root)).abs() < 1e-12);
    assert!((e.levels()[1] - (-0.125 + half_root)).abs() < 1e-12);
    assert!((e.levels()[0] + 0.684017).abs() < 1e-6);
    assert!((e.levels()[1] - 0.434017).abs() < 1e-6);
}

#[test]
fn kicked_top_parity_commutes_and_blocks_pool() {
    for j in [3.0, 6.5, 20.0] {
        let p = KickedTopParams {
            j,
            parity_split: false,
            ..KickedTopParams::default()
        };
        let u = kicked_top_unitary(&p).unwrap();
        let r = kicked_top_parity((2.0 * j) as usize).unwrap();
        let ur = u.matmul(&r).unwrap();
        let ru = r.matmul(&u).unwrap();
        let comm = ur
            .entries()
            .iter()
            .zip(ru.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(comm < 1e-9, "j={j}: commutator {comm}");

        let full = eigenphases_unitary(&u).unwrap();
        let blocks = build_kicked_top(&KickedTopParams {
            parity_split: true,
            ..p
        })
        .unwrap();
        assert_eq!(blocks.len(), 2);
        let mut pooled: Vec<f64> = blocks
            .iter()
            .flat_map(|b| eigenphases_unitary(b).unwrap().into_levels())
            .collect();
        pooled.sort_by(f64::total_cmp);
        assert_eq!(pooled.len(), full.len());
        for (a, b) in pooled.iter().zip(full.levels()) {
            let d = (a - b).abs();
            assert!(d.min(std::f64::consts::TAU - d) < 1e-8);
        }
    }
}

#[test]
fn two_by_two_intermediate_map() {
    let u = intermediate_map_with_phases(0.25, &[0.0, 0.0]).unwrap();
    let half = 0.5;
    let expected = [
        Complex64::new(half, half),
        Complex64::new(half, -half),
        Complex64::new(half, -half),
        Complex64::new(half, half),
    ];
    for (a, b) in u.entries().iter().zip(expected) {
        assert!((a - b).norm() < 1e-15);
    }
    let s = eigenphases_unitary(&u).unwrap();
    assert_eq!(s.len(), 2);
    for t in s.levels() {
        let z = Complex64::from_polar(1.0, *t);
        assert!(((z - u[(0, 0)]).norm() - 0.5f64.sqrt()).abs() < 1e-10);
    }
}

#[test]
fn defect_chain_k4_fit_approaches_prediction() {
    let cfg = ExperimentConfig::new(Source::DefectXxz(DefectXxzParams::with_sites(10)), 1, vec![4]);
    let scan = finite_size_scan(&cfg, &[10, 12, 14]).unwrap();
    let fits: Vec<f64> = scan.iter().map(|p| p.fits[0].1).collect();
    assert!(fits.windows(2).all(|w| w[0] <= w[1]), "{fits:?}");
    assert!((fits[2] - 13.0).abs() < (fits[0] - 13.0).abs(), "{fits:?}");
    assert!((fits[2] - 13.0).abs() <= 1.0, "{fits:?}");
}
