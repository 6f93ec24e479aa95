//! Density-functional closure against exact diagonalization.

use super::{engine, sweep_map, ExperimentError, RunOptions};
use crate::config::ExperimentConfig;
use crate::report::{Assertion, CsvTable, RunSummary};
use hamlab_core::algebra::{build_hubbard, FermionHamiltonian, FermionTerm, LatticeGraph};
use hamlab_core::dft::{
    convexity_probe, density_of_state, dft_ground_energy, DftOpts, SpinDensity,
};
use hamlab_core::eigensolve::lowest_eigs;
use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub(crate) fn random_potentials(nsites: usize, seed: u64, scale: f64) -> Vec<Matrix2<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..nsites)
        .map(|_| {
            let a = scale * (rng.random::<f64>() - 0.5);
            let d = scale * (rng.random::<f64>() - 0.5);
            let re = scale * (rng.random::<f64>() - 0.5);
            let im = scale * (rng.random::<f64>() - 0.5);
            Matrix2::new(
                Complex64::new(a, 0.0),
                Complex64::new(re, -im),
                Complex64::new(re, im),
                Complex64::new(d, 0.0),
            )
        })
        .collect()
}

/// Kernel plus explicit site potentials, for the exact-diagonalization side.
pub(crate) fn with_potentials(
    kernel: &FermionHamiltonian,
    potentials: &[Matrix2<Complex64>],
) -> FermionHamiltonian {
    let mut terms: Vec<FermionTerm> = kernel.terms().to_vec();
    for (site, v) in potentials.iter().enumerate() {
        for s in 0..2 {
            for sp in 0..2 {
                if v[(s, sp)].norm_sqr() > 0.0 {
                    terms.push(FermionTerm::hopping(
                        2 * site + s,
                        2 * site + sp,
                        v[(s, sp)],
                    ));
                }
            }
        }
    }
    FermionHamiltonian::new(kernel.nmodes(), terms, kernel.sector())
        .expect("Hermitian potentials keep the term list Hermitian")
}

/// A representable density: the ground density of the kernel under random
/// potentials, pulled slightly into the interior.
pub(crate) fn random_density(
    kernel: &FermionHamiltonian,
    electrons: usize,
    seed: u64,
) -> SpinDensity {
    let nsites = kernel.nmodes() / 2;
    let potentials = random_potentials(nsites, seed, 1.0);
    let h = with_potentials(kernel, &potentials).with_sector(Some(electrons));
    let op = h.to_matrix().expect("desk-scale sector");
    let spec = lowest_eigs(&op, 1, 1e-11).expect("sector diagonalization");
    let rho = density_of_state(&h, &spec.vectors.as_ref().unwrap()[0])
        .expect("ground density is representable");
    rho.mix(&SpinDensity::uniform(nsites, electrons), 0.02)
}

pub(super) fn dft_solve(
    config: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<(RunSummary, Vec<CsvTable>), ExperimentError> {
    let section = "dft-solve";
    let sites = config.usize_or(section, "sites", 2)?;
    let t = config.f64_or(section, "t", 1.0)?;
    let u = config.f64_or(section, "u", 4.0)?;
    let electrons = config.usize_or(section, "electrons", sites)?;
    let seeds = config.usize_or(section, "seeds", 5)?;
    let field_scale = config.f64_or(section, "field_scale", 0.8)?;
    let energy_tol = config.f64_or(section, "energy_tol", 1e-4)?;
    let gap_tol = config.f64_or(section, "gap_tol", 1.5e-3)?;
    let convexity_pairs = config.usize_or(section, "convexity_pairs", 20)?;
    let convexity_tol = config.f64_or(section, "convexity_tol", 1e-6)?;

    let lattice = LatticeGraph::chain(sites);
    let kernel = engine!(build_hubbard(&lattice, t, u, &vec![[0.0; 3]; sites]))?;
    let dft_opts = DftOpts::default();

    // Optional: evaluate the functional on a density supplied as JSON
    // instead of generating densities from diagonalized instances.
    let file_density = match config.str_or(section, "density_json", "") {
        "" => None,
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ExperimentError::Engine(format!("cannot read density: {e}")))?;
            let rho = engine!(SpinDensity::from_json(&text))?;
            let dual = engine!(hamlab_core::dft::universal_functional(
                &rho,
                &kernel,
                hamlab_core::dft::FunctionalMethod::Dual,
                &dft_opts
            ))?;
            let primal = engine!(hamlab_core::dft::universal_functional(
                &rho,
                &kernel,
                hamlab_core::dft::FunctionalMethod::PrimalOracle,
                &dft_opts
            ))?;
            Some(json!({
                "dual": dual.value,
                "primal_oracle": primal.value,
                "gap": (primal.value - dual.value).abs(),
            }))
        }
    };

    // Ground-energy closure over random field seeds.
    let closure_rows: Vec<(f64, f64, f64, f64)> = sweep_map(seeds, opts.workers, |i| {
        let seed = opts.seed.wrapping_add(i as u64);
        let potentials = random_potentials(sites, seed, field_scale);
        let exact = {
            let h = with_potentials(&kernel, &potentials).with_sector(Some(electrons));
            let op = engine!(h.to_matrix())?;
            engine!(lowest_eigs(&op, 1, 1e-11))?.eigenvalues[0]
        };
        let r = engine!(dft_ground_energy(
            &potentials,
            &kernel,
            electrons,
            gap_tol,
            &dft_opts
        ))?;
        Ok::<_, ExperimentError>((seed as f64, r.energy, exact, r.gap))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let mut closure_table = CsvTable::new(
        "dft_closure",
        &[
            "seed (dimensionless)",
            "dft_energy (energy)",
            "exact_energy (energy)",
            "certified_gap (energy)",
        ],
    );
    let mut assertions = Vec::new();
    for &(seed, dft, exact, gap) in &closure_rows {
        closure_table.push(vec![seed, dft, exact, gap]);
        assertions.push(Assertion::near(
            &format!("dft_vs_exact_seed_{seed:.0}"),
            dft,
            exact,
            energy_tol,
        ));
    }

    // Midpoint convexity over random representable pairs.
    let convexity_rows: Vec<(f64, f64)> = sweep_map(convexity_pairs, opts.workers, |i| {
        let seed = opts.seed.wrapping_add(1000 + i as u64);
        let r1 = random_density(&kernel, electrons, seed);
        let r2 = random_density(&kernel, electrons, seed.wrapping_add(500));
        let probe = engine!(convexity_probe(&r1, &r2, &kernel, convexity_tol, &dft_opts))?;
        Ok::<_, ExperimentError>((seed as f64, probe.violation))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let mut convexity_table = CsvTable::new(
        "dft_convexity",
        &["seed (dimensionless)", "violation (energy)"],
    );
    let mut worst: f64 = f64::NEG_INFINITY;
    for &(seed, violation) in &convexity_rows {
        convexity_table.push(vec![seed, violation]);
        worst = worst.max(violation);
    }
    assertions.push(Assertion {
        name: "midpoint_convexity_worst_violation".into(),
        passed: worst <= convexity_tol,
        value: worst,
        threshold: convexity_tol,
    });

    let summary = RunSummary::new(
        "dft-solve",
        opts.seed,
        config.section_map(section),
        json!({
            "seeds": seeds,
            "convexity_pairs": convexity_pairs,
            "worst_convexity_violation": worst,
            "file_density_functional": file_density,
        }),
        assertions,
    );
    Ok((summary, vec![closure_table, convexity_table]))
}
