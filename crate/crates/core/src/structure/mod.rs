//! Radical, properness and hermitian checks, the center and its atoms, the
//! Abelian split, matrix-unit systems for the simple blocks, and the
//! combined [`StructureReport`].

mod blocks;
mod center;
mod forms;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::StarAlgebra;
use crate::instances::random_vector;
use crate::report::coeff_pairs;
use crate::rickart::{self, BaerOptions};
use crate::spectral::{decomposition_residual, spectral_parts};
use crate::{CVector, Error, Result, C64};

pub use blocks::{block_star_isomorphism, round_trip_residual, MatrixUnits};
pub use center::{
    abelian_split, central_atoms, center, extract_subalgebra, AbelianSplit, CentralDecomposition, SubAlgebra,
};
pub use forms::{check_hermitian, check_proper, radical};
pub(crate) use forms::{gram_form, nilpotency_residual, radical_basis};

/// One simple block `z A ≅ M_n` with its matrix units in `A`-coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockIsomorphism {
    pub n: usize,
    /// `units[p·n + q]` is `u_pq`.
    pub units: Vec<Vec<[f64; 2]>>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub dim: usize,
    pub unital: bool,
    pub proper: bool,
    pub hermitian: bool,
    pub semisimple: bool,
    pub radical_dim: usize,
    pub weakly_rickart: bool,
    pub baer: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian_projection_h: Option<Vec<[f64; 2]>>,
    pub block_sizes_nonabelian: Vec<usize>,
    /// Same multiset as `block_sizes_nonabelian`, kept as a short alias.
    pub blocks: Vec<usize>,
    pub abelian_dim: usize,
    /// `dim(z_i A)` for the central atoms, when computed.
    pub central_block_dims: Vec<usize>,
    pub block_isomorphisms: Vec<BlockIsomorphism>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proper_witness: Option<serde_json::Value>,
    pub residuals: BTreeMap<String, f64>,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    /// Random elements added to the basis when sampling the weakly-Rickart test.
    pub rickart_samples: usize,
    pub baer: BaerOptions,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { rickart_samples: 16, baer: BaerOptions::default() }
    }
}

pub fn analyze(alg: &Arc<StarAlgebra>, tol: f64, seed: u64) -> Result<StructureReport> {
    analyze_with(alg, tol, seed, &AnalyzeOptions::default())
}

/// Run every check and, on Baer instances, build the block decomposition.
///
/// Fails with [`Error::InternalInconsistency`] when properness, hermitian plus
/// semisimple, and the weakly-Rickart test disagree, or when the recovered
/// blocks do not account for the whole dimension.
pub fn analyze_with(alg: &Arc<StarAlgebra>, tol: f64, seed: u64, opts: &AnalyzeOptions) -> Result<StructureReport> {
    let validation = alg.validate(tol);
    if !validation.passed {
        return Err(Error::Malformed(format!(
            "algebra fails validation (associativity {:.3e}, involution {:.3e}, unit {:.3e})",
            validation.associativity_defect, validation.involution_defect, validation.unit_defect
        )));
    }
    let dim = alg.dim();
    let mut residuals = BTreeMap::new();
    residuals.insert("associativity".to_string(), validation.associativity_defect);
    residuals.insert("involution".to_string(), validation.involution_defect);

    let rad = radical_basis(alg, tol);
    let radical_dim = rad.ncols();
    let mut nil: f64 = 0.0;
    for c in 0..radical_dim {
        nil = nil.max(nilpotency_residual(alg, &rad.column(c).into_owned()));
    }
    residuals.insert("radical_nilpotency".to_string(), nil);
    let semisimple = radical_dim == 0;

    let proper_report = check_proper(alg, tol, seed);
    let proper = proper_report.pass;
    residuals.insert("gram_min_eigenvalue_relative".to_string(), proper_report.worst_residual);
    let hermitian_report = check_hermitian(alg, tol, seed);
    let hermitian = hermitian_report.pass;
    let wr = rickart::check_weakly_rickart(alg, opts.rickart_samples, tol, seed);
    let weakly_rickart = wr.pass;
    residuals.insert("weakly_rickart".to_string(), wr.worst_residual);

    if proper != (hermitian && semisimple) || proper != weakly_rickart {
        return Err(Error::InternalInconsistency(format!(
            "proper = {proper}, hermitian = {hermitian}, semisimple = {semisimple}, weakly_rickart = {weakly_rickart}"
        )));
    }

    let baer_report = rickart::check_baer_given(alg, weakly_rickart, tol, seed, &opts.baer);
    let baer = baer_report.pass;
    if baer != proper {
        return Err(Error::InternalInconsistency(format!(
            "proper = {proper} but baer = {baer} (worst witness residual {:.3e})",
            baer_report.worst_residual
        )));
    }

    let mut report = StructureReport {
        dim,
        unital: alg.is_unital(),
        proper,
        hermitian,
        semisimple,
        radical_dim,
        weakly_rickart,
        baer,
        abelian_projection_h: None,
        block_sizes_nonabelian: Vec::new(),
        blocks: Vec::new(),
        abelian_dim: 0,
        central_block_dims: Vec::new(),
        block_isomorphisms: Vec::new(),
        proper_witness: if proper { None } else { proper_report.witness },
        residuals,
        tol,
        seed,
    };
    if baer {
        fill_blocks(alg, tol, seed, &mut report)?;
        report.residuals.insert("projection_sum".into(), projection_sum_residual(alg, tol, seed));
        report.residuals.insert("regularity".into(), regularity_residual(alg, tol, seed));
    }
    Ok(report)
}

fn fill_blocks(alg: &Arc<StarAlgebra>, tol: f64, seed: u64, report: &mut StructureReport) -> Result<()> {
    let split = abelian_split(alg, tol, seed)?;
    report.residuals.insert("central_decomposition".into(), split.atoms.residual);
    report.central_block_dims = split.atoms.block_dims.clone();
    report.abelian_projection_h = Some(coeff_pairs(split.h.coeffs()));
    report.abelian_dim = split.commutative.as_ref().map_or(0, |b| b.dim());

    let mut systems = Vec::new();
    let mut abelian_units = Vec::new();
    let mut worst_units: f64 = 0.0;
    for (k, z) in split.atoms.atoms.iter().enumerate() {
        let block = extract_subalgebra(alg, &alg.left_mul_matrix(z.coeffs()), tol)?
            .ok_or_else(|| Error::InternalInconsistency("central atom spans a zero block".into()))?;
        if block.dim() == 1 {
            abelian_units.push(MatrixUnits { n: 1, units: vec![z.coeffs().clone()], residual: 0.0 });
            continue;
        }
        let mu = block_star_isomorphism(&block.algebra, tol, seed.wrapping_add(k as u64))?;
        worst_units = worst_units.max(mu.residual);
        let units: Vec<CVector> = mu.units.iter().map(|u| block.include(u)).collect();
        report.block_isomorphisms.push(BlockIsomorphism {
            n: mu.n,
            units: units.iter().map(coeff_pairs).collect(),
            residual: mu.residual,
        });
        systems.push(MatrixUnits { n: mu.n, units, residual: mu.residual });
    }
    let mut sizes: Vec<usize> = systems.iter().map(|s| s.n).collect();
    sizes.sort_unstable();
    report.block_sizes_nonabelian = sizes.clone();
    report.blocks = sizes;
    report.residuals.insert("matrix_units".into(), worst_units);

    let covered: usize = report.blocks.iter().map(|n| n * n).sum::<usize>() + report.abelian_dim;
    if covered != alg.dim() || abelian_units.len() != report.abelian_dim {
        return Err(Error::InternalInconsistency(format!(
            "blocks {:?} with abelian dimension {} do not account for dimension {}",
            report.blocks,
            report.abelian_dim,
            alg.dim()
        )));
    }
    systems.extend(abelian_units);
    let rt = round_trip_residual(alg, &systems)?;
    report.residuals.insert("round_trip".into(), rt);
    if rt > 10.0 * tol {
        return Err(Error::Certification { what: "block round trip", residual: rt });
    }
    Ok(())
}

/// Worst decomposition residual of random selfadjoint elements into
/// orthogonal spectral projections.
fn projection_sum_residual(alg: &StarAlgebra, tol: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x50);
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let a = random_vector(alg.dim(), &mut rng);
        let s = (&a + alg.star_vec(&a)) * C64::from(0.5);
        let parts = spectral_parts(alg, &s, tol);
        worst = worst.max(decomposition_residual(alg, &s, &parts));
    }
    worst
}

/// Worst `‖a b a − a‖ / ‖a‖` over random `a` with `b` the quasi-inverse.
fn regularity_residual(alg: &Arc<StarAlgebra>, tol: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let a = crate::instances::random_element(alg, &mut rng);
        match crate::spectral::quasi_inverse(&a, tol) {
            Ok(b) => {
                let aba = &(&a * &b) * &a;
                worst = worst.max((&aba - &a).norm() / a.norm().max(f64::MIN_POSITIVE));
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::DEFAULT_TOL as TOL;

    fn run(a: StarAlgebra) -> StructureReport {
        analyze(&Arc::new(a), TOL, 0).unwrap()
    }

    #[test]
    fn m2_report() {
        let r = run(instances::matrix_algebra(2));
        assert!(r.proper && r.baer && r.semisimple && r.hermitian && r.weakly_rickart);
        assert_eq!(r.blocks, vec![2]);
        assert_eq!(r.abelian_dim, 0);
        assert!(r.residuals["round_trip"] <= 10.0 * TOL);
    }

    #[test]
    fn m2_plus_c4() {
        let r = run(instances::block_algebra(&[2], 4));
        assert_eq!(r.blocks, vec![2]);
        assert_eq!(r.abelian_dim, 4);
    }

    #[test]
    fn swap_report() {
        let r = run(instances::swap_c2());
        assert!(!r.proper && !r.baer && !r.weakly_rickart && !r.hermitian && r.semisimple);
        assert!(r.proper_witness.is_some());
        assert!(r.blocks.is_empty());
    }

    #[test]
    fn unitized_nilpotent_report() {
        let r = run(instances::nilpotent_line().unitize());
        assert!(!r.proper && r.hermitian && !r.semisimple && !r.baer);
        assert_eq!(r.radical_dim, 1);
    }

    #[test]
    fn rotated_mixed_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = instances::conjugated(&instances::block_algebra(&[3, 2, 2], 2), &mut rng);
        let r = run(a);
        assert_eq!(r.blocks, vec![2, 2, 3]);
        assert_eq!(r.abelian_dim, 2);
        assert!(r.residuals["round_trip"] <= 10.0 * TOL);
    }

    #[test]
    fn invalid_algebra_is_rejected() {
        let mut left = instances::matrix_algebra(2).left_matrices().to_vec();
        left[0][(0, 0)] += C64::from(0.5);
        let a = StarAlgebra::new(left, instances::matrix_algebra(2).star_matrix().clone()).unwrap();
        assert!(analyze(&Arc::new(a), TOL, 0).is_err());
    }

    #[test]
    fn report_serialises_with_stable_names() {
        let r = run(instances::matrix_algebra(2));
        let v = serde_json::to_value(&r).unwrap();
        for key in ["proper", "hermitian", "semisimple", "radical_dim", "weakly_rickart", "baer", "unital",
            "abelian_projection_h", "block_sizes_nonabelian", "abelian_dim", "block_isomorphisms", "residuals"]
        {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
