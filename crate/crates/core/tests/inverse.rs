//! End-to-end inverse runs on the corpus against forward oracles.

use std::sync::Arc;

use subspec::corpus::{exclusion_corpus, inverse_corpus, Case};
use subspec::hl::hl_reconstruct;
use subspec::reconstruction::{
    reconstruct, stability_experiment, summarize_stability, ReconstructOptions, StabilityBase, Warning,
};
use subspec::spectral::{extract_cauchy, ExtractOptions};
use subspec::{CauchyData64, Grid64};

const CELLS: usize = 128;

fn oracle(case: &Case) -> CauchyData64 {
    let s = case.sigma_left(CELLS).unwrap();
    extract_cauchy(&s, &case.pair(), Grid64::on_pi(CELLS), &ExtractOptions::default()).unwrap().data
}

#[test]
fn corpus_round_trip() {
    for case in inverse_corpus() {
        let eta = case.spectrum(CELLS, 40).unwrap();
        let f = case.entire_pair(CELLS).unwrap();
        let rec = reconstruct(case.p(), &f, &eta, Grid64::on_pi(CELLS), &ReconstructOptions::default()).unwrap();
        let e = rec.data.errors_against(&oracle(&case)).unwrap();
        assert!(e.rel_j <= 1e-3 && e.rel_g <= 1e-3 && e.abs_a <= 1e-3, "{}: {e:?}", case.name);
        assert!(!rec.report.non_unique(), "{}: {:?}", case.name, rec.report.warnings);
        assert!(rec.report.moment_residual <= 1e-6, "{}", case.name);
    }
}

#[test]
fn too_few_eigenvalues_warn_non_unique() {
    let case = &inverse_corpus()[0];
    // D = 2·12 + 1 = 25 unknowns, 19 rows.
    let eta = case.spectrum(CELLS, 19).unwrap();
    let f = case.entire_pair(CELLS).unwrap();
    let rec = reconstruct(1, &f, &eta, Grid64::on_pi(CELLS), &ReconstructOptions::default()).unwrap();
    assert!(rec.report.warnings.iter().any(|w| matches!(w, Warning::NonUnique { .. })));
    assert_eq!(rec.report.solve.sv_ratio, 0.0);
}

#[test]
fn error_does_not_grow_with_more_eigenvalues() {
    let case = &inverse_corpus()[3];
    let eta = case.spectrum(CELLS, 48).unwrap();
    let f = case.entire_pair(CELLS).unwrap();
    let reference = oracle(case);
    let mut prev: Option<f64> = None;
    for n in [30, 35, 40, 45] {
        let rec = reconstruct(1, &f, &eta.take(n), Grid64::on_pi(CELLS), &ReconstructOptions::default()).unwrap();
        let e = rec.data.errors_against(&reference).unwrap();
        let err = e.rel_j.max(e.rel_g).max(e.abs_a);
        if let Some(p) = prev {
            assert!(err <= 1.1 * p + 1e-10, "N = {n}: {err} after {p}");
        }
        prev = Some(err);
    }
}

#[test]
fn exclusion_boundary_on_both_instances() {
    for case in exclusion_corpus() {
        let eta = case.spectrum(CELLS, 52).unwrap();
        let right = case.sigma_right(CELLS).unwrap();
        let reference = oracle(&case);
        for n in [32, 48] {
            for drop in 0..=2 {
                let rec = hl_reconstruct(
                    &right,
                    &case.right_pair(),
                    case.p(),
                    &eta.take(n + drop),
                    drop,
                    Grid64::on_pi(CELLS),
                    &ReconstructOptions::default(),
                )
                .unwrap();
                let ratio = rec.diagnostics.ratio();
                if drop <= rec.exclusion_count {
                    let e = rec.reconstruction.data.errors_against(&reference).unwrap();
                    assert!(e.rel_j <= 1e-3 && e.rel_g <= 1e-3 && e.abs_a <= 1e-3, "{} N={n} drop={drop}: {e:?}", case.name);
                    assert!(ratio > 1e-6, "{} N={n} drop={drop}: {ratio}", case.name);
                } else {
                    assert!(ratio < 1e-8, "{} N={n} drop={drop}: {ratio}", case.name);
                }
            }
        }
    }
}

#[test]
fn stability_scales_linearly_in_omega() {
    let case = &inverse_corpus()[0];
    let base = StabilityBase {
        p: case.p(),
        f: Arc::new(case.entire_pair(CELLS).unwrap()),
        subspectrum: case.spectrum(CELLS, 40).unwrap(),
        grid: Grid64::on_pi(CELLS),
        opts: ReconstructOptions::default(),
    };
    let rows = stability_experiment(&base, &[0.0, 1e-3, 1e-2], 20, 11).unwrap();
    assert_eq!(rows, stability_experiment(&base, &[0.0, 1e-3, 1e-2], 20, 11).unwrap());
    let s = summarize_stability(&rows);
    assert_eq!(s.len(), 3);
    assert!(s[0].c_u <= 1e-12 && s.iter().all(|l| l.failures == 0));
    let q = s[1].median_ratio_u / s[2].median_ratio_u;
    assert!((1.0 / 3.0..=3.0).contains(&q), "{s:?}");
    for l in &s[1..] {
        assert!(l.c_u.is_finite() && l.c_j.is_finite() && l.c_g.is_finite() && l.c_a.is_finite());
    }
}
