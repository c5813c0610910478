use super::*;
use crate::boundary::BoundaryPolyPair;
use crate::entire::PolynomialPair;
use crate::moment::RowSpec;
use crate::sigma::SigmaFunction;
use crate::spectral::{char_pair, extract_cauchy, ExtractOptions};
use proptest::prelude::*;
use std::f64::consts::PI;

type C = Cx<f64>;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn unit_system(grid: UniformGrid<f64>, p: usize) -> MomentSystem<f64> {
    // Rows e_0..e_{D−1} of ℋ_p in the trapezoid-weighted grid coordinates.
    let m = grid.len();
    let w = grid.trapezoid_weights();
    let dim = 2 * m + p;
    let vs: Vec<HpVector<f64>> = (0..dim)
        .map(|k| {
            let mut v = HpVector::zeros(grid, p);
            match k {
                k if k < m => v.h1[k] = c(1.0 / w[k].sqrt()),
                k if k < 2 * m => v.h2[k - m] = c(1.0 / w[k - m].sqrt()),
                k => v.h[k - 2 * m] = c(1.0),
            }
            v
        })
        .collect();
    let ws: Vec<C> = (0..dim).map(|k| C::new(k as f64 * 0.1, 1.0 - k as f64 * 0.05)).collect();
    let rows = vec![RowSpec { lambda: c(1.0), f1: c(0.0), f2: c(0.0) }; dim];
    MomentSystem { grid, p, lambdas: Subspectrum::new(vec![c(1.0); dim]), rows, vs, ws, norms: vec![1.0; dim] }
}

#[test]
fn orthonormal_rows_give_conjugated_coefficients() {
    let grid = UniformGrid::on_pi(4);
    let sys = unit_system(grid, 3);
    let (u, info) = solve_moment(&sys, UnknownBasis::Grid, 0.0, RANK_TOL).unwrap();
    assert_eq!(info.rank, info.dim);
    assert!((info.min_sv - 1.0).abs() < 1e-12 && (info.max_sv - 1.0).abs() < 1e-12);
    let w = grid.trapezoid_weights();
    let m = grid.len();
    for k in 0..m {
        assert!((u.h1[k] * w[k].sqrt() - sys.ws[k].conj()).norm() < 1e-13);
        assert!((u.h2[k] * w[k].sqrt() - sys.ws[m + k].conj()).norm() < 1e-13);
    }
    for k in 0..3 {
        assert!((u.h[k] - sys.ws[2 * m + k].conj()).norm() < 1e-13);
    }
}

#[test]
fn duplicated_row_is_rank_deficient() {
    let grid = UniformGrid::on_pi(4);
    let mut sys = unit_system(grid, 1);
    sys.vs[1] = sys.vs[0].clone();
    let e = solve_moment(&sys, UnknownBasis::Grid, 0.0, RANK_TOL).unwrap_err();
    assert!(matches!(e, Error::RankDeficient { .. }), "{e:?}");
}

#[test]
fn solve_recovers_a_synthetic_u_in_the_basis() {
    let grid = UniformGrid::on_pi(128);
    // Polynomial f cannot separate 𝒥 from 𝒢 with one spectrum; use an HL pair.
    let case = &crate::corpus::inverse_corpus()[0];
    let f = case.entire_pair(128).unwrap();
    let sub = case.spectrum(128, 40).unwrap();
    let mut sys = crate::moment::build_moment_system(&sub, &f, 1, grid).unwrap();
    let basis = UnknownBasis::Legendre(6);
    let y: Vec<C> = (0..13).map(|k| C::new((k as f64 * 0.7).sin(), (k as f64 * 0.3).cos())).collect();
    let truth = sys.synthesize(basis, &y);
    sys.ws = sys.rows.iter().map(|r| r.pair(&truth)).collect();
    let (u, info) = solve_moment(&sys, basis, 0.0, RANK_TOL).unwrap();
    assert_eq!(info.rank, 13);
    assert!(u.sub(&truth).unwrap().norm() < 1e-8 * truth.norm());
}

#[test]
fn unpack_examples() {
    let grid = UniformGrid::on_pi(16);
    let real = |s: f64| -> Vec<C> { grid.nodes().iter().map(|t: &f64| c(s * t.cos())).collect() };
    let u = HpVector::new(grid, real(1.0), real(2.0), vec![c(0.5), c(-1.0)]).unwrap();
    let d = unpack_u(&u).unwrap();
    assert_eq!((d.j.clone(), d.g.clone(), d.a.clone()), (u.h1.clone(), u.h2.clone(), u.h.clone()));
    let ui = u.scale(C::new(0.0, 1.0));
    let di = unpack_u(&ui).unwrap();
    for (x, y) in di.j.iter().zip(&u.h1) {
        assert_eq!(*x, *y * C::new(0.0, -1.0));
    }
    assert_eq!(pack_u(&d), u);
}

#[test]
fn unpack_rejects_bad_dimensions() {
    let grid = UniformGrid::on_pi(16);
    let u = HpVector { grid, h1: vec![c(0.0); 3], h2: vec![c(0.0); 17], h: vec![c(0.0)] };
    assert!(matches!(unpack_u(&u), Err(Error::DimensionMismatch { .. })));
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(vals in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 37)) {
        let grid = UniformGrid::on_pi(16);
        let z: Vec<C> = vals.iter().map(|&(a, b)| C::new(a, b)).collect();
        let u = HpVector::new(grid, z[..17].to_vec(), z[17..34].to_vec(), z[34..].to_vec()).unwrap();
        let once = unpack_u(&u).unwrap();
        let twice = unpack_u(&pack_u(&once)).unwrap();
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn zero_data_gives_free_representations() {
    let grid = UniformGrid::on_pi(64);
    let zero = CauchyData::new(grid, vec![c(0.0); 65], vec![c(0.0); 65], vec![c(0.0)]).unwrap();
    for &l in &[c(2.0), C::new(-3.0, 1.5), c(0.0)] {
        let (d0, d1) = deltas_from_cauchy(&zero, l);
        let rho = l.sqrt();
        let sinc = if l.norm() == 0.0 { c(PI) } else { (rho * PI).sin() / rho };
        assert!((d1 + l * sinc).norm() < 1e-12);
        assert!((d0 - (rho * PI).cos()).norm() < 1e-12);
        assert!(d0.re.is_finite() && d1.re.is_finite());
    }
}

#[test]
fn extracted_data_rebuilds_char_pair() {
    let grid = UniformGrid::on_pi(256);
    let s = SigmaFunction::zero(PI, 256).unwrap();
    let pair = BoundaryPolyPair::real(&[1.0], &[0.0]).unwrap();
    let ex = extract_cauchy(&s, &pair, grid, &ExtractOptions::default()).unwrap();
    let (d0, d1) = deltas_from_cauchy(&ex.data, c(2.0));
    let (e0, e1) = char_pair(&s, &pair, c(2.0)).unwrap();
    assert!((d0 - e0).norm() <= 1e-6 && (d1 - e1).norm() <= 1e-6);
}

#[test]
fn dirichlet_subspectrum_of_free_problem_gives_zero_data() {
    let grid = UniformGrid::on_pi(128);
    let sub = Subspectrum::new((1..=40).map(|n| c((n as f64 - 0.5).powi(2))).collect());
    let f = PolynomialPair::<f64>::dirichlet();
    let rec = reconstruct(1, &f, &sub, grid, &ReconstructOptions::default()).unwrap();
    let g = rec.data.grid;
    assert!(g.norm_sq(&rec.data.j).sqrt() <= 1e-5);
    assert!(g.norm_sq(&rec.data.g).sqrt() <= 1e-5);
    assert!(rec.data.a[0].norm() <= 1e-5);
    assert!(rec.report.moment_residual <= 1e-5);
    // One spectrum alone cannot fix 𝒥 and A.
    assert!(rec.report.non_unique());
}

#[test]
fn empty_subspectrum_is_invalid() {
    let f = PolynomialPair::<f64>::dirichlet();
    let e = reconstruct(1, &f, &Subspectrum::new(vec![]), UniformGrid::on_pi(16), &ReconstructOptions::default());
    assert!(matches!(e, Err(Error::InvalidInput(_))));
}

#[test]
fn perturbation_has_exact_omega_and_is_seeded() {
    let sub = Subspectrum::new((1..=10).map(|n| c((n * n) as f64)).collect());
    let a = perturb(&sub, 1e-3, &mut trial_rng(7, 0, 3));
    let b = perturb(&sub, 1e-3, &mut trial_rng(7, 0, 3));
    let other = perturb(&sub, 1e-3, &mut trial_rng(7, 1, 3));
    assert_eq!(a, b);
    assert_ne!(a, other);
    let omega: f64 = a.rhos().iter().zip(sub.rhos()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    assert!((omega - 1e-3).abs() < 1e-12);
}

#[test]
fn summary_medians_and_constants() {
    let row = |omega: f64, trial, e: f64| StabilityRow { omega, trial, err_u: e, err_j: e, err_g: e, err_a: e, failure: None };
    let rows = vec![row(0.1, 0, 0.1), row(0.1, 1, 0.3), row(0.1, 2, 0.2), row(0.2, 0, 0.4)];
    let s = summarize_stability(&rows);
    assert_eq!(s.len(), 2);
    assert!((s[0].median_ratio_u - 2.0).abs() < 1e-12);
    assert!((s[0].c_u - 3.0).abs() < 1e-12);
    assert!((s[1].median_ratio_u - 2.0).abs() < 1e-12);
}
