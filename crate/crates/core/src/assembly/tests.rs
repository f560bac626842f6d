use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::physics::{AdvectionDiffusion, Burgers, NavierStokes1D, Primitive, Source};

const POLY_ROOTS: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.9];

fn poly(x: f64) -> f64 {
    POLY_ROOTS.iter().map(|r| x - r).product()
}

/// Power-basis coefficients of the derivative of the degree-6 test polynomial.
fn poly_derivative_coeffs() -> Vec<f64> {
    let mut c = vec![1.0];
    for r in POLY_ROOTS {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= r * a;
        }
        c = next;
    }
    c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect()
}

fn randomize(state: &mut FieldState, rng: &mut ChaCha8Rng, scale: f64) {
    for c in 0..state.cell_count() {
        for v in state.cell_state_mut(c) {
            *v += scale * rng.gen_range(-1.0..1.0);
        }
        for v in state.cell_aux_mut(c) {
            *v += scale * rng.gen_range(-1.0..1.0);
        }
    }
}

fn jiggle_interior(g: &mut GeometryField, rng: &mut ChaCha8Rng, amount: f64) {
    let h = g.mean_cell_length();
    let n = g.nodes().len();
    for x in &mut g.nodes_mut()[1..n - 1] {
        *x += amount * h * rng.gen_range(-1.0..1.0);
    }
}

#[test]
fn pure_advection_exact_linear() {
    let model = AdvectionDiffusion::new(1.0, 0.0).with_source(Source::Constant(1.0));
    let d = Discretization::new(&model, 1, 1, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Outflow, false).unwrap();
    let g = d.uniform_geometry((0.0, 1.0)).unwrap();
    let s = d.project_state(|_, xi| [xi, 0.0, 0.0]);
    let rs = assemble(&d, &g, &s, true).unwrap();
    assert!(rs.residual.iter().all(|v| v.abs() < 1e-14), "{:?}", rs.residual);
    assert!(rs.families.constitutive.is_empty() && rs.families.state_jump.is_empty());
    assert_eq!(rs.residual.len(), d.quadrature().len() + 2);
}

#[test]
fn degree_six_polynomial_is_reproduced() {
    let model = AdvectionDiffusion::new(1.0, 0.0).with_source(Source::Polynomial(poly_derivative_coeffs()));
    let d = Discretization::new(&model, 1, 6, 1, BoundaryKind::Dirichlet([poly(0.0), 0.0, 0.0]), BoundaryKind::Outflow, false).unwrap();
    let g = d.uniform_geometry((0.0, 1.0)).unwrap();
    let s = d.project_state(|_, xi| [poly(xi), 0.0, 0.0]);
    let rs = assemble(&d, &g, &s, false).unwrap();
    let worst = rs.residual.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn continuous_state_has_no_state_jump() {
    let model = AdvectionDiffusion::new(1.0, 0.1);
    let d = Discretization::new(&model, 3, 2, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), false).unwrap();
    let g = d.uniform_geometry((0.0, 1.0)).unwrap();
    let s = d.project_state(|c, xi| [(c as f64 + xi) / 3.0, 0.0, 0.0]);
    let rs = assemble(&d, &g, &s, true).unwrap();
    for i in rs.families.state_jump.clone() {
        assert!(rs.residual[i].abs() < 1e-15, "row {i}: {}", rs.residual[i]);
    }
    // sigma = 0 while d_xi y != 0: the constitutive rows see the gradient
    assert!(rs.families.constitutive.clone().any(|i| rs.residual[i].abs() > 1e-3));
}

#[test]
fn residual_length_counts_all_families() {
    let model = NavierStokes1D::from_flow(3.5, 25.0, 0.72);
    let yl = model.to_conservative(&Primitive::new(1.0, 3.5, 1.0));
    let d = Discretization::new(&model, 4, 2, 2, BoundaryKind::Dirichlet(yl), BoundaryKind::Outflow, true).unwrap();
    let g = d.uniform_geometry((-1.0, 1.0)).unwrap();
    let s = d.project_state(|_, _| yl);
    let rs = assemble(&d, &g, &s, true).unwrap();
    let nq = d.quadrature().len();
    assert_eq!(rs.residual.len(), 4 * nq * 2 * 3 + 5 * 2 * 3);
    assert_eq!(rs.jacobian.as_ref().unwrap().ncols(), d.layout().len());
    // a uniform free stream is an exact solution
    assert!(objective(&rs) < 1e-26);
}

#[test]
fn equal_fluxes_give_zero_flux_rows() {
    let model = Burgers::new(0.1);
    let d = Discretization::new(&model, 2, 1, 1, BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), BoundaryKind::Dirichlet([-1.0, 0.0, 0.0]), false).unwrap();
    let g = d.uniform_geometry((-0.5, 0.5)).unwrap();
    // y = 1 on the left cell and -1 on the right: same convective flux, zero sigma
    let s = d.project_state(|c, _| [if c == 0 { 1.0 } else { -1.0 }, 0.0, 0.0]);
    let rs = assemble(&d, &g, &s, false).unwrap();
    for i in rs.families.flux_jump.clone() {
        assert!(rs.residual[i].abs() < 1e-15);
    }
    // the interior state jump row is nonzero
    let interior = rs.families.state_jump.start + 1;
    assert!((rs.residual[interior] - 0.2).abs() < 1e-14);
}

#[test]
fn conservation_rows_scale_with_cell_length() {
    let model = AdvectionDiffusion::new(1.3, 0.0).with_source(Source::Constant(0.7));
    let bounds = (0.0, 2.0);
    let cells = 4;
    let d = Discretization::new(&model, cells, 3, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Outflow, false).unwrap();
    let g = d.uniform_geometry(bounds).unwrap();
    let h = 0.5;
    let yfun = |x: f64| (3.0 * x).sin();
    let s = d.project_state(|c, xi| [yfun(h * (c as f64 + xi)), 0.0, 0.0]);
    let rs = assemble(&d, &g, &s, false).unwrap();
    let quad = d.quadrature();
    let nq = quad.len();
    for c in 0..cells {
        for q in 0..nq {
            // physical residual of the discrete state: v y_h'(x) - f, with y_h'(x) = (d_xi y_h) / h
            let (_, dxi) = d.state_tab().interpolate(q, s.state_component(c, 0));
            let physical = 1.3 * dxi / h - 0.7;
            let row = rs.residual[c * nq + q];
            assert!((row - quad.weights[q].sqrt() * h * physical).abs() < 1e-13);
        }
    }
    // interface rows carry no h factor
    let jump = rs.residual[rs.families.flux_jump.start + 1];
    let yl = d.state_at(&s, 0, 1.0)[0];
    let yr = d.state_at(&s, 1, 0.0)[0];
    assert!((jump - 1.3 * (yl - yr)).abs() < 1e-14);
}

#[test]
fn jacobian_linear_static() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let model = AdvectionDiffusion::new(1.0, 0.05).with_source(Source::Polynomial(vec![0.3, -1.0, 2.0]));
    let d = Discretization::new(&model, 3, 2, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), false).unwrap();
    let g = d.uniform_geometry((0.0, 1.0)).unwrap();
    let mut s = d.zero_state();
    randomize(&mut s, &mut rng, 1.0);
    let e = jacobian_check(&d, &g, &s, 1e-6).unwrap();
    assert!(e < 1e-7, "{e}");
}

#[test]
fn jacobian_advection_moving_with_source() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let model = AdvectionDiffusion::new(1.0, 0.1).with_source(Source::Polynomial(vec![0.3, -1.0, 2.0]));
    let d = Discretization::new(&model, 3, 3, 2, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Outflow, true).unwrap();
    let mut g = d.uniform_geometry((0.0, 1.0)).unwrap();
    jiggle_interior(&mut g, &mut rng, 0.1);
    let mut s = d.zero_state();
    randomize(&mut s, &mut rng, 1.0);
    let e = jacobian_check(&d, &g, &s, 1e-6).unwrap();
    assert!(e < 1e-5, "{e}");
}

#[test]
fn jacobian_burgers_moving() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = Burgers::new(1e-2);
    let d = Discretization::new(&model, 4, 2, 2, BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), BoundaryKind::Dirichlet([-1.0, 0.0, 0.0]), true).unwrap();
    let mut g = d.uniform_geometry((-0.5, 0.5)).unwrap();
    jiggle_interior(&mut g, &mut rng, 0.1);
    let mut s = d.zero_state();
    randomize(&mut s, &mut rng, 1.0);
    let e = jacobian_check(&d, &g, &s, 1e-6).unwrap();
    assert!(e < 1e-5, "{e}");
}

#[test]
fn jacobian_navier_stokes_moving() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let model = NavierStokes1D::from_flow(3.5, 25.0, 0.72);
    let yl = model.to_conservative(&Primitive::new(1.0, 3.5, 1.0));
    let yr = model.to_conservative(&Primitive::new(4.260869565217392, 0.8214285714285714, 3.3150510204081627));
    let d = Discretization::new(&model, 4, 2, 2, BoundaryKind::Dirichlet(yl), BoundaryKind::Dirichlet(yr), true).unwrap();
    let mut g = d.uniform_geometry((-1.0, 1.0)).unwrap();
    jiggle_interior(&mut g, &mut rng, 0.1);
    let mut s = d.project_state(|c, xi| {
        let x = -1.0 + 0.5 * (c as f64 + xi);
        let t = 0.5 * (1.0 + (4.0 * x).tanh());
        [yl[0] + t * (yr[0] - yl[0]), yl[1] + t * (yr[1] - yl[1]), yl[2] + t * (yr[2] - yl[2])]
    });
    randomize(&mut s, &mut rng, 0.05);
    let e = jacobian_check(&d, &g, &s, 1e-6).unwrap();
    assert!(e < 1e-5, "{e}");
}

#[test]
fn gradient_matches_objective_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let model = AdvectionDiffusion::new(1.0, 0.2);
    let d = Discretization::new(&model, 2, 2, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), false).unwrap();
    let g = d.uniform_geometry((0.0, 1.0)).unwrap();
    let mut s = d.zero_state();
    randomize(&mut s, &mut rng, 1.0);
    let rs = assemble(&d, &g, &s, true).unwrap();
    let grad = gradient(&rs).unwrap();
    let layout = d.layout();
    let z = layout.gather(&s, &g);
    for j in 0..z.len() {
        let f = |delta: f64| {
            let mut zz = z.clone();
            zz[j] += delta;
            let mut s2 = s.clone();
            let mut g2 = g.clone();
            layout.scatter(&zz, &mut s2, &mut g2);
            objective(&assemble(&d, &g2, &s2, false).unwrap())
        };
        let h = 1e-4;
        let fd = (f(h) - f(-h)) / (2.0 * h);
        assert!((fd - grad[j]).abs() < 1e-10 * grad[j].abs().max(1.0), "{j}: {fd} vs {}", grad[j]);
    }
}

#[test]
fn invalid_geometry_is_reported() {
    let model = Burgers::new(0.1);
    let d = Discretization::new(&model, 2, 1, 1, BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), BoundaryKind::Outflow, true).unwrap();
    let mut g = d.uniform_geometry((0.0, 1.0)).unwrap();
    g.nodes_mut()[1] = 1.5;
    let s = d.zero_state();
    assert!(matches!(assemble(&d, &g, &s, false), Err(Error::InvalidGeometry { .. })));
}

#[test]
fn dls_dimensions() {
    let model = AdvectionDiffusion::new(1.0, 0.0);
    for cells in [1, 2, 5] {
        let d = Discretization::new(&model, cells, 2, 1, BoundaryKind::Dirichlet([0.0; 3]), BoundaryKind::Outflow, false).unwrap();
        let g = d.uniform_geometry((0.0, 1.0)).unwrap();
        let square = assemble_dls(&d, &g, 1).unwrap();
        assert_eq!((square.rows(), square.cols()), (3 * cells, 3 * cells));
        let tall = assemble_dls(&d, &g, 2).unwrap();
        assert_eq!(tall.rows(), tall.cols() + cells);
        // homogeneous data gives the zero solution
        let c = square.solve().unwrap();
        assert!(c.iter().all(|v| v.abs() < 1e-14));
    }
}

#[test]
fn dls_rejects_nonlinear_models() {
    let model = Burgers::new(0.0);
    let d = Discretization::new(&model, 2, 2, 1, BoundaryKind::Dirichlet([1.0, 0.0, 0.0]), BoundaryKind::Outflow, false).unwrap();
    let g = d.uniform_geometry((0.0, 1.0)).unwrap();
    assert!(matches!(assemble_dls(&d, &g, 1), Err(Error::Unsupported(_))));
}
