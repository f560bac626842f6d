//! Static-grid study of the model ODE `y' = f` on `(0, 1)` comparing three weak formulations:
//! an equal-order polynomial test space, a reduced-order (degree `p - 1`) test space, and
//! the trial-to-test (least-squares) formulation.

use std::fmt;
use std::str::FromStr;

use crate::approximation::gauss_rule;
use crate::assembly::{assemble_dls, BoundaryKind, Discretization, FieldState};
use crate::error::{Error, Result};
use crate::mesh::GeometryField;
use crate::oracles::{convergence_rate, l2_error, PolynomialExact};
use crate::physics::{AdvectionDiffusion, Source};
use crate::solver::{gauss_newton_solve, SolverConfig};

/// Roots of the degree-6 polynomial used as exact solution.
pub const EXACT_ROOTS: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.9];

/// Quadrature points per cell; integrates the degree-6 data exactly.
pub const STUDY_QUAD_POINTS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    EqualOrder,
    ReducedOrder,
    TrialToTest,
}

impl Formulation {
    pub const ALL: [Formulation; 3] = [Formulation::EqualOrder, Formulation::ReducedOrder, Formulation::TrialToTest];

    pub fn name(self) -> &'static str {
        match self {
            Formulation::EqualOrder => "equal_order",
            Formulation::ReducedOrder => "reduced_order",
            Formulation::TrialToTest => "trial_to_test",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formulation::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown formulation {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeStudyConfig {
    pub degree: usize,
    /// Cell counts, coarsest first.
    pub cells: Vec<usize>,
    pub formulations: Vec<Formulation>,
}

impl Default for OdeStudyConfig {
    fn default() -> Self {
        Self {
            degree: 2,
            cells: (1..=9).map(|k| 1 << k).collect(),
            formulations: Formulation::ALL.to_vec(),
        }
    }
}

impl OdeStudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::InvalidArgument("trial degree must be at least 1".into()));
        }
        if self.cells.is_empty() || self.cells.iter().any(|&c| c < 1) {
            return Err(Error::InvalidArgument("cell counts must be positive".into()));
        }
        if self.formulations.is_empty() {
            return Err(Error::InvalidArgument("no formulation selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeStudyRow {
    pub formulation: Formulation,
    pub cells: usize,
    pub h: f64,
    pub error: f64,
    /// Rate against the previous level of the same formulation.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeStudyResult {
    pub rows: Vec<OdeStudyRow>,
    /// Largest coefficient-norm gap between the reduced-order and trial-to-test solutions
    /// over all levels, when both were run.
    pub equivalence_gap: Option<f64>,
}

impl OdeStudyResult {
    pub fn rates(&self, formulation: Formulation) -> Vec<f64> {
        self.rows.iter().filter(|r| r.formulation == formulation).filter_map(|r| r.rate).collect()
    }
}

fn exact() -> PolynomialExact {
    PolynomialExact { roots: EXACT_ROOTS.to_vec() }
}

/// Solves one level with one formulation, returning the coefficients, geometry and discretization model.
pub fn solve_level(formulation: Formulation, degree: usize, cells: usize) -> Result<(FieldState, f64)> {
    let ex = exact();
    let model = AdvectionDiffusion::new(1.0, 0.0).with_source(Source::Polynomial(ex.derivative_coefficients()));
    let disc = Discretization::with_degrees(
        &model,
        cells,
        degree,
        degree,
        1,
        Some(STUDY_QUAD_POINTS),
        BoundaryKind::Dirichlet([ex.eval(0.0), 0.0, 0.0]),
        BoundaryKind::Outflow,
        false,
    )?;
    let geometry = disc.uniform_geometry((0.0, 1.0))?;
    let state = match formulation {
        Formulation::TrialToTest => {
            let (s, _, report) = gauss_newton_solve(&disc, &geometry, &disc.zero_state(), &SolverConfig::default())?;
            if !report.converged {
                return Err(Error::Unsupported(format!("least-squares solve did not converge on {cells} cells")));
            }
            s
        }
        Formulation::ReducedOrder | Formulation::EqualOrder => {
            let test_degree = if formulation == Formulation::ReducedOrder { degree - 1 } else { degree };
            let sys = assemble_dls(&disc, &geometry, test_degree)?;
            coefficients_to_state(&disc, &geometry, &sys.solve()?)
        }
    };
    let quad = gauss_rule(20)?;
    let err = l2_error(&disc, &geometry, &state, &ex, &quad);
    Ok((state, err))
}

fn coefficients_to_state(disc: &Discretization, geometry: &GeometryField, c: &[f64]) -> FieldState {
    let mut s = disc.zero_state();
    let mut g = geometry.clone();
    disc.layout().scatter(c, &mut s, &mut g);
    s
}

/// Runs every selected formulation on every level.
pub fn run_ode_study(cfg: &OdeStudyConfig) -> Result<OdeStudyResult> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut reduced: Vec<FieldState> = Vec::new();
    let mut trial: Vec<FieldState> = Vec::new();
    for &f in &cfg.formulations {
        let mut prev: Option<(f64, f64)> = None;
        for &cells in &cfg.cells {
            let (state, error) = solve_level(f, cfg.degree, cells)?;
            let h = 1.0 / cells as f64;
            let rate = match prev {
                Some(p) if p.1 > 0.0 && error > 0.0 => Some(convergence_rate(&[p, (h, error)])?[0]),
                _ => None,
            };
            prev = Some((h, error));
            log::info!("{f} cells={cells} error={error:.6e}");
            rows.push(OdeStudyRow { formulation: f, cells, h, error, rate });
            match f {
                Formulation::ReducedOrder => reduced.push(state),
                Formulation::TrialToTest => trial.push(state),
                Formulation::EqualOrder => {}
            }
        }
    }
    let equivalence_gap = (!reduced.is_empty() && !trial.is_empty()).then(|| {
        reduced
            .iter()
            .zip(&trial)
            .map(|(a, b)| {
                a.state_coeffs()
                    .iter()
                    .zip(b.state_coeffs())
                    .map(|(x, y)| (x - y).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    });
    Ok(OdeStudyResult { rows, equivalence_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulation_names_round_trip() {
        for f in Formulation::ALL {
            assert_eq!(f.name().parse::<Formulation>().unwrap(), f);
        }
        assert!("bogus".parse::<Formulation>().is_err());
    }

    #[test]
    fn degree_six_is_exact_for_all_formulations() {
        for f in Formulation::ALL {
            let (_, e) = solve_level(f, 6, 2).unwrap();
            assert!(e < 1e-12, "{f}: {e}");
        }
    }

    #[test]
    fn short_study_agrees() {
        let cfg = OdeStudyConfig { cells: vec![2, 4, 8], ..OdeStudyConfig::default() };
        let r = run_ode_study(&cfg).unwrap();
        assert_eq!(r.rows.len(), 9);
        assert!(r.equivalence_gap.unwrap() < 1e-10);
    }
}
