use std::fmt::Write as _;

use super::ExactSolution;
use crate::error::{Error, Result};
use crate::physics::{NavierStokes1D, Primitive, Vector};

/// Steady viscous shock profile tabulated on a uniform grid, anchored so that the velocity
/// equals the mean of the upstream and downstream velocities at `x = 0`. Outside the
/// tabulated window the asymptotic states are held constant.
#[derive(Debug, Clone)]
pub struct ShockProfile {
    pub model: NavierStokes1D,
    pub upstream: Primitive,
    pub downstream: Primitive,
    pub x: Vec<f64>,
    pub velocity: Vec<f64>,
    pub temperature: Vec<f64>,
    /// Constant `rho v`.
    pub mass_flux: f64,
}

/// Right-hand side of the once-integrated momentum and energy balances for `(v, T)`.
#[derive(Debug, Clone, Copy)]
struct ShockOde {
    m0: f64,
    c1: f64,
    c2: f64,
    cp: f64,
    r: f64,
    mu: f64,
    k: f64,
}

impl ShockOde {
    fn new(model: &NavierStokes1D, up: &Primitive) -> Self {
        let m0 = up.density * up.velocity;
        let r = model.gas_constant;
        let cp = model.cp();
        let p1 = up.density * r * up.temperature;
        Self {
            m0,
            c1: m0 * up.velocity + p1,
            c2: m0 * (cp * up.temperature + 0.5 * up.velocity * up.velocity),
            cp,
            r,
            mu: model.viscosity,
            k: model.conductivity,
        }
    }

    /// Viscous stress `tau = m0 v + p - C1`.
    fn stress(&self, v: f64, t: f64) -> f64 {
        self.m0 * v + self.m0 * self.r * t / v - self.c1
    }

    fn rhs(&self, s: [f64; 2]) -> [f64; 2] {
        let (v, t) = (s[0], s[1]);
        let tau = self.stress(v, t);
        let vx = tau / (4.0 / 3.0 * self.mu);
        let tx = (self.m0 * (self.cp * t + 0.5 * v * v) - v * tau - self.c2) / self.k;
        [vx, tx]
    }

    fn rk4(&self, s: [f64; 2], h: f64) -> [f64; 2] {
        let add = |a: [f64; 2], b: [f64; 2], c: f64| [a[0] + c * b[0], a[1] + c * b[1]];
        let k1 = self.rhs(s);
        let k2 = self.rhs(add(s, k1, 0.5 * h));
        let k3 = self.rhs(add(s, k2, 0.5 * h));
        let k4 = self.rhs(add(s, k3, h));
        [
            s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    }

    fn jacobian(&self, s: [f64; 2]) -> [[f64; 2]; 2] {
        let mut j = [[0.0; 2]; 2];
        for c in 0..2 {
            let h = 1e-7 * s[c].abs().max(1.0);
            let mut p = s;
            let mut m = s;
            p[c] += h;
            m[c] -= h;
            let (fp, fm) = (self.rhs(p), self.rhs(m));
            for r in 0..2 {
                j[r][c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        j
    }
}

/// Downstream state of a normal shock for a calorically perfect gas.
pub fn normal_shock_downstream(model: &NavierStokes1D, up: &Primitive) -> Primitive {
    let g = model.gamma;
    let p1 = up.density * model.gas_constant * up.temperature;
    let c1 = (g * p1 / up.density).sqrt();
    let m2 = (up.velocity / c1).powi(2);
    let rho2 = up.density * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
    let p2 = p1 * (1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0));
    Primitive::new(rho2, up.density * up.velocity / rho2, p2 / (model.gas_constant * rho2))
}

/// Integrates the steady viscous-shock ODE with classical RK4 and uniform step `step`.
///
/// Mass conservation gives `rho v = m0`; integrating momentum and energy once gives
/// `4/3 mu v' = m0 v + p - C1` and `k T' = m0 (cp T + v^2/2) - v tau - C2`. The integration
/// starts next to the downstream saddle point, displaced along its stable eigenvector,
/// and runs towards negative `x` until the upstream state is reached.
pub fn ns_shock_ode_oracle(mach: f64, reynolds: f64, prandtl: f64, step: f64) -> Result<ShockProfile> {
    if !(step > 0.0) || !(mach > 1.0) {
        return Err(Error::InvalidArgument("shock oracle needs step > 0 and supersonic inflow".into()));
    }
    let model = NavierStokes1D::from_flow(mach, reynolds, prandtl);
    let up = Primitive::new(1.0, mach, 1.0);
    let down = normal_shock_downstream(&model, &up);
    let ode = ShockOde::new(&model, &up);

    let j = ode.jacobian([down.velocity, down.temperature]);
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr / 4.0 - det;
    if !(disc > 0.0) || !(det < 0.0) {
        return Err(Error::Oracle("downstream state is not a saddle point".into()));
    }
    let stable = tr / 2.0 - disc.sqrt();
    let mut dir = if j[0][1].abs() > (stable - j[0][0]).abs() * 1e-12 {
        [j[0][1], stable - j[0][0]]
    } else {
        [stable - j[1][1], j[1][0]]
    };
    let len = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    let sign = if dir[0] > 0.0 { 1.0 } else { -1.0 };
    dir = [sign * dir[0] / len, sign * dir[1] / len];

    let eps = 1e-8;
    let mut s = [down.velocity + eps * dir[0], down.temperature + eps * dir[1]];
    let mut xs = vec![0.0];
    let mut vs = vec![s[0]];
    let mut ts = vec![s[1]];
    let span = 1e3 * model.viscosity / ode.m0 + 50.0;
    let max_steps = (span / step).ceil() as usize;
    let tol = 1e-10;
    let mut reached = false;
    for n in 1..=max_steps {
        s = ode.rk4(s, -step);
        if !s[0].is_finite() || !s[1].is_finite() || s[0] <= 0.0 || s[1] <= 0.0 {
            return Err(Error::Oracle("shock ODE left the admissible region".into()));
        }
        xs.push(-(n as f64) * step);
        vs.push(s[0]);
        ts.push(s[1]);
        if (s[0] - up.velocity).abs() < tol * up.velocity && (s[1] - up.temperature).abs() < tol * up.temperature {
            reached = true;
            break;
        }
    }
    if !reached {
        return Err(Error::Oracle("shock ODE did not reach the upstream state".into()));
    }
    xs.reverse();
    vs.reverse();
    ts.reverse();
    if vs.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Oracle("shock profile velocity is not monotone".into()));
    }
    // anchor at the mean velocity
    let vm = 0.5 * (up.velocity + down.velocity);
    let i = vs.iter().position(|&v| v <= vm).unwrap_or(vs.len() - 1).max(1);
    let t = (vs[i - 1] - vm) / (vs[i - 1] - vs[i]);
    let x0 = xs[i - 1] + t * (xs[i] - xs[i - 1]);
    xs.iter_mut().for_each(|x| *x -= x0);
    Ok(ShockProfile { model, upstream: up, downstream: down, x: xs, velocity: vs, temperature: ts, mass_flux: ode.m0 })
}

impl ShockProfile {
    pub fn primitive_at(&self, x: f64) -> Primitive {
        let n = self.x.len();
        if x <= self.x[0] {
            return self.upstream;
        }
        if x >= self.x[n - 1] {
            return self.downstream;
        }
        let h = self.x[1] - self.x[0];
        let i = (((x - self.x[0]) / h).floor() as usize).min(n - 2);
        let t = (x - self.x[i]) / h;
        let v = self.velocity[i] + t * (self.velocity[i + 1] - self.velocity[i]);
        let temp = self.temperature[i] + t * (self.temperature[i + 1] - self.temperature[i]);
        Primitive::new(self.mass_flux / v, v, temp)
    }

    pub fn density_at(&self, x: f64) -> f64 {
        self.primitive_at(x).density
    }

    pub fn density(&self) -> Vec<f64> {
        self.velocity.iter().map(|v| self.mass_flux / v).collect()
    }

    /// `max |rho v - m0|` over the table.
    pub fn mass_flux_defect(&self) -> f64 {
        self.density()
            .iter()
            .zip(&self.velocity)
            .map(|(r, v)| (r * v - self.mass_flux).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of the momentum and total-energy fluxes from their upstream values,
    /// with gradients from fourth-order central differences of the table.
    pub fn flux_defects(&self) -> (f64, f64) {
        let ode = ShockOde::new(&self.model, &self.upstream);
        let h = self.x[1] - self.x[0];
        let d = |f: &[f64], i: usize| (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
        let mut momentum: f64 = 0.0;
        let mut energy: f64 = 0.0;
        for i in 2..self.x.len().saturating_sub(2) {
            let (v, t) = (self.velocity[i], self.temperature[i]);
            let tau = 4.0 / 3.0 * ode.mu * d(&self.velocity, i);
            let q = -ode.k * d(&self.temperature, i);
            let p = ode.m0 * ode.r * t / v;
            momentum = momentum.max((ode.m0 * v + p - tau - ode.c1).abs());
            energy = energy.max((ode.m0 * (ode.cp * t + 0.5 * v * v) - tau * v + q - ode.c2).abs());
        }
        (momentum, energy)
    }

    /// CSV `x,rho,v,T`, every `stride`-th tabulated point.
    pub fn to_csv(&self, stride: usize) -> String {
        let mut s = String::from("x,rho,v,T\n");
        for i in (0..self.x.len()).step_by(stride.max(1)) {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                self.x[i],
                self.mass_flux / self.velocity[i],
                self.velocity[i],
                self.temperature[i]
            );
        }
        s
    }

    /// Shift `s` minimizing `max_i |rho_i - rho_oracle(x_i - s)|` over `[-range, range]`,
    /// and that minimum. Coarse scan followed by golden-section refinement.
    pub fn align_density(&self, samples: &[(f64, f64)], range: f64) -> (f64, f64) {
        let err = |s: f64| {
            samples
                .iter()
                .map(|&(x, r)| (r - self.density_at(x - s)).abs())
                .fold(0.0, f64::max)
        };
        let n = 400;
        let mut best = (0.0, err(0.0));
        for k in 0..=n {
            let s = -range + 2.0 * range * k as f64 / n as f64;
            let e = err(s);
            if e < best.1 {
                best = (s, e);
            }
        }
        let dx = 2.0 * range / n as f64;
        let (mut a, mut b) = (best.0 - dx, best.0 + dx);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if err(c) < err(d) {
                b = d;
            } else {
                a = c;
            }
        }
        let s = 0.5 * (a + b);
        let e = err(s);
        if e < best.1 {
            (s, e)
        } else {
            best
        }
    }
}

impl ExactSolution for ShockProfile {
    fn value(&self, x: f64) -> Vector {
        self.model.to_conservative(&self.primitive_at(x))
    }
}
