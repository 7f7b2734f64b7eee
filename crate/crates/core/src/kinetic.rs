//! Closed-form evaluation of the kinetic limit: survival fraction,
//! total mass, limiting loss, and the evolved distribution function.

use crate::density::InitialDensity;
use crate::error::Result;

/// The exact solution of the kinetic equation for a given initial datum.
///
/// Everything is evaluated in closed form from `F_0`:
/// `rho(t) = 1 - F_0(t)`, `M(t) = rho(t)^2`, `2 L(t) + M(t) = 1`, and
/// `F(x, t) = rho(t) (F_0(x + t) - F_0(t))`.
#[derive(Debug, Clone)]
pub struct KineticSolution {
    density: InitialDensity,
}

impl KineticSolution {
    pub fn new(density: InitialDensity) -> Self {
        Self { density }
    }

    pub fn density(&self) -> &InitialDensity {
        &self.density
    }

    /// Survival fraction `rho(t) = 1 - F_0(t)`, nonincreasing, `rho(0) = 1`.
    pub fn rho(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        1.0 - self.density.cdf(t)
    }

    /// Total mass `M(t) = rho(t)^2`.
    pub fn mass(&self, t: f64) -> f64 {
        let r = self.rho(t);
        r * r
    }

    /// Limiting loss `L(t) = (1 - rho(t)^2) / 2`, increasing to 1/2.
    pub fn loss(&self, t: f64) -> f64 {
        0.5 * (1.0 - self.mass(t))
    }

    /// Cumulative mass `F(x, t) = rho(t) (F_0(x + t) - F_0(t))`.
    pub fn distribution(&self, x: f64, t: f64) -> f64 {
        debug_assert!(x >= 0.0 && t >= 0.0);
        self.rho(t) * (self.density.cdf(x + t) - self.density.cdf(t))
    }

    /// Pointwise density `f(x, t) = rho(t) f_0(x + t)`; errors when the
    /// initial datum carries no density.
    pub fn density_value(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.rho(t) * self.density.pdf(x + t)?)
    }

    /// Sup of the finite-difference residual of the transport equation
    /// over an `nx` by `nt` grid on `[0, x_max] x [0, t_max]`, using central
    /// differences with the given step. Grid points within `2 * step` of a
    /// density kink (in `x + t`) are skipped, as are points where the mass
    /// has vanished.
    pub fn pde_residual_sup(
        &self,
        x_max: f64,
        t_max: f64,
        nx: usize,
        nt: usize,
        step: f64,
    ) -> Result<f64> {
        let breaks = self.density.pdf_breakpoints();
        let mut sup: f64 = 0.0;
        for i in 0..nx {
            let x = x_max * (i as f64 + 0.5) / nx as f64;
            for j in 0..nt {
                let t = t_max * (j as f64 + 0.5) / nt as f64;
                if t < step {
                    continue;
                }
                let near_kink = breaks.iter().any(|&b| {
                    (x + t - b).abs() <= 2.0 * step
                        || (x - b).abs() <= 2.0 * step
                        || (t - b).abs() <= 2.0 * step
                });
                if near_kink {
                    continue;
                }
                let m = self.mass(t);
                if m <= 1e-12 {
                    continue;
                }
                let ft = (self.density_value(x, t + step)? - self.density_value(x, t - step)?)
                    / (2.0 * step);
                let fx = (self.density_value(x + step, t)? - self.density_value(x - step, t)?)
                    / (2.0 * step);
                let boundary = self.density_value(0.0, t)? / m;
                let residual = ft - fx + boundary * self.density_value(x, t)?;
                sup = sup.max(residual.abs());
            }
        }
        Ok(sup)
    }
}
