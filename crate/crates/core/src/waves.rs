//! Construction of the three families of periodic traveling waves and the
//! (κ, w) ↔ (T, c) parametrizations.
//!
//! All families are the symmetric branches with integration constant a = 0 and
//! positive profiles:
//!
//! * `Boussinesq2` (quadratic nonlinearity f(φ) = φ²/2):
//!   φ(x) = φ₀ + (φ₁ − φ₀) cn²(αx; κ), solving φ″ − wφ + φ²/2 = 0.
//! * `Boussinesq3` (cubic nonlinearity f(φ) = φ³):
//!   φ(x) = φ₁ dn(αx; κ), solving φ″ − wφ + φ³ = 0.
//! * `Kgz`: φ(x) = φ₁ dn(αx; κ) solving −wφ″ + φ − φ³/(2w) = 0, coupled with
//!   ψ(x) = −φ²/(2w).
//!
//! Here w = 1 − c² for traveling speed |c| < 1, but waves may be built for any
//! w > 0; the speed is attached only when w ≤ 1.

use crate::elliptic::{complete_elliptic, jacobi_scd};
use crate::error::{Error, Result};
use crate::serialize::fmt_sig17;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Boussinesq2,
    Boussinesq3,
    Kgz,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Boussinesq2 => "boussinesq2",
            Model::Boussinesq3 => "boussinesq3",
            Model::Kgz => "kgz",
        }
    }

    /// Infimum of the admissible fundamental periods at fixed w.
    pub fn period_infimum(self, w: f64) -> f64 {
        match self {
            Model::Boussinesq2 => 2.0 * PI / w.sqrt(),
            Model::Boussinesq3 => std::f64::consts::SQRT_2 * PI / w.sqrt(),
            Model::Kgz => std::f64::consts::SQRT_2 * PI * w.sqrt(),
        }
    }

    pub fn admissible_period_text(self) -> &'static str {
        match self {
            Model::Boussinesq2 => "T > 2*pi/sqrt(w)",
            Model::Boussinesq3 => "T > sqrt(2)*pi/sqrt(w)",
            Model::Kgz => "T > sqrt(2)*pi*sqrt(w)",
        }
    }
}

/// One constructed wave. All fields satisfy the model's algebraic relations;
/// see [`build_wave`].
#[derive(Debug, Clone, Serialize)]
pub struct WaveParams {
    pub model: Model,
    pub kappa: f64,
    pub w: f64,
    /// Traveling speed with c² + w = 1; absent when w > 1.
    pub c: Option<f64>,
    /// Fundamental period T = 2K(κ)/α.
    pub period: f64,
    /// Elliptic argument scale.
    pub alpha: f64,
    /// Lower turning value (0 < φ₀ < φ₁).
    pub phi0: f64,
    /// Upper turning value; the profile amplitude.
    pub phi1: f64,
    /// Hamiltonian level of the first integral at the turning points.
    pub b: f64,
    /// Integration constant of the profile equation; always 0 here.
    pub a: f64,
}

/// A wave sampled on a uniform endpoint-exclusive grid over [0, T).
#[derive(Debug, Clone, Serialize)]
pub struct WaveProfile {
    pub params: WaveParams,
    pub n: usize,
    pub xs: Vec<f64>,
    pub phi: Vec<f64>,
    /// Second component ψ = −φ²/(2w); present for Kgz only.
    pub psi: Option<Vec<f64>>,
}

fn check_kappa_w(kappa: f64, w: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa <= crate::elliptic::KAPPA_MAX) {
        return Err(Error::Domain {
            name: "kappa",
            value: kappa,
            need: "0 < kappa <= 1 - 1e-12",
        });
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::Domain {
            name: "w",
            value: w,
            need: "w > 0",
        });
    }
    Ok(())
}

/// Elliptic argument scale α(model, κ, w).
fn alpha_of(model: Model, kappa: f64, w: f64) -> f64 {
    let k2 = kappa * kappa;
    match model {
        Model::Boussinesq2 => {
            let s = (1.0 - k2 + k2 * k2).sqrt();
            (w / (4.0 * s)).sqrt()
        }
        Model::Boussinesq3 => (w / (2.0 - k2)).sqrt(),
        Model::Kgz => 1.0 / (w * (2.0 - k2)).sqrt(),
    }
}

/// Construct the wave with modulus `kappa` and frame parameter `w`.
pub fn build_wave(model: Model, kappa: f64, w: f64) -> Result<WaveParams> {
    check_kappa_w(kappa, w)?;
    let k2 = kappa * kappa;
    let big_k = complete_elliptic(kappa)?.big_k;
    let alpha = alpha_of(model, kappa, w);
    let period = 2.0 * big_k / alpha;
    let (phi0, phi1, b) = match model {
        Model::Boussinesq2 => {
            let a2 = alpha * alpha;
            let phi1 = 4.0 * a2 * (1.0 + k2) + w;
            let phi0 = 4.0 * a2 * (1.0 - 2.0 * k2) + w;
            // Level of φ'² − wφ² + φ³/3 = b at the turning points.
            let b = phi0.powi(3) / 3.0 - w * phi0 * phi0;
            (phi0, phi1, b)
        }
        Model::Boussinesq3 => {
            let phi1 = std::f64::consts::SQRT_2 * alpha;
            let phi0 = phi1 * (1.0 - k2).sqrt();
            // Level of φ'² = b + wφ² − φ⁴/2 at the turning points.
            let b = phi1.powi(4) / 2.0 - w * phi1 * phi1;
            (phi0, phi1, b)
        }
        Model::Kgz => {
            let phi1 = 2.0 * (w / (2.0 - k2)).sqrt();
            let phi0 = phi1 * (1.0 - k2).sqrt();
            // 4w²b = 4wφ₁² − φ₁⁴ at the turning points.
            let b = (4.0 * w * phi1 * phi1 - phi1.powi(4)) / (4.0 * w * w);
            (phi0, phi1, b)
        }
    };
    let c = (w <= 1.0).then(|| (1.0 - w).sqrt());
    Ok(WaveParams {
        model,
        kappa,
        w,
        c,
        period,
        alpha,
        phi0,
        phi1,
        b,
        a: 0.0,
    })
}

/// Construct the wave with fundamental period `period` and speed `c`
/// (w = 1 − c²; the modulus is recovered by inverting the period map).
pub fn build_wave_from_period_speed(model: Model, period: f64, c: f64) -> Result<WaveParams> {
    if !(c.abs() < 1.0) {
        return Err(Error::Domain {
            name: "c",
            value: c,
            need: "|c| < 1 (waves require w = 1 - c^2 > 0)",
        });
    }
    let w = 1.0 - c * c;
    let kappa = kappa_from_period(model, period, w)?;
    let mut params = build_wave(model, kappa, w)?;
    params.c = Some(c);
    Ok(params)
}

/// Fundamental period T(model, κ, w); strictly increasing in κ at fixed w.
pub fn period_of(model: Model, kappa: f64, w: f64) -> Result<f64> {
    check_kappa_w(kappa, w)?;
    let big_k = complete_elliptic(kappa)?.big_k;
    Ok(2.0 * big_k / alpha_of(model, kappa, w))
}

/// Invert the period map: find κ with T(model, κ, w) = `period`.
///
/// The map is strictly increasing in κ, so plain bisection on
/// [1e-9, 1 − 1e-9] is safe. The bracket is shrunk to ~machine epsilon
/// (well inside the 1e-12 contract on κ): dT/dκ grows like 1/(1−κ²) toward
/// the cap, so κ must be resolved to eps for period round trips at 1e-10.
pub fn kappa_from_period(model: Model, period: f64, w: f64) -> Result<f64> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::Domain {
            name: "w",
            value: w,
            need: "w > 0",
        });
    }
    let inf = model.period_infimum(w);
    if !(period > inf) {
        return Err(Error::PeriodRange {
            model,
            period,
            need: format!(
                "{} (infimum {:.12} at this w)",
                model.admissible_period_text(),
                inf
            ),
        });
    }
    let (mut lo, mut hi) = (1e-9_f64, 1.0 - 1e-9);
    if period_of(model, hi, w)? < period {
        return Err(Error::PeriodRange {
            model,
            period,
            need: format!(
                "period exceeds the modulus cap (T(kappa = 1 - 1e-9) = {:.6})",
                period_of(model, hi, w)?
            ),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if period_of(model, mid, w)? < period {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

impl WaveParams {
    /// Profile value φ(x).
    pub fn profile_value(&self, x: f64) -> f64 {
        let (_sn, cn, dn) = jacobi_scd(self.alpha * x, self.kappa).expect("valid params");
        match self.model {
            Model::Boussinesq2 => self.phi0 + (self.phi1 - self.phi0) * cn * cn,
            Model::Boussinesq3 | Model::Kgz => self.phi1 * dn,
        }
    }

    /// Profile derivative φ′(x), analytic.
    pub fn profile_deriv(&self, x: f64) -> f64 {
        let (sn, cn, dn) = jacobi_scd(self.alpha * x, self.kappa).expect("valid params");
        match self.model {
            Model::Boussinesq2 => -2.0 * self.alpha * (self.phi1 - self.phi0) * sn * cn * dn,
            Model::Boussinesq3 | Model::Kgz => {
                -self.phi1 * self.alpha * self.kappa * self.kappa * sn * cn
            }
        }
    }

    /// Second component ψ(x) = −φ²/(2w) (Kgz).
    pub fn psi_value(&self, x: f64) -> f64 {
        let phi = self.profile_value(x);
        -phi * phi / (2.0 * self.w)
    }
}

/// Sample the wave on the uniform endpoint-exclusive grid xⱼ = jT/n.
pub fn sample_profile(params: &WaveParams, n: usize) -> Result<WaveProfile> {
    if n < 16 || !n.is_multiple_of(2) {
        return Err(Error::GridSize {
            n,
            need: "even and >= 16",
        });
    }
    let h = params.period / n as f64;
    let xs: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    let phi: Vec<f64> = xs.iter().map(|&x| params.profile_value(x)).collect();
    let psi = (params.model == Model::Kgz)
        .then(|| phi.iter().map(|&p| -p * p / (2.0 * params.w)).collect());
    Ok(WaveProfile {
        params: params.clone(),
        n,
        xs,
        phi,
        psi,
    })
}

/// Max-norm residual of the defining profile ODE, evaluated with spectral
/// differentiation on the sampled grid.
pub fn ode_residual(profile: &WaveProfile) -> f64 {
    let p = &profile.params;
    let d2 = crate::spectral::d2_matrix(profile.n, p.period);
    let phi = nalgebra::DVector::from_column_slice(&profile.phi);
    let phixx = &d2 * &phi;
    let w = p.w;
    let mut worst = 0.0_f64;
    for i in 0..profile.n {
        let f = phi[i];
        let r = match p.model {
            Model::Boussinesq2 => phixx[i] - w * f + 0.5 * f * f,
            Model::Boussinesq3 => phixx[i] - w * f + f * f * f,
            Model::Kgz => -w * phixx[i] + f - f * f * f / (2.0 * w),
        };
        worst = worst.max(r.abs());
    }
    worst
}

/// Fundamental period measured from the profile itself: the autocorrelation
/// C(s) = ∫φ(x)φ(x+s)dx peaks exactly at s = T; the peak is located by
/// bisecting the sign change of C′(s) (assembled with the analytic φ′).
pub fn measured_period_autocorrelation(params: &WaveParams, n: usize) -> f64 {
    let t = params.period;
    let h = t / n as f64;
    let xs: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    let phi: Vec<f64> = xs.iter().map(|&x| params.profile_value(x)).collect();
    let corr_deriv = |s: f64| -> f64 {
        xs.iter()
            .zip(&phi)
            .map(|(&x, &p)| p * params.profile_deriv(x + s))
            .sum::<f64>()
            * h
    };
    let (mut lo, mut hi) = (0.9 * t, 1.1 * t);
    // C' > 0 left of the peak, < 0 right of it.
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if corr_deriv(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl WaveProfile {
    /// CSV dump `x,phi[,psi]` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(psi) = &self.psi {
            out.push_str("x,phi,psi\n");
            for i in 0..self.n {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_sig17(self.xs[i]),
                    fmt_sig17(self.phi[i]),
                    fmt_sig17(psi[i])
                ));
            }
        } else {
            out.push_str("x,phi\n");
            for i in 0..self.n {
                out.push_str(&format!(
                    "{},{}\n",
                    fmt_sig17(self.xs[i]),
                    fmt_sig17(self.phi[i])
                ));
            }
        }
        out
    }
}
