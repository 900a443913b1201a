//! Direct detection of exponentially growing modes: the quadratic pencil
//! λ²ψ ± 2cλψ′ + Hψ = 0 is reduced by companion linearization to an ordinary
//! eigenproblem for (ψ, λψ) and solved with a dense nonsymmetric eigensolver
//! on the mean-zero-restricted space.
//!
//! The traveling frames differ between the families (x + ct for Boussinesq,
//! x − ct for Kgz), so the first-order block enters with opposite signs; the
//! spectrum is mirrored but max |Re λ| — and with it every verdict — depends
//! on |c| only.

use crate::error::Result;
use crate::indices;
use crate::spectral::{build_bundle, SpectralOperatorBundle};
use crate::waves::{build_wave_from_period_speed, Model, WaveParams};
use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

/// Eigenvalues of the linearized-in-time pencil at one (wave, c, n).
#[derive(Debug, Clone, Serialize)]
pub struct PencilSpectrum {
    pub model: Model,
    pub kappa: f64,
    pub w: f64,
    /// Speed used in the pencil; a scan parameter, not necessarily the
    /// wave's own speed.
    pub c: f64,
    pub n: usize,
    /// (Re λ, Im λ) pairs, closed under conjugation.
    pub eigenvalues: Vec<(f64, f64)>,
    /// max Re λ over the spectrum.
    pub max_growth: f64,
    /// Default stability tolerance 1e-6·√‖H‖ for this discretization.
    pub growth_tol: f64,
}

/// Pass/fail verdict of the pencil against the closed-form threshold.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityVerdict {
    pub model: Model,
    pub period: f64,
    pub c: f64,
    pub n: usize,
    pub stable: bool,
    pub max_growth: f64,
    pub growth_tol: f64,
    /// c_T from the closed-form threshold-period solve.
    pub threshold_prediction: f64,
    /// stable ⟺ |c| ≥ c_T, as predicted?
    pub agreement: bool,
}

/// One row of a c-scan plus the located empirical boundary.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityScan {
    pub model: Model,
    pub period: f64,
    pub n: usize,
    pub rows: Vec<ScanRow>,
    pub c_t_closed: f64,
    /// First grid speed from which on every verdict is stable.
    pub c_t_empirical: Option<f64>,
    pub abs_diff: Option<f64>,
    /// No stable → unstable → stable pattern along increasing c.
    pub monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub c: f64,
    pub max_growth: f64,
    pub stable: bool,
}

impl StabilityScan {
    /// CSV `c,max_growth,stable`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("c,max_growth,stable\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::serialize::fmt_sig17(r.c),
                crate::serialize::fmt_sig17(r.max_growth),
                r.stable
            ));
        }
        out
    }
}

/// Restricted first-derivative operator of the bundle's admissible space.
fn restricted_d(bundle: &SpectralOperatorBundle) -> DMatrix<f64> {
    let n = bundle.n;
    match bundle.model {
        Model::Kgz => {
            let mut dfull = DMatrix::zeros(2 * n, 2 * n);
            dfull.view_mut((0, 0), (n, n)).copy_from(&bundle.diff1);
            dfull.view_mut((n, n), (n, n)).copy_from(&bundle.diff1);
            bundle.basis.transpose() * (dfull * &bundle.basis)
        }
        _ => bundle.basis.transpose() * (&bundle.diff1 * &bundle.basis),
    }
}

/// Companion matrix [[0, I], [−H, −s·2c·D]] for the unknown (ψ, λψ).
fn companion(hr: &DMatrix<f64>, dr: &DMatrix<f64>, c: f64, sign: f64) -> DMatrix<f64> {
    let m = hr.nrows();
    let mut comp = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        comp[(i, m + i)] = 1.0;
    }
    comp.view_mut((m, 0), (m, m)).copy_from(&(-hr));
    comp.view_mut((m, m), (m, m))
        .copy_from(&(dr * (-sign * 2.0 * c)));
    comp
}

fn frame_sign(model: Model) -> f64 {
    match model {
        Model::Kgz => -1.0,
        _ => 1.0,
    }
}

/// Operator-norm estimate (∞-norm; within √m of the 2-norm, which is ample
/// for a tolerance scale).
fn op_norm_inf(m: &DMatrix<f64>) -> f64 {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn spectrum_of(bundle: &SpectralOperatorBundle, c: f64) -> (Vec<(f64, f64)>, f64, f64) {
    let dr = restricted_d(bundle);
    let comp = companion(&bundle.op_h_restricted, &dr, c, frame_sign(bundle.model));
    let ev: DVector<Complex<f64>> = comp.complex_eigenvalues();
    let eigenvalues: Vec<(f64, f64)> = ev.iter().map(|z| (z.re, z.im)).collect();
    let max_growth = eigenvalues
        .iter()
        .map(|&(re, _)| re)
        .fold(f64::MIN, f64::max);
    let growth_tol = 1e-6 * op_norm_inf(&bundle.op_h_restricted).sqrt();
    (eigenvalues, max_growth, growth_tol)
}

/// Solve the pencil for the wave `params` at speed `c` (|c| < 1; `c` may
/// differ from `params.c` — it is the scan parameter).
pub fn pencil_spectrum(
    model: Model,
    params: &WaveParams,
    c: f64,
    n: usize,
) -> Result<PencilSpectrum> {
    if !(c.abs() < 1.0) {
        return Err(crate::error::Error::Domain {
            name: "c",
            value: c,
            need: "|c| < 1",
        });
    }
    let bundle = build_bundle(model, params, n)?;
    let (eigenvalues, max_growth, growth_tol) = spectrum_of(&bundle, c);
    Ok(PencilSpectrum {
        model,
        kappa: params.kappa,
        w: params.w,
        c,
        n,
        eigenvalues,
        max_growth,
        growth_tol,
    })
}

/// Build the period-T wave at speed c, run the pencil, and compare the
/// verdict with the closed-form threshold c_T.
pub fn classify_stability(
    model: Model,
    period: f64,
    c: f64,
    n: usize,
    growth_tol: Option<f64>,
) -> Result<StabilityVerdict> {
    let params = build_wave_from_period_speed(model, period, c)?;
    let spectrum = pencil_spectrum(model, &params, c, n)?;
    let tol = growth_tol.unwrap_or(spectrum.growth_tol);
    let (_, c_t) = indices::kappa_star_for_period(model, period)?;
    let stable = spectrum.max_growth <= tol;
    Ok(StabilityVerdict {
        model,
        period,
        c,
        n,
        stable,
        max_growth: spectrum.max_growth,
        growth_tol: tol,
        threshold_prediction: c_t,
        agreement: stable == (c.abs() >= c_t),
    })
}

/// Scan the pencil over `c_grid` (ascending, inside the admissible range) at
/// fixed period and locate the empirical stability boundary.
pub fn stability_scan(
    model: Model,
    period: f64,
    c_grid: &[f64],
    n: usize,
) -> Result<StabilityScan> {
    let (_, c_t_closed) = indices::kappa_star_for_period(model, period)?;
    let mut rows = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        let params = build_wave_from_period_speed(model, period, c)?;
        let spectrum = pencil_spectrum(model, &params, c, n)?;
        rows.push(ScanRow {
            c,
            max_growth: spectrum.max_growth,
            stable: spectrum.max_growth <= spectrum.growth_tol,
        });
    }
    // First speed from which on everything is stable.
    let mut boundary = None;
    for i in 0..rows.len() {
        if rows[i..].iter().all(|r| r.stable) {
            boundary = Some(rows[i].c);
            break;
        }
    }
    let monotone = {
        let first_stable = rows.iter().position(|r| r.stable);
        match first_stable {
            None => true,
            Some(i) => rows[i..].iter().all(|r| r.stable),
        }
    };
    Ok(StabilityScan {
        model,
        period,
        n,
        c_t_empirical: boundary,
        abs_diff: boundary.map(|b| (b - c_t_closed).abs()),
        rows,
        c_t_closed,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eig_sym;
    use crate::waves::build_wave;

    #[test]
    fn decoupled_case_is_square_root_of_minus_h() {
        // At c = 0 the pencil decouples: λ² lies in the spectrum of −H, and the single
        // negative eigenvalue −δ² of H yields the growing mode λ = δ.
        let p = build_wave(Model::Boussinesq3, 0.6, 1.0).unwrap();
        let bundle = build_bundle(Model::Boussinesq3, &p, 64).unwrap();
        let (hev, _) = eig_sym(&bundle.op_h_restricted);
        let spectrum = pencil_spectrum(Model::Boussinesq3, &p, 0.0, 64).unwrap();
        let scale = hev[hev.len() - 1].abs();
        for &(re, im) in &spectrum.eigenvalues {
            let z = Complex::new(re, im);
            let z2 = z * z;
            let dist = hev
                .iter()
                .map(|&l| (z2 + Complex::new(l, 0.0)).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(
                dist <= 1e-8 * scale,
                "lambda^2 = {z2} off-spectrum by {dist}"
            );
        }
        let delta = (-hev[0]).sqrt();
        assert!((spectrum.max_growth - delta).abs() < 1e-8 * (1.0 + delta));
        assert!(
            spectrum.max_growth > spectrum.growth_tol,
            "c = 0 is unstable"
        );
    }

    #[test]
    fn conjugation_symmetry() {
        let p = build_wave(Model::Boussinesq2, 0.7, 0.84).unwrap();
        let spectrum = pencil_spectrum(Model::Boussinesq2, &p, 0.4, 64).unwrap();
        for &(re, im) in &spectrum.eigenvalues {
            let dist = spectrum
                .eigenvalues
                .iter()
                .map(|&(r2, i2)| ((re - r2).powi(2) + (im + i2).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            assert!(
                dist <= 1e-8 * (1.0 + im.abs()),
                "unpaired eigenvalue ({re},{im})"
            );
        }
    }

    #[test]
    fn frame_sign_reflects_spectrum_but_not_growth() {
        let p = build_wave(Model::Kgz, 0.8, 0.91).unwrap();
        let bundle = build_bundle(Model::Kgz, &p, 48).unwrap();
        let dr = restricted_d(&bundle);
        let c = 0.3;
        let plus = companion(&bundle.op_h_restricted, &dr, c, 1.0).complex_eigenvalues();
        let minus = companion(&bundle.op_h_restricted, &dr, c, -1.0).complex_eigenvalues();
        let g_plus = plus.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        let g_minus = minus.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        assert!((g_plus - g_minus).abs() <= 1e-8 * (1.0 + g_plus.abs()));
    }

    #[test]
    fn classify_far_from_threshold() {
        // Boussinesq2, T = 8: c_T ≈ 0.2038.
        let v = classify_stability(Model::Boussinesq2, 8.0, 0.45, 64, None).unwrap();
        assert!(v.stable && v.agreement, "{v:?}");
        let v = classify_stability(Model::Boussinesq2, 8.0, 0.05, 64, None).unwrap();
        assert!(!v.stable && v.agreement, "{v:?}");
        assert!(v.max_growth > 1e-3);
    }

    #[test]
    fn kgz_slow_waves_unstable() {
        let v = classify_stability(Model::Kgz, 4.8, 0.0, 48, None).unwrap();
        assert!(!v.stable && v.agreement);
        assert!(v.max_growth > 0.5);
    }

    #[test]
    fn scan_monotone_and_boundary() {
        let grid: Vec<f64> = (0..8).map(|i| i as f64 * 0.08).collect();
        let scan = stability_scan(Model::Boussinesq2, 8.0, &grid, 64).unwrap();
        assert!(scan.monotone);
        let b = scan.c_t_empirical.expect("stable tail exists");
        assert!((b - scan.c_t_closed).abs() <= 0.08 + 1e-12);
    }

    #[test]
    fn rejects_bad_speed() {
        let p = build_wave(Model::Boussinesq3, 0.5, 1.0).unwrap();
        assert!(pencil_spectrum(Model::Boussinesq3, &p, 1.0, 64).is_err());
    }
}
