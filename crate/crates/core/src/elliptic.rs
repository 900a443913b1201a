//! Complete elliptic integrals K(κ), E(κ) in Legendre form, their κ-derivatives,
//! and the Jacobi elliptic functions sn, cn, dn.
//!
//! K and E are evaluated by the arithmetic-geometric mean, sn/cn/dn by the
//! descending Landen (Gauss) transformation chain; both converge quadratically
//! and reach ~1e-15 relative accuracy in f64 for κ below [`KAPPA_MAX`].

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Hard modulus cap. K(κ) diverges logarithmically as κ → 1; evaluation at or
/// beyond the cap is refused so the blow-up cannot silently poison downstream
/// formulas. Callers probing the κ → 1 limit must sample inside the cap.
pub const KAPPA_MAX: f64 = 1.0 - 1e-12;

/// One evaluation of the complete elliptic integrals at modulus `kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPair {
    pub kappa: f64,
    /// K(κ), complete integral of the first kind. K ≥ π/2.
    pub big_k: f64,
    /// E(κ), complete integral of the second kind. E ≤ π/2.
    pub big_e: f64,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(0.0..KAPPA_MAX).contains(&kappa) {
        return Err(Error::Domain {
            name: "kappa",
            value: kappa,
            need: "0 <= kappa < 1 - 1e-12",
        });
    }
    Ok(())
}

/// K(κ) and E(κ) by the AGM iteration.
pub fn complete_elliptic(kappa: f64) -> Result<EllipticPair> {
    check_kappa(kappa)?;
    let mut a = 1.0_f64;
    let mut b = (1.0 - kappa * kappa).sqrt();
    let mut c = kappa;
    // E = K (1 - Σ_{n≥0} 2^{n-1} c_n²), c_0 = κ.
    let mut sum = 0.5 * c * c;
    let mut pow = 1.0;
    for _ in 0..60 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += 0.5 * pow * c * c;
    }
    let big_k = PI / (2.0 * a);
    Ok(EllipticPair {
        kappa,
        big_k,
        big_e: big_k * (1.0 - sum),
    })
}

/// dK/dκ and dE/dκ from the closed forms
/// K′ = (E − (1−κ²)K) / (κ(1−κ²)),  E′ = (E − K) / κ.
///
/// Both are 0/0 at κ = 0 (the analytic limits vanish), so κ = 0 is refused.
pub fn d_complete_elliptic(kappa: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && kappa < KAPPA_MAX) {
        return Err(Error::Domain {
            name: "kappa",
            value: kappa,
            need: "0 < kappa < 1 - 1e-12",
        });
    }
    let EllipticPair { big_k, big_e, .. } = complete_elliptic(kappa)?;
    let one_m = 1.0 - kappa * kappa;
    let dk = (big_e - one_m * big_k) / (kappa * one_m);
    let de = (big_e - big_k) / kappa;
    Ok((dk, de))
}

/// Jacobi elliptic functions (sn, cn, dn)(y; κ).
///
/// The argument is reduced modulo the fundamental period 4K before the Landen
/// chain so accuracy does not degrade over many periods.
pub fn jacobi_scd(y: f64, kappa: f64) -> Result<(f64, f64, f64)> {
    check_kappa(kappa)?;
    if !y.is_finite() {
        return Err(Error::Domain {
            name: "y",
            value: y,
            need: "finite",
        });
    }
    let four_k = 4.0 * complete_elliptic(kappa)?.big_k;
    let y = y - four_k * (y / four_k).round();
    Ok(sncndn(y, 1.0 - kappa * kappa))
}

/// Gauss/Landen chain for sn, cn, dn with complementary parameter
/// `emmc` = 1 − κ². Runs the AGM to convergence and back-substitutes.
fn sncndn(u: f64, emmc: f64) -> (f64, f64, f64) {
    if emmc == 0.0 {
        // κ = 1 degeneration (hyperbolic); unreachable through the public API.
        let c = 1.0 / u.cosh();
        return (u.tanh(), c, c);
    }
    let mut emc = emmc;
    let mut a = 1.0_f64;
    let mut dn = 1.0_f64;
    let mut em = [0.0_f64; 16];
    let mut en = [0.0_f64; 16];
    let mut l = 0;
    let mut c = 0.0;
    for i in 0..16 {
        l = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let u = u * c;
    let mut sn = u.sin();
    let mut cn = u.cos();
    if sn != 0.0 {
        let mut aa = cn / sn;
        c *= aa;
        for ii in (0..=l).rev() {
            let b = em[ii];
            aa *= c;
            c *= dn;
            dn = (en[ii] + aa) / (b + aa);
            aa = c / b;
        }
        let amp = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { amp } else { -amp };
        cn = c * sn;
    }
    (sn, cn, dn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    /// Independent oracle: composite Simpson quadrature of the Legendre-form
    /// integrals over θ ∈ [0, π/2].
    fn quadrature_ke(kappa: f64) -> (f64, f64) {
        let n = 8192; // even
        let h = FRAC_PI_2 / n as f64;
        let m = kappa * kappa;
        let fk = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
        let fe = |t: f64| (1.0 - m * t.sin().powi(2)).sqrt();
        let mut sk = fk(0.0) + fk(FRAC_PI_2);
        let mut se = fe(0.0) + fe(FRAC_PI_2);
        for j in 1..n {
            let t = j as f64 * h;
            let wgt = if j % 2 == 1 { 4.0 } else { 2.0 };
            sk += wgt * fk(t);
            se += wgt * fe(t);
        }
        (sk * h / 3.0, se * h / 3.0)
    }

    #[test]
    fn degenerate_modulus() {
        let p = complete_elliptic(0.0).unwrap();
        assert!((p.big_k - FRAC_PI_2).abs() < 1e-15);
        assert!((p.big_e - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn e_limit_toward_one() {
        let p = complete_elliptic(1.0 - 1e-9).unwrap();
        assert!((p.big_e - 1.0).abs() < 1e-6, "E = {}", p.big_e);
    }

    #[test]
    fn agm_matches_quadrature_oracle() {
        for &kappa in &[0.3, 0.5, 0.8, 0.95] {
            let p = complete_elliptic(kappa).unwrap();
            let (kq, eq) = quadrature_ke(kappa);
            assert!(
                (p.big_k - kq).abs() / kq < 1e-12,
                "K({kappa}): {} vs {kq}",
                p.big_k
            );
            assert!(
                (p.big_e - eq).abs() / eq < 1e-12,
                "E({kappa}): {} vs {eq}",
                p.big_e
            );
        }
    }

    #[test]
    fn frozen_reference_values() {
        // Oracle-derived digits, frozen.
        let p = complete_elliptic(0.8).unwrap();
        assert!((p.big_k - 1.995_302_777_664_729_4).abs() < 2e-15);
        assert!((p.big_e - 1.276_349_943_169_906_4).abs() < 2e-15);
        let p = complete_elliptic(0.5).unwrap();
        assert!((p.big_k - 1.685_750_354_812_596).abs() < 2e-15);
        assert!((p.big_e - 1.467_462_209_339_427_2).abs() < 2e-15);
        let p = complete_elliptic(0.7).unwrap();
        assert!((p.big_k - 1.845_693_998_374_723_5).abs() < 2e-15);
        assert!((p.big_e - 1.355_661_135_571_955_5).abs() < 2e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(complete_elliptic(-0.1).is_err());
        assert!(complete_elliptic(1.0).is_err());
        assert!(complete_elliptic(1.0 - 1e-13).is_err());
        assert!(d_complete_elliptic(0.0).is_err());
        assert!(jacobi_scd(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let kappa = 0.5;
        let (dk, de) = d_complete_elliptic(kappa).unwrap();
        let h = 1e-6;
        let pp = complete_elliptic(kappa + h).unwrap();
        let pm = complete_elliptic(kappa - h).unwrap();
        let dk_fd = (pp.big_k - pm.big_k) / (2.0 * h);
        let de_fd = (pp.big_e - pm.big_e) / (2.0 * h);
        assert!((dk - dk_fd).abs() / dk.abs() < 1e-7);
        assert!((de - de_fd).abs() / de.abs() < 1e-7);
    }

    #[test]
    fn derivatives_vanish_at_small_kappa() {
        let (dk, de) = d_complete_elliptic(1e-4).unwrap();
        assert!(dk.abs() < 1e-3);
        assert!(de.abs() < 1e-3);
    }

    #[test]
    fn derivative_signs() {
        let mut kappa = 0.05;
        while kappa < 1.0 - 1e-3 {
            let (dk, de) = d_complete_elliptic(kappa).unwrap();
            assert!(dk > 0.0, "K' <= 0 at {kappa}");
            assert!(de < 0.0, "E' >= 0 at {kappa}");
            kappa += 0.05;
        }
    }

    #[test]
    fn jacobi_origin_and_quarter_period() {
        let kappa = 0.6;
        let (sn, cn, dn) = jacobi_scd(0.0, kappa).unwrap();
        assert!(sn.abs() < 1e-15 && (cn - 1.0).abs() < 1e-15 && (dn - 1.0).abs() < 1e-15);
        let k = complete_elliptic(kappa).unwrap().big_k;
        let (sn, cn, dn) = jacobi_scd(k, kappa).unwrap();
        assert!((sn - 1.0).abs() < 1e-12);
        assert!(cn.abs() < 1e-12);
        assert!((dn - (1.0 - kappa * kappa).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn jacobi_trigonometric_degeneration() {
        for &y in &[0.3, 1.1, 2.9, -4.2] {
            let (sn, cn, dn) = jacobi_scd(y, 0.0).unwrap();
            assert!((sn - y.sin()).abs() < 1e-13);
            assert!((cn - y.cos()).abs() < 1e-13);
            assert!((dn - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobi_frozen_reference_values() {
        // Oracle-derived digits, frozen.
        let (sn, cn, dn) = jacobi_scd(0.7, 0.6).unwrap();
        assert!((sn - 0.629_917_115_323_486_8).abs() < 1e-13);
        assert!((cn - 0.776_662_364_108_456_7).abs() < 1e-13);
        assert!((dn - 0.925_825_898_328_683_2).abs() < 1e-13);
        let (sn, cn, dn) = jacobi_scd(1.3, 0.9).unwrap();
        assert!((sn - 0.885_760_198_280_398_9).abs() < 1e-13);
        assert!((cn - 0.464_143_158_025_913_8).abs() < 1e-13);
        assert!((dn - 0.603_736_188_765_620_9).abs() < 1e-13);
        let (sn, cn, dn) = jacobi_scd(2.5, 0.3).unwrap();
        assert!((sn - 0.652_693_329_082_679_5).abs() < 1e-13);
        assert!((cn - (-0.757_622_213_356_346_3)).abs() < 1e-13);
        assert!((dn - 0.980_642_252_625_995_7).abs() < 1e-13);
    }

    #[test]
    fn jacobi_identities_on_grid() {
        let mut kappa = 0.01;
        while kappa < 1.0 {
            let k = complete_elliptic(kappa).unwrap().big_k;
            for j in 0..48 {
                let y = j as f64 / 48.0 * 4.0 * k;
                let (sn, cn, dn) = jacobi_scd(y, kappa).unwrap();
                assert!(
                    (sn * sn + cn * cn - 1.0).abs() < 1e-12,
                    "kappa={kappa} y={y}"
                );
                assert!(
                    (dn * dn + kappa * kappa * sn * sn - 1.0).abs() < 1e-12,
                    "kappa={kappa} y={y}"
                );
            }
            kappa += 0.07;
        }
    }

    #[test]
    fn jacobi_periodicity() {
        for &kappa in &[0.2, 0.6, 0.95] {
            let k = complete_elliptic(kappa).unwrap().big_k;
            for j in 0..16 {
                let y = -3.0 + j as f64 * 0.41;
                let (sn, _, dn) = jacobi_scd(y, kappa).unwrap();
                let (sn4, _, _) = jacobi_scd(y + 4.0 * k, kappa).unwrap();
                let (_, _, dn2) = jacobi_scd(y + 2.0 * k, kappa).unwrap();
                assert!((sn4 - sn).abs() < 1e-10);
                assert!((dn2 - dn).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dn_derivative_identity() {
        // d/dy dn = -κ² sn cn, by central differences.
        let kappa = 0.7;
        let h = 1e-6;
        for j in 0..12 {
            let y = 0.2 + j as f64 * 0.35;
            let (sn, cn, _) = jacobi_scd(y, kappa).unwrap();
            let (_, _, dp) = jacobi_scd(y + h, kappa).unwrap();
            let (_, _, dm) = jacobi_scd(y - h, kappa).unwrap();
            let fd = (dp - dm) / (2.0 * h);
            assert!((fd + kappa * kappa * sn * cn).abs() < 1e-6, "y={y}");
        }
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K - K K' = π/2 with K', E' at the complementary modulus.
        let mut kappa = 0.05;
        while kappa < 1.0 - 1e-3 {
            let p = complete_elliptic(kappa).unwrap();
            let q = complete_elliptic((1.0 - kappa * kappa).sqrt()).unwrap();
            let lhs = p.big_e * q.big_k + q.big_e * p.big_k - p.big_k * q.big_k;
            assert!(
                (lhs - FRAC_PI_2).abs() / FRAC_PI_2 < 1e-12,
                "kappa={kappa}: {lhs}"
            );
            kappa += 0.04;
        }
    }

    #[test]
    fn monotonicity_of_k_and_e() {
        let mut prev = complete_elliptic(0.01).unwrap();
        let mut kappa = 0.05;
        while kappa < 1.0 - 1e-3 {
            let p = complete_elliptic(kappa).unwrap();
            assert!(p.big_k > prev.big_k);
            assert!(p.big_e < prev.big_e);
            prev = p;
            kappa += 0.04;
        }
    }
}
