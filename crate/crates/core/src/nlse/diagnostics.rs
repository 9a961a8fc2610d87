use num_complex::Complex64;

use super::grid::Grid1D;
use super::model::NlseSample;
use super::spectral::Spectral;
use super::state::State;
use crate::error::Result;
use crate::soliton::{wrap, TANH_HALF_ARG};
use crate::SECH_HALF_ARG;

/// Conserved functionals and shape measurements of one state.
///
/// In the defocusing regime (Re Cₙ < 0) `peak_pos` and `fwhm` describe the
/// deepest notch and its full width at half depth; `peak_amp` is still the
/// largest |Ψ| (the background).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// ∫|Ψ|² dξ (m).
    pub norm: f64,
    /// ∫(|∂_ξΨ|² − (Re Cₙ/2)|Ψ|⁴) dξ (m⁻¹).
    pub hamiltonian: f64,
    pub peak_amp: f64,
    pub peak_pos: f64,
    pub fwhm: f64,
    /// ‖|Ψ| − fit‖₂ / ‖Ψ‖₂ against the best-fit sech (or tanh pair).
    pub shape_err: f64,
    pub fit: ShapeFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitFamily {
    /// A·sech(κ(ξ − c)).
    Sech,
    /// A·|tanh(κ(ξ − c + L/4))·tanh(κ(ξ − c − L/4))|.
    DarkPair,
}

/// Best-fit parameters of the shape family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeFit {
    pub family: FitFamily,
    pub amplitude: f64,
    pub center: f64,
    pub kappa: f64,
}

/// One-off diagnostics for `state`, given the coefficients at `state.t`.
pub fn diagnostics(state: &State, sample: &NlseSample) -> Result<Diagnostics> {
    let mut spectral = Spectral::new(state.grid);
    let psi = state.physical_psi(sample)?;
    Ok(measure(&psi, sample.c_n.re, &mut spectral, None))
}

pub(crate) fn measure(psi: &[Complex64], c_n_re: f64, spectral: &mut Spectral, hint: Option<ShapeFit>) -> Diagnostics {
    let grid = *spectral.grid();
    let dx = grid.dxi();
    let norm = psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx;
    let quartic = psi.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() * dx;
    let hamiltonian = spectral.kinetic_energy(psi) - 0.5 * c_n_re * quartic;

    let family = if c_n_re < 0.0 { FitFamily::DarkPair } else { FitFamily::Sech };
    let amp: Vec<f64> = psi.iter().map(|v| v.norm()).collect();
    let n = amp.len();
    let (j_max, _) = amp
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (j, &a)| if a > best.1 { (j, a) } else { best });
    let (peak_amp, max_pos) = parabolic_extremum(&amp, j_max, &grid);

    let empty = ShapeFit {
        family,
        amplitude: 0.0,
        center: 0.0,
        kappa: 0.0,
    };
    if peak_amp == 0.0 {
        return Diagnostics {
            norm,
            hamiltonian,
            peak_amp: 0.0,
            peak_pos: 0.0,
            fwhm: 0.0,
            shape_err: 0.0,
            fit: empty,
        };
    }

    let (peak_pos, fwhm) = match family {
        FitFamily::Sech => (max_pos, half_crossing_width(&amp, j_max, 0.5 * peak_amp, true, dx)),
        FitFamily::DarkPair => {
            let (j_min, _) = amp
                .iter()
                .enumerate()
                .fold((0, f64::INFINITY), |best, (j, &a)| if a < best.1 { (j, a) } else { best });
            let (_, notch) = parabolic_extremum(&amp, j_min, &grid);
            (notch, half_crossing_width(&amp, j_min, 0.5 * peak_amp, false, dx))
        }
    };

    let guess = match hint {
        Some(h) if h.family == family && h.amplitude > 0.0 => h,
        _ => {
            let (center, half_arg) = match family {
                FitFamily::Sech => (peak_pos, SECH_HALF_ARG),
                FitFamily::DarkPair => (wrap(peak_pos + 0.25 * grid.domain_len(), grid.domain_len()), TANH_HALF_ARG),
            };
            ShapeFit {
                family,
                amplitude: peak_amp,
                center,
                kappa: 2.0 * half_arg / fwhm.max(dx),
            }
        }
    };
    let xi = grid.xi_values();
    let (fit, cost) = fit_shape(&amp, &xi, grid.domain_len(), guess);
    let total: f64 = amp.iter().map(|a| a * a).sum();
    debug_assert_eq!(n, xi.len());
    Diagnostics {
        norm,
        hamiltonian,
        peak_amp,
        peak_pos,
        fwhm,
        shape_err: (cost / total).sqrt(),
        fit,
    }
}

/// Parabolic interpolation of |Ψ|² through sample `j` and its periodic
/// neighbours. Returns (|Ψ| at the extremum, position).
fn parabolic_extremum(amp: &[f64], j: usize, grid: &Grid1D) -> (f64, f64) {
    let n = amp.len();
    let ym = amp[(j + n - 1) % n].powi(2);
    let y0 = amp[j].powi(2);
    let yp = amp[(j + 1) % n].powi(2);
    let curv = ym - 2.0 * y0 + yp;
    let (offset, value) = if curv != 0.0 {
        let p = (0.5 * (ym - yp) / curv).clamp(-0.5, 0.5);
        (p, y0 - 0.25 * (ym - yp) * p)
    } else {
        (0.0, y0)
    };
    let pos = wrap(grid.xi(j) + offset * grid.dxi(), grid.domain_len());
    (value.max(0.0).sqrt(), pos)
}

/// Distance between the first crossings of `level` on either side of `j`.
/// `above` means the field starts above the level at `j` (bright peak).
fn half_crossing_width(amp: &[f64], j: usize, level: f64, above: bool, dx: f64) -> f64 {
    let n = amp.len();
    let crossed = |a: f64| if above { a < level } else { a > level };
    let walk = |dir: isize| -> Option<f64> {
        let mut prev = amp[j];
        for step in 1..n {
            let k = (j as isize + dir * step as isize).rem_euclid(n as isize) as usize;
            let a = amp[k];
            if crossed(a) {
                let frac = (prev - level) / (prev - a);
                return Some((step as f64 - 1.0 + frac) * dx);
            }
            prev = a;
        }
        None
    };
    match (walk(1), walk(-1)) {
        (Some(r), Some(l)) => r + l,
        _ => n as f64 * dx,
    }
}

/// sech and tanh of `x` from a single exponential.
#[inline]
fn sech_tanh(x: f64) -> (f64, f64) {
    if x.abs() > 40.0 {
        return (0.0, x.signum());
    }
    let e2 = (-2.0 * x.abs()).exp();
    let inv = 1.0 / (1.0 + e2);
    (2.0 * e2.sqrt() * inv, (1.0 - e2) * inv * x.signum())
}

/// Shape value and its derivatives with respect to (center, κ).
#[inline]
fn shape_terms(family: FitFamily, d: f64, kappa: f64, quarter: f64) -> (f64, f64, f64) {
    match family {
        FitFamily::Sech => {
            let (s, t) = sech_tanh(kappa * d);
            let fu = -s * t;
            (s, -kappa * fu, d * fu)
        }
        FitFamily::DarkPair => {
            let (da, db) = (d + quarter, d - quarter);
            let (sa, ta) = sech_tanh(kappa * da);
            let (sb, tb) = sech_tanh(kappa * db);
            let prod = -ta * tb;
            let sgn = if prod < 0.0 { -1.0 } else { 1.0 };
            let dprod_dd = -kappa * (sa * sa * tb + ta * sb * sb);
            let dprod_dk = -(da * sa * sa * tb + ta * db * sb * sb);
            (prod.abs(), -sgn * dprod_dd, sgn * dprod_dk)
        }
    }
}

fn fit_cost(amp: &[f64], xi: &[f64], len: f64, fit: &ShapeFit) -> f64 {
    let quarter = 0.25 * len;
    amp.iter()
        .zip(xi)
        .map(|(&a, &x)| {
            let (f, _, _) = shape_terms(fit.family, wrap(x - fit.center, len), fit.kappa, quarter);
            let r = a - fit.amplitude * f;
            r * r
        })
        .sum()
}

/// Levenberg–Marquardt on (amplitude, center, κ). Returns the fit and its
/// squared residual.
fn fit_shape(amp: &[f64], xi: &[f64], len: f64, guess: ShapeFit) -> (ShapeFit, f64) {
    let quarter = 0.25 * len;
    let mut fit = guess;
    let mut cost = 0.0;
    let mut lambda = 1e-6;
    for iter in 0..50 {
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        let mut sum_r2 = 0.0;
        for (&a, &x) in amp.iter().zip(xi) {
            let (f, f_c, f_k) = shape_terms(fit.family, wrap(x - fit.center, len), fit.kappa, quarter);
            let row = [f, fit.amplitude * f_c, fit.amplitude * f_k];
            let r = a - fit.amplitude * f;
            sum_r2 += r * r;
            for p in 0..3 {
                jtr[p] += row[p] * r;
                for q in 0..3 {
                    jtj[p][q] += row[p] * row[q];
                }
            }
        }
        if iter == 0 {
            cost = sum_r2;
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut m = jtj;
            for (p, row) in m.iter_mut().enumerate() {
                row[p] *= 1.0 + lambda;
            }
            let Some(delta) = solve3(m, jtr) else {
                lambda *= 10.0;
                continue;
            };
            // steps this small only shuffle roundoff
            if delta[0].abs() <= 1e-13 * fit.amplitude.abs() && delta[1].abs() * fit.kappa <= 1e-13 && delta[2].abs() <= 1e-13 * fit.kappa {
                break;
            }
            let trial = ShapeFit {
                amplitude: fit.amplitude + delta[0],
                center: wrap(fit.center + delta[1], len),
                kappa: (fit.kappa + delta[2]).abs(),
                ..fit
            };
            let trial_cost = fit_cost(amp, xi, len, &trial);
            if trial_cost <= cost {
                let rel = (cost - trial_cost) / cost.max(f64::MIN_POSITIVE);
                fit = trial;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-12);
                improved = rel > 1e-13;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (fit, cost)
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = b[row];
        }
        *slot = det(&mc) / d;
    }
    Some(out)
}
