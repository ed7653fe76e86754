//! Butterworth band-pass design via analog prototype, band transformation
//! and bilinear transform with frequency prewarping.

use super::{BiquadSection, DspError, FilterCascade};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Designs a Butterworth band-pass as a cascade of second-order sections.
///
/// `order` is the analog prototype order (2 or 4); the realized band-pass
/// has order `2 * order` and `order` sections. Band edges are prewarped
/// (`w_a = 2 fs tan(pi f / fs)`) so the digital magnitude is exactly
/// 1/sqrt(2) at `f_lo` and `f_hi`.
///
/// Sections are ordered by descending pole magnitude. The first half carry
/// `(1 + z^-1)^2` numerators and the second half `(1 - z^-1)^2`, with the
/// overall gain folded into the first section, mirroring the structure of
/// the fixed cascade in this crate. The returned cascade carries state for
/// two channels.
pub fn design_butterworth_bandpass(
    order: usize,
    fs: f64,
    f_lo: f64,
    f_hi: f64,
) -> Result<FilterCascade, DspError> {
    if order != 2 && order != 4 {
        return Err(DspError::UnsupportedOrder { order });
    }
    let band_ok = fs.is_finite()
        && f_lo.is_finite()
        && f_hi.is_finite()
        && fs > 0.0
        && f_lo > 0.0
        && f_lo < f_hi
        && f_hi < fs / 2.0;
    if !band_ok {
        return Err(DspError::InvalidBand { f_lo, f_hi, fs });
    }

    // Prewarped analog band edges.
    let w1 = 2.0 * fs * (PI * f_lo / fs).tan();
    let w2 = 2.0 * fs * (PI * f_hi / fs).tan();
    let wo = (w1 * w2).sqrt();
    let bw = w2 - w1;

    // Upper-half-plane prototype poles on the unit circle; their conjugates
    // are implied. Each UHP pole yields two band-pass pole pairs.
    let half = order / 2;
    let mut digital_pole_pairs = Vec::with_capacity(order);
    let mut analog_pole_product = Complex64::new(1.0, 0.0);
    let k = 2.0 * fs;
    for i in 0..half {
        let theta = PI * (2 * i + order + 1) as f64 / (2.0 * order as f64);
        let prototype = Complex64::from_polar(1.0, theta);
        let scaled = prototype * (bw / 2.0);
        let shift = (scaled * scaled - wo * wo).sqrt();
        for analog in [scaled + shift, scaled - shift] {
            // Gain bookkeeping covers the pole and its conjugate.
            let against = k - analog;
            analog_pole_product *= against * against.conj();
            let digital = (k + analog) / (k - analog);
            digital_pole_pairs.push(digital);
        }
    }

    // k_bp = bw^order; analog zeros sit at s = 0, contributing (2 fs)^order.
    let gain = bw.powi(order as i32) * k.powi(order as i32) / analog_pole_product.re;

    // Denominators from each pole and its conjugate; descending magnitude.
    let mut denominators: Vec<(f64, f64)> = digital_pole_pairs
        .iter()
        .map(|p| (-2.0 * p.re, p.norm_sqr()))
        .collect();
    denominators.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("finite pole magnitudes"));

    let mut sections = Vec::with_capacity(order);
    for (i, (a1, a2)) in denominators.into_iter().enumerate() {
        let b1_sign = if i < half { 2.0 } else { -2.0 };
        let scale = if i == 0 { gain } else { 1.0 };
        sections.push(BiquadSection::new_stable(
            scale,
            b1_sign * scale,
            scale,
            a1,
            a2,
        )?);
    }
    FilterCascade::with_channels(sections, 2)
}
