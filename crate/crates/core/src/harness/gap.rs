//! SNR gap between two BER curves at a target BER.

use super::report::BerReport;
use crate::error::{Error, Result};

/// SNR at which a decreasing curve crosses `target`, interpolating
/// `log10(ber)` linearly in dB between the bracketing points. Points with
/// zero BER are skipped.
pub fn snr_at_ber(snr_db: &[f64], ber: &[f64], target: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = snr_db
        .iter()
        .zip(ber)
        .filter(|(_, &b)| b > 0.0)
        .map(|(&s, &b)| (s, b))
        .collect();
    pts.windows(2).find_map(|w| {
        let ((s0, b0), (s1, b1)) = (w[0], w[1]);
        if b0 >= target && target >= b1 && b0 != b1 {
            let (l0, l1, lt) = (b0.log10(), b1.log10(), target.log10());
            Some(s0 + (s1 - s0) * (lt - l0) / (l1 - l0))
        } else if b0 == target {
            Some(s0)
        } else {
            None
        }
    })
}

fn curve_snr(report: &BerReport, target: f64) -> Result<f64> {
    let snr: Vec<f64> = report.points.iter().map(|p| p.snr.value_db).collect();
    let ber: Vec<f64> = report.points.iter().map(|p| p.ber()).collect();
    snr_at_ber(&snr, &ber, target).ok_or_else(|| Error::NotBracketed {
        target,
        curve: report.config.scheme.to_string(),
    })
}

/// `snr(reference) - snr(candidate)` at `target`; positive when the
/// candidate needs less SNR.
pub fn measure_snr_gap(reference: &BerReport, candidate: &BerReport, target: f64) -> Result<f64> {
    let conv = |r: &BerReport| r.config.snr_grid.first().map(|s| s.convention);
    if conv(reference) != conv(candidate) {
        return Err(Error::Config("reports use different SNR conventions".into()));
    }
    Ok(curve_snr(reference, target)? - curve_snr(candidate, target)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_in_log_domain() {
        let s = [0.0, 1.0, 2.0];
        let b = [1e-2, 1e-3, 1e-4];
        assert!((snr_at_ber(&s, &b, 1e-3).unwrap() - 1.0).abs() < 1e-12);
        assert!((snr_at_ber(&s, &b, 10f64.powf(-3.5)).unwrap() - 1.5).abs() < 1e-12);
        assert!(snr_at_ber(&s, &b, 1e-5).is_none());
        assert!(snr_at_ber(&s, &b, 0.5).is_none());
        // Zero-BER tail points are ignored.
        assert!(snr_at_ber(&[0.0, 1.0, 2.0], &[1e-2, 1e-3, 0.0], 1e-4).is_none());
    }
}
