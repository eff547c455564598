use crate::error::{Error, Result};
use crate::fields::{AngularPowerSpectrum, SpectrumRule};
use crate::special::hurwitz_zeta;

/// Pixelization diagnostic `(1 / C_L) Σ_{l > lstar} (2l + 1) C_l`.
///
/// Small values mean the spectral mass above the grid order is negligible
/// relative to the last analysed multipole. No threshold is applied.
/// Power laws are summed in closed form through the Hurwitz zeta function;
/// non-summable tails (`C_l ~ l^{-eta}` with `eta <= 2`, which includes the
/// `2 / (l (l + 1))` rule) are rejected.
pub fn tail_regularity_diagnostic(spectrum: &AngularPowerSpectrum, lmax: usize, lstar: usize) -> Result<f64> {
    if lstar <= lmax {
        return Err(Error::invalid(format!(
            "grid order {lstar} must exceed the analysis order {lmax}"
        )));
    }
    let c_l = spectrum.cl(lmax);
    if c_l.is_nan() || c_l <= 0.0 {
        return Err(Error::invalid(format!("C_{lmax} = {c_l} must be positive")));
    }
    let tail = match &spectrum.rule {
        SpectrumRule::InverseLaplacian => {
            return Err(Error::NonSummableTail(
                "C_l = 2/(l(l+1)) decays like l^-2 (eta = 2 boundary)".into(),
            ))
        }
        SpectrumRule::PowerLaw { eta } if *eta <= 2.0 => {
            return Err(Error::NonSummableTail(format!("power law with eta = {eta} <= 2")))
        }
        SpectrumRule::PowerLaw { eta } => {
            let a = (lstar + 1) as f64;
            2.0 * hurwitz_zeta(eta - 1.0, a) + hurwitz_zeta(*eta, a)
        }
        SpectrumRule::Table { values } => values
            .iter()
            .enumerate()
            .skip(lstar)
            .map(|(i, c)| (2 * (i + 1) + 1) as f64 * c)
            .sum(),
    };
    Ok(tail / c_l)
}
