use serde::{Deserialize, Serialize};

use crate::cusum::{decide, sample_power_spectrum, sup_statistic, CusumPartialSums, Decision};
use crate::error::Result;
use crate::harmonics::CoefficientPanel;
use crate::pillowcase::QuantileTable;

/// Result of the test for one summation start `lmin`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub lmin: usize,
    pub sup: Option<f64>,
    pub decisions: Vec<Decision>,
    pub error: Option<String>,
}

impl ScanEntry {
    pub fn rejects_at(&self, level: f64) -> Option<bool> {
        self.decisions
            .iter()
            .find(|d| (d.level - level).abs() < 1e-9)
            .map(|d| d.reject)
    }
}

/// Run the test once per `lmin`, sharing the sample power spectrum.
/// Entries that fail record their error and the scan moves on.
pub fn multiscale_scan(
    panel: &CoefficientPanel,
    lmin_list: &[usize],
    grid: usize,
    table: &QuantileTable,
) -> Result<Vec<ScanEntry>> {
    let spectrum = sample_power_spectrum(panel)?;
    let entries = lmin_list
        .iter()
        .map(|&lmin| {
            let run = || -> Result<(f64, Vec<Decision>)> {
                let sums = CusumPartialSums::with_spectrum(panel, lmin, spectrum.clone())?;
                let sup = sup_statistic(&sums.surface(grid, grid)?);
                let decisions = table
                    .levels()
                    .iter()
                    .map(|l| decide(sup, table, *l))
                    .collect::<Result<_>>()?;
                Ok((sup, decisions))
            };
            match run() {
                Ok((sup, decisions)) => ScanEntry {
                    lmin,
                    sup: Some(sup),
                    decisions,
                    error: None,
                },
                Err(e) => ScanEntry {
                    lmin,
                    sup: None,
                    decisions: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cusum::statistic_surface;
    use crate::fields::{simulate_panel, AngularPowerSpectrum, MeanScenario, TemporalModel};

    #[test]
    fn noise_scan_structure_and_l0_consistency() {
        let p = simulate_panel(
            &AngularPowerSpectrum::default(),
            &TemporalModel::Iid,
            &MeanScenario::empty(),
            40,
            6,
            8,
        )
        .unwrap();
        let t = QuantileTable::published();
        let scan = multiscale_scan(&p, &[0, 1, 2], 120, &t).unwrap();
        assert_eq!(scan.len(), 3);
        for e in &scan {
            assert!(e.sup.is_some());
            assert_eq!(e.decisions.len(), 3);
        }
        let direct = sup_statistic(&statistic_surface(&p, 0, 120, 120).unwrap());
        assert_eq!(scan[0].sup, Some(direct));
    }

    #[test]
    fn bad_entry_does_not_stop_scan() {
        let p = simulate_panel(
            &AngularPowerSpectrum::default(),
            &TemporalModel::Iid,
            &MeanScenario::empty(),
            10,
            3,
            1,
        )
        .unwrap();
        let scan = multiscale_scan(&p, &[5, 1], 30, &QuantileTable::published()).unwrap();
        assert!(scan[0].error.is_some() && scan[0].sup.is_none());
        assert!(scan[1].sup.is_some());
    }
}
