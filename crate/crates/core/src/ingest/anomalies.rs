use serde::Serialize;

use super::series::{LatLonSeries, ANNUAL};
use crate::cusum::series_mean;
use crate::error::{Error, Result};

/// Departures from base-period monthly means.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalySeries {
    pub series: LatLonSeries,
    pub base: (i32, i32),
}

/// Non-fatal event recorded while ingesting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestWarning {
    pub kind: String,
    pub year: i32,
    pub months_present: Vec<u32>,
}

impl IngestWarning {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("warning serializes")
    }
}

/// Subtract, per cell and calendar month, the mean over `base_start..=base_end`.
///
/// Every month of every base year must be present.
pub fn compute_anomalies(series: &LatLonSeries, base_start: i32, base_end: i32) -> Result<AnomalySeries> {
    let not_covered = || Error::BaseNotCovered {
        start: base_start,
        end: base_end,
    };
    if base_end < base_start {
        return Err(not_covered());
    }
    let n = series.n_cells();
    let mut climatology = vec![0.0; 12 * n];
    let mut column = Vec::with_capacity((base_end - base_start + 1) as usize);
    for month in 1..=12u32 {
        let steps: Vec<usize> = (base_start..=base_end)
            .map(|y| series.times.binary_search(&(y, month)).map_err(|_| not_covered()))
            .collect::<Result<_>>()?;
        for c in 0..n {
            column.clear();
            column.extend(steps.iter().map(|&t| series.values[t * n + c]));
            climatology[(month as usize - 1) * n + c] = series_mean(&column);
        }
    }
    let mut values = series.values.clone();
    for (t, &(_, month)) in series.times.iter().enumerate() {
        if month == ANNUAL {
            return Err(Error::invalid("anomalies need monthly data"));
        }
        let clim = &climatology[(month as usize - 1) * n..month as usize * n];
        for (v, c) in values[t * n..(t + 1) * n].iter_mut().zip(clim) {
            *v -= c;
        }
    }
    Ok(AnomalySeries {
        series: LatLonSeries {
            values,
            ..series.clone()
        },
        base: (base_start, base_end),
    })
}

/// Average the twelve monthly anomalies of each year. Years missing a month
/// are dropped and reported.
pub fn annual_average(anomalies: &AnomalySeries) -> (AnomalySeries, Vec<IngestWarning>) {
    let src = &anomalies.series;
    let n = src.n_cells();
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut warnings = Vec::new();
    let mut t = 0;
    while t < src.times.len() {
        let year = src.times[t].0;
        let end = t + src.times[t..].iter().take_while(|(y, _)| *y == year).count();
        let months: Vec<u32> = src.times[t..end].iter().map(|(_, m)| *m).collect();
        if months.len() == 12 {
            times.push((year, ANNUAL));
            let mut column = [0.0; 12];
            for c in 0..n {
                for (k, step) in (t..end).enumerate() {
                    column[k] = src.values[step * n + c];
                }
                values.push(series_mean(&column));
            }
        } else {
            warnings.push(IngestWarning {
                kind: "incomplete_year".into(),
                year,
                months_present: months,
            });
        }
        t = end;
    }
    let series = LatLonSeries {
        lats: src.lats.clone(),
        lons: src.lons.clone(),
        times,
        values,
    };
    (
        AnomalySeries {
            series,
            base: anomalies.base,
        },
        warnings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monthly(years: std::ops::RangeInclusive<i32>, f: impl Fn(i32, u32) -> f64) -> LatLonSeries {
        let times: Vec<(i32, u32)> = years.flat_map(|y| (1..=12).map(move |m| (y, m))).collect();
        let values = times.iter().map(|&(y, m)| f(y, m)).collect();
        LatLonSeries::new(vec![0.0], vec![0.0], times, values).unwrap()
    }

    #[test]
    fn constant_series_has_zero_anomalies() {
        let s = monthly(2000..=2004, |_, _| 14.3);
        let a = compute_anomalies(&s, 2000, 2002).unwrap();
        assert!(a.series.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn january_example() {
        let s = monthly(2000..=2002, |y, m| if m == 1 { (y - 1999) as f64 } else { 0.0 });
        let a = compute_anomalies(&s, 2000, 2002).unwrap();
        let jan: Vec<f64> = (0..3).map(|k| a.series.values[k * 12]).collect();
        assert_eq!(jan, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn uncovered_base() {
        let s = monthly(2000..=2002, |_, _| 1.0);
        assert!(matches!(
            compute_anomalies(&s, 1999, 2001),
            Err(Error::BaseNotCovered { start: 1999, end: 2001 })
        ));
    }

    #[test]
    fn annual_means() {
        let s = monthly(2000..=2000, |_, m| m as f64);
        let a = AnomalySeries {
            series: s,
            base: (2000, 2000),
        };
        let (y, w) = annual_average(&a);
        assert_eq!(y.series.values, vec![6.5]);
        assert_eq!(y.series.times, vec![(2000, ANNUAL)]);
        assert!(w.is_empty());
    }

    #[test]
    fn partial_year_dropped_with_warning() {
        let mut times: Vec<(i32, u32)> = (1..=12).map(|m| (2000, m)).collect();
        times.extend((1..=5).map(|m| (2001, m)));
        let values = vec![1.0; times.len()];
        let s = LatLonSeries::new(vec![0.0], vec![0.0], times, values).unwrap();
        let (y, w) = annual_average(&AnomalySeries {
            series: s,
            base: (2000, 2000),
        });
        assert_eq!(y.series.values, vec![1.0]);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].year, 2001);
        assert_eq!(
            w[0].to_json_line(),
            r#"{"kind":"incomplete_year","year":2001,"months_present":[1,2,3,4,5]}"#
        );
    }
}
