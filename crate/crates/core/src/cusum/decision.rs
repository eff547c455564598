use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pillowcase::QuantileTable;

/// Outcome of comparing a sup statistic with one calibrated threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub level: f64,
    pub threshold: f64,
    pub reject: bool,
}

/// Reject when `sup` strictly exceeds the threshold at `level`.
pub fn decide(sup: f64, table: &QuantileTable, level: f64) -> Result<Decision> {
    let threshold = table.threshold(level)?;
    Ok(Decision {
        level,
        threshold,
        reject: sup > threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn strict_inequality() {
        let t = QuantileTable::published();
        assert!(decide(5.1, &t, 0.95).unwrap().reject);
        assert!(!decide(0.0, &t, 0.99).unwrap().reject);
        let q95 = t.threshold(0.95).unwrap();
        let d = decide(q95, &t, 0.95).unwrap();
        assert_eq!(d.threshold, q95);
        assert!(!d.reject);
    }

    #[test]
    fn missing_level() {
        let t = QuantileTable::published();
        assert!(matches!(decide(1.0, &t, 0.5), Err(Error::MissingLevel(_))));
    }
}
