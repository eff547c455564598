use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(l, m) ↦ value` entry of a sparse coefficient map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanTerm {
    pub ell: usize,
    pub m: i32,
    pub value: f64,
}

/// Remainder term `amplitude · t^{α_l - epsilon} · (ln t)^log_power`.
///
/// When `log_power != 0` the term is taken as zero at `t = 1`, where the
/// logarithm vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondaryTrend {
    pub amplitudes: Vec<MeanTerm>,
    pub epsilon: f64,
    pub log_power: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
struct RawScenario {
    #[serde(default)]
    mu0: Vec<MeanTerm>,
    #[serde(default)]
    mu1: Vec<MeanTerm>,
    #[serde(default)]
    alpha: BTreeMap<usize, f64>,
    #[serde(default)]
    mu2: Option<SecondaryTrend>,
}

/// Amplitudes, `ε` and the log power `k` of the slowly varying term.
type Correction = (BTreeMap<(usize, i32), f64>, f64, f64);

/// Deterministic mean `μ_lm(t) = μ_lm;0 + μ_lm;1 t^{α_l} + μ_lm;2(t)`.
///
/// Degrees without an `alpha` entry use `α_l = 0`. If the largest exponent
/// `ᾱ` is positive, every degree attaining it must have `Σ_m μ_lm;1 ≠ 0`;
/// construction fails otherwise.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawScenario", into = "RawScenario")]
pub struct MeanScenario {
    mu0: BTreeMap<(usize, i32), f64>,
    mu1: BTreeMap<(usize, i32), f64>,
    alpha: BTreeMap<usize, f64>,
    mu2: Option<Correction>,
}

fn collect_terms(terms: &[MeanTerm], what: &str) -> Result<BTreeMap<(usize, i32), f64>> {
    let mut out = BTreeMap::new();
    for t in terms {
        if t.m.unsigned_abs() as usize > t.ell {
            return Err(Error::invalid(format!(
                "{what} entry (l={}, m={}) has |m| > l",
                t.ell, t.m
            )));
        }
        if !t.value.is_finite() {
            return Err(Error::invalid(format!(
                "{what} entry (l={}, m={}) is not finite",
                t.ell, t.m
            )));
        }
        if out.insert((t.ell, t.m), t.value).is_some() {
            return Err(Error::invalid(format!(
                "duplicate {what} entry (l={}, m={})",
                t.ell, t.m
            )));
        }
    }
    Ok(out)
}

fn to_terms(map: &BTreeMap<(usize, i32), f64>) -> Vec<MeanTerm> {
    map.iter()
        .map(|(&(ell, m), &value)| MeanTerm { ell, m, value })
        .collect()
}

impl TryFrom<RawScenario> for MeanScenario {
    type Error = Error;

    fn try_from(raw: RawScenario) -> Result<Self> {
        MeanScenario::new(raw.mu0, raw.mu1, raw.alpha, raw.mu2)
    }
}

impl From<MeanScenario> for RawScenario {
    fn from(s: MeanScenario) -> Self {
        RawScenario {
            mu0: to_terms(&s.mu0),
            mu1: to_terms(&s.mu1),
            alpha: s.alpha.clone(),
            mu2: s.mu2.as_ref().map(|(amp, epsilon, log_power)| SecondaryTrend {
                amplitudes: to_terms(amp),
                epsilon: *epsilon,
                log_power: *log_power,
            }),
        }
    }
}

impl MeanScenario {
    pub fn new(
        mu0: Vec<MeanTerm>,
        mu1: Vec<MeanTerm>,
        alpha: BTreeMap<usize, f64>,
        mu2: Option<SecondaryTrend>,
    ) -> Result<Self> {
        let mu0 = collect_terms(&mu0, "mu0")?;
        let mu1 = collect_terms(&mu1, "mu1")?;
        if let Some((l, a)) = alpha.iter().find(|(_, a)| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::invalid(format!(
                "exponent alpha_{l} = {a} must be finite and >= 0"
            )));
        }
        let mu2 = match mu2 {
            None => None,
            Some(s) => {
                if !(s.epsilon.is_finite() && s.epsilon > 0.0) {
                    return Err(Error::invalid(format!(
                        "secondary trend needs epsilon > 0, got {}",
                        s.epsilon
                    )));
                }
                if !s.log_power.is_finite() {
                    return Err(Error::invalid("secondary trend log power must be finite"));
                }
                Some((collect_terms(&s.amplitudes, "mu2")?, s.epsilon, s.log_power))
            }
        };
        let scenario = MeanScenario { mu0, mu1, alpha, mu2 };
        scenario.check_top_exponent()?;
        Ok(scenario)
    }

    fn check_top_exponent(&self) -> Result<()> {
        let top = self.top_exponent();
        if self.mu1.is_empty() || top <= 0.0 {
            return Ok(());
        }
        for (&ell, &a) in &self.alpha {
            if a == top {
                let sum: f64 = self.mu1.range((ell, i32::MIN)..=(ell, i32::MAX)).map(|(_, v)| v).sum();
                if sum == 0.0 {
                    return Err(Error::TopExponentSum { ell });
                }
            }
        }
        Ok(())
    }

    /// The zero mean.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Largest trend exponent `ᾱ` (zero when no exponents are set).
    pub fn top_exponent(&self) -> f64 {
        self.alpha.values().copied().fold(0.0, f64::max)
    }

    /// Degrees attaining the top exponent.
    pub fn top_exponent_set(&self) -> Vec<usize> {
        let top = self.top_exponent();
        if top <= 0.0 {
            return Vec::new();
        }
        self.alpha.iter().filter(|(_, a)| **a == top).map(|(l, _)| *l).collect()
    }

    pub fn alpha(&self, ell: usize) -> f64 {
        self.alpha.get(&ell).copied().unwrap_or(0.0)
    }

    pub fn is_time_varying(&self) -> bool {
        (!self.mu1.is_empty() && self.top_exponent() > 0.0) || self.mu2.is_some()
    }

    /// All `(l, m)` with a nonzero entry in any component.
    pub fn support(&self) -> BTreeSet<(usize, i32)> {
        let mut keys: BTreeSet<_> = self.mu0.keys().chain(self.mu1.keys()).copied().collect();
        if let Some((amp, _, _)) = &self.mu2 {
            keys.extend(amp.keys().copied());
        }
        keys
    }

    /// `μ_lm(t)` for a one-based time index `t >= 1`.
    pub fn mean_at(&self, ell: usize, m: i32, t: usize) -> f64 {
        debug_assert!(t >= 1, "time index is one-based");
        let tf = t as f64;
        let mut mean = self.mu0.get(&(ell, m)).copied().unwrap_or(0.0);
        if let Some(v) = self.mu1.get(&(ell, m)) {
            mean += v * tf.powf(self.alpha(ell));
        }
        if let Some((amp, eps, k)) = &self.mu2 {
            if let Some(v) = amp.get(&(ell, m)) {
                let log_factor = if *k == 0.0 {
                    1.0
                } else if t == 1 {
                    0.0
                } else {
                    tf.ln().powf(*k)
                };
                mean += v * tf.powf(self.alpha(ell) - eps) * log_factor;
            }
        }
        mean
    }

    pub fn mu0(&self) -> Vec<MeanTerm> {
        to_terms(&self.mu0)
    }

    pub fn mu1(&self) -> Vec<MeanTerm> {
        to_terms(&self.mu1)
    }
}

/// Mean designs of the simulation study.
///
/// 1. `μ_00 = 5`;
/// 2. additionally `μ_l0 = -2 / (l (l + 1))` for even `l` in `2..=lmax`;
/// 3. the same for every `l` in `1..=lmax`.
///
/// The static versions place the values in `mu0`. Time-varying versions move
/// them to `mu1`, each with exponent `alpha`.
pub fn scenario_preset(model_id: u8, time_varying: bool, alpha: f64, lmax: usize) -> Result<MeanScenario> {
    let mut terms = vec![MeanTerm {
        ell: 0,
        m: 0,
        value: 5.0,
    }];
    let include = |l: usize| match model_id {
        2 => l % 2 == 0,
        3 => true,
        _ => false,
    };
    match model_id {
        1..=3 => {}
        other => return Err(Error::invalid(format!("model id {other} not in {{1, 2, 3}}"))),
    }
    for l in 1..=lmax {
        if include(l) {
            let lf = l as f64;
            terms.push(MeanTerm {
                ell: l,
                m: 0,
                value: -2.0 / (lf * (lf + 1.0)),
            });
        }
    }
    if time_varying {
        let exponents = terms.iter().map(|t| (t.ell, alpha)).collect();
        MeanScenario::new(Vec::new(), terms, exponents, None)
    } else {
        MeanScenario::new(terms, Vec::new(), BTreeMap::new(), None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(ell: usize, m: i32, value: f64) -> MeanTerm {
        MeanTerm { ell, m, value }
    }

    #[test]
    fn empty_scenario_is_zero() {
        let s = MeanScenario::empty();
        assert_eq!(s.mean_at(3, -2, 17), 0.0);
        assert!(!s.is_time_varying());
    }

    #[test]
    fn model_one_time_varying() {
        let s = scenario_preset(1, true, 0.5, 30).unwrap();
        assert_eq!(s.mean_at(0, 0, 4), 10.0);
        assert_eq!(s.mu1(), vec![term(0, 0, 5.0)]);
        assert!(s.mu0().is_empty());
        assert_eq!(s.alpha(0), 0.5);
        assert_eq!(s.alpha(1), 0.0);
    }

    #[test]
    fn model_two_static() {
        let s = scenario_preset(2, false, 0.0, 30).unwrap();
        assert_eq!(s.mean_at(0, 0, 1), 5.0);
        for t in [1, 50, 100] {
            assert!((s.mean_at(2, 0, t) + 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(s.mean_at(3, 0, 1), 0.0);
        assert!((s.mean_at(4, 0, 1) + 0.1).abs() < 1e-15);
        assert_eq!(s.mean_at(2, 1, 1), 0.0);
    }

    #[test]
    fn model_three_static_all_degrees() {
        let s = scenario_preset(3, false, 0.0, 4).unwrap();
        for l in 1..=4usize {
            let lf = l as f64;
            assert_eq!(s.mean_at(l, 0, 1), -2.0 / (lf * (lf + 1.0)));
        }
        assert_eq!(s.mean_at(5, 0, 1), 0.0);
    }

    #[test]
    fn invalid_model_id() {
        assert!(scenario_preset(4, false, 0.0, 3).is_err());
        assert!(scenario_preset(0, true, 1.0, 3).is_err());
    }

    #[test]
    fn top_exponent_sum_condition() {
        let alpha = BTreeMap::from([(2, 1.0)]);
        let err = MeanScenario::new(vec![], vec![term(2, 1, 1.0), term(2, -1, -1.0)], alpha.clone(), None);
        assert!(matches!(err, Err(Error::TopExponentSum { ell: 2 })));

        let ok = MeanScenario::new(vec![], vec![term(2, 1, 1.0), term(2, -1, -0.5)], alpha, None).unwrap();
        assert_eq!(ok.top_exponent_set(), vec![2]);

        // Lower exponents are unconstrained.
        let alpha = BTreeMap::from([(2, 1.0), (3, 0.5)]);
        assert!(MeanScenario::new(
            vec![],
            vec![term(2, 0, 1.0), term(3, 1, 1.0), term(3, -1, -1.0)],
            alpha,
            None
        )
        .is_ok());
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(MeanScenario::new(vec![term(1, 2, 1.0)], vec![], BTreeMap::new(), None).is_err());
        assert!(MeanScenario::new(vec![term(1, 0, 1.0), term(1, 0, 2.0)], vec![], BTreeMap::new(), None).is_err());
        assert!(MeanScenario::new(vec![], vec![], BTreeMap::from([(0, -1.0)]), None).is_err());
    }

    #[test]
    fn secondary_trend_is_negligible() {
        let alpha = 1.0;
        let eps = 1.0;
        let s = MeanScenario::new(
            vec![],
            vec![term(0, 0, 1.0)],
            BTreeMap::from([(0, alpha)]),
            Some(SecondaryTrend {
                amplitudes: vec![term(1, 0, 3.0)],
                epsilon: eps,
                log_power: 1.0,
            }),
        )
        .unwrap();
        assert_eq!(s.mean_at(1, 0, 1), 0.0);
        let ratio = |t: usize| s.mean_at(1, 0, t) / (t as f64).powf(alpha - eps / 2.0);
        let mut prev = f64::INFINITY;
        for t in [1_000usize, 10_000, 100_000, 1_000_000] {
            let r = ratio(t);
            assert!(r < prev);
            prev = r;
        }
        assert!(ratio(1_000_000) < 0.05);
    }

    #[test]
    fn json_round_trip_validates() {
        let s = scenario_preset(2, true, 0.5, 6).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        let back: MeanScenario = serde_json::from_str(&js).unwrap();
        assert_eq!(s, back);

        let bad = r#"{"mu1":[{"ell":1,"m":1,"value":1.0},{"ell":1,"m":-1,"value":-1.0}],"alpha":{"1":1.0}}"#;
        assert!(serde_json::from_str::<MeanScenario>(bad).is_err());
    }
}
