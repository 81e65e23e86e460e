use serde::{Deserialize, Serialize};

use super::lemmas::{aek7_ratio, lemma1_ratio, lemma2_value, Lemma1Reading};
use super::robin::{g_value, robin_check, RobinVerdict};
use super::MetricsError;
use crate::ca::FactoredCA;
use crate::numeric::{compare, exp_gamma, HPInterval, Verdict};

/// Band `e^γ < G(n) < e^γ (1 + c/(log n)^b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandParams {
    pub b: f64,
    pub c: f64,
}

impl Default for BandParams {
    fn default() -> Self {
        BandParams { b: 0.25, c: 1.0 }
    }
}

impl BandParams {
    pub fn new(b: f64, c: f64) -> Result<Self, MetricsError> {
        let p = BandParams { b, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), MetricsError> {
        if !(self.b > 0.0 && self.b < 0.5) {
            return Err(MetricsError::Domain(format!(
                "b = {} is outside (0, 1/2)",
                self.b
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(MetricsError::Domain(format!(
                "c = {} must be positive",
                self.c
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandClass {
    BelowBand,
    InBand,
    AboveBand,
    Undecided,
}

impl BandClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BandClass::BelowBand => "below",
            BandClass::InBand => "in",
            BandClass::AboveBand => "above",
            BandClass::Undecided => "undecided",
        }
    }
}

/// The band position of a `G` value, decided two ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandReading {
    /// `(G/e^γ - 1) (log n)^b`.
    pub normalized_excess: HPInterval,
    /// From the sign of the excess and its comparison with `c`.
    pub from_excess: BandClass,
    /// From comparing `G` with `e^γ` and `e^γ (1 + c/(log n)^b)`.
    pub direct: BandClass,
}

fn three_way(x: &HPInterval, lower: &HPInterval, upper: &HPInterval) -> BandClass {
    match compare(x, lower) {
        Verdict::Less => BandClass::BelowBand,
        Verdict::Overlap => BandClass::Undecided,
        Verdict::Greater => match compare(x, upper) {
            Verdict::Less => BandClass::InBand,
            Verdict::Greater => BandClass::AboveBand,
            Verdict::Overlap => BandClass::Undecided,
        },
    }
}

/// Classify an arbitrary `G` interval against the band at `log_n`.
pub fn classify_band(
    g: &HPInterval,
    log_n: &HPInterval,
    params: &BandParams,
) -> Result<BandReading, MetricsError> {
    params.validate()?;
    let w = g.precision().max(log_n.precision());
    let e_gamma = exp_gamma(w);
    let b = HPInterval::from_f64(params.b, w)?;
    let c = HPInterval::from_f64(params.c, w)?;
    let scale = b.mul(&log_n.ln()?).exp()?;
    let one = HPInterval::one(w);
    let normalized_excess = g.div(&e_gamma)?.sub(&one).mul(&scale);
    let from_excess = three_way(&normalized_excess, &HPInterval::zero(w), &c);
    let upper = e_gamma.mul(&one.add(&c.div(&scale)?));
    let direct = three_way(g, &e_gamma, &upper);
    Ok(BandReading {
        normalized_excess,
        from_excess,
        direct,
    })
}

/// Per-step verification row.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginReport {
    pub step_index: u64,
    pub g_value: HPInterval,
    pub robin: RobinVerdict,
    pub band_b: f64,
    pub band_c: f64,
    pub normalized_excess: HPInterval,
    pub band: BandClass,
    pub band_direct: BandClass,
    /// Needs the previous state.
    pub lemma1: Option<Lemma1Reading>,
    pub lemma2_value: HPInterval,
    pub aek7_ratio: HPInterval,
}

/// Robin verdict, band position and per-state diagnostics for `n`, with the
/// double-log ratio against `previous` when given. Overlapping band
/// comparisons are retried at doubled precision up to `precision_cap`.
pub fn band_margin(
    n: &FactoredCA,
    params: &BandParams,
    previous: Option<&FactoredCA>,
    precision_cap: u32,
) -> Result<MarginReport, MetricsError> {
    params.validate()?;
    let robin = robin_check(n, precision_cap)?;
    let mut precision = n.precision();
    let mut g = g_value(n, precision)?;
    let mut reading = classify_band(&g, n.log_n(), params)?;
    while (reading.from_excess == BandClass::Undecided || reading.direct == BandClass::Undecided)
        && precision < precision_cap
    {
        precision = (precision * 2).min(precision_cap);
        let refined = n.at_precision(precision)?;
        g = g_value(&refined, precision)?;
        reading = classify_band(&g, refined.log_n(), params)?;
    }
    let lemma1 = previous.map(|m| lemma1_ratio(m, n)).transpose()?;
    Ok(MarginReport {
        step_index: n.step_index(),
        g_value: g,
        robin,
        band_b: params.b,
        band_c: params.c,
        normalized_excess: reading.normalized_excess,
        band: reading.from_excess,
        band_direct: reading.direct,
        lemma1,
        lemma2_value: lemma2_value(n, params.b)?,
        aek7_ratio: aek7_ratio(n)?,
    })
}
