use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::session::{drive, is_log_checkpoint, StepView};
use super::table::{decimal, plain, Cell, Column, TableWriter};
use super::{
    CliError, Diagnostic, RunConfig, EXIT_OK, EXIT_ORACLE_MISMATCH, EXIT_UNDECIDED, EXIT_VIOLATES,
};
use crate::ca::{verify_step, CAStep, CaEngine, EngineConfig, FactoredCA};
use crate::metrics::{
    aek7_ratio, band_margin, g_value, growth_decomposition, lemma1_ratio, lemma2_value,
    lemma3_pair, robin_check, verify_lemma45, BandClass, BandParams, CheckMode, RobinStatus,
    ROBIN_THRESHOLD,
};
use crate::numeric::{compare, Decimal, HPInterval, NumericError, Verdict};
use crate::oracle::{ca_with_table, is_subsequence, SigmaTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violates,
    Undecided,
    /// First 1-based index at which the generator and the oracle differ.
    OracleMismatch {
        index: usize,
    },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Ok => EXIT_OK,
            Outcome::Violates => EXIT_VIOLATES,
            Outcome::Undecided => EXIT_UNDECIDED,
            Outcome::OracleMismatch { .. } => EXIT_ORACLE_MISMATCH,
        }
    }
}

fn keep_max(slot: &mut Option<HPInterval>, x: HPInterval) {
    if slot.as_ref().is_none_or(|cur| x.hi() > cur.hi()) {
        *slot = Some(x);
    }
}

fn keep_min(slot: &mut Option<HPInterval>, x: HPInterval) {
    if slot.as_ref().is_none_or(|cur| x.lo() < cur.lo()) {
        *slot = Some(x);
    }
}

/// `log n > 1`, so that `log log n` is positive.
fn has_loglog(state: &FactoredCA) -> bool {
    compare(state.log_n(), &HPInterval::one(state.precision())) == Verdict::Greater
}

fn exceeds_threshold(state: &FactoredCA) -> bool {
    state
        .value_if_at_most(&BigUint::from(ROBIN_THRESHOLD))
        .is_none()
}

/// `1`, `0`, or empty when the comparison is undecided.
fn flag(v: Verdict, good: Verdict) -> Cell {
    match v {
        Verdict::Overlap => Cell::Empty,
        v => Cell::from(v == good),
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn summary_line(key: &str, value: impl std::fmt::Display) {
    eprintln!("{key}: {value}");
}

fn show(x: &Option<HPInterval>) -> String {
    x.as_ref().map_or_else(
        || "n/a".to_string(),
        |x| {
            let d = Decimal::from_interval(x);
            format!("{} +- {}", d.value, d.bound)
        },
    )
}

fn log_n_above(state: &FactoredCA, bound: i64) -> bool {
    compare(
        state.log_n(),
        &HPInterval::from_i64(bound, state.precision()),
    ) == Verdict::Greater
}

static GENERATE_COLUMNS: &[Column] = &[
    plain("step_index"),
    plain("quotient_kind"),
    plain("quotient_primes"),
    plain("prior_exponents"),
    plain("tie"),
    decimal("log10_n"),
    decimal("loglog_n"),
    decimal("epsilon"),
];

/// One row per step: the quotient, `log10 n`, `log log n` and the critical
/// epsilon that triggered it.
pub fn cmd_generate(config: &RunConfig) -> Result<Outcome, CliError> {
    drive(config, "generate", GENERATE_COLUMNS, (), |_, view, out| {
        let s = view.step;
        let loglog = has_loglog(view.state)
            .then(|| view.state.log_n().ln())
            .transpose()
            .map_err(crate::ca::EngineError::from)?;
        out.row(vec![
            s.step_index.into(),
            s.kind.as_str().into(),
            join(s.quotient.iter().map(|q| q.prime)).into(),
            join(s.quotient.iter().map(|q| q.prior_exponent)).into(),
            s.tie.into(),
            view.state.log10_n().into(),
            loglog.into(),
            (&s.epsilon).into(),
        ])?;
        Ok(())
    })?;
    Ok(Outcome::Ok)
}

static VERIFY_COLUMNS: &[Column] = &[
    plain("step_index"),
    plain("quotient_primes"),
    plain("robin"),
    plain("precision"),
    decimal("g"),
    decimal("margin"),
    plain("b"),
    plain("c"),
    decimal("normalized_excess"),
    plain("band"),
    plain("band_direct"),
    decimal("lemma1_ratio"),
    decimal("lemma2"),
    decimal("aek7"),
    plain("ratio_case"),
    plain("ratio_mode"),
    plain("ratio_holds"),
    decimal("growth_product"),
    plain("growth_consistent"),
    plain("step_ok"),
];

#[derive(Debug, Default, Serialize, Deserialize)]
struct VerifyAcc {
    satisfies: u64,
    violates: u64,
    boundary: u64,
    undecided: u64,
    below: u64,
    in_band: u64,
    above: u64,
    band_undecided: u64,
    band_disagreements: u64,
    law_failures: u64,
    exact_checks: u64,
    growth_mismatches: u64,
    step_failures: u64,
    max_excess: Option<HPInterval>,
    max_excess_step: u64,
    growth_sup: Option<HPInterval>,
}

impl VerifyAcc {
    fn report(&self) {
        summary_line("satisfies", self.satisfies);
        summary_line("violates", self.violates);
        summary_line("boundary", self.boundary);
        summary_line("undecided", self.undecided);
        summary_line(
            "band below/in/above/undecided",
            format!(
                "{}/{}/{}/{}",
                self.below, self.in_band, self.above, self.band_undecided
            ),
        );
        summary_line("band disagreements", self.band_disagreements);
        summary_line("ratio law failures", self.law_failures);
        summary_line("ratio law exact checks", self.exact_checks);
        summary_line("growth mismatches", self.growth_mismatches);
        summary_line("malformed quotients", self.step_failures);
        summary_line(
            "max normalized excess (n > 5040)",
            format!(
                "{} at step {}",
                show(&self.max_excess),
                self.max_excess_step
            ),
        );
        summary_line(
            "sup (G(n)/G(m) - 1) log n (n > 5040)",
            show(&self.growth_sup),
        );
    }
}

fn verify_row(
    acc: &mut VerifyAcc,
    view: StepView<'_>,
    out: &mut TableWriter,
    config: &RunConfig,
    prev_g: &mut Option<(u64, HPInterval)>,
) -> Result<(), CliError> {
    let (step, n) = (view.step, view.state);
    let one = FactoredCA::one(n.precision());
    let m = view.previous.unwrap_or(&one);
    let params = BandParams::new(config.band_b, config.band_c)?;
    let cap = config.precision_cap_bits;

    let report = if has_loglog(n) {
        let prev = view.previous.filter(|m| has_loglog(m));
        Some(band_margin(n, &params, prev, cap)?)
    } else {
        None
    };
    let mut robin = match &report {
        Some(r) => r.robin.clone(),
        None => robin_check(n, cap)?,
    };
    if robin.status == RobinStatus::Violates && robin.precision < cap {
        robin = robin_check(
            &n.at_precision(cap).map_err(crate::ca::EngineError::from)?,
            cap,
        )?;
    }
    match robin.status {
        RobinStatus::Satisfies => acc.satisfies += 1,
        RobinStatus::Violates => acc.violates += 1,
        RobinStatus::Boundary => acc.boundary += 1,
        RobinStatus::Undecided => acc.undecided += 1,
    }
    if let Some(r) = &report {
        match r.band {
            BandClass::BelowBand => acc.below += 1,
            BandClass::InBand => acc.in_band += 1,
            BandClass::AboveBand => acc.above += 1,
            BandClass::Undecided => acc.band_undecided += 1,
        }
        if r.band != r.band_direct {
            acc.band_disagreements += 1;
        }
        if exceeds_threshold(n)
            && acc
                .max_excess
                .as_ref()
                .is_none_or(|c| r.normalized_excess.hi() > c.hi())
        {
            acc.max_excess = Some(r.normalized_excess.clone());
            acc.max_excess_step = step.step_index;
        }
    }

    let law = verify_lemma45(step, m, n, config.exact_mode_bound)?;
    if !law.holds {
        acc.law_failures += 1;
    }
    if law.mode == CheckMode::Exact {
        acc.exact_checks += 1;
    }

    let (growth, consistent) = if has_loglog(m) {
        let gr = growth_decomposition(m, n, Some(step))?;
        let g_m = match prev_g.take() {
            Some((i, g)) if i == m.step_index() => g,
            _ => g_value(m, m.precision())?,
        };
        let g_n = match &report {
            Some(r) => r.g_value.clone(),
            None => g_value(n, n.precision())?,
        };
        let direct = g_n.div(&g_m).map_err(crate::ca::EngineError::from)?;
        let ok = direct.intersects(&gr.product);
        if !ok {
            acc.growth_mismatches += 1;
        }
        if exceeds_threshold(n) {
            let scaled = gr
                .product
                .sub(&HPInterval::one(n.precision()))
                .mul(n.log_n());
            keep_max(&mut acc.growth_sup, scaled);
        }
        (Some(gr.product), Some(ok))
    } else {
        (None, None)
    };

    *prev_g = report.as_ref().map(|r| (n.step_index(), r.g_value.clone()));

    let step_ok = verify_step(step);
    if !step_ok {
        acc.step_failures += 1;
    }

    out.row(vec![
        step.step_index.into(),
        join(step.primes().iter()).into(),
        robin.status.as_str().into(),
        u64::from(robin.precision).into(),
        robin.g_value.clone().into(),
        robin.margin.clone().into(),
        config.band_b.to_string().into(),
        config.band_c.to_string().into(),
        report.as_ref().map(|r| r.normalized_excess.clone()).into(),
        report.as_ref().map(|r| r.band.as_str()).into(),
        report.as_ref().map(|r| r.band_direct.as_str()).into(),
        report
            .as_ref()
            .and_then(|r| r.lemma1.as_ref())
            .map(|l| l.ratio.clone())
            .into(),
        report.as_ref().map(|r| r.lemma2_value.clone()).into(),
        report.as_ref().map(|r| r.aek7_ratio.clone()).into(),
        format!("{:?}", law.case.kind).into(),
        match law.mode {
            CheckMode::Exact => "exact",
            CheckMode::Interval => "interval",
        }
        .into(),
        law.holds.into(),
        growth.into(),
        consistent.into(),
        step_ok.into(),
    ])?;
    Ok(())
}

/// Certified Robin verdict, band position and ratio-law check per step.
/// Totals go to stderr. A violation is confirmed at the precision cap
/// before it is reported.
pub fn cmd_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    // G of the previous state, reused for the growth check
    let mut prev_g = None;
    let acc = drive(
        config,
        "verify",
        VERIFY_COLUMNS,
        VerifyAcc::default(),
        |acc, view, out| verify_row(acc, view, out, config, &mut prev_g),
    )?;
    acc.report();
    Ok(if acc.violates > 0 {
        Outcome::Violates
    } else if acc.undecided > 0 {
        Outcome::Undecided
    } else {
        Outcome::Ok
    })
}

static LEMMA1_COLUMNS: &[Column] = &[
    plain("step_index"),
    decimal("log_n"),
    decimal("ratio"),
    decimal("deviation"),
    decimal("envelope"),
    decimal("envelope2"),
    plain("within_envelope_1pct"),
    plain("within_envelope2"),
];

static LEMMA2_COLUMNS: &[Column] = &[
    plain("step_index"),
    decimal("log_n"),
    plain("p_max"),
    decimal("value"),
    decimal("window_max"),
    decimal("envelope"),
];

static LEMMA3_COLUMNS: &[Column] = &[
    plain("step_index"),
    plain("p_max"),
    plain("exponent"),
    decimal("damped"),
    decimal("plain"),
    plain("ratio"),
    decimal("ratio_interval"),
    plain("ratio_ok"),
    decimal("bound"),
    plain("bound_ok"),
];

static AEK7_COLUMNS: &[Column] = &[
    plain("step_index"),
    decimal("log_n"),
    plain("p_max"),
    decimal("ratio"),
];

static GROWTH_COLUMNS: &[Column] = &[
    plain("step_index"),
    decimal("log_n"),
    decimal("abundancy_ratio"),
    decimal("loglog_ratio"),
    decimal("product"),
    decimal("scaled_excess"),
];

#[derive(Debug, Default, Serialize, Deserialize)]
struct DiagAcc {
    evaluated: u64,
    /// Steps with `log n > 100` whose deviation exceeds `1.01 x envelope`.
    envelope_breaches: u64,
    envelope2_breaches: u64,
    window_max: Option<HPInterval>,
    previous_window_max: Option<HPInterval>,
    window_increases: u64,
    ratio_failures: u64,
    bound_failures: u64,
    aek7_min: Option<HPInterval>,
    aek7_max: Option<HPInterval>,
    decade_sum: Option<HPInterval>,
    decade_count: u64,
    growth_sup: Option<HPInterval>,
}

fn diag_row(
    acc: &mut DiagAcc,
    view: StepView<'_>,
    out: &mut TableWriter,
    config: &RunConfig,
) -> Result<(), CliError> {
    let n = view.state;
    let idx = view.step.step_index;
    let w = n.precision();
    let emit = is_log_checkpoint(idx) || view.last;
    let num = |e: NumericError| CliError::Engine(e.into());
    match config.diagnostic {
        Diagnostic::Lemma1 => {
            let Some(m) = view.previous.filter(|m| has_loglog(m)) else {
                if emit {
                    out.row(vec![
                        idx.into(),
                        n.log_n().into(),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                    ])?;
                }
                return Ok(());
            };
            let r = lemma1_ratio(m, n)?;
            acc.evaluated += 1;
            let scaled = r.envelope.mul(
                &HPInterval::from_ratio(&BigInt::from(101), &BigInt::from(100), w).map_err(num)?,
            );
            let v1 = compare(&r.deviation, &scaled);
            let v2 = compare(&r.deviation, &r.envelope2);
            if log_n_above(n, 100) && v1 == Verdict::Greater {
                acc.envelope_breaches += 1;
            }
            if v2 == Verdict::Greater {
                acc.envelope2_breaches += 1;
            }
            if emit {
                out.row(vec![
                    idx.into(),
                    n.log_n().into(),
                    r.ratio.into(),
                    r.deviation.into(),
                    r.envelope.into(),
                    r.envelope2.into(),
                    flag(v1, Verdict::Less),
                    flag(v2, Verdict::Less),
                ])?;
            }
        }
        Diagnostic::Lemma2 => {
            let value = lemma2_value(n, config.band_b)?;
            keep_max(&mut acc.window_max, value.clone());
            if emit {
                let window = acc.window_max.take();
                if let (Some(prev), Some(cur)) = (&acc.previous_window_max, &window) {
                    if compare(cur, prev) == Verdict::Greater {
                        acc.window_increases += 1;
                    }
                }
                let b1 = HPInterval::from_f64(config.band_b - 1.0, w).map_err(num)?;
                let envelope = b1.mul(&n.log_n().ln().map_err(num)?).exp().map_err(num)?;
                out.row(vec![
                    idx.into(),
                    n.log_n().into(),
                    n.largest_prime().into(),
                    value.into(),
                    window.clone().into(),
                    envelope.into(),
                ])?;
                acc.previous_window_max = window;
            }
        }
        Diagnostic::Lemma3 => {
            let pair = lemma3_pair(n)?;
            let ratio_interval = pair.damped.div(&pair.plain).map_err(num)?;
            let ratio_ok = ratio_interval.contains_rational(&pair.exact_ratio);
            let bound = BigRational::new(BigInt::from(1), BigInt::from(pair.prime + 1));
            let bound_ok = pair.exact_ratio <= bound;
            acc.evaluated += 1;
            acc.ratio_failures += u64::from(!ratio_ok);
            acc.bound_failures += u64::from(!bound_ok);
            if emit {
                out.row(vec![
                    idx.into(),
                    pair.prime.into(),
                    u64::from(pair.exponent).into(),
                    pair.damped.into(),
                    pair.plain.into(),
                    pair.exact_ratio.to_string().into(),
                    ratio_interval.into(),
                    ratio_ok.into(),
                    HPInterval::from_rational(&bound, w).into(),
                    bound_ok.into(),
                ])?;
            }
        }
        Diagnostic::Aek7 => {
            let ratio = aek7_ratio(n)?;
            if log_n_above(n, 50) {
                keep_min(&mut acc.aek7_min, ratio.clone());
                keep_max(&mut acc.aek7_max, ratio.clone());
            }
            if idx > config.steps / 10 {
                acc.decade_sum = Some(match acc.decade_sum.take() {
                    Some(s) => s.add(&ratio),
                    None => ratio.clone(),
                });
                acc.decade_count += 1;
            }
            if emit {
                out.row(vec![
                    idx.into(),
                    n.log_n().into(),
                    n.largest_prime().into(),
                    ratio.into(),
                ])?;
            }
        }
        Diagnostic::Growth => {
            let Some(m) = view.previous.filter(|m| has_loglog(m)) else {
                if emit {
                    out.row(vec![
                        idx.into(),
                        n.log_n().into(),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                    ])?;
                }
                return Ok(());
            };
            let gr = growth_decomposition(m, n, Some(view.step))?;
            let scaled = gr.product.sub(&HPInterval::one(w)).mul(n.log_n());
            if exceeds_threshold(n) {
                keep_max(&mut acc.growth_sup, scaled.clone());
            }
            if emit {
                out.row(vec![
                    idx.into(),
                    n.log_n().into(),
                    gr.abundancy_ratio.into(),
                    gr.loglog_ratio.into(),
                    gr.product.into(),
                    scaled.into(),
                ])?;
            }
        }
    }
    Ok(())
}

impl DiagAcc {
    fn report(&self, which: Diagnostic) -> Result<(), CliError> {
        match which {
            Diagnostic::Lemma1 => {
                summary_line("steps evaluated", self.evaluated);
                summary_line(
                    "deviation > 1.01 envelope (log n > 100)",
                    self.envelope_breaches,
                );
                summary_line("deviation > envelope2", self.envelope2_breaches);
            }
            Diagnostic::Lemma2 => {
                summary_line("window maximum increases", self.window_increases);
            }
            Diagnostic::Lemma3 => {
                summary_line("steps evaluated", self.evaluated);
                summary_line("ratio mismatches", self.ratio_failures);
                summary_line("bound failures", self.bound_failures);
            }
            Diagnostic::Aek7 => {
                summary_line("min (log n > 50)", show(&self.aek7_min));
                summary_line("max (log n > 50)", show(&self.aek7_max));
                let mean = match &self.decade_sum {
                    Some(s) if self.decade_count > 0 => Some(
                        s.div_int(
                            i64::try_from(self.decade_count)
                                .map_err(|_| CliError::Config("step count too large".into()))?,
                        ),
                    ),
                    _ => None,
                };
                summary_line("final decade mean", show(&mean));
            }
            Diagnostic::Growth => {
                summary_line(
                    "sup (G(n)/G(m) - 1) log n (n > 5040)",
                    show(&self.growth_sup),
                );
            }
        }
        Ok(())
    }
}

/// One diagnostic series, with rows at steps `1, 2, 5, 10, ...` and at the
/// last step. Every step still feeds the running checks whose totals go to
/// stderr.
pub fn cmd_diagnostics(config: &RunConfig) -> Result<Outcome, CliError> {
    let columns = match config.diagnostic {
        Diagnostic::Lemma1 => LEMMA1_COLUMNS,
        Diagnostic::Lemma2 => LEMMA2_COLUMNS,
        Diagnostic::Lemma3 => LEMMA3_COLUMNS,
        Diagnostic::Aek7 => AEK7_COLUMNS,
        Diagnostic::Growth => GROWTH_COLUMNS,
    };
    let command = format!("diagnostics-{}", config.diagnostic.as_str());
    let acc = drive(
        config,
        &command,
        columns,
        DiagAcc::default(),
        |acc, view, out| diag_row(acc, view, out, config),
    )?;
    acc.report(config.diagnostic)?;
    Ok(Outcome::Ok)
}

static ORACLE_COLUMNS: &[Column] = &[plain("list"), plain("index"), plain("value")];

/// Generator values up to `bound`.
pub fn generated_up_to(bound: u64, config: EngineConfig) -> Result<Vec<u64>, CliError> {
    let mut engine = CaEngine::new(config)?;
    let limit = BigUint::from(bound);
    let mut out = Vec::new();
    loop {
        let _: CAStep = engine.next_step()?;
        match engine.state().value_if_at_most(&limit) {
            Some(v) => out.push(u64::try_from(v).expect("bounded by a u64")),
            None => return Ok(out),
        }
    }
}

/// Position of the first difference, 1-based.
fn first_difference(a: &[u64], b: &[u64]) -> Option<usize> {
    let common = a.iter().zip(b).position(|(x, y)| x != y);
    match common {
        Some(i) => Some(i + 1),
        None if a.len() != b.len() => Some(a.len().min(b.len()) + 1),
        None => None,
    }
}

/// Brute-force colossally abundant and superabundant lists up to
/// `oracle_bound`, compared with the generator.
pub fn cmd_oracle(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let bound = config.oracle_bound;
    let table = SigmaTable::new(2 * bound)?;
    let ca = ca_with_table(&table, bound)?;
    let sa = table.superabundant(bound)?;
    let generated = generated_up_to(
        bound,
        EngineConfig {
            precision: config.precision_bits,
            precision_cap: config.precision_cap_bits,
        },
    )?;
    let mut out = TableWriter::create(
        config.output_path.as_deref(),
        config.output_format,
        ORACLE_COLUMNS,
    )?;
    for (name, list) in [("ca", &ca), ("sa", &sa), ("generated", &generated)] {
        for (i, &v) in list.iter().enumerate() {
            out.row(vec![name.into(), (i as u64 + 1).into(), v.into()])?;
        }
    }
    out.flush()?;
    summary_line("ca", ca.len());
    summary_line("sa", sa.len());
    summary_line("generated", generated.len());
    let nested = is_subsequence(&ca, &sa);
    summary_line("ca within sa", nested);
    if let Some(index) = first_difference(&generated, &ca) {
        return Ok(Outcome::OracleMismatch { index });
    }
    if !nested {
        let index = ca.iter().position(|x| !sa.contains(x)).map_or(1, |i| i + 1);
        return Ok(Outcome::OracleMismatch { index });
    }
    Ok(Outcome::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_positions() {
        assert_eq!(first_difference(&[2, 6, 12], &[2, 6, 12]), None);
        assert_eq!(first_difference(&[2, 6, 12], &[2, 6, 60]), Some(3));
        assert_eq!(first_difference(&[2, 6], &[2, 6, 12]), Some(3));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::Ok.exit_code(), 0);
        assert_eq!(Outcome::Violates.exit_code(), 2);
        assert_eq!(Outcome::Undecided.exit_code(), 3);
        assert_eq!(Outcome::OracleMismatch { index: 1 }.exit_code(), 4);
    }
}
