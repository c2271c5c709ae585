//! Scenario files and the sweep → CSV + report pipeline behind the CLI.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {"c1": 0.9, "c2": -0.36, "c3": 0.4, "channel": "PF",
//!  "filter_k": 0.2, "grid": 1001, "measures": ["QD", "GQD1"], "seed": 7}
//! ```
//!
//! `filter_k`, `grid` (default 1001), `measures` (default both) and `seed`
//! (default 0) are optional.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::channels::ChannelKind;
use crate::dynamics::{
    detect_events, match_kinks, sweep, transitions, EventReport, Measure, SweepSeries, TransitionReport,
};
use crate::error::{Error, Result};
use crate::filtering::FilterSetting;
use crate::states::BellDiagonalParams;

pub const DEFAULT_GRID: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureName {
    QD,
    GQD1,
}

impl MeasureName {
    fn measure(self) -> Measure {
        match self {
            Self::QD => Measure::Discord,
            Self::GQD1 => Measure::OneNormGqd,
        }
    }
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_measures() -> Vec<MeasureName> {
    vec![MeasureName::QD, MeasureName::GQD1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub channel: ChannelKind,
    #[serde(default)]
    pub filter_k: Option<f64>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_measures")]
    pub measures: Vec<MeasureName>,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    /// Parses and validates. Syntax errors carry their line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.filter()?;
        if self.grid < 2 {
            return Err(Error::Validation(format!("grid must be at least 2, got {}", self.grid)));
        }
        if self.measures.is_empty() {
            return Err(Error::Validation("measures must not be empty".into()));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<BellDiagonalParams> {
        BellDiagonalParams::new(self.c1, self.c2, self.c3)
    }

    pub fn filter(&self) -> Result<Option<FilterSetting>> {
        self.filter_k.map(FilterSetting::new).transpose()
    }
}

#[derive(Debug, Clone)]
pub struct ColumnEvents {
    pub column: String,
    pub events: EventReport,
    pub expected: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub csv: String,
    pub report: String,
    pub series: SweepSeries,
    pub transitions: TransitionReport,
    pub events: Vec<ColumnEvents>,
}

fn columns(scenario: &Scenario, filtered: bool) -> Vec<(Measure, bool)> {
    let mut out = Vec::new();
    for m in &scenario.measures {
        out.push((m.measure(), false));
        if filtered {
            out.push((m.measure(), true));
        }
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

pub fn run_sweep(scenario: &Scenario) -> Result<SweepOutput> {
    scenario.validate()?;
    let params = scenario.params()?;
    let filter = scenario.filter()?;
    let series = sweep(&params, scenario.channel, filter.as_ref(), scenario.grid)?;
    let report_t = transitions(scenario.channel, &params, filter.as_ref());
    let cols = columns(scenario, filter.is_some());

    let mut csv = String::from("p");
    for (m, f) in &cols {
        csv.push(',');
        csv.push_str(m.column(*f));
    }
    csv.push('\n');
    let data: Vec<&[f64]> = cols
        .iter()
        .map(|(m, f)| series.get(m.column(*f)).expect("sweep produces every column"))
        .collect();
    for (i, p) in series.grid.iter().enumerate() {
        write!(csv, "{p:.16e}").unwrap();
        for d in &data {
            write!(csv, ",{:.16e}", d[i]).unwrap();
        }
        csv.push('\n');
    }

    let events: Vec<ColumnEvents> = cols
        .iter()
        .zip(&data)
        .map(|((m, f), d)| ColumnEvents {
            column: m.column(*f).to_string(),
            events: detect_events(&series.grid, d),
            expected: report_t.expected_kinks(*m, *f),
        })
        .collect();

    let report = render_report(scenario, &params, &report_t, &series, &events);
    Ok(SweepOutput {
        csv,
        report,
        series,
        transitions: report_t,
        events,
    })
}

/// Analytic transitions alone, as printed by `transitions`.
pub fn render_transitions(scenario: &Scenario, params: &BellDiagonalParams, t: &TransitionReport) -> String {
    let mut r = String::new();
    let c = params.as_array();
    writeln!(r, "state c = ({}, {}, {}), class {:?}", c[0], c[1], c[2], t.class.label).unwrap();
    writeln!(
        r,
        "  flags: type1={} type2={} freezing_qd={}",
        t.class.type1, t.class.type2, t.class.freezing_qd
    )
    .unwrap();
    writeln!(r, "channel {}", scenario.channel).unwrap();
    writeln!(
        r,
        "unfiltered: p_sc={} p_sc1={} p_sc2={}",
        opt(t.p_sc),
        opt(t.p_sc1),
        opt(t.p_sc2)
    )
    .unwrap();
    if let (Some(q), Some(k)) = (t.q, scenario.filter_k) {
        writeln!(r, "filter k={k} (q={q:.6})").unwrap();
        if let Some(th) = t.q_thresholds {
            writeln!(
                r,
                "  q1={:.6} q2={:.6} q3={:.6} q4={:.6} q5={:.6}",
                th.q1, th.q2, th.q3, th.q4, th.q5
            )
            .unwrap();
        }
        let regime = t.regime.map_or("-", |g| g.name());
        if t.pk_sc.is_none() && t.pk_sc1.is_none() && t.pk_sc2.is_none() {
            writeln!(r, "  regime {regime}, no transitions").unwrap();
        } else {
            writeln!(
                r,
                "  regime {regime}: pk_sc={} pk_sc1={} pk_sc2={}",
                opt(t.pk_sc),
                opt(t.pk_sc1),
                opt(t.pk_sc2)
            )
            .unwrap();
        }
    }
    r
}

fn render_report(
    scenario: &Scenario,
    params: &BellDiagonalParams,
    t: &TransitionReport,
    series: &SweepSeries,
    events: &[ColumnEvents],
) -> String {
    let mut r = render_transitions(scenario, params, t);
    writeln!(r, "grid {} points, seed {}", scenario.grid, scenario.seed).unwrap();
    writeln!(
        r,
        "closed-form vs Kraus cross-check: max deviation {:.3e}",
        series.crosscheck_max_dev
    )
    .unwrap();
    for ce in events {
        let e = &ce.events;
        writeln!(r, "{}: monotone={}", ce.column, e.monotone).unwrap();
        for pl in &e.plateaus {
            writeln!(
                r,
                "  plateau [{:.4}, {:.4}] level {:.9}",
                pl.p_start, pl.p_end, pl.level
            )
            .unwrap();
        }
        let kinks: Vec<String> = e.kinks.iter().map(|k| format!("{k:.4}")).collect();
        writeln!(r, "  kinks [{}]", kinks.join(", ")).unwrap();
        for (a, d) in match_kinks(&ce.expected, &e.kinks) {
            match d {
                Some(d) => writeln!(r, "  analytic {a:.6} detected {d:.4} delta {:+.2e}", d - a).unwrap(),
                None => writeln!(r, "  analytic {a:.6} not detected").unwrap(),
            }
        }
    }
    r
}
