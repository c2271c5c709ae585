//! State classification, analytic transition points, p-sweeps and empirical
//! plateau/kink detection.
//!
//! Everything analytic is computed in the phase-flip frame, where the
//! channel leaves `c₃` alone. Bit- and bit-phase-flip inputs are permuted
//! into that frame first (see [`ChannelKind::phase_flip_frame`]).

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{apply_two_sided, evolve_params, ChannelKind, KrausChannel};
use crate::error::{Error, Result};
use crate::filtering::{apply_filter_along, FilterSetting};
use crate::measures::{discord_bd, discord_filtered, mutual_information, one_norm_gqd_bd, one_norm_gqd_filtered};
use crate::states::{bell_diagonal_to_matrix, matrix_to_bell_diagonal, order_correlations, BellDiagonalParams};

/// Tolerance for the freezing condition `c₋ = -c₊c₃`.
pub const FREEZING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StateLabel {
    Type1,
    Type2,
    FreezingQD,
    Other,
}

/// Classification flags. A state can satisfy several definitions at once;
/// `label` picks FreezingQD, then Type1, then Type2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateClass {
    pub label: StateLabel,
    pub type1: bool,
    pub type2: bool,
    pub freezing_qd: bool,
}

pub fn classify(params: &BellDiagonalParams) -> StateClass {
    let o = order_correlations(params);
    let (p, m, z) = (o.c_plus.abs(), o.c_minus.abs(), o.c3.abs());
    let type1 = p > z && z > m;
    let type2 = m > z;
    let freezing_qd = p >= z && (o.c_minus + o.c_plus * o.c3).abs() <= FREEZING_TOL;
    let label = if freezing_qd {
        StateLabel::FreezingQD
    } else if type1 {
        StateLabel::Type1
    } else if type2 {
        StateLabel::Type2
    } else {
        StateLabel::Other
    };
    StateClass {
        label,
        type1,
        type2,
        freezing_qd,
    }
}

/// Shape of the filtered one-norm discord as a function of p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// Frozen from p = 0, one sudden change.
    G1,
    /// Two sudden changes around a frozen interval.
    G2,
    /// One sudden change, no freezing.
    G3,
    /// Monotonic decay.
    G4,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Self::G1 => "g1",
            Self::G2 => "g2",
            Self::G3 => "g3",
            Self::G4 => "g4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QThresholds {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
    pub q5: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    pub class: StateClass,
    /// Where `|c₊(p)|` meets `|c₃|`: the discord kink, and the end of
    /// one-norm freezing for type 1 states.
    pub p_sc: Option<f64>,
    pub p_sc1: Option<f64>,
    pub p_sc2: Option<f64>,
    pub q: Option<f64>,
    pub pk_sc: Option<f64>,
    pub pk_sc1: Option<f64>,
    pub pk_sc2: Option<f64>,
    pub q_thresholds: Option<QThresholds>,
    pub regime: Option<Regime>,
}

fn in_unit(p: f64) -> Option<f64> {
    (p.is_finite() && (0.0..=1.0).contains(&p)).then_some(p)
}

/// `1 - (num/den)^(1/root)`, absent when the radicand is negative or the
/// crossing falls outside [0, 1].
fn crossing(num: f64, den: f64, root: f64) -> Option<f64> {
    if den <= 0.0 || num < 0.0 {
        return None;
    }
    in_unit(1.0 - (num / den).powf(1.0 / root))
}

pub fn unfiltered_transitions(params: &BellDiagonalParams) -> TransitionReport {
    let class = classify(params);
    let o = order_correlations(params);
    let (p, m, z) = (o.c_plus.abs(), o.c_minus.abs(), o.c3.abs());
    let p_sc = if p >= z { crossing(z, p, 2.0) } else { None };
    let (p_sc1, p_sc2) = if class.type2 {
        (crossing(z, m, 2.0), p_sc)
    } else {
        (None, None)
    };
    TransitionReport {
        class,
        p_sc,
        p_sc1,
        p_sc2,
        q: None,
        pk_sc: None,
        pk_sc1: None,
        pk_sc2: None,
        q_thresholds: None,
        regime: None,
    }
}

pub fn q_thresholds(params: &BellDiagonalParams) -> Option<QThresholds> {
    let o = order_correlations(params);
    let (p2, m2, z2) = (o.c_plus * o.c_plus, o.c_minus * o.c_minus, o.c3 * o.c3);
    if p2 == 0.0 {
        return None;
    }
    let q3 = (p2 - z2) / p2;
    let q4 = z2 * (p2 - m2) / p2;
    let first = if m2 < 1.0 { (z2 - m2) / (1.0 - m2) } else { q3 };
    Some(QThresholds {
        q1: first.min(q3),
        q2: q4.min(q3),
        q3,
        q4,
        q5: q3,
    })
}

/// Regime of the filtered one-norm discord. Degenerate boundaries, where
/// two sudden changes merge or a crossing sits at p = 0, go to the regime
/// with fewer transitions.
pub fn regime(params: &BellDiagonalParams, q: f64) -> Regime {
    let class = classify(params);
    let Some(t) = q_thresholds(params) else {
        return Regime::G4;
    };
    let o = order_correlations(params);
    if o.c3.abs() >= o.c_plus.abs() || q >= t.q3 {
        return Regime::G4;
    }
    if class.type2 {
        if q < t.q4 {
            Regime::G2
        } else {
            Regime::G3
        }
    } else if q <= t.q1 {
        Regime::G1
    } else if q < t.q2 {
        Regime::G2
    } else {
        Regime::G3
    }
}

pub fn filtered_transitions(params: &BellDiagonalParams, setting: &FilterSetting) -> TransitionReport {
    let q = setting.q();
    let o = order_correlations(params);
    let (p2, m2, z2) = (o.c_plus * o.c_plus, o.c_minus * o.c_minus, o.c3 * o.c3);
    let to_c3 = crossing(z2 - q, (1.0 - q) * m2, 4.0);
    let past_c_plus = crossing(z2, (1.0 - q) * p2, 4.0);
    let regime = regime(params, q);
    let (pk_sc, pk_sc1, pk_sc2) = match regime {
        Regime::G1 | Regime::G3 => (past_c_plus, None, None),
        Regime::G2 => (None, to_c3, past_c_plus),
        Regime::G4 => (None, None, None),
    };
    TransitionReport {
        q: Some(q),
        pk_sc,
        pk_sc1,
        pk_sc2,
        q_thresholds: q_thresholds(params),
        regime: Some(regime),
        ..unfiltered_transitions(params)
    }
}

/// Transitions for any channel, with an optional filter aligned with the
/// axis the channel preserves.
pub fn transitions(
    kind: ChannelKind,
    params: &BellDiagonalParams,
    setting: Option<&FilterSetting>,
) -> TransitionReport {
    let framed = params.permuted(kind.phase_flip_frame());
    match setting {
        Some(s) => filtered_transitions(&framed, s),
        None => unfiltered_transitions(&framed),
    }
}

/// Measures a sweep can produce; the filtered variants carry a `_k` suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Measure {
    Discord,
    MutualInformation,
    ClassicalCorrelation,
    OneNormGqd,
}

impl Measure {
    pub fn column(self, filtered: bool) -> &'static str {
        match (self, filtered) {
            (Self::Discord, false) => "QD",
            (Self::Discord, true) => "QD_k",
            (Self::MutualInformation, false) => "I",
            (Self::MutualInformation, true) => "I_k",
            (Self::ClassicalCorrelation, false) => "C",
            (Self::ClassicalCorrelation, true) => "C_k",
            (Self::OneNormGqd, false) => "GQD1",
            (Self::OneNormGqd, true) => "GQD1_k",
        }
    }
}

impl TransitionReport {
    /// Analytic kink locations expected in the given sweep column, strictly
    /// inside (0, 1) where a detector can see them.
    pub fn expected_kinks(&self, measure: Measure, filtered: bool) -> Vec<f64> {
        let raw = match (measure, filtered) {
            (Measure::Discord | Measure::ClassicalCorrelation, _) => vec![self.p_sc],
            (Measure::MutualInformation, _) => vec![],
            (Measure::OneNormGqd, false) if self.class.type2 => vec![self.p_sc1, self.p_sc2],
            (Measure::OneNormGqd, false) => vec![self.p_sc],
            (Measure::OneNormGqd, true) => vec![self.pk_sc, self.pk_sc1, self.pk_sc2],
        };
        let mut out: Vec<f64> = raw.into_iter().flatten().filter(|p| *p > 0.0 && *p < 1.0).collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedSeries {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSeries {
    pub grid: Vec<f64>,
    pub series: Vec<NamedSeries>,
    /// Largest disagreement between the closed-form flow and explicit Kraus
    /// evaluation: correlators, and the filtered mutual information when a
    /// filter is present.
    pub crosscheck_max_dev: f64,
}

impl SweepSeries {
    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|s| s.name == name).map(|s| s.values.as_slice())
    }
}

pub fn uniform_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { 1.0 } else { i as f64 / last })
        .collect()
}

struct PointValues {
    plain: [f64; 4],
    filtered: Option<[f64; 4]>,
    deviation: f64,
}

fn evaluate_point(
    kind: ChannelKind,
    params: &BellDiagonalParams,
    setting: Option<&FilterSetting>,
    p: f64,
) -> Result<PointValues> {
    let framed = params.permuted(kind.phase_flip_frame());
    let evolved = evolve_params(ChannelKind::PhaseFlip, p, &framed)?;
    let q = discord_bd(&evolved);
    let g = one_norm_gqd_bd(&evolved);
    let plain = [q.discord, q.mutual_information, q.classical_correlation, g.value];

    // Direct route in the original frame.
    let channel = KrausChannel::new(kind, p)?;
    let direct = apply_two_sided(&channel, &bell_diagonal_to_matrix(params));
    let decoded = matrix_to_bell_diagonal(&direct)?;
    let closed = evolve_params(kind, p, params)?;
    let mut deviation = decoded
        .as_array()
        .iter()
        .zip(closed.as_array())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));

    let filtered = match setting {
        Some(s) => {
            let qk = discord_filtered(s, &evolved);
            let gk = one_norm_gqd_filtered(s, &order_correlations(&evolved));
            let numeric = mutual_information(&apply_filter_along(s, kind.pauli_axis(), &direct)?)?;
            deviation = deviation.max((numeric - qk.mutual_information).abs());
            Some([qk.discord, qk.mutual_information, qk.classical_correlation, gk.value])
        }
        None => None,
    };
    Ok(PointValues {
        plain,
        filtered,
        deviation,
    })
}

const SWEEP_MEASURES: [Measure; 4] = [
    Measure::Discord,
    Measure::MutualInformation,
    Measure::ClassicalCorrelation,
    Measure::OneNormGqd,
];

/// Closed-form measures on a uniform grid of `grid_size` points in [0, 1].
pub fn sweep(
    params: &BellDiagonalParams,
    kind: ChannelKind,
    setting: Option<&FilterSetting>,
    grid_size: usize,
) -> Result<SweepSeries> {
    if grid_size < 2 {
        return Err(Error::Validation(format!(
            "grid must have at least 2 points, got {grid_size}"
        )));
    }
    let grid = uniform_grid(grid_size);
    let points = grid
        .par_iter()
        .map(|&p| evaluate_point(kind, params, setting, p))
        .collect::<Result<Vec<_>>>()?;

    let mut series = Vec::new();
    for (j, m) in SWEEP_MEASURES.iter().enumerate() {
        series.push(NamedSeries {
            name: m.column(false).to_string(),
            values: points.iter().map(|v| v.plain[j]).collect(),
        });
    }
    if setting.is_some() {
        for (j, m) in SWEEP_MEASURES.iter().enumerate() {
            series.push(NamedSeries {
                name: m.column(true).to_string(),
                values: points.iter().map(|v| v.filtered.map_or(f64::NAN, |f| f[j])).collect(),
            });
        }
    }
    let crosscheck_max_dev = points.iter().fold(0.0f64, |m, v| m.max(v.deviation));
    Ok(SweepSeries {
        grid,
        series,
        crosscheck_max_dev,
    })
}

/// Slope magnitude, relative to the series scale, below which a step
/// counts as flat.
pub const EPS_FLAT: f64 = 1e-6;
/// Kink threshold as a multiple of the median |second difference|.
pub const KINK_MEDIAN_FACTOR: f64 = 10.0;
/// Floor on the kink threshold, relative to scale.
pub const KINK_FLOOR: f64 = 1e-6;
/// A kink must stand this many times above the curvature three steps away
/// on its quieter side.
pub const KINK_BACKGROUND_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plateau {
    pub p_start: f64,
    pub p_end: f64,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventReport {
    pub plateaus: Vec<Plateau>,
    pub kinks: Vec<f64>,
    pub monotone: bool,
}

impl EventReport {
    /// Total length of all detected plateaus.
    pub fn freezing_duration(&self) -> f64 {
        self.plateaus.iter().map(|p| p.p_end - p.p_start).sum()
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Plateaus and kinks of `values` sampled on the uniform `grid`.
///
/// A step is flat when `|Δv|/Δp ≤ EPS_FLAT·scale`, with scale the largest
/// |value|. A plateau is a maximal run of at least two flat steps whose
/// total spread also stays within that bound. A kink is a local maximum of
/// the |second difference| whose three-sample mass clears both the
/// median-based threshold and the quieter of the two backgrounds three steps
/// away; its location is the weighted centroid of those samples.
pub fn detect_events(grid: &[f64], values: &[f64]) -> EventReport {
    assert_eq!(grid.len(), values.len(), "grid and series lengths differ");
    let n = values.len();
    if n < 3 {
        return EventReport {
            plateaus: vec![],
            kinks: vec![],
            monotone: n < 2 || values[1] != values[0],
        };
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let h = (grid[n - 1] - grid[0]) / (n - 1) as f64;
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let flat_step = EPS_FLAT * scale * h;
    let flat_spread = EPS_FLAT * scale;

    let mut plateaus = Vec::new();
    let mut i = 0;
    while i < diffs.len() {
        if diffs[i].abs() > flat_step {
            i += 1;
            continue;
        }
        let start = i;
        let (mut lo, mut hi) = (values[i], values[i]);
        let mut end = i;
        while end < diffs.len() && diffs[end].abs() <= flat_step {
            let next = values[end + 1];
            if next.max(hi) - next.min(lo) > flat_spread {
                break;
            }
            lo = lo.min(next);
            hi = hi.max(next);
            end += 1;
        }
        if end - start >= 2 {
            let level = values[start..=end].iter().sum::<f64>() / (end - start + 1) as f64;
            plateaus.push(Plateau {
                p_start: grid[start],
                p_end: grid[end],
                level,
            });
        }
        i = end.max(start + 1);
    }

    let second: Vec<f64> = (1..n - 1)
        .map(|i| (values[i + 1] - 2.0 * values[i] + values[i - 1]).abs())
        .collect();
    let threshold = (KINK_MEDIAN_FACTOR * median(second.clone())).max(KINK_FLOOR * scale);
    let at = |j: isize| -> f64 {
        if j < 0 || j as usize >= second.len() {
            0.0
        } else {
            second[j as usize]
        }
    };
    let mut kinks = Vec::new();
    for j in 0..second.len() {
        let s = second[j];
        let ji = j as isize;
        if s < at(ji - 1) || s <= at(ji + 1) {
            continue;
        }
        // A kink falling between samples splits across neighbours; the
        // three-sample mass does not depend on where it lands.
        let mass = at(ji - 1) + s + at(ji + 1);
        let background = at(ji - 3).min(at(ji + 3));
        if mass <= threshold || mass <= 3.0 * KINK_BACKGROUND_FACTOR * background {
            continue;
        }
        // second[j] sits at grid index j + 1
        let (mut w, mut pw) = (0.0, 0.0);
        for d in -1..=1isize {
            let wt = at(ji + d);
            w += wt;
            pw += wt * grid[(ji + 1 + d) as usize];
        }
        kinks.push(pw / w);
    }

    let rising = diffs.iter().all(|d| *d >= 0.0);
    let falling = diffs.iter().all(|d| *d <= 0.0);
    EventReport {
        monotone: plateaus.is_empty() && (rising || falling),
        plateaus,
        kinks,
    }
}

/// Pairs each analytic transition with the nearest detected kink.
pub fn match_kinks(analytic: &[f64], detected: &[f64]) -> Vec<(f64, Option<f64>)> {
    analytic
        .iter()
        .map(|&a| {
            let nearest = detected
                .iter()
                .copied()
                .min_by(|x, y| (x - a).abs().total_cmp(&(y - a).abs()));
            (a, nearest)
        })
        .collect()
}
