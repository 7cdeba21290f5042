//! Parameter recursion and iterated rounds down to the finisher threshold.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    codegree_bound, color_degrees, find_conflict, max_color_degree, preprocess, scan_codegrees,
    validate_pair, Color, Graph, ListAssignment, PairParams, PartialColoring,
};
use crate::rng::derive_seed;
use crate::wcp::{keep_value, run_round, RoundParams};

/// Default for the "sufficiently large" degree threshold in strict mode.
pub const DEFAULT_D_TILDE: f64 = 1_048_576.0;

/// `(1 + ε/2) ln(1 + ε/100)`.
pub fn kappa(eps: f64) -> f64 {
    (1.0 + eps / 2.0) * (1.0 + eps / 100.0).ln()
}

/// `x / ln(x)^exponent`, the recursion's error term.
fn error_term(x: f64, exponent: f64) -> f64 {
    x / x.ln().powf(exponent)
}

/// One recursion step: `(keep, uncolor, ℓ_next, d_next)`.
pub fn next_parameters(ell: f64, d: f64, eta: f64, error_exponent: f64) -> (f64, f64, f64, f64) {
    let keep = keep_value(d, ell, eta);
    let uncolor = 1.0 - eta * keep;
    let ell_next = keep * ell - error_term(ell, error_exponent);
    let d_next = keep * uncolor * d + error_term(d, error_exponent);
    (keep, uncolor, ell_next, d_next)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    /// `d_i ≥ d̃`
    pub c1: bool,
    /// `4ηd_i < ℓ_i < 8d_i`
    pub c2: bool,
    /// `1/ln²d_i < η < 1/(4 ln d_i)`
    pub c3: bool,
}

/// A side check on the sequences that is only meaningful under its own
/// hypotheses; `holds` is recorded either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceCheck {
    pub index: usize,
    pub hypotheses_hold: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NibbleSchedule {
    pub eps: f64,
    pub kappa: f64,
    pub eta: f64,
    pub d_tilde: f64,
    pub error_exponent: f64,
    pub d_seq: Vec<f64>,
    pub ell_seq: Vec<f64>,
    pub keep_seq: Vec<f64>,
    pub uncolor_seq: Vec<f64>,
    /// Error-free sequences `ℓ̂_{i+1} = keep_i ℓ̂_i`, `d̂_{i+1} = keep_i uncolor_i d̂_i`.
    pub ell_hat_seq: Vec<f64>,
    pub d_hat_seq: Vec<f64>,
    /// 1-based index of the first `ℓ_i ≥ 8 d_i`, if reached before the cap.
    pub i_star: Option<usize>,
    pub flags: Vec<ConditionFlags>,
    /// `|ℓ_i − ℓ̂_i| ≤ ℓ̂_i / ln ℓ̂_i`, hypotheses `η ≥ 20 / ln³ d_j` for `j < i`.
    pub hat_checks: Vec<SequenceCheck>,
    /// `d_{i+1}/ℓ_{i+1} ≤ d_i/ℓ_i`, hypotheses `8d_i ≥ ℓ_i` and `η ≥ 6 / ln⁵ d_i`.
    pub ratio_checks: Vec<SequenceCheck>,
    pub iteration_cap: usize,
    /// The recursion hit the cap or left the positive reals before `i_star`.
    pub truncated: bool,
    /// `ln` of the smallest `d` for which the η window can hold, i.e. `1/κ`.
    /// Kept as a logarithm: the value itself overflows `f64` for small ε.
    pub ln_min_feasible_d: f64,
}

impl NibbleSchedule {
    /// Run the recursion from `(d_1, ℓ_1)` with a fixed η.
    pub fn from_start(
        d1: f64,
        ell1: f64,
        eta: f64,
        eps: f64,
        error_exponent: f64,
        d_tilde: f64,
    ) -> Result<Self> {
        if !(d1 >= 1.0 && ell1 >= 1.0) {
            return Err(Error::Argument(format!("need d ≥ 1 and ℓ ≥ 1, got d = {d1}, ℓ = {ell1}")));
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::Argument(format!("η = {eta} outside (0, 1]")));
        }
        let k = kappa(eps);
        let lnln = d1.ln().max(1.0).ln().max(0.0);
        let iteration_cap = ((10.0 / eta * lnln).ceil() as usize).max(1);
        let mut s = NibbleSchedule {
            eps,
            kappa: k,
            eta,
            d_tilde,
            error_exponent,
            d_seq: vec![d1],
            ell_seq: vec![ell1],
            keep_seq: vec![],
            uncolor_seq: vec![],
            ell_hat_seq: vec![ell1],
            d_hat_seq: vec![d1],
            i_star: None,
            flags: vec![],
            hat_checks: vec![],
            ratio_checks: vec![],
            iteration_cap,
            truncated: false,
            ln_min_feasible_d: 1.0 / k,
        };
        let mut hat_hypotheses = true;
        loop {
            let i = s.d_seq.len() - 1;
            let (d, ell) = (s.d_seq[i], s.ell_seq[i]);
            let ld = d.ln();
            s.flags.push(ConditionFlags {
                c1: d >= d_tilde,
                c2: 4.0 * eta * d < ell && ell < 8.0 * d,
                c3: ld > 0.0 && 1.0 / (ld * ld) < eta && eta < 1.0 / (4.0 * ld),
            });
            let lh = s.ell_hat_seq[i];
            s.hat_checks.push(SequenceCheck {
                index: i + 1,
                hypotheses_hold: hat_hypotheses,
                holds: (ell - lh).abs() <= lh / lh.ln(),
            });
            if ell >= 8.0 * d {
                s.i_star = Some(i + 1);
                break;
            }
            if i + 1 >= iteration_cap || d <= 1.0 || ell <= 1.0 {
                s.truncated = true;
                break;
            }
            let (keep, uncolor, ell_next, d_next) = next_parameters(ell, d, eta, error_exponent);
            if !(ell_next > 0.0 && d_next > 0.0 && ell_next.is_finite() && d_next.is_finite()) {
                s.truncated = true;
                break;
            }
            s.ratio_checks.push(SequenceCheck {
                index: i + 1,
                hypotheses_hold: 8.0 * d >= ell && ld > 0.0 && eta >= 6.0 / ld.powi(5),
                holds: d_next / ell_next <= d / ell,
            });
            hat_hypotheses &= ld > 0.0 && eta >= 20.0 / ld.powi(3);
            s.keep_seq.push(keep);
            s.uncolor_seq.push(uncolor);
            s.d_seq.push(d_next);
            s.ell_seq.push(ell_next);
            s.ell_hat_seq.push(keep * lh);
            s.d_hat_seq.push(keep * uncolor * s.d_hat_seq[i]);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.d_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d_seq.is_empty()
    }

    /// All three conditions hold at every index before `i_star`, and
    /// `i_star` exists.
    pub fn feasible(&self) -> bool {
        match self.i_star {
            Some(i) => self.flags[..i - 1].iter().all(|f| f.c1 && f.c2 && f.c3),
            None => false,
        }
    }
}

/// Strict schedule: `η = κ / ln d`, `ℓ_1 = (1+ε) d / ln d`, error exponent 5.
pub fn build_nibble_schedule(d: f64, eps: f64) -> Result<NibbleSchedule> {
    if !(d >= 2.0) {
        return Err(Error::Argument(format!("schedule needs d ≥ 2, got {d}")));
    }
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(Error::Argument(format!("ε = {eps} outside (0, 1/3)")));
    }
    let eta = kappa(eps) / d.ln();
    let ell1 = (1.0 + eps) * d / d.ln();
    NibbleSchedule::from_start(d, ell1, eta, eps, 5.0, DEFAULT_D_TILDE)
}

/// Negations of the round conclusions found in `(G', L')`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BadEventReport {
    pub ell_next: f64,
    pub d_next: f64,
    pub codegree_bound: f64,
    /// `|L'(v)| < ℓ'`
    pub list_events: Vec<usize>,
    /// `d_{L'}(v, c) > d'`
    pub degree_events: Vec<(usize, Color)>,
    /// s-color-codegree above the bound.
    pub codegree_events: Vec<(Vec<usize>, Color)>,
}

impl BadEventReport {
    pub fn is_empty(&self) -> bool {
        self.list_events.is_empty() && self.degree_events.is_empty() && self.codegree_events.is_empty()
    }

    pub fn total(&self) -> usize {
        self.list_events.len() + self.degree_events.len() + self.codegree_events.len()
    }
}

impl fmt::Display for BadEventReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} list events (ℓ' = {:.3}), {} degree events (d' = {:.3}), {} codegree events (bound {:.3})",
            self.list_events.len(),
            self.ell_next,
            self.degree_events.len(),
            self.d_next,
            self.codegree_events.len(),
            self.codegree_bound
        )
    }
}

/// Exact scan of the three round conclusions against `(ℓ', d')`.
pub fn detect_bad_events(
    g: &Graph,
    l: &ListAssignment,
    ell_next: f64,
    d_next: f64,
    s: usize,
    codegree_exponent: f64,
) -> BadEventReport {
    let bound = codegree_bound(d_next, codegree_exponent);
    let list_events = (0..g.n()).filter(|&v| (l.list(v).len() as f64) < ell_next).collect();
    let degree_events = color_degrees(g, l)
        .iter()
        .enumerate()
        .flat_map(|(v, row)| {
            row.iter()
                .zip(l.list(v))
                .filter(|(&k, _)| k as f64 > d_next)
                .map(move |(_, &c)| (v, c))
        })
        .collect();
    BadEventReport {
        ell_next,
        d_next,
        codegree_bound: bound,
        list_events,
        degree_events,
        codegree_events: codegree_events(g, l, s, bound),
    }
}

/// Tuples and colors whose s-color-codegree exceeds `bound`. Only tuples
/// whose plain codegree already exceeds it are inspected per color.
pub fn codegree_events(g: &Graph, l: &ListAssignment, s: usize, bound: f64) -> Vec<(Vec<usize>, Color)> {
    if bound.is_infinite() {
        return vec![];
    }
    let mut heavy: Vec<Vec<usize>> = Vec::new();
    scan_codegrees(g, None, s, |t, _, k| {
        if k as f64 > bound {
            heavy.push(t.to_vec());
        }
    });
    let mut events = Vec::new();
    for t in heavy {
        let common: Vec<usize> = g.neighbors(t[0])
            .iter()
            .copied()
            .filter(|&w| t[1..].iter().all(|&v| g.has_edge(v, w)))
            .collect();
        for &c in l.list(t[0]) {
            if !t[1..].iter().all(|&v| l.contains(v, c)) {
                continue;
            }
            let k = common.iter().filter(|&&w| l.contains(w, c)).count();
            if k as f64 > bound {
                events.push((t.clone(), c));
            }
        }
    }
    events
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverrideParams {
    /// Activation probability; defaults to `ℓ / (8d)` capped at 1/2.
    pub eta: Option<f64>,
    pub codegree_exponent: f64,
    pub error_exponent: f64,
}

impl Default for OverrideParams {
    fn default() -> Self {
        OverrideParams {
            eta: None,
            codegree_exponent: 2.0,
            error_exponent: 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Mode {
    /// Schedule-driven with exponents `16s` and 5; refuses invalid pairs.
    Strict,
    /// Each round's `(ℓ, d)` is re-read from the current instance and the
    /// exponents are configurable.
    Override(OverrideParams),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NibbleConfig {
    pub eps: f64,
    pub s: usize,
    pub max_retries: usize,
    pub d_tilde: f64,
    pub mode: Mode,
    /// On retry exhaustion, return the pre-round state instead of an error.
    pub handoff_on_exhaustion: bool,
}

impl NibbleConfig {
    pub fn strict(eps: f64, s: usize) -> Self {
        NibbleConfig {
            eps,
            s,
            max_retries: 20,
            d_tilde: DEFAULT_D_TILDE,
            mode: Mode::Strict,
            handoff_on_exhaustion: false,
        }
    }

    pub fn override_mode(eps: f64, s: usize, params: OverrideParams) -> Self {
        NibbleConfig {
            eps,
            s,
            max_retries: 20,
            d_tilde: DEFAULT_D_TILDE,
            mode: Mode::Override(params),
            handoff_on_exhaustion: true,
        }
    }

    fn codegree_exponent(&self) -> f64 {
        match self.mode {
            Mode::Strict => 16.0 * self.s as f64,
            Mode::Override(o) => o.codegree_exponent,
        }
    }

    /// Schedule for this instance: strict mode starts from the measured
    /// color-degree, override mode from the measured color-degree and
    /// minimum list size.
    pub fn schedule_for(&self, g: &Graph, l: &ListAssignment) -> Result<NibbleSchedule> {
        let d = max_color_degree(g, l).max(1) as f64;
        match self.mode {
            Mode::Strict => {
                let mut s = build_nibble_schedule(d.max(2.0), self.eps)?;
                s.d_tilde = self.d_tilde;
                for (f, &di) in s.flags.iter_mut().zip(&s.d_seq) {
                    f.c1 = di >= self.d_tilde;
                }
                Ok(s)
            }
            Mode::Override(o) => {
                let ell = l.min_size().max(1) as f64;
                let eta = o.eta.unwrap_or_else(|| (ell / (8.0 * d)).min(0.5));
                NibbleSchedule::from_start(d, ell, eta, self.eps, o.error_exponent, self.d_tilde)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum StopReason {
    /// Measured `min |L| ≥ 8 · max color-degree`.
    FinisherThreshold,
    /// Reached `i*` of the schedule, or the next list size target drops
    /// below 1.
    ScheduleEnd,
    /// Iteration cap of the schedule.
    RoundCap,
    Empty,
    RetriesExhausted { round: usize, report: BadEventReport },
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::FinisherThreshold => write!(f, "lists reached 8 × color-degree"),
            StopReason::ScheduleEnd => write!(f, "end of schedule"),
            StopReason::RoundCap => write!(f, "round cap"),
            StopReason::Empty => write!(f, "everything colored"),
            StopReason::RetriesExhausted { round, report } => {
                write!(f, "round {round} out of retries, last attempt: {report}")
            }
        }
    }
}

/// One accepted round, vertex ids in the caller's graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub seed: u64,
    pub retries: usize,
    pub params: RoundParams,
    pub ell_next: f64,
    pub d_next: f64,
    pub activations: Vec<(usize, Color)>,
    pub flips: Vec<(usize, Color)>,
    pub colored: Vec<(usize, Color)>,
    pub remaining: usize,
    pub min_list: usize,
    pub max_color_degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NibbleOutcome {
    /// Colors on the caller's vertex ids.
    pub coloring: PartialColoring,
    /// Uncolored vertex ids, ascending; vertex `i` of `graph` is `remaining[i]`.
    pub remaining: Vec<usize>,
    pub graph: Graph,
    pub lists: ListAssignment,
    pub schedule: NibbleSchedule,
    pub rounds: Vec<RoundRecord>,
    pub stop: StopReason,
}

/// Iterate rounds until the finisher threshold, `i*`, the cap, or an empty
/// residual. Each round is retried with derived seeds while bad events fire.
pub fn run_nibble(g: &Graph, l: &ListAssignment, cfg: &NibbleConfig, seed: u64) -> Result<NibbleOutcome> {
    if l.n() != g.n() {
        return Err(Error::Argument(format!(
            "list assignment covers {} vertices, graph has {}",
            l.n(),
            g.n()
        )));
    }
    if cfg.s < 2 {
        return Err(Error::Argument("codegree arity s must be at least 2".into()));
    }
    let schedule = cfg.schedule_for(g, l)?;
    let cod_exp = cfg.codegree_exponent();
    if cfg.mode == Mode::Strict {
        let p = PairParams::new(schedule.d_seq[0], schedule.ell_seq[0].ceil() as usize, cfg.s, schedule.eta)
            .with_codegree_exponent(cod_exp);
        let trimmed = preprocess(g, l, p.ell).map_err(|e| Error::StrictRefused(e.to_string()))?;
        let report = validate_pair(&trimmed.0, &trimmed.1, &p, true);
        if !schedule.feasible() || !report.is_valid() {
            let mut why: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            if !schedule.feasible() {
                why.insert(0, "schedule infeasible".into());
            }
            return Err(Error::StrictRefused(why.join("; ")));
        }
    }

    let mut coloring = PartialColoring::new(g.n());
    let mut ids: Vec<usize> = (0..g.n()).collect();
    let mut cur_g = g.clone();
    let mut cur_l = l.clone();
    let mut rounds = Vec::new();
    let mut i = 0usize;
    let stop = loop {
        if cur_g.n() == 0 {
            break StopReason::Empty;
        }
        let dmax = max_color_degree(&cur_g, &cur_l);
        let lmin = cur_l.min_size();
        if lmin >= 8 * dmax {
            break StopReason::FinisherThreshold;
        }
        if i + 1 >= schedule.iteration_cap {
            break StopReason::RoundCap;
        }
        let (ell_i, d_i, ell_next, d_next) = match cfg.mode {
            Mode::Strict => {
                if schedule.i_star.is_some_and(|st| i + 1 >= st) {
                    break StopReason::ScheduleEnd;
                }
                if i + 1 >= schedule.len() {
                    break StopReason::RoundCap;
                }
                let ell = schedule.ell_seq[i].ceil() as usize;
                (ell, schedule.d_seq[i], schedule.ell_seq[i + 1], schedule.d_seq[i + 1])
            }
            Mode::Override(o) => {
                let d = dmax.max(1) as f64;
                let (_, _, ln, dn) = next_parameters(lmin as f64, d, schedule.eta, o.error_exponent);
                if lmin == 0 || !(ln >= 1.0) {
                    break StopReason::ScheduleEnd;
                }
                (lmin, d, ln, dn)
            }
        };
        let (pg, pl) = preprocess(&cur_g, &cur_l, ell_i)?;
        let params = RoundParams::new(d_i, ell_i, cfg.s, schedule.eta)?;
        let mut accepted = None;
        let mut last_report = BadEventReport::default();
        for j in 0..=cfg.max_retries {
            let round_seed = derive_seed(seed, &[i as u64, j as u64]);
            let out = run_round(&pg, &pl, &params, round_seed)?;
            let report = detect_bad_events(&out.residual, &out.lists, ell_next, d_next, cfg.s, cod_exp);
            if report.is_empty() {
                accepted = Some((j, round_seed, out));
                break;
            }
            last_report = report;
        }
        let Some((retries, round_seed, out)) = accepted else {
            if cfg.handoff_on_exhaustion {
                break StopReason::RetriesExhausted {
                    round: i + 1,
                    report: last_report,
                };
            }
            return Err(Error::RoundRetries {
                round: i + 1,
                retries: cfg.max_retries,
                report: Box::new(last_report),
            });
        };
        let mut colored = Vec::new();
        for v in out.coloring.domain() {
            let c = out.coloring.get(v).unwrap();
            coloring.set(ids[v], c);
            colored.push((ids[v], c));
        }
        if let Some((u, v)) = find_conflict(g, &coloring) {
            panic!("round {} produced monochromatic edge {u}-{v}", i + 1);
        }
        rounds.push(RoundRecord {
            round: i + 1,
            seed: round_seed,
            retries,
            params,
            ell_next,
            d_next,
            activations: out.trace.activations.iter().map(|&(v, c)| (ids[v], c)).collect(),
            flips: out.trace.flips.iter().map(|&(v, c)| (ids[v], c)).collect(),
            colored,
            remaining: out.kept.len(),
            min_list: out.lists.min_size(),
            max_color_degree: max_color_degree(&out.residual, &out.lists),
        });
        ids = out.kept.iter().map(|&k| ids[k]).collect();
        cur_g = out.residual;
        cur_l = out.lists;
        i += 1;
    };
    Ok(NibbleOutcome {
        coloring,
        remaining: ids,
        graph: cur_g,
        lists: cur_l,
        schedule,
        rounds,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, generate, GenSpec};
    use crate::graph::{is_proper_list_coloring, s_color_codegree};

    #[test]
    fn kappa_and_strict_schedule() {
        assert!((kappa(0.1) - 1.049_475_349_737_7e-3).abs() < 1e-15);
        let s = build_nibble_schedule(1e6, 0.1).unwrap();
        assert!((s.eta - 7.596_36e-5).abs() < 1e-9);
        assert!((s.ell_seq[0] - 79_620.655).abs() < 1e-2);
        assert!(!s.flags[0].c3);
        assert!(!s.feasible());
        assert!(s.ln_min_feasible_d > 952.0 && s.ln_min_feasible_d < 953.0);
    }

    #[test]
    fn schedule_invariants() {
        for (d, eps) in [(1e3, 0.1), (1e5, 0.2), (50.0, 0.3)] {
            let s = build_nibble_schedule(d, eps).unwrap();
            assert!(s.len() <= s.iteration_cap);
            for i in 0..s.keep_seq.len() {
                assert!(s.keep_seq[i] * s.uncolor_seq[i] < s.keep_seq[i]);
                let (_, _, ln, dn) = next_parameters(s.ell_seq[i], s.d_seq[i], s.eta, 5.0);
                assert_eq!((ln, dn), (s.ell_seq[i + 1], s.d_seq[i + 1]));
            }
            for c in s.ratio_checks.iter().chain(&s.hat_checks) {
                if c.hypotheses_hold {
                    assert!(c.holds, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn override_schedule_reaches_threshold() {
        let s = NibbleSchedule::from_start(1e4, 1.5e4, 0.3, 0.1, 5.0, DEFAULT_D_TILDE).unwrap();
        let i = s.i_star.unwrap();
        assert!(s.ell_seq[i - 1] >= 8.0 * s.d_seq[i - 1]);
        assert!(s.ell_seq[..i - 1]
            .iter()
            .zip(&s.d_seq)
            .all(|(l, d)| *l < 8.0 * d));
    }

    #[test]
    fn no_list_events_at_zero_threshold() {
        let g = fixture("petersen").unwrap();
        let l = ListAssignment::full_palette(10, 3);
        let r = detect_bad_events(&g, &l, 0.0, 100.0, 2, 2.0);
        assert!(r.is_empty());
    }

    #[test]
    fn planted_list_event() {
        let g = fixture("petersen").unwrap();
        let mut lists = vec![vec![1, 2, 3]; 10];
        lists[4] = vec![1];
        let l = ListAssignment::new(lists).unwrap();
        let r = detect_bad_events(&g, &l, 2.0, 100.0, 2, 2.0);
        assert_eq!(r.list_events, vec![4]);
        assert!(r.degree_events.is_empty());
    }

    #[test]
    fn report_matches_brute_force() {
        for seed in 0..6 {
            let g = generate(&GenSpec::gnp(11, 0.5, seed)).unwrap();
            let l = crate::generators::uniform_lists(11, 5, 3, seed).unwrap();
            let (ln, dn) = (3.0, 2.0);
            let r = detect_bad_events(&g, &l, ln, dn, 2, 0.0);
            assert_eq!(r.codegree_bound, codegree_bound(dn, 0.0));
            let b = r.codegree_bound;
            let mut deg = vec![];
            let mut cod = vec![];
            for v in 0..11 {
                for &c in l.list(v) {
                    if crate::graph::color_degree(&g, &l, v, c).unwrap() as f64 > dn {
                        deg.push((v, c));
                    }
                    for u in v + 1..11 {
                        if l.contains(u, c) && s_color_codegree(&g, &l, &[v, u], c).unwrap() as f64 > b {
                            cod.push((vec![v, u], c));
                        }
                    }
                }
            }
            assert_eq!(r.degree_events, deg);
            let mut got = r.codegree_events.clone();
            got.sort();
            cod.sort();
            assert_eq!(got, cod);
        }
    }

    #[test]
    fn threshold_at_start_runs_no_rounds() {
        let g = fixture("c5").unwrap();
        let l = ListAssignment::full_palette(5, 16);
        let cfg = NibbleConfig::override_mode(0.1, 2, OverrideParams::default());
        let out = run_nibble(&g, &l, &cfg, 1).unwrap();
        assert!(out.rounds.is_empty());
        assert_eq!(out.stop, StopReason::FinisherThreshold);
        assert_eq!(out.graph, g);
    }

    #[test]
    fn c5_override_runs_and_stays_proper() {
        let g = fixture("c5").unwrap();
        let l = ListAssignment::full_palette(5, 3);
        for seed in 0..50 {
            let cfg = NibbleConfig::override_mode(
                0.1,
                2,
                OverrideParams {
                    eta: Some(0.3),
                    ..Default::default()
                },
            );
            let out = run_nibble(&g, &l, &cfg, seed).unwrap();
            assert!(is_proper_list_coloring(&g, &l, &out.coloring));
            let mut seen = out.coloring.domain_size();
            for r in &out.rounds {
                seen -= r.colored.len();
            }
            assert_eq!(seen, 0);
            assert_eq!(out.remaining, out.coloring.uncolored());
        }
    }

    #[test]
    fn rounds_replay_against_trace() {
        let g = generate(&GenSpec::gnp(120, 0.1, 3)).unwrap();
        let l = ListAssignment::full_palette(120, 24);
        let lenient = OverrideParams {
            eta: None,
            codegree_exponent: 1.0,
            error_exponent: 1.0,
        };
        let cfg = NibbleConfig::override_mode(0.1, 2, lenient);
        let out = run_nibble(&g, &l, &cfg, 9).unwrap();
        assert!(!out.rounds.is_empty());
        let mut phi = PartialColoring::new(g.n());
        for r in &out.rounds {
            for &(v, c) in &r.colored {
                assert!(r.activations.contains(&(v, c)));
                assert!(phi.get(v).is_none());
                phi.set(v, c);
            }
            assert!(crate::graph::is_proper(&g, &phi));
        }
        assert_eq!(phi, out.coloring);
    }

    #[test]
    fn strict_refuses_at_desk_scale() {
        let g = fixture("petersen").unwrap();
        let l = ListAssignment::full_palette(10, 20);
        let err = run_nibble(&g, &l, &NibbleConfig::strict(0.1, 2), 0).unwrap_err();
        assert!(matches!(err, Error::StrictRefused(_)));
    }

    #[test]
    fn exhaustion_is_an_error_without_handoff() {
        let g = generate(&GenSpec::gnp(60, 0.3, 1)).unwrap();
        let l = ListAssignment::full_palette(60, 20);
        let mut cfg = NibbleConfig::override_mode(
            0.1,
            2,
            OverrideParams {
                eta: Some(0.2),
                codegree_exponent: 2.0,
                error_exponent: 40.0,
            },
        );
        cfg.max_retries = 2;
        cfg.handoff_on_exhaustion = false;
        assert!(matches!(run_nibble(&g, &l, &cfg, 0), Err(Error::RoundRetries { round: 1, .. })));
        cfg.handoff_on_exhaustion = true;
        let out = run_nibble(&g, &l, &cfg, 0).unwrap();
        assert!(matches!(out.stop, StopReason::RetriesExhausted { round: 1, .. }));
        assert_eq!(out.graph, g);
    }
}
