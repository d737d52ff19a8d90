//! Numerical checks of the ladder formulas, one [`FormulaReport`] per
//! check and input.
//!
//! Exact identities get `pass`/`fail`. Asymptotic relations get
//! `trend_ok` when `|ratio − 1| ≤ K·envelope`, and are additionally
//! judged by how their deviations move along a geometric grid of heights
//! (see [`TrendSeries`]).

pub mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::quadrature::Interval;
use crate::zeta::EULER_GAMMA;

pub use report::{write_csv, write_json_lines};

/// Envelope constant for every `O(·)` term.
pub const K: f64 = 5.0;

/// Pointwise checks refuse heights this close to a zero of `Z`.
pub const ZERO_GUARD: f64 = 0.05;

/// Allowance for the second-order terms in the mean/slope equivalence.
pub const EQUIVALENCE_SLACK: f64 = 0.01;

/// `a = ln 2π − 1 − c`.
pub const A: f64 = 0.260_661_401_507_812_6;

/// Levels used for the almost-parallel property in [`Engine::verify`].
pub const ETA_SEQUENCE: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

/// Length of the windows searched for by the interval check.
pub const WINDOW_LEN: f64 = 0.5;

/// Slope of the rotating chord, `tan(π/6)`.
pub const ROTATING_TAN: f64 = 0.577_350_269_189_625_8;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    F1_1,
    F1_2,
    F1_5,
    C2_2,
    C2_3,
    C2_4,
    L3_1,
    F3_5,
    F4_3,
}

impl FormulaId {
    pub const ALL: [FormulaId; 9] = [
        FormulaId::F1_1,
        FormulaId::F1_2,
        FormulaId::F1_5,
        FormulaId::C2_2,
        FormulaId::C2_3,
        FormulaId::C2_4,
        FormulaId::L3_1,
        FormulaId::F3_5,
        FormulaId::F4_3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::F1_1 => "F1_1",
            FormulaId::F1_2 => "F1_2",
            FormulaId::F1_5 => "F1_5",
            FormulaId::C2_2 => "C2_2",
            FormulaId::C2_3 => "C2_3",
            FormulaId::C2_4 => "C2_4",
            FormulaId::L3_1 => "L3_1",
            FormulaId::F3_5 => "F3_5",
            FormulaId::F4_3 => "F4_3",
        }
    }

    /// Whether the trend of this formula's deviations is tracked.
    pub fn is_asymptotic(self) -> bool {
        matches!(
            self,
            FormulaId::F1_2
                | FormulaId::F1_5
                | FormulaId::C2_2
                | FormulaId::L3_1
                | FormulaId::F3_5
                | FormulaId::F4_3
        )
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown formula id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    TrendOk,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::TrendOk => "trend_ok",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaReport {
    pub formula_id: FormulaId,
    pub inputs: Vec<(&'static str, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs/rhs`, NaN when `rhs = 0`
    pub ratio: f64,
    pub envelope: f64,
    pub k: f64,
    pub verdict: Verdict,
}

impl FormulaReport {
    fn new(
        formula_id: FormulaId,
        inputs: Vec<(&'static str, f64)>,
        lhs: f64,
        rhs: f64,
        envelope: f64,
    ) -> Self {
        let ratio = if rhs != 0.0 { lhs / rhs } else { f64::NAN };
        let verdict = if (ratio - 1.0).abs() <= K * envelope {
            Verdict::TrendOk
        } else {
            Verdict::Fail
        };
        FormulaReport {
            formula_id,
            inputs,
            lhs,
            rhs,
            ratio,
            envelope,
            k: K,
            verdict,
        }
    }

    pub fn input(&self, name: &str) -> Option<f64> {
        self.inputs
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
    }

    /// Distance from the asymptotic prediction: `|ratio − 1|`, or the
    /// ratio itself for the bounded quantity of the Lemma.
    pub fn deviation(&self) -> f64 {
        match self.formula_id {
            FormulaId::L3_1 => self.ratio.abs(),
            _ => (self.ratio - 1.0).abs(),
        }
    }
}

/// Deviations of one formula along increasing heights.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendSeries {
    pub points: Vec<(f64, f64)>,
    /// `max deviation/envelope` over the points.
    pub fitted_constant: f64,
}

impl TrendSeries {
    /// `points` are `(T, deviation, envelope)` in increasing `T`.
    pub fn new(points: &[(f64, f64, f64)]) -> Self {
        let fitted_constant = points.iter().map(|&(_, d, e)| d / e).fold(0.0, f64::max);
        TrendSeries {
            points: points.iter().map(|&(t, d, _)| (t, d)).collect(),
            fitted_constant,
        }
    }

    /// Moving average over 3 consecutive points, truncated at the ends.
    pub fn smoothed(&self) -> Vec<f64> {
        let d: Vec<f64> = self.points.iter().map(|p| p.1).collect();
        (0..d.len())
            .map(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i + 2).min(d.len());
                d[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
            })
            .collect()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.smoothed().windows(2).all(|w| w[1] <= w[0])
    }

    /// `max/min` of the deviations.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
                (lo.min(p.1), hi.max(p.1))
            });
        hi / lo
    }
}

/// Trend verdict for one asymptotic formula over a `verify` run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendSummary {
    pub formula_id: FormulaId,
    pub series: TrendSeries,
    pub non_increasing: bool,
}

/// Groups the reports of each asymptotic formula by height and checks the
/// smoothed deviations. Formulas with several reports per height use the
/// largest deviation.
pub fn trend_summaries(reports: &[FormulaReport]) -> Vec<TrendSummary> {
    let mut out = Vec::new();
    for id in FormulaId::ALL.into_iter().filter(|id| id.is_asymptotic()) {
        let mut pts: Vec<(f64, f64, f64)> = Vec::new();
        for r in reports.iter().filter(|r| r.formula_id == id) {
            let Some(t) = r.input("T") else { continue };
            let d = r.deviation();
            if !d.is_finite() {
                continue;
            }
            match pts.iter_mut().find(|p| p.0 == t) {
                Some(p) if d > p.1 => *p = (t, d, r.envelope),
                Some(_) => {}
                None => pts.push((t, d, r.envelope)),
            }
        }
        if pts.is_empty() {
            continue;
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let series = TrendSeries::new(&pts);
        out.push(TrendSummary {
            formula_id: id,
            non_increasing: series.is_non_increasing(),
            series,
        });
    }
    out
}

/// `ln ln T / ln T`.
pub fn lnln_envelope(t: f64) -> f64 {
    t.ln().ln() / t.ln()
}

impl Engine {
    fn require_u(&self, t: f64, u: f64, max: f64, what: &'static str) -> Result<()> {
        if !(t.is_finite() && t >= crate::ladder::MIN_T) {
            return Err(Error::domain(what, t, "T >= 100"));
        }
        if !(u > 0.0 && u <= max) {
            return Err(Error::domain(what, u, "0 < U <= admissible maximum"));
        }
        Ok(())
    }

    /// `∫_T^{T+U} Z²` against `U ln((φ(T)/2)e^{−a}) tan α(T, U)`, judged on
    /// the additive remainder scale `T^{−1/3+4ε}`.
    pub fn check_additive(&self, t: f64, u: f64) -> Result<FormulaReport> {
        self.require_u(t, u, self.u0(t) * (1.0 + 1e-12), "check_additive U")?;
        let tol = self.config().tol;
        let ch = self.chord(t, u)?;
        let lhs = self.integrate_z2(Interval { a: t, b: t + u }, tol)?.value;
        let rhs = u * ((ch.lo.phi / 2.0).ln() - A) * ch.tan_alpha;
        let envelope = t.powf(-1.0 / 3.0 + 4.0 * self.config().epsilon);
        let mut r = FormulaReport::new(
            FormulaId::F1_1,
            vec![("T", t), ("U", u), ("tan_alpha", ch.tan_alpha)],
            lhs,
            rhs,
            envelope,
        );
        r.verdict = if (lhs - rhs).abs() <= K * envelope + tol * lhs.abs() {
            Verdict::TrendOk
        } else {
            Verdict::Fail
        };
        Ok(r)
    }

    /// `∫_T^{T+U} Z² / (U ln T tan α(T, U))`.
    pub fn check_multiplicative(&self, t: f64, u: f64) -> Result<FormulaReport> {
        self.require_u(t, u, t / t.ln(), "check_multiplicative U")?;
        let tol = self.config().tol;
        let ch = self.chord(t, u)?;
        let lhs = self.integrate_z2(Interval { a: t, b: t + u }, tol)?.value;
        let rhs = u * t.ln() * ch.tan_alpha;
        Ok(FormulaReport::new(
            FormulaId::F1_2,
            vec![("T", t), ("U", u), ("tan_alpha", ch.tan_alpha)],
            lhs,
            rhs,
            lnln_envelope(t),
        ))
    }

    /// `Z²(T) / ((1/2) ln T · dφ/dT)`; refuses `T` within
    /// [`ZERO_GUARD`] of a zero.
    pub fn check_pointwise(&self, t: f64) -> Result<FormulaReport> {
        if !(t.is_finite() && t >= 1e3) {
            return Err(Error::domain("check_pointwise", t, "T >= 1000"));
        }
        if let Some(z) = self
            .zeros_in(t - 2.0 * ZERO_GUARD, t + 2.0 * ZERO_GUARD)?
            .first()
        {
            let g = z.gamma.get();
            if (g - t).abs() <= ZERO_GUARD {
                return Err(Error::NearZero {
                    t,
                    gamma: g,
                    radius: ZERO_GUARD,
                });
            }
        }
        let p = self.solve_phi(t, &self.config().mu, self.config().tol)?;
        let lhs = p.z * p.z;
        let rhs = 0.5 * t.ln() * p.dphi_dt;
        Ok(FormulaReport::new(
            FormulaId::F1_5,
            vec![("T", t), ("phi", p.phi)],
            lhs,
            rhs,
            lnln_envelope(t),
        ))
    }

    /// The first height `≥ t` on the lattice `t + k·ZERO_GUARD` accepted by
    /// [`Engine::check_pointwise`].
    pub fn check_pointwise_near(&self, t: f64) -> Result<FormulaReport> {
        for k in 0..64 {
            match self.check_pointwise(t + k as f64 * ZERO_GUARD) {
                Err(Error::NearZero { .. }) => continue,
                other => return other,
            }
        }
        Err(Error::NotFound(format!(
            "no height near {t} clear of zeros"
        )))
    }

    /// Mean of `Z²` over `[N, M]` against the chord slope, one report per
    /// `eta`.
    ///
    /// `lhs = mean/ln N`, `rhs = κ tan α` with `κ = ln((φ(N)/2)e^{−a})/ln N`.
    /// The verdict requires co-smallness in both directions,
    /// `|lhs/κ − 1| ≤ 2|tan α − 1| + s` and `|tan α − 1| ≤ 2|lhs/κ − 1| + s`
    /// with `s = EQUIVALENCE_SLACK + tol`. The inputs record whether the
    /// chord is almost parallel at level `eta` and whether the mean is
    /// within `eta` of `ln N`.
    pub fn check_mean_equivalence(
        &self,
        n: f64,
        m: f64,
        etas: &[f64],
    ) -> Result<Vec<FormulaReport>> {
        if !(n.is_finite() && n >= crate::ladder::MIN_T) {
            return Err(Error::domain("check_mean_equivalence N", n, "N >= 100"));
        }
        if !(m > n && m - n <= self.u0(n) * (1.0 + 1e-12)) {
            return Err(Error::domain(
                "check_mean_equivalence M",
                m,
                "N < M <= N + U0(N)",
            ));
        }
        let tol = self.config().tol;
        let ch = self.chord(n, m - n)?;
        let mean = self.integrate_z2(Interval { a: n, b: m }, tol)?.value / (m - n);
        let ln_t = n.ln();
        let kappa = ((ch.lo.phi / 2.0).ln() - A) / ln_t;
        let lhs = mean / ln_t;
        let rhs = kappa * ch.tan_alpha;
        let dm = (lhs / kappa - 1.0).abs();
        let dt = (ch.tan_alpha - 1.0).abs();
        let s = EQUIVALENCE_SLACK + tol;
        let consistent = dm <= 2.0 * dt + s && dt <= 2.0 * dm + s;
        Ok(etas
            .iter()
            .map(|&eta| {
                let flag = |b: bool| if b { 1.0 } else { 0.0 };
                let mut r = FormulaReport::new(
                    FormulaId::C2_2,
                    vec![
                        ("T", n),
                        ("M", m),
                        ("eta", eta),
                        ("tan_alpha", ch.tan_alpha),
                        ("parallel", flag(dt <= eta)),
                        ("mean_close", flag((lhs - 1.0).abs() <= eta)),
                    ],
                    lhs,
                    rhs,
                    eta,
                );
                r.verdict = if consistent {
                    Verdict::TrendOk
                } else {
                    Verdict::Fail
                };
                r
            })
            .collect())
    }

    /// `|Φ″(y)|` against `ln y lnln y / y`.
    pub fn lemma_report(&self, y: f64) -> Result<FormulaReport> {
        let v = self.phi_values(y, &self.config().mu, self.config().tol)?;
        let lhs = v.d2phi.abs();
        let rhs = y.ln() * y.ln().ln() / y;
        let mut r = FormulaReport::new(FormulaId::L3_1, vec![("y", y), ("q", v.q)], lhs, rhs, 1.0);
        r.verdict = if r.ratio <= K {
            Verdict::TrendOk
        } else {
            Verdict::Fail
        };
        Ok(r)
    }

    /// `|Φ″(y)|·y/(ln y lnln y)` over `y_grid`.
    pub fn check_lemma_bound(&self, y_grid: &[f64]) -> Result<TrendSeries> {
        let reports: Vec<FormulaReport> = self.pool().install(|| {
            y_grid
                .par_iter()
                .map(|&y| self.lemma_report(y))
                .collect::<Result<_>>()
        })?;
        let pts: Vec<(f64, f64, f64)> = reports
            .iter()
            .map(|r| (r.input("y").unwrap_or(f64::NAN), r.ratio, 1.0))
            .collect();
        Ok(TrendSeries::new(&pts))
    }

    /// `I(T)/(T ln T)` and `(T − φ(T)/2)/((1 − c)π(T))`.
    pub fn check_hl_and_pi(&self, t: f64) -> Result<(FormulaReport, FormulaReport)> {
        if !(t.is_finite() && t >= 1e3) {
            return Err(Error::domain("check_hl_and_pi", t, "T >= 1000"));
        }
        let pi = self.prime_pi(t)? as f64;
        let p = self.solve_phi(t, &self.config().mu, self.config().tol)?;
        let hl = FormulaReport::new(
            FormulaId::F3_5,
            vec![("T", t)],
            p.i_t,
            t * t.ln(),
            1.0 / t.ln(),
        );
        let pr = FormulaReport::new(
            FormulaId::F4_3,
            vec![("T", t), ("phi", p.phi), ("pi", pi)],
            t - p.phi / 2.0,
            (1.0 - EULER_GAMMA) * pi,
            lnln_envelope(t),
        );
        Ok((hl, pr))
    }

    /// Windows of length `len` in `[T, T + U₀]` with mean `Z²` near `ln T`.
    /// A failed search gives a single `fail` report with NaN values.
    pub fn check_intervals(&self, t: f64, len: f64, count: usize) -> Result<Vec<FormulaReport>> {
        let found = self.find_intervals_with_mean(t, len, count)?;
        if found.is_empty() {
            let mut r = FormulaReport::new(
                FormulaId::C2_3,
                vec![("T", t), ("len", len)],
                f64::NAN,
                t.ln(),
                lnln_envelope(t),
            );
            r.verdict = Verdict::Fail;
            return Ok(vec![r]);
        }
        let tol = self.config().tol;
        found
            .into_iter()
            .map(|iv| {
                let mean = self.integrate_z2(iv, tol)?.value / iv.len();
                Ok(FormulaReport::new(
                    FormulaId::C2_3,
                    vec![("T", t), ("len", len), ("N", iv.a)],
                    mean,
                    t.ln(),
                    lnln_envelope(t),
                ))
            })
            .collect()
    }

    /// The chord of slope `tan_target` from the first zero at or above
    /// `near`: `∫_γ^{γ+U} Z² / (U ln γ)` against `tan_target`.
    pub fn check_rotating_chord(&self, near: f64, tan_target: f64) -> Result<FormulaReport> {
        let spacing = crate::zeta::mean_zero_spacing(near);
        let zeros = self.zeros_in(near, near + 4.0 * spacing)?;
        let gamma = *zeros
            .first()
            .ok_or_else(|| Error::NotFound(format!("no zero of Z above {near}")))?;
        let eta = tan_target.min(1.0 - tan_target).min(0.1);
        let ch = self.find_chord_with_angle(gamma, tan_target, eta)?;
        let g = ch.n;
        let u = ch.m - ch.n;
        let lhs = self
            .integrate_z2(Interval { a: g, b: ch.m }, self.config().tol)?
            .value
            / (u * g.ln());
        let mut r = FormulaReport::new(
            FormulaId::C2_4,
            vec![
                ("T", near),
                ("gamma", g),
                ("U", u),
                ("tan_alpha", ch.tan_alpha),
            ],
            lhs,
            tan_target,
            lnln_envelope(g),
        );
        if u >= self.u0(g) {
            r.verdict = Verdict::Fail;
        }
        Ok(r)
    }

    fn verify_one(&self, id: FormulaId, t: f64) -> Result<Vec<FormulaReport>> {
        match id {
            FormulaId::F1_1 => Ok(vec![self.check_additive(t, self.u0(t))?]),
            FormulaId::F1_2 => Ok(vec![
                self.check_multiplicative(t, self.u0(t))?,
                self.check_multiplicative(t, 0.5)?,
            ]),
            FormulaId::F1_5 => Ok(vec![self.check_pointwise_near(t)?]),
            FormulaId::C2_2 => self.check_mean_equivalence(t, t + self.u0(t), &ETA_SEQUENCE),
            FormulaId::C2_3 => self.check_intervals(t, WINDOW_LEN, 3),
            FormulaId::C2_4 => Ok(vec![self.check_rotating_chord(t, ROTATING_TAN)?]),
            FormulaId::L3_1 => {
                let p = self.solve_phi(t, &self.config().mu, self.config().tol)?;
                let mut r = self.lemma_report(p.phi)?;
                r.inputs.insert(0, ("T", t));
                Ok(vec![r])
            }
            FormulaId::F3_5 => Ok(vec![self.check_hl_and_pi(t)?.0]),
            FormulaId::F4_3 => Ok(vec![self.check_hl_and_pi(t)?.1]),
        }
    }

    /// Every check in `ids` at every height of `t_grid`, grouped by formula
    /// and then ordered as the grid. The output does not depend on the
    /// number of threads.
    pub fn verify(&self, ids: &[FormulaId], t_grid: &[f64]) -> Result<Vec<FormulaReport>> {
        for &t in t_grid {
            if !(t.is_finite() && t >= 1e3) {
                return Err(Error::domain("verify T", t, "T >= 1000"));
            }
        }
        // Grow the shared caches once before fanning out.
        if let Some(&top) = t_grid.iter().max_by(|a, b| a.total_cmp(b)) {
            let top = top + self.u0(top);
            self.solve_phi(top, &self.config().mu, self.config().tol)?;
        }
        let tasks: Vec<(FormulaId, f64)> = ids
            .iter()
            .flat_map(|&id| t_grid.iter().map(move |&t| (id, t)))
            .collect();
        let parts: Vec<Vec<FormulaReport>> = self.pool().install(|| {
            tasks
                .par_iter()
                .map(|&(id, t)| self.verify_one(id, t))
                .collect::<Result<_>>()
        })?;
        Ok(parts.into_iter().flatten().collect())
    }
}

/// `n` points from `lo` to `hi` with a constant ratio.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo * (r * i as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn a_constant() {
        let a = TAU.ln() - 1.0 - EULER_GAMMA;
        assert!((a - A).abs() < 1e-15);
    }

    #[test]
    fn formula_ids_parse() {
        for id in FormulaId::ALL {
            assert_eq!(id.as_str().parse::<FormulaId>().unwrap(), id);
        }
        assert_eq!("c2_4".parse::<FormulaId>().unwrap(), FormulaId::C2_4);
        assert!("F9_9".parse::<FormulaId>().is_err());
    }

    #[test]
    fn ratio_and_verdict() {
        let r = FormulaReport::new(FormulaId::F1_2, vec![("T", 1e4)], 3.0, 2.0, 0.2);
        assert_eq!(r.ratio, 1.5);
        assert_eq!(r.verdict, Verdict::TrendOk);
        let r = FormulaReport::new(FormulaId::F1_2, vec![("T", 1e4)], 3.0, 2.0, 0.01);
        assert_eq!(r.verdict, Verdict::Fail);
        let r = FormulaReport::new(FormulaId::F1_2, vec![], 3.0, 0.0, 0.01);
        assert!(r.ratio.is_nan());
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn smoothing_and_trend() {
        let s = TrendSeries::new(&[(1.0, 0.3, 1.0), (2.0, 0.5, 1.0), (3.0, 0.1, 1.0)]);
        let sm = s.smoothed();
        assert!((sm[0] - 0.4).abs() < 1e-15);
        assert!((sm[1] - 0.3).abs() < 1e-15);
        assert!((sm[2] - 0.3).abs() < 1e-15);
        assert!(s.is_non_increasing());
        assert_eq!(s.fitted_constant, 0.5);
        assert!((s.spread() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_grid_ends() {
        let g = geometric_grid(1e3, 2e4, 20);
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 1e3);
        assert_eq!(g[19], 2e4);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
