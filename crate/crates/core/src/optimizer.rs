//! Minimum-SOP coupling lengths.
//!
//! Work in the coupled fractions `r = sin²(κL1)` and `t = sin²(κL2)`, so
//! `ρ1 = Fρt r` and `ρ2 = Fρt (1 − Fr) t`. With `P = Fρt`:
//!
//! * Ω1 = 1 iff `(d² + D1²/4)/(BP) ≤ r ≤ d²/(AP)`;
//! * Ω2 = 1 iff `min(A, B) P (1 − Fr) t ≥ d² + D2²/4`.
//!
//! Four regimes follow depending on which of the two can reach 1. The
//! solver does not trust the regime preconditions alone: every applicable
//! closed-form candidate is evaluated through the closed-form SOP, and a
//! 400×400 grid over the length box backs them up.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::SystemConfig;
use crate::coupling::{coefficients_from_fractions, fraction, length_for_fraction, max_length, CouplingLengths};
use crate::secrecy::{sop_closed_form, sop_from_coefficients, Omega1Branch, SopBreakdown};

/// Grid resolution of the safety-net sweep, per axis.
pub const GRID_POINTS: usize = 400;
/// Margin by which the grid must beat every closed-form candidate.
pub const GRID_MARGIN: f64 = 1e-6;
pub const BISECTION_TOLERANCE: f64 = 1e-9;
pub const BISECTION_MAX_ITERATIONS: usize = 200;
const SCAN_INTERVALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct P1Constraints {
    /// `α1/α2 > γ1`.
    pub alpha_ratio_ok: bool,
    /// `min(ω3, ω4) > 0` at the evaluated lengths.
    pub omega_min_positive: bool,
    /// `B > A`.
    pub b_exceeds_a: bool,
    /// `0 < L1, L2 ≤ π/(2κ)`.
    pub lengths_in_range: bool,
}

pub fn check_constraints(config: &SystemConfig, l1: f64, l2: f64) -> P1Constraints {
    let lmax = max_length(config.kappa());
    let in_range = |l: f64| l > 0.0 && l <= lmax;
    let lengths_in_range = in_range(l1) && in_range(l2);
    let omega_min_positive = lengths_in_range && {
        let k = config.kappa();
        let eps = coefficients_from_fractions(fraction(l1, k), fraction(l2, k), config.efficiency());
        sop_from_coefficients(config, &eps).omega_set.min_u2() > 0.0
    };
    let a = &config.allocation;
    P1Constraints {
        alpha_ratio_ok: a.alpha1 / a.alpha2 > config.gamma1(),
        omega_min_positive,
        b_exceeds_a: config.coeff_b() > config.coeff_a(),
        lengths_in_range,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// Both Ω1 and Ω2 reach 1: a zero-outage region.
    Case1,
    /// Only Ω1 reaches 1.
    Case2,
    /// Only Ω2 reaches 1.
    Case3,
    /// Neither reaches 1.
    Case4,
    /// The grid sweep beat every closed-form candidate.
    GridFallback,
    /// `α1/α2 ≤ γ1`: outage is certain.
    Infeasible,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Case1 => "case1",
            CaseTag::Case2 => "case2",
            CaseTag::Case3 => "case3",
            CaseTag::Case4 => "case4",
            CaseTag::GridFallback => "grid_fallback",
            CaseTag::Infeasible => "infeasible",
        }
    }
}

/// A single optimal length or an open interval of optimal lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthChoice {
    Point(f64),
    Interval { lo: f64, hi: f64 },
}

impl LengthChoice {
    /// The representative length: the point itself or the interval midpoint.
    pub fn representative(&self) -> f64 {
        match *self {
            LengthChoice::Point(l) => l,
            LengthChoice::Interval { lo, hi } => 0.5 * (lo + hi),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            LengthChoice::Point(l) => (l, l),
            LengthChoice::Interval { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerResult {
    pub case_tag: CaseTag,
    pub l1: LengthChoice,
    pub l2: LengthChoice,
    pub min_sop: f64,
    /// Lengths at which `certificate` was evaluated.
    pub certified: CouplingLengths,
    pub certificate: SopBreakdown,
    pub constraints: P1Constraints,
}

/// Scalars shared by the case formulas.
#[derive(Debug, Clone, Copy)]
struct Terms {
    /// `F ρt`
    p: f64,
    a: f64,
    b: f64,
    f: f64,
    d2: f64,
    /// `d² + D1²/4`
    q1: f64,
    /// `d² + D2²/4`
    q2: f64,
    kappa: f64,
    lmax: f64,
}

impl Terms {
    fn new(config: &SystemConfig) -> Self {
        let f = config.efficiency();
        let d2 = config.height().powi(2);
        let s1 = config.geometry.cell1_side();
        let s2 = config.geometry.cell2_side();
        Self {
            p: f * config.rho_t(),
            a: config.coeff_a(),
            b: config.coeff_b(),
            f,
            d2,
            q1: d2 + s1 * s1 / 4.0,
            q2: d2 + s2 * s2 / 4.0,
            kappa: config.kappa(),
            lmax: max_length(config.kappa()),
        }
    }

    fn m(&self) -> f64 {
        self.a.min(self.b)
    }

    /// Smallest `r` with `ω2 ≥ D1²/4`.
    fn r_omega2_full(&self) -> f64 {
        self.q1 / (self.b * self.p)
    }

    /// Largest `r` with `ω1 ≤ 0`.
    fn r_omega1_silent(&self) -> f64 {
        self.d2 / (self.a * self.p)
    }

    fn omega1_can_reach_one(&self) -> bool {
        self.a > 0.0 && self.b > 0.0 && self.r_omega2_full() <= self.r_omega1_silent().min(1.0)
    }

    fn omega2_can_reach_one(&self) -> bool {
        self.m() * self.p > self.q2
    }

    /// Smallest `t` giving Ω2 = 1 once PA-1 has taken fraction `r`.
    fn t_for_omega2_full(&self, r: f64) -> f64 {
        self.q2 / (self.m() * self.p * (1.0 - self.f * r))
    }
}

/// Zero-outage region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case1Region {
    pub r_lo: f64,
    pub r_hi: f64,
    pub l1_lo: f64,
    pub l1_hi: f64,
    #[serde(skip)]
    terms_q2: f64,
    #[serde(skip)]
    terms_mp: f64,
    #[serde(skip)]
    f: f64,
    #[serde(skip)]
    kappa: f64,
}

impl Case1Region {
    /// Interval of `L2` giving Ω2 = 1 for a chosen `L1`; upper end `π/(2κ)`
    /// is admissible. `None` when no `L2` works.
    pub fn l2_interval(&self, l1: f64) -> Option<(f64, f64)> {
        let r = fraction(l1, self.kappa);
        let t = self.terms_q2 / (self.terms_mp * (1.0 - self.f * r));
        (t.is_finite() && t > 0.0 && t <= 1.0)
            .then(|| (length_for_fraction(t, self.kappa), max_length(self.kappa)))
    }
}

pub fn case1_region(config: &SystemConfig) -> Option<Case1Region> {
    let t = Terms::new(config);
    if !(t.a > 0.0 && t.b > 0.0 && t.p > 0.0) {
        return None;
    }
    let lo = t.r_omega2_full();
    let hi = ((1.0 - t.q2 / (t.m() * t.p)) / t.f).min(1.0).min(t.r_omega1_silent());
    if !(lo < hi) || lo > 1.0 {
        return None;
    }
    Some(Case1Region {
        r_lo: lo,
        r_hi: hi,
        l1_lo: length_for_fraction(lo, t.kappa),
        l1_hi: length_for_fraction(hi, t.kappa),
        terms_q2: t.q2,
        terms_mp: t.m() * t.p,
        f: t.f,
        kappa: t.kappa,
    })
}

/// Smallest representable `L1` at which Ω1 = 1, starting from the
/// analytic estimate.
fn minimal_full_l1(config: &SystemConfig, estimate: f64) -> Option<f64> {
    let k = config.kappa();
    let full = |l1: f64| {
        let eps = coefficients_from_fractions(fraction(l1, k), 1.0, config.efficiency());
        sop_from_coefficients(config, &eps).branch1 == Omega1Branch::Whole
    };
    let mut l = estimate;
    for _ in 0..64 {
        if full(l) {
            break;
        }
        l = l.next_up();
    }
    if !full(l) {
        return None;
    }
    for _ in 0..64 {
        let prev = l.next_down();
        if prev > 0.0 && full(prev) {
            l = prev;
        } else {
            break;
        }
    }
    Some(l)
}

/// Ω1 reaches 1 with the least power on PA-1; all the rest goes to PA-2.
/// Returns `(L1, L2)`, or `None` when Ω1 cannot reach 1.
pub fn case2_optimum(config: &SystemConfig) -> Option<(f64, f64)> {
    let t = Terms::new(config);
    if !t.omega1_can_reach_one() {
        return None;
    }
    let l1 = minimal_full_l1(config, length_for_fraction(t.r_omega2_full(), t.kappa))?;
    (l1 <= t.lmax).then_some((l1, t.lmax))
}

/// Ω2 reaches 1 but Ω1 cannot. Returns `L1` and the `L2` interval.
pub fn case3_optimum(config: &SystemConfig) -> Option<(f64, (f64, f64))> {
    let t = Terms::new(config);
    if !(t.b > 0.0 && t.m() > 0.0) || t.omega1_can_reach_one() || !t.omega2_can_reach_one() {
        return None;
    }
    let r = t.r_omega2_full();
    if r > 1.0 {
        return None;
    }
    let t_lo = t.t_for_omega2_full(r);
    if !(t_lo > 0.0 && t_lo <= 1.0) {
        return None;
    }
    Some((
        length_for_fraction(r, t.kappa),
        (length_for_fraction(t_lo, t.kappa), t.lmax),
    ))
}

/// Approximate stationary point `r₀ = (BFρt − d²)/(2BF²ρt)`, valid when
/// `ω1, ω2 ≫ 0`.
pub fn case4_seed(config: &SystemConfig) -> f64 {
    let t = Terms::new(config);
    (t.b * t.p - t.d2) / (2.0 * t.b * t.f * t.p)
}

/// Open interval of `r` where Ω1 is in its band form (`0 < ω1 < ω2 < D1²/4`)
/// and Ω2's radicand is positive at `t = 1`.
pub fn case4_interval(config: &SystemConfig) -> Option<(f64, f64)> {
    let t = Terms::new(config);
    if !(t.a > 0.0 && t.b > t.a && t.p > 0.0) {
        return None;
    }
    let lo = t.r_omega1_silent();
    let mp = t.m() * t.p;
    let hi = t.r_omega2_full().min((mp - t.d2) / (mp * t.f)).min(1.0);
    (lo < hi).then_some((lo, hi))
}

/// `g(r) = (√(BPr − d²) − √(APr − d²))² · (min(A,B) P (1 − Fr) − d²)`,
/// proportional to `(Ω1 Ω2)²` inside [`case4_interval`].
pub fn case4_objective(config: &SystemConfig, r: f64) -> f64 {
    let t = Terms::new(config);
    let (u, _, v, _) = case4_parts(&t, r);
    u * v
}

/// `(u, u', v, v')` with `g = u v`.
fn case4_parts(t: &Terms, r: f64) -> (f64, f64, f64, f64) {
    let w2 = (t.b * t.p * r - t.d2).max(0.0);
    let w1 = (t.a * t.p * r - t.d2).max(0.0);
    let (s2, s1) = (w2.sqrt(), w1.sqrt());
    let diff = s2 - s1;
    let u = diff * diff;
    let ds2 = if s2 > 0.0 { t.b * t.p / (2.0 * s2) } else { f64::INFINITY };
    let ds1 = if s1 > 0.0 { t.a * t.p / (2.0 * s1) } else { f64::INFINITY };
    let du = 2.0 * diff * (ds2 - ds1);
    let mp = t.m() * t.p;
    let v = mp * (1.0 - t.f * r) - t.d2;
    let dv = -mp * t.f;
    (u, du, v, dv)
}

fn case4_slope(t: &Terms, r: f64) -> f64 {
    let (u, du, v, dv) = case4_parts(t, r);
    du * v + u * dv
}

/// Result of the Case-4 line search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Case4Solution {
    pub l1: f64,
    pub l2: f64,
    /// Optimal `r = sin²(κ L1)`.
    pub r: f64,
    /// The approximate seed the search started from.
    pub seed: f64,
}

/// Neither Ω can reach 1. Searches `r` inside [`case4_interval`]: the
/// derivative sign of `g` is scanned, every `+ → −` bracket is bisected, and
/// the best of those roots, the clamped seed and the interval ends is kept.
/// `L2 = π/(2κ)`.
pub fn case4_optimum(config: &SystemConfig) -> Option<Case4Solution> {
    let t = Terms::new(config);
    let (lo, hi) = case4_interval(config)?;
    let seed = case4_seed(config);

    let mut candidates = vec![lo, hi];
    if seed > lo && seed < hi {
        candidates.push(seed);
    }
    let width = hi - lo;
    let nodes: Vec<f64> = (1..SCAN_INTERVALS).map(|i| lo + width * i as f64 / SCAN_INTERVALS as f64).collect();
    let slopes: Vec<f64> = nodes.iter().map(|&r| case4_slope(&t, r)).collect();
    // The slope is −∞ at `lo`; treat the interval ends as nodes too.
    let mut bracket_nodes = vec![(lo, f64::NEG_INFINITY)];
    bracket_nodes.extend(nodes.iter().copied().zip(slopes.iter().copied()));
    bracket_nodes.push((hi, case4_slope(&t, hi)));
    for pair in bracket_nodes.windows(2) {
        let ((mut a, sa), (mut b, sb)) = (pair[0], pair[1]);
        if sa > 0.0 && sb <= 0.0 {
            for _ in 0..BISECTION_MAX_ITERATIONS {
                if b - a <= BISECTION_TOLERANCE {
                    break;
                }
                let mid = 0.5 * (a + b);
                if case4_slope(&t, mid) > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            candidates.push(0.5 * (a + b));
        }
    }

    let success = |r: f64| {
        let eps = coefficients_from_fractions(r, 1.0, t.f);
        let s = sop_from_coefficients(config, &eps);
        s.prob_omega1 * s.prob_omega2
    };
    let mut best = candidates[0];
    let mut best_val = success(best);
    for &r in &candidates[1..] {
        let v = success(r);
        if v > best_val {
            best = r;
            best_val = v;
        }
    }
    let l1 = length_for_fraction(best, t.kappa);
    (l1 > 0.0).then_some(Case4Solution {
        l1,
        l2: t.lmax,
        r: best,
        seed,
    })
}

/// Case-4 companion for `ω1 ≤ 0`: there Ω1 Ω2 ∝ `h(r) = (BPr − d²)(MP(1 − Fr) − d²)`,
/// a concave quadratic whose vertex is clamped to the band where both
/// factors are in their disc form. Returns `(L1, L2)`.
pub fn case4_inner_optimum(config: &SystemConfig) -> Option<(f64, f64)> {
    let t = Terms::new(config);
    if !(t.a > 0.0 && t.b > 0.0 && t.p > 0.0) || t.omega1_can_reach_one() || t.omega2_can_reach_one() {
        return None;
    }
    let bp = t.b * t.p;
    let mp = t.m() * t.p;
    let lo = t.d2 / bp;
    let hi = t.r_omega1_silent().min(t.r_omega2_full()).min((mp - t.d2) / (mp * t.f)).min(1.0);
    if !(lo < hi) {
        return None;
    }
    let vertex = (bp * (mp - t.d2) + mp * t.f * t.d2) / (2.0 * bp * mp * t.f);
    let r = vertex.clamp(lo, hi);
    Some((length_for_fraction(r, t.kappa), t.lmax))
}

/// Minimum over `L_i = k π/(2κ n)`, `k = 1..=n`; ties keep the first point
/// in row-major `(L1, L2)` order.
pub fn grid_minimum(config: &SystemConfig, n: usize) -> (f64, CouplingLengths) {
    let kappa = config.kappa();
    let lmax = max_length(kappa);
    let at = |i: usize| lmax * i as f64 / n as f64;
    let rows: Vec<(f64, usize)> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let r = fraction(at(i), kappa);
            let mut best = (f64::INFINITY, 0);
            for j in 1..=n {
                let eps = coefficients_from_fractions(r, fraction(at(j), kappa), config.efficiency());
                let s = sop_from_coefficients(config, &eps).sop;
                if s < best.0 {
                    best = (s, j);
                }
            }
            best
        })
        .collect();
    let (mut best_sop, mut bi, mut bj) = (f64::INFINITY, 1, 1);
    for (i, &(s, j)) in rows.iter().enumerate() {
        if s < best_sop {
            best_sop = s;
            bi = i + 1;
            bj = j;
        }
    }
    let l1 = at(bi).min(lmax);
    let l2 = at(bj).min(lmax);
    (best_sop, CouplingLengths::new(l1, l2, kappa).expect("grid point inside the length box"))
}

/// Solves the minimum-SOP coupling-length problem.
pub fn solve_p1(config: &SystemConfig) -> OptimizerResult {
    let kappa = config.kappa();
    let lmax = max_length(kappa);
    let finish = |case_tag: CaseTag, l1: LengthChoice, l2: LengthChoice| -> OptimizerResult {
        let certified = CouplingLengths::new(l1.representative(), l2.representative(), kappa)
            .expect("optimizer lengths inside the length box");
        let certificate = sop_closed_form(config, &certified);
        OptimizerResult {
            case_tag,
            l1,
            l2,
            min_sop: certificate.sop,
            certified,
            certificate,
            constraints: check_constraints(config, certified.l1(), certified.l2()),
        }
    };

    if !check_constraints(config, lmax, lmax).alpha_ratio_ok {
        return finish(CaseTag::Infeasible, LengthChoice::Point(0.5 * lmax), LengthChoice::Point(lmax));
    }

    if let Some(region) = case1_region(config) {
        let l1 = 0.5 * (region.l1_lo + region.l1_hi);
        if let Some((l2_lo, l2_hi)) = region.l2_interval(l1) {
            let result = finish(
                CaseTag::Case1,
                LengthChoice::Interval { lo: region.l1_lo, hi: region.l1_hi },
                LengthChoice::Interval { lo: l2_lo, hi: l2_hi },
            );
            if result.min_sop == 0.0 {
                return result;
            }
        }
    }

    let mut candidates = Vec::new();
    if let Some((l1, l2)) = case2_optimum(config) {
        candidates.push(finish(CaseTag::Case2, LengthChoice::Point(l1), LengthChoice::Point(l2)));
    }
    if let Some((l1, (lo, hi))) = case3_optimum(config) {
        candidates.push(finish(CaseTag::Case3, LengthChoice::Point(l1), LengthChoice::Interval { lo, hi }));
    }
    if let Some(s) = case4_optimum(config) {
        candidates.push(finish(CaseTag::Case4, LengthChoice::Point(s.l1), LengthChoice::Point(s.l2)));
    }
    if let Some((l1, l2)) = case4_inner_optimum(config) {
        candidates.push(finish(CaseTag::Case4, LengthChoice::Point(l1), LengthChoice::Point(l2)));
    }

    let mut best: Option<OptimizerResult> = None;
    for c in candidates {
        if best.is_none_or(|b| c.min_sop < b.min_sop) {
            best = Some(c);
        }
    }

    let (grid_sop, grid_lengths) = grid_minimum(config, GRID_POINTS);
    match best {
        Some(b) if grid_sop >= b.min_sop - GRID_MARGIN => b,
        _ => finish(
            CaseTag::GridFallback,
            LengthChoice::Point(grid_lengths.l1()),
            LengthChoice::Point(grid_lengths.l2()),
        ),
    }
}
