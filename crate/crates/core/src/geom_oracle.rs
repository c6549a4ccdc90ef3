//! Brute-force geometry on the circle. Linear maps `x -> a x`, `x -> b x`
//! (mod 1) are handled with exact rationals: coincidence points are listed,
//! labelled by winding, and counted by least level. Three nonlinear examples
//! run in floating point with explicit tolerances.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use crate::circle::CirclePair;
use crate::divisor::divisors;
use crate::error::{Error, Result};
use crate::reidemeister::check_divides;
use crate::scalar::{ipow, IntScalar};

/// A point of `R/Z`, kept in `[0, 1)`.
pub type CirclePoint<T> = Ratio<T>;

/// Linear representatives of degrees `a` (for `f`) and `b` (for `g`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearPair<T> {
    pub a: T,
    pub b: T,
}

impl<T: IntScalar> LinearPair<T> {
    pub fn new(a: T, b: T) -> Self {
        LinearPair { a, b }
    }

    /// `b^n - a^n`.
    pub fn relation(&self, n: u64) -> T {
        ipow(&self.b, n) - ipow(&self.a, n)
    }

    fn nondegenerate(&self, n: u64) -> Result<T> {
        let d = self.relation(n);
        if d.is_zero() {
            Err(Error::DegenerateLevel(n))
        } else {
            Ok(d)
        }
    }
}

impl LinearPair<i64> {
    pub fn small(a: i64, b: i64) -> Self {
        LinearPair { a, b }
    }
}

impl From<&CirclePair> for LinearPair<crate::Int> {
    fn from(p: &CirclePair) -> Self {
        LinearPair {
            a: p.a.clone(),
            b: p.b.clone(),
        }
    }
}

/// Representative of `x` in `[0, 1)`.
pub fn wrap<T: IntScalar>(x: &Ratio<T>) -> Ratio<T> {
    x - x.floor()
}

/// `{k / (b^n - a^n) mod 1}`, exactly `|b^n - a^n|` points.
pub fn coincidence_points<T: IntScalar>(p: &LinearPair<T>, n: u64) -> Result<BTreeSet<CirclePoint<T>>> {
    let d = p.nondegenerate(n)?;
    let count = d.abs();
    let mut out = BTreeSet::new();
    let mut k = T::zero();
    while k < count {
        out.insert(wrap(&Ratio::new(k.clone(), d.clone())));
        k = k + T::one();
    }
    Ok(out)
}

/// `(b^n - a^n) x` reduced mod `|b^n - a^n|`: the winding of `g^n c` against
/// `f^n c` along the straight path `c` from 0 to `x`.
pub fn class_label<T: IntScalar>(p: &LinearPair<T>, n: u64, x: &CirclePoint<T>) -> Result<T> {
    let d = p.nondegenerate(n)?;
    let y = x * Ratio::from_integer(d.clone());
    if !y.is_integer() {
        return Err(Error::NotCoincidence(x.to_string(), n));
    }
    Ok(y.to_integer().reduce_mod(&d))
}

/// Is `x` a coincidence point of `f^n`, `g^n`?
pub fn is_coincidence<T: IntScalar>(p: &LinearPair<T>, n: u64, x: &CirclePoint<T>) -> bool {
    (x * Ratio::from_integer(p.relation(n))).is_integer()
}

/// Number of level-`n` coincidence points that are coincidences at no proper
/// divisor level.
pub fn oracle_mp<T: IntScalar>(p: &LinearPair<T>, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroLevel);
    }
    let proper: Vec<u64> = divisors(n).into_iter().filter(|&m| m != n).collect();
    for &m in proper.iter().chain([n].iter()) {
        p.nondegenerate(m)?;
    }
    Ok(coincidence_points(p, n)?
        .iter()
        .filter(|x| !proper.iter().any(|&m| is_coincidence(p, m, x)))
        .count() as u64)
}

/// `sum_{l=0}^{n/m-1} b^{n-(l+1)m} a^{lm}` over the scalar type.
pub fn linear_iota<T: IntScalar>(p: &LinearPair<T>, m: u64, n: u64) -> Result<T> {
    check_divides(m, n)?;
    Ok((0..n / m).fold(T::zero(), |acc, l| {
        acc + ipow(&p.b, n - (l + 1) * m) * ipow(&p.a, l * m)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoostCheck {
    pub m: u64,
    pub n: u64,
    pub iota: String,
    pub points_checked: u64,
    /// Level-`m` points where the square fails, as strings.
    pub failures: Vec<String>,
}

impl BoostCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `label_n(x) = iota_{m,n} label_m(x) (mod b^n - a^n)` at every level-`m`
/// coincidence point.
pub fn oracle_boost_check<T: IntScalar>(p: &LinearPair<T>, m: u64, n: u64) -> Result<BoostCheck> {
    let iota = linear_iota(p, m, n)?;
    let dn = p.nondegenerate(n)?;
    p.nondegenerate(m)?;
    let mut failures = Vec::new();
    let points = coincidence_points(p, m)?;
    for x in &points {
        let lhs = class_label(p, n, x)?;
        let rhs = (iota.clone() * class_label(p, m, x)?).reduce_mod(&dn);
        if lhs != rhs {
            failures.push(x.to_string());
        }
    }
    Ok(BoostCheck {
        m,
        n,
        iota: iota.to_string(),
        points_checked: points.len() as u64,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapChoice {
    F,
    G,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory<T: IntScalar> {
    /// Distinct iterates in order, starting at the seed.
    pub points: Vec<CirclePoint<T>>,
    /// Length of the eventual cycle, if one closed within the cap.
    pub cycle_length: Option<usize>,
}

/// Iterates `x` under `f` or `g` until a point repeats or `cap` points are seen.
pub fn trajectory<T: IntScalar>(p: &LinearPair<T>, x: &CirclePoint<T>, map: MapChoice, cap: usize) -> Trajectory<T> {
    let deg = Ratio::from_integer(match map {
        MapChoice::F => p.a.clone(),
        MapChoice::G => p.b.clone(),
    });
    let mut points: Vec<CirclePoint<T>> = Vec::new();
    let mut cur = wrap(x);
    while points.len() < cap {
        if let Some(i) = points.iter().position(|q| q == &cur) {
            return Trajectory {
                cycle_length: Some(points.len() - i),
                points,
            };
        }
        points.push(cur.clone());
        cur = wrap(&(&cur * &deg));
    }
    Trajectory {
        cycle_length: points.iter().position(|q| q == &cur).map(|i| points.len() - i),
        points,
    }
}

/// The three nonlinear worked examples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonlinearDemo {
    /// `f` of degree -1 and `g` a rotation by `epsilon`.
    McExample { epsilon: Ratio<i64> },
    /// `f(x) = 2x`, `g(x) = x^epsilon` with `q` from `z^5 - 4z^3 + 1 = 0`.
    Nondivide,
    /// Degrees 4 and -3.
    NoOrbits2,
}

impl NonlinearDemo {
    pub fn all() -> Vec<NonlinearDemo> {
        vec![
            NonlinearDemo::McExample {
                epsilon: Ratio::new(1, 10),
            },
            NonlinearDemo::Nondivide,
            NonlinearDemo::NoOrbits2,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            NonlinearDemo::McExample { .. } => "mcexample",
            NonlinearDemo::Nondivide => "nondivide",
            NonlinearDemo::NoOrbits2 => "noorbits2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoAssertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoReport {
    pub name: String,
    /// Named numeric outputs, rendered as strings.
    pub values: Vec<(String, String)>,
    pub assertions: Vec<DemoAssertion>,
}

impl DemoReport {
    fn new(name: &str) -> Self {
        DemoReport {
            name: name.to_string(),
            values: Vec::new(),
            assertions: Vec::new(),
        }
    }

    fn value(&mut self, name: &str, v: impl ToString) {
        self.values.push((name.to_string(), v.to_string()));
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.assertions.push(DemoAssertion {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.values.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }
}

/// Verification tolerance for the floating-point demos.
pub const DEMO_TOLERANCE: f64 = 1e-9;
/// Bracket width at which bisection stops.
pub const BISECTION_WIDTH: f64 = 1e-12;

pub fn run_demo(d: &NonlinearDemo) -> Result<DemoReport> {
    match d {
        NonlinearDemo::McExample { epsilon } => mcexample(*epsilon),
        NonlinearDemo::Nondivide => nondivide(),
        NonlinearDemo::NoOrbits2 => noorbits2(),
    }
}

/// Solutions of `c theta = e (mod 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Congruence {
    Points(Vec<Ratio<i64>>),
    /// Every point is a solution (`c = 0`, `e` integral).
    Everything,
}

pub fn solve_circle_congruence(c: i64, e: Ratio<i64>) -> Congruence {
    if c == 0 {
        return if e.is_integer() {
            Congruence::Everything
        } else {
            Congruence::Points(Vec::new())
        };
    }
    let mut pts: Vec<Ratio<i64>> = (0..c.abs())
        .map(|j| wrap(&((e + Ratio::from_integer(j)) / Ratio::from_integer(c))))
        .collect();
    pts.sort();
    pts.dedup();
    Congruence::Points(pts)
}

fn mcexample(epsilon: Ratio<i64>) -> Result<DemoReport> {
    if (epsilon * 2).is_integer() {
        return Err(Error::Parse(format!(
            "mcexample needs 2*epsilon not an integer, got {epsilon}"
        )));
    }
    let mut r = DemoReport::new("mcexample");
    r.value("epsilon", epsilon);
    // f^n(theta) = (-1)^n theta, g^n(theta) = theta + n epsilon
    let level = |n: i64| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        solve_circle_congruence(sign - 1, epsilon * n)
    };
    match level(1) {
        Congruence::Points(pts) => {
            let ok = pts.iter().all(|t| wrap(&(-*t)) == wrap(&(*t + epsilon)));
            r.value("level1_points", fmt_points(&pts));
            r.check(
                "two_points_at_level_1",
                pts.len() == 2 && ok,
                format!("{} points", pts.len()),
            );
        }
        Congruence::Everything => r.check("two_points_at_level_1", false, "every point coincides"),
    }
    let empty = level(2) == Congruence::Points(Vec::new());
    r.check(
        "no_points_at_level_2",
        empty,
        format!("0*theta = {} (mod 1) has no solution", epsilon * 2),
    );
    // Nielsen numbers of the linearizations: |deg g^n - deg f^n|
    let (deg_f, deg_g) = (-1i64, 1i64);
    let nielsen = |n: u32| (deg_g.pow(n) - deg_f.pow(n)).abs();
    let (n1, n2) = (nielsen(1), nielsen(2));
    r.value("N(f,g)", n1);
    r.value("N(f^2,g^2)", n2);
    r.check("algebraic_counts", n1 == 2 && n2 == 0, "N(f,g) = 2, N(f^2,g^2) = 0");
    Ok(r)
}

fn fmt_points(pts: &[Ratio<i64>]) -> String {
    let s: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", s.join(", "))
}

/// Root of `h` in `[lo, hi]` by bisection down to [`BISECTION_WIDTH`].
pub fn bisect(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (mut hlo, hhi) = (h(lo), h(hi));
    if hlo == 0.0 {
        return Ok(lo);
    }
    if hhi == 0.0 {
        return Ok(hi);
    }
    if hlo.signum() == hhi.signum() {
        return Err(Error::RootFinding(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        if hi - lo <= BISECTION_WIDTH {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        let hm = h(mid);
        if hm == 0.0 {
            return Ok(mid);
        }
        if hm.signum() == hlo.signum() {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    Err(Error::RootFinding("bisection did not converge".into()))
}

fn dist_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Lift endpoints of `f^k c` and `g^k c` for the path `c = [0, q]`, using the
/// level model `g^k(x) = x^{k epsilon}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingAtLevel {
    pub k: u32,
    pub f_end: f64,
    pub g_end: f64,
}

impl WindingAtLevel {
    /// Image path passes through the identified endpoint.
    pub fn f_crosses(&self) -> bool {
        self.f_end >= 1.0
    }

    pub fn g_crosses(&self) -> bool {
        self.g_end >= 1.0
    }

    pub fn difference(&self) -> i64 {
        (self.f_end - self.g_end).round() as i64
    }
}

pub fn nondivide_winding(q: f64, eps: f64, k: u32) -> WindingAtLevel {
    WindingAtLevel {
        k,
        f_end: 2f64.powi(k as i32) * q,
        g_end: q.powf(k as f64 * eps),
    }
}

fn nondivide() -> Result<DemoReport> {
    let mut r = DemoReport::new("nondivide");
    let z = bisect(|z| z.powi(5) - 4.0 * z.powi(3) + 1.0, 0.6, 0.7)?;
    let q = z.powi(3) / 8.0;
    let eps = (8.0 * q).ln() / (3.0 * q.ln());
    r.value("z", format!("{z:.12}"));
    r.value("q", format!("{q:.12}"));
    r.value("epsilon", format!("{eps:.12}"));

    // printed to four decimals
    r.check("q_approx_0.0349", (q - 0.0349).abs() < 1e-4, format!("q = {q:.6}"));
    r.check(
        "epsilon_approx_0.1265",
        (eps - 0.1265).abs() < 1e-4,
        format!("epsilon = {eps:.6}"),
    );

    let f = |k: u32| (2f64.powi(k as i32) * q).rem_euclid(1.0);
    let g = |k: u32| q.powf(k as f64 * eps);
    let res3 = (f(3) - g(3)).abs();
    let res5 = dist_to_integer(f(5) - g(5));
    let gap1 = dist_to_integer(f(1) - g(1));
    r.value("residual_level_3", format!("{res3:.3e}"));
    r.value("residual_level_5", format!("{res5:.3e}"));
    r.check(
        "coincidence_at_level_3",
        res3 < DEMO_TOLERANCE,
        format!("|f^3(q) - g^3(q)| = {res3:.3e}"),
    );
    r.check(
        "coincidence_at_level_5",
        res5 < DEMO_TOLERANCE,
        format!("|f^5(q) - g^5(q) mod 1| = {res5:.3e}"),
    );
    r.check(
        "not_a_coincidence_at_level_1",
        gap1 > DEMO_TOLERANCE,
        format!("|f(q) - g(q)| = {gap1:.6}"),
    );
    // composing x^epsilon with itself gives x^{epsilon^3}, not the level model
    r.value("literal_g3_of_q", format!("{:.12}", q.powf(eps.powi(3))));

    let w3 = nondivide_winding(q, eps, 3);
    let w5 = nondivide_winding(q, eps, 5);
    r.check(
        "equivalent_at_level_3",
        !w3.f_crosses() && !w3.g_crosses() && w3.difference() == 0,
        format!(
            "endpoints {:.6} and {:.6}, winding difference {}",
            w3.f_end,
            w3.g_end,
            w3.difference()
        ),
    );
    r.check(
        "inequivalent_at_level_5",
        w5.f_crosses() && !w5.g_crosses() && w5.difference().abs() == 1,
        format!(
            "endpoints {:.6} and {:.6}, winding difference {}",
            w5.f_end,
            w5.g_end,
            w5.difference()
        ),
    );
    Ok(r)
}

fn noorbits2() -> Result<DemoReport> {
    let mut r = DemoReport::new("noorbits2");
    let p = LinearPair::small(4, -3);
    let pts = coincidence_points(&p, 1)?;
    r.value("level1_points", fmt_points(&pts.iter().copied().collect::<Vec<_>>()));
    r.check(
        "seven_points_at_level_1",
        pts.len() == 7,
        format!("{} points", pts.len()),
    );
    let seed = Ratio::new(1, 7);
    let tf = trajectory(&p, &seed, MapChoice::F, 64);
    let tg = trajectory(&p, &seed, MapChoice::G, 64);
    r.value("trajectory_f", fmt_points(&tf.points));
    r.value("trajectory_g", fmt_points(&tg.points));
    let expected = vec![Ratio::new(1, 7), Ratio::new(4, 7), Ratio::new(2, 7)];
    r.check(
        "trajectory_of_one_seventh",
        tf.points == expected && tf.cycle_length == Some(3),
        format!("cycle length {:?}", tf.cycle_length),
    );
    let sf: BTreeSet<_> = tf.points.iter().collect();
    let sg: BTreeSet<_> = tg.points.iter().collect();
    r.check("f_and_g_orbits_agree", sf == sg, "same three points under g");
    Ok(r)
}

/// `f64` view of a point, for display.
pub fn approx<T: IntScalar>(x: &CirclePoint<T>) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}
