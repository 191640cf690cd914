//! Piecewise-linear order automorphisms of the half-line `[0, ∞)` and the
//! interval `E = {f : x ≤ f(x) ≤ 2x}` with the partial sum `f + g = f∘g`
//! whenever the composite stays in `E`.
//!
//! Maps are anchored at `0 ↦ 0` and given by breakpoints and one slope per
//! segment, the last segment being unbounded. All arithmetic is exact.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

/// Exact ordered field elements usable as coordinates.
pub trait Scalar: Clone + Ord + num_traits::Num + fmt::Display + fmt::Debug {}

impl<T: Clone + Ord + num_traits::Num + fmt::Display + fmt::Debug> Scalar for T {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlError {
    #[error("expected {expected} slopes for {breakpoints} breakpoints, got {got}")]
    SlopeCount {
        breakpoints: usize,
        expected: usize,
        got: usize,
    },
    #[error("breakpoints must be positive and strictly increasing")]
    Breakpoints,
    #[error("slopes must be positive")]
    Slopes,
    #[error("operand {0} is not in the interval [id, 2x]")]
    OutsideInterval(&'static str),
    #[error("malformed map: {0}")]
    Format(String),
}

/// A strictly increasing continuous piecewise-linear bijection of `[0, ∞)`.
///
/// Always kept in normal form (no two adjacent segments share a slope), so
/// structural equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlMap<T> {
    breakpoints: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Scalar> PlMap<T> {
    pub fn new(breakpoints: Vec<T>, slopes: Vec<T>) -> Result<Self, PlError> {
        if slopes.len() != breakpoints.len() + 1 {
            return Err(PlError::SlopeCount {
                breakpoints: breakpoints.len(),
                expected: breakpoints.len() + 1,
                got: slopes.len(),
            });
        }
        let increasing = breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !increasing || breakpoints.first().is_some_and(|b| *b <= T::zero()) {
            return Err(PlError::Breakpoints);
        }
        if slopes.iter().any(|s| *s <= T::zero()) {
            return Err(PlError::Slopes);
        }
        Ok(Self::normalized(breakpoints, slopes))
    }

    fn normalized(breakpoints: Vec<T>, slopes: Vec<T>) -> Self {
        let mut bs = Vec::with_capacity(breakpoints.len());
        let mut ss = vec![slopes[0].clone()];
        for (b, s) in breakpoints.into_iter().zip(slopes.into_iter().skip(1)) {
            if ss.last() != Some(&s) {
                bs.push(b);
                ss.push(s);
            }
        }
        PlMap {
            breakpoints: bs,
            slopes: ss,
        }
    }

    /// `x ↦ c·x`.
    pub fn linear(c: T) -> Result<Self, PlError> {
        Self::new(Vec::new(), vec![c])
    }

    pub fn identity() -> Self {
        PlMap {
            breakpoints: Vec::new(),
            slopes: vec![T::one()],
        }
    }

    /// `x ↦ 2x`, the top of `E`.
    pub fn doubling() -> Self {
        PlMap {
            breakpoints: Vec::new(),
            slopes: vec![T::one() + T::one()],
        }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    /// Value at `x ≥ 0`.
    pub fn eval(&self, x: &T) -> T {
        let mut start = T::zero();
        let mut value = T::zero();
        for (b, s) in self.breakpoints.iter().zip(&self.slopes) {
            if x <= b {
                return value + s.clone() * (x.clone() - start);
            }
            value = value + s.clone() * (b.clone() - start);
            start = b.clone();
        }
        let last = self.slopes.last().expect("at least one segment");
        value + last.clone() * (x.clone() - start)
    }

    /// The unique `x` with `f(x) = y`, for `y ≥ 0`.
    pub fn inverse_eval(&self, y: &T) -> T {
        let mut start = T::zero();
        let mut value = T::zero();
        for (b, s) in self.breakpoints.iter().zip(&self.slopes) {
            let next = value.clone() + s.clone() * (b.clone() - start.clone());
            if *y <= next {
                return start + (y.clone() - value) / s.clone();
            }
            value = next;
            start = b.clone();
        }
        let last = self.slopes.last().expect("at least one segment");
        start + (y.clone() - value) / last.clone()
    }

    /// `0`, the breakpoints, the midpoint of every bounded segment and one
    /// point on the unbounded tail, in increasing order.
    pub fn sample_points(&self) -> Vec<T> {
        let two = T::one() + T::one();
        let mut points = vec![T::zero()];
        let mut prev = T::zero();
        for b in &self.breakpoints {
            points.push((prev.clone() + b.clone()) / two.clone());
            points.push(b.clone());
            prev = b.clone();
        }
        points.push(prev + T::one());
        points
    }
}

/// `f∘g`, exact, in normal form.
pub fn pl_compose<T: Scalar>(f: &PlMap<T>, g: &PlMap<T>) -> PlMap<T> {
    let mut points: Vec<T> = g.breakpoints.clone();
    points.extend(f.breakpoints.iter().map(|b| g.inverse_eval(b)));
    points.sort();
    points.dedup();
    let mut slopes = Vec::with_capacity(points.len() + 1);
    let mut start = T::zero();
    let mut value = T::zero();
    for p in &points {
        let v = f.eval(&g.eval(p));
        slopes.push((v.clone() - value) / (p.clone() - start));
        start = p.clone();
        value = v;
    }
    let tail =
        f.slopes.last().expect("segment").clone() * g.slopes.last().expect("segment").clone();
    slopes.push(tail);
    PlMap::normalized(points, slopes)
}

/// Which side of `x ≤ f(x) ≤ 2x` fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `f(x) < x`
    Lower,
    /// `f(x) > 2x`
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalViolation<T> {
    pub x: T,
    pub value: T,
    pub bound: Bound,
}

impl<T: Scalar> fmt::Display for IntervalViolation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bound {
            Bound::Lower => write!(f, "at x = {}: value {} < x", self.x, self.value),
            Bound::Upper => {
                let two = T::one() + T::one();
                write!(
                    f,
                    "at x = {}: value {} > 2x = {}",
                    self.x,
                    self.value,
                    two * self.x.clone()
                )
            }
        }
    }
}

fn violation_at<T: Scalar>(f: &PlMap<T>, x: &T) -> Option<IntervalViolation<T>> {
    let value = f.eval(x);
    let two = T::one() + T::one();
    let bound = if value < *x {
        Bound::Lower
    } else if value > two * x.clone() {
        Bound::Upper
    } else {
        return None;
    };
    Some(IntervalViolation {
        x: x.clone(),
        value,
        bound,
    })
}

/// Whether `x ≤ f(x) ≤ 2x` on all of `[0, ∞)`: vertex checks plus `1 ≤ slope ≤ 2`
/// on the tail decide it exactly.
pub fn pl_in_unit_interval<T: Scalar>(f: &PlMap<T>) -> bool {
    let two = T::one() + T::one();
    let tail = f.slopes.last().expect("segment");
    let tail_ok = *tail >= T::one() && *tail <= two;
    tail_ok && f.breakpoints.iter().all(|b| violation_at(f, b).is_none())
}

/// Failures of `x ≤ f(x) ≤ 2x` among [`PlMap::sample_points`].
pub fn pl_interval_violations<T: Scalar>(f: &PlMap<T>) -> Vec<IntervalViolation<T>> {
    f.sample_points()
        .iter()
        .filter_map(|x| violation_at(f, x))
        .collect()
}

/// `f + g = f∘g` when `f, g ∈ E` and the composite is in `E`; `Ok(None)` when undefined.
pub fn pl_sum<T: Scalar>(f: &PlMap<T>, g: &PlMap<T>) -> Result<Option<PlMap<T>>, PlError> {
    if !pl_in_unit_interval(f) {
        return Err(PlError::OutsideInterval("f"));
    }
    if !pl_in_unit_interval(g) {
        return Err(PlError::OutsideInterval("g"));
    }
    let h = pl_compose(f, g);
    Ok(pl_in_unit_interval(&h).then_some(h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncommutativityReport<T> {
    pub f_plus_g: Option<PlMap<T>>,
    pub g_plus_f: Option<PlMap<T>>,
    /// Where `g∘f` leaves `E`, when it does.
    pub g_after_f_violations: Vec<IntervalViolation<T>>,
}

impl<T: Scalar> NoncommutativityReport<T> {
    /// `f + g ≠ g + f`, counting "one side undefined" as different.
    pub fn is_noncommutative(&self) -> bool {
        self.f_plus_g != self.g_plus_f
    }
}

impl<T: Scalar> fmt::Display for NoncommutativityReport<T> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.f_plus_g {
            Some(h) => writeln!(out, "f+g defined: f∘g = {h}")?,
            None => writeln!(out, "f+g undefined")?,
        }
        match &self.g_plus_f {
            Some(h) => writeln!(out, "g+f defined: g∘f = {h}")?,
            None => writeln!(out, "g+f undefined")?,
        }
        for v in &self.g_after_f_violations {
            writeln!(out, "  g∘f leaves [id, 2x]: {v}")?;
        }
        Ok(())
    }
}

/// The pair `f = (slope 2 on [0,1], then 1)`, `g = (slope 1 on [0,1], 2 on [1,2], then 1)`.
pub fn witness_pair<T: Scalar>() -> (PlMap<T>, PlMap<T>) {
    let one = T::one();
    let two = one.clone() + one.clone();
    let f = PlMap::new(vec![one.clone()], vec![two.clone(), one.clone()]).expect("valid");
    let g = PlMap::new(vec![one.clone(), two.clone()], vec![one.clone(), two, one]).expect("valid");
    (f, g)
}

pub fn pl_noncommutativity_witness<T: Scalar>() -> (PlMap<T>, PlMap<T>, NoncommutativityReport<T>) {
    let (f, g) = witness_pair::<T>();
    let f_plus_g = pl_sum(&f, &g).expect("witness operands lie in E");
    let g_plus_f = pl_sum(&g, &f).expect("witness operands lie in E");
    let g_after_f_violations = pl_interval_violations(&pl_compose(&g, &f));
    let report = NoncommutativityReport {
        f_plus_g,
        g_plus_f,
        g_after_f_violations,
    };
    (f, g, report)
}

impl<T: Scalar> fmt::Display for PlMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut start = T::zero();
        let mut parts = Vec::new();
        for (b, s) in self.breakpoints.iter().zip(&self.slopes) {
            parts.push(format!("slope {s} on [{start},{b}]"));
            start = b.clone();
        }
        let last = self.slopes.last().expect("segment");
        parts.push(format!("slope {last} on [{start},∞)"));
        write!(f, "{}", parts.join(", "))
    }
}

impl<T: Scalar + FromStr> PlMap<T> {
    /// `{"breakpoints": ["1","3/2"], "slopes": ["2","1","1"]}`.
    pub fn to_json(&self) -> Value {
        let strings = |v: &[T]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "breakpoints": strings(&self.breakpoints),
            "slopes": strings(&self.slopes),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self, PlError> {
        let field = |name: &str| -> Result<Vec<T>, PlError> {
            value
                .get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| PlError::Format(format!("missing array \"{name}\"")))?
                .iter()
                .map(|v| {
                    let s = match v {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(PlError::Format(format!("bad number {v}"))),
                    };
                    s.trim()
                        .parse()
                        .map_err(|_| PlError::Format(format!("bad rational \"{s}\"")))
                })
                .collect()
        };
        Self::new(field("breakpoints")?, field("slopes")?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn map(bs: &[&str], ss: &[&str]) -> PlMap<Rational> {
        PlMap::new(
            bs.iter().map(|s| q(s)).collect(),
            ss.iter().map(|s| q(s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn constants_are_in_e() {
        assert!(pl_in_unit_interval(&PlMap::<Rational>::identity()));
        assert!(pl_in_unit_interval(&PlMap::<Rational>::doubling()));
        assert!(!pl_in_unit_interval(&map(&[], &["3"])));
        assert!(!pl_in_unit_interval(&map(&["1"], &["2", "3"])));
    }

    #[test]
    fn normal_form_merges_slopes() {
        let m = map(&["1", "2"], &["2", "2", "1"]);
        assert_eq!(m.breakpoints(), &[q("2")]);
        assert!(PlMap::<Rational>::new(vec![q("2"), q("1")], vec![q("1"); 3]).is_err());
        assert!(PlMap::<Rational>::new(vec![], vec![q("0")]).is_err());
    }

    #[test]
    fn composition() {
        let f = map(&["1"], &["2", "1"]);
        let id = PlMap::identity();
        assert_eq!(pl_compose(&f, &id), f);
        assert_eq!(pl_compose(&id, &f), f);
        let d = PlMap::<Rational>::doubling();
        assert_eq!(pl_compose(&d, &d), map(&[], &["4"]));
        let g = map(&["2"], &["1", "3/2"]);
        let h = pl_compose(&f, &g);
        for x in ["0", "1/3", "1", "3/2", "2", "7"] {
            assert_eq!(h.eval(&q(x)), f.eval(&g.eval(&q(x))));
        }
    }

    #[test]
    fn inverse() {
        let g = map(&["1", "2"], &["1", "2", "1"]);
        for y in ["0", "1/2", "1", "2", "3", "10"] {
            assert_eq!(g.eval(&g.inverse_eval(&q(y))), q(y));
        }
    }

    #[test]
    fn sums() {
        let one = PlMap::<Rational>::doubling();
        let zero = PlMap::identity();
        assert_eq!(pl_sum(&zero, &one).unwrap(), Some(one.clone()));
        assert_eq!(pl_sum(&one, &one).unwrap(), None);
        assert!(pl_sum(&map(&[], &["3"]), &zero).is_err());
    }

    #[test]
    fn witness() {
        let (f, g, report) = pl_noncommutativity_witness::<Rational>();
        assert_eq!(f.eval(&q("3/4")), q("3/2"));
        let fg = report.f_plus_g.clone().unwrap();
        assert_eq!(fg, map(&["2"], &["2", "1"]));
        assert!(report.g_plus_f.is_none());
        assert!(report.is_noncommutative());
        let bad: Vec<_> = report
            .g_after_f_violations
            .iter()
            .map(|v| v.x.clone())
            .collect();
        assert!(bad.contains(&q("3/4")));
        assert!(bad.contains(&q("1")));
        assert_eq!(pl_compose(&g, &f).eval(&q("3/4")), q("2"));
    }

    #[test]
    fn json_roundtrip() {
        let m = map(&["1", "3/2"], &["2", "1", "3/2"]);
        let v = m.to_json();
        assert_eq!(v["breakpoints"][1], "3/2");
        assert_eq!(PlMap::from_json(&v).unwrap(), m);
        assert!(PlMap::<Rational>::from_json(&json!({"breakpoints": []})).is_err());
    }
}
