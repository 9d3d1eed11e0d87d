//! Exact event algebra on the unit circle.
//!
//! Angles are rational fractions of a full turn, so every representable
//! endpoint is rational and every measure below is an exact rational.  An
//! event is a finite union of half-open arcs `[start, end)` adjusted by
//! finitely many added or removed points; the canonical form is unique per
//! point set, so set equality is structural equality.

use crate::parse::{Cursor, ParseError};
use crate::scalar::{rat, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("an arc needs distinct endpoints; use 'full' or 'empty'")]
    DegenerateArc,
}

/// Position on the circle as a fraction of a full turn, reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Angle(Rat);

impl Angle {
    /// Wraps any rational number of turns into `[0, 1)`.
    pub fn new(turns: Rat) -> Self {
        let f = turns.floor();
        Angle(turns - f)
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn rotated(&self, theta: &Angle) -> Self {
        Angle::new(&self.0 + &theta.0)
    }

    /// The two preimages under the angle-doubling map `x -> 2x mod 1`.
    pub fn doubling_preimages(&self) -> (Angle, Angle) {
        let half = &self.0 / rat(2, 1);
        (Angle(half.clone()), Angle(half + rat(1, 2)))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Half-open arc `[start, end)`; when `end <= start` it wraps past the top of
/// the circle.  The full circle and the empty set are not arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    start: Angle,
    end: Angle,
}

impl Arc {
    pub fn new(start: Angle, end: Angle) -> Result<Self, EventError> {
        if start == end {
            return Err(EventError::DegenerateArc);
        }
        Ok(Arc { start, end })
    }

    pub fn start(&self) -> &Angle {
        &self.start
    }

    pub fn end(&self) -> &Angle {
        &self.end
    }

    pub fn length(&self) -> Rat {
        let d = self.end.value() - self.start.value();
        if d.is_positive() {
            d
        } else {
            d + Rat::one()
        }
    }

    pub fn contains(&self, x: &Angle) -> bool {
        if self.start < self.end {
            self.start <= *x && *x < self.end
        } else {
            *x >= self.start || *x < self.end
        }
    }
}

/// Linear piece of the circle cut at 0: `0 <= start < end <= 1`.
type Span = (Rat, Rat);

fn normalize_spans(mut spans: Vec<Span>) -> Vec<Span> {
    spans.retain(|(s, e)| s < e);
    spans.sort();
    let mut out: Vec<Span> = Vec::with_capacity(spans.len());
    for (s, e) in spans {
        match out.last_mut() {
            Some((_, oe)) if s <= *oe => {
                if e > *oe {
                    *oe = e;
                }
            }
            _ => out.push((s, e)),
        }
    }
    out
}

fn in_spans(spans: &[Span], x: &Rat) -> bool {
    spans.iter().any(|(s, e)| s <= x && x < e)
}

/// Pointwise boolean combination, exact on the half-open ring: cut both span
/// lists at every endpoint and keep each elementary window where `f` holds.
fn combine_spans(a: &[Span], b: &[Span], f: impl Fn(bool, bool) -> bool) -> Vec<Span> {
    let mut cuts: BTreeSet<Rat> = BTreeSet::new();
    cuts.insert(Rat::zero());
    cuts.insert(Rat::one());
    for (s, e) in a.iter().chain(b) {
        cuts.insert(s.clone());
        cuts.insert(e.clone());
    }
    let cuts: Vec<Rat> = cuts.into_iter().collect();
    let mut out = Vec::new();
    for window in cuts.windows(2) {
        let mid = (&window[0] + &window[1]) / rat(2, 1);
        if f(in_spans(a, &mid), in_spans(b, &mid)) {
            out.push((window[0].clone(), window[1].clone()));
        }
    }
    normalize_spans(out)
}

/// Canonical event: disjoint sorted spans plus finite point corrections.
/// `added` points lie outside every span, `removed` points inside some span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleEvent {
    spans: Vec<Span>,
    added: BTreeSet<Angle>,
    removed: BTreeSet<Angle>,
}

impl CircleEvent {
    fn normalized(
        spans: Vec<Span>,
        plus: impl IntoIterator<Item = Angle>,
        minus: impl IntoIterator<Item = Angle>,
    ) -> Self {
        let spans = normalize_spans(spans);
        let plus: BTreeSet<Angle> = plus.into_iter().collect();
        let mut added = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for p in minus {
            if in_spans(&spans, p.value()) && !plus.contains(&p) {
                removed.insert(p);
            }
        }
        for p in plus {
            if !in_spans(&spans, p.value()) {
                added.insert(p);
            }
        }
        CircleEvent { spans, added, removed }
    }

    pub fn empty() -> Self {
        CircleEvent { spans: Vec::new(), added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn full() -> Self {
        CircleEvent {
            spans: vec![(Rat::zero(), Rat::one())],
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        }
    }

    pub fn point(p: Angle) -> Self {
        CircleEvent::normalized(Vec::new(), [p], [])
    }

    pub fn from_arc(arc: &Arc) -> Self {
        let s = arc.start().value().clone();
        let e = arc.end().value().clone();
        let spans = if s < e {
            vec![(s, e)]
        } else {
            // Wraps past the top; an end of 0 means "up to the top".
            vec![(s, Rat::one()), (Rat::zero(), e)]
        };
        CircleEvent::normalized(spans, [], [])
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty() && self.added.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.spans_are_full() && self.removed.is_empty()
    }

    fn spans_are_full(&self) -> bool {
        self.spans.len() == 1 && self.spans[0].0.is_zero() && self.spans[0].1.is_one()
    }

    pub fn contains(&self, x: &Angle) -> bool {
        if self.removed.contains(x) {
            return false;
        }
        if self.added.contains(x) {
            return true;
        }
        in_spans(&self.spans, x.value())
    }

    pub fn added_points(&self) -> impl Iterator<Item = &Angle> {
        self.added.iter()
    }

    pub fn removed_points(&self) -> impl Iterator<Item = &Angle> {
        self.removed.iter()
    }

    /// Added minus removed: the exact correction to the grid count of the
    /// underlying arc set.
    pub fn net_point_count(&self) -> i64 {
        self.added.len() as i64 - self.removed.len() as i64
    }

    /// The arcs of the canonical form.  Two spans meeting at the top of the
    /// circle rejoin into one wrapping arc.
    pub fn arcs(&self) -> Vec<Arc> {
        self.circular_arcs()
            .into_iter()
            .map(|(s, e)| {
                Arc::new(Angle::new(s), Angle::new(e)).expect("canonical spans are proper")
            })
            .collect()
    }

    /// Spans in circle form: `(start, end)` pairs sorted by start, with the
    /// pair touching the top merged into a single wrapping arc.  Ends may be
    /// `1` (top of the circle); a wrapping arc has `end < start`.
    fn circular_arcs(&self) -> Vec<(Rat, Rat)> {
        let mut spans = self.spans.clone();
        if spans.len() >= 2
            && spans.first().map_or(false, |(s, _)| s.is_zero())
            && spans.last().map_or(false, |(_, e)| e.is_one())
        {
            let first = spans.remove(0);
            let last = spans.pop().expect("len >= 2");
            spans.push((last.0, first.1));
        }
        spans
    }

    fn boolean(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let spans = combine_spans(&self.spans, &other.spans, &f);
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let corrections = self
            .added
            .iter()
            .chain(&self.removed)
            .chain(&other.added)
            .chain(&other.removed);
        for p in corrections {
            let desired = f(self.contains(p), other.contains(p));
            if desired {
                plus.push(p.clone());
            } else {
                minus.push(p.clone());
            }
        }
        CircleEvent::normalized(spans, plus, minus)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.boolean(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.boolean(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.boolean(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        CircleEvent::full().difference(self)
    }

    pub fn rotated(&self, theta: &Angle) -> Self {
        let mut spans = Vec::with_capacity(self.spans.len() + 1);
        for (s, e) in &self.spans {
            let len = e - s;
            let s = Angle::new(s + theta.value()).0;
            let e = &s + &len;
            if e <= Rat::one() {
                spans.push((s, e));
            } else {
                spans.push((s, Rat::one()));
                spans.push((Rat::zero(), e - Rat::one()));
            }
        }
        CircleEvent::normalized(
            spans,
            self.added.iter().map(|p| p.rotated(theta)),
            self.removed.iter().map(|p| p.rotated(theta)),
        )
    }

    /// Preimage under the angle-doubling map `x -> 2x mod 1`: two half-scale
    /// copies of the event, half a turn apart.
    pub fn doubling_preimage(&self) -> Self {
        let two = rat(2, 1);
        let half = rat(1, 2);
        let mut spans = Vec::with_capacity(2 * self.spans.len());
        for (s, e) in &self.spans {
            spans.push((s / &two, e / &two));
            spans.push((s / &two + &half, e / &two + &half));
        }
        let both = |set: &BTreeSet<Angle>| {
            set.iter()
                .flat_map(|p| {
                    let (a, b) = p.doubling_preimages();
                    [a, b]
                })
                .collect::<Vec<_>>()
        };
        CircleEvent::normalized(spans, both(&self.added), both(&self.removed))
    }

    /// Total arc length; point corrections are null.
    pub fn lebesgue(&self) -> Rat {
        self.spans
            .iter()
            .fold(Rat::zero(), |acc, (s, e)| acc + (e - s))
    }
}

impl fmt::Display for CircleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.spans_are_full() {
            write!(f, "full")?;
            first = false;
        } else {
            for (s, e) in self.circular_arcs() {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "arc({s},{e})")?;
                first = false;
            }
        }
        for p in &self.added {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "point({p})")?;
            first = false;
        }
        if first {
            write!(f, "empty")?;
            first = false;
        }
        let _ = first;
        for p in &self.removed {
            write!(f, " - point({p})")?;
        }
        Ok(())
    }
}

/// One term of an event expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventTerm {
    Arc(Angle, Angle),
    Point(Angle),
    Full,
    Empty,
}

impl EventTerm {
    pub fn to_event(&self) -> CircleEvent {
        match self {
            EventTerm::Arc(s, e) => {
                CircleEvent::from_arc(&Arc::new(s.clone(), e.clone()).expect("parser checked"))
            }
            EventTerm::Point(p) => CircleEvent::point(p.clone()),
            EventTerm::Full => CircleEvent::full(),
            EventTerm::Empty => CircleEvent::empty(),
        }
    }

    fn contains(&self, x: &Angle) -> bool {
        match self {
            EventTerm::Arc(s, e) => {
                if s < e {
                    s <= x && x < e
                } else {
                    x >= s || x < e
                }
            }
            EventTerm::Point(p) => p == x,
            EventTerm::Full => true,
            EventTerm::Empty => false,
        }
    }
}

/// Parsed event expression: terms combined left-to-right with `+` (union)
/// and `-` (difference).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventExpr {
    pub first: EventTerm,
    pub rest: Vec<(SetOp, EventTerm)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Difference,
}

impl EventExpr {
    pub fn to_event(&self) -> CircleEvent {
        let mut acc = self.first.to_event();
        for (op, term) in &self.rest {
            let t = term.to_event();
            acc = match op {
                SetOp::Union => acc.union(&t),
                SetOp::Difference => acc.difference(&t),
            };
        }
        acc
    }

    /// Membership read directly off the expression, with no canonical form
    /// involved; the oracle against which the event algebra is checked.
    pub fn naive_contains(&self, x: &Angle) -> bool {
        let mut acc = self.first.contains(x);
        for (op, term) in &self.rest {
            let t = term.contains(x);
            acc = match op {
                SetOp::Union => acc || t,
                SetOp::Difference => acc && !t,
            };
        }
        acc
    }
}

/// Parses `term (('+'|'-') term)*` with
/// `term := 'arc(' rat ',' rat ')' | 'point(' rat ')' | 'full' | 'empty'`.
/// Angle literals are multiplied by `scale` (for unit conversion) and then
/// wrapped into `[0, 1)`.
pub fn parse_event_scaled(src: &str, scale: &Rat) -> Result<EventExpr, ParseError> {
    let mut cur = Cursor::new(src);
    let first = parse_event_term(&mut cur, scale)?;
    let mut rest = Vec::new();
    loop {
        cur.skip_ws();
        let op = match cur.peek() {
            Some('+') => SetOp::Union,
            Some('-') => SetOp::Difference,
            _ => break,
        };
        cur.bump();
        rest.push((op, parse_event_term(&mut cur, scale)?));
    }
    cur.expect_end()?;
    Ok(EventExpr { first, rest })
}

/// Parses an event expression with angles in turns.
pub fn parse_event(src: &str) -> Result<EventExpr, ParseError> {
    parse_event_scaled(src, &Rat::one())
}

fn parse_event_term(cur: &mut Cursor, scale: &Rat) -> Result<EventTerm, ParseError> {
    cur.skip_ws();
    let pos = cur.pos();
    if cur.eat_word("arc") {
        cur.expect('(')?;
        let s = parse_angle(cur, scale)?;
        cur.expect(',')?;
        let e = parse_angle(cur, scale)?;
        cur.expect(')')?;
        if s == e {
            return Err(ParseError {
                pos,
                msg: "arc endpoints coincide; write 'full' or 'empty' instead".into(),
            });
        }
        return Ok(EventTerm::Arc(s, e));
    }
    if cur.eat_word("point") {
        cur.expect('(')?;
        let p = parse_angle(cur, scale)?;
        cur.expect(')')?;
        return Ok(EventTerm::Point(p));
    }
    if cur.eat_word("full") {
        return Ok(EventTerm::Full);
    }
    if cur.eat_word("empty") {
        return Ok(EventTerm::Empty);
    }
    Err(ParseError { pos, msg: "expected arc(...), point(...), full or empty".into() })
}

fn parse_angle(cur: &mut Cursor, scale: &Rat) -> Result<Angle, ParseError> {
    Ok(Angle::new(cur.parse_rat()? * scale))
}

impl FromStr for CircleEvent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        Ok(parse_event(s)?.to_event())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn ev(src: &str) -> CircleEvent {
        src.parse().unwrap()
    }

    fn ang(n: i64, d: i64) -> Angle {
        Angle::new(rat(n, d))
    }

    #[test]
    fn complement_of_half_is_other_half() {
        assert_eq!(ev("arc(0,1/2)").complement(), ev("arc(1/2,1)"));
    }

    #[test]
    fn adjacent_arcs_merge_to_full() {
        assert_eq!(ev("arc(0,1/2) + arc(1/2,1)"), CircleEvent::full());
    }

    #[test]
    fn intersection_keeps_point_corrections() {
        let got = ev("arc(0,1/2) - point(1/4)").intersect(&ev("arc(1/8,3/8)"));
        assert_eq!(got, ev("arc(1/8,3/8) - point(1/4)"));
        // Oracle: membership straight off the defining expressions.
        let lhs = parse_event("arc(0,1/2) - point(1/4)").unwrap();
        let rhs = parse_event("arc(1/8,3/8)").unwrap();
        for k in 0..=64 {
            let x = ang(k, 64);
            assert_eq!(
                got.contains(&x),
                lhs.naive_contains(&x) && rhs.naive_contains(&x)
            );
        }
        let quarter = ang(1, 4);
        assert!(!got.contains(&quarter));
    }

    #[test]
    fn rotation_shifts_and_wraps() {
        assert_eq!(ev("arc(0,1/4)").rotated(&ang(1, 2)), ev("arc(1/2,3/4)"));
        assert_eq!(ev("point(7/8)").rotated(&ang(1, 4)), ev("point(1/8)"));
        let a = ev("arc(1/3,2/3) + point(3/4) - point(1/2)");
        assert_eq!(a.rotated(&Angle::new(Rat::zero())), a);
    }

    #[test]
    fn doubling_preimage_splits_in_two() {
        let pre = ev("arc(0,1/2)").doubling_preimage();
        assert_eq!(pre, ev("arc(0,1/4) + arc(1/2,3/4)"));
        // Pointwise oracle on a 1/64 grid: y is in the preimage exactly when
        // 2y mod 1 is in the original.
        let a = ev("arc(0,1/2)");
        for k in 0..64 {
            let y = ang(k, 64);
            let doubled = Angle::new(y.value() * rat_int(2));
            assert_eq!(pre.contains(&y), a.contains(&doubled));
        }
        assert_eq!(
            ev("point(0)").doubling_preimage(),
            ev("point(0) + point(1/2)")
        );
        assert_eq!(CircleEvent::full().doubling_preimage(), CircleEvent::full());
    }

    #[test]
    fn lengths_are_exact() {
        assert_eq!(ev("arc(0,1/2)").lebesgue(), rat(1, 2));
        assert_eq!(ev("point(1/3)").lebesgue(), rat_int(0));
        // Wrapping arc splits as [3/4,1) + [0,1/4).
        assert_eq!(ev("arc(3/4,1/4)").lebesgue(), rat(1, 4) + rat(1, 4));
    }

    #[test]
    fn absorbed_and_vacuous_corrections_normalize_away() {
        // A point added at the closed endpoint is absorbed by the arc; at
        // the open endpoint it survives as a correction.
        assert_eq!(ev("arc(0,1/2) + point(0)"), ev("arc(0,1/2)"));
        assert_ne!(ev("arc(0,1/2) + point(1/2)"), ev("arc(0,1/2)"));
        // Removing a point that is not there changes nothing.
        assert_eq!(ev("arc(0,1/4) - point(1/2)"), ev("arc(0,1/4)"));
    }

    #[test]
    fn renders_canonically_and_round_trips() {
        for src in [
            "empty",
            "full",
            "full - point(0)",
            "arc(0,1/3)",
            "arc(1/2,1)",
            "arc(3/4,1/4)",
            "arc(1/8,3/8) + arc(1/2,5/8) + point(7/8) - point(1/4)",
        ] {
            let e = ev(src);
            assert_eq!(e.to_string(), src);
            assert_eq!(ev(&e.to_string()), e);
        }
    }

    #[test]
    fn degenerate_arc_is_a_parse_error() {
        let err = parse_event("arc(1/3,1/3)").unwrap_err();
        assert!(err.msg.contains("coincide"));
        // 1 wraps to 0, so arc(0,1) is degenerate too.
        assert!(parse_event("arc(0,1)").is_err());
    }

    #[test]
    fn boolean_laws_hold_on_samples() {
        let a = ev("arc(0,1/2) - point(1/4) + point(3/4)");
        let b = ev("arc(1/3,2/3) + point(5/6)");
        // De Morgan and double complement.
        assert_eq!(
            a.union(&b).complement(),
            a.complement().intersect(&b.complement())
        );
        assert_eq!(a.complement().complement(), a);
        // Absorption.
        assert_eq!(a.union(&a.intersect(&b)), a);
    }
}
