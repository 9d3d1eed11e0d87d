//! The spinner probability measures.
//!
//! A grid of `2n` equally spaced points carries the uniform measure
//! `|A| / (2n)`; the normalized length measure lives on the rational-arc
//! events of [`crate::circle`]; and the hyperfinite model replays the grid
//! construction with a symbolic grid size `2N`, producing exact values in
//! [`crate::HyperRat`] that are infinitely close to the length measure while
//! staying regular (only the empty event gets probability zero).
//!
//! The `alpha` transform (`pruss_*`) rescales the infinitesimal part of a
//! probability.  It preserves order and infinite closeness, but its total
//! singleton mass comes out to `alpha`, so it is additive over the grid only
//! at `alpha = 1`; [`additivity_defect`] returns that exact gap.

use crate::circle::{Angle, CircleEvent};
use crate::hyper::{HyperError, Magnitude};
use crate::poly::Polynomial;
use crate::report::{CheckRecord, Report};
use crate::scalar::{Int, Rat};
use crate::HyperRat;
use num_traits::{One, Zero};
use rand_core::{RngCore, SeedableRng};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("grid parameter must be at least 1")]
    InvalidGrid,
    #[error("index {index} is out of range for a grid of {size} points")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("{n} does not divide {m}")]
    NotADivisor { n: u64, m: u64 },
    #[error("need 0 <= h < k <= 2n")]
    BadArcBounds,
    #[error("a random subset sample is required when the grid has more than 12 points")]
    SampleRequired,
    #[error("conditioning set is empty")]
    EmptySample,
    #[error("alpha must be positive")]
    AlphaNotPositive,
    #[error(transparent)]
    Hyper(#[from] HyperError),
}

/// The grid of `2n` rotation stops `k/(2n)`, `0 <= k < 2n`, in turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteGrid {
    n: u64,
}

impl FiniteGrid {
    pub fn new(n: u64) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidGrid);
        }
        Ok(FiniteGrid { n })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of grid points, `2n`.
    pub fn size(&self) -> u64 {
        2 * self.n
    }

    pub fn point(&self, index: u64) -> Angle {
        Angle::new(Rat::new(Int::from(index % self.size()), Int::from(self.size())))
    }

    pub fn subset(&self, indices: impl IntoIterator<Item = u64>) -> Result<FiniteEvent, ModelError> {
        let mut set = BTreeSet::new();
        for index in indices {
            if index >= self.size() {
                return Err(ModelError::IndexOutOfRange { index, size: self.size() });
            }
            set.insert(index);
        }
        Ok(FiniteEvent { n: self.n, indices: set })
    }

    pub fn full(&self) -> FiniteEvent {
        FiniteEvent { n: self.n, indices: (0..self.size()).collect() }
    }

    /// The grid points lying in a circle event.
    pub fn restrict(&self, event: &CircleEvent) -> FiniteEvent {
        FiniteEvent {
            n: self.n,
            indices: (0..self.size()).filter(|&k| event.contains(&self.point(k))).collect(),
        }
    }
}

/// A subset of the grid `S_n`, stored as point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteEvent {
    n: u64,
    indices: BTreeSet<u64>,
}

impl FiniteEvent {
    pub fn grid(&self) -> FiniteGrid {
        FiniteGrid { n: self.n }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.indices.iter().copied()
    }

    /// Uniform probability `|A| / (2n)`.
    pub fn probability(&self) -> Rat {
        Rat::new(Int::from(self.indices.len()), Int::from(2 * self.n))
    }

    /// Probability under the angle-doubling spinner, computed on the finer
    /// grid `S_{2n}`: each point pulls back to its two halves there.  Agrees
    /// with [`Self::probability`] exactly.
    pub fn doubled_probability(&self) -> Rat {
        let fine = FiniteGrid { n: 2 * self.n };
        let preimage = self
            .indices
            .iter()
            .flat_map(|&k| [k, k + 2 * self.n])
            .collect::<BTreeSet<u64>>();
        FiniteEvent { n: fine.n, indices: preimage }.probability()
    }
}

/// How a sweep over subsets picks its cases.
#[derive(Debug, Clone, Copy)]
pub enum SubsetSample {
    /// All `2^(2n)` subsets; only allowed for grids of at most 12 points.
    Exhaustive,
    /// Seeded random subsets, each point kept with probability 1/2.
    Random { cases: u32, seed: u64 },
}

/// Checks that refining the grid `S_n` to `S_m` (with `n | m`) preserves
/// probabilities: `P_n(A)` equals `P_m` of the pull-back of `A` along the
/// point map `x -> (m/n) x mod 1`.
pub fn compatibility_report(n: u64, m: u64, sample: SubsetSample) -> Result<Report, ModelError> {
    let coarse = FiniteGrid::new(n)?;
    let fine = FiniteGrid::new(m)?;
    if m % n != 0 {
        return Err(ModelError::NotADivisor { n, m });
    }
    let mut report = Report::new(format!("grid-compatibility n={n} m={m}"));
    let mut run = |report: &mut Report, mask_bits: &BTreeSet<u64>, label: &str| {
        // Pull-back: the fine point j/(2m) maps to the coarse point with
        // index j mod 2n, so membership is decided by that residue.
        let coarse_event = coarse.subset(mask_bits.iter().copied()).expect("in range");
        let preimage = fine
            .subset((0..fine.size()).filter(|j| mask_bits.contains(&(j % coarse.size()))))
            .expect("in range");
        let lhs = coarse_event.probability();
        let rhs = preimage.probability();
        let pass = lhs == rhs;
        if !pass || coarse.size() <= 6 {
            report.push(CheckRecord::new(
                "refinement preserves probability",
                format!("n={n} m={m} A={label}"),
                lhs.to_string(),
                rhs.to_string(),
                pass,
            ));
        }
        pass
    };
    let (total, failures) = match sample {
        SubsetSample::Exhaustive => {
            if coarse.size() > 12 {
                return Err(ModelError::SampleRequired);
            }
            let mut failures = 0usize;
            let count = 1u64 << coarse.size();
            for mask in 0..count {
                let bits: BTreeSet<u64> =
                    (0..coarse.size()).filter(|k| mask >> k & 1 == 1).collect();
                if !run(&mut report, &bits, &format!("{mask:#x}")) {
                    failures += 1;
                }
            }
            (count as usize, failures)
        }
        SubsetSample::Random { cases, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut failures = 0usize;
            for case in 0..cases {
                let bits: BTreeSet<u64> =
                    (0..coarse.size()).filter(|_| rng.next_u64() & 1 == 1).collect();
                if !run(&mut report, &bits, &format!("random #{case}")) {
                    failures += 1;
                }
            }
            (cases as usize, failures)
        }
    };
    report.push(CheckRecord::new(
        "all subsets agree",
        format!("n={n} m={m}"),
        format!("{} of {total} subsets agree", total - failures),
        format!("{total} of {total} subsets agree"),
        failures == 0,
    ));
    Ok(report)
}

/// Checks the grid/length coherence identity: the arc `[h/(2n), k/(2n))`
/// has length measure equal to the grid probability of its `k - h` points,
/// both being `(k-h)/(2n)`.
pub fn grid_coherence_report(n: u64, h: u64, k: u64) -> Result<Report, ModelError> {
    let grid = FiniteGrid::new(n)?;
    if !(h < k && k <= grid.size()) {
        return Err(ModelError::BadArcBounds);
    }
    let arc_event = if h == 0 && k == grid.size() {
        CircleEvent::full()
    } else {
        let start = grid.point(h);
        let end = grid.point(k % grid.size());
        CircleEvent::from_arc(&crate::circle::Arc::new(start, end).expect("h < k"))
    };
    let lhs = arc_event.lebesgue();
    let rhs = grid.subset(h..k)?.probability();
    let expected = Rat::new(Int::from(k - h), Int::from(grid.size()));
    let mut report = Report::new(format!("grid-coherence n={n} h={h} k={k}"));
    report.push(CheckRecord::equality(
        "arc length matches (k-h)/(2n)",
        format!("n={n} h={h} k={k}"),
        &lhs,
        &expected,
    ));
    report.push(CheckRecord::equality(
        "grid probability matches (k-h)/(2n)",
        format!("n={n} h={h} k={k}"),
        &rhs,
        &expected,
    ));
    Ok(report)
}

/// The symbolic hyperfinite spinner: the grid construction at size `2N`,
/// where `N` is treated as an unboundedly large integer divisible by every
/// positive integer.  Divisibility puts every rational angle on the grid, so
/// arcs hold exactly `2N * length` points and every point has mass `1/(2N)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HyperfiniteModel;

impl HyperfiniteModel {
    /// Modeling assumption carried by every report this model produces.
    pub const ASSUMPTION: &'static str =
        "hyperfinite grid of 2N points, N divisible by every positive integer";

    /// `2N`, the internal number of grid points.
    pub fn grid_size(&self) -> HyperRat {
        HyperRat::from_poly(Polynomial::monomial(Rat::from_integer(Int::from(2)), 1))
    }

    /// `1/(2N)`, the mass of one grid point.
    pub fn singleton_mass(&self) -> HyperRat {
        self.grid_size().recip().expect("2N is nonzero")
    }

    fn measure_with_mass(&self, event: &CircleEvent, mass: &HyperRat) -> HyperRat {
        let arcs = HyperRat::constant(event.lebesgue());
        let correction = HyperRat::constant(Rat::from_integer(Int::from(event.net_point_count())));
        &arcs + &(&correction * mass)
    }

    /// Exact probability of an event on the symbolic grid: arc length plus
    /// `1/(2N)` per added point, minus `1/(2N)` per removed point.
    pub fn probability(&self, event: &CircleEvent) -> HyperRat {
        self.measure_with_mass(event, &self.singleton_mass())
    }

    /// Probability under the angle-doubling spinner: the event pulls back
    /// through the doubling map onto the grid of `4N` points, where each
    /// point weighs `1/(4N)`.  Agrees with [`Self::probability`] exactly.
    pub fn doubled_probability(&self, event: &CircleEvent) -> HyperRat {
        let fine_mass = (&self.grid_size() + &self.grid_size())
            .recip()
            .expect("4N is nonzero");
        self.measure_with_mass(&event.doubling_preimage(), &fine_mass)
    }

    fn stamp(&self, report: &mut Report) {
        report.note(Self::ASSUMPTION);
    }
}

/// Positive scale factor for the infinitesimal part of a probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrussAlpha {
    alpha: Rat,
}

impl PrussAlpha {
    pub fn new(alpha: Rat) -> Result<Self, ModelError> {
        if alpha <= Rat::zero() {
            return Err(ModelError::AlphaNotPositive);
        }
        Ok(PrussAlpha { alpha })
    }

    pub fn value(&self) -> &Rat {
        &self.alpha
    }
}

/// `st(p) + alpha * (p - st(p))`: keeps the standard part, rescales the
/// infinitesimal part.  Errors on infinite input, which has no standard part.
pub fn pruss_transform(p: &HyperRat, alpha: &PrussAlpha) -> Result<HyperRat, ModelError> {
    let st = HyperRat::constant(p.standard_part()?);
    let scale = HyperRat::constant(alpha.value().clone());
    Ok(&st + &(&scale * &(p - &st)))
}

/// The exact amount by which the transformed measure fails to add up over
/// the grid: the sum of the `2N` transformed singleton masses is `alpha`
/// while the transformed total mass is `1`, so the defect is `alpha - 1`,
/// zero exactly when `alpha = 1`.
pub fn additivity_defect(alpha: &PrussAlpha) -> Rat {
    let model = HyperfiniteModel;
    let singleton = pruss_transform(&model.singleton_mass(), alpha).expect("mass is finite");
    let sum_over_grid = &model.grid_size() * &singleton;
    let total = pruss_transform(&HyperRat::one(), alpha).expect("1 is finite");
    let defect = &sum_over_grid - &total;
    debug_assert!(matches!(defect.classify(), Magnitude::Zero | Magnitude::Appreciable));
    defect.standard_part().expect("defect is a constant")
}

/// For each event pair, the transform must induce the same comparison as the
/// original probability and sit infinitely close to it.
pub fn pruss_order_report(
    model: &HyperfiniteModel,
    alpha: &PrussAlpha,
    pairs: &[(CircleEvent, CircleEvent)],
) -> Report {
    let mut report = Report::new(format!("pruss-order alpha={}", alpha.value()));
    model.stamp(&mut report);
    for (a, b) in pairs {
        let pa = model.probability(a);
        let pb = model.probability(b);
        let ta = pruss_transform(&pa, alpha).expect("probabilities are finite");
        let tb = pruss_transform(&pb, alpha).expect("probabilities are finite");
        report.push(CheckRecord::new(
            "transform preserves comparison",
            format!("A = {a}; B = {b}"),
            format!("{:?}", ta.cmp_eventual(&tb)),
            format!("{:?}", pa.cmp_eventual(&pb)),
            ta.cmp_eventual(&tb) == pa.cmp_eventual(&pb),
        ));
        for (label, p, t) in [("A", &pa, &ta), ("B", &pb, &tb)] {
            let gap = &(t - p);
            let class = gap.classify();
            report.push(CheckRecord::new(
                "transform stays infinitely close",
                format!("{label} = {}", if label == "A" { a } else { b }),
                format!("{class:?}"),
                "Zero or Infinitesimal".to_string(),
                matches!(class, Magnitude::Zero | Magnitude::Infinitesimal),
            ));
        }
    }
    report
}

/// The standard part of the hyperfinite probability equals the length
/// measure exactly, so the two are infinitely close.
pub fn coherence_report(model: &HyperfiniteModel, events: &[CircleEvent]) -> Report {
    let mut report = Report::new("hyperfinite-coherence");
    model.stamp(&mut report);
    for event in events {
        let p = model.probability(event);
        let st = p.standard_part().expect("probabilities are finite");
        let length = event.lebesgue();
        report.push(CheckRecord::equality(
            "standard part equals length measure",
            event.to_string(),
            &st,
            &length,
        ));
        let gap = &p - &HyperRat::constant(length);
        report.push(CheckRecord::new(
            "gap to length measure is infinitesimal",
            event.to_string(),
            format!("{:?}", gap.classify()),
            "Zero or Infinitesimal".to_string(),
            matches!(gap.classify(), Magnitude::Zero | Magnitude::Infinitesimal),
        ));
    }
    report
}

/// Rotating by any representable (hence rational) angle preserves the
/// hyperfinite probability exactly: divisibility keeps the grid invariant.
pub fn symmetry_report(model: &HyperfiniteModel, cases: &[(CircleEvent, Angle)]) -> Report {
    let mut report = Report::new("rotation-symmetry");
    model.stamp(&mut report);
    for (event, theta) in cases {
        let p = model.probability(event);
        let rotated = model.probability(&event.rotated(theta));
        report.push(CheckRecord::equality(
            "rotation preserves probability",
            format!("event = {event}; theta = {theta}"),
            &rotated,
            &p,
        ));
    }
    report
}

/// Only the empty event gets probability zero; every nonempty event weighs
/// at least one grid point.
pub fn regularity_report(model: &HyperfiniteModel, events: &[CircleEvent]) -> Report {
    let mut report = Report::new("regularity");
    model.stamp(&mut report);
    let mass = model.singleton_mass();
    for event in events {
        let p = model.probability(event);
        let pass = if event.is_empty() {
            p.is_zero()
        } else {
            !p.is_zero() && p.cmp_eventual(&mass) != std::cmp::Ordering::Less
        };
        report.push(CheckRecord::new(
            "zero probability only for the empty event",
            event.to_string(),
            p.to_string(),
            if event.is_empty() { "0".to_string() } else { format!(">= {mass}") },
            pass,
        ));
    }
    report
}

/// The finite conditional `|lambda ∩ A| / |lambda|`: the quantity whose
/// limit along ever larger finite subsets defines a measure on the full
/// sample space.  Only these finite stages are computable.
pub fn finite_conditional(
    event: &CircleEvent,
    lambda: &BTreeSet<Angle>,
) -> Result<Rat, ModelError> {
    if lambda.is_empty() {
        return Err(ModelError::EmptySample);
    }
    let hits = lambda.iter().filter(|p| event.contains(p)).count();
    Ok(Rat::new(Int::from(hits), Int::from(lambda.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn ev(src: &str) -> CircleEvent {
        src.parse().unwrap()
    }

    fn h(src: &str) -> HyperRat {
        src.parse().unwrap()
    }

    #[test]
    fn grid_probability_is_counting() {
        let g3 = FiniteGrid::new(3).unwrap();
        assert_eq!(g3.subset([0]).unwrap().probability(), rat(1, 6));
        assert_eq!(g3.full().probability(), rat_int(1));
        let g4 = FiniteGrid::new(4).unwrap();
        assert_eq!(g4.subset([0, 2, 4, 6]).unwrap().probability(), rat(1, 2));
        assert_eq!(
            g4.subset([0, 9]),
            Err(ModelError::IndexOutOfRange { index: 9, size: 8 })
        );
        assert_eq!(FiniteGrid::new(0), Err(ModelError::InvalidGrid));
    }

    #[test]
    fn doubled_spinner_agrees_with_plain_grid() {
        let g3 = FiniteGrid::new(3).unwrap();
        assert_eq!(g3.subset([0]).unwrap().doubled_probability(), rat(1, 6));
        let g2 = FiniteGrid::new(2).unwrap();
        assert_eq!(g2.full().doubled_probability(), rat_int(1));
        // Preimage enumeration in S_10: indices {1,3} pull back to
        // {1, 3, 11, 13} out of 20 points.
        let g5 = FiniteGrid::new(5).unwrap();
        assert_eq!(g5.subset([1, 3]).unwrap().doubled_probability(), rat(1, 5));
    }

    #[test]
    fn compatibility_examples() {
        let r = compatibility_report(2, 4, SubsetSample::Exhaustive).unwrap();
        assert!(r.passed());
        // 16 subsets plus the summary record.
        assert_eq!(r.checks.len(), 17);
        assert!(compatibility_report(3, 3, SubsetSample::Exhaustive).unwrap().passed());
        assert_eq!(
            compatibility_report(3, 5, SubsetSample::Exhaustive),
            Err(ModelError::NotADivisor { n: 3, m: 5 })
        );
        assert_eq!(
            compatibility_report(7, 14, SubsetSample::Exhaustive),
            Err(ModelError::SampleRequired)
        );
        assert!(compatibility_report(
            7,
            14,
            SubsetSample::Random { cases: 25, seed: 7 }
        )
        .unwrap()
        .passed());
    }

    #[test]
    fn coherence_examples() {
        for (n, hh, kk) in [(3, 0, 3), (1, 0, 2), (4, 2, 7)] {
            let r = grid_coherence_report(n, hh, kk).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
        let r = grid_coherence_report(4, 2, 7).unwrap();
        assert_eq!(r.checks[0].value, "5/8");
        assert_eq!(grid_coherence_report(3, 3, 3), Err(ModelError::BadArcBounds));
        assert_eq!(grid_coherence_report(3, 0, 7), Err(ModelError::BadArcBounds));
    }

    #[test]
    fn hyperfinite_probability_values() {
        let model = HyperfiniteModel;
        assert_eq!(model.probability(&ev("arc(0,1/2)")), h("1/2"));
        assert_eq!(model.probability(&ev("point(1/3)")), h("1/(2*N)"));
        assert_eq!(model.probability(&ev("full - point(0)")), h("(2*N-1)/(2*N)"));
        assert_eq!(model.probability(&CircleEvent::empty()), HyperRat::zero());
    }

    #[test]
    fn hyperfinite_arc_value_stabilizes_on_finite_grids() {
        // Oracle for arc(0,1/2): every grid whose size clears the endpoint
        // denominators gives exactly 1/2, so the symbolic value is 1/2.
        let arc = ev("arc(0,1/2)");
        for n in [2u64, 4, 6, 8] {
            let grid = FiniteGrid::new(n).unwrap();
            assert_eq!(grid.restrict(&arc).probability(), rat(1, 2));
        }
        assert_eq!(HyperfiniteModel.probability(&arc), h("1/2"));
    }

    #[test]
    fn doubling_identity_is_exact() {
        let model = HyperfiniteModel;
        assert_eq!(model.doubled_probability(&ev("point(0)")), h("1/(2*N)"));
        assert_eq!(model.doubled_probability(&ev("arc(0,1/2)")), h("1/2"));
        assert_eq!(model.doubled_probability(&CircleEvent::empty()), HyperRat::zero());
        let mixed = ev("arc(1/8,3/8) + point(1/2) - point(1/4)");
        assert_eq!(model.doubled_probability(&mixed), model.probability(&mixed));
    }

    #[test]
    fn transform_rescales_the_infinitesimal_part() {
        let two = PrussAlpha::new(rat_int(2)).unwrap();
        assert_eq!(pruss_transform(&h("1/(2*N)"), &two).unwrap(), h("1/N"));
        let three = PrussAlpha::new(rat_int(3)).unwrap();
        assert_eq!(
            pruss_transform(&h("(N+1)/(2*N)"), &three).unwrap(),
            h("(N+3)/(2*N)")
        );
        let one = PrussAlpha::new(rat_int(1)).unwrap();
        for p in ["1/2", "(N-1)/(2*N)", "0", "5"] {
            assert_eq!(pruss_transform(&h(p), &one).unwrap(), h(p));
        }
        assert_eq!(
            pruss_transform(&h("N"), &two),
            Err(ModelError::Hyper(HyperError::Infinite))
        );
        assert_eq!(PrussAlpha::new(rat_int(0)), Err(ModelError::AlphaNotPositive));
    }

    #[test]
    fn defect_is_alpha_minus_one() {
        for (a, d) in [(rat_int(2), rat_int(1)), (rat_int(1), rat_int(0)), (rat(1, 2), rat(-1, 2))] {
            let alpha = PrussAlpha::new(a).unwrap();
            assert_eq!(additivity_defect(&alpha), d);
        }
    }

    #[test]
    fn order_check_on_the_spec_pair() {
        let model = HyperfiniteModel;
        let alpha = PrussAlpha::new(rat_int(2)).unwrap();
        let pairs = vec![
            (ev("point(0)"), ev("arc(0,1/4)")),
            (ev("arc(0,1/3)"), ev("arc(0,1/3)")),
        ];
        let report = pruss_order_report(&model, &alpha, &pairs);
        assert!(report.passed(), "{}", report.to_text());
        assert_eq!(report.checks[0].value, "Less");
        assert_eq!(report.checks[3].value, "Equal");
    }

    #[test]
    fn regularity_spots_the_empty_event() {
        let model = HyperfiniteModel;
        let report = regularity_report(
            &model,
            &[CircleEvent::empty(), ev("point(1/7)"), ev("arc(0,1/2) - point(0)")],
        );
        assert!(report.passed(), "{}", report.to_text());
        assert_eq!(model.probability(&ev("arc(0,1/2) - point(0)")), h("(N-1)/(2*N)"));
    }

    #[test]
    fn finite_conditionals_count_memberships() {
        let lambda: BTreeSet<Angle> = [0i64, 1, 2, 3]
            .iter()
            .map(|&k| Angle::new(rat(k, 4)))
            .collect();
        assert_eq!(finite_conditional(&ev("arc(0,1/2)"), &lambda), Ok(rat(1, 2)));
        assert_eq!(finite_conditional(&CircleEvent::full(), &lambda), Ok(rat_int(1)));
        assert_eq!(finite_conditional(&CircleEvent::empty(), &lambda), Ok(rat_int(0)));
        assert_eq!(
            finite_conditional(&CircleEvent::full(), &BTreeSet::new()),
            Err(ModelError::EmptySample)
        );
    }
}
