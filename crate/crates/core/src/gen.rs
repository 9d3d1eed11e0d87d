//! Seeded random values for the property sweeps.  Everything is driven by a
//! counter-based generator, so a fixed seed reproduces a sweep exactly.

use crate::circle::{Angle, CircleEvent};
use crate::lc::LcNumber;
use crate::poly::Polynomial;
use crate::scalar::{rat, Int, Rat};
use crate::HyperRat;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct ValueGen {
    rng: ChaCha8Rng,
}

impl ValueGen {
    pub fn new(seed: u64) -> Self {
        ValueGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform-enough draw from `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.rng.next_u64() % n
    }

    fn flag(&mut self) -> bool {
        self.rng.next_u64() & 1 == 1
    }

    /// Rational in `[0, 1)` with denominator at most `max_den`.
    pub fn rat_in_unit(&mut self, max_den: u64) -> Rat {
        let den = self.below(max_den) + 1;
        let num = self.below(den);
        rat(num as i64, den as i64)
    }

    pub fn angle(&mut self, max_den: u64) -> Angle {
        Angle::new(self.rat_in_unit(max_den))
    }

    /// Angle on the grid of multiples of `1/den`.
    pub fn grid_angle(&mut self, den: u64) -> Angle {
        Angle::new(rat(self.below(den) as i64, den as i64))
    }

    /// Small signed rational, denominator 1..3, numerator within -9..9.
    pub fn small_rat(&mut self) -> Rat {
        rat(self.below(19) as i64 - 9, self.below(3) as i64 + 1)
    }

    fn small_rat_nonzero(&mut self) -> Rat {
        rat(
            match self.below(18) as i64 - 9 {
                v if v >= 0 => v + 1,
                v => v,
            },
            self.below(3) as i64 + 1,
        )
    }

    /// Random event with angles drawn from the multiples of `1/den`: up to
    /// three arcs plus up to two point corrections, with occasional `empty`
    /// and `full` outcomes.
    pub fn event_on_grid(&mut self, den: u64) -> CircleEvent {
        match self.below(12) {
            0 => return CircleEvent::empty(),
            1 => return CircleEvent::full(),
            _ => {}
        }
        let mut event = CircleEvent::empty();
        for _ in 0..self.below(3) + 1 {
            let start = self.grid_angle(den);
            let len = rat(self.below(den - 1) as i64 + 1, den as i64);
            let end = Angle::new(start.value() + len);
            if start == end {
                continue;
            }
            let arc = crate::circle::Arc::new(start, end).expect("distinct endpoints");
            event = event.union(&CircleEvent::from_arc(&arc));
        }
        for _ in 0..self.below(3) {
            let p = CircleEvent::point(self.grid_angle(den));
            event = if self.flag() { event.union(&p) } else { event.difference(&p) };
        }
        event
    }

    /// Random event with small mixed denominators.
    pub fn event(&mut self) -> CircleEvent {
        let den = [8u64, 12, 24, 30][self.below(4) as usize];
        self.event_on_grid(den)
    }

    /// Random rational function of `N` with small degrees and coefficients.
    pub fn hyper(&mut self) -> HyperRat {
        if self.below(8) == 0 {
            return HyperRat::zero();
        }
        let num = self.poly(self.below(3) as usize);
        let den = self.poly(self.below(3) as usize);
        HyperRat::new(num, den).expect("nonzero denominator")
    }

    /// Random non-infinite rational function: numerator degree never exceeds
    /// denominator degree.
    pub fn finite_hyper(&mut self) -> HyperRat {
        if self.below(8) == 0 {
            return HyperRat::zero();
        }
        let nd = self.below(2) as usize;
        let dd = nd + self.below(2) as usize;
        HyperRat::new(self.poly(nd), self.poly(dd)).expect("nonzero denominator")
    }

    fn poly(&mut self, degree: usize) -> Polynomial<Rat> {
        let mut coeffs: Vec<Rat> = (0..degree).map(|_| self.small_rat()).collect();
        coeffs.push(self.small_rat_nonzero());
        Polynomial::from_coeffs(coeffs)
    }

    /// Random truncated Levi-Civita number with exponents in steps of 1/2.
    pub fn lc(&mut self, order: &Rat) -> LcNumber<Rat> {
        let mut terms = std::collections::BTreeMap::new();
        for _ in 0..self.below(5) {
            let q = rat(self.below(13) as i64 - 4, 2);
            terms.insert(q, self.small_rat_nonzero());
        }
        LcNumber::from_terms(terms, order.clone()).expect("distinct map keys")
    }

    /// Two structurally different events with the same arc length and the
    /// same net point count, hence the same hyperfinite probability.
    pub fn matched_pair(&mut self) -> (CircleEvent, CircleEvent) {
        let den = 16i64;
        let len_steps = self.below(den as u64 - 1) as i64; // arc length = len_steps/16 < 1
        let length = rat(len_steps, den);
        let net = if len_steps == 0 {
            self.below(3) as i64
        } else {
            self.below(5) as i64 - 2
        };
        let a = self.matched_event(&length, net, false);
        let b = self.matched_event(&length, net, true);
        (a, b)
    }

    fn matched_event(&mut self, length: &Rat, net: i64, split: bool) -> CircleEvent {
        let anchor = self.grid_angle(16);
        let mut event = CircleEvent::empty();
        let halves: Vec<Rat> = if split && length >= &rat(1, 8) {
            vec![length / rat(2, 1), length / rat(2, 1)]
        } else {
            vec![length.clone()]
        };
        // Lay the pieces along the circle starting at the anchor, separated
        // by half a turn when split.
        let mut start = anchor.value().clone();
        for piece in halves.iter().filter(|p| !num_traits::Zero::is_zero(*p)) {
            let s = Angle::new(start.clone());
            let e = Angle::new(&start + piece);
            let arc = crate::circle::Arc::new(s, e).expect("piece is a proper arc");
            event = event.union(&CircleEvent::from_arc(&arc));
            start = &start + &rat(1, 2);
        }
        // Point corrections: removals sit just inside the start of the first
        // piece; additions sit just before the anchor, which no piece of
        // either layout ever reaches (total length stays below 15/16).
        if net >= 0 {
            for i in 0..net {
                let before = rat(1, 1 << (i + 5));
                let p = Angle::new(anchor.value() - before);
                event = event.union(&CircleEvent::point(p));
            }
        } else {
            for i in 0..-net {
                let inside = rat(1, 1 << (i + 5));
                let p = Angle::new(anchor.value() + inside);
                event = event.difference(&CircleEvent::point(p));
            }
        }
        event
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::HyperfiniteModel;

    #[test]
    fn same_seed_same_stream() {
        let mut a = ValueGen::new(42);
        let mut b = ValueGen::new(42);
        for _ in 0..20 {
            assert_eq!(a.event(), b.event());
            assert_eq!(a.hyper(), b.hyper());
            assert_eq!(a.lc(&rat(8, 1)), b.lc(&rat(8, 1)));
        }
    }

    #[test]
    fn matched_pairs_share_length_and_net_count() {
        let model = HyperfiniteModel;
        let mut g = ValueGen::new(7);
        for _ in 0..50 {
            let (a, b) = g.matched_pair();
            assert_eq!(a.lebesgue(), b.lebesgue());
            assert_eq!(a.net_point_count(), b.net_point_count());
            assert_eq!(model.probability(&a), model.probability(&b));
        }
    }

    #[test]
    fn finite_hyper_is_never_infinite() {
        let mut g = ValueGen::new(3);
        for _ in 0..100 {
            assert!(!matches!(
                g.finite_hyper().classify(),
                crate::hyper::Magnitude::Infinite
            ));
        }
    }
}
