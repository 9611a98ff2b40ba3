//! Sequences `r_1..r_E` with `Σ i·r_i` fixed and a weighted sum
//! `Σ w_i r_i` confined to a window, where `w_i / i` strictly decreases.

use num_bigint::BigInt;
use num_integer::Integer;

/// Bounds on each coordinate plus the weights.
#[derive(Debug, Clone)]
pub struct WeightedCompositions {
    /// `weights[i-1] = w_i`.
    weights: Vec<BigInt>,
    floors: Vec<u64>,
    /// Only the last coordinate may be capped.
    top_cap: Option<u64>,
}

impl WeightedCompositions {
    /// Panics if `weights` and `floors` differ in length, are empty, or
    /// `w_i / i` is not strictly decreasing.
    pub fn new(weights: Vec<BigInt>, floors: Vec<u64>, top_cap: Option<u64>) -> Self {
        assert!(!weights.is_empty() && weights.len() == floors.len());
        for i in 1..weights.len() {
            // w_{i+1}/(i+1) < w_i/i
            assert!(
                &weights[i] * i < &weights[i - 1] * (i + 1),
                "weight ratios must decrease"
            );
        }
        if let Some(cap) = top_cap {
            assert!(cap >= floors[floors.len() - 1]);
        }
        WeightedCompositions {
            weights,
            floors,
            top_cap,
        }
    }

    fn len(&self) -> usize {
        self.weights.len()
    }

    fn weight(&self, i: usize) -> &BigInt {
        &self.weights[i - 1]
    }

    fn floor(&self, i: usize) -> u64 {
        self.floors[i - 1]
    }

    /// Size and weight of the floors at indices `1..i`.
    fn floor_totals(&self, below: usize) -> (u64, BigInt) {
        let mut size = 0u64;
        let mut weight = BigInt::from(0);
        for j in 1..below {
            size += j as u64 * self.floor(j);
            weight += self.weight(j) * self.floor(j);
        }
        (size, weight)
    }

    /// A lower bound (LP relaxation, rounded up) and the exact maximum of
    /// the weighted sum over all sequences of total size `total`, or `None`
    /// when there are none.
    pub fn weight_range(&self, total: u64) -> Option<(BigInt, BigInt)> {
        let top = self.len();
        let (size, mut weight) = self.floor_totals(top + 1);
        if size > total {
            return None;
        }
        let mut slack = total - size;
        if top == 1 {
            if self.top_cap.is_some_and(|cap| total > cap) {
                return None;
            }
            let exact = self.weight(1) * total;
            return Some((exact.clone(), exact));
        }
        let max = &weight + self.weight(1) * slack;
        // Fill the cheapest-per-size coordinate first.
        let (cheap, cheap_size) = match self.top_cap {
            None => (top, top),
            Some(cap) => {
                let room = (cap - self.floor(top)).min(slack / top as u64);
                weight += self.weight(top) * room;
                slack -= room * top as u64;
                (top - 1, top - 1)
            }
        };
        let lp_num = weight * cheap_size + self.weight(cheap) * slack;
        let min = lp_num.div_ceil(&BigInt::from(cheap_size));
        Some((min, max))
    }

    /// Calls `visit(r, weight)` for every sequence of total size `total`
    /// with weighted sum in `[lo, hi]`, in decreasing order of
    /// `(r_E, r_{E-1}, …)`.
    pub fn for_each_in_window(
        &self,
        total: u64,
        lo: &BigInt,
        hi: &BigInt,
        mut visit: impl FnMut(&[u64], &BigInt),
    ) {
        if lo > hi {
            return;
        }
        let top = self.len();
        let mut r = vec![0u64; top];
        let (size, weight) = self.floor_totals(top);
        let cap = self.top_cap;
        self.descend(
            top,
            total,
            BigInt::from(0),
            cap,
            size,
            weight,
            lo,
            hi,
            &mut r,
            &mut visit,
        );
    }

    /// Choose `r_i` given the remaining size `rest` for indices `1..=i`
    /// and the weight `acc` already spent on indices above `i`.
    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        i: usize,
        rest: u64,
        acc: BigInt,
        cap: Option<u64>,
        floor_size: u64,
        floor_weight: BigInt,
        lo: &BigInt,
        hi: &BigInt,
        r: &mut Vec<u64>,
        visit: &mut impl FnMut(&[u64], &BigInt),
    ) {
        if i == 1 {
            if rest < self.floor(1) || cap.is_some_and(|c| rest > c) {
                return;
            }
            let total = acc + self.weight(1) * rest;
            if &total >= lo && &total <= hi {
                r[0] = rest;
                visit(r, &total);
            }
            return;
        }
        if rest < floor_size {
            return;
        }
        let i_big = BigInt::from(i);
        let below = i - 1;
        let free = BigInt::from(rest - floor_size);
        let wi = self.weight(i);
        let w_below = self.weight(below);
        let w1 = self.weight(1);

        // Lower bound of the total at r_i = x, scaled by (i-1):
        //   (i-1)(acc + floor_weight + w_i x) + (free - i x) w_{i-1},
        // decreasing in x; need it ≤ (i-1)·hi.
        let d = BigInt::from(below);
        let slope_lo = &i_big * w_below - &d * wi;
        let need = &d * (&acc + &floor_weight) + &free * w_below - &d * hi;
        let x_from_hi = if need <= BigInt::from(0) {
            BigInt::from(0)
        } else {
            need.div_ceil(&slope_lo)
        };
        // Upper bound acc + floor_weight + w_i x + (free - i x) w_1 ≥ lo.
        let slope_hi = &i_big * w1 - wi;
        let spare = &acc + &floor_weight + &free * w1 - lo;
        if spare < BigInt::from(0) {
            return;
        }
        let x_from_lo = spare.div_floor(&slope_hi);

        let by_size = BigInt::from((rest - floor_size) / i as u64);
        let mut x_max = x_from_lo.min(by_size);
        if let Some(c) = cap {
            x_max = x_max.min(BigInt::from(c));
        }
        let x_min = x_from_hi.max(BigInt::from(self.floor(i)));
        if x_min > x_max {
            return;
        }
        let x_min: u64 = x_min.try_into().expect("bounded by the total size");
        let x_max: u64 = x_max.try_into().expect("bounded by the total size");

        let below_floor_size = floor_size - below as u64 * self.floor(below);
        let below_floor_weight = &floor_weight - w_below * self.floor(below);
        for x in (x_min..=x_max).rev() {
            r[i - 1] = x;
            self.descend(
                below,
                rest - i as u64 * x,
                &acc + wi * x,
                None,
                below_floor_size,
                below_floor_weight.clone(),
                lo,
                hi,
                r,
                visit,
            );
        }
    }
}
