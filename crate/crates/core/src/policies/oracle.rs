//! Perfect-foresight replenishment planner.
//!
//! Knows the realized demand trace and the realized pipeline. Each order arrives exactly when
//! stock first runs short and is sized to the smallest quantity (at least the MOQ) that covers a
//! block of upcoming periods without a stockout. A dynamic program over `(period, stock)` picks
//! the supplier and block length that minimise purchase, holding and spoilage cost to the end of
//! the horizon. A period is left uncovered only when no supplier can deliver in time.

use std::collections::HashMap;

use crate::inventory::{Batch, Money, Sku, SupplierOffer};

/// Longest block of periods a single order may cover.
pub const MAX_BLOCK: u32 = 35;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedArrival {
    pub period: u32,
    pub quantity: u64,
    pub unit_cost: Money,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedOrder {
    /// Index into the planner's offer list.
    pub supplier: usize,
    pub placed_at: u32,
    pub arrival: u32,
    pub quantity: u64,
    pub unit_price: Money,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub orders: Vec<PlannedOrder>,
    /// Purchase, holding, stockout and spoilage cost from `first_period` to the horizon.
    pub cost: Money,
    pub first_period: u32,
    /// Expected on-hand after spoilage for each period from `first_period`.
    pub expected_on_hand: Vec<u64>,
    pub expected_stockout_units: u64,
}

impl Plan {
    pub fn orders_at(&self, period: u32) -> impl Iterator<Item = &PlannedOrder> {
        self.orders.iter().filter(move |o| o.placed_at == period)
    }

    pub fn expected_on_hand_at(&self, period: u32) -> Option<u64> {
        period.checked_sub(self.first_period).and_then(|i| self.expected_on_hand.get(i as usize).copied())
    }
}

/// Planning input for one SKU. `stock` is the on-hand after spoilage in period `now`; orders may
/// be placed from `now` on and the first simulated period is `now + 1`.
pub struct PlanningProblem<'a> {
    pub sku: &'a Sku,
    pub demand: &'a [u64],
    pub now: u32,
    pub horizon: u32,
    pub stock: Vec<Batch>,
    pub pipeline: Vec<FixedArrival>,
    pub offers: Vec<&'a SupplierOffer>,
    /// Unit price for `(offer index, quantity, placement period)`.
    pub price: &'a dyn Fn(usize, u64, u32) -> Money,
}

#[derive(Debug, Clone, Copy)]
struct PeriodOutcome {
    cost: i64,
    short: u64,
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Stockout,
    Order { supplier: usize, quantity: u64, end: u32, price: Money },
}

struct Planner<'p, 'a> {
    p: &'p PlanningProblem<'a>,
    memo: HashMap<(u32, Vec<Batch>), (i64, Option<Choice>)>,
}

impl<'p, 'a> Planner<'p, 'a> {
    /// One period of ledger mechanics: receive, fulfill FIFO, age, expire, decay, hold.
    fn step(&self, stock: &mut Vec<Batch>, t: u32, extra: Option<(u64, Money)>) -> PeriodOutcome {
        let sku = self.p.sku;
        for a in self.p.pipeline.iter().filter(|a| a.period == t && a.quantity > 0) {
            stock.push(Batch { quantity: a.quantity, age: 0, unit_cost_paid: a.unit_cost });
        }
        if let Some((q, c)) = extra {
            if q > 0 {
                stock.push(Batch { quantity: q, age: 0, unit_cost_paid: c });
            }
        }
        let mut remaining = self.p.demand.get(t as usize).copied().unwrap_or(0);
        let mut i = 0;
        while remaining > 0 && i < stock.len() {
            let take = stock[i].quantity.min(remaining);
            stock[i].quantity -= take;
            remaining -= take;
            i += 1;
        }
        stock.retain(|b| b.quantity > 0);
        let mut cost = sku.stockout_penalty.0 * remaining as i64;
        for b in stock.iter_mut() {
            b.age += 1;
        }
        if let Some(life) = sku.shelf_life {
            stock.retain(|b| {
                if b.age > life {
                    cost += b.unit_cost_paid.0 * b.quantity as i64;
                    false
                } else {
                    true
                }
            });
        }
        if sku.decay_fraction > 0.0 {
            let on_hand: u64 = stock.iter().map(|b| b.quantity).sum();
            let mut decay = ((sku.decay_fraction * on_hand as f64).floor() as u64).min(on_hand);
            let mut i = 0;
            while decay > 0 {
                let take = stock[i].quantity.min(decay);
                stock[i].quantity -= take;
                decay -= take;
                cost += stock[i].unit_cost_paid.0 * take as i64;
                i += 1;
            }
            stock.retain(|b| b.quantity > 0);
        }
        let on_hand: u64 = stock.iter().map(|b| b.quantity).sum();
        cost += sku.holding_cost.0 * on_hand as i64;
        PeriodOutcome { cost, short: remaining }
    }

    /// Simulates `from..=to` with `extra` arriving at `from`. Returns cost and total shortage.
    fn run_block(&self, stock: &mut Vec<Batch>, from: u32, to: u32, extra: Option<(u64, Money)>) -> (i64, u64) {
        let (mut cost, mut short) = (0, 0);
        for t in from..=to {
            let out = self.step(stock, t, if t == from { extra } else { None });
            cost += out.cost;
            short += out.short;
        }
        (cost, short)
    }

    fn covers(&self, stock: &[Batch], from: u32, to: u32, extra: (u64, Money)) -> bool {
        let mut s = stock.to_vec();
        self.run_block(&mut s, from, to, Some(extra)).1 == 0
    }

    /// Smallest quantity in `[lower, cap]` covering `from..=to`, if any.
    fn min_cover(&self, stock: &[Batch], from: u32, to: u32, lower: u64, cap: u64, price: Money) -> Option<u64> {
        if lower > cap {
            return None;
        }
        if self.covers(stock, from, to, (lower, price)) {
            return Some(lower);
        }
        let (mut bad, mut step) = (lower, 1u64);
        let good = loop {
            let probe = bad.saturating_add(step).min(cap);
            if self.covers(stock, from, to, (probe, price)) {
                break probe;
            }
            if probe == cap {
                return None;
            }
            bad = probe;
            step = step.saturating_mul(2);
        };
        let (mut lo, mut hi) = (bad, good);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.covers(stock, from, to, (mid, price)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Minimal cost from the start of period `t` with `stock` on hand.
    fn value(&mut self, t: u32, stock: Vec<Batch>) -> i64 {
        let mut stock = stock;
        let mut carried = 0i64;
        let mut u = t;
        // Periods covered by stock on hand need no decision.
        while u < self.p.horizon {
            let mut trial = stock.clone();
            let out = self.step(&mut trial, u, None);
            if out.short > 0 {
                break;
            }
            carried += out.cost;
            stock = trial;
            u += 1;
        }
        if u >= self.p.horizon {
            return carried;
        }
        carried + self.decide(u, stock)
    }

    fn decide(&mut self, u: u32, stock: Vec<Batch>) -> i64 {
        let key = (u, stock);
        if let Some((v, _)) = self.memo.get(&key) {
            return *v;
        }
        let stock = key.1.clone();
        let mut best: Option<(i64, Choice)> = None;
        for (j, offer) in self.p.offers.iter().enumerate() {
            let Some(placed) = u.checked_sub(offer.lead_time) else { continue };
            if placed < self.p.now {
                continue;
            }
            let last = (u + MAX_BLOCK - 1).min(self.p.horizon - 1).min(match self.p.sku.shelf_life {
                Some(life) => u + life,
                None => u32::MAX,
            });
            let mut lower = offer.moq.max(1);
            for end in u..=last {
                // Coverage does not depend on the price paid.
                let Some(q) = self.min_cover(&stock, u, end, lower, offer.capacity(), offer.unit_cost) else { break };
                lower = q;
                let price = (self.p.price)(j, q, placed);
                let mut after = stock.clone();
                let (sim, _) = self.run_block(&mut after, u, end, Some((q, price)));
                let purchase = price.0 * q as i64 + offer.fixed_shipping.0;
                let total = purchase + sim + self.value(end + 1, after);
                let choice = Choice::Order { supplier: j, quantity: q, end, price };
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    best = Some((total, choice));
                }
            }
        }
        let best = match best {
            Some(b) => b,
            None => {
                let mut after = stock.clone();
                let out = self.step(&mut after, u, None);
                (out.cost + self.value(u + 1, after), Choice::Stockout)
            }
        };
        self.memo.insert(key, (best.0, Some(best.1)));
        best.0
    }
}

/// Plans all orders from `problem.now` to the horizon.
pub fn plan(problem: &PlanningProblem<'_>) -> Plan {
    let mut planner = Planner { p: problem, memo: HashMap::new() };
    let first = problem.now + 1;
    let cost = if first < problem.horizon { planner.value(first, problem.stock.clone()) } else { 0 };

    // Replay the optimal choices.
    let mut orders = Vec::new();
    let mut expected = Vec::new();
    let mut stockouts = 0;
    let mut stock = problem.stock.clone();
    let mut t = first;
    while t < problem.horizon {
        let mut trial = stock.clone();
        let out = planner.step(&mut trial, t, None);
        if out.short == 0 {
            stock = trial;
            expected.push(stock.iter().map(|b| b.quantity).sum());
            t += 1;
            continue;
        }
        let choice = planner.memo.get(&(t, stock.clone())).and_then(|(_, c)| *c).unwrap_or(Choice::Stockout);
        match choice {
            Choice::Stockout => {
                let out = planner.step(&mut stock, t, None);
                stockouts += out.short;
                expected.push(stock.iter().map(|b| b.quantity).sum());
                t += 1;
            }
            Choice::Order { supplier, quantity, end, price } => {
                let offer = problem.offers[supplier];
                orders.push(PlannedOrder {
                    supplier,
                    placed_at: t - offer.lead_time,
                    arrival: t,
                    quantity,
                    unit_price: price,
                });
                for period in t..=end {
                    let extra = (period == t).then_some((quantity, price));
                    stockouts += planner.step(&mut stock, period, extra).short;
                    expected.push(stock.iter().map(|b| b.quantity).sum());
                }
                t = end + 1;
            }
        }
    }
    orders.sort_by_key(|o| (o.placed_at, o.supplier));
    Plan { orders, cost: Money(cost), first_period: first, expected_on_hand: expected, expected_stockout_units: stockouts }
}
