//! Rule-based alternating-offers price negotiation.
//!
//! The supplier starts at list price `c` and concedes a fixed fraction of the gap to its floor
//! each round; the buyer opens at a discount and raises its bid by a fixed step. The deal is
//! struck at the midpoint of the first crossing ask/bid pair. The supplier floor deepens with
//! order size up to `quantity_ref`:
//!
//! ```text
//! floor = c * (1 - max_discount * min(1, q / quantity_ref))
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::inventory::{Money, SupplierOffer};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegotiationParams {
    pub max_rounds: u32,
    pub buyer_opening_discount: f64,
    /// Bid increase per round as a fraction of list price.
    pub buyer_concession_step: f64,
    /// Fraction of the remaining ask-to-floor gap the supplier gives up each round.
    pub supplier_concession_rate: f64,
    pub quantity_ref: u64,
    /// Relative jitter on the buyer step drawn from the negotiation stream. Off by default.
    #[serde(default)]
    pub jitter: f64,
}

impl Default for NegotiationParams {
    fn default() -> Self {
        NegotiationParams {
            max_rounds: 6,
            buyer_opening_discount: 0.15,
            buyer_concession_step: 0.01,
            supplier_concession_rate: 0.5,
            quantity_ref: 200,
            jitter: 0.0,
        }
    }
}

impl NegotiationParams {
    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        for (name, v) in [
            ("buyer_opening_discount", self.buyer_opening_discount),
            ("buyer_concession_step", self.buyer_concession_step),
            ("supplier_concession_rate", self.supplier_concession_rate),
            ("jitter", self.jitter),
        ] {
            if !(0.0..=1.0).contains(&v) {
                errors.push(format!("{name} {v} outside [0, 1]"));
            }
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegotiationOutcome {
    pub unit_price: Money,
    /// Rounds played before settlement (or `max_rounds` if none).
    pub rounds: u32,
    pub settled: bool,
    /// Supplier floor in cents, possibly fractional.
    pub floor: f64,
}

pub fn supplier_floor(offer: &SupplierOffer, quantity: u64, quantity_ref: u64) -> f64 {
    let tier = if quantity_ref == 0 { 1.0 } else { (quantity as f64 / quantity_ref as f64).min(1.0) };
    offer.unit_cost.0 as f64 * (1.0 - offer.max_discount * tier)
}

/// Negotiates a unit price for `quantity` units. The result always lies in `[floor, list]` and
/// never exceeds the price negotiated for any smaller quantity.
pub fn negotiate(offer: &SupplierOffer, quantity: u64, params: &NegotiationParams, stream: &RngStream) -> NegotiationOutcome {
    let mut out = bargain(offer, quantity, params, stream);
    if params.max_rounds == 0 || offer.max_discount == 0.0 {
        return out;
    }
    // The round schedule alone can settle a bigger order higher when crossings land in
    // different rounds, so take the best price over the smaller tiers.
    for q in 1..quantity.min(params.quantity_ref) {
        let p = bargain(offer, q, params, stream).unit_price;
        if p < out.unit_price {
            out.unit_price = p;
        }
    }
    out
}

/// One run of the alternating-offers schedule.
pub fn bargain(offer: &SupplierOffer, quantity: u64, params: &NegotiationParams, stream: &RngStream) -> NegotiationOutcome {
    let list = offer.unit_cost.0 as f64;
    let floor = supplier_floor(offer, quantity, params.quantity_ref);
    let no_deal = NegotiationOutcome { unit_price: offer.unit_cost, rounds: params.max_rounds, settled: false, floor };
    if params.max_rounds == 0 || floor >= list {
        return NegotiationOutcome { rounds: 0, ..no_deal };
    }
    let mut rng = (params.jitter > 0.0).then(|| stream.rng());
    let mut ask = list;
    let mut bid = list * (1.0 - params.buyer_opening_discount);
    let settle = |ask: f64, bid: f64, round: u32| {
        let mid = 0.5 * (ask + bid);
        let cents = (mid + 0.5).floor().clamp(floor.ceil(), list) as i64;
        NegotiationOutcome { unit_price: Money(cents), rounds: round, settled: true, floor }
    };
    if bid >= ask {
        return settle(ask, ask, 0);
    }
    for round in 1..=params.max_rounds {
        ask -= params.supplier_concession_rate * (ask - floor);
        if ask <= bid {
            return settle(ask, bid, round);
        }
        let mut step = params.buyer_concession_step * list;
        if let Some(r) = rng.as_mut() {
            step *= 1.0 + params.jitter * (r.random::<f64>() * 2.0 - 1.0);
        }
        bid = (bid + step).min(list);
        if bid >= ask {
            return settle(ask, bid, round);
        }
    }
    no_deal
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn offer(cost: i64, max_discount: f64) -> SupplierOffer {
        SupplierOffer {
            supplier_id: "S".into(),
            sku_id: "A".into(),
            unit_cost: Money(cost),
            lead_time: 1,
            moq: 0,
            capacity_per_order: None,
            reliability: 1.0,
            fixed_shipping: Money(0),
            max_discount,
        }
    }

    fn stream() -> RngStream {
        RngStream::new(0, "negotiation")
    }

    #[test]
    fn zero_rounds_is_list_price() {
        let p = NegotiationParams { max_rounds: 0, ..Default::default() };
        assert_eq!(negotiate(&offer(1000, 0.2), 500, &p, &stream()).unit_price, Money(1000));
    }

    #[test]
    fn no_discount_is_list_price() {
        for rounds in [1, 5, 50] {
            let p = NegotiationParams { max_rounds: rounds, ..Default::default() };
            assert_eq!(negotiate(&offer(1000, 0.0), 500, &p, &stream()).unit_price, Money(1000));
        }
    }

    #[test]
    fn hand_traced_schedule() {
        // list 10.00, floor 8.00 at q = q_ref; asks 10 -> 9 -> 8.5, bids 8.5 -> 8.6.
        let p = NegotiationParams {
            max_rounds: 5,
            buyer_opening_discount: 0.15,
            buyer_concession_step: 0.01,
            supplier_concession_rate: 0.5,
            quantity_ref: 100,
            jitter: 0.0,
        };
        let out = negotiate(&offer(1000, 0.2), 100, &p, &stream());
        assert_eq!(out.unit_price, Money(855));
        assert_eq!(out.rounds, 2);
        assert!(out.settled);
        // One round is not enough to cross.
        let short = NegotiationParams { max_rounds: 1, ..p };
        assert_eq!(negotiate(&offer(1000, 0.2), 100, &short, &stream()).unit_price, Money(1000));
    }

    #[test]
    fn jitter_is_deterministic_per_stream() {
        let p = NegotiationParams { jitter: 0.5, max_rounds: 20, buyer_opening_discount: 0.3, ..Default::default() };
        let a = negotiate(&offer(1000, 0.2), 200, &p, &stream());
        let b = negotiate(&offer(1000, 0.2), 200, &p, &stream());
        assert_eq!(a, b);
    }

    #[test]
    fn smaller_tier_price_caps_larger_orders() {
        let o = offer(106, 0.1884934508342533);
        let p = NegotiationParams {
            max_rounds: 2,
            buyer_opening_discount: 0.10250655512104363,
            buyer_concession_step: 0.05729786778296824,
            supplier_concession_rate: 0.24260437829450537,
            quantity_ref: 300,
            jitter: 0.0,
        };
        // 296 units cross in round 2 at (97.58 + 101.20) / 2; 402 units cross in round 1 higher.
        assert_eq!(bargain(&o, 296, &p, &stream()).unit_price, Money(99));
        assert_eq!(bargain(&o, 402, &p, &stream()).unit_price, Money(101));
        assert_eq!(negotiate(&o, 402, &p, &stream()).unit_price, Money(99));
    }

    fn arb_params() -> impl Strategy<Value = NegotiationParams> {
        (0u32..12, 0.0f64..0.5, 0.0f64..0.1, 0.0f64..1.0, 1u64..500).prop_map(|(r, o, s, c, q)| NegotiationParams {
            max_rounds: r,
            buyer_opening_discount: o,
            buyer_concession_step: s,
            supplier_concession_rate: c,
            quantity_ref: q,
            jitter: 0.0,
        })
    }

    proptest! {
        #[test]
        fn price_within_floor_and_list(cost in 1i64..100_000, md in 0.0f64..0.99, q in 0u64..1000, p in arb_params()) {
            let o = offer(cost, md);
            let out = negotiate(&o, q, &p, &stream());
            prop_assert!(out.unit_price <= o.unit_cost);
            prop_assert!(out.unit_price.0 as f64 >= out.floor - 1e-9);
            prop_assert!(out.unit_price.0 as f64 >= o.floor_price() - 1e-9);
        }

        #[test]
        fn larger_quantity_never_costs_more(cost in 100i64..100_000, md in 0.0f64..0.5, q in 1u64..400, dq in 0u64..400, p in arb_params()) {
            let o = offer(cost, md);
            let small = negotiate(&o, q, &p, &stream()).unit_price;
            let large = negotiate(&o, q + dq, &p, &stream()).unit_price;
            prop_assert!(large <= small, "q={} -> {:?}, q={} -> {:?}", q, small, q + dq, large);
        }
    }
}
