//! Supplier ranking and order splitting.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inventory::{Money, OrderDecision, SupplierOffer};
use crate::policies::ReorderProposal;

#[derive(Debug, Error, PartialEq)]
pub enum SupplierError {
    #[error("quantity {quantity} below MOQ {moq}")]
    BelowMoq { quantity: u64, moq: u64 },
    #[error("no candidate offers")]
    EmptyCandidates,
    #[error("weights must be non-negative and sum to 1 (got {0})")]
    InvalidWeights(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplierScoreWeights {
    pub cost: f64,
    pub lead: f64,
    pub reliability: f64,
}

impl Default for SupplierScoreWeights {
    fn default() -> Self {
        SupplierScoreWeights { cost: 0.5, lead: 0.2, reliability: 0.3 }
    }
}

impl SupplierScoreWeights {
    pub fn validate(&self) -> Result<(), SupplierError> {
        let sum = self.cost + self.lead + self.reliability;
        if self.cost < 0.0 || self.lead < 0.0 || self.reliability < 0.0 || (sum - 1.0).abs() > 1e-9 {
            return Err(SupplierError::InvalidWeights(sum));
        }
        Ok(())
    }
}

/// `price * quantity + fixed_shipping`.
pub fn landed_cost(offer: &SupplierOffer, quantity: u64, unit_price: Money) -> Result<Money, SupplierError> {
    if quantity < offer.moq {
        return Err(SupplierError::BelowMoq { quantity, moq: offer.moq });
    }
    Ok(unit_price.times(quantity) + offer.fixed_shipping)
}

/// An offer together with the reliability the buyer currently believes in.
#[derive(Debug, Clone, Copy)]
pub struct Candidate<'a> {
    pub offer: &'a SupplierOffer,
    pub reliability: f64,
}

impl<'a> Candidate<'a> {
    pub fn new(offer: &'a SupplierOffer) -> Self {
        Candidate { offer, reliability: offer.reliability }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers {
    pub max_landed: f64,
    pub max_lead: f64,
}

/// Weighted score, lower is better.
pub fn score_offer(landed: Money, lead_time: u32, reliability: f64, weights: &SupplierScoreWeights, norm: &Normalizers) -> f64 {
    let cost_term = if norm.max_landed > 0.0 { landed.0 as f64 / norm.max_landed } else { 0.0 };
    let lead_term = if norm.max_lead > 0.0 { f64::from(lead_time) / norm.max_lead } else { 0.0 };
    weights.cost * cost_term + weights.lead * lead_term + weights.reliability * (1.0 - reliability)
}

/// Landed cost at list price for the quantity this offer would actually ship.
fn ranking_landed(offer: &SupplierOffer, quantity: u64) -> Money {
    let q = quantity.max(offer.moq).min(offer.capacity());
    offer.unit_cost.times(q) + offer.fixed_shipping
}

/// Candidate indices sorted by ascending score, ties by supplier id.
pub fn rank_offers(candidates: &[Candidate<'_>], quantity: u64, weights: &SupplierScoreWeights) -> Result<Vec<(usize, f64)>, SupplierError> {
    if candidates.is_empty() {
        return Err(SupplierError::EmptyCandidates);
    }
    let landed: Vec<Money> = candidates.iter().map(|c| ranking_landed(c.offer, quantity)).collect();
    let norm = Normalizers {
        max_landed: landed.iter().map(|m| m.0).max().unwrap_or(0) as f64,
        max_lead: candidates.iter().map(|c| c.offer.lead_time).max().unwrap_or(0) as f64,
    };
    let mut scored: Vec<(usize, f64)> = candidates
        .iter()
        .zip(&landed)
        .enumerate()
        .map(|(i, (c, l))| (i, score_offer(*l, c.offer.lead_time, c.reliability, weights, &norm)))
        .collect();
    scored.sort_by(|a, b| {
        a.1.total_cmp(&b.1).then_with(|| candidates[a.0].offer.supplier_id.cmp(&candidates[b.0].offer.supplier_id))
    });
    Ok(scored)
}

/// Largest MOQ overshoot accepted, as a fraction of the quantity still needed.
pub const MOQ_OVERSHOOT_TOLERANCE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub orders: Vec<OrderDecision>,
    /// Units of the proposal left uncovered.
    pub shortfall: u64,
}

impl Allocation {
    pub fn is_unfilled(&self) -> bool {
        self.orders.is_empty()
    }
}

/// Greedy split of a proposal across offers in ascending score order. Each offer contributes
/// `min(remaining, capacity)`; an offer whose MOQ exceeds the remainder is used only if rounding
/// up to the MOQ overshoots by at most a quarter of the remainder.
pub fn allocate(
    proposal: &ReorderProposal,
    candidates: &[Candidate<'_>],
    weights: &SupplierScoreWeights,
    period: u32,
) -> Result<Allocation, SupplierError> {
    let ranking = rank_offers(candidates, proposal.quantity, weights)?;
    let mut remaining = proposal.quantity;
    let mut orders = Vec::new();
    for (idx, _) in ranking {
        if remaining == 0 {
            break;
        }
        let offer = candidates[idx].offer;
        let take = if offer.moq > remaining {
            let overshoot = (offer.moq - remaining) as f64;
            if overshoot <= MOQ_OVERSHOOT_TOLERANCE * remaining as f64 {
                offer.moq
            } else {
                continue;
            }
        } else {
            remaining.min(offer.capacity())
        };
        if take == 0 {
            continue;
        }
        remaining = remaining.saturating_sub(take);
        orders.push(OrderDecision {
            sku_id: proposal.sku_id.clone(),
            supplier_id: offer.supplier_id.clone(),
            quantity: take,
            list_unit_price: offer.unit_cost,
            negotiated_unit_price: offer.unit_cost,
            landed_cost: offer.unit_cost.times(take) + offer.fixed_shipping,
            placed_at: period,
            promised_arrival: period + offer.lead_time,
            criticality: 0.0,
        });
    }
    // Criticality is shared across the split in proportion to quantity.
    let total: u64 = orders.iter().map(|o| o.quantity).sum();
    for o in orders.iter_mut() {
        o.criticality = proposal.criticality * o.quantity as f64 / total.max(1) as f64;
    }
    Ok(Allocation { orders, shortfall: remaining })
}

/// Exponentially weighted on-time-in-full rate. Replaces the catalogue reliability once enough
/// deliveries have been observed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplierPerformance {
    pub observed: u32,
    pub rate: f64,
}

impl SupplierPerformance {
    pub const SMOOTHING: f64 = 0.2;
    pub const MIN_OBSERVATIONS: u32 = 10;

    pub fn new(prior: f64) -> Self {
        SupplierPerformance { observed: 0, rate: prior }
    }

    pub fn record(&mut self, on_time_in_full: bool) {
        let x = if on_time_in_full { 1.0 } else { 0.0 };
        self.rate = Self::SMOOTHING * x + (1.0 - Self::SMOOTHING) * self.rate;
        self.observed += 1;
    }

    pub fn effective(&self, catalogue: f64) -> f64 {
        if self.observed >= Self::MIN_OBSERVATIONS {
            self.rate
        } else {
            catalogue
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policies::Rationale;
    use proptest::prelude::*;

    fn offer(id: &str, cost: i64, lead: u32, rel: f64, moq: u64, cap: Option<u64>) -> SupplierOffer {
        SupplierOffer {
            supplier_id: id.into(),
            sku_id: "A".into(),
            unit_cost: Money(cost),
            lead_time: lead,
            moq,
            capacity_per_order: cap,
            reliability: rel,
            fixed_shipping: Money(0),
            max_discount: 0.0,
        }
    }

    fn proposal(q: u64) -> ReorderProposal {
        ReorderProposal { sku_id: "A".into(), quantity: q, needed_by: 0, criticality: 10.0, rationale: Rationale::Newsvendor }
    }

    #[test]
    fn landed_cost_cases() {
        let mut o = offer("S", 200, 1, 1.0, 0, None);
        o.fixed_shipping = Money(1000);
        assert_eq!(landed_cost(&o, 50, Money(200)), Ok(Money(11_000)));
        o.fixed_shipping = Money(0);
        assert_eq!(landed_cost(&o, 50, Money(200)), Ok(Money(10_000)));
        o.moq = 60;
        assert_eq!(landed_cost(&o, 50, Money(200)), Err(SupplierError::BelowMoq { quantity: 50, moq: 60 }));
    }

    #[test]
    fn hand_computed_scores() {
        let w = SupplierScoreWeights { cost: 0.5, lead: 0.3, reliability: 0.2 };
        let norm = Normalizers { max_landed: 120.0, max_lead: 2.0 };
        let a = score_offer(Money(100), 2, 0.9, &w, &norm);
        let b = score_offer(Money(120), 1, 0.95, &w, &norm);
        assert!((a - 0.736_666_666).abs() < 1e-6);
        assert!((b - 0.66).abs() < 1e-9);
        assert!(b < a);
    }

    #[test]
    fn single_supplier_always_selected() {
        let o = offer("only", 500, 9, 0.1, 0, None);
        for w in [
            SupplierScoreWeights { cost: 1.0, lead: 0.0, reliability: 0.0 },
            SupplierScoreWeights { cost: 0.0, lead: 0.0, reliability: 1.0 },
        ] {
            let a = allocate(&proposal(10), &[Candidate::new(&o)], &w, 0).unwrap();
            assert_eq!(a.orders.len(), 1);
            assert_eq!(a.orders[0].supplier_id, "only");
        }
    }

    #[test]
    fn greedy_split_by_capacity() {
        let a = offer("A", 100, 1, 0.99, 0, Some(60));
        let b = offer("B", 150, 2, 0.9, 0, Some(60));
        let alloc = allocate(&proposal(100), &[Candidate::new(&b), Candidate::new(&a)], &SupplierScoreWeights::default(), 3).unwrap();
        let got: Vec<_> = alloc.orders.iter().map(|o| (o.supplier_id.as_str(), o.quantity)).collect();
        assert_eq!(got, vec![("A", 60), ("B", 40)]);
        assert_eq!(alloc.shortfall, 0);
        assert_eq!(alloc.orders[1].promised_arrival, 5);
    }

    #[test]
    fn moq_round_up_boundary() {
        let o = offer("S", 100, 1, 1.0, 25, None);
        let w = SupplierScoreWeights::default();
        let unfilled = allocate(&proposal(10), &[Candidate::new(&o)], &w, 0).unwrap();
        assert!(unfilled.is_unfilled());
        assert_eq!(unfilled.shortfall, 10);
        let filled = allocate(&proposal(20), &[Candidate::new(&o)], &w, 0).unwrap();
        assert_eq!(filled.orders[0].quantity, 25);
        assert_eq!(filled.shortfall, 0);
    }

    #[test]
    fn invalid_weights() {
        assert!(SupplierScoreWeights { cost: 0.5, lead: 0.5, reliability: 0.5 }.validate().is_err());
        assert!(SupplierScoreWeights { cost: 1.2, lead: -0.2, reliability: 0.0 }.validate().is_err());
        assert!(SupplierScoreWeights::default().validate().is_ok());
        assert_eq!(rank_offers(&[], 1, &SupplierScoreWeights::default()), Err(SupplierError::EmptyCandidates));
    }

    #[test]
    fn learned_reliability_kicks_in_after_ten() {
        let mut p = SupplierPerformance::new(0.9);
        for _ in 0..9 {
            p.record(false);
        }
        assert_eq!(p.effective(0.9), 0.9);
        p.record(false);
        assert!(p.effective(0.9) < 0.1);
    }

    fn arb_offers() -> impl Strategy<Value = Vec<SupplierOffer>> {
        proptest::collection::vec((1i64..1000, 1u32..6, 0.0f64..1.0, 0u64..30, proptest::option::of(30u64..200)), 1..6)
            .prop_map(|v| {
                v.into_iter()
                    .enumerate()
                    .map(|(i, (c, l, r, moq, cap))| offer(&format!("S{i}"), c, l, r, moq, cap))
                    .collect()
            })
    }

    proptest! {
        #[test]
        fn orders_respect_moq_and_capacity(offers in arb_offers(), q in 1u64..500) {
            let cands: Vec<_> = offers.iter().map(Candidate::new).collect();
            let alloc = allocate(&proposal(q), &cands, &SupplierScoreWeights::default(), 0).unwrap();
            for o in &alloc.orders {
                let offer = offers.iter().find(|x| x.supplier_id == o.supplier_id).unwrap();
                prop_assert!(o.quantity >= offer.moq && o.quantity <= offer.capacity());
            }
        }

        #[test]
        fn allocation_ignores_offer_order(offers in arb_offers(), q in 1u64..500, rot in 0usize..6) {
            let cands: Vec<_> = offers.iter().map(Candidate::new).collect();
            let mut rotated = cands.clone();
            let k = rot % rotated.len();
            rotated.rotate_left(k);
            rotated.reverse();
            let w = SupplierScoreWeights::default();
            let a = allocate(&proposal(q), &cands, &w, 0).unwrap();
            let b = allocate(&proposal(q), &rotated, &w, 0).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn cost_scaling_keeps_the_winner(offers in arb_offers(), q in 1u64..500, k in 2i64..5) {
            let scaled: Vec<_> = offers
                .iter()
                .map(|o| SupplierOffer { unit_cost: Money(o.unit_cost.0 * k), fixed_shipping: Money(o.fixed_shipping.0 * k), ..o.clone() })
                .collect();
            let w = SupplierScoreWeights::default();
            let a: Vec<_> = offers.iter().map(Candidate::new).collect();
            let b: Vec<_> = scaled.iter().map(Candidate::new).collect();
            let ra = rank_offers(&a, q, &w).unwrap();
            let rb = rank_offers(&b, q, &w).unwrap();
            prop_assert_eq!(ra[0].0, rb[0].0);
        }

        #[test]
        fn dominance(c in 1i64..500, dc in 1i64..500, l in 1u32..5, dl in 0u32..3, r in 0.0f64..0.9, dr in 0.0f64..0.1,
                     wc in 0.01f64..1.0, wl in 0.0f64..1.0, wr in 0.0f64..1.0) {
            let sum = wc + wl + wr;
            let w = SupplierScoreWeights { cost: wc / sum, lead: wl / sum, reliability: wr / sum };
            let a = offer("A", c, l, r + dr, 0, None);
            let b = offer("B", c + dc, l + dl, r, 0, None);
            let ranked = rank_offers(&[Candidate::new(&b), Candidate::new(&a)], 10, &w).unwrap();
            prop_assert_eq!(ranked[0].0, 1);
            prop_assert!(ranked[0].1 < ranked[1].1);
        }
    }
}
