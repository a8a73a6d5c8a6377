//! Global arbitration of candidate orders against budget, warehouse capacity and an order cap.

use serde::{Deserialize, Serialize};

use crate::inventory::{Money, OrderDecision};

/// Per-period limits. `None` means unbounded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlobalConstraints {
    #[serde(default)]
    pub budget_per_period: Option<Money>,
    #[serde(default)]
    pub warehouse_capacity: Option<u64>,
    #[serde(default)]
    pub max_orders_per_period: Option<usize>,
}

impl GlobalConstraints {
    pub fn unbounded() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Vec<String> {
        match self.budget_per_period {
            Some(b) if b.0 < 0 => vec![format!("budget_per_period {b} is negative")],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Arbitration {
    /// Funded orders in their original candidate order.
    pub funded: Vec<OrderDecision>,
    pub deferred: Vec<OrderDecision>,
}

/// Criticality per unit of landed cost. Free orders rank first.
pub fn criticality_density(order: &OrderDecision) -> f64 {
    if order.landed_cost.0 <= 0 {
        f64::INFINITY
    } else {
        order.criticality / order.landed_cost.0 as f64
    }
}

/// Funds whole orders greedily by descending criticality density while the budget, the
/// warehouse capacity (against `projected_inventory` plus funded units) and the order cap hold.
/// Orders that do not fit are skipped, not truncated, and later ones may still be funded.
pub fn arbitrate(candidates: Vec<OrderDecision>, constraints: &GlobalConstraints, projected_inventory: u64) -> Arbitration {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&candidates[a], &candidates[b]);
        criticality_density(cb)
            .total_cmp(&criticality_density(ca))
            .then_with(|| ca.sku_id.cmp(&cb.sku_id))
            .then_with(|| ca.supplier_id.cmp(&cb.supplier_id))
            .then_with(|| a.cmp(&b))
    });
    let mut funded_flags = vec![false; candidates.len()];
    let mut spent = Money::ZERO;
    let mut stock = projected_inventory;
    let mut count = 0usize;
    for idx in order {
        let c = &candidates[idx];
        if constraints.max_orders_per_period.is_some_and(|m| count >= m) {
            break;
        }
        if constraints.budget_per_period.is_some_and(|b| spent + c.landed_cost > b) {
            continue;
        }
        if constraints.warehouse_capacity.is_some_and(|cap| stock + c.quantity > cap) {
            continue;
        }
        spent += c.landed_cost;
        stock += c.quantity;
        count += 1;
        funded_flags[idx] = true;
    }
    let mut out = Arbitration::default();
    for (c, funded) in candidates.into_iter().zip(funded_flags) {
        if funded {
            out.funded.push(c);
        } else {
            out.deferred.push(c);
        }
    }
    out
}
