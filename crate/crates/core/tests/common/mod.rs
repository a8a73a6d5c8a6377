//! Brute-force enumeration of order plans on tiny single-SKU instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use replenish_core::inventory::{Batch, Category, Money, Shipment, Sku, SkuLedger, SupplierOffer};
use replenish_core::policies::oracle::{plan, PlanningProblem};

pub const HORIZON: u32 = 4;

pub struct Instance {
    pub sku: Sku,
    pub offers: Vec<SupplierOffer>,
    pub demand: Vec<u64>,
    pub initial: u64,
}

pub fn instance(rng: &mut ChaCha8Rng) -> Instance {
    let perishable = rng.random_bool(0.4);
    let sku = Sku {
        id: "A".into(),
        category: Category::Grocery,
        holding_cost: Money(rng.random_range(1..=20)),
        stockout_penalty: Money(10_000),
        decay_fraction: if perishable && rng.random_bool(0.5) { 0.3 } else { 0.0 },
        shelf_life: if perishable { Some(rng.random_range(1..=2)) } else { None },
        unit_margin: Money(0),
    };
    let n_offers = rng.random_range(1..=2);
    let offers = (0..n_offers)
        .map(|j| SupplierOffer {
            supplier_id: format!("S{j}"),
            sku_id: "A".into(),
            unit_cost: Money(rng.random_range(80..=120)),
            lead_time: rng.random_range(1..=2),
            moq: rng.random_range(0..=3),
            capacity_per_order: None,
            reliability: 1.0,
            fixed_shipping: Money(rng.random_range(0..=300)),
            max_discount: 0.0,
        })
        .collect();
    // Period 0 has already happened; demand there is irrelevant.
    let demand = std::iter::once(0).chain((1..HORIZON).map(|_| rng.random_range(0..=2))).collect();
    Instance { sku, offers, demand, initial: rng.random_range(0..=3) }
}

/// Ledger state at the end of period 0, after spoilage.
pub fn start(inst: &Instance) -> SkuLedger {
    let mut ledger = SkuLedger::with_stock(inst.initial, Money(100));
    ledger.age_and_spoil(&inst.sku);
    ledger.accrue_period_costs(&inst.sku);
    ledger
}

/// Total cost of periods `1..HORIZON` with the given orders `(supplier, placed_at, quantity)`.
pub fn simulate(inst: &Instance, orders: &[(usize, u32, u64)]) -> Money {
    let mut ledger = start(inst);
    let mut total = Money::ZERO;
    for (k, &(j, placed, q)) in orders.iter().enumerate() {
        let o = &inst.offers[j];
        let shipment = Shipment {
            arrival_period: placed + o.lead_time,
            quantity: q,
            unit_cost: o.unit_cost,
            promised_quantity: q,
            promised_arrival: placed + o.lead_time,
            order_ref: k,
        };
        ledger.commit_shipment(shipment, o.unit_cost.times(q) + o.fixed_shipping);
    }
    total += ledger.accrue_period_costs(&inst.sku).purchase;
    for t in 1..HORIZON {
        ledger.receive_shipments(t);
        ledger.fulfill_demand(&inst.sku, inst.demand[t as usize]);
        ledger.age_and_spoil(&inst.sku);
        total += ledger.accrue_period_costs(&inst.sku).total();
    }
    total
}

/// Minimum cost over every combination of order quantities in every useful slot.
pub fn exhaustive(inst: &Instance) -> Money {
    let max_q: u64 = inst.demand.iter().sum::<u64>();
    let mut slots = Vec::new();
    for (j, o) in inst.offers.iter().enumerate() {
        for placed in 0..HORIZON {
            if placed + o.lead_time < HORIZON {
                slots.push((j, placed));
            }
        }
    }
    let choices: Vec<Vec<u64>> = slots
        .iter()
        .map(|&(j, _)| {
            let moq = inst.offers[j].moq.max(1);
            std::iter::once(0).chain(moq..=max_q.max(moq)).collect()
        })
        .collect();
    let mut best = Money(i64::MAX);
    let mut idx = vec![0usize; slots.len()];
    loop {
        let orders: Vec<(usize, u32, u64)> = slots
            .iter()
            .zip(&idx)
            .zip(&choices)
            .filter_map(|((&(j, p), &i), c)| (c[i] > 0).then_some((j, p, c[i])))
            .collect();
        best = best.min(simulate(inst, &orders));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Planner cost, the ledger replay of the plan, and the enumerated optimum.
pub fn compare(inst: &Instance) -> (Money, Money, Money) {
    let offers: Vec<&SupplierOffer> = inst.offers.iter().collect();
    let price = |j: usize, _q: u64, _t: u32| offers[j].unit_cost;
    let stock: Vec<Batch> = start(inst).batches().copied().collect();
    let problem = PlanningProblem {
        sku: &inst.sku,
        demand: &inst.demand,
        now: 0,
        horizon: HORIZON,
        stock,
        pipeline: vec![],
        offers: offers.clone(),
        price: &price,
    };
    let p = plan(&problem);
    let replay: Vec<(usize, u32, u64)> = p.orders.iter().map(|o| (o.supplier, o.placed_at, o.quantity)).collect();
    (p.cost, simulate(inst, &replay), exhaustive(inst))
}
