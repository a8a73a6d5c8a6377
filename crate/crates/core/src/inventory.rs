//! Domain types and the inventory ledger.
//!
//! Currency is carried as integer minor units ([`Money`], cents) so that cost breakdowns sum
//! exactly. Stock is held as FIFO batches (oldest first) that age once per period; unmet demand
//! is lost, not backordered.

use std::collections::VecDeque;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use serde::{Deserialize, Serialize};

/// Amount of currency in minor units (cents).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Money(pub i64);

impl Money {
    pub const ZERO: Money = Money(0);

    /// Converts a decimal currency amount, rounding half away from zero to the nearest cent.
    pub fn from_currency(amount: f64) -> Money {
        Money((amount * 100.0).round() as i64)
    }

    pub fn cents(self) -> i64 {
        self.0
    }

    pub fn as_currency(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub fn times(self, units: u64) -> Money {
        Money(self.0 * units as i64)
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Grocery,
    Clothing,
    Cosmetics,
    Frozen,
    Other,
}

/// Item master record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sku {
    pub id: String,
    pub category: Category,
    /// Per unit per period, charged on end-of-period on-hand.
    pub holding_cost: Money,
    /// Per unit of lost demand.
    pub stockout_penalty: Money,
    /// Fraction of post-sales on-hand lost each period.
    pub decay_fraction: f64,
    /// `None` for durables.
    pub shelf_life: Option<u32>,
    /// Revenue credited per unit sold when computing trend ROI.
    pub unit_margin: Money,
}

impl Sku {
    pub fn is_perishable(&self) -> bool {
        self.decay_fraction > 0.0 || self.shelf_life.is_some()
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.id.is_empty() {
            errors.push("id must not be empty".to_string());
        }
        if self.holding_cost < Money::ZERO {
            errors.push("holding_cost must be >= 0".to_string());
        }
        if self.stockout_penalty < Money::ZERO {
            errors.push("stockout_penalty must be >= 0".to_string());
        }
        if !(0.0..=1.0).contains(&self.decay_fraction) {
            errors.push(format!("decay_fraction {} outside [0, 1]", self.decay_fraction));
        }
        if self.shelf_life == Some(0) {
            errors.push("shelf_life must be >= 1".to_string());
        }
        errors
    }
}

/// One supplier's terms for one SKU.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupplierOffer {
    pub supplier_id: String,
    pub sku_id: String,
    /// List price per unit.
    pub unit_cost: Money,
    pub lead_time: u32,
    #[serde(default)]
    pub moq: u64,
    /// `None` means unlimited.
    #[serde(default)]
    pub capacity_per_order: Option<u64>,
    /// Probability an order arrives on time and in full.
    pub reliability: f64,
    #[serde(default)]
    pub fixed_shipping: Money,
    #[serde(default)]
    pub max_discount: f64,
}

impl SupplierOffer {
    /// Lowest unit price the supplier could ever accept, `c * (1 - max_discount)`.
    pub fn floor_price(&self) -> f64 {
        self.unit_cost.0 as f64 * (1.0 - self.max_discount)
    }

    pub fn capacity(&self) -> u64 {
        self.capacity_per_order.unwrap_or(u64::MAX)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if self.unit_cost <= Money::ZERO {
            errors.push("unit_cost must be > 0".to_string());
        }
        if self.lead_time < 1 {
            errors.push("lead_time must be >= 1".to_string());
        }
        if !(0.0..=1.0).contains(&self.reliability) {
            errors.push(format!("reliability {} outside [0, 1]", self.reliability));
        }
        if !(0.0..1.0).contains(&self.max_discount) {
            errors.push(format!("max_discount {} outside [0, 1)", self.max_discount));
        }
        if self.fixed_shipping < Money::ZERO {
            errors.push("fixed_shipping must be >= 0".to_string());
        }
        if let Some(cap) = self.capacity_per_order {
            if cap == 0 {
                errors.push("capacity_per_order must be > 0".to_string());
            } else if cap < self.moq {
                errors.push(format!("capacity_per_order {cap} below moq {}", self.moq));
            }
        }
        errors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Batch {
    pub quantity: u64,
    pub age: u32,
    pub unit_cost_paid: Money,
}

/// An in-transit shipment. `quantity` and `arrival_period` are the realized delivery; the
/// promised values are what the buyer believes until the shipment lands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shipment {
    pub arrival_period: u32,
    pub quantity: u64,
    pub unit_cost: Money,
    pub promised_quantity: u64,
    pub promised_arrival: u32,
    /// Caller-defined reference, e.g. an index into an order log.
    pub order_ref: usize,
}

/// Purchase candidate or committed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDecision {
    pub sku_id: String,
    pub supplier_id: String,
    pub quantity: u64,
    pub list_unit_price: Money,
    pub negotiated_unit_price: Money,
    /// `negotiated_unit_price * quantity + fixed_shipping`.
    pub landed_cost: Money,
    pub placed_at: u32,
    pub promised_arrival: u32,
    /// Estimated stockout penalty avoided by this order.
    pub criticality: f64,
}

impl OrderDecision {
    pub fn lead_time(&self) -> u32 {
        self.promised_arrival - self.placed_at
    }
}

/// Cumulative cost and flow accounts for one SKU.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounts {
    pub purchase: Money,
    pub holding: Money,
    pub stockout: Money,
    pub spoilage: Money,
    pub demand: u64,
    pub sales: u64,
    pub stockout_units: u64,
    pub spoiled_units: u64,
    pub received_units: u64,
    /// Purchase value of the units sold.
    pub cost_of_goods_sold: Money,
}

impl Accounts {
    pub fn total_cost(&self) -> Money {
        self.purchase + self.holding + self.stockout + self.spoilage
    }
}

/// Costs incurred in the current period, not yet folded into the cumulative accounts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCosts {
    pub purchase: Money,
    pub holding: Money,
    pub stockout: Money,
    pub spoilage: Money,
}

impl PeriodCosts {
    pub fn total(&self) -> Money {
        self.purchase + self.holding + self.stockout + self.spoilage
    }
}

impl AddAssign for PeriodCosts {
    fn add_assign(&mut self, rhs: PeriodCosts) {
        self.purchase += rhs.purchase;
        self.holding += rhs.holding;
        self.stockout += rhs.stockout;
        self.spoilage += rhs.spoilage;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fulfillment {
    pub sales: u64,
    pub stockout_units: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Received {
    pub units: u64,
    pub shipments: Vec<Shipment>,
}

/// Ledger for a single SKU.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SkuLedger {
    batches: VecDeque<Batch>,
    pipeline: Vec<Shipment>,
    accounts: Accounts,
    pending: PeriodCosts,
}

impl SkuLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ledger holding `quantity` fresh units bought at `unit_cost`.
    pub fn with_stock(quantity: u64, unit_cost: Money) -> Self {
        let mut ledger = Self::default();
        if quantity > 0 {
            ledger.batches.push_back(Batch { quantity, age: 0, unit_cost_paid: unit_cost });
        }
        ledger
    }

    pub fn batches(&self) -> impl ExactSizeIterator<Item = &Batch> {
        self.batches.iter()
    }

    pub fn pipeline(&self) -> &[Shipment] {
        &self.pipeline
    }

    pub fn accounts(&self) -> &Accounts {
        &self.accounts
    }

    pub fn pending_costs(&self) -> &PeriodCosts {
        &self.pending
    }

    pub fn on_hand(&self) -> u64 {
        self.batches.iter().map(|b| b.quantity).sum()
    }

    /// Units the buyer expects to still arrive.
    pub fn pipeline_units(&self) -> u64 {
        self.pipeline.iter().map(|s| s.promised_quantity).sum()
    }

    /// On-hand plus in-transit (promised) quantity.
    pub fn position(&self) -> u64 {
        self.on_hand() + self.pipeline_units()
    }

    pub fn inventory_value(&self) -> Money {
        self.batches.iter().map(|b| b.unit_cost_paid.times(b.quantity)).sum()
    }

    /// Issues stock oldest batch first. Unmet demand is lost and penalised at `p` per unit.
    pub fn fulfill_demand(&mut self, sku: &Sku, demand: u64) -> Fulfillment {
        let mut remaining = demand;
        let mut cogs = Money::ZERO;
        while remaining > 0 {
            let Some(front) = self.batches.front_mut() else { break };
            let take = front.quantity.min(remaining);
            front.quantity -= take;
            remaining -= take;
            cogs += front.unit_cost_paid.times(take);
            if front.quantity == 0 {
                self.batches.pop_front();
            }
        }
        let sales = demand - remaining;
        self.accounts.demand += demand;
        self.accounts.sales += sales;
        self.accounts.stockout_units += remaining;
        self.accounts.cost_of_goods_sold += cogs;
        self.pending.stockout += sku.stockout_penalty.times(remaining);
        Fulfillment { sales, stockout_units: remaining }
    }

    /// Ages every batch, drops expired batches, then removes `floor(decay * on_hand)` units
    /// oldest first. Spoiled units are valued at the price paid for them.
    pub fn age_and_spoil(&mut self, sku: &Sku) -> u64 {
        let mut spoiled = 0u64;
        let mut value = Money::ZERO;
        for batch in self.batches.iter_mut() {
            batch.age += 1;
        }
        if let Some(life) = sku.shelf_life {
            self.batches.retain(|b| {
                if b.age > life {
                    spoiled += b.quantity;
                    value += b.unit_cost_paid.times(b.quantity);
                    false
                } else {
                    true
                }
            });
        }
        if sku.decay_fraction > 0.0 {
            let on_hand = self.on_hand();
            let mut decay = (sku.decay_fraction * on_hand as f64).floor() as u64;
            decay = decay.min(on_hand);
            while decay > 0 {
                let front = self.batches.front_mut().expect("decay bounded by on-hand");
                let take = front.quantity.min(decay);
                front.quantity -= take;
                decay -= take;
                spoiled += take;
                value += front.unit_cost_paid.times(take);
                if front.quantity == 0 {
                    self.batches.pop_front();
                }
            }
        }
        self.accounts.spoiled_units += spoiled;
        self.pending.spoilage += value;
        spoiled
    }

    /// Moves every shipment due at `period` into stock as fresh batches.
    pub fn receive_shipments(&mut self, period: u32) -> Received {
        let mut received = Received::default();
        let mut i = 0;
        while i < self.pipeline.len() {
            if self.pipeline[i].arrival_period == period {
                let shipment = self.pipeline.remove(i);
                if shipment.quantity > 0 {
                    self.batches.push_back(Batch {
                        quantity: shipment.quantity,
                        age: 0,
                        unit_cost_paid: shipment.unit_cost,
                    });
                }
                received.units += shipment.quantity;
                received.shipments.push(shipment);
            } else {
                i += 1;
            }
        }
        self.accounts.received_units += received.units;
        received
    }

    /// Adds a committed shipment to the pipeline and books its purchase cost.
    pub fn commit_shipment(&mut self, shipment: Shipment, purchase_cost: Money) {
        self.pending.purchase += purchase_cost;
        self.pipeline.push(shipment);
    }

    /// Charges holding on end-of-period on-hand and folds this period's costs into the
    /// cumulative accounts. Returns the period's total cost.
    pub fn accrue_period_costs(&mut self, sku: &Sku) -> PeriodCosts {
        self.pending.holding += sku.holding_cost.times(self.on_hand());
        let period = std::mem::take(&mut self.pending);
        self.accounts.purchase += period.purchase;
        self.accounts.holding += period.holding;
        self.accounts.stockout += period.stockout;
        self.accounts.spoilage += period.spoilage;
        period
    }
}

/// Ledgers for every SKU of a run, indexed like the scenario's SKU list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InventoryLedger {
    ids: Vec<String>,
    ledgers: Vec<SkuLedger>,
}

impl InventoryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, sku_id: impl Into<String>, ledger: SkuLedger) -> usize {
        self.ids.push(sku_id.into());
        self.ledgers.push(ledger);
        self.ledgers.len() - 1
    }

    pub fn index_of(&self, sku_id: &str) -> Option<usize> {
        self.ids.iter().position(|id| id == sku_id)
    }

    pub fn get(&self, index: usize) -> &SkuLedger {
        &self.ledgers[index]
    }

    pub fn get_mut(&mut self, index: usize) -> &mut SkuLedger {
        &mut self.ledgers[index]
    }

    pub fn by_id(&self, sku_id: &str) -> Option<&SkuLedger> {
        self.index_of(sku_id).map(|i| &self.ledgers[i])
    }

    pub fn len(&self) -> usize {
        self.ledgers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ledgers.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SkuLedger)> {
        self.ids.iter().map(String::as_str).zip(self.ledgers.iter())
    }

    pub fn total_on_hand(&self) -> u64 {
        self.ledgers.iter().map(SkuLedger::on_hand).sum()
    }

    pub fn total_position(&self) -> u64 {
        self.ledgers.iter().map(SkuLedger::position).sum()
    }
}
