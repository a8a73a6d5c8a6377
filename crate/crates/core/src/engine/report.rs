//! Run records and headline metrics.

use serde::{Deserialize, Serialize};

use crate::inventory::{Money, PeriodCosts};
use crate::policies::{PolicyKind, Rationale};
use crate::trend::TrendRoiReport;

use super::AgentToggles;

/// One SKU in one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkuPeriod {
    pub period: u32,
    pub sku: usize,
    pub start_on_hand: u64,
    pub received: u64,
    pub demand: u64,
    pub sales: u64,
    pub stockout_units: u64,
    pub spoiled: u64,
    pub end_on_hand: u64,
    pub end_inventory_value: Money,
    pub cogs: Money,
    pub costs: PeriodCosts,
}

/// All active SKUs in one period.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub period: u32,
    pub in_window: bool,
    pub active_skus: usize,
    pub on_hand: u64,
    pub inventory_value: Money,
    pub demand: u64,
    pub sales: u64,
    pub stockout_units: u64,
    pub stockout_skus: usize,
    pub spoiled: u64,
    pub received: u64,
    pub cogs: Money,
    pub orders_placed: usize,
    pub orders_deferred: usize,
    pub costs: PeriodCosts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub order_ref: usize,
    pub sku_id: String,
    pub supplier_id: String,
    pub placed_at: u32,
    pub quantity: u64,
    pub list_unit_price: Money,
    pub negotiated_unit_price: Money,
    pub landed_cost: Money,
    pub promised_arrival: u32,
    pub realized_arrival: u32,
    pub delivered: u64,
    pub purchase_cost: Money,
    pub criticality: f64,
    pub rationale: Rationale,
}

impl OrderRecord {
    pub fn on_time_in_full(&self) -> bool {
        self.realized_arrival == self.promised_arrival && self.delivered == self.quantity
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdoptionEvent {
    pub period: u32,
    pub sku_id: String,
    pub score: f64,
}

/// Per-SKU totals over the metrics window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkuSummary {
    pub sku_id: String,
    pub adopted_at: Option<u32>,
    pub demand: u64,
    pub sales: u64,
    pub stockout_units: u64,
    pub costs: PeriodCosts,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Share of active SKU-periods with unmet demand.
    pub stockout_rate: f64,
    pub fill_rate: f64,
    /// Mean end-of-period inventory value, in currency units.
    pub avg_inventory_value: f64,
    pub total_cost: Money,
    pub purchase_cost: Money,
    pub holding_cost: Money,
    pub stockout_cost: Money,
    pub spoilage_cost: Money,
    pub inventory_turnover: f64,
    pub demand_units: u64,
    pub sales_units: u64,
    pub stockout_units: u64,
    pub spoiled_units: u64,
    pub sku_periods: u64,
    pub stockout_sku_periods: u64,
    pub orders_placed: u64,
    pub orders_deferred: u64,
    pub adopted: u64,
    pub trend: TrendRoiReport,
}

impl Metrics {
    /// Total cost per unit demanded, in currency units.
    pub fn cost_per_unit_demand(&self) -> f64 {
        if self.demand_units == 0 {
            0.0
        } else {
            self.total_cost.as_currency() / self.demand_units as f64
        }
    }

    /// Aggregate trend ROI, zero when nothing was adopted.
    pub fn trend_roi(&self) -> f64 {
        self.trend.aggregate_roi.unwrap_or(0.0)
    }

    /// Metrics as `(name, value)` pairs in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("stockout_rate", self.stockout_rate),
            ("fill_rate", self.fill_rate),
            ("avg_inventory_value", self.avg_inventory_value),
            ("total_cost", self.total_cost.as_currency()),
            ("purchase_cost", self.purchase_cost.as_currency()),
            ("holding_cost", self.holding_cost.as_currency()),
            ("stockout_cost", self.stockout_cost.as_currency()),
            ("spoilage_cost", self.spoilage_cost.as_currency()),
            ("inventory_turnover", self.inventory_turnover),
            ("cost_per_unit_demand", self.cost_per_unit_demand()),
            ("trend_roi", self.trend_roi()),
            ("trend_top_seller_fraction", self.trend.top_seller_fraction),
            ("adopted", self.adopted as f64),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario_name: String,
    pub scenario_hash: String,
    pub policy: PolicyKind,
    pub seed: u64,
    pub toggles: AgentToggles,
    pub horizon: u32,
    pub warmup: u32,
    pub sku_ids: Vec<String>,
    pub metrics: Metrics,
    pub periods: Vec<PeriodRecord>,
    pub sku_periods: Vec<SkuPeriod>,
    pub sku_summaries: Vec<SkuSummary>,
    pub orders: Vec<OrderRecord>,
    pub adoptions: Vec<AdoptionEvent>,
}
