//! The per-period simulation loop.
//!
//! Each period runs, in order: receive shipments, realize and fulfill demand, age and spoil,
//! update forecasts and trend scores, monitor, decide, allocate to suppliers, negotiate,
//! arbitrate, commit (drawing disruptions), and accrue costs.
//!
//! Every policy shares the same warm-up controller (a newsvendor rule with the first-listed
//! supplier at list price), so all policies reach the end of warm-up in the same state. The
//! perfect-foresight oracle takes over each SKU one maximum lead time before the end of warm-up
//! so that it can cover the first measured period.

pub mod experiments;
pub mod report;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coordination::arbitrate;
use crate::demand::{apply_demand_shocks, generate_trace, perturb_order, DemandError, Realization};
use crate::forecast::{ForecastError, Forecaster};
use crate::inventory::{InventoryLedger, Money, OrderDecision, PeriodCosts, Shipment, Sku, SkuLedger, SupplierOffer};
use crate::negotiation::negotiate;
use crate::policies::oracle::{plan, FixedArrival, Plan, PlanningProblem};
use crate::policies::{
    decide_agentic, decide_newsvendor, decide_rule80, decide_sq, decide_static_rop, monitor_flags, MonitorEntry,
    PolicyKind, Rationale, ReorderProposal, SkuState, StaticThresholds,
};
use crate::rng::RngStream;
use crate::scenario::{Issue, Scenario, SkuEntry};
use crate::stats::{mean, sample_std};
use crate::supplier::{allocate, rank_offers, Candidate, SupplierPerformance};
use crate::trend::{gate_adopt, generate_signal, slope_component, trend_roi, trend_score_at, GateDecision, SkuOutcome, TrendSignal};

pub use experiments::*;
pub use report::*;

/// Which optional agents take part in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentToggles {
    pub negotiation: bool,
    pub supplier_selection: bool,
    pub trend: bool,
}

impl AgentToggles {
    pub const ALL: AgentToggles = AgentToggles { negotiation: true, supplier_selection: true, trend: true };
    pub const NONE: AgentToggles = AgentToggles { negotiation: false, supplier_selection: false, trend: false };

    /// Agentic runs every agent, the oracle negotiates, baselines use the first-listed supplier
    /// at list price.
    pub fn for_policy(kind: PolicyKind) -> Self {
        match kind {
            PolicyKind::Agentic => Self::ALL,
            PolicyKind::Oracle => AgentToggles { negotiation: true, ..Self::NONE },
            _ => Self::NONE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub policy: PolicyKind,
    pub seed: u64,
    pub toggles: AgentToggles,
}

impl RunConfig {
    pub fn new(policy: PolicyKind, seed: u64) -> Self {
        RunConfig { policy, seed, toggles: AgentToggles::for_policy(policy) }
    }

    pub fn with_toggles(mut self, toggles: AgentToggles) -> Self {
        self.toggles = toggles;
        self
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid scenario: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidScenario(Vec<Issue>),
    #[error(transparent)]
    Demand(#[from] DemandError),
    #[error(transparent)]
    Forecast(#[from] ForecastError),
}

pub fn run_episode(scenario: &Scenario, policy: PolicyKind, seed: u64) -> Result<RunReport, EngineError> {
    run(scenario, &RunConfig::new(policy, seed))
}

/// Per-SKU runtime state.
struct Item<'s> {
    entry: &'s SkuEntry,
    sku: Sku,
    offers: Vec<&'s SupplierOffer>,
    trace: Vec<u64>,
    forecaster: Forecaster,
    active: bool,
    candidate: Option<usize>,
    adopted_at: Option<u32>,
    scores: Vec<f64>,
    thresholds: Option<StaticThresholds>,
    oracle_from: u32,
    oracle: Option<Plan>,
    oracle_dirty: bool,
}

struct Pending {
    item: usize,
    offer: usize,
    order: OrderDecision,
    rationale: Rationale,
}

pub fn run(scenario: &Scenario, config: &RunConfig) -> Result<RunReport, EngineError> {
    let issues = scenario.validate();
    if !issues.is_empty() {
        return Err(EngineError::InvalidScenario(issues));
    }
    let seed = config.seed;
    let toggles = config.toggles;
    let horizon = scenario.horizon;
    let warmup = scenario.warmup;
    let params = &scenario.policy;

    let signals: Vec<TrendSignal> = scenario
        .trend_candidates
        .iter()
        .map(|c| TrendSignal {
            candidate_sku_id: c.sku.id.clone(),
            volume_series: generate_signal(&c.signal.shape, horizon, c.signal.noise, &RngStream::new(seed, format!("signal/{}", c.sku.id))),
            sentiment: c.signal.sentiment,
            window: c.signal.window,
        })
        .collect();

    let mut items = Vec::new();
    let mut ledger = InventoryLedger::new();
    for (idx, entry) in scenario.all_sku_entries().enumerate() {
        let candidate = idx.checked_sub(scenario.skus.len());
        let mut trace = generate_trace(&entry.demand, horizon, &RngStream::new(seed, format!("demand/{}", entry.id)))?;
        apply_demand_shocks(&mut trace, &scenario.disruptions.demand_shock, &RngStream::new(seed, format!("shock/{}", entry.id)));
        let offers: Vec<&SupplierOffer> = scenario.offers_for(&entry.id).collect();
        let max_lead = offers.iter().map(|o| o.lead_time).max().unwrap_or(1);
        let sku = entry.sku();
        ledger.insert(entry.id.clone(), SkuLedger::with_stock(entry.initial_stock, offers[0].unit_cost));
        items.push(Item {
            entry,
            forecaster: Forecaster::seeded(scenario.forecast.method, scenario.forecast.error_window, entry.demand.base_mean)?,
            sku,
            offers,
            trace,
            active: candidate.is_none(),
            candidate,
            adopted_at: None,
            scores: Vec::new(),
            thresholds: None,
            oracle_from: warmup.saturating_sub(max_lead),
            oracle: None,
            oracle_dirty: false,
        });
    }

    let mut performance: BTreeMap<String, SupplierPerformance> = BTreeMap::new();
    for o in &scenario.offers {
        performance.entry(o.supplier_id.clone()).or_insert_with(|| SupplierPerformance::new(o.reliability));
    }

    let mut periods = Vec::with_capacity(horizon as usize);
    let mut sku_periods = Vec::new();
    let mut orders: Vec<OrderRecord> = Vec::new();
    let mut adoptions = Vec::new();
    let dummy_stream = RngStream::new(seed, "negotiation");

    for t in 0..horizon {
        let in_window = t >= warmup;
        let mut rows: Vec<Option<SkuPeriod>> = vec![None; items.len()];

        // Stock movements and forecast updates.
        for (i, item) in items.iter_mut().enumerate() {
            if !item.active {
                continue;
            }
            let led = ledger.get_mut(i);
            let start = led.on_hand();
            let received = led.receive_shipments(t);
            for s in &received.shipments {
                let rec = &orders[s.order_ref];
                if let Some(p) = performance.get_mut(&rec.supplier_id) {
                    p.record(rec.on_time_in_full());
                }
            }
            let demand = item.trace[t as usize];
            let cogs_before = led.accounts().cost_of_goods_sold;
            let f = led.fulfill_demand(&item.sku, demand);
            let cogs = led.accounts().cost_of_goods_sold - cogs_before;
            let spoiled = led.age_and_spoil(&item.sku);
            item.forecaster.observe(demand as f64);
            rows[i] = Some(SkuPeriod {
                period: t,
                sku: i,
                start_on_hand: start,
                received: received.units,
                demand,
                sales: f.sales,
                stockout_units: f.stockout_units,
                spoiled,
                end_on_hand: 0,
                end_inventory_value: Money::ZERO,
                cogs,
                costs: PeriodCosts::default(),
            });
        }

        // Trend scoring and adoption.
        for item in items.iter_mut() {
            let Some(c) = item.candidate else { continue };
            if item.active {
                continue;
            }
            let signal = &signals[c];
            let Ok(score) = trend_score_at(signal, t as usize, &scenario.trend.score) else { continue };
            item.scores.push(score);
            if !toggles.trend || !in_window {
                continue;
            }
            let adopt = match gate_adopt(&item.scores, &scenario.trend.gate) {
                GateDecision::Adopt => true,
                GateDecision::QueueForHuman => scenario.trend.gate.human_approves,
                GateDecision::Reject => false,
            };
            if adopt {
                let cand = &scenario.trend_candidates[c];
                let level = cand.conversion * signal.volume_series[t as usize];
                item.forecaster = Forecaster::seeded(scenario.forecast.method, scenario.forecast.error_window, level)?;
                item.active = true;
                item.adopted_at = Some(t);
                adoptions.push(AdoptionEvent { period: t, sku_id: item.sku.id.clone(), score });
            }
        }

        // Baseline thresholds freeze at the end of warm-up.
        if t == warmup {
            for item in items.iter_mut().filter(|it| it.candidate.is_none()) {
                let (mu, sigma) = if warmup == 0 {
                    (item.entry.demand.base_mean, item.entry.demand.cv * item.entry.demand.base_mean)
                } else {
                    let hist: Vec<f64> = item.trace[..warmup as usize].iter().map(|&d| d as f64).collect();
                    (mean(&hist), sample_std(&hist))
                };
                item.thresholds = Some(StaticThresholds::calibrate(mu, sigma, item.offers[0].lead_time, &item.sku, params));
            }
        }

        // Monitoring, decisions and supplier allocation.
        let reliability = |o: &SupplierOffer| performance.get(&o.supplier_id).map_or(o.reliability, |p| p.effective(o.reliability));
        let review_day = t % params.review_period == 0;
        let agentic_live = config.policy == PolicyKind::Agentic && in_window;
        let chosen_lead: Vec<u32> = items
            .iter()
            .map(|item| {
                if agentic_live && toggles.supplier_selection {
                    let cands: Vec<Candidate> = item.offers.iter().map(|o| Candidate { offer: o, reliability: reliability(o) }).collect();
                    let q0 = (item.forecaster.stats().mean_estimate * f64::from(params.review_period + 1)).round().max(1.0) as u64;
                    let ranked = rank_offers(&cands, q0, &scenario.supplier_weights).expect("every SKU has an offer");
                    item.offers[ranked[0].0].lead_time
                } else {
                    item.offers[0].lead_time
                }
            })
            .collect();
        let flagged: Vec<String> = if agentic_live {
            let entries: Vec<MonitorEntry> = items
                .iter()
                .enumerate()
                .filter(|(_, it)| it.active)
                .map(|(i, it)| MonitorEntry {
                    sku: &it.sku,
                    on_hand: ledger.get(i).on_hand(),
                    pipeline: ledger.get(i).pipeline_units(),
                    forecast: it.forecaster.stats(),
                    lead_time: chosen_lead[i],
                })
                .collect();
            monitor_flags(&entries, params, params.monitor_horizon).into_iter().map(|f| f.sku_id).collect()
        } else {
            Vec::new()
        };

        let mut pending: Vec<Pending> = Vec::new();
        for (i, item) in items.iter_mut().enumerate() {
            if !item.active {
                continue;
            }
            let led = ledger.get(i);
            let state = SkuState { sku: &item.sku, period: t, on_hand: led.on_hand(), position: led.position(), lead_time: chosen_lead[i] };
            let stats = item.forecaster.stats();
            let oracle_control = config.policy == PolicyKind::Oracle && t >= item.oracle_from;

            if oracle_control {
                let stale = match &item.oracle {
                    None => true,
                    Some(p) => item.oracle_dirty || p.expected_on_hand_at(t).is_some_and(|e| e != state.on_hand),
                };
                if stale {
                    let offers = item.offers.clone();
                    let sku_id = item.sku.id.clone();
                    let negotiation = &scenario.negotiation;
                    let use_negotiation = toggles.negotiation;
                    let price = |j: usize, q: u64, placed: u32| -> Money {
                        if !use_negotiation {
                            return offers[j].unit_cost;
                        }
                        let stream = if negotiation.jitter > 0.0 {
                            RngStream::new(seed, format!("negotiation/{}/{}/{}", sku_id, offers[j].supplier_id, placed))
                        } else {
                            dummy_stream.clone()
                        };
                        negotiate(offers[j], q, negotiation, &stream).unit_price
                    };
                    let problem = PlanningProblem {
                        sku: &item.sku,
                        demand: &item.trace,
                        now: t,
                        horizon,
                        stock: led.batches().copied().collect(),
                        pipeline: led
                            .pipeline()
                            .iter()
                            .map(|s| FixedArrival { period: s.arrival_period, quantity: s.quantity, unit_cost: s.unit_cost })
                            .collect(),
                        offers: item.offers.clone(),
                        price: &price,
                    };
                    item.oracle = Some(plan(&problem));
                    item.oracle_dirty = false;
                }
                let p = item.oracle.as_ref().expect("plan present");
                for o in p.orders_at(t) {
                    let offer = item.offers[o.supplier];
                    pending.push(Pending {
                        item: i,
                        offer: o.supplier,
                        order: order_for(&item.sku, offer, o.quantity, t, item.sku.stockout_penalty.0 as f64 * o.quantity as f64),
                        rationale: Rationale::Oracle,
                    });
                }
                continue;
            }

            let warm = !in_window;
            let proposal = if warm {
                if review_day {
                    decide_newsvendor(&state, &stats, params)
                } else {
                    ReorderProposal::none(&item.sku.id, t)
                }
            } else {
                match config.policy {
                    PolicyKind::StaticRop | PolicyKind::Rule80 => {
                        let th = item.thresholds.unwrap_or_else(|| {
                            StaticThresholds::calibrate(stats.mean_estimate, stats.error_std, item.offers[0].lead_time, &item.sku, params)
                        });
                        if config.policy == PolicyKind::StaticRop {
                            decide_static_rop(&state, &th)
                        } else {
                            decide_rule80(&state, th.order_up_to)
                        }
                    }
                    PolicyKind::SQ => decide_sq(&state, &stats, params),
                    PolicyKind::Newsvendor => {
                        if review_day {
                            decide_newsvendor(&state, &stats, params)
                        } else {
                            ReorderProposal::none(&item.sku.id, t)
                        }
                    }
                    PolicyKind::Agentic | PolicyKind::Oracle => {
                        if review_day || flagged.contains(&item.sku.id) {
                            let boost = match (item.candidate, item.adopted_at) {
                                (Some(c), Some(_)) => {
                                    let s = &signals[c];
                                    let end = (t as usize + 1).min(s.volume_series.len());
                                    let start = end.saturating_sub(s.window);
                                    slope_component(&s.volume_series[start..end], &scenario.trend.score)
                                }
                                _ => 0.0,
                            };
                            decide_agentic(&state, &stats, boost, params)
                        } else {
                            ReorderProposal::none(&item.sku.id, t)
                        }
                    }
                }
            };
            if proposal.quantity == 0 {
                continue;
            }
            if !warm && toggles.supplier_selection {
                let cands: Vec<Candidate> = item.offers.iter().map(|o| Candidate { offer: o, reliability: reliability(o) }).collect();
                let alloc = allocate(&proposal, &cands, &scenario.supplier_weights, t).expect("every SKU has an offer");
                for order in alloc.orders {
                    let offer = item.offers.iter().position(|o| o.supplier_id == order.supplier_id).expect("allocated offer exists");
                    pending.push(Pending { item: i, offer, order, rationale: proposal.rationale });
                }
            } else {
                let offer = item.offers[0];
                let q = proposal.quantity.max(offer.moq).min(offer.capacity());
                pending.push(Pending { item: i, offer: 0, order: order_for(&item.sku, offer, q, t, proposal.criticality), rationale: proposal.rationale });
            }
        }

        // Negotiation.
        for p in pending.iter_mut() {
            let item = &items[p.item];
            if !toggles.negotiation || (!in_window && !(config.policy == PolicyKind::Oracle && t >= item.oracle_from)) {
                continue;
            }
            let offer = item.offers[p.offer];
            let stream = RngStream::new(seed, format!("negotiation/{}/{}/{}", item.sku.id, offer.supplier_id, t));
            let outcome = negotiate(offer, p.order.quantity, &scenario.negotiation, &stream);
            p.order.negotiated_unit_price = outcome.unit_price;
            p.order.landed_cost = outcome.unit_price.times(p.order.quantity) + offer.fixed_shipping;
        }

        // Coordination.
        let projected: u64 = items.iter().enumerate().filter(|(_, it)| it.active).map(|(i, _)| ledger.get(i).position()).sum();
        let decisions: Vec<OrderDecision> = pending.iter().map(|p| p.order.clone()).collect();
        let arbitration = arbitrate(decisions, &scenario.constraints, projected);
        let orders_deferred = arbitration.deferred.len();
        for d in &arbitration.deferred {
            if let Some(p) = pending.iter().find(|p| p.order.sku_id == d.sku_id) {
                items[p.item].oracle_dirty = true;
            }
        }

        // Commit funded orders in candidate order.
        let mut per_pair: HashMap<(usize, usize), u32> = HashMap::new();
        let mut cursor = 0;
        let mut orders_placed = 0;
        for order in arbitration.funded {
            while pending[cursor].order != order {
                cursor += 1;
            }
            let p = &pending[cursor];
            cursor += 1;
            let item = &items[p.item];
            let offer = item.offers[p.offer];
            let k = per_pair.entry((p.item, p.offer)).or_insert(0);
            let real = if scenario.has_disruptions() {
                let stream = RngStream::new(seed, format!("disruption/{}/{}/{}/{}", item.sku.id, offer.supplier_id, t, k));
                perturb_order(&order, offer, &scenario.disruptions, &stream)
            } else {
                Realization { arrival_period: order.promised_arrival, delivered: order.quantity }
            };
            *k += 1;
            let purchase = order.negotiated_unit_price.times(real.delivered) + offer.fixed_shipping;
            let order_ref = orders.len();
            ledger.get_mut(p.item).commit_shipment(
                Shipment {
                    arrival_period: real.arrival_period,
                    quantity: real.delivered,
                    unit_cost: order.negotiated_unit_price,
                    promised_quantity: order.quantity,
                    promised_arrival: order.promised_arrival,
                    order_ref,
                },
                purchase,
            );
            let record = OrderRecord {
                order_ref,
                sku_id: order.sku_id.clone(),
                supplier_id: order.supplier_id.clone(),
                placed_at: t,
                quantity: order.quantity,
                list_unit_price: order.list_unit_price,
                negotiated_unit_price: order.negotiated_unit_price,
                landed_cost: order.landed_cost,
                promised_arrival: order.promised_arrival,
                realized_arrival: real.arrival_period,
                delivered: real.delivered,
                purchase_cost: purchase,
                criticality: order.criticality,
                rationale: p.rationale,
            };
            if !record.on_time_in_full() && p.rationale == Rationale::Oracle {
                items[p.item].oracle_dirty = true;
            }
            orders.push(record);
            orders_placed += 1;
        }

        // Cost accrual.
        let mut rec = PeriodRecord { period: t, in_window, orders_placed, orders_deferred, ..Default::default() };
        for (i, item) in items.iter().enumerate() {
            if !item.active {
                continue;
            }
            let led = ledger.get_mut(i);
            let costs = led.accrue_period_costs(&item.sku);
            let mut row = rows[i].take().unwrap_or(SkuPeriod {
                period: t,
                sku: i,
                start_on_hand: led.on_hand(),
                received: 0,
                demand: 0,
                sales: 0,
                stockout_units: 0,
                spoiled: 0,
                end_on_hand: 0,
                end_inventory_value: Money::ZERO,
                cogs: Money::ZERO,
                costs: PeriodCosts::default(),
            });
            row.end_on_hand = led.on_hand();
            row.end_inventory_value = led.inventory_value();
            row.costs = costs;
            rec.active_skus += 1;
            rec.on_hand += row.end_on_hand;
            rec.inventory_value += row.end_inventory_value;
            rec.demand += row.demand;
            rec.sales += row.sales;
            rec.stockout_units += row.stockout_units;
            rec.stockout_skus += usize::from(row.stockout_units > 0);
            rec.spoiled += row.spoiled;
            rec.received += row.received;
            rec.cogs += row.cogs;
            rec.costs += costs;
            sku_periods.push(row);
        }
        periods.push(rec);
    }

    let sku_ids: Vec<String> = items.iter().map(|it| it.sku.id.clone()).collect();
    let sku_summaries = summarize_skus(&items, &sku_periods, warmup);
    let metrics = compute_metrics(&periods, &sku_summaries, &items);
    Ok(RunReport {
        scenario_name: scenario.name.clone(),
        scenario_hash: scenario.hash(),
        policy: config.policy,
        seed,
        toggles,
        horizon,
        warmup,
        sku_ids,
        metrics,
        periods,
        sku_periods,
        sku_summaries,
        orders,
        adoptions,
    })
}

fn order_for(sku: &Sku, offer: &SupplierOffer, quantity: u64, period: u32, criticality: f64) -> OrderDecision {
    OrderDecision {
        sku_id: sku.id.clone(),
        supplier_id: offer.supplier_id.clone(),
        quantity,
        list_unit_price: offer.unit_cost,
        negotiated_unit_price: offer.unit_cost,
        landed_cost: offer.unit_cost.times(quantity) + offer.fixed_shipping,
        placed_at: period,
        promised_arrival: period + offer.lead_time,
        criticality,
    }
}

fn summarize_skus(items: &[Item<'_>], rows: &[SkuPeriod], warmup: u32) -> Vec<SkuSummary> {
    let mut out: Vec<SkuSummary> = items
        .iter()
        .map(|it| SkuSummary {
            sku_id: it.sku.id.clone(),
            adopted_at: it.adopted_at,
            demand: 0,
            sales: 0,
            stockout_units: 0,
            costs: PeriodCosts::default(),
        })
        .collect();
    for r in rows.iter().filter(|r| r.period >= warmup) {
        let s = &mut out[r.sku];
        s.demand += r.demand;
        s.sales += r.sales;
        s.stockout_units += r.stockout_units;
        s.costs += r.costs;
    }
    out
}

/// Headline metrics over the periods at or after warm-up.
pub fn compute_metrics_from(periods: &[PeriodRecord]) -> Metrics {
    let window: Vec<&PeriodRecord> = periods.iter().filter(|p| p.in_window).collect();
    let mut m = Metrics::default();
    let mut costs = PeriodCosts::default();
    let mut value_sum = 0i64;
    let mut cogs = Money::ZERO;
    for p in &window {
        costs += p.costs;
        m.demand_units += p.demand;
        m.sales_units += p.sales;
        m.stockout_units += p.stockout_units;
        m.spoiled_units += p.spoiled;
        m.sku_periods += p.active_skus as u64;
        m.stockout_sku_periods += p.stockout_skus as u64;
        m.orders_placed += p.orders_placed as u64;
        m.orders_deferred += p.orders_deferred as u64;
        value_sum += p.inventory_value.0;
        cogs += p.cogs;
    }
    m.purchase_cost = costs.purchase;
    m.holding_cost = costs.holding;
    m.stockout_cost = costs.stockout;
    m.spoilage_cost = costs.spoilage;
    m.total_cost = costs.total();
    m.stockout_rate = if m.sku_periods == 0 { 0.0 } else { m.stockout_sku_periods as f64 / m.sku_periods as f64 };
    m.fill_rate = if m.demand_units == 0 { 1.0 } else { m.sales_units as f64 / m.demand_units as f64 };
    let avg_value_cents = if window.is_empty() { 0.0 } else { value_sum as f64 / window.len() as f64 };
    m.avg_inventory_value = avg_value_cents / 100.0;
    m.inventory_turnover = if avg_value_cents > 0.0 { cogs.0 as f64 / avg_value_cents } else { 0.0 };
    m
}

fn compute_metrics(periods: &[PeriodRecord], summaries: &[SkuSummary], items: &[Item<'_>]) -> Metrics {
    let mut m = compute_metrics_from(periods);
    let outcomes: Vec<SkuOutcome> = summaries
        .iter()
        .zip(items)
        .filter(|(s, it)| it.candidate.is_none() || s.adopted_at.is_some())
        .map(|(s, it)| SkuOutcome { sku_id: s.sku_id.clone(), sales: s.sales, unit_margin: it.sku.unit_margin, total_cost: s.costs.total() })
        .collect();
    let adopted: Vec<String> = summaries.iter().filter(|s| s.adopted_at.is_some()).map(|s| s.sku_id.clone()).collect();
    m.adopted = adopted.len() as u64;
    m.trend = trend_roi(&outcomes, &adopted);
    m
}
