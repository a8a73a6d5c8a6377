//! End-to-end checks of the period pipeline on small scenarios.

use replenish_core::engine::{run, run_episode, RunConfig, RunReport};
use replenish_core::{Money, PolicyKind, Scenario};

const MICRO: &str = r#"
schema_version = 1
name = "three_periods"
horizon = 3
warmup = 0

[policy]
z = 1.645
order_fixed_cost = 1000

[[skus]]
id = "A"
category = "other"
holding_cost = 10
stockout_penalty = 400
initial_stock = 10

[skus.demand]
kind = "stationary"
base_mean = 5.0

[[offers]]
supplier_id = "S"
sku_id = "A"
unit_cost = 100
lead_time = 1
reliability = 1.0
fixed_shipping = 200
"#;

fn micro() -> Scenario {
    Scenario::from_toml_str(MICRO).unwrap()
}

#[test]
fn three_period_hand_trace() {
    // ROP = 5 * 1 = 5, EOQ = round(sqrt(2 * 1000 * 5 / 10)) = 32, order-up-to 37.
    // t0: 10 - 5 = 5 on hand, position 5 is not below 5, holding 50.
    // t1: 5 - 5 = 0, order 37 arriving t2 for 37 * 100 + 200 = 3900, holding 0.
    // t2: receive 37, sell 5, 32 on hand, holding 320.
    let r = run_episode(&micro(), PolicyKind::StaticRop, 1).unwrap();
    let rows: Vec<_> = r
        .periods
        .iter()
        .map(|p| (p.demand, p.sales, p.received, p.on_hand, p.costs.purchase.0, p.costs.holding.0, p.costs.stockout.0))
        .collect();
    assert_eq!(rows, [(5, 5, 0, 5, 0, 50, 0), (5, 5, 0, 0, 3900, 0, 0), (5, 5, 37, 32, 0, 320, 0)]);
    assert_eq!(r.orders.len(), 1);
    assert_eq!((r.orders[0].placed_at, r.orders[0].quantity, r.orders[0].realized_arrival), (1, 37, 2));
    let m = &r.metrics;
    assert_eq!(m.total_cost, Money(4270));
    assert_eq!(m.stockout_rate, 0.0);
    assert_eq!(m.fill_rate, 1.0);
    // Mean end value (500 + 0 + 3200) / 3 cents; COGS 1500 cents.
    assert!((m.avg_inventory_value - 37.0 / 3.0).abs() < 1e-12);
    assert!((m.inventory_turnover - 1500.0 / (3700.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn zero_demand_only_carries_initial_stock() {
    let text = MICRO.replace("base_mean = 5.0", "base_mean = 0.0");
    let sc = Scenario::from_toml_str(&text).unwrap();
    for policy in PolicyKind::ALL {
        let m = run_episode(&sc, policy, 3).unwrap().metrics;
        assert_eq!((m.sales_units, m.stockout_units, m.purchase_cost, m.stockout_cost), (0, 0, Money::ZERO, Money::ZERO), "{policy}");
        assert_eq!(m.holding_cost, Money(3 * 10 * 10), "{policy}");
    }
}

fn check_accounting(r: &RunReport) {
    for s in &r.sku_periods {
        assert_eq!(s.start_on_hand + s.received, s.sales + s.spoiled + s.end_on_hand, "conservation {s:?}");
        assert_eq!(s.demand, s.sales + s.stockout_units);
    }
    for p in &r.periods {
        let c = p.costs;
        assert_eq!(c.purchase + c.holding + c.stockout + c.spoilage, c.total());
    }
    let m = &r.metrics;
    assert_eq!(m.purchase_cost + m.holding_cost + m.stockout_cost + m.spoilage_cost, m.total_cost);
    assert!((0.0..=1.0).contains(&m.fill_rate));
    assert!(m.inventory_turnover >= 0.0);
}

#[test]
fn accounting_holds_on_every_bundled_scenario() {
    for name in ["B0", "B1", "B2"] {
        let sc = Scenario::bundled(name).unwrap();
        for policy in PolicyKind::ALL {
            check_accounting(&run_episode(&sc, policy, 5).unwrap());
        }
    }
}

#[test]
fn same_seed_same_report() {
    let sc = Scenario::bundled("B2").unwrap();
    let a = serde_json::to_string(&run_episode(&sc, PolicyKind::Agentic, 9).unwrap()).unwrap();
    let b = serde_json::to_string(&run_episode(&sc, PolicyKind::Agentic, 9).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn demand_is_common_across_policies() {
    let sc = Scenario::bundled("B1").unwrap();
    let demand = |p| -> Vec<u64> { run_episode(&sc, p, 4).unwrap().sku_periods.iter().map(|s| s.demand).collect() };
    let reference = demand(PolicyKind::StaticRop);
    for policy in PolicyKind::ALL {
        assert_eq!(demand(policy), reference, "{policy}");
    }
}

#[test]
fn metrics_recompute_from_window_rows() {
    let sc = Scenario::bundled("B1").unwrap();
    let r = run_episode(&sc, PolicyKind::Newsvendor, 2).unwrap();
    let window: Vec<_> = r.periods.iter().filter(|p| p.period >= r.warmup).collect();
    assert!(r.periods.iter().all(|p| p.in_window == (p.period >= r.warmup)));
    let total: Money = window.iter().map(|p| p.costs.total()).sum();
    assert_eq!(total, r.metrics.total_cost);
    let demand: u64 = window.iter().map(|p| p.demand).sum();
    let sales: u64 = window.iter().map(|p| p.sales).sum();
    assert_eq!(r.metrics.fill_rate, sales as f64 / demand as f64);
    let short: usize = window.iter().map(|p| p.stockout_skus).sum();
    let active: usize = window.iter().map(|p| p.active_skus).sum();
    assert_eq!(r.metrics.stockout_rate, short as f64 / active as f64);
}

#[test]
fn invalid_scenario_fails_before_running() {
    let mut sc = micro();
    sc.horizon = 0;
    assert!(run(&sc, &RunConfig::new(PolicyKind::Agentic, 1)).is_err());
}

#[test]
fn oracle_covers_every_period_without_disruptions() {
    let mut sc = Scenario::bundled("B1").unwrap();
    sc.disruptions = Default::default();
    sc.constraints = Default::default();
    let r = run_episode(&sc, PolicyKind::Oracle, 1).unwrap();
    assert_eq!(r.metrics.stockout_units, 0);
}
