//! CSV and summary writers. Column sets are frozen per scenario schema version.
//!
//! | file | rows |
//! |------|------|
//! | `metrics.csv` | `metric,value`, one row per headline metric |
//! | `timeseries.csv` | one row per period, all active SKUs aggregated |
//! | `sku_timeseries.csv` | one row per SKU-period |
//! | `orders.csv` | one row per committed order |
//! | `summary.txt` | `key=value` lines: scenario, hash, policy, seed, toggles, metrics |
//! | `comparison.csv` | `label,policy,metric,mean,std,n` |
//! | `comparison_runs.csv` | `label,seed,<metrics...>` |
//! | `paired_deltas.csv` | `label,seed,<metric deltas...>` against the first arm |
//! | `sensitivity.csv` | one row per grid cell |

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::engine::{ComparisonReport, Metrics, RunReport, SensitivityReport};
use crate::scenario::SCHEMA_VERSION;

fn csv_writer(path: &Path) -> io::Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(io::Error::other)
}

fn finish(mut w: csv::Writer<fs::File>) -> io::Result<()> {
    w.flush()
}

fn row<W: Write>(w: &mut csv::Writer<W>, fields: &[String]) -> io::Result<()> {
    w.write_record(fields).map_err(io::Error::other)
}

fn flag(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

/// Writes `metrics.csv`, `timeseries.csv`, `sku_timeseries.csv`, `orders.csv` and `summary.txt`.
pub fn write_run(report: &RunReport, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;

    let mut w = csv_writer(&dir.join("metrics.csv"))?;
    row(&mut w, &["metric".into(), "value".into()])?;
    for (name, value) in report.metrics.named() {
        row(&mut w, &[name.into(), value.to_string()])?;
    }
    finish(w)?;

    let mut w = csv_writer(&dir.join("timeseries.csv"))?;
    let header = [
        "period", "in_window", "active_skus", "on_hand", "inventory_value", "demand", "sales", "stockout_units",
        "stockout_skus", "spoiled", "received", "cogs", "orders_placed", "orders_deferred", "purchase_cost",
        "holding_cost", "stockout_cost", "spoilage_cost", "total_cost",
    ];
    row(&mut w, &header.map(String::from))?;
    for p in &report.periods {
        row(
            &mut w,
            &[
                p.period.to_string(),
                u8::from(p.in_window).to_string(),
                p.active_skus.to_string(),
                p.on_hand.to_string(),
                p.inventory_value.to_string(),
                p.demand.to_string(),
                p.sales.to_string(),
                p.stockout_units.to_string(),
                p.stockout_skus.to_string(),
                p.spoiled.to_string(),
                p.received.to_string(),
                p.cogs.to_string(),
                p.orders_placed.to_string(),
                p.orders_deferred.to_string(),
                p.costs.purchase.to_string(),
                p.costs.holding.to_string(),
                p.costs.stockout.to_string(),
                p.costs.spoilage.to_string(),
                p.costs.total().to_string(),
            ],
        )?;
    }
    finish(w)?;

    let mut w = csv_writer(&dir.join("sku_timeseries.csv"))?;
    let header = [
        "period", "sku_id", "start_on_hand", "received", "demand", "sales", "stockout_units", "spoiled", "end_on_hand",
        "inventory_value", "cogs", "purchase_cost", "holding_cost", "stockout_cost", "spoilage_cost",
    ];
    row(&mut w, &header.map(String::from))?;
    for s in &report.sku_periods {
        row(
            &mut w,
            &[
                s.period.to_string(),
                report.sku_ids[s.sku].clone(),
                s.start_on_hand.to_string(),
                s.received.to_string(),
                s.demand.to_string(),
                s.sales.to_string(),
                s.stockout_units.to_string(),
                s.spoiled.to_string(),
                s.end_on_hand.to_string(),
                s.end_inventory_value.to_string(),
                s.cogs.to_string(),
                s.costs.purchase.to_string(),
                s.costs.holding.to_string(),
                s.costs.stockout.to_string(),
                s.costs.spoilage.to_string(),
            ],
        )?;
    }
    finish(w)?;

    let mut w = csv_writer(&dir.join("orders.csv"))?;
    let header = [
        "order_ref", "sku_id", "supplier_id", "placed_at", "quantity", "list_unit_price", "negotiated_unit_price",
        "landed_cost", "promised_arrival", "realized_arrival", "delivered", "purchase_cost", "criticality", "rationale",
    ];
    row(&mut w, &header.map(String::from))?;
    for o in &report.orders {
        row(
            &mut w,
            &[
                o.order_ref.to_string(),
                o.sku_id.clone(),
                o.supplier_id.clone(),
                o.placed_at.to_string(),
                o.quantity.to_string(),
                o.list_unit_price.to_string(),
                o.negotiated_unit_price.to_string(),
                o.landed_cost.to_string(),
                o.promised_arrival.to_string(),
                o.realized_arrival.to_string(),
                o.delivered.to_string(),
                o.purchase_cost.to_string(),
                o.criticality.to_string(),
                format!("{:?}", o.rationale),
            ],
        )?;
    }
    finish(w)?;

    fs::write(dir.join("summary.txt"), summary_text(report))
}

pub fn summary_text(report: &RunReport) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        s.push_str(k);
        s.push('=');
        s.push_str(&v);
        s.push('\n');
    };
    kv("schema_version", SCHEMA_VERSION.to_string());
    kv("scenario", report.scenario_name.clone());
    kv("scenario_hash", report.scenario_hash.clone());
    kv("policy", report.policy.name().to_string());
    kv("seed", report.seed.to_string());
    kv("negotiation", flag(report.toggles.negotiation).into());
    kv("supplier_selection", flag(report.toggles.supplier_selection).into());
    kv("trend", flag(report.toggles.trend).into());
    kv("horizon", report.horizon.to_string());
    kv("warmup", report.warmup.to_string());
    for (name, value) in report.metrics.named() {
        kv(name, value.to_string());
    }
    kv("demand_units", report.metrics.demand_units.to_string());
    kv("sales_units", report.metrics.sales_units.to_string());
    kv("stockout_units", report.metrics.stockout_units.to_string());
    kv("spoiled_units", report.metrics.spoiled_units.to_string());
    kv("orders_placed", report.metrics.orders_placed.to_string());
    kv("orders_deferred", report.metrics.orders_deferred.to_string());
    s
}

fn metric_header(lead: &[&str]) -> Vec<String> {
    lead.iter().map(|s| s.to_string()).chain(Metrics::default().named().into_iter().map(|(n, _)| n.to_string())).collect()
}

/// Writes `comparison.csv`, `comparison_runs.csv` and `paired_deltas.csv`.
pub fn write_comparison(report: &ComparisonReport, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;

    let mut w = csv_writer(&dir.join("comparison.csv"))?;
    row(&mut w, &["label", "policy", "metric", "mean", "std", "n"].map(String::from))?;
    for arm in &report.arms {
        for stat in &arm.stats {
            row(
                &mut w,
                &[
                    arm.arm.label.clone(),
                    arm.arm.policy.name().into(),
                    stat.metric.clone(),
                    stat.mean.to_string(),
                    stat.std.to_string(),
                    arm.runs.len().to_string(),
                ],
            )?;
        }
    }
    finish(w)?;

    let mut w = csv_writer(&dir.join("comparison_runs.csv"))?;
    row(&mut w, &metric_header(&["label", "seed"]))?;
    for arm in &report.arms {
        for (seed, m) in report.seeds.iter().zip(&arm.runs) {
            let mut fields = vec![arm.arm.label.clone(), seed.to_string()];
            fields.extend(m.named().into_iter().map(|(_, v)| v.to_string()));
            row(&mut w, &fields)?;
        }
    }
    finish(w)?;

    let mut w = csv_writer(&dir.join("paired_deltas.csv"))?;
    row(&mut w, &metric_header(&["label", "seed"]))?;
    for arm in report.arms.iter().skip(1) {
        for (seed, d) in report.seeds.iter().zip(&arm.paired_deltas) {
            let mut fields = vec![arm.arm.label.clone(), seed.to_string()];
            fields.extend(d.iter().map(|v| v.to_string()));
            row(&mut w, &fields)?;
        }
    }
    finish(w)
}

/// Writes `sensitivity.csv`.
pub fn write_sensitivity(report: &SensitivityReport, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv_writer(&dir.join("sensitivity.csv"))?;
    row(
        &mut w,
        &[
            "demand_factor",
            "lead_factor",
            "mean_total_cost",
            "mean_cost_per_unit_demand",
            "rel_total_cost",
            "rel_cost_per_unit_demand",
            "n",
        ]
        .map(String::from),
    )?;
    for c in &report.cells {
        row(
            &mut w,
            &[
                c.demand_factor.to_string(),
                c.lead_factor.to_string(),
                c.mean_total_cost.to_string(),
                c.mean_cost_per_unit_demand.to_string(),
                c.rel_total_cost.to_string(),
                c.rel_cost_per_unit_demand.to_string(),
                c.runs.len().to_string(),
            ],
        )?;
    }
    finish(w)
}
