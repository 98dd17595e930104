//! Run summary as JSON, plus a plain-text table for eyeballing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::layout::Mapping;
use crate::router::RoutedCircuit;

/// Gate counts are for the CNOT-decomposed form, so `g_add = 3 * swaps`
/// and `g_tot = g_ori + g_add`. Depths count a SWAP as three steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub n: usize,
    #[serde(rename = "N")]
    pub num_physical: usize,
    pub g_ori: usize,
    pub swaps: usize,
    pub g_add: usize,
    pub g_tot: usize,
    pub d_ori: usize,
    pub d_out: usize,
    pub search_steps: usize,
    pub restarts_used: usize,
    pub seed: u64,
    pub initial_mapping: BTreeMap<usize, usize>,
    pub final_mapping: BTreeMap<usize, usize>,
    pub runtime_ms: f64,
}

fn mapping_json(mapping: &Mapping) -> BTreeMap<usize, usize> {
    mapping
        .forward()
        .iter()
        .enumerate()
        .map(|(l, p)| (l, p.index()))
        .collect()
}

impl Stats {
    /// `seed` is the seed that reproduces `routed` (the winning restart's).
    pub fn new(
        original: &Circuit,
        routed: &RoutedCircuit,
        seed: u64,
        restarts_used: usize,
        runtime: Duration,
    ) -> Self {
        let g_ori = original.gate_counts().decomposed_total();
        let g_add = routed.stats.added_gates;
        Stats {
            n: original.num_qubits(),
            num_physical: routed.initial_mapping.num_physical(),
            g_ori,
            swaps: routed.stats.swaps_inserted,
            g_add,
            g_tot: g_ori + g_add,
            d_ori: original.depth(),
            d_out: routed.stats.depth,
            search_steps: routed.stats.search_steps,
            restarts_used,
            seed,
            initial_mapping: mapping_json(&routed.initial_mapping),
            final_mapping: mapping_json(&routed.final_mapping),
            runtime_ms: runtime.as_secs_f64() * 1e3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialise")
    }
}

/// One row per named run, columns as in the usual mapping-results table.
pub fn render_table(rows: &[(&str, &Stats)]) -> String {
    let width = rows.iter().map(|(name, _)| name.len()).max().unwrap_or(0).max(9);
    let mut out = String::new();
    writeln!(
        out,
        "{:<width$} {:>3} {:>7} {:>7} {:>7} {:>7} {:>7} {:>10}",
        "benchmark", "n", "g_ori", "g_add", "g_tot", "d_ori", "d_out", "time(s)"
    )
    .unwrap();
    for (name, s) in rows {
        writeln!(
            out,
            "{:<width$} {:>3} {:>7} {:>7} {:>7} {:>7} {:>7} {:>10.4}",
            name,
            s.n,
            s.g_ori,
            s.g_add,
            s.g_tot,
            s.d_ori,
            s.d_out,
            s.runtime_ms / 1e3
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::device::Device;
    use crate::router::{route, RouterParams};

    fn worked_example() -> (Circuit, RoutedCircuit) {
        let c = Circuit::new(
            4,
            vec![
                Gate::cx(0, 1),
                Gate::cx(2, 3),
                Gate::cx(0, 2),
                Gate::cx(0, 3),
                Gate::cx(2, 3),
                Gate::cx(1, 2),
            ],
        )
        .unwrap();
        let dev = Device::builtin("ring4").unwrap();
        let id = Mapping::identity(4, 4).unwrap();
        let r = route(&c, &dev, &id, &RouterParams::default(), 0).unwrap();
        (c, r)
    }

    #[test]
    fn arithmetic_and_keys() {
        let (c, r) = worked_example();
        let s = Stats::new(&c, &r, 0, 1, Duration::from_millis(3));
        assert_eq!((s.g_ori, s.swaps, s.g_add, s.g_tot), (6, 1, 3, 9));
        assert_eq!((s.d_ori, s.d_out), (5, 8));
        let json: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(json["N"], 4);
        assert_eq!(json["initial_mapping"]["3"], 3);
        assert_eq!(serde_json::from_str::<Stats>(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn table_has_one_line_per_row() {
        let (c, r) = worked_example();
        let s = Stats::new(&c, &r, 0, 1, Duration::ZERO);
        let t = render_table(&[("six_cnot", &s), ("again", &s)]);
        assert_eq!(t.lines().count(), 3);
        assert!(t.lines().nth(1).unwrap().contains("      3       9"));
    }
}
