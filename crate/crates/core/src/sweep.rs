//! Route the same circuit under several decay increments to expose the
//! gate-count versus depth trade-off.

use serde::Serialize;

use crate::circuit::Circuit;
use crate::device::Device;
use crate::router::{RouteError, RouterParams};
use crate::traversal::best_of_restarts;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub delta: f64,
    pub g_ori: usize,
    pub g_tot: usize,
    pub g_add: usize,
    pub depth: usize,
    pub d_ori: usize,
    pub g_tot_norm: f64,
    pub depth_norm: f64,
}

pub fn sweep(
    circuit: &Circuit,
    device: &Device,
    params: &RouterParams,
    deltas: &[f64],
    seed: u64,
) -> Result<Vec<SweepRow>, RouteError> {
    let g_ori = circuit.gate_counts().decomposed_total();
    let d_ori = circuit.depth();
    deltas
        .iter()
        .map(|&delta| {
            let params = RouterParams { decay_delta: delta, ..*params };
            let best = best_of_restarts(circuit, device, &params, seed)?.best;
            let g_tot = g_ori + best.stats.added_gates;
            Ok(SweepRow {
                delta,
                g_ori,
                g_tot,
                g_add: best.stats.added_gates,
                depth: best.stats.depth,
                d_ori,
                g_tot_norm: g_tot as f64 / g_ori.max(1) as f64,
                depth_norm: best.stats.depth as f64 / d_ori.max(1) as f64,
            })
        })
        .collect()
}

pub fn write_csv(rows: &[SweepRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("flush to Vec")).expect("csv is utf-8")
}

/// Distinct `(g_tot, depth)` points not dominated by any other row, sorted
/// by gate count.
pub fn pareto_points(rows: &[SweepRow]) -> Vec<(usize, usize)> {
    let mut points: Vec<(usize, usize)> = rows.iter().map(|r| (r.g_tot, r.depth)).collect();
    points.sort_unstable();
    points.dedup();
    points
        .iter()
        .copied()
        .filter(|&(g, d)| {
            !points
                .iter()
                .any(|&(g2, d2)| g2 <= g && d2 <= d && (g2, d2) != (g, d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_circuit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row(g_tot: usize, depth: usize) -> SweepRow {
        SweepRow {
            delta: 0.0,
            g_ori: 1,
            g_tot,
            g_add: 0,
            depth,
            d_ori: 1,
            g_tot_norm: 0.0,
            depth_norm: 0.0,
        }
    }

    #[test]
    fn pareto_filter() {
        let rows = [row(10, 5), row(12, 4), row(11, 6), row(10, 5), row(9, 9)];
        assert_eq!(pareto_points(&rows), vec![(9, 9), (10, 5), (12, 4)]);
    }

    #[test]
    fn one_row_per_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_circuit(8, 120, 0.6, &mut rng);
        let dev = Device::builtin("grid3x3").unwrap();
        let params = RouterParams { restarts: 2, ..RouterParams::default() };
        let deltas = [0.0, 0.001, 0.01];
        let rows = sweep(&c, &dev, &params, &deltas, 0).unwrap();
        assert_eq!(rows.len(), 3);
        for (r, d) in rows.iter().zip(deltas) {
            assert_eq!(r.delta, d);
            assert_eq!(r.g_tot, r.g_ori + r.g_add);
            assert!((r.depth_norm - r.depth as f64 / r.d_ori as f64).abs() < 1e-12);
        }
        let csv = write_csv(&rows);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("delta,g_ori,g_tot,g_add,depth,d_ori,g_tot_norm,depth_norm\n"));
    }
}
