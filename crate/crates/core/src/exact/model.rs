use std::fmt::Write;

use crate::domain::Instance;

/// Writes the bin formulation as plain text.
///
/// ```text
/// HD2D w=<w> H=<H> heights=<H_0>,...,<H_{r-1}>
/// pack <k> height=<H_k> groups=<B_k> items=<ids>
/// rect <id> <width> <height>
/// row <i>: sum loads <= <w>
/// ```
///
/// Each `pack` line assigns its items to `B_k` groups (the sub-bins of that
/// height), defining loads `L^k_q`. Row `i` constrains the sum over `k` of
/// `L^k_{i / H_k}`.
pub fn export_bin_model(instance: &Instance) -> String {
    let periods = instance.periods();
    let heights = periods.heights();
    let mut out = String::new();
    let joined: Vec<String> = heights.iter().map(|h| h.to_string()).collect();
    writeln!(
        out,
        "HD2D w={} H={} heights={}",
        periods.width(),
        periods.bin_height(),
        joined.join(",")
    )
    .unwrap();
    let mut jobs = instance.jobs().to_vec();
    jobs.sort_by_key(|j| j.id);
    for (k, h) in heights.iter().enumerate() {
        let ids: Vec<String> = jobs
            .iter()
            .filter(|j| j.period == k)
            .map(|j| j.id.to_string())
            .collect();
        writeln!(
            out,
            "pack {k} height={h} groups={} items={}",
            periods.cumulative(k),
            ids.join(",")
        )
        .unwrap();
    }
    for job in &jobs {
        writeln!(out, "rect {} {} {}", job.id, job.c, heights[job.period]).unwrap();
    }
    for i in 0..periods.bin_height() {
        writeln!(out, "row {i}: sum loads <= {}", periods.width()).unwrap();
    }
    out
}
