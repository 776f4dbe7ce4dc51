use std::io::Write;

use super::ConvergenceReport;
use crate::error::Result;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// One row per replica and checkpoint.
pub fn write_checkpoint_csv<W: Write>(report: &ConvergenceReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["replica", "n", "S_over_n", "kappa_n", "checkpoint_index"])?;
    for (r, (vals, kappa)) in report.s_over_n.iter().zip(&report.kappa).enumerate() {
        for (j, n) in report.checkpoints.iter().enumerate() {
            out.write_record([
                r.to_string(),
                n.to_string(),
                format!("{:e}", vals[j]),
                kappa[j].to_string(),
                j.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One row per checkpoint with the across-replica quantiles.
pub fn write_aggregate_csv<W: Write>(report: &ConvergenceReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "checkpoint_index",
        "n",
        "q50",
        "q90",
        "q99",
        "tailsup_q50",
        "tailsup_q90",
        "tailsup_q99",
    ])?;
    for (j, n) in report.checkpoints.iter().enumerate() {
        let (m, t) = (report.marginal[j], report.tail_sup[j]);
        out.write_record([
            j.to_string(),
            n.to_string(),
            format!("{:e}", m.q50),
            format!("{:e}", m.q90),
            format!("{:e}", m.q99),
            format!("{:e}", t.q50),
            format!("{:e}", t.q90),
            format!("{:e}", t.q99),
        ])?;
    }
    out.flush()?;
    Ok(())
}
