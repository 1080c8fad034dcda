//! CSV writers for grid data. Every table starts with a header row and
//! floats use Rust's shortest round-trip formatting.

use std::io::{self, Write};

use crate::ratios::MarginRow;
use crate::solver::SolutionGrid;

/// Columns `t,x`.
pub fn write_solution_csv<W: Write>(mut out: W, sol: &SolutionGrid) -> io::Result<()> {
    writeln!(out, "t,x")?;
    for (t, x) in sol.nodes.iter().zip(&sol.values) {
        writeln!(out, "{t},{x}")?;
    }
    Ok(())
}

/// Columns `m,t,s,M`.
pub fn write_kernel_grid_csv<W: Write>(mut out: W, m: u32, grid: &[(f64, f64, f64)], header: bool) -> io::Result<()> {
    if header {
        writeln!(out, "m,t,s,M")?;
    }
    for (t, s, v) in grid {
        writeln!(out, "{m},{t},{s},{v}")?;
    }
    Ok(())
}

/// Columns `m,s,t,l10,l11`; `l10` is empty where it is undefined (`t = 1`).
pub fn write_margin_csv<W: Write>(mut out: W, m: u32, rows: &[MarginRow], header: bool) -> io::Result<()> {
    if header {
        writeln!(out, "m,s,t,l10,l11")?;
    }
    for r in rows {
        match r.l10 {
            Some(v) => writeln!(out, "{m},{},{},{v},{}", r.s, r.t, r.l11)?,
            None => writeln!(out, "{m},{},{},,{}", r.s, r.t, r.l11)?,
        }
    }
    Ok(())
}
