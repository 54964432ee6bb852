//! Rows of the bid-range figure: for each low value, the Nash range, the
//! empirical winner-bid and loser-bid sets and the bid cap.

use std::io::Write;

use anyhow::{bail, Result};
use epa_core::empirical::allowed_bids;
use epa_core::{ValuationProfile, Variant};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Marker {
    NashRange,
    WbEmpirical,
    LbEmpirical,
    Pbar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FigureRow {
    pub v_low: u32,
    pub bid: u32,
    pub marker: Marker,
}

/// Rows for every even `v_low` in `(2, v_high)` with the symmetric cap
/// `c_low + c_high`. Empty when no such `v_low` exists.
pub fn figure_rows(v_high: u32) -> Result<Vec<FigureRow>> {
    if !v_high.is_multiple_of(2) {
        bail!("v_high = {v_high} is not even");
    }
    let mut rows = Vec::new();
    for v_low in (4..v_high).step_by(2) {
        let prof = ValuationProfile::with_symmetric_cap(v_low, v_high)?;
        let mut push = |bid: usize, marker| {
            rows.push(FigureRow {
                v_low,
                bid: bid as u32,
                marker,
            })
        };
        for b in prof.nash_range() {
            push(b, Marker::NashRange);
        }
        for b in allowed_bids(&prof, Variant::WinnerBid).allowed {
            push(b, Marker::WbEmpirical);
        }
        for b in allowed_bids(&prof, Variant::LoserBid).allowed {
            push(b, Marker::LbEmpirical);
        }
        push(prof.p_bar() as usize, Marker::Pbar);
    }
    Ok(rows)
}

/// Writes `rows` as CSV with header `v_low,bid,marker`.
pub fn write_csv<W: Write>(rows: &[FigureRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(["v_low", "bid", "marker"])?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
