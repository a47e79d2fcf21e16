//! Reference tables for the sphere's isotropy algebra and their check against
//! the computed values.

use serde::Serialize;

use crate::chain_locus::{prolonged_table, symbolic_pivot, PIVOT_NAMES};
use crate::error::Result;
use crate::lie_jets::{Poly, NVARS, VAR_NAMES};
use crate::sphere_isotropy::{
    intrinsic_pushforward, standard_fields, verify_commutator_table, CommutatorReport, FIELD_NAMES,
};

/// `(∂_u, ∂_x, ∂_y)` coefficients of the intrinsic real parts.
const PUSHFORWARDS: [[&str; 3]; 5] = [
    ["2*u", "x", "y"],
    ["0", "-y", "x"],
    ["-2*x^3 - 2*x*y^2 - 2*y*u", "u - 4*x*y", "3*x^2 - y^2"],
    ["2*x*u - 2*y*x^2 - 2*y^3", "x^2 - 3*y^2", "u + 4*x*y"],
    ["u^2 - x^4 - 2*x^2*y^2 - y^4", "x*u - x^2*y - y^3", "x^3 + x*y^2 + y*u"],
];

/// Fiber coefficients over the origin: `∂_{x₁}, ∂_{y₁}, ∂_{x₂}, ∂_{y₂}`.
const PROLONGED: [[&str; 4]; 5] = [
    ["-x1", "-y1", "-3*x2", "-3*y2"],
    ["-y1", "x1", "-y2", "x2"],
    ["1", "0", "-4*x1*y1", "6*x1^2 + 2*y1^2"],
    ["0", "1", "-2*x1^2 - 6*y1^2", "4*x1*y1"],
    ["0", "0", "0", "0"],
];

/// The pivoted `D, R, I1, I2` block with `x₂ = a₂ − 2x₁²y₁ − 2y₁³`,
/// `y₂ = b₂ + 2x₁y₁² + 2x₁³`.
const PIVOTED: [[&str; 4]; 4] = [
    ["0", "0", "-3*a2", "-3*b2"],
    ["0", "0", "-b2", "a2"],
    ["1", "0", "-4*x1*y1", "6*x1^2 + 2*y1^2"],
    ["0", "1", "-2*x1^2 - 6*y1^2", "4*x1*y1"],
];

const AXES: [&str; 3] = ["d/du", "d/dx", "d/dy"];
const JET_AXES: [&str; 4] = ["d/dx1", "d/dy1", "d/dx2", "d/dy2"];

#[derive(Clone, Debug, Serialize)]
pub struct TableEntry {
    pub row: String,
    pub column: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TablesReport {
    pub commutators: CommutatorReport,
    pub pushforwards: Vec<TableEntry>,
    pub first_order: Vec<TableEntry>,
    pub second_order: Vec<TableEntry>,
    pub pivot: Vec<TableEntry>,
    pub pass: bool,
}

fn entry(row: &str, column: &str, expected: &str, computed: &Poly, names: &[&str; NVARS]) -> Result<TableEntry> {
    let want = Poly::parse_with(expected, names)?;
    Ok(TableEntry {
        row: row.into(),
        column: column.into(),
        expected: want.display_with(names),
        computed: computed.display_with(names),
        pass: &want == computed,
    })
}

/// Intrinsic pushforwards of `D, R, I1, I2, J`.
pub fn check_pushforwards() -> Result<Vec<TableEntry>> {
    let mut out = Vec::new();
    for (i, f) in standard_fields().iter().enumerate() {
        let v = intrinsic_pushforward(f)?;
        for (c, p) in [&v.xi, &v.phi, &v.psi].into_iter().enumerate() {
            out.push(entry(FIELD_NAMES[i], AXES[c], PUSHFORWARDS[i][c], p, &VAR_NAMES)?);
        }
    }
    Ok(out)
}

/// First-order (10 entries) and second-order (20 entries) prolongation tables.
pub fn check_prolongations() -> Result<(Vec<TableEntry>, Vec<TableEntry>)> {
    let t = prolonged_table()?;
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (i, row) in t.rows.iter().enumerate() {
        for c in 0..2 {
            first.push(entry(&t.row_names[i], JET_AXES[c], PROLONGED[i][c], &row[c], &VAR_NAMES)?);
        }
        for c in 0..4 {
            second.push(entry(&t.row_names[i], JET_AXES[c], PROLONGED[i][c], &row[c], &VAR_NAMES)?);
        }
    }
    Ok((first, second))
}

/// The constant-pivot reduction of the `D, R, I1, I2` block.
pub fn check_pivot() -> Result<Vec<TableEntry>> {
    let m = symbolic_pivot()?;
    let mut out = Vec::new();
    for (i, row) in m.rows.iter().enumerate() {
        for c in 0..4 {
            out.push(entry(&format!("row {}", i + 1), JET_AXES[c], PIVOTED[i][c], &row[c], &PIVOT_NAMES)?);
        }
    }
    Ok(out)
}

pub fn verify_tables() -> Result<TablesReport> {
    let commutators = verify_commutator_table();
    let pushforwards = check_pushforwards()?;
    let (first_order, second_order) = check_prolongations()?;
    let pivot = check_pivot()?;
    let pass = commutators.pass
        && [&pushforwards, &first_order, &second_order, &pivot].iter().all(|t| t.iter().all(|e| e.pass));
    Ok(TablesReport { commutators, pushforwards, first_order, second_order, pivot, pass })
}

fn grid(title: &str, entries: &[TableEntry], columns: &[&str]) -> String {
    let mut rows: Vec<(String, Vec<String>)> = Vec::new();
    for e in entries {
        match rows.last_mut() {
            Some((name, cells)) if *name == e.row && cells.len() < columns.len() => {
                cells.push(mark(e));
            }
            _ => rows.push((e.row.clone(), vec![mark(e)])),
        }
    }
    let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
    let lead = rows.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
    for (_, cells) in &rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = format!("{title}\n{:lead$}", "");
    for (w, c) in widths.iter().zip(columns) {
        out.push_str(&format!("  {c:w$}"));
    }
    out.push('\n');
    for (name, cells) in &rows {
        out.push_str(&format!("{name:lead$}"));
        for (w, c) in widths.iter().zip(cells) {
            out.push_str(&format!("  {c:w$}"));
        }
        out.push('\n');
    }
    out
}

fn mark(e: &TableEntry) -> String {
    if e.pass {
        e.computed.clone()
    } else {
        format!("{} (expected {})", e.computed, e.expected)
    }
}

/// Aligned plain-text rendering of the report.
pub fn render_text(r: &TablesReport) -> String {
    let mut out = String::from("commutators\n");
    for b in &r.commutators.entries {
        out.push_str(&format!(
            "  [{}, {}] = {}  {}\n",
            b.left,
            b.right,
            b.expected,
            if b.pass { "ok" } else { "MISMATCH" }
        ));
    }
    out.push('\n');
    out.push_str(&grid("intrinsic pushforwards", &r.pushforwards, &AXES));
    out.push('\n');
    out.push_str(&grid("first prolongations over the origin", &r.first_order, &JET_AXES[..2]));
    out.push('\n');
    out.push_str(&grid("second prolongations over the origin", &r.second_order, &JET_AXES));
    out.push('\n');
    out.push_str(&grid("pivoted block", &r.pivot, &JET_AXES));
    out.push_str(&format!("\n{}\n", if r.pass { "all tables match" } else { "TABLE MISMATCH" }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_matches() {
        let r = verify_tables().unwrap();
        assert_eq!(r.commutators.entries.len(), 10);
        assert_eq!(r.pushforwards.len(), 15);
        assert_eq!(r.first_order.len(), 10);
        assert_eq!(r.second_order.len(), 20);
        assert_eq!(r.pivot.len(), 16);
        for t in [&r.pushforwards, &r.first_order, &r.second_order, &r.pivot] {
            for e in t {
                assert!(e.pass, "{e:?}");
            }
        }
        assert!(r.pass);
    }

    #[test]
    fn parse_roundtrip() {
        let p = Poly::parse_with("6*x1^2 + 2*y1^2 - 1/2*u", &VAR_NAMES).unwrap();
        assert_eq!(Poly::parse_with(&p.display_with(&VAR_NAMES), &VAR_NAMES).unwrap(), p);
        assert!(Poly::parse_with("3*q", &VAR_NAMES).is_err());
    }

    #[test]
    fn text_rendering_mentions_every_field() {
        let text = render_text(&verify_tables().unwrap());
        for n in FIELD_NAMES {
            assert!(text.contains(n));
        }
        assert!(text.ends_with("all tables match\n"));
    }
}
