//! CSV tables and the frame manifest.
//!
//! Floats are written as `{:.16e}` (17 significant digits), so identical
//! inputs give byte-identical files and every value round-trips exactly.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::cutoff::{CutoffKind, SmoothCutoff};
use crate::error::{NeedletError, Result};
use crate::frame::{FrameLevel, LocalizationReport, NeedletCoefficients, NeedletFrame};
use crate::hermite::HermiteExpansion;
use crate::quadrature::CubatureRule;
use crate::spaces::{Exponent, ShiftRow};

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn io_error(e: impl fmt::Display) -> NeedletError {
    NeedletError::Io(e.to_string())
}

fn axis_columns(prefix: &str, dim: usize) -> Vec<String> {
    if dim == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=dim).map(|a| format!("{prefix}_{a}")).collect()
    }
}

fn write_table<W: Write>(out: W, header: Vec<String>, rows: impl Iterator<Item = Result<Vec<String>>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header).map_err(io_error)?;
    for row in rows {
        w.write_record(&row?).map_err(io_error)?;
    }
    w.flush().map_err(io_error)
}

/// `index,node,gauss_weight,christoffel_weight`; in two dimensions the node
/// column becomes `node_1,node_2`.
pub fn write_rule_csv<W: Write>(rule: &CubatureRule, out: W) -> Result<()> {
    let mut header = vec!["index".to_string()];
    header.extend(axis_columns("node", rule.dim));
    header.extend(["gauss_weight".to_string(), "christoffel_weight".to_string()]);
    let rows = (0..rule.len()).map(|i| {
        let mut row = vec![i.to_string()];
        row.extend(rule.node(i).iter().map(|v| format_float(*v)));
        row.push(format_float(rule.gauss_weight(i)));
        row.push(format_float(rule.weight(i)));
        Ok(row)
    });
    write_table(out, header, rows)
}

/// One row per node of a level: `node_index,xi…,lambda,tile_lo…,tile_hi…`.
pub fn write_level_csv<W: Write>(level: &FrameLevel, out: W) -> Result<()> {
    let d = level.dim();
    let mut header = vec!["node_index".to_string()];
    header.extend(axis_columns("xi", d));
    header.push("lambda".into());
    header.extend(axis_columns("tile_lo", d));
    header.extend(axis_columns("tile_hi", d));
    let rows = (0..level.len()).map(|i| {
        let mut row = vec![i.to_string()];
        row.extend(level.node(i)?.into_iter().map(format_float));
        row.push(format_float(level.weight(i)?));
        let tile = level.tile(i)?;
        row.extend(tile.iter().map(|(a, _)| format_float(*a)));
        row.extend(tile.iter().map(|(_, b)| format_float(*b)));
        Ok(row)
    });
    write_table(out, header, rows)
}

/// `level,node_index,xi…,s_value`, every node of every level.
pub fn write_coefficients_csv<W: Write>(s: &NeedletCoefficients, frame: &NeedletFrame, out: W) -> Result<()> {
    if *s.signature() != frame.signature() {
        return Err(NeedletError::FrameMismatch);
    }
    let mut header = vec!["level".to_string(), "node_index".to_string()];
    header.extend(axis_columns("xi", frame.dim()));
    header.push("s_value".into());
    let rows = s.entries().map(|(j, i, v)| {
        let mut row = vec![j.to_string(), i.to_string()];
        row.extend(frame.level(j)?.node(i)?.into_iter().map(format_float));
        row.push(format_float(v));
        Ok(row)
    });
    write_table(out, header, rows)
}

/// Reads a table written by [`write_coefficients_csv`] for the same frame.
///
/// Rows may be missing (their coefficients are zero) or reordered; node
/// coordinates must match the frame's.
pub fn read_coefficients_csv<R: Read>(input: R, frame: &NeedletFrame) -> Result<NeedletCoefficients> {
    let d = frame.dim();
    let mut reader = csv::Reader::from_reader(input);
    let width = 3 + d;
    let malformed = |e: csv::Error| NeedletError::InvalidParameter(format!("malformed coefficient table: {e}"));
    let header = reader.headers().map_err(malformed)?.clone();
    if header.len() != width || &header[0] != "level" || &header[width - 1] != "s_value" {
        return Err(NeedletError::InvalidParameter(format!(
            "coefficient table header {:?} does not match a {d}-dimensional frame",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut s = NeedletCoefficients::zeros(frame);
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(malformed)?;
        let bad = |what: &str| NeedletError::InvalidParameter(format!("coefficient row {}: {what}", line + 1));
        let j: usize = record[0].parse().map_err(|_| bad("level is not an integer"))?;
        let i: usize = record[1].parse().map_err(|_| bad("node_index is not an integer"))?;
        let xi: Vec<f64> = (0..d)
            .map(|a| record[2 + a].parse().map_err(|_| bad("bad coordinate")))
            .collect::<Result<_>>()?;
        let v: f64 = record[width - 1].parse().map_err(|_| bad("bad s_value"))?;
        let node = frame.level(j)?.node(i)?;
        if node.iter().zip(&xi).any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + a.abs())) {
            return Err(bad("coordinates do not match the frame node"));
        }
        s.set(j, i, v)?;
    }
    Ok(s)
}

/// `alpha…,coefficient`, one row per multi-index in graded order.
pub fn write_expansion_csv<W: Write>(f: &HermiteExpansion, out: W) -> Result<()> {
    let mut header = axis_columns("alpha", f.dim());
    header.push("coefficient".into());
    let rows = f.coeffs().iter().enumerate().map(|(i, c)| {
        let mut row: Vec<String> = f.multi_index(i).0.iter().map(usize::to_string).collect();
        row.push(format_float(*c));
        Ok(row)
    });
    write_table(out, header, rows)
}

/// `x…,kernel,weighted,tail` for every sample of a localization profile.
pub fn write_decay_csv<W: Write>(report: &LocalizationReport, out: W) -> Result<()> {
    let d = report.samples.first().map_or(1, |s| s.x.len());
    let mut header = axis_columns("x", d);
    header.extend(["kernel", "weighted", "tail"].map(String::from));
    let rows = report.samples.iter().map(|s| {
        let mut row: Vec<String> = s.x.iter().map(|v| format_float(*v)).collect();
        row.push(format_float(s.kernel));
        row.push(format_float(s.weighted));
        row.push(s.tail.to_string());
        Ok(row)
    });
    write_table(out, header, rows)
}

/// Which norm a report row holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    /// Hermite–Triebel–Lizorkin norm from `Φ_j∗f`.
    F,
    /// Hermite–Besov norm from `Φ_j∗f`.
    B,
    /// `F` sequence norm of the needlet coefficients.
    FSequence,
    /// `B` sequence norm of the needlet coefficients.
    BSequence,
    /// Approximation-space norm.
    A,
    /// Plain `L^p` norm.
    Lp,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::F => "F",
            NormKind::B => "B",
            NormKind::FSequence => "f_seq",
            NormKind::BSequence => "b_seq",
            NormKind::A => "A",
            NormKind::Lp => "Lp",
        })
    }
}

impl std::str::FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "F" => NormKind::F,
            "B" => NormKind::B,
            "f_seq" => NormKind::FSequence,
            "b_seq" => NormKind::BSequence,
            "A" => NormKind::A,
            "Lp" => NormKind::Lp,
            _ => return Err(format!("unknown norm kind {s:?}, expected F, B, f_seq, b_seq, A or Lp")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRow {
    pub function_id: String,
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub kind: NormKind,
    pub value: f64,
}

/// `function_id,alpha,p,q,norm_kind,value`; infinite exponents print as `inf`.
pub fn write_norms_csv<W: Write>(rows: &[NormRow], out: W) -> Result<()> {
    let header = ["function_id", "alpha", "p", "q", "norm_kind", "value"].map(String::from).to_vec();
    let rows = rows.iter().map(|r| {
        Ok(vec![
            r.function_id.clone(),
            format_float(r.alpha),
            r.p.to_string(),
            r.q.to_string(),
            r.kind.to_string(),
            format_float(r.value),
        ])
    });
    write_table(out, header, rows)
}

/// `y,l2,bH,fH`.
pub fn write_shift_csv<W: Write>(rows: &[ShiftRow], out: W) -> Result<()> {
    let header = ["y", "l2", "bH", "fH"].map(String::from).to_vec();
    let rows = rows
        .iter()
        .map(|r| Ok([r.y, r.l2, r.b_h, r.f_h].map(format_float).to_vec()));
    write_table(out, header, rows)
}

/// `t,value` at the given abscissae.
pub fn write_cutoff_csv<W: Write>(cutoff: &SmoothCutoff, ts: &[f64], out: W) -> Result<()> {
    let header = ["t", "value"].map(String::from).to_vec();
    let rows = ts.iter().map(|t| Ok(vec![format_float(*t), format_float(cutoff.eval(*t))]));
    write_table(out, header, rows)
}

/// Summary of a frame, written as JSON next to the per-level tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameManifest {
    pub dimension: usize,
    pub delta: f64,
    pub j_max: usize,
    /// `N_j` per level.
    pub n_j: Vec<usize>,
    /// `(2N_j)^d` per level.
    pub node_counts: Vec<usize>,
    pub total_nodes: usize,
    /// Label of the analysis cutoff, e.g. `quadratic`.
    pub cutoff: String,
    pub cutoff_kind: CutoffKind,
    /// `true` when analysis and synthesis use the same cutoff.
    pub tight: bool,
}

impl FrameManifest {
    pub fn from_frame(frame: &NeedletFrame) -> Self {
        Self {
            dimension: frame.dim(),
            delta: frame.delta(),
            j_max: frame.j_max(),
            n_j: frame.levels().iter().map(FrameLevel::n_j).collect(),
            node_counts: frame.levels().iter().map(FrameLevel::len).collect(),
            total_nodes: frame.total_nodes(),
            cutoff: frame.pair().label(),
            cutoff_kind: frame.pair().a_hat.kind().clone(),
            tight: frame.pair().is_self_dual(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoff::{make_quadratic_cutoff, CutoffPair};
    use crate::frame::{analyze, build_frame, localization_profile};
    use crate::quadrature::product_cubature;

    fn text(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        let v = std::f64::consts::PI;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn rule_tables() {
        let one = text(|b| write_rule_csv(&product_cubature(2, 1).unwrap(), b));
        let lines: Vec<&str> = one.lines().collect();
        assert_eq!(lines[0], "index,node,gauss_weight,christoffel_weight");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,-7.0710678118654"));
        let two = text(|b| write_rule_csv(&product_cubature(2, 2).unwrap(), b));
        assert_eq!(two.lines().next().unwrap(), "index,node_1,node_2,gauss_weight,christoffel_weight");
        assert_eq!(two.lines().count(), 5);
    }

    #[test]
    fn coefficient_round_trip() {
        let frame = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
        let f = HermiteExpansion::from_terms(1, [([0usize], 1.0), ([3], -0.5)]).unwrap();
        let s = analyze(&f, &frame).unwrap();
        let csv = text(|b| write_coefficients_csv(&s, &frame, b));
        assert!(csv.starts_with("level,node_index,xi,s_value\n"));
        assert_eq!(csv.lines().count(), 1 + frame.total_nodes());
        let back = read_coefficients_csv(csv.as_bytes(), &frame).unwrap();
        assert_eq!(back, s);
        // a deterministic writer
        assert_eq!(csv, text(|b| write_coefficients_csv(&s, &frame, b)));
    }

    #[test]
    fn coefficient_reader_rejects_foreign_tables() {
        let frame = build_frame(1, 0.025, 1, CutoffPair::tight()).unwrap();
        for bad in [
            "level,node_index,xi_1,xi_2,s_value\n",
            "level,node_index,xi,s_value\n0,0,5.0,1.0\n",
            "level,node_index,xi,s_value\nx,0,0,1\n",
            "level,node_index,xi,s_value\n7,0,0,1\n",
        ] {
            assert!(read_coefficients_csv(bad.as_bytes(), &frame).is_err(), "{bad}");
        }
    }

    #[test]
    fn norm_shift_and_cutoff_tables() {
        let rows = [NormRow {
            function_id: "h0".into(),
            alpha: 0.0,
            p: Exponent::Finite(2.0),
            q: Exponent::Infinity,
            kind: NormKind::F,
            value: 1.0,
        }];
        let t = text(|b| write_norms_csv(&rows, b));
        assert_eq!(
            t,
            "function_id,alpha,p,q,norm_kind,value\nh0,0.0000000000000000e0,2,inf,F,1.0000000000000000e0\n"
        );
        let s = text(|b| write_shift_csv(&[ShiftRow { y: 0.0, l2: 1.0, b_h: 2.0, f_h: 3.0 }], b));
        assert!(s.starts_with("y,l2,bH,fH\n"));
        let c = text(|b| write_cutoff_csv(&make_quadratic_cutoff(), &[0.0, 1.0], b));
        assert_eq!(c.lines().nth(1).unwrap(), "0.0000000000000000e0,0.0000000000000000e0");
        for k in ["F", "B", "f_seq", "b_seq", "A", "Lp"] {
            assert_eq!(k.parse::<NormKind>().unwrap().to_string(), k);
        }
    }

    #[test]
    fn expansion_and_decay_tables() {
        let f = HermiteExpansion::from_terms(2, [([0usize, 1], 0.5)]).unwrap();
        let t = text(|b| write_expansion_csv(&f, b));
        assert_eq!(
            t,
            "alpha_1,alpha_2,coefficient\n0,0,0.0000000000000000e0\n0,1,5.0000000000000000e-1\n1,0,0.0000000000000000e0\n"
        );
        let frame = build_frame(1, 0.025, 1, CutoffPair::tight()).unwrap();
        let report = localization_profile(&frame, 1, 3, 5, false).unwrap();
        let t = text(|b| write_decay_csv(&report, b));
        assert!(t.starts_with("x,kernel,weighted,tail\n"));
        assert_eq!(t.lines().count(), 1 + report.samples.len());
    }

    #[test]
    fn manifest_lists_level_sizes() {
        let frame = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
        let m = FrameManifest::from_frame(&frame);
        assert_eq!(m.n_j, [5, 11, 36]);
        assert_eq!(m.node_counts, [10, 22, 72]);
        assert!(m.tight);
        let back: FrameManifest = serde_json::from_str(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let mut level = Vec::new();
        write_level_csv(frame.level(1).unwrap(), &mut level).unwrap();
        let level = String::from_utf8(level).unwrap();
        assert!(level.starts_with("node_index,xi,lambda,tile_lo,tile_hi\n"));
        assert_eq!(level.lines().count(), 23);
    }
}
