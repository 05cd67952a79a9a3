use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use hermite_needlets::export::{
    read_coefficients_csv, write_coefficients_csv, write_cutoff_csv, write_decay_csv, write_expansion_csv,
    write_level_csv, write_norms_csv, write_rule_csv, write_shift_csv, FrameManifest, NormKind, NormRow,
};
use hermite_needlets::frame::{analyze, localization_profile, synthesize, NeedletFrame};
use hermite_needlets::hermite::HermiteExpansion;
use hermite_needlets::quadrature::product_cubature_with_budget;
use hermite_needlets::spaces::{
    approximation_norm, b_continuous_norm, b_sequence_norm, f_continuous_norm, f_sequence_norm, lp_norm,
    shift_study, ShiftConfig, SpaceParams,
};
use hermite_needlets::verify::run_suite;
use hermite_needlets::NeedletError;

use crate::config::RunConfig;
use crate::spec::{parse_single_cutoff, FunctionSpec};
use crate::{Command, UsageError, VerifyFailed};

/// Runs `write` against `path`, or against stdout when no path is given.
fn emit<F>(path: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> hermite_needlets::Result<()>,
{
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().with_context(|| format!("writing {}", p.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn parse_function(spec: &str) -> Result<FunctionSpec> {
    Ok(spec.parse::<FunctionSpec>()?)
}

/// Expansion of `spec` for `frame`; bump inputs are projected onto `V_degree`.
fn ingest(spec: &FunctionSpec, frame: &NeedletFrame, degree: Option<usize>, tail_limit: f64) -> Result<HermiteExpansion> {
    let degree = degree.unwrap_or_else(|| frame.max_degree());
    let (f, ingestion) = spec.expansion(frame.dim(), degree, tail_limit)?;
    if let Some(i) = ingestion {
        eprintln!("projected onto degree {degree}, tail indicator {:.3e}", i.tail_indicator);
    }
    Ok(f)
}

pub fn dispatch(command: Command, config: &RunConfig) -> Result<()> {
    match command {
        Command::Rule { n, out } => {
            let rule = product_cubature_with_budget(n, config.dimension, config.node_budget as u128)?;
            emit(out.as_deref(), |w| write_rule_csv(&rule, w))
        }
        Command::Frame => {
            let frame = config.frame()?;
            let dir = &config.output_dir;
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let manifest = FrameManifest::from_frame(&frame).to_json();
            std::fs::write(dir.join("manifest.json"), format!("{manifest}\n"))
                .with_context(|| format!("writing manifest in {}", dir.display()))?;
            for level in frame.levels() {
                let path = dir.join(format!("level_{}.csv", level.level()));
                emit(Some(&path), |w| write_level_csv(level, w))?;
            }
            println!("{manifest}");
            Ok(())
        }
        Command::Decompose {
            function,
            degree,
            tail_limit,
            out,
        } => {
            let spec = parse_function(&function)?;
            let frame = config.frame()?;
            let f = ingest(&spec, &frame, degree, tail_limit)?;
            let s = analyze(&f, &frame)?;
            emit(out.as_deref(), |w| write_coefficients_csv(&s, &frame, w))
        }
        Command::Reconstruct { coefficients, out } => {
            let frame = config.frame()?;
            let file = File::open(&coefficients).with_context(|| format!("opening {}", coefficients.display()))?;
            let s = read_coefficients_csv(io::BufReader::new(file), &frame)?;
            let f = synthesize(&s, &frame)?;
            emit(out.as_deref(), |w| write_expansion_csv(&f, w))
        }
        Command::Norms {
            functions,
            alpha,
            p,
            q,
            kind,
            levels,
            degree,
            tail_limit,
            out,
        } => {
            let params = SpaceParams::new(alpha, p, q)?;
            let frame = config.frame()?;
            let grid = config.grid(&frame)?;
            let filter = frame.analysis_filter();
            let mut rows = Vec::new();
            for spec_text in &functions {
                let f = ingest(&parse_function(spec_text)?, &frame, degree, tail_limit)?;
                for k in &kind {
                    let value = match k {
                        NormKind::F => f_continuous_norm(&f, &params, &filter, &grid)?,
                        NormKind::B => b_continuous_norm(&f, &params, &filter, &grid)?,
                        NormKind::FSequence => f_sequence_norm(&analyze(&f, &frame)?, &params, &frame, &grid)?,
                        NormKind::BSequence => b_sequence_norm(&analyze(&f, &frame)?, &params, &frame)?,
                        NormKind::A => approximation_norm(&f, alpha, params.q, params.p, &grid, levels),
                        NormKind::Lp => lp_norm(&f, params.p, &grid),
                    };
                    rows.push(NormRow {
                        function_id: spec_text.clone(),
                        alpha,
                        p: params.p,
                        q: params.q,
                        kind: *k,
                        value,
                    });
                }
            }
            emit(out.as_deref(), |w| write_norms_csv(&rows, w))
        }
        Command::Decay {
            level,
            node,
            k,
            derivative,
            out,
        } => {
            let frame = config.frame()?;
            let lv = frame.level(level)?;
            let node = match node {
                Some(i) => i,
                None => nearest_origin(lv)?,
            };
            let report = localization_profile(&frame, level, node, k, derivative)?;
            eprintln!(
                "level {level} node {node}: inner max {:.6e}, tail max {:.3e} beyond |x| = {:.4}",
                report.inner_max, report.tail_max, report.tail_radius
            );
            emit(out.as_deref(), |w| write_decay_csv(&report, w))
        }
        Command::ShiftStudy {
            shifts,
            width,
            alpha,
            p,
            q,
            levels,
            degree,
            out,
        } => {
            if config.dimension != 1 {
                return Err(UsageError("shift-study runs in one dimension; use --d 1".into()).into());
            }
            let study = ShiftConfig {
                width,
                params: SpaceParams::new(alpha, p, q)?,
                cutoff: config.pair()?.a_hat,
                levels,
                degree,
                ..ShiftConfig::default()
            };
            let rows = shift_study(&shifts, &study)?;
            emit(out.as_deref(), |w| write_shift_csv(&rows, w))
        }
        Command::Verify { suite } => {
            let checks = run_suite(suite);
            let mut failed = 0;
            for c in &checks {
                println!("{c}");
                failed += usize::from(!c.pass);
            }
            if failed > 0 {
                return Err(VerifyFailed(failed).into());
            }
            Ok(())
        }
        Command::Cutoff {
            kind,
            from,
            to,
            points,
            out,
        } => {
            let cutoff = parse_single_cutoff(&kind)?;
            if points < 2 || !(to > from) {
                return Err(NeedletError::InvalidParameter(format!(
                    "need at least 2 points on a nonempty interval, got {points} on [{from}, {to}]"
                ))
                .into());
            }
            let ts: Vec<f64> = (0..points)
                .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
                .collect();
            emit(out.as_deref(), |w| write_cutoff_csv(&cutoff, &ts, w))
        }
    }
}

fn nearest_origin(level: &hermite_needlets::frame::FrameLevel) -> Result<usize> {
    let mut best = (f64::INFINITY, 0);
    for i in 0..level.len() {
        let r = level.node(i)?.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if r < best.0 {
            best = (r, i);
        }
    }
    Ok(best.1)
}
