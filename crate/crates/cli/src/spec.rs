//! Textual specifications of cutoffs and input functions.

use std::fmt;
use std::str::FromStr;

use hermite_needlets::cutoff::{
    make_dual_pair, make_quadratic_cutoff, make_type_a, make_type_b, CutoffPair, SmoothCutoff,
};
use hermite_needlets::hermite::{min_projection_order, project_function, HermiteExpansion};
use hermite_needlets::spaces::bump;
use hermite_needlets::{NeedletError, Result};
use serde::{Deserialize, Serialize};

fn numbers(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| NeedletError::InvalidParameter(format!("{what}: {v:?} is not a number")))
        })
        .collect()
}

/// Frame cutoff: the quadratic (tight) cutoff, or a type-(b) cutoff paired
/// with its dual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CutoffSpec {
    Quadratic,
    DualTypeB { u: f64, v: f64 },
}

impl CutoffSpec {
    pub fn pair(&self) -> Result<CutoffPair> {
        match self {
            CutoffSpec::Quadratic => Ok(CutoffPair::tight()),
            CutoffSpec::DualTypeB { u, v } => make_dual_pair(&make_type_b(*u, *v)?),
        }
    }
}

impl FromStr for CutoffSpec {
    type Err = NeedletError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "quadratic" {
            return Ok(CutoffSpec::Quadratic);
        }
        if let Some(rest) = s.strip_prefix("dual:type_b:") {
            if let [u, v] = numbers(rest, "dual cutoff")?[..] {
                return Ok(CutoffSpec::DualTypeB { u, v });
            }
        }
        Err(NeedletError::InvalidParameter(format!(
            "cutoff {s:?}: expected `quadratic` or `dual:type_b:U,V`"
        )))
    }
}

impl TryFrom<String> for CutoffSpec {
    type Error = NeedletError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CutoffSpec> for String {
    fn from(c: CutoffSpec) -> String {
        c.to_string()
    }
}

impl fmt::Display for CutoffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutoffSpec::Quadratic => f.write_str("quadratic"),
            CutoffSpec::DualTypeB { u, v } => write!(f, "dual:type_b:{u},{v}"),
        }
    }
}

/// Any single cutoff, for tabulation: `quadratic`, `type_a:V`, `type_b:U,V`
/// or `dual:type_b:U,V` (the dual `b̂`).
pub fn parse_single_cutoff(s: &str) -> Result<SmoothCutoff> {
    if s == "quadratic" {
        return Ok(make_quadratic_cutoff());
    }
    if let Some(rest) = s.strip_prefix("type_a:") {
        if let [v] = numbers(rest, "type_a cutoff")?[..] {
            return make_type_a(v);
        }
    }
    if let Some(rest) = s.strip_prefix("type_b:") {
        if let [u, v] = numbers(rest, "type_b cutoff")?[..] {
            return make_type_b(u, v);
        }
    }
    if s.starts_with("dual:") {
        return Ok(s.parse::<CutoffSpec>()?.pair()?.b_hat);
    }
    Err(NeedletError::InvalidParameter(format!(
        "cutoff {s:?}: expected quadratic, type_a:V, type_b:U,V or dual:type_b:U,V"
    )))
}

/// An input function.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `hermite:[[[α…], c], …]`, a finite Hermite expansion.
    Hermite(Vec<(Vec<usize>, f64)>),
    /// `bump:WIDTH,C1[,C2]`, a smooth bump of radius `WIDTH` centred at `C`.
    Bump { width: f64, center: Vec<f64> },
}

impl FromStr for FunctionSpec {
    type Err = NeedletError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("hermite:") {
            let terms: Vec<(Vec<usize>, f64)> = serde_json::from_str(rest)
                .map_err(|e| NeedletError::InvalidParameter(format!("hermite spec: {e}")))?;
            if terms.is_empty() {
                return Err(NeedletError::InvalidParameter("hermite spec has no terms".into()));
            }
            return Ok(FunctionSpec::Hermite(terms));
        }
        if let Some(rest) = s.strip_prefix("bump:") {
            let v = numbers(rest, "bump spec")?;
            if v.len() < 2 || !(v[0] > 0.0) {
                return Err(NeedletError::InvalidParameter(format!(
                    "bump spec {rest:?}: expected WIDTH,C1[,C2] with WIDTH > 0"
                )));
            }
            return Ok(FunctionSpec::Bump {
                width: v[0],
                center: v[1..].to_vec(),
            });
        }
        Err(NeedletError::InvalidParameter(format!(
            "function spec {s:?}: expected `hermite:[[[…],c],…]` or `bump:WIDTH,C…`"
        )))
    }
}

/// Bump ingestion outcome besides the expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ingestion {
    pub tail_indicator: f64,
}

impl FunctionSpec {
    /// Hermite expansion in dimension `dim`; bumps are projected onto
    /// `V_degree` and rejected when the tail indicator exceeds `tail_limit`.
    pub fn expansion(&self, dim: usize, degree: usize, tail_limit: f64) -> Result<(HermiteExpansion, Option<Ingestion>)> {
        match self {
            FunctionSpec::Hermite(terms) => {
                let f = HermiteExpansion::from_terms(dim, terms.iter().map(|(a, c)| (a.clone(), *c)))?;
                Ok((f, None))
            }
            FunctionSpec::Bump { width, center } => {
                if center.len() != dim {
                    return Err(NeedletError::DimensionMismatch {
                        expected: dim,
                        found: center.len(),
                    });
                }
                let h = bump(*width);
                let c = center.clone();
                let shifted = move |x: &[f64]| {
                    let y: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
                    h(&y)
                };
                let p = project_function(shifted, dim, degree, min_projection_order(degree))?;
                if p.tail_indicator > tail_limit {
                    return Err(NeedletError::IngestionAccuracy {
                        tail: p.tail_indicator,
                        limit: tail_limit,
                    });
                }
                Ok((
                    p.expansion,
                    Some(Ingestion {
                        tail_indicator: p.tail_indicator,
                    }),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_specs() {
        assert_eq!("quadratic".parse::<CutoffSpec>().unwrap(), CutoffSpec::Quadratic);
        let d: CutoffSpec = "dual:type_b:0.25,3".parse().unwrap();
        assert_eq!(d, CutoffSpec::DualTypeB { u: 0.25, v: 3.0 });
        assert_eq!(d.to_string().parse::<CutoffSpec>().unwrap(), d);
        assert!(d.pair().is_ok());
        for bad in ["", "dual:type_b:1", "type_b:0.25,3", "dual:type_b:a,b"] {
            assert!(bad.parse::<CutoffSpec>().is_err(), "{bad}");
        }
        assert!(parse_single_cutoff("type_a:0.5").is_ok());
        assert!(parse_single_cutoff("type_b:0.25,3").is_ok());
        assert!(parse_single_cutoff("dual:type_b:0.25,3").is_ok());
        assert!(parse_single_cutoff("type_a:2").is_err());
    }

    #[test]
    fn function_specs() {
        let f: FunctionSpec = "hermite:[[[0],1.0],[[3],-0.5]]".parse().unwrap();
        let (e, ing) = f.expansion(1, 0, 1e-6).unwrap();
        assert!(ing.is_none());
        assert_eq!(e.coeff(&[3]), -0.5);
        assert!(matches!(f.expansion(2, 0, 1e-6), Err(NeedletError::DimensionMismatch { .. })));
        let b: FunctionSpec = "bump:2,0.5".parse().unwrap();
        assert_eq!(b, FunctionSpec::Bump { width: 2.0, center: vec![0.5] });
        let (e, ing) = b.expansion(1, 512, 1e-3).unwrap();
        assert!(ing.unwrap().tail_indicator < 1e-3 && e.degree() == 512);
        assert!(matches!(b.expansion(1, 8, 1e-6), Err(NeedletError::IngestionAccuracy { .. })));
        for bad in ["hermite:", "hermite:[]", "hermite:[[[0],\"x\"]]", "bump:0,1", "bump:1", "gauss:1", "bump:1,x"] {
            assert!(bad.parse::<FunctionSpec>().is_err(), "{bad}");
        }
    }
}
