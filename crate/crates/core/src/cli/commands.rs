//! Command dispatch.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use serde_json::{json, Value};

use super::job::JobSpec;
use super::report::{ErrorReport, Report, VERSION};
use crate::error::{Error, Result};
use crate::exact::{format_rational, LaurentMatrix, Rational};
use crate::filtration::{component, depth_at, leading_representative, point_diagonal, ConnectionMatrix};
use crate::roots::{Alcove, ApartmentPoint, GroupData};
use crate::slope::{
    adjoint_matrix, character_slopes, default_horizon, depth_map, katz_boundedness_trace, katz_newton_slope_seeded,
    oracle_slope, pullback_connection, slope, stratum_search, KatzResult, SearchOutcome, SlopeReport,
};
use crate::strata::{associates_at, contains, is_fundamental, GaugeElement, Stratum};

pub const DEFAULT_GRID_DENOM: u32 = 8;
pub const MAX_GRID_DENOM: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Slope,
    Stratum,
    DepthMap,
    Katz,
    Pullback,
    CheckFundamental,
    RegularSingular,
    Associates,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Slope => "slope",
            Command::Stratum => "stratum",
            Command::DepthMap => "depth-map",
            Command::Katz => "katz",
            Command::Pullback => "pullback",
            Command::CheckFundamental => "check-fundamental",
            Command::RegularSingular => "regular-singular",
            Command::Associates => "associates",
        })
    }
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn point_json(x: &ApartmentPoint) -> Value {
    Value::Array(x.coords.iter().map(q).collect())
}

/// A Laurent matrix as its list of `{power, matrix}` coefficients.
pub fn matrix_json(a: &LaurentMatrix) -> Value {
    let terms = a
        .powers()
        .into_iter()
        .map(|p| {
            let c = a.coefficient(p);
            let rows: Vec<Value> = (0..c.rows())
                .map(|i| Value::Array((0..c.cols()).map(|j| q(&c[(i, j)])).collect()))
                .collect();
            json!({ "power": p, "matrix": rows })
        })
        .collect();
    Value::Array(terms)
}

fn stratum_json(s: &Stratum) -> Value {
    json!({
        "point": point_json(&s.point),
        "depth": q(&s.depth),
        "fundamental": is_fundamental(s),
        "representative": matrix_json(&s.rep),
    })
}

fn search_json(s: &SearchOutcome) -> Value {
    json!({
        "found": s.stratum.is_some(),
        "phase": s.phase,
        "stratum": s.stratum.as_ref().map(stratum_json),
        "gauge": matrix_json(s.gauge.matrix()),
        "depth_map": s.depth_map.iter().map(|(x, d)| json!({"point": point_json(x), "depth": q(d)})).collect::<Vec<_>>(),
        "diagnostics": s.diagnostics,
    })
}

fn slope_json(r: &SlopeReport) -> Value {
    json!({
        "slope": q(&r.slope),
        "regular_singular": r.regular_singular,
        "agreement": r.agreement,
        "methods": r.methods.iter().map(|(m, v)| json!({"method": m.to_string(), "value": q(v)})).collect::<Vec<_>>(),
        "search": search_json(&r.search),
    })
}

fn katz_json(k: &KatzResult) -> Value {
    json!({
        "slope": q(&k.slope),
        "candidate": k.candidate,
        "coefficient_valuations": k.coefficient_valuations,
    })
}

fn require_point(job: &JobSpec, group: &GroupData, second: bool) -> Result<ApartmentPoint> {
    let (x, flag) = if second {
        (job.other_point(group)?, "a second --point")
    } else {
        (job.point(group)?, "--point")
    };
    x.ok_or_else(|| Error::InvalidArgument(format!("this command needs {flag}")))
}

/// Stratum at `x` of the requested depth, or of the depth of the
/// connection there.
fn stratum_at(conn: &ConnectionMatrix, x: &ApartmentPoint, depth: Option<&Rational>) -> Result<Stratum> {
    match depth {
        None => Ok(leading_representative(conn, x)),
        Some(r) if r < &Rational::zero() => Err(Error::InvalidArgument(format!("negative depth {r}"))),
        Some(r) => {
            let diag = point_diagonal(conn.group(), x);
            let rep = component(&diag, &conn.shifted(x), &-r);
            Ok(Stratum::new(x.clone(), r.clone(), rep))
        }
    }
}

/// Optimal points first, then the remaining grid points of the closed
/// alcove, each with its depth.
pub fn depth_map_points(group: &GroupData, grid_denom: u32) -> Result<Vec<(ApartmentPoint, bool)>> {
    if grid_denom == 0 || grid_denom > MAX_GRID_DENOM {
        return Err(Error::InvalidArgument(format!(
            "grid denominator {grid_denom} outside 1..={MAX_GRID_DENOM}"
        )));
    }
    let alcove = Alcove::new(group);
    let optimal = alcove.optimal_points();
    let mut seen: BTreeSet<ApartmentPoint> = optimal.iter().cloned().collect();
    let mut out: Vec<(ApartmentPoint, bool)> = optimal.into_iter().map(|x| (x, true)).collect();
    for x in alcove.grid(grid_denom) {
        if seen.insert(x.clone()) {
            out.push((x, false));
        }
    }
    Ok(out)
}

/// Runs a command and returns its payload.
pub fn run(command: Command, job: &JobSpec) -> Result<Value> {
    let conn = job.connection_matrix()?;
    let group = conn.group().clone();
    let seed = job.params.seed.unwrap_or(0);
    match command {
        Command::Slope => Ok(slope_json(&slope(&conn)?)),
        Command::Stratum => {
            let (target, _, _) = oracle_slope(&conn)?;
            let mut v = search_json(&stratum_search(&conn, &target));
            v["target"] = q(&target);
            Ok(v)
        }
        Command::DepthMap => {
            let points = depth_map_points(&group, job.params.grid_denom.unwrap_or(DEFAULT_GRID_DENOM))?;
            let xs: Vec<ApartmentPoint> = points.iter().map(|(x, _)| x.clone()).collect();
            let depths = depth_map(&conn, &xs);
            let min = depths.iter().min().cloned().unwrap_or_else(Rational::zero);
            let minimizers: Vec<Value> = xs
                .iter()
                .zip(&depths)
                .filter(|(_, d)| **d == min)
                .map(|(x, _)| point_json(x))
                .collect();
            let entries: Vec<Value> = points
                .iter()
                .zip(&depths)
                .map(|((x, opt), d)| json!({"point": point_json(x), "depth": q(d), "optimal": opt}))
                .collect();
            Ok(json!({
                "grid_denom": job.params.grid_denom.unwrap_or(DEFAULT_GRID_DENOM),
                "minimum": q(&min),
                "minimizers": minimizers,
                "entries": entries,
            }))
        }
        Command::Katz => {
            let adjoint = katz_newton_slope_seeded(&adjoint_matrix(&conn), seed)?;
            let defining = katz_newton_slope_seeded(conn.matrix(), seed)?;
            let chars = character_slopes(&conn);
            let value = chars
                .iter()
                .fold(adjoint.slope.clone(), |m, c| if *c > m { c.clone() } else { m });
            let horizon = job.params.horizon.unwrap_or_else(|| default_horizon(conn.matrix()));
            let trace = katz_boundedness_trace(conn.matrix(), &defining.slope, horizon)?;
            Ok(json!({
                "slope": q(&value),
                "adjoint": katz_json(&adjoint),
                "defining": katz_json(&defining),
                "characters": chars.iter().map(q).collect::<Vec<_>>(),
                "trace": {
                    "horizon": trace.horizon,
                    "rate": q(&trace.rate),
                    "bounded": trace.bounded,
                    "iterate_valuations": trace.iterate_valuations,
                },
            }))
        }
        Command::Pullback => {
            let e = job
                .params
                .e
                .ok_or_else(|| Error::InvalidArgument("pullback needs --e".into()))?;
            let (before, _, _) = oracle_slope(&conn)?;
            let pulled = pullback_connection(&conn, e)?;
            let report = slope(&pulled)?;
            Ok(json!({
                "e": e,
                "original_slope": q(&before),
                "slope": q(&report.slope),
                "connection": matrix_json(pulled.matrix()),
                "report": slope_json(&report),
            }))
        }
        Command::CheckFundamental => {
            let x = require_point(job, &group, false)?;
            let s = stratum_at(&conn, &x, job.params.depth.as_ref())?;
            Ok(json!({
                "point": point_json(&x),
                "depth_at_point": q(&depth_at(&conn, &x)),
                "contained": contains(&conn, &s),
                "fundamental": is_fundamental(&s),
                "stratum": stratum_json(&s),
            }))
        }
        Command::RegularSingular => {
            let (value, _, _) = oracle_slope(&conn)?;
            Ok(json!({"regular_singular": value.is_zero(), "slope": q(&value)}))
        }
        Command::Associates => {
            let x = require_point(job, &group, false)?;
            let y = require_point(job, &group, true)?;
            let depth = job.params.depth.as_ref();
            let s1 = stratum_at(&conn, &x, depth)?;
            let s2 = stratum_at(&conn, &y, depth)?;
            let assoc = associates_at(&group, &GaugeElement::identity(group.size), &s1, &s2)?;
            Ok(json!({
                "associates": assoc,
                "strata": [stratum_json(&s1), stratum_json(&s2)],
            }))
        }
    }
}

/// Runs a command and wraps the outcome, success or failure, in a report.
pub fn execute(command: Command, job: &JobSpec) -> Report {
    let start = Instant::now();
    let outcome = run(command, job);
    let elapsed_us = u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX);
    let (result, error) = match outcome {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(ErrorReport::from(&e))),
    };
    Report {
        version: VERSION.to_string(),
        command: command.to_string(),
        job: job.to_value(),
        result,
        error,
        elapsed_us,
    }
}
