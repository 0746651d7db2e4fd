//! The job file: group, connection coefficients and command parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, LaurentMatrix, Rational};
use crate::filtration::ConnectionMatrix;
use crate::roots::{ApartmentPoint, GroupData, GroupKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: GroupKind,
    /// Matrix size of the defining representation.
    pub n: usize,
}

/// One coefficient `M_power` of `A = sum M_power z^power`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub power: i64,
    pub matrix: Vec<Vec<Rational>>,
}

/// Optional command parameters; command-line flags override them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub point: Option<Vec<Rational>>,
    /// Second point for `associates`.
    pub other_point: Option<Vec<Rational>>,
    pub depth: Option<Rational>,
    pub e: Option<u32>,
    pub horizon: Option<usize>,
    pub grid_denom: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub group: GroupSpec,
    pub connection: Vec<Term>,
    pub params: Params,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireTerm {
    power: i64,
    matrix: Vec<Vec<String>>,
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    other_point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid_denom: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl WireParams {
    fn is_empty(&self) -> bool {
        self.point.is_none()
            && self.other_point.is_none()
            && self.depth.is_none()
            && self.e.is_none()
            && self.horizon.is_none()
            && self.grid_denom.is_none()
            && self.seed.is_none()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireJob {
    group: GroupSpec,
    connection: Vec<WireTerm>,
    #[serde(default, skip_serializing_if = "WireParams::is_empty")]
    params: WireParams,
}

fn field_rational(context: String, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(context, format!("{message} in {text:?}")),
        other => other,
    })
}

fn field_vector(context: &str, values: &[String]) -> Result<Vec<Rational>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| field_rational(format!("{context}[{i}]"), v))
        .collect()
}

/// Parses a comma-separated coordinate list such as `1/4,1/4`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .enumerate()
        .map(|(i, part)| field_rational(format!("point[{i}]"), part))
        .collect()
}

/// Parses and validates a job file, including Lie-algebra membership.
pub fn parse_input(text: &str) -> Result<JobSpec> {
    let wire: WireJob = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    let n = wire.group.n;
    let mut connection = Vec::with_capacity(wire.connection.len());
    for (k, term) in wire.connection.iter().enumerate() {
        let ctx = format!("connection[{k}].matrix");
        if term.matrix.len() != n {
            return Err(Error::Dimension(format!(
                "{ctx} has {} rows, expected {n}",
                term.matrix.len()
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in term.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "{ctx}[{i}] has {} entries, expected {n}",
                    row.len()
                )));
            }
            rows.push(field_vector(&format!("{ctx}[{i}]"), row)?);
        }
        connection.push(Term {
            power: term.power,
            matrix: rows,
        });
    }
    let p = &wire.params;
    let params = Params {
        point: p
            .point
            .as_deref()
            .map(|v| field_vector("params.point", v))
            .transpose()?,
        other_point: p
            .other_point
            .as_deref()
            .map(|v| field_vector("params.other_point", v))
            .transpose()?,
        depth: p
            .depth
            .as_deref()
            .map(|d| field_rational("params.depth".into(), d))
            .transpose()?,
        e: p.e,
        horizon: p.horizon,
        grid_denom: p.grid_denom,
        seed: p.seed,
    };
    let job = JobSpec {
        group: wire.group,
        connection,
        params,
    };
    job.connection_matrix()?;
    Ok(job)
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

/// Serializes a job back to its file format.
pub fn render(job: &JobSpec) -> String {
    serde_json::to_string_pretty(&job.to_value()).expect("job serializes")
}

impl JobSpec {
    pub fn to_value(&self) -> serde_json::Value {
        let p = &self.params;
        let wire = WireJob {
            group: self.group,
            connection: self
                .connection
                .iter()
                .map(|t| WireTerm {
                    power: t.power,
                    matrix: t.matrix.iter().map(|r| strings(r)).collect(),
                })
                .collect(),
            params: WireParams {
                point: p.point.as_deref().map(strings),
                other_point: p.other_point.as_deref().map(strings),
                depth: p.depth.as_ref().map(format_rational),
                e: p.e,
                horizon: p.horizon,
                grid_denom: p.grid_denom,
                seed: p.seed,
            },
        };
        serde_json::to_value(wire).expect("job serializes")
    }

    /// Builds a job from a connection, with empty parameters.
    pub fn from_connection(conn: &ConnectionMatrix) -> Self {
        let group = conn.group();
        let a = conn.matrix();
        let connection = a
            .powers()
            .into_iter()
            .map(|power| {
                let c = a.coefficient(power);
                Term {
                    power,
                    matrix: (0..c.rows())
                        .map(|i| (0..c.cols()).map(|j| c[(i, j)].clone()).collect())
                        .collect(),
                }
            })
            .collect();
        JobSpec {
            group: GroupSpec {
                kind: group.kind,
                n: group.size,
            },
            connection,
            params: Params::default(),
        }
    }

    pub fn group_data(&self) -> Result<GroupData> {
        GroupData::build(self.group.kind, self.group.n)
    }

    /// `A = sum M_power z^power`, checked for membership in the Lie algebra.
    pub fn connection_matrix(&self) -> Result<ConnectionMatrix> {
        let group = self.group_data()?;
        let n = self.group.n;
        let mut a = LaurentMatrix::zero(n);
        for term in &self.connection {
            if term.matrix.len() != n || term.matrix.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!(
                    "coefficient of z^{} is not {n}x{n}",
                    term.power
                )));
            }
            for (i, row) in term.matrix.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    a.entry_mut(i, j).add_term(term.power, c);
                }
            }
        }
        ConnectionMatrix::new(group, a)
    }

    pub fn point(&self, group: &GroupData) -> Result<Option<ApartmentPoint>> {
        self.params.point.clone().map(|c| checked_point(group, c)).transpose()
    }

    pub fn other_point(&self, group: &GroupData) -> Result<Option<ApartmentPoint>> {
        self.params
            .other_point
            .clone()
            .map(|c| checked_point(group, c))
            .transpose()
    }
}

fn checked_point(group: &GroupData, coords: Vec<Rational>) -> Result<ApartmentPoint> {
    let x = ApartmentPoint::new(coords);
    group.validate_point(&x)?;
    Ok(x)
}
