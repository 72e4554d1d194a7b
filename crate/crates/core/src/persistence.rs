//! Filtered quivers and Betti curves of the nerves of their sublevel
//! reachability posets.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::homology::{nerve_betti_of_quiver, padded};
use crate::quiver::{is_acyclic, syntax, tokenized_lines, Quiver};

/// A decimal number kept exactly, together with the text it was written as.
#[derive(Debug, Clone)]
pub struct ExactValue {
    pub text: String,
    pub value: BigRational,
}

impl PartialEq for ExactValue {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for ExactValue {}

impl PartialOrd for ExactValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl std::str::FromStr for ExactValue {
    type Err = Error;

    /// Accepts `[+-]digits[.digits][e[+-]digits]`; either side of the point
    /// may be empty but not both.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidValue(format!("`{s}` is not a decimal number"));
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (negative, unsigned) = match mantissa.as_bytes().first() {
            Some(b'-') => (true, &mantissa[1..]),
            Some(b'+') => (false, &mantissa[1..]),
            _ => (false, mantissa),
        };
        let (int, frac) = unsigned.split_once('.').unwrap_or((unsigned, ""));
        let digits_only = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if int.is_empty() && frac.is_empty() || !digits_only(int) || !digits_only(frac) {
            return Err(bad());
        }
        if exponent.unsigned_abs() > 1000 {
            return Err(Error::InvalidValue(format!(
                "exponent of `{s}` is out of range"
            )));
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = exponent - frac.len() as i32;
        let ten = BigInt::from(10);
        let mut value = BigRational::from_integer(digits);
        if scale >= 0 {
            value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
        } else {
            value /= BigRational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
        }
        if negative {
            value = -value;
        }
        Ok(ExactValue {
            text: s.to_string(),
            value,
        })
    }
}

/// A quiver whose vertices and edges appear at real filtration values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredQuiver {
    pub quiver: Quiver,
    pub vertex_values: Vec<ExactValue>,
    pub edge_values: Vec<ExactValue>,
}

impl FilteredQuiver {
    /// Builds a filtered quiver, checking that no edge appears before its endpoints.
    pub fn new(
        quiver: Quiver,
        vertex_values: Vec<ExactValue>,
        edge_values: Vec<ExactValue>,
    ) -> Result<Self> {
        assert_eq!(vertex_values.len(), quiver.vertex_count());
        assert_eq!(edge_values.len(), quiver.edge_count());
        for (i, e) in quiver.edges().iter().enumerate() {
            let latest = vertex_values[e.src]
                .clone()
                .max(vertex_values[e.dst].clone());
            if edge_values[i] < latest {
                return Err(Error::NonMonotone {
                    line: 0,
                    edge: e.id.clone(),
                    edge_value: edge_values[i].text.clone(),
                    vertex_value: latest.text,
                });
            }
        }
        Ok(FilteredQuiver {
            quiver,
            vertex_values,
            edge_values,
        })
    }

    /// Distinct filtration values in increasing order, each with the text of
    /// its first occurrence (vertices before edges).
    pub fn critical_values(&self) -> Vec<ExactValue> {
        let mut all: Vec<ExactValue> = self
            .vertex_values
            .iter()
            .chain(&self.edge_values)
            .cloned()
            .collect();
        all.sort();
        all.dedup();
        all
    }

    /// Everything present at time `t`.
    pub fn sublevel(&self, t: &BigRational) -> Quiver {
        self.quiver.subquiver(
            |v| self.vertex_values[v].value <= *t,
            |e| self.edge_values[e].value <= *t,
        )
    }
}

/// Parses the FQVR format: `v <id> <t>` and `e <id> <src> <dst> <t>` lines.
pub fn parse_filtration(text: &str) -> Result<FilteredQuiver> {
    let mut q = Quiver::new();
    let mut vertex_values = Vec::new();
    let mut pending = Vec::new();
    for (line, tokens) in tokenized_lines(text) {
        let value = |t: &str| {
            t.parse::<ExactValue>()
                .map_err(|_| syntax(line, &format!("`{t}` is not a decimal number")))
        };
        match tokens.as_slice() {
            ["v", id, t] => {
                let t = value(t)?;
                q.add_vertex(*id).map_err(|_| Error::DuplicateId {
                    line,
                    kind: "vertex",
                    id: id.to_string(),
                })?;
                vertex_values.push(t);
            }
            ["e", id, src, dst, t] => pending.push((line, *id, *src, *dst, value(t)?)),
            ["v", ..] => return Err(syntax(line, "expected `v <id> <t>`")),
            ["e", ..] => return Err(syntax(line, "expected `e <id> <src> <dst> <t>`")),
            [other, ..] => return Err(syntax(line, &format!("unknown directive `{other}`"))),
            [] => unreachable!(),
        }
    }
    let mut edge_values = Vec::new();
    for (line, id, src, dst, t) in pending {
        for end in [src, dst] {
            if q.vertex(end).is_none() {
                return Err(Error::UndeclaredVertex {
                    line,
                    edge: id.to_string(),
                    vertex: end.to_string(),
                });
            }
        }
        q.add_edge(id, src, dst).map_err(|_| Error::DuplicateId {
            line,
            kind: "edge",
            id: id.to_string(),
        })?;
        let (s, d) = (q.vertex(src).unwrap(), q.vertex(dst).unwrap());
        let latest = vertex_values[s].clone().max(vertex_values[d].clone());
        if t < latest {
            return Err(Error::NonMonotone {
                line,
                edge: id.to_string(),
                edge_value: t.text,
                vertex_value: latest.text,
            });
        }
        edge_values.push(t);
    }
    FilteredQuiver::new(q, vertex_values, edge_values)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: String,
    pub betti: Vec<usize>,
}

/// Betti numbers of the sublevel nerves at every critical value. The curve is
/// constant between consecutive thresholds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiCurve {
    pub points: Vec<CurvePoint>,
    /// Every sublevel quiver is acyclic, so inclusions induce genuine maps of
    /// incidence algebras along the whole filtration.
    pub all_acyclic: bool,
}

/// Betti vector of the sublevel nerve at one threshold.
pub fn betti_at(
    fq: &FilteredQuiver,
    t: &BigRational,
    field: FieldSpec,
    max_dim: Option<usize>,
) -> Result<Vec<usize>> {
    nerve_betti_of_quiver(&fq.sublevel(t), field, max_dim)
}

/// Computes the curve, one threshold per task on a pool of `jobs` threads
/// (`0` = rayon's default).
pub fn hh_betti_curves(
    fq: &FilteredQuiver,
    field: FieldSpec,
    max_dim: Option<usize>,
    jobs: usize,
) -> Result<BettiCurve> {
    field.dispatch(NoOp)?;
    let criticals = fq.critical_values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidValue(format!("thread pool: {e}")))?;
    let results: Vec<Result<(Vec<usize>, bool)>> = pool.install(|| {
        criticals
            .par_iter()
            .map(|t| {
                let sub = fq.sublevel(&t.value);
                Ok((
                    nerve_betti_of_quiver(&sub, field, max_dim)?,
                    is_acyclic(&sub),
                ))
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let width = results.iter().map(|(b, _)| b.len()).max().unwrap_or(0);
    let all_acyclic = results.iter().all(|(_, a)| *a);
    let points = criticals
        .into_iter()
        .zip(results)
        .map(|(t, (b, _))| CurvePoint {
            t: t.text,
            betti: padded(&b, width),
        })
        .collect();
    Ok(BettiCurve {
        points,
        all_acyclic,
    })
}

struct NoOp;

impl crate::field::FieldVisitor for NoOp {
    type Output = ();
    fn visit<F: crate::field::Field>(self) {}
}

impl BettiCurve {
    pub fn width(&self) -> usize {
        self.points.first().map_or(0, |p| p.betti.len())
    }

    /// `t,beta0,beta1,...` then one row per threshold.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for k in 0..self.width() {
            write!(out, ",beta{k}").unwrap();
        }
        out.push('\n');
        for p in &self.points {
            out.push_str(&p.t);
            for b in &p.betti {
                write!(out, ",{b}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// A self-contained gnuplot script drawing each Betti number as a step function.
    pub fn to_gnuplot(&self) -> String {
        let mut out = String::from("$curve << EOD\n");
        for p in &self.points {
            out.push_str(&p.t);
            for b in &p.betti {
                write!(out, " {b}").unwrap();
            }
            out.push('\n');
        }
        out.push_str("EOD\n");
        out.push_str("set xlabel \"t\"\nset ylabel \"Betti number\"\nset key outside\n");
        let series: Vec<String> = (0..self.width())
            .map(|k| {
                format!(
                    "$curve using 1:{} with steps linewidth 2 title \"beta{k}\"",
                    k + 2
                )
            })
            .collect();
        if series.is_empty() {
            out.push_str("# empty filtration\n");
        } else {
            writeln!(out, "plot {}", series.join(", \\\n     ")).unwrap();
        }
        out
    }
}

/// Midpoint of two exact values.
pub fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / (BigRational::one() + BigRational::one())
}
