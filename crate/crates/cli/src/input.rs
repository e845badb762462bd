//! Loading spaces, sets, functions and maps from builtin names, inline JSON or
//! JSON files. JSON input is checked against the bundled schemas first, so a
//! malformed spec reports where it breaks rather than a serde message.

use std::f64::consts::PI;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use tmslab_core::ac::FunctionSpec;
use tmslab_core::linear::LinearMapSpec;
use tmslab_core::spaces::{CircleMetric, Norm, OpenSet, SpaceDescriptor};

use crate::schema::{validate, SchemaKind};
use crate::CliError;

/// Named spaces accepted by `--space`.
pub fn builtin_spaces() -> Vec<(&'static str, SpaceDescriptor)> {
    vec![
        ("real_line", SpaceDescriptor::real_line()),
        ("unit_interval", SpaceDescriptor::closed_interval(0.0, 1.0)),
        ("open_unit_interval", SpaceDescriptor::open_interval(0.0, 1.0)),
        ("half_line", SpaceDescriptor::half_line()),
        ("plane", SpaceDescriptor::euclidean(2, Norm::L2)),
        ("plane_sup", SpaceDescriptor::euclidean(2, Norm::Sup)),
        ("plane_l1", SpaceDescriptor::euclidean(2, Norm::L1)),
        ("unit_square", SpaceDescriptor::unit_cube(2, Norm::L2)),
        ("circle_arc", SpaceDescriptor::circle(CircleMetric::Arc)),
        ("circle_chord", SpaceDescriptor::circle(CircleMetric::Chord)),
        (
            "parabola",
            SpaceDescriptor::curve(
                (0..=128)
                    .map(|i| {
                        let t = i as f64 / 128.0;
                        [t, t * t]
                    })
                    .collect(),
            )
            .expect("parabola samples are distinct"),
        ),
        ("grid_sup_16", SpaceDescriptor::grid(16, Norm::Sup)),
        ("grid_l1_16", SpaceDescriptor::grid(16, Norm::L1)),
        ("grid_l2_16", SpaceDescriptor::grid(16, Norm::L2)),
    ]
}

fn is_inline(arg: &str) -> bool {
    matches!(arg.trim_start().chars().next(), Some('{') | Some('['))
}

fn read_json(arg: &str) -> Result<Value, CliError> {
    let text = if is_inline(arg) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Io(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Spec { what: arg.to_string(), diagnostics: vec![e.to_string()] })
}

fn decode<T: DeserializeOwned>(kind: SchemaKind, value: Value) -> Result<T, CliError> {
    validate(kind, &value)?;
    serde_json::from_value(value)
        .map_err(|e| CliError::Spec { what: kind.describe().to_string(), diagnostics: vec![e.to_string()] })
}

fn looks_like_json_source(arg: &str) -> bool {
    is_inline(arg) || arg.ends_with(".json") || Path::new(arg).is_file()
}

pub fn parse_space(arg: &str) -> Result<SpaceDescriptor, CliError> {
    if looks_like_json_source(arg) {
        let space: SpaceDescriptor = decode(SchemaKind::Space, read_json(arg)?)?;
        space.validate()?;
        return Ok(space);
    }
    builtin_spaces()
        .into_iter()
        .find(|(name, _)| *name == arg)
        .map(|(_, s)| s)
        .ok_or_else(|| CliError::Usage(format!("unknown space {arg:?}; see `tmslab spaces list`")))
}

pub fn parse_function(arg: &str) -> Result<FunctionSpec, CliError> {
    if looks_like_json_source(arg) {
        return decode(SchemaKind::Function, read_json(arg)?);
    }
    FunctionSpec::from_name(arg).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn parse_map(arg: &str) -> Result<LinearMapSpec, CliError> {
    let map: LinearMapSpec = decode(SchemaKind::LinearMap, read_json(arg)?)?;
    map.validate()?;
    Ok(map)
}

/// Open sets come from JSON, or from the shorthands `interval:a:b`,
/// `arc:start:end` (angles in units of π) and `ball:r:c1:c2:...`.
pub fn parse_set(arg: &str) -> Result<OpenSet, CliError> {
    if looks_like_json_source(arg) {
        return decode(SchemaKind::OpenSet, read_json(arg)?);
    }
    let bad = || CliError::Usage(format!("cannot parse open set {arg:?}"));
    let mut parts = arg.split(':');
    let shape = parts.next().ok_or_else(bad)?;
    let nums = parts.map(|p| p.parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    match (shape, nums.as_slice()) {
        ("interval", [a, b]) => Ok(OpenSet::interval(*a, *b)),
        ("arc", [s, e]) => Ok(OpenSet::arc(s * PI, e * PI)),
        ("ball", [r, center @ ..]) if !center.is_empty() => Ok(OpenSet::ball(center.to_vec(), *r)),
        _ => Err(bad()),
    }
}

/// A comma-separated list of reals such as `0.1,0.01,1e-3`.
pub fn parse_list(arg: &str) -> Result<Vec<f64>, CliError> {
    arg.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("cannot parse {s:?} as a number"))))
        .collect()
}
