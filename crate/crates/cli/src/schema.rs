use std::path::PathBuf;

use jsonschema::JSONSchema;
use serde_json::Value;

use crate::CliError;

/// Environment variable naming a directory that replaces the bundled schemas.
pub const SCHEMA_DIR_VAR: &str = "TMSLAB_SCHEMA_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemaKind {
    Space,
    OpenSet,
    Function,
    LinearMap,
    Report,
}

impl SchemaKind {
    pub fn file_name(self) -> &'static str {
        match self {
            SchemaKind::Space => "space.schema.json",
            SchemaKind::OpenSet => "open_set.schema.json",
            SchemaKind::Function => "function.schema.json",
            SchemaKind::LinearMap => "linear_map.schema.json",
            SchemaKind::Report => "report.schema.json",
        }
    }

    fn bundled(self) -> &'static str {
        match self {
            SchemaKind::Space => include_str!("../../../schemas/space.schema.json"),
            SchemaKind::OpenSet => include_str!("../../../schemas/open_set.schema.json"),
            SchemaKind::Function => include_str!("../../../schemas/function.schema.json"),
            SchemaKind::LinearMap => include_str!("../../../schemas/linear_map.schema.json"),
            SchemaKind::Report => include_str!("../../../schemas/report.schema.json"),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            SchemaKind::Space => "space",
            SchemaKind::OpenSet => "open set",
            SchemaKind::Function => "function",
            SchemaKind::LinearMap => "linear map",
            SchemaKind::Report => "report",
        }
    }
}

pub fn schema_text(kind: SchemaKind) -> Result<String, CliError> {
    match std::env::var_os(SCHEMA_DIR_VAR) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(kind.file_name());
            std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("cannot read schema {}: {e}", path.display())))
        }
        None => Ok(kind.bundled().to_string()),
    }
}

/// Checks `value` against the schema, returning one line per violation.
pub fn validate(kind: SchemaKind, value: &Value) -> Result<(), CliError> {
    let text = schema_text(kind)?;
    let schema: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Io(format!("schema {} is not valid JSON: {e}", kind.file_name())))?;
    let compiled =
        JSONSchema::compile(&schema).map_err(|e| CliError::Io(format!("schema {} does not compile: {e}", kind.file_name())))?;
    let result = compiled.validate(value);
    if let Err(errors) = result {
        let diagnostics = errors.map(|e| format!("at '{}': {e}", e.instance_path)).collect();
        return Err(CliError::Spec { what: kind.describe().to_string(), diagnostics });
    }
    Ok(())
}
