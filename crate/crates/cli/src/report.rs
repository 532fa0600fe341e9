use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

/// Envelope shared by every subcommand's JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    /// Which stage produced the negative outcome.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
}

impl Report {
    pub fn ok(command: &str, inputs: Value, result: Value) -> Self {
        Report {
            command: command.into(),
            inputs,
            result,
            status: Status::Ok,
            stage: None,
        }
    }

    pub fn fail(command: &str, inputs: Value, result: Value, stage: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            inputs,
            result,
            status: Status::Fail,
            stage: Some(stage.into()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Fail => 1,
        }
    }
}

/// Published schemas, one per subcommand, for `--help-schema`.
pub fn schemas() -> Value {
    let envelope = |result: Value| {
        serde_json::json!({
            "type": "object",
            "required": ["command", "inputs", "result", "status"],
            "properties": {
                "command": {"type": "string"},
                "inputs": {"type": "object"},
                "result": result,
                "status": {"enum": ["ok", "fail"]},
                "stage": {"type": "string"}
            }
        })
    };
    let string = serde_json::json!({"type": "string"});
    serde_json::json!({
        "conditions": envelope(serde_json::json!({
            "type": "object",
            "required": ["degree", "conditions"],
            "properties": {
                "degree": {"type": "integer"},
                "conditions": {"type": "array", "items": {
                    "type": "object",
                    "required": ["n", "k", "jet_poly"],
                    "properties": {"n": {"type": "integer"}, "k": {"type": "integer"}, "jet_poly": string}
                }}
            }
        })),
        "classify": envelope(serde_json::json!({
            "type": "object",
            "required": ["phi", "alpha", "alpha_degree", "beta_present", "pullback_a5", "member", "reason", "nonintegrability_note"],
            "properties": {
                "phi": string, "alpha": string, "alpha_degree": {"type": ["integer", "null"]},
                "beta_present": {"type": "boolean"}, "pullback_a5": string,
                "member": {"type": "boolean"}, "reason": string, "nonintegrability_note": string
            }
        })),
        "derive-odes": envelope(serde_json::json!({
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["text", "var", "terms"],
                "properties": {"text": string, "var": string, "terms": {"type": "object"}}
            }
        })),
        "kernel": envelope(serde_json::json!({
            "type": "object",
            "required": ["case", "source", "var", "denominator", "exponent", "extra_pole", "dimension", "basis", "wronskian", "numerator_wronskian", "degeneration"],
            "properties": {
                "case": string, "source": string, "var": string, "denominator": string,
                "exponent": {"type": "integer"}, "extra_pole": {"type": "integer"},
                "dimension": {"type": "integer"}, "basis": {"type": "array", "items": string},
                "wronskian": string, "numerator_wronskian": string,
                "degeneration": {"type": "array", "items": string}
            }
        })),
        "verify-quartic": envelope(serde_json::json!({
            "type": "object",
            "required": ["branches", "conclusion", "theorem_form", "nonintegrability_note"],
            "properties": {
                "branches": {"type": "array", "items": {
                    "type": "object",
                    "required": ["name", "q_degree", "num_equations", "trials", "verdict"],
                    "properties": {
                        "name": string, "q_degree": {"type": "integer"}, "num_equations": {"type": "integer"},
                        "trials": {"type": "array", "items": {
                            "type": "object", "required": ["params", "verdict"],
                            "properties": {"params": {"type": "object"}, "verdict": string}
                        }},
                        "verdict": string
                    }
                }},
                "conclusion": string, "theorem_form": string, "nonintegrability_note": string
            }
        })),
        "simulate": envelope(serde_json::json!({
            "type": "object",
            "required": ["samples", "energy_drift", "max_off_plane", "diverged"],
            "properties": {
                "samples": {"type": "integer"}, "energy_drift": {"type": "number"},
                "max_off_plane": {"type": "number"}, "diverged": {"type": "boolean"},
                "csv": string, "degree_test": {"type": "object"}
            }
        })),
        "degree-test": envelope(serde_json::json!({
            "type": "object",
            "required": ["degree", "pass", "eta", "residual", "stride", "samples"],
            "properties": {
                "degree": {"type": "integer"}, "pass": {"type": "boolean"}, "eta": {"type": "number"},
                "residual": {"type": "number"}, "stride": {"type": "integer"}, "samples": {"type": "integer"}
            }
        })),
        "csv": {"header": "t,x1,y1,x2,y2,H"}
    })
}
