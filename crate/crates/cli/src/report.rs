use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use schmidt_norms::cones::BlockPositivityVerdict;
use schmidt_norms::io::{MatrixFile, VectorFile};
use schmidt_norms::maps::{AttainingInput, MapNormEstimate};
use schmidt_norms::norms::{NormEstimate, Witness};
use schmidt_norms::{BipartiteOperator, PureState};

/// One JSON document per invocation.
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    parameters: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), inputs: Map::new(), parameters: Map::new() }
    }

    pub fn input(&mut self, role: &str, path: &Path, bytes: &[u8]) {
        let digest = hex::encode(Sha256::digest(bytes));
        self.inputs.insert(role.into(), json!({ "path": path.display().to_string(), "sha256": digest }));
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.into(), value.into());
    }

    pub fn render(self, result: Value, runtime_ms: u128) -> String {
        let doc = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "inputs": self.inputs,
            "parameters": self.parameters,
            "result": result,
            "runtime_ms": runtime_ms as u64,
        });
        serde_json::to_string_pretty(&doc).expect("plain data")
    }
}

pub fn state_json(v: &PureState) -> Value {
    serde_json::to_value(VectorFile::from_state(v)).expect("plain data")
}

pub fn operator_json(x: &BipartiteOperator) -> Value {
    serde_json::to_value(MatrixFile::from_operator(x)).expect("plain data")
}

pub fn norm_json(e: &NormEstimate) -> Value {
    let witness = match &e.witness {
        Some(Witness::Pair { left, right }) => json!({ "left": state_json(left), "right": state_json(right) }),
        Some(Witness::Vector(v)) => json!({ "vector": state_json(v) }),
        None => Value::Null,
    };
    json!({
        "value": e.value,
        "direction": e.direction,
        "witness": witness,
        "restarts_used": e.restarts_used,
        "iterations": e.iterations,
        "converged": e.converged,
    })
}

pub fn verdict_json(v: &BlockPositivityVerdict) -> Value {
    json!({
        "k": v.k,
        "status": v.status,
        "min_value": v.min_value,
        "witness": v.witness.as_ref().map(state_json),
        "restarts_used": v.restarts_used,
        "iterations": v.iterations,
    })
}

pub fn map_norm_json(e: &MapNormEstimate) -> Value {
    let input = match &e.attaining_input {
        Some(AttainingInput::Matrix(x)) => json!({ "matrix": MatrixFile::from_matrix(x) }),
        Some(AttainingInput::Vector(u)) => json!({ "vector": VectorFile::from_vector(u) }),
        None => Value::Null,
    };
    json!({
        "value": e.value,
        "direction": e.direction,
        "k": e.k,
        "attaining_input": input,
        "restarts_used": e.restarts_used,
        "iterations": e.iterations,
        "converged": e.converged,
    })
}
