//! JSON instance files for the `diamond` binary, and conversions between
//! the scalar and MIMO network representations.
//!
//! Two shapes are accepted, distinguished by their keys. Complex numbers
//! are always `[re, im]` pairs.
//!
//! Scalar (one entry per relay):
//!
//! ```json
//! { "snr": 10.0,
//!   "h_bc": [[0.9, 0.3], [-0.4, 1.1]],
//!   "h_mac": [[1.3, -0.2], [0.5, 0.6]] }
//! ```
//!
//! MIMO (`H_bc` is the nᵢ × n_s source→relay matrix and `H_mac` the
//! n_d × nᵢ relay→destination matrix, both flattened row-major):
//!
//! ```json
//! { "snr": 10.0, "n_s": 2, "n_d": 2,
//!   "relays": [
//!     { "n_i": 1,
//!       "H_bc": [[0.8, -0.3], [0.5, 0.4]],
//!       "H_mac": [[0.7, 0.2], [-0.5, 0.6]] } ] }
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mimo::MimoDiamond;
use crate::scalar::ScalarDiamond;
use crate::{Error, Result};

/// A parsed instance file: either network flavor.
#[derive(Debug, Clone)]
pub enum Instance {
    /// Single-antenna network.
    Scalar(ScalarDiamond),
    /// Multi-antenna network.
    Mimo(MimoDiamond),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarInstanceJson {
    snr: f64,
    h_bc: Vec<[f64; 2]>,
    h_mac: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MimoRelayJson {
    n_i: usize,
    #[serde(rename = "H_bc")]
    h_bc: Vec<[f64; 2]>,
    #[serde(rename = "H_mac")]
    h_mac: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MimoInstanceJson {
    snr: f64,
    n_s: usize,
    n_d: usize,
    relays: Vec<MimoRelayJson>,
}

fn parse_err(origin: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_string(),
        message: message.into(),
    }
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

fn to_pairs(values: impl Iterator<Item = Complex64>) -> Vec<[f64; 2]> {
    values.map(|z| [z.re, z.im]).collect()
}

/// Parse an instance from JSON text. `origin` names the source (a file
/// path, or something like `"<stdin>"`) in error messages.
///
/// The MIMO form is recognized by its `relays` key, the scalar form by
/// `h_bc`; syntax errors carry serde's line/column, and shape or validity
/// problems name the offending field.
pub fn parse_instance(text: &str, origin: &str) -> Result<Instance> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_err(origin, e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| parse_err(origin, "expected a JSON object at the top level"))?;

    if object.contains_key("relays") {
        let raw: MimoInstanceJson =
            serde_json::from_str(text).map_err(|e| parse_err(origin, e.to_string()))?;
        let mut h_bc = Vec::with_capacity(raw.relays.len());
        let mut h_mac = Vec::with_capacity(raw.relays.len());
        for (i, relay) in raw.relays.iter().enumerate() {
            let want_bc = relay.n_i * raw.n_s;
            if relay.h_bc.len() != want_bc {
                return Err(parse_err(
                    origin,
                    format!(
                        "relays[{i}].H_bc has {} entries, expected n_i×n_s = {want_bc}",
                        relay.h_bc.len()
                    ),
                ));
            }
            let want_mac = raw.n_d * relay.n_i;
            if relay.h_mac.len() != want_mac {
                return Err(parse_err(
                    origin,
                    format!(
                        "relays[{i}].H_mac has {} entries, expected n_d×n_i = {want_mac}",
                        relay.h_mac.len()
                    ),
                ));
            }
            if relay.n_i == 0 || raw.n_s == 0 {
                return Err(parse_err(
                    origin,
                    format!("relays[{i}]: antenna counts must be positive"),
                ));
            }
            h_bc.push(DMatrix::from_row_slice(
                relay.n_i,
                raw.n_s,
                &to_complex(&relay.h_bc),
            ));
            h_mac.push(DMatrix::from_row_slice(
                raw.n_d.max(1),
                relay.n_i,
                &to_complex(&relay.h_mac),
            ));
        }
        let net = MimoDiamond::new(raw.n_s, raw.n_d, h_bc, h_mac, raw.snr)
            .map_err(|e| parse_err(origin, e.to_string()))?;
        Ok(Instance::Mimo(net))
    } else if object.contains_key("h_bc") {
        let raw: ScalarInstanceJson =
            serde_json::from_str(text).map_err(|e| parse_err(origin, e.to_string()))?;
        let net = ScalarDiamond::new(to_complex(&raw.h_bc), to_complex(&raw.h_mac), raw.snr)
            .map_err(|e| parse_err(origin, e.to_string()))?;
        Ok(Instance::Scalar(net))
    } else {
        Err(parse_err(
            origin,
            "unrecognized instance: expected a scalar form (with \"h_bc\"/\"h_mac\") or a MIMO \
             form (with \"relays\")",
        ))
    }
}

/// Read and parse an instance file.
pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text, &path.display().to_string())
}

/// Serialize a scalar network in the instance-file format (compact JSON) —
/// used both for exports and for embedding an offending instance in error
/// reports, so dumped cases can be replayed through `bounds` directly.
pub fn scalar_to_json(net: &ScalarDiamond) -> String {
    let raw = ScalarInstanceJson {
        snr: net.snr(),
        h_bc: to_pairs(net.h_bc().iter().copied()),
        h_mac: to_pairs(net.h_mac().iter().copied()),
    };
    serde_json::to_string(&raw).expect("instance serialization cannot fail")
}

/// Serialize a MIMO network in the instance-file format (compact JSON).
pub fn mimo_to_json(net: &MimoDiamond) -> String {
    let relays = net
        .h_bc()
        .iter()
        .zip(net.h_mac())
        .zip(net.antennas())
        .map(|((bc, mac), &n_i)| MimoRelayJson {
            n_i,
            // DMatrix stores column-major; emit row-major per the format.
            h_bc: to_pairs(bc.transpose().iter().copied()),
            h_mac: to_pairs(mac.transpose().iter().copied()),
        })
        .collect();
    let raw = MimoInstanceJson {
        snr: net.snr(),
        n_s: net.n_s(),
        n_d: net.n_d(),
        relays,
    };
    serde_json::to_string(&raw).expect("instance serialization cannot fail")
}

/// Lift a scalar network to the equivalent MIMO network in which every node
/// has one antenna.
pub fn scalar_to_mimo(net: &ScalarDiamond) -> MimoDiamond {
    let h_bc = net
        .h_bc()
        .iter()
        .map(|&z| DMatrix::from_element(1, 1, z))
        .collect();
    let h_mac = net
        .h_mac()
        .iter()
        .map(|&z| DMatrix::from_element(1, 1, z))
        .collect();
    MimoDiamond::new(1, 1, h_bc, h_mac, net.snr())
        .expect("the 1×1 lift of a valid scalar network is valid")
}

/// Project an all-single-antenna MIMO network down to its scalar form.
/// Fails unless the source, the destination, and every relay have exactly
/// one antenna.
pub fn mimo_to_scalar(net: &MimoDiamond) -> Result<ScalarDiamond> {
    if net.n_s() != 1 || net.n_d() != 1 || net.antennas().iter().any(|&a| a != 1) {
        return Err(Error::InvalidInput(
            "scalar projection is only defined when the source, the destination, and every \
             relay have exactly one antenna"
                .into(),
        ));
    }
    let h_bc = net.h_bc().iter().map(|m| m[(0, 0)]).collect();
    let h_mac = net.h_mac().iter().map(|m| m[(0, 0)]).collect();
    ScalarDiamond::new(h_bc, h_mac, net.snr())
}
