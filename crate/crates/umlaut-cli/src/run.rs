//! Dispatch from parsed arguments to the library, and result encoding.

use std::fs;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;
use umlaut::channel_umlaut::{channel_renyi_umlaut_with, channel_umlaut_with, sphere_packing_with};
use umlaut::exponents::{list_zero_rate_with, unassisted_zero_rate_with};
use umlaut::figure::{default_grid, lu_sweep, write_sweep_csv};
use umlaut::{
    dnn_bound, gaussian_channel_umlaut, gaussian_umlaut, lautum_mutual, list_gap_bound, ns_error_lp, ns_sandwich,
    renyi_umlaut_info, stein_sandwich, umlaut_info, Channel, ExtReal, GaussianChannelSpec, GaussianJoint, GapBound,
    JointDist, SolverOptions,
};

use crate::args::{ChannelSource, Cli, Command, Family, Format, Units};

/// What the process prints and how it exits.
pub struct Outcome {
    pub body: Option<String>,
    pub message: Option<String>,
    pub code: u8,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Solver(#[from] umlaut::Error),
}

enum Payload {
    Json(Value),
    Csv(String),
}

/// Joint-distribution summary emitted by `dist-umlaut`.
#[derive(Debug, Serialize, Deserialize)]
pub struct DistReport {
    pub umlaut: umlaut::UmlautResult,
    pub lautum: ExtReal,
    pub mutual: f64,
}

/// `exponent-list` output: the exponent and the quantitative gap bound.
#[derive(Debug, Serialize, Deserialize)]
pub struct ListReport {
    pub exponent: umlaut::CertifiedValue,
    pub gap_bound: Option<GapBound>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SandwichReport {
    #[serde(rename = "M")]
    pub messages: u64,
    pub n: u64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GaussianChannelReport {
    pub value: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FiniteSource {
    Joint(JointDist),
    Channel(Channel),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GaussianSource {
    Joint(GaussianJoint),
    Channel(GaussianChannelSpec),
}

pub fn execute(cli: &Cli) -> Outcome {
    let name = cli.command.name();
    let units = match cli.common.units {
        Units::Nats => "nats",
        Units::Bits => "bits",
    };
    let scale = match cli.common.units {
        Units::Nats => umlaut::Units::Nats.scale(),
        Units::Bits => umlaut::Units::Bits.scale(),
    };
    let envelope = |result: Value, status: Option<&str>| {
        let mut body = json!({ "command": name, "units": units, "result": result });
        if let Some(status) = status {
            body["status"] = json!(status);
        }
        let mut text = serde_json::to_string_pretty(&body).expect("JSON values always serialize");
        text.push('\n');
        text
    };
    match dispatch(cli, scale) {
        Ok((Payload::Json(result), infinite)) => Outcome {
            body: Some(envelope(result, infinite.then_some("infinite"))),
            message: None,
            code: if infinite { 4 } else { 0 },
        },
        Ok((Payload::Csv(text), _)) => Outcome {
            body: Some(text),
            message: None,
            code: 0,
        },
        Err(Failure::Solver(umlaut::Error::NoConvergence { lower, upper })) => Outcome {
            body: Some(envelope(
                json!({ "lower": lower * scale, "upper": upper * scale }),
                Some("no-convergence"),
            )),
            message: Some(format!("solver did not converge; sandwich [{lower}, {upper}] nats")),
            code: 3,
        },
        Err(Failure::Solver(umlaut::Error::Infinite)) => Outcome {
            body: Some(envelope(json!({ "value": "inf" }), Some("infinite"))),
            message: None,
            code: 4,
        },
        Err(Failure::Input(message)) => Outcome {
            body: None,
            message: Some(message),
            code: 2,
        },
        Err(Failure::Solver(e)) => Outcome {
            body: None,
            message: Some(e.to_string()),
            code: if is_input_error(&e) { 2 } else { 1 },
        },
    }
}

fn is_input_error(e: &umlaut::Error) -> bool {
    use umlaut::Error::*;
    matches!(
        e,
        EmptyAlphabet
            | DuplicateSymbol(_)
            | NegativeWeight { .. }
            | NonFinite(_)
            | NotNormalized { .. }
            | LengthMismatch { .. }
            | AlphabetMismatch(_)
            | ShapeMismatch { .. }
            | BadAlpha(_)
            | InvalidParameter(_)
            | SingularCovariance
            | RankDeficient { .. }
    )
}

fn read_input<T: for<'de> Deserialize<'de>>(cli: &Cli) -> Result<T, Failure> {
    let path = cli
        .common
        .input
        .as_ref()
        .ok_or_else(|| Failure::Input(format!("{} requires --input", cli.command.name())))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn finite_source(cli: &Cli, source: &ChannelSource) -> Result<FiniteSource, Failure> {
    match (source.family, source.q) {
        (Some(family), Some(q)) => {
            if cli.common.input.is_some() {
                return Err(Failure::Input("give either --input or --family, not both".into()));
            }
            let channel = match family {
                Family::Bsc => Channel::bsc(q)?,
                Family::Bec => Channel::bec(q)?,
            };
            Ok(FiniteSource::Channel(channel))
        }
        _ => read_input(cli),
    }
}

fn channel(cli: &Cli, source: &ChannelSource) -> Result<Channel, Failure> {
    match finite_source(cli, source)? {
        FiniteSource::Channel(c) => Ok(c),
        FiniteSource::Joint(_) => Err(Failure::Input("expected a channel, found a joint distribution".into())),
    }
}

fn joint(cli: &Cli) -> Result<JointDist, Failure> {
    match read_input::<FiniteSource>(cli)? {
        FiniteSource::Joint(j) => Ok(j),
        FiniteSource::Channel(_) => Err(Failure::Input("expected a joint distribution, found a channel".into())),
    }
}

/// Multiplies the numeric fields named by `paths` by `factor`. A path
/// segment naming an array applies the rest of the path to every element.
fn scale_fields(value: &mut Value, paths: &[&str], factor: f64) {
    for path in paths {
        scale_path(value, &path.split('/').collect::<Vec<_>>(), factor);
    }
}

fn scale_path(value: &mut Value, path: &[&str], factor: f64) {
    let Some((head, rest)) = path.split_first() else {
        if let Some(v) = value.as_f64() {
            *value = json!(v * factor);
        }
        return;
    };
    match value.get_mut(*head) {
        Some(Value::Array(items)) if !rest.is_empty() => {
            for item in items {
                scale_path(item, rest, factor);
            }
        }
        Some(inner) => scale_path(inner, rest, factor),
        None => {}
    }
}

const CERTIFIED: [&str; 4] = ["lower", "upper", "value", "gap"];

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library results always serialize")
}

fn dispatch(cli: &Cli, scale: f64) -> Result<(Payload, bool), Failure> {
    let options = SolverOptions {
        tol: cli.common.tol,
        seed: cli.common.seed,
        ..SolverOptions::default()
    };
    let format = cli.common.format;
    if format == Some(Format::Csv) && !matches!(cli.command, Command::SteinSim { .. } | Command::FigureLuSweep { .. }) {
        return Err(Failure::Input(format!("{} has no csv output", cli.command.name())));
    }
    let json = |mut value: Value, paths: &[&str]| {
        scale_fields(&mut value, paths, scale);
        Ok((Payload::Json(value), false))
    };
    match &cli.command {
        Command::DistUmlaut => {
            let j = joint(cli)?;
            let (lautum, mutual) = lautum_mutual(&j);
            let report = DistReport {
                umlaut: umlaut_info(&j),
                lautum,
                mutual,
            };
            let infinite = report.umlaut.value.is_infinite();
            let mut value = to_json(&report);
            scale_fields(&mut value, &["umlaut/value", "lautum", "mutual"], scale);
            Ok((Payload::Json(value), infinite))
        }
        Command::ChannelUmlaut(source) => {
            let c = channel_umlaut_with(&channel(cli, source)?, &options)?;
            json(to_json(&c), &CERTIFIED)
        }
        Command::Renyi { source, alpha } => match finite_source(cli, source)? {
            FiniteSource::Joint(j) => {
                let r = renyi_umlaut_info(*alpha, &j)?;
                let infinite = r.value.is_infinite();
                let mut value = to_json(&r);
                scale_fields(&mut value, &["value"], scale);
                Ok((Payload::Json(value), infinite))
            }
            FiniteSource::Channel(w) => {
                let c = channel_renyi_umlaut_with(*alpha, &w, &options)?;
                json(to_json(&c), &CERTIFIED)
            }
        },
        Command::SpherePacking { source, r } => {
            let value = sphere_packing_with(*r, &channel(cli, source)?, &options)?;
            json(json!({ "r": r, "value": value }), &["value"])
        }
        Command::ExponentUnassisted(source) => {
            let c = unassisted_zero_rate_with(&channel(cli, source)?, &options)?;
            json(to_json(&c), &CERTIFIED)
        }
        Command::ExponentList { source, list_size } => {
            let w = channel(cli, source)?;
            let list_size = *list_size as usize;
            let exponent = list_zero_rate_with(list_size, &w, &options)?;
            let gap_bound = match channel_umlaut_with(&w, &options) {
                Ok(c) => Some(list_gap_bound(list_size, &w, &c.argmax_p)?),
                Err(umlaut::Error::Infinite) => None,
                Err(e) => return Err(e.into()),
            };
            let report = ListReport { exponent, gap_bound };
            json(
                to_json(&report),
                &["exponent/lower", "exponent/upper", "exponent/value", "exponent/gap", "gap_bound/bound"],
            )
        }
        Command::NsError { source, messages, n } => {
            let w = channel(cli, source)?.power(*n as usize)?;
            let r = ns_error_lp(*messages as usize, &w)?;
            json(to_json(&r), &[])
        }
        Command::NsSandwich {
            source,
            messages,
            n,
            alpha_lo,
            alpha_hi,
        } => {
            let w = channel(cli, source)?;
            let (lower, upper) = ns_sandwich(*messages as usize, *n as usize, &w, *alpha_lo, *alpha_hi)?;
            let report = SandwichReport {
                messages: *messages,
                n: *n,
                alpha_lo: *alpha_lo,
                alpha_hi: *alpha_hi,
                lower,
                upper,
            };
            json(to_json(&report), &["lower", "upper"])
        }
        Command::DnnBound(source) => {
            let value = dnn_bound(&channel(cli, source)?, cli.common.tol)?;
            json(json!({ "value": value }), &["value"])
        }
        Command::Gaussian => match read_input::<GaussianSource>(cli)? {
            GaussianSource::Joint(j) => json(to_json(&gaussian_umlaut(&j)?), &["value"]),
            GaussianSource::Channel(spec) => {
                let report = GaussianChannelReport {
                    value: gaussian_channel_umlaut(&spec)?,
                };
                json(to_json(&report), &["value"])
            }
        },
        Command::SteinSim { n_max, eps, alpha } => {
            let report = stein_sandwich(&joint(cli)?, *n_max as usize, *eps, *alpha)?;
            if format == Some(Format::Csv) {
                let mut buffer = Vec::new();
                report.write_csv(&mut buffer, scale)?;
                return Ok((Payload::Csv(String::from_utf8(buffer).expect("csv output is UTF-8")), false));
            }
            json(to_json(&report), &["target", "rows/lower", "rows/upper"])
        }
        Command::FigureLuSweep { q } => {
            let grid = if q.is_empty() { default_grid() } else { q.clone() };
            let rows = lu_sweep(&grid, cli.common.tol)?;
            if format == Some(Format::Json) {
                return json(
                    json!({ "rows": rows }),
                    &["rows/umlaut", "rows/lautum", "rows/lautum_regularized"],
                );
            }
            let mut buffer = Vec::new();
            write_sweep_csv(&rows, &mut buffer, scale)?;
            Ok((Payload::Csv(String::from_utf8(buffer).expect("csv output is UTF-8")), false))
        }
    }
}
