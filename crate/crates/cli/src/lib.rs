//! Command dispatch for the `maxsep` binary.
//!
//! Every command produces one JSON document. Numbers inside documents are
//! canonical rational strings or surd objects, and object keys are sorted,
//! so identical configurations give byte-identical output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use maxsep_core::arith::rational;
use maxsep_core::document::{parse_closed_set, parse_points, parse_space_spec, SpaceDoc};
use maxsep_core::fixtures::{check_fixture_identities, extract_choice, Fixture, IdentityBounds};
use maxsep_core::greedy::check_trace;
use maxsep_core::oracle::{cross_check, enumerate_maximal_sets, random_finite_metric, random_finite_pseudometric};
use maxsep_core::separation::describe_certificate;
use maxsep_core::{
    build_maximal_strict, choose_in_closed, extend_nonstrict, extend_via_excision, is_maximal_on_horizon,
    Certificate, ExtendBudgets, Mode, Point, Rational, SeparatedSet, Space,
};
use serde_json::{json, Value};

/// Horizon used for spaces without a finite dense enumeration when none is given.
pub const DEFAULT_HORIZON: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] maxsep_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{what}: invalid JSON: {source}")]
    Json {
        what: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    BuildStrict,
    ExtendExcision,
    ExtendNonstrict,
    ChooseClosed,
    Oracle,
    FixtureCheck,
    ExtractChoice,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::BuildStrict,
        Command::ExtendExcision,
        Command::ExtendNonstrict,
        Command::ChooseClosed,
        Command::Oracle,
        Command::FixtureCheck,
        Command::ExtractChoice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::BuildStrict => "build-strict",
            Command::ExtendExcision => "extend-excision",
            Command::ExtendNonstrict => "extend-nonstrict",
            Command::ChooseClosed => "choose-closed",
            Command::Oracle => "oracle",
            Command::FixtureCheck => "fixture-check",
            Command::ExtractChoice => "extract-choice",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command {s:?}")))
    }
}

/// A fully parsed invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub space: Value,
    pub delta: Rational,
    pub mode: Mode,
    /// Defaults to the whole enumeration of a finite space, else [`DEFAULT_HORIZON`].
    pub horizon: Option<usize>,
    /// Defaults to the horizon.
    pub max_size: Option<usize>,
    pub steps: usize,
    pub seed: Option<Value>,
    pub closed: Option<Value>,
    pub rng_seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, space: Value) -> Self {
        RunConfig {
            command,
            space,
            delta: rational::int(1),
            mode: Mode::Strict,
            horizon: None,
            max_size: None,
            steps: 8,
            seed: None,
            closed: None,
            rng_seed: None,
            out: None,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.delta <= rational::int(0) {
            return Err(CliError::Usage(format!(
                "delta must be positive, got {}",
                rational::format(&self.delta)
            )));
        }
        if self.horizon == Some(0) {
            return Err(CliError::Usage("horizon must be at least 1".into()));
        }
        if self.max_size == Some(0) {
            return Err(CliError::Usage("max-size must be at least 1".into()));
        }
        if self.steps == 0 {
            return Err(CliError::Usage("steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a run: the document to emit and whether every certificate held.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub document: Value,
    pub certified: bool,
}

impl Outcome {
    /// 0 when every certificate holds, 2 otherwise. Errors map to 1.
    pub fn exit_code(&self) -> i32 {
        if self.certified {
            0
        } else {
            2
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// Reads a JSON argument: inline JSON if it starts with `{` or `[`, a file path otherwise.
pub fn load_json(arg: &str, what: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|source| CliError::Io {
            path: PathBuf::from(arg),
            source,
        })?
    };
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        what: what.to_string(),
        source,
    })
}

pub fn write_output(path: &Path, outcome: &Outcome) -> Result<(), CliError> {
    std::fs::write(path, outcome.render()).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let doc = space_doc(config)?;
    let space = doc.space();
    let horizon = config
        .horizon
        .unwrap_or_else(|| space.dense_len().unwrap_or(DEFAULT_HORIZON).max(1));
    let ctx = Context {
        config,
        doc: &doc,
        space: space.as_ref(),
        horizon,
    };
    let mut outcome = match config.command {
        Command::BuildStrict => ctx.build_strict(),
        Command::ExtendExcision => ctx.extend_excision(),
        Command::ExtendNonstrict => ctx.extend_nonstrict(),
        Command::ChooseClosed => ctx.choose_closed(),
        Command::Oracle => ctx.oracle(),
        Command::FixtureCheck => ctx.fixture_check(),
        Command::ExtractChoice => ctx.extract_choice(),
    }?;
    if let Value::Object(map) = &mut outcome.document {
        map.insert("command".into(), json!(config.command.name()));
        if let Some(seed) = config.rng_seed {
            map.insert("rng_seed".into(), json!(seed));
        }
        map.insert("status".into(), json!(if outcome.certified { "ok" } else { "fail" }));
    }
    Ok(outcome)
}

/// `{"type": "random", "n": N, "pseudometric": bool}` draws a finite space
/// from `--rng-seed`; everything else goes through the core parser.
fn space_doc(config: &RunConfig) -> Result<SpaceDoc, CliError> {
    if config.space.get("type").and_then(Value::as_str) != Some("random") {
        return Ok(parse_space_spec(&config.space)?);
    }
    let n = config
        .space
        .get("n")
        .and_then(Value::as_u64)
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage("random space needs a positive integer \"n\"".into()))? as usize;
    let seed = config
        .rng_seed
        .ok_or_else(|| CliError::Usage("random space needs --rng-seed".into()))?;
    let pseudo = config.space.get("pseudometric").and_then(Value::as_bool).unwrap_or(false);
    let space = if pseudo {
        random_finite_pseudometric(n, seed)
    } else {
        random_finite_metric(n, seed)
    };
    Ok(SpaceDoc::Finite(Arc::new(space)))
}

struct Context<'a> {
    config: &'a RunConfig,
    doc: &'a SpaceDoc,
    space: &'a dyn Space,
    horizon: usize,
}

impl Context<'_> {
    fn points_json(&self, points: &[Point]) -> Value {
        Value::Array(points.iter().map(|p| self.space.point_to_json(p)).collect())
    }

    fn seed(&self, mode: Mode) -> Result<SeparatedSet, CliError> {
        let points = match &self.config.seed {
            Some(v) => parse_points(self.space, v)?,
            None => Vec::new(),
        };
        Ok(SeparatedSet::new(points, self.config.delta.clone(), mode))
    }

    fn fixture(&self) -> Result<&Fixture, CliError> {
        match self.doc {
            SpaceDoc::Fixture(f) => Ok(f),
            _ => Err(CliError::Usage(format!(
                "{} needs a fixture space (pse, pn, dyadic or circle)",
                self.config.command
            ))),
        }
    }

    fn set_document(&self, set: &SeparatedSet, cert: &Certificate) -> Value {
        json!({
            "delta": rational::format(&set.delta),
            "mode": set.mode.to_string(),
            "points": self.points_json(&set.points),
            "certificate": describe_certificate(self.space, cert),
        })
    }

    fn build_strict(&self) -> Result<Outcome, CliError> {
        let max_size = self.config.max_size.unwrap_or(self.horizon);
        let (set, trace, cert) = build_maximal_strict(self.space, &self.config.delta, self.horizon, max_size)?;
        let trace_check = check_trace(self.space, &trace, &self.config.delta);
        let mut document = self.set_document(&set, &cert);
        document["trace"] = json!(trace.pairs);
        document["trace_ok"] = json!(trace_check.is_ok());
        if let Err(v) = &trace_check {
            document["trace_violation"] = json!(format!("{v:?}"));
        }
        Ok(Outcome {
            document,
            certified: cert.ok() && trace_check.is_ok(),
        })
    }

    fn extend_excision(&self) -> Result<Outcome, CliError> {
        let seed = self.seed(Mode::Strict)?;
        let (set, cert) = extend_via_excision(self.doc.space(), &seed, self.horizon)?;
        let mut document = self.set_document(&set, &cert);
        document["seed"] = self.points_json(&seed.points);
        Ok(Outcome {
            document,
            certified: cert.ok(),
        })
    }

    fn extend_nonstrict(&self) -> Result<Outcome, CliError> {
        let seed = self.seed(Mode::Nonstrict)?;
        let budgets = ExtendBudgets {
            enum_limit: self.horizon,
            steps: self.config.steps,
        };
        let (set, cert) = extend_nonstrict(self.doc.space(), &seed, budgets)?;
        let mut document = self.set_document(&set, &cert);
        document["seed"] = self.points_json(&seed.points);
        Ok(Outcome {
            document,
            // A heuristic certificate is reported, not trusted.
            certified: cert.ok() && !cert.heuristic,
        })
    }

    fn choose_closed(&self) -> Result<Outcome, CliError> {
        let closed_doc = self
            .config
            .closed
            .as_ref()
            .ok_or_else(|| CliError::Usage("choose-closed needs --closed".into()))?;
        let closed = parse_closed_set(self.doc, closed_doc)?;
        let choice = choose_in_closed(self.space, closed.as_ref(), self.config.steps, self.horizon.max(1 << 16))?;
        // dist(x_{n_{k+1}}, x_{n_k}) < 2^-k for every consecutive pair.
        let contraction_ok = choice.points.windows(2).enumerate().all(|(i, w)| {
            let k = i as u32 + 1;
            self.space.dist(&w[1], &w[0]).lt(&rational::inv_pow2(k))
        });
        let document = json!({
            "indices": choice.indices,
            "points": self.points_json(&choice.points),
            "point": self.space.point_to_json(choice.point()),
            "gap": rational::format(&choice.gap),
            "member": closed.contains(choice.point()),
            "contraction_ok": contraction_ok,
        });
        Ok(Outcome {
            document,
            certified: contraction_ok,
        })
    }

    fn oracle(&self) -> Result<Outcome, CliError> {
        let mode = self.config.mode;
        if let SpaceDoc::Finite(finite) = self.doc {
            let catalogue = enumerate_maximal_sets(finite, &self.config.delta, mode)?;
            let labels: Vec<Vec<&str>> = catalogue
                .iter()
                .map(|set| set.iter().map(|&i| finite.labels()[i].as_str()).collect())
                .collect();
            let mut document = json!({
                "delta": rational::format(&self.config.delta),
                "mode": mode.to_string(),
                "catalogue": labels,
            });
            let mut certified = true;
            if self.config.seed.is_some() {
                let set = self.seed(mode)?;
                let report = cross_check(finite, &self.config.delta, mode, &set)?;
                certified = report.ok();
                document["points"] = self.points_json(&set.points);
                document["cross_check"] = json!({
                    "member": report.member,
                    "catalogue_size": report.catalogue_size,
                    "separation_failure": report.separation_failure.map(|v| format!("{v:?}")),
                    "addable": self.points_json(&report.addable),
                });
            }
            return Ok(Outcome { document, certified });
        }
        // Infinite spaces: certify a given set against the horizon.
        if self.config.seed.is_none() {
            return Err(CliError::Usage(
                "oracle on a non-finite space needs --seed with the set to certify".into(),
            ));
        }
        let set = self.seed(mode)?;
        let cert = is_maximal_on_horizon(self.space, &set, self.horizon);
        Ok(Outcome {
            document: self.set_document(&set, &cert),
            certified: cert.ok(),
        })
    }

    fn fixture_check(&self) -> Result<Outcome, CliError> {
        let fixture = self.fixture()?;
        let bounds = IdentityBounds {
            resolution: fixture.params.resolution,
            ..IdentityBounds::default()
        };
        let report = check_fixture_identities(fixture, &bounds);
        let failures: Vec<&str> = report.failures().map(|r| r.identity.as_str()).collect();
        let document = json!({
            "fixture": fixture.kind.to_string(),
            "identities": report,
            "failures": failures,
        });
        Ok(Outcome {
            document,
            certified: report.all_pass(),
        })
    }

    fn extract_choice(&self) -> Result<Outcome, CliError> {
        let fixture = self.fixture()?;
        let (set, cert) = match &self.config.seed {
            // A given S′ is certified, not extended.
            Some(_) => {
                let set = self.seed(fixture.kind.mode())?;
                let cert = is_maximal_on_horizon(self.space, &set, self.horizon);
                (set, cert)
            }
            None => fixture.extend()?,
        };
        let mut document = self.set_document(&set, &cert);
        let certified = match extract_choice(fixture, &set.points) {
            Ok(choice) => {
                let map: serde_json::Map<String, Value> =
                    choice.into_iter().map(|(n, l)| (n.to_string(), json!(l))).collect();
                document["choice"] = Value::Object(map);
                cert.ok()
            }
            Err(maxsep_core::Error::Extraction { n }) => {
                document["choice"] = Value::Null;
                document["extraction_failure"] = json!({ "n": n });
                false
            }
            Err(e) => return Err(e.into()),
        };
        Ok(Outcome { document, certified })
    }
}
