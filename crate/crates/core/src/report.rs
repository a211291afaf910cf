//! Job files and classification reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::IntersectionCache;
use crate::filling::parse_class;
use crate::hyperbolic::{build_regular_rep, FuchsianRep};
use crate::orbit_models::{model_kind, singleton_check, strip_scene, FlowDescriptor, ModelKind, SingletonReport, StripModel, StripScene, SuspensionModel};
use crate::surgery::{batch_classify, check_preconditions, BatchReport, ClassifyError, PreconditionReport, SurgerySpec};
use crate::word::Word;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum JobError {
    #[error("job parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("job field {field}: {message}")]
    Field { field: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Surface {
    pub genus: usize,
}

fn default_epsilon() -> f64 {
    0.2
}

fn default_ladder() -> usize {
    crate::surgery::DEFAULT_LADDER_DEPTH
}

fn default_cover() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default)]
    pub radius: Option<usize>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_ladder")]
    pub ladder_depth: usize,
    #[serde(default)]
    pub emit_figures: bool,
    #[serde(default)]
    pub cache: Option<String>,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            radius: None,
            epsilon: default_epsilon(),
            ladder_depth: default_ladder(),
            emit_figures: false,
            cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub schema_version: u32,
    pub surface: Surface,
    pub curves: Vec<String>,
    pub coefficients: Vec<i64>,
    pub positivity: bool,
    #[serde(default = "default_cover")]
    pub cover_degree: usize,
    #[serde(default)]
    pub orbits: Vec<String>,
    #[serde(default)]
    pub options: JobOptions,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, JobError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let job: JobSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            JobError::Parse {
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })?;
        if job.schema_version != SCHEMA_VERSION {
            return Err(JobError::Field {
                field: "schema_version".into(),
                message: format!("unsupported version {}", job.schema_version),
            });
        }
        Ok(job)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serializes")
    }

    pub fn representation(&self) -> Result<FuchsianRep, JobError> {
        build_regular_rep(self.surface.genus).map_err(|e| JobError::Field {
            field: "surface.genus".into(),
            message: e.to_string(),
        })
    }

    /// Surgery data with parsed curves. Hypotheses are not checked here.
    pub fn surgery_spec(&self, rep: &FuchsianRep) -> Result<SurgerySpec, JobError> {
        let curves = self
            .curves
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_class(s, rep).map_err(|e| JobError::Field {
                    field: format!("curves[{i}]"),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SurgerySpec {
            rep: rep.clone(),
            curves,
            coefficients: self.coefficients.clone(),
            positivity: self.positivity,
            cover_degree: self.cover_degree,
            radius: self.options.radius,
            ladder_depth: self.options.ladder_depth,
        })
    }

    pub fn orbit_words(&self, rep: &FuchsianRep) -> Result<Vec<Word>, JobError> {
        self.orbits
            .iter()
            .enumerate()
            .map(|(i, s)| {
                rep.presentation().parse(s).map_err(|e| JobError::Field {
                    field: format!("orbits[{i}]"),
                    message: e.to_string(),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelArtifacts {
    pub flow: FlowDescriptor,
    pub model_kind: ModelKind,
    pub strip_scene: StripScene,
    pub suspension_check: SingletonReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunStatus {
    pub ok: bool,
    pub precondition_errors: usize,
    pub undecided: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub job: JobSpec,
    pub preconditions: PreconditionReport,
    pub orbits: Option<BatchReport>,
    pub models: ModelArtifacts,
    pub status: RunStatus,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Check the hypotheses, classify every orbit and attach the model
/// artifacts. Orbits are only classified when the hypotheses hold.
pub fn run_job(job: &JobSpec, cache: &IntersectionCache) -> Result<ReportDocument, JobError> {
    let rep = job.representation()?;
    let spec = job.surgery_spec(&rep)?;
    let betas = job.orbit_words(&rep)?;
    let strip = StripModel::new(job.options.epsilon).map_err(|e| JobError::Field {
        field: "options.epsilon".into(),
        message: e.to_string(),
    })?;
    let preconditions = check_preconditions(&spec, cache);
    let orbits = if preconditions.ok() {
        match batch_classify(&spec, &betas, cache) {
            Ok(b) => Some(b),
            Err(ClassifyError::Preconditions(_)) => None,
            Err(e) => {
                return Err(JobError::Field {
                    field: "orbits".into(),
                    message: e.to_string(),
                })
            }
        }
    } else {
        None
    };
    let sm = SuspensionModel::cat_map();
    let suspension_check = singleton_check(&sm, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], 20.0).expect("distinct orbits");
    let undecided = orbits.as_ref().map_or(0, |b| b.undecided.len());
    let status = RunStatus {
        ok: preconditions.ok() && undecided == 0,
        precondition_errors: preconditions.errors.len(),
        undecided,
    };
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool: "skewflow".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        job: job.clone(),
        preconditions,
        orbits,
        models: ModelArtifacts {
            flow: FlowDescriptor::SurgeredGeodesic,
            model_kind: model_kind(FlowDescriptor::SurgeredGeodesic),
            strip_scene: strip_scene(&strip, job.options.ladder_depth),
            suspension_check,
        },
        status,
    })
}
