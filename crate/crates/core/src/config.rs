//! Run configuration: command-line values override a JSON config file,
//! which overrides the defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::enrich::EnrichmentConfig;
use crate::error::{Error, Result};
use crate::irmodels::Model;
use crate::pipeline::{Mode, PipelineConfig};

/// Every setting optional; used for both the config file and the flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub manifest: Option<PathBuf>,
    pub model: Option<Model>,
    pub mode: Option<Mode>,
    pub m: Option<f64>,
    pub t: Option<usize>,
    pub lsi_rank: Option<usize>,
    pub pairs_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl PartialConfig {
    /// Reads a JSON config file. Relative paths in it are taken relative to
    /// the file.
    pub fn load(path: &Path) -> Result<Self> {
        let body = fs::read_to_string(path).map_err(|source| Error::Load {
            path: path.to_owned(),
            source,
        })?;
        let mut cfg: PartialConfig = serde_json::from_str(&body).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.manifest, &mut cfg.pairs_dir, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Values set here win over those in `lower`.
    pub fn over(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            manifest: self.manifest.or(lower.manifest),
            model: self.model.or(lower.model),
            mode: self.mode.or(lower.mode),
            m: self.m.or(lower.m),
            t: self.t.or(lower.t),
            lsi_rank: self.lsi_rank.or(lower.lsi_rank),
            pairs_dir: self.pairs_dir.or(lower.pairs_dir),
            out: self.out.or(lower.out),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub manifest: PathBuf,
    pub model: Model,
    pub mode: Mode,
    pub m: f64,
    pub t: usize,
    pub lsi_rank: Option<usize>,
    pub pairs_dir: Option<PathBuf>,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn resolve(flags: PartialConfig, file: Option<PartialConfig>) -> Result<Self> {
        let merged = flags.over(file.unwrap_or_default());
        let defaults = EnrichmentConfig::default();
        let cfg = RunConfig {
            manifest: merged
                .manifest
                .ok_or_else(|| Error::Config("no dataset manifest given (--manifest)".into()))?,
            model: merged.model.unwrap_or(Model::Vsm),
            mode: merged.mode.unwrap_or(Mode::BOI),
            m: merged.m.unwrap_or(defaults.m),
            t: merged.t.unwrap_or(defaults.t),
            lsi_rank: merged.lsi_rank,
            pairs_dir: merged.pairs_dir,
            output_dir: merged.out.unwrap_or_else(|| PathBuf::from("out")),
        };
        cfg.pipeline().enrichment.validate()?;
        if cfg.lsi_rank == Some(0) {
            return Err(Error::Config("LSI rank must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            model: self.model,
            mode: self.mode,
            enrichment: EnrichmentConfig { m: self.m, t: self.t },
            lsi_rank: self.lsi_rank,
        }
    }
}
