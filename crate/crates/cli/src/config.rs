//! Config-file schema and flag/file resolution. Flags win over the file; a
//! preset supplies `n` and `targets` unless those are given explicitly.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use phasesearch::metrics::DepthBasis;
use phasesearch::{presets, SearchSpec, Variant};

/// Keys accepted in a `--config` TOML file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    pub n: Option<usize>,
    pub targets: Option<Vec<String>>,
    pub variant: Option<String>,
    #[serde(alias = "j")]
    pub j_override: Option<u32>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub depth_policy: Option<String>,
    pub lowered: Option<bool>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Instance selection from flags, before merging with a config file.
#[derive(Debug, Clone, Default)]
pub struct InstanceFlags {
    pub preset: Option<String>,
    pub n: Option<usize>,
    pub targets: Option<String>,
    pub variant: Option<Variant>,
    pub j: Option<u32>,
}

/// Fully resolved settings, echoed into every emitted file. Output
/// locations are deliberately left out so reruns into different
/// directories produce identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub n: usize,
    pub targets: Vec<String>,
    pub variant: Variant,
    pub j_override: Option<u32>,
    pub shots: u64,
    pub seed: u64,
    pub depth_policy: DepthBasis,
    pub lowered: bool,
}

impl Resolved {
    pub fn spec(&self) -> Result<SearchSpec> {
        SearchSpec::parse(self.n, &self.targets.join(","), self.variant)
            .map(|s| s.with_j(self.j_override))
            .map_err(|e| anyhow!(e))
    }
}

pub fn unknown_preset(name: &str) -> anyhow::Error {
    anyhow!(
        "unknown preset `{name}`; available presets: {}",
        presets::names().join(", ")
    )
}

pub fn parse_depth_policy(s: &str) -> Result<DepthBasis> {
    match s.to_ascii_lowercase().as_str() {
        "blocked" => Ok(DepthBasis::Blocked),
        "asap" => Ok(DepthBasis::Asap),
        _ => bail!("unknown depth policy `{s}` (expected blocked or asap)"),
    }
}

/// `(preset, n, targets)` from flags over file, with presets expanded.
pub fn resolve_instance(
    flags: &InstanceFlags,
    file: &FileConfig,
) -> Result<(Option<String>, usize, Vec<String>)> {
    let preset_name = flags.preset.clone().or_else(|| {
        // A file preset only applies when the flags don't pick an instance.
        if flags.n.is_none() && flags.targets.is_none() {
            file.preset.clone()
        } else {
            None
        }
    });
    let preset = match &preset_name {
        Some(name) => Some(presets::find(name).ok_or_else(|| unknown_preset(name))?),
        None => None,
    };
    let file_targets = if flags.preset.is_some() {
        None
    } else {
        file.targets.clone()
    };
    let file_n = if flags.preset.is_some() { None } else { file.n };
    let targets: Vec<String> = match (&flags.targets, file_targets, preset) {
        (Some(t), _, _) => t.split(',').map(|s| s.trim().to_string()).collect(),
        (None, Some(t), _) => t,
        (None, None, Some(p)) => p.targets.iter().map(|s| s.to_string()).collect(),
        (None, None, None) => bail!("no instance given: use --preset or --targets (with -n)"),
    };
    let n = match (flags.n, file_n, preset) {
        (Some(n), _, _) => n,
        (None, Some(n), _) => n,
        (None, None, Some(p)) if flags.targets.is_none() => p.n,
        // Width follows explicit targets when no -n was given.
        _ => targets
            .first()
            .map(|t| t.trim_start_matches('|').trim_end_matches(['>', '⟩']).len())
            .unwrap_or(0),
    };
    Ok((preset_name.filter(|_| preset.is_some()), n, targets))
}

pub struct RunFlags {
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub depth_policy: Option<String>,
    pub lowered: bool,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SHOTS: u64 = 1000;

pub fn resolve(
    command: &str,
    inst: &InstanceFlags,
    run: &RunFlags,
    file: &FileConfig,
) -> Result<(Resolved, PathBuf)> {
    let (preset, n, targets) = resolve_instance(inst, file)?;
    let variant = match (inst.variant, &file.variant) {
        (Some(v), _) => v,
        (None, Some(s)) => s.parse().map_err(|e| anyhow!("{e}"))?,
        (None, None) => Variant::OptimizedMerged,
    };
    let shots = run.shots.or(file.shots).unwrap_or(DEFAULT_SHOTS);
    if shots == 0 {
        bail!("--shots must be at least 1");
    }
    let depth_policy = match run.depth_policy.as_deref().or(file.depth_policy.as_deref()) {
        Some(s) => parse_depth_policy(s)?,
        None => DepthBasis::Blocked,
    };
    let resolved = Resolved {
        command: command.to_string(),
        preset,
        n,
        targets,
        variant,
        j_override: inst.j.or(file.j_override),
        shots,
        seed: run.seed.or(file.seed).unwrap_or(0),
        depth_policy,
        lowered: run.lowered || file.lowered.unwrap_or(false),
    };
    let out = run
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((resolved, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_run() -> RunFlags {
        RunFlags {
            shots: None,
            seed: None,
            depth_policy: None,
            lowered: false,
            out: None,
        }
    }

    #[test]
    fn preset_expands() {
        let flags = InstanceFlags {
            preset: Some("5q2t".into()),
            ..Default::default()
        };
        let (r, out) = resolve("run", &flags, &no_run(), &FileConfig::default()).unwrap();
        assert_eq!((r.n, r.targets.len(), r.shots, r.seed), (5, 2, 1000, 0));
        assert_eq!(r.variant, Variant::OptimizedMerged);
        assert_eq!(out, PathBuf::from("."));
    }

    #[test]
    fn flags_win_over_file() {
        let file: FileConfig = toml::from_str(
            "n = 3\ntargets = [\"011\"]\nvariant = \"grover\"\nshots = 50\nseed = 9\nj = 4\nlowered = true\n",
        )
        .unwrap();
        let flags = InstanceFlags {
            variant: Some(Variant::ModifiedCanonical),
            ..Default::default()
        };
        let run = RunFlags {
            seed: Some(1),
            ..no_run()
        };
        let (r, _) = resolve("run", &flags, &run, &file).unwrap();
        assert_eq!(
            (r.n, r.variant, r.shots, r.seed, r.j_override, r.lowered),
            (3, Variant::ModifiedCanonical, 50, 1, Some(4), true)
        );

        let flags = InstanceFlags {
            preset: Some("2q2t".into()),
            ..Default::default()
        };
        let (r, _) = resolve("run", &flags, &no_run(), &file).unwrap();
        assert_eq!(
            (r.n, r.targets.clone()),
            (2, vec!["00".to_string(), "01".to_string()])
        );
    }

    #[test]
    fn width_from_targets() {
        let flags = InstanceFlags {
            targets: Some("0101,1100".into()),
            ..Default::default()
        };
        let (p, n, t) = resolve_instance(&flags, &FileConfig::default()).unwrap();
        assert_eq!((p, n, t.len()), (None, 4, 2));
    }

    #[test]
    fn errors() {
        let flags = InstanceFlags {
            preset: Some("9q9t".into()),
            ..Default::default()
        };
        let err = resolve_instance(&flags, &FileConfig::default())
            .unwrap_err()
            .to_string();
        assert!(err.contains("2q2t, 5q2t, 5q4t, 6q3t"), "{err}");
        assert!(resolve_instance(&InstanceFlags::default(), &FileConfig::default()).is_err());
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
        assert!(parse_depth_policy("deep").is_err());
    }
}
