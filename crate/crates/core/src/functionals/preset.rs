use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{apply_functionals, Functional, FunctionalError, FunctionalSet};
use crate::dsp::{
    delta, extract_lld, speech_fragments, AudioSignal, LldConfig, SampleSource, SilenceFloor,
    LLD_COLUMNS,
};

pub const IS09_ANALOG: &str = "is09-analog";
pub const EGEMAPS_ANALOG: &str = "egemaps-analog";

/// One named feature set: which LLD columns, whether deltas are appended,
/// and which functionals reduce each contour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSetPreset {
    pub name: String,
    pub lld_columns: Vec<String>,
    pub include_deltas: bool,
    pub functionals: FunctionalSet,
    pub declared_dim: usize,
}

impl FeatureSetPreset {
    /// Validates column names and the declared dimensionality.
    pub fn new(
        name: impl Into<String>,
        lld_columns: Vec<String>,
        include_deltas: bool,
        functionals: FunctionalSet,
        declared_dim: usize,
    ) -> Result<Self, FunctionalError> {
        let p = Self {
            name: name.into(),
            lld_columns,
            include_deltas,
            functionals,
            declared_dim,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), FunctionalError> {
        if self.lld_columns.is_empty() {
            return Err(FunctionalError::Config(format!(
                "preset `{}` has no LLD columns",
                self.name
            )));
        }
        for c in &self.lld_columns {
            if !LLD_COLUMNS.contains(&c.as_str()) {
                return Err(FunctionalError::UnknownColumn {
                    preset: self.name.clone(),
                    column: c.clone(),
                });
            }
        }
        let actual = self.layout_dim();
        if actual != self.declared_dim {
            return Err(FunctionalError::DimensionMismatch {
                name: self.name.clone(),
                declared: self.declared_dim,
                actual,
            });
        }
        Ok(())
    }

    fn layout_dim(&self) -> usize {
        self.lld_columns.len() * if self.include_deltas { 2 } else { 1 } * self.functionals.len()
    }

    /// 16 contours (ZCR, RMS energy, F0, HNR, MFCC 1–12) plus their deltas,
    /// each reduced by the 12 classic challenge functionals: 16 × 2 × 12 = 384.
    pub fn is09_analog() -> Self {
        let mut cols = vec!["zcr", "rms", "f0", "hnr"];
        let mfcc: Vec<String> = (2..=13).map(|i| format!("mfcc{i}")).collect();
        cols.extend(mfcc.iter().map(String::as_str));
        Self::new(
            IS09_ANALOG,
            cols.into_iter().map(String::from).collect(),
            true,
            FunctionalSet::new(Functional::ALL.to_vec()).expect("static set"),
            384,
        )
        .expect("static preset is consistent")
    }

    /// 11 contours × 8 functionals = 88, covering pitch, energy, voice
    /// quality, low-order cepstrum and spectral shape.
    pub fn egemaps_analog() -> Self {
        let cols = [
            "f0", "rms", "jitter", "shimmer", "hnr", "mfcc2", "mfcc3", "mfcc4", "mfcc5", "flux",
            "centroid",
        ];
        let fs = FunctionalSet::new(vec![
            Functional::Mean,
            Functional::Stddev,
            Functional::Min,
            Functional::Max,
            Functional::Range,
            Functional::LinSlope,
            Functional::Skewness,
            Functional::Kurtosis,
        ])
        .expect("static set");
        Self::new(
            EGEMAPS_ANALOG,
            cols.iter().map(|s| s.to_string()).collect(),
            false,
            fs,
            88,
        )
        .expect("static preset is consistent")
    }

    /// Resolves a computable preset by analog name or by the name of the
    /// registry set it stands in for.
    pub fn builtin(name: &str) -> Result<Self, FunctionalError> {
        match lookup(name) {
            Some(entry) => match entry.analog {
                Some(IS09_ANALOG) => Ok(Self::is09_analog()),
                Some(EGEMAPS_ANALOG) => Ok(Self::egemaps_analog()),
                _ => Err(FunctionalError::NotComputable(name.to_string())),
            },
            None => Err(FunctionalError::UnknownPreset(name.to_string())),
        }
    }

    /// Loads a user-defined preset from a JSON document.
    pub fn from_json(text: &str) -> Result<Self, FunctionalError> {
        let p: Self =
            serde_json::from_str(text).map_err(|e| FunctionalError::Config(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn from_json_file(path: &Path) -> Result<Self, FunctionalError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FunctionalError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Column names of the emitted vectors, `<lld>[_de]_<functional>`.
    pub fn feature_names(&self) -> Vec<String> {
        let mut contours: Vec<String> = self.lld_columns.clone();
        if self.include_deltas {
            contours.extend(self.lld_columns.iter().map(|c| format!("{c}_de")));
        }
        contours
            .iter()
            .flat_map(|c| {
                self.functionals
                    .as_slice()
                    .iter()
                    .map(move |f| format!("{c}_{f}"))
            })
            .collect()
    }

    /// Feature vector of one fragment or whole signal.
    pub fn compute<S: SampleSource + ?Sized>(
        &self,
        input: &S,
        config: &LldConfig,
    ) -> Result<Vec<f64>, FunctionalError> {
        let lld = extract_lld(input, config)?;
        let mut m = lld.select(&self.lld_columns).ok_or_else(|| {
            FunctionalError::Config(format!("preset `{}` selects unknown columns", self.name))
        })?;
        if self.include_deltas {
            let d = delta(&m)?;
            m = m.hstack(d);
        }
        let v = apply_functionals(&m, &self.functionals)?;
        if v.len() != self.declared_dim {
            return Err(FunctionalError::DimensionMismatch {
                name: self.name.clone(),
                declared: self.declared_dim,
                actual: v.len(),
            });
        }
        Ok(v)
    }
}

/// Where a vector came from within its session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `index` counts all fragments, silent ones included.
    Fragment { index: usize },
    WholeUtterance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub preset: String,
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

/// Per-fragment instances (silent fragments removed) or a single vector for
/// the whole recording.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExtractionMode {
    #[default]
    Fragment,
    Utterance,
}

impl std::str::FromStr for ExtractionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fragment" => Ok(Self::Fragment),
            "utterance" => Ok(Self::Utterance),
            other => Err(format!("unknown mode `{other}` (expected fragment|utterance)")),
        }
    }
}

impl std::fmt::Display for ExtractionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Fragment => "fragment",
            Self::Utterance => "utterance",
        })
    }
}

/// Runs `preset` over a recording. Fragment mode yields one vector per
/// non-silent fragment in fragment order; utterance mode yields one vector.
pub fn assemble_preset(
    signal: &AudioSignal,
    preset: &FeatureSetPreset,
    mode: ExtractionMode,
    floor: SilenceFloor,
    config: &LldConfig,
) -> Result<Vec<FeatureVector>, FunctionalError> {
    match mode {
        ExtractionMode::Utterance => Ok(vec![FeatureVector {
            preset: preset.name.clone(),
            values: preset.compute(signal, config)?,
            provenance: Provenance::WholeUtterance,
        }]),
        ExtractionMode::Fragment => {
            let frags = speech_fragments(signal, floor);
            frags
                .par_iter()
                .map(|f| {
                    Ok(FeatureVector {
                        preset: preset.name.clone(),
                        values: preset.compute(f, config)?,
                        provenance: Provenance::Fragment {
                            index: f.offset / f.samples.len(),
                        },
                    })
                })
                .collect()
        }
    }
}

/// A named feature set with its reference dimensionality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub dim: usize,
    /// The computable analog standing in for this set, if any.
    pub analog: Option<&'static str>,
}

impl RegistryEntry {
    pub fn computable(&self) -> bool {
        self.analog.is_some()
    }
}

const REGISTRY: [RegistryEntry; 8] = [
    RegistryEntry { name: "Avec2013", dim: 2268, analog: None },
    RegistryEntry { name: "ComParE2016", dim: 6373, analog: None },
    RegistryEntry { name: "eGeMAPS", dim: 88, analog: Some(EGEMAPS_ANALOG) },
    RegistryEntry { name: "IS09 emotion", dim: 384, analog: Some(IS09_ANALOG) },
    RegistryEntry { name: "IS10 paraling", dim: 1582, analog: None },
    RegistryEntry { name: "IS11 speaker state", dim: 4368, analog: None },
    RegistryEntry { name: "IS12 speaker trait", dim: 5757, analog: None },
    RegistryEntry { name: "IS13 ComParE", dim: 6373, analog: None },
];

/// All eight reference feature sets, in report order.
pub fn preset_registry() -> &'static [RegistryEntry] {
    &REGISTRY
}

/// Finds a registry entry by its own name or by its analog's name
/// (case-insensitive).
pub fn lookup(name: &str) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| {
        e.name.eq_ignore_ascii_case(name) || e.analog.is_some_and(|a| a.eq_ignore_ascii_case(name))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn builtin_dimensions() {
        assert_eq!(FeatureSetPreset::is09_analog().feature_names().len(), 384);
        assert_eq!(FeatureSetPreset::egemaps_analog().feature_names().len(), 88);
    }

    #[test]
    fn small_user_preset() {
        let p = FeatureSetPreset::new(
            "tiny",
            vec!["rms".into(), "zcr".into()],
            false,
            FunctionalSet::new(vec![Functional::Mean, Functional::Max, Functional::Min]).unwrap(),
            6,
        )
        .unwrap();
        let s = synth::sine(200.0, 0.5, 1.0, 16000);
        let v = assemble_preset(&s, &p, ExtractionMode::Fragment, SilenceFloor::default(), &LldConfig::default())
            .unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|fv| fv.values.len() == 6));
    }

    #[test]
    fn declared_dim_is_checked() {
        let err = FeatureSetPreset::new(
            "bad",
            vec!["rms".into()],
            true,
            FunctionalSet::new(vec![Functional::Mean]).unwrap(),
            1,
        );
        assert!(matches!(err, Err(FunctionalError::DimensionMismatch { actual: 2, .. })));
        assert!(matches!(
            FeatureSetPreset::new("bad", vec!["nope".into()], false, FunctionalSet::new(vec![Functional::Mean]).unwrap(), 1),
            Err(FunctionalError::UnknownColumn { .. })
        ));
    }

    #[test]
    fn registry_lookups() {
        assert_eq!(preset_registry().len(), 8);
        let c = lookup("ComParE2016").unwrap();
        assert_eq!((c.dim, c.computable()), (6373, false));
        let c = lookup("IS10 paraling").unwrap();
        assert_eq!((c.dim, c.computable()), (1582, false));
        let c = lookup("is09-analog").unwrap();
        assert_eq!((c.dim, c.computable()), (384, true));
        assert!(matches!(
            FeatureSetPreset::builtin("Avec2013"),
            Err(FunctionalError::NotComputable(_))
        ));
        assert!(matches!(
            FeatureSetPreset::builtin("nope"),
            Err(FunctionalError::UnknownPreset(_))
        ));
        assert_eq!(FeatureSetPreset::builtin("eGeMAPS").unwrap().declared_dim, 88);
    }

    #[test]
    fn json_config_roundtrip() {
        let p = FeatureSetPreset::egemaps_analog();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(FeatureSetPreset::from_json(&text).unwrap(), p);
        let bad = text.replace("88", "89");
        assert!(FeatureSetPreset::from_json(&bad).is_err());
    }
}
