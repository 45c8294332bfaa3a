use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::OptimizerConfig;
use crate::error::{Error, Result};
use crate::space::Exponent;

/// How random coefficient vectors choose their signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    /// All coefficients positive.
    #[default]
    Positive,
    /// One random sign shared by all coefficients.
    Global,
    /// An independent random sign per coefficient.
    Mixed,
}

/// Draws `len` coefficients with magnitudes uniform in `[0.05, 2)`.
pub fn random_lambda(rng: &mut impl Rng, len: usize, signs: SignMode) -> Vec<f64> {
    let global = if rng.random::<bool>() { 1.0 } else { -1.0 };
    (0..len)
        .map(|_| {
            let magnitude = 0.05 + 1.95 * rng.random::<f64>();
            let sign = match signs {
                SignMode::Positive => 1.0,
                SignMode::Global => global,
                SignMode::Mixed => {
                    if rng.random::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            sign * magnitude
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomLambda {
    pub count: usize,
    pub length: usize,
    pub seed: u64,
    #[serde(default)]
    pub signs: SignMode,
}

/// Where coefficient vectors come from; all sources are concatenated in
/// the order explicit, ones, random.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LambdaSources {
    pub explicit: Vec<Vec<f64>>,
    /// Lengths of all-ones vectors.
    pub ones: Vec<usize>,
    pub random: Option<RandomLambda>,
}

/// A parameter scan read from TOML:
///
/// ```toml
/// name = "walsh-grid"
/// p = [2.5, 3, 4, 10, "inf"]
/// family_sizes = [4]          # optional: run the optimizer at these sizes
///
/// [lambda]
/// ones = [2, 4, 8, 16]
/// random = { count = 5, length = 4, seed = 7, signs = "mixed" }
///
/// [optimizer]
/// restarts = 8
/// ```
///
/// Without `family_sizes` each cell is answered by the closed-form
/// certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub p: Vec<Exponent>,
    /// Ambient dimension; defaults to the length of each coefficient vector.
    #[serde(default)]
    pub n: Option<usize>,
    pub lambda: LambdaSources,
    #[serde(default)]
    pub family_sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub kg: Option<f64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Config("name: must not be empty".into()));
        }
        if self.p.is_empty() {
            return Err(Error::Config("p: the exponent grid is empty".into()));
        }
        for p in &self.p {
            if let Exponent::Finite(v) = p {
                if !(*v >= 1.0) {
                    return Err(Error::Config(format!("p: exponent {v} is not in [1, inf]")));
                }
            }
        }
        let l = &self.lambda;
        if l.explicit.is_empty() && l.ones.is_empty() && l.random.as_ref().is_none_or(|r| r.count == 0) {
            return Err(Error::Config("lambda: no coefficient vectors (explicit, ones and random are all empty)".into()));
        }
        if l.explicit.iter().any(Vec::is_empty) || l.ones.contains(&0) {
            return Err(Error::Config("lambda: coefficient vectors must be nonempty".into()));
        }
        if l.explicit.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Config("lambda.explicit: coefficients must be finite".into()));
        }
        if let Some(r) = &l.random {
            if r.length == 0 {
                return Err(Error::Config("lambda.random.length: must be at least 1".into()));
            }
        }
        if let Some(sizes) = &self.family_sizes {
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::Config("family_sizes: must be a nonempty list of positive sizes".into()));
            }
        }
        if let Some(n) = self.n {
            let longest = self.lambdas().iter().map(Vec::len).max().unwrap_or(0);
            if n < longest {
                return Err(Error::Config(format!(
                    "n: dimension {n} is shorter than a coefficient vector of length {longest}"
                )));
            }
        }
        if let Some(kg) = self.kg {
            crate::bounds::GrothendieckConstant::new(kg).map_err(|e| Error::Config(format!("kg: {e}")))?;
        }
        self.optimizer
            .validate()
            .map_err(|e| Error::Config(format!("optimizer: {e}")))
    }

    /// All coefficient vectors, in source order.
    pub fn lambdas(&self) -> Vec<Vec<f64>> {
        let mut out = self.lambda.explicit.clone();
        out.extend(self.lambda.ones.iter().map(|&m| vec![1.0; m]));
        if let Some(r) = &self.lambda.random {
            let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
            out.extend((0..r.count).map(|_| random_lambda(&mut rng, r.length, r.signs)));
        }
        out
    }
}
