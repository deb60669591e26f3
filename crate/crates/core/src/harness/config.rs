//! Scenario configuration read from TOML-style `key = value` files.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which zero budget the audit applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BudgetFormula {
    /// ε² log q / 1600, quadratic characters, region Re s >= 3/4, |Im s| <= 1/4
    #[serde(rename = "cor4", alias = "quadratic")]
    Quadratic,
    /// ε² log q / 1440, all primitive characters, regions |Im s - φ| <= 1/4 for |φ| <= T
    #[serde(rename = "cor3", alias = "general")]
    General,
}

impl BudgetFormula {
    pub fn divisor(self) -> f64 {
        match self {
            BudgetFormula::Quadratic => 1600.0,
            BudgetFormula::General => 1440.0,
        }
    }

    pub fn budget(self, epsilon: f64, q: u64) -> f64 {
        epsilon * epsilon * (q as f64).ln() / self.divisor()
    }
}

/// The unspecified absolute constants, echoed in every report. All default to 1 except
/// the witness offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    /// implied constant in the character-sum conclusions
    pub c_sum: f64,
    /// c in the near-one zero region Re s >= 1 - c/(ε⁸ log q), |Im s| <= c/ε
    pub c_region: f64,
    /// c in the disk theorems' ranges for L and |φ|
    pub c_theorem: f64,
    /// c in the |φ| bounds reported by the main experiment
    pub c_lemma: f64,
    /// c in ξ = cη⁶ for products
    pub c_xi: f64,
    /// c in the exponent cη^{2k²} for powers
    pub c_power: f64,
    /// c added to λ in the witness search (default 3)
    pub c_witness: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c_sum: 1.0,
            c_region: 1.0,
            c_theorem: 1.0,
            c_lemma: 1.0,
            c_xi: 1.0,
            c_power: 1.0,
            c_witness: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub q_min: u64,
    pub q_max: u64,
    pub epsilon: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// fixed x; when absent x = q^ε
    pub x: Option<f64>,
    pub budget: BudgetFormula,
    pub constants: Constants,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            q_min: 3,
            q_max: 101,
            epsilon: 0.9,
            t: 1.0,
            x: None,
            budget: BudgetFormula::Quadratic,
            constants: Constants::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_min < 3 || self.q_max < self.q_min {
            return Err(Error::domain("modulus range", format!("{}..={}", self.q_min, self.q_max), "3 <= q_min <= q_max"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::domain("ε", self.epsilon, "(0, 1]"));
        }
        if !(self.t >= 1.0) {
            return Err(Error::domain("T", self.t, "[1, ∞)"));
        }
        if let Some(x) = self.x {
            if !(x >= 1.0) {
                return Err(Error::domain("x", x, "[1, ∞)"));
            }
        }
        Ok(())
    }

    pub fn x_for(&self, q: u64) -> f64 {
        self.x.unwrap_or_else(|| (q as f64).powf(self.epsilon))
    }

    pub fn x_rule(&self) -> String {
        match self.x {
            Some(x) => format!("x = {x}"),
            None => "x = q^epsilon".to_string(),
        }
    }
}
