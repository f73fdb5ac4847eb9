use std::fmt;

use super::ModelError;

/// Per-time-unit cost of a vertex as a function of its load.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WeightFn {
    /// `load ↦ a·load + b`
    Affine { a: u64, b: u64 },
    /// `load ↦ entries[load - 1]`
    Table(Vec<u64>),
}

impl WeightFn {
    pub fn eval(&self, load: usize) -> Result<u64, ModelError> {
        if load == 0 {
            return Err(ModelError::WeightDomain { load });
        }
        match self {
            WeightFn::Affine { a, b } => Ok(a * load as u64 + b),
            WeightFn::Table(entries) => entries.get(load - 1).copied().ok_or(ModelError::WeightDomain { load }),
        }
    }

    /// Loads this function is defined on, `None` meaning unbounded.
    pub fn max_load(&self) -> Option<usize> {
        match self {
            WeightFn::Affine { .. } => None,
            WeightFn::Table(entries) => Some(entries.len()),
        }
    }

    /// Why the function is not a positive non-decreasing weight, if it isn't.
    pub fn positivity_problem(&self) -> Option<String> {
        match self {
            WeightFn::Affine { a, b } if a + b == 0 => Some("affine weight 0·x+0 is zero at load 1".into()),
            WeightFn::Affine { .. } => None,
            WeightFn::Table(entries) => {
                if let Some(k) = entries.iter().position(|&w| w == 0) {
                    Some(format!("table entry {} is zero", k + 1))
                } else {
                    entries.windows(2).position(|w| w[1] < w[0]).map(|k| format!("table decreases between loads {} and {}", k + 1, k + 2))
                }
            }
        }
    }
}

/// Evaluates a weight function at a load.
pub fn eval_weight(w: &WeightFn, load: usize) -> Result<u64, ModelError> {
    w.eval(load)
}

impl fmt::Display for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFn::Affine { a, b } => write!(f, "affine {a} {b}"),
            WeightFn::Table(entries) => {
                f.write_str("table")?;
                for e in entries {
                    write!(f, " {e}")?;
                }
                Ok(())
            }
        }
    }
}
