use std::collections::BTreeMap;

use exact_kernel::Scalar;

/// How twist classes are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradingMode {
    /// Classes taken mod 1.
    CmodZ,
    /// Classes as plain rationals.
    C,
    /// As `C`, with finite-dimensionality and lower truncation per class
    /// certified up to the cutoff.
    StronglyC,
}

impl GradingMode {
    pub fn name(self) -> &'static str {
        match self {
            GradingMode::CmodZ => "CmodZ",
            GradingMode::C => "C",
            GradingMode::StronglyC => "stronglyC",
        }
    }
}

/// The representative of `x` mod 1 in `[0, 1)`.
pub fn class_mod_one(x: &Scalar) -> Scalar {
    x - x.floor()
}

/// Generalized `L(0)` weight and twist class of one basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigrade {
    pub weight: Scalar,
    pub class: Scalar,
}

impl Bigrade {
    /// The class as used under `mode`.
    pub fn class_in(&self, mode: GradingMode) -> Scalar {
        match mode {
            GradingMode::CmodZ => class_mod_one(&self.class),
            _ => self.class.clone(),
        }
    }
}

/// Bigrades of the enumerated basis, aligned with `InducedModule::basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bigrading {
    pub entries: Vec<Bigrade>,
    pub mode: GradingMode,
}

impl Bigrading {
    /// Dimensions keyed by `(weight, class)` with classes as `mode` reads
    /// them.
    pub fn dims(&self) -> BTreeMap<(Scalar, Scalar), usize> {
        let mut out = BTreeMap::new();
        for b in &self.entries {
            *out.entry((b.weight.clone(), b.class_in(self.mode))).or_insert(0) += 1;
        }
        out
    }

    pub fn with_mode(&self, mode: GradingMode) -> Bigrading {
        Bigrading {
            entries: self.entries.clone(),
            mode,
        }
    }
}
