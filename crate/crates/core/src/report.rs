use std::fmt;

use serde::Serialize;

/// Outcome of a structural check. A failed report carries at least one
/// witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub property: String,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    /// Observations that do not affect `passed`.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A state set that is not smooth; `formula` is set when the set is
    /// `S(φ)` for a universe formula.
    NotSmooth {
        formula: Option<String>,
        subset: Vec<String>,
        offending: Vec<String>,
    },
    SymmetricPair {
        first: String,
        second: String,
    },
    MinimalNotUnique {
        formula: String,
        minimal: Vec<String>,
    },
    RuleViolation {
        rule: String,
        premises: Vec<(String, String)>,
        conclusion: (String, String),
    },
    /// The defined-flag of a label circuit changes with the team input.
    UnstableDefinedFlag {
        state: String,
        team_a: String,
        team_b: String,
    },
}

impl VerificationReport {
    pub fn new(property: impl Into<String>) -> Self {
        VerificationReport {
            property: property.into(),
            passed: true,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(&mut self, witness: Witness) {
        self.passed = false;
        self.witnesses.push(witness);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Folds `other` into `self`, keeping the combined outcome.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.passed &= other.passed;
        self.witnesses.extend(other.witnesses);
        self.notes.extend(other.notes);
    }
}

fn list(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotSmooth {
                formula,
                subset,
                offending,
            } => {
                match formula {
                    Some(phi) => write!(f, "S({phi}) = {}", list(subset))?,
                    None => write!(f, "subset {}", list(subset))?,
                }
                write!(f, " is not smooth at {}", list(offending))
            }
            Witness::SymmetricPair { first, second } => {
                write!(f, "{first} R {second} and {second} R {first}")
            }
            Witness::MinimalNotUnique { formula, minimal } => {
                write!(f, "min S({formula}) = {} has {} elements", list(minimal), minimal.len())
            }
            Witness::RuleViolation {
                rule,
                premises,
                conclusion,
            } => {
                write!(f, "{rule}: ")?;
                for (i, (a, b)) in premises.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a} |~ {b}")?;
                }
                write!(f, " but not {} |~ {}", conclusion.0, conclusion.1)
            }
            Witness::UnstableDefinedFlag {
                state,
                team_a,
                team_b,
            } => write!(
                f,
                "defined-flag of state {state} differs between team inputs {team_a} and {team_b}"
            ),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.property,
            if self.passed { "pass" } else { "fail" }
        )?;
        for w in &self.witnesses {
            writeln!(f, "  witness: {w}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
