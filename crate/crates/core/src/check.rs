//! Verdicts for identities and inequalities.

/// Relative tolerance for inequality verdicts and exact identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Relative tolerance used for the derivative/influence equality.
pub const DERIVATIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs <= rhs` up to tolerance.
    AtMost,
    /// `|lhs - rhs|` within tolerance.
    Equal,
}

/// Outcome of one check at one bias.
///
/// `holds` compares raw values with the absolute tolerance
/// `tolerance * max(1, |lhs|, |rhs|)`. When `applicable` is false the
/// preconditions of the statement were not met and `holds` carries no
/// meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub applicable: bool,
    pub relation: Relation,
    pub tolerance: f64,
    pub notes: String,
}

fn scale(lhs: f64, rhs: f64) -> f64 {
    1f64.max(lhs.abs()).max(rhs.abs())
}

impl CheckResult {
    pub fn at_most(name: impl Into<String>, p: f64, lhs: f64, rhs: f64) -> Self {
        Self::at_most_within(name, p, lhs, rhs, IDENTITY_TOL)
    }

    pub fn at_most_within(
        name: impl Into<String>,
        p: f64,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let holds = lhs <= rhs + tolerance * scale(lhs, rhs);
        CheckResult {
            name: name.into(),
            p,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds,
            applicable: true,
            relation: Relation::AtMost,
            tolerance,
            notes: String::new(),
        }
    }

    pub fn equal(name: impl Into<String>, p: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let holds = (lhs - rhs).abs() <= tolerance * scale(lhs, rhs);
        CheckResult {
            name: name.into(),
            p,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds,
            applicable: true,
            relation: Relation::Equal,
            tolerance,
            notes: String::new(),
        }
    }

    /// A check whose preconditions failed before anything could be computed.
    pub fn inapplicable(name: impl Into<String>, p: f64, note: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            p,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            holds: false,
            applicable: false,
            relation: Relation::AtMost,
            tolerance: IDENTITY_TOL,
            notes: note.into(),
        }
    }

    /// Marks a computed check as outside the statement's hypotheses.
    pub fn not_applicable_because(mut self, note: impl Into<String>) -> Self {
        self.applicable = false;
        self.push_note(note);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.push_note(note);
        self
    }

    fn push_note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if note.is_empty() {
            return;
        }
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(&note);
    }

    /// `true` unless the check is applicable and fails.
    pub fn passes(&self) -> bool {
        !self.applicable || self.holds
    }
}
