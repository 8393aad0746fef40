//! Executable checks of the ordinary-line inequalities and proof algorithms
//! on concrete configurations.
//!
//! Every checker validates its hypotheses before its conclusion: a failed
//! hypothesis yields an inapplicable verdict, never a failure. A checker can
//! only fail on a genuine counterexample, which would indicate either an
//! implementation bug or a remarkable finding.

pub mod checks;
pub mod prune;

use num::{BigInt, BigRational};
use serde_json::{json, Value};

pub use checks::{
    check_3n2, check_dichotomy, check_higherdim, check_hirzebruch, check_kelly, check_main,
    check_melchior, check_propS_bound, check_removal_lemma, max_flat3_count, max_plane_count,
};
pub use prune::{run_prune, PruneFloor, PruneStep, PruneTrace, StopReason};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub name: String,
    pub passed: bool,
}

/// Outcome of one statement check with exact bookkeeping.
#[derive(Clone, Debug)]
pub struct VerdictReport {
    pub statement: String,
    pub hypotheses: Vec<Hypothesis>,
    pub applicable: bool,
    pub pass: bool,
    /// Claimed lower bound (exact rational), when the statement has one.
    pub claimed: Option<BigRational>,
    /// Observed value compared against the claim.
    pub observed: Option<BigRational>,
    /// observed − claimed; nonnegative on a pass.
    pub margin: Option<BigRational>,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl VerdictReport {
    pub fn new(statement: &str) -> Self {
        VerdictReport {
            statement: statement.to_string(),
            hypotheses: Vec::new(),
            applicable: true,
            pass: false,
            claimed: None,
            observed: None,
            margin: None,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn hypothesis(&mut self, name: &str, passed: bool) -> bool {
        self.hypotheses.push(Hypothesis {
            name: name.to_string(),
            passed,
        });
        if !passed {
            self.applicable = false;
            self.pass = false;
        }
        passed
    }

    pub fn conclude(&mut self, claimed: BigRational, observed: BigRational) {
        let margin = &observed - &claimed;
        self.pass = self.applicable && margin >= BigRational::from_integer(BigInt::from(0));
        self.claimed = Some(claimed);
        self.observed = Some(observed);
        self.margin = Some(margin);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn to_json(&self) -> Value {
        json!({
            "statement": self.statement,
            "applicable": self.applicable,
            "pass": self.pass,
            "claimed": self.claimed.as_ref().map(rational_str),
            "observed": self.observed.as_ref().map(rational_str),
            "margin_num": self.margin.as_ref().map(|m| m.numer().to_string()),
            "margin_den": self.margin.as_ref().map(|m| m.denom().to_string()),
            "witnesses": self.witnesses,
            "hypotheses": self.hypotheses.iter().map(|h| json!({
                "name": h.name,
                "passed": h.passed,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

pub fn rational_str(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
