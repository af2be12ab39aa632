use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked relation, with a witness when it fails.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Outcome {
    pub relation: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Outcome {
    pub fn pass(relation: impl Into<String>) -> Self {
        Outcome { relation: relation.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(relation: impl Into<String>, witness: impl Into<String>) -> Self {
        Outcome { relation: relation.into(), status: Status::Fail, witness: Some(witness.into()) }
    }

    pub fn from_result(relation: impl Into<String>, r: Result<(), String>) -> Self {
        match r {
            Ok(()) => Self::pass(relation),
            Err(w) => Self::fail(relation, w),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub samples: usize,
    pub results: Vec<Outcome>,
}

impl Report {
    pub fn new(check: &str, group: &str, seed: Option<u64>, samples: usize) -> Self {
        Report { check: check.into(), group: group.into(), seed, samples, results: Vec::new() }
    }

    pub fn push(&mut self, o: Outcome) {
        self.results.push(o);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(Outcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.results.iter().filter(|o| !o.passed())
    }
}
