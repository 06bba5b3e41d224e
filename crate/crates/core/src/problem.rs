//! Secure index coding instances: receivers, side information and
//! prohibited-message lists.

use serde::{Deserialize, Serialize};

use crate::error::ProblemError;
use crate::subset::{SubsetId, MAX_MESSAGES};

/// An `n`-message secure index coding problem `(A, P)`.
///
/// Receiver `i` wants message `i`, knows the messages in `A_i` and must learn
/// nothing about any single message in `P_i`. All indices are zero-based.
///
/// Invariants (enforced by [`Problem::new`]): `i ∉ A_i`, and
/// `P_i ⊆ B_i = [n] \ (A_i ∪ {i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    n: usize,
    side_info: Vec<SubsetId>,
    prohibited: Vec<SubsetId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDoc {
    n: usize,
    #[serde(rename = "A")]
    side_info: Vec<Vec<usize>>,
    #[serde(rename = "P")]
    prohibited: Vec<Vec<usize>>,
}

impl Problem {
    pub fn new(side_info: Vec<SubsetId>, prohibited: Vec<SubsetId>) -> Result<Self, ProblemError> {
        let n = side_info.len();
        if n == 0 || n > MAX_MESSAGES {
            return Err(ProblemError::BadSize { n, max: MAX_MESSAGES });
        }
        if prohibited.len() != n {
            return Err(ProblemError::WrongLength { field: "P", got: prohibited.len(), n });
        }
        let full = SubsetId::full(n);
        for i in 0..n {
            for (field, set) in [("A", side_info[i]), ("P", prohibited[i])] {
                if !set.is_subset_of(full) {
                    let index = set.difference(full).first().unwrap() + 1;
                    return Err(ProblemError::IndexOutOfRange { receiver: i + 1, field, index, n });
                }
            }
            if side_info[i].contains(i) {
                return Err(ProblemError::OwnMessageInSideInfo { receiver: i + 1 });
            }
            let interfering = side_info[i].with(i).complement(n);
            if let Some(j) = prohibited[i].difference(interfering).first() {
                return Err(ProblemError::ProhibitedNotInterfering { receiver: i + 1, message: j + 1 });
            }
        }
        Ok(Problem { n, side_info, prohibited })
    }

    /// Builds a problem from one-based label lists, the notation of problem files.
    pub fn from_one_based(side_info: &[&[usize]], prohibited: &[&[usize]]) -> Result<Self, ProblemError> {
        let doc = ProblemDoc {
            n: side_info.len(),
            side_info: side_info.iter().map(|s| s.to_vec()).collect(),
            prohibited: prohibited.iter().map(|s| s.to_vec()).collect(),
        };
        Self::from_doc(doc)
    }

    /// Same side information, no security constraints.
    pub fn without_security(&self) -> Problem {
        Problem {
            n: self.n,
            side_info: self.side_info.clone(),
            prohibited: vec![SubsetId::EMPTY; self.n],
        }
    }

    /// Returns a copy with `P_i` replaced. The caller must keep `P_i ⊆ B_i`.
    pub fn with_prohibited(&self, i: usize, p: SubsetId) -> Result<Problem, ProblemError> {
        let mut prohibited = self.prohibited.clone();
        prohibited[i] = p;
        Problem::new(self.side_info.clone(), prohibited)
    }

    pub fn parse(document: &str) -> Result<Self, ProblemError> {
        let doc: ProblemDoc =
            serde_json::from_str(document).map_err(|e| ProblemError::Malformed(e.to_string()))?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: ProblemDoc) -> Result<Self, ProblemError> {
        let n = doc.n;
        if n == 0 || n > MAX_MESSAGES {
            return Err(ProblemError::BadSize { n, max: MAX_MESSAGES });
        }
        let convert = |field: &'static str, lists: Vec<Vec<usize>>| -> Result<Vec<SubsetId>, ProblemError> {
            if lists.len() != n {
                return Err(ProblemError::WrongLength { field, got: lists.len(), n });
            }
            lists
                .into_iter()
                .enumerate()
                .map(|(i, list)| {
                    let mut set = SubsetId::EMPTY;
                    for index in list {
                        if index == 0 || index > n {
                            return Err(ProblemError::IndexOutOfRange { receiver: i + 1, field, index, n });
                        }
                        set = set.with(index - 1);
                    }
                    Ok(set)
                })
                .collect()
        };
        let side_info = convert("A", doc.side_info)?;
        let prohibited = convert("P", doc.prohibited)?;
        Problem::new(side_info, prohibited)
    }

    /// Compact document with one-based indices, sets in ascending order.
    pub fn to_json(&self) -> String {
        let doc = ProblemDoc {
            n: self.n,
            side_info: self.side_info.iter().map(|s| s.to_one_based()).collect(),
            prohibited: self.prohibited.iter().map(|s| s.to_one_based()).collect(),
        };
        serde_json::to_string(&doc).expect("problem document serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json()).expect("round trip")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn full(&self) -> SubsetId {
        SubsetId::full(self.n)
    }

    #[inline]
    pub fn side_info(&self, i: usize) -> SubsetId {
        self.side_info[i]
    }

    #[inline]
    pub fn prohibited(&self, i: usize) -> SubsetId {
        self.prohibited[i]
    }

    /// `B_i = [n] \ (A_i ∪ {i})`.
    #[inline]
    pub fn interfering_set(&self, i: usize) -> SubsetId {
        self.side_info[i].with(i).complement(self.n)
    }

    pub fn has_security(&self) -> bool {
        self.prohibited.iter().any(|p| !p.is_empty())
    }

    /// Number of `(i, j)` pairs with `j ∈ P_i`.
    pub fn prohibition_count(&self) -> usize {
        self.prohibited.iter().map(|p| p.len()).sum()
    }

    pub fn induced_subproblem(&self, set: SubsetId) -> Subproblem {
        debug_assert!(set.is_subset_of(self.full()));
        Subproblem {
            n: self.n,
            set,
            side_info: self.side_info.iter().map(|a| a.intersection(set)).collect(),
        }
    }
}

/// The side-information structure restricted to a subset `S` of receivers.
///
/// Prohibited sets are not carried over: bounds evaluated on subproblems
/// depend on the side-information graph only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subproblem {
    n: usize,
    set: SubsetId,
    side_info: Vec<SubsetId>,
}

impl Subproblem {
    pub fn set(&self) -> SubsetId {
        self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn receivers(&self) -> impl Iterator<Item = usize> {
        self.set.iter()
    }

    /// `A_i ∩ S` for `i ∈ S`, `None` otherwise.
    pub fn side_info(&self, i: usize) -> Option<SubsetId> {
        self.set.contains(i).then(|| self.side_info[i])
    }

    /// Restricts further to `sub ⊆ S`.
    pub fn restrict(&self, sub: SubsetId) -> Subproblem {
        debug_assert!(sub.is_subset_of(self.set));
        Subproblem {
            n: self.n,
            set: sub,
            side_info: self.side_info.iter().map(|a| a.intersection(sub)).collect(),
        }
    }
}
