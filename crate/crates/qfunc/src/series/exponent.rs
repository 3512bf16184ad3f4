//! Exponent vectors for sparse multivariate terms.

/// One nonnegative exponent per declared variable of the owning series.
///
/// The derived ordering is lexicographic on the entries, which is the
/// canonical term order used for serialization, rendering, and failure
/// witnesses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    /// The constant monomial over `len` variables.
    pub fn zeros(len: usize) -> Self {
        ExponentVector(vec![0; len])
    }

    /// The first-degree monomial in variable `idx`.
    pub fn unit(len: usize, idx: usize) -> Self {
        let mut entries = vec![0; len];
        entries[idx] = 1;
        ExponentVector(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, idx: usize) -> u32 {
        self.0[idx]
    }

    /// Sum of entries, saturating; anything that saturates is far above
    /// every admissible truncation bound and gets rejected downstream.
    pub fn total_degree(&self) -> u32 {
        self.0.iter().fold(0u32, |acc, &e| acc.saturating_add(e))
    }

    pub(crate) fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.0.len(), other.0.len());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_add(*b))
                .collect(),
        )
    }

    pub(crate) fn with_entry(&self, idx: usize, value: u32) -> ExponentVector {
        let mut entries = self.0.clone();
        entries[idx] = value;
        ExponentVector(entries)
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }
}

/// All exponent vectors over `nvars` variables with total degree at most
/// `bound`, in ascending lexicographic order.
pub fn monomials_up_to(nvars: usize, bound: u32) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fill(&mut out, &mut current, 0, bound);
    out
}

fn fill(out: &mut Vec<ExponentVector>, current: &mut Vec<u32>, pos: usize, budget: u32) {
    if pos == current.len() {
        out.push(ExponentVector(current.clone()));
        return;
    }
    for e in 0..=budget {
        current[pos] = e;
        fill(out, current, pos + 1, budget - e);
    }
    current[pos] = 0;
}
