use super::QcoreError;

/// Named qubit registers laid out as contiguous index blocks.
///
/// The first label occupies the most significant bits of a basis index; within
/// a label, qubit 0 is the most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    names: Vec<String>,
    sizes: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new<S: AsRef<str>>(parts: &[(S, usize)]) -> Result<Self, QcoreError> {
        let mut names = Vec::with_capacity(parts.len());
        let mut sizes = Vec::with_capacity(parts.len());
        for (name, size) in parts {
            let name = name.as_ref().to_string();
            if names.contains(&name) {
                return Err(QcoreError::DuplicateLabel(name));
            }
            names.push(name);
            sizes.push(*size);
        }
        Ok(Self { names, sizes })
    }

    /// One label per qubit: `q0`, `q1`, ...
    pub fn qubits(n: usize) -> Self {
        Self { names: (0..n).map(|i| format!("q{i}")).collect(), sizes: vec![1; n] }
    }

    /// A single register covering all `n` qubits.
    pub fn single(label: &str, n: usize) -> Self {
        Self { names: vec![label.to_string()], sizes: vec![n] }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_qubits(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_qubits()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.names.iter().any(|n| n == label)
    }

    /// `(first qubit, qubit count)` of a label.
    pub fn range(&self, label: &str) -> Result<(usize, usize), QcoreError> {
        let mut offset = 0;
        for (name, &size) in self.names.iter().zip(&self.sizes) {
            if name == label {
                return Ok((offset, size));
            }
            offset += size;
        }
        Err(QcoreError::UnknownLabel(label.to_string()))
    }

    pub fn size_of(&self, label: &str) -> Result<usize, QcoreError> {
        self.range(label).map(|(_, n)| n)
    }

    /// Global qubit indices covered by `labels`, in layout order.
    pub fn qubits_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>, QcoreError> {
        for l in labels {
            self.range(l.as_ref())?;
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for (name, &size) in self.names.iter().zip(&self.sizes) {
            if labels.iter().any(|l| l.as_ref() == name) {
                out.extend(offset..offset + size);
            }
            offset += size;
        }
        Ok(out)
    }

    /// Sub-layout containing only `labels`, preserving layout order.
    pub fn select<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self, QcoreError> {
        for l in labels {
            self.range(l.as_ref())?;
        }
        let mut names = Vec::new();
        let mut sizes = Vec::new();
        for (name, &size) in self.names.iter().zip(&self.sizes) {
            if labels.iter().any(|l| l.as_ref() == name) {
                names.push(name.clone());
                sizes.push(size);
            }
        }
        Ok(Self { names, sizes })
    }

    /// Labels not listed in `labels`.
    pub fn complement<S: AsRef<str>>(&self, labels: &[S]) -> Vec<String> {
        self.names
            .iter()
            .filter(|n| !labels.iter().any(|l| l.as_ref() == n.as_str()))
            .cloned()
            .collect()
    }

    /// Concatenation; labels must stay unique.
    pub fn concat(&self, other: &Self) -> Result<Self, QcoreError> {
        let mut parts: Vec<(String, usize)> =
            self.names.iter().cloned().zip(self.sizes.iter().copied()).collect();
        parts.extend(other.names.iter().cloned().zip(other.sizes.iter().copied()));
        Self::new(&parts)
    }
}

/// Bit position of global qubit `q` inside a basis index of `nq` qubits.
#[inline]
pub(crate) fn qubit_shift(nq: usize, q: usize) -> usize {
    nq - 1 - q
}

/// Splits every basis index into a (kept, rest) pair of compressed indices.
pub(crate) struct IndexSplit {
    pub keep_dim: usize,
    pub rest_dim: usize,
    /// full index for (keep, rest)
    pub compose: Vec<usize>,
}

impl IndexSplit {
    pub fn new(nq: usize, keep: &[usize]) -> Self {
        let rest: Vec<usize> = (0..nq).filter(|q| !keep.contains(q)).collect();
        let keep_dim = 1usize << keep.len();
        let rest_dim = 1usize << rest.len();
        let mut compose = vec![0usize; keep_dim * rest_dim];
        for k in 0..keep_dim {
            let mut base = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                if (k >> (keep.len() - 1 - pos)) & 1 == 1 {
                    base |= 1 << qubit_shift(nq, q);
                }
            }
            for r in 0..rest_dim {
                let mut idx = base;
                for (pos, &q) in rest.iter().enumerate() {
                    if (r >> (rest.len() - 1 - pos)) & 1 == 1 {
                        idx |= 1 << qubit_shift(nq, q);
                    }
                }
                compose[k * rest_dim + r] = idx;
            }
        }
        Self { keep_dim, rest_dim, compose }
    }

    #[inline]
    pub fn full(&self, keep: usize, rest: usize) -> usize {
        self.compose[keep * self.rest_dim + rest]
    }
}
