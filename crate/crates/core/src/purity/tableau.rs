use crate::pauli::PauliString;

/// Aaronson–Gottesman stabilizer tableau.
///
/// Rows `0..n` are destabilizers, `n..2n` stabilizers, row `2n` is scratch.
/// Storage is column-major: for each qubit a bit column over all rows, so
/// gates touch whole words at a time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    x: Vec<Vec<u64>>,
    z: Vec<Vec<u64>>,
    r: Vec<u64>,
}

#[inline]
fn get(col: &[u64], row: usize) -> bool {
    (col[row / 64] >> (row % 64)) & 1 == 1
}

#[inline]
fn flip(col: &mut [u64], row: usize) {
    col[row / 64] ^= 1u64 << (row % 64);
}

#[inline]
fn set(col: &mut [u64], row: usize, v: bool) {
    if get(col, row) != v {
        flip(col, row);
    }
}

impl Tableau {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Self {
        let rows = 2 * n + 1;
        let words = rows.div_ceil(64);
        let mut x = vec![vec![0u64; words]; n];
        let mut z = vec![vec![0u64; words]; n];
        for q in 0..n {
            flip(&mut x[q], q);
            flip(&mut z[q], n + q);
        }
        Self { n, words, x, z, r: vec![0u64; words] }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn h(&mut self, a: usize) {
        for w in 0..self.words {
            self.r[w] ^= self.x[a][w] & self.z[a][w];
        }
        std::mem::swap(&mut self.x[a], &mut self.z[a]);
    }

    pub fn s(&mut self, a: usize) {
        for w in 0..self.words {
            let (xa, za) = (self.x[a][w], self.z[a][w]);
            self.r[w] ^= xa & za;
            self.z[a][w] = za ^ xa;
        }
    }

    pub fn sdg(&mut self, a: usize) {
        for w in 0..self.words {
            let (xa, za) = (self.x[a][w], self.z[a][w]);
            self.r[w] ^= xa & !za;
            self.z[a][w] = za ^ xa;
        }
    }

    pub fn cnot(&mut self, a: usize, b: usize) {
        for w in 0..self.words {
            let (xa, za, xb, zb) = (self.x[a][w], self.z[a][w], self.x[b][w], self.z[b][w]);
            self.r[w] ^= xa & zb & !(xb ^ za);
            self.x[b][w] = xb ^ xa;
            self.z[a][w] = za ^ zb;
        }
    }

    /// `|ψ⟩ ← P|ψ⟩` for `P` on qubits `qubits` (global phase dropped).
    pub fn apply_pauli(&mut self, qubits: &[usize], p: &PauliString) {
        for (i, &q) in qubits.iter().enumerate() {
            let (px, pz) = (p.x(i), p.z(i));
            for w in 0..self.words {
                let mut flip = 0u64;
                if px {
                    flip ^= self.z[q][w];
                }
                if pz {
                    flip ^= self.x[q][w];
                }
                self.r[w] ^= flip;
            }
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.cnot(a, b);
        self.cnot(b, a);
        self.cnot(a, b);
    }

    /// Stabilizer generator `i` as a Pauli string.
    pub fn stabilizer(&self, i: usize) -> PauliString {
        self.row(self.n + i)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.stabilizer(i)).collect()
    }

    fn row(&self, row: usize) -> PauliString {
        let xs: Vec<bool> = (0..self.n).map(|q| get(&self.x[q], row)).collect();
        let zs: Vec<bool> = (0..self.n).map(|q| get(&self.z[q], row)).collect();
        // (-1)^r ∏ letters with Y = i·XZ
        let ys = xs.iter().zip(&zs).filter(|(a, b)| **a && **b).count();
        let k = (2 * get(&self.r, row) as usize + ys) % 4;
        PauliString::from_bits(&xs, &zs, crate::pauli::Phase::from_exponent(k as u8))
            .expect("masks have equal length")
    }

    /// Row `h` ← row `i` · row `h`, with the sign rule of Aaronson–Gottesman.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut total: i32 = 2 * get(&self.r, h) as i32 + 2 * get(&self.r, i) as i32;
        for q in 0..self.n {
            let (x1, z1) = (get(&self.x[q], i), get(&self.z[q], i));
            let (x2, z2) = (get(&self.x[q], h), get(&self.z[q], h));
            total += g(x1, z1, x2, z2);
            if x1 {
                flip(&mut self.x[q], h);
            }
            if z1 {
                flip(&mut self.z[q], h);
            }
        }
        set(&mut self.r, h, total.rem_euclid(4) == 2);
    }

    /// Probability that measuring `Z_a` yields 1: 0, ½ or 1.
    pub fn prob_one(&self, a: usize) -> f64 {
        if (self.n..2 * self.n).any(|p| get(&self.x[a], p)) {
            return 0.5;
        }
        let mut scratch = self.clone();
        if scratch.deterministic_outcome(a) {
            1.0
        } else {
            0.0
        }
    }

    fn deterministic_outcome(&mut self, a: usize) -> bool {
        let s = 2 * self.n;
        for q in 0..self.n {
            set(&mut self.x[q], s, false);
            set(&mut self.z[q], s, false);
        }
        set(&mut self.r, s, false);
        for i in 0..self.n {
            if get(&self.x[a], i) {
                self.rowsum(s, i + self.n);
            }
        }
        get(&self.r, s)
    }

    /// Measures `Z_a`. With `forced = Some(b)` the state is projected onto
    /// outcome `b`; otherwise the outcome is `u ≥ P(0)`. Returns the outcome
    /// and its probability. A forced zero-probability outcome leaves the
    /// state unchanged.
    pub fn measure(&mut self, a: usize, forced: Option<bool>, u: f64) -> (bool, f64) {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&p| get(&self.x[a], p)) {
            let outcome = forced.unwrap_or(u >= 0.5);
            for i in 0..2 * n {
                if i != p && get(&self.x[a], i) {
                    self.rowsum(i, p);
                }
            }
            for q in 0..n {
                let (xq, zq) = (get(&self.x[q], p), get(&self.z[q], p));
                set(&mut self.x[q], p - n, xq);
                set(&mut self.z[q], p - n, zq);
                set(&mut self.x[q], p, false);
                set(&mut self.z[q], p, q == a);
            }
            let rp = get(&self.r, p);
            set(&mut self.r, p - n, rp);
            set(&mut self.r, p, outcome);
            (outcome, 0.5)
        } else {
            let det = self.deterministic_outcome(a);
            match forced {
                Some(b) if b != det => (b, 0.0),
                _ => (det, 1.0),
            }
        }
    }
}

/// Exponent of `i` picked up when multiplying Pauli `(x1,z1)` onto `(x2,z2)`.
#[inline]
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}
