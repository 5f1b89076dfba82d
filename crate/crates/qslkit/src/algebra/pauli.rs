//! Pauli strings and the Pauli operator basis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{HermitianOperator, OperatorBasis};
use crate::error::{QslError, Result};
use crate::numerics::CMatrix;

/// Single-qubit Pauli axis, ordered I < X < Y < Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    fn matrix(self) -> CMatrix {
        let c = Complex64::new;
        match self {
            PauliAxis::I => CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]),
            PauliAxis::X => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            PauliAxis::Y => CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
            PauliAxis::Z => CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        }
    }

    fn symbol(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }
}

/// Tensor word over {I, X, Y, Z} with a real sign, most-significant qubit
/// first. Materializes to a Hermitian matrix with eigenvalues +-1 and unit
/// normalized Hilbert-Schmidt norm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    word: Vec<PauliAxis>,
    sign: i8,
}

impl PauliString {
    pub fn new(word: Vec<PauliAxis>, sign: i8) -> Result<Self> {
        if word.is_empty() {
            return Err(QslError::Parse("empty Pauli word".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(QslError::Parse(format!("sign must be +1 or -1, got {sign}")));
        }
        Ok(Self { word, sign })
    }

    pub fn qubits(&self) -> usize {
        self.word.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.word.len()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn word(&self) -> &[PauliAxis] {
        &self.word
    }

    pub fn is_identity_word(&self) -> bool {
        self.word.iter().all(|&a| a == PauliAxis::I)
    }

    /// True when every factor is I or Z (commutes with diagonal generators).
    pub fn is_diagonal(&self) -> bool {
        self.word
            .iter()
            .all(|&a| a == PauliAxis::I || a == PauliAxis::Z)
    }

    /// Dense matrix `sign * sigma_1 (x) ... (x) sigma_q`.
    pub fn to_operator(&self) -> HermitianOperator {
        let mut m = self.word[0].matrix();
        for axis in &self.word[1..] {
            m = m.kronecker(&axis.matrix());
        }
        if self.sign < 0 {
            m = -m;
        }
        HermitianOperator::new(m).expect("Pauli strings are Hermitian by construction")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        for axis in &self.word {
            write!(f, "{}", axis.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = QslError;

    /// Parses words like `"ZIX"` or `"-YY"`.
    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let word = body
            .chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(PauliAxis::I),
                'X' => Ok(PauliAxis::X),
                'Y' => Ok(PauliAxis::Y),
                'Z' => Ok(PauliAxis::Z),
                other => Err(QslError::Parse(format!("invalid Pauli letter '{other}' in \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(word, sign)
    }
}

#[derive(Serialize, Deserialize)]
struct PauliJson {
    word: String,
    sign: i8,
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let word: String = self.word.iter().map(|a| a.symbol()).collect();
        PauliJson { word, sign: self.sign }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = PauliJson::deserialize(deserializer)?;
        let mut parsed: PauliString = json.word.parse().map_err(serde::de::Error::custom)?;
        if json.sign == -1 {
            parsed.sign = -parsed.sign;
        } else if json.sign != 1 {
            return Err(serde::de::Error::custom("sign must be +1 or -1"));
        }
        Ok(parsed)
    }
}

/// All 4^q - 1 non-identity Pauli strings in lexicographic word order
/// (I < X < Y < Z, most-significant qubit first), as an orthonormal basis of
/// the traceless-Hermitian space. Supported for 1 <= q <= 4.
pub fn pauli_basis(qubits: usize) -> Result<OperatorBasis> {
    if !(1..=4).contains(&qubits) {
        return Err(QslError::Range(format!(
            "pauli_basis supports 1..=4 qubits, got {qubits}"
        )));
    }
    let strings = enumerate_pauli_words(qubits);
    let mut elements = Vec::with_capacity(strings.len());
    let mut labels = Vec::with_capacity(strings.len());
    for s in &strings {
        elements.push(s.to_operator());
        labels.push(s.to_string());
    }
    OperatorBasis::new(elements, labels, format!("pauli-{qubits}q"))
}

/// Non-identity Pauli words in lexicographic order, sign +1.
pub fn enumerate_pauli_words(qubits: usize) -> Vec<PauliString> {
    let axes = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
    let count = 4usize.pow(qubits as u32);
    let mut out = Vec::with_capacity(count - 1);
    for code in 1..count {
        let mut word = vec![PauliAxis::I; qubits];
        let mut rem = code;
        for slot in (0..qubits).rev() {
            word[slot] = axes[rem % 4];
            rem /= 4;
        }
        out.push(PauliString { word, sign: 1 });
    }
    out
}

/// Builds `sum_k coeff_k * P_k` from (coefficient, Pauli word) pairs.
pub fn pauli_sum(terms: &[(f64, &str)]) -> Result<HermitianOperator> {
    if terms.is_empty() {
        return Err(QslError::Range("empty Pauli sum".into()));
    }
    let first: PauliString = terms[0].1.parse()?;
    let n = first.dim();
    let mut m = CMatrix::zeros(n, n);
    for (coeff, word) in terms {
        let p: PauliString = word.parse()?;
        if p.dim() != n {
            return Err(QslError::Dimension {
                expected: n,
                got: p.dim(),
            });
        }
        m += p.to_operator().matrix() * Complex64::new(*coeff, 0.0);
    }
    HermitianOperator::new(m)
}
