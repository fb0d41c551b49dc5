//! Element encodings and the arithmetic engines behind them.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::field::GaloisField;

/// Canonical byte encoding of a group element.
pub type Bytes = SmallVec<[u8; 16]>;

/// A group element tagged with the table it came from.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pub(crate) group: u64,
    pub(crate) bytes: Bytes,
}

impl Element {
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.hex())
    }
}

/// Arithmetic for one family of encodings.
#[derive(Clone, Debug)]
pub enum Engine {
    /// Permutations of `0..degree` stored as image arrays. Products act on
    /// the right: `i^(gh) = (i^g)^h`.
    Perm { degree: usize },
    /// 2x2 matrices of determinant one, row-major. With `projective` set,
    /// elements are the canonical lifts of `{M, -M}`.
    Mat2 {
        field: Arc<GaloisField>,
        projective: bool,
    },
}

impl Engine {
    fn width(field: &GaloisField) -> usize {
        if field.size() <= 256 {
            1
        } else {
            4
        }
    }

    pub fn identity(&self) -> Bytes {
        match self {
            Engine::Perm { degree } => (0..*degree as u8).collect(),
            Engine::Mat2 { field, .. } => self.encode_matrix(field, [1, 0, 0, 1]),
        }
    }

    pub(crate) fn encode_matrix(&self, field: &GaloisField, m: [u32; 4]) -> Bytes {
        let w = Self::width(field);
        let mut out = Bytes::new();
        for v in m {
            if w == 1 {
                out.push(v as u8);
            } else {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
        out
    }

    pub(crate) fn decode_matrix(&self, bytes: &[u8]) -> [u32; 4] {
        match self {
            Engine::Mat2 { field, .. } => {
                let w = Self::width(field);
                let mut m = [0u32; 4];
                for (i, slot) in m.iter_mut().enumerate() {
                    *slot = if w == 1 {
                        bytes[i] as u32
                    } else {
                        u32::from_be_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap())
                    };
                }
                m
            }
            Engine::Perm { .. } => panic!("not a matrix engine"),
        }
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Bytes {
        match self {
            Engine::Perm { .. } => a.iter().map(|&i| b[i as usize]).collect(),
            Engine::Mat2 { field, .. } => {
                let x = self.decode_matrix(a);
                let y = self.decode_matrix(b);
                let f = field;
                let m = [
                    f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
                    f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
                    f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
                    f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
                ];
                self.canonical_matrix(m)
            }
        }
    }

    pub fn inv(&self, a: &[u8]) -> Bytes {
        match self {
            Engine::Perm { degree } => {
                let mut out: Bytes = SmallVec::from_elem(0, *degree);
                for (i, &img) in a.iter().enumerate() {
                    out[img as usize] = i as u8;
                }
                out
            }
            Engine::Mat2 { field, .. } => {
                // det = 1, so the inverse is the adjugate.
                let x = self.decode_matrix(a);
                self.canonical_matrix([x[3], field.neg(x[1]), field.neg(x[2]), x[0]])
            }
        }
    }

    /// Canonical form of raw bytes; idempotent.
    pub fn canonical(&self, a: &[u8]) -> Bytes {
        match self {
            Engine::Perm { .. } => Bytes::from_slice(a),
            Engine::Mat2 { .. } => self.canonical_matrix(self.decode_matrix(a)),
        }
    }

    pub(crate) fn canonical_matrix(&self, m: [u32; 4]) -> Bytes {
        match self {
            Engine::Mat2 { field, projective } => {
                let mut m = m;
                if *projective {
                    // Keep the lift whose first nonzero entry v has v < -v.
                    if let Some(&v) = m.iter().find(|&&v| v != 0) {
                        if field.neg(v) < v {
                            for e in m.iter_mut() {
                                *e = field.neg(*e);
                            }
                        }
                    }
                }
                self.encode_matrix(field, m)
            }
            Engine::Perm { .. } => panic!("not a matrix engine"),
        }
    }

    /// Human-readable rendering: 1-based cycle notation or a bracketed matrix.
    pub fn render(&self, a: &[u8]) -> String {
        match self {
            Engine::Perm { .. } => cycle_notation(a),
            Engine::Mat2 { .. } => {
                let m = self.decode_matrix(a);
                format!("[{},{};{},{}]", m[0], m[1], m[2], m[3])
            }
        }
    }
}

/// 1-based cycle notation, `()` for the identity.
pub fn cycle_notation(perm: &[u8]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(i + 1).to_string());
            first = false;
            i = perm[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_rendering() {
        assert_eq!(cycle_notation(&[1, 2, 3, 4, 0]), "(1 2 3 4 5)");
        assert_eq!(cycle_notation(&[0, 1, 2]), "()");
        assert_eq!(cycle_notation(&[1, 0, 3, 2]), "(1 2)(3 4)");
    }

    #[test]
    fn psl2_canonical_identifies_negatives() {
        for q in [5u64, 7, 9, 11, 13] {
            let field = Arc::new(GaloisField::from_order(q).unwrap());
            let eng = Engine::Mat2 {
                field: field.clone(),
                projective: true,
            };
            let n = q as u32;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let det = field.sub(field.mul(a, d), field.mul(b, c));
                            if det != 1 {
                                continue;
                            }
                            let m = [a, b, c, d];
                            let neg = m.map(|v| field.neg(v));
                            let cm = eng.canonical_matrix(m);
                            assert_eq!(cm, eng.canonical_matrix(neg));
                            assert_eq!(eng.canonical(&cm), cm);
                        }
                    }
                }
            }
        }
    }
}
