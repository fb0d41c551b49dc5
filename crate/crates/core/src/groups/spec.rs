//! Group specifications and the `A:<n>` / `PSL2:<q>` / `permgen:<file>` grammar.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::field::{ff_make, FiniteFieldSpec, GaloisField};
use crate::error::{Error, Result};
use crate::numtheory::{factorial, gcd, prime_power};

pub const DEFAULT_MAX_ORDER: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    Alt(usize),
    Sym(usize),
    SL2(u64),
    PSL2(u64),
    /// Permutations of `0..degree` given as image arrays.
    GeneratedPerm {
        degree: usize,
        generators: Vec<Vec<u8>>,
    },
    /// Row-major 2x2 matrices over the given field.
    GeneratedMat2 {
        generators: Vec<[u32; 4]>,
        field: FiniteFieldSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub max_order: u64,
    /// Source text the spec was parsed from, used as the report label.
    pub label: String,
}

impl GroupSpec {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let label = default_label(&kind);
        let spec = GroupSpec {
            kind,
            max_order: DEFAULT_MAX_ORDER,
            label,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn alt(n: usize) -> Result<Self> {
        Self::new(GroupKind::Alt(n))
    }

    pub fn sym(n: usize) -> Result<Self> {
        Self::new(GroupKind::Sym(n))
    }

    pub fn sl2(q: u64) -> Result<Self> {
        Self::new(GroupKind::SL2(q))
    }

    pub fn psl2(q: u64) -> Result<Self> {
        Self::new(GroupKind::PSL2(q))
    }

    pub fn with_max_order(mut self, cap: u64) -> Self {
        self.max_order = cap;
        self
    }

    /// Parses `A:<n>`, `S:<n>`, `SL2:<q>`, `PSL2:<q>`, `permgen:<file>` or
    /// `matgen:<file>,q=<q>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::SpecSyntax(text.to_string()))?;
        let int = |s: &str| -> Result<u64> {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::SpecSyntax(text.to_string()))
        };
        let kind = match head.trim() {
            "A" => GroupKind::Alt(int(rest)? as usize),
            "S" => GroupKind::Sym(int(rest)? as usize),
            "SL2" => GroupKind::SL2(int(rest)?),
            "PSL2" => GroupKind::PSL2(int(rest)?),
            "permgen" => {
                let path = PathBuf::from(rest.trim());
                let generators = read_perm_generators(&path)?;
                let degree = generators.iter().map(Vec::len).max().unwrap_or(1);
                GroupKind::GeneratedPerm { degree, generators }
            }
            "matgen" => {
                let (file, q) = rest
                    .rsplit_once(',')
                    .ok_or_else(|| Error::SpecSyntax(text.to_string()))?;
                let q = q
                    .trim()
                    .strip_prefix("q=")
                    .ok_or_else(|| Error::SpecSyntax(text.to_string()))?;
                let q = int(q)?;
                let (p, k) = prime_power(q).ok_or_else(|| {
                    Error::UnsupportedParameters(format!("{q} is not a prime power"))
                })?;
                let field = ff_make(p, k)?;
                let generators = read_mat_generators(Path::new(file.trim()), q)?;
                GroupKind::GeneratedMat2 { generators, field }
            }
            _ => return Err(Error::SpecSyntax(text.to_string())),
        };
        let mut spec = GroupSpec {
            kind,
            max_order: DEFAULT_MAX_ORDER,
            label: text.to_string(),
        };
        if let Some(cap) = std::env::var("MIXER_MAX_ORDER")
            .ok()
            .and_then(|v| v.parse().ok())
        {
            spec.max_order = cap;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            GroupKind::Alt(n) | GroupKind::Sym(n) => {
                if !(3..=12).contains(n) {
                    return Err(Error::UnsupportedParameters(format!(
                        "degree {n} outside 3..=12"
                    )));
                }
            }
            GroupKind::SL2(q) | GroupKind::PSL2(q) => {
                if prime_power(*q).is_none() {
                    return Err(Error::UnsupportedParameters(format!(
                        "{q} is not a prime power"
                    )));
                }
                if *q < 4 {
                    return Err(Error::UnsupportedParameters(format!("q = {q} < 4")));
                }
            }
            GroupKind::GeneratedPerm { degree, generators } => {
                if *degree == 0 || *degree > 255 {
                    return Err(Error::UnsupportedParameters(format!(
                        "permutation degree {degree}"
                    )));
                }
                for g in generators {
                    let mut seen = vec![false; g.len()];
                    for &i in g {
                        if i as usize >= g.len() || std::mem::replace(&mut seen[i as usize], true) {
                            return Err(Error::UnsupportedParameters(
                                "generator is not a permutation".into(),
                            ));
                        }
                    }
                }
            }
            GroupKind::GeneratedMat2 { generators, field } => {
                let f = GaloisField::new(field.clone())?;
                for m in generators {
                    if m.iter().any(|&v| v >= f.size()) {
                        return Err(Error::UnsupportedParameters(format!(
                            "matrix entry out of range in {m:?}"
                        )));
                    }
                    let det = f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]));
                    if det != 1 {
                        return Err(Error::UnsupportedParameters(format!(
                            "generator {m:?} has determinant {det}, expected 1"
                        )));
                    }
                }
            }
        }
        if let Some(order) = self.predicted_order() {
            if order > self.max_order {
                return Err(Error::CapExceeded {
                    order,
                    cap: self.max_order,
                });
            }
        }
        Ok(())
    }

    /// Known order for the named families.
    pub fn predicted_order(&self) -> Option<u64> {
        match &self.kind {
            GroupKind::Alt(n) => Some(factorial(*n as u64) / 2),
            GroupKind::Sym(n) => Some(factorial(*n as u64)),
            GroupKind::SL2(q) => Some(q * (q * q - 1)),
            GroupKind::PSL2(q) => Some(q * (q * q - 1) / gcd(2, q - 1)),
            _ => None,
        }
    }

    /// Parameters used by the deviation bound shapes.
    pub fn family(&self) -> Family {
        match &self.kind {
            GroupKind::Alt(n) => Family::Alternating { n: *n },
            GroupKind::SL2(q) | GroupKind::PSL2(q) => Family::LieType { q: *q, rank: 1 },
            _ => Family::Other,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Which normalizer the bound shapes use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Alternating { n: usize },
    LieType { q: u64, rank: u32 },
    Other,
}

fn default_label(kind: &GroupKind) -> String {
    match kind {
        GroupKind::Alt(n) => format!("A:{n}"),
        GroupKind::Sym(n) => format!("S:{n}"),
        GroupKind::SL2(q) => format!("SL2:{q}"),
        GroupKind::PSL2(q) => format!("PSL2:{q}"),
        GroupKind::GeneratedPerm { degree, generators } => {
            format!("permgen[{degree};{}]", generators.len())
        }
        GroupKind::GeneratedMat2 { generators, field } => {
            format!("matgen[{};q={}]", generators.len(), field.size())
        }
    }
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

fn read_perm_generators(path: &Path) -> Result<Vec<Vec<u8>>> {
    let lines = read_lines(path)?;
    let mut cycles = Vec::new();
    let mut degree = 1;
    for (line, text) in &lines {
        let c = parse_cycles(text).map_err(|msg| Error::Parse {
            path: path.to_path_buf(),
            line: *line,
            msg,
        })?;
        degree = degree.max(c.iter().flatten().copied().max().unwrap_or(0) + 1);
        cycles.push(c);
    }
    if degree > 255 {
        return Err(Error::UnsupportedParameters(format!(
            "degree {degree} > 255"
        )));
    }
    Ok(cycles
        .into_iter()
        .map(|c| perm_from_cycles(&c, degree))
        .collect())
}

/// Parses 1-based cycle notation such as `(1 2 3)(4,5)` into 0-based cycles.
pub fn parse_cycles(text: &str) -> std::result::Result<Vec<Vec<usize>>, String> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_start = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` in `{text}`"))?;
        let end = body_start
            .find(')')
            .ok_or_else(|| format!("unclosed cycle in `{text}`"))?;
        let body = &body_start[..end];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok.parse().map_err(|_| format!("bad point `{tok}`"))?;
            if v == 0 {
                return Err("points are numbered from 1".into());
            }
            if cycle.contains(&(v - 1)) || out.iter().any(|c: &Vec<usize>| c.contains(&(v - 1))) {
                return Err(format!("point {v} repeated"));
            }
            cycle.push(v - 1);
        }
        if !cycle.is_empty() {
            out.push(cycle);
        }
        rest = body_start[end + 1..].trim_start();
    }
    Ok(out)
}

pub fn perm_from_cycles(cycles: &[Vec<usize>], degree: usize) -> Vec<u8> {
    let mut img: Vec<u8> = (0..degree as u8).collect();
    for c in cycles {
        for (i, &from) in c.iter().enumerate() {
            img[from] = c[(i + 1) % c.len()] as u8;
        }
    }
    img
}

fn read_mat_generators(path: &Path, q: u64) -> Result<Vec<[u32; 4]>> {
    let lines = read_lines(path)?;
    lines
        .iter()
        .map(|(line, text)| {
            let err = |msg: String| Error::Parse {
                path: path.to_path_buf(),
                line: *line,
                msg,
            };
            let vals: Vec<u32> = text
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| err(format!("bad entry `{t}`")))
                })
                .collect::<Result<_>>()?;
            if vals.len() != 4 {
                return Err(err(format!("expected 4 entries, got {}", vals.len())));
            }
            if vals.iter().any(|&v| v as u64 >= q) {
                return Err(err(format!("entry out of range for q = {q}")));
            }
            Ok([vals[0], vals[1], vals[2], vals[3]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_families() {
        assert_eq!(GroupSpec::parse("A:5").unwrap().kind, GroupKind::Alt(5));
        assert_eq!(GroupSpec::parse("S:4").unwrap().kind, GroupKind::Sym(4));
        assert_eq!(
            GroupSpec::parse("PSL2:11").unwrap().kind,
            GroupKind::PSL2(11)
        );
        assert_eq!(GroupSpec::parse(" SL2:9 ").unwrap().kind, GroupKind::SL2(9));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            GroupSpec::parse("PSL2:6"),
            Err(Error::UnsupportedParameters(_))
        ));
        assert!(matches!(
            GroupSpec::parse("A:2"),
            Err(Error::UnsupportedParameters(_))
        ));
        assert!(matches!(GroupSpec::parse("B:5"), Err(Error::SpecSyntax(_))));
        assert!(matches!(GroupSpec::parse("A5"), Err(Error::SpecSyntax(_))));
        assert!(matches!(GroupSpec::parse("A:x"), Err(Error::SpecSyntax(_))));
        assert!(matches!(
            GroupSpec::parse("A:11"),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn cycles_round_trip() {
        let c = parse_cycles("(1 2 3)(4,5)").unwrap();
        assert_eq!(c, vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(perm_from_cycles(&c, 5), vec![1, 2, 0, 4, 3]);
        assert!(parse_cycles("(1 2 1)").is_err());
        assert!(parse_cycles("(0 1)").is_err());
        assert!(parse_cycles("1 2").is_err());
        assert_eq!(parse_cycles("()").unwrap(), Vec::<Vec<usize>>::new());
    }

    #[test]
    fn generator_files() {
        let dir = tempfile_dir();
        let perm = dir.join("s3.txt");
        std::fs::write(&perm, "(1 2)\n(1 2 3)\n").unwrap();
        let spec = GroupSpec::parse(&format!("permgen:{}", perm.display())).unwrap();
        match spec.kind {
            GroupKind::GeneratedPerm { degree, generators } => {
                assert_eq!(degree, 3);
                assert_eq!(generators, vec![vec![1, 0, 2], vec![1, 2, 0]]);
            }
            k => panic!("{k:?}"),
        }
        let mat = dir.join("sl2_5.txt");
        std::fs::write(&mat, "1,1,0,1\n1,0,1,1\n").unwrap();
        let spec = GroupSpec::parse(&format!("matgen:{},q=5", mat.display())).unwrap();
        assert!(matches!(spec.kind, GroupKind::GeneratedMat2 { .. }));
        std::fs::write(&mat, "1,1,1,1\n").unwrap();
        assert!(GroupSpec::parse(&format!("matgen:{},q=5", mat.display())).is_err());
    }

    fn tempfile_dir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!("mixer-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }
}
