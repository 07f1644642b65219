//! Stabilizer code definitions and validation.
//!
//! Steane code labeling: the three plaquettes are `{0,1,2,3}`, `{1,2,4,5}`
//! and `{2,3,5,6}`. They pairwise share two qubits, all three share qubit 2,
//! and together they cover the seven data qubits. Any labeling with that
//! intersection pattern is equivalent up to a qubit permutation; this one is
//! a convention of this crate.
//!
//! Rotated distance-3 surface code labeling: data qubit `(row, col)` is index
//! `3 * row + col`. Z checks are `{0,1,3,4}`, `{4,5,7,8}`, `{3,6}`, `{2,5}`;
//! X checks are `{1,2,4,5}`, `{3,4,6,7}`, `{0,1}`, `{7,8}`.

use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};
use crate::pauli::{classify_unchecked, LogicalClass, Pauli, PauliString};

pub const STEANE_PLAQUETTES: [[usize; 4]; 3] = [[0, 1, 2, 3], [1, 2, 4, 5], [2, 3, 5, 6]];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    k: usize,
    generators: Vec<PauliString>,
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
}

impl StabilizerCode {
    /// Assembles a code without validating it; see [`validate_code`].
    pub fn new(
        name: impl Into<String>,
        n: usize,
        k: usize,
        generators: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
    ) -> Result<Self> {
        for p in generators.iter().chain(&logical_x).chain(&logical_z) {
            if p.num_qubits() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: p.num_qubits(),
                });
            }
        }
        Ok(StabilizerCode {
            name: name.into(),
            n,
            k,
            generators,
            logical_x,
            logical_z,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliString] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliString] {
        &self.logical_z
    }

    /// Every element of the stabilizer group, identity first.
    pub fn stabilizer_group(&self) -> Vec<PauliString> {
        let mut group = vec![PauliString::identity(self.n)];
        for g in &self.generators {
            let extra: Vec<_> = group.iter().map(|e| e.multiply(g).unwrap()).collect();
            group.extend(extra);
        }
        group
    }

    /// Minimum-weight element of `p`'s stabilizer coset, ties broken by
    /// [`PauliString::canonical_cmp`].
    pub fn coset_leader(&self, p: &PauliString) -> PauliString {
        self.stabilizer_group()
            .iter()
            .map(|s| s.multiply(p).unwrap())
            .min_by(|a, b| a.canonical_cmp(b))
            .unwrap()
    }

    /// Renders the text format: `n k name`, generator lines, then `LX`/`LZ`
    /// lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.name);
        for g in &self.generators {
            let _ = writeln!(out, "{g}");
        }
        for l in &self.logical_x {
            let _ = writeln!(out, "LX {l}");
        }
        for l in &self.logical_z {
            let _ = writeln!(out, "LZ {l}");
        }
        out
    }

    /// Parses the text format. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty code file"))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(hline, "expected `n k name` header"))?;
        let k: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(hline, "expected `n k name` header"))?;
        let name = parts.collect::<Vec<_>>().join(" ");
        if name.is_empty() {
            return Err(parse_err(hline, "missing code name"));
        }
        if n == 0 || n > crate::pauli::MAX_QUBITS {
            return Err(parse_err(hline, format!("unsupported qubit count {n}")));
        }
        let parse = |line: usize, s: &str| -> Result<PauliString> {
            let p: PauliString = s.parse().map_err(|_| parse_err(line, format!("bad Pauli {s:?}")))?;
            if p.num_qubits() != n {
                return Err(parse_err(line, format!("expected {n} qubits, found {}", p.num_qubits())));
            }
            Ok(p)
        };
        let (mut gens, mut lx, mut lz) = (Vec::new(), Vec::new(), Vec::new());
        for (line, l) in lines {
            if let Some(rest) = l.strip_prefix("LX") {
                lx.push(parse(line, rest.trim())?);
            } else if let Some(rest) = l.strip_prefix("LZ") {
                lz.push(parse(line, rest.trim())?);
            } else {
                if !lx.is_empty() || !lz.is_empty() {
                    return Err(parse_err(line, "generator after logical operators"));
                }
                gens.push(parse(line, l)?);
            }
        }
        StabilizerCode::new(name, n, k, gens, lx, lz)
    }
}

fn css_code(
    name: &str,
    n: usize,
    z_checks: &[&[usize]],
    x_checks: &[&[usize]],
    logical_x: &[usize],
    logical_z: &[usize],
) -> StabilizerCode {
    let generators = z_checks
        .iter()
        .map(|s| PauliString::uniform(n, s, Pauli::Z))
        .chain(x_checks.iter().map(|s| PauliString::uniform(n, s, Pauli::X)))
        .collect();
    StabilizerCode::new(
        name,
        n,
        1,
        generators,
        vec![PauliString::uniform(n, logical_x, Pauli::X)],
        vec![PauliString::uniform(n, logical_z, Pauli::Z)],
    )
    .expect("built-in code dimensions are consistent")
}

/// [[7,1,3]] Steane code; Z generators first, then X generators, both in
/// plaquette order.
pub fn steane() -> StabilizerCode {
    let p = STEANE_PLAQUETTES;
    css_code(
        "steane",
        7,
        &[&p[0], &p[1], &p[2]],
        &[&p[0], &p[1], &p[2]],
        &[0, 1, 4],
        &[0, 1, 4],
    )
}

/// [[5,1,3]] code generated by four cyclic shifts of `XZZXI`.
pub fn five_qubit() -> StabilizerCode {
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    StabilizerCode::new(
        "five-qubit",
        5,
        1,
        gens,
        vec!["XXXXX".parse().unwrap()],
        vec!["ZZZZZ".parse().unwrap()],
    )
    .unwrap()
}

/// Rotated distance-3 surface code on a 3x3 data grid; Z generators first.
pub fn rotated_surface_d3() -> StabilizerCode {
    css_code(
        "surface-d3",
        9,
        &[&[0, 1, 3, 4], &[4, 5, 7, 8], &[3, 6], &[2, 5]],
        &[&[1, 2, 4, 5], &[3, 4, 6, 7], &[0, 1], &[7, 8]],
        &[0, 3, 6],
        &[0, 1, 2],
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}

/// GF(2) rank of the symplectic rows `(x | z)`.
pub fn symplectic_rank(rows: &[PauliString]) -> usize {
    let mut vecs: Vec<u128> = rows
        .iter()
        .map(|p| p.x_bits() as u128 | ((p.z_bits() as u128) << 64))
        .collect();
    let mut rank = 0;
    for bit in 0..128 {
        let Some(pivot) = (rank..vecs.len()).find(|&i| (vecs[i] >> bit) & 1 == 1) else {
            continue;
        };
        vecs.swap(rank, pivot);
        let pv = vecs[rank];
        for (i, v) in vecs.iter_mut().enumerate() {
            if i != rank && (*v >> bit) & 1 == 1 {
                *v ^= pv;
            }
        }
        rank += 1;
    }
    rank
}

pub fn validate_code(code: &StabilizerCode) -> ValidationReport {
    let mut failures = Vec::new();
    let gens = code.generators();
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate().skip(i + 1) {
            if a.anticommutes_unchecked(b) == 1 {
                failures.push(format!("generators {i} ({a}) and {j} ({b}) anticommute"));
            }
        }
    }
    let rank = symplectic_rank(gens);
    if rank != gens.len() {
        failures.push(format!("generators are dependent: rank {rank} < {}", gens.len()));
    }
    if gens.len() + code.k() != code.n() {
        failures.push(format!(
            "expected n - k = {} generators, found {}",
            code.n() - code.k().min(code.n()),
            gens.len()
        ));
    }
    if code.logical_x().len() != code.k() || code.logical_z().len() != code.k() {
        failures.push(format!(
            "expected {} logical X and Z representatives, found {} and {}",
            code.k(),
            code.logical_x().len(),
            code.logical_z().len()
        ));
    }
    let logicals: Vec<(&str, usize, &PauliString)> = code
        .logical_x()
        .iter()
        .enumerate()
        .map(|(i, l)| ("LX", i, l))
        .chain(code.logical_z().iter().enumerate().map(|(i, l)| ("LZ", i, l)))
        .collect();
    for &(kind, i, l) in &logicals {
        for (gi, g) in gens.iter().enumerate() {
            if l.anticommutes_unchecked(g) == 1 {
                failures.push(format!("{kind}[{i}] anticommutes with generator {gi}"));
            }
        }
    }
    for (a, &(ka, ia, la)) in logicals.iter().enumerate() {
        for &(kb, ib, lb) in logicals.iter().skip(a + 1) {
            let should_anticommute = ka != kb && ia == ib;
            let anticommutes = la.anticommutes_unchecked(lb) == 1;
            if anticommutes != should_anticommute {
                failures.push(format!(
                    "{ka}[{ia}] and {kb}[{ib}] should {}",
                    if should_anticommute { "anticommute" } else { "commute" }
                ));
            }
        }
    }
    ValidationReport { failures }
}

/// Code distance by exhaustive search over Paulis of increasing weight.
pub fn distance(code: &StabilizerCode) -> Result<usize> {
    const MAX_N: usize = 12;
    if code.n() > MAX_N {
        return Err(Error::UnsupportedSize(format!(
            "brute-force distance needs n <= {MAX_N}, got {}",
            code.n()
        )));
    }
    let n = code.n();
    for w in 1..=n {
        let mut found = false;
        for_each_pauli_of_weight(n, w, &mut |p| {
            if classify_unchecked(p, code) == LogicalClass::Logical {
                found = true;
            }
            !found
        });
        if found {
            return Ok(w);
        }
    }
    Err(Error::Precondition(format!("code {} has no logical operators", code.name())))
}

/// Calls `f` for every Pauli of exact weight `w`; stops when `f` returns
/// false.
pub fn for_each_pauli_of_weight(n: usize, w: usize, f: &mut dyn FnMut(&PauliString) -> bool) {
    fn rec(
        n: usize,
        start: usize,
        left: usize,
        cur: &mut PauliString,
        f: &mut dyn FnMut(&PauliString) -> bool,
    ) -> bool {
        if left == 0 {
            return f(cur);
        }
        for q in start..=n - left {
            for l in [Pauli::X, Pauli::Y, Pauli::Z] {
                cur.set(q, l);
                if !rec(n, q + 1, left - 1, cur, f) {
                    cur.set(q, Pauli::I);
                    return false;
                }
            }
            cur.set(q, Pauli::I);
        }
        true
    }
    if w > n {
        return;
    }
    let mut cur = PauliString::identity(n);
    rec(n, 0, w, &mut cur, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_type(code: &StabilizerCode, letter: Pauli) -> usize {
        code.generators()
            .iter()
            .filter(|g| g.support().all(|q| g.get(q) == letter))
            .count()
    }

    #[test]
    fn steane_structure() {
        let c = steane();
        assert_eq!((c.n(), c.k()), (7, 1));
        assert_eq!(count_type(&c, Pauli::X), 3);
        assert_eq!(count_type(&c, Pauli::Z), 3);
        assert!(c.generators().iter().all(|g| g.weight() == 4));
        let support = |g: &PauliString| g.support().collect::<Vec<_>>();
        for gx in &c.generators()[3..] {
            assert!(c.generators()[..3].iter().any(|gz| support(gz) == support(gx)));
        }
        assert!(validate_code(&c).is_ok());
        assert_eq!(distance(&c).unwrap(), 3);
    }

    #[test]
    fn five_qubit_structure() {
        let c = five_qubit();
        let gens: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(gens, ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
        assert_eq!(symplectic_rank(c.generators()), 4);
        assert!(validate_code(&c).is_ok());
        assert_eq!(distance(&c).unwrap(), 3);
    }

    #[test]
    fn surface_structure() {
        let c = rotated_surface_d3();
        assert_eq!(c.generators().len(), 8);
        let w4 = c.generators().iter().filter(|g| g.weight() == 4).count();
        let w2 = c.generators().iter().filter(|g| g.weight() == 2).count();
        assert_eq!((w4, w2), (4, 4));
        assert!(validate_code(&c).is_ok());
        assert_eq!(distance(&c).unwrap(), 3);
    }

    #[test]
    fn anticommuting_generators_fail_validation() {
        let c = StabilizerCode::new(
            "bad",
            1,
            0,
            vec!["X".parse().unwrap(), "Z".parse().unwrap()],
            vec![],
            vec![],
        )
        .unwrap();
        let report = validate_code(&c);
        assert!(!report.is_ok());
        assert!(report.first_failure().unwrap().contains("anticommute"));
    }

    #[test]
    fn two_qubit_detection_code_has_distance_one() {
        let c = StabilizerCode::new(
            "[[2,1,1]]",
            2,
            1,
            vec!["XX".parse().unwrap()],
            vec!["XI".parse().unwrap()],
            vec!["ZZ".parse().unwrap()],
        )
        .unwrap();
        assert!(validate_code(&c).is_ok());
        assert_eq!(distance(&c).unwrap(), 1);
    }

    #[test]
    fn distance_rejects_large_codes() {
        let n = 13;
        let c = StabilizerCode::new(
            "big",
            n,
            n,
            vec![],
            (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
        )
        .unwrap();
        assert!(matches!(distance(&c), Err(Error::UnsupportedSize(_))));
    }

    #[test]
    fn text_round_trip_and_errors() {
        for c in [steane(), five_qubit(), rotated_surface_d3()] {
            assert_eq!(StabilizerCode::from_text(&c.to_text()).unwrap(), c);
        }
        assert!(StabilizerCode::from_text("").is_err());
        assert!(StabilizerCode::from_text("2 1\nXX").is_err());
        assert!(StabilizerCode::from_text("2 1 c\nXXX").is_err());
        assert!(StabilizerCode::from_text("2 1 c\nLX XI\nXX").is_err());
    }

    #[test]
    fn coset_leader_is_minimal() {
        let c = steane();
        let g = c.generators()[0];
        let e = PauliString::single(7, 0, Pauli::Z).multiply(&g).unwrap();
        assert_eq!(c.coset_leader(&e), PauliString::single(7, 0, Pauli::Z));
    }
}
