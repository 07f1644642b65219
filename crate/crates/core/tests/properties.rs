use flagbridge::circuit::{parse_circuit_set, write_circuit_set, Circuit};
use flagbridge::code::{five_qubit, rotated_surface_d3, steane, StabilizerCode};
use flagbridge::dataset::{parse_dataset, write_dataset, Dataset, Sample};
use flagbridge::lut::LookupTables;
use flagbridge::mapping::{builtin_mapping, BUILTIN_MAPPINGS};
use flagbridge::mc::{wilson_interval, Z_999};
use flagbridge::noise::{enumerate_single_faults, propagate, Fault};
use flagbridge::pauli::{in_stabilizer_group, PauliString};
use proptest::prelude::*;

fn shipped_circuits() -> Vec<Circuit> {
    BUILTIN_MAPPINGS
        .iter()
        .flat_map(|name| builtin_mapping(name).unwrap().procedure.circuits().to_vec())
        .collect()
}

fn codes() -> [StabilizerCode; 3] {
    [steane(), five_qubit(), rotated_surface_d3()]
}

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (any::<u64>(), any::<u64>()).prop_map(move |(x, z)| PauliString::from_words(n, x, z))
}

fn product(a: &PauliString, b: &PauliString) -> PauliString {
    a.multiply(b).unwrap()
}

/// A random subset of a circuit's single faults, chosen by index.
fn pick(faults: &[Fault], idx: &[usize]) -> Vec<Fault> {
    idx.iter().map(|i| faults[i % faults.len()]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn propagation_is_linear(
        which in any::<usize>(),
        a in prop::collection::vec(any::<usize>(), 0..6),
        b in prop::collection::vec(any::<usize>(), 0..6),
        ia in any::<(u64, u64)>(),
        ib in any::<(u64, u64)>(),
    ) {
        let circuits = shipped_circuits();
        let c = &circuits[which % circuits.len()];
        let n = c.num_data();
        let faults = enumerate_single_faults(c, true).unwrap();
        let (fa, fb) = (pick(&faults, &a), pick(&faults, &b));
        let (pa, pb) = (PauliString::from_words(n, ia.0, ia.1), PauliString::from_words(n, ib.0, ib.1));
        let ra = propagate(c, &fa, &pa).unwrap();
        let rb = propagate(c, &fb, &pb).unwrap();
        let both: Vec<Fault> = fa.iter().chain(&fb).copied().collect();
        let rab = propagate(c, &both, &product(&pa, &pb)).unwrap();
        prop_assert_eq!(rab.outcomes, ra.outcomes.xor(&rb.outcomes));
        prop_assert_eq!(rab.residual, product(&ra.residual, &rb.residual));
    }

    #[test]
    fn coset_leader_is_equivalent_and_minimal(which in 0usize..3, raw in any::<(u64, u64)>()) {
        let code = &codes()[which];
        let p = PauliString::from_words(code.n(), raw.0, raw.1);
        let leader = code.coset_leader(&p);
        prop_assert!(in_stabilizer_group(&product(&p, &leader), code).unwrap());
        prop_assert!(leader.weight() <= p.weight());
        prop_assert_eq!(code.coset_leader(&leader), leader);
    }

    #[test]
    fn closure_ignores_stabilizers(which in 0usize..3, raw in any::<(u64, u64)>(), pick_s in any::<usize>()) {
        let name = ["steane-c1-L1", "fivequbit-ibm16", "sc-d3"][which];
        let proc = builtin_mapping(name).unwrap().procedure;
        let code = proc.code();
        let p = PauliString::from_words(code.n(), raw.0, raw.1);
        let group = code.stabilizer_group();
        let s = &group[pick_s % group.len()];
        prop_assert_eq!(proc.closes_to_logical(&p), proc.closes_to_logical(&product(&p, s)));
    }

    #[test]
    fn wilson_contains_estimate(shots in 1u64..10_000_000, frac in 0.0f64..=1.0) {
        let failures = ((shots as f64) * frac) as u64;
        let (lo, hi) = wilson_interval(failures, shots, Z_999);
        let ler = failures as f64 / shots as f64;
        prop_assert!(0.0 <= lo && lo <= ler && ler <= hi && hi <= 1.0);
    }

    #[test]
    fn dataset_round_trips(
        m in 0usize..6,
        n in 1usize..6,
        rows in prop::collection::vec((any::<u64>(), any::<u64>(), any::<bool>()), 0..20),
    ) {
        let bits = |w: u64, len: usize| (0..len).map(|i| w >> i & 1 == 1).collect::<Vec<_>>();
        let data = Dataset {
            m,
            n,
            samples: rows
                .into_iter()
                .map(|(x, y, triggered)| Sample { x: bits(x, 2 * m), y: bits(y, 2 * n), triggered })
                .collect(),
        };
        let mut out = Vec::new();
        write_dataset(&mut out, &data).unwrap();
        prop_assert_eq!(parse_dataset(std::str::from_utf8(&out).unwrap()).unwrap(), data);
    }

    #[test]
    fn weight_one_errors_never_close_to_logical(which in 0usize..3, q in 0usize..9, letter in 1u64..4) {
        let name = ["steane-c2-L1", "fivequbit-surface17", "sc-d3"][which];
        let proc = builtin_mapping(name).unwrap().procedure;
        let n = proc.code().n();
        let q = q % n;
        let p = PauliString::from_words(n, (letter & 1) << q, (letter >> 1) << q);
        prop_assert!(!proc.closes_to_logical(&p));
    }

    #[test]
    fn pauli_text_round_trip(p in arb_pauli(17)) {
        prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p);
    }
}

#[test]
fn shipped_circuits_round_trip_as_text() {
    let circuits = shipped_circuits();
    let text = write_circuit_set(&circuits);
    assert_eq!(parse_circuit_set(&text).unwrap(), circuits);
}

#[test]
fn shipped_tables_round_trip_as_json() {
    for name in BUILTIN_MAPPINGS {
        let mut proc = builtin_mapping(name).unwrap().procedure;
        let lut = proc.build_decoder().unwrap().clone();
        assert_eq!(LookupTables::from_json(&lut.to_json()).unwrap(), lut, "{name}");
    }
}
