use flagbridge::circuit::{characterize, verify_measures, CircuitStats};
use flagbridge::ft::check_fault_tolerance;
use flagbridge::mapping::{bare_steane, builtin_mapping, validate_layout, BUILTIN_MAPPINGS};

fn stats(a: usize, o: usize, f: usize, s: usize, t: usize) -> CircuitStats {
    CircuitStats {
        ancillas: a,
        operations: o,
        f_cnots: f,
        s_cnots: s,
        timesteps: t,
    }
}

#[test]
fn shipped_statistics() {
    let expected = [
        ("steane-c1-L1", stats(6, 72, 12, 24, 50)),
        ("steane-c1-L2", stats(6, 72, 12, 24, 48)),
        ("steane-c2-L1", stats(6, 72, 16, 20, 40)),
        ("steane-c2-L2", stats(5, 62, 12, 20, 36)),
        ("steane-c3-L2", stats(4, 54, 12, 18, 26)),
        ("sc-d3", stats(8, 48, 0, 24, 8)),
    ];
    for (name, want) in expected {
        let m = builtin_mapping(name).unwrap();
        assert_eq!(characterize(m.procedure.circuits()), want, "{name}");
    }
}

#[test]
fn shipped_mappings_pass_all_validators() {
    for name in BUILTIN_MAPPINGS {
        let m = builtin_mapping(name).unwrap();
        let report = validate_layout(m.procedure.circuits(), &m.topology, &m.layout).unwrap();
        assert!(report.is_ok(), "{name}: {:?}", report.violations);
        for c in m.procedure.circuits() {
            assert!(verify_measures(c).unwrap().is_pass(), "{name}");
        }
        let ft = check_fault_tolerance(&m.procedure);
        assert!(ft.fault_tolerant, "{name}: {} counterexamples", ft.counterexamples.len());
    }
}

#[test]
fn bare_steane_is_not_fault_tolerant() {
    let ft = check_fault_tolerance(&bare_steane());
    assert!(!ft.fault_tolerant);
}
