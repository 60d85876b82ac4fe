//! Property tests over the core algebra: phase normalization, Pauli group
//! structure, circuit adjoints, serialization round trips, and end-to-end
//! split soundness on arbitrary gate sequences.

use proptest::collection::vec;
use proptest::prelude::*;

use cliffsplit::border::{self, SplitSide};
use cliffsplit::circuit::{Circuit, Gate, PauliLetter, PauliString, Phase, Sign};
use cliffsplit::densesim::Statevector;
use cliffsplit::oracle;

fn arb_phase() -> impl Strategy<Value = Phase> {
    (-40i64..=40, 1i64..=12).prop_map(|(num, den)| Phase::new(num, den))
}

fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let q2 = (0..n, 0..n - 1).prop_map(move |(a, mut b)| {
        if b >= a {
            b += 1;
        }
        (a, b)
    });
    prop_oneof![
        q.clone().prop_map(Gate::h),
        q.clone().prop_map(Gate::x),
        q.clone().prop_map(Gate::y),
        q.clone().prop_map(Gate::z),
        q.clone().prop_map(Gate::s),
        q.clone().prop_map(Gate::sdg),
        q.clone().prop_map(Gate::t),
        q.clone().prop_map(Gate::tdg),
        (arb_phase(), q).prop_map(|(p, q)| Gate::rz(p, q)),
        q2.clone().prop_map(|(a, b)| Gate::cx(a, b)),
        q2.prop_map(|(a, b)| Gate::cz(a, b)),
    ]
}

fn arb_circuit(n: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    vec(arb_gate(n), 0..max_gates)
        .prop_map(move |gates| Circuit::from_gates(n, gates).unwrap())
}

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let letters = vec(
        prop_oneof![
            Just(PauliLetter::I),
            Just(PauliLetter::X),
            Just(PauliLetter::Y),
            Just(PauliLetter::Z)
        ],
        n,
    );
    let sign = prop_oneof![
        Just(Sign::Plus),
        Just(Sign::Minus),
        Just(Sign::PlusI),
        Just(Sign::MinusI)
    ];
    (letters, sign).prop_map(|(ls, s)| PauliString::from_letters(&ls, s))
}

proptest! {
    #[test]
    fn phase_normalization_is_idempotent(num in -200i64..=200, den in 1i64..=48) {
        let p = Phase::new(num, den);
        let q = Phase::new(p.numer(), p.denom());
        prop_assert_eq!(p.clone(), q);
        // represented angle preserved modulo 2π
        let tau = std::f64::consts::TAU;
        let a = (std::f64::consts::PI * num as f64 / den as f64).rem_euclid(tau);
        let b = p.radians_concrete().rem_euclid(tau);
        prop_assert!((a - b).abs() < 1e-9 || (tau - (a - b).abs()) < 1e-9);
    }

    #[test]
    fn phase_addition_is_commutative_and_associative(
        a in arb_phase(), b in arb_phase(), c in arb_phase()
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn adjoint_is_an_involution(c in arb_circuit(4, 30)) {
        prop_assert_eq!(c.adjoint().adjoint(), c);
    }

    #[test]
    fn depth_is_monotone_under_append(c in arb_circuit(4, 25), g in arb_gate(4)) {
        let before = c.depth();
        let mut c = c;
        c.push(g);
        prop_assert!(c.depth() >= before);
        prop_assert!(c.depth() <= c.gate_count());
    }

    #[test]
    fn pauli_product_is_closed_and_matches_matrices(
        p in arb_pauli(3), q in arb_pauli(3)
    ) {
        let prod = p.mul(&q);
        let via = oracle::pauli_matrix(&p).mul(&oracle::pauli_matrix(&q));
        prop_assert!(oracle::pauli_matrix(&prod).max_abs_diff(&via) < 1e-12);
        // commutation agrees with the matrix commutator
        let (pm, qm) = (oracle::pauli_matrix(&p), oracle::pauli_matrix(&q));
        let comm = pm.mul(&qm).sub(&qm.mul(&pm));
        prop_assert_eq!(p.commutes_with(&q), comm.frobenius_norm() < 1e-12);
    }

    #[test]
    fn circuit_json_round_trips(c in arb_circuit(3, 20)) {
        let js = serde_json::to_string(&c).unwrap();
        let back: Circuit = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(c, back);
    }

    #[test]
    fn pauli_display_parse_round_trips(p in arb_pauli(4)) {
        let shown = p.to_string();
        let back: PauliString = shown.parse().unwrap();
        prop_assert_eq!(p, back);
    }

    // the full split pipeline stays sound on arbitrary gate soups, including
    // rz angles far outside the Clifford+T family
    #[test]
    fn splits_recompose_on_arbitrary_circuits(c in arb_circuit(3, 24)) {
        for side in [SplitSide::Left, SplitSide::Right] {
            let s = border::split(&c, side).unwrap();
            prop_assert!(s.clifford.is_clifford());
            prop_assert!((0.0..=1.0).contains(&s.depth_reduction));
            let direct = Statevector::zero_state(3).evolved(&c).unwrap();
            let recomposed = Statevector::zero_state(3).evolved(&s.recomposed()).unwrap();
            prop_assert!(
                (direct.overlap(&recomposed) - 1.0).abs() < 1e-9,
                "split recomposition drifted for {:?}", c.gates
            );
        }
    }
}
