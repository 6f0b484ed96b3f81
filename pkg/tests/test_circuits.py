from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qumode_bridge.circuits import (Circuit, Gate, circuit_unitary, compile_cphase, compile_cubic,
                                    compile_displacement, compile_kinetic, compile_phase,
                                    compile_qft, compile_shifted_qft, cubic_cnot_count,
                                    emit_circuit_text, gate_count, parse_circuit_text,
                                    phase_cnot_count, simulate)
from qumode_bridge.circuits.compile import (COMPILERS, QUOTED_CNOT_COUNTS, cubic_coefficients,
                                            dense_oracle, qft_cnot_count)
from qumode_bridge.circuits.gates import CNOT, H, PHASE, RZ, ZZ, ZZZ, X, rounded
from qumode_bridge.discrete import momentum_operator, shifted_dft
from qumode_bridge.errors import ValidationError
from qumode_bridge.grids import make_grid

I2 = np.eye(2)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PZ = np.diag([1.0, -1.0]).astype(complex)
HAD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])


def kron_on(n, ops):
    """Kronecker product with ``ops[q]`` on qubit ``q`` (qubit 0 leftmost)."""
    return reduce(np.kron, [ops.get(q, I2) for q in range(n)])


def dense_gate(n, g):
    """Independent dense oracle for a single gate."""
    if g.kind == "PHASE":
        return np.exp(1j * g.angle) * np.eye(2**n)
    if g.kind == "RZ":
        return kron_on(n, {g.qubits[0]: np.diag([np.exp(-0.5j * g.angle), np.exp(0.5j * g.angle)])})
    if g.kind in ("ZZ", "ZZZ"):
        Z = kron_on(n, {q: PZ for q in g.qubits})
        return np.diag(np.exp(-1j * g.angle * np.diag(Z)))
    if g.kind == "H":
        return kron_on(n, {g.qubits[0]: HAD})
    if g.kind == "X":
        return kron_on(n, {g.qubits[0]: PX})
    c, t = g.qubits
    return kron_on(n, {c: P0}) + kron_on(n, {c: P1, t: PX})


def dense_circuit(c):
    U = np.eye(2**c.n_qubits, dtype=complex)
    for g in c.gates:
        U = dense_gate(c.n_qubits, g) @ U
    return U


gate_st = st.one_of(
    st.builds(lambda q, t: RZ(q, t), st.integers(0, 2), st.floats(-7, 7)),
    st.builds(lambda q, t: ZZ(q, (q + 1) % 3, t), st.integers(0, 2), st.floats(-7, 7)),
    st.builds(lambda t: ZZZ(0, 1, 2, t), st.floats(-7, 7)),
    st.builds(lambda q: H(q), st.integers(0, 2)),
    st.builds(lambda q: X(q), st.integers(0, 2)),
    st.builds(lambda q, d: CNOT(q, (q + d) % 3), st.integers(0, 2), st.integers(1, 2)),
    st.builds(lambda a: PHASE(a), st.floats(-7, 7)),
)


@given(st.lists(gate_st, max_size=25))
@settings(max_examples=100, deadline=None)
def test_simulator_matches_kron_oracle(gates):
    c = Circuit(3, gates)
    assert np.allclose(circuit_unitary(c), dense_circuit(c), atol=1e-12)


@given(st.lists(gate_st, max_size=25))
@settings(max_examples=100, deadline=None)
def test_text_round_trip(gates):
    c = Circuit(3, gates)
    assert parse_circuit_text(emit_circuit_text(c)) == rounded(c)


@given(st.lists(gate_st, max_size=25), st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_simulate_preserves_norm(gates, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    out = simulate(Circuit(3, gates), v)
    assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(v), rel=1e-12)


def test_simulate_basics():
    v = np.arange(4, dtype=complex)
    assert np.array_equal(simulate(Circuit(2), v), v)
    assert np.array_equal(simulate(Circuit(2, [X(0)]), v), v[[2, 3, 0, 1]])
    g = make_grid(3)
    F = shifted_dft(g)
    for j in range(g.n_x):
        assert np.allclose(simulate(compile_shifted_qft(g), np.eye(g.n_x)[:, j]), F[:, j])
    batch = np.eye(8, dtype=complex)[:, :3]
    assert simulate(compile_qft(3), batch).shape == (8, 3)


def test_circuit_algebra():
    c = Circuit(2, [RZ(0, 0.3), CNOT(0, 1), H(1)])
    assert np.allclose(circuit_unitary(c + c.inverse()), np.eye(4), atol=1e-12)
    assert np.allclose(circuit_unitary(c.expand()), circuit_unitary(c))
    zz = Circuit(3, [ZZ(0, 2, 0.4), ZZZ(0, 1, 2, -0.3)])
    ex = zz.expand()
    assert all(g.kind in ("CNOT", "RZ") for g in ex.gates)
    assert np.allclose(circuit_unitary(ex), circuit_unitary(zz), atol=1e-12)
    assert gate_count(ex).cnot == gate_count(zz).cnot_equiv
    sh = c.shifted(2, 4)
    assert sh.n_qubits == 4 and sh.gates[0].qubits == (2,)
    with pytest.raises(ValidationError):
        Circuit(2, [CNOT(0, 2)])
    with pytest.raises(ValidationError):
        Gate("RZ", (0,))
    with pytest.raises(ValidationError):
        Gate("CNOT", (1, 1))
    with pytest.raises(ValidationError):
        Gate("FOO", (0,))


def test_text_format():
    assert emit_circuit_text(Circuit(3)) == "# qubits=3\n"
    txt = emit_circuit_text(compile_displacement(make_grid(2), 1.0))
    assert [line.split()[0] for line in txt.splitlines()[1:]] == ["RZ", "RZ"]
    for bad in ["RZ q0 0.1\n", "# qubits=2\nRZ q0\n", "# qubits=2\nFOO q0\n",
                "# qubits=2\nCNOT q0 0.1\n", "# qubits=2\nH q0 0.5\n"]:
        with pytest.raises(ValidationError):
            parse_circuit_text(bad)
    c = parse_circuit_text("# qubits=2\n# comment\n\nH q1\nRZ q0 0.25\n")
    assert c == Circuit(2, [H(1), RZ(0, 0.25)])


def test_gate_count_empty():
    assert gate_count(Circuit(4)).cnot_equiv == 0
    assert gate_count(Circuit(4)) == gate_count(Circuit(2))


@pytest.mark.parametrize("n_q", [1, 2, 3, 5])
@pytest.mark.parametrize("kind, eta", [("displacement", 1.0), ("phase", 0.7), ("cubic", 0.3)])
def test_diagonal_compilers_match_oracle(n_q, kind, eta):
    g = make_grid(n_q)
    comp = {"displacement": compile_displacement, **COMPILERS}[kind]
    U = circuit_unitary(comp(g, eta))
    assert np.max(np.abs(U - np.diag(dense_oracle(kind, g, eta)))) < 1e-10
    assert np.allclose(circuit_unitary(comp(g, 0.0)), np.eye(g.n_x), atol=1e-14)


def test_cubic_coefficients_expand_x_cubed():
    g = make_grid(4)
    m, lam = cubic_coefficients(g)
    Z = [np.diag(kron_on(4, {q: PZ})).real for q in range(4)]
    X3 = sum(c * Z[p] * Z[q] * Z[r] for (p, q, r), c in m.items()) + 0.5 * sum(
        lam[s] * Z[s] for s in range(4))
    assert np.allclose(X3, g.x_points() ** 3, atol=1e-12)


@pytest.mark.parametrize("n_q", [1, 2, 3])
def test_cphase_matches_kron_oracle(n_q):
    g = make_grid(n_q)
    U = circuit_unitary(compile_cphase(g, 1.0))
    x = g.x_points()
    assert np.max(np.abs(U - np.diag(np.exp(-1j * np.kron(x, x))))) < 1e-10
    assert np.allclose(circuit_unitary(compile_cphase(g, 0.0)), np.eye(g.n_x**2))


@pytest.mark.parametrize("n_q, shifts", [(1, (0, 0)), (3, (0, 0)), (4, (0.5, 0.25)),
                                         (5, (-0.3, 0.1))])
def test_shifted_qft_matches_dense(n_q, shifts):
    g = make_grid(n_q)
    U = circuit_unitary(compile_shifted_qft(g, *shifts))
    assert np.max(np.abs(U - shifted_dft(g, *shifts))) < 1e-10


@pytest.mark.parametrize("n_q", [1, 2, 4, 6])
def test_standard_qft(n_q):
    N = 2**n_q
    k = np.arange(N)
    W = np.exp(2j * np.pi * np.outer(k, k) / N) / np.sqrt(N)
    qft = compile_qft(n_q)
    assert np.max(np.abs(circuit_unitary(qft) - W)) < 1e-10
    assert gate_count(qft).zz == n_q * (n_q - 1) // 2
    assert gate_count(qft).cnot_equiv == qft_cnot_count(n_q)


@pytest.mark.parametrize("n_q, mu", [(4, 1.0), (3, 2.0)])
def test_kinetic_matches_eigen_exponential(n_q, mu):
    g = make_grid(n_q, mu)
    P = momentum_operator(g)
    w, V = np.linalg.eigh(P)
    expect = (V * np.exp(-0.5j * w**2)) @ V.conj().T
    c = compile_kinetic(g, 0.5)
    assert np.max(np.abs(circuit_unitary(c) - expect)) < 1e-10
    assert gate_count(c).h == 2 * n_q
    assert np.allclose(circuit_unitary(compile_kinetic(g, 0.0)), np.eye(g.n_x), atol=1e-12)


def test_probe_vectors_up_to_ten_qubits():
    rng = np.random.default_rng(0)
    for n_q in (8, 10):
        g = make_grid(n_q)
        probes = rng.normal(size=(g.n_x, 20)) + 1j * rng.normal(size=(g.n_x, 20))
        for kind, eta in (("phase", 0.7), ("cubic", 0.3), ("displacement", 1.1)):
            comp = {"displacement": compile_displacement, **COMPILERS}[kind]
            out = simulate(comp(g, eta), probes)
            ref = dense_oracle(kind, g, eta)[:, None] * probes
            assert np.linalg.norm(out - ref) / np.linalg.norm(ref) < 1e-8
        out = simulate(compile_shifted_qft(g, 0.2, -0.4), probes)
        assert np.linalg.norm(out - shifted_dft(g, 0.2, -0.4) @ probes) < 1e-8 * np.linalg.norm(probes)


def test_counts_phase_and_cphase():
    for n_q in range(1, 13):
        g = make_grid(n_q)
        assert gate_count(compile_phase(g, 0.1)).cnot_equiv == phase_cnot_count(n_q) == \
            QUOTED_CNOT_COUNTS["phase"](n_q)
        assert gate_count(compile_cphase(g, 0.1)).cnot_equiv == 2 * n_q**2 == \
            QUOTED_CNOT_COUNTS["cphase"](n_q)
        assert gate_count(compile_displacement(g, 0.1)) == gate_count(Circuit(n_q, [RZ(0, 1)] * n_q))
    assert gate_count(compile_phase(make_grid(5), 1.0)).cnot_equiv == 20


def test_cubic_count_matches_circuit_structure():
    for n_q in range(1, 13):
        c = compile_cubic(make_grid(n_q), 0.1)
        assert gate_count(c).zzz == n_q * (n_q - 1) * (n_q - 2) // 6
        assert gate_count(c).cnot_equiv == cubic_cnot_count(n_q) == c.declared_cnot


def test_cubic_count_quoted_formula():
    """The quoted closed form (2/3) n (n+1) (n+2), e.g. 40 for three qubits."""
    assert gate_count(compile_cubic(make_grid(3), 0.1)).cnot_equiv == 40


def test_diagonal_entries_match_unitary_and_wide_oracle():
    from qumode_bridge.circuits import diagonal_entries
    g = make_grid(3)
    c = compile_cphase(g, 0.8)
    idx = np.arange(2**c.n_qubits)
    assert np.allclose(diagonal_entries(c, idx), np.diag(circuit_unitary(c)), atol=1e-12)
    assert np.allclose(dense_oracle("cphase", g, 0.8, idx[5:9]),
                       dense_oracle("cphase", g, 0.8)[5:9])
    with pytest.raises(ValidationError):
        diagonal_entries(compile_qft(2), [0])
    # 24-qubit cphase checked on sampled basis states only
    g12 = make_grid(12)
    k = np.random.default_rng(5).integers(0, 2**24, 2000)
    err = np.abs(diagonal_entries(compile_cphase(g12, 0.37), k) - dense_oracle("cphase", g12, 0.37, k))
    assert np.max(err) < 1e-9
