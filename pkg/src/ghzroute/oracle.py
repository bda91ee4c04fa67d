"""Dense state-vector oracle for the graph rewrite rules.

Everything here works on explicit amplitude vectors, independently of the
graph-level shortcuts in :mod:`ghzroute.graph`.  Measurements are
post-selected on the ``+1`` outcome; for X and Y outcomes the standard local
correction is undone before comparing with the predicted graph state.
Fidelities quotient out global phase.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ghzroute.errors import OracleError
from ghzroute.graph import (
    Graph,
    LocalComplement,
    MeasurementRecord,
    Step,
    apply_step,
    component_of,
    delete_vertex,
    induced_subgraph,
    is_complete_on,
    is_star_on,
    local_complement,
    measure_x,
    measure_y,
)

MAX_QUBITS = 14

_S2 = 1 / np.sqrt(2)
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = _S2 * np.array([[1, 1], [1, -1]], dtype=complex)

PLUS = _S2 * np.array([1, 1], dtype=complex)
ZERO = np.array([1, 0], dtype=complex)
Y_PLUS = _S2 * np.array([1, 1j], dtype=complex)


def _exp_pauli(pauli: np.ndarray, angle: float) -> np.ndarray:
    """``exp(-i angle P)`` for a Pauli matrix ``P``."""
    return np.cos(angle) * I2 - 1j * np.sin(angle) * pauli


SQRT_MINUS_IX = _exp_pauli(X, np.pi / 4)   # exp(-i pi/4 X)
SQRT_PLUS_IZ = _exp_pauli(Z, -np.pi / 4)   # exp(+i pi/4 Z)
SQRT_MINUS_IZ = _exp_pauli(Z, np.pi / 4)
SQRT_PLUS_IY = _S2 * (I2 + 1j * Y)         # squares to iY


@dataclass
class PureState:
    """Amplitudes as a tensor with one axis per qubit, axes ordered as ``qubit_order``."""

    amplitudes: np.ndarray
    qubit_order: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.qubit_order)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape((2,) * n)

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_order)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def axis(self, v: int) -> int:
        try:
            return self.qubit_order.index(v)
        except ValueError:
            raise OracleError(f"qubit {v} is not part of this state") from None

    def apply(self, gate: np.ndarray, v: int) -> PureState:
        ax = self.axis(v)
        out = np.tensordot(gate, self.amplitudes, axes=([1], [ax]))
        return PureState(np.moveaxis(out, 0, ax), self.qubit_order)

    def project(self, v: int, bra_vector: np.ndarray) -> tuple[PureState, float]:
        """Project qubit ``v`` onto ``bra_vector``, drop it and renormalize."""
        ax = self.axis(v)
        out = np.tensordot(np.conj(bra_vector), self.amplitudes, axes=([0], [ax]))
        prob = float(np.vdot(out, out).real)
        if prob < 1e-14:
            raise OracleError(f"post-selected branch on qubit {v} has zero probability")
        order = self.qubit_order[:ax] + self.qubit_order[ax + 1:]
        return PureState(out / np.sqrt(prob), order), prob

    def reorder(self, order: Sequence[int]) -> PureState:
        order = tuple(order)
        if sorted(order) != sorted(self.qubit_order):
            raise OracleError("reorder needs the same qubits")
        perm = [self.axis(v) for v in order]
        return PureState(np.transpose(self.amplitudes, perm), order)


def fidelity(a: PureState, b: PureState) -> float:
    if set(a.qubit_order) != set(b.qubit_order):
        raise OracleError(f"states live on different qubits: {a.qubit_order} vs {b.qubit_order}")
    b = b.reorder(a.qubit_order)
    return float(abs(np.vdot(a.vector, b.vector)) ** 2)


def _cap(n: int) -> None:
    if n > MAX_QUBITS:
        raise OracleError(f"{n} qubits exceeds the oracle cap of {MAX_QUBITS}")


def graph_state(g: Graph) -> PureState:
    """Amplitude of basis string ``b`` is ``2**(-n/2) * (-1)**(edges inside b)``."""
    order = tuple(sorted(g.vertices))
    n = len(order)
    _cap(n)
    index = {v: i for i, v in enumerate(order)}
    bits = (np.arange(2 ** n)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    parity = np.zeros(2 ** n, dtype=np.int64)
    for a, b in g.edges():
        parity ^= bits[:, index[a]] & bits[:, index[b]]
    amps = (1 - 2 * parity) * 2 ** (-n / 2)
    return PureState(amps.astype(complex), order)


def product_state(states: Iterable[PureState]) -> PureState:
    amps = np.ones((), dtype=complex)
    order: tuple[int, ...] = ()
    for s in states:
        amps = np.multiply.outer(amps, s.amplitudes)
        order += s.qubit_order
    return PureState(amps, order)


def ghz_state(qubits: Sequence[int]) -> PureState:
    n = len(qubits)
    vec = np.zeros(2 ** n, dtype=complex)
    vec[0] = vec[-1] = _S2
    return PureState(vec, tuple(qubits))


# -- state-level versions of the graph rules -------------------------------------


def apply_lc_unitary(state: PureState, g: Graph, v: int) -> PureState:
    """Local Clifford mapping the state of ``g`` to the state of ``LC_v(g)``."""
    out = state.apply(SQRT_MINUS_IX, v)
    for w in g.neighbors(v):
        out = out.apply(SQRT_PLUS_IZ, w)
    return out


def measure_z_state(state: PureState, v: int) -> PureState:
    return state.project(v, ZERO)[0]


def measure_y_state(state: PureState, g: Graph, v: int) -> PureState:
    """Y outcome +1, with the neighbor phase corrections undone."""
    out = state.project(v, Y_PLUS)[0]
    for b in g.neighbors(v):
        out = out.apply(SQRT_MINUS_IZ.conj().T, b)
    return out


def measure_x_state(state: PureState, g: Graph, v: int, w: int) -> PureState:
    """X outcome +1, with the correction on ``w`` and on ``N_v - N_w - {w}`` undone."""
    out = state.project(v, PLUS)[0]
    out = out.apply(SQRT_PLUS_IY.conj().T, w)
    for c in g.neighbors(v) - g.neighbors(w) - {w}:
        out = out.apply(Z, c)
    return out


def replay(g: Graph, transcript: Iterable[Step]) -> tuple[PureState, Graph]:
    """Run a transcript on the state of ``g``; returns the final state and graph."""
    state = graph_state(g)
    for step in transcript:
        if isinstance(step, LocalComplement):
            state = apply_lc_unitary(state, g, step.vertex)
        elif step.basis == "Z":
            state = measure_z_state(state, step.vertex)
        elif step.basis == "Y":
            state = measure_y_state(state, g, step.vertex)
        else:
            w = step.special_neighbor
            if w is None:
                state = measure_z_state(state, step.vertex)
            else:
                state = measure_x_state(state, g, step.vertex, w)
        g, _ = apply_step(g, step)
    return state, g


# -- checks ------------------------------------------------------------------------


def check_lc_identity(g: Graph, v: int) -> float:
    _cap(len(g))
    return fidelity(graph_state(local_complement(g, v)), apply_lc_unitary(graph_state(g), g, v))


def check_z_deletion(g: Graph, v: int) -> float:
    _cap(len(g))
    return fidelity(graph_state(delete_vertex(g, v)), measure_z_state(graph_state(g), v))


def check_y_measurement(g: Graph, v: int) -> float:
    _cap(len(g))
    return fidelity(graph_state(measure_y(g, v)), measure_y_state(graph_state(g), g, v))


def check_x_measurement(g: Graph, v: int, w: int | None = None) -> float:
    _cap(len(g))
    h, rec = measure_x(g, v, w)
    if rec.special_neighbor is None:
        return check_z_deletion(g, v)
    return fidelity(graph_state(h), measure_x_state(graph_state(g), g, v, rec.special_neighbor))


def replay_fidelity(g: Graph, transcript: Iterable[Step]) -> float:
    """Fidelity between the replayed state and the state of the graph-level result."""
    state, final = replay(g, transcript)
    return fidelity(graph_state(final), state)


def ghz_fidelity(g: Graph, targets: Sequence[int], state: PureState | None = None) -> float:
    """Overlap of ``state`` (default: the state of ``g``) with a GHZ state on ``targets``.

    The targets must form an isolated component of ``g`` that is complete or a
    star.  A complete graph is first turned into a star by the LC unitary at
    ``targets[0]``; Hadamards on the leaves then give the GHZ state.  The
    remaining qubits are compared against the graph state of the rest of ``g``.
    """
    targets = list(targets)
    if len(targets) < 2 or len(set(targets)) != len(targets):
        raise OracleError("need at least two distinct targets")
    g.require(*targets)
    if component_of(g, targets[0]) != set(targets):
        raise OracleError(f"targets {targets} are not an isolated component")
    _cap(len(g))
    if state is None:
        state = graph_state(g)
    sub = induced_subgraph(g, targets)
    if len(targets) > 2 and is_complete_on(sub, targets):
        state = apply_lc_unitary(state, sub, targets[0])
        sub = local_complement(sub, targets[0])
    centers = [c for c in targets if is_star_on(sub, targets, c)]
    if not centers:
        raise OracleError("target component is neither complete nor a star")
    center = centers[0]
    for leaf in targets:
        if leaf != center:
            state = state.apply(H, leaf)
    rest = [v for v in g.vertices if v not in set(targets)]
    expected = product_state([ghz_state(sorted(targets)), graph_state(induced_subgraph(g, rest))])
    return fidelity(expected, state)


# -- randomized sweep -------------------------------------------------------------


def random_graph(rng: np.random.Generator, max_vertices: int = 10, min_vertices: int = 1) -> Graph:
    n = int(rng.integers(min_vertices, max_vertices + 1))
    p = float(rng.uniform(0.1, 0.9))
    edges = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1) if rng.random() < p]
    return Graph(range(1, n + 1), edges)


@dataclass
class SweepResult:
    cases: int
    checks: int
    min_lc: float
    min_z: float
    min_y: float
    min_x: float
    max_norm_error: float

    def passed(self, tol: float = 1e-10) -> bool:
        return min(self.min_lc, self.min_z, self.min_y, self.min_x) >= 1 - tol and self.max_norm_error <= 1e-12


def sweep(seed: int = 0, cases: int = 100, max_vertices: int = 10) -> SweepResult:
    """Check every rewrite rule at every vertex of ``cases`` seeded random graphs."""
    rng = np.random.default_rng(seed)
    mins = {"lc": 1.0, "z": 1.0, "y": 1.0, "x": 1.0}
    norm_err = 0.0
    checks = 0
    for _ in range(cases):
        g = random_graph(rng, max_vertices)
        norm_err = max(norm_err, abs(graph_state(g).norm() - 1))
        for v in g:
            mins["lc"] = min(mins["lc"], check_lc_identity(g, v))
            mins["z"] = min(mins["z"], check_z_deletion(g, v))
            mins["y"] = min(mins["y"], check_y_measurement(g, v))
            ns = sorted(g.neighbors(v))
            w = ns[int(rng.integers(len(ns)))] if ns else None
            mins["x"] = min(mins["x"], check_x_measurement(g, v, w))
            checks += 4
    return SweepResult(cases, checks, mins["lc"], mins["z"], mins["y"], mins["x"], norm_err)
