"""Dense statevector simulation for equivalence checking at desk scale."""
from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit
from .qasm import eval_param

_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "tdg": np.array([[1, 0], [0, np.exp(-1j * math.pi / 4)]], dtype=complex),
}

# basis order (c, d): 00, 01, 10, 11
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def _u3(theta: float, phi: float, lam: float) -> np.ndarray:
    ct, st = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [ct, -np.exp(1j * lam) * st],
            [np.exp(1j * phi) * st, np.exp(1j * (phi + lam)) * ct],
        ],
        dtype=complex,
    )


def gate_matrix(name: str, params: tuple[str, ...]) -> np.ndarray:
    if name in _FIXED_1Q:
        return _FIXED_1Q[name]
    if name == "cx":
        return _CX
    if name == "swap":
        return _SWAP
    vals = [eval_param(p) for p in params]
    if name == "rx":
        return _u3(vals[0], -math.pi / 2, math.pi / 2)
    if name == "ry":
        return _u3(vals[0], 0.0, 0.0)
    if name == "rz":
        return np.array(
            [[np.exp(-1j * vals[0] / 2), 0], [0, np.exp(1j * vals[0] / 2)]], dtype=complex
        )
    if name == "u1":
        return np.array([[1, 0], [0, np.exp(1j * vals[0])]], dtype=complex)
    if name == "u2":
        return _u3(math.pi / 2, vals[0], vals[1])
    if name == "u3":
        return _u3(vals[0], vals[1], vals[2])
    raise ValueError(f"no matrix for gate '{name}'")


def apply_gate(state: np.ndarray, name: str, qubits: tuple[int, ...],
               params: tuple[str, ...] = ()) -> np.ndarray:
    """Apply one gate to a state shaped (2,)*n, qubit i on axis i."""
    mat = gate_matrix(name, params)
    k = len(qubits)
    tensor = mat.reshape((2,) * (2 * k))
    state = np.tensordot(tensor, state, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(state, list(range(k)), list(qubits))


def simulate(circuit: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    """Run the circuit on `state` (default all-zeros); measures/barriers skipped."""
    n = circuit.num_qubits
    if state is None:
        state = np.zeros((2,) * n, dtype=complex)
        state[(0,) * n] = 1.0
    else:
        state = np.asarray(state, dtype=complex).reshape((2,) * n)
    for g in circuit.gates:
        if g.name in ("measure", "barrier"):
            continue
        state = apply_gate(state, g.name, g.qubits, g.params)
    return state


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    vec /= np.linalg.norm(vec)
    return vec.reshape((2,) * n)


def basis_state(n: int, index: int) -> np.ndarray:
    state = np.zeros((2,) * n, dtype=complex)
    state[tuple((index >> (n - 1 - i)) & 1 for i in range(n))] = 1.0
    return state
