"""Dense state-vector tools: pure states, POVMs, Born-rule measurement,
Haar-uniform sampling and the first and second moments of random states."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .bits import aux_for_matrices, deserialize_matrices, label, serialize_matrices
from .info import FiniteProbability
from .streams import chunk_sizes, map_ordered, stream_rngs

MAX_QUBITS = 5
NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-9
PSD_FLOOR = -1e-8
COMPLETENESS_TOL = 1e-8
EIG_FLOOR = 1e-12


class PovmValidationError(ValueError):
    """Raised by :func:`validate_povm`; ``condition`` names the failed check."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


def _qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _check_n(n: int, max_qubits: int = MAX_QUBITS) -> None:
    if not 0 <= n <= max_qubits:
        raise ValueError(f"n={n} outside 0..{max_qubits}")


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).ravel()
        _qubits(a.size)
        norm = np.vdot(a, a).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"squared norm {norm} is not 1")
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return _qubits(self.amplitudes.size)

    @classmethod
    def basis(cls, n: int, index: int) -> "PureState":
        a = np.zeros(2 ** n, dtype=complex)
        a[index] = 1.0
        return cls(a)

    def to_json(self) -> dict:
        return {"amplitudes": [[z.real, z.imag] for z in self.amplitudes.tolist()]}

    @classmethod
    def from_json(cls, obj) -> "PureState":
        return cls(np.array([complex(re, im) for re, im in obj["amplitudes"]]))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        _qubits(m.shape[0])
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(m).min() < PSD_FLOOR:
            raise ValueError("density matrix is not positive semidefinite")
        if abs(np.trace(m).real - 1.0) > NORM_TOL:
            raise ValueError("density matrix does not have unit trace")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        a = psi.amplitudes
        return cls(np.outer(a, a.conj()))


@dataclass(frozen=True)
class Povm:
    """Validated POVM; construct through :func:`validate_povm`."""

    elements: tuple
    labels: tuple

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n(self) -> int:
        return _qubits(self.dim)

    @property
    def outcomes(self) -> int:
        return len(self.elements)

    def stacked(self) -> np.ndarray:
        return np.stack(self.elements)

    def aux(self) -> str:
        """Auxiliary tape contents that relativize complexities to this POVM."""
        return aux_for_matrices(self.elements)

    def to_json(self) -> dict:
        return {"elements": [[[[z.real, z.imag] for z in row] for row in e.tolist()]
                             for e in self.elements],
                "labels": list(self.labels)}


def validate_povm(elements, labels=None) -> Povm:
    """Check shape, Hermiticity, positivity and completeness, in that order."""
    mats = [np.asarray(e, dtype=complex) for e in elements]
    if not mats:
        raise PovmValidationError("shape", "a POVM needs at least one element")
    d = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for k, e in enumerate(mats):
        if e.ndim != 2 or e.shape != (d, d):
            raise PovmValidationError("shape", f"element {k} has shape {e.shape}")
    try:
        _qubits(d)
    except ValueError as err:
        raise PovmValidationError("shape", str(err)) from None
    for k, e in enumerate(mats):
        dev = np.abs(e - e.conj().T).max()
        if dev > HERMITIAN_TOL:
            raise PovmValidationError("hermiticity", f"element {k} deviates by {dev:.3g}")
    for k, e in enumerate(mats):
        lo = np.linalg.eigvalsh(e).min()
        if lo < PSD_FLOOR:
            raise PovmValidationError("psd", f"element {k} has eigenvalue {lo:.3g}")
    dev = np.abs(sum(mats) - np.eye(d)).max()
    if dev > COMPLETENESS_TOL:
        raise PovmValidationError("completeness", f"elements sum to identity only within {dev:.3g}")
    if labels is None:
        labels = [label(k, len(mats)) for k in range(len(mats))]
    if len(labels) != len(mats) or len(set(labels)) != len(labels):
        raise PovmValidationError("shape", "labels must be distinct, one per element")
    return Povm(tuple(mats), tuple(labels))


def basis_povm(n: int) -> Povm:
    d = 2 ** n
    elements = []
    for k in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[k, k] = 1.0
        elements.append(e)
    return validate_povm(elements)


def _inv_sqrt(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(s)
    if w.min() < EIG_FLOOR:
        raise np.linalg.LinAlgError("degenerate frame operator")
    return (v / np.sqrt(w)) @ v.conj().T


def random_povm(n: int, outcomes: int, rng_seed) -> Povm:
    """``E_k = S^{-1/2} G_k G_k^+ S^{-1/2}`` with Gaussian ``G_k`` and ``S = sum G_k G_k^+``."""
    _check_n(n)
    if outcomes < 1:
        raise ValueError("outcomes must be positive")
    d = 2 ** n
    if outcomes == 1:
        return validate_povm([np.eye(d, dtype=complex)])
    rng = np.random.default_rng(rng_seed)
    while True:
        g = rng.standard_normal((outcomes, d, d)) + 1j * rng.standard_normal((outcomes, d, d))
        a = g @ g.conj().transpose(0, 2, 1)
        try:
            r = _inv_sqrt(a.sum(axis=0))
        except np.linalg.LinAlgError:
            continue
        e = r @ a @ r
        e = 0.5 * (e + e.conj().transpose(0, 2, 1))
        return validate_povm(list(e))


def born_probabilities(povm: Povm, states: np.ndarray) -> np.ndarray:
    """Outcome probabilities ``<psi|E_k|psi>`` for a batch of state vectors (rows)."""
    states = np.atleast_2d(states)
    e = povm.stacked()
    return np.einsum("ni,kij,nj->nk", states.conj(), e, states, optimize=True).real


def measure(povm: Povm, state) -> FiniteProbability:
    """Probability over outcome labels for a :class:`PureState` or :class:`DensityMatrix`."""
    if isinstance(state, DensityMatrix):
        if state.matrix.shape[0] != povm.dim:
            raise ValueError(f"state dimension {state.matrix.shape[0]} != POVM dimension {povm.dim}")
        probs = np.einsum("kij,ji->k", povm.stacked(), state.matrix).real
    else:
        if state.amplitudes.size != povm.dim:
            raise ValueError(f"state dimension {state.amplitudes.size} != POVM dimension {povm.dim}")
        probs = born_probabilities(povm, state.amplitudes)[0]
    if probs.min() < -1e-12:
        raise ValueError(f"negative outcome probability {probs.min()}")
    probs = np.clip(probs, 0.0, None)
    if abs(probs.sum() - 1.0) > 1e-8:
        raise ValueError(f"outcome probabilities sum to {probs.sum()}")
    return FiniteProbability(dict(zip(povm.labels, probs.tolist())))


def _haar_block(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_sample(n: int, rng_seed) -> PureState:
    """Uniformly random unit vector in dimension 2^n (normalized complex Gaussian)."""
    _check_n(n)
    return PureState(_haar_block(np.random.default_rng(rng_seed), 1, 2 ** n)[0])


def haar_states(n: int, samples: int, rng_seed, workers: int | None = 1) -> np.ndarray:
    """``samples`` Haar-random states as rows, drawn in seed-derived chunks."""
    _check_n(n)
    sizes = chunk_sizes(samples)
    rngs = stream_rngs(rng_seed, len(sizes))
    blocks = map_ordered(lambda a: _haar_block(a[0], a[1], 2 ** n), zip(rngs, sizes), workers)
    return np.concatenate(blocks) if blocks else np.zeros((0, 2 ** n), dtype=complex)


def _moment(n, samples, rng_seed, workers, order):
    _check_n(n)
    if samples < 1:
        raise ValueError("samples must be positive")
    sizes = chunk_sizes(samples)
    rngs = stream_rngs(rng_seed, len(sizes))
    d = 2 ** n

    def partial(arg):
        psi = _haar_block(arg[0], arg[1], d)
        if order == 2:
            psi = np.einsum("na,nb->nab", psi, psi).reshape(len(psi), d * d)
        return psi.T @ psi.conj()

    parts = map_ordered(partial, zip(rngs, sizes), workers)
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total / samples


def first_moment_estimate(n: int, samples: int, rng_seed, workers: int | None = 1) -> np.ndarray:
    """Monte Carlo average of ``|psi><psi|``; tends to ``I / 2^n``."""
    return _moment(n, samples, rng_seed, workers, 1)


def second_moment_estimate(n: int, samples: int, rng_seed, workers: int | None = 1) -> np.ndarray:
    """Monte Carlo average of ``|psi psi><psi psi|`` on the doubled space."""
    return _moment(n, samples, rng_seed, workers, 2)


def swap_operator(n: int) -> np.ndarray:
    d = 2 ** n
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[i * d + j, j * d + i] = 1.0
    return s


def symmetric_projector(n: int) -> np.ndarray:
    """``(I + SWAP) / 2`` on two copies of n qubits."""
    _check_n(n)
    d = 2 ** n
    return (0.5 * (np.eye(d * d) + swap_operator(n))).astype(complex)


def symmetric_dimension(n: int) -> int:
    return comb(2 ** n + 1, 2)


def haar_second_moment(n: int) -> np.ndarray:
    """Exact Haar average of ``|psi psi><psi psi|``: the symmetric projector over its rank."""
    return symmetric_projector(n) / symmetric_dimension(n)


def load_povm(path) -> Povm:
    """Read a POVM from JSON (``{"elements": [[[re, im], ...], ...]}``) or the
    canonical binary matrix serialization."""
    with open(path, "rb") as fh:
        data = fh.read()
    if str(path).endswith(".json"):
        obj = json.loads(data)
        mats = [np.array([[complex(re, im) for re, im in row] for row in e]) for e in obj["elements"]]
        return validate_povm(mats, obj.get("labels"))
    return validate_povm(deserialize_matrices(data))


def save_povm(povm: Povm, path) -> None:
    if str(path).endswith(".json"):
        with open(path, "w") as fh:
            json.dump(povm.to_json(), fh)
    else:
        with open(path, "wb") as fh:
            fh.write(serialize_matrices(povm.elements))


def dump_matrix_csv(matrix, path) -> None:
    """Row-major CSV; each entry contributes a ``re,im`` pair."""
    m = np.asarray(matrix, dtype=complex)
    with open(path, "w") as fh:
        for row in m:
            fh.write(",".join(f"{z.real!r},{z.imag!r}" for z in row.tolist()) + "\n")
