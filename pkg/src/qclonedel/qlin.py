"""Labeled multi-qubit kets with abstract ancilla states.

A ket is a finite sum of terms ``amp * |bits>|label>``. The ancilla labels
are never realized as vectors; every quantity that needs them goes through
the Gram matrix of the owning :class:`AncillaSpace`.

Qubit modes are numbered left to right in the bit-string, and mode 0 is the
most significant bit of the dense basis index (so two-qubit matrices are
ordered 00, 01, 10, 11).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateStateError, DomainError, UsageError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
PRUNE_TOL = 1e-15

Label = Hashable


@dataclass(frozen=True)
class PureQubitState:
    """Single-qubit pure state ``alpha|0> + beta|1>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not all(math.isfinite(v) for v in (a.real, a.imag, b.real, b.imag)):
            raise DomainError("amplitudes must be finite")
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > HERMITIAN_TOL:
            raise DomainError(f"state is not normalized: |alpha|^2+|beta|^2 = {norm!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def projector(self) -> DensityOperator:
        v = self.vector
        return DensityOperator(1, np.outer(v, v.conj()))

    def orthogonal(self) -> PureQubitState:
        """The state orthogonal to this one, ``-conj(beta)|0> + conj(alpha)|1>``."""
        return PureQubitState(-self.beta.conjugate(), self.alpha.conjugate())

    def ket(self, space: AncillaSpace, label: Label) -> LabeledKet:
        return LabeledKet.from_terms(
            1, [("0", label, self.alpha), ("1", label, self.beta)], space
        )


def make_pure_state(alpha2: float, phase_convention: int = 1) -> PureQubitState:
    """Real state with ``|alpha|^2 = alpha2``.

    ``phase_convention`` is the sign given to ``beta``; ``+1`` reproduces the
    usual real nonnegative parametrization.
    """
    alpha2 = float(alpha2)
    if not (0.0 <= alpha2 <= 1.0) or math.isnan(alpha2):
        raise DomainError(f"alpha2 must lie in [0, 1], got {alpha2!r}")
    if phase_convention not in (1, -1):
        raise DomainError("phase_convention must be +1 or -1")
    return PureQubitState(math.sqrt(alpha2), phase_convention * math.sqrt(1.0 - alpha2))


class AncillaSpace:
    """Ordered set of machine-state labels plus their Gram matrix.

    ``gram[i, j]`` is the inner product ``<label_i|label_j>``. The matrix must
    be Hermitian and positive semidefinite; violations raise ``DomainError``.
    """

    def __init__(self, labels: Sequence[Label], gram):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise UsageError("ancilla labels must be distinct")
        gram = np.array(gram, dtype=complex)
        n = len(labels)
        if gram.shape != (n, n):
            raise UsageError(f"gram must be {n}x{n}, got {gram.shape}")
        if not np.all(np.isfinite(gram)):
            raise DomainError("gram entries must be finite")
        if np.max(np.abs(gram - gram.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise DomainError("gram matrix is not Hermitian")
        diag = np.diag(gram)
        if np.any(np.abs(diag.imag) > HERMITIAN_TOL) or np.any(diag.real < -PSD_TOL):
            raise DomainError("gram diagonal must be real and nonnegative")
        gram = 0.5 * (gram + gram.conj().T)
        min_eig = float(np.linalg.eigvalsh(gram).min()) if n else 0.0
        if min_eig < -PSD_TOL:
            raise DomainError(
                f"gram matrix is not positive semidefinite (smallest eigenvalue {min_eig:.3e})"
            )
        gram.setflags(write=False)
        self.labels = labels
        self.gram = gram
        self.min_eigenvalue = min_eig
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def orthonormal(cls, labels: Sequence[Label]) -> AncillaSpace:
        return cls(labels, np.eye(len(tuple(labels))))

    @classmethod
    def from_overlaps(
        cls,
        labels: Sequence[Label],
        norms: Mapping[Label, float] | None = None,
        overlaps: Mapping[tuple[Label, Label], complex] | None = None,
    ) -> AncillaSpace:
        """Build a Gram from squared norms (default 1) and declared overlaps.

        Each ``overlaps[(x, y)] = <x|y>`` also fixes ``<y|x>`` by conjugation;
        every undeclared off-diagonal entry is zero.
        """
        labels = tuple(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        gram = np.eye(len(labels), dtype=complex)
        for lab, val in (norms or {}).items():
            gram[idx[lab], idx[lab]] = val
        for (x, y), val in (overlaps or {}).items():
            gram[idx[x], idx[y]] = val
            gram[idx[y], idx[x]] = np.conj(val)
        return cls(labels, gram)

    def index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UsageError(f"unknown ancilla label {label!r}") from None

    def overlap(self, x: Label, y: Label) -> complex:
        return complex(self.gram[self.index(x), self.index(y)])

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AncillaSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.gram, other.gram)

    def __hash__(self):
        return hash((self.labels, self.gram.tobytes()))

    def __repr__(self) -> str:
        return f"AncillaSpace(labels={list(self.labels)!r})"


@dataclass(frozen=True)
class LabeledKet:
    """Superposition of ``|bits>|label>`` terms.

    Use :meth:`from_terms` to construct; it merges duplicate (bits, label)
    pairs, prunes negligible amplitudes and fixes a canonical term order so
    equal kets compare equal.
    """

    qubit_arity: int
    terms: tuple[tuple[str, Label, complex], ...]
    space: AncillaSpace = field(repr=False)

    @classmethod
    def from_terms(
        cls, qubit_arity: int, terms: Iterable[tuple[str, Label, complex]], space: AncillaSpace
    ) -> LabeledKet:
        merged: dict[tuple[str, Label], complex] = {}
        order: list[tuple[str, Label]] = []
        for bits, label, amp in terms:
            if len(bits) != qubit_arity or set(bits) - {"0", "1"}:
                raise UsageError(f"basis {bits!r} is not a {qubit_arity}-bit string")
            if label not in space:
                raise UsageError(f"ancilla label {label!r} is not in the space")
            amp = complex(amp)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise DomainError("amplitudes must be finite")
            key = (bits, label)
            if key not in merged:
                order.append(key)
                merged[key] = 0j
            merged[key] += amp
        kept = [
            (bits, label, merged[(bits, label)])
            for bits, label in sorted(order, key=lambda k: (k[0], space.index(k[1])))
            if abs(merged[(bits, label)]) >= PRUNE_TOL
        ]
        return cls(int(qubit_arity), tuple(kept), space)

    @classmethod
    def zero(cls, qubit_arity: int, space: AncillaSpace) -> LabeledKet:
        return cls(int(qubit_arity), (), space)

    def to_array(self) -> np.ndarray:
        """Dense amplitude array of shape ``(2**arity, len(space))``."""
        out = np.zeros((2**self.qubit_arity, len(self.space)), dtype=complex)
        for bits, label, amp in self.terms:
            out[int(bits, 2) if bits else 0, self.space.index(label)] += amp
        return out

    def scaled(self, c: complex) -> LabeledKet:
        return LabeledKet.from_terms(
            self.qubit_arity, [(b, l, c * a) for b, l, a in self.terms], self.space
        )

    def __add__(self, other: LabeledKet) -> LabeledKet:
        _check_compatible(self, other)
        return LabeledKet.from_terms(self.qubit_arity, self.terms + other.terms, self.space)

    def __mul__(self, c) -> LabeledKet:
        return self.scaled(c)

    __rmul__ = __mul__

    def norm2(self) -> float:
        return inner_product(self, self).real

    def amplitude(self, bits: str, label: Label) -> complex:
        for b, l, a in self.terms:
            if b == bits and l == label:
                return a
        return 0j

    def __len__(self) -> int:
        return len(self.terms)


def _check_compatible(x: LabeledKet, y: LabeledKet) -> None:
    if x.qubit_arity != y.qubit_arity:
        raise UsageError(f"qubit arity mismatch: {x.qubit_arity} vs {y.qubit_arity}")
    if x.space is not y.space and x.space != y.space:
        raise UsageError("kets live in different ancilla spaces")


def inner_product(x: LabeledKet, y: LabeledKet) -> complex:
    """``<x|y>`` with ancilla overlaps taken from the shared Gram matrix."""
    _check_compatible(x, y)
    return complex(np.einsum("bl,lm,bm->", x.to_array().conj(), x.space.gram, y.to_array()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian ``2**n x 2**n`` matrix over retained qubit modes."""

    qubit_arity: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = 2**self.qubit_arity
        if m.shape != (dim, dim):
            raise UsageError(f"matrix must be {dim}x{dim}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise DomainError("density matrix entries must be finite")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return bool(self.eigenvalues().min() >= -tol)

    def partial_trace(self, keep: Sequence[int]) -> DensityOperator:
        keep = _check_modes(keep, self.qubit_arity)
        n = self.qubit_arity
        t = self.matrix.reshape((2,) * (2 * n))
        drop = [q for q in range(n) if q not in keep]
        row = list(range(n))
        col = [n + q for q in range(n)]
        for q in drop:
            col[q] = row[q]
        out = [row[q] for q in keep] + [col[q] for q in keep]
        reduced = np.einsum(t, row + col, out)
        d = 2 ** len(keep)
        return DensityOperator(len(keep), reduced.reshape(d, d))

    def allclose(self, other: DensityOperator, atol: float = HERMITIAN_TOL) -> bool:
        return self.qubit_arity == other.qubit_arity and np.allclose(
            self.matrix, other.matrix, rtol=0.0, atol=atol
        )

    def __matmul__(self, other: DensityOperator) -> DensityOperator:
        """Tensor product ``self (x) other``."""
        return DensityOperator(
            self.qubit_arity + other.qubit_arity, np.kron(self.matrix, other.matrix)
        )


def _check_modes(keep: Sequence[int], arity: int) -> tuple[int, ...]:
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep):
        raise UsageError(f"mode indices must be distinct: {keep}")
    for k in keep:
        if not 0 <= k < arity:
            raise UsageError(f"mode index {k} out of range for arity {arity}")
    return keep


def reduce_density(psi: LabeledKet, keep: Sequence[int]) -> DensityOperator:
    """Partial trace of ``|psi><psi|`` over the ancilla and all modes not in ``keep``.

    The ancilla trace uses the Gram matrix: the term pair ``(i, j)``
    contributes ``amp_i conj(amp_j) <anc_j|anc_i>``. Modes appear in the
    result in the order given by ``keep``.
    """
    keep = _check_modes(keep, psi.qubit_arity)
    arr = psi.to_array()
    full = arr @ psi.space.gram.T @ arr.conj().T
    rho = DensityOperator(psi.qubit_arity, full)
    if keep == tuple(range(psi.qubit_arity)):
        return rho
    return rho.partial_trace(keep)


def normalize_density(rho: DensityOperator, min_trace: float = 1e-14) -> DensityOperator:
    tr = rho.trace
    if tr <= min_trace:
        raise DegenerateStateError(f"cannot normalize operator with trace {tr:.3e}")
    return DensityOperator(rho.qubit_arity, rho.matrix / tr)


def product_ket(states: Sequence[PureQubitState], space: AncillaSpace, label: Label) -> LabeledKet:
    """``|s_0>|s_1>...|label>`` expanded in the computational basis."""
    terms = [("", 1.0 + 0j)]
    for s in states:
        terms = [(b + "0", a * s.alpha) for b, a in terms] + [(b + "1", a * s.beta) for b, a in terms]
    return LabeledKet.from_terms(len(states), [(b, label, a) for b, a in terms], space)


def pure_density(state: PureQubitState) -> DensityOperator:
    return state.projector()
