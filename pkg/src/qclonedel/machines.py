"""Catalog of cloning and deleting machines.

Each machine is a basis-transformation table: every computational basis
input maps to a :class:`~qclonedel.qlin.LabeledKet` whose ancilla labels live
in one shared :class:`~qclonedel.qlin.AncillaSpace`. The initial machine
state is implicit; only the final states and their overlaps are stored.

Parameter constraints are checked when a machine is built. Pass
``check=False`` to build an invalid machine anyway (for example to feed
:func:`validate_machine` and get a report of what is wrong).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np

from .errors import ConstraintError, DomainError, UsageError
from .qlin import (
    PSD_TOL,
    AncillaSpace,
    LabeledKet,
    PureQubitState,
    inner_product,
)

PARAM_TOL = 1e-12
ISOMETRY_TOL = 1e-10
BH_XI_MIN = 1.0 / 6.0
BH_XI_MAX = 0.5


def sigma_from_theta(theta: float) -> PureQubitState:
    """Standard blank state ``cos(theta)|0> + sin(theta)|1>``."""
    return PureQubitState(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class Constraint:
    name: str
    residual: float

    @property
    def ok(self) -> bool:
        return self.residual <= ISOMETRY_TOL


@dataclass(frozen=True, eq=False)
class MachineSpec:
    """Transformation table of a cloner or deleter.

    ``paper_norms`` overrides the ancilla self-overlaps when the machine is
    used as the first stage of a pipeline under the ``paper`` Gram
    convention (see :mod:`qclonedel.scenarios`). ``info`` carries derived
    scalars such as ``gg``/``hh`` for display.
    """

    name: str
    in_arity: int
    out_arity: int
    table: Mapping[str, LabeledKet]
    space: AncillaSpace
    sigma: PureQubitState | None = None
    constraints: tuple[Constraint, ...] = ()
    paper_norms: Mapping[Hashable, float] | None = None
    info: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        inputs = {"".join(b) for b in itertools.product("01", repeat=self.in_arity)}
        if set(self.table) != inputs:
            raise UsageError(f"{self.name}: table must cover all {len(inputs)} basis inputs")
        for ket in self.table.values():
            if ket.qubit_arity != self.out_arity or ket.space is not self.space:
                raise UsageError(f"{self.name}: outputs must share arity and ancilla space")

    @property
    def inputs(self) -> list[str]:
        return sorted(self.table)

    def apply(self, amplitudes: Mapping[str, complex]) -> LabeledKet:
        """Image of ``sum_x amplitudes[x] |x>`` by linearity."""
        terms = []
        for bits, c in amplitudes.items():
            if bits not in self.table:
                raise UsageError(f"{self.name}: no table entry for input {bits!r}")
            terms.extend((b, lab, c * a) for b, lab, a in self.table[bits].terms)
        return LabeledKet.from_terms(self.out_arity, terms, self.space)

    def apply_product(self, states: Sequence[PureQubitState]) -> LabeledKet:
        """Image of ``|s_0>|s_1>...`` (one state per input mode)."""
        if len(states) != self.in_arity:
            raise UsageError(f"{self.name}: expected {self.in_arity} input states")
        amps = {}
        for bits in self.inputs:
            c = 1.0 + 0j
            for s, b in zip(states, bits):
                c *= s.alpha if b == "0" else s.beta
            amps[bits] = c
        return self.apply(amps)

    def apply_to_ket(self, ket: LabeledKet, space: AncillaSpace) -> LabeledKet:
        """Run this machine on the qubits of ``ket``, pairing ancilla labels.

        A term ``|x>|c>`` becomes ``sum |y>|(c, d)>`` over the table entry
        of ``x``. ``space`` must contain every composite label ``(c, d)``.
        """
        if ket.qubit_arity != self.in_arity:
            raise UsageError(
                f"{self.name}: input arity {self.in_arity} does not match ket arity {ket.qubit_arity}"
            )
        terms = []
        for bits, c_label, amp in ket.terms:
            for b, d_label, a in self.table[bits].terms:
                terms.append((b, (c_label, d_label), amp * a))
        return LabeledKet.from_terms(self.out_arity, terms, space)

    def tables_match(
        self, other: MachineSpec, relabel: Mapping[Hashable, Hashable] | None = None, atol=1e-15
    ) -> bool:
        """Term-by-term equality of the tables, after renaming this machine's labels."""
        relabel = relabel or {}
        if self.inputs != other.inputs or self.out_arity != other.out_arity:
            return False
        for bits in self.inputs:
            mine = {(b, relabel.get(lab, lab)): a for b, lab, a in self.table[bits].terms}
            theirs = {(b, lab): a for b, lab, a in other.table[bits].terms}
            if set(mine) != set(theirs):
                return False
            if any(abs(mine[k] - theirs[k]) > atol for k in mine):
                return False
        return True


def _ket(arity, terms, space):
    return LabeledKet.from_terms(arity, terms, space)


def _with_sigma(prefix: str, sigma: PureQubitState, label, coeff=1.0):
    """Terms for ``coeff |prefix>|sigma>|label>``."""
    return [(prefix + "0", label, coeff * sigma.alpha), (prefix + "1", label, coeff * sigma.beta)]


def _raise_failed(name: str, constraints: Sequence[Constraint], tol: float = PARAM_TOL):
    for c in constraints:
        if c.residual > tol:
            raise ConstraintError(
                f"{name}: constraint violated: {c.name} (residual {c.residual:.3e})",
                equation=c.name,
                residual=c.residual,
            )


# --- cloners -------------------------------------------------------------


def wz_machine() -> MachineSpec:
    """Wootters-Zurek copier: ``|0> -> |00>|Q0>``, ``|1> -> |11>|Q1>``."""
    space = AncillaSpace.orthonormal(["Q0", "Q1"])
    table = {
        "0": _ket(2, [("00", "Q0", 1.0)], space),
        "1": _ket(2, [("11", "Q1", 1.0)], space),
    }
    return MachineSpec("wz", 1, 2, table, space)


def bh_gram(xi: float) -> np.ndarray:
    """Ancilla Gram over (Q0, Q1, Y0, Y1) for the universal cloner.

    ``<Qi|Qi> = 1 - 2 xi``, ``<Yi|Yi> = xi`` and the cross overlaps
    ``<Q0|Y1> = <Q1|Y0> = eta/2`` with ``eta = 1 - 2 xi``.
    """
    eta = 1.0 - 2.0 * xi
    g = np.zeros((4, 4))
    g[0, 0] = g[1, 1] = 1.0 - 2.0 * xi
    g[2, 2] = g[3, 3] = xi
    g[0, 3] = g[3, 0] = eta / 2
    g[1, 2] = g[2, 1] = eta / 2
    return g


def bh_machine(xi: float = BH_XI_MIN) -> MachineSpec:
    """Buzek-Hillery cloner with shrinking parameter ``xi``.

    The Gram is realizable only for ``1/6 <= xi <= 1/2``; at ``xi = 1/6`` it
    has rank two (``|Y1> = |Q0>/2``).
    """
    xi = float(xi)
    if not math.isfinite(xi):
        raise DomainError("xi must be finite")
    gram = bh_gram(xi)
    min_eig = float(np.linalg.eigvalsh(gram).min())
    if min_eig < -PSD_TOL:
        raise ConstraintError(
            f"bh: xi = {xi!r} gives a Gram matrix with negative eigenvalue {min_eig:.6e}; "
            f"need {BH_XI_MIN:.12g} <= xi <= {BH_XI_MAX}",
            equation="ancilla Gram positive semidefinite (1/6 <= xi <= 1/2)",
            residual=-min_eig,
        )
    labels = ["Q0", "Q1", "Y0", "Y1"]
    space = AncillaSpace(labels, gram)
    table = {
        "0": _ket(2, [("00", "Q0", 1.0), ("01", "Y0", 1.0), ("10", "Y0", 1.0)], space),
        "1": _ket(2, [("11", "Q1", 1.0), ("01", "Y1", 1.0), ("10", "Y1", 1.0)], space),
    }
    constraints = tuple(
        Constraint(f"<Q{i}|Q{i}> + 2<Y{i}|Y{i}> = 1", abs(gram[i, i] + 2 * gram[i + 2, i + 2] - 1))
        for i in (0, 1)
    )
    return MachineSpec(
        "bh",
        1,
        2,
        table,
        space,
        constraints=constraints,
        paper_norms={"Q0": 1.0, "Q1": 1.0, "Y0": xi, "Y1": xi},
        info={"xi": xi, "eta": 1.0 - 2.0 * xi},
    )


# --- deleters ------------------------------------------------------------


def pb_delete_machine(sigma: PureQubitState | None = None) -> MachineSpec:
    """Pati-Braunstein deleter for orthogonal qubits.

    ``|00> -> |0>|S>|A0>``, ``|11> -> |1>|S>|A1>``; ``|01>`` and ``|10>``
    pass through with the ancilla left in ``|A>``. ``{A, A0, A1}`` are
    orthonormal.
    """
    sigma = sigma if sigma is not None else sigma_from_theta(0.0)
    space = AncillaSpace.orthonormal(["A", "A0", "A1"])
    table = {
        "00": _ket(2, _with_sigma("0", sigma, "A0"), space),
        "01": _ket(2, [("01", "A", 1.0)], space),
        "10": _ket(2, [("10", "A", 1.0)], space),
        "11": _ket(2, _with_sigma("1", sigma, "A1"), space),
    }
    return MachineSpec("pb", 2, 2, table, space, sigma=sigma)


@dataclass(frozen=True)
class ImperfectDeleterParams:
    """Couplings of the imperfect deleter on the mixed inputs ``|01>``, ``|10>``.

    Unitarity requires the 2x2 matrix ``[[a0, b0], [a1, b1]]`` to have
    orthonormal rows. ``sigma_theta`` fixes the blank state.
    """

    a0: complex
    a1: complex
    b0: complex
    b1: complex
    sigma_theta: float = 0.0

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "sigma_theta", float(self.sigma_theta))

    @classmethod
    def symmetric_example(cls, sigma_theta: float = 0.0) -> ImperfectDeleterParams:
        """``a0 = b1 = sqrt(3)/2``, ``a1 = b0 = i/2``; gives ``|g|^2 = |h|^2 = 1``."""
        r = math.sqrt(3.0) / 2.0
        return cls(r, 0.5j, 0.5j, r, sigma_theta)

    @classmethod
    def rotation(cls, theta: float, sigma_theta: float = 0.0) -> ImperfectDeleterParams:
        """Real chart ``a0 = b1 = cos(theta)``, ``b0 = -a1 = sin(theta)``."""
        c, s = math.cos(theta), math.sin(theta)
        return cls(c, -s, s, c, sigma_theta)

    @classmethod
    def from_delta(cls, delta: float, sigma_theta: float = 0.0) -> ImperfectDeleterParams:
        """Rotation chart point with ``|g|^2 = 1 + delta`` and ``|h|^2 = 1 - delta``."""
        delta = float(delta)
        if not -1.0 <= delta <= 1.0:
            raise DomainError(f"delta must lie in [-1, 1], got {delta!r}")
        # |g|^2 = 1 - sin(2 theta)
        return cls.rotation(-0.5 * math.asin(delta), sigma_theta)

    @property
    def g(self) -> complex:
        return self.a0 + self.a1

    @property
    def h(self) -> complex:
        return self.b0 + self.b1

    @property
    def gg(self) -> float:
        return abs(self.g) ** 2

    @property
    def hh(self) -> float:
        return abs(self.h) ** 2

    @property
    def m(self) -> float:
        """Overlap of the blank state with ``|1>``."""
        return math.sin(self.sigma_theta)

    @property
    def m2(self) -> float:
        return self.m**2

    @property
    def k(self) -> float:
        return (self.gg - 1.0) ** 2 + (self.hh - 1.0) ** 2

    @property
    def k1(self) -> float:
        return 2.0 - self.gg * self.m2 - self.hh * (1.0 - self.m2)

    def constraints(self) -> tuple[Constraint, ...]:
        a, b = (self.a0, self.a1), (self.b0, self.b1)
        out = [
            Constraint(f"|a{i}|^2 + |b{i}|^2 = 1", abs(abs(a[i]) ** 2 + abs(b[i]) ** 2 - 1.0))
            for i in (0, 1)
        ]
        out.append(
            Constraint(
                "a0 a1* + b0 b1* = 0",
                abs(a[0] * a[1].conjugate() + b[0] * b[1].conjugate()),
            )
        )
        return tuple(out)


def _mixed_input_rows(a0, b0, a1, b1, space):
    return {
        "01": _ket(2, [("01", "Q", a0), ("10", "Q", b0)], space),
        "10": _ket(2, [("01", "Q", a1), ("10", "Q", b1)], space),
    }


def imperfect_delete_machine(params: ImperfectDeleterParams, check: bool = True) -> MachineSpec:
    """Deleter that mixes ``|01>`` and ``|10>`` through ``a_i``, ``b_i``.

    ``|00> -> |0>|S>|A0>``, ``|11> -> |1>|S>|A1>``,
    ``|01> -> (a0|01> + b0|10>)|Q>``, ``|10> -> (a1|01> + b1|10>)|Q>``,
    with ``{Q, A0, A1}`` orthonormal.
    """
    constraints = params.constraints()
    if check:
        _raise_failed("imperfect", constraints)
    sigma = sigma_from_theta(params.sigma_theta)
    space = AncillaSpace.orthonormal(["Q", "A0", "A1"])
    table = {
        "00": _ket(2, _with_sigma("0", sigma, "A0"), space),
        "11": _ket(2, _with_sigma("1", sigma, "A1"), space),
        **_mixed_input_rows(params.a0, params.b0, params.a1, params.b1, space),
    }
    info = {"gg": params.gg, "hh": params.hh, "k": params.k, "k1": params.k1, "M2": params.m2}
    return MachineSpec("imperfect", 2, 2, table, space, sigma=sigma, constraints=constraints, info=info)


@dataclass(frozen=True)
class GeneralDeleterParams:
    """Parameters of the general deleter.

    ``ancilla_norms`` maps ``A0, A1, B0, B1, C0, C1`` to squared norms;
    ``B*``/``C*`` default to 1 and a missing ``A_i`` norm is solved from
    the normalization of the corresponding output. ``cross_overlaps`` holds
    ``<C1|B0>`` and ``<B1|C0>`` under the keys ``"C1B0"`` and ``"B1C0"``.
    """

    a0: complex
    a1: complex
    b0: complex
    b1: complex
    p0: complex = 0j
    p1: complex = 0j
    ancilla_norms: Mapping[str, float] = field(default_factory=dict)
    cross_overlaps: Mapping[str, complex] = field(default_factory=dict)
    sigma_theta: float = 0.0

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1", "p0", "p1"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        unknown = set(self.ancilla_norms) - {"A0", "A1", "B0", "B1", "C0", "C1"}
        if unknown:
            raise UsageError(f"unknown ancilla norm keys: {sorted(unknown)}")
        unknown = set(self.cross_overlaps) - {"C1B0", "B1C0"}
        if unknown:
            raise UsageError(f"unknown cross overlap keys: {sorted(unknown)}")

    def norms(self) -> dict[str, float]:
        """All six squared norms, with unspecified ``A_i`` forced by normalization."""
        n = {k: 1.0 for k in ("B0", "B1", "C0", "C1")}
        n.update({k: float(v) for k, v in self.ancilla_norms.items()})
        p0, p1 = abs(self.p0) ** 2, abs(self.p1) ** 2
        for i in (0, 1):
            key = f"A{i}"
            if key not in n:
                n[key] = 1.0 - p0 * n[f"B{i}"] - p1 * n[f"C{i}"]
        return n

    def constraints(self) -> tuple[Constraint, ...]:
        n = self.norms()
        p0, p1 = self.p0, self.p1
        c1b0 = complex(self.cross_overlaps.get("C1B0", 0j))
        b1c0 = complex(self.cross_overlaps.get("B1C0", 0j))
        out = [
            Constraint(
                f"|p0|^2 <B{i}|B{i}> + |p1|^2 <C{i}|C{i}> = 1 - <A{i}|A{i}>",
                abs(abs(p0) ** 2 * n[f"B{i}"] + abs(p1) ** 2 * n[f"C{i}"] - 1.0 + n[f"A{i}"]),
            )
            for i in (0, 1)
        ]
        out.extend(
            ImperfectDeleterParams(self.a0, self.a1, self.b0, self.b1).constraints()
        )
        out.append(
            Constraint(
                "p0 p1* <C1|B0> + p0* p1 <B1|C0> = 0",
                abs(p0 * p1.conjugate() * c1b0 + p0.conjugate() * p1 * b1c0),
            )
        )
        return tuple(out)


def general_delete_machine(
    params: GeneralDeleterParams, sigma: PureQubitState | None = None, check: bool = True
) -> MachineSpec:
    """General deleter with leakage amplitudes ``p0``, ``p1``.

    ``|00> -> |0>|S>|A0> + p0|10>|B0> + p1|01>|C0>``,
    ``|11> -> |1>|S>|A1> + p0|01>|B1> + p1|10>|C1>``; the mixed inputs act
    as in the imperfect deleter. Ancilla states are mutually orthogonal
    apart from the declared ``<C1|B0>`` and ``<B1|C0>``.
    """
    constraints = params.constraints()
    if check:
        _raise_failed("general", constraints)
    if sigma is None:
        sigma = sigma_from_theta(params.sigma_theta)
    n = params.norms()
    for key, val in n.items():
        if val < -PSD_TOL:
            raise ConstraintError(
                f"general: <{key}|{key}> = {val:.6g} is negative",
                equation=f"<{key}|{key}> >= 0",
                residual=-val,
            )
    overlaps = {
        ("C1", "B0"): complex(params.cross_overlaps.get("C1B0", 0j)),
        ("B1", "C0"): complex(params.cross_overlaps.get("B1C0", 0j)),
    }
    labels = ["Q", "A0", "A1", "B0", "B1", "C0", "C1"]
    try:
        space = AncillaSpace.from_overlaps(labels, {k: max(v, 0.0) for k, v in n.items()}, overlaps)
    except DomainError as exc:
        raise ConstraintError(
            f"general: ancilla overlaps are not realizable: {exc}",
            equation="ancilla Gram positive semidefinite",
        ) from exc
    p0, p1 = params.p0, params.p1
    table = {
        "00": _ket(
            2, _with_sigma("0", sigma, "A0") + [("10", "B0", p0), ("01", "C0", p1)], space
        ),
        "11": _ket(
            2, _with_sigma("1", sigma, "A1") + [("01", "B1", p0), ("10", "C1", p1)], space
        ),
        **_mixed_input_rows(params.a0, params.b0, params.a1, params.b1, space),
    }
    imp = ImperfectDeleterParams(params.a0, params.a1, params.b0, params.b1)
    info = {"gg": imp.gg, "hh": imp.hh, "A0": n["A0"], "A1": n["A1"]}
    return MachineSpec("general", 2, 2, table, space, sigma=sigma, constraints=constraints, info=info)


def qiu_machine(
    a0: complex, b0: complex, a1: complex, b1: complex,
    sigma: PureQubitState | None = None,
    check: bool = True,
) -> MachineSpec:
    """Qiu's non-optimal universal deleter on a fixed two-qubit output.

    ``|00> -> a0|0>|A0> + b0|1>|B0>``, ``|11> -> a1|1>|A1> + b1|0>|B1>``,
    ``|01>`` and ``|10>`` unchanged. The collapsed inputs leave their second
    mode parked in the blank state ``sigma`` (default ``|0>``) and the
    unchanged inputs keep the initial ancilla ``|Q>``, so all five ancilla
    states are orthonormal and the outputs have a common shape.
    """
    a0, b0, a1, b1 = (complex(v) for v in (a0, b0, a1, b1))
    constraints = tuple(
        Constraint(f"|a{i}|^2 + |b{i}|^2 = 1", abs(abs(a) ** 2 + abs(b) ** 2 - 1.0))
        for i, (a, b) in enumerate(((a0, b0), (a1, b1)))
    )
    if check:
        _raise_failed("qiu", constraints)
    sigma = sigma if sigma is not None else sigma_from_theta(0.0)
    space = AncillaSpace.orthonormal(["Q", "A0", "A1", "B0", "B1"])
    table = {
        "00": _ket(2, _with_sigma("0", sigma, "A0", a0) + _with_sigma("1", sigma, "B0", b0), space),
        "11": _ket(2, _with_sigma("1", sigma, "A1", a1) + _with_sigma("0", sigma, "B1", b1), space),
        "01": _ket(2, [("01", "Q", 1.0)], space),
        "10": _ket(2, [("10", "Q", 1.0)], space),
    }
    return MachineSpec("qiu", 2, 2, table, space, sigma=sigma, constraints=constraints)


# --- validation ----------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    machine: str
    inputs: tuple[str, ...]
    output_gram: np.ndarray
    residuals: dict[tuple[str, str], float]
    gram_min_eigenvalue: float
    constraints: tuple[Constraint, ...]
    tol: float = ISOMETRY_TOL

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def gram_ok(self) -> bool:
        return self.gram_min_eigenvalue >= -PSD_TOL

    @property
    def failed_constraints(self) -> list[Constraint]:
        return [c for c in self.constraints if c.residual > self.tol]

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol and self.gram_ok and not self.failed_constraints

    def lines(self) -> list[str]:
        out = [f"machine: {self.machine}", f"max isometry residual: {self.max_residual:.3e}"]
        out.append(f"ancilla gram min eigenvalue: {self.gram_min_eigenvalue:.3e}")
        for c in self.constraints:
            flag = "ok" if c.residual <= self.tol else "VIOLATED"
            out.append(f"constraint {c.name}: residual {c.residual:.3e} [{flag}]")
        out.append("PASS" if self.passed else "FAIL")
        return out


def validate_machine(m: MachineSpec, tol: float = ISOMETRY_TOL) -> ValidationReport:
    """Check that the table is an isometry on the basis inputs.

    Every pair of outputs is compared against ``delta_ij``; the ancilla Gram
    is re-checked for positivity and the parameter constraints recorded at
    build time are re-evaluated against ``tol``.
    """
    inputs = tuple(m.inputs)
    outs = [m.table[b] for b in inputs]
    n = len(outs)
    gram = np.array([[inner_product(outs[i], outs[j]) for j in range(n)] for i in range(n)])
    residuals = {
        (inputs[i], inputs[j]): float(abs(gram[i, j] - (1.0 if i == j else 0.0)))
        for i in range(n)
        for j in range(n)
    }
    min_eig = float(np.linalg.eigvalsh(m.space.gram).min()) if len(m.space) else 0.0
    return ValidationReport(m.name, inputs, gram, residuals, min_eig, tuple(m.constraints), tol)


def catalog() -> dict[str, MachineSpec]:
    """One default instance of every machine kind."""
    imp = ImperfectDeleterParams.symmetric_example()
    return {
        "wz": wz_machine(),
        "bh": bh_machine(),
        "pb": pb_delete_machine(),
        "imperfect": imperfect_delete_machine(imp),
        "general": general_delete_machine(
            GeneralDeleterParams(imp.a0, imp.a1, imp.b0, imp.b1, p0=0.5)
        ),
        "qiu": qiu_machine(1.0, 0.0, 1.0, 0.0),
    }
