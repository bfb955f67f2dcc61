"""Single- and double-excitation Dicke state preparation circuits.

Builders return minimal-width circuits; encoders embed them (or reuse the
gate-list helpers) at register offsets. Amplitude-weighted variants take an
AmplitudeList whose entry alphas[l] weights the component with the excitation
at site l (for constrained pairs, the component |2^l + 2^(l+k)>).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, cnot, gamma, phase, x
from .errors import DomainError

PHASE_TOL = 1e-14
_DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class AmplitudeList:
    """Complex amplitudes, 2-norm normalized on construction."""

    alphas: tuple[complex, ...]

    def __init__(self, alphas):
        vec = tuple(complex(a) for a in alphas)
        if len(vec) < 1:
            raise DomainError("need at least one amplitude")
        norm = math.sqrt(sum(abs(a) ** 2 for a in vec))
        if norm < 1e-300:
            raise DomainError("amplitude vector has zero norm")
        object.__setattr__(self, "alphas", tuple(a / norm for a in vec))

    def __len__(self) -> int:
        return len(self.alphas)

    def conjugate(self) -> "AmplitudeList":
        return AmplitudeList(tuple(a.conjugate() for a in self.alphas))


@dataclass(frozen=True)
class DickeAngles:
    """Rotation angles thetas[l-1] = theta_l (l = 1..n-1) and per-site phases."""

    thetas: tuple[float, ...]
    etas: tuple[float, ...]


def balanced_thetas(n: int) -> tuple[float, ...]:
    """theta_l = 2 arccos sqrt(1/(l+1)), the uniform-amplitude cascade angles."""
    return tuple(2.0 * math.acos(math.sqrt(1.0 / (l + 1))) for l in range(1, n))


def unbalanced_angles(a: AmplitudeList) -> DickeAngles:
    """Cascade angles reproducing arbitrary weights |alphas| plus their phases.

    theta_l = 2 arccos(|a_{n-l-1}| / sqrt(1 - sum_{j<n-l-1} |a_j|^2)); when the
    remaining weight under the square root has already been placed (< 1e-14)
    the angle is 0, and arccos arguments are clamped against rounding.
    """
    mags = [abs(v) for v in a.alphas]
    n = len(mags)
    thetas = []
    for l in range(1, n):
        rem = 1.0 - sum(m * m for m in mags[: n - l - 1])
        if rem < _DEGENERATE_TOL:
            thetas.append(0.0)
        else:
            ratio = min(1.0, max(0.0, mags[n - l - 1] / math.sqrt(rem)))
            thetas.append(2.0 * math.acos(ratio))
    etas = tuple(cmath.phase(v) if abs(v) > 0 else 0.0 for v in a.alphas)
    return DickeAngles(tuple(thetas), etas)


def staircase_gates(thetas, qubits) -> list[Gate]:
    """Cascade gamma(theta_l) down a qubit list (qubits[0] = lowest site).

    gamma(theta_{n-1}) fires first on (qubits[1], qubits[0]) and the cascade
    walks upward, so the circuit fixes |0...0> and lifts a single excitation
    entering at qubits[0] into the weighted superposition.
    """
    n = len(qubits)
    if len(thetas) != n - 1:
        raise DomainError(f"need {n - 1} angles for {n} qubits, got {len(thetas)}")
    out = []
    for l in range(n - 1, 0, -1):
        out.append(gamma(thetas[l - 1], qubits[n - l], qubits[n - l - 1]))
    return out


def staircase(n: int, thetas) -> Circuit:
    """Width-n staircase circuit; acts trivially on |0^n>."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return Circuit(max(n, 1), tuple(staircase_gates(tuple(thetas), list(range(n)))))


def phase_gates(etas, qubits) -> list[Gate]:
    """P(eta_l) on qubits[l]; gates with |eta| <= 1e-14 are not emitted."""
    return [phase(e, qubits[l]) for l, e in enumerate(etas) if abs(e) > PHASE_TOL]


def cnot_chain(n: int, offset: int, count: int) -> Circuit:
    """Ladder of CNOTs with target = control + offset.

    offset < 0 walks controls upward from -offset (the CL_k ladder: each
    component |2^(l+k)> gains 2^l); offset > 0 walks controls downward from
    count-1 so freshly written targets are never re-used as controls.
    """
    if offset == 0:
        raise DomainError("offset must be nonzero")
    if count < 1:
        raise DomainError("count must be >= 1")
    gates = []
    if offset < 0:
        controls = range(-offset, -offset + count)
    else:
        controls = range(count - 1, -1, -1)
    for c in controls:
        t = c + offset
        if not (0 <= c < n and 0 <= t < n):
            raise DomainError(f"chain pair ({c}, {t}) out of range for width {n}")
        gates.append(cnot(c, t))
    return Circuit(n, tuple(gates))


def chain_gates(pairs) -> list[Gate]:
    return [cnot(c, t) for c, t in pairs]


def elementwise_copy(n: int, width: int | None = None, src: int = 0,
                     dst: int | None = None) -> Circuit:
    """n parallel CNOTs copying register src -> dst element-wise."""
    if dst is None:
        dst = src + n
    if width is None:
        width = max(src, dst) + n
    if src < dst < src + n or dst < src < dst + n:
        raise DomainError("source and destination registers overlap")
    return Circuit(width, tuple(cnot(src + l, dst + l) for l in range(n)))


def _body_gates(n: int, qubits, a: AmplitudeList | None) -> list[Gate]:
    """X activation + staircase (+ phase corrections) on an n-qubit span."""
    out = [x(qubits[0])]
    if a is None:
        thetas, etas = balanced_thetas(n), ()
    else:
        if len(a) != n:
            raise DomainError(f"need {n} amplitudes, got {len(a)}")
        ang = unbalanced_angles(a)
        thetas, etas = ang.thetas, ang.etas
    if n > 1:
        out += staircase_gates(thetas, qubits)
    out += phase_gates(etas, qubits)
    return out


def prepare_dicke1(n: int) -> Circuit:
    """|0^n> -> (1/sqrt(n)) sum_l |2^l>."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return Circuit(n, tuple(_body_gates(n, list(range(n)), None)))


def prepare_dicke1_unbalanced(n: int, a: AmplitudeList) -> Circuit:
    """|0^n> -> sum_l alphas[l] |2^l>."""
    if n < 2:
        raise DomainError("n must be >= 2")
    return Circuit(n, tuple(_body_gates(n, list(range(n)), a)))


def dicke2k_gates(n: int, k: int, a: AmplitudeList | None) -> list[Gate]:
    if not 1 <= k <= n - 1:
        raise DomainError(f"k must be in [1, {n - 1}], got {k}")
    span = list(range(k, n))
    out = _body_gates(n - k, span, a)
    out += [cnot(c, c - k) for c in range(k, n)]
    return out


def prepare_dicke2k(n: int, k: int, a: AmplitudeList | None = None) -> Circuit:
    """|0^n> -> sum_l alphas[l] |2^l + 2^(l+k)> (balanced when a is None)."""
    return Circuit(n, tuple(dicke2k_gates(n, k, a)))


def prepare_double(n: int, kind: str = "single", k: int | None = None,
                   a: AmplitudeList | None = None) -> Circuit:
    """Duplicate a Dicke state across two n-qubit registers.

    kind="single": sum alphas[l] |2^l>|2^l>;
    kind="pair":   sum alphas[l] |2^l + 2^(l+k)>|same>, 1 <= k <= n-1.
    """
    if kind == "single":
        if n < 2:
            raise DomainError("n must be >= 2")
        gates = _body_gates(n, list(range(n)), a)
    elif kind == "pair":
        if k is None:
            raise DomainError("pair kind needs k")
        gates = dicke2k_gates(n, k, a)
    else:
        raise DomainError(f"unknown double kind {kind!r}")
    gates += [cnot(l, n + l) for l in range(n)]
    return Circuit(2 * n, tuple(gates))


# --- closed-form expected states (test and CLI oracles) ---

def dicke_state_map(kind: str, n: int, k: int | None = None,
                    a: AmplitudeList | None = None) -> dict[int, complex]:
    """Sparse amplitude map of the target state for each builder kind."""
    if kind in ("d1", "d1d"):
        m = n
    else:
        if k is None:
            raise DomainError("this kind needs k")
        m = n - k
    if a is None:
        amps = [1.0 / math.sqrt(m)] * m
    else:
        if len(a) != m:
            raise DomainError(f"need {m} amplitudes, got {len(a)}")
        amps = list(a.alphas)
    out: dict[int, complex] = {}
    for l, amp in enumerate(amps):
        if kind == "d1":
            idx = 1 << l
        elif kind == "d2k":
            idx = (1 << l) | (1 << (l + k))
        elif kind == "d1d":
            idx = (1 << l) | (1 << (n + l))
        elif kind == "d2kd":
            idx = (1 << l) | (1 << (l + k))
            idx |= idx << n
        else:
            raise DomainError(f"unknown kind {kind!r}")
        out[idx] = complex(amp)
    return out
