"""Pauli-string operator sums, their check-matrix form, and dense oracles.

Site convention is little-endian throughout: the Pauli factor at site l acts
on the qubit carrying binary weight 2**l, so ops[l] is the operator on qubit l.
Display labels and the JSON wire format put site 0 rightmost instead.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceGuardError

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Single-qubit check pairs (x_bit, z_bit): sigma = (-i)^(x*z) Z^z X^x.
CHECK_PAIRS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}

COEFF_CUTOFF = 1e-15
MATRIX_MAX_QUBITS = 12


def pauli_to_checkpair(p: str) -> tuple[int, int]:
    """Map a single-qubit Pauli label to its (x_bit, z_bit) check pair."""
    try:
        return CHECK_PAIRS[p]
    except KeyError:
        raise DomainError(f"not a Pauli label: {p!r}") from None


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string; ops[l] is the factor on site l."""

    coefficient: complex
    ops: str

    def __post_init__(self):
        if len(self.ops) < 1:
            raise DomainError("empty Pauli string")
        bad = set(self.ops) - set("IXYZ")
        if bad:
            raise DomainError(f"invalid Pauli letters: {sorted(bad)}")

    @property
    def n(self) -> int:
        return len(self.ops)

    def label(self) -> str:
        """Human-readable string with site 0 as the rightmost character."""
        return self.ops[::-1]

    def matrix(self) -> np.ndarray:
        """Dense matrix of this term (coefficient included)."""
        m = np.array([[1.0 + 0j]])
        for site in reversed(range(self.n)):
            m = np.kron(m, PAULI_MATRICES[self.ops[site]])
        return self.coefficient * m


@dataclass(frozen=True)
class PauliSum:
    """A sum of PauliTerms over a fixed qubit count.

    Duplicate strings are merged on construction and terms with magnitude
    below COEFF_CUTOFF are dropped, so len(terms) is the minimal term count M.
    """

    n: int
    terms: tuple[PauliTerm, ...]

    def __init__(self, n: int, terms):
        if n < 1:
            raise DomainError("qubit count must be >= 1")
        merged: dict[str, complex] = {}
        for t in terms:
            if not isinstance(t, PauliTerm):
                t = PauliTerm(complex(t[0]), str(t[1]))
            if t.n != n:
                raise DomainError(f"term {t.label()} has length {t.n}, expected {n}")
            merged[t.ops] = merged.get(t.ops, 0j) + complex(t.coefficient)
        kept = tuple(
            PauliTerm(c, ops) for ops, c in merged.items() if abs(c) >= COEFF_CUTOFF
        )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", kept)

    def __len__(self) -> int:
        return len(self.terms)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        # Pauli strings are self-adjoint, so Hermiticity means real coefficients.
        return all(abs(t.coefficient.imag) <= tol for t in self.terms)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"coeff": [t.coefficient.real, t.coefficient.imag], "ops": t.label()}
                for t in self.terms
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "PauliSum":
        n = int(d["n"])
        terms = [
            PauliTerm(complex(t["coeff"][0], t["coeff"][1]), str(t["ops"])[::-1])
            for t in d["terms"]
        ]
        return cls(n, terms)

    @classmethod
    def from_json(cls, text: str) -> "PauliSum":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CheckTerm:
    """A Pauli string in check-matrix form.

    i and j are n-bit integers (bit l = site l) activating X and Z factors;
    alpha_prime carries the absorbed phase, |alpha_prime| = |alpha|.
    """

    i: int
    j: int
    alpha_prime: complex


def check_decompose(h: PauliSum) -> list[CheckTerm]:
    """Check-matrix decomposition: alpha' = (-i)^(sum_l i_l j_l) * alpha."""
    out = []
    for t in h.terms:
        i = j = 0
        y_count = 0
        for site, p in enumerate(t.ops):
            xb, zb = CHECK_PAIRS[p]
            i |= xb << site
            j |= zb << site
            y_count += xb & zb
        alpha = t.coefficient * (-1j) ** y_count
        if abs(alpha) >= COEFF_CUTOFF:
            out.append(CheckTerm(i, j, alpha))
    return out


def one_norm(h: PauliSum) -> float:
    """Normalization constant N = sum_m |alpha_m|."""
    return float(sum(abs(t.coefficient) for t in h.terms))


def hamiltonian_matrix(h: PauliSum) -> np.ndarray:
    """Exact dense 2^n x 2^n matrix of h via Kronecker products."""
    if h.n > MATRIX_MAX_QUBITS:
        raise ResourceGuardError(
            f"dense matrix limited to {MATRIX_MAX_QUBITS} qubits, got {h.n}"
        )
    m = np.zeros((2**h.n, 2**h.n), dtype=complex)
    for t in h.terms:
        m += t.matrix()
    return m


def success_probability(h: PauliSum, phi: np.ndarray) -> float:
    """Post-selection success probability sum_l |l/N|^2 |<l|phi>|^2.

    h must be Hermitian and phi a normalized state of dimension 2^n.
    """
    if not h.is_hermitian():
        raise DomainError("success_probability requires a Hermitian operator")
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.shape[0] != 2**h.n:
        raise DomainError(f"state dimension {phi.shape[0]} != 2^{h.n}")
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise DomainError("state is not normalized")
    norm = one_norm(h)
    if norm == 0.0:
        return 0.0
    evals, evecs = np.linalg.eigh(hamiltonian_matrix(h))
    overlaps = np.abs(evecs.conj().T @ phi) ** 2
    return float(np.sum((np.abs(evals) / norm) ** 2 * overlaps))


def check_term_matrix(ct: CheckTerm, n: int) -> np.ndarray:
    """Dense matrix alpha' * prod_l Z^{j_l} X^{i_l}, for verification."""
    m = np.array([[1.0 + 0j]])
    for site in reversed(range(n)):
        zx = np.eye(2, dtype=complex)
        if (ct.i >> site) & 1:
            zx = zx @ PAULI_MATRICES["X"]
        if (ct.j >> site) & 1:
            zx = PAULI_MATRICES["Z"] @ zx
        m = np.kron(m, zx)
    return ct.alpha_prime * m
