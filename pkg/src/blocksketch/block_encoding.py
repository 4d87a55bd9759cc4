"""Block encodings and their arithmetic.

A block encoding is a unitary on ancilla (x) system whose top-left system
block, divided into a scale alpha, represents a target matrix A:
``alpha * encoded_block(U) ~ A`` within ``alpha * accuracy``. The ancilla
register is the most significant tensor factor, so the encoded block is
always the fixed top-left slice.

All values are immutable and all operations pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptySumError,
    LengthMismatchError,
    NotUnitaryError,
    OutOfRangeError,
)
from .linalg import embed_direct_sum, embed_operator, is_unitary, unitary_completion
from .pauli import PauliSum, pauli_word_matrix

# Full unitarity validation is O(dim^3); skip it above this size and rely
# on construction plus the test suite.
_VALIDATE_DIM_LIMIT = 256


@dataclass(frozen=True)
class BlockEncoding:
    """A unitary on C^ancilla_dim (x) C^system_dim with a scale, an accuracy
    bound, and an abstract gate-cost ledger."""

    unitary: np.ndarray
    ancilla_dim: int
    system_dim: int
    scale: float
    accuracy: float = 0.0
    cost: int = 0

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        object.__setattr__(self, "unitary", u)
        full = self.ancilla_dim * self.system_dim
        if u.shape != (full, full):
            raise DimensionMismatchError(
                f"unitary shape {u.shape} != ({full}, {full}) for "
                f"ancilla {self.ancilla_dim} x system {self.system_dim}"
            )
        if self.scale <= 0:
            raise OutOfRangeError(f"scale must be positive, got {self.scale}")
        if self.accuracy < 0:
            raise OutOfRangeError(f"accuracy must be nonnegative, got {self.accuracy}")
        if self.cost < 0:
            raise OutOfRangeError(f"cost must be nonnegative, got {self.cost}")
        if full <= _VALIDATE_DIM_LIMIT and not is_unitary(u, 1e-10):
            raise NotUnitaryError("matrix is not unitary within 1e-10")


def encoded_block(b: BlockEncoding) -> np.ndarray:
    """The system-sized top-left block (ancilla projected onto |0>)."""
    d = b.system_dim
    return np.array(b.unitary[:d, :d])


def encode_unitary(u: np.ndarray, cost: int = 0) -> BlockEncoding:
    """Trivial encoding of a unitary: scale 1, no ancilla, exact."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, 1e-10):
        raise NotUnitaryError("input is not unitary within 1e-10")
    return BlockEncoding(u, 1, u.shape[0], scale=1.0, accuracy=0.0, cost=cost)


def identity_encoding(system_dim: int) -> BlockEncoding:
    return encode_unitary(np.eye(system_dim), cost=0)


def _prepare_unitary(weights: np.ndarray, dim: int) -> np.ndarray:
    """Unitary sending |0> to the sqrt-weight superposition, zero padded."""
    col = np.zeros(dim, dtype=complex)
    col[: weights.size] = np.sqrt(weights)
    return unitary_completion(col)


def encode_pauli_sum(s: PauliSum) -> BlockEncoding:
    """Prepare/select/unprepare encoding of a weighted Pauli sum.

    The prepare unitary loads sqrt(|beta_i| / sum|beta|) on a power-of-two
    ancilla (zero padded), the select unitary applies the sign-corrected
    Pauli word on branch i and the identity on padding branches. The scale
    is sum |beta_i| and the block is exact; cost is the number of terms.
    """
    if not isinstance(s, PauliSum) or not s.terms:
        raise EmptySumError("encode_pauli_sum requires a nonempty PauliSum")
    m = len(s.terms)
    alpha = s.scale()
    dim_anc = 1 << max(0, (m - 1).bit_length())
    dim_sys = s.dim

    weights = np.array([abs(t.coefficient) for t in s.terms]) / alpha
    v_prep = _prepare_unitary(weights, dim_anc)

    v_select = np.zeros((dim_anc * dim_sys, dim_anc * dim_sys), dtype=complex)
    for i in range(dim_anc):
        lo = i * dim_sys
        if i < m:
            term = s.terms[i]
            sign = 1.0 if term.coefficient > 0 else -1.0
            v_select[lo : lo + dim_sys, lo : lo + dim_sys] = sign * pauli_word_matrix(term.word)
        else:
            v_select[lo : lo + dim_sys, lo : lo + dim_sys] = np.eye(dim_sys)

    eye = np.eye(dim_sys)
    u = np.kron(v_prep.conj().T, eye) @ v_select @ np.kron(v_prep, eye)
    return BlockEncoding(u, dim_anc, dim_sys, scale=alpha, accuracy=0.0, cost=m)


def adjoint(b: BlockEncoding) -> BlockEncoding:
    """Encoding of the conjugate transpose of the target; same ledger."""
    return replace(b, unitary=b.unitary.conj().T)


def product_error_bound(errors) -> float:
    """Left fold of the two-factor composition bound
    e0 + e1 + 2 sqrt(e0 e1) over a list of per-factor accuracies.

    For n+1 equal entries e this evaluates to (n+1)^2 e.
    """
    total = 0.0
    for e in errors:
        if e < 0:
            raise OutOfRangeError("accuracies must be nonnegative")
        total = total + e + 2.0 * math.sqrt(total * e)
    return total


def product(encodings) -> BlockEncoding:
    """Encoding of the ordered product of the targets.

    Each factor keeps its own ancilla register (concatenated in list
    order, most significant first); scales multiply, costs add, and the
    accuracy composes through product_error_bound.
    """
    encodings = list(encodings)
    if not encodings:
        raise LengthMismatchError("product requires at least one encoding")
    dims_sys = {b.system_dim for b in encodings}
    if len(dims_sys) != 1:
        raise DimensionMismatchError(f"system dimensions differ: {sorted(dims_sys)}")
    if len(encodings) == 1:
        return encodings[0]

    dim_sys = encodings[0].system_dim
    dims = [b.ancilla_dim for b in encodings] + [dim_sys]
    sys_pos = len(encodings)
    full = int(np.prod(dims))
    u = np.eye(full, dtype=complex)
    for i, b in enumerate(encodings):
        u = u @ embed_operator(b.unitary, dims, [i, sys_pos])

    scale = float(np.prod([b.scale for b in encodings]))
    cost = int(sum(b.cost for b in encodings))
    accuracy = product_error_bound([b.accuracy for b in encodings])
    anc = int(np.prod([b.ancilla_dim for b in encodings]))
    return BlockEncoding(u, anc, dim_sys, scale=scale, accuracy=accuracy, cost=cost)


def linear_combine(coeffs, encodings) -> BlockEncoding:
    """Encoding of sum_i beta_i A_i for complex beta_i.

    Coefficient magnitudes go into a new prepare register of power-of-two
    dimension; phases are absorbed into the select unitary. The input
    encodings share one ancilla register of the largest input ancilla
    dimension (each input embedded as a direct summand), so the ancilla
    dimension is prepare_dim * max_i ancilla_dim_i. Scale is
    sum_i alpha_i |beta_i|; costs add.
    """
    coeffs = [complex(c) for c in coeffs]
    encodings = list(encodings)
    if not encodings:
        raise LengthMismatchError("linear_combine requires at least one encoding")
    if len(coeffs) != len(encodings):
        raise LengthMismatchError(f"{len(coeffs)} coefficients for {len(encodings)} encodings")
    dims_sys = {b.system_dim for b in encodings}
    if len(dims_sys) != 1:
        raise DimensionMismatchError(f"system dimensions differ: {sorted(dims_sys)}")

    dim_sys = encodings[0].system_dim
    m = len(encodings)
    strengths = np.array([b.scale * abs(c) for c, b in zip(coeffs, encodings)])
    total = float(strengths.sum())
    if total <= 0:
        raise OutOfRangeError("all coefficients are zero; the combination has no scale")

    dim_prep = 1 << max(0, (m - 1).bit_length())
    dim_anc = max(b.ancilla_dim for b in encodings)
    branch_dim = dim_anc * dim_sys
    v_prep = _prepare_unitary(strengths / total, dim_prep)

    v_select = np.zeros((dim_prep * branch_dim, dim_prep * branch_dim), dtype=complex)
    for i in range(dim_prep):
        lo = i * branch_dim
        if i < m:
            c = coeffs[i]
            phase = c / abs(c) if c != 0 else 1.0
            branch = phase * embed_direct_sum(encodings[i].unitary, branch_dim)
        else:
            branch = np.eye(branch_dim)
        v_select[lo : lo + branch_dim, lo : lo + branch_dim] = branch

    eye = np.eye(branch_dim)
    u = np.kron(v_prep.conj().T, eye) @ v_select @ np.kron(v_prep, eye)

    accuracy = float(sum(s * b.accuracy for s, b in zip(strengths, encodings)) / total)
    cost = int(sum(b.cost for b in encodings))
    return BlockEncoding(
        u, dim_prep * dim_anc, dim_sys, scale=total, accuracy=accuracy, cost=cost
    )
