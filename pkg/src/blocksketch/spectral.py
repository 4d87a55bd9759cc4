"""Block encodings of functions of a Hamiltonian.

Time evolution is realized by exact matrix exponentiation behind the
standard cost formula; Chebyshev polynomials of an encoded Hermitian block
are built genuinely by alternating the encoding with ancilla reflections;
general bounded polynomials are applied spectrally and re-embedded through
a unitary dilation under the standard interface (halved block, accuracy
and cost ledgers from the degree).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.chebyshev import chebval

from .block_encoding import BlockEncoding, encode_unitary, encoded_block
from .chebyshev import ChebyshevPoly, _certification_grid
from .errors import (
    CostOverflowError,
    InexactInputError,
    NotHermitianError,
    OutOfRangeError,
    PolyNotBoundedError,
)
from .linalg import embed_operator, is_hermitian, unitary_dilation
from .pauli import PauliSum, pauli_sum_matrix

_COST_LIMIT = 2**63 - 1


def evolution_cost(num_terms: int, alpha: float, t: float, eps: float) -> float:
    """Gate cost of an eps-accurate encoding of exp(iHt), unit constants:

        Q alpha |t| + Q log(1/eps) / log(e + log(1/eps) / (alpha |t|))

    with the t = 0 limit taken as 0.
    """
    if num_terms < 1:
        raise OutOfRangeError(f"need at least one term, got {num_terms}")
    if alpha <= 0:
        raise OutOfRangeError(f"alpha must be positive, got {alpha}")
    if not 0.0 < eps <= 1.0:
        raise OutOfRangeError(f"eps must be in (0, 1], got {eps}")
    if t == 0.0:
        return 0.0
    log_eps = math.log(1.0 / eps)
    first = num_terms * alpha * abs(t)
    second = num_terms * log_eps / math.log(math.e + log_eps / (alpha * abs(t)))
    return first + second


def evolution_encoding(h: PauliSum, t: float, eps: float) -> BlockEncoding:
    """Exact encoding of exp(i H t), 1-scaled, no ancilla.

    The simulation is spectrally exact; the accuracy field records the
    requested eps so that downstream error bounds reproduce the composed
    product budget, and the cost ledger evaluates the standard formula.
    """
    if not 0.0 < eps < 1.0:
        raise OutOfRangeError(f"eps must be in (0, 1), got {eps}")
    energies, vecs = np.linalg.eigh(pauli_sum_matrix(h))
    u = (vecs * np.exp(1j * energies * t)) @ vecs.conj().T
    cost = math.ceil(evolution_cost(len(h.terms), h.scale(), t, eps))
    enc = encode_unitary(u, cost=cost)
    return BlockEncoding(enc.unitary, 1, h.dim, scale=1.0, accuracy=eps, cost=cost)


def _require_hermitian_block(b: BlockEncoding) -> np.ndarray:
    block = encoded_block(b)
    if not is_hermitian(block, 1e-8):
        raise NotHermitianError("encoded block is not Hermitian within 1e-8")
    return block


def chebyshev_encoding(b: BlockEncoding, n: int) -> BlockEncoding:
    """Exact encoding of T_n(A) by alternating reflections.

    Interleaves the encoding unitary and its adjoint with the ancilla
    reflection (2|0><0| - I) (x) I; the resulting block satisfies the
    Chebyshev recurrence exactly. Requires an exact input encoding.
    """
    if n < 0:
        raise OutOfRangeError("Chebyshev order must be nonnegative")
    if b.accuracy != 0.0:
        raise InexactInputError("alternating reflections require an exact encoding")
    _require_hermitian_block(b)
    if n * b.cost > _COST_LIMIT:
        raise CostOverflowError(f"cost ledger {n} * {b.cost} exceeds 2^63 - 1")

    full = b.ancilla_dim * b.system_dim
    if n == 0:
        return BlockEncoding(
            np.eye(full, dtype=complex), b.ancilla_dim, b.system_dim, scale=1.0, cost=0
        )
    reflect = -np.eye(full, dtype=complex)
    reflect[: b.system_dim, : b.system_dim] += 2.0 * np.eye(b.system_dim)
    u_adj = b.unitary.conj().T
    word = np.array(b.unitary)
    for j in range(2, n + 1):
        word = word @ reflect @ (u_adj if j % 2 == 0 else b.unitary)
    return BlockEncoding(
        word, b.ancilla_dim, b.system_dim, scale=1.0, accuracy=0.0, cost=n * b.cost
    )


def apply_polynomial(b: BlockEncoding, p: ChebyshevPoly, delta: float) -> BlockEncoding:
    """Encoding of p(A) for a polynomial bounded by 1 on [-1, 1].

    Realized spectrally: p is applied to the eigenvalues of the encoded
    block and the halved result is re-embedded with a unitary dilation, so
    the new block is p(A)/2 and the recovery scale is 2. The accuracy field
    records delta and the cost ledger charges degree * input cost, matching
    the interface of a singular-value-transformation circuit whose phase
    factors are out of scope here.
    """
    if delta < 0:
        raise OutOfRangeError(f"delta must be nonnegative, got {delta}")
    if p.sup_norm_bound is not None:
        bound = p.sup_norm_bound
    else:
        grid = _certification_grid(max(1, p.degree))
        bound = float(np.max(np.abs(chebval(grid, p.coeffs))))
    if bound > 1.0 + 1e-9:
        raise PolyNotBoundedError(f"polynomial reaches {bound:.6g} > 1 on [-1, 1]")
    block = _require_hermitian_block(b)
    if p.degree * b.cost > _COST_LIMIT:
        raise CostOverflowError(f"cost ledger {p.degree} * {b.cost} exceeds 2^63 - 1")

    eigvals, vecs = np.linalg.eigh((block + block.conj().T) / 2.0)
    transformed = chebval(np.clip(eigvals, -1.0, 1.0), p.coeffs)
    halved = (vecs * (transformed / 2.0)) @ vecs.conj().T
    dilated = unitary_dilation(halved)

    anc = 2 * b.ancilla_dim
    full = embed_operator(dilated, [2, b.ancilla_dim, b.system_dim], [0, 2])
    return BlockEncoding(
        full,
        anc,
        b.system_dim,
        scale=2.0,
        accuracy=delta,
        cost=p.degree * b.cost,
    )
