"""Reed-Solomon erasure coding and the nested relay encoder/decoder.

A frame (the packets one node sends within one sequence period) is the
evaluation of a single polynomial on a fixed prefix of the field: local
source symbols occupy the low-degree coefficients, and the two directions
of relay traffic share the coefficient range directly above them.  A
neighbor that already knows one of the shared summands subtracts its
evaluation and is left with an ordinary Reed-Solomon codeword, which it
interpolates from any ``dim`` surviving packets (collisions are erasures
at known positions, so no error correction is needed).

Erased packet values are represented by ``None``; frame serialization
writes them as ``*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import List, Optional, Sequence

from .gf import Field


class CodingError(Exception):
    pass


class InsufficientDataError(CodingError):
    """Fewer survivors than the codeword dimension."""


class CorruptCodewordError(CodingError):
    """Survivors are inconsistent with any single polynomial of the
    declared dimension."""


def poly_eval(field: Field, coeffs: Sequence[int], x: int) -> int:
    """Horner evaluation of a low-degree-first coefficient vector."""
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def poly_add(field: Field, a: Sequence[int], b: Sequence[int]) -> List[int]:
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = a[k] if k < len(a) else 0
        y = b[k] if k < len(b) else 0
        out.append(field.add(x, y))
    return out


def poly_shift(coeffs: Sequence[int], s: int) -> List[int]:
    """Multiply by x^s."""
    return [0] * s + list(coeffs)


def rs_encode(field: Field, coeffs: Sequence[int], eval_set: Sequence[int]) -> List[int]:
    """Evaluate the message polynomial on the given distinct points."""
    if len(set(eval_set)) != len(eval_set):
        raise ValueError("evaluation points must be pairwise distinct")
    return [poly_eval(field, coeffs, x) for x in eval_set]


def _solve_square(field: Field, A: List[List[int]], b: List[int]) -> List[int]:
    """Gaussian elimination over GF(q); A is modified in place."""
    n = len(b)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise CorruptCodewordError("singular interpolation system")
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        inv = field.inv(A[col][col])
        A[col] = [field.mul(inv, v) for v in A[col]]
        b[col] = field.mul(inv, b[col])
        for r in range(n):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [field.sub(v, field.mul(factor, w)) for v, w in zip(A[r], A[col])]
                b[r] = field.sub(b[r], field.mul(factor, b[col]))
    return b


def rs_decode(
    field: Field,
    values: Sequence[Optional[int]],
    eval_set: Sequence[int],
    dim: int,
) -> List[int]:
    """Recover the degree-<dim polynomial from the non-erased components.

    Solves the dim x dim Vandermonde system on the first ``dim`` survivors
    and then checks the remaining survivors against the result, so a
    mangled codeword is reported rather than silently mis-decoded.
    """
    if len(values) != len(eval_set):
        raise ValueError("values and eval_set must have equal length")
    if len(set(eval_set)) != len(eval_set):
        raise ValueError("evaluation points must be pairwise distinct")
    if dim == 0:
        if any(v not in (0, None) for v in values):
            raise CorruptCodewordError("nonzero values for a zero-dimension code")
        return []
    survivors = [(x, v) for x, v in zip(eval_set, values) if v is not None]
    if len(survivors) < dim:
        raise InsufficientDataError(
            f"need {dim} survivors, have {len(survivors)}"
        )
    pts = survivors[:dim]
    A = [[field.pow(x, e) for e in range(dim)] for x, _ in pts]
    coeffs = _solve_square(field, A, [v for _, v in pts])
    for x, v in survivors[dim:]:
        if poly_eval(field, coeffs, x) != v:
            raise CorruptCodewordError(
                f"survivor at point {x} disagrees with interpolated polynomial"
            )
    return coeffs


# -- nested channel-network coding --------------------------------------

@dataclass
class NodeCoderState:
    """Per-period encoder state of one node.

    ``fwd_rate``/``bwd_rate`` are relay rates through the node (symbols per
    packet duration) and ``src_rate`` the attached-source rate, all exact
    rationals; ``period`` is the sequence period P.  The three buffers
    hold exactly rate*P symbols each for the current period.
    """

    node: int
    period: int
    frame_len: int
    fwd_rate: Fraction = Fraction(0)
    bwd_rate: Fraction = Fraction(0)
    src_rate: Fraction = Fraction(0)
    fwd_symbols: List[int] = dc_field(default_factory=list)
    bwd_symbols: List[int] = dc_field(default_factory=list)
    src_symbols: List[int] = dc_field(default_factory=list)

    def __post_init__(self):
        for rate, name in [
            (self.fwd_rate, "fwd_rate"),
            (self.bwd_rate, "bwd_rate"),
            (self.src_rate, "src_rate"),
        ]:
            count = rate * self.period
            if count.denominator != 1:
                raise RateInfeasibleError(
                    f"{name} * P = {count} is not an integer symbol count"
                )
        if self.src_count + max(self.fwd_count, self.bwd_count) > self.frame_len:
            raise RateInfeasibleError(
                f"node {self.node}: {self.src_count} source + "
                f"max({self.fwd_count}, {self.bwd_count}) relay symbols "
                f"exceed frame capacity {self.frame_len}"
            )
        for symbols, count, name in [
            (self.fwd_symbols, self.fwd_count, "fwd"),
            (self.bwd_symbols, self.bwd_count, "bwd"),
            (self.src_symbols, self.src_count, "src"),
        ]:
            if len(symbols) != count:
                raise ValueError(
                    f"node {self.node}: {name} buffer holds {len(symbols)} "
                    f"symbols, expected {count}"
                )

    @property
    def fwd_count(self) -> int:
        return int(self.fwd_rate * self.period)

    @property
    def bwd_count(self) -> int:
        return int(self.bwd_rate * self.period)

    @property
    def src_count(self) -> int:
        return int(self.src_rate * self.period)


class RateInfeasibleError(CodingError):
    """The requested rates do not fit the node's frame."""


def nested_polynomial(field: Field, state: NodeCoderState) -> List[int]:
    """Coefficients of g(x) + (h_fwd(x) + h_bwd(x)) * x^{src_count}.

    The two relay polynomials share the coefficient range above the
    source symbols; each neighbor knows one of the two summands and can
    subtract it, which is what lets one frame serve both directions.
    """
    relay = poly_add(field, state.fwd_symbols, state.bwd_symbols)
    return poly_add(field, state.src_symbols, poly_shift(relay, state.src_count))


def nested_encode(field: Field, state: NodeCoderState) -> List[int]:
    """The frame of ``state.frame_len`` packets for one period: the nested
    polynomial evaluated on the first ``frame_len`` field elements."""
    if state.frame_len > field.order:
        raise ValueError(
            f"frame length {state.frame_len} exceeds field order {field.order}"
        )
    eval_set = list(range(state.frame_len))
    return rs_encode(field, nested_polynomial(field, state), eval_set)


def nested_decode(
    field: Field,
    values: Sequence[Optional[int]],
    eval_set: Sequence[int],
    known_coeffs: Sequence[int],
    known_shift: int,
    expected_dim: int,
    split_at: int,
):
    """Strip the already-known nested component and decode the rest.

    Subtracts the evaluation of ``known_coeffs * x^known_shift`` from every
    survivor, interpolates a degree-<expected_dim polynomial, and splits
    its coefficients at ``split_at`` into (low, high) - typically the
    neighbor's source symbols and the relay symbols addressed to us.

    Raises InsufficientDataError when fewer than ``expected_dim`` packets
    survived, which is exactly the signature of a rate vector outside the
    achievable region.
    """
    shifted = poly_shift(known_coeffs, known_shift)
    cleaned = [
        None if v is None else field.sub(v, poly_eval(field, shifted, x))
        for v, x in zip(values, eval_set)
    ]
    coeffs = rs_decode(field, cleaned, eval_set, expected_dim)
    coeffs = coeffs + [0] * (expected_dim - len(coeffs))
    return coeffs[:split_at], coeffs[split_at:]


# -- frame serialization ------------------------------------------------

def frame_to_line(values: Sequence[Optional[int]]) -> str:
    """One frame per line, decimal packets, ``*`` for erased."""
    return " ".join("*" if v is None else str(v) for v in values)


def frame_from_line(line: str) -> List[Optional[int]]:
    out: List[Optional[int]] = []
    for tok in line.split():
        out.append(None if tok == "*" else int(tok))
    return out
