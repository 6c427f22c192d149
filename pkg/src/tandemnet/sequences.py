"""Protocol sequences for deterministic channel access on a line network.

A protocol sequence is a periodic zero-one schedule: a node transmits one
packet in every slot where its sequence is 1.  This module builds the
d^3-period sequence family whose generalized Hamming cross-correlations
over any window of up to three consecutive node indices do not depend on
the nodes' cyclic delay offsets, plus the measurement and transformation
operations that go with it (cross-correlation, invariance certification,
per-link throughput, and the m-expansion used for sub-slot-aligned
operation).

All duty factors and throughputs are exact rationals.  Node indices in
the public API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class DutyFactor:
    """Fraction of slots a node transmits, kept as an exact fraction n/d."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("duty denominator must be positive")
        if not 0 <= self.numerator <= self.denominator:
            raise ValueError(
                f"duty numerator must lie in [0, {self.denominator}], "
                f"got {self.numerator}"
            )

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class ProtocolSequence:
    """One period of a zero-one channel-access schedule."""

    bits: tuple
    duty: DutyFactor

    def __post_init__(self):
        if len(self.bits) == 0:
            raise ValueError("sequence period must be positive")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("sequence entries must be 0 or 1")
        if sum(self.bits) != self.period * self.duty.value:
            raise ValueError(
                f"bit weight {sum(self.bits)} does not match "
                f"P*duty = {self.period * self.duty.value}"
            )

    @property
    def period(self) -> int:
        return len(self.bits)

    @property
    def weight(self) -> int:
        return sum(self.bits)

    def one_positions(self) -> tuple:
        """0-based slot indices of the 1s within one period."""
        return tuple(k for k, b in enumerate(self.bits) if b)


class SequenceSet:
    """An ordered family of protocol sequences with a common period.

    Sequences are addressed 1-based.  ``d`` is the common duty-factor
    denominator of the family.
    """

    def __init__(self, sequences: Sequence[ProtocolSequence], denominator: int):
        sequences = list(sequences)
        if not sequences:
            raise ValueError("a sequence set needs at least one sequence")
        period = sequences[0].period
        for s in sequences:
            if s.period != period:
                raise ValueError("all sequences must share a common period")
            if s.duty.denominator != denominator:
                raise ValueError("all duties must share the common denominator")
        self.sequences = sequences
        self.denominator = denominator
        self.period = period

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    def __getitem__(self, i: int) -> ProtocolSequence:
        """1-based access; indices outside 1..M yield the implicit all-zero
        boundary sequence."""
        if 1 <= i <= len(self.sequences):
            return self.sequences[i - 1]
        zero = DutyFactor(0, self.denominator)
        return ProtocolSequence(bits=(0,) * self.period, duty=zero)

    def in_range(self, i: int) -> bool:
        return 1 <= i <= len(self.sequences)

    def duties(self):
        return [s.duty for s in self.sequences]


def unit_vector(n: int, d: int):
    """Length-d zero-one vector with the first n entries set."""
    if d <= 0:
        raise ValueError("dimension must be positive")
    if not 0 <= n <= d:
        raise ValueError(f"need 0 <= n <= {d}, got n={n}")
    return [1] * n + [0] * (d - n)


def construct_sequences(duties: Sequence[DutyFactor]) -> SequenceSet:
    """Build the d^3-period family for the given duty factors n_i/d.

    Sequence i (1-based) is d^2 copies of the length-d unit vector for
    i = 1 mod 3, d copies of the length-d^2 unit vector for i = 2 mod 3,
    and a single length-d^3 unit vector for i = 0 mod 3.  The family is
    3-wise shift-invariant over consecutive indices.
    """
    duties = list(duties)
    if not duties:
        raise ValueError("need at least one duty factor")
    d = duties[0].denominator
    if any(f.denominator != d for f in duties):
        raise ValueError("all duty factors must share one denominator")
    out = []
    for idx, f in enumerate(duties, start=1):
        n = f.numerator
        if idx % 3 == 1:
            block = unit_vector(n, d)
            bits = block * (d * d)
        elif idx % 3 == 2:
            block = unit_vector(d * n, d * d)
            bits = block * d
        else:
            bits = unit_vector(d * d * n, d * d * d)
        out.append(ProtocolSequence(bits=tuple(bits), duty=f))
    return SequenceSet(out, denominator=d)


def _rolled(seq: ProtocolSequence, tau: int) -> np.ndarray:
    """Array a with a[k] = s[(k - tau) mod P]."""
    arr = np.asarray(seq.bits, dtype=np.int64)
    return np.roll(arr, tau % seq.period)


def generalized_hamming(
    sset: SequenceSet, subset: Sequence[int], offsets: Sequence[int]
) -> int:
    """Number of slots in one period where every sequence in ``subset``
    (cyclically shifted by its offset) is simultaneously 1."""
    if len(subset) == 0:
        raise ValueError("subset must be non-empty")
    if len(subset) != len(offsets):
        raise ValueError("subset and offsets must have equal length")
    for i in subset:
        if not sset.in_range(i):
            raise ValueError(f"sequence index {i} out of range")
    acc = np.ones(sset.period, dtype=np.int64)
    for i, tau in zip(subset, offsets):
        acc *= _rolled(sset[i], tau)
    return int(acc.sum())


def _roll_matrix(seq: ProtocolSequence) -> np.ndarray:
    """P x P matrix whose row tau is the sequence delayed by tau."""
    arr = np.asarray(seq.bits, dtype=np.int64)
    P = seq.period
    idx = (np.arange(P)[None, :] - np.arange(P)[:, None]) % P
    return arr[idx]


@dataclass
class ShiftInvarianceReport:
    invariant: bool
    exhaustive: bool
    witness: Optional[tuple] = None  # (subset, offsets_a, value_a, offsets_b, value_b)
    note: str = ""

    def __bool__(self):
        return self.invariant


def _consecutive_subsets(M: int):
    for size in (1, 2, 3):
        for start in range(1, M - size + 2):
            yield tuple(range(start, start + size))


def is_consecutively_3wise_shift_invariant(
    sset: SequenceSet,
    budget: int = 10**9,
    samples: int = 10**4,
    rng: Optional[np.random.Generator] = None,
) -> ShiftInvarianceReport:
    """Certify that every generalized Hamming cross-correlation over up to
    three consecutive indices is offset-independent.

    Exhausts every offset tuple while the estimated work P^3 * (M - 2)
    stays within ``budget``; beyond that it falls back to randomized
    offset sampling and says so in the report.  The exhaustive sweep is
    O(P^3) per triple, intended for small d.
    """
    M = len(sset)
    P = sset.period
    cost = P**3 * max(M - 2, 1)
    exhaustive = cost <= budget
    mats = {i: _roll_matrix(sset[i]) for i in range(1, M + 1)}

    if exhaustive:
        for subset in _consecutive_subsets(M):
            ms = [mats[i] for i in subset]
            if len(ms) == 1:
                table = ms[0].sum(axis=1)
            elif len(ms) == 2:
                table = np.einsum("ak,bk->ab", ms[0], ms[1])
            else:
                table = np.einsum("ak,bk,ck->abc", ms[0], ms[1], ms[2])
            ref = table.flat[0]
            if not np.all(table == ref):
                bad = np.unravel_index(int(np.argmax(table != ref)), table.shape)
                zero = (0,) * len(subset)
                return ShiftInvarianceReport(
                    invariant=False,
                    exhaustive=True,
                    witness=(subset, zero, int(ref), tuple(int(t) for t in bad),
                             int(table[bad])),
                )
        return ShiftInvarianceReport(invariant=True, exhaustive=True)

    rng = rng if rng is not None else np.random.default_rng(0)
    for subset in _consecutive_subsets(M):
        zero = (0,) * len(subset)
        ref = generalized_hamming(sset, subset, zero)
        taus = rng.integers(0, P, size=(samples, len(subset)))
        for row in taus:
            val = generalized_hamming(sset, subset, tuple(int(t) for t in row))
            if val != ref:
                return ShiftInvarianceReport(
                    invariant=False,
                    exhaustive=False,
                    witness=(subset, zero, ref, tuple(int(t) for t in row), val),
                    note=f"randomized check, {samples} samples per subset",
                )
    return ShiftInvarianceReport(
        invariant=True,
        exhaustive=False,
        note=(f"randomized check only ({samples} samples per subset); "
              f"exhaustive sweep would need ~{cost:.2g} term evaluations"),
    )


def _throughput(sset: SequenceSet, i: int, offsets, step: int) -> Fraction:
    if not sset.in_range(i):
        raise ValueError(f"sequence index {i} out of range")
    if len(offsets) == len(sset):
        offsets = [
            offsets[i + step * hop - 1] if sset.in_range(i + step * hop) else 0
            for hop in (0, 1, 2)
        ]
    if len(offsets) != 3:
        raise ValueError(
            "need offsets for nodes (i, i+step, i+2*step), or one per node"
        )
    P = sset.period
    acc = _rolled(sset[i], offsets[0]).copy()
    for hop, tau in zip((1, 2), offsets[1:]):
        acc *= 1 - _rolled(sset[i + step * hop], tau)
    return Fraction(int(acc.sum()), P)


def throughput_forward(sset: SequenceSet, i: int, offsets) -> Fraction:
    """Fraction of slots per period carrying a non-collided packet from
    node i to node i+1, given the three relevant delay offsets
    (tau_i, tau_{i+1}, tau_{i+2}).  Out-of-range neighbors count as silent.
    """
    return _throughput(sset, i, offsets, step=1)


def throughput_backward(sset: SequenceSet, i: int, offsets) -> Fraction:
    """Mirror of :func:`throughput_forward` for the link from node i to
    node i-1; offsets are (tau_i, tau_{i-1}, tau_{i-2})."""
    return _throughput(sset, i, offsets, step=-1)


def expand_sequence(seq: ProtocolSequence, m: int) -> ProtocolSequence:
    """Replace each 0 by m zeros and each 1 by m-1 ones plus one zero.

    The period grows to m*P and the duty factor shrinks by a factor
    (m-1)/m exactly.  The trailing zero after each burst of m-1 packets is
    what makes the schedule safe under arbitrary sub-slot misalignment.
    """
    if m < 2:
        raise ValueError("expansion factor m must be >= 2")
    bits = []
    for b in seq.bits:
        if b:
            bits.extend([1] * (m - 1) + [0])
        else:
            bits.extend([0] * m)
    duty = DutyFactor(seq.duty.numerator * (m - 1), seq.duty.denominator * m)
    return ProtocolSequence(bits=tuple(bits), duty=duty)


def expand_set(sset: SequenceSet, m: int) -> SequenceSet:
    return SequenceSet(
        [expand_sequence(s, m) for s in sset.sequences],
        denominator=sset.denominator * m,
    )


# -- plain-text serialization -------------------------------------------

def dumps(sset: SequenceSet) -> str:
    """Serialize as a header line "P M d" followed by one 0/1 line per
    sequence.  Bit-exact round trip."""
    lines = [f"{sset.period} {len(sset)} {sset.denominator}"]
    for s in sset.sequences:
        lines.append("".join(str(b) for b in s.bits))
    return "\n".join(lines) + "\n"


def loads(text: str) -> SequenceSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty sequence-set text")
    try:
        P, M, d = (int(tok) for tok in lines[0].split())
    except Exception:
        raise ValueError(f"bad header line {lines[0]!r}; expected 'P M d'")
    if len(lines) != M + 1:
        raise ValueError(f"expected {M} sequence lines, found {len(lines) - 1}")
    seqs = []
    for ln in lines[1:]:
        if len(ln) != P or set(ln) - {"0", "1"}:
            raise ValueError(f"bad sequence line {ln!r}")
        bits = tuple(int(c) for c in ln)
        weight = sum(bits)
        if (weight * d) % P:
            raise ValueError(
                f"sequence weight {weight} has no duty with denominator {d}"
            )
        seqs.append(
            ProtocolSequence(bits=bits, duty=DutyFactor(weight * d // P, d))
        )
    return SequenceSet(seqs, denominator=d)


def save(sset: SequenceSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(sset))


def load(path) -> SequenceSet:
    with open(path) as fh:
        return loads(fh.read())
