"""Rate regions for tandem collision networks.

A rate vector assigns each source its throughput in packets per slot
(equivalently information symbols per packet duration).  This module
evaluates:

* the achievable region of the deterministic schedule-and-relay scheme
  (per-node load constraints in both directions, with every node's own
  traffic counted on both sides),
* a matching outer bound on all protocol-sequence schemes,
* three random-access baselines -- pure ALOHA, slotted ALOHA, and
  slotted ALOHA with network coding at the relays,

plus optimizers for the maximal symmetric rate and two-source region
boundaries.  Membership predicates work in exact rational arithmetic;
the optimizers use numpy duty-factor grids and re-derive the winning
value exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .network import NetworkSpec, RelaySets, Source, relay_sets

SCHEMES = ("capacity", "outer", "pure", "slotted", "nc-slotted")


@dataclass(frozen=True)
class Constraint:
    """Sum of the named sources' rates is bounded by the throughput of
    one direction of one node's link."""

    node: int
    direction: str  # "fwd" or "bwd"
    sources: tuple


def _duty(f: Sequence, i: int):
    """Duty factor of node i, zero outside the line."""
    return f[i - 1] if 1 <= i <= len(f) else 0


def _link_bound(f: Sequence, i: int, direction: str):
    """Zero-error symbol rate of node i's forward or backward link."""
    step = 1 if direction == "fwd" else -1
    return (
        _duty(f, i)
        * (1 - _duty(f, i + step))
        * (1 - _duty(f, i + 2 * step))
    )


def capacity_constraints(spec: NetworkSpec) -> List[Constraint]:
    """Constraints of the achievable region.

    A node's forward link carries its forward relays plus all of its own
    sources with a demand on either side: every attached source's symbols
    ride both directions' frames (the relays need them to cancel), so
    they load both links.
    """
    rsets = relay_sets(spec)
    out = []
    for i in range(1, spec.M + 1):
        attached = set(spec.attached_at(i))
        fwd = tuple(sorted(rsets.fwd[i] | attached))
        bwd = tuple(sorted(rsets.bwd[i] | attached))
        if fwd and i < spec.M:
            out.append(Constraint(i, "fwd", fwd))
        if bwd and i > 1:
            out.append(Constraint(i, "bwd", bwd))
    return out


def outer_constraints(spec: NetworkSpec) -> List[Constraint]:
    """Constraints of the outer bound: node i's forward link must carry
    every source attached at or before i with a demand beyond i."""
    rsets = relay_sets(spec)
    out = []
    for i in range(1, spec.M + 1):
        if rsets.fwd_incl[i]:
            out.append(Constraint(i, "fwd", tuple(sorted(rsets.fwd_incl[i]))))
        if rsets.bwd_incl[i]:
            out.append(Constraint(i, "bwd", tuple(sorted(rsets.bwd_incl[i]))))
    return out


def _check_constraints(constraints, f, R) -> bool:
    for c in constraints:
        load = sum(R[j - 1] for j in c.sources)
        if load > _link_bound(f, c.node, c.direction):
            return False
    return True


def achievable_point(spec: NetworkSpec, f: Sequence, R: Sequence) -> bool:
    """Is the rate vector achievable with the given duty factors?"""
    _validate_point(spec, f, R)
    return _check_constraints(capacity_constraints(spec), f, R)


def outer_point(spec: NetworkSpec, f: Sequence, R: Sequence) -> bool:
    """Does the rate vector satisfy the outer bound at these duties?"""
    _validate_point(spec, f, R)
    return _check_constraints(outer_constraints(spec), f, R)


def _validate_point(spec, f, R):
    if len(f) != spec.M:
        raise ValueError(f"need {spec.M} duty factors, got {len(f)}")
    if len(R) != spec.N:
        raise ValueError(f"need {spec.N} rates, got {len(R)}")
    if any(x < 0 or x > 1 for x in f):
        raise ValueError("duty factors must lie in [0, 1]")
    if any(r < 0 for r in R):
        raise ValueError("rates must be nonnegative")


# -- ALOHA baselines ----------------------------------------------------

@dataclass
class AlohaParams:
    """Transmission parameters of one ALOHA variant.

    ``intensity``: per-node Poisson packet-start rate (pure ALOHA) or
    slot transmission probability (slotted variants), indexed 1..M via
    position 0..M-1.  ``splits``: per node, the probability mass devoted
    to (source, forward relay, backward relay) traffic; must sum to at
    most 1.  nc-slotted only uses the source share -- the remainder goes
    to the single coded relay stream.
    """

    scheme: str
    intensity: Sequence
    splits: Sequence[Tuple]

    def __post_init__(self):
        if self.scheme not in ("pure", "slotted", "nc-slotted"):
            raise ValueError(f"unknown ALOHA scheme {self.scheme!r}")
        for trio in self.splits:
            if len(trio) != 3 or any(x < 0 for x in trio) or sum(trio) > 1 + 1e-12:
                raise ValueError("each split must be 3 nonnegative shares summing to <= 1")


def _aloha_success(params: AlohaParams, i: int, direction: str) -> float:
    """Per-slot success rate of node i's transmissions toward one
    neighbor, before splitting among traffic classes."""
    lam = params.intensity
    M = len(lam)

    def g(n):
        return lam[n - 1] if 1 <= n <= M else 0.0

    step = 1 if direction == "fwd" else -1
    if params.scheme == "pure":
        # receiver and two-hop interferer must both be silent for the
        # packet's whole (unit) duration around its start
        return g(i) * math.exp(-2.0 * (g(i + step) + g(i + 2 * step)))
    return g(i) * (1.0 - g(i + step)) * (1.0 - g(i + 2 * step))


def aloha_region_point(spec: NetworkSpec, params: AlohaParams, R: Sequence) -> bool:
    """Is the rate vector supported by the given ALOHA parameters?

    Each node's successful-transmission rate is split among its own
    sources, forward relays, and backward relays according to the
    parameter shares; with in-network coding the forward and backward
    relay streams share one coded share.
    """
    if len(params.intensity) != spec.M or len(params.splits) != spec.M:
        raise ValueError("ALOHA parameters must cover every node")
    _validate_point(spec, [0] * spec.M, R)
    rsets = relay_sets(spec)
    eps = 1e-12
    for i in range(1, spec.M + 1):
        p_s, p_f, p_b = params.splits[i - 1]
        src_load = sum(R[j - 1] for j in spec.attached_at(i))
        fwd_load = sum(R[j - 1] for j in rsets.fwd[i])
        bwd_load = sum(R[j - 1] for j in rsets.bwd[i])
        succ_f = _aloha_success(params, i, "fwd")
        succ_b = _aloha_success(params, i, "bwd")
        if params.scheme == "nc-slotted":
            p_r = 1.0 - p_s
            checks = [
                (src_load, p_s * min(succ_f, succ_b) if src_load else 1.0),
                (fwd_load, p_r * succ_f),
                (bwd_load, p_r * succ_b),
            ]
            # a source heard on both sides loads both directions at share p_s
            if src_load and not (src_load <= p_s * succ_f + eps
                                 and src_load <= p_s * succ_b + eps):
                return False
            checks = checks[1:]
        else:
            checks = [
                (src_load, p_s * min(succ_f, succ_b)),
                (fwd_load, p_f * succ_f),
                (bwd_load, p_b * succ_b),
            ]
        for load, cap in checks:
            if load > cap + eps:
                return False
    return True


# -- symmetric-rate optimizers ------------------------------------------

@dataclass
class SymmetricRateResult:
    scheme: str
    rate: float
    rate_exact: Optional[Fraction]
    params: tuple  # duty factors or intensities, indexed by node

    def witness_str(self) -> str:
        return ";".join(_format_number(p) for p in self.params)


def _format_number(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return f"{float(x):.6g}"


def _traffic_weights(spec: NetworkSpec) -> List[Tuple[int, int, int]]:
    """Per node: how many unit-rate sources load (own, forward-relay,
    backward-relay) traffic at the symmetric point."""
    rsets = relay_sets(spec)
    out = []
    for i in range(1, spec.M + 1):
        out.append((
            len([s for s in spec.sources
                 if s.attach == i and any(d != i for d in s.demands)]),
            len(rsets.fwd[i]),
            len(rsets.bwd[i]),
        ))
    return out


def active_nodes(spec: NetworkSpec) -> List[int]:
    """Nodes that carry any traffic; the rest can stay silent."""
    weights = _traffic_weights(spec)
    return [i for i in range(1, spec.M + 1) if any(weights[i - 1])]


def _node_symmetric_rate(scheme, w, succ_f, succ_b, src_share=None):
    """Largest common rate one node supports, with its transmissions (or
    success rate) split optimally among its traffic classes.

    ``w`` = (own sources, forward relays, backward relays); ``succ_*``
    are the directional success rates; arrays broadcast.  For slotted
    and pure the split is free, so the bound is the weighted harmonic
    combination; with network coding the two relay directions share one
    stream and only the worse direction counts.
    """
    w_s, w_f, w_b = w
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_f = np.where(succ_f > 0, w_f / np.where(succ_f > 0, succ_f, 1), np.inf)
        inv_b = np.where(succ_b > 0, w_b / np.where(succ_b > 0, succ_b, 1), np.inf)
        succ_min = np.minimum(succ_f, succ_b)
        inv_s = np.where(succ_min > 0, w_s / np.where(succ_min > 0, succ_min, 1), np.inf)
        if w_f == 0:
            inv_f = np.zeros_like(inv_f + 0.0)
        if w_b == 0:
            inv_b = np.zeros_like(inv_b + 0.0)
        if w_s == 0:
            inv_s = np.zeros_like(inv_s + 0.0)
        if scheme == "nc-slotted":
            denom = inv_s + np.maximum(inv_f, inv_b)
        else:
            denom = inv_s + inv_f + inv_b
        rate = np.where(denom > 0, 1.0 / np.where(denom > 0, denom, 1), np.inf)
    return rate


def _capacity_node_rate(constraints, i, f_arrays):
    """Symmetric-rate bound from the deterministic scheme's constraints
    touching node i (arrays broadcast)."""
    best = None
    for c in constraints:
        if c.node != i:
            continue
        step = 1 if c.direction == "fwd" else -1
        bound = (
            f_arrays.get(i, 0.0)
            * (1.0 - f_arrays.get(i + step, 0.0))
            * (1.0 - f_arrays.get(i + 2 * step, 0.0))
        )
        r = bound / len(c.sources)
        best = r if best is None else np.minimum(best, r)
    return best


def _grid_values(grid_step: Fraction) -> List[Fraction]:
    steps = int(1 / grid_step)
    if Fraction(1, steps) != grid_step:
        raise ValueError("grid step must divide 1")
    return [Fraction(k, steps) for k in range(steps + 1)]


def _symmetric_rate_arrays(spec, scheme, f_arrays, constraints=None):
    """min over nodes of the per-node symmetric bound; arrays broadcast."""
    weights = _traffic_weights(spec)
    total = None
    for i in active_nodes(spec):
        if scheme in ("capacity", "outer"):
            r = _capacity_node_rate(constraints, i, f_arrays)
        else:
            succ_f = (
                f_arrays.get(i, 0.0)
                * (1.0 - f_arrays.get(i + 1, 0.0))
                * (1.0 - f_arrays.get(i + 2, 0.0))
            )
            succ_b = (
                f_arrays.get(i, 0.0)
                * (1.0 - f_arrays.get(i - 1, 0.0))
                * (1.0 - f_arrays.get(i - 2, 0.0))
            )
            r = _node_symmetric_rate(scheme, weights[i - 1], succ_f, succ_b)
        if r is None:
            continue
        total = r if total is None else np.minimum(total, r)
    return total


def _exact_symmetric_rate(spec, scheme, duties: Dict[int, Fraction]) -> Fraction:
    """Exact-rational recomputation of the symmetric bound at one duty
    assignment (capacity/outer/slotted/nc-slotted)."""
    weights = _traffic_weights(spec)

    def duty(i):
        return duties.get(i, Fraction(0))

    def bound(i, step):
        return duty(i) * (1 - duty(i + step)) * (1 - duty(i + 2 * step))

    best = None
    if scheme in ("capacity", "outer"):
        cons = capacity_constraints(spec) if scheme == "capacity" else outer_constraints(spec)
        for c in cons:
            step = 1 if c.direction == "fwd" else -1
            r = bound(c.node, step) / len(c.sources)
            best = r if best is None else min(best, r)
        return best if best is not None else Fraction(0)
    for i in active_nodes(spec):
        w_s, w_f, w_b = weights[i - 1]
        sf, sb = bound(i, 1), bound(i, -1)
        terms = []
        if w_s:
            if min(sf, sb) == 0:
                return Fraction(0)
            terms.append(Fraction(w_s) / min(sf, sb))
        relay_terms = []
        for w, s in ((w_f, sf), (w_b, sb)):
            if w:
                if s == 0:
                    return Fraction(0)
                relay_terms.append(Fraction(w) / s)
        if scheme == "nc-slotted" and relay_terms:
            terms.append(max(relay_terms))
        else:
            terms.extend(relay_terms)
        if terms:
            r = 1 / sum(terms)
            best = r if best is None else min(best, r)
    return best if best is not None else Fraction(0)


def max_symmetric_rate(
    spec: NetworkSpec,
    scheme: str = "capacity",
    grid_step: Fraction = Fraction(1, 60),
    seed: int = 0,
    restarts: int = 20,
    predicate: Optional[Callable] = None,
) -> SymmetricRateResult:
    """Maximal common rate over the scheme's free parameters.

    The duty-parameterized schemes are maximized over a duty-factor grid
    (only traffic-carrying nodes vary; the rest stay silent) and the
    winner is recomputed in exact rationals.  Pure ALOHA is maximized by
    seeded coordinate descent over intensities in [0, 1].  A custom
    membership ``predicate(f, r) -> bool`` may replace the built-in
    schemes; it is maximized by grid search plus bisection on the rate.
    """
    if predicate is not None:
        return _max_symmetric_predicate(spec, predicate, grid_step)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if scheme == "pure":
        return _max_symmetric_pure(spec, seed=seed, restarts=restarts)

    nodes = active_nodes(spec)
    if not nodes:
        return SymmetricRateResult(scheme, 0.0, Fraction(0), (Fraction(0),) * spec.M)
    values = _grid_values(grid_step)
    vals = np.array([float(v) for v in values])
    n = len(values)
    k = len(nodes)
    constraints = None
    if scheme in ("capacity", "outer"):
        constraints = (
            capacity_constraints(spec) if scheme == "capacity" else outer_constraints(spec)
        )

    best_rate = -1.0
    best_idx = None
    # chunk over the first active node's duty to bound memory
    inner_shape = (n,) * (k - 1)
    for i0 in range(n):
        f_arrays: Dict[int, np.ndarray] = {}
        for pos, node in enumerate(nodes):
            if pos == 0:
                f_arrays[node] = np.full(inner_shape or (1,), vals[i0])
            else:
                shape = [1] * max(k - 1, 1)
                shape[pos - 1] = n
                f_arrays[node] = vals.reshape(shape)
        rate = _symmetric_rate_arrays(spec, scheme, f_arrays, constraints)
        rate = np.broadcast_to(rate, inner_shape or (1,))
        flat = int(np.argmax(rate))
        if rate.flat[flat] > best_rate + 1e-15:
            best_rate = float(rate.flat[flat])
            rest = np.unravel_index(flat, inner_shape) if inner_shape else ()
            best_idx = (i0,) + tuple(int(x) for x in rest)

    duties = {node: values[best_idx[pos]] for pos, node in enumerate(nodes)}
    exact = _exact_symmetric_rate(spec, scheme, duties)
    params = tuple(duties.get(i, Fraction(0)) for i in range(1, spec.M + 1))
    return SymmetricRateResult(scheme, float(exact), exact, params)


def _max_symmetric_pure(spec, seed=0, restarts=20, sweeps=25):
    weights = _traffic_weights(spec)
    nodes = active_nodes(spec)
    M = spec.M

    def objective(lam):
        total = np.inf
        for i in nodes:
            def g(nn):
                return lam[nn - 1] if 1 <= nn <= M else 0.0
            succ_f = g(i) * math.exp(-2.0 * (g(i + 1) + g(i + 2)))
            succ_b = g(i) * math.exp(-2.0 * (g(i - 1) + g(i - 2)))
            r = float(_node_symmetric_rate("pure", weights[i - 1],
                                           np.float64(succ_f), np.float64(succ_b)))
            total = min(total, r)
        return total if total != np.inf else 0.0

    rng = np.random.default_rng(seed)
    best = (0.0, [0.0] * M)
    for trial in range(restarts):
        lam = [0.0] * M
        for i in nodes:
            lam[i - 1] = 0.25 if trial == 0 else float(rng.uniform(0, 1))
        for _ in range(sweeps):
            improved = False
            for i in nodes:
                orig = cand = lam[i - 1]
                cur = objective(lam)
                for x in np.linspace(0.0, 1.0, 41):
                    lam[i - 1] = float(x)
                    v = objective(lam)
                    if v > cur + 1e-12:
                        cur, cand = v, float(x)
                # local refinement around the best grid point
                for width in (0.025, 0.0025, 0.00025):
                    for x in np.linspace(max(0, cand - width), min(1, cand + width), 21):
                        lam[i - 1] = float(x)
                        v = objective(lam)
                        if v > cur + 1e-13:
                            cur, cand = v, float(x)
                if abs(cand - orig) > 1e-9:
                    improved = True
                lam[i - 1] = cand
            if not improved:
                break
        v = objective(lam)
        if v > best[0]:
            best = (v, list(lam))
    return SymmetricRateResult("pure", best[0], None, tuple(best[1]))


def _max_symmetric_predicate(spec, predicate, grid_step):
    """Grid search over duties plus bisection on the common rate for an
    arbitrary membership predicate(f, r)."""
    nodes = active_nodes(spec)
    values = _grid_values(grid_step)

    def max_rate_at(f):
        if not predicate(f, 0.0):
            return -1.0
        lo, hi = 0.0, 1.0
        while predicate(f, hi) and hi < 1e6:
            hi *= 2
        for _ in range(60):
            mid = (lo + hi) / 2
            if predicate(f, mid):
                lo = mid
            else:
                hi = mid
        return lo

    best = (-1.0, None)
    for combo in product(values, repeat=len(nodes)):
        f = [Fraction(0)] * spec.M
        for pos, node in enumerate(nodes):
            f[node - 1] = combo[pos]
        r = max_rate_at(f)
        if r > best[0] + 1e-15:
            best = (r, tuple(f))
    return SymmetricRateResult("custom", best[0], None, best[1])


# -- two-source region boundaries ---------------------------------------

def _two_source_rate2_bound(spec, scheme, f_arrays, weights_pairs, r1):
    """max feasible R2 at fixed R1 as an array over the duty grid.

    ``weights_pairs``: per node and direction, the (count of source-1,
    count of source-2) loads on that link.
    """
    total = None
    for (i, step), (w1, w2) in weights_pairs.items():
        bound = (
            f_arrays.get(i, 0.0)
            * (1.0 - f_arrays.get(i + step, 0.0))
            * (1.0 - f_arrays.get(i + 2 * step, 0.0))
        )
        slack = bound - w1 * r1
        if w2 == 0:
            # infeasible whenever a source-1-only link is overloaded
            r = np.where(slack >= -1e-12, np.inf, -np.inf)
        else:
            r = np.where(slack >= -1e-12, slack / w2, -np.inf)
        total = r if total is None else np.minimum(total, r)
    return total


def _two_source_weight_pairs(spec, scheme):
    cons = capacity_constraints(spec) if scheme == "capacity" else outer_constraints(spec)
    pairs = {}
    for c in cons:
        step = 1 if c.direction == "fwd" else -1
        pairs[(c.node, step)] = (
            sum(1 for j in c.sources if j == 1),
            sum(1 for j in c.sources if j == 2),
        )
    return pairs


def max_rate2_given_rate1(
    spec: NetworkSpec,
    scheme: str,
    r1: float,
    grid_step: Fraction = Fraction(1, 60),
    seed: int = 0,
) -> float:
    """Largest R2 with (R1, R2) in the scheme's region, or -inf when R1
    alone is already infeasible.  Two-source networks only."""
    if spec.N != 2:
        raise ValueError("boundary tracing supports exactly two sources")
    if scheme == "pure":
        return _pure_rate2_given_rate1(spec, r1, seed=seed)
    if scheme in ("slotted", "nc-slotted"):
        return _slotted_rate2_given_rate1(spec, scheme, r1, grid_step)
    pairs = _two_source_weight_pairs(spec, scheme)
    nodes = active_nodes(spec)
    values = _grid_values(grid_step)
    vals = np.array([float(v) for v in values])
    n, k = len(values), len(nodes)
    best = -np.inf
    best_idx = None
    inner_shape = (n,) * (k - 1)
    for i0 in range(n):
        f_arrays = {}
        for pos, node in enumerate(nodes):
            if pos == 0:
                f_arrays[node] = np.full(inner_shape or (1,), vals[i0])
            else:
                shape = [1] * max(k - 1, 1)
                shape[pos - 1] = n
                f_arrays[node] = vals.reshape(shape)
        r2 = _two_source_rate2_bound(spec, scheme, f_arrays, pairs, float(r1))
        r2 = np.where(np.isinf(r2) & (r2 > 0), 1.0, r2)  # R1-only feasibility
        r2 = np.broadcast_to(r2, inner_shape or (1,))
        flat = int(np.argmax(r2))
        if r2.flat[flat] > best:
            best = float(r2.flat[flat])
            rest = np.unravel_index(flat, inner_shape) if inner_shape else ()
            best_idx = (i0,) + tuple(int(x) for x in rest)
    if best == -np.inf or best_idx is None:
        return -np.inf
    # exact rational recompute at the winning grid point
    duties = {node: values[best_idx[pos]] for pos, node in enumerate(nodes)}
    r1_exact = r1 if isinstance(r1, Fraction) else Fraction(r1)

    def duty(i):
        return duties.get(i, Fraction(0))

    r2_exact = None
    feasible = True
    for (i, step), (w1, w2) in pairs.items():
        bound = duty(i) * (1 - duty(i + step)) * (1 - duty(i + 2 * step))
        slack = bound - w1 * r1_exact
        if slack < 0:
            feasible = False
            break
        if w2:
            cand = slack / w2
            r2_exact = cand if r2_exact is None else min(r2_exact, cand)
    if not feasible:
        # float rounding put the winner marginally outside; fall back
        return best
    if r2_exact is None:
        r2_exact = Fraction(1)
    return r2_exact if isinstance(r1, Fraction) else float(r2_exact)


def _slotted_rate2_given_rate1(spec, scheme, r1, grid_step):
    """Grid over duties; per node the split among traffic classes is
    optimized in closed form (leftover share after serving R1 goes to
    source 2's classes)."""
    rsets = relay_sets(spec)
    nodes = active_nodes(spec)
    values = [float(v) for v in _grid_values(grid_step)]
    best = -np.inf

    def node_r2(i, f):
        def duty(nn):
            return f.get(nn, 0.0)

        succ = {
            +1: duty(i) * (1 - duty(i + 1)) * (1 - duty(i + 2)),
            -1: duty(i) * (1 - duty(i - 1)) * (1 - duty(i - 2)),
        }
        # (class) -> (source-1 load multiplier, source-2 load multiplier,
        #             success rate for that class)
        demands = []
        att = spec.attached_at(i)
        for j in (1, 2):
            if j in att and any(d != i for d in spec.source(j).demands):
                demands.append(("src", j, min(succ[+1], succ[-1])))
        for j in rsets.fwd[i]:
            demands.append(("fwd", j, succ[+1]))
        for j in rsets.bwd[i]:
            demands.append(("bwd", j, succ[-1]))
        if scheme == "nc-slotted":
            fwd = [d for d in demands if d[0] == "fwd"]
            bwd = [d for d in demands if d[0] == "bwd"]
            src = [d for d in demands if d[0] == "src"]
            merged = src[:]
            if fwd or bwd:
                # one coded stream serves both relay directions
                merged.append(("relay",
                               tuple(d[1] for d in fwd), tuple(d[1] for d in bwd),
                               succ[+1], succ[-1]))
            used1 = 0.0
            cls2 = []
            for d in merged:
                if d[0] == "src":
                    _, j, s = d
                    if s <= 0:
                        if j == 1 and r1 > 0:
                            return -np.inf
                        if j == 2:
                            return 0.0
                        continue
                    if j == 1:
                        used1 += r1 / s
                    else:
                        cls2.append(1.0 / s)
                else:
                    _, fj, bj, sf, sb = d
                    share1 = 0.0
                    per2 = 0.0
                    if 1 in fj and r1 > 0:
                        if sf <= 0:
                            return -np.inf
                        share1 = max(share1, r1 / sf)
                    if 1 in bj and r1 > 0:
                        if sb <= 0:
                            return -np.inf
                        share1 = max(share1, r1 / sb)
                    if 2 in fj:
                        if sf <= 0:
                            return 0.0
                        per2 = max(per2, 1.0 / sf)
                    if 2 in bj:
                        if sb <= 0:
                            return 0.0
                        per2 = max(per2, 1.0 / sb)
                    # shares must cover both sources' worse direction
                    used1 += share1
                    if per2:
                        cls2.append(per2)
            leftover = 1.0 - used1
            if leftover < -1e-12:
                return -np.inf
            if not cls2:
                return np.inf
            return max(leftover, 0.0) / sum(cls2)
        # plain slotted: every class has its own share
        used1 = 0.0
        cls2 = []
        for kind, j, s in demands:
            if s <= 0:
                if j == 1 and r1 > 0:
                    return -np.inf
                if j == 2:
                    return 0.0
                continue
            if j == 1:
                used1 += r1 / s
            else:
                cls2.append(1.0 / s)
        leftover = 1.0 - used1
        if leftover < -1e-12:
            return -np.inf
        if not cls2:
            return np.inf
        return max(leftover, 0.0) / sum(cls2)

    for combo in product(values, repeat=len(nodes)):
        f = {node: combo[pos] for pos, node in enumerate(nodes)}
        r2 = min(node_r2(i, f) for i in nodes)
        best = max(best, r2 if r2 != np.inf else 1.0)
    return best


def _pure_rate2_given_rate1(spec, r1, seed=0, restarts=4, sweeps=25):
    rsets = relay_sets(spec)
    nodes = active_nodes(spec)
    M = spec.M

    def node_r2(i, lam):
        def g(nn):
            return lam[nn - 1] if 1 <= nn <= M else 0.0

        succ = {
            +1: g(i) * math.exp(-2.0 * (g(i + 1) + g(i + 2))),
            -1: g(i) * math.exp(-2.0 * (g(i - 1) + g(i - 2))),
        }
        used1 = 0.0
        cls2 = []
        att = spec.attached_at(i)
        demands = []
        for j in (1, 2):
            if j in att and any(d != i for d in spec.source(j).demands):
                demands.append((j, min(succ[+1], succ[-1])))
        for j in rsets.fwd[i]:
            demands.append((j, succ[+1]))
        for j in rsets.bwd[i]:
            demands.append((j, succ[-1]))
        for j, s in demands:
            if s <= 0:
                if j == 1 and r1 > 0:
                    return -np.inf
                if j == 2:
                    return 0.0
                continue
            if j == 1:
                used1 += r1 / s
            else:
                cls2.append(1.0 / s)
        leftover = 1.0 - used1
        if leftover < -1e-12:
            return -np.inf
        if not cls2:
            return np.inf
        return max(leftover, 0.0) / sum(cls2)

    def objective(lam):
        r = min(node_r2(i, lam) for i in nodes)
        return r if r != np.inf else 1.0

    rng = np.random.default_rng(seed)
    best = -np.inf
    for trial in range(restarts):
        lam = [0.0] * M
        for i in nodes:
            lam[i - 1] = 0.25 if trial == 0 else float(rng.uniform(0, 1))
        for _ in range(sweeps):
            improved = False
            for i in nodes:
                orig = cand = lam[i - 1]
                cur = objective(lam)
                for x in np.linspace(0.0, 1.0, 41):
                    lam[i - 1] = float(x)
                    v = objective(lam)
                    if v > cur + 1e-12:
                        cur, cand = v, float(x)
                for width in (0.025, 0.0025):
                    for x in np.linspace(max(0, cand - width), min(1, cand + width), 21):
                        lam[i - 1] = float(x)
                        v = objective(lam)
                        if v > cur + 1e-13:
                            cur, cand = v, float(x)
                if abs(cand - orig) > 1e-9:
                    improved = True
                lam[i - 1] = cand
            if not improved:
                break
        best = max(best, objective(lam))
    return best


def region_boundary(
    spec: NetworkSpec,
    scheme: str,
    resolution: int = 25,
    grid_step: Fraction = Fraction(1, 60),
    seed: int = 0,
) -> List[Tuple[float, float]]:
    """Sampled upper boundary of a two-source region: (R1, max R2) pairs
    at ``resolution + 1`` evenly spaced R1 values from 0 to the largest
    feasible R1."""
    if spec.N != 2:
        raise ValueError("boundary tracing supports exactly two sources")
    # largest feasible R1 = largest R2 of the mirrored network at R1=0
    mirrored = NetworkSpec(spec.M, [
        Source(1, spec.source(2).attach, spec.source(2).demands),
        Source(2, spec.source(1).attach, spec.source(1).demands),
    ])
    exact = scheme in ("capacity", "outer")
    if scheme in ("slotted", "nc-slotted"):
        # the split-optimized grid is a plain Python loop; keep it coarse
        grid_step = max(grid_step, Fraction(1, 12))
    zero = Fraction(0) if exact else 0.0
    r1_max = max_rate2_given_rate1(mirrored, scheme, zero, grid_step, seed)
    if r1_max < 0:
        return [(0.0, 0.0)] * (resolution + 1)
    out = []
    for k in range(resolution + 1):
        r1 = r1_max * k / resolution if exact else float(r1_max) * k / resolution
        r2 = max_rate2_given_rate1(spec, scheme, r1, grid_step, seed)
        out.append((float(r1), max(float(r2), 0.0)))
    return out


# -- exact lattice membership (vectorized) ------------------------------

def membership_lattice(
    spec: NetworkSpec,
    kind: str,
    denom: int,
    R: Sequence[Fraction],
) -> np.ndarray:
    """Membership of one rate vector over the full duty-factor lattice
    {0, 1/denom, ..., 1}^M, computed in exact integer arithmetic.

    Returns a boolean array of shape (denom+1,) * M indexed by the duty
    numerators.  ``kind`` is "capacity" or "outer".
    """
    cons = capacity_constraints(spec) if kind == "capacity" else outer_constraints(spec)
    M, D = spec.M, denom
    shape = (D + 1,) * M
    axis_vals = np.arange(D + 1, dtype=np.int64)

    def duty_num(i):
        if not 1 <= i <= M:
            return np.int64(0)
        sh = [1] * M
        sh[i - 1] = D + 1
        return axis_vals.reshape(sh)

    ok = np.ones(shape, dtype=bool)
    for c in cons:
        step = 1 if c.direction == "fwd" else -1
        load = sum(R[j - 1] for j in c.sources)
        bound_num = duty_num(c.node) * (D - duty_num(c.node + step)) * (D - duty_num(c.node + 2 * step))
        # load <= bound_num / D^3  <=>  load.num * D^3 <= load.den * bound_num
        lhs = load.numerator * D**3
        ok &= (np.int64(load.denominator) * bound_num) >= lhs
    return ok
