"""One simplex pivot on a basis structure.

Entering an edge ``e`` from L sends ``delta`` units around ``C(e)`` and
``-delta * bhat_e / bhat_extra`` units around ``C(extra)``, which keeps the
total fee fixed; entering from U does the same with both signs flipped.
The leaving edge is the last blocking edge met when walking the relevant
cycle from its apex in the direction the flow moves, which keeps a strongly
feasible basis strongly feasible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, MutableSequence

import numpy as np

from .basis import (
    BasisStructure,
    OrientedCycle,
    Potentials,
    cycle,
    dhat_numerator,
    reduced_cost_fee,
)
from .errors import BasisCorruption
from .instance import Instance

Rule = Literal["dantzig", "first"]
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class EnteringChoice:
    edge: int
    from_set: Literal["L", "U"]
    violation: Fraction
    chat: int
    bhat: int

    @property
    def sigma(self) -> int:
        return 1 if self.from_set == "L" else -1


@dataclass(frozen=True)
class RatioResult:
    """Outcome of the ratio test.

    Per-edge flow coefficients are kept as integers ``theta_num`` over the
    common positive denominator ``scale`` (= ``|bhat_extra|``).
    """

    delta: Fraction
    blocking: frozenset[int]
    theta_num: dict[int, int]
    scale: int
    case: Literal["CeOnly", "CextraOnly", "P0"]
    entering_cycle: OrientedCycle
    extra_cycle: OrientedCycle
    sigma: int
    rho: Fraction

    @property
    def theta(self) -> dict[int, Fraction]:
        return {i: Fraction(t, self.scale) for i, t in self.theta_num.items()}


@dataclass(frozen=True)
class PivotRecord:
    entering: int
    from_set: str
    leaving: int
    delta: Fraction
    degenerate: bool
    objective_delta: Fraction
    case: str


class EdgeArrays:
    """Column arrays of an instance for vectorized pricing."""

    def __init__(self, inst: Instance) -> None:
        self.tails = np.array([e.tail for e in inst.edges], dtype=np.int64)
        self.heads = np.array([e.head for e in inst.edges], dtype=np.int64)
        self.costs = np.array([e.cost for e in inst.edges], dtype=np.int64)
        self.fees = np.array([e.fee for e in inst.edges], dtype=np.int64)
        self.movable = np.array([e.capacity > 0 for e in inst.edges], dtype=bool)
        self.max_cost = int(np.abs(self.costs).max(initial=0))
        self.max_fee = int(self.fees.max(initial=0))
        self.m = inst.m


def select_entering(basis: BasisStructure, pot: Potentials, inst: Instance,
                    rule: Rule = "dantzig", arrays: EdgeArrays | None = None) -> EnteringChoice | None:
    """Pick an L edge with negative or a U edge with positive ``dhat``.

    Dantzig takes the largest ``|dhat|``; ``first`` takes the lowest index.
    Ties go to the lowest edge index. Zero-capacity edges sit at both bounds
    at once and never enter.
    """
    if arrays is None:
        arrays = EdgeArrays(inst)
    chat_x, bhat_x = reduced_cost_fee(basis.extra, pot, inst)
    if bhat_x == 0:
        raise BasisCorruption("extra edge closes a cycle of zero fee")
    pi_max = max(map(abs, pot.pi))
    mu_max = max(map(abs, pot.mu))
    chat_bound = arrays.max_cost + 2 * pi_max
    bhat_bound = arrays.max_fee + 2 * mu_max
    exact = 2 * chat_bound * bhat_bound >= _INT64_SAFE
    dtype = object if exact else np.int64
    pi = np.array(pot.pi, dtype=dtype)
    mu = np.array(pot.mu, dtype=dtype)
    costs = arrays.costs.astype(dtype)
    fees = arrays.fees.astype(dtype)
    chat = costs - pi[arrays.tails] + pi[arrays.heads]
    bhat = fees - mu[arrays.tails] + mu[arrays.heads]
    num = dhat_numerator(chat, bhat, chat_x, bhat_x)
    # sign(dhat) = sign(num) * sign(bhat_x)
    if bhat_x < 0:
        num = -num
    in_lower = np.zeros(arrays.m, dtype=bool)
    in_upper = np.zeros(arrays.m, dtype=bool)
    if basis.lower:
        in_lower[np.fromiter(basis.lower, dtype=np.int64, count=len(basis.lower))] = True
    if basis.upper:
        in_upper[np.fromiter(basis.upper, dtype=np.int64, count=len(basis.upper))] = True
    violating = ((in_lower & (num < 0)) | (in_upper & (num > 0))) & arrays.movable
    candidates = np.flatnonzero(violating)
    if candidates.size == 0:
        return None
    if rule == "dantzig":
        mags = np.abs(num[candidates])
        if exact:
            best = max(range(candidates.size), key=lambda k: (mags[k], -k))
        else:
            best = int(np.argmax(mags))
        edge = int(candidates[best])
    elif rule == "first":
        edge = int(candidates[0])
    else:
        raise ValueError(f"unknown pivot rule {rule!r}")
    from_set = "L" if in_lower[edge] else "U"
    violation = Fraction(abs(int(num[edge])), abs(bhat_x))
    return EnteringChoice(edge, from_set, violation, int(chat[edge]), int(bhat[edge]))


def ratio_test(basis: BasisStructure, x: MutableSequence[Fraction], entering: EnteringChoice,
               inst: Instance) -> RatioResult:
    ce = cycle(entering.edge, basis, inst)
    cx = cycle(basis.extra, basis, inst)
    bhat_x = cx.fee(inst)
    if bhat_x == 0:
        raise BasisCorruption("extra edge closes a cycle of zero fee")
    sigma = entering.sigma
    scale = abs(bhat_x)
    # theta * bhat_x = sigma * (chi_e * bhat_x - chi_extra * bhat_e)
    tn: dict[int, int] = {}
    for i, s in ce.edges:
        tn[i] = sigma * s * bhat_x
    for i, s in cx.edges:
        tn[i] = tn.get(i, 0) - sigma * s * entering.bhat
    if bhat_x < 0:
        tn = {i: -t for i, t in tn.items()}
    edges = inst.edges
    # delta_i = slack_i * scale / |t_i|; track the minimum as best_num / best_den
    best_num = best_den = None
    blocking: list[int] = []
    for i, t in tn.items():
        if t == 0:
            continue
        xi = x[i]
        slack = xi if t < 0 else edges[i].capacity - xi
        num = slack.numerator if isinstance(slack, Fraction) else slack
        den = (slack.denominator if isinstance(slack, Fraction) else 1) * abs(t)
        if best_num is None or num * best_den < best_num * den:
            best_num, best_den = num, den
            blocking = [i]
        elif num * best_den == best_num * den:
            blocking.append(i)
    assert best_num is not None  # the entering edge has a nonzero coefficient
    delta = Fraction(best_num * scale, best_den)
    in_ce = ce.signs
    in_cx = cx.signs
    only_e = all(i in in_ce and i not in in_cx for i in blocking)
    only_x = all(i in in_cx and i not in in_ce for i in blocking)
    shared = all(i in in_ce and i in in_cx for i in blocking)
    if only_e:
        case = "CeOnly"
    elif only_x:
        case = "CextraOnly"
    elif shared:
        case = "P0"
    else:
        raise BasisCorruption(f"blocking edges {sorted(blocking)} span more than one cycle region")
    rho = Fraction(entering.bhat, bhat_x)
    return RatioResult(delta, frozenset(blocking), tn, scale, case, ce, cx, sigma, rho)


def _last_blocking(order: list[tuple[int, int]], blocking: frozenset[int]) -> int:
    for i, _ in reversed(order):
        if i in blocking:
            return i
    raise BasisCorruption("no blocking edge on the traversed cycle")


def select_leaving(ratio: RatioResult) -> int:
    """Last blocking edge walking the relevant cycle from its apex along the flow change."""
    blocking = ratio.blocking
    if len(blocking) == 1:
        return next(iter(blocking))
    if ratio.case == "CeOnly":
        cyc = ratio.entering_cycle
        forward = ratio.sigma > 0
    elif ratio.case == "CextraOnly":
        cyc = ratio.extra_cycle
        forward = -ratio.sigma * ratio.rho > 0
    else:
        # net change on the shared path has one direction relative to C(e)
        cyc = ratio.entering_cycle
        signs = cyc.signs
        i = next(iter(blocking))
        forward = ratio.theta_num[i] * signs[i] > 0
    order = list(cyc.edges) if forward else list(reversed(cyc.edges))
    return _last_blocking(order, blocking)


def apply_pivot(basis: BasisStructure, x: MutableSequence[Fraction], entering: EnteringChoice,
                leaving: int, ratio: RatioResult, inst: Instance) -> PivotRecord:
    """Update ``x`` and ``basis`` in place and return the pivot record."""
    delta = ratio.delta
    if delta:
        step = delta / ratio.scale
        for i, t in ratio.theta_num.items():
            if t:
                x[i] += step * t
    e = entering.edge
    edges = inst.edges

    def park(i: int) -> None:
        if x[i] == 0:
            basis.lower.add(i)
        elif x[i] == edges[i].capacity:
            basis.upper.add(i)
        else:
            raise BasisCorruption(f"leaving edge {i} is strictly between its bounds: {x[i]}")

    if leaving == e:
        (basis.lower if entering.from_set == "L" else basis.upper).discard(e)
        park(e)
    else:
        (basis.lower if entering.from_set == "L" else basis.upper).discard(e)
        if leaving == basis.extra:
            basis.extra = e
        elif leaving in basis.tree:
            basis.tree.discard(leaving)
            if leaving in ratio.entering_cycle.signs:
                basis.tree.add(e)
            else:
                # C(extra) is broken and the old extra edge rejoins the tree
                basis.tree.add(basis.extra)
                basis.extra = e
        else:
            raise BasisCorruption(f"leaving edge {leaving} is neither entering, extra nor in T")
        park(leaving)
    basis.reindex(inst)
    objective_delta = -delta * entering.violation
    return PivotRecord(e, entering.from_set, leaving, delta, delta == 0, objective_delta, ratio.case)
