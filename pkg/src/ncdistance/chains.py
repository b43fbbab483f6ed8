"""Noncommutative lengths of weighted chains and their bounds.

A chain ``w_1-w_2-...-w_m`` is the path graph on ``n = m + 1`` vertices with
edge weights ``w_k``; its noncommutative length is the distance between its
two ends.  Weight indices are 1-based throughout, and parity of a weight in a
subchain always refers to its index in the parent chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph import DiracOperator
from .solver import DEFAULT_CONFIG, SolverConfig, nc_distance


@dataclass(frozen=True)
class Chain:
    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise ValueError("a chain needs at least one weight")
        for x in w:
            if not (x > 0 and math.isfinite(x)):
                raise ValueError(f"chain weights must be positive and finite, got {x}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def parse(cls, text: str) -> "Chain":
        """Parse the dash-separated literal ``"1-2-1.5"``."""
        parts = text.strip().split("-")
        try:
            return cls(tuple(float(p) for p in parts))
        except ValueError:
            raise ValueError(f"invalid chain literal {text!r}") from None

    def __len__(self) -> int:
        return len(self.weights)

    def __str__(self) -> str:
        return "-".join(f"{w:g}" for w in self.weights)

    @property
    def n_vertices(self) -> int:
        return len(self.weights) + 1

    @property
    def geodesic_length(self) -> float:
        return math.fsum(self.weights)

    def reversed(self) -> "Chain":
        return Chain(self.weights[::-1])

    def concat(self, other: "Chain") -> "Chain":
        return Chain(self.weights + other.weights)

    def dirac(self) -> DiracOperator:
        n = self.n_vertices
        m = np.zeros((n, n))
        k = np.arange(n - 1)
        m[k, k + 1] = m[k + 1, k] = 1.0 / np.array(self.weights)
        return DiracOperator(m)


@dataclass(frozen=True)
class ChainDecomposition:
    """Cut positions ``i_1 < ... < i_p``; piece ``r`` holds weights ``i_{r-1}+1 .. i_r``.

    Every piece has at least two weights.
    """

    length: int
    cuts: tuple[int, ...] = ()

    def __post_init__(self):
        cuts = tuple(int(c) for c in self.cuts)
        bounds = (0,) + cuts + (self.length,)
        if any(b - a < 2 for a, b in zip(bounds, bounds[1:])) and cuts:
            raise ValueError(f"cuts {cuts} leave a piece shorter than 2 in a chain of length {self.length}")
        object.__setattr__(self, "cuts", cuts)

    def bounds(self) -> list[tuple[int, int]]:
        """``(first, last)`` 1-based weight indices of each piece."""
        b = (0,) + self.cuts + (self.length,)
        return [(b[r] + 1, b[r + 1]) for r in range(len(b) - 1)]

    def pieces(self, chain: Chain) -> list[tuple[int, Chain]]:
        """``(offset, subchain)`` pairs; ``offset`` is the global index of the first weight minus one."""
        return [(a - 1, Chain(chain.weights[a - 1 : b])) for a, b in self.bounds()]


def parity_sums(chain: Chain, global_offset: int = 0) -> tuple[float, float]:
    """``(sum of odd-indexed weights, sum of even-indexed weights)``.

    Weight ``k`` (1-based) of ``chain`` has global index ``global_offset + k``.
    """
    if global_offset < 0:
        raise ValueError("offset must be non-negative")
    w = chain.weights
    first_odd = global_offset % 2 == 0
    a = math.fsum(w[0::2])
    b = math.fsum(w[1::2])
    return (a, b) if first_odd else (b, a)


def bare_length(chain: Chain) -> float:
    return math.hypot(*parity_sums(chain))


def r_bare(chain: Chain) -> float:
    return max(parity_sums(chain))


def enumerate_decompositions(chain: Chain | int) -> Iterator[ChainDecomposition]:
    """All decompositions into pieces of length >= 2, the trivial one first."""
    m = chain if isinstance(chain, int) else len(chain)

    def rec(first_cut, cuts):
        yield ChainDecomposition(m, tuple(cuts))
        for c in range(first_cut, m - 1):
            yield from rec(c + 2, cuts + [c])

    yield from rec(2, [])


def _junction_sums(chain: Chain, d: ChainDecomposition) -> list[tuple[float, float]]:
    return [parity_sums(sub, off) for off, sub in d.pieces(chain)]


def junction_determinants(chain: Chain, d: ChainDecomposition) -> list[float]:
    """``Delta_j = even(C_j) odd(C_j+1) - even(C_j+1) odd(C_j)`` for each cut."""
    sums = _junction_sums(chain, d)
    return [e1 * o2 - e2 * o1 for (o1, e1), (o2, e2) in zip(sums, sums[1:])]


def is_admissible_L1(chain: Chain, d: ChainDecomposition, strict: bool = False) -> bool:
    """Require ``Delta_j >= 0`` at odd cuts and ``Delta_j <= 0`` at even cuts."""
    for cut, delta in zip(d.cuts, junction_determinants(chain, d)):
        sign = delta if cut % 2 else -delta
        if sign < 0 or (strict and sign == 0):
            return False
    return True


def is_admissible_R1(chain: Chain, d: ChainDecomposition, strict: bool = False) -> bool:
    """Parity conditions under which the linear relaxation can leave a cut slack.

    On each piece the optimal vertex puts full mass on its heavier parity
    class.  The constraint across an even cut ``i`` is ``x_i + x_{i+1} <= 1``
    with ``x_i`` even in the left piece and ``x_{i+1}`` odd in the right one,
    so slack needs the left piece odd-heavy and the right piece even-heavy;
    odd cuts need the mirror image.
    """
    sums = _junction_sums(chain, d)

    def ge(x, y):
        return x > y if strict else x >= y

    for r, cut in enumerate(d.cuts):
        (o1, e1), (o2, e2) = sums[r], sums[r + 1]
        if cut % 2 == 0:
            ok = ge(o1, e1) and ge(e2, o2)
        else:
            ok = ge(e1, o1) and ge(o2, e2)
        if not ok:
            return False
    return True


def _best(chain: Chain, admissible, piece_value) -> tuple[float, ChainDecomposition]:
    best_val, best_d = -math.inf, None
    for d in enumerate_decompositions(chain):
        if not admissible(chain, d):
            continue
        val = math.fsum(piece_value(sub) for _, sub in d.pieces(chain))
        if val > best_val:
            best_val, best_d = val, d
    return best_val, best_d


def l1_decomposition(chain: Chain) -> tuple[float, ChainDecomposition]:
    return _best(chain, is_admissible_L1, bare_length)


def r1_decomposition(chain: Chain) -> tuple[float, ChainDecomposition]:
    return _best(chain, is_admissible_R1, r_bare)


def l1(chain: Chain) -> float:
    """Upper bound from the pairwise constraints ``b_i^2 + b_{i+1}^2 <= 1``."""
    return l1_decomposition(chain)[0]


def r1(chain: Chain) -> float:
    """Lower bound from the pairwise constraints ``b_i + b_{i+1} <= 1``."""
    return r1_decomposition(chain)[0]


def l2(chain: Chain) -> float:
    return chain.n_vertices / 2 * max(chain.weights)


def r2(chain: Chain) -> float:
    n = chain.n_vertices
    return chain.geodesic_length / (2 * math.cos(math.pi / (n + 1)))


def is_extremal(chain: Chain) -> bool:
    """True iff no single cut is strictly admissible, i.e. ``L1`` equals the bare length."""
    m = len(chain)
    return not any(
        is_admissible_L1(chain, ChainDecomposition(m, (c,)), strict=True) for c in range(2, m - 1)
    )


def three_chain_length(w1: float, w2: float, w3: float) -> float:
    if w2 > math.sqrt(w1 * w3):
        return math.hypot(w1, w2) * math.hypot(w3, w2) / w2
    return w1 + w3


def closed_form_length(chain: Chain) -> float | None:
    """Exact length when a closed form applies, else ``None``."""
    w = chain.weights
    m = len(w)
    if m == 1:
        return w[0]
    if m == 2:
        return math.hypot(w[0], w[1])
    if m == 3:
        return three_chain_length(*w)
    if all(x == w[0] for x in w):
        k = (m + 1) // 2
        return w[0] * math.sqrt(k * (k + 1)) if m % 2 == 0 else w[0] * k
    if m % 2 == 1 and len(set(w[0::2])) == 1 and len(set(w[1::2])) == 1 and w[0] >= w[1]:
        # (w1-w2)^k-w1 with w1 >= w2: the lower bound R1 meets L2
        return (m + 1) / 2 * w[0]
    return None


def lambda_chain(chain: Chain, cfg: SolverConfig = DEFAULT_CONFIG, numeric: bool = False) -> float:
    """Noncommutative length; closed forms when available unless ``numeric``."""
    if not numeric:
        exact = closed_form_length(chain)
        if exact is not None:
            return exact
    return nc_distance(chain.dirac(), 1, chain.n_vertices, cfg).value


@dataclass(frozen=True)
class ChainBoundsReport:
    chain: Chain
    bare: float
    r_bare: float
    l1: float
    l2: float
    r1: float
    r2: float
    extremal: bool
    best_decomposition_L1: ChainDecomposition
    best_decomposition_R1: ChainDecomposition
    lam: float | None = None

    @property
    def lower(self) -> float:
        return max(self.r1, self.r2)

    @property
    def upper(self) -> float:
        return min(self.l1, self.l2)

    def to_dict(self) -> dict:
        return {
            "chain": str(self.chain),
            "weights": list(self.chain.weights),
            "bare": self.bare,
            "r_bare": self.r_bare,
            "R1": self.r1,
            "R2": self.r2,
            "lambda": self.lam,
            "L1": self.l1,
            "L2": self.l2,
            "lower": self.lower,
            "upper": self.upper,
            "extremal": self.extremal,
            "best_decomposition_L1": list(self.best_decomposition_L1.cuts),
            "best_decomposition_R1": list(self.best_decomposition_R1.cuts),
        }


def chain_bounds(
    chain: Chain | Sequence[float] | str,
    exact: bool = True,
    cfg: SolverConfig = DEFAULT_CONFIG,
    numeric: bool = False,
) -> ChainBoundsReport:
    if isinstance(chain, str):
        chain = Chain.parse(chain)
    elif not isinstance(chain, Chain):
        chain = Chain(tuple(chain))
    v1, d1 = l1_decomposition(chain)
    u1, e1 = r1_decomposition(chain)
    return ChainBoundsReport(
        chain=chain,
        bare=bare_length(chain),
        r_bare=r_bare(chain),
        l1=v1,
        l2=l2(chain),
        r1=u1,
        r2=r2(chain),
        extremal=is_extremal(chain),
        best_decomposition_L1=d1,
        best_decomposition_R1=e1,
        lam=lambda_chain(chain, cfg, numeric=numeric) if exact else None,
    )
