"""Random graph models: the homogeneous null and the planted dense block.

Three variants:

* ``null``: every pair is an edge with probability p0.
* ``planted``: pairs inside a distinguished n-subset appear with probability
  p1 >= p0, all other pairs with p0.
* ``planted_fixed_degree``: off-block pairs appear with probability p0_prime,
  in-block pairs with p1; the matched null uses the effective edge probability
  that equates the expected total edge count.

Replicates are seeded as (master_seed, stream_index) pairs mapped onto
independent Philox streams, so any replicate can be regenerated in isolation
and results do not depend on how replicates are distributed over workers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError
from .graph import Graph, as_subset

__all__ = [
    "ModelSpec", "pair_count", "effective_p0", "stream_rng",
    "sample", "sample_with_witness", "pair_from_index", "index_from_pair",
]

_VARIANTS = ("null", "planted", "planted_fixed_degree")
_SPARSE_CUTOVER = 0.05


def pair_count(m):
    """Number of unordered pairs on m vertices."""
    m = int(m)
    return m * (m - 1) // 2


def effective_p0(p0_prime, p1, n, N):
    """Edge probability of the null matching the planted model's expected total.

    p0_prime + (p1 - p0_prime) * C(n,2) / C(N,2); with this value, C(N,2) * p0
    equals (C(N,2) - C(n,2)) * p0_prime + C(n,2) * p1 exactly.
    """
    return p0_prime + (p1 - p0_prime) * pair_count(n) / pair_count(N)


def stream_rng(master_seed, stream_index):
    """Independent counter-based generator for one replicate stream."""
    if stream_index < 0:
        raise InvalidSpecError("stream_index must be nonnegative")
    seq = np.random.SeedSequence([int(master_seed), int(stream_index)])
    return np.random.Generator(np.random.Philox(seq))


def _check_prob(value, name):
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise InvalidSpecError(f"{name} must be a number")
    v = float(value)
    if not 0.0 < v <= 1.0:
        raise InvalidSpecError(f"{name} must lie in (0, 1], got {value}")
    return v


@dataclass(frozen=True)
class ModelSpec:
    """Validated description of one sampling model.

    planted_set of None means the block location is drawn uniformly afresh for
    every sample; a fixed tuple pins it (the usual choice for risk experiments,
    where exchangeability makes any fixed location worst-case).
    """

    variant: str
    N: int
    p0: float | None = None
    p0_prime: float | None = None
    p1: float | None = None
    n: int | None = None
    planted_set: tuple | None = None

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise InvalidSpecError(f"unknown variant {self.variant!r}")
        if not isinstance(self.N, int) or isinstance(self.N, bool) or self.N < 1:
            raise InvalidSpecError(f"N must be a positive integer, got {self.N}")
        if self.variant == "null":
            if self.p0 is None:
                raise InvalidSpecError("null variant needs p0")
            object.__setattr__(self, "p0", _check_prob(self.p0, "p0"))
            for name in ("p0_prime", "p1", "n", "planted_set"):
                if getattr(self, name) is not None:
                    raise InvalidSpecError(f"null variant must not set {name}")
            return
        if not isinstance(self.n, int) or isinstance(self.n, bool) \
                or not 1 <= self.n <= self.N:
            raise InvalidSpecError(f"n must be an integer in [1, N], got {self.n}")
        if self.p1 is None:
            raise InvalidSpecError(f"{self.variant} variant needs p1")
        object.__setattr__(self, "p1", _check_prob(self.p1, "p1"))
        if self.variant == "planted":
            if self.p0 is None or self.p0_prime is not None:
                raise InvalidSpecError("planted variant needs p0 and no p0_prime")
            object.__setattr__(self, "p0", _check_prob(self.p0, "p0"))
            if self.p1 < self.p0:
                raise InvalidSpecError("planted variant needs p1 >= p0")
        else:
            if self.p0_prime is None or self.p0 is not None:
                raise InvalidSpecError(
                    "planted_fixed_degree variant needs p0_prime and no p0")
            object.__setattr__(self, "p0_prime",
                               _check_prob(self.p0_prime, "p0_prime"))
            if self.p1 < self.p0_prime:
                raise InvalidSpecError("planted_fixed_degree needs p1 >= p0_prime")
        if self.planted_set is not None:
            s = as_subset(list(self.planted_set), self.N)
            if s.size != self.n:
                raise InvalidSpecError("planted_set must have exactly n vertices")
            object.__setattr__(self, "planted_set", tuple(int(v) for v in s))

    # -- constructors -------------------------------------------------------

    @classmethod
    def null(cls, N, p0):
        return cls("null", N, p0=p0)

    @classmethod
    def planted(cls, N, p0, p1, n, planted_set=None):
        return cls("planted", N, p0=p0, p1=p1, n=n,
                   planted_set=None if planted_set is None else tuple(planted_set))

    @classmethod
    def planted_fixed_degree(cls, N, p0_prime, p1, n, planted_set=None):
        return cls("planted_fixed_degree", N, p0_prime=p0_prime, p1=p1, n=n,
                   planted_set=None if planted_set is None else tuple(planted_set))

    # -- derived ------------------------------------------------------------

    @property
    def off_block_p(self):
        return self.p0 if self.variant != "planted_fixed_degree" else self.p0_prime

    def matched_null(self):
        """The null model this alternative is tested against."""
        if self.variant == "null":
            return self
        if self.variant == "planted":
            return ModelSpec.null(self.N, self.p0)
        return ModelSpec.null(self.N,
                              effective_p0(self.p0_prime, self.p1, self.n, self.N))

    # -- serialization ------------------------------------------------------

    def to_dict(self):
        return {
            "variant": self.variant, "N": self.N, "p0": self.p0,
            "p0_prime": self.p0_prime, "p1": self.p1, "n": self.n,
            "planted_set": None if self.planted_set is None
            else list(self.planted_set),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        allowed = {"variant", "N", "p0", "p0_prime", "p1", "n", "planted_set"}
        unknown = set(data) - allowed
        if unknown:
            raise InvalidSpecError(f"unknown model spec keys: {sorted(unknown)}")
        if "variant" not in data or "N" not in data:
            raise InvalidSpecError("model spec needs 'variant' and 'N'")
        ps = data.get("planted_set")
        return cls(data["variant"], data["N"], p0=data.get("p0"),
                   p0_prime=data.get("p0_prime"), p1=data.get("p1"),
                   n=data.get("n"),
                   planted_set=None if ps is None else tuple(ps))

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpecError(f"model spec is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InvalidSpecError("model spec JSON must be an object")
        return cls.from_dict(data)


# ---------------------------------------------------------------------------
# pair indexing: unordered pairs (i, j), i < j, in row-major order

def index_from_pair(i, j, N):
    """Linear index of pair (i, j) with i < j among all C(N,2) pairs."""
    i = np.asarray(i, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    return i * (2 * N - i - 1) // 2 + (j - i - 1)


def pair_from_index(k, N):
    """Inverse of index_from_pair, vectorized."""
    k = np.asarray(k, dtype=np.int64)
    f = (2 * N - 1 - np.sqrt(np.maximum((2.0 * N - 1) ** 2 - 8.0 * k, 0.0))) / 2.0
    i = np.clip(np.floor(f).astype(np.int64), 0, max(N - 2, 0))
    # float sqrt can land one row off in either direction; fix up exactly
    off = i * (2 * N - i - 1) // 2
    i = np.where(off > k, i - 1, i)
    nxt = (i + 1) * (2 * N - i - 2) // 2
    i = np.where(k >= nxt, i + 1, i)
    off = i * (2 * N - i - 1) // 2
    j = k - off + i + 1
    return i, j


def _pair_bernoulli(rng, n_pairs, p):
    """Indices of pairs struck by independent Bernoulli(p) coins, sorted.

    Dense regime thresholds one uniform per pair; sparse regime walks the pair
    axis with geometric skips, touching only the struck pairs.
    """
    if n_pairs == 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(n_pairs, dtype=np.int64)
    if p >= _SPARSE_CUTOVER:
        return np.nonzero(rng.random(n_pairs) < p)[0].astype(np.int64)
    expected = n_pairs * p
    batch = max(32, int(expected + 10.0 * np.sqrt(expected + 1.0)))
    picks = []
    pos = -1
    while True:
        steps = rng.geometric(p, size=batch).astype(np.int64)
        cand = pos + np.cumsum(steps)
        inside = cand[cand < n_pairs]
        picks.append(inside)
        if inside.size < cand.size:
            break
        pos = int(cand[-1])
    return np.concatenate(picks)


def sample_with_witness(spec, master_seed, stream_index=0):
    """Draw one graph; returns (graph, planted_subset or None)."""
    rng = stream_rng(master_seed, stream_index)
    N = spec.N
    if spec.variant == "null":
        k = _pair_bernoulli(rng, pair_count(N), spec.p0)
        i, j = pair_from_index(k, N)
        return Graph(N, np.stack([i, j], axis=1) if k.size else ()), None
    if spec.planted_set is not None:
        block = np.asarray(spec.planted_set, dtype=np.int64)
    else:
        block = np.sort(rng.choice(N, size=spec.n, replace=False).astype(np.int64))
    # off-block pairs at the background probability
    k = _pair_bernoulli(rng, pair_count(N), spec.off_block_p)
    i, j = pair_from_index(k, N)
    in_block = np.zeros(N, dtype=bool)
    in_block[block] = True
    keep = ~(in_block[i] & in_block[j])
    i, j = i[keep], j[keep]
    # in-block pairs at p1
    kb = _pair_bernoulli(rng, pair_count(spec.n), spec.p1)
    a, b = pair_from_index(kb, spec.n)
    ii = np.concatenate([i, block[a]])
    jj = np.concatenate([j, block[b]])
    edges = np.stack([ii, jj], axis=1) if ii.size else ()
    return Graph(N, edges), block


def sample(spec, master_seed, stream_index=0):
    """Draw one graph from the model; see sample_with_witness for the block."""
    return sample_with_witness(spec, master_seed, stream_index)[0]
