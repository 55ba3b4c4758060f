"""Random subsets with independent Bernoulli(p) membership and the law of c_n.

Here c_n = sum_{0 <= i <= n/2} a_i a_{n-i} with every a_i (a_0 and a_1
included) an independent Bernoulli(p) draw.

Random bits come from a counter-based generator: the u64 word for
(seed, trial, i) is splitmix64 applied to a per-trial key plus i times the
golden-ratio increment.  Any partition of the trials over workers therefore
yields exactly the same table.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
CHUNK = 4096


@dataclass(frozen=True)
class McConfig:
    p: float
    n_max: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError(f"p must lie in (0, 1], got {self.p}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")


def splitmix64(x: np.ndarray) -> np.ndarray:
    z = x + GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, trial_ids: np.ndarray, width: int) -> np.ndarray:
    """Array (len(trial_ids), width) of doubles in [0, 1)."""
    with np.errstate(over="ignore"):
        seed_word = splitmix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0]
        keys = splitmix64(trial_ids.astype(np.uint64) ^ seed_word)
        counters = np.arange(1, width + 1, dtype=np.uint64) * GOLDEN
        words = splitmix64(keys[:, None] + counters[None, :])
    return (words >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def draw_bits(cfg: McConfig, start: int, stop: int) -> np.ndarray:
    ids = np.arange(start, stop, dtype=np.uint64)
    return (uniforms(cfg.seed, ids, cfg.n_max + 1) < cfg.p).astype(np.int64)


def c_values(bits: np.ndarray) -> np.ndarray:
    """c_n for n = 0..width-1, one row per trial."""
    trials, width = bits.shape
    out = np.zeros((trials, width), dtype=np.int64)
    for n in range(width):
        half = n // 2
        lo = bits[:, : half + 1]
        hi = bits[:, n - half : n + 1][:, ::-1]
        out[:, n] = (lo * hi).sum(axis=1)
    return out


def pmf_c(n: int, k: int, p: float) -> float:
    """P(c_n = k) under independent Bernoulli(p) membership."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 0:
        return 0.0
    q = 1.0 - p
    s = p * p
    if n % 2:
        m = (n - 1) // 2
        if k > m + 1:
            return 0.0
        return math.comb(m + 1, k) * s**k * (1 - s) ** (m + 1 - k)
    m = n // 2
    total = 0.0
    if 1 <= k <= m + 1:
        total += math.comb(m, k - 1) * p ** (2 * k - 1) * (1 - s) ** (m + 1 - k)
    if k <= m:
        total += q * math.comb(m, k) * s**k * (1 - s) ** (m - k)
    return total


def distribution_enumerated(n: int, p: float) -> List[float]:
    """Law of c_n by summing over all 2^(n+1) membership vectors (index k = value)."""
    q = 1.0 - p
    dist = [0.0] * (n // 2 + 2)
    for mask in range(1 << (n + 1)):
        a = [(mask >> i) & 1 for i in range(n + 1)]
        k = sum(a[i] * a[n - i] for i in range(n // 2 + 1))
        ones = sum(a)
        dist[k] += p**ones * q ** (n + 1 - ones)
    return dist


def pmf_enumerated(n: int, k: int, p: float) -> float:
    dist = distribution_enumerated(n, p)
    return dist[k] if 0 <= k < len(dist) else 0.0


@dataclass
class SimResult:
    cfg: McConfig
    counts: np.ndarray  # counts[n, k]
    max_stat: np.ndarray  # per-trial max of 8 c_n / n over 2 <= n <= n_max

    def frequency(self, n: int, k: int) -> float:
        if k >= self.counts.shape[1]:
            return 0.0
        return self.counts[n, k] / self.cfg.trials


def _chunk(cfg: McConfig, start: int, stop: int):
    c = c_values(draw_bits(cfg, start, stop))
    width = cfg.n_max // 2 + 2
    counts = np.zeros((cfg.n_max + 1, width), dtype=np.int64)
    for n in range(cfg.n_max + 1):
        counts[n] = np.bincount(c[:, n], minlength=width)[:width]
    if cfg.n_max >= 2:
        ns = np.arange(2, cfg.n_max + 1, dtype=np.float64)
        stat = (8.0 * c[:, 2:] / ns).max(axis=1)
    else:
        stat = np.full(stop - start, np.nan)
    return counts, stat


def simulate(cfg: McConfig, threads: int = 1) -> SimResult:
    bounds = [(s, min(s + CHUNK, cfg.trials)) for s in range(0, cfg.trials, CHUNK)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _chunk(cfg, *b), bounds))
    else:
        parts = [_chunk(cfg, *b) for b in bounds]
    counts = sum(part[0] for part in parts)
    stat = np.concatenate([part[1] for part in parts])
    return SimResult(cfg, counts, stat)


def limsup_stat(cfg: McConfig, threads: int = 1) -> np.ndarray:
    return simulate(cfg, threads).max_stat


def histogram_rows(result: SimResult, ns: List[int] | None = None) -> List[dict]:
    """Rows (n, k, count, frequency, closed-form pmf) for the CLI."""
    cfg = result.cfg
    rows = []
    for n in ns if ns is not None else range(2, cfg.n_max + 1):
        for k in range(result.counts.shape[1]):
            pmf = pmf_c(n, k, cfg.p)
            count = int(result.counts[n, k])
            if count == 0 and pmf == 0.0:
                continue
            rows.append(
                {"n": n, "k": k, "count": count, "freq": count / cfg.trials, "pmf": pmf}
            )
    return rows
