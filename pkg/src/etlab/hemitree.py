"""The binary tree of hemitropic sequences (1, p_2, ..., p_n).

Every node has two children, (..., x) and (..., x + 1) with
x = e_n(p_2, ..., p_n).  Appending x + 1 corresponds to putting n + 1 into
the underlying set A, appending x to leaving it out.  A node is persistent
when none of its entries is 0, which is the finite shadow of A being a basis.

Inside the symbolic envelope x is obtained by evaluating the cached compliform
polynomial e_n; past it, x is the number of presentations of n + 1 by the
elements 1..n of the set reconstructed from the node, which is the same number.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .profiles import CompiledPoly, SubsetA
from .tower import TowerCache

DEFAULT_SYMBOLIC_DEPTH = 16
DEFAULT_DEPTH_CEILING = 64
DEFAULT_WITNESSES = 16


class NotHemitropic(ValueError):
    pass


class NegativeValue(ValueError):
    def __init__(self, node: "Node", value: int):
        super().__init__(f"e_{len(node.seq)} evaluates to {value} < 0 at {node.seq}")
        self.node = node
        self.value = value


@dataclass(frozen=True)
class Node:
    seq: Tuple[int, ...]

    def __post_init__(self):
        seq = tuple(int(v) for v in self.seq)
        if not seq or seq[0] != 1:
            raise ValueError("a node starts with p_1 = 1")
        object.__setattr__(self, "seq", seq)

    def __len__(self):
        return len(self.seq)

    def is_persistent(self) -> bool:
        return all(v >= 1 for v in self.seq)


ROOT = Node((1,))


def _pairs_without_zero(bits: Sequence[int], m: int) -> int:
    """#{(x, y) : x <= y, x + y = m, 1 <= x, x and y in A}."""
    return sum(bits[x] & bits[m - x] for x in range(1, m // 2 + 1))


def membership_bits(node: Node) -> List[int]:
    """a_0..a_n of the set whose profile starts with ``node.seq``.

    Raises NotHemitropic when some p_k is neither of the two allowed values.
    """
    bits = [1, 1]
    for k in range(2, len(node.seq) + 1):
        bit = node.seq[k - 1] - _pairs_without_zero(bits, k)
        if bit not in (0, 1):
            raise NotHemitropic(f"p_{k} = {node.seq[k - 1]} is not reachable from {node.seq[:k - 1]}")
        bits.append(bit)
    return bits


class EEvaluator:
    """Numeric e_n(p_2..p_n) for tree nodes."""

    def __init__(self, cache: Optional[TowerCache] = None, symbolic_depth: int = DEFAULT_SYMBOLIC_DEPTH):
        self.symbolic_depth = symbolic_depth if cache is not None else 0
        self._compiled: Dict[int, CompiledPoly] = {}
        if cache is not None and symbolic_depth > 0:
            cache.compute_e(symbolic_depth)
            for n in range(1, symbolic_depth + 1):
                self._compiled[n] = CompiledPoly(cache.compute_e(n))

    def value(self, seq: Sequence[int], bits: Optional[Sequence[int]] = None) -> int:
        n = len(seq)
        if n <= self.symbolic_depth:
            return self._compiled[n]((1,) + tuple(seq))
        if bits is None:
            bits = membership_bits(Node(tuple(seq)))
        return _pairs_without_zero(bits, n + 1)


def node_children(node: Node, cache: Optional[TowerCache] = None, evaluator: Optional[EEvaluator] = None):
    ev = evaluator or EEvaluator(cache, min(len(node.seq), DEFAULT_SYMBOLIC_DEPTH))
    x = ev.value(node.seq)
    if x < 0:
        raise NegativeValue(node, x)
    return Node(node.seq + (x,)), Node(node.seq + (x + 1,))


def node_to_set(node: Node, cache: Optional[TowerCache] = None) -> SubsetA:
    """The set A (cut at n = len(node)) whose presentation counts are node.seq."""
    if cache is not None:
        ev = EEvaluator(cache, min(len(node.seq), DEFAULT_SYMBOLIC_DEPTH))
        bits = [1, 1]
        for k in range(2, len(node.seq) + 1):
            bit = node.seq[k - 1] - ev.value(node.seq[: k - 1], bits)
            if bit not in (0, 1):
                raise NotHemitropic(f"p_{k} = {node.seq[k - 1]} is not reachable from {node.seq[:k - 1]}")
            bits.append(bit)
    else:
        bits = membership_bits(node)
    return SubsetA(tuple(bits))


def node_codes(node: Node) -> Tuple[Tuple[int, ...], Tuple[str, ...]]:
    """Parity code (p_k mod 2 for k = 1..n) and up/down code (k = 2..n)."""
    bits = membership_bits(node)
    parity = tuple(v % 2 for v in node.seq)
    updown = tuple("+" if bit else "-" for bit in bits[2:])
    return parity, updown


def decode_updown(code: Sequence[str]) -> Node:
    bits = [1, 1]
    seq = [1]
    for k, sign in enumerate(code, start=2):
        if sign not in ("+", "-"):
            raise ValueError(f"bad sign {sign!r}")
        bit = 1 if sign == "+" else 0
        seq.append(_pairs_without_zero(bits, k) + bit)
        bits.append(bit)
    return Node(tuple(seq))


def decode_parity(code: Sequence[int]) -> Node:
    if not code or code[0] != 1:
        raise ValueError("a parity code starts with 1 (p_1 = 1)")
    bits = [1, 1]
    seq = [1]
    for k, parity in enumerate(code[1:], start=2):
        x = _pairs_without_zero(bits, k)
        bit = (parity - x) % 2
        seq.append(x + bit)
        bits.append(bit)
    return Node(tuple(seq))


# -- bounded search ------------------------------------------------------------------


def _witness_key(seq: Tuple[int, ...]):
    # depth-first, upper-child-first discovery order among nodes of equal length
    return tuple(-v for v in seq)


@dataclass
class SearchReport:
    bound: int
    depth: int
    max_persistent_length: int = 0
    nodes_visited: int = 0
    frontier_exhausted: bool = True
    witnesses: List[Tuple[int, ...]] = field(default_factory=list)
    witness_cap: int = DEFAULT_WITNESSES

    def offer(self, seq: Tuple[int, ...]):
        n = len(seq)
        if n > self.max_persistent_length:
            self.max_persistent_length = n
            self.witnesses = [seq]
        elif n == self.max_persistent_length and len(self.witnesses) < self.witness_cap:
            self.witnesses.append(seq)

    def merge(self, other: "SearchReport") -> "SearchReport":
        out = SearchReport(
            self.bound,
            self.depth,
            max(self.max_persistent_length, other.max_persistent_length),
            self.nodes_visited + other.nodes_visited,
            self.frontier_exhausted and other.frontier_exhausted,
            witness_cap=min(self.witness_cap, other.witness_cap),
        )
        pool = {
            w
            for w in self.witnesses + other.witnesses
            if len(w) == out.max_persistent_length
        }
        out.witnesses = sorted(pool, key=_witness_key)[: out.witness_cap]
        return out

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "depth": self.depth,
            "max_persistent_length": self.max_persistent_length,
            "nodes_visited": self.nodes_visited,
            "frontier_exhausted": self.frontier_exhausted,
            "witnesses": [list(w) for w in self.witnesses],
        }

    @classmethod
    def from_json(cls, data: dict, witness_cap: int = DEFAULT_WITNESSES) -> "SearchReport":
        return cls(
            data["bound"],
            data["depth"],
            data["max_persistent_length"],
            data["nodes_visited"],
            data["frontier_exhausted"],
            [tuple(w) for w in data["witnesses"]],
            witness_cap,
        )


class BoundedSearch:
    """Resumable depth-first search for persistent nodes with every p_k <= bound.

    The pending stack and the partial report can be saved with
    :meth:`save` and restored with :meth:`load`.
    """

    def __init__(
        self,
        bound: int,
        depth: int,
        evaluator: EEvaluator,
        witness_cap: int = DEFAULT_WITNESSES,
        start: Optional[Sequence[Tuple[int, ...]]] = None,
    ):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.bound = bound
        self.depth = depth
        self.evaluator = evaluator
        self.report = SearchReport(bound, depth, witness_cap=witness_cap)
        if start is None:
            start = [ROOT.seq] if bound >= 1 else []
        # stack entries: (seq, membership bits)
        self.stack = [(tuple(s), tuple(membership_bits(Node(tuple(s))))) for s in reversed(list(start))]

    def done(self) -> bool:
        return not self.stack

    def run(self, max_nodes: Optional[int] = None) -> SearchReport:
        bound, depth = self.bound, self.depth
        report = self.report
        stack = self.stack
        value = self.evaluator.value
        budget = max_nodes
        while stack:
            if budget is not None:
                if budget <= 0:
                    break
                budget -= 1
            seq, bits = stack.pop()
            report.nodes_visited += 1
            report.offer(seq)
            n = len(seq)
            if n >= depth:
                report.frontier_exhausted = False
                continue
            x = value(seq, bits)
            if 1 <= x <= bound:
                stack.append((seq + (x,), bits + (0,)))
            if 1 <= x + 1 <= bound:
                stack.append((seq + (x + 1,), bits + (1,)))
        return report

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "bound": self.bound,
            "depth": self.depth,
            "stack": [list(seq) for seq, _ in self.stack],
            "report": self.report.to_json(),
        }

    def save(self, path: str):
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            json.dump(self.to_json(), fh)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str, evaluator: EEvaluator, witness_cap: int = DEFAULT_WITNESSES) -> "BoundedSearch":
        with open(path) as fh:
            data = json.load(fh)
        search = cls(data["bound"], data["depth"], evaluator, witness_cap, start=[])
        search.stack = [(tuple(s), tuple(membership_bits(Node(tuple(s))))) for s in data["stack"]]
        search.report = SearchReport.from_json(data["report"], witness_cap)
        return search


_worker_evaluators: Dict[int, EEvaluator] = {}


def _subtree_worker(args):
    bound, depth, witness_cap, symbolic_depth, start = args
    # one compiled evaluator per worker process, reused across subtrees
    evaluator = _worker_evaluators.get(symbolic_depth)
    if evaluator is None:
        evaluator = EEvaluator(TowerCache() if symbolic_depth else None, symbolic_depth)
        _worker_evaluators[symbolic_depth] = evaluator
    return BoundedSearch(bound, depth, evaluator, witness_cap, start=[start]).run()


def search_bounded(
    bound: int,
    depth: int,
    cache: Optional[TowerCache] = None,
    witnesses: int = DEFAULT_WITNESSES,
    symbolic_depth: int = DEFAULT_SYMBOLIC_DEPTH,
    depth_ceiling: int = DEFAULT_DEPTH_CEILING,
    threads: int = 1,
) -> SearchReport:
    """Exhaustive search of the tree pruned at p_k = 0 or p_k > bound, down to ``depth``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth > depth_ceiling:
        raise ValueError(f"depth {depth} exceeds the ceiling {depth_ceiling}; raise depth_ceiling explicitly")
    if bound < 1:
        return SearchReport(bound, depth, witness_cap=witnesses)
    symbolic_depth = min(symbolic_depth, depth)
    if cache is None and symbolic_depth:
        cache = TowerCache()
    evaluator = EEvaluator(cache, symbolic_depth)
    if threads <= 1:
        return BoundedSearch(bound, depth, evaluator, witnesses).run()

    # Expand breadth-first until there are enough independent subtrees.
    head = SearchReport(bound, depth, witness_cap=witnesses)
    frontier = [ROOT.seq]
    while frontier and len(frontier) < 8 * threads:
        nxt = []
        for seq in frontier:
            head.nodes_visited += 1
            head.offer(seq)
            if len(seq) >= depth:
                head.frontier_exhausted = False
                continue
            x = evaluator.value(seq)
            for child in (x + 1, x):
                if 1 <= child <= bound:
                    nxt.append(seq + (child,))
        frontier = nxt
    if not frontier:
        return head
    jobs = [(bound, depth, witnesses, symbolic_depth, seq) for seq in frontier]
    result = head
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(_subtree_worker, jobs):
            result = result.merge(part)
    return result
