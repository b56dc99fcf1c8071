"""Exact minimum-code computation.

The solver compiles a code kind into two constraint shapes over detector
masks and runs depth-first branch and bound with unit propagation:

  Cover(m, k)      at least k detectors inside mask m
  Either(a, b)     at least 2 detectors inside a, or at least 2 inside b

Domination gives one Cover per vertex. Pair distinguishing gives one
constraint per vertex pair whose closed neighborhoods intersect; pairs
with disjoint closed neighborhoods are implied by the domination covers
and are not emitted. The compiled system is satisfied by a detector set
exactly when verify_code accepts it, and the brute-force oracle below
goes through verify_code's predicate instead of this compilation, so the
two stay independent.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from .bitset import bits_list, lowest_bit
from .codes import CodeKind, detic_exists, is_valid_code
from .graphs import Graph, enumerate_cubic

DEFAULT_MAX_FREE = 64
TIME_LIMIT_ENV = "DETCODE_TIME_LIMIT_SECS"
_TIME_CHECK_STRIDE = 256


class SolverTimeout(RuntimeError):
    """Raised when the env-configured wall-clock budget runs out."""


class SolverLimitError(ValueError):
    """Instance too large for the requested search mode."""


class InfeasibleError(ValueError):
    """Propagation or compilation proved no valid code exists."""

    def __init__(self, witness: tuple):
        super().__init__(f"no valid code exists: {witness}")
        self.witness = witness


@dataclass(frozen=True)
class SolveResult:
    kind: CodeKind
    n: int
    optimum: Optional[int]
    witness: Optional[frozenset]
    density: Optional[Fraction]
    nodes_explored: int
    forced: frozenset
    budget: Optional[int] = None
    decision: Optional[bool] = None
    infeasible_witness: Optional[tuple] = None

    @property
    def feasible(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "optimum": self.optimum,
            "witness": None if self.witness is None else sorted(self.witness),
            "density": None if self.density is None else [self.density.numerator,
                                                          self.density.denominator],
            "nodes_explored": self.nodes_explored,
            "forced": sorted(self.forced),
            "budget": self.budget,
            "decision": self.decision,
            "infeasible_witness": None if self.infeasible_witness is None
            else list(self.infeasible_witness),
        }


# constraint tuples: ("C", mask, need) and ("E", mask_a, mask_b)

def compile_constraints(g: Graph, kind: CodeKind):
    """Return (constraints, infeasible_reason).

    infeasible_reason is None when a valid code exists, otherwise a tuple
    naming the structural obstruction. Compilation succeeding is the same
    thing as the all-vertices set being valid, so feasibility here is
    exact, not heuristic.
    """
    cons = []
    if kind is CodeKind.DETIC:
        for v in range(g.n):
            if g.closed_mask[v].bit_count() < 2:
                return cons, ("isolated", v)
            cons.append(("C", g.closed_mask[v], 2))
    elif kind is CodeKind.OLD:
        for v in range(g.n):
            if not g.open_mask[v]:
                return cons, ("isolated", v)
            cons.append(("C", g.open_mask[v], 1))
    else:  # IC and LD dominate through closed neighborhoods, never empty
        for v in range(g.n):
            cons.append(("C", g.closed_mask[v], 1))

    for u in range(g.n):
        cu = g.closed_mask[u]
        for v in range(u + 1, g.n):
            if not (cu & g.closed_mask[v]):
                continue
            if kind is CodeKind.DETIC:
                a = cu & ~g.closed_mask[v]
                b = g.closed_mask[v] & ~cu
                if a.bit_count() < 2 and b.bit_count() < 2:
                    return cons, ("undistinguishable", u, v)
                cons.append(("E", a, b))
            elif kind is CodeKind.IC:
                m = cu ^ g.closed_mask[v]
                if not m:
                    return cons, ("closed-twins", u, v)
                cons.append(("C", m, 1))
            elif kind is CodeKind.LD:
                m = (g.open_mask[u] ^ g.open_mask[v]) | (1 << u) | (1 << v)
                cons.append(("C", m, 1))
            else:  # OLD
                m = g.open_mask[u] ^ g.open_mask[v]
                if not m:
                    return cons, ("open-twins", u, v)
                cons.append(("C", m, 1))
    return cons, None


def propagate(cons: list, in_mask: int, out_mask: int):
    """Run unit forcing to fixpoint.

    Returns (in_mask, out_mask, conflict_index). Forcing rules: a Cover
    whose possible count equals its need pulls all its free vertices in;
    an Either with one side dead acts as a Cover(side, 2) on the other.
    Every forced vertex is in every valid completion of the current
    state, so running from the empty state under-approximates the
    intersection of all valid codes.
    """
    while True:
        changed = False
        for idx, con in enumerate(cons):
            if con[0] == "C":
                _, m, need = con
                have = (m & in_mask).bit_count()
                if have >= need:
                    continue
                free = m & ~in_mask & ~out_mask
                poss = have + free.bit_count()
                if poss < need:
                    return in_mask, out_mask, idx
                if poss == need:
                    in_mask |= free
                    changed = True
            else:
                _, a, b = con
                ha = (a & in_mask).bit_count()
                hb = (b & in_mask).bit_count()
                if ha >= 2 or hb >= 2:
                    continue
                fa = a & ~in_mask & ~out_mask
                fb = b & ~in_mask & ~out_mask
                pa = ha + fa.bit_count()
                pb = hb + fb.bit_count()
                if pa < 2 and pb < 2:
                    return in_mask, out_mask, idx
                if pa < 2:
                    if pb == 2:
                        in_mask |= fb
                        changed = True
                elif pb < 2:
                    if pa == 2:
                        in_mask |= fa
                        changed = True
        if not changed:
            return in_mask, out_mask, None


def forced_detectors(g: Graph, kind: CodeKind = CodeKind.DETIC) -> frozenset:
    """Vertices provably contained in every valid code of this kind.

    Raises InfeasibleError when compilation or propagation shows no valid
    code exists at all.
    """
    cons, reason = compile_constraints(g, kind)
    if reason is not None:
        raise InfeasibleError(reason)
    in_mask, _, conflict = propagate(cons, 0, 0)
    if conflict is not None:
        raise InfeasibleError(("propagation-conflict",) + cons[conflict][:1])
    return frozenset(bits_list(in_mask))


class _Search:
    """One depth-first branch-and-bound run over a compiled system."""

    def __init__(self, cons: list, budget: Optional[int], deadline: Optional[float]):
        self.cons = cons
        self.budget = budget
        self.deadline = deadline
        self.nodes = 0
        self.best_mask: Optional[int] = None
        self.best_size: Optional[int] = None

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % _TIME_CHECK_STRIDE == 1:
            if time.monotonic() >= self.deadline:
                raise SolverTimeout(
                    f"solver exceeded {TIME_LIMIT_ENV} after {self.nodes} nodes")

    def _select(self, in_mask: int, out_mask: int):
        """Unsatisfied constraint with fewest free helpers, or None."""
        free_all = ~in_mask & ~out_mask
        best = None
        best_count = None
        for idx, con in enumerate(self.cons):
            if con[0] == "C":
                _, m, need = con
                if (m & in_mask).bit_count() >= need:
                    continue
                helpers = m & free_all
            else:
                _, a, b = con
                if (a & in_mask).bit_count() >= 2 or (b & in_mask).bit_count() >= 2:
                    continue
                helpers = (a | b) & free_all
            cnt = helpers.bit_count()
            if best_count is None or cnt < best_count:
                best, best_count = (idx, helpers), cnt
                if cnt <= 1:
                    break
        return best

    def _lower_bound(self, in_mask: int, out_mask: int) -> int:
        """Greedy packing of unsatisfied constraints with disjoint helpers."""
        free_all = ~in_mask & ~out_mask
        used = 0
        extra = 0
        for con in self.cons:
            if con[0] == "C":
                _, m, need = con
                have = (m & in_mask).bit_count()
                if have >= need:
                    continue
                helpers = m & free_all
                rem = need - have
            else:
                _, a, b = con
                ha = (a & in_mask).bit_count()
                hb = (b & in_mask).bit_count()
                if ha >= 2 or hb >= 2:
                    continue
                fa = a & free_all
                fb = b & free_all
                rem_a = 2 - ha if ha + fa.bit_count() >= 2 else None
                rem_b = 2 - hb if hb + fb.bit_count() >= 2 else None
                if rem_a is None and rem_b is None:
                    continue  # conflict; the caller's propagate handles it
                rem = min(r for r in (rem_a, rem_b) if r is not None)
                helpers = (a | b) & free_all
            if helpers & used:
                continue
            extra += rem
            used |= helpers
        return extra

    def run(self, in_mask: int, out_mask: int) -> None:
        self._tick()
        in_mask, out_mask, conflict = propagate(self.cons, in_mask, out_mask)
        if conflict is not None:
            return
        size = in_mask.bit_count()
        if self.budget is not None:
            if size > self.budget:
                return
            cap = self.budget
        else:
            if self.best_size is not None and size >= self.best_size:
                return
            cap = (self.best_size - 1) if self.best_size is not None else None
        choice = self._select(in_mask, out_mask)
        if choice is None:
            self.best_mask = in_mask
            self.best_size = size
            return
        if cap is not None and size + self._lower_bound(in_mask, out_mask) > cap:
            return
        _, helpers = choice
        v = lowest_bit(helpers)
        bit = 1 << v
        self.run(in_mask | bit, out_mask)
        if self.budget is not None and self.best_mask is not None:
            return  # decision mode stops at the first witness
        self.run(in_mask, out_mask | bit)


def _deadline_from_env() -> Optional[float]:
    raw = os.environ.get(TIME_LIMIT_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        limit = float(raw)
    except ValueError:
        raise ValueError(f"{TIME_LIMIT_ENV} must be a number, got {raw!r}")
    return time.monotonic() + limit


def _infeasible_result(g: Graph, kind: CodeKind, witness, budget=None) -> SolveResult:
    return SolveResult(kind=kind, n=g.n, optimum=None, witness=None, density=None,
                       nodes_explored=0, forced=frozenset(), budget=budget,
                       decision=False if budget is not None else None,
                       infeasible_witness=witness)


def min_code(
    g: Graph,
    kind: CodeKind,
    budget: Optional[int] = None,
    workers: int = 1,
    max_free: int = DEFAULT_MAX_FREE,
) -> SolveResult:
    """Exact minimum code, or with a budget the decision-problem answer.

    In budget mode the search stops at the first detector set of size at
    most budget (depth-first order, so deterministic) and reports it
    without any minimality claim; decision=False means the exhausted
    search proved no such set exists.

    Feasibility is settled before searching: for DETIC through the
    structural existence test, otherwise through compilation, both of
    which are exact. Instances are limited to max_free undecided vertices
    after root propagation; graphs of any size pass if forcing pins all
    but that many.
    """
    if budget is not None and budget < 0:
        raise ValueError("budget must be nonnegative")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    if kind is CodeKind.DETIC:
        rep = detic_exists(g)
        if not rep:
            return _infeasible_result(g, kind, rep.witness, budget)
    cons, reason = compile_constraints(g, kind)
    if reason is not None:
        return _infeasible_result(g, kind, reason, budget)

    root_in, root_out, conflict = propagate(cons, 0, 0)
    if conflict is not None:  # cannot happen once compilation passed
        raise AssertionError("root propagation conflict on a feasible instance")
    forced = frozenset(bits_list(root_in))
    if g.n - len(forced) > max_free:
        raise SolverLimitError(
            f"{g.n - len(forced)} undecided vertices exceed the limit of {max_free}")

    deadline = _deadline_from_env()
    if workers == 1:
        search = _Search(cons, budget, deadline)
        search.run(0, 0)
        best_mask, best_size, nodes = search.best_mask, search.best_size, search.nodes
    else:
        best_mask, best_size, nodes = _solve_parallel(g, kind, cons, budget, workers, deadline)

    if budget is not None:
        if best_mask is None:
            return SolveResult(kind=kind, n=g.n, optimum=None, witness=None,
                               density=None, nodes_explored=nodes, forced=forced,
                               budget=budget, decision=False)
        return SolveResult(kind=kind, n=g.n, optimum=best_size,
                           witness=frozenset(bits_list(best_mask)), density=None,
                           nodes_explored=nodes, forced=forced,
                           budget=budget, decision=True)

    assert best_mask is not None  # S = V is always a fallback solution
    density = Fraction(best_size, g.n) if g.n else Fraction(0, 1)
    return SolveResult(kind=kind, n=g.n, optimum=best_size,
                       witness=frozenset(bits_list(best_mask)), density=density,
                       nodes_explored=nodes, forced=forced)


def _expand_frontier(cons: list, levels: int):
    """Expand the branch tree a fixed number of levels without bounding.

    Returns (seeds, solved, nodes): open (in, out) states at the frontier,
    plus any states that already satisfied every constraint on the way.
    """
    frontier = [(0, 0)]
    solved = []
    nodes = 0
    sel = _Search(cons, None, None)
    for _ in range(levels):
        nxt = []
        for in_mask, out_mask in frontier:
            nodes += 1
            in2, out2, conflict = propagate(cons, in_mask, out_mask)
            if conflict is not None:
                continue
            choice = sel._select(in2, out2)
            if choice is None:
                solved.append(in2)
                continue
            _, helpers = choice
            bit = 1 << lowest_bit(helpers)
            nxt.append((in2 | bit, out2))
            nxt.append((in2, out2 | bit))
        frontier = nxt
    return frontier, solved, nodes


def _subtree_worker(args):
    cons, budget, seed, remaining = args
    search = _Search(cons, budget, time.monotonic() + remaining if remaining is not None else None)
    try:
        search.run(*seed)
    except SolverTimeout:
        return ("timeout", None, search.nodes)
    return (search.best_size, search.best_mask, search.nodes)


def _solve_parallel(g, kind, cons, budget, workers, deadline):
    import multiprocessing as mp

    seeds, solved, nodes = _expand_frontier(cons, 2)
    remaining = None if deadline is None else max(deadline - time.monotonic(), 0.0)
    results = []
    if seeds:
        with mp.Pool(processes=min(workers, len(seeds))) as pool:
            results = pool.map(_subtree_worker, [(cons, budget, s, remaining) for s in seeds])
    best_size = None
    best_mask = None
    for in_mask in solved:
        size = in_mask.bit_count()
        if best_size is None or (size, in_mask) < (best_size, best_mask):
            best_size, best_mask = size, in_mask
    for size, mask, sub_nodes in results:
        nodes += sub_nodes
        if size == "timeout":
            raise SolverTimeout(f"solver exceeded {TIME_LIMIT_ENV} in a worker")
        if mask is None:
            continue
        if best_size is None or (size, mask) < (best_size, best_mask):
            best_size, best_mask = size, mask
    return best_mask, best_size, nodes


def min_code_bruteforce(g: Graph, kind: CodeKind, max_n: int = 20) -> SolveResult:
    """Ground-truth optimum by ascending exhaustive subset scan.

    Goes through the verifier's definitional predicate, not the compiled
    constraints, so it cross-validates the main solver.
    """
    if g.n > max_n:
        raise SolverLimitError(f"brute force capped at n <= {max_n}")
    checked = 0
    for k in range(g.n + 1):
        for combo in combinations(range(g.n), k):
            checked += 1
            mask = 0
            for v in combo:
                mask |= 1 << v
            if is_valid_code(g, mask, kind):
                density = Fraction(k, g.n) if g.n else Fraction(0, 1)
                return SolveResult(kind=kind, n=g.n, optimum=k,
                                   witness=frozenset(combo), density=density,
                                   nodes_explored=checked, forced=frozenset())
    return SolveResult(kind=kind, n=g.n, optimum=None, witness=None, density=None,
                       nodes_explored=checked, forced=frozenset(),
                       infeasible_witness=("exhausted-all-subsets",))


def extremal_cubic(n: int, objective: str) -> tuple[int, Graph]:
    """Best DETIC optimum over connected cubic graphs on n vertices.

    objective 'max' returns the largest optimum among feasible graphs,
    'min' the smallest, each with the first witness graph reaching it in
    enumeration order.
    """
    if objective not in ("min", "max"):
        raise ValueError("objective must be 'min' or 'max'")
    if n % 2 or not 8 <= n <= 12:
        raise ValueError("extremal_cubic supports even n with 8 <= n <= 12")
    best_value = None
    best_graph = None
    for g in enumerate_cubic(n, dedup=True):
        if not detic_exists(g):
            continue
        value = min_code(g, CodeKind.DETIC).optimum
        if best_value is None or (objective == "max" and value > best_value) \
                or (objective == "min" and value < best_value):
            best_value, best_graph = value, g
    if best_value is None:
        raise ValueError(f"no connected cubic graph on {n} vertices admits a DETIC")
    return best_value, best_graph
