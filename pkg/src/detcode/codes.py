"""Exact verification of detection-system conditions on finite graphs.

Four code kinds are supported. Writing S for the detector set, N[v] for
the closed and N(v) for the open neighborhood, and X_S for X ∩ S:

  IC     every v has |N_S[v]| >= 1; every pair has |N_S[u] △ N_S[v]| >= 1.
  LD     every v has |N_S[v]| >= 1; every pair of non-detectors has
         N_S(u) != N_S(v) (detectors announce themselves, so only
         non-detector pairs need neighborhood evidence).
  OLD    every v has |N_S(v)| >= 1; every pair has |N_S(u) △ N_S(v)| >= 1.
  DETIC  every v has |N_S[v]| >= 2; every pair has |N_S[u] - N_S[v]| >= 2
         or |N_S[v] - N_S[u]| >= 2 (the "2#" condition). This tolerates
         one detector failing to report: any single false negative leaves
         every pair still 1-distinguished.

Everything in this module works from (G, S) by direct set computation;
the branch-and-bound solver keeps its own compiled-constraint view, so
the two act as independent routes to the same predicates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .bitset import bits_list, mask_from_iter
from .graphs import Graph


class CodeKind(enum.Enum):
    IC = "ic"
    LD = "ld"
    OLD = "old"
    DETIC = "detic"

    @classmethod
    def parse(cls, text: str) -> "CodeKind":
        key = text.strip().lower().replace(":", "").replace("-", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown code kind {text!r} (expected ic, ld, old, or detic)")


UNDER_DOMINATED = "under-dominated"
UNDISTINGUISHED = "undistinguished"


@dataclass(frozen=True)
class Violation:
    """One failed condition, re-checkable from (G, S) alone.

    kind is 'under-dominated' (vertices is (v,), level is the observed
    count) or 'undistinguished' (vertices is the sorted pair). trace holds
    labeled neighborhood evidence as (label, sorted vertex tuple) pairs.
    """

    kind: str
    vertices: tuple[int, ...]
    level: int | None = None
    trace: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def sort_key(self):
        return (self.kind, self.vertices)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": list(self.vertices),
            "level": self.level,
            "trace": {label: list(vs) for label, vs in self.trace},
        }

    def __str__(self) -> str:
        vs = ",".join(str(v) for v in self.vertices)
        extra = f" level={self.level}" if self.level is not None else ""
        ev = "; ".join(f"{label}={{{','.join(map(str, vs_))}}}" for label, vs_ in self.trace)
        return f"{self.kind}({vs}){extra}" + (f" [{ev}]" if ev else "")


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    kind: CodeKind
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "kind": self.kind.value,
            "violations": [v.to_dict() for v in self.violations],
        }


def domination_level(g: Graph, detectors: Iterable[int], v: int) -> int:
    """|N[v] ∩ S|, the count of detectors that can see v (v included)."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    return (g.closed_mask[v] & mask_from_iter(detectors)).bit_count()


def is_k_distinguished(g: Graph, detectors: Iterable[int], u: int, v: int, k: int) -> bool:
    """|N_S[u] △ N_S[v]| >= k."""
    if u == v:
        raise ValueError("distinguishing is defined for distinct vertices")
    s = mask_from_iter(detectors)
    return ((g.closed_mask[u] ^ g.closed_mask[v]) & s).bit_count() >= k


def is_sharp2_distinguished(g: Graph, detectors: Iterable[int], u: int, v: int) -> bool:
    """At least one one-sided difference of detector neighborhoods has size >= 2."""
    if u == v:
        raise ValueError("distinguishing is defined for distinct vertices")
    s = mask_from_iter(detectors)
    cu, cv = g.closed_mask[u], g.closed_mask[v]
    return (cu & ~cv & s).bit_count() >= 2 or (cv & ~cu & s).bit_count() >= 2


def _as_mask(g: Graph, detectors: Iterable[int]) -> int:
    if isinstance(detectors, int):
        raise TypeError("detectors must be an iterable of vertex ids")
    s = mask_from_iter(detectors)
    if s >> g.n:
        raise ValueError("detector id out of range")
    return s


def _trace(label: str, mask: int) -> tuple[str, tuple[int, ...]]:
    return (label, tuple(bits_list(mask)))


def verify_code(
    g: Graph,
    detectors: Iterable[int],
    kind: CodeKind,
    check_all_pairs: bool = False,
) -> VerifyReport:
    """Full check of the kind's conditions; reports every violation.

    For DETIC, once every vertex passed 2-domination, pairs with disjoint
    closed neighborhoods are skipped: each side of such a pair keeps two
    private detectors, so the 2# condition holds automatically. Pass
    check_all_pairs=True to force the unrestricted pair sweep.
    """
    s = _as_mask(g, detectors)
    violations: list[Violation] = []

    if kind is CodeKind.DETIC:
        dom_ok = True
        for v in range(g.n):
            lvl = (g.closed_mask[v] & s).bit_count()
            if lvl < 2:
                dom_ok = False
                violations.append(
                    Violation(UNDER_DOMINATED, (v,), level=lvl,
                              trace=(_trace("closed_detectors", g.closed_mask[v] & s),))
                )
        shortcut = dom_ok and not check_all_pairs
        for u in range(g.n):
            cu = g.closed_mask[u]
            for v in range(u + 1, g.n):
                cv = g.closed_mask[v]
                if shortcut and not (cu & cv):
                    continue
                a = cu & ~cv & s
                b = cv & ~cu & s
                if a.bit_count() < 2 and b.bit_count() < 2:
                    violations.append(
                        Violation(UNDISTINGUISHED, (u, v),
                                  trace=(_trace("only_u_side", a), _trace("only_v_side", b)))
                    )
    elif kind is CodeKind.IC:
        for v in range(g.n):
            lvl = (g.closed_mask[v] & s).bit_count()
            if lvl < 1:
                violations.append(
                    Violation(UNDER_DOMINATED, (v,), level=lvl,
                              trace=(_trace("closed_detectors", g.closed_mask[v] & s),))
                )
        for u in range(g.n):
            cu = g.closed_mask[u]
            for v in range(u + 1, g.n):
                if ((cu ^ g.closed_mask[v]) & s).bit_count() < 1:
                    violations.append(
                        Violation(UNDISTINGUISHED, (u, v),
                                  trace=(_trace("u_closed_detectors", cu & s),
                                         _trace("v_closed_detectors", g.closed_mask[v] & s)))
                    )
    elif kind is CodeKind.LD:
        for v in range(g.n):
            lvl = (g.closed_mask[v] & s).bit_count()
            if lvl < 1:
                violations.append(
                    Violation(UNDER_DOMINATED, (v,), level=lvl,
                              trace=(_trace("closed_detectors", g.closed_mask[v] & s),))
                )
        for u in range(g.n):
            if (s >> u) & 1:
                continue
            ou = g.open_mask[u] & s
            for v in range(u + 1, g.n):
                if (s >> v) & 1:
                    continue
                ov = g.open_mask[v] & s
                if ou == ov:
                    violations.append(
                        Violation(UNDISTINGUISHED, (u, v),
                                  trace=(_trace("u_open_detectors", ou),
                                         _trace("v_open_detectors", ov)))
                    )
    elif kind is CodeKind.OLD:
        for v in range(g.n):
            lvl = (g.open_mask[v] & s).bit_count()
            if lvl < 1:
                violations.append(
                    Violation(UNDER_DOMINATED, (v,), level=lvl,
                              trace=(_trace("open_detectors", g.open_mask[v] & s),))
                )
        for u in range(g.n):
            ou = g.open_mask[u]
            for v in range(u + 1, g.n):
                if ((ou ^ g.open_mask[v]) & s).bit_count() < 1:
                    violations.append(
                        Violation(UNDISTINGUISHED, (u, v),
                                  trace=(_trace("u_open_detectors", ou & s),
                                         _trace("v_open_detectors", g.open_mask[v] & s)))
                    )
    else:  # pragma: no cover
        raise ValueError(f"unhandled kind {kind}")

    violations.sort(key=Violation.sort_key)
    return VerifyReport(ok=not violations, kind=kind, violations=tuple(violations))


def is_valid_code(g: Graph, detector_mask: int, kind: CodeKind) -> bool:
    """Early-exit mask-level validity test; same predicate as verify_code.

    This is the hot path for brute-force scans, so it bails on the first
    failed condition instead of collecting evidence.
    """
    s = detector_mask
    if kind is CodeKind.DETIC:
        for cv in g.closed_mask:
            if (cv & s).bit_count() < 2:
                return False
        for u in range(g.n):
            cu = g.closed_mask[u]
            for v in range(u + 1, g.n):
                cv = g.closed_mask[v]
                if not (cu & cv):
                    continue
                if (cu & ~cv & s).bit_count() < 2 and (cv & ~cu & s).bit_count() < 2:
                    return False
        return True
    if kind is CodeKind.IC:
        for cv in g.closed_mask:
            if not (cv & s):
                return False
        for u in range(g.n):
            cu = g.closed_mask[u]
            for v in range(u + 1, g.n):
                if not ((cu ^ g.closed_mask[v]) & s):
                    return False
        return True
    if kind is CodeKind.LD:
        for cv in g.closed_mask:
            if not (cv & s):
                return False
        for u in range(g.n):
            if (s >> u) & 1:
                continue
            ou = g.open_mask[u] & s
            for v in range(u + 1, g.n):
                if not ((s >> v) & 1) and ou == (g.open_mask[v] & s):
                    return False
        return True
    if kind is CodeKind.OLD:
        for ov in g.open_mask:
            if not (ov & s):
                return False
        for u in range(g.n):
            ou = g.open_mask[u]
            for v in range(u + 1, g.n):
                if not ((ou ^ g.open_mask[v]) & s):
                    return False
        return True
    raise ValueError(f"unhandled kind {kind}")  # pragma: no cover


# ---------------------------------------------------------------------------
# existence characterization

ISOLATED = "isolated"
OPEN_TWINS = "open-twins"
BAD_EDGE = "bad-edge"


@dataclass(frozen=True)
class ExistenceReport:
    """Outcome of the three structural existence conditions.

    witness is None when exists, otherwise the first failure found:
    ('isolated', v), ('open-twins', u, v), or ('bad-edge', u, v, t) where
    t counts the triangles through uv and both endpoint degrees fall
    below t + 3.
    """

    exists: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.exists

    def to_dict(self) -> dict:
        return {"exists": self.exists,
                "witness": None if self.witness is None else list(self.witness)}


def detic_exists(g: Graph) -> ExistenceReport:
    """Structural test for whether any DETIC detector set exists.

    The conditions: no isolated vertex, no open twins, and every edge uv
    has an endpoint of degree at least t + 3 for its triangle count t.
    Equivalent to verify_code(g, all vertices, DETIC) passing, which the
    test suite checks exhaustively at small n.
    """
    for v in range(g.n):
        if not g.open_mask[v]:
            return ExistenceReport(False, (ISOLATED, v))
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.open_mask[u] == g.open_mask[v]:
                return ExistenceReport(False, (OPEN_TWINS, u, v))
    for u, v in g.edges:
        t = (g.open_mask[u] & g.open_mask[v]).bit_count()
        if g.degree(u) < t + 3 and g.degree(v) < t + 3:
            return ExistenceReport(False, (BAD_EDGE, u, v, t))
    return ExistenceReport(True, None)


# ---------------------------------------------------------------------------
# cubic proposition checker

def _paths_exactly(g: Graph, start: int, length: int) -> set[int]:
    """Endpoints of simple paths with exactly `length` edges from start."""
    endpoints: set[int] = set()

    def walk(v: int, remaining: int, seen: int) -> None:
        if remaining == 0:
            endpoints.add(v)
            return
        for u in g.adj[v]:
            if not (seen >> u) & 1:
                walk(u, remaining - 1, seen | (1 << u))

    walk(start, length, 1 << start)
    return endpoints


def _four_cycles(g: Graph) -> list[tuple[int, int, int, int]]:
    """All 4-cycles as (u, p, v, q): u,v opposite, p,q opposite, u minimal.

    Each cycle (as an edge set) appears exactly once: u is its smallest
    vertex, p < q, and for the u..v diagonal u < v by construction.
    """
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            common = [w for w in bits_list(g.open_mask[u] & g.open_mask[v]) if w > u]
            for i in range(len(common)):
                for j in range(i + 1, len(common)):
                    out.append((u, common[i], v, common[j]))
    return out


def check_cubic_propositions(g: Graph, detectors: Iterable[int]) -> list[str]:
    """Machine-check five structural facts about valid DETIC sets on
    3-regular graphs. The facts are theorems, so a non-empty return value
    signals an implementation bug somewhere; each entry carries enough
    trace to re-check by hand.

    Raises ValueError when g is not cubic or detectors is not a valid
    DETIC set, since the facts assume both.
    """
    if any(g.degree(v) != 3 for v in range(g.n)):
        raise ValueError("propositions apply to 3-regular graphs only")
    s = _as_mask(g, detectors)
    report = verify_code(g, bits_list(s), CodeKind.DETIC)
    if not report.ok:
        raise ValueError("detector set is not a valid DETIC for this graph")

    failures: list[str] = []

    def in_s(v: int) -> bool:
        return bool((s >> v) & 1)

    # fact 1: a non-detector forces every endpoint of a 3-edge path into S
    for x in range(g.n):
        if in_s(x):
            continue
        for y in sorted(_paths_exactly(g, x, 3)):
            if not in_s(y):
                failures.append(f"fact1: non-detector {x} has 3-path endpoint {y} outside S")

    # fact 2: every 4-cycle carries at least 3 detectors
    for u, p, v, q in _four_cycles(g):
        cyc = {u, p, v, q}
        if sum(1 for w in cyc if in_s(w)) < 3:
            failures.append(f"fact2: 4-cycle {sorted(cyc)} has fewer than 3 detectors")

    # fact 3: two non-detectors joined by a 2-edge path pool their
    # neighborhoods into S
    for x in range(g.n):
        if in_s(x):
            continue
        for y in sorted(_paths_exactly(g, x, 2)):
            if y <= x or in_s(y):
                continue
            for w in sorted(set(g.adj[x]) | set(g.adj[y])):
                if not in_s(w):
                    failures.append(
                        f"fact3: non-detectors {x},{y} at distance-2 leave neighbor {w} outside S")

    # fact 4: a detector path x-v-y needs a 3-dominated endpoint
    for v in range(g.n):
        if not in_s(v):
            continue
        nbrs = [u for u in g.adj[v] if in_s(u)]
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                x, y = nbrs[i], nbrs[j]
                dx = (g.closed_mask[x] & s).bit_count()
                dy = (g.closed_mask[y] & s).bit_count()
                if dx < 3 and dy < 3:
                    failures.append(
                        f"fact4: detector path {x}-{v}-{y} has dominations {dx},{dy}")

    # fact 5: opposite 4-cycle vertices and their outside neighbors carry
    # at least 3 detectors among the four of them
    for u, p, v, q in _four_cycles(g):
        for x, a, y, b in ((u, p, v, q), (p, u, q, v)):
            outside = sorted((set(g.adj[x]) | set(g.adj[y])) - {x, a, y, b})
            if len(outside) != 2:
                continue  # needs two distinct outside neighbors to apply
            f1, f2 = outside
            count = sum(1 for w in (x, y, f1, f2) if in_s(w))
            if count < 3:
                failures.append(
                    f"fact5: rivals {x},{y} with friends {f1},{f2} have only {count} detectors")

    return failures
