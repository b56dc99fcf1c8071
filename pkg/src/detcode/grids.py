"""Periodic DETIC patterns on infinite grids and the infinite ladder.

A pattern is a w-by-h fundamental domain with marked detector cells; the
induced detector set is its tiling over the whole infinite lattice.
Verification works directly on the infinite graph: neighborhoods are
real plane coordinates and only the membership test reduces modulo the
period. Small tori wrap edges around and would accept patterns the plane
rejects, so they are never used here (they appear only as the separate
torus_consistency advisory).

Sweeping one fundamental domain suffices because both code conditions
only look at radius 2 and period translations are graph automorphisms
(for the brick-wall HEX that forces even periods in both directions, as
odd translations flip the vertical-edge parity).
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, TextIO

from .codes import CodeKind, UNDER_DOMINATED, UNDISTINGUISHED, Violation
from .graphs import prism, torus
from .solver import SolveResult, min_code

LATTICES = ("SQR", "TRI", "KNG", "HEX", "LADDER")

# exhaustive subset search is capped; larger domains need a symmetry
EXHAUSTIVE_DOMAIN_LIMIT = 24

TORUS_CONSISTENCY_LIMIT = 20


class PatternError(ValueError):
    """Malformed pattern or unsupported search request."""


_SQR_OFFS = ((1, 0), (-1, 0), (0, 1), (0, -1))
_TRI_OFFS = _SQR_OFFS + ((1, 1), (-1, -1))
_KNG_OFFS = _SQR_OFFS + ((1, 1), (-1, -1), (1, -1), (-1, 1))


def lattice_neighbors(lattice: str, x: int, y: int) -> tuple:
    """Open neighborhood of (x, y) in the infinite lattice, as coordinates."""
    if lattice == "LADDER":
        if y not in (0, 1):
            raise PatternError(f"ladder has no vertex at y={y}")
        return ((x - 1, y), (x + 1, y), (x, 1 - y))
    if lattice == "HEX":
        # brick wall: vertical edge points up at even x+y, down at odd
        vert = (x, y + 1) if (x + y) % 2 == 0 else (x, y - 1)
        return ((x - 1, y), (x + 1, y), vert)
    if lattice == "SQR":
        offs = _SQR_OFFS
    elif lattice == "TRI":
        offs = _TRI_OFFS
    elif lattice == "KNG":
        offs = _KNG_OFFS
    else:
        raise PatternError(f"unknown lattice {lattice!r}")
    return tuple((x + dx, y + dy) for dx, dy in offs)


def _closed(lattice: str, pos: tuple) -> tuple:
    return (pos,) + lattice_neighbors(lattice, *pos)


@dataclass(frozen=True)
class PeriodicPattern:
    """Detector cells inside one fundamental domain of a lattice."""

    lattice: str
    width: int
    height: int
    cells: frozenset

    def __post_init__(self):
        object.__setattr__(self, "cells",
                           frozenset((int(x), int(y)) for x, y in self.cells))
        if self.lattice not in LATTICES:
            raise PatternError(f"unknown lattice {self.lattice!r}")
        if self.width < 1 or self.height < 1:
            raise PatternError("period dimensions must be positive")
        if self.lattice == "LADDER" and self.height != 2:
            raise PatternError("ladder patterns have fixed height 2")
        if self.lattice == "HEX" and (self.width % 2 or self.height % 2):
            raise PatternError("HEX periods must be even in both directions")
        if not self.cells:
            raise PatternError("pattern needs at least one detector cell")
        for x, y in self.cells:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise PatternError(f"cell ({x}, {y}) outside the {self.width}x{self.height} domain")

    def contains(self, x: int, y: int) -> bool:
        """Detector membership of an arbitrary plane coordinate."""
        if self.lattice == "LADDER":
            return (x % self.width, y) in self.cells
        return (x % self.width, y % self.height) in self.cells

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.cells), self.width * self.height)

    def domain(self) -> list:
        return [(x, y) for x in range(self.width) for y in range(self.height)]

    def to_dict(self) -> dict:
        return {"lattice": self.lattice, "period": [self.width, self.height],
                "cells": sorted(self.cells),
                "density": [self.density.numerator, self.density.denominator]}


def pattern_density(p: PeriodicPattern) -> Fraction:
    return p.density


@dataclass(frozen=True)
class PatternReport:
    ok: bool
    density: Fraction
    violations: tuple

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "density": [self.density.numerator, self.density.denominator],
                "violations": [v.to_dict() for v in self.violations]}


def _reduce_pos(p: PeriodicPattern, pos: tuple) -> tuple:
    if p.lattice == "LADDER":
        return (pos[0] % p.width, pos[1])
    return (pos[0] % p.width, pos[1] % p.height)


def _pair_key(p: PeriodicPattern, u: tuple, v: tuple):
    """Canonical representative of {u, v} modulo period translations."""
    def anchored(a, b):
        ax, ay = _reduce_pos(p, a)
        return (ax, ay, b[0] + (ax - a[0]), b[1] + (ay - a[1]))
    return min(anchored(u, v), anchored(v, u))


def verify_pattern(p: PeriodicPattern) -> PatternReport:
    """Exact check that the tiled pattern is a DETIC of the infinite graph.

    Every vertex of one fundamental domain is checked for 2-domination,
    and every pair at distance <= 2 (with one endpoint in the domain) for
    the two-sided distinguishing condition; pairs further apart have
    disjoint closed neighborhoods and are separated by domination alone.
    Each translation class of pairs is reported at most once.
    """
    violations = []
    seen_pairs = set()
    for u in p.domain():
        cn_u = _closed(p.lattice, u)
        dom = sum(1 for q in cn_u if p.contains(*q))
        if dom < 2:
            violations.append(Violation(UNDER_DOMINATED, (u,), level=dom))
        candidates = set()
        for w in cn_u:
            candidates.update(_closed(p.lattice, w))
        candidates.discard(u)
        cn_u_set = set(cn_u)
        for v in sorted(candidates):
            key = _pair_key(p, u, v)
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            cn_v_set = set(_closed(p.lattice, v))
            only_u = [q for q in cn_u_set - cn_v_set if p.contains(*q)]
            only_v = [q for q in cn_v_set - cn_u_set if p.contains(*q)]
            if len(only_u) >= 2 or len(only_v) >= 2:
                continue
            violations.append(Violation(
                UNDISTINGUISHED, tuple(sorted((u, v))),
                trace=(("only_u_side", tuple(sorted(only_u))),
                       ("only_v_side", tuple(sorted(only_v)))),
            ))
    violations.sort(key=Violation.sort_key)
    return PatternReport(ok=not violations, density=p.density,
                         violations=tuple(violations))


def shift_pattern(p: PeriodicPattern, dx: int, dy: int) -> PeriodicPattern:
    """Cyclically translate the cells within the domain."""
    cells = {((x + dx) % p.width, (y + dy) % p.height) for x, y in p.cells}
    return PeriodicPattern(p.lattice, p.width, p.height, frozenset(cells))


def tile_pattern(p: PeriodicPattern, fx: int, fy: int = 1) -> PeriodicPattern:
    """The same infinite detector set on an fx-by-fy multiple of the domain."""
    if fx < 1 or fy < 1:
        raise PatternError("tiling factors must be positive")
    if p.lattice == "LADDER" and fy != 1:
        raise PatternError("ladder patterns cannot be tiled vertically")
    cells = {(x + i * p.width, y + j * p.height)
             for x, y in p.cells for i in range(fx) for j in range(fy)}
    return PeriodicPattern(p.lattice, p.width * fx, p.height * fy, frozenset(cells))


# ---------------------------------------------------------------------------
# search

@lru_cache(maxsize=64)
def _pattern_geometry(lattice: str, w: int, h: int) -> tuple:
    """Compiled local conditions for one fundamental domain.

    covers: per domain vertex, the closed neighborhood as a tuple of
    domain cell indices, with repetition when distinct plane positions
    reduce to the same cell (thin periods; the repeats are real distinct
    vertices of the infinite graph and must count separately).
    eithers: one entry per translation class of distance <= 2 pairs, the
    two one-sided neighborhood differences as index tuples.
    """
    probe = PeriodicPattern(lattice, w, h, frozenset({(0, 0)}))

    def idx(pos):
        rx, ry = _reduce_pos(probe, pos)
        return rx * h + ry

    covers = []
    eithers = []
    seen_pairs = set()
    for u in probe.domain():
        cn_u = _closed(lattice, u)
        covers.append(tuple(idx(q) for q in cn_u))
        candidates = set()
        for q in cn_u:
            candidates.update(_closed(lattice, q))
        candidates.discard(u)
        cn_u_set = set(cn_u)
        for v in sorted(candidates):
            key = _pair_key(probe, u, v)
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            cn_v_set = set(_closed(lattice, v))
            pool_u = tuple(idx(q) for q in cn_u_set - cn_v_set)
            pool_v = tuple(idx(q) for q in cn_v_set - cn_u_set)
            eithers.append((pool_u, pool_v))
    return tuple(covers), tuple(eithers)


def _two_hits(pool: tuple, members: set) -> bool:
    hits = 0
    for i in pool:
        if i in members:
            hits += 1
            if hits == 2:
                return True
    return False


def _fast_pattern_ok(lattice: str, w: int, h: int, cells: frozenset) -> bool:
    """Same verdict as verify_pattern(...).ok, built for tight search loops."""
    covers, eithers = _pattern_geometry(lattice, w, h)
    members = {x * h + y for x, y in cells}
    for pool in covers:
        if not _two_hits(pool, members):
            return False
    for pool_u, pool_v in eithers:
        if not (_two_hits(pool_u, members) or _two_hits(pool_v, members)):
            return False
    return True


def _anchored_subsets(lattice: str, domain: list, k: int) -> Iterable[frozenset]:
    """All k-subsets up to period translation, smallest-first deterministic.

    SQR/TRI/KNG: every translation is an automorphism, so some translate
    of any detector set holds (0, 0). LADDER: only x-translations, so the
    anchor is a cell in column 0. HEX: unit translations flip the brick
    parity and are not automorphisms, so no anchoring is applied.
    """
    rest = [c for c in domain if c != (0, 0)]
    if lattice in ("SQR", "TRI", "KNG"):
        for combo in itertools.combinations(rest, k - 1):
            yield frozenset(combo) | {(0, 0)}
    elif lattice == "LADDER":
        for combo in itertools.combinations(rest, k - 1):
            yield frozenset(combo) | {(0, 0)}
        rest2 = [c for c in domain if c not in ((0, 0), (0, 1))]
        for combo in itertools.combinations(rest2, k - 1):
            yield frozenset(combo) | {(0, 1)}
    else:
        for combo in itertools.combinations(domain, k):
            yield frozenset(combo)


def _orbits(w: int, h: int, dx: int, dy: int) -> list:
    seen = set()
    orbits = []
    for start in itertools.product(range(w), range(h)):
        if start in seen:
            continue
        orbit = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            orbit.append(cur)
            cur = ((cur[0] + dx) % w, (cur[1] + dy) % h)
        orbits.append(tuple(sorted(orbit)))
    return orbits


def _orbit_unions(orbits: list, total: int) -> Iterable[frozenset]:
    """Unions of whole orbits with exactly `total` cells."""
    sizes = [len(o) for o in orbits]
    suffix = [0] * (len(orbits) + 1)
    for i in range(len(orbits) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + sizes[i]

    def rec(i, remaining, acc):
        if remaining == 0:
            yield frozenset(acc)
            return
        if i == len(orbits) or suffix[i] < remaining:
            return
        if sizes[i] <= remaining:
            yield from rec(i + 1, remaining - sizes[i], acc + list(orbits[i]))
        yield from rec(i + 1, remaining, acc)

    yield from rec(0, total, [])


def search_pattern(lattice: str, period: tuple, target,
                   symmetry: Optional[tuple] = None) -> Optional[PeriodicPattern]:
    """First verifier-passing pattern of density <= target, or None.

    Without a symmetry the subset enumeration is exhaustive (domains up
    to 24 cells); supersets of valid patterns stay valid, so searching
    size floor(target * w * h) alone is complete. With symmetry (dx, dy)
    candidates are unions of orbits of that translation, tried at every
    reachable size from the budget downward; the verifier still has the
    final word, so an ill-chosen symmetry can only miss patterns, never
    accept a bad one.
    """
    w, h = period
    target = Fraction(target)
    full = PeriodicPattern(lattice, w, h,
                           frozenset((x, y) for x in range(w) for y in range(h)))
    k = int(target * w * h)
    if k < 1:
        return None
    k = min(k, w * h)
    if symmetry is None:
        if w * h > EXHAUSTIVE_DOMAIN_LIMIT:
            raise PatternError(
                f"domain of {w * h} cells exceeds the exhaustive limit of "
                f"{EXHAUSTIVE_DOMAIN_LIMIT}; pass a symmetry restriction")
        candidate_sets = _anchored_subsets(lattice, full.domain(), k)
    else:
        orbits = _orbits(w, h, symmetry[0], symmetry[1])
        candidate_sets = itertools.chain.from_iterable(
            _orbit_unions(orbits, total) for total in range(k, 0, -1))
    for cells in candidate_sets:
        if _fast_pattern_ok(lattice, w, h, cells):
            p = PeriodicPattern(lattice, w, h, cells)
            if verify_pattern(p).ok:  # authoritative recheck of the fast path
                return p
    return None


def ladder_proof_facts(p: PeriodicPattern) -> list:
    """Structural consequences that hold in every valid ladder pattern.

    For a non-detector at (x, j): its rung mate (x, 1-j) and rail mates
    (x-1, j), (x+1, j) must be detectors (otherwise some pair one step
    over is undistinguished), and so must the diagonal positions
    (x-1, 1-j), (x+1, 1-j); together the five surrounding positions are
    all detectors. Returns failed-fact messages, empty when all hold.
    """
    if p.lattice != "LADDER":
        raise PatternError("ladder facts apply to LADDER patterns only")
    failures = []
    for x in range(p.width):
        for j in (0, 1):
            if p.contains(x, j):
                continue
            if not p.contains(x, 1 - j):
                failures.append(f"adjacent non-detectors ({x},{j}) and ({x},{1 - j})")
            for dx in (-1, 1):
                if not p.contains(x + dx, j):
                    failures.append(f"adjacent non-detectors ({x},{j}) and ({x + dx},{j})")
                if not p.contains(x + dx, 1 - j):
                    failures.append(f"diagonal non-detector pair ({x},{j}) and ({x + dx},{1 - j})")
            surrounding = [(x - 1, j), (x + 1, j), (x, 1 - j),
                           (x - 1, 1 - j), (x + 1, 1 - j)]
            if not all(p.contains(*q) for q in surrounding):
                failures.append(f"non-detector ({x},{j}) not fully surrounded")
    return failures


# ---------------------------------------------------------------------------
# finite-torus advisory

@dataclass(frozen=True)
class TorusReport:
    lattice: str
    width: int
    height: int
    n: int
    optimum: Optional[int]
    density: Optional[Fraction]
    advisory: str
    result: SolveResult

    def to_dict(self) -> dict:
        return {"lattice": self.lattice, "period": [self.width, self.height],
                "n": self.n, "optimum": self.optimum,
                "density": None if self.density is None else
                [self.density.numerator, self.density.denominator],
                "advisory": self.advisory}


def torus_consistency(lattice: str, w: int, h: int, workers: int = 1) -> TorusReport:
    """Exact DETIC minimum on the finite w-by-h torus, as advisory evidence.

    The finite answer constrains only periodic patterns of this exact
    period; it neither bounds nor is bounded by the infinite optimum,
    and short wraparound cycles can make it strictly smaller.
    """
    if w * h > TORUS_CONSISTENCY_LIMIT:
        raise PatternError(
            f"torus consistency capped at {TORUS_CONSISTENCY_LIMIT} vertices, got {w * h}")
    if lattice == "LADDER":
        if h != 2:
            raise PatternError("ladder tori have height 2")
        g = prism(w)
    else:
        g = torus(lattice, w, h)
    res = min_code(g, CodeKind.DETIC, workers=workers)
    advisory = ("finite-torus minimum; constrains only patterns of period "
                f"({w}, {h}), not the infinite optimum")
    if w < 5 or (lattice != "LADDER" and h < 5):
        advisory += "; wraparound cycles shorter than 5 may produce artifacts"
    if not res.feasible:
        advisory += "; this torus has no DETIC at all"
        return TorusReport(lattice, w, h, g.n, None, None, advisory, res)
    return TorusReport(lattice, w, h, g.n, res.optimum,
                       Fraction(res.optimum, g.n), advisory, res)


# ---------------------------------------------------------------------------
# pattern files and bundled fixtures

def write_pattern(p: PeriodicPattern, fh: TextIO) -> None:
    fh.write(f"lattice {p.lattice}\n")
    fh.write(f"period {p.width} {p.height}\n")
    for x, y in sorted(p.cells):
        fh.write(f"cell {x} {y}\n")


def read_pattern(fh: TextIO) -> PeriodicPattern:
    lattice = None
    period = None
    cells = set()
    for raw in fh:
        line = raw.strip()
        if not line or (line.split()[0] == "c"):
            continue
        parts = line.split()
        if parts[0] == "lattice" and len(parts) == 2:
            lattice = parts[1]
        elif parts[0] == "period" and len(parts) == 3:
            period = (int(parts[1]), int(parts[2]))
        elif parts[0] == "cell" and len(parts) == 3:
            cells.add((int(parts[1]), int(parts[2])))
        else:
            raise PatternError(f"unrecognized pattern line {line!r}")
    if lattice is None or period is None:
        raise PatternError("pattern file needs 'lattice' and 'period' lines")
    return PeriodicPattern(lattice, period[0], period[1], frozenset(cells))


def bundled_pattern_names() -> list:
    root = resources.files("detcode").joinpath("data/patterns")
    return sorted(entry.name[:-4] for entry in root.iterdir()
                  if entry.name.endswith(".pat"))


def bundled_pattern(name: str) -> PeriodicPattern:
    root = resources.files("detcode").joinpath("data/patterns")
    path = root.joinpath(f"{name}.pat")
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise PatternError(f"no bundled pattern named {name!r}") from None
    return read_pattern(io.StringIO(text))


def bundled_patterns() -> dict:
    return {name: bundled_pattern(name) for name in bundled_pattern_names()}
