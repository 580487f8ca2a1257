"""Structure of L_K(E) for finite no-exit graphs.

For a finite graph in which no cycle has an exit,

    L_K(E)  ~=  (+)_i M_{m_i}(K[x, x^-1])  (+)  (+)_j M_{n_j}(K)

with one Laurent block per cycle ``c_i`` and one scalar block per sink
``w_j``.  This module computes the block data, the *-isomorphism ``phi``
onto the block matrix model and its inverse, the matrix model of the regular
algebra Q(E) (K(x) in place of K[x, x^-1]) and constructive checks of its
ring-theoretic properties.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .graph import Cycle, Graph, Path, exit_witness, paths_ending_at
from .lpa import Element, LeavittPathAlgebra, Monomial
from .polys import LaurentPoly, Poly, RationalFunction, random_ratfun
from .scalar import Field, FieldMismatch


class NotNoExit(ValueError):
    """The graph has a cycle with an exit; ``witness`` is ``(cycle, edge, position)``."""

    def __init__(self, witness):
        c, e, pos = witness
        super().__init__(f"cycle {c} has exit {e} at position {pos}")
        self.witness = witness


class NotIdempotent(ValueError):
    pass


class ModelMismatch(ValueError):
    pass


NotInvertible = linalg.NotInvertible


# -- decomposition ---------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One summand: a cycle block (Laurent entries) or a sink block (scalars)."""

    kind: str  # "cycle" or "sink"
    base: str
    paths: Tuple[Path, ...]
    cycle: Optional[Path] = None  # closed path starting and ending at base

    @property
    def size(self) -> int:
        return len(self.paths)

    @cached_property
    def index(self) -> Dict[Path, int]:
        return {p: i for i, p in enumerate(self.paths)}

    def to_dict(self) -> dict:
        return {"type": self.kind, "size": self.size, "base": self.base, "lambda": [str(p) for p in self.paths]}


@dataclass(frozen=True)
class DecompositionData:
    graph: Graph
    blocks: Tuple[Block, ...]

    @property
    def cycle_blocks(self) -> Tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.kind == "cycle")

    @property
    def sink_blocks(self) -> Tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.kind == "sink")

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.cycle_blocks)

    @property
    def k(self) -> int:
        return len(self.sink_blocks)

    @property
    def m(self) -> List[int]:
        return [b.size for b in self.cycle_blocks]

    @property
    def n(self) -> List[int]:
        return [b.size for b in self.sink_blocks]

    @cached_property
    def terminal_block(self) -> Dict[str, int]:
        """Block index of each base vertex and sink."""
        return {b.base: t for t, b in enumerate(self.blocks)}

    @cached_property
    def all_paths(self) -> List[Tuple[int, Path]]:
        """The global enumeration of the path families, block by block."""
        return [(t, p) for t, b in enumerate(self.blocks) for p in b.paths]

    def shape(self, model: str = "L") -> str:
        ring = "K[x,x^-1]" if model == "L" else "K(x)"
        parts = [f"M_{b.size}({ring})" for b in self.cycle_blocks]
        parts += [f"M_{b.size}(K)" for b in self.sink_blocks]
        return " ⊕ ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"l": self.l, "k": self.k, "blocks": [b.to_dict() for b in self.blocks]}


def _cycle_from(g: Graph, c: Cycle, base: str) -> Path:
    es = c.edges
    i = next(j for j, e in enumerate(es) if g.s(e) == base)
    es = es[i:] + es[:i]
    return Path(base, es, base)


def decompose(g: Graph, bases: Optional[Dict[Cycle, str]] = None) -> DecompositionData:
    """Block data for a finite no-exit graph.

    Each cycle is based at its earliest vertex unless ``bases`` says otherwise.
    The family for a cycle block is every path ending at the base that does
    not contain the full cycle, i.e. ``q`` followed by a proper final segment
    of the cycle with ``q`` avoiding cycle edges.  The family for a sink is
    every path ending there.  Families are sorted by (length, edge names).
    """
    w = exit_witness(g)
    if w is not None:
        raise NotNoExit(w)
    blocks: List[Block] = []
    for c in g.cycles:
        base = (bases or {}).get(c, c.base)
        cyc = _cycle_from(g, c, base)
        fam: List[Path] = []
        n = len(cyc)
        for j in range(1, n + 1):
            seg = Path(g.s(cyc.edges[j]) if j < n else base, cyc.edges[j:], base)
            fam.extend(q + seg for q in paths_ending_at(g, seg.start, "no-cycle-edges"))
        fam.sort(key=lambda p: p.sort_key)
        blocks.append(Block("cycle", base, tuple(fam), cyc))
    for s in g.ordered(g.sinks()):
        blocks.append(Block("sink", s, tuple(paths_ending_at(g, s, "no-cycle-edges"))))
    return DecompositionData(g, tuple(blocks))


# -- block matrices ------------------------------------------------------------


@dataclass(frozen=True)
class EntryRing:
    """Coefficient ring of one block: ``scalar`` (K), ``laurent`` or ``ratfun``."""

    kind: str
    field: Field

    @property
    def zero(self):
        if self.kind == "scalar":
            return self.field.zero
        if self.kind == "laurent":
            return LaurentPoly(self.field)
        return RationalFunction.constant(self.field, 0)

    @property
    def one(self):
        if self.kind == "scalar":
            return self.field.one
        if self.kind == "laurent":
            return LaurentPoly.constant(self.field, 1)
        return RationalFunction.constant(self.field, 1)

    def x(self, n: int = 1):
        if self.kind == "laurent":
            return LaurentPoly.x(self.field, n)
        if self.kind == "ratfun":
            return LaurentPoly.x(self.field, n).to_ratfun()
        raise ModelMismatch("scalar blocks have no variable")

    def star(self, a):
        return self.field.star(a) if self.kind == "scalar" else a.star()

    def contains(self, a) -> bool:
        if self.kind == "scalar":
            return self.field.contains(a)
        cls = LaurentPoly if self.kind == "laurent" else RationalFunction
        return isinstance(a, cls) and a.field == self.field


class BlockMatrix:
    """An element of a finite direct sum of square matrix rings."""

    __slots__ = ("rings", "blocks", "model")

    def __init__(self, rings: Sequence[EntryRing], blocks: Sequence[Sequence[Sequence]], model: str):
        if len(rings) != len(blocks):
            raise ModelMismatch("one ring per block required")
        self.rings = tuple(rings)
        self.blocks = tuple(tuple(tuple(row) for row in b) for b in blocks)
        self.model = model
        for ring, b in zip(self.rings, self.blocks):
            for row in b:
                if len(row) != len(b):
                    raise ModelMismatch("blocks must be square")
                for a in row:
                    if not ring.contains(a):
                        raise ModelMismatch(f"entry {a!r} does not belong to a {ring.kind} block")

    @classmethod
    def zero_like(cls, d: DecompositionData, field: Field, model: str = "L") -> BlockMatrix:
        rings = model_rings(d, field, model)
        return cls(rings, [linalg.zeros(b.size, b.size, r.zero) for b, r in zip(d.blocks, rings)], model)

    @classmethod
    def identity_like(cls, d: DecompositionData, field: Field, model: str = "L") -> BlockMatrix:
        rings = model_rings(d, field, model)
        return cls(rings, [linalg.identity(b.size, r.zero, r.one) for b, r in zip(d.blocks, rings)], model)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def field(self) -> Field:
        return self.rings[0].field

    def _check(self, other: BlockMatrix):
        if not isinstance(other, BlockMatrix):
            raise TypeError("expected a BlockMatrix")
        if self.rings != other.rings or self.sizes != other.sizes:
            raise ModelMismatch("block matrices of different shapes")

    def __add__(self, other: BlockMatrix) -> BlockMatrix:
        self._check(other)
        return BlockMatrix(self.rings, [linalg.mat_add(a, b) for a, b in zip(self.blocks, other.blocks)], self.model)

    def __sub__(self, other: BlockMatrix) -> BlockMatrix:
        self._check(other)
        return BlockMatrix(self.rings, [linalg.mat_sub(a, b) for a, b in zip(self.blocks, other.blocks)], self.model)

    def __neg__(self) -> BlockMatrix:
        return BlockMatrix(self.rings, [linalg.mat_map(a, lambda x: -x) for a in self.blocks], self.model)

    def __mul__(self, other):
        if not isinstance(other, BlockMatrix):
            c = self.field(other) if not self.field.contains(other) else other
            return BlockMatrix(self.rings, [linalg.mat_map(a, lambda x: x * c) for a in self.blocks], self.model)
        self._check(other)
        return BlockMatrix(
            self.rings,
            [linalg.mat_mul(a, b, r.zero) for a, b, r in zip(self.blocks, other.blocks, self.rings)],
            self.model,
        )

    def identity(self) -> BlockMatrix:
        return BlockMatrix(self.rings, [linalg.identity(len(b), r.zero, r.one) for b, r in zip(self.blocks, self.rings)], self.model)

    def zero(self) -> BlockMatrix:
        return BlockMatrix(self.rings, [linalg.zeros(len(b), len(b), r.zero) for b, r in zip(self.blocks, self.rings)], self.model)

    def star(self) -> BlockMatrix:
        """Block-wise conjugate transpose."""
        return BlockMatrix(
            self.rings,
            [linalg.transpose(linalg.mat_map(a, r.star)) for a, r in zip(self.blocks, self.rings)],
            self.model,
        )

    def to_q(self) -> BlockMatrix:
        """Embed an L-model matrix into the Q-model (K[x,x^-1] inside K(x))."""
        if self.model == "Q":
            return self
        rings = tuple(EntryRing("ratfun", r.field) if r.kind == "laurent" else r for r in self.rings)
        blocks = [
            linalg.mat_map(a, lambda x: x.to_ratfun()) if r.kind == "laurent" else a
            for a, r in zip(self.blocks, self.rings)
        ]
        return BlockMatrix(rings, blocks, "Q")

    def to_l(self) -> BlockMatrix:
        """Back from the Q-model; every cycle-block entry must be a Laurent polynomial."""
        if self.model == "L":
            return self
        rings = tuple(EntryRing("laurent", r.field) if r.kind == "ratfun" else r for r in self.rings)
        blocks = [
            linalg.mat_map(a, lambda x: x.to_laurent()) if r.kind == "ratfun" else a
            for a, r in zip(self.blocks, self.rings)
        ]
        return BlockMatrix(rings, blocks, "L")

    def is_identity(self) -> bool:
        return self == self.identity()

    def __bool__(self):
        return any(x for b in self.blocks for row in b for x in row)

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return self.rings == other.rings and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"BlockMatrix({self.model}, sizes={self.sizes})"

    def __str__(self):
        out = []
        for t, (a, r) in enumerate(zip(self.blocks, self.rings)):
            out.append(f"block {t + 1} ({r.kind}, {len(a)}x{len(a)}):")
            cells = [[str(x) for x in row] for row in a]
            width = max((len(c) for row in cells for c in row), default=1)
            for row in cells:
                out.append("  [" + "  ".join(c.rjust(width) for c in row) + "]")
        return "\n".join(out)

    def to_strings(self) -> List[List[List[str]]]:
        return [[[str(x) for x in row] for row in a] for a in self.blocks]


def model_rings(d: DecompositionData, field: Field, model: str = "L") -> Tuple[EntryRing, ...]:
    if model not in ("L", "Q"):
        raise ModelMismatch(f"unknown model {model!r}")
    poly = "laurent" if model == "L" else "ratfun"
    return tuple(EntryRing(poly if b.kind == "cycle" else "scalar", field) for b in d.blocks)


@dataclass(frozen=True)
class QModel:
    """Descriptor of the matrix model of Q(E)."""

    sizes: Tuple[int, ...]
    kinds: Tuple[str, ...]
    shape: str


def q_model(d: DecompositionData) -> QModel:
    return QModel(tuple(b.size for b in d.blocks), tuple(b.kind for b in d.blocks), d.shape("Q"))


def star_matrix(m: BlockMatrix) -> BlockMatrix:
    return m.star()


def q_star(m: BlockMatrix) -> BlockMatrix:
    """The involution of Q(E): conjugate transpose with ``x -> 1/x`` on K(x)."""
    if m.model != "Q":
        raise ModelMismatch("q_star expects a Q-model matrix")
    return m.star()


# -- phi and its inverse ------------------------------------------------------


class _Expander:
    """Expansion of a vertex into paths that stop at a sink or a base vertex."""

    def __init__(self, d: DecompositionData):
        self.d = d
        self.memo: Dict[str, List[Path]] = {}

    def __call__(self, u: str) -> List[Path]:
        if u in self.memo:
            return self.memo[u]
        g = self.d.graph
        if u in self.d.terminal_block:
            out = [Path(u)]
        else:
            out = []
            for e in g.out_edges[u]:
                head = g.edge_path(e)
                out.extend(head + tail for tail in self(g.r(e)))
        self.memo[u] = out
        return out


def _strip_cycle(p: Path, cyc: Path) -> Tuple[Path, int]:
    n, z = len(cyc), 0
    while len(p) >= n and p.edges[len(p) - n:] == cyc.edges:
        p = Path(p.start, p.edges[: len(p) - n], cyc.start)
        z += 1
    return p, z


def basis_coordinates(a: Element, d: DecompositionData) -> Dict[Tuple[int, int, int, int], object]:
    """Coordinates of ``a`` in the basis ``{p_r c_t^z p_s*}``: ``(t, r, s, z) -> coefficient``.

    Each monomial ``p q*`` is first expanded with (CK2) at its range vertex
    until every branch reaches a sink or the base of a cycle (no-exit makes
    the expansion along a cycle unique, so this terminates); then each path is
    factored as ``p_r c^a`` and ``c^a (c*)^b`` collapses to ``c^(a-b)``.
    """
    if a.graph != d.graph:
        raise ModelMismatch("element and decomposition come from different graphs")
    expand = _Expander(d)
    out: Dict[Tuple[int, int, int, int], object] = {}
    for (p, q), c in a.terms.items():
        for sigma in expand(p.end):
            t = d.terminal_block[sigma.end]
            blk = d.blocks[t]
            pp, qq = p + sigma, q + sigma
            za = zb = 0
            if blk.kind == "cycle":
                pp, za = _strip_cycle(pp, blk.cycle)
                qq, zb = _strip_cycle(qq, blk.cycle)
            key = (t, blk.index[pp], blk.index[qq], za - zb)
            out[key] = out[key] + c if key in out else c
    return {k: v for k, v in out.items() if v}


def phi(a: Element, d: DecompositionData) -> BlockMatrix:
    """Image of ``a`` in the L-model: ``p_r c_t^z p_s* -> x^z e_rs``."""
    field = a.field
    rings = model_rings(d, field, "L")
    blocks = [[[r.zero] * b.size for _ in range(b.size)] for b, r in zip(d.blocks, rings)]
    for (t, i, j, z), c in basis_coordinates(a, d).items():
        term = LaurentPoly(field, {z: c}) if rings[t].kind == "laurent" else c
        blocks[t][i][j] = blocks[t][i][j] + term
    return BlockMatrix(rings, blocks, "L")


def phi_inv(m: BlockMatrix, d: DecompositionData, alg: Optional[LeavittPathAlgebra] = None) -> Element:
    """Inverse of :func:`phi`; only L-model matrices are accepted."""
    if m.model != "L" or any(r.kind == "ratfun" for r in m.rings):
        raise ModelMismatch("phi_inv needs Laurent/scalar entries (L-model)")
    if m.sizes != tuple(b.size for b in d.blocks):
        raise ModelMismatch("matrix shape does not match the decomposition")
    alg = alg or LeavittPathAlgebra(d.graph, m.field)
    if alg.field != m.field:
        raise FieldMismatch(f"{alg.field} vs {m.field}")
    raw: Dict[Monomial, object] = {}

    def add(mono, c):
        raw[mono] = raw[mono] + c if mono in raw else c

    for blk, ring, a in zip(d.blocks, m.rings, m.blocks):
        for i, row in enumerate(a):
            for j, entry in enumerate(row):
                if not entry:
                    continue
                pr, ps = blk.paths[i], blk.paths[j]
                if ring.kind == "scalar":
                    add((pr, ps), entry)
                    continue
                for z, c in entry.terms.items():
                    cz = _cycle_power(blk.cycle, abs(z))
                    add((pr + cz, ps) if z >= 0 else (pr, ps + cz), c)
    return alg.element(raw)


def _cycle_power(cyc: Path, z: int) -> Path:
    return Path(cyc.start, cyc.edges * z, cyc.start)


def cycle_generator(d: DecompositionData, t: int, alg: LeavittPathAlgebra) -> Element:
    """The cycle of block ``t`` as an element of L(E)."""
    return alg.path(d.blocks[t].cycle)


# -- random block matrices ---------------------------------------------------------


def random_block_matrix(
    d: DecompositionData, field: Field, rng: Random, model: str = "Q", *, density: float = 0.6, degree: int = 1
) -> BlockMatrix:
    from .polys import random_laurent

    rings = model_rings(d, field, model)
    blocks = []
    for b, r in zip(d.blocks, rings):
        rows = []
        for _ in range(b.size):
            row = []
            for _ in range(b.size):
                if rng.random() > density:
                    row.append(r.zero)
                elif r.kind == "scalar":
                    row.append(field.random(rng))
                elif r.kind == "laurent":
                    row.append(random_laurent(field, rng, span=degree + 1))
                else:
                    row.append(random_ratfun(field, rng, degree=degree))
            rows.append(row)
        blocks.append(rows)
    return BlockMatrix(rings, blocks, model)


# -- regularity witnesses -------------------------------------------------------


def _check_q(m: BlockMatrix):
    if m.model != "Q":
        raise ModelMismatch("expected a Q-model matrix")


def unit_regular_witness(a: BlockMatrix) -> BlockMatrix:
    """A unit ``u`` with ``a u a = a``.

    Per block, ``S a T = diag(I_r, 0)`` with ``S, T`` invertible, so
    ``a = S^-1 diag(I_r, 0) T^-1`` and ``u = T S`` works.
    """
    _check_q(a)
    us = []
    for blk, r in zip(a.blocks, a.rings):
        s, t, _ = linalg.rank_factorization(blk, r.zero, r.one)
        us.append(linalg.mat_mul(t, s, r.zero))
    u = BlockMatrix(a.rings, us, a.model)
    if a * u * a != a:
        raise AssertionError("unit-regular witness failed a u a = a")
    if not is_invertible(u):
        raise AssertionError("unit-regular witness is not invertible")
    return u


def _exact_div(a: Poly, b: Poly) -> Poly:
    q, rem = a.divmod(b)
    if rem:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return q


def _cleared_rows(block, field: Field) -> List[List[Poly]]:
    """Scale each row of a K(x) matrix by the lcm of its denominators."""
    out = []
    for row in block:
        lcm = Poly.constant(field, 1)
        for a in row:
            if a.den.degree > 0:
                lcm = lcm * a.den.divmod(lcm.gcd(a.den))[0]
        out.append([a.num * lcm.divmod(a.den)[0] for a in row])
    return out


def _block_rank(block, ring: EntryRing) -> int:
    if ring.kind == "scalar":
        return linalg.rank(block, ring.zero, ring.one)
    if ring.kind == "laurent":
        block = [[a.to_ratfun() for a in row] for row in block]
    one = Poly.constant(ring.field, 1)
    return linalg.fraction_free_rank(_cleared_rows(block, ring.field), _exact_div, one)


def is_invertible(m: BlockMatrix) -> bool:
    """Invertibility over the entry field (K or K(x)), block by block."""
    return all(_block_rank(b, r) == len(b) for b, r in zip(m.blocks, m.rings))


def block_inverse(m: BlockMatrix) -> BlockMatrix:
    return BlockMatrix(m.rings, [linalg.inverse(b, r.zero, r.one) for b, r in zip(m.blocks, m.rings)], m.model)


def block_det(m: BlockMatrix) -> list:
    return [linalg.det(b, r.zero, r.one) for b, r in zip(m.blocks, m.rings)]


def block_ranks(m: BlockMatrix) -> Tuple[int, ...]:
    """Per-block rank over K(x) (cycle blocks) or K (sink blocks)."""
    return tuple(_block_rank(b, r) for b, r in zip(m.blocks, m.rings))


def projection_for_idempotent(e: BlockMatrix) -> BlockMatrix:
    """A projection ``p`` (``p^2 = p = p*``) with ``p e = e`` and ``e p = p``.

    Uses ``p = e e* z^-1`` with ``z = 1 + (e - e*)*(e - e*)``.  ``z`` is
    invertible whenever the involution is proper, which holds for a positive
    definite coefficient field; otherwise :class:`NotInvertible` may be raised.
    """
    _check_q(e)
    if e * e != e:
        raise NotIdempotent("input is not idempotent")
    es = e.star()
    diff = e - es
    z = e.identity() + diff.star() * diff
    try:
        zinv = block_inverse(z)
    except linalg.NotInvertible as exc:
        raise NotInvertible(f"1 + (e - e*)*(e - e*) is singular: {exc}") from exc
    p = e * es * zinv
    if not (p * p == p and p.star() == p and p * e == e and e * p == p):
        raise AssertionError("projection construction failed its postconditions")
    return p


@dataclass
class SymmetryReport:
    tested: int
    counterexample: Optional[BlockMatrix] = None
    source: str = ""

    @property
    def symmetric_on_samples(self) -> bool:
        return self.counterexample is None

    def describe(self) -> str:
        if self.counterexample is None:
            return f"no counterexample found in {self.tested} samples"
        return f"1 + x* x is not invertible for x = {self.source}"


def symmetry_check(d: DecompositionData, field: Field, samples: int = 20, seed: int = 0) -> SymmetryReport:
    """Look for ``x`` in Q(E) with ``1 + x* x`` singular.

    The images of the cycle generators are always tried first, then
    ``samples`` random elements.
    """
    alg = LeavittPathAlgebra(d.graph, field)
    candidates: List[Tuple[str, BlockMatrix]] = []
    for t, b in enumerate(d.blocks):
        if b.kind == "cycle":
            candidates.append((f"phi({b.cycle})", phi(cycle_generator(d, t, alg), d).to_q()))
    rng = Random(seed)
    for i in range(samples):
        candidates.append((f"random sample {i}", random_block_matrix(d, field, rng, "Q")))
    tested = 0
    for name, x in candidates:
        tested += 1
        m = x.identity() + x.star() * x
        if not is_invertible(m):
            return SymmetryReport(tested, x, name)
    return SymmetryReport(tested)


def directly_finite_check(x: BlockMatrix, y: BlockMatrix) -> bool:
    """Given ``x y = 1``, report whether ``y x = 1``."""
    if not (x * y).is_identity():
        raise ValueError("precondition x y = 1 does not hold")
    return (y * x).is_identity()


# -- grading ----------------------------------------------------------------


def basis_degree(d: DecompositionData, t: int, r: int, s: int, z: int) -> int:
    b = d.blocks[t]
    deg = len(b.paths[r]) - len(b.paths[s])
    if b.kind == "cycle":
        deg += z * len(b.cycle)
    return deg


def graded_dim(d: DecompositionData, n: int) -> int:
    """Dimension of the degree-``n`` component of L(E)."""
    total = 0
    for b in d.blocks:
        for pr in b.paths:
            for ps in b.paths:
                diff = n - (len(pr) - len(ps))
                if b.kind == "sink":
                    total += diff == 0
                else:
                    total += diff % len(b.cycle) == 0
    return total


# -- isomorphism ------------------------------------------------------------


@dataclass
class IsoResult:
    isomorphic: bool
    cycle_matching: List[Tuple[int, int]] = dc_field(default_factory=list)
    sink_matching: List[Tuple[int, int]] = dc_field(default_factory=list)
    reason: str = ""
    invariants: Tuple[dict, dict] = dc_field(default_factory=lambda: ({}, {}))

    def __bool__(self):
        return self.isomorphic

    def to_dict(self) -> dict:
        return {
            "isomorphic": self.isomorphic,
            "certificate": {
                "cycle_matching": [list(p) for p in self.cycle_matching],
                "sink_matching": [list(p) for p in self.sink_matching],
                "reason": self.reason,
            },
            "invariants": list(self.invariants),
        }


def _invariants(d: DecompositionData) -> dict:
    return {"l": d.l, "k": d.k, "m": sorted(d.m), "n": sorted(d.n)}


def _match(sizes1: List[int], sizes2: List[int]) -> List[Tuple[int, int]]:
    o1 = sorted(range(len(sizes1)), key=lambda i: (sizes1[i], i))
    o2 = sorted(range(len(sizes2)), key=lambda i: (sizes2[i], i))
    return list(zip(o1, o2))


def iso_decide(g1: Graph, g2: Graph) -> IsoResult:
    """Decide whether L(g1) and L(g2) are isomorphic (for finite no-exit graphs).

    They are iff the numbers of cycles and sinks agree and the multisets of
    block sizes agree.  The certificate matches blocks in sorted order.
    """
    d1, d2 = decompose(g1), decompose(g2)
    inv = (_invariants(d1), _invariants(d2))
    for key, label in (("l", "number of cycle blocks"), ("k", "number of sink blocks"),
                       ("m", "cycle block sizes"), ("n", "sink block sizes")):
        if inv[0][key] != inv[1][key]:
            return IsoResult(False, reason=f"{label} differ: {inv[0][key]} vs {inv[1][key]}", invariants=inv)
    return IsoResult(True, _match(d1.m, d2.m), _match(d1.n, d2.n), "all invariants agree", inv)


def permute_blocks(m: BlockMatrix, d_from: DecompositionData, d_to: DecompositionData, result: IsoResult) -> BlockMatrix:
    """Move the blocks of an L(g1)-model matrix to the matching blocks of the L(g2) model."""
    cyc_from = [t for t, b in enumerate(d_from.blocks) if b.kind == "cycle"]
    cyc_to = [t for t, b in enumerate(d_to.blocks) if b.kind == "cycle"]
    snk_from = [t for t, b in enumerate(d_from.blocks) if b.kind == "sink"]
    snk_to = [t for t, b in enumerate(d_to.blocks) if b.kind == "sink"]
    target: Dict[int, int] = {}
    for i, j in result.cycle_matching:
        target[cyc_to[j]] = cyc_from[i]
    for i, j in result.sink_matching:
        target[snk_to[j]] = snk_from[i]
    order = [target[t] for t in range(len(d_to.blocks))]
    return BlockMatrix([m.rings[t] for t in order], [m.blocks[t] for t in order], m.model)


def transport(a: Element, d_from: DecompositionData, d_to: DecompositionData, result: IsoResult,
              alg_to: Optional[LeavittPathAlgebra] = None) -> Element:
    """The *-isomorphism ``phi_to^-1 . (block permutation) . phi_from`` applied to ``a``."""
    if not result.isomorphic:
        raise ValueError("graphs are not isomorphic")
    return phi_inv(permute_blocks(phi(a, d_from), d_from, d_to, result), d_to, alg_to)


def basis_elements(d: DecompositionData, z_bound: int) -> List[Tuple[int, int, int, int]]:
    """Index tuples ``(t, r, s, z)`` of the basis with ``|z| <= z_bound`` (``z = 0`` for sinks)."""
    out = []
    for t, b in enumerate(d.blocks):
        zs = range(-z_bound, z_bound + 1) if b.kind == "cycle" else (0,)
        for r, s, z in product(range(b.size), range(b.size), zs):
            out.append((t, r, s, z))
    return out
