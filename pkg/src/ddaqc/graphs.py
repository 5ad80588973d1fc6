"""Interaction-graph audits: degree, planarity, bipartiteness, and the
Hadamard transform that turns matched (XX/ZZ) couplings into unmatched ones.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, replace
from typing import Any, Hashable, Iterable

import networkx as nx

from .codes import StabilizerCode, label_of, reduce_logical
from .errors import ParameterError, UnsupportedTermError
from .hamiltonians import PauliHamiltonian, encode_hamiltonian, penalty_hamiltonian
from .pauli import PauliString, format_pauli, multiply, weight


class InteractionGraph:
    """Qubits joined by the two-body operators acting on them.

    Each edge carries a Counter of interaction types oriented from the lower to
    the higher qubit index (``"XZ"`` means X on the lower qubit).
    """

    def __init__(self, graph: nx.Graph | None = None, names: dict[int, str] | None = None):
        self.graph = graph if graph is not None else nx.Graph()
        self.names = names or {}

    def add_operator(self, op: PauliString) -> None:
        support = op.support
        if len(support) > 2:
            raise UnsupportedTermError(f"term {format_pauli(op)} has weight {len(support)} > 2")
        for q in support:
            self.graph.add_node(q)
        if len(support) == 2:
            u, v = support
            if not self.graph.has_edge(u, v):
                self.graph.add_edge(u, v, types=Counter())
            self.graph.edges[u, v]["types"][op.char(u) + op.char(v)] += 1

    @property
    def vertices(self) -> list[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.graph.edges)

    def degree(self, v: Hashable) -> int:
        return self.graph.degree(v)

    def edge_types(self, u: int, v: int) -> Counter:
        return self.graph.edges[u, v]["types"]

    def all_edge_types(self) -> set[str]:
        return {t for _, _, d in self.graph.edges(data=True) for t in d["types"]}

    def name(self, v: int) -> str:
        return self.names.get(v, str(v))


def interaction_graph(h: PauliHamiltonian | Iterable[PauliString], names: dict[int, str] | None = None) -> InteractionGraph:
    ops = h.operators if isinstance(h, PauliHamiltonian) else list(h)
    g = InteractionGraph(names=names)
    for op in ops:
        g.add_operator(op)
    return g


def _names_for(c: StabilizerCode) -> dict[int, str]:
    if c.family != "6k2k2":
        return {q: str(q + 1) for q in range(c.n)}
    return {q: f"({label_of(q).logical_index},{label_of(q).role})" for q in range(c.n)}


def logical_graph(c: StabilizerCode, include_pairs: bool = False, include_generators: bool = False) -> InteractionGraph:
    """Graph of the single-qubit logicals, optionally with reduced pair logicals
    ``X_iX_j``/``Z_iZ_j`` and the weight-two generators."""
    ops = [*c.logical_x, *c.logical_z]
    if include_pairs:
        for lops in (c.logical_x, c.logical_z):
            for a, b in itertools.combinations(lops, 2):
                ops.append(reduce_logical(c, multiply(a, b)))
    if include_generators:
        ops += [g for g in c.generators if weight(g) <= 2]
    return interaction_graph(ops, names=_names_for(c))


def encoded_interaction_graph(
    h: PauliHamiltonian,
    c: StabilizerCode,
    include_single_body: bool = True,
    include_penalties: bool = False,
) -> InteractionGraph:
    """Physical interaction graph of ``h`` encoded in ``c``.

    ``include_single_body`` adds every single-qubit logical of ``c`` (the
    driver terms of an anneal act on each logical qubit);
    ``include_penalties`` adds the weight-two stabilizer generators.
    """
    ops = encode_hamiltonian(h, c).operators
    if include_single_body:
        ops += [*c.logical_x, *c.logical_z]
    if include_penalties:
        ops += penalty_hamiltonian(c).operators
    return interaction_graph(ops, names=_names_for(c))


def max_degree(g: InteractionGraph) -> int:
    return max((d for _, d in g.graph.degree), default=0)


@dataclass
class PlanarityResult:
    planar: bool
    edge_bound_ok: bool
    embedding: dict[Any, list[Any]] | None = None
    kuratowski_edges: list[tuple[Any, Any]] | None = None

    def __bool__(self) -> bool:
        return self.planar

    def witness(self) -> dict[str, Any]:
        if self.planar:
            return {"embedding": {str(v): [str(u) for u in nbrs] for v, nbrs in self.embedding.items()}}
        return {"kuratowski_subgraph": [[str(u), str(v)] for u, v in self.kuratowski_edges]}


def is_planar(g: InteractionGraph) -> PlanarityResult:
    """Left-right planarity test with an embedding or Kuratowski-subgraph witness."""
    nv, ne = g.graph.number_of_nodes(), g.graph.number_of_edges()
    edge_bound_ok = nv < 3 or ne <= 3 * nv - 6
    planar, cert = nx.check_planarity(g.graph, counterexample=True)
    if planar:
        emb = {v: list(cert.neighbors_cw_order(v)) for v in cert.nodes}
        return PlanarityResult(True, edge_bound_ok, embedding=emb)
    return PlanarityResult(False, edge_bound_ok, kuratowski_edges=sorted(tuple(sorted(e)) for e in cert.edges))


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset
    side_b: frozenset


@dataclass(frozen=True)
class OddCycle:
    cycle: tuple

    def __bool__(self) -> bool:
        return False


def bipartition(g: InteractionGraph) -> Bipartition | OddCycle:
    """Two-colour by breadth-first layering, or return an odd cycle."""
    colour: dict[Any, int] = {}
    parent: dict[Any, Any] = {}
    for root in sorted(g.graph.nodes):
        if root in colour:
            continue
        colour[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in sorted(g.graph.neighbors(u)):
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    parent[v] = u
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return OddCycle(_odd_cycle(parent, u, v))
    a = frozenset(v for v, c in colour.items() if c == 0)
    b = frozenset(v for v, c in colour.items() if c == 1)
    return Bipartition(a, b)


def _odd_cycle(parent: dict, u, v) -> tuple:
    def path(w):
        out = []
        while w is not None:
            out.append(w)
            w = parent[w]
        return out

    pu, pv = path(u), path(v)
    common = set(pu) & set(pv)
    pu = pu[: next(i for i, w in enumerate(pu) if w in common) + 1]
    pv = pv[: next(i for i, w in enumerate(pv) if w in common)]
    # u -> ... -> common ancestor -> ... -> v, closed by the edge (v, u)
    return tuple(pu + pv[::-1])


def full_bipartition(g: InteractionGraph, n: int) -> Bipartition | OddCycle:
    """Bipartition covering qubits ``0..n-1``; isolated qubits go to side A."""
    b = bipartition(g)
    if isinstance(b, OddCycle):
        return b
    missing = frozenset(range(n)) - b.side_a - b.side_b
    return Bipartition(b.side_a | missing, b.side_b)


def _swap_xz(p: PauliString, mask: int) -> PauliString:
    x, z = p.x, p.z
    nx_ = (x & ~mask) | (z & mask)
    nz = (z & ~mask) | (x & mask)
    # H Y H = -Y: one sign per swapped qubit carrying both X and Z
    return PauliString(p.n, nx_, nz, p.phase + 2 * bin(x & z & mask).count("1"))


def hadamard_transform(c: StabilizerCode, b: Bipartition) -> StabilizerCode:
    """Conjugate every code operator by Hadamards on the qubits of ``side_b``."""
    a_side, b_side = set(b.side_a), set(b.side_b)
    if a_side & b_side or a_side | b_side != set(range(c.n)):
        raise ParameterError("bipartition must split qubits 0..n-1 into two disjoint sides")
    mask = 0
    for q in b_side:
        mask |= 1 << q

    def tr(ops):
        return tuple(_swap_xz(p, mask) for p in ops)

    gens, lx, lz = tr(c.generators), tr(c.logical_x), tr(c.logical_z)
    css = all(p.x == 0 or p.z == 0 for p in gens)
    unmatched = any(
        weight(p) == 2 and len({p.char(q) for q in p.support}) == 2
        for p in (*gens, *lx, *lz)
    )
    return replace(c, generators=gens, logical_x=lx, logical_z=lz, css=css and not unmatched)


# ---------------------------------------------------------------------------
# reports


def graph_report(g: InteractionGraph, with_witness: bool = True) -> dict[str, Any]:
    pl = is_planar(g)
    bp = bipartition(g)
    rep: dict[str, Any] = {
        "vertices": g.graph.number_of_nodes(),
        "edges": g.graph.number_of_edges(),
        "max_degree": max_degree(g),
        "planar": pl.planar,
        "bipartite": isinstance(bp, Bipartition),
        "edge_types": sorted(g.all_edge_types()),
    }
    if with_witness:
        rep["witness"] = {
            "planarity": pl.witness(),
            "bipartition": (
                {"side_a": sorted(map(g.name, bp.side_a)), "side_b": sorted(map(g.name, bp.side_b))}
                if isinstance(bp, Bipartition)
                else {"odd_cycle": [g.name(v) for v in bp.cycle]}
            ),
        }
    return rep


def to_dot(g: InteractionGraph, name: str = "interactions") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f'  {v} [label="{g.name(v)}"];')
    for u, v in g.edges:
        types = ",".join(f"{t}" if n == 1 else f"{t}x{n}" for t, n in sorted(g.edge_types(u, v).items()))
        lines.append(f'  {u} -- {v} [label="{types}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
