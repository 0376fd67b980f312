"""Problem instances: parsing, validation, and the derived message graph.

An instance describes n receivers, each knowing its own message x_i a
priori.  An arc (i, j) means receiver j wants message x_i.  Messages
are q_i bits long.  Each of the S senders owns a subset of the
messages; together the senders own all of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class ParseError(ValueError):
    """Raised when an instance or code document is structurally bad."""


@dataclass(frozen=True)
class Instance:
    n: int
    q: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]
    senders: tuple[tuple[int, ...], ...]
    # Ingestion notes (deduplication etc.); not part of instance identity.
    notes: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def wants(self, receiver: int) -> list[int]:
        """Messages wanted by a receiver, ascending."""
        return sorted(i for (i, j) in self.arcs if j == receiver)


@dataclass(frozen=True)
class MessageGraph:
    """Undirected graph with an edge {i, j} when some sender owns both."""

    n: int
    edges: frozenset[tuple[int, int]]  # stored as (min, max) pairs

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for (a, b) in self.edges:
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return out

    def neighbors_of_set(self, vs: frozenset[int] | set[int]) -> set[int]:
        """Vertices outside vs adjacent to some member of vs."""
        out: set[int] = set()
        for v in vs:
            out |= self.neighbors(v)
        return out - set(vs)

    def connected_within(self, vs: frozenset[int] | set[int]) -> bool:
        """Is the subgraph induced on vs connected (edges inside vs only)?"""
        vs = set(vs)
        if not vs:
            return True
        start = min(vs)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w in vs and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == vs

    def components(self) -> list[frozenset[int]]:
        """Connected components over vertices 1..n, ordered by smallest member."""
        seen: set[int] = set()
        comps = []
        for v in range(1, self.n + 1):
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                u = stack.pop()
                for w in self.neighbors(u):
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]
    notes: tuple[str, ...] = ()


_REQUIRED_FIELDS = ("n", "q", "arcs", "senders")


def _require_int(value, what: str) -> int:
    # bool is an int subclass; JSON true/false must not pass as numbers
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{what} must be an integer, got {value!r}")
    return value


def parse_instance(text: str) -> Instance:
    """Decode an instance document.  Syntax only; semantics live in validate().

    Duplicate arcs, duplicate senders, and repeated members within one
    sender are dropped, each leaving a note on the returned Instance.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ParseError(f"instance document must be a JSON object, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(_REQUIRED_FIELDS))
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(unknown)}")
    missing = [f for f in _REQUIRED_FIELDS if f not in doc]
    if missing:
        raise ParseError(f"missing required field(s): {', '.join(missing)}")

    n = _require_int(doc["n"], "n")
    if not isinstance(doc["q"], list):
        raise ParseError("q must be an array")
    q = tuple(_require_int(x, f"q[{k}]") for k, x in enumerate(doc["q"]))

    if not isinstance(doc["arcs"], list):
        raise ParseError("arcs must be an array")
    notes: list[str] = []
    arcs: list[tuple[int, int]] = []
    seen_arcs: set[tuple[int, int]] = set()
    for k, pair in enumerate(doc["arcs"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"arcs[{k}] must be a 2-element array")
        arc = (_require_int(pair[0], f"arcs[{k}][0]"), _require_int(pair[1], f"arcs[{k}][1]"))
        if arc in seen_arcs:
            notes.append(f"duplicate arc [{arc[0]}, {arc[1]}] removed")
            continue
        seen_arcs.add(arc)
        arcs.append(arc)

    if not isinstance(doc["senders"], list):
        raise ParseError("senders must be an array")
    senders: list[tuple[int, ...]] = []
    seen_senders: set[tuple[int, ...]] = set()
    for k, members in enumerate(doc["senders"]):
        if not isinstance(members, list):
            raise ParseError(f"senders[{k}] must be an array")
        raw = [_require_int(m, f"senders[{k}]") for m in members]
        uniq = sorted(set(raw))
        if len(uniq) != len(raw):
            notes.append(f"repeated member(s) in sender {k + 1} removed")
        key = tuple(uniq)
        if key in seen_senders and key:
            notes.append(f"duplicate sender {list(key)} removed (was position {k + 1})")
            continue
        seen_senders.add(key)
        senders.append(key)

    return Instance(n=n, q=q, arcs=tuple(sorted(arcs)), senders=tuple(senders),
                    notes=tuple(notes))


def serialize_instance(inst: Instance) -> str:
    doc = {
        "n": inst.n,
        "q": list(inst.q),
        "arcs": [list(a) for a in sorted(inst.arcs)],
        "senders": [list(s) for s in inst.senders],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_instance(path: str) -> Instance:
    with open(path) as f:
        return parse_instance(f.read())


def validate(inst: Instance) -> ValidationReport:
    """Check all instance invariants.  Findings are data, not exceptions."""
    v: list[str] = []
    if inst.n < 1:
        v.append(f"n must be at least 1, got {inst.n}")
    if len(inst.q) != inst.n:
        v.append(f"q has {len(inst.q)} entries, expected n = {inst.n}")
    for k, qi in enumerate(inst.q):
        if qi < 1:
            v.append(f"q[{k}] = {qi} must be positive")
    for (i, j) in inst.arcs:
        if i == j:
            v.append(f"self-arc [{i}, {j}] not allowed")
        for e in (i, j):
            if not 1 <= e <= inst.n:
                v.append(f"arc [{i}, {j}] endpoint {e} out of range 1..{inst.n}")
    if not inst.senders:
        v.append("at least one sender required")
    owned: set[int] = set()
    for k, s in enumerate(inst.senders):
        if not s:
            v.append(f"sender {k + 1} is empty")
        for m in s:
            if not 1 <= m <= inst.n:
                v.append(f"sender {k + 1} member {m} out of range 1..{inst.n}")
            else:
                owned.add(m)
    for m in range(1, inst.n + 1):
        if m not in owned:
            v.append(f"message {m} unowned by any sender")
    return ValidationReport(ok=not v, violations=tuple(v), notes=inst.notes)


def derive_message_graph(inst: Instance) -> MessageGraph:
    """Edge {i, j} iff messages x_i and x_j are known to the same sender."""
    edges: set[tuple[int, int]] = set()
    for s in inst.senders:
        for a in range(len(s)):
            for b in range(a + 1, len(s)):
                edges.add((s[a], s[b]))
    return MessageGraph(n=inst.n, edges=frozenset(edges))
