"""Linear index codes over GF(2): representation, verification, oracle.

Every transmitted symbol is a single XOR of message bits, owned by one
sender and supported only on that sender's messages.  Message bit (j, b)
maps to one coordinate of a bit-packed integer vector; all rank work is
integer XOR elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .instance import Instance, ParseError


class MalformedCodeError(ValueError):
    """Code is structurally inconsistent with the instance (for example a
    term outside the owning sender's message set).  Distinct from a code
    that is well-formed but fails to decode."""


class CapExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class CodeSymbol:
    sender: int  # 1-based index into the instance's sender list
    terms: tuple[tuple[int, int], ...]  # sorted (message, bit) pairs, 1-based


@dataclass(frozen=True)
class LinearIndexCode:
    symbols: tuple[CodeSymbol, ...]

    def __len__(self) -> int:
        return len(self.symbols)


def symbol(sender: int, *terms: tuple[int, int]) -> CodeSymbol:
    return CodeSymbol(sender=sender, terms=tuple(sorted(terms)))


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    failures: tuple[tuple[int, tuple[int, int]], ...]  # (receiver, wanted (msg, bit))


def parse_code(text: str) -> LinearIndexCode:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(doc, list):
        raise ParseError("code document must be a JSON array of symbols")
    symbols = []
    for k, sym in enumerate(doc):
        if not isinstance(sym, dict) or set(sym) != {"sender", "terms"}:
            raise ParseError(f"symbol {k} must be an object with fields sender, terms")
        sender = sym["sender"]
        if isinstance(sender, bool) or not isinstance(sender, int):
            raise ParseError(f"symbol {k} sender must be an integer")
        if not isinstance(sym["terms"], list) or not sym["terms"]:
            raise ParseError(f"symbol {k} terms must be a nonempty array")
        terms = []
        for t in sym["terms"]:
            if (not isinstance(t, list) or len(t) != 2
                    or any(isinstance(x, bool) or not isinstance(x, int) for x in t)):
                raise ParseError(f"symbol {k} terms must be [message, bit] integer pairs")
            terms.append((t[0], t[1]))
        symbols.append(CodeSymbol(sender=sender, terms=tuple(sorted(set(terms)))))
    return LinearIndexCode(symbols=tuple(symbols))


def serialize_code(code: LinearIndexCode) -> str:
    doc = [{"sender": s.sender, "terms": [list(t) for t in s.terms]} for s in code.symbols]
    return json.dumps(doc, indent=2) + "\n"


def load_code(path: str) -> LinearIndexCode:
    with open(path) as f:
        return parse_code(f.read())


def bit_layout(inst: Instance) -> tuple[tuple[int, ...], int]:
    """Coordinate offsets per message and the total bit count B."""
    offsets = []
    total = 0
    for qi in inst.q:
        offsets.append(total)
        total += qi
    return tuple(offsets), total


def _coord(offsets: tuple[int, ...], msg: int, bit: int) -> int:
    return offsets[msg - 1] + (bit - 1)


def check_code(inst: Instance, code: LinearIndexCode) -> None:
    """Raise MalformedCodeError unless the code is well-formed for inst."""
    for k, sym in enumerate(code.symbols):
        if not 1 <= sym.sender <= len(inst.senders):
            raise MalformedCodeError(f"symbol {k + 1}: sender {sym.sender} does not exist")
        owned = set(inst.senders[sym.sender - 1])
        if not sym.terms:
            raise MalformedCodeError(f"symbol {k + 1}: empty term list")
        for (msg, bit) in sym.terms:
            if not 1 <= msg <= inst.n:
                raise MalformedCodeError(f"symbol {k + 1}: message {msg} out of range")
            if msg not in owned:
                raise MalformedCodeError(
                    f"symbol {k + 1}: message {msg} not in sender {sym.sender}'s set")
            if not 1 <= bit <= inst.q[msg - 1]:
                raise MalformedCodeError(
                    f"symbol {k + 1}: bit {bit} out of range for message {msg}")


def symbol_vectors(inst: Instance, code: LinearIndexCode) -> list[int]:
    offsets, _ = bit_layout(inst)
    vecs = []
    for sym in code.symbols:
        v = 0
        for (msg, bit) in sym.terms:
            v ^= 1 << _coord(offsets, msg, bit)
        vecs.append(v)
    return vecs


class Gf2Basis:
    """Incremental GF(2) row basis in fully reduced form."""

    def __init__(self, rows=()):
        self.rows: dict[int, int] = {}  # pivot bit position -> reduced row
        for r in rows:
            self.add(r)

    def _reduce(self, vec: int) -> int:
        for pivot, row in self.rows.items():
            if (vec >> pivot) & 1:
                vec ^= row
        return vec

    def add(self, vec: int) -> bool:
        """Insert vec; True if it was independent of the current basis."""
        vec = self._reduce(vec)
        if vec == 0:
            return False
        pivot = vec.bit_length() - 1
        for p in list(self.rows):
            if (self.rows[p] >> pivot) & 1:
                self.rows[p] ^= vec
        self.rows[pivot] = vec
        return True

    def contains(self, vec: int) -> bool:
        return self._reduce(vec) == 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def snapshot(self) -> tuple[int, ...]:
        """Canonical (RREF) row tuple; equal spans give equal snapshots."""
        return tuple(sorted(self.rows.values()))

    def copy(self) -> Gf2Basis:
        b = Gf2Basis()
        b.rows = dict(self.rows)
        return b


def _receiver_units(inst: Instance, offsets: tuple[int, ...], r: int) -> list[int]:
    return [1 << _coord(offsets, r, b) for b in range(1, inst.q[r - 1] + 1)]


def _wanted_bits(inst: Instance, r: int) -> list[tuple[int, int]]:
    return [(j, b) for j in inst.wants(r) for b in range(1, inst.q[j - 1] + 1)]


def verify_linear(inst: Instance, code: LinearIndexCode) -> VerifyReport:
    """Rank criterion: receiver r decodes bit (j, b) iff its unit vector
    lies in the span of the code symbols plus r's own message bits."""
    check_code(inst, code)
    offsets, _ = bit_layout(inst)
    vecs = symbol_vectors(inst, code)
    failures = []
    for r in range(1, inst.n + 1):
        wanted = _wanted_bits(inst, r)
        if not wanted:
            continue
        basis = Gf2Basis(vecs + _receiver_units(inst, offsets, r))
        for (j, b) in wanted:
            if not basis.contains(1 << _coord(offsets, j, b)):
                failures.append((r, (j, b)))
    return VerifyReport(valid=not failures, failures=tuple(failures))


def verify_exhaustive(inst: Instance, code: LinearIndexCode, cap: int = 20) -> VerifyReport:
    """Decodability by definition: enumerate every message assignment and
    demand each wanted bit be a function of (codeword, receiver's own bits).

    Exponential in the total bit count B; refuses to run past the cap.
    """
    check_code(inst, code)
    offsets, total = bit_layout(inst)
    if total > cap:
        raise CapExceededError(f"total bits {total} exceeds cap {cap}")
    vecs = symbol_vectors(inst, code)
    own_masks = []
    for r in range(1, inst.n + 1):
        m = 0
        for u in _receiver_units(inst, offsets, r):
            m |= u
        own_masks.append(m)

    codewords = []
    for x in range(1 << total):
        w = 0
        for k, v in enumerate(vecs):
            w |= (bin(x & v).count("1") & 1) << k
        codewords.append(w)

    failures = []
    for r in range(1, inst.n + 1):
        wanted = _wanted_bits(inst, r)
        if not wanted:
            continue
        own = own_masks[r - 1]
        for (j, b) in wanted:
            probe = 1 << _coord(offsets, j, b)
            seen: dict[tuple[int, int], int] = {}
            ok = True
            for x in range(1 << total):
                key = (codewords[x], x & own)
                val = 1 if x & probe else 0
                prev = seen.get(key)
                if prev is None:
                    seen[key] = val
                elif prev != val:
                    ok = False
                    break
            if not ok:
                failures.append((r, (j, b)))
    return VerifyReport(valid=not failures, failures=tuple(failures))


@dataclass(frozen=True)
class OracleResult:
    length: int
    code: LinearIndexCode
    exact: bool
    note: str = ""


def _trivial_upper_code(inst: Instance) -> LinearIndexCode:
    """Send every bit of every requested message uncoded; always decodes."""
    requested = sorted({i for (i, _) in inst.arcs})
    symbols = []
    for msg in requested:
        owner = next(k + 1 for k, s in enumerate(inst.senders) if msg in s)
        for b in range(1, inst.q[msg - 1] + 1):
            symbols.append(CodeSymbol(sender=owner, terms=((msg, b),)))
    return LinearIndexCode(symbols=tuple(symbols))


def _candidate_vectors(inst: Instance, offsets: tuple[int, ...]) -> list[tuple[int, int]]:
    """All admissible symbol vectors: per sender, every nonzero XOR over
    that sender's bit coordinates.  Ordered by (sender, vector) so the
    search is canonical.  A vector ownable by several senders appears
    once, attributed to the smallest sender; attribution never affects
    decodability."""
    cands = []
    seen: set[int] = set()
    for si, members in enumerate(inst.senders, start=1):
        coords = [_coord(offsets, m, b) for m in members for b in range(1, inst.q[m - 1] + 1)]
        coords.sort()
        vecs = []
        for bits in product((0, 1), repeat=len(coords)):
            v = 0
            for c, on in zip(coords, bits):
                if on:
                    v |= 1 << c
            if v and v not in seen:
                seen.add(v)
                vecs.append(v)
        vecs.sort()
        for v in vecs:
            cands.append((si, v))
    return cands


def oracle_min_linear(inst: Instance, max_len: int | None = None,
                      max_bits: int = 12) -> OracleResult:
    """Minimum number of scalar-linear symbols decoding every request.

    Exhaustive subspace search with canonical (lexicographic) ordering,
    so the returned witness is deterministic.  For multi-sender inputs
    the value is the linear optimum; whether nonlinear codes can beat it
    is not settled, so callers should label it accordingly.
    """
    offsets, total = bit_layout(inst)
    if total > max_bits:
        raise CapExceededError(f"total bits {total} exceeds cap {max_bits}")

    wants_by_r = []
    own_by_r = []
    for r in range(1, inst.n + 1):
        wanted = _wanted_bits(inst, r)
        if wanted:
            wants_by_r.append([1 << _coord(offsets, j, b) for (j, b) in wanted])
            own_by_r.append(_receiver_units(inst, offsets, r))

    if not wants_by_r:
        return OracleResult(length=0, code=LinearIndexCode(symbols=()), exact=True)

    cands = _candidate_vectors(inst, offsets)

    def demand(chosen_rows: list[int]) -> int:
        """Largest per-receiver rank deficit; each missing dimension costs
        at least one more symbol."""
        worst = 0
        for units, wanted in zip(own_by_r, wants_by_r):
            basis = Gf2Basis(chosen_rows + units)
            before = basis.rank
            for w in wanted:
                basis.add(w)
            worst = max(worst, basis.rank - before)
        return worst

    def satisfied(chosen_rows: list[int]) -> bool:
        for units, wanted in zip(own_by_r, wants_by_r):
            basis = Gf2Basis(chosen_rows + units)
            if any(not basis.contains(w) for w in wanted):
                return False
        return True

    upper_code = _trivial_upper_code(inst)
    hard_cap = len(upper_code) if max_len is None else min(max_len, len(upper_code))

    lb = demand([])
    witness: list[tuple[int, int]] = []
    failed: set[tuple[tuple[int, ...], int, int]] = set()

    def dfs(start: int, chosen: list[tuple[int, int]], rows: list[int],
            basis: Gf2Basis, slots: int) -> bool:
        if slots == 0:
            return satisfied(rows)
        key = (basis.snapshot(), slots, start)
        if key in failed:
            return False
        if demand(rows) > slots:
            failed.add(key)
            return False
        for k in range(start, len(cands)):
            si, vec = cands[k]
            if basis.contains(vec):
                continue  # dependent symbols never widen any receiver's span
            b2 = basis.copy()
            b2.add(vec)
            chosen.append((si, vec))
            rows.append(vec)
            if dfs(k + 1, chosen, rows, b2, slots - 1):
                return True
            chosen.pop()
            rows.pop()
        failed.add(key)
        return False

    for length in range(lb, hard_cap + 1):
        chosen: list[tuple[int, int]] = []
        if dfs(0, chosen, [], Gf2Basis(), length):
            witness = list(chosen)
            symbols = []
            for (si, vec) in witness:
                terms = []
                for msg in range(1, inst.n + 1):
                    for b in range(1, inst.q[msg - 1] + 1):
                        if (vec >> _coord(offsets, msg, b)) & 1:
                            terms.append((msg, b))
                symbols.append(CodeSymbol(sender=si, terms=tuple(terms)))
            return OracleResult(length=length, code=LinearIndexCode(symbols=tuple(symbols)),
                                exact=True)

    # length cap cut the search short; fall back to the uncoded scheme
    return OracleResult(length=len(upper_code), code=upper_code, exact=False,
                        note=f"no code of length <= {hard_cap} found within caps; "
                             f"reporting the uncoded upper bound")
