"""Finite groups with dense element indices 0..|G|-1.

Element 0 is always the identity. Groups built from permutations are indexed
by breadth-first discovery from the identity, applying generators in input
order, so repeated construction gives identical indexing.
"""

from __future__ import annotations

import math
import random
import string
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import SizeLimitError, ValidationError

DEFAULT_CLOSURE_CAP = 10**6


class FiniteGroup:
    """Interface for finite groups with elements ``0..order-1``."""

    order: int
    identity = 0

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def elements(self) -> range:
        return range(self.order)

    def power(self, g: int, n: int) -> int:
        if n < 0:
            g, n = self.inv(g), -n
        result = 0
        while n:
            if n & 1:
                result = self.mul(result, g)
            g = self.mul(g, g)
            n >>= 1
        return result

    def left_row(self, g: int) -> np.ndarray:
        """The map ``v -> g*v`` as an index array."""
        cache = self.__dict__.setdefault("_left_rows", {})
        row = cache.get(g)
        if row is None:
            row = np.fromiter((self.mul(g, v) for v in range(self.order)), dtype=np.int64, count=self.order)
            row.setflags(write=False)
            cache[g] = row
        return row

    def table(self) -> np.ndarray:
        """Full multiplication table, ``table[a, b] = a*b``."""
        cached = self.__dict__.get("_table")
        if cached is None:
            cached = np.stack([self.left_row(a) for a in range(self.order)])
            self._table = cached
        return cached

    def check_axioms(self, sample: int = 20000, seed: int = 0) -> None:
        """Raise ``ValidationError`` unless the group axioms hold.

        Associativity is checked on all triples for order <= 64 and on a
        random sample of triples otherwise.
        """
        n = self.order
        for g in range(n):
            if self.mul(0, g) != g or self.mul(g, 0) != g:
                raise ValidationError(f"element 0 is not a two-sided identity at {g}")
            if self.mul(g, self.inv(g)) != 0:
                raise ValidationError(f"inv({g}) is not an inverse")
        if n <= 64:
            t = self.table()
            # (ab)c == a(bc) for all triples at once
            left = t[t[:, :, None], np.arange(n)[None, None, :]]
            right = t[np.arange(n)[:, None, None], t[None, :, :]]
            if not np.array_equal(left, right):
                a, b, c = map(int, np.argwhere(left != right)[0])
                raise ValidationError(f"associativity fails on ({a}, {b}, {c})")
        else:
            rng = random.Random(seed)
            for _ in range(sample):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise ValidationError(f"associativity fails on ({a}, {b}, {c})")


class TableGroup(FiniteGroup):
    """Group given by an explicit multiplication table."""

    def __init__(self, mult: Sequence[Sequence[int]] | np.ndarray, check: bool = True):
        table = np.asarray(mult, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise ValidationError("multiplication table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise ValidationError("multiplication table entries out of range")
        self.order = n
        self._table = table
        inv = np.argmax(table == 0, axis=1)
        if not np.all(table[np.arange(n), inv] == 0):
            raise ValidationError("some element has no right inverse")
        self._inv = inv
        if check:
            self.check_axioms()

    def mul(self, a: int, b: int) -> int:
        return int(self._table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def left_row(self, g: int) -> np.ndarray:
        return self._table[g]


class PermutationGroup(FiniteGroup):
    """Group of permutations of ``range(degree)``.

    The product ``a*b`` means "apply ``a`` first, then ``b``".
    """

    def __init__(self, perms: np.ndarray):
        self.perms = perms
        self.order, self.degree = perms.shape
        self._index = {p.tobytes(): i for i, p in enumerate(perms)}
        self._inv: np.ndarray | None = None

    def index_of(self, perm: np.ndarray) -> int:
        key = np.ascontiguousarray(perm, dtype=self.perms.dtype).tobytes()
        try:
            return self._index[key]
        except KeyError:
            raise ValidationError("permutation is not an element of the group") from None

    def mul(self, a: int, b: int) -> int:
        return self._index[self.perms[b][self.perms[a]].tobytes()]

    def inv(self, a: int) -> int:
        if self._inv is None:
            self._inv = np.array([self._index[np.argsort(p).astype(self.perms.dtype).tobytes()] for p in self.perms])
        return int(self._inv[a])


def _as_permutation(p, degree: int | None) -> np.ndarray:
    arr = np.asarray(p)
    if arr.ndim != 1 or (arr.size and not np.issubdtype(arr.dtype, np.integer)):
        raise ValidationError(f"not a permutation: {p!r}")
    if degree is not None and arr.size != degree:
        raise ValidationError("permutations act on sets of different sizes")
    if not np.array_equal(np.sort(arr), np.arange(arr.size)):
        raise ValidationError(f"not a permutation: {p!r}")
    return arr


def group_from_permutations(
    generators: Sequence[Sequence[int]] | Sequence[np.ndarray],
    degree: int | None = None,
    cap: int = DEFAULT_CLOSURE_CAP,
) -> PermutationGroup:
    """Close a list of permutations under composition."""
    gens = []
    for p in generators:
        arr = _as_permutation(p, degree)
        degree = arr.size
        gens.append(arr)
    if degree is None:
        raise ValidationError("degree is required when no generators are given")
    dtype = np.int32 if degree < 2**31 else np.int64
    gens = [g.astype(dtype) for g in gens]
    ident = np.arange(degree, dtype=dtype)
    found = [ident]
    index = {ident.tobytes(): 0}
    queue = deque([ident])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = g[cur]
            key = nxt.tobytes()
            if key not in index:
                if len(found) >= cap:
                    raise SizeLimitError(f"group closure exceeds cap of {cap} elements")
                index[key] = len(found)
                found.append(nxt)
                queue.append(nxt)
    return PermutationGroup(np.stack(found))


class WreathProduct(FiniteGroup):
    """Restricted wreath product ``Z_k wr base``.

    Element index ``b * k**n + sum(f[x] * k**x)`` encodes the pair ``(f, b)``
    with ``f: base -> Z_k`` and ``n = |base|``. Multiplication is
    ``(f, b)(f', b') = (f + b.f', bb')`` where ``(b.f')(x) = f'(b^-1 x)``.
    """

    def __init__(self, k: int, base: FiniteGroup):
        self.k = k
        self.base = base
        self.width = k ** base.order
        self.order = self.width * base.order
        self._shift = [base.left_row(base.inv(b)) for b in range(base.order)]

    def decode(self, g: int) -> tuple[np.ndarray, int]:
        b, code = divmod(g, self.width)
        f = np.zeros(self.base.order, dtype=np.int64)
        for x in range(self.base.order):
            code, f[x] = divmod(code, self.k)
        return f, b

    def encode(self, f: np.ndarray, b: int) -> int:
        code = 0
        for x in reversed(range(self.base.order)):
            code = code * self.k + int(f[x]) % self.k
        return b * self.width + code

    def mul(self, a: int, b: int) -> int:
        f1, b1 = self.decode(a)
        f2, b2 = self.decode(b)
        return self.encode(f1 + f2[self._shift[b1]], self.base.mul(b1, b2))

    def inv(self, a: int) -> int:
        f, b = self.decode(a)
        binv = self.base.inv(b)
        return self.encode(-f[self._shift[binv]], binv)


@dataclass(frozen=True)
class GeneratorSet:
    """Symmetric generating set stored as ``2m`` formal symbols.

    ``partner[i]`` is the index of the symbol for the inverse of symbol ``i``.
    A generator that is an involution still gets two distinct symbols.
    """

    symbols: tuple[str, ...]
    elements: tuple[int, ...]
    partner: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def rank(self) -> int:
        return len(self.symbols) // 2

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValidationError(f"unknown generator symbol {symbol!r}") from None

    def to_element(self, symbol: str) -> int:
        return self.elements[self.index(symbol)]

    def inverse_word(self, word: Sequence[str]) -> tuple[str, ...]:
        return tuple(self.symbols[self.partner[self.index(s)]] for s in reversed(word))

    @classmethod
    def symmetric(cls, group: FiniteGroup, generators: Sequence[int], names: Sequence[str] | None = None) -> "GeneratorSet":
        """Symbols ``a, A, b, B, ...`` for the given generators and their inverses."""
        if names is None:
            names = _default_names(len(generators))
        symbols, elements, partner = [], [], []
        for i, (g, name) in enumerate(zip(generators, names)):
            symbols += [name, name.upper() if name.upper() != name else name + "'"]
            elements += [g, group.inv(g)]
            partner += [2 * i + 1, 2 * i]
        gens = cls(tuple(symbols), tuple(elements), tuple(partner))
        gens.validate(group)
        return gens

    def validate(self, group: FiniteGroup) -> None:
        n = len(self.symbols)
        if not (len(self.elements) == len(self.partner) == n) or n % 2:
            raise ValidationError("generator set must have an even number of symbols")
        if len(set(self.symbols)) != n:
            raise ValidationError("generator symbols must be distinct")
        for i, j in enumerate(self.partner):
            if not 0 <= j < n or j == i or self.partner[j] != i:
                raise ValidationError("partner must be a fixed-point-free involution on symbols")
            if not 0 <= self.elements[i] < group.order:
                raise ValidationError(f"symbol {self.symbols[i]!r} maps outside the group")
            if self.elements[j] != group.inv(self.elements[i]):
                raise ValidationError(f"partner of {self.symbols[i]!r} does not map to the inverse")
        if closure_size(group, self.elements) != group.order:
            raise ValidationError("generator set does not generate the group")


def _default_names(m: int) -> list[str]:
    if m <= 26:
        return list(string.ascii_lowercase[:m])
    return [f"g{i}" for i in range(m)]


def closure_size(group: FiniteGroup, elements: Iterable[int]) -> int:
    """Size of the subgroup generated by ``elements``."""
    elements = list(elements)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in elements:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen)


def evaluate_word(group: FiniteGroup, gens: GeneratorSet, word: Sequence[str]) -> int:
    result = 0
    for s in word:
        result = group.mul(result, gens.to_element(s))
    return result


def element_order(group: FiniteGroup, g: int) -> int:
    x, d = g, 1
    while x != 0:
        x = group.mul(x, g)
        d += 1
    return d


def exponent(group: FiniteGroup) -> int:
    return math.lcm(*(element_order(group, g) for g in group.elements()))


def wreath_product(k: int, base: FiniteGroup, base_gens: Sequence[int] | None = None,
                   cap: int = DEFAULT_CLOSURE_CAP) -> tuple[WreathProduct, GeneratorSet]:
    """``Z_k wr base`` together with its distinguished generators.

    The generators are the delta function at the identity followed by the
    base generators acting with zero function part, ``m + 1`` in total.
    If ``base_gens`` is omitted a generating set is picked greedily.
    """
    if k < 2:
        raise ValidationError("k must be at least 2")
    order = k ** base.order * base.order
    if order > cap:
        raise SizeLimitError(f"wreath product has order {order}, above cap {cap}")
    if base_gens is None:
        base_gens = _greedy_generators(base)
    group = WreathProduct(k, base)
    delta = np.zeros(base.order, dtype=np.int64)
    delta[0] = 1
    generators = [group.encode(delta, 0)] + [group.encode(np.zeros(base.order, dtype=np.int64), b) for b in base_gens]
    return group, GeneratorSet.symmetric(group, generators)


def _greedy_generators(group: FiniteGroup) -> list[int]:
    chosen: list[int] = []
    span = {0}
    for g in group.elements():
        if g not in span:
            chosen.append(g)
            span = _subgroup(group, chosen)
    return chosen


def _subgroup(group: FiniteGroup, elements: list[int]) -> set[int]:
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in elements:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# Presets ------------------------------------------------------------------

def _cyclic_perms(n: int) -> list[list[int]]:
    return [[(i + 1) % n for i in range(n)]]


def _dihedral_perms(n: int) -> list[list[int]]:
    return [[(i + 1) % n for i in range(n)], [(-i) % n for i in range(n)]]


def _elementary_abelian_2_perms(m: int) -> list[list[int]]:
    perms = []
    for j in range(m):
        p = list(range(2 * m))
        p[2 * j], p[2 * j + 1] = 2 * j + 1, 2 * j
        perms.append(p)
    return perms


def _heisenberg_f3_perms() -> list[list[int]]:
    """Right multiplication by the two elementary unitriangular matrices.

    ``(a, b, c)`` stands for the matrix with superdiagonal ``a, b`` and
    corner ``c``; the product is ``(a+a', b+b', c+c'+ab')`` mod 3.
    """
    def idx(a, b, c):
        return (a % 3) * 9 + (b % 3) * 3 + (c % 3)

    elements = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    perms = []
    for (x, y, z) in [(1, 0, 0), (0, 1, 0)]:
        perms.append([idx(a + x, b + y, c + z + a * y) for (a, b, c) in elements])
    return perms


_FAMILIES = {
    "cyclic": (1, _cyclic_perms),
    "dihedral": (1, _dihedral_perms),
    "elementary_abelian_2": (1, _elementary_abelian_2_perms),
    "burnside_2_3": (0, lambda: _heisenberg_f3_perms()),
}


def _factor_perms(text: str) -> tuple[list[list[int]], int]:
    name, _, arg = text.strip().partition(":")
    if name == "trivial" and not arg:
        return [], 1
    if name not in _FAMILIES:
        raise ValidationError(f"unknown preset {name!r}")
    nargs, build = _FAMILIES[name]
    if nargs:
        try:
            n = int(arg)
        except ValueError:
            raise ValidationError(f"preset {name!r} needs an integer parameter") from None
        if n < 1 or (name == "dihedral" and n < 3):
            raise ValidationError(f"bad parameter for {name!r}: {n}")
        perms = build(n)
    else:
        if arg:
            raise ValidationError(f"preset {name!r} takes no parameter")
        perms = build()
    return perms, len(perms[0])


def preset(name: str, cap: int = DEFAULT_CLOSURE_CAP) -> tuple[PermutationGroup, GeneratorSet]:
    """Build a named group with its canonical symmetric generating set.

    Names: ``trivial``, ``cyclic:n``, ``dihedral:n``, ``elementary_abelian_2:m``
    (the Burnside group B(m, 2)), ``burnside_2_3`` (order 27 unitriangular
    model of B(2, 3)), and direct products written ``A*B``.
    """
    factors = [_factor_perms(part) for part in name.split("*")]
    degree = sum(d for _, d in factors)
    generators = []
    offset = 0
    for perms, d in factors:
        for p in perms:
            full = list(range(degree))
            full[offset:offset + d] = [x + offset for x in p]
            generators.append(full)
        offset += d
    group = group_from_permutations(generators, degree=degree, cap=cap)
    elements = [group.index_of(np.array(p)) for p in generators]
    return group, GeneratorSet.symmetric(group, elements)


# JSON formats -------------------------------------------------------------

def group_to_json(group: FiniteGroup, gens: GeneratorSet) -> dict:
    return {
        "order": group.order,
        "mult": group.table().tolist(),
        "gens": [
            {"symbol": s, "element": e, "partner": gens.symbols[p]}
            for s, e, p in zip(gens.symbols, gens.elements, gens.partner)
        ],
    }


def group_from_json(obj: dict, cap: int = DEFAULT_CLOSURE_CAP) -> tuple[FiniteGroup, GeneratorSet]:
    """Read either the table format or the permutation-generator format."""
    if not isinstance(obj, dict):
        raise ValidationError("group JSON must be an object")
    if "generators" in obj:
        try:
            degree = int(obj["degree"])
            perms = obj["generators"]
        except (KeyError, TypeError, ValueError):
            raise ValidationError("permutation format needs 'degree' and 'generators'") from None
        group = group_from_permutations(perms, degree=degree, cap=cap)
        elements = [group.index_of(np.array(p)) for p in perms]
        return group, GeneratorSet.symmetric(group, elements)
    try:
        order = int(obj["order"])
        group = TableGroup(obj["mult"])
        entries = obj["gens"]
        symbols = tuple(str(e["symbol"]) for e in entries)
        elements = tuple(int(e["element"]) for e in entries)
        partner = tuple(symbols.index(str(e["partner"])) for e in entries)
    except (KeyError, TypeError, ValueError):
        raise ValidationError("table format needs 'order', 'mult' and well-formed 'gens'") from None
    if order != group.order:
        raise ValidationError(f"declared order {order} does not match table size {group.order}")
    gens = GeneratorSet(symbols, elements, partner)
    gens.validate(group)
    return group, gens
