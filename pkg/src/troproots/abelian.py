"""Finitely generated abelian coefficient groups ``Z^k + Z/m_1 + ... + Z/m_s``.

Elements carry their group; mixing elements of different groups is an
error rather than a coercion.

>>> A = CoefficientGroup.parse("Z x Z/3")
>>> x = A.element(free=[2], torsion=[2])
>>> str(x + x)
'(4 | 1)'
>>> gcd_shifted(6, Z.element(4))
2
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from . import lattice


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@dataclass(frozen=True)
class CoefficientGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(m < 2 for m in self.torsion):
            raise ValueError(f"torsion moduli must be >= 2, got {self.torsion}")

    # -- construction -------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "CoefficientGroup":
        """Parse ``Z``, ``Z/m``, ``Z^k x Z/m1 x ...`` (``0`` is the trivial group)."""
        text = text.strip()
        if text in ("0", "1", "trivial"):
            return cls()
        rank = 0
        torsion = []
        for part in re.split(r"\s*(?:x|\+|⊕)\s*", text):
            m = re.fullmatch(r"Z(?:\^(\d+))?", part)
            if m:
                rank += int(m.group(1) or 1)
                continue
            m = re.fullmatch(r"Z/(\d+)(?:Z)?", part)
            if m:
                torsion.append(int(m.group(1)))
                continue
            raise ValueError(f"cannot parse group component {part!r}")
        return cls(rank, tuple(torsion))

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientGroup":
        return cls(int(data.get("free_rank", 0)), tuple(data.get("torsion", ())))

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{m}" for m in self.torsion]
        return " x ".join(parts) if parts else "0"

    # -- basic properties ---------------------------------------------
    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_cyclic(self) -> bool:
        return self.ngens <= 1

    @property
    def order(self) -> int | float:
        return math.prod(self.torsion) if self.is_finite else math.inf

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion))

    def element(self, free: Iterable[int] | int = (), torsion: Iterable[int] = ()) -> "GroupElement":
        """Build an element. For a cyclic group a single int is accepted."""
        if isinstance(free, int):
            return self.from_int(free)
        return GroupElement(self, tuple(free), tuple(torsion))

    def from_int(self, k: int) -> "GroupElement":
        """``k`` times the generator of a cyclic group."""
        if not self.is_cyclic:
            raise ValueError(f"{self} is not cyclic; give components explicitly")
        if self.free_rank:
            return GroupElement(self, (k,), ())
        if self.torsion:
            return GroupElement(self, (), (k,))
        return self.zero()

    def from_components(self, comps: Sequence[int]) -> "GroupElement":
        comps = tuple(comps)
        if len(comps) != self.ngens:
            raise ValueError(f"{self} needs {self.ngens} components, got {len(comps)}")
        return GroupElement(self, comps[: self.free_rank], comps[self.free_rank:])

    def generators(self) -> list["GroupElement"]:
        return [self.from_components([int(i == j) for j in range(self.ngens)]) for i in range(self.ngens)]

    def elements(self) -> Iterator["GroupElement"]:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        for res in itertools.product(*(range(m) for m in self.torsion)):
            yield GroupElement(self, (), res)

    def element_from_dict(self, data) -> "GroupElement":
        if isinstance(data, int):
            return self.from_int(data)
        return GroupElement(self, tuple(data.get("free", ())), tuple(data.get("torsion", ())))

    def contains(self, x: "GroupElement") -> bool:
        return x.group == self


Z = CoefficientGroup(1)


def Zmod(m: int) -> CoefficientGroup:
    return CoefficientGroup(0, (m,))


@dataclass(frozen=True, eq=True)
class GroupElement:
    group: CoefficientGroup = field(compare=True)
    free: tuple[int, ...] = ()
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.free_rank or len(self.torsion) != len(g.torsion):
            raise ValueError(f"element shape does not match {g}")
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(self, "torsion", tuple(int(x) % m for x, m in zip(self.torsion, g.torsion)))

    def _check(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.group != self.group:
            raise ValueError(f"cannot combine elements of {self.group} and {other.group}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.free) or any(self.torsion)

    def is_zero(self) -> bool:
        return not self

    def is_torsion(self) -> bool:
        return not any(self.free)

    @property
    def components(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def key(self) -> tuple[int, ...]:
        """Total order used for canonical (lexicographically minimal) encodings."""
        return self.components

    def __int__(self):
        if not self.group.is_cyclic:
            raise TypeError(f"{self.group} is not cyclic")
        return self.components[0] if self.components else 0

    def to_dict(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}

    def __str__(self):
        if self.group.is_cyclic:
            return str(int(self))
        return "(" + " | ".join(map(str, self.components)) + ")"

    def __repr__(self):
        return f"GroupElement({self.group}, {self})"


def sum_elements(group: CoefficientGroup, items: Iterable[GroupElement]) -> GroupElement:
    total = group.zero()
    for x in items:
        total = total + x
    return total


# ---------------------------------------------------------------------------
# arithmetic predicates


def is_mult_injective(group: CoefficientGroup, r: int) -> bool:
    """True iff multiplication by ``r`` is injective on ``group``."""
    if r == 0:
        raise ValueError("r must be nonzero")
    return all(math.gcd(abs(r), m) == 1 for m in group.torsion)


def _coset_in_multiples(a: int, b: int, j: int, m: int) -> bool:
    # a + b*Z/m  subset of  j*Z/m, by exhaustion over the cyclic component
    multiples = {(j * y) % m for y in range(m)}
    return all((a + b * x) % m in multiples for x in range(m))


def gcd_shifted(b: int, a: GroupElement) -> int:
    """``max{ j : j divides |b| and a + bA is contained in jA }``."""
    if b == 0:
        raise ValueError("b must be nonzero")
    for j in reversed(_divisors(b)):
        if all(x % j == 0 for x in a.free) and all(
            _coset_in_multiples(x, b, j, m) for x, m in zip(a.torsion, a.group.torsion)
        ):
            return j
    raise AssertionError("unreachable: j = 1 always qualifies")


def divide_by(r: int, a: GroupElement) -> GroupElement | None:
    """Some ``x`` with ``r*x == a``, or ``None`` when ``a`` is not in ``rA``."""
    free = []
    for v in a.free:
        if v % r:
            return None
        free.append(v // r)
    tors = []
    for v, m in zip(a.torsion, a.group.torsion):
        x = next((x for x in range(m) if (r * x - v) % m == 0), None)
        if x is None:
            return None
        tors.append(x)
    return GroupElement(a.group, tuple(free), tuple(tors))


def torsion_root(r: int, a: GroupElement) -> GroupElement:
    """An ``x`` with ``r*x == a`` for a torsion element ``a`` of a group on
    which multiplication by ``r`` is injective (such an ``x`` always exists)."""
    if not a.is_torsion():
        raise ValueError(f"{a} is not a torsion element")
    if not is_mult_injective(a.group, r):
        raise ValueError(f"multiplication by {r} is not injective on {a.group}")
    x = divide_by(r, a)
    if x is None or x * r != a:
        raise AssertionError(f"no {r}-th part of the torsion element {a}")
    return x


# ---------------------------------------------------------------------------
# homomorphisms


class Homomorphism:
    """An additive map determined by the images of the standard generators.

    Construction fails if the images do not respect the torsion relations
    of the source (i.e. the map would not be well defined).
    """

    def __init__(self, source: CoefficientGroup, target: CoefficientGroup, images: Sequence[GroupElement]):
        images = tuple(images)
        if len(images) != source.ngens:
            raise ValueError(f"need {source.ngens} generator images, got {len(images)}")
        for img in images:
            if img.group != target:
                raise ValueError("generator image lies outside the target group")
        for m, img in zip(source.torsion, images[source.free_rank:]):
            if img * m:
                raise ValueError(f"image {img} of an order-{m} generator has order not dividing {m}")
        self.source = source
        self.target = target
        self.images = images

    @classmethod
    def from_function(cls, source: CoefficientGroup, target: CoefficientGroup,
                      fn: Callable[[GroupElement], GroupElement]) -> "Homomorphism":
        """Wrap a Python function, checking additivity exhaustively (finite source)."""
        if not source.is_finite:
            raise ValueError("additivity can only be checked exhaustively on a finite source")
        elems = list(source.elements())
        table = {x: fn(x) for x in elems}
        for x in elems:
            for y in elems:
                if table[x + y] != table[x] + table[y]:
                    raise ValueError(f"map is not additive: f({x}+{y}) != f({x})+f({y})")
        return cls(source, target, [table[g] for g in source.generators()])

    @classmethod
    def identity(cls, group: CoefficientGroup) -> "Homomorphism":
        return cls(group, group, group.generators())

    @classmethod
    def multiplication(cls, source: CoefficientGroup, target: CoefficientGroup, d: int) -> "Homomorphism":
        """``x -> d*x`` between cyclic groups (generator goes to ``d`` times generator)."""
        return cls(source, target, [target.from_int(d)] if source.ngens else [])

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise ValueError(f"{x!r} is not in the source group {self.source}")
        out = self.target.zero()
        for c, img in zip(x.components, self.images):
            out = out + img * c
        return out

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """``self o first``."""
        return Homomorphism(first.source, self.target, [self(img) for img in first.images])

    def _matrix(self):
        # columns: lifts of generator images, as integer vectors in Z^N
        T = self.target
        N = T.ngens
        F = [[img.components[i] for img in self.images] for i in range(N)]
        M = [[(T.torsion[j] if i == T.free_rank + j else 0) for j in range(len(T.torsion))] for i in range(N)]
        return F, M

    def is_surjective(self) -> bool:
        F, M = self._matrix()
        N = self.target.ngens
        if N == 0:
            return True
        big = [f + m for f, m in zip(F, M)]
        snf = lattice.smith_normal_form(big)
        return snf.rank == N and all(d == 1 for d in snf.invariant_factors)

    def is_injective(self) -> bool:
        F, M = self._matrix()
        p = self.source.ngens
        N = self.target.ngens
        if p == 0:
            return True
        if N == 0:
            big = [[0] * p]
        else:
            big = [f + [-x for x in m] for f, m in zip(F, M)]
        for vec in lattice.integer_kernel(big, ncols=p + len(self.target.torsion)):
            x = vec[:p]
            src = self.source
            if any(x[: src.free_rank]):
                return False
            if any(v % mod for v, mod in zip(x[src.free_rank:], src.torsion)):
                return False
        return True

    def __repr__(self):
        return f"Homomorphism({self.source} -> {self.target}, {[str(i) for i in self.images]})"


class QuotientMap(Homomorphism):
    """The projection ``A -> A/rA`` together with a set-theoretic section."""

    def __init__(self, source: CoefficientGroup, r: int):
        self.r = r
        target_torsion = [abs(r)] * source.free_rank
        self._kept = []  # (source torsion index, target modulus)
        for i, m in enumerate(source.torsion):
            d = math.gcd(abs(r), m)
            if d > 1:
                self._kept.append((i, d))
                target_torsion.append(d)
        target = CoefficientGroup(0, tuple(target_torsion))
        images = []
        for i in range(source.free_rank):
            images.append(target.from_components([int(i == j) for j in range(target.ngens)]))
        for i in range(len(source.torsion)):
            pos = next((k for k, (idx, _) in enumerate(self._kept) if idx == i), None)
            comps = [0] * target.ngens
            if pos is not None:
                comps[source.free_rank + pos] = 1
            images.append(target.from_components(comps))
        super().__init__(source, target, images)

    def lift(self, y: GroupElement) -> GroupElement:
        """A preimage of ``y`` with free parts in ``[0, |r|)``."""
        k = self.source.free_rank
        free = y.torsion[:k]
        tors = [0] * len(self.source.torsion)
        for (i, _), v in zip(self._kept, y.torsion[k:]):
            tors[i] = v
        return GroupElement(self.source, tuple(free), tuple(tors))


def quotient_mod_r(group: CoefficientGroup, r: int) -> tuple[CoefficientGroup, QuotientMap]:
    """Descriptor of ``A/rA`` and the projection onto it."""
    if r == 0:
        raise ValueError("r must be nonzero")
    q = QuotientMap(group, r)
    return q.target, q


def induced_quotient_hom(f: Homomorphism, r: int) -> Homomorphism:
    """The map ``A/rA -> B/rB`` induced by ``f: A -> B``."""
    _, qa = quotient_mod_r(f.source, r)
    _, qb = quotient_mod_r(f.target, r)
    return Homomorphism(qa.target, qb.target, [qb(f(qa.lift(g))) for g in qa.target.generators()])
