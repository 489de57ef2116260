"""Sparse divided-power polynomials with exact rational coefficients.

An :class:`Element` is a finite sum of terms ``q * g^e * t^i * u^[j] * x^[m]``
where ``g^e`` is a monomial in the generators of a :class:`PDRing`, ``t`` is an
ordinary polynomial variable and ``u``, ``x`` are divided-power variables
(``u^[a] u^[b] = C(a+b, a) u^[a+b]``).  Generator monomials outside the ring's
:class:`Window` are dropped eagerly, so every stored term is admissible.

At most one of ``x`` and ``(t, u)`` occurs in an element; the ``coords`` tag
records which chart the PD variables belong to and mixing charts raises
:class:`CoordinateMismatch`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq

Rational = mpq

__all__ = [
    "Rational", "PDError", "PreconditionError", "CoordinateMismatch",
    "CapOverflowError", "NotNilpotentError", "binom", "stirling2", "stirling1",
    "compositions", "GeneratorDescriptor", "Window", "PDRing", "Element",
    "RingHom", "mul", "divided_power", "power", "substitute", "series_fn",
    "grade_component", "to_json", "from_json", "parse_rational",
    "format_rational", "psi_order",
]


class PDError(Exception):
    """Base class for algebra errors."""


class PreconditionError(PDError, ValueError):
    pass


class CoordinateMismatch(PDError, TypeError):
    pass


class CapOverflowError(PDError, ArithmeticError):
    pass


class NotNilpotentError(PDError, ArithmeticError):
    pass


# ---------------------------------------------------------------- combinatorics

def binom(n: int, k: int) -> int:
    """Binomial coefficient, with the usual extension to negative ``n``."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k) if k <= n else 0
    return (-1) ** k * math.comb(k - n - 1, k)


@lru_cache(maxsize=None)
def stirling2(m: int, n: int) -> int:
    """Stirling number of the second kind S(m, n)."""
    if m < 0 or n < 0:
        raise PreconditionError("stirling2 needs nonnegative arguments")
    if m == n:
        return 1
    if n == 0 or n > m:
        return 0
    return n * stirling2(m - 1, n) + stirling2(m - 1, n - 1)


@lru_cache(maxsize=None)
def stirling1(m: int, n: int) -> int:
    """Signed Stirling number of the first kind s(m, n)."""
    if m < 0 or n < 0:
        raise PreconditionError("stirling1 needs nonnegative arguments")
    if m == n:
        return 1
    if n == 0 or n > m:
        return 0
    return stirling1(m - 1, n - 1) - (m - 1) * stirling1(m - 1, n)


def compositions(total: int, parts: int, minimum: int = 0):
    """Yield ordered tuples of ``parts`` integers >= minimum summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def parse_rational(text: str) -> mpq:
    return mpq(text)


def format_rational(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- rings

@dataclass(frozen=True)
class GeneratorDescriptor:
    name: str
    dim: int
    coweight: int
    grade: int

    def __post_init__(self):
        if self.dim not in (-1, 0, 1):
            raise PreconditionError(f"generator {self.name}: dim must be -1, 0 or 1")
        if self.coweight < 0 or self.grade < 0:
            raise PreconditionError(f"generator {self.name}: negative weight")
        if self.dim >= 0 and self.coweight < self.dim:
            raise PreconditionError(f"generator {self.name}: coweight below dimension")

    @property
    def is_psi(self) -> bool:
        return self.dim == -1


@dataclass(frozen=True)
class Window:
    """Admissible (dim, weight) region plus psi-nilpotency.

    A coefficient monomial of total dimension ``dim``, total weight ``w`` and
    psi-exponent ``e`` survives iff ``-d <= dim <= g``,
    ``max(dim, 0) <= w <= min(2g, g + d + dim)`` and ``e < min(g, d + 1)``.
    """
    g: int
    d: int
    u_cap: int | None = None

    def __post_init__(self):
        if self.g < 1 or self.d < 0:
            raise PreconditionError("window needs g >= 1 and d >= 0")

    @property
    def psi_order(self) -> int:
        return min(self.g, self.d + 1)

    def admits(self, dim: int, weight: int, psi_exp: int) -> bool:
        g, d = self.g, self.d
        return (psi_exp < self.psi_order and -d <= dim <= g
                and max(dim, 0) <= weight <= min(2 * g, g + d + dim))


class PDRing:
    """Generator table plus window; interns admissible generator monomials.

    ``weight`` names the descriptor field the window reads ("coweight" for the
    coweight basis, "grade" for the grade basis).
    """

    def __init__(self, gens: Iterable[GeneratorDescriptor], window: Window,
                 weight: str = "coweight", label: str = ""):
        self.gens = tuple(gens)
        names = [gd.name for gd in self.gens]
        if len(set(names)) != len(names):
            raise PreconditionError("duplicate generator names")
        self.window = window
        self.weight = weight
        self.label = label
        self.index = {n: i for i, n in enumerate(names)}
        self._dims = [gd.dim for gd in self.gens]
        self._w = [getattr(gd, weight) for gd in self.gens]
        self._cw = [gd.coweight for gd in self.gens]
        self._gr = [gd.grade for gd in self.gens]
        self._psi = [i for i, gd in enumerate(self.gens) if gd.is_psi]
        self.n = len(self.gens)
        self._ids: dict[tuple, int] = {}
        self.monos: list[tuple] = []
        self.mdim: list[int] = []
        self.mweight: list[int] = []
        self.mcoweight: list[int] = []
        self.mgrade: list[int] = []
        self.mpsi: list[int] = []
        self._prod: dict[int, int] = {}
        self.unit = self.intern((0,) * self.n)

    def __repr__(self):
        return f"PDRing({self.label or 'ring'}, g={self.window.g}, d={self.window.d})"

    def intern(self, gexp: tuple) -> int:
        """Id of an exponent vector, or -1 when it lies outside the window."""
        gid = self._ids.get(gexp)
        if gid is not None:
            return gid
        dim = sum(e * a for e, a in zip(gexp, self._dims))
        w = sum(e * a for e, a in zip(gexp, self._w))
        pe = sum(gexp[i] for i in self._psi)
        if any(e < 0 for e in gexp):
            raise PreconditionError("negative exponent")
        if not self.window.admits(dim, w, pe):
            self._ids[gexp] = -1
            return -1
        gid = len(self.monos)
        self._ids[gexp] = gid
        self.monos.append(gexp)
        self.mdim.append(dim)
        self.mweight.append(w)
        self.mcoweight.append(sum(e * a for e, a in zip(gexp, self._cw)))
        self.mgrade.append(sum(e * a for e, a in zip(gexp, self._gr)))
        self.mpsi.append(pe)
        return gid

    def gmul(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        key = (a << 24) | b
        r = self._prod.get(key)
        if r is None:
            r = self.intern(tuple(x + y for x, y in zip(self.monos[a], self.monos[b])))
            self._prod[key] = r
        return r

    def gen_exponents(self, gid: int) -> dict[str, int]:
        return {self.gens[i].name: e for i, e in enumerate(self.monos[gid]) if e}

    # constructors
    def element(self, terms=None, coords=None) -> "Element":
        return Element(self, terms or {}, coords)

    def zero(self, coords=None) -> "Element":
        return Element(self, {}, coords, _trusted=True)

    def one(self, coords=None) -> "Element":
        return self.const(1, coords)

    def const(self, q, coords=None) -> "Element":
        q = mpq(q)
        return Element(self, {(self.unit, 0, 0, 0): q} if q else {}, coords, _trusted=True)

    def gen(self, name: str, coords=None) -> "Element":
        return self.monomial({name: 1}, coords=coords)

    def monomial(self, gens: Mapping[str, int] | None = None, t: int = 0, u: int = 0,
                 x: int = 0, coeff=1, coords=None) -> "Element":
        vec = [0] * self.n
        for name, e in (gens or {}).items():
            if name not in self.index:
                raise PreconditionError(f"unknown generator {name!r}")
            vec[self.index[name]] = e
        gid = self.intern(tuple(vec))
        if gid < 0 or not coeff:
            return self.zero(coords)
        return Element(self, {(gid, t, u, x): mpq(coeff)}, coords)

    def var(self, name: str, coords: str, index: int = 1) -> "Element":
        """t^index, u^[index] or x^[index]."""
        kw = {name: index}
        return self.monomial(coords=coords, **kw)


def _tag(a: "Element", b: "Element"):
    if a.ring is not b.ring:
        raise CoordinateMismatch(f"elements live in different rings ({a.ring!r}, {b.ring!r})")
    if a.coords is None:
        return b.coords
    if b.coords is None or a.coords == b.coords:
        return a.coords
    raise CoordinateMismatch(f"cannot combine {a.coords!r} and {b.coords!r} coordinates")


class Element:
    """Immutable sparse element; see the module docstring for the term shape."""
    __slots__ = ("ring", "terms", "coords")

    def __init__(self, ring: PDRing, terms: Mapping, coords: str | None = None,
                 _trusted: bool = False):
        if not _trusted:
            clean = {}
            for key, c in terms.items():
                c = mpq(c)
                if c == 0:
                    continue
                gid, t, u, x = key
                if gid < 0:
                    continue
                if min(t, u, x) < 0:
                    raise PreconditionError("negative variable exponent")
                clean[key] = clean.get(key, 0) + c
            terms = {k: v for k, v in clean.items() if v}
            if coords is None and any(k[1] or k[2] or k[3] for k in terms):
                raise CoordinateMismatch("terms with t, u or x need a coords tag")
            if coords == "x" and any(k[1] or k[2] for k in terms):
                raise CoordinateMismatch("x-chart elements cannot carry t or u")
            if coords not in (None, "x") and any(k[3] for k in terms):
                raise CoordinateMismatch("t/u-chart elements cannot carry x")
            cap = ring.window.u_cap
            if cap is not None and any(k[2] > cap for k in terms):
                raise CapOverflowError(f"u-index exceeds u_cap={cap}")
        self.ring = ring
        self.terms = terms
        self.coords = coords

    # basic protocol
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, mpq)):
            other = self.ring.const(other, self.coords)
        if not isinstance(other, Element):
            return NotImplemented
        if other.ring is not self.ring:
            return False
        if self.terms and other.terms and None not in (self.coords, other.coords) \
                and self.coords != other.coords:
            return False
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"Element({to_text(self)})"

    def __str__(self):
        return to_text(self)

    def with_coords(self, coords) -> "Element":
        return Element(self.ring, self.terms, coords)

    # arithmetic
    def __neg__(self):
        return Element(self.ring, {k: -v for k, v in self.terms.items()}, self.coords, _trusted=True)

    def __add__(self, other):
        if isinstance(other, (int, mpq)):
            other = self.ring.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        coords = _tag(self, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Element(self.ring, out, coords, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, mpq)):
            other = self.ring.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, q):
        return self.scale(1 / mpq(q))

    def __pow__(self, n: int):
        return power(self, n)

    def scale(self, q) -> "Element":
        q = mpq(q)
        if q == 0:
            return self.ring.zero(self.coords)
        return Element(self.ring, {k: v * q for k, v in self.terms.items()}, self.coords, _trusted=True)

    # inspection
    def unit_part(self) -> mpq:
        return self.terms.get((self.ring.unit, 0, 0, 0), mpq(0))

    def coefficient(self, gens: Mapping[str, int] | None = None, t: int = 0, u: int = 0,
                    x: int = 0) -> mpq:
        vec = [0] * self.ring.n
        for name, e in (gens or {}).items():
            vec[self.ring.index[name]] = e
        gid = self.ring.intern(tuple(vec))
        return self.terms.get((gid, t, u, x), mpq(0))

    def filter(self, pred: Callable) -> "Element":
        """Keep the terms whose key (gid, t, u, x) satisfies ``pred``."""
        return Element(self.ring, {k: v for k, v in self.terms.items() if pred(k)},
                       self.coords, _trusted=True)

    def map_keys(self, fn: Callable, coords=None) -> "Element":
        """Re-key terms; ``fn(key, coeff)`` returns (key, coeff) or None."""
        out: dict = {}
        for k, v in self.terms.items():
            r = fn(k, v)
            if r is None:
                continue
            nk, nv = r
            if nk[0] < 0 or not nv:
                continue
            out[nk] = out.get(nk, 0) + nv
        return Element(self.ring, out, self.coords if coords is None else coords)

    def max_var(self, pos: int) -> int:
        return max((k[pos] for k in self.terms), default=0)

    def slice(self, pos: int, value: int) -> "Element":
        """Coefficient of the given t (pos=1), u (2) or x (3) index, that variable removed."""
        out = {}
        for k, v in self.terms.items():
            if k[pos] == value:
                nk = list(k)
                nk[pos] = 0
                out[tuple(nk)] = v
        return Element(self.ring, out, self.coords, _trusted=True)


def mul(a: Element, b: Element) -> Element:
    """Product with PD rules on u and x; inadmissible products vanish."""
    coords = _tag(a, b)
    ring = a.ring
    if len(a.terms) > len(b.terms):
        a, b = b, a
    gm = ring.gmul
    comb = math.comb
    cap = ring.window.u_cap
    out: dict = {}
    get = out.get
    bt = list(b.terms.items())
    for (g1, t1, u1, x1), c1 in a.terms.items():
        for (g2, t2, u2, x2), c2 in bt:
            g = gm(g1, g2)
            if g < 0:
                continue
            c = c1 * c2
            if u1 and u2:
                c *= comb(u1 + u2, u1)
            if x1 and x2:
                c *= comb(x1 + x2, x1)
            key = (g, t1 + t2, u1 + u2, x1 + x2)
            out[key] = get(key, 0) + c
    out = {k: v for k, v in out.items() if v}
    if cap is not None and any(k[2] > cap for k in out):
        raise CapOverflowError(f"u-index exceeds u_cap={cap}")
    return Element(ring, out, coords, _trusted=True)


def power(a: Element, n: int) -> Element:
    if n < 0:
        raise PreconditionError("negative power")
    result = a.ring.one(a.coords)
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def divided_power(a: Element, m: int) -> Element:
    """gamma_m(a) = a^m / m! for an element without unit component."""
    if m < 0:
        raise PreconditionError("divided power index must be >= 0")
    if a.unit_part():
        raise PreconditionError("divided powers need an element without unit component")
    if m == 0:
        return a.ring.one(a.coords)
    out = a
    for k in range(2, m + 1):
        if not out:
            break
        out = (out * a).scale(mpq(1, k))
    return out


def _var_pos(var: str) -> int:
    try:
        return {"t": 1, "u": 2, "x": 3}[var]
    except KeyError:
        raise PreconditionError(f"unknown variable {var!r}") from None


def substitute(a: Element, var: str, series: Element, coords: str | None = None) -> Element:
    """Replace ``var^[m]`` by ``gamma_m(series)`` (``t^m`` by ``series^m``).

    The remaining part of every term is moved into ``coords`` (default: the
    series' chart if it has one, else the chart of ``a``).
    """
    if a.ring is not series.ring:
        raise CoordinateMismatch("substitution across rings")
    pos = _var_pos(var)
    target = coords or series.coords or a.coords
    if pos != 1 and series.unit_part():
        raise PreconditionError("PD substitution needs a series without unit component")
    groups: dict[int, dict] = {}
    for k, v in a.terms.items():
        m = k[pos]
        nk = list(k)
        nk[pos] = 0
        groups.setdefault(m, {})[tuple(nk)] = v
    out = a.ring.zero(target)
    cur = a.ring.one(series.coords)
    for m in range(0, max(groups, default=-1) + 1):
        if m:
            cur = cur * series if pos == 1 else (cur * series).scale(mpq(1, m))
        if m in groups:
            if not cur:
                break
            rest = Element(a.ring, groups[m], target)
            out = out + rest * cur
    return out


def series_fn(kind: str, a: Element, max_terms: int = 4096) -> Element:
    """exp(a), log(1 + a) or 1/(1 + a) for a nilpotent element ``a``.

    Nilpotency is checked statically: every term must carry a window-bounded
    generator (all generators are nilpotent under the window).
    """
    ring = a.ring
    if any(k[0] == ring.unit for k in a.terms):
        raise NotNilpotentError("series argument has a term without a nilpotent generator")
    out = ring.zero(a.coords) if kind == "log1p" else ring.one(a.coords)
    p = ring.one(a.coords)
    for k in range(1, max_terms + 1):
        p = p * a
        if not p:
            return out
        if kind == "exp":
            out = out + p.scale(mpq(1, math.factorial(k)))
        elif kind == "log1p":
            out = out + p.scale(mpq((-1) ** (k - 1), k))
        elif kind == "geom_inv":
            out = out + p.scale((-1) ** k)
        else:
            raise PreconditionError(f"unknown series kind {kind!r}")
    raise NotNilpotentError("series did not terminate")


def psi_order(a: Element) -> int | None:
    """Smallest psi-exponent among the terms (None for zero)."""
    if not a.terms:
        return None
    return min(a.ring.mpsi[k[0]] for k in a.terms)


def grade_component(a: Element, grading: str, value: int) -> Element:
    """Terms of ``a`` whose grading equals ``value``.

    ``dim`` counts u and x as dimension 1 each; ``coweight`` counts x with
    coweight 1; ``grade`` looks only at the coefficient; ``t_u_degree`` is
    t-exponent plus u-index.
    """
    ring = a.ring
    if grading == "dim":
        f = lambda k: ring.mdim[k[0]] + k[2] + k[3]
    elif grading == "coweight":
        f = lambda k: ring.mcoweight[k[0]] + k[3]
    elif grading == "grade":
        f = lambda k: ring.mgrade[k[0]]
    elif grading == "t_u_degree":
        f = lambda k: k[1] + k[2]
    else:
        raise PreconditionError(f"unknown grading {grading!r}")
    return a.filter(lambda k: f(k) == value)


class RingHom:
    """Coefficient ring map fixed on generators; t, u, x are carried along."""

    def __init__(self, source: PDRing, target: PDRing, images: Mapping[str, Element]):
        self.source, self.target = source, target
        self.images = [images.get(gd.name) for gd in source.gens]
        for gd, im in zip(source.gens, self.images):
            if im is None:
                raise PreconditionError(f"no image for generator {gd.name}")
            if im.ring is not target or any(k[1] or k[2] or k[3] for k in im.terms):
                raise PreconditionError(f"image of {gd.name} must be a coefficient of the target")
        self._cache: dict[int, Element] = {}

    def mono(self, gid: int) -> Element:
        r = self._cache.get(gid)
        if r is None:
            r = self.target.one()
            for i, e in enumerate(self.source.monos[gid]):
                for _ in range(e):
                    r = r * self.images[i]
            self._cache[gid] = r
        return r

    def __call__(self, a: Element, coords=None) -> Element:
        if a.ring is not self.source:
            raise CoordinateMismatch("ring map applied outside its source")
        out: dict = {}
        for (gid, t, u, x), c in a.terms.items():
            for (g2, _, _, _), c2 in self.mono(gid).terms.items():
                key = (g2, t, u, x)
                out[key] = out.get(key, 0) + c * c2
        return Element(self.target, {k: v for k, v in out.items() if v},
                       a.coords if coords is None else coords, _trusted=True)


# ---------------------------------------------------------------- text / JSON

def _sort_key(ring: PDRing, key):
    gid, t, u, x = key
    return (x, u, t, tuple(sorted(ring.gen_exponents(gid).items())))


def to_json(a: Element) -> dict:
    terms = []
    for key in sorted(a.terms, key=lambda k: _sort_key(a.ring, k)):
        gid, t, u, x = key
        terms.append({"coeff": format_rational(a.terms[key]),
                      "gens": dict(sorted(a.ring.gen_exponents(gid).items())),
                      "t": t, "u": u, "x": x})
    out = {"terms": terms}
    if a.coords is not None:
        out["coords"] = a.coords
    return out


def from_json(ring: PDRing, data: Mapping, coords: str | None = None) -> Element:
    coords = data.get("coords", coords)
    out = ring.zero(coords)
    for term in data["terms"]:
        out = out + ring.monomial(term.get("gens", {}), t=term.get("t", 0), u=term.get("u", 0),
                                  x=term.get("x", 0), coeff=parse_rational(term["coeff"]),
                                  coords=coords)
    return out


def _mono_text(ring: PDRing, key) -> str:
    gid, t, u, x = key
    parts = []
    for name, e in sorted(ring.gen_exponents(gid).items()):
        parts.append(name if e == 1 else f"{name}^{e}")
    if t:
        parts.append("t" if t == 1 else f"t^{t}")
    if u:
        parts.append("u" if u == 1 else f"u^[{u}]")
    if x:
        parts.append("x" if x == 1 else f"x^[{x}]")
    return "*".join(parts)


def to_text(a: Element) -> str:
    """Human-readable form, highest PD/t degree first."""
    if not a.terms:
        return "0"
    keys = sorted(a.terms, key=lambda k: _sort_key(a.ring, k))
    keys.sort(key=lambda k: (-k[3], -k[2], -k[1]))
    out = []
    for key in keys:
        c = a.terms[key]
        mono = _mono_text(a.ring, key)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        else:
            body = format_rational(mag)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)
