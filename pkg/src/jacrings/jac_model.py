"""The coefficient ring A: a windowed model of CH(J/S)_Q.

Generators are ``psi`` (the Hodge class pulled back from the base), ``c2..c{2g}``
(the coweight components of the Abel-Jacobi image of the curve) and, for each
declared point ``p``, ``a{j}_{p}`` (the positive-coweight components of the
image of the section ``p``).  Multiplication is the Pontryagin product.

Besides this coweight basis the ring carries a grade basis ``d{n}`` /
``d{n}_{p}`` whose generators are the images of the modified diagonal classes
under the Abel-Jacobi pushforward.  Changing basis is an exact ring map in
both directions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .pdpoly import (Element, GeneratorDescriptor, PDRing, PreconditionError, RingHom,
                     Window, binom, stirling1, stirling2)

_POINT_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of the model.

    ``splitting`` selects the grade basis: ``"exact"`` uses the full
    psi-corrected modified-diagonal images, ``"stirling"`` keeps only their
    psi-free Stirling part.  They agree when ``d == 0``.
    """
    g: int
    d: int = 0
    points: tuple = ()
    u_cap: int | None = None
    splitting: str = "exact"

    def __post_init__(self):
        if not isinstance(self.g, int) or self.g < 1:
            raise PreconditionError("g must be a positive integer")
        if not isinstance(self.d, int) or self.d < 0:
            raise PreconditionError("d must be a nonnegative integer")
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(set(pts)) != len(pts):
            raise PreconditionError("point names must be distinct")
        for p in pts:
            if p == "p0" or not _POINT_NAME.match(p):
                raise PreconditionError(f"invalid point name {p!r}")
        if self.u_cap is not None and self.u_cap < 0:
            raise PreconditionError("u_cap must be nonnegative")
        if self.splitting not in ("exact", "stirling"):
            raise PreconditionError("splitting must be 'exact' or 'stirling'")

    @property
    def field_mode(self) -> bool:
        return self.d == 0

    @property
    def max_point_weight(self) -> int:
        return min(2 * self.g, self.g + self.d)


@dataclass(frozen=True)
class ClassSpec:
    """A cycle class on C, recorded by its Abel-Jacobi image and its p0-pullback."""
    name: str
    iota: Element
    p0star: Element
    extra: dict = field(default_factory=dict, compare=False)


class JacobianRing:
    def __init__(self, config: ModelConfig):
        self.config = config
        g, d = config.g, config.d
        self.g, self.d = g, d
        self.window = Window(g, d, config.u_cap)
        J = config.max_point_weight
        psi = GeneratorDescriptor("psi", -1, 0, 0)
        cg = [psi] + [GeneratorDescriptor(f"c{k}", 1, k, k) for k in range(2, 2 * g + 1)]
        dg = [psi] + [GeneratorDescriptor(f"d{k}", 1, k, k) for k in range(2, 2 * g + 1)]
        for p in config.points:
            cg += [GeneratorDescriptor(f"a{j}_{p}", 0, j, j) for j in range(1, J + 1)]
            dg += [GeneratorDescriptor(f"d{j}_{p}", 0, j, j) for j in range(1, J + 1)]
        self.ring = PDRing(cg, self.window, "coweight", "A")
        self.gring = PDRing(dg, self.window, "grade", "A-grade")
        self._build_dictionary()

    # generators and named classes
    def psi(self) -> Element:
        return self.ring.gen("psi")

    def c(self, k: int) -> Element:
        if not 2 <= k <= 2 * self.g:
            raise PreconditionError("c_k needs 2 <= k <= 2g")
        return self.ring.gen(f"c{k}")

    def a(self, p: str, j: int) -> Element:
        self._check_point(p)
        if not 1 <= j <= self.config.max_point_weight:
            raise PreconditionError("point generator index out of range")
        return self.ring.gen(f"a{j}_{p}")

    def _check_point(self, p: str):
        if p not in self.config.points:
            raise PreconditionError(f"undeclared point {p!r}")

    def curve_class(self) -> Element:
        """[iota(C)] = c2 + ... + c{2g}."""
        out = self.ring.zero()
        for k in range(2, 2 * self.g + 1):
            out = out + self.c(k)
        return out

    def w_class(self, k: int) -> Element:
        """gamma_k of the curve class (the image of C^[k])."""
        if k < 0:
            raise PreconditionError("w_class needs k >= 0")
        from .pdpoly import divided_power
        return divided_power(self.curve_class(), k)

    def jac_fundamental(self) -> Element:
        return self.w_class(self.g)

    def iota_point(self, p: str) -> Element:
        """[iota(p)] = [0] + sum_j a{j}_p."""
        self._check_point(p)
        out = self.ring.one()
        for j in range(1, self.config.max_point_weight + 1):
            out = out + self.a(p, j)
        return out

    def pontryagin(self, a: Element, b: Element) -> Element:
        if a.ring is not b.ring or a.ring not in (self.ring, self.gring):
            raise PreconditionError("pontryagin product needs two elements of A")
        return a * b

    def push_N(self, y: Element, N: int) -> Element:
        """[N]_*: scales the coweight-w part by N^w (N = 0 keeps the coweight-0 part)."""
        if y.ring is not self.ring:
            raise PreconditionError("push_N acts on the coweight basis")
        if not isinstance(N, int) or N < 0:
            raise PreconditionError("push_N needs an integer N >= 0")
        cw = self.ring.mcoweight
        return y.map_keys(lambda k, v: (k, v * N ** cw[k[0]]))

    # class specs
    def spec_curve(self) -> ClassSpec:
        return ClassSpec("C", self.curve_class(), self.ring.one())

    def spec_point(self, p: str) -> ClassSpec:
        return ClassSpec(p, self.iota_point(p), self.ring.zero())

    def spec_base_point(self) -> ClassSpec:
        return ClassSpec("p0", self.ring.one(), -self.psi())

    def spec(self, name: str) -> ClassSpec:
        if name == "C":
            return self.spec_curve()
        if name == "p0":
            return self.spec_base_point()
        return self.spec_point(name)

    def pi_push(self, spec: ClassSpec) -> Element:
        """pi_*(a), read off as the coweight-0 part of its Abel-Jacobi image."""
        return self.push_N(spec.iota, 0)

    # modified diagonal images and the grade basis
    def delta_image(self, n: int, spec: ClassSpec, splitting: str | None = None) -> Element:
        """Abel-Jacobi image of the n-th modified diagonal class of ``spec``.

        The exact value is the alternating binomial sum of the pushforwards
        [n-k]_* iota_*(a) twisted by (1 + psi c)^k, plus the correction
        (-c)^n psi^(n-1) p0^*(a).  The Stirling variant drops every psi term.
        """
        splitting = splitting or self.config.splitting
        if n < 1:
            raise PreconditionError("delta_image needs n >= 1")
        if splitting == "stirling":
            out = self.ring.zero()
            weight_gens = self._weight_gens(spec)
            if weight_gens is None:
                raise PreconditionError("Stirling images are defined for C and declared points")
            fact = 1
            for i in range(2, n + 1):
                fact *= i
            for m, gen in weight_gens.items():
                s = stirling2(m, n)
                if s:
                    out = out + gen.scale(fact * s)
            return out
        c = self.curve_class()
        twist = self.ring.one() + self.psi() * c
        out = self.ring.zero()
        tk = self.ring.one()
        for k in range(0, n + 1):
            out = out + (tk * self.push_N(spec.iota, n - k)).scale((-1) ** k * binom(n, k))
            tk = tk * twist
        corr = self.ring.one()
        for _ in range(n):
            corr = corr * (-c)
        for _ in range(n - 1):
            corr = corr * self.psi()
        return out + corr * spec.p0star

    def _weight_gens(self, spec: ClassSpec):
        if spec.name == "C":
            return {k: self.c(k) for k in range(2, 2 * self.g + 1)}
        if spec.name in self.config.points:
            return {j: self.a(spec.name, j) for j in range(1, self.config.max_point_weight + 1)}
        return None

    def _grade_generators(self):
        """(grade-basis name, n, spec) for every grade generator."""
        out = [(f"d{n}", n, self.spec_curve()) for n in range(2, 2 * self.g + 1)]
        for p in self.config.points:
            sp = self.spec_point(p)
            out += [(f"d{n}_{p}", n, sp) for n in range(1, self.config.max_point_weight + 1)]
        return out

    def _build_dictionary(self):
        R, G = self.ring, self.gring
        psi_g = G.gen("psi")
        forward = {"psi": R.gen("psi")}
        for name, n, sp in self._grade_generators():
            forward[name] = self.delta_image(n, sp)
        self._to_cw = RingHom(G, R, forward)
        # psi-free inverse: c_m = sum_n s(n, m)/n! d_n, the same for points
        lin = {"psi": psi_g}
        fact = [1]
        for i in range(1, 2 * self.g + 2):
            fact.append(fact[-1] * i)
        for k in range(2, 2 * self.g + 1):
            e = G.zero()
            for n in range(k, 2 * self.g + 1):
                e = e + G.gen(f"d{n}").scale(mpq(stirling1(n, k), fact[n]))
            lin[f"c{k}"] = e
        J = self.config.max_point_weight
        for p in self.config.points:
            for m in range(1, J + 1):
                e = G.zero()
                for n in range(m, J + 1):
                    e = e + G.gen(f"d{n}_{p}").scale(mpq(stirling1(n, m), fact[n]))
                lin[f"a{m}_{p}"] = e
        lin_hom = RingHom(R, G, lin)
        images = dict(lin)
        # psi-adic correction: each round raises the psi-order of the defect
        for _ in range(self.window.psi_order + 2):
            hom = RingHom(R, G, images)
            defects = {}
            for gd in R.gens:
                err = R.gen(gd.name) - self._to_cw(hom(R.gen(gd.name)))
                if err:
                    defects[gd.name] = err
            if not defects:
                break
            for name, err in defects.items():
                images[name] = images[name] + lin_hom(err)
        else:
            raise ArithmeticError("grade dictionary did not converge")
        self._to_gr = RingHom(R, G, images)

    def to_grade_basis(self, y: Element) -> Element:
        if y.ring is self.gring:
            return y
        return self._to_gr(y)

    def to_coweight_basis(self, z: Element) -> Element:
        if z.ring is self.ring:
            return z
        return self._to_cw(z)

    def grade_generator_image(self, name: str) -> Element:
        """Coweight-basis expression of a grade generator."""
        return self._to_cw(self.gring.gen(name))

    def stirling_dictionary(self) -> tuple[list[list[mpq]], list[list[mpq]]]:
        """Matrices for d_n = sum_m M[n][m] c_m (mod psi) and its inverse, n, m = 2..2g."""
        rng = range(2, 2 * self.g + 1)
        fact = 1
        fwd, inv = [], []
        for n in rng:
            fact = 1
            for i in range(2, n + 1):
                fact *= i
            fwd.append([mpq(fact * stirling2(m, n)) for m in rng])
            inv.append([mpq(stirling1(m, n), _factorial(m)) for m in rng])
        return fwd, inv


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
