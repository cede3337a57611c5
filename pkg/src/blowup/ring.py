"""Polynomial rings over prime fields.

Monomials are packed into a single Python int: one fixed-width field per
exponent plus one or more weighted-degree fields, laid out so that comparing
``m ^ ring.flip`` as integers is the monomial order.  Multiplication is integer
addition and divisibility is a guard-bit test.  The layout is private to the
ring; exponent tuples are the public currency.
"""
from __future__ import annotations

import os
import re
import dataclasses
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_CHARACTERISTIC = 32003
DEFAULT_DEGREE_CAP = 64

ORDERS = ("grevlex", "wgrevlex", "lex", "elim")

# value bits per packed field; leaves room for module degree shifts
VALUE_BITS = 16
FIELD_BITS = VALUE_BITS + 1
FIELD_MASK = (1 << VALUE_BITS) - 1


class RingError(ValueError):
    pass


class DegreeBudgetError(RuntimeError):
    """A computation needed a monomial beyond the configured degree cap."""

    def __init__(self, degree, cap, where=""):
        self.degree = degree
        self.cap = cap
        msg = f"degree budget exceeded: degree {degree} > cap {cap}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


def default_degree_cap() -> int:
    env = os.environ.get("BLOWUP_DEGREE_CAP")
    return int(env) if env else DEFAULT_DEGREE_CAP


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    characteristic: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self):
        if not is_prime(self.characteristic):
            raise RingError(f"characteristic {self.characteristic} is not prime")

    def __call__(self, value: int) -> int:
        return value % self.characteristic

    def inv(self, value: int) -> int:
        if value % self.characteristic == 0:
            raise ZeroDivisionError("inverse of zero in prime field")
        return pow(value, -1, self.characteristic)


@dataclass(frozen=True, eq=False)
class PolyRing:
    variables: tuple
    weights: tuple = None
    order: str = "grevlex"
    block: int = 0
    field: PrimeField = PrimeField()
    degree_cap: int = dataclasses.field(default_factory=default_degree_cap)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        n = len(variables)
        if len(set(variables)) != n:
            raise RingError("variable names must be distinct")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise RingError(f"bad variable name {v!r}")
        weights = tuple(self.weights) if self.weights is not None else (1,) * n
        if len(weights) != n or any(w < 1 for w in weights):
            raise RingError("weights must be positive, one per variable")
        object.__setattr__(self, "weights", weights)
        if self.order not in ORDERS:
            raise RingError(f"unknown monomial order {self.order!r}")
        if self.order == "elim" and not 0 < self.block <= n:
            raise RingError("elimination block size must be in 1..nvars")
        if self.order != "elim" and self.block:
            raise RingError("block size only applies to the elimination order")
        if self.degree_cap * max(weights, default=1) * 8 > FIELD_MASK >> 2:
            raise RingError("degree cap too large for packed monomials")
        self._build_layout()

    # identity: two rings are equal iff every defining datum agrees
    def _key(self):
        return (self.variables, self.weights, self.order, self.block,
                self.field.characteristic, self.degree_cap)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        extra = f", block={self.block}" if self.order == "elim" else ""
        w = "" if set(self.weights) <= {1} else f", weights={list(self.weights)}"
        return (f"PolyRing({','.join(self.variables)}; {self.order}{extra}{w}; "
                f"p={self.field.characteristic})")

    @property
    def p(self) -> int:
        return self.field.characteristic

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_graded_order(self) -> bool:
        return self.order in ("grevlex", "wgrevlex")

    def _build_layout(self):
        n = self.nvars
        # fields listed from most significant; ("deg", vars) or ("exp", i)
        if self.order in ("grevlex", "wgrevlex"):
            fields = [("deg", tuple(range(n)))] + [("exp", i) for i in reversed(range(n))]
            flip_exps = True
        elif self.order == "lex":
            fields = [("exp", i) for i in range(n)] + [("deg", tuple(range(n)))]
            flip_exps = False
        else:
            k = self.block
            front, rest = tuple(range(k)), tuple(range(k, n))
            fields = ([("deg", front)] + [("exp", i) for i in reversed(front)]
                      + [("deg", rest)] + [("exp", i) for i in reversed(rest)]
                      + [("deg", tuple(range(n)))])
            flip_exps = True
        nf = len(fields)
        exp_shift = [0] * n
        deg_fields = []
        flip = 0
        guard = 0
        for pos, (kind, data) in enumerate(fields):
            sh = FIELD_BITS * (nf - 1 - pos)
            guard |= 1 << (sh + VALUE_BITS)
            if kind == "exp":
                exp_shift[data] = sh
                if flip_exps:
                    flip |= FIELD_MASK << sh
            else:
                deg_fields.append((sh, data))
        # total degree field is the one covering every variable
        total = [sh for sh, vs in deg_fields if len(vs) == n]
        object.__setattr__(self, "_exp_shift", tuple(exp_shift))
        object.__setattr__(self, "_deg_fields", tuple(deg_fields))
        object.__setattr__(self, "_deg_shift", total[0])
        object.__setattr__(self, "flip", flip)
        object.__setattr__(self, "guard", guard)
        object.__setattr__(self, "nfields", nf)
        object.__setattr__(self, "value_mask",
                           sum(FIELD_MASK << (FIELD_BITS * i) for i in range(nf)))
        # degree field of the graded orders sits on top; used for module shifts
        object.__setattr__(self, "shift_unit", 1 << total[0])

    # --- packed monomials ---------------------------------------------------
    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise RingError("exponent vector has wrong length")
        limit = FIELD_MASK >> 2
        m = 0
        for e, sh in zip(exps, self._exp_shift):
            if e < 0:
                raise RingError("negative exponent")
            m |= e << sh
        w = self.weights
        for sh, vs in self._deg_fields:
            d = sum(w[i] * exps[i] for i in vs)
            if d > limit:
                raise DegreeBudgetError(d, limit, "monomial not representable")
            m |= d << sh
        return m

    def decode(self, m: int) -> tuple:
        return tuple((m >> sh) & FIELD_MASK for sh in self._exp_shift)

    def degree_of_exps(self, exps) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def mdeg(self, m: int) -> int:
        """Weighted degree of a packed monomial (module shifts included)."""
        return (m >> self._deg_shift) & FIELD_MASK

    def key(self, m: int) -> int:
        return m ^ self.flip

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        return self.encode([max(x, y) for x, y in zip(self.decode(a), self.decode(b))])

    def one(self) -> int:
        return 0

    def var(self, i: int) -> int:
        e = [0] * self.nvars
        e[i] = 1
        return self.encode(e)

    def order_key(self, exps: Sequence[int]) -> tuple:
        """Tuple key realising the monomial order directly on exponent vectors."""
        w = self.weights
        if self.order == "lex":
            return tuple(exps)
        if self.order == "elim":
            k = self.block
            front, rest = exps[:k], exps[k:]
            return ((sum(a * b for a, b in zip(w[:k], front)),)
                    + tuple(-e for e in reversed(front))
                    + (sum(a * b for a, b in zip(w[k:], rest)),)
                    + tuple(-e for e in reversed(rest)))
        return (self.degree_of_exps(exps),) + tuple(-e for e in reversed(exps))

    def compare_monomials(self, a: Sequence[int], b: Sequence[int]) -> int:
        """-1, 0 or 1 as the exponent vector ``a`` is less, equal, greater than ``b``."""
        if len(a) != self.nvars or len(b) != self.nvars:
            raise RingError("exponent vector has wrong length")
        ka, kb = self.order_key(a), self.order_key(b)
        return (ka > kb) - (ka < kb)

    # --- ring constructors --------------------------------------------------
    def with_order(self, order: str, block: int = 0, variables=None, weights=None) -> "PolyRing":
        return PolyRing(tuple(variables) if variables is not None else self.variables,
                        tuple(weights) if weights is not None else self.weights,
                        order, block, self.field, self.degree_cap)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r}") from None

    def gen(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return Polynomial(self, {self.var(i): 1})

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {0: c} if c else {})

    def __call__(self, src) -> "Polynomial":
        if isinstance(src, Polynomial):
            return src if src.ring == self else map_poly(src, self)
        if isinstance(src, int):
            return self.const(src)
        return parse_polynomial(src, self)

    def monomials_of_degree(self, deg: int) -> list:
        """Exponent tuples of weighted degree ``deg``."""
        out = []
        w = self.weights
        n = self.nvars

        def rec(i, left, cur):
            if i == n - 1:
                if left % w[i] == 0:
                    out.append(tuple(cur + [left // w[i]]))
                return
            for e in range(left // w[i] + 1):
                rec(i + 1, left - e * w[i], cur + [e])

        if n == 0:
            return [()] if deg == 0 else []
        rec(0, deg, [])
        return out


class Polynomial:
    """Immutable polynomial: a dict from packed monomial to coefficient in [1, p)."""

    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None

    @classmethod
    def from_terms(cls, ring: PolyRing, items: Iterable) -> "Polynomial":
        """Build from (coefficient, exponent tuple) pairs, combining duplicates."""
        p = ring.p
        d = {}
        for c, e in items:
            m = ring.encode(e)
            d[m] = (d.get(m, 0) + c) % p
        return cls(ring, {m: c for m, c in d.items() if c})

    # --- inspection ---
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def lm(self) -> int:
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            f = self.ring.flip
            self._lm = max(self.terms, key=lambda m: m ^ f)
        return self._lm

    @property
    def lc(self) -> int:
        return self.terms[self.lm]

    def leading_exponents(self) -> tuple:
        return self.ring.decode(self.lm)

    def sorted_terms(self) -> list:
        """(coefficient, exponents) pairs in strictly decreasing monomial order."""
        f = self.ring.flip
        ms = sorted(self.terms, key=lambda m: m ^ f, reverse=True)
        return [(self.terms[m], self.ring.decode(m)) for m in ms]

    def degree(self) -> int:
        if not self.terms:
            return -1
        r = self.ring
        return max(r.mdeg(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        r = self.ring
        return len({r.mdeg(m) for m in self.terms}) <= 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def support(self) -> set:
        """Indices of variables occurring in the polynomial."""
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(self.ring.decode(m)) if e)
        return out

    # --- arithmetic ---
    def _check(self, other):
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.ring != self.ring:
            raise RingError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, add_terms(self.terms, other.terms, 1, self.ring.p))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, add_terms(self.terms, other.terms, -1, self.ring.p))

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, mul_terms(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: v * c % p for m, v in self.terms.items()})

    def mul_monomial(self, m: int, c: int = 1) -> "Polynomial":
        p = self.ring.p
        return Polynomial(self.ring, {k + m: v * c % p for k, v in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.lc))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return isinstance(other, Polynomial) and other.ring == self.ring and other.terms == self.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, self.ring.decode(m)):
                if e:
                    v = v * pow(x, e, p) % p
            total += v
        return total % p

    def substitute(self, images: Sequence["Polynomial"], target: PolyRing) -> "Polynomial":
        """Ring map sending variable i to ``images[i]`` (polynomials in ``target``)."""
        p = target.p
        out = {}
        powers = [dict() for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        for m, c in self.terms.items():
            term = {0: c}
            for i, e in enumerate(self.ring.decode(m)):
                if e:
                    term = mul_terms(term, power(i, e).terms, p)
                    if not term:
                        break
            for k, v in term.items():
                s = (out.get(k, 0) + v) % p
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Polynomial(target, out)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def add_terms(a: dict, b: dict, sign: int, p: int) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = (out.get(m, 0) + sign * c) % p
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def mul_terms(a: dict, b: dict, p: int) -> dict:
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = ma + mb
            out[m] = get(m, 0) + ca * cb
    return {m: c % p for m, c in out.items() if c % p}


def map_poly(f: Polynomial, target: PolyRing, var_map: Sequence[int] = None) -> Polynomial:
    """Re-encode ``f`` into ``target``; variable i goes to ``var_map[i]`` (by name if omitted)."""
    src = f.ring
    if var_map is None:
        var_map = [target.index(v) for v in src.variables]
    n = target.nvars
    out = {}
    for m, c in f.terms.items():
        e = [0] * n
        for i, x in enumerate(src.decode(m)):
            if x:
                e[var_map[i]] += x
        out[target.encode(e)] = c % target.p
    return Polynomial(target, {m: c for m, c in out.items() if c})


# --- text format -------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg, src="", pos=0, line=None):
        self.pos = pos
        self.line = line
        where = f"line {line}, column {pos + 1}" if line is not None else f"position {pos}"
        super().__init__(f"{msg} at {where}: {src!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(src: str):
    toks = []
    pos = 0
    while pos < len(src):
        mo = _TOKEN.match(src, pos)
        if mo.end() == pos or not mo.group(0).strip():
            break
        start = mo.start(1) if mo.group(1) else mo.start(2) if mo.group(2) else mo.start(3)
        if mo.group(1):
            toks.append(("int", int(mo.group(1)), start))
        elif mo.group(2):
            toks.append(("name", mo.group(2), start))
        else:
            ch = mo.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", src, start)
            toks.append(("op", ch, start))
        pos = mo.end()
    toks.append(("end", None, len(src)))
    return toks


class _Parser:
    # expr := ['+'|'-'] term (('+'|'-') term)*
    # term := factor (['*'] factor)*
    # factor := atom ['^' int]
    # atom := int | var | '(' expr ')'
    def __init__(self, src, ring, line=None):
        self.src = src
        self.ring = ring
        self.line = line
        self.toks = _tokenize(src) if line is None else self._tok_line()
        self.i = 0

    def _tok_line(self):
        try:
            return _tokenize(self.src)
        except ParseError as e:
            raise ParseError(str(e).split(" at ")[0], self.src, e.pos, self.line) from None

    def err(self, msg):
        raise ParseError(msg, self.src, self.toks[self.i][2], self.line)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self):
        if self.peek()[0] == "end":
            self.err("empty polynomial")
        f = self.expr()
        if self.peek()[0] != "end":
            self.err("unexpected token")
        return f

    def expr(self):
        sign = 1
        if self.peek()[:2] in (("op", "+"), ("op", "-")):
            sign = -1 if self.take()[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while True:
            t = self.peek()
            if t[:2] == ("op", "*"):
                self.take()
                f = f * self.factor()
            elif t[0] in ("int", "name") or t[:2] == ("op", "("):
                f = f * self.factor()
            else:
                return f

    def factor(self):
        f = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.take()
            if t[0] != "int":
                self.i -= 1
                self.err("exponent must be a natural number")
            f = f ** t[1]
        return f

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return self.ring.const(t[1])
        if t[0] == "name":
            if t[1] not in self.ring.variables:
                self.i -= 1
                self.err(f"unknown variable {t[1]!r}")
            return self.ring.gen(t[1])
        if t[:2] == ("op", "("):
            f = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.i -= 1
                self.err("expected ')'")
            return f
        self.i -= 1
        self.err("expected a number, variable or '('")


def parse_polynomial(src: str, ring: PolyRing, line: int = None) -> Polynomial:
    return _Parser(src, ring, line).parse()


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    ring = f.ring
    p = ring.p
    parts = []
    for c, e in f.sorted_terms():
        # print coefficients symmetrically around zero
        neg = c > p // 2
        a = p - c if neg else c
        mono = "*".join(v if x == 1 else f"{v}^{x}"
                        for v, x in zip(ring.variables, e) if x)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
