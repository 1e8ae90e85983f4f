"""Exact sparse multivariate polynomial arithmetic.

Coefficients live either in QQ (exact rationals via fractions.Fraction) or in a
prime field GF(p) with p < 2**31 (Python ints reduced mod p).  Polynomials are
canonical: no zero coefficients are ever stored, so two polynomials are equal
iff their term maps are equal.  Values are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Exponents = tuple  # tuple[int, ...]
Coeff = Union[Fraction, int]

_FIELD_LIMIT = 2**31


class PolynomialError(ValueError):
    """Malformed polynomial input or an ill-typed operation."""


class FieldMismatchError(PolynomialError):
    """Operands live over different coefficient fields or variable tuples."""


def is_prime(p: int) -> bool:
    """Deterministic Miller–Rabin, valid for p < 3_215_031_751 (covers 2**31)."""
    if p < 2:
        return False
    for small in (2, 3, 5, 7):
        if p % small == 0:
            return p == small
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def validate_field(field) -> int | None:
    """None means QQ; an int means GF(p) with p prime and < 2**31."""
    if field is None:
        return None
    p = int(field)
    if p >= _FIELD_LIMIT:
        raise PolynomialError(f"field modulus {p} exceeds 2**31")
    if not is_prime(p):
        raise PolynomialError(f"field modulus {p} is not prime")
    return p


def coeff_from(value, field: int | None) -> Coeff:
    """Coerce ints / Fractions / strings into a canonical coefficient."""
    if isinstance(value, str):
        value = value.strip()
        m = re.fullmatch(r"(-?\d+)\s*mod\s*(\d+)", value)
        if m:
            if field is None or int(m.group(2)) != field:
                raise FieldMismatchError(
                    f"coefficient {value!r} does not match field {field_name(field)}"
                )
            value = int(m.group(1))
        else:
            value = Fraction(value)
    if field is None:
        if isinstance(value, float):
            raise PolynomialError("floats are not exact; use Fraction or str")
        return Fraction(value)
    if isinstance(value, Fraction):
        den = value.denominator % field
        if den == 0:
            raise PolynomialError(
                f"denominator {value.denominator} is divisible by the modulus {field}"
            )
        return value.numerator * pow(den, field - 2, field) % field
    return int(value) % field


def coeff_inv(c: Coeff, field: int | None) -> Coeff:
    if field is None:
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / c
    c = c % field
    if c == 0:
        raise ZeroDivisionError("inverse of zero residue")
    return pow(c, field - 2, field)


def coeff_str(c: Coeff, field: int | None) -> str:
    return str(c) if field is None else f"{c} mod {field}"


def field_name(field: int | None) -> str:
    return "QQ" if field is None else f"GF({field})"


def field_from_name(name: str) -> int | None:
    name = name.strip()
    if name == "QQ":
        return None
    m = re.fullmatch(r"GF\((\d+)\)", name)
    if not m:
        raise PolynomialError(f"unknown field name {name!r}")
    return validate_field(int(m.group(1)))


def grevlex_key(exps: Exponents):
    """Sort key: max() under this key is the graded reverse lex leading monomial."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


class Polynomial:
    """Immutable sparse polynomial over QQ or GF(p)."""

    __slots__ = ("variables", "field", "_terms", "_hash")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponents, object] | Iterable[tuple[Exponents, object]] = (),
        field: int | None = None,
    ):
        vs = tuple(str(v) for v in variables)
        if len(set(vs)) != len(vs):
            raise PolynomialError(f"duplicate variable names in {vs}")
        object.__setattr__(self, "variables", vs)
        object.__setattr__(self, "field", validate_field(field))
        n = len(vs)
        clean: dict[Exponents, Coeff] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, raw in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise PolynomialError(
                    f"exponent vector {exps} has length {len(exps)}, expected {n}"
                )
            if any(e < 0 for e in exps):
                raise PolynomialError(f"negative exponent in {exps}")
            c = coeff_from(raw, self.field)
            if exps in clean:
                c = clean[exps] + c
                if self.field is not None:
                    c %= self.field
            if c:
                clean[exps] = c
            elif exps in clean:
                del clean[exps]
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Polynomial is immutable")

    # ------------------------------------------------------------- factories

    @classmethod
    def zero(cls, variables: Sequence[str], field: int | None = None) -> "Polynomial":
        return cls(variables, {}, field)

    @classmethod
    def constant(cls, variables: Sequence[str], value, field: int | None = None) -> "Polynomial":
        zero_exp = (0,) * len(tuple(variables))
        return cls(variables, {zero_exp: value}, field)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str, field: int | None = None) -> "Polynomial":
        vs = tuple(str(v) for v in variables)
        if name not in vs:
            raise PolynomialError(f"{name!r} is not among variables {vs}")
        exps = tuple(1 if v == name else 0 for v in vs)
        return cls(vs, {exps: 1}, field)

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Exponents, coeff=1,
                 field: int | None = None) -> "Polynomial":
        return cls(variables, {tuple(exps): coeff}, field)

    # ------------------------------------------------------------ inspection

    @property
    def nvariables(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def total_degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def terms(self) -> Iterator[tuple[Exponents, Coeff]]:
        """Terms in descending grevlex order."""
        for exps in sorted(self._terms, key=grevlex_key, reverse=True):
            yield exps, self._terms[exps]

    def term_map(self) -> dict[Exponents, Coeff]:
        return dict(self._terms)

    def coefficient(self, exps: Exponents) -> Coeff:
        exps = tuple(exps)
        default: Coeff = 0 if self.field is not None else Fraction(0)
        return self._terms.get(exps, default)

    def constant_term(self) -> Coeff:
        return self.coefficient((0,) * self.nvariables)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def min_degree_in(self, var_indices: Sequence[int]) -> int:
        """Least total degree of any term in the listed variables; -1 if zero."""
        if not self._terms:
            return -1
        idx = tuple(var_indices)
        return min(sum(e[i] for i in idx) for e in self._terms)

    # ------------------------------------------------------------ arithmetic

    def _check_compat(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise FieldMismatchError(
                f"variable tuples differ: {self.variables} vs {other.variables}"
            )
        if self.field != other.field:
            raise FieldMismatchError(
                f"fields differ: {field_name(self.field)} vs {field_name(other.field)}"
            )

    def _make(self, terms: dict[Exponents, Coeff]) -> "Polynomial":
        out = object.__new__(Polynomial)
        object.__setattr__(out, "variables", self.variables)
        object.__setattr__(out, "field", self.field)
        object.__setattr__(out, "_terms", terms)
        object.__setattr__(out, "_hash", None)
        return out

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self + Polynomial.constant(self.variables, other, self.field)
        self._check_compat(other)
        p = self.field
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            acc = terms.get(exps, 0) + c
            if p is not None:
                acc %= p
            if acc:
                terms[exps] = acc
            elif exps in terms:
                del terms[exps]
        return self._make(terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = self.field
        return self._make(
            {e: (-c if p is None else (p - c) % p) for e, c in self._terms.items()}
        )

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self - Polynomial.constant(self.variables, other, self.field)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, value) -> "Polynomial":
        c0 = coeff_from(value, self.field)
        if not c0:
            return self._make({})
        p = self.field
        return self._make(
            {e: (c * c0 if p is None else c * c0 % p) for e, c in self._terms.items()}
        )

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        return self.mul(other)

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def mul(self, other: "Polynomial", max_degree: int | None = None) -> "Polynomial":
        """Product, optionally truncated to total degree <= max_degree."""
        self._check_compat(other)
        p = self.field
        terms: dict[Exponents, Coeff] = {}
        small, large = (self._terms, other._terms)
        if len(small) > len(large):
            small, large = large, small
        for e1, c1 in small.items():
            d1 = sum(e1)
            for e2, c2 in large.items():
                if max_degree is not None and d1 + sum(e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = terms.get(e, 0) + c1 * c2
                if p is not None:
                    acc %= p
                if acc:
                    terms[e] = acc
                elif e in terms:
                    del terms[e]
        return self._make(terms)

    def __pow__(self, n: int) -> "Polynomial":
        return self.pow(int(n))

    def pow(self, n: int, max_degree: int | None = None) -> "Polynomial":
        if n < 0:
            raise PolynomialError("negative power of a polynomial")
        result = Polynomial.constant(self.variables, 1, self.field)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, max_degree)
            n >>= 1
            if n:
                base = base.mul(base, max_degree)
        return result

    def derivative(self, var: int | str) -> "Polynomial":
        i = self.variables.index(var) if isinstance(var, str) else int(var)
        if not 0 <= i < self.nvariables:
            raise PolynomialError(f"variable index {i} out of range")
        p = self.field
        terms: dict[Exponents, Coeff] = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e == 0:
                continue
            new = list(exps)
            new[i] = e - 1
            acc = c * e
            if p is not None:
                acc %= p
                if not acc:
                    continue
            terms[tuple(new)] = acc
        return self._make(terms)

    def truncate(self, max_degree: int) -> "Polynomial":
        """Keep only terms of total degree <= max_degree."""
        return self._make(
            {e: c for e, c in self._terms.items() if sum(e) <= max_degree}
        )

    def homogeneous_component(self, degree: int) -> "Polynomial":
        return self._make(
            {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def homogeneous_components(self) -> list["Polynomial"]:
        """List of graded pieces indexed by degree 0..total_degree (empty for 0)."""
        if not self._terms:
            return []
        top = self.total_degree()
        return [self.homogeneous_component(d) for d in range(top + 1)]

    # ----------------------------------------------------------- composition

    def substitute(self, images: Sequence["Polynomial"],
                   max_degree: int | None = None) -> "Polynomial":
        """Replace variable i by images[i]; all images share one ring."""
        images = list(images)
        if len(images) != self.nvariables:
            raise PolynomialError(
                f"substitution list has length {len(images)}, expected {self.nvariables}"
            )
        if not images:
            raise PolynomialError("cannot substitute into a ring with no variables")
        ring = images[0]
        for g in images[1:]:
            ring._check_compat(g)
        if ring.field != self.field:
            raise FieldMismatchError(
                f"substitution targets live over {field_name(ring.field)}, "
                f"expected {field_name(self.field)}"
            )
        one = Polynomial.constant(ring.variables, 1, ring.field)
        pow_cache: list[dict[int, Polynomial]] = [{0: one} for _ in images]
        acc = Polynomial.zero(ring.variables, ring.field)
        for exps, c in self._terms.items():
            term = one.scale(c)
            for i, e in enumerate(exps):
                if e == 0:
                    continue
                cache = pow_cache[i]
                if e not in cache:
                    best = max(k for k in cache if k <= e)
                    cur = cache[best]
                    for k in range(best + 1, e + 1):
                        cur = cur.mul(images[i], max_degree)
                        cache[k] = cur
                term = term.mul(cache[e], max_degree)
                if term.is_zero():
                    break
            acc = acc + term
        return acc

    def evaluate(self, point: Sequence) -> Coeff:
        """Exact value at a point with coordinates in the coefficient field."""
        if len(point) != self.nvariables:
            raise PolynomialError(
                f"point has dimension {len(point)}, expected {self.nvariables}"
            )
        coords = [coeff_from(x, self.field) for x in point]
        p = self.field
        total: Coeff = Fraction(0) if p is None else 0
        for exps, c in self._terms.items():
            v = c
            for x, e in zip(coords, exps):
                if e:
                    v = v * (x ** e)
            total = total + v
        return total if p is None else total % p

    def taylor_shift(self, point: Sequence) -> "Polynomial":
        """g with g(z) = f(z + a); in particular g(0) = f(a)."""
        if len(point) != self.nvariables:
            raise PolynomialError(
                f"shift vector has dimension {len(point)}, expected {self.nvariables}"
            )
        images = []
        for i, a in enumerate(point):
            v = Polynomial.variable(self.variables, self.variables[i], self.field)
            images.append(v + Polynomial.constant(self.variables, a, self.field))
        return self.substitute(images)

    def to_gf(self, p: int) -> "Polynomial":
        """Reduce a rational polynomial mod p (error if a denominator divides p)."""
        p = validate_field(p)
        if self.field is not None:
            if self.field == p:
                return self
            raise FieldMismatchError("polynomial already lives over a prime field")
        return Polynomial(self.variables, self._terms, p)

    # -------------------------------------------------------------- equality

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.field == other.field
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.variables, self.field, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # ----------------------------------------------------------------- text

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for exps, c in self.terms():
            factors = [
                f"{v}^{e}" if e > 1 else v
                for v, e in zip(self.variables, exps)
                if e
            ]
            if self.field is None:
                sign = "-" if c < 0 else "+"
                mag = -c if c < 0 else c
                body = "*".join(([] if mag == 1 and factors else [str(mag)]) + factors)
            else:
                sign = "+"
                body = "*".join(([] if c == 1 and factors else [str(c)]) + factors)
            parts.append((sign, body or "0"))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({field_name(self.field)}[{','.join(self.variables)}]: {self})"

    @classmethod
    def parse(cls, text: str, variables: Sequence[str],
              field: int | None = None) -> "Polynomial":
        """Parse 'x1^2*x2 - 3/2*x3 + 7'.  Products need '*', powers use '^'."""
        vs = tuple(str(v) for v in variables)
        index = {v: i for i, v in enumerate(vs)}
        tokens = re.findall(r"\d+/\d+|\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-|\S", text)
        pairs: list[tuple[Exponents, object]] = []
        pos = 0

        def peek():
            return tokens[pos] if pos < len(tokens) else None

        while pos < len(tokens):
            sign = 1
            while peek() in ("+", "-"):
                if tokens[pos] == "-":
                    sign = -sign
                pos += 1
            if peek() is None:
                raise PolynomialError(f"dangling sign in {text!r}")
            coeff = Fraction(sign)
            exps = [0] * len(vs)
            while True:
                tok = peek()
                if tok is None or tok in ("+", "-"):
                    break
                if tok == "*":
                    pos += 1
                    continue
                if re.fullmatch(r"\d+/\d+|\d+", tok):
                    coeff *= Fraction(tok)
                    pos += 1
                elif tok in index:
                    pos += 1
                    power = 1
                    if peek() == "^":
                        pos += 1
                        if peek() is None or not re.fullmatch(r"\d+", tokens[pos]):
                            raise PolynomialError(f"bad exponent in {text!r}")
                        power = int(tokens[pos])
                        pos += 1
                    exps[index[tok]] += power
                else:
                    raise PolynomialError(f"unexpected token {tok!r} in {text!r}")
            pairs.append((tuple(exps), coeff))
        return cls(vs, pairs, field)

    # ----------------------------------------------------------------- json

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "field": field_name(self.field),
            "terms": [
                [coeff_str(c, self.field), list(e)] for e, c in self.terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Polynomial":
        try:
            variables = data["variables"]
            field = field_from_name(data.get("field", "QQ"))
            terms = [(tuple(e), c) for c, e in data["terms"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PolynomialError(f"malformed polynomial record: {exc}") from exc
        return cls(variables, terms, field)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> "Polynomial":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PolynomialError(f"invalid JSON: {exc}") from exc
        return cls.from_json_dict(data)


def formal_inverse_compose(images: Sequence[Polynomial], max_degree: int) -> list[Polynomial]:
    """Invert a formal coordinate change with identity linear part.

    Input: images[i] = z_i + h_i(z) with h_i containing only terms of degree >= 2.
    Output: polynomials s_i with images[i](s_1, ..., s_n) = z_i modulo terms of
    total degree > max_degree (and symmetrically, s is the truncated inverse map).
    """
    images = list(images)
    if not images:
        raise PolynomialError("empty coordinate change")
    ring = images[0]
    n = ring.nvariables
    if len(images) != n:
        raise PolynomialError(
            f"coordinate change has {len(images)} components for {n} variables"
        )
    if max_degree < 1:
        raise PolynomialError("jet order must be at least 1")
    variables, field = ring.variables, ring.field
    identity = [
        Polynomial.variable(variables, v, field) for v in variables
    ]
    tails = []
    for i, phi in enumerate(images):
        identity[i]._check_compat(phi)
        low = phi.truncate(1)
        if low != identity[i]:
            raise PolynomialError(
                f"component {i} must be z_{i+1} + higher-order terms, got low part {low}"
            )
        tails.append(phi - identity[i])
    inverse = list(identity)
    for _ in range(max_degree):
        inverse = [
            identity[i] - tails[i].substitute(inverse, max_degree)
            for i in range(n)
        ]
    # The composition must collapse to the identity within the jet order.
    for i in range(n):
        check = images[i].substitute(inverse, max_degree)
        if check != identity[i].truncate(max_degree):
            raise ArithmeticError(
                f"formal inverse failed verification on component {i}"
            )
    return inverse
