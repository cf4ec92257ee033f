"""
Sparse Polynomial - Exact multivariate polynomials with big-integer coefficients
"""

import re
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from modules import DimensionError, DomainError, IndexOutOfRangeError, ResourceLimitError

Exponent = Tuple[int, ...]

DEFAULT_MAX_TERMS = 2_000_000

_TERM_PATTERN = re.compile(r'([+-]?)\s*([^+-]+)')
_FACTOR_PATTERN = re.compile(r'^(?:(\d+)|x(\d+)(?:\^(\d+))?)$')


class SparsePoly:
    """Immutable polynomial in M variables, stored as {exponent vector: nonzero int}"""

    __slots__ = ("M", "_terms", "_hash")

    def __init__(self, M: int, terms: Optional[Mapping[Sequence[int], int]] = None):
        if not isinstance(M, int) or M < 1:
            raise DomainError(f"number of variables must be a positive integer, got {M!r}")

        cleaned: Dict[Exponent, int] = {}
        for exponent, coefficient in (terms or {}).items():
            key = tuple(int(e) for e in exponent)
            if len(key) != M:
                raise DimensionError(f"exponent {key} has length {len(key)}, expected {M}")
            if any(e < 0 for e in key):
                raise DomainError(f"negative exponent in {key}")
            value = cleaned.get(key, 0) + int(coefficient)
            if value:
                cleaned[key] = value
            else:
                cleaned.pop(key, None)

        self.M = M
        self._terms = cleaned
        self._hash: Optional[int] = None

    # Constructors

    @classmethod
    def _trusted(cls, M: int, terms: Dict[Exponent, int]) -> "SparsePoly":
        # terms already keyed by valid tuples with no zero coefficients
        poly = cls.__new__(cls)
        poly.M = M
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def zero(cls, M: int) -> "SparsePoly":
        return cls(M)

    @classmethod
    def constant(cls, M: int, value: int) -> "SparsePoly":
        return cls(M, {(0,) * M: value})

    @classmethod
    def one(cls, M: int) -> "SparsePoly":
        return cls.constant(M, 1)

    @classmethod
    def variable(cls, M: int, r: int) -> "SparsePoly":
        """The variable x_r, with r counted from 1"""
        if not 1 <= r <= M:
            raise IndexOutOfRangeError(f"variable index {r} outside 1..{M}")
        exponent = [0] * M
        exponent[r - 1] = 1
        return cls(M, {tuple(exponent): 1})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: int = 1) -> "SparsePoly":
        return cls(len(exponent), {tuple(exponent): coefficient})

    # Mapping-like access

    @property
    def terms(self) -> Mapping[Exponent, int]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, int]]:
        """Terms in lexicographic order of exponent vectors"""
        for exponent in sorted(self._terms):
            yield exponent, self._terms[exponent]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, exponent: Sequence[int]) -> int:
        key = tuple(exponent)
        if len(key) != self.M:
            raise DimensionError(f"exponent {key} has length {len(key)}, expected {self.M}")
        return self._terms.get(key, 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def max_exponents(self) -> Exponent:
        if not self._terms:
            return (0,) * self.M
        return tuple(max(e[r] for e in self._terms) for r in range(self.M))

    # Arithmetic

    def _check_same_dimension(self, other: "SparsePoly") -> None:
        if self.M != other.M:
            raise DimensionError(f"polynomials in {self.M} and {other.M} variables")

    def _coerce(self, other: Union["SparsePoly", int]) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check_same_dimension(other)
            return other
        if isinstance(other, int):
            return SparsePoly.constant(self.M, other)
        return NotImplemented

    def __add__(self, other: Union["SparsePoly", int]) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        result = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            value = result.get(exponent, 0) + coefficient
            if value:
                result[exponent] = value
            else:
                del result[exponent]
        return SparsePoly._trusted(self.M, result)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._trusted(self.M, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["SparsePoly", int]) -> "SparsePoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "SparsePoly":
        return (-self) + other

    def multiply(self, other: "SparsePoly", cap: Optional[Sequence[int]] = None) -> "SparsePoly":
        """Product; with cap, terms whose exponent exceeds cap in any position are dropped"""
        self._check_same_dimension(other)
        limit = tuple(cap) if cap is not None else None
        result: Dict[Exponent, int] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exponent = tuple(a + b for a, b in zip(ea, eb))
                if limit is not None and any(e > c for e, c in zip(exponent, limit)):
                    continue
                result[exponent] = result.get(exponent, 0) + ca * cb
        return SparsePoly._trusted(self.M, {e: c for e, c in result.items() if c})

    def __mul__(self, other: Union["SparsePoly", int]) -> "SparsePoly":
        if isinstance(other, int):
            if other == 0:
                return SparsePoly.zero(self.M)
            return SparsePoly._trusted(self.M, {e: c * other for e, c in self._terms.items()})
        if isinstance(other, SparsePoly):
            return self.multiply(other)
        return NotImplemented

    __rmul__ = __mul__

    def power(self, n: int, max_terms: int = DEFAULT_MAX_TERMS,
              cap: Optional[Sequence[int]] = None) -> "SparsePoly":
        """n-th power by repeated squaring, refusing to grow beyond max_terms"""
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"exponent must be a nonnegative integer, got {n!r}")
        result = SparsePoly.one(self.M)
        base = self
        while n:
            if n & 1:
                result = result.multiply(base, cap)
                _guard_terms(result, max_terms)
            n >>= 1
            if n:
                base = base.multiply(base, cap)
                _guard_terms(base, max_terms)
        return result

    def __pow__(self, n: int) -> "SparsePoly":
        return self.power(n)

    def exact_divide(self, divisor: int) -> "SparsePoly":
        """Divide every coefficient by an integer that divides all of them"""
        if divisor == 0:
            raise DomainError("division by zero")
        result = {}
        for exponent, coefficient in self._terms.items():
            quotient, remainder = divmod(coefficient, divisor)
            if remainder:
                raise DomainError(f"coefficient {coefficient} of {exponent} not divisible by {divisor}")
            result[exponent] = quotient
        return SparsePoly._trusted(self.M, result)

    def partial_derivative(self, r: int) -> "SparsePoly":
        """Formal derivative with respect to x_r, r counted from 1"""
        if not 1 <= r <= self.M:
            raise IndexOutOfRangeError(f"variable index {r} outside 1..{self.M}")
        i = r - 1
        result = {}
        for exponent, coefficient in self._terms.items():
            if exponent[i] == 0:
                continue
            lowered = exponent[:i] + (exponent[i] - 1,) + exponent[i + 1:]
            result[lowered] = coefficient * exponent[i]
        return SparsePoly._trusted(self.M, result)

    def substitute_signs(self) -> "SparsePoly":
        """The polynomial with x_r replaced by (-1)^r x_r"""
        result = {}
        for exponent, coefficient in self._terms.items():
            odd_degree = sum(exponent[r - 1] for r in range(1, self.M + 1, 2))
            result[exponent] = -coefficient if odd_degree % 2 else coefficient
        return SparsePoly._trusted(self.M, result)

    def restrict_last_to_zero(self) -> "SparsePoly":
        """Drop x_M: keep terms without x_M as a polynomial in M-1 variables"""
        if self.M < 2:
            raise DimensionError("cannot drop the only variable")
        return SparsePoly(self.M - 1, {e[:-1]: c for e, c in self._terms.items() if e[-1] == 0})

    def evaluate(self, x: Sequence[Union[int, Fraction]]) -> Union[int, Fraction]:
        """Exact value at a point of ints or Fractions (floats are converted exactly)"""
        if len(x) != self.M:
            raise DimensionError(f"point has {len(x)} coordinates, expected {self.M}")
        point = [Fraction(v) for v in x]
        total = Fraction(0)
        for exponent, coefficient in self._terms.items():
            term = Fraction(coefficient)
            for value, e in zip(point, exponent):
                if e:
                    term *= value ** e
            total += term
        return total.numerator if total.denominator == 1 else total

    # Comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = SparsePoly.constant(self.M, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.M == other.M and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.M, frozenset(self._terms.items())))
        return self._hash

    # Text formats

    def dump(self) -> str:
        """One `coefficient<TAB>e_1,...,e_M` line per term, lexicographic order"""
        return "".join(f"{c}\t{','.join(map(str, e))}\n" for e, c in self.items())

    @classmethod
    def parse_dump(cls, text: str, M: Optional[int] = None) -> "SparsePoly":
        terms: Dict[Exponent, int] = {}
        for line_no, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                coefficient, exponent_text = line.split("\t")
                exponent = tuple(int(e) for e in exponent_text.split(","))
            except ValueError:
                raise DomainError(f"malformed dump line {line_no}: {line!r}")
            if M is None:
                M = len(exponent)
            terms[exponent] = terms.get(exponent, 0) + int(coefficient)
        if M is None:
            raise DomainError("cannot infer the number of variables from an empty dump")
        return cls(M, terms)

    @classmethod
    def parse(cls, text: str, M: Optional[int] = None) -> "SparsePoly":
        """Parse expressions such as `1 + x1`, `3*x1^2*x2 - 2*x3`"""
        compact = text.replace(" ", "")
        if not compact:
            raise DomainError("empty polynomial expression")

        parsed = []
        position = 0
        for match in _TERM_PATTERN.finditer(compact):
            if match.start() != position:
                raise DomainError(f"cannot parse polynomial near {compact[position:]!r}")
            position = match.end()
            sign = -1 if match.group(1) == "-" else 1
            coefficient = sign
            powers: Dict[int, int] = {}
            for factor in match.group(2).split("*"):
                factor_match = _FACTOR_PATTERN.match(factor)
                if not factor_match:
                    raise DomainError(f"cannot parse factor {factor!r}")
                number, index, exponent = factor_match.groups()
                if number is not None:
                    coefficient *= int(number)
                else:
                    r = int(index)
                    if r < 1:
                        raise IndexOutOfRangeError("variables are numbered from x1")
                    powers[r] = powers.get(r, 0) + int(exponent or 1)
            parsed.append((coefficient, powers))
        if position != len(compact):
            raise DomainError(f"cannot parse polynomial near {compact[position:]!r}")

        highest = max((r for _, powers in parsed for r in powers), default=1)
        if M is None:
            M = highest
        elif highest > M:
            raise IndexOutOfRangeError(f"x{highest} used in a polynomial of {M} variables")

        terms: Dict[Exponent, int] = {}
        for coefficient, powers in parsed:
            exponent = tuple(powers.get(r, 0) for r in range(1, M + 1))
            terms[exponent] = terms.get(exponent, 0) + coefficient
        return cls(M, terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exponent, coefficient in self.items():
            factors = [f"x{r}" if e == 1 else f"x{r}^{e}"
                       for r, e in enumerate(exponent, 1) if e]
            if not factors:
                body = str(abs(coefficient))
            elif abs(coefficient) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(coefficient))] + factors)
            pieces.append(("-" if coefficient < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"SparsePoly(M={self.M}, {self})"


def _guard_terms(poly: SparsePoly, max_terms: int) -> None:
    if len(poly) > max_terms:
        raise ResourceLimitError(f"polynomial grew to {len(poly)} terms (limit {max_terms})")


def poly_add(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a + b


def poly_mul(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    return a.multiply(b)


def poly_pow(a: SparsePoly, n: int, max_terms: int = DEFAULT_MAX_TERMS) -> SparsePoly:
    return a.power(n, max_terms=max_terms)


def coeff(a: SparsePoly, e: Sequence[int]) -> int:
    return a.coeff(e)


def partial_derivative(a: SparsePoly, r: int) -> SparsePoly:
    return a.partial_derivative(r)

