"""Exact coefficient arithmetic over the field generated by rationals, square roots,
half-integer powers of pi, and powers of i.

A single CoeffAtom encodes the value

    rat * sqrt(radicand) * pi**(pi_half/2) * i**i_pow

with rat and radicand rational (radicand > 0) and pi_half, i_pow integers.  Every
constant produced by the reduction engine (Clebsch-Gordan coefficients, 3j symbols,
coupling normalizations, spherical prefactors) lives in this set, so all engine
arithmetic is exact; floats appear only in the numeric cross-check oracle.

A CoeffSum is a canonical sum of atoms.  Internally atoms are held in a strict
canonical form — square-free positive *integer* radicand (denominator folded into
rat) and i_pow folded to {0, 1} with the sign absorbed into rat — so that equal
values always collide on the same key (radicand, pi_half, i_pow) and cancellation
to zero is structural.  The public normalize_atom() is gentler (it keeps a rational
radicand and only reduces i_pow mod 4); both normal forms represent the same value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


# ---------------------------------------------------------------------------
# Integer helpers
# ---------------------------------------------------------------------------

def factorial(n: int) -> int:
    """n! for n >= 0."""
    if n < 0:
        raise ValueError(f"factorial of negative integer {n}")
    return math.factorial(n)


def double_factorial(n: int) -> int:
    """n!! for n >= -1, with (-1)!! == 0!! == 1.

    The degenerate value (-1)!! = +1 is relied on throughout the coupling
    normalizations (it arises whenever a triple is 'stretched' so that one of
    the J-type integers hits -1).
    """
    if n < -1:
        raise ValueError(f"double factorial of {n} not defined here")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def square_free_split(n: int) -> tuple[int, int]:
    """Write n = s**2 * f with f square-free; return (s, f).  Requires n >= 1.

    Trial division is fine here: every radicand the engine produces is a ratio
    of factorials/double factorials, hence smooth.
    """
    if n < 1:
        raise ValueError(f"square_free_split requires a positive integer, got {n}")
    s = 1
    f = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                f *= d
        d += 1 if d == 2 else 2
    f *= n  # leftover prime (or 1)
    return s, f


# ---------------------------------------------------------------------------
# CoeffAtom
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffAtom:
    """rat * sqrt(radicand) * pi**(pi_half/2) * i**i_pow, all exact."""

    rat: Fraction
    radicand: Fraction = Fraction(1)
    pi_half: int = 0
    i_pow: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "rat", Fraction(self.rat))
        object.__setattr__(self, "radicand", Fraction(self.radicand))
        if self.radicand <= 0:
            raise ValueError(f"radicand must be positive, got {self.radicand}")

    # -- conversion -------------------------------------------------------

    def to_complex(self) -> complex:
        v = float(self.rat) * math.sqrt(float(self.radicand)) * math.pi ** (self.pi_half / 2)
        return v * (1j ** (self.i_pow % 4))

    def to_float(self):
        """Float value; returns a complex number if the atom is imaginary."""
        z = self.to_complex()
        if z.imag == 0.0:
            return z.real
        return z

    def __str__(self) -> str:  # debugging aid only; display lives in parser.py
        return (f"CoeffAtom({self.rat}, sqrt({self.radicand}), "
                f"pi^({self.pi_half}/2), i^{self.i_pow})")


def atom(rat, radicand=1, pi_half: int = 0, i_pow: int = 0) -> CoeffAtom:
    """Convenience constructor, normalized."""
    return normalize_atom(CoeffAtom(Fraction(rat), Fraction(radicand), pi_half, i_pow))


ATOM_ONE = CoeffAtom(Fraction(1))
ATOM_ZERO = CoeffAtom(Fraction(0))


def normalize_atom(a: CoeffAtom) -> CoeffAtom:
    """Pull square factors out of the radicand and reduce i_pow mod 4.

    Examples: sqrt(8) -> 2*sqrt(2); (1/3)*sqrt(9/2) -> sqrt(1/2); i^6 -> i^2.
    Idempotent.  A zero atom collapses to the unique zero.
    """
    if a.rat == 0:
        return ATOM_ZERO
    sn, fn = square_free_split(a.radicand.numerator)
    sd, fd = square_free_split(a.radicand.denominator)
    return CoeffAtom(a.rat * Fraction(sn, sd), Fraction(fn, fd), a.pi_half, a.i_pow % 4)


def atom_mul(a: CoeffAtom, b: CoeffAtom) -> CoeffAtom:
    """Exact product of two atoms, normalized."""
    return normalize_atom(CoeffAtom(
        a.rat * b.rat,
        a.radicand * b.radicand,
        a.pi_half + b.pi_half,
        a.i_pow + b.i_pow,
    ))


def atom_canonical(a: CoeffAtom) -> CoeffAtom:
    """Strict canonical form used for CoeffSum keys.

    radicand becomes a square-free positive integer (sqrt(n/d) = sqrt(n*d)/d),
    and i_pow is folded into {0, 1} with the sign moved into rat.  Distinct
    strict forms therefore always denote distinct values.
    """
    a = normalize_atom(a)
    if a.rat == 0:
        return ATOM_ZERO
    n, d = a.radicand.numerator, a.radicand.denominator
    s, f = square_free_split(n * d)
    rat = a.rat * Fraction(s, d)
    i_pow = a.i_pow % 4
    if i_pow >= 2:
        rat = -rat
        i_pow -= 2
    return CoeffAtom(rat, Fraction(f), a.pi_half, i_pow)


def _key(a: CoeffAtom) -> tuple[int, int, int]:
    # a must be in strict canonical form
    return (a.radicand.numerator, a.pi_half, a.i_pow)


# ---------------------------------------------------------------------------
# CoeffSum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffSum:
    """Canonical sum of strict-form atoms, keyed by (radicand, pi_half, i_pow)."""

    atoms: tuple[CoeffAtom, ...] = ()

    @staticmethod
    def from_atoms(atoms) -> "CoeffSum":
        acc: dict[tuple[int, int, int], Fraction] = {}
        meta: dict[tuple[int, int, int], CoeffAtom] = {}
        for raw in atoms:
            a = atom_canonical(raw)
            if a.rat == 0:
                continue
            k = _key(a)
            acc[k] = acc.get(k, Fraction(0)) + a.rat
            meta[k] = a
        out = []
        for k in sorted(acc):
            if acc[k] != 0:
                m = meta[k]
                out.append(CoeffAtom(acc[k], m.radicand, m.pi_half, m.i_pow))
        return CoeffSum(tuple(out))

    @staticmethod
    def from_atom(a: CoeffAtom) -> "CoeffSum":
        return CoeffSum.from_atoms([a])

    # -- predicates -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    @property
    def is_real(self) -> bool:
        return all(a.i_pow == 0 for a in self.atoms)

    def is_single(self) -> bool:
        return len(self.atoms) == 1

    # -- arithmetic -------------------------------------------------------

    def add(self, other: "CoeffSum") -> "CoeffSum":
        return CoeffSum.from_atoms(self.atoms + other.atoms)

    def neg(self) -> "CoeffSum":
        return CoeffSum(tuple(CoeffAtom(-a.rat, a.radicand, a.pi_half, a.i_pow)
                              for a in self.atoms))

    def scale(self, factor) -> "CoeffSum":
        """Multiply by a CoeffAtom, Fraction, or int."""
        if isinstance(factor, CoeffAtom):
            return CoeffSum.from_atoms(atom_mul(a, factor) for a in self.atoms)
        f = Fraction(factor)
        if f == 0:
            return SUM_ZERO
        return CoeffSum(tuple(CoeffAtom(a.rat * f, a.radicand, a.pi_half, a.i_pow)
                              for a in self.atoms))

    def mul(self, other: "CoeffSum") -> "CoeffSum":
        return CoeffSum.from_atoms(atom_mul(a, b) for a in self.atoms for b in other.atoms)

    # -- conversion -------------------------------------------------------

    def to_complex(self) -> complex:
        return sum((a.to_complex() for a in self.atoms), 0j)

    def to_float(self):
        z = self.to_complex()
        if z.imag == 0.0:
            return z.real
        return z


SUM_ZERO = CoeffSum(())
SUM_ONE = CoeffSum.from_atom(ATOM_ONE)


# ---------------------------------------------------------------------------
# Derived constructors used across the engine
# ---------------------------------------------------------------------------

def sqrt_rational(x) -> CoeffAtom:
    """sqrt(x) for rational x > 0, as a normalized atom."""
    return atom(1, Fraction(x))


def hat(l: int) -> CoeffAtom:
    """sqrt(2l+1)."""
    return sqrt_rational(2 * l + 1)


# ---------------------------------------------------------------------------
# JSON (de)serialization of atoms
# ---------------------------------------------------------------------------

def atom_to_json(a: CoeffAtom) -> dict:
    return {
        "num": a.rat.numerator,
        "den": a.rat.denominator,
        "radicand_num": a.radicand.numerator,
        "radicand_den": a.radicand.denominator,
        "pi_half": a.pi_half,
        "i_pow": a.i_pow,
    }


def atom_from_json(obj: dict) -> CoeffAtom:
    return CoeffAtom(
        Fraction(obj["num"], obj["den"]),
        Fraction(obj["radicand_num"], obj["radicand_den"]),
        obj["pi_half"],
        obj["i_pow"],
    )
