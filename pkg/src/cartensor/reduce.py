"""Reduction pipeline: coupled-harmonic expression trees -> Cartesian polynomials.

An expression is a tree of Harmonic leaves Y^[l](v) (contrastandard-phase
spherical harmonics of distinct unit vectors) and Couple nodes [left x right][L]
(standard angular-momentum coupling).  The reduction maps the tree bottom-up to
exact Cartesian tensor polynomials:

  * a leaf Y^[l](v) becomes the symmetric traceless tensor harmonic_tensor(v,l);
  * an interior coupling of ranks (l1,l2)->L applies couple_even or couple_odd
    (by parity of l1+l2+L) times an exact scalar factor q or r that restores the
    normalization of the true coupled harmonics;
  * a root coupling to L=0 contracts its two equal-rank children fully and
    multiplies the scalar factor S, yielding the genuine scalar value (a
    polynomial in dot products, plus one box product per term when the summed
    harmonic degrees are odd).

For any root of rank L > 0 (and for a bare harmonic root), the result is the
rescaled Cartesian tensor: the true spherical components are recovered by the
rho(L) * U^[L] bridge implemented in the oracle module.

Every reduction factor is exact; results are exactly real (the i's of the
contrastandard phases cancel, living only in the bridge).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .coeff import CoeffAtom, atom, atom_canonical, double_factorial, factorial
from .wigner import three_j, triangle_ok
from .tensor import (TensorPoly, couple_even, couple_odd, full_contract,
                     harmonic_tensor, poly_scale)


# ---------------------------------------------------------------------------
# Expression AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Harmonic:
    l: int
    v: str
    span: Optional[object] = field(default=None, compare=False)


@dataclass(frozen=True)
class Couple:
    left: "CouplingExpr"
    right: "CouplingExpr"
    L: int
    span: Optional[object] = field(default=None, compare=False)


CouplingExpr = Union[Harmonic, Couple]


def expr_rank(expr: CouplingExpr) -> int:
    return expr.l if isinstance(expr, Harmonic) else expr.L


def expr_leaves(expr: CouplingExpr) -> list:
    if isinstance(expr, Harmonic):
        return [expr]
    return expr_leaves(expr.left) + expr_leaves(expr.right)


def expr_degree_sum(expr: CouplingExpr) -> int:
    return sum(leaf.l for leaf in expr_leaves(expr))


def validate_expr(expr: CouplingExpr) -> None:
    """Raise ValueError on any triangle violation or repeated vector symbol."""
    seen = set()
    for leaf in expr_leaves(expr):
        if leaf.l < 0:
            raise ValueError(f"negative harmonic degree {leaf.l}")
        if leaf.v in seen:
            raise ValueError(f"vector symbol '{leaf.v}' used more than once")
        seen.add(leaf.v)

    def rec(node):
        if isinstance(node, Harmonic):
            return node.l
        l1, l2 = rec(node.left), rec(node.right)
        if not triangle_ok(l1, l2, node.L):
            raise ValueError(
                f"triangle rule violated: cannot couple ranks ({l1},{l2}) to {node.L}")
        return node.L

    rec(expr)


# ---------------------------------------------------------------------------
# Exact scalar factors
# ---------------------------------------------------------------------------

def _abs_atom(a: CoeffAtom) -> CoeffAtom:
    return CoeffAtom(abs(a.rat), a.radicand, a.pi_half, a.i_pow)


def _hat2_over_sqrt4pi(l1: int, l2: int) -> CoeffAtom:
    # sqrt((2l1+1)(2l2+1)) / sqrt(4 pi)
    return atom(Fraction(1, 2), Fraction((2 * l1 + 1) * (2 * l2 + 1)), -1)


def _jays(l1: int, l2: int, l3: int) -> tuple[int, int, int, int]:
    J = l1 + l2 + l3
    return J, J - 2 * l1 - 1, J - 2 * l2 - 1, J - 2 * l3 - 1


@lru_cache(maxsize=None)
def q_factor(l1: int, l2: int, l3: int) -> CoeffAtom:
    """Scalar factor for an even-parity interior coupling.

    Computed two independent ways (via the 3j symbol at zero projections and
    via a closed double-factorial form) and asserted equal."""
    if (l1 + l2 + l3) % 2:
        raise ValueError("q_factor requires even l1+l2+l3")
    via_3j = _mul(_hat2_over_sqrt4pi(l1, l2), _abs_atom(three_j(l1, l2, l3, 0, 0, 0)))
    J, J1, J2, J3 = _jays(l1, l2, l3)
    rad = Fraction(
        double_factorial(J1) * double_factorial(J2) * double_factorial(J3)
        * factorial(J // 2),
        factorial((J1 + 1) // 2) * factorial((J2 + 1) // 2)
        * factorial((J3 + 1) // 2) * double_factorial(J + 1),
    )
    closed = _mul(_hat2_over_sqrt4pi(l1, l2), atom(1, rad))
    if atom_canonical(via_3j) != atom_canonical(closed):
        raise AssertionError(f"q_factor forms disagree at ({l1},{l2},{l3})")
    return atom_canonical(via_3j)


@lru_cache(maxsize=None)
def r_factor(l1: int, l2: int, l3: int) -> CoeffAtom:
    """Scalar factor for an odd-parity interior coupling; dual-form asserted."""
    if (l1 + l2 + l3) % 2 == 0:
        raise ValueError("r_factor requires odd l1+l2+l3")
    grad = atom(Fraction(1, 2 * l3), Fraction(l1 * (l1 + 1) * l2 * (l2 + 1)))
    via_3j = _mul(_mul(_hat2_over_sqrt4pi(l1, l2), grad),
                  _abs_atom(three_j(l1, l2, l3, 1, -1, 0)))
    J, J1, J2, J3 = _jays(l1, l2, l3)
    rad = Fraction(
        double_factorial(J1 + 1) * double_factorial(J2 + 1)
        * double_factorial(J3 + 1) * factorial((J + 1) // 2),
        factorial(J1 // 2) * factorial(J2 // 2) * factorial(J3 // 2)
        * double_factorial(J),
    )
    closed = _mul(_hat2_over_sqrt4pi(l1, l2), atom(Fraction(1, 2 * l3), rad))
    if atom_canonical(via_3j) != atom_canonical(closed):
        raise AssertionError(f"r_factor forms disagree at ({l1},{l2},{l3})")
    return atom_canonical(via_3j)


def s_factor(L: int) -> CoeffAtom:
    """Scalar factor for the root coupling of two rank-L tensors to zero."""
    return atom(Fraction(factorial(L), 4 * double_factorial(2 * L - 1)),
                Fraction(2 * L + 1), -2)


def rho(l: int) -> CoeffAtom:
    """Rescale constant between harmonic_tensor and the true harmonics:
    Y^[l]_m(v) = rho(l) * sum U^[l]_{m, i...} harmonic_tensor(v, l)_{i...}."""
    return atom(Fraction(1, 2),
                Fraction((2 * l + 1) * factorial(l), double_factorial(2 * l - 1)),
                -1)


def _mul(a: CoeffAtom, b: CoeffAtom) -> CoeffAtom:
    from .coeff import atom_mul
    return atom_mul(a, b)


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionResult:
    expr: CouplingExpr
    poly: TensorPoly
    parity: str               # "even" | "odd": parity of (sum of degrees - rank)
    factor_trace: tuple       # ((label, CoeffAtom), ...) in application order
    true_scalar: bool         # root coupling to L=0 (no spherical bridge)

    @property
    def rank(self) -> int:
        return self.poly.rank


def reduce_expr(expr: CouplingExpr) -> ReductionResult:
    """Reduce an expression tree to its exact Cartesian polynomial."""
    validate_expr(expr)
    trace: list = []

    def walk(node: CouplingExpr, is_root: bool) -> TensorPoly:
        if isinstance(node, Harmonic):
            return harmonic_tensor(node.v, node.l)
        pl = walk(node.left, False)
        pr = walk(node.right, False)
        l1, l2, L = pl.rank, pr.rank, node.L
        if is_root and L == 0:
            f = s_factor(l1)
            trace.append((f"S[{l1}]", f))
            return poly_scale(full_contract(pl, pr), f)
        if (l1 + l2 + L) % 2 == 0:
            f = q_factor(l1, l2, L)
            trace.append((f"q[{l1},{l2},{L}]", f))
            return poly_scale(couple_even(pl, pr, L), f)
        f = r_factor(l1, l2, L)
        trace.append((f"r[{l1},{l2},{L}]", f))
        return poly_scale(couple_odd(pl, pr, L), f)

    poly = walk(expr, True)
    parity = "odd" if (expr_degree_sum(expr) - poly.rank) % 2 else "even"
    true_scalar = isinstance(expr, Couple) and expr.L == 0
    return ReductionResult(expr, poly, parity, tuple(trace), true_scalar)


# ---------------------------------------------------------------------------
# Closed-form rank-1 pair identities
# ---------------------------------------------------------------------------

def reduce_pair_identities(l1: int, l2: int, samples: int = 50,
                           seed: int | None = None) -> dict:
    """Numerically confirm the closed rank-1 forms for [Y^[l1](a) x Y^[l2](b)][1].

    Two families are covered: equal degrees (l, l), whose value is
      (-i/4pi) sqrt(3(2l+1)/(l(l+1))) P_l'(a.b) (a x b)_m,
    and consecutive degrees (l-1, l), whose value is
      (-i/4pi) sqrt(3/l) [P_l'(a.b) b_m - ((l-1) P_{l-2}(a.b)
                          + (a.b) P_{l-2}'(a.b)) a_m],
    with standard spherical components on the right-hand sides and the
    conventions P_{-1} = 1, P_{-1}' = 0.  Returns a small report dict; the
    comparison is against the direct oracle evaluation of the coupled
    harmonics, so it is independent of the symbolic engine.
    """
    from . import oracle  # local import to avoid a module cycle
    import numpy as np

    if l1 == l2 and l1 >= 1:
        form = "equal"
        l = l1
    elif l2 == l1 + 1:
        form = "consecutive"
        l = l2
    else:
        raise ValueError("supported pairs: (l, l) with l>=1, or (l-1, l)")
    if seed is None:
        seed = oracle.DEFAULT_SEED
    expr = Couple(Harmonic(l1, 'a'), Harmonic(l2, 'b'), 1)
    vecs = oracle.sample_unit_vectors(seed, samples, ['a', 'b'])
    a, b = vecs['a'], vecs['b']
    x = np.sum(a * b, axis=1)
    direct = oracle.eval_expr_components(expr, vecs)  # shape (3, samples), m=-1,0,1

    def std_components(v):
        # standard spherical components of a real vector, rows m = -1, 0, +1
        return np.stack([
            (v[:, 0] - 1j * v[:, 1]) / np.sqrt(2.0),
            v[:, 2] + 0j,
            -(v[:, 0] + 1j * v[:, 1]) / np.sqrt(2.0),
        ])

    if form == "equal":
        pref = -1j / (4 * np.pi) * np.sqrt(3 * (2 * l + 1) / (l * (l + 1)))
        cross = np.cross(a, b)
        closed = pref * oracle.legendre_prime(l, x) * std_components(cross)
    else:
        pref = -1j / (4 * np.pi) * np.sqrt(3 / l)
        closed = pref * (
            oracle.legendre_prime(l, x) * std_components(b)
            - ((l - 1) * oracle.legendre(l - 2, x)
               + x * oracle.legendre_prime(l - 2, x)) * std_components(a))

    err = float(np.max(np.abs(direct - closed)))
    return {
        "l1": l1, "l2": l2, "form": form, "samples": samples, "seed": seed,
        "max_abs_err": err, "pass": err <= 1e-10,
    }
