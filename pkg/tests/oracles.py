"""Independent brute-force oracles used to freeze expected values.

Everything here recomputes quantities from first principles (atom
enumeration, direct exponential sums, subset enumeration) and must stay
independent of the library code paths it is used to check.
"""

import cmath
import itertools
import math
from fractions import Fraction


def atoms_with_weights(system, first, last):
    """Atoms of the discrete window measure as {position: weight}."""
    items = {Fraction(0): Fraction(1)}
    for k in range(first, last + 1):
        lev = system.level(k)
        step = Fraction(lev.scale, system.level_product(k))
        new = {}
        for pos, w in items.items():
            for d in range(lev.count):
                key = pos + d * step
                new[key] = new.get(key, Fraction(0)) + w / lev.count
        items = new
    return items


def transform_direct(system, first, last, xi):
    """mu_hat(xi) by direct summation over the atom measure."""
    total = 0j
    for pos, w in atoms_with_weights(system, first, last).items():
        total += float(w) * cmath.exp(-2j * math.pi * float(xi * pos))
    return total


def q_direct(system, first, last, lam_set, xi):
    return sum(abs(transform_direct(system, first, last, xi + lam)) ** 2
               for lam in lam_set)


def is_orthogonal_basis(system, first, last, lam_set, tol=1e-10):
    """Gram-matrix style check: pairwise mu_hat(diff) = 0 and full count."""
    atoms = atoms_with_weights(system, first, last)
    elems = sorted(lam_set)
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if abs(transform_direct(system, first, last, y - x)) > tol:
                return False
    return len(elems) == len(atoms)


def enumerate_spectra(system, last, grid, limit):
    """All spectra on the residue grid, by exhaustive subset enumeration.

    Only usable for tiny windows; returns sorted tuples of Fractions.
    """
    atoms = atoms_with_weights(system, 1, last)
    m = len(atoms)
    b_n = system.level_product(last)
    candidates = [Fraction(j, grid) for j in range(b_n * grid)]
    found = []
    for combo in itertools.combinations(candidates, m):
        if Fraction(0) not in combo:
            continue
        if is_orthogonal_basis(system, 1, last, combo):
            found.append(tuple(sorted(combo)))
            if len(found) >= limit:
                break
    return found


def poly_multiply(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out
