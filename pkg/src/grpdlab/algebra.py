"""
The convolution algebra C_c(G) of a finite groupoid, optionally twisted by a
normalized 2-cocycle, with its left regular representations and reduced p-norm.

Twists are handled through the canonical section gamma -> 1_gamma, so a section
of the twist is its coefficient vector on arrows and the product picks up the
factor c(tau, eta) for tau·eta = gamma.
"""

from dataclasses import dataclass

import numpy as np

from grpdlab import config
from grpdlab.pnorm import p_operator_norm
from grpdlab.report import ValidationReport, Verdict


class AlgebraElement:
    """Complex coefficients indexed by the arrows of ``groupoid``."""

    __slots__ = ("groupoid", "coeffs")

    def __init__(self, groupoid, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.shape != (len(groupoid.arrows),):
            raise ValueError(f"expected {len(groupoid.arrows)} coefficients, got {c.shape}")
        c.setflags(write=False)
        self.groupoid = groupoid
        self.coeffs = c

    @classmethod
    def from_dict(cls, groupoid, values):
        c = np.zeros(len(groupoid.arrows), dtype=complex)
        for a, z in values.items():
            c[groupoid.index[a]] = z
        return cls(groupoid, c)

    def __getitem__(self, arrow):
        return self.coeffs[self.groupoid.index[arrow]]

    def _same(self, other):
        if other.groupoid is not self.groupoid:
            raise ValueError("elements live over different groupoids")

    def __add__(self, other):
        self._same(other)
        return AlgebraElement(self.groupoid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return AlgebraElement(self.groupoid, self.coeffs - other.coeffs)

    def __neg__(self):
        return AlgebraElement(self.groupoid, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return AlgebraElement(self.groupoid, self.coeffs * other)

    def __rmul__(self, scalar):
        return AlgebraElement(self.groupoid, self.coeffs * scalar)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.groupoid is self.groupoid
                and np.array_equal(self.coeffs, other.coeffs))

    def allclose(self, other, atol=config.ALGEBRA_TOL):
        self._same(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def as_dict(self):
        return {a: z for a, z in zip(self.groupoid.arrows, self.coeffs) if z != 0}

    def __repr__(self):
        terms = ", ".join(f"{a!r}: {z:.4g}" for a, z in self.as_dict().items())
        return f"AlgebraElement({{{terms}}})"


def delta(g, arrow):
    return AlgebraElement.from_dict(g, {arrow: 1})


def zero(g):
    return AlgebraElement(g, np.zeros(len(g.arrows)))


def indicator(g, arrows):
    return AlgebraElement.from_dict(g, {a: 1 for a in arrows})


def unit_indicator(g):
    return indicator(g, g.units)


def from_matrix(g, M):
    """Element of C_c([n]^2) with coefficient M[a-1, b-1] at (a, b)."""
    M = np.asarray(M)
    return AlgebraElement.from_dict(
        g, {(a, b): M[a - 1, b - 1] for a, b in g.arrows})


# --- cocycles --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cocycle:
    """Values on composable pairs; pairs not listed carry the value 1."""

    groupoid: object
    values: dict

    def __call__(self, a, b):
        return self.values.get((a, b), 1.0)

    def array(self):
        """Values aligned with ``groupoid.composable_triples``."""
        return np.array([self(a, b) for a, b, _ in self.groupoid.composable_triples],
                        dtype=complex)


def validate_cocycle(c, tol=config.ALGEBRA_TOL):
    g = c.groupoid
    rep = ValidationReport()
    for (a, b) in c.values:
        if g.compose(a, b) is None:
            rep.add("domain", f"cocycle given on non-composable pair ({a!r}, {b!r})")
    for a, b, _ in g.composable_triples:
        z = c(a, b)
        if abs(abs(z) - 1) > tol:
            rep.add("modulus", f"|c({a!r}, {b!r})| != 1")
        if (a in g.units or b in g.units) and abs(z - 1) > tol:
            rep.add("normalization", f"c({a!r}, {b!r}) != 1 on a unit")
    for a, b, ab in g.composable_triples:
        for c_ in g.range_fiber(g.src[b]):
            bc = g.compose(b, c_)
            lhs = c(a, b) * c(ab, c_)
            rhs = c(b, c_) * c(a, bc)
            if abs(lhs - rhs) > tol:
                rep.add("cocycle-identity", f"identity fails at ({a!r}, {b!r}, {c_!r})")
    return rep


def _cocycle_values(g, cocycle):
    if cocycle is None:
        return None
    if cocycle.groupoid is not g:
        raise ValueError("cocycle lives over a different groupoid")
    return cocycle.array()


# --- operations ------------------------------------------------------------------

def convolve(f, h, cocycle=None):
    """(f*h)(gamma) = sum over tau·eta = gamma of f(tau) h(eta) [c(tau, eta)]."""
    f._same(h)
    g = f.groupoid
    ia, ib, ic = g.triple_index
    terms = f.coeffs[ia] * h.coeffs[ib]
    cv = _cocycle_values(g, cocycle)
    if cv is not None:
        terms = terms * cv
    out = np.zeros(len(g.arrows), dtype=complex)
    np.add.at(out, ic, terms)
    return AlgebraElement(g, out)


twisted_convolve = convolve


def involute(f, cocycle=None):
    """f*(gamma) = conj f(gamma^-1), times conj c(gamma, gamma^-1) when twisted."""
    g = f.groupoid
    inv_idx = np.array([g.index[g.inv[a]] for a in g.arrows], dtype=np.intp)
    out = np.conj(f.coeffs[inv_idx])
    if cocycle is not None:
        out = out * np.conj([cocycle(a, g.inv[a]) for a in g.arrows])
    return AlgebraElement(g, out)


def strict_support(f):
    return {a for a, z in zip(f.groupoid.arrows, f.coeffs) if z != 0}


@dataclass
class FiberRepresentation:
    unit: object
    basis: list
    matrix: np.ndarray


def lambda_matrix(f, x, cocycle=None):
    """Matrix of left convolution by f on l^p(Gx) in the basis {delta_sigma : sigma in Gx}."""
    g = f.groupoid
    if x not in g.units:
        raise ValueError(f"{x!r} is not a unit")
    basis = g.fiber(x)
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, sigma in enumerate(basis):
        s_inv = g.inv[sigma]
        for i, rho in enumerate(basis):
            tau = g.compose(rho, s_inv)
            z = f[tau]
            if z != 0 and cocycle is not None:
                z = z * cocycle(tau, sigma)
            M[i, j] = z
    return FiberRepresentation(x, basis, M)


def reduced_norm(f, p, cocycle=None, seed=config.DEFAULT_SEED):
    """max over units x of ||lambda_x(f)||_p; report carries the maximizing fiber."""
    best, best_unit = None, None
    for x in f.groupoid.unit_list:
        rep = p_operator_norm(lambda_matrix(f, x, cocycle).matrix, p, seed=seed)
        if best is None or rep.value > best.value:
            best, best_unit = rep, x
    best.extra["fiber"] = best_unit
    return best


def expectation(f):
    g = f.groupoid
    mask = np.array([a in g.units for a in g.arrows])
    return AlgebraElement(g, np.where(mask, f.coeffs, 0))


def j_map(f):
    """Coefficient function of f; for finite groupoids this is f itself."""
    return dict(zip(f.groupoid.arrows, f.coeffs))


def j_map_consistency(f, cocycle=None):
    """Check <lambda_x(f) delta_x, delta_sigma> = f(sigma) for every arrow sigma."""
    g = f.groupoid
    err = 0.0
    for x in g.unit_list:
        rep = lambda_matrix(f, x, cocycle)
        col = rep.basis.index(x)
        for i, sigma in enumerate(rep.basis):
            err = max(err, abs(rep.matrix[i, col] - f[sigma]))
    return err


def indicator_convolution_check(S, f):
    """Exhaustively compare 1_S * f with sigma -> f(tau^-1 sigma) and f * 1_S with f(sigma tau^-1)."""
    g = f.groupoid
    S = list(S)
    if not g.is_bisection(S):
        raise ValueError("S is not a bisection")
    by_range = {g.tgt[t]: t for t in S}
    by_source = {g.src[t]: t for t in S}
    left, right = convolve(indicator(g, S), f), convolve(f, indicator(g, S))
    err = 0.0
    for sigma in g.arrows:
        t = by_range.get(g.tgt[sigma])
        expect = f[g.compose(g.inv[t], sigma)] if t is not None else 0
        err = max(err, abs(left[sigma] - expect))
        t = by_source.get(g.src[sigma])
        expect = f[g.compose(sigma, g.inv[t])] if t is not None else 0
        err = max(err, abs(right[sigma] - expect))
    return Verdict(err <= config.ALGEBRA_TOL, f"max deviation {err:.3g}", err)


def alpha_of_bisection(g, S):
    """The partial bijection d(s) -> r(s) of units induced by a bisection."""
    return {g.src[s]: g.tgt[s] for s in S}


def _unit_function(g, values):
    return AlgebraElement.from_dict(g, {u: 1 for u, keep in values.items() if keep})


def verify_admissible_pair(a, b, beta, p=None, tol=config.ALGEBRA_TOL):
    """Check the normalization conditions (N1), (N2) and realization identities (R1), (R2).

    ``beta`` is a dict describing a partial bijection of the units. Unit
    indicators span C(X) and generate its positive cone, so they are the test
    functions throughout.
    """
    a._same(b)
    g = a.groupoid
    units = g.unit_list
    if not set(beta) <= g.units or not set(beta.values()) <= g.units:
        raise ValueError("beta must map units to units")
    if len(set(beta.values())) != len(beta):
        raise ValueError("beta is not injective")
    beta_inv = {y: x for x, y in beta.items()}
    detail = {}

    def positive_unit_supported(e):
        for arrow, z in zip(g.arrows, e.coeffs):
            if arrow in g.units:
                if abs(z.imag) > config.POSITIVITY_TOL or z.real < -tol:
                    return False
            elif abs(z) > tol:
                return False
        return True

    ones = {x: indicator(g, [x]) for x in units}
    detail["N1"] = all(positive_unit_supported(b * ones[x] * a)
                       and positive_unit_supported(a * ones[x] * b) for x in units)

    def support(e):
        return {arrow for arrow, z in zip(g.arrows, e.coeffs) if abs(z) > tol}

    ba, ab = b * a, a * b
    detail["N2"] = support(ba) == set(beta) and support(ab) == set(beta.values())

    r1 = r2 = 0.0
    for x in units:
        lhs = b * ones[x] * a
        f_beta = _unit_function(g, {y: beta.get(y) == x for y in units})
        r1 = max(r1, float(np.abs((lhs - f_beta * ba).coeffs).max()))
        lhs = a * ones[x] * b
        f_binv = _unit_function(g, {y: beta_inv.get(y) == x for y in units})
        r2 = max(r2, float(np.abs((lhs - f_binv * ab).coeffs).max()))
    detail["R1"], detail["R2"] = r1 <= tol, r2 <= tol
    detail["R1_error"], detail["R2_error"] = r1, r2
    if p is not None:
        detail["norms"] = (reduced_norm(a, p).value, reduced_norm(b, p).value)
    ok = all(detail[k] for k in ("N1", "N2", "R1", "R2"))
    return Verdict(ok, "admissible pair check", detail)


def random_bisection(rng, g, min_size=1):
    """Greedy random bisection (nonempty by default)."""
    order = [g.arrows[int(i)] for i in rng.permutation(len(g.arrows))]
    srcs, tgts, S = set(), set(), []
    for a in order:
        if g.src[a] in srcs or g.tgt[a] in tgts:
            continue
        if len(S) >= min_size and rng.random() < 0.3:
            continue
        S.append(a)
        srcs.add(g.src[a])
        tgts.add(g.tgt[a])
    return S


def random_element(rng, g, density=0.6):
    mask = rng.random(len(g.arrows)) < density
    c = (rng.standard_normal(len(g.arrows)) + 1j * rng.standard_normal(len(g.arrows))) * mask
    return AlgebraElement(g, c)


# --- JSON ------------------------------------------------------------------------

def element_to_json(f, groupoid_json=None):
    from grpdlab.groupoid import _id, groupoid_to_json
    return {
        "groupoid": groupoid_json if groupoid_json is not None else groupoid_to_json(f.groupoid),
        "coeffs": {_id(a): [float(z.real), float(z.imag)] for a, z in f.as_dict().items()},
    }


def element_from_json(obj, groupoid=None):
    from grpdlab.groupoid import groupoid_from_json
    g = groupoid if groupoid is not None else groupoid_from_json(obj["groupoid"])
    return AlgebraElement.from_dict(g, {a: complex(re, im) for a, (re, im) in obj["coeffs"].items()})


def cocycle_to_json(c):
    from grpdlab.groupoid import _id
    return {"entries": [[_id(a), _id(b), [float(complex(z).real), float(complex(z).imag)]]
                        for (a, b), z in c.values.items()]}


def cocycle_from_json(obj, groupoid):
    return Cocycle(groupoid, {(a, b): complex(re, im) for a, b, (re, im) in obj["entries"]})
