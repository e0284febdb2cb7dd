"""
Desk-scale experiments around the rigidity statements: hermitian cores of
M_n^p, invertible isometries and their permutation quotient, AF decompositions
and the non-abelian witness in Brin-Thompson groups.

Sampling checks are statistical evidence, not proofs. Each one runs seeded
fixed-size batches so results do not depend on the worker count.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np
from scipy.stats import unitary_group

from grpdlab import algebra, config, sft, thompson
from grpdlab.groupoid import NotPrincipalError, decompose_elementary, orbits, validate_groupoid
from grpdlab.pnorm import hermitian_test, is_invertible_isometry, matrix_to_json, p_operator_norm

CONFIRMED = "confirmed"
REFUTED = "refuted-with-witness"
INCONCLUSIVE = "inconclusive"

STATISTICAL_NOTE = ("sampling experiment with a fixed seed; supports the claim at this size "
                    "but is not a proof")

BATCH = 250


@dataclass
class RigidityReport:
    claim: str
    parameters: dict
    verdict: str
    counterexample: object = None
    statistics: dict = field(default_factory=dict)
    note: str = ""
    statistical: bool = False

    def __post_init__(self):
        if self.verdict not in (CONFIRMED, REFUTED, INCONCLUSIVE):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def refuted(self):
        return self.verdict == REFUTED

    def to_json(self):
        ce = self.counterexample
        if isinstance(ce, np.ndarray):
            ce = matrix_to_json(ce)
        out = {"claim": self.claim, "parameters": self.parameters, "verdict": self.verdict,
               "counterexample": ce, "statistics": self.statistics, "note": self.note}
        if self.statistical:
            out["statistical_note"] = STATISTICAL_NOTE
        return out

    def to_text(self):
        lines = [f"{self.claim}: {self.verdict}",
                 "  parameters: " + ", ".join(f"{k}={v}" for k, v in self.parameters.items())]
        for k, v in self.statistics.items():
            lines.append(f"  {k}: {v}")
        if self.counterexample is not None:
            lines.append(f"  counterexample: {self.counterexample}")
        if self.note:
            lines.append(f"  note: {self.note}")
        if self.statistical:
            lines.append(f"  ({STATISTICAL_NOTE})")
        return "\n".join(lines)


def _check_size(n):
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")


def _run_batches(fn, args, samples, seed):
    """Run fn(seed_seq, count, *args) over fixed batches; merge in batch order."""
    seqs = np.random.SeedSequence(seed).spawn(math.ceil(samples / BATCH))
    jobs = [(s, min(BATCH, samples - i * BATCH)) for i, s in enumerate(seqs)]
    workers = min(config.max_workers(), len(jobs))
    if workers <= 1:
        return [fn(s, c, *args) for s, c in jobs]
    with ProcessPoolExecutor(workers) as ex:
        futs = [ex.submit(fn, s, c, *args) for s, c in jobs]
        return [f.result() for f in futs]


# --- hermitian cores ---------------------------------------------------------------

def off_diagonal_mass(a):
    a = np.asarray(a)
    return float(np.abs(a - np.diag(np.diag(a))).sum())


def distance_to_real_diagonal(a):
    """Off-diagonal mass plus the imaginary mass of the diagonal."""
    return off_diagonal_mass(a) + float(np.abs(np.diag(a).imag).sum())


def _sample_core_matrix(rng, n):
    """Mixture biased toward the boundary between diagonal and non-diagonal."""
    kind = str(rng.choice(["real-diagonal", "near-diagonal", "hermitian", "complex", "complex-diagonal"],
                      p=[0.10, 0.05, 0.40, 0.40, 0.05]))
    g = lambda: rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))  # noqa: E731
    if kind == "real-diagonal":
        return kind, np.diag(rng.uniform(-3, 3, n)).astype(complex)
    if kind == "near-diagonal":
        eps = 10 ** rng.uniform(-8, -2)
        e = g()
        e -= np.diag(np.diag(e))
        return kind, np.diag(rng.uniform(-3, 3, n)) + eps * (e + e.conj().T) / 2
    if kind == "hermitian":
        h = g()
        return kind, (h + h.conj().T) / 2
    if kind == "complex":
        return kind, g()
    return kind, np.diag(rng.uniform(-3, 3, n) + 1j * rng.uniform(-1, 1, n))


def _core_batch(seq, count, n, p):
    rng = np.random.default_rng(seq)
    stats = {"passed": 0, "rejected": 0, "kinds": {}}
    witness = None
    for _ in range(count):
        kind, a = _sample_core_matrix(rng, n)
        stats["kinds"][kind] = stats["kinds"].get(kind, 0) + 1
        ok = hermitian_test(a, p).value
        stats["passed" if ok else "rejected"] += 1
        if witness is not None:
            continue
        is_real_diag = kind == "real-diagonal"
        if ok and distance_to_real_diagonal(a) > config.DIAGONAL_TOL:
            witness = ("non-diagonal hermitian", a)
        elif is_real_diag and not ok:
            witness = ("real diagonal rejected", a)
    return stats, witness


def core_diagonal_check(n, p, samples=10_000, seed=config.DEFAULT_SEED):
    """Sample M_n^p and check that the hermitian elements are exactly the real diagonals."""
    if p == 2:
        raise ValueError("p = 2 is vacuous: M_n^2 is a C*-algebra, every self-adjoint matrix is hermitian")
    _check_size(n)
    results = _run_batches(_core_batch, (n, p), samples, seed)
    stats = {"samples": samples, "passed": 0, "rejected": 0, "kinds": {}}
    witness = None
    for s, w in results:
        stats["passed"] += s["passed"]
        stats["rejected"] += s["rejected"]
        for k, c in s["kinds"].items():
            stats["kinds"][k] = stats["kinds"].get(k, 0) + c
        if witness is None and w is not None:
            witness = w
    stats["kinds"] = dict(sorted(stats["kinds"].items()))
    verdict = REFUTED if witness else CONFIRMED
    return RigidityReport(
        "core(M_n^p) = real diagonals", {"n": n, "p": p, "samples": samples, "seed": seed},
        verdict, counterexample=None if witness is None else witness[1], statistics=stats,
        note=witness[0] if witness else "", statistical=True)


# --- invertible isometries -----------------------------------------------------------

def is_monomial(u, tol=config.ALGEBRA_TOL):
    nz = np.abs(np.asarray(u)) > tol
    return bool((nz.sum(axis=0) == 1).all() and (nz.sum(axis=1) == 1).all())


def isometry_to_permutation(u, tol=config.ALGEBRA_TOL):
    """The permutation pi with u e_j in C e_pi(j), as a tuple; None if u is not monomial."""
    if not is_monomial(u, tol):
        return None
    return tuple(int(i) for i in np.argmax(np.abs(np.asarray(u)), axis=0))


def permutation_matrix(perm, phases=None):
    n = len(perm)
    u = np.zeros((n, n), dtype=complex)
    for j, i in enumerate(perm):
        u[i, j] = 1 if phases is None else phases[j]
    return u


def _phases(rng, n):
    return np.exp(2j * np.pi * rng.random(n))


def _scaled(a, p):
    # a rough norm suffices: the test then hinges on ||a^-1||
    return a / p_operator_norm(a, p, maxiter=200).value


def _non_monomial_sample(rng, n, p):
    kind = rng.integers(4)
    if kind == 0:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    elif kind == 1:
        a = unitary_group.rvs(n, random_state=rng)
    elif kind == 2:
        # monomial with one extra small entry
        a = permutation_matrix(tuple(rng.permutation(n)), _phases(rng, n))
        i, j = rng.integers(n, size=2)
        while abs(a[i, j]) > 0:
            i, j = rng.integers(n, size=2)
        a[i, j] = 10 ** rng.uniform(-4, 0)
    else:
        a = np.eye(n, dtype=complex)
        a[:2, :2] = [[np.cos(t := rng.uniform(0.05, 1.5)), -np.sin(t)], [np.sin(t), np.cos(t)]]
    return _scaled(a, p)


def _isometry_batch(seq, count, n, p):
    rng = np.random.default_rng(seq)
    stats = {"non_monomial": 0, "accepted_non_monomial": 0}
    witness = None
    for _ in range(count):
        a = _non_monomial_sample(rng, n, p)
        if is_monomial(a):
            continue
        stats["non_monomial"] += 1
        if is_invertible_isometry(a, p).value:
            stats["accepted_non_monomial"] += 1
            if witness is None and p != 2:
                witness = ("non-monomial invertible isometry", a)
    return stats, witness


def _conjugation_error(u, rng):
    d = np.diag(rng.uniform(-3, 3, u.shape[0]))
    c = u @ d @ np.linalg.inv(u)
    return distance_to_real_diagonal(c)


def isometry_classification_check(n, p, samples=500, seed=config.DEFAULT_SEED):
    """Invertible isometries of M_n^p are the phased permutation matrices (for p != 2)."""
    _check_size(n)
    rng = np.random.default_rng(seed)
    stats = {"permutations": math.factorial(n), "monomial_tested": 0, "monomial_rejected": 0,
             "max_conjugation_error": 0.0}
    witness = None
    accepted = []
    for perm in permutations(range(n)):
        for _ in range(3):
            u = permutation_matrix(perm, _phases(rng, n))
            stats["monomial_tested"] += 1
            if is_invertible_isometry(u, p).value:
                accepted.append(u)
            else:
                stats["monomial_rejected"] += 1
                witness = witness or ("phased permutation rejected", u)
    if p != 2:
        for u in accepted:
            err = _conjugation_error(u, rng)
            stats["max_conjugation_error"] = max(stats["max_conjugation_error"], err)
            if err > config.CONJUGATION_TOL:
                witness = witness or ("conjugation leaves the diagonal", u)
    results = _run_batches(_isometry_batch, (n, p), samples, seed + 1)
    stats["non_monomial"] = sum(s["non_monomial"] for s, _ in results)
    stats["accepted_non_monomial"] = sum(s["accepted_non_monomial"] for s, _ in results)
    for _, w in results:
        witness = witness or w
    if p == 2:
        # control: unitaries are isometries at p = 2
        us = [unitary_group.rvs(n, random_state=rng) for _ in range(20)]
        stats["unitaries_accepted"] = sum(bool(is_invertible_isometry(u, 2).value) for u in us)
        if stats["unitaries_accepted"] != len(us):
            witness = witness or ("unitary rejected at p = 2", us[0])
    verdict = REFUTED if witness else CONFIRMED
    note = witness[0] if witness else ("control case: unitaries accepted" if p == 2 else "")
    return RigidityReport("invertible isometries of M_n^p are phased permutations",
                          {"n": n, "p": p, "samples": samples, "seed": seed}, verdict,
                          counterexample=None if witness is None else witness[1],
                          statistics=stats, note=note, statistical=True)


def same_coset(u, w, tol=config.ALGEBRA_TOL):
    """Whether u^-1 w is a diagonal matrix with unit-modulus entries."""
    d = np.linalg.solve(u, w)
    diag = np.diag(d)
    return bool(off_diagonal_mass(d) <= tol and np.all(np.abs(np.abs(diag) - 1) <= tol))


def tfg_quotient_check(n, p, samples=200, seed=config.DEFAULT_SEED):
    """Census of accepted invertible isometries modulo diagonal unitaries.

    Cosets are found by direct comparison u^-1 w; the permutation map is checked
    against that partition and for multiplicativity.
    """
    if p == 2:
        raise ValueError("p = 2 excluded: the isometry group is the full unitary group")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    candidates = []
    for perm in permutations(range(n)):
        candidates += [permutation_matrix(perm, _phases(rng, n)) for _ in range(2)]
    for _ in range(samples):
        candidates.append(_non_monomial_sample(rng, n, p) if n > 1 else _phases(rng, 1).reshape(1, 1))
    accepted = [u for u in candidates if is_invertible_isometry(u, p).value]

    reps, members = [], []
    for u in accepted:
        for k, r in enumerate(reps):
            if same_coset(r, u):
                members[k].append(u)
                break
        else:
            reps.append(u)
            members.append([u])
    census = {}
    problems = []
    for k, group in enumerate(members):
        perms = {isometry_to_permutation(u) for u in group}
        if len(perms) != 1 or None in perms:
            problems.append(f"coset {k} maps to {perms}")
            continue
        census[str(perms.pop())] = len(group)
    if len(census) != len(reps):
        problems.append("two cosets share a permutation")
    for u in reps:
        for w in reps:
            pu, pw, puw = (isometry_to_permutation(x) for x in (u, w, u @ w))
            if puw != tuple(pu[j] for j in pw):
                problems.append("permutation map is not multiplicative")
                break
    stats = {"candidates": len(candidates), "accepted": len(accepted), "cosets": len(reps),
             "expected": math.factorial(n), "census": census}
    verdict = CONFIRMED if not problems and len(reps) == math.factorial(n) else REFUTED
    return RigidityReport("invertible isometries / diagonal unitaries = full group of [n]^2",
                          {"n": n, "p": p, "samples": samples, "seed": seed}, verdict,
                          statistics=stats, note="; ".join(problems), statistical=True)


# --- AF ---------------------------------------------------------------------------

def af_embeddability_report(g, p, seed=config.DEFAULT_SEED):
    """Elementary decomposition for principal inputs; abstain otherwise."""
    rep = validate_groupoid(g)
    if not rep.valid:
        raise ValueError(f"invalid groupoid: {rep.violations[0][1]}")
    params = {"arrows": len(g.arrows), "units": len(g.units), "p": p}
    try:
        e = decompose_elementary(g)
    except NotPrincipalError as exc:
        note = ("theorem inapplicable (non-effective at finite scale): isotropy arrow "
                f"{exc.arrow!r}. Non-effective groupoids can still have AF-embeddable algebras, "
                "e.g. a finite abelian group via its Fourier transform, so no "
                "non-embeddability is claimed")
        return RigidityReport("AF decomposition", params, INCONCLUSIVE,
                              statistics={"principal": False}, note=note)
    sizes = sorted(e.sizes, reverse=True)
    # the isomorphism onto block matrices is isometric: compare norms for a random element
    rng = np.random.default_rng(seed)
    f = algebra.random_element(rng, g)
    lam = algebra.reduced_norm(f, p).value
    blocks = []
    for orb in orbits(g):
        idx = {x: i for i, x in enumerate(orb)}
        M = np.zeros((len(orb), len(orb)), dtype=complex)
        for x in orb:
            for a in g.fiber(x):
                M[idx[g.tgt[a]], idx[x]] = f[a]
        blocks.append(p_operator_norm(M, p).value)
    stats = {"principal": True, "blocks": sizes, "dimension": e.dimension(),
             "dimension_matches": e.dimension() == len(g.arrows),
             "norm_reduced": lam, "norm_blocks": max(blocks),
             "norm_gap": abs(lam - max(blocks))}
    note = "AF: algebra isometric to " + " + ".join(f"M_{N}^p" for N in sizes)
    ok = stats["dimension_matches"] and stats["norm_gap"] <= config.NORM_TOL * max(1, lam)
    return RigidityReport("AF decomposition", params, CONFIRMED if ok else REFUTED,
                          statistics=stats, note=note)


# --- non-abelian witness ---------------------------------------------------------------

@dataclass
class Witness:
    s: thompson.Table
    t: thompson.Table
    commutator: thompson.Table
    word: tuple
    image: tuple

    def to_json(self):
        return {"s": thompson.table_to_json(self.s), "t": thompson.table_to_json(self.t),
                "commutator": thompson.table_to_json(self.commutator),
                "word": list(self.word), "image": list(self.image)}


def non_abelian_witness(alphabets):
    """Transpositions 00<->01 and 01<->10 in the first coordinate and a word their commutator moves."""
    alphabets = tuple(int(k) for k in alphabets)
    if not alphabets or any(k < 2 for k in alphabets):
        raise ValueError(f"every alphabet needs at least 2 letters, got {alphabets}")
    s = thompson.prefix_transposition(alphabets, 0, "00", "01")
    t = thompson.prefix_transposition(alphabets, 0, "01", "10")
    c = thompson.commutator(s, t)
    depth = tuple(max(d, 3 if i == 0 else 0) for i, d in enumerate(c.max_v_depth()))
    for word in sft.box_tuples(alphabets, depth):
        image = thompson.apply(c, word)
        if image == word:
            continue
        # independent evaluation, one generator at a time (rightmost first)
        step = word
        for g in (thompson.invert(t), thompson.invert(s), t, s):
            step = thompson.apply(g, step)
        if step != image:
            raise AssertionError("composed table disagrees with stepwise evaluation")
        return Witness(s, t, c, word, image)
    raise AssertionError("commutator acts trivially")
