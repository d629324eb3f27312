"""The theorem-level verification battery behind ``idelegenus verify``.

Every check draws instances from a seeded :class:`random.Random`, counts
failures and, for the first failure, emits a minimized reproducer document.
The acceptance tests call these functions with their stated parameters.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from . import cohomology as coh
from . import genus
from . import ideles
from .errors import ModelError
from .linalg import FinAbGroup
from .link import CoverSpec, LinkWindow, add_synthetic_knot, branch_indices, splitting_from_characters
from .oracles import (brute_subquotient_profile, kernel_points, lattice_points_mod,
                      torsion_profile)


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: int = 0
    detail: str = ""
    reproducer: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, reproducer: dict | None, detail: str):
        self.failures += 1
        if self.reproducer is None:
            self.reproducer = reproducer
            self.detail = detail

    def to_json(self):
        out = {"name": self.name, "passed": self.passed, "instances": self.instances,
               "failures": self.failures}
        if self.detail:
            out["detail"] = self.detail
        if self.reproducer is not None:
            out["reproducer"] = self.reproducer
        if self.notes:
            out["notes"] = self.notes
        return out


# ---------------------------------------------------------------- generators

def random_window(rng: random.Random, size: int, lk_bound: int = 3) -> LinkWindow:
    lk = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            lk[i][j] = lk[j][i] = rng.randint(-lk_bound, lk_bound)
    return LinkWindow(tuple(f"K{i + 1}" for i in range(size)), tuple(map(tuple, lk)))


def random_branch_values(rng: random.Random, n: int, r: int) -> tuple[int, ...]:
    while True:
        a = tuple(rng.randrange(1, n) for _ in range(r))
        g = n
        for x in a:
            g = gcd(g, x)
        if g == 1:
            return a


def random_cover(rng: random.Random, window: LinkWindow, max_n: int,
                 max_branch: int | None = None) -> CoverSpec:
    n = rng.randint(1, max_n)
    if n == 1 or not len(window):
        return CoverSpec(1, ())
    top = len(window) if max_branch is None else min(max_branch, len(window))
    r = rng.randint(1, top)
    labels = sorted(rng.sample(window.knots, r), key=window.index)
    return CoverSpec(n, tuple(zip(labels, random_branch_values(rng, n, r))))


def random_instance(rng, max_n, max_knots, lk_bound=3, min_knots=1, unbranched=False):
    """A random (window, cover); with ``unbranched`` the window keeps a knot off L_0."""
    window = random_window(rng, rng.randint(min_knots, max_knots), lk_bound)
    cover = random_cover(rng, window, max_n,
                         max_branch=len(window) - 1 if unbranched and len(window) > 1 else None)
    if unbranched and all(cover.is_branched(k) for k in window.knots):
        window = add_synthetic_knot(
            window, [rng.randint(-lk_bound, lk_bound) for _ in window.knots])
    return window, cover


def random_norm_zero_idele(rng, window, cover, bound=9) -> ideles.CoverIdele:
    table = ideles.splitting_table(window, cover)
    fibers = {}
    for k in window.knots:
        c = table[k].c
        fib = []
        for _ in range(2):
            while True:
                xs = [rng.randint(-bound, bound) for _ in range(c - 1)]
                last = -sum(xs)
                if abs(last) <= bound:
                    fib.append(xs + [last])
                    break
        fibers[k] = list(zip(fib[0], fib[1]))
    return ideles.CoverIdele(fibers)


def random_cover_idele(rng, window, cover, bound=9) -> ideles.CoverIdele:
    table = ideles.splitting_table(window, cover)
    return ideles.CoverIdele({
        k: [(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(table[k].c)]
        for k in window.knots})


def random_base_idele(rng, window, bound=9) -> ideles.BaseIdele:
    return ideles.BaseIdele({k: (rng.randint(-bound, bound), rng.randint(-bound, bound))
                             for k in window.knots})


def random_cycle(rng, window, cover, max_terms=4, bound=5) -> genus.Cycle1:
    table = ideles.splitting_table(window, cover)
    free = [k for k in window.knots if not cover.is_branched(k)]
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        k = rng.choice(free)
        terms.append((k, rng.randrange(table[k].c), rng.randint(-bound, bound)))
    return genus.Cycle1(tuple(terms))


def all_covers(n: int, r: int):
    """Every surjective character on ``r`` branch knots ``B1..Br`` for degree ``n``."""
    if n == 1:
        if r == 0:
            yield CoverSpec(1, ())
        return
    labels = [f"B{i + 1}" for i in range(r)]
    for a in itertools.product(range(1, n), repeat=r):
        g = n
        for x in a:
            g = gcd(g, x)
        if g == 1:
            yield CoverSpec(n, tuple(zip(labels, a)))


# ---------------------------------------------------------------- minimizing

def instance_document(window: LinkWindow, cover: CoverSpec, **extra) -> dict:
    doc = {"window": window.to_json(), "cover": cover.to_json()}
    doc.update(extra)
    return doc


def _drop_knot(window: LinkWindow, label: str) -> LinkWindow:
    keep = [i for i, k in enumerate(window.knots) if k != label]
    return LinkWindow(tuple(window.knots[i] for i in keep),
                      tuple(tuple(window.lk[i][j] for j in keep) for i in keep))


def _set_lk(window: LinkWindow, i: int, j: int, value: int) -> LinkWindow:
    lk = [list(r) for r in window.lk]
    lk[i][j] = lk[j][i] = value
    return LinkWindow(window.knots, tuple(map(tuple, lk)))


def minimize(window: LinkWindow, cover: CoverSpec, fails: Callable[[LinkWindow, CoverSpec], bool],
             pinned: frozenset = frozenset()) -> tuple[LinkWindow, CoverSpec]:
    """Greedily shrink a failing instance while ``fails`` stays true.

    Tries dropping knots (branch knots included, when the cover stays valid)
    and then moving linking numbers toward zero.  ``pinned`` knots are kept.
    """
    def still(w, c):
        try:
            return fails(w, c)
        except Exception:
            return False

    changed = True
    while changed:
        changed = False
        for label in window.knots:
            if label in pinned:
                continue
            try:
                w = _drop_knot(window, label)
                c = CoverSpec(cover.n, tuple(p for p in cover.branch if p[0] != label))
            except ModelError:
                continue
            if still(w, c):
                window, cover, changed = w, c, True
                break
        if changed:
            continue
        for i in range(len(window)):
            for j in range(i + 1, len(window)):
                x = window.lk[i][j]
                for y in ([0] if x else []) + ([x - 1] if x > 1 else []) + ([x + 1] if x < -1 else []):
                    w = _set_lk(window, i, j, y)
                    if still(w, cover):
                        window, changed = w, True
                        break
                if changed:
                    break
            if changed:
                break
    return window, cover


def _guard(result: CheckResult, reproducer, fn):
    """Run one instance; any exception counts as a failure of that instance."""
    try:
        return fn()
    except Exception as exc:
        result.fail(reproducer, f"{type(exc).__name__}: {exc}")
        return None


# ---------------------------------------------------------------- checks

def check_satz90(rng, instances=1000, max_n=12, max_knots=6, lk_bound=3, bound=9) -> CheckResult:
    res = CheckResult("satz90_roundtrip")
    for _ in range(instances):
        window, cover = random_instance(rng, max_n, max_knots, lk_bound)
        a = random_norm_zero_idele(rng, window, cover, bound)
        res.instances += 1
        doc = instance_document(window, cover, cover_idele=a.to_json(window))

        def run():
            b = coh.hilbert90_solve(window, cover, a)
            return ideles.deck_act(cover, 1, b) - b == a and ideles.norm(window, cover, a) == ideles.BaseIdele()
        ok = _guard(res, doc, run)
        if ok is False:
            res.fail(doc, "(tau - 1) b != a")
    return res


def _shapiro_ok(n, c):
    d_order = n // c
    expected = FinAbGroup.from_orders([d_order])
    one = coh.permutation_module(n, c)
    two = coh.permutation_module(n, c, block=2)
    return (coh.tate_h0(one) == expected and coh.tate_h1(one).is_trivial
            and coh.tate_h0(two) == expected.direct_sum(expected) and coh.tate_h1(two).is_trivial)


def _brute_ok(module: coh.CyclicModule) -> bool:
    n = module.order
    t1, nm = module.tau_minus_one(), module.norm_matrix()
    return (brute_subquotient_profile(t1, nm, n) == torsion_profile(coh.tate_h0(module), n)
            and brute_subquotient_profile(nm, t1, n) == torsion_profile(coh.tate_h1(module), n))


def check_tate(rng, max_n=8, windows=200, max_knots=6, brute_max_n=6) -> CheckResult:
    res = CheckResult("tate_vanishing")
    for n in range(1, max_n + 1):
        for mu in range(n):
            for lam in range(n):
                s = splitting_from_characters("K", n, mu, lam)
                res.instances += 1
                if not _shapiro_ok(n, s.c):
                    res.fail({"n": n, "mu_char": mu, "lambda_char": lam},
                             f"Shapiro check fails for c = {s.c}")
    brute = 0
    for n in range(1, brute_max_n + 1):
        mods = [coh.permutation_module(n, c) for c in range(1, n + 1) if n % c == 0]
        mods += [coh.permutation_module(n, c, 2) for c in range(1, 4) if n % c == 0]
        mods.append(coh.trivial_module(n, 2))
        if n % 2 == 0:
            from .linalg import IntMatrix
            mods.append(coh.CyclicModule(1, IntMatrix.from_rows([[-1]]), n))
            mods.append(mods[1].direct_sum(mods[-1]) if len(mods) > 1 else mods[-1])
        for m in mods:
            if m.rank <= 6:
                brute += 1
                if not _brute_ok(m):
                    res.fail({"n": n, "tau": m.tau.tolist()}, "SNF and enumeration disagree")
    res.notes.append(f"{brute} modules cross-checked by enumeration")
    for _ in range(windows):
        window, cover = random_instance(rng, max_n, max_knots, min_knots=2)
        res.instances += 1
        doc = instance_document(window, cover)

        def run():
            t = coh.window_tate(window, cover)
            table = ideles.splitting_table(window, cover)
            for k, (h0, h1) in t["per_knot"].items():
                z = FinAbGroup.from_orders([table[k].decomposition_order])
                if not h1.is_trivial or h0 != z.direct_sum(z):
                    return False
            return t["h1"].is_trivial
        if _guard(res, doc, run) is False:
            if res.reproducer is None:
                window, cover = minimize(window, cover, lambda w, c: not _window_tate_ok(w, c))
            res.fail(instance_document(window, cover), "window module has nonzero H^1")
    return res


def _window_tate_ok(window, cover):
    return coh.window_tate(window, cover)["h1"].is_trivial


def check_genus_count(max_n=12, max_r=4) -> CheckResult:
    res = CheckResult("genus_count")
    for n in range(1, max_n + 1):
        for r in range(0, max_r + 1):
            for cover in all_covers(n, r):
                res.instances += 1
                prod = 1
                for e in branch_indices(cover):
                    prod *= e
                image = genus.genus_image(cover)
                if prod % n or len(image) * n != prod:
                    res.fail(cover.to_json(), f"|image| = {len(image)}, prod e = {prod}, n = {n}")
    return res


def _image_characterization(rng, max_n, max_r, cycles, kernel, name, sum_map):
    res = CheckResult(name)
    failing = None
    for n in range(1, max_n + 1):
        for r in range(0, max_r + 1):
            for cover in all_covers(n, r):
                res.instances += 1
                span = genus.single_component_span(cover)
                expected = {g.entries for g in kernel(cover)}
                if span != expected:
                    res.fail(cover.to_json(),
                             f"span of single-component genera {sorted(span)} "
                             f"!= kernel {sorted(expected)}")
                    failing = failing or cover
    bad = 0
    for _ in range(cycles):
        window, cover = random_instance(rng, max_n, max_r + 2, unbranched=True)
        if cover.r > max_r:
            continue
        z = random_cycle(rng, window, cover)
        res.instances += 1
        value = sum_map(cover, genus.chi(window, cover, z))
        if value != 0:
            bad += 1
            res.fail(instance_document(window, cover, cycles=[z.to_json()]),
                     f"sum map of chi(z) is {value}, not 0")
    if bad:
        res.notes.append(f"{bad} of the random cycles have a nonzero sum")
    return res


def check_image_characterization(rng, max_n=8, max_r=3, cycles=1000) -> CheckResult:
    """Span of chi-values equals the kernel of ``sum (n/e_i) x_i``, and it kills chi."""
    return _image_characterization(rng, max_n, max_r, cycles, genus.genus_image,
                                   "image_characterization", genus.sigma)


def check_image_characterization_galois(rng, max_n=8, max_r=3, cycles=1000) -> CheckResult:
    """Same, with the deck-group map ``sum a_i x_i`` in place of ``sum (n/e_i) x_i``."""
    return _image_characterization(rng, max_n, max_r, cycles, genus.galois_kernel,
                                   "image_characterization_galois", genus.galois_sum)


def check_splitting(max_n=12) -> CheckResult:
    res = CheckResult("splitting_arithmetic")
    for n in range(1, max_n + 1):
        for mu in range(n):
            for lam in range(n):
                res.instances += 1
                s = splitting_from_characters("K", n, mu, lam)
                (e0, z), (t, d) = s.beta_mu, s.beta_lambda
                meridian_multiples = {x for x in range(n) if (x * mu) % n == 0}
                problems = []
                if s.c * s.d * s.e != n:
                    problems.append("c*d*e != n")
                if mu == 0 and s.e != 1:
                    problems.append("unbranched knot with e != 1")
                if e0 * d - z * t != s.d * s.e:
                    problems.append("basis determinant != d*e")
                if meridian_multiples != {x for x in range(n) if x % s.e == 0}:
                    problems.append("meridian sublattice is not e*mu")
                if kernel_points(n, mu, lam) != lattice_points_mod(n, (s.beta_mu, s.beta_lambda)):
                    problems.append("basis does not span the kernel")
                if problems:
                    res.fail({"n": n, "mu_char": mu, "lambda_char": lam}, "; ".join(problems))
    return res


def check_direct_sum(rng, instances=1000, max_knots=6, homology_knots=5, homology_windows=40,
                     bound=9) -> CheckResult:
    res = CheckResult("direct_sum")
    for _ in range(instances):
        window = random_window(rng, rng.randint(1, max_knots))
        x = random_base_idele(rng, window, bound)
        res.instances += 1
        doc = instance_document(window, CoverSpec(1, ()), idele=x.to_json(window))

        def run():
            A, u = ideles.decompose(window, x)
            return (ideles.delta(window, A) + u == x and u.is_unit()
                    and all(A[k] == x[k][0] for k in window.knots))
        if _guard(res, doc, run) is False:
            res.fail(doc, "decomposition does not reassemble")
    for _ in range(homology_windows):
        window = random_window(rng, rng.randint(0, homology_knots))
        for size in range(len(window) + 1):
            for L in itertools.combinations(window.knots, size):
                res.instances += 1
                got = ideles.window_homology(window, L)
                if got != FinAbGroup((), len(L)):
                    res.fail(instance_document(window, CoverSpec(1, ()), sublink=list(L)),
                             f"window homology {got}, expected Z^{len(L)}")
    return res


def _reciprocity_problems(window, cover):
    problems = []
    q = ideles.reciprocity_quotient(window, cover)
    if not q.is_cyclic_of_order(cover.n):
        problems.append(f"quotient is {q}, not Z/{cover.n}")
    for k in window.knots:
        if ideles.artin_symbol(window, cover, ideles.delta(window, ideles.Chain2({k: 1}))):
            problems.append(f"symbol of delta(S_{k}) is nonzero")
    table = ideles.splitting_table(window, cover)
    for k in window.knots:
        s = table[k]
        for vec in ((0, s.e), (s.d, s.t)):
            if ideles.artin_symbol(window, cover, ideles.BaseIdele({k: vec})):
                problems.append(f"symbol of norm vector {vec} at {k} is nonzero")
    ideles.symbol_generator(window, cover)
    return problems


def check_reciprocity(rng, instances=200, max_n=8, max_knots=4, enriched=False) -> CheckResult:
    """Quotient ~ Z/n and symbol behaviour, exhaustive over characters on a random L_0.

    With ``enriched`` each window is first extended by :func:`ideles.enrich_window`.
    """
    res = CheckResult("reciprocity_enriched" if enriched else "reciprocity")
    for _ in range(instances):
        window = random_window(rng, rng.randint(1, max_knots))
        n = rng.randint(1, max_n)
        if n == 1:
            covers = [CoverSpec(1, ())]
        else:
            r = rng.randint(1, len(window))
            labels = sorted(rng.sample(window.knots, r), key=window.index)
            covers = [CoverSpec(n, tuple(zip(labels, (a for _, a in c.branch))))
                      for c in all_covers(n, r)]
        for cover in covers:
            w = ideles.enrich_window(window, cover) if enriched else window
            res.instances += 1
            problems = _guard(res, instance_document(w, cover),
                              lambda: _reciprocity_problems(w, cover))
            if problems:
                if res.reproducer is None:
                    w, cover = minimize(w, cover, lambda a, b: bool(_reciprocity_problems(a, b)))
                res.fail(instance_document(w, cover), "; ".join(problems))
            if enriched and rng.random() < 0.25:
                a = random_cover_idele(rng, w, cover)
                if ideles.artin_symbol(w, cover, ideles.norm(w, cover, a)):
                    res.fail(instance_document(w, cover, cover_idele=a.to_json(w)),
                             "symbol of a norm is nonzero")
    return res


def check_commuting_diagram(rng, instances=500, max_n=12, max_knots=6) -> CheckResult:
    res = CheckResult("commuting_diagram")
    for _ in range(instances):
        window, cover = random_instance(rng, max_n, max_knots, unbranched=True)
        z = random_cycle(rng, window, cover)
        res.instances += 1
        doc = instance_document(window, cover, cycles=[z.to_json()])
        ok = _guard(res, doc, lambda: genus.commuting_diagram_check(window, cover, z))
        if ok is False:
            res.fail(doc, "chi and psi(norm(lift)) differ")
    return res


CHECKS = ("commuting_diagram", "direct_sum", "genus_count", "image_characterization",
          "image_characterization_galois", "reciprocity", "reciprocity_enriched",
          "satz90_roundtrip", "splitting_arithmetic", "tate_vanishing")


def run_battery(seed: int = 0, max_n: int = 8, max_knots: int = 4) -> list[CheckResult]:
    """All checks, each with its own RNG stream derived from ``seed``, sorted by name."""
    def rng(name):
        return random.Random(f"{seed}:{name}")

    runners = {
        "commuting_diagram": lambda: check_commuting_diagram(
            rng("commuting_diagram"), 500, max_n, max_knots),
        "direct_sum": lambda: check_direct_sum(
            rng("direct_sum"), 1000, max_knots, min(5, max_knots)),
        "genus_count": lambda: check_genus_count(max_n, min(4, max_knots)),
        "image_characterization": lambda: check_image_characterization(
            rng("image_characterization"), max_n, min(3, max_knots), 1000),
        "image_characterization_galois": lambda: check_image_characterization_galois(
            rng("image_characterization_galois"), max_n, min(3, max_knots), 1000),
        "reciprocity": lambda: check_reciprocity(
            rng("reciprocity"), 200, max_n, max_knots),
        "reciprocity_enriched": lambda: check_reciprocity(
            rng("reciprocity_enriched"), 50, max_n, max_knots, enriched=True),
        "satz90_roundtrip": lambda: check_satz90(
            rng("satz90_roundtrip"), 1000, max_n, max_knots),
        "splitting_arithmetic": lambda: check_splitting(max_n),
        "tate_vanishing": lambda: check_tate(
            rng("tate_vanishing"), max_n, 200, max_knots, min(6, max_n)),
    }
    results = []
    for name in CHECKS:
        try:
            results.append(runners[name]())
        except Exception as exc:
            res = CheckResult(name)
            res.fail({"seed": seed, "max_n": max_n, "max_knots": max_knots},
                     f"check aborted: {type(exc).__name__}: {exc}")
            results.append(res)
    return results
