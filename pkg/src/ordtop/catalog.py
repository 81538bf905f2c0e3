"""Cataloged non-compact preordered spaces with evaluable function families.

Each entry provides deterministic sampling with exhaustion tails, an
exact preorder oracle, and named [0,1]-valued functions split into an
H-part (isotone, induces the preorder) and a C-part (constant outside a
compact set).  Custom spaces are not accepted: relation oracles are
code, not data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .report import Check, CheckReport

TWO_PI = 2.0 * math.pi

# tail shells for the continuous entries start at exhaustion level 7;
# deeper shells halve the distance to the end, so a run with tail_depth
# T samples levels 7 .. 6+T
TAIL_SHELL_BASE = 7


@dataclass(frozen=True)
class SamplePoint:
    coords: tuple
    level: int
    end: int  # end index, -1 for points in the compact core


@dataclass(frozen=True)
class SampleSet:
    points: tuple
    # per end: shells from shallow to deep, each a tuple of point indices
    tails: tuple

    def coord_array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points], dtype=float)

    def levels(self) -> np.ndarray:
        return np.array([p.level for p in self.points], dtype=int)


@dataclass(frozen=True)
class ScalarFunction:
    """Evaluable function into [0,1] with monotonicity and class tags.

    klass is None or one of "C", "C-", "C+": constant outside a compact
    set / additionally that constant is 0 / is 1.  tail_value is the
    declared constant, exact for points with level >= tail_level.
    """

    name: str
    fn: object  # coords tuple -> float
    monotone: str = "none"  # isotone | anti_isotone | none
    klass: object = None
    tail_value: object = None
    tail_level: int = 0
    batch: object = None  # optional numpy path: (n, dim) array -> (n,) values

    def __post_init__(self):
        if self.monotone not in ("isotone", "anti_isotone", "none"):
            raise ValueError(f"bad monotone tag {self.monotone!r}")
        if self.klass not in (None, "C", "C-", "C+"):
            raise ValueError(f"bad class tag {self.klass!r}")
        if self.klass == "C-" and self.tail_value != 0.0:
            raise ValueError("C- functions must declare tail value 0")
        if self.klass == "C+" and self.tail_value != 1.0:
            raise ValueError("C+ functions must declare tail value 1")
        if self.klass is not None and self.tail_value is None:
            raise ValueError("C-class functions must declare a tail value")

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an (n, dim) coordinate array."""
        if self.batch is not None:
            return np.asarray(self.batch(coords), dtype=float)
        return np.array([self.fn(tuple(c)) for c in coords], dtype=float)


@dataclass(frozen=True)
class FunctionFamily:
    h: tuple  # isotone members; the induced preorder reads only these
    c: tuple  # C-class members

    def __post_init__(self):
        for f in self.h:
            if f.monotone != "isotone":
                raise ValueError(f"H-part member {f.name} is not tagged isotone")
        for f in self.c:
            if f.klass is None:
                raise ValueError(f"C-part member {f.name} is not C-class")
        names = [f.name for f in self.h]
        if len(set(names)) != len(names):
            raise ValueError("duplicate names in H-part")
        names = [f.name for f in self.c]
        if len(set(names)) != len(names):
            raise ValueError("duplicate names in C-part")

    def members(self) -> tuple:
        return self.h + self.c

    def h_names(self) -> tuple:
        return tuple(f.name for f in self.h)


class SampledSpace:
    """Generator for one cataloged space; subclasses fill in the pieces."""

    name = ""
    dim = 1
    ends = 0

    def relation(self, p, q) -> bool:
        a = self.relation_matrix(np.array([p, q], dtype=float))
        return bool(a[0, 1])

    def relation_matrix(self, coords: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample(self, resolution: int, tail_depth: int) -> SampleSet:
        raise NotImplementedError


def _shell_indices(points, end):
    """Group one end's tail points into shells by level, shallow first."""
    by_level = {}
    for idx, p in enumerate(points):
        if p.end == end:
            by_level.setdefault(p.level, []).append(idx)
    return tuple(tuple(by_level[k]) for k in sorted(by_level))


class HalfOpenInterval(SampledSpace):
    """E = [0,1) with the standard order; the end sits at 1."""

    name = "half-open-interval"
    dim = 1
    ends = 1

    def relation_matrix(self, coords):
        x = coords[:, 0]
        return x[:, None] <= x[None, :]

    def sample(self, resolution, tail_depth):
        pts = []
        core = np.linspace(0.0, 1.0 - 2.0 ** -TAIL_SHELL_BASE,
                           resolution - tail_depth, endpoint=False)
        for x in core:
            level = 0 if x <= 0.5 else int(-math.log2(1.0 - x))
            pts.append(SamplePoint((float(x),), level, -1))
        for k in range(TAIL_SHELL_BASE, TAIL_SHELL_BASE + tail_depth):
            x = 1.0 - 0.6 * 2.0 ** -k
            pts.append(SamplePoint((x,), k, 0))
        points = tuple(pts)
        return SampleSet(points, (_shell_indices(points, 0),))


class ClosedInterval(SampledSpace):
    """E = [0,1], compact: zero ends, every level 0."""

    name = "closed-interval"
    dim = 1
    ends = 0

    def relation_matrix(self, coords):
        x = coords[:, 0]
        return x[:, None] <= x[None, :]

    def sample(self, resolution, tail_depth):
        xs = np.linspace(0.0, 1.0, resolution)
        points = tuple(SamplePoint((float(x),), 0, -1) for x in xs)
        return SampleSet(points, ())


class NaturalsDiscrete(SampledSpace):
    """E = the naturals with the discrete preorder (equality only)."""

    name = "nat-discrete"
    dim = 1
    ends = 1

    def relation_matrix(self, coords):
        n = coords[:, 0]
        return n[:, None] == n[None, :]

    def sample(self, resolution, tail_depth):
        pts = []
        for n in range(resolution):
            end = 0 if n >= resolution - tail_depth else -1
            pts.append(SamplePoint((float(n),), n, end))
        points = tuple(pts)
        return SampleSet(points, (_shell_indices(points, 0),))


class RealLineMirror(SampledSpace):
    """E = R with x <= y iff |y| <= |x|; x and -x are equivalent."""

    name = "real-line-mirror"
    dim = 1
    ends = 2  # +inf and -inf; every C function ends up merging them

    def relation_matrix(self, coords):
        a = np.abs(coords[:, 0])
        return a[None, :] <= a[:, None]

    def sample(self, resolution, tail_depth):
        pts = []
        half = max(2, (resolution - 2 * tail_depth + 1) // 2)
        mags = np.linspace(0.0, 96.0, half)
        for m in mags:
            level = 0 if m < 1.0 else int(math.log2(m))
            pts.append(SamplePoint((float(m),), level, -1))
            if m > 0.0:
                pts.append(SamplePoint((float(-m),), level, -1))
        for k in range(TAIL_SHELL_BASE, TAIL_SHELL_BASE + tail_depth):
            m = 1.5 * 2.0 ** k
            pts.append(SamplePoint((m,), k, 0))
            pts.append(SamplePoint((-m,), k, 1))
        points = tuple(pts)
        return SampleSet(
            points,
            (_shell_indices(points, 0),
             _shell_indices(points, 1)),
        )


class MirrorRay(SampledSpace):
    """Quotient of the mirror line: [0, inf) with the reversed order."""

    name = "mirror-ray"
    dim = 1
    ends = 1

    def relation_matrix(self, coords):
        r = coords[:, 0]
        return r[None, :] <= r[:, None]

    def sample(self, resolution, tail_depth):
        pts = []
        mags = np.linspace(0.0, 96.0, resolution - tail_depth)
        for m in mags:
            level = 0 if m < 1.0 else int(math.log2(m))
            pts.append(SamplePoint((float(m),), level, -1))
        for k in range(TAIL_SHELL_BASE, TAIL_SHELL_BASE + tail_depth):
            pts.append(SamplePoint((1.5 * 2.0 ** k,), k, 0))
        points = tuple(pts)
        return SampleSet(points, (_shell_indices(points, 0),))


class MisnerStrip(SampledSpace):
    """The strip 0 < t <= 1 around the circle, metric 2 dtheta dt + t dtheta^2,
    time-oriented toward decreasing t.

    The two null families are theta = const and dt/dtheta = -t/2, both
    future-directed with nonincreasing t, so integrating the winding
    null curve gives the causal relation in closed form:

        (t_p, th_p) <= (t_q, th_q)  iff  t_q <= t_p * exp(-d/2),
        d = (th_q - th_p) mod 2pi.

    Extra windings only tighten the bound, so the single-winding form is
    exact; the test suite re-derives it with an independent integrator.
    """

    name = "misner-strip"
    dim = 2
    ends = 1

    def relation_matrix(self, coords):
        t = coords[:, 0]
        th = coords[:, 1]
        d = np.mod(th[None, :] - th[:, None], TWO_PI)
        return t[None, :] <= t[:, None] * np.exp(-0.5 * d)

    def sample(self, resolution, tail_depth):
        n_theta = max(8, int(round(math.sqrt(resolution))))
        n_rows = max(2, int(round(resolution / n_theta)))
        thetas = np.arange(n_theta) * TWO_PI / n_theta
        pts = []
        t_lo = 1.05 * 2.0 ** -TAIL_SHELL_BASE
        core_t = np.exp(np.linspace(0.0, math.log(t_lo),
                                    max(2, n_rows - tail_depth)))
        for t in core_t:
            level = max(0, int(-math.log2(t)))
            for th in thetas:
                pts.append(SamplePoint((float(t), float(th)), level, -1))
        for k in range(TAIL_SHELL_BASE, TAIL_SHELL_BASE + tail_depth):
            t = 0.6 * 2.0 ** -k
            for th in thetas:
                pts.append(SamplePoint((t, float(th)), k, 0))
        points = tuple(pts)
        return SampleSet(points, (_shell_indices(points, 0),))


# ------------------------------------------------------------- functions


def _const1(_coords):
    return 1.0


_CONST_ONE = ScalarFunction(
    "const1", _const1, monotone="isotone", klass="C", tail_value=1.0,
    tail_level=0, batch=lambda a: np.ones(len(a)),
)


def _interval_pool():
    def mk(name, f, vec):
        return ScalarFunction(name, f, monotone="isotone", batch=vec)

    return {
        "id": mk("id", lambda c: c[0], lambda a: a[:, 0]),
        "sq": mk("sq", lambda c: c[0] ** 2, lambda a: a[:, 0] ** 2),
        "cube": mk("cube", lambda c: c[0] ** 3, lambda a: a[:, 0] ** 3),
        "sqrt": mk("sqrt", lambda c: math.sqrt(c[0]),
                   lambda a: np.sqrt(a[:, 0])),
        # rises so late that a desk-scale tail window cannot see its limit
        "pow64": mk("pow64", lambda c: c[0] ** 64, lambda a: a[:, 0] ** 64),
        "const1": _CONST_ONE,
    }


def _mirror_pool():
    def mk(name, f, vec):
        # nonincreasing in |x| means isotone for the mirror order
        return ScalarFunction(name, f, monotone="isotone", batch=vec)

    return {
        "invmod": mk("invmod", lambda c: 1.0 / (1.0 + abs(c[0])),
                     lambda a: 1.0 / (1.0 + np.abs(a[:, 0]))),
        "invmod2": mk("invmod2", lambda c: 1.0 / (1.0 + abs(c[0])) ** 2,
                      lambda a: 1.0 / (1.0 + np.abs(a[:, 0])) ** 2),
        "exp2": mk("exp2", lambda c: 2.0 ** -abs(c[0]),
                   lambda a: 2.0 ** -np.abs(a[:, 0])),
        "const1": _CONST_ONE,
    }


def _nat_pool():
    # the preorder is discrete, so every function is (vacuously) isotone
    return {
        "alt": ScalarFunction(
            "alt", lambda c: (1.0 + (-1.0) ** int(c[0])) / 2.0,
            monotone="isotone",
            batch=lambda a: (1.0 + (-1.0) ** a[:, 0].astype(int)) / 2.0,
        ),
        "sat": ScalarFunction(
            "sat", lambda c: c[0] / (c[0] + 1.0),
            monotone="isotone",
            batch=lambda a: a[:, 0] / (a[:, 0] + 1.0),
        ),
    }


def _nat_bumps(resolution):
    minus, plus = [], []
    for k in range(resolution):
        minus.append(ScalarFunction(
            f"b{k}",
            (lambda k: lambda c: 1.0 if int(c[0]) == k else 0.0)(k),
            monotone="isotone", klass="C-", tail_value=0.0, tail_level=k + 1,
            batch=(lambda k: lambda a: (a[:, 0].astype(int) == k).astype(float))(k),
        ))
        plus.append(ScalarFunction(
            f"f{k}",
            (lambda k: lambda c: 0.0 if int(c[0]) == k else 1.0)(k),
            monotone="isotone", klass="C+", tail_value=1.0, tail_level=k + 1,
            batch=(lambda k: lambda a: (a[:, 0].astype(int) != k).astype(float))(k),
        ))
    return tuple(minus), tuple(plus)


def _window_integral(u, sigma):
    """Integral of exp(-s/2) over the arc [u-sigma, u+sigma] on the circle."""
    u = np.asarray(u, dtype=float)
    lo = u - sigma
    hi = u + sigma
    plain = 2.0 * (np.exp(-0.5 * lo) - np.exp(-0.5 * hi))
    wrap_lo = (
        2.0 * (np.exp(-0.5 * (lo + TWO_PI)) - math.exp(-0.5 * TWO_PI))
        + 2.0 * (1.0 - np.exp(-0.5 * hi))
    )
    wrap_hi = (
        2.0 * (np.exp(-0.5 * lo) - math.exp(-0.5 * TWO_PI))
        + 2.0 * (1.0 - np.exp(-0.5 * (hi - TWO_PI)))
    )
    return np.where(lo < 0.0, wrap_lo, np.where(hi > TWO_PI, wrap_hi, plain))


def arc_bound_function(alpha, sigma=0.02):
    """Crossing-bound functional averaged over a small arc of directions.

    For a single direction a the value 1 - t*exp(-((a-theta) mod 2pi)/2)
    is isotone for the strip's causal order but jumps at theta = a;
    averaging a over [alpha-sigma, alpha+sigma] keeps isotonicity exactly
    (each slice is isotone) and restores continuity.
    """

    def fn(coords):
        t, th = coords[0], coords[1]
        u = (alpha - th) % TWO_PI
        return 1.0 - t * float(_window_integral(u, sigma)) / (2.0 * sigma)

    def batch(arr):
        u = np.mod(alpha - arr[:, 1], TWO_PI)
        return 1.0 - arr[:, 0] * _window_integral(u, sigma) / (2.0 * sigma)

    return ScalarFunction(f"arc{int(round(alpha / TWO_PI * 1000)):03d}",
                          fn, monotone="isotone", batch=batch)


def _misner_pool(m=128, sigma=0.02):
    pool = {}
    for i in range(m):
        f = arc_bound_function(TWO_PI * i / m, sigma)
        pool[f.name] = f
    return pool


# --------------------------------------------------------------- entries


class CatalogEntry:
    """One space plus its named function pool and family builders."""

    def __init__(self, space, pool, default_h, c_part, selectors=()):
        self.space = space
        self.pool = dict(pool)
        self.default_h = tuple(default_h)
        self.c_part = tuple(c_part)
        self.selectors = tuple(selectors)

    @property
    def name(self):
        return self.space.name

    def family(self, selector="default", resolution=512, tail_depth=4):
        """Build a family from a selector or a comma-list of pool names."""
        if selector in ("default", None, ""):
            names = self.default_h
            return FunctionFamily(
                tuple(self.pool[n] for n in names), self.c_part
            )
        if selector in ("C", "Cminus", "Cplus"):
            if self.space.name != "nat-discrete":
                raise KeyError(
                    f"selector {selector!r} is only valid for nat-discrete"
                )
            minus, plus = _nat_bumps(resolution)
            if selector == "C":
                return FunctionFamily(minus + plus, ())
            if selector == "Cminus":
                return FunctionFamily(minus, ())
            return FunctionFamily(plus, ())
        names = [s.strip() for s in selector.split(",") if s.strip()]
        missing = [n for n in names if n not in self.pool]
        if missing:
            raise KeyError(f"unknown function names for {self.name}: {missing}")
        return FunctionFamily(tuple(self.pool[n] for n in names), self.c_part)

    def family_from_names(self, names, resolution=512, tail_depth=4):
        return self.family(",".join(names), resolution, tail_depth)

    def quotient_data(self):
        """(entry for E/~, coordinate projection).  Identity when ~ is trivial."""
        return self, lambda coords: coords


class _MirrorEntry(CatalogEntry):
    def quotient_data(self):
        ray = CatalogEntry(MirrorRay(), _mirror_pool(), ("invmod",),
                           (_CONST_ONE,))
        return ray, lambda coords: (abs(coords[0]),)


class _NatEntry(CatalogEntry):
    def family(self, selector="default", resolution=512, tail_depth=4):
        if selector in ("default", None, ""):
            selector = "C"
        if selector in ("C", "Cminus", "Cplus"):
            minus, plus = _nat_bumps(resolution)
            if selector == "C":
                return FunctionFamily(minus + plus, ())
            if selector == "Cminus":
                return FunctionFamily(minus, ())
            return FunctionFamily(plus, ())
        fam = super().family(selector, resolution, tail_depth)
        return fam


def catalog(name: str) -> CatalogEntry:
    if name == "half-open-interval":
        return CatalogEntry(HalfOpenInterval(), _interval_pool(), ("id",),
                            (_CONST_ONE,))
    if name == "closed-interval":
        return CatalogEntry(ClosedInterval(), _interval_pool(), ("id",),
                            (_CONST_ONE,))
    if name == "nat-discrete":
        return _NatEntry(NaturalsDiscrete(), _nat_pool(), (), (),
                         selectors=("C", "Cminus", "Cplus"))
    if name == "real-line-mirror":
        return _MirrorEntry(RealLineMirror(), _mirror_pool(), ("invmod",),
                            (_CONST_ONE,))
    if name == "misner-strip":
        return CatalogEntry(MisnerStrip(), _misner_pool(),
                            tuple(sorted(_misner_pool())), (_CONST_ONE,))
    raise KeyError(f"unknown catalog space {name!r}")


CATALOG_NAMES = (
    "half-open-interval",
    "nat-discrete",
    "real-line-mirror",
    "misner-strip",
    "closed-interval",
)


# ------------------------------------------------------------ validation


def evaluate_family(family: FunctionFamily, coords: np.ndarray):
    """Stack family values: rows follow family.members() order."""
    vals = [f.evaluate(coords) for f in family.members()]
    return np.array(vals, dtype=float) if vals else np.zeros((0, len(coords)))


def validate_family(entry, family, resolution=512, tail_depth=4,
                    eps_fn=1e-6, min_agreement=0.99) -> CheckReport:
    """Check tags on samples and that the H-part represents the relation.

    Representation is scored as the agreement rate between the space
    relation and the coordinate-wise H comparison over all sampled
    pairs; it passes at min_agreement (default 99%).
    """
    space = entry.space if isinstance(entry, CatalogEntry) else entry
    sample = space.sample(resolution, tail_depth)
    coords = sample.coord_array()
    levels = sample.levels()
    rel = space.relation_matrix(coords)
    checks = [Check("h_part_nonempty", len(family.h) > 0,
                    witness=None if family.h else "empty H-part")]

    all_vals = evaluate_family(family, coords)
    tag_witness = None
    range_witness = None
    for row, f in enumerate(family.members()):
        vals = all_vals[row]
        if not np.all((vals >= -eps_fn) & (vals <= 1.0 + eps_fn)):
            i = int(np.argmax((vals < -eps_fn) | (vals > 1.0 + eps_fn)))
            range_witness = range_witness or (f.name, sample.points[i].coords)
        if f.monotone == "isotone":
            bad = rel & (vals[:, None] > vals[None, :] + eps_fn)
        elif f.monotone == "anti_isotone":
            bad = rel & (vals[:, None] < vals[None, :] - eps_fn)
        else:
            bad = None
        if bad is not None and bad.any() and tag_witness is None:
            i, j = np.argwhere(bad)[0]
            tag_witness = (f.name, sample.points[int(i)].coords,
                           sample.points[int(j)].coords)
        if f.klass is not None:
            outside = levels >= f.tail_level
            off = outside & (np.abs(vals - f.tail_value) > eps_fn)
            if off.any() and tag_witness is None:
                i = int(np.argmax(off))
                tag_witness = (f.name, sample.points[i].coords,
                               "not at declared tail constant")
    checks.append(Check("values_in_unit_interval", range_witness is None,
                        witness=range_witness))
    checks.append(Check("monotone_and_class_tags", tag_witness is None,
                        witness=tag_witness))

    if family.h:
        induced = np.ones_like(rel)
        for row in range(len(family.h)):
            vals = all_vals[row]
            induced &= vals[:, None] <= vals[None, :] + eps_fn
        agree = induced == rel
        rate = float(agree.mean())
        witness = None
        if rate < min_agreement:
            i, j = np.argwhere(~agree)[0]
            witness = (sample.points[int(i)].coords,
                       sample.points[int(j)].coords,
                       "induced" if induced[i, j] else "missing")
        checks.append(Check(
            "represents_relation", rate >= min_agreement, witness=witness,
            metrics={"agreement_rate": rate,
                     "pairs": int(rel.size),
                     "disagreements": int((~agree).sum())},
        ))
    return CheckReport(tuple(checks))
