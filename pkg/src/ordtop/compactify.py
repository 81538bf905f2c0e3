"""Numeric H-compactification of cataloged preordered spaces.

Pipeline: embed samples through a function family into the unit cube,
quantize, deduplicate into core vertices, extrapolate each end's tail
to a remainder vertex, and read the induced preorder off the quantized
H-coordinates.  Quantization before comparison is the soundness anchor:
tolerance-based comparisons are not transitive, integer comparisons are.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .catalog import evaluate_family
from .preorder import PreorderGraph, is_antisymmetric, quotient_preorder, \
    transitive_reflexive_closure
from .report import Check, CheckReport, merge_reports

DEFAULT_RESOLUTION = 512
DEFAULT_TAIL_DEPTH = 4
DEFAULT_EPS_Q = 1e-3
DEFAULT_EPS_CAUCHY = 0.01
DEFAULT_EPS_FN = 1e-6
DEFAULT_DELTA_EMBED = 0.01


class DominationError(ValueError):
    pass


@dataclass(frozen=True)
class ImageCloud:
    """Sampled image of the space in [0,1]^(H u C), H coordinates first."""

    entry: CatalogEntry
    family: FunctionFamily
    sample: object
    values: np.ndarray  # (n_samples, n_coords)
    h_count: int
    names: tuple

    @property
    def n_samples(self):
        return len(self.values)


def embed(entry, family, resolution=DEFAULT_RESOLUTION,
          tail_depth=DEFAULT_TAIL_DEPTH, eps_fn=DEFAULT_EPS_FN) -> ImageCloud:
    """Map every sample point to its family-value vector."""
    sample = entry.space.sample(resolution, tail_depth)
    coords = sample.coord_array()
    values = evaluate_family(family, coords).T
    names = tuple(f"H:{f.name}" for f in family.h) \
        + tuple(f"C:{f.name}" for f in family.c)
    bad = (values < -eps_fn) | (values > 1.0 + eps_fn)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValueError(
            f"function {names[j]} leaves [0,1] at sample "
            f"{sample.points[int(i)].coords}: {values[i, j]}"
        )
    values = np.clip(values, 0.0, 1.0)
    return ImageCloud(entry, family, sample, values, len(family.h), names)


@dataclass(frozen=True)
class Vertex:
    id: int
    kind: str  # core | remainder
    coords: tuple  # quantized values, multiples of eps_q


@dataclass(frozen=True)
class Compactification:
    cloud: ImageCloud
    eps_q: float
    eps_cauchy: float
    vertices: tuple
    quant: np.ndarray  # (n_vertices, n_coords) int64, coords / eps_q
    sample_map: np.ndarray  # sample index -> vertex id
    induced: PreorderGraph
    end_map: tuple  # end index -> vertex id, or None for a diverging end
    end_info: tuple  # per end: dict with status / limit / spread data
    complete: bool

    @property
    def h_count(self):
        return self.cloud.h_count

    @property
    def names(self):
        return self.cloud.names

    @property
    def n_vertices(self):
        return len(self.vertices)

    def core_ids(self):
        return tuple(v.id for v in self.vertices if v.kind == "core")

    def remainder_ids(self):
        return tuple(v.id for v in self.vertices if v.kind == "remainder")

    def induced_matrix(self):
        return self.induced.to_matrix()

    def representatives(self):
        """First sample index mapping to each vertex (-1 for remainder)."""
        reps = np.full(self.n_vertices, -1, dtype=int)
        for i in range(len(self.sample_map) - 1, -1, -1):
            reps[self.sample_map[i]] = i
        return reps


def _quantize(values, eps_q):
    return np.rint(np.asarray(values, dtype=float) / eps_q).astype(np.int64)


def _aitken(seq):
    """Accelerated limit of the last three terms; exact on geometric decay."""
    x0, x1, x2 = seq[-3], seq[-2], seq[-1]
    denom = x2 - 2.0 * x1 + x0
    if abs(denom) < 1e-12:
        return x2
    return x2 - (x2 - x1) ** 2 / denom


def _induced_graph(quant, h_count):
    """Preorder from coordinate-wise <= on the quantized H-part."""
    n = len(quant)
    rel = np.ones((n, n), dtype=bool)
    for c in range(h_count):
        col = quant[:, c]
        rel &= col[:, None] <= col[None, :]
    # reflexivity and transitivity are forced by integer comparisons;
    # assert anyway since every later consumer leans on them
    assert rel[np.arange(n), np.arange(n)].all()
    if n <= 1500:
        m = rel.astype(np.float32)
        assert not ((m @ m > 0.5) & ~rel).any(), "induced relation not transitive"
    else:
        rng = random.Random(0)
        for _ in range(100000):
            i, j, k = (rng.randrange(n) for _ in range(3))
            assert not (rel[i, j] and rel[j, k] and not rel[i, k])
    return PreorderGraph.from_matrix(rel), rel


def close_and_cluster(cloud, eps_q=DEFAULT_EPS_Q,
                      eps_cauchy=DEFAULT_EPS_CAUCHY) -> Compactification:
    """Quantize, dedup core vertices, extrapolate ends, build the preorder.

    Per end, the tail window is every sample in its shells.  Coordinates
    of C-class members take their declared tail constants (they are
    exactly constant outside a compact set; a finite window straddling
    the deepest supports would misreport that).  All other coordinates
    must stay within eps_cauchy over the window and are extrapolated
    from the last three shell means.  A quantized limit equal to a core
    vertex adds nothing; equal limits of different ends merge.
    """
    q = _quantize(cloud.values, eps_q)
    n = len(q)
    uq, inverse = np.unique(q, axis=0, return_inverse=True)
    first = np.full(len(uq), n, dtype=np.int64)
    np.minimum.at(first, inverse, np.arange(n, dtype=np.int64))
    order = np.argsort(first, kind="stable")
    rank = np.empty(len(uq), dtype=np.int64)
    rank[order] = np.arange(len(uq))
    sample_map = rank[inverse]
    vertex_rows = [tuple(int(x) for x in row) for row in uq[order]]
    row_index = {row: i for i, row in enumerate(vertex_rows)}

    members = cloud.family.members()
    end_map = []
    end_info = []
    complete = True
    for end, shells in enumerate(cloud.sample.tails):
        window = np.concatenate([np.array(s, dtype=int) for s in shells])
        limit = np.empty(len(members))
        worst_spread = 0.0
        worst_name = None
        for j, f in enumerate(members):
            if f.klass is not None:
                limit[j] = f.tail_value
                continue
            vals = cloud.values[window, j]
            spread = float(vals.max() - vals.min())
            if spread > worst_spread:
                worst_spread, worst_name = spread, cloud.names[j]
            means = [float(cloud.values[list(s), j].mean()) for s in shells]
            limit[j] = min(1.0, max(0.0, _aitken(means)))
        if worst_spread > eps_cauchy:
            complete = False
            end_map.append(None)
            end_info.append({
                "status": "diverges",
                "worst_coordinate": worst_name,
                "spread": worst_spread,
            })
            continue
        ql = tuple(int(v) for v in _quantize(limit, eps_q))
        info = {"status": "", "limit": ql, "spread": worst_spread,
                "shells": len(shells)}
        if ql in row_index:
            vid = row_index[ql]
            info["status"] = ("converges_into_core"
                              if vid < len(uq) else "merged_remainder")
        else:
            vid = len(vertex_rows)
            vertex_rows.append(ql)
            row_index[ql] = vid
            info["status"] = "remainder"
        end_map.append(vid)
        end_info.append(info)

    n_core = len(uq)
    quant = np.array(vertex_rows, dtype=np.int64)
    vertices = tuple(
        Vertex(i, "core" if i < n_core else "remainder",
               tuple(float(v) * eps_q for v in row))
        for i, row in enumerate(vertex_rows)
    )
    induced, _ = _induced_graph(quant, cloud.h_count)
    return Compactification(
        cloud=cloud, eps_q=eps_q, eps_cauchy=eps_cauchy, vertices=vertices,
        quant=quant, sample_map=sample_map, induced=induced,
        end_map=tuple(end_map), end_info=tuple(end_info), complete=complete,
    )


def verify_preorder_embedding(entry, comp, resolution=2048,
                              delta_embed=DEFAULT_DELTA_EMBED) -> CheckReport:
    """Spot-check that vertex order mirrors the space order.

    Two sweeps: (a) over distinct core-vertex pairs, the space relation
    between representative samples must match the induced relation both
    ways; (b) over a stride subsample of points, a space relation must
    be preserved forward into the induced relation.  Pass iff each
    violation rate is at most delta_embed.
    """
    space = entry.space
    coords = comp.cloud.sample.coord_array()
    ind = comp.induced_matrix()

    reps = comp.representatives()
    core = np.array(comp.core_ids(), dtype=int)
    rep_coords = coords[reps[core]]
    rel = space.relation_matrix(rep_coords)
    ind_core = ind[np.ix_(core, core)]
    mism = rel != ind_core
    pairs = mism.size
    count = int(mism.sum())
    witness = None
    if count:
        i, j = np.argwhere(mism)[0]
        witness = (tuple(rep_coords[int(i)]), tuple(rep_coords[int(j)]),
                   "induced" if ind_core[i, j] else "missing")
    rate = count / pairs if pairs else 0.0
    vertex_check = Check(
        "vertex_order_matches_space", rate <= delta_embed, witness=witness,
        metrics={"violations": count, "pairs": pairs, "rate": rate},
    )

    n = len(coords)
    stride = max(1, -(-n // min(resolution, n)))
    idx = np.arange(0, n, stride)
    sub_rel = space.relation_matrix(coords[idx])
    sub_map = comp.sample_map[idx]
    sub_ind = ind[np.ix_(sub_map, sub_map)]
    viol = sub_rel & ~sub_ind
    count2 = int(viol.sum())
    witness2 = None
    if count2:
        i, j = np.argwhere(viol)[0]
        witness2 = (tuple(coords[idx[int(i)]]), tuple(coords[idx[int(j)]]))
    rate2 = count2 / viol.size if viol.size else 0.0
    sample_check = Check(
        "sampled_relation_preserved", rate2 <= delta_embed, witness=witness2,
        metrics={"violations": count2, "pairs": int(viol.size), "rate": rate2},
    )
    return CheckReport((vertex_check, sample_check))


def remainder_is_ordered(comp) -> CheckReport:
    """Antisymmetry of the induced preorder on the remainder vertices."""
    if not comp.complete:
        raise ValueError("compactification is incomplete")
    rem = comp.remainder_ids()
    witness = None
    for u, v in itertools.combinations(rem, 2):
        if comp.induced.leq(u, v) and comp.induced.leq(v, u):
            witness = (u, v)
            break
    return CheckReport((Check(
        "remainder_antisymmetric", witness is None, witness=witness,
        metrics={"remainder_count": len(rem)},
    ),))


@dataclass(frozen=True)
class DominationMap:
    source: str
    target: str
    vertex_map: tuple
    report: CheckReport

    @property
    def ok(self):
        return self.report.passed


def _domination_checks(comp2, comp1, vertex_map) -> CheckReport:
    vm = np.asarray(vertex_map, dtype=int)
    same_samples = np.array_equal(vm[comp2.sample_map], comp1.sample_map)
    witness = None
    if not same_samples:
        i = int(np.argmax(vm[comp2.sample_map] != comp1.sample_map))
        witness = (i, tuple(comp2.cloud.sample.points[i].coords))
    commutes = Check("commutes_on_samples", same_samples, witness=witness)

    m2 = comp2.induced_matrix()
    m1 = comp1.induced_matrix()
    bad = m2 & ~m1[np.ix_(vm, vm)]
    witness = None
    if bad.any():
        u, v = np.argwhere(bad)[0]
        witness = (int(u), int(v), int(vm[u]), int(vm[v]))
    isotone = Check("isotone", not bad.any(), witness=witness)

    image = {int(vm[r]) for r in comp2.remainder_ids()}
    target_rem = set(comp1.remainder_ids())
    witness = None
    if image != target_rem:
        witness = {"image": sorted(image), "target": sorted(target_rem)}
    r2r = Check("remainder_to_remainder", image == target_rem,
                witness=witness)
    return CheckReport((commutes, isotone, r2r))


def _family_label(comp):
    return f"{comp.cloud.entry.name}[H={','.join(comp.cloud.family.h_names())}]"


def dominate(comp2, comp1) -> DominationMap:
    """Project the H2-compactification onto the H1 one (H1 subset of H2).

    The vertex map sends each source vertex to the target vertex whose
    quantized coordinates match the projection exactly, else to the
    nearest within one quantum per coordinate (ties to the lowest id).
    """
    names1, names2 = comp1.names, comp2.names
    h1 = set(names1[: comp1.h_count])
    h2 = set(names2[: comp2.h_count])
    if not h1 <= h2:
        raise DominationError(f"H-part {sorted(h1)} is not a subset of {sorted(h2)}")
    if sorted(names1[comp1.h_count:]) != sorted(names2[comp2.h_count:]):
        raise DominationError("C-parts differ")
    if abs(comp1.eps_q - comp2.eps_q) > 1e-15:
        raise DominationError("builds use different quanta")
    proj_idx = [names2.index(nm) for nm in names1]

    target = comp1.quant
    vertex_map = []
    for v in range(comp2.n_vertices):
        p = comp2.quant[v, proj_idx]
        exact = np.where((target == p).all(axis=1))[0]
        if len(exact):
            vertex_map.append(int(exact[0]))
            continue
        cheb = np.abs(target - p).max(axis=1)
        best = int(cheb.min())
        if best > 1:
            raise DominationError(
                f"projected vertex {v} at {tuple(p)} is farther than one "
                f"quantum from every target vertex"
            )
        vertex_map.append(int(np.argmax(cheb == best)))
    report = _domination_checks(comp2, comp1, vertex_map)
    return DominationMap(_family_label(comp2), _family_label(comp1),
                         tuple(vertex_map), report)


@dataclass(frozen=True)
class DominationSearch:
    found: object  # DominationMap or None
    candidates: tuple  # (remainder assignment, first failing check)


def attempt_domination(comp_a, comp_b, cap=200000) -> DominationSearch:
    """Exhaustive search for a domination map comp_a -> comp_b.

    The core identification is forced sample-by-sample; only the images
    of comp_a's remainder vertices are free.  Returns the first map
    passing all checks, or every candidate with its failing check.
    """
    rem_a = comp_a.remainder_ids()
    if len(rem_a) > 8 or len(comp_b.remainder_ids()) > 8:
        raise DominationError("remainder too large for exhaustive search")
    if len(comp_a.sample_map) != len(comp_b.sample_map):
        raise DominationError("builds sample different point sets")

    vm = np.full(comp_a.n_vertices, -1, dtype=int)
    for i, va in enumerate(comp_a.sample_map):
        vb = comp_b.sample_map[i]
        if vm[va] == -1:
            vm[va] = vb
        elif vm[va] != vb:
            return DominationSearch(None, ((("core", int(va)),
                                            "core_identification"),))

    n_b = comp_b.n_vertices
    if n_b ** max(1, len(rem_a)) > cap:
        raise DominationError("remainder too large for exhaustive search")
    candidates = []
    for assign in itertools.product(range(n_b), repeat=len(rem_a)):
        trial = vm.copy()
        for r, target in zip(rem_a, assign):
            trial[r] = target
        report = _domination_checks(comp_a, comp_b, trial)
        if report.passed:
            found = DominationMap(_family_label(comp_a),
                                  _family_label(comp_b),
                                  tuple(int(x) for x in trial), report)
            return DominationSearch(found, tuple(candidates))
        failing = next(c.name for c in report.checks if not c.passed)
        candidates.append((assign, failing))
    return DominationSearch(None, tuple(candidates))


@dataclass(frozen=True)
class ExtendabilityResult:
    extendable: bool
    values: dict  # remainder vertex id -> extension value
    reason: str = ""

    def __bool__(self):
        return self.extendable


def extendability(entry, comp, f, eps_cauchy=None) -> ExtendabilityResult:
    """Whether f extends continuously and isotonely to the remainder.

    Per end: f's raw values over the tail window must agree within
    eps_cauchy, its extrapolated limits at ends sharing a remainder
    vertex must agree, an end converging into the core must match the
    core value there, and the assigned limits must respect the induced
    preorder against per-vertex mean core values.
    """
    if not comp.complete:
        raise ValueError("compactification is incomplete")
    if f.monotone != "isotone":
        raise ValueError(f"{f.name} is not tagged isotone")
    eps = comp.eps_cauchy if eps_cauchy is None else eps_cauchy
    coords = comp.cloud.sample.coord_array()
    vals = f.evaluate(coords)

    end_limits = {}
    for end, shells in enumerate(comp.cloud.sample.tails):
        if f.klass is not None:
            end_limits[end] = float(f.tail_value)
            continue
        window = np.concatenate([np.array(s, dtype=int) for s in shells])
        w = vals[window]
        if float(w.max() - w.min()) > eps:
            return ExtendabilityResult(
                False, {}, f"tail of end {end} is not Cauchy for {f.name}: "
                f"spread {float(w.max() - w.min()):.4f}")
        means = [float(vals[list(s)].mean()) for s in shells]
        end_limits[end] = min(1.0, max(0.0, _aitken(means)))

    extension = {}
    core_mean = np.zeros(comp.n_vertices)
    counts = np.zeros(comp.n_vertices)
    np.add.at(core_mean, comp.sample_map, vals)
    np.add.at(counts, comp.sample_map, 1.0)
    with np.errstate(invalid="ignore"):
        core_mean = np.where(counts > 0, core_mean / np.maximum(counts, 1), 0.0)

    for end, vid in enumerate(comp.end_map):
        lim = end_limits[end]
        if comp.vertices[vid].kind == "core":
            if abs(lim - core_mean[vid]) > eps:
                return ExtendabilityResult(
                    False, {}, f"end {end} limit {lim:.4f} disagrees with "
                    f"core value {core_mean[vid]:.4f} for {f.name}")
            continue
        if vid in extension and abs(extension[vid] - lim) > eps:
            return ExtendabilityResult(
                False, {}, f"ends merging at vertex {vid} disagree for "
                f"{f.name}: {extension[vid]:.4f} vs {lim:.4f}")
        extension.setdefault(vid, lim)

    full = core_mean.copy()
    for vid, value in extension.items():
        full[vid] = value
    ind = comp.induced_matrix()
    bad = ind & (full[:, None] > full[None, :] + eps)
    if bad.any():
        u, v = np.argwhere(bad)[0]
        return ExtendabilityResult(
            False, {}, f"extension of {f.name} breaks isotonicity between "
            f"vertices {int(u)} and {int(v)}")
    return ExtendabilityResult(True, extension)


def i_closure(entry, comp, candidates) -> tuple:
    """The subset of candidates extendable to this compactification."""
    return tuple(f for f in candidates
                 if extendability(entry, comp, f).extendable)


def smallest_closed_preorder_diagnostic(comp) -> CheckReport:
    """Compare the induced preorder with the least closed relation over it.

    Seed relation: the diagonal, the space relation between core-vertex
    representatives, and the remainder rows/columns (tail-limit
    inheritance: a remainder vertex relates exactly where its quantized
    limit vector does).  One transitive closure gives the least closed
    preorder containing the seed; the check reports whether the induced
    preorder adds pairs beyond it.
    """
    if not comp.complete:
        raise ValueError("compactification is incomplete")
    n = comp.n_vertices
    space = comp.cloud.entry.space
    coords = comp.cloud.sample.coord_array()
    reps = comp.representatives()
    core = np.array(comp.core_ids(), dtype=int)

    seed = np.eye(n, dtype=bool)
    seed[np.ix_(core, core)] = space.relation_matrix(coords[reps[core]])
    ind = comp.induced_matrix()
    for r in comp.remainder_ids():
        seed[r, :] = ind[r, :]
        seed[:, r] = ind[:, r]

    closure = transitive_reflexive_closure(PreorderGraph.from_matrix(seed))
    fix = closure.to_matrix()
    excess = ind & ~fix
    witness = None
    if excess.any():
        pairs = [tuple(map(int, p)) for p in np.argwhere(excess)[:20]]
        witness = pairs
    return CheckReport((Check(
        "induced_equals_smallest_closure", not excess.any(), witness=witness,
        metrics={"induced_pairs": int(ind.sum()),
                 "closure_pairs": int(fix.sum()),
                 "excess_pairs": int(excess.sum())},
    ),))


def nachbin_pipeline(entry, family, resolution=DEFAULT_RESOLUTION,
                     tail_depth=DEFAULT_TAIL_DEPTH, eps_q=DEFAULT_EPS_Q,
                     eps_cauchy=DEFAULT_EPS_CAUCHY) -> CheckReport:
    """Quotient-then-compactify against compactify-then-quotient.

    Path A compactifies the space and quotients the induced preorder by
    its symmetric part; path B compactifies the catalog's quotient
    space.  The report checks an order isomorphism matching the sample
    projections vertex-for-vertex.
    """
    comp_a = close_and_cluster(embed(entry, family, resolution, tail_depth),
                               eps_q, eps_cauchy)
    checks = [Check("path_a_complete", comp_a.complete,
                    witness=None if comp_a.complete else comp_a.end_info)]
    q_entry, project = entry.quotient_data()
    if q_entry is entry:
        res_b = resolution
    else:
        half = max(2, (resolution - 2 * tail_depth + 1) // 2)
        res_b = half + tail_depth
    comp_b = close_and_cluster(embed(q_entry, family, res_b, tail_depth),
                               eps_q, eps_cauchy)
    checks.append(Check("path_b_complete", comp_b.complete,
                        witness=None if comp_b.complete else comp_b.end_info))
    if not (comp_a.complete and comp_b.complete):
        return CheckReport(tuple(checks))

    qgraph, classes = quotient_preorder(comp_a.induced)
    anti, wit = is_antisymmetric(qgraph)
    checks.append(Check("quotient_antisymmetric", anti, witness=wit))

    h = comp_a.h_count
    class_vecs = []
    consistent = True
    for block in classes.classes:
        vecs = {tuple(comp_a.quant[v, :h]) for v in block}
        if len(vecs) != 1:
            consistent = False
        class_vecs.append(next(iter(vecs)))
    checks.append(Check("classes_share_h_coordinates", consistent,
                        witness=None if consistent else "mixed class"))

    b_vecs = [tuple(row[:h]) for row in comp_b.quant]
    phi = {}
    missing = None
    lookup = {vec: i for i, vec in enumerate(b_vecs)}
    if len(lookup) != len(b_vecs):
        missing = "duplicate H-vectors among quotient vertices"
    else:
        for ci, vec in enumerate(class_vecs):
            if vec not in lookup:
                missing = ("class without partner", ci, vec)
                break
            phi[ci] = lookup[vec]
    bijective = missing is None and len(phi) == len(class_vecs) \
        and len(set(phi.values())) == len(b_vecs)
    checks.append(Check(
        "vertex_bijection", bijective,
        witness=None if bijective else (missing or "counts differ"),
        metrics={"classes": len(class_vecs), "quotient_vertices": len(b_vecs)},
    ))
    if not bijective:
        return CheckReport(tuple(checks))

    iso_witness = None
    mb = comp_b.induced_matrix()
    for i in range(len(class_vecs)):
        for j in range(len(class_vecs)):
            if qgraph.leq(i, j) != bool(mb[phi[i], phi[j]]):
                iso_witness = (i, j)
                break
        if iso_witness:
            break
    checks.append(Check("order_isomorphism", iso_witness is None,
                        witness=iso_witness))

    index_map = classes.index_map()
    b_coords = {p.coords: i for i, p in enumerate(comp_b.cloud.sample.points)}
    proj_witness = None
    for i, p in enumerate(comp_a.cloud.sample.points):
        target = project(p.coords)
        if target not in b_coords:
            proj_witness = (p.coords, "projection not among quotient samples")
            break
        via_a = phi[index_map[int(comp_a.sample_map[i])]]
        via_b = int(comp_b.sample_map[b_coords[target]])
        if via_a != via_b:
            proj_witness = (p.coords, via_a, via_b)
            break
    checks.append(Check("projections_commute", proj_witness is None,
                        witness=proj_witness))
    return CheckReport(tuple(checks))


def build_compactification(entry, family, resolution=DEFAULT_RESOLUTION,
                           tail_depth=DEFAULT_TAIL_DEPTH,
                           eps_q=DEFAULT_EPS_Q,
                           eps_cauchy=DEFAULT_EPS_CAUCHY,
                           eps_fn=DEFAULT_EPS_FN,
                           delta_embed=DEFAULT_DELTA_EMBED,
                           min_agreement=0.99, diagnostic_budget=1500):
    """Full pipeline: validate, embed, close, verify.  (comp, report).

    The smallest-closure diagnostic needs an exact transitive closure,
    so it is included only up to diagnostic_budget vertices; past that
    the report simply omits it (it remains callable directly).
    """
    from .catalog import validate_family

    validation = validate_family(entry, family, resolution, tail_depth,
                                 eps_fn, min_agreement)
    cloud = embed(entry, family, resolution, tail_depth, eps_fn)
    comp = close_and_cluster(cloud, eps_q, eps_cauchy)
    reports = [validation]
    complete_check = Check(
        "all_ends_cauchy", comp.complete,
        witness=None if comp.complete else [
            info for info in comp.end_info if info["status"] == "diverges"],
        metrics={"vertices": comp.n_vertices,
                 "remainder": len(comp.remainder_ids())},
    )
    reports.append(CheckReport((complete_check,)))
    reports.append(verify_preorder_embedding(entry, comp,
                                             delta_embed=delta_embed))
    if comp.complete:
        reports.append(remainder_is_ordered(comp))
        if comp.n_vertices <= diagnostic_budget:
            reports.append(smallest_closed_preorder_diagnostic(comp))
    return comp, merge_reports(*reports)
