"""Executable coupling constructions.

Three experiments, each reproducible from a Seed:

* ``run_coupling_trial`` rebuilds an intersection graph feature by feature
  from shared uniform draw streams.  Every feature's coupled graph sits
  inside the clique on its reconstructed feature set by construction, and
  Poisson-count prefixes of the same streams yield the sandwich graph whose
  containment is certified whenever the guard events hold.

* ``coupon_collector_trial`` couples the construction with a coupon
  collector process: feature sets are the distinct vertices seen in
  per-feature phases of uniform draws, so full coverage of the coupon set
  is literally the event that no vertex stays isolated.

* ``poissonization_test`` checks the distributional identity between the
  draws-with-repetition model with a Poisson draw count and the
  independent-hyperedge model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as scipy_stats

from .errors import ValidationError
from .graphs import RigInstance, SimpleGraph, clique_edges, is_subgraph
from .sampling import FeatureProbabilities, Seed, draw_subsets, sample_subset
from .thresholds import summary_stats


@dataclass(frozen=True)
class FeatureDecomposition:
    """Per-feature size bookkeeping for the clique coupling.

    ``active_sizes[i]`` is the feature-class size when it is at least 2 and
    0 otherwise (singletons make no edges); ``odd_flags[i]`` marks the odd
    active sizes, which each consume one triangle draw.  ``pair_draws`` and
    ``triple_draws`` are the total uniform pair / triple draws needed:
    (active - 3*odd)/2 pairs and odd triples per feature.
    """

    sizes: tuple[int, ...]
    active_sizes: tuple[int, ...]
    odd_flags: tuple[int, ...]
    pair_draws: int
    triple_draws: int


def decompose_features(r: RigInstance) -> FeatureDecomposition:
    return decompose_sizes([len(s) for s in r.feature_sets])


def decompose_sizes(sizes) -> FeatureDecomposition:
    sizes = tuple(int(x) for x in sizes)
    active = tuple(x if x >= 2 else 0 for x in sizes)
    odd = tuple(1 if y % 2 else 0 for y in active)
    for y, z in zip(active, odd):
        if y - 3 * z < 0 or (y - 3 * z) % 2:
            raise AssertionError(f"active size {y} with odd flag {z} has no pair/triple split")
    pair_draws = sum((y - 3 * z) // 2 for y, z in zip(active, odd))
    triple_draws = sum(odd)
    return FeatureDecomposition(sizes, active, odd, pair_draws, triple_draws)


def _assemble_feature(size: int, odd: int, n: int, pair_draws, triple_draws,
                      rng: np.random.Generator) -> tuple[set[tuple[int, int]], frozenset[int]]:
    """Edges and reconstructed feature set for one feature, given its draws.

    The drawn pairs/triples are turned into cliques; the feature set is the
    touched vertices padded with uniformly chosen fresh ones up to `size`,
    so the edge set is a subgraph of the clique on the feature set by
    construction.
    """
    edges: set[tuple[int, int]] = set()
    touched: set[int] = set()
    for sub in pair_draws:
        edges.add(sub)
        touched.update(sub)
    for sub in triple_draws:
        edges.update(clique_edges(sub))
        touched.update(sub)
    missing = size - len(touched)
    if missing > 0:
        rest = sorted(set(range(n)) - touched)
        idx = sample_subset(len(rest), missing, rng)
        touched.update(rest[i] for i in idx)
    return edges, frozenset(touched)


def couple_feature(size: int, odd: int, n: int, seed) -> tuple[SimpleGraph, frozenset[int]]:
    """Coupled graph and feature set for a single feature class.

    ``size`` must be 0 or in {2, ..., n}; ``odd`` must match its parity.
    The returned graph is a subgraph of the clique on the returned set --
    guaranteed, not probabilistic.
    """
    if size != 0 and not (2 <= size <= n):
        raise ValidationError(f"size must be 0 or in [2, {n}], got {size}")
    if odd not in (0, 1):
        raise ValidationError(f"odd flag must be 0 or 1, got {odd}")
    expected_odd = (size % 2) if size >= 2 else 0
    if odd != expected_odd:
        raise ValidationError(f"odd flag {odd} does not match parity of size {size}")
    rng = seed.rng() if isinstance(seed, Seed) else seed
    if size == 0:
        return SimpleGraph(n, frozenset()), frozenset()
    pairs = draw_subsets(n, 2, (size - 3 * odd) // 2, rng)
    triples = draw_subsets(n, 3, odd, rng) if odd else []
    edges, members = _assemble_feature(size, odd, n, pairs, triples, rng)
    return SimpleGraph(n, frozenset(edges)), members


@dataclass(frozen=True)
class CouplingReport:
    """Outcome of one full-chain coupling trial."""

    contained: bool
    per_feature_contained: bool
    guard_events: dict[str, bool]
    pair_draws: int
    triple_draws: int
    active_size_sum: int
    poisson_pairs: int
    poisson_triples: int
    rig_edge_count: int
    coupled_edge_count: int
    prefix_edge_count: int
    regime_infeasible: bool
    omega: float


def run_coupling_trial(n: int, p: FeatureProbabilities, omega: float, seed: Seed) -> CouplingReport:
    """Execute the coupled construction once, with shared randomness.

    Chain: sample per-feature sizes; rebuild each feature from consecutive
    slices of one pair-draw stream and one triple-draw stream (containment
    in the rebuilt intersection graph is exact); then draw Poisson counts
    with means (S1 - 3*S3 - 5*omega*sqrt(S1))/2 and S3 - 2*omega*sqrt(S1)
    and take prefixes of the same streams.  The guard events are exactly
    the hypotheses under which prefix containment is certified:

    * poisson_pairs_ok:        poisson pair count   <= pair draws used
    * poisson_triples_ok:      poisson triple count <= triple draws used
    * size_concentration_ok:   |sum active sizes - S1| <= omega*sqrt(S1)

    Negative Poisson means clamp to 0 and mark the matching guard False.
    """
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega}")
    st = summary_stats(n, p, t_max=2)
    if st.S1 <= 0:
        raise ValidationError("degenerate model: S1 = 0")
    s1, s3 = st.S1, st.S3
    sqrt_s1 = math.sqrt(s1)
    regime_infeasible = not (s3 > omega * omega * sqrt_s1)

    rng_sizes = seed.child("sizes").rng()
    rng_pairs = seed.child("pair-stream").rng()
    rng_triples = seed.child("triple-stream").rng()
    rng_pad = seed.child("padding").rng()
    rng_po = seed.child("poisson").rng()

    sizes = rng_sizes.binomial(n, p.as_array())
    dec = decompose_sizes(sizes)

    mean_pairs = (s1 - 3.0 * s3 - 5.0 * omega * sqrt_s1) / 2.0
    mean_triples = s3 - 2.0 * omega * sqrt_s1
    clamped_pairs = mean_pairs < 0
    clamped_triples = mean_triples < 0
    poisson_pairs = int(rng_po.poisson(max(0.0, mean_pairs)))
    poisson_triples = int(rng_po.poisson(max(0.0, mean_triples)))

    pair_stream = draw_subsets(n, 2, max(dec.pair_draws, poisson_pairs), rng_pairs)
    triple_stream = draw_subsets(n, 3, max(dec.triple_draws, poisson_triples), rng_triples)

    rig_edges: set[tuple[int, int]] = set()
    coupled_edges: set[tuple[int, int]] = set()
    per_feature_ok = True
    pair_off = 0
    triple_off = 0
    for size, odd in zip(dec.active_sizes, dec.odd_flags):
        if size == 0:
            continue
        k2 = (size - 3 * odd) // 2
        pairs = pair_stream[pair_off:pair_off + k2]
        triples = triple_stream[triple_off:triple_off + odd]
        pair_off += k2
        triple_off += odd
        edges, members = _assemble_feature(size, odd, n, pairs, triples, rng_pad)
        feature_clique = clique_edges(members)
        if not edges <= feature_clique:
            per_feature_ok = False
        coupled_edges.update(edges)
        rig_edges.update(feature_clique)

    rig = SimpleGraph(n, frozenset(rig_edges))
    prefix_edges: set[tuple[int, int]] = set()
    for sub in pair_stream[:poisson_pairs]:
        prefix_edges.add(sub)
    for sub in triple_stream[:poisson_triples]:
        prefix_edges.update(clique_edges(sub))
    prefix = SimpleGraph(n, frozenset(prefix_edges))

    sum_active = sum(dec.active_sizes)
    guards = {
        "poisson_pairs_ok": (poisson_pairs <= dec.pair_draws) and not clamped_pairs,
        "poisson_triples_ok": (poisson_triples <= dec.triple_draws) and not clamped_triples,
        "size_concentration_ok": abs(sum_active - s1) <= omega * sqrt_s1,
    }
    return CouplingReport(
        contained=is_subgraph(prefix, rig),
        per_feature_contained=per_feature_ok,
        guard_events=guards,
        pair_draws=dec.pair_draws,
        triple_draws=dec.triple_draws,
        active_size_sum=sum_active,
        poisson_pairs=poisson_pairs,
        poisson_triples=poisson_triples,
        rig_edge_count=len(rig.edges),
        coupled_edge_count=len(coupled_edges),
        prefix_edge_count=len(prefix.edges),
        regime_infeasible=regime_infeasible,
        omega=omega,
    )


@dataclass(frozen=True)
class CollectorReport:
    """Outcome of one coupon-collector coupling trial.

    Event names spell out what each indicator means:

    * covered_within_lower:   all n coupons seen within T_minus draws
    * covered_within_upper:   all n coupons seen within T_plus draws
    * finished_in_window:     total construction draws T in [T_minus, T_plus]
    * finished_within_overhead: T <= sum(active sizes) + S1/(omega*ln n)
    * sizes_concentrated:     |sum(active sizes) - S1| <= omega*sqrt(S1)

    with T_minus = S1 - omega*sqrt(S1) and
    T_plus = S1 + omega*sqrt(S1) + S1/(omega*ln n).  The exact per-trial
    sandwich is:  (covered_within_lower and finished_in_window) implies
    min degree >= 1 implies (covered_within_upper or not finished_in_window).
    """

    total_draws: int
    active_size_sum: int
    overhead: int
    covered_at: int
    events: dict[str, bool]
    delta_ge_1: bool
    t_minus: float
    t_plus: float
    omega: float


def coupon_collector_trial(n: int, p: FeatureProbabilities, omega: float,
                           seed: Seed) -> CollectorReport:
    """Run the phase-structured coupon collector coupled to the construction.

    Phase i draws uniform vertices until the feature's active size is
    reached; the distinct vertices of the phase become the feature set.
    The coupon stream continues past the construction so that coverage
    times beyond T are still observed.
    """
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega}")
    st = summary_stats(n, p, t_max=2)
    if st.S1 <= 0:
        raise ValidationError("degenerate model: S1 = 0")
    s1 = st.S1
    t_minus = s1 - omega * math.sqrt(s1)
    t_plus = s1 + omega * math.sqrt(s1) + s1 / (omega * math.log(n))

    rng_sizes = seed.child("sizes").rng()
    rng_draws = seed.child("coupons").rng()

    sizes = rng_sizes.binomial(n, p.as_array())
    dec = decompose_sizes(sizes)

    seen_global = bytearray(n)
    seen_count = 0
    covered_at = -1
    total = 0
    rig_edges: set[tuple[int, int]] = set()

    buf = np.empty(0, dtype=np.int64)
    buf_pos = 0

    def next_draw() -> int:
        nonlocal buf, buf_pos, total, seen_count, covered_at
        if buf_pos >= len(buf):
            buf = rng_draws.integers(0, n, size=4096)
            buf_pos = 0
        v = int(buf[buf_pos])
        buf_pos += 1
        total += 1
        if not seen_global[v]:
            seen_global[v] = 1
            seen_count += 1
            if seen_count == n and covered_at < 0:
                covered_at = total
        return v

    for size in dec.active_sizes:
        if size == 0:
            continue
        phase: set[int] = set()
        while len(phase) < size:
            phase.add(next_draw())
        rig_edges.update(clique_edges(phase))

    construction_draws = total
    delta_ge_1 = 0 < covered_at <= construction_draws

    # keep collecting on the same stream to observe the coverage time
    cap = construction_draws + 64 * n * max(1, math.ceil(math.log(max(n, 2)))) + 4096
    while covered_at < 0 and total < cap:
        next_draw()
    if covered_at < 0:
        raise AssertionError(f"coupon coverage not reached within {cap} draws at n={n}")

    sum_active = sum(dec.active_sizes)
    events = {
        "covered_within_lower": covered_at <= t_minus,
        "covered_within_upper": covered_at <= t_plus,
        "finished_in_window": t_minus <= construction_draws <= t_plus,
        "finished_within_overhead": construction_draws
        <= sum_active + s1 / (omega * math.log(n)),
        "sizes_concentrated": abs(sum_active - s1) <= omega * math.sqrt(s1),
    }
    return CollectorReport(
        total_draws=construction_draws,
        active_size_sum=sum_active,
        overhead=construction_draws - sum_active,
        covered_at=covered_at,
        events=events,
        delta_ge_1=delta_ge_1,
        t_minus=t_minus,
        t_plus=t_plus,
        omega=omega,
    )


@dataclass(frozen=True)
class PoissonizationReport:
    """Two-sample comparison of the Poissonized-draws and independent models."""

    trials: int
    expected_probability: float
    chi2_statistic: float
    chi2_dof: int
    p_value: float
    reject: bool
    alpha: float
    max_abs_z_draws: float
    max_abs_z_independent: float
    mean_count_draws: float
    mean_count_independent: float
    histogram: dict[int, tuple[int, int]] = field(repr=False, default_factory=dict)


def poissonization_test(n: int, arity: int, lam: float, trials: int, seed: Seed,
                        alpha: float = 0.01) -> PoissonizationReport:
    """Paired sampling of both models with a chi-square homogeneity test.

    The Poissonized draws-with-repetition model should match the
    independent-hyperedge model with per-hyperedge probability
    1 - exp(-lam / C(n, arity)) exactly; the test compares hyperedge-count
    histograms and per-hyperedge frequencies (reported as the largest
    z-score against the closed-form probability).
    """
    if trials < 1000:
        raise ValidationError(f"need at least 1000 trials, got {trials}")
    from .sampling import sample_g_star_poisson, sample_h_independent

    total = math.comb(n, arity)
    q = -math.expm1(-lam / total) if total > 0 else 0.0
    counts_a: dict[int, int] = {}
    counts_b: dict[int, int] = {}
    freq_a: dict[tuple[int, ...], int] = {}
    freq_b: dict[tuple[int, ...], int] = {}
    rng_a = seed.child("poissonized").rng()
    rng_b = seed.child("independent").rng()
    sum_a = 0
    sum_b = 0
    for _ in range(trials):
        ha = sample_g_star_poisson(n, arity, lam, rng_a)
        hb = sample_h_independent(n, arity, q, rng_b)
        ka, kb = len(ha.hyperedges), len(hb.hyperedges)
        counts_a[ka] = counts_a.get(ka, 0) + 1
        counts_b[kb] = counts_b.get(kb, 0) + 1
        sum_a += ka
        sum_b += kb
        for he in ha.hyperedges:
            freq_a[he] = freq_a.get(he, 0) + 1
        for he in hb.hyperedges:
            freq_b[he] = freq_b.get(he, 0) + 1

    hist = {k: (counts_a.get(k, 0), counts_b.get(k, 0))
            for k in sorted(set(counts_a) | set(counts_b))}
    chi2, dof, p_value = _chi2_homogeneity(hist)
    sigma = math.sqrt(q * (1.0 - q) / trials) if 0.0 < q < 1.0 else float("inf")

    def max_z(freq: dict) -> float:
        # absent hyperedges count as frequency 0; only enumerable when the
        # subset universe is small
        if sigma == float("inf") or total > 200_000:
            return 0.0
        worst = 0.0
        for he_count in _all_frequencies(freq, total):
            worst = max(worst, abs(he_count / trials - q) / sigma)
        return worst

    return PoissonizationReport(
        trials=trials,
        expected_probability=q,
        chi2_statistic=chi2,
        chi2_dof=dof,
        p_value=p_value,
        reject=p_value < alpha,
        alpha=alpha,
        max_abs_z_draws=max_z(freq_a),
        max_abs_z_independent=max_z(freq_b),
        mean_count_draws=sum_a / trials,
        mean_count_independent=sum_b / trials,
        histogram=hist,
    )


def _all_frequencies(freq: dict, total: int):
    """Observed presence counts for every possible hyperedge, including absent ones."""
    yield from freq.values()
    for _ in range(total - len(freq)):
        yield 0


def _chi2_homogeneity(hist: dict[int, tuple[int, int]],
                      min_expected: float = 5.0) -> tuple[float, int, float]:
    """Two-sample chi-square on a shared histogram, pooling sparse bins."""
    keys = sorted(hist)
    pooled: list[tuple[int, int]] = []
    acc = [0, 0]
    n_a = sum(a for a, _ in hist.values())
    n_b = sum(b for _, b in hist.values())
    if n_a == 0 or n_b == 0:
        return 0.0, 0, 1.0
    for k in keys:
        acc[0] += hist[k][0]
        acc[1] += hist[k][1]
        expected_share = (acc[0] + acc[1]) / (n_a + n_b)
        if expected_share * min(n_a, n_b) >= min_expected:
            pooled.append((acc[0], acc[1]))
            acc = [0, 0]
    if acc[0] or acc[1]:
        if pooled:
            last = pooled.pop()
            pooled.append((last[0] + acc[0], last[1] + acc[1]))
        else:
            pooled.append(tuple(acc))
    if len(pooled) < 2:
        return 0.0, 0, 1.0
    chi2 = 0.0
    for a, b in pooled:
        tot = a + b
        ea = tot * n_a / (n_a + n_b)
        eb = tot * n_b / (n_a + n_b)
        chi2 += (a - ea) ** 2 / ea + (b - eb) ** 2 / eb
    dof = len(pooled) - 1
    p_value = float(scipy_stats.chi2.sf(chi2, dof))
    return chi2, dof, p_value
