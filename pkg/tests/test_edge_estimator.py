import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete, graphs, star
from indset_stream import degree_classes as dc
from indset_stream import edge_estimator as ee
from indset_stream.graph import GraphStream, Mode, ModeMismatchError, materialize
from indset_stream.oracles import beta_exact, turan_bound
from indset_stream.stream_gen import (
    GadgetSpec,
    GivenPermutation,
    UniformShuffle,
    flatten_to_edges,
    gen_gadget_stream,
    gen_gnm,
    to_stream,
)


def config_with_v0(g, v0, delta=0.1, c=2, gfac=2, seed=0):
    k = dc.num_classes(g.n, c)
    return ee.EdgeEstimatorConfig(delta=delta, c=c, g=gfac, gamma=v0 * k * gfac, n=g.n, seed=seed)


def test_init_p_formula():
    cfg = ee.EdgeEstimatorConfig(delta=0.1, c=1.1, g=10, gamma=100, n=100)
    k = math.ceil(math.log(100) / math.log(1.1))
    assert cfg.num_classes == k == 49
    assert cfg.p_raw == pytest.approx(2400 * math.log(100) / (100 / (k * 10)))
    assert cfg.p == 1.0


def test_init_rejects_bad_config():
    for kw in ({"delta": 0}, {"c": 1}, {"g": 1}, {"gamma": 0}, {"C": -1}):
        args = dict(delta=0.1, c=2, g=2, gamma=1, n=10)
        args.update(kw)
        with pytest.raises(ValueError):
            ee.EdgeEstimatorConfig(**args)


def test_membership_is_deterministic():
    cfg = ee.EdgeEstimatorConfig(delta=0.5, c=2, g=2, gamma=1e6, n=1000, seed=9)
    assert cfg.p < 1
    a, b = ee.init(cfg), ee.init(cfg)
    assert [a.is_member(v) for v in range(1000)] == [b.is_member(v) for v in range(1000)]
    assert [a.is_member(v) for v in range(1000)] == [a.is_member(v) for v in range(1000)]


def test_full_sampling_takes_every_vertex():
    g = gen_gnm(30, 60, 1)
    rep = ee.run(to_stream(g, Mode.EDGE), config_with_v0(g, 1))
    assert rep.sample_size == 30


def test_process_edge_counters():
    cfg = ee.EdgeEstimatorConfig(delta=0.5, c=2, g=2, gamma=1e7, n=10_000, seed=3)
    st_ = ee.init(cfg)
    members = [v for v in range(10_000) if st_.is_member(v)]
    others = [v for v in range(10_000) if not st_.is_member(v)]
    a, b = members[:2]
    x, y = others[:2]
    ee.process_edge(st_, a, b)
    assert st_.sampled == {a: 1, b: 1}
    ee.process_edge(st_, x, y)
    assert st_.sampled == {a: 1, b: 1}
    ee.process_edge(st_, a, x)
    assert st_.sampled == {a: 2, b: 1}


def test_sampled_degrees_match_graph():
    for seed in range(10):
        g = gen_gnm(400, 1500, seed)
        cfg = ee.EdgeEstimatorConfig(delta=0.5, c=2, g=2, gamma=5000, n=g.n, seed=seed, C=0.5)
        assert cfg.p < 1
        state = ee.init(cfg)
        for u, v in g.edge_list():
            ee.process_edge(state, u, v)
        assert state.sampled
        for v, deg in state.sampled.items():
            assert deg == g.degree(v)


def test_finalize_k4_full_sampling():
    g = complete(4)
    rep = ee.run(to_stream(g, Mode.EDGE), config_with_v0(g, 4, delta=1e-9))
    assert rep.beta_hat == pytest.approx(4 / 5, rel=1e-15)


def test_finalize_empty_stream_counts_isolated():
    cfg = ee.EdgeEstimatorConfig(delta=0.1, c=2, g=2, gamma=1 * dc.num_classes(10, 2) * 2, n=10)
    assert cfg.v0 == 1 and cfg.p == 1
    rep = ee.run(GraphStream(Mode.EDGE, 10, ()), cfg)
    assert rep.beta_hat == 10
    assert rep.per_class == {dc.ISOLATED: 10.0}


def test_finalize_star():
    g = star(5)
    cfg = config_with_v0(g, 1, delta=0.1)
    assert cfg.p == 1
    rep = ee.run(to_stream(g, Mode.EDGE), cfg)
    assert rep.per_class == {0: 5 / 3, 2: 1 / 9}
    assert rep.beta_hat == pytest.approx(16 / 9, rel=1e-15)
    assert rep.beta_hat <= beta_exact(g) <= 2 * rep.beta_hat


def test_report_invariants():
    g = gen_gnm(300, 900, 4)
    cfg = ee.EdgeEstimatorConfig(delta=0.5, c=2, g=2, gamma=40, n=300, seed=1, C=0.2)
    rep = ee.run(to_stream(g, Mode.EDGE), cfg)
    assert math.isclose(rep.beta_hat, math.fsum(rep.per_class.values()), rel_tol=1e-12)
    assert rep.space_bits >= rep.sample_size * 128


def test_run_rejects_vertex_stream():
    s = to_stream(complete(3), Mode.VERTEX)
    with pytest.raises(ModeMismatchError):
        ee.run(s, config_with_v0(complete(3), 1))


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=1, max_n=20), st.floats(0.01, 2), st.sampled_from([1.1, 1.5, 2]),
       st.sampled_from([2, 10]), st.floats(0.05, 1.0))
def test_exhaustive_path_equals_class_formula(g, delta, c, gfac, gamma_frac):
    gamma = max(gamma_frac * beta_exact(g), 1e-3)
    cfg = ee.EdgeEstimatorConfig(delta=delta, c=c, g=gfac, gamma=gamma, n=g.n)
    if cfg.p < 1:
        return
    rep = ee.run(to_stream(g, Mode.EDGE, UniformShuffle(g.m)), cfg)
    part, _ = dc.partition(g, c)
    cutoff = cfg.v0 / (1 + delta)
    cf = dc.as_fraction(c)
    expected = Fraction(0)
    for i, size in part.class_sizes.items():
        if size >= cutoff:
            expected += Fraction(size) / (cf ** (i + 1) + 1)
    if part.isolated_count and part.isolated_count >= cutoff:
        expected += part.isolated_count
    assert rep.beta_hat == float(expected)


def test_determinism_and_order_invariance():
    g = gen_gnm(500, 2000, 11)
    cfg = ee.EdgeEstimatorConfig(delta=0.5, c=2, g=2, gamma=60, n=500, seed=5, C=0.3)
    assert cfg.p < 1
    s1 = to_stream(g, Mode.EDGE, UniformShuffle(1))
    s2 = to_stream(g, Mode.EDGE, UniformShuffle(2))
    perm = list(range(g.m))
    random.Random(3).shuffle(perm)
    s3 = to_stream(g, Mode.EDGE, GivenPermutation(tuple(perm)))
    r1 = ee.run(s1, cfg)
    assert r1 == ee.run(s1, cfg)
    assert r1.as_row() == ee.run(s1, cfg).as_row()
    assert r1 == ee.run(s2, cfg) == ee.run(s3, cfg)


@pytest.fixture(scope="module")
def sampled_instance():
    g = gen_gnm(3000, 12000, 21)
    return g, to_stream(g, Mode.EDGE, UniformShuffle(21)), beta_exact(g)


def test_concentration_with_sampling(sampled_instance):
    g, s, beta = sampled_instance
    delta, c, gfac = 0.5, 2, 2
    _, stats = dc.partition(g, c)
    heavy = dc.heavy_classes(stats, gfac)
    lower = float(sum(stats.beta_prime_i[i] for i in heavy)) / (1 + delta)
    good = 0
    for seed in range(100):
        cfg = ee.EdgeEstimatorConfig(delta=delta, c=c, g=gfac, gamma=beta, n=g.n, seed=seed, C=1)
        assert cfg.p < 1
        rep = ee.run(s, cfg)
        good += lower <= rep.beta_hat <= (1 + delta) * beta
    assert good >= 90


def test_sample_size_matches_np(sampled_instance):
    g, s, beta = sampled_instance
    sizes = []
    for seed in range(100):
        cfg = ee.EdgeEstimatorConfig(delta=0.5, c=2, g=2, gamma=beta, n=g.n, seed=seed, C=1)
        sizes.append(ee.run(s, cfg).sample_size)
    p = cfg.p
    mean = sum(sizes) / len(sizes)
    sd_of_mean = math.sqrt(g.n * p * (1 - p) / len(sizes))
    assert abs(mean - g.n * p) <= 3 * sd_of_mean


def test_one_sided_safety_with_inflated_gamma(sampled_instance):
    g, s, beta = sampled_instance
    delta = 0.5
    exceed = 0
    for seed in range(100):
        cfg = ee.EdgeEstimatorConfig(delta=delta, c=2, g=2, gamma=10 * beta, n=g.n, seed=seed, C=1)
        exceed += ee.run(s, cfg).beta_hat > (1 + delta) * beta
    assert exceed <= 10


def test_estimate_eps_edgeless():
    n = 500
    s = GraphStream(Mode.EDGE, n, ())
    for gamma in (1, 100, 500):
        rep = ee.estimate_eps(s, 0.25, gamma, seed=gamma)
        assert n / 1.025 <= rep.beta_hat <= n * 1.025


def test_estimate_eps_parameters():
    cfg = ee.eps_config(100, 0.2, 5)
    assert (cfg.delta, cfg.c, cfg.g) == pytest.approx((0.02, 1.02, 50))
    with pytest.raises(ValueError):
        ee.eps_config(100, 1.5, 5)


def test_estimate_eps_oracle_fed_gamma():
    g = gen_gnm(2000, 8000, 3)
    beta = beta_exact(g)
    s = to_stream(g, Mode.EDGE, UniformShuffle(0))
    within = sum(
        1 / 1.25 <= ee.estimate_eps(s, 0.25, beta, seed).beta_hat / beta <= 1.25 for seed in range(20)
    )
    assert within >= 18


def test_phi_takes_inner_estimate_when_beta_large():
    # 300 isolated vertices next to a dense block: beta ~ 300 >= gamma' * phi^2 = 27
    g = gen_gnm(300, 0, 0).disjoint_union(complete(30))
    s = to_stream(g, Mode.EDGE, UniformShuffle(1))
    res = ee.estimate_phi_report(s, phi=3, gamma_prime=3, seed=0)
    assert res.used_inner
    assert res.value == res.inner.beta_hat
    beta = beta_exact(g)
    assert 1 / 1.25 <= res.value / beta <= 1.25


def test_phi_falls_back_on_small_beta():
    spec = GadgetSpec(4, 2, 2, frozenset({1, 3}), frozenset({0, 2}))
    s = flatten_to_edges(gen_gadget_stream(spec))
    beta = beta_exact(materialize(s))
    assert beta <= 1 * 3 ** 2 / 2
    res = ee.estimate_phi_report(s, phi=3, gamma_prime=1, seed=0)
    assert not res.used_inner
    assert res.value == 3
    assert max(res.value / beta, beta / res.value) <= 3


def test_phi_oracle_fed_within_factor():
    g = gen_gnm(1000, 5000, 8)
    beta = beta_exact(g)
    s = to_stream(g, Mode.EDGE, UniformShuffle(2))
    for seed in range(50):
        val = ee.estimate_phi(s, 3, beta, seed)
        assert max(val / beta, beta / val) <= 3


def test_phi_requires_phi_above_two():
    with pytest.raises(ValueError):
        ee.estimate_phi(GraphStream(Mode.EDGE, 3, ()), 2, 1)


def test_turan_gamma_is_valid_lower_bound():
    g = gen_gnm(1000, 4000, 1)
    assert turan_bound(g) <= beta_exact(g)
