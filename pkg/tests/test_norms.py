import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concave_embed import NormAxiomError, NormSpec, certify_distortion, delta_admissible, eval_norm
from concave_embed.norms import sup_plus_l1_for_delta, weighted_sup_for_delta
from oracles import sampled_distortion


def test_sup():
    assert eval_norm(NormSpec.sup(3), [1, -3, 2]) == 3


def test_weighted_sup():
    assert eval_norm(NormSpec.weighted_sup([1, 0.5]), [1, 4]) == 2


def test_sup_plus_l1_unscaled():
    assert eval_norm(NormSpec.sup_plus_l1(2, 0.1, rescaled=False), [1, 1]) == pytest.approx(1.2)


def test_sup_plus_l1_rescaled_has_unit_upper_frame():
    spec = NormSpec.sup_plus_l1(4, 0.25)
    assert eval_norm(spec, np.ones(4)) == pytest.approx(1.0)


def test_batched_rows():
    spec = NormSpec.weighted_sup([1, 0.5, 0.25])
    rows = np.array([[1, 4, 0], [0, 0, 8], [-3, 0, 0]])
    np.testing.assert_array_equal(eval_norm(spec, rows), [2, 2, 3])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_norm(NormSpec.sup(3), [1, 2])


def test_weights_are_normalised():
    assert NormSpec.weighted_sup([2, 1]).weights == (1.0, 0.5)


@pytest.mark.parametrize("weights", [[1, 0], [1, -0.5], []])
def test_bad_weights(weights):
    with pytest.raises(ValueError):
        NormSpec.weighted_sup(weights)


def test_unknown_kind():
    with pytest.raises(ValueError):
        NormSpec("l2", 3)


class TestCertificates:
    def test_sup(self):
        assert certify_distortion(NormSpec.sup(7)).delta == 0.0

    def test_weighted(self):
        cert = certify_distortion(NormSpec.weighted_sup([1, 1, 0.9]))
        assert cert.delta == pytest.approx(1 / 0.9 - 1, rel=1e-15)
        assert (cert.lower_frame, cert.upper_frame, cert.certified) == (0.9, 1.0, True)

    def test_sup_plus_l1_is_tight(self):
        cert = certify_distortion(NormSpec.sup_plus_l1(10, 0.01))
        # frozen from oracles.sampled_distortion; extremes at e_1 and (1, ..., 1)
        assert cert.delta == pytest.approx(0.08910891089108919, rel=1e-12)
        assert cert.upper_frame == pytest.approx(1.0)
        # the looser bound beta * n also certifies the sandwich
        assert cert.delta <= 0.01 * 10

    @pytest.mark.parametrize("spec", [
        NormSpec.weighted_sup([1, 0.93, 0.97, 0.91]),
        NormSpec.sup_plus_l1(5, 0.03),
        NormSpec.sup_plus_l1(5, 0.03, rescaled=False),
    ])
    def test_analytic_bounds_every_sample(self, spec):
        cert = certify_distortion(spec)
        lo, hi = sampled_distortion(spec, spec.dimension, 5000, np.random.default_rng(0))
        assert cert.lower_frame <= lo + 1e-15 and hi <= cert.upper_frame + 1e-15
        assert hi / lo - 1 <= cert.delta + 1e-12
        assert hi / lo - 1 == pytest.approx(cert.delta, abs=1e-12)

    def test_custom_l2_scaled(self):
        n = 4
        spec = NormSpec.custom(n, lambda v: float(np.linalg.norm(v)) / np.sqrt(n))
        cert = certify_distortion(spec, samples=2000)
        assert not cert.certified
        # true delta for this norm is sqrt(n) - 1; sampling gives a lower bound
        assert 0 < cert.delta <= np.sqrt(n) - 1 + 1e-12

    def test_custom_rejects_non_norm(self):
        spec = NormSpec.custom(3, lambda v: float(np.sum(v ** 2)))
        with pytest.raises(NormAxiomError) as info:
            certify_distortion(spec, samples=100)
        assert info.value.vector is not None


class TestAdmissible:
    def test_delta_zero(self):
        assert delta_admissible(0.0, 0.1, 100.0)

    def test_boundary(self):
        assert delta_admissible(1.0, 1.0, 1.0)

    def test_too_large(self):
        assert not delta_admissible(1.5, 1.0, 1.0)

    @pytest.mark.parametrize("eta, diam", [(0, 1), (1, 0), (-1, 1)])
    def test_rejects(self, eta, diam):
        with pytest.raises(ValueError):
            delta_admissible(0.1, eta, diam)


@pytest.mark.parametrize("delta", [0.0, 0.01, 0.3, 1.0])
def test_norm_for_delta_builders(delta):
    assert certify_distortion(weighted_sup_for_delta(6, delta)).delta == pytest.approx(delta, abs=1e-14)
    assert certify_distortion(sup_plus_l1_for_delta(6, delta)).delta == pytest.approx(delta, abs=1e-14)


def test_json_roundtrip():
    for spec in [NormSpec.sup(3), NormSpec.weighted_sup([1, 0.9]), NormSpec.sup_plus_l1(4, 0.2)]:
        assert NormSpec.from_dict(spec.to_dict()) == spec


SPECS = [
    NormSpec.sup(5),
    NormSpec.weighted_sup([1, 0.9, 0.95, 0.99, 0.92]),
    NormSpec.sup_plus_l1(5, 0.02),
    NormSpec.custom(5, lambda v: float(np.abs(v).max() + 0.1 * np.linalg.norm(v))),
]
vec = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=5, max_size=5).map(np.array)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
@settings(max_examples=200, deadline=None)
@given(v=vec, w=vec, t=st.floats(-100, 100, allow_nan=False))
def test_norm_axioms(spec, v, w, t):
    nv, nw = eval_norm(spec, v), eval_norm(spec, w)
    scale = 1e-12 * (1 + nv + nw)
    assert eval_norm(spec, v + w) <= nv + nw + scale
    assert eval_norm(spec, t * v) == pytest.approx(abs(t) * nv, rel=1e-12, abs=1e-12)
    if np.any(v != 0):
        assert nv > 0


@pytest.mark.parametrize("spec", SPECS[:3], ids=lambda s: s.kind)
def test_frame_soundness(spec):
    cert = certify_distortion(spec)
    rng = np.random.default_rng(42)
    v = rng.standard_normal((10_000, spec.dimension)) * rng.uniform(0.01, 100, size=(10_000, 1))
    sup = np.abs(v).max(axis=1)
    values = eval_norm(spec, v)
    assert np.all(cert.lower_frame * sup <= values * (1 + 1e-14))
    assert np.all(values <= cert.upper_frame * sup * (1 + 1e-14))
