import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from explicit_heat.exceptions import DegenerateElementError, MaterialError
from explicit_heat.kernels import (
    HEX8_NATURAL_NODES,
    build_G,
    compute_kernels,
    element_load,
    hex8_center_kernel,
    tet4_kernel,
)

from .conftest import UNIT_CUBE

REFERENCE_TET = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
REFERENCE_B = np.array([[-1.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 1.0, 0.0], [-1.0, 0.0, 0.0, 1.0]])

coordinates = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False)
temperatures = arrays(np.float64, 4, elements=st.floats(min_value=-300.0, max_value=3000.0))


def _random_spd(seed: int) -> np.ndarray:
    a = np.random.default_rng(seed).standard_normal((3, 3))
    return a @ a.T + 0.1 * np.eye(3)


class TestTet4Kernel:
    def test_reference_element(self):
        """Test B and V of the unit reference tetrahedron."""
        kernel = tet4_kernel(REFERENCE_TET)
        assert kernel.scale == pytest.approx(1.0 / 6.0)
        np.testing.assert_allclose(kernel.B, REFERENCE_B, atol=1e-14)

    @given(st.tuples(coordinates, coordinates, coordinates))
    def test_translation_invariance(self, shift):
        kernel = tet4_kernel(REFERENCE_TET + np.array(shift))
        np.testing.assert_allclose(kernel.B, REFERENCE_B, atol=1e-9)
        assert kernel.scale == pytest.approx(1.0 / 6.0, rel=1e-9)

    def test_scaling(self):
        """Test that doubling every length halves B and multiplies V by 8."""
        kernel = tet4_kernel(2.0 * REFERENCE_TET)
        np.testing.assert_allclose(kernel.B, REFERENCE_B / 2.0, atol=1e-14)
        assert kernel.scale == pytest.approx(8.0 / 6.0)

    def test_constant_field_has_no_gradient(self):
        kernel = tet4_kernel(REFERENCE_TET * [0.3, 0.5, 0.7] + 1.0)
        np.testing.assert_allclose(kernel.gradient(np.full(4, 37.0)), 0.0, atol=1e-12)

    def test_linear_field_gradient(self):
        coords = REFERENCE_TET * [0.3, 0.5, 0.7] + 1.0
        field = coords @ np.array([200.0, 100.0, 200.0]) + 5.0
        np.testing.assert_allclose(tet4_kernel(coords).gradient(field), [200.0, 100.0, 200.0])

    def test_inverted(self):
        with pytest.raises(DegenerateElementError, match="inverted"):
            tet4_kernel(REFERENCE_TET[[0, 2, 1, 3]])

    def test_degenerate(self):
        with pytest.raises(DegenerateElementError):
            tet4_kernel([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])


class TestHex8CenterKernel:
    def test_unit_cube(self):
        """Test det(J) = 1/8 at the center, scale 1 and B entries of +-1/4."""
        kernel = hex8_center_kernel(UNIT_CUBE)
        assert kernel.scale == pytest.approx(1.0)
        np.testing.assert_allclose(kernel.B, HEX8_NATURAL_NODES.T / 4.0, atol=1e-14)

    def test_side_two_cube(self):
        kernel = hex8_center_kernel(2.0 * UNIT_CUBE)
        assert kernel.scale == pytest.approx(8.0)

    def test_inverted(self):
        with pytest.raises(DegenerateElementError, match="inverted"):
            hex8_center_kernel(UNIT_CUBE[[4, 5, 6, 7, 0, 1, 2, 3]])

    def test_batch_matches_single(self):
        nodes = np.vstack([UNIT_CUBE, UNIT_CUBE + [1.0, 0.0, 0.0]])
        B, scale = compute_kernels(nodes, np.array([np.arange(8), np.arange(8, 16)]), "hex8")
        np.testing.assert_allclose(B[0], B[1])
        np.testing.assert_allclose(scale, [1.0, 1.0])

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            compute_kernels(UNIT_CUBE, np.arange(8)[None, :], "wedge6")


class TestBuildG:
    def test_temperature_dependent_form(self):
        kernel = tet4_kernel(REFERENCE_TET)
        G = build_G(kernel)
        assert G.form == "TD"
        assert G.matrix.shape == (4, 3)
        np.testing.assert_allclose(G.matrix, REFERENCE_B.T / 6.0)

    def test_temperature_independent_form(self):
        """Test that the TI form is symmetric with zero row sums."""
        kernel = tet4_kernel(REFERENCE_TET * [0.3, 0.5, 0.7])
        G = build_G(kernel, _random_spd(1))
        assert G.form == "TI"
        assert G.matrix.shape == (4, 4)
        np.testing.assert_allclose(G.matrix, G.matrix.T, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(G.matrix.sum(axis=1), 0.0, atol=1e-10)

    def test_hex_identity_conductivity(self):
        kernel = hex8_center_kernel(UNIT_CUBE)
        G = build_G(kernel, np.eye(3))
        np.testing.assert_allclose(G.matrix, kernel.B.T @ kernel.B)

    def test_asymmetric_conductivity(self):
        D = np.eye(3)
        D[0, 1] = 0.5
        with pytest.raises(MaterialError, match="not symmetric"):
            build_G(tet4_kernel(REFERENCE_TET), D)


class TestElementLoad:
    def test_reference_load(self):
        """Test F_e for D = 200 I and T_e = (0, 1, 0, 0)."""
        kernel = tet4_kernel(REFERENCE_TET)
        F = element_load(build_G(kernel), 200.0 * np.eye(3), [0.0, 1.0, 0.0, 0.0])
        np.testing.assert_allclose(F, [100.0 / 3.0, -100.0 / 3.0, 0.0, 0.0], atol=1e-12)

    def test_forms_agree(self):
        kernel = tet4_kernel(REFERENCE_TET * [0.3, 0.5, 0.7])
        D = _random_spd(2)
        T_e = np.array([37.0, 80.0, 12.0, 55.0])
        np.testing.assert_allclose(element_load(build_G(kernel, D), None, T_e), element_load(build_G(kernel), D, T_e))

    def test_uniform_temperature_gives_no_load(self):
        kernel = hex8_center_kernel(UNIT_CUBE * [0.1, 0.2, 0.3])
        loads = element_load(build_G(kernel, _random_spd(3)), None, np.full(8, 37.0))
        np.testing.assert_allclose(loads, 0.0, atol=1e-10)

    @settings(max_examples=50)
    @given(temperatures, st.integers(min_value=0, max_value=1000))
    def test_loads_sum_to_zero(self, T_e, seed):
        """Test that conduction only moves heat between the nodes of an element."""
        D = _random_spd(seed)
        F = element_load(build_G(tet4_kernel(REFERENCE_TET)), D, T_e)
        scale = 1.0 + np.abs(D).max() * np.abs(T_e).max()
        assert abs(F.sum()) <= 1e-9 * scale

    def test_hot_node_loses_heat(self):
        kernel = tet4_kernel(REFERENCE_TET)
        F = element_load(build_G(kernel, 200.0 * np.eye(3)), None, [100.0, 0.0, 0.0, 0.0])
        assert F[0] < 0.0
        assert np.all(F[1:] > 0.0)

    def test_form_mismatch(self):
        kernel = tet4_kernel(REFERENCE_TET)
        with pytest.raises(ValueError):
            element_load(build_G(kernel, np.eye(3)), np.eye(3), np.zeros(4))
        with pytest.raises(ValueError):
            element_load(build_G(kernel), None, np.zeros(4))
        with pytest.raises(ValueError):
            element_load(build_G(kernel, np.eye(3)), None, np.zeros(8))
