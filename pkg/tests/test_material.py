import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from explicit_heat.exceptions import MaterialError
from explicit_heat.material import (
    MaterialModel,
    PropertyTable,
    conductivity_tensor,
    element_conductivities,
    element_conductivity,
    eval_property,
    nodal_specific_heat,
)

K_TABLE = PropertyTable.from_rows([(37, 200), (337, 2000)])
C_TABLE = PropertyTable.from_rows([(37, 2000), (337, 8000)])


class TestPropertyTable:
    @pytest.mark.parametrize("T,expected", [(37.0, 200.0), (38.0, 206.0), (187.0, 1100.0), (337.0, 2000.0)])
    def test_interpolation(self, T, expected):
        assert eval_property(K_TABLE, T) == pytest.approx(expected)

    def test_clamped_outside_range(self):
        assert eval_property(K_TABLE, 400.0) == pytest.approx(2000.0)
        assert eval_property(K_TABLE, -20.0) == pytest.approx(200.0)

    def test_specific_heat(self):
        assert eval_property(C_TABLE, 87.0) == pytest.approx(3000.0)

    def test_vector_evaluation(self):
        np.testing.assert_allclose(eval_property(K_TABLE, [37.0, 38.0, 400.0]), [200.0, 206.0, 2000.0])

    def test_constant(self):
        table = PropertyTable.constant(2000.0)
        assert table.is_constant
        assert eval_property(table, 1e6) == 2000.0

    def test_multi_valued_rows(self):
        table = PropertyTable.from_rows([(0, 100, 200, 300), (100, 200, 400, 600)])
        assert table.arity == 3
        np.testing.assert_allclose(eval_property(table, 50.0), [150.0, 300.0, 450.0])

    @pytest.mark.parametrize(
        "rows",
        [
            [(37, 200), (37, 300)],
            [(337, 2000), (37, 200)],
            [(37, float("nan"))],
            [(37, 1, 2)],
        ],
    )
    def test_invalid_tables(self, rows):
        with pytest.raises(MaterialError):
            PropertyTable.from_rows(rows)

    @given(st.floats(min_value=-500.0, max_value=1000.0), st.floats(min_value=-500.0, max_value=1000.0))
    def test_monotone_and_bounded(self, a, b):
        """Test that interpolation of an increasing table stays increasing and within its end values."""
        low, high = sorted((a, b))
        k_low, k_high = eval_property(K_TABLE, low), eval_property(K_TABLE, high)
        assert 200.0 <= k_low <= k_high <= 2000.0


class TestConductivityTensor:
    def test_isotropic(self):
        np.testing.assert_array_equal(conductivity_tensor([200.0], "isotropic"), 200.0 * np.eye(3))

    def test_orthotropic(self):
        D = conductivity_tensor([300.0, 400.0, 200.0], "orthotropic")
        np.testing.assert_array_equal(D, np.diag([300.0, 400.0, 200.0]))

    def test_anisotropic(self):
        D = conductivity_tensor([200.0, 300.0, 400.0, 50.0, 50.0, 50.0], "anisotropic")
        np.testing.assert_array_equal(D, [[200.0, 50.0, 50.0], [50.0, 300.0, 50.0], [50.0, 50.0, 400.0]])

    def test_not_positive_semidefinite(self):
        with pytest.raises(MaterialError, match="positive semidefinite"):
            conductivity_tensor([200.0, 300.0, 400.0, 500.0, 0.0, 0.0], "anisotropic")

    def test_arity_mismatch(self):
        with pytest.raises(MaterialError):
            conductivity_tensor([1.0, 2.0], "isotropic")

    def test_unknown_symmetry(self):
        with pytest.raises(MaterialError):
            conductivity_tensor([1.0], "cubic")


class TestMaterialModel:
    def test_isotropic_constructor(self, steel):
        assert not steel.is_temperature_dependent
        np.testing.assert_array_equal(steel.tensor_at(1000.0), 200.0 * np.eye(3))

    def test_temperature_dependent(self, td_material):
        assert td_material.is_temperature_dependent
        np.testing.assert_allclose(td_material.tensor_at(187.0), 1100.0 * np.eye(3))

    def test_worst_case(self, td_material):
        D, c = td_material.worst_case()
        np.testing.assert_allclose(D, 2000.0 * np.eye(3))
        assert c == 2000.0

    def test_worst_case_anisotropic(self):
        material = MaterialModel(
            density=1.0,
            specific_heat=PropertyTable.constant(1.0),
            conductivity=PropertyTable.from_rows([(0, 100, 100, 100, 0, 0, 0), (100, 50, 50, 300, 0, 0, 0)]),
            symmetry="anisotropic",
        )
        D, _ = material.worst_case()
        np.testing.assert_allclose(np.diag(D), [50.0, 50.0, 300.0])

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"density": 0.0},
            {"specific_heat": PropertyTable.constant(-1.0)},
            {"specific_heat": PropertyTable.constant([1.0, 2.0, 3.0])},
            {"symmetry": "orthotropic"},
            {"conductivity": PropertyTable.constant(-5.0)},
        ],
    )
    def test_invalid(self, kwargs):
        arguments = {
            "density": 1000.0,
            "specific_heat": PropertyTable.constant(2000.0),
            "conductivity": PropertyTable.constant(200.0),
        }
        arguments.update(kwargs)
        with pytest.raises(MaterialError):
            MaterialModel(**arguments)

    def test_nodal_specific_heat(self, td_material):
        c = nodal_specific_heat(td_material, np.array([37.0, 87.0, 500.0]))
        np.testing.assert_allclose(c, [2000.0, 3000.0, 8000.0])


class TestElementConductivity:
    def test_mean_of_nodal_tensors(self, td_material):
        """Test that two nodes at each table end give the average tensor."""
        np.testing.assert_allclose(element_conductivity(td_material, [37.0, 37.0, 337.0, 337.0]), 1100.0 * np.eye(3))

    def test_uniform_element(self, td_material):
        np.testing.assert_array_equal(element_conductivity(td_material, [37.0] * 4), 200.0 * np.eye(3))

    def test_hex_element(self, td_material):
        np.testing.assert_allclose(element_conductivity(td_material, [37.0] * 4 + [337.0] * 4), 1100.0 * np.eye(3))

    def test_batched(self, td_material):
        T = np.array([37.0, 337.0, 37.0, 37.0, 37.0])
        elements = np.array([[0, 1, 2, 3], [0, 2, 3, 4]])
        D = element_conductivities(td_material, T, elements)
        np.testing.assert_allclose(D[0], 650.0 * np.eye(3))
        np.testing.assert_allclose(D[1], 200.0 * np.eye(3))
