"""This module provides tests for "semigroup.py"."""

import math
import os
import sys
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

sys.path.append(os.getcwd())

from strategies import PROPERTY_SETTINGS, vertex_functions, graphs, times
from curvgraph import semigroup
from curvgraph.curvature import graph_curvature
from curvgraph.exceptions import ArgumentError
from curvgraph.forms import gamma
from curvgraph.graph import generate, with_measure


@pytest.fixture
def cube_propagator(cube):
    """Propagator of Q_3."""
    return semigroup.build_propagator(cube)


class TestHeatPropagator:
    """Test "build_propagator" and "HeatPropagator"."""

    @pytest.mark.parametrize("time", [0.0, 0.1, 1.0, 5.0])
    def test_edge_indicator(self, edge, time):
        """Test P_t 1_y(x) = (1 - exp(-2t)) / 2 on a single edge.

        Args:
            edge: single edge
            time: t
        """
        evolved = semigroup.apply(semigroup.build_propagator(edge), time, {"v0": 0.0, "v1": 1.0})
        expected = (1 - math.exp(-2 * time)) / 2
        np.testing.assert_allclose(evolved, [expected, 1 - expected], atol=1e-12)

    def test_identity_at_zero(self, small_graph, rng):
        """Test that P_0 is the identity.

        Args:
            small_graph: corpus graph
            rng: seeded random generator
        """
        function = rng.normal(size=len(small_graph))
        propagator = semigroup.build_propagator(small_graph)
        np.testing.assert_allclose(propagator.apply(0.0, function), function, atol=1e-12)

    def test_semigroup_property(self, small_graph, rng):
        """Test P_s P_t = P_(s + t) and P_t 1 = 1.

        Args:
            small_graph: corpus graph
            rng: seeded random generator
        """
        function = rng.normal(size=len(small_graph))
        propagator = semigroup.build_propagator(small_graph)
        np.testing.assert_allclose(
            propagator.apply(0.3, propagator.apply(0.7, function)), propagator.apply(1.0, function), atol=1e-12,
        )
        np.testing.assert_allclose(propagator.apply(2.5, np.ones(len(small_graph))), 1.0, atol=1e-12)

    def test_derivative(self, cube, cube_propagator, rng):
        """Test d/dt P_t f = Delta P_t f against the Laplacian and central differences.

        Args:
            cube: Q_3
            cube_propagator: propagator of Q_3
            rng: seeded random generator
        """
        function = rng.normal(size=len(cube))
        derivative = cube_propagator.derivative(0.4, function)
        evolved = cube_propagator.apply(0.4, function)
        np.testing.assert_allclose(derivative, cube.laplacian_matrix @ evolved, atol=1e-12)
        step = 1e-6
        forward, backward = cube_propagator.apply(0.4 + step, function), cube_propagator.apply(0.4 - step, function)
        numeric = (forward - backward) / (2 * step)
        np.testing.assert_allclose(derivative, numeric, atol=1e-6)

    def test_self_adjoint(self, rng):
        """Test that P_t is self-adjoint in L^2(m) under a non-constant measure.

        Args:
            rng: seeded random generator
        """
        star = with_measure(generate("star", 4), "degree")
        first, second = rng.normal(size=(2, len(star)))
        propagator = semigroup.build_propagator(star)
        left = np.sum(star.measure * propagator.apply(0.8, first) * second)
        right = np.sum(star.measure * first * propagator.apply(0.8, second))
        assert left == pytest.approx(right, abs=1e-12)

    def test_several_columns(self, cube, cube_propagator, rng):
        """Test that stacked functions evolve column by column.

        Args:
            cube: Q_3
            cube_propagator: propagator of Q_3
            rng: seeded random generator
        """
        functions = rng.normal(size=(len(cube), 3))
        evolved = cube_propagator.apply(0.5, functions)
        np.testing.assert_allclose(evolved[:, 1], cube_propagator.apply(0.5, functions[:, 1]), atol=1e-12)

    @pytest.mark.parametrize("dimension", [2, 3, 4])
    def test_hypercube_spectrum(self, dimension):
        """Test that Q_d has eigenvalues -2k with multiplicity C(d, k).

        Args:
            dimension: d
        """
        propagator = semigroup.build_propagator(generate("hypercube", dimension))
        expected = sorted(-2.0 * level for level in range(dimension + 1) for _copy in range(comb(dimension, level)))
        np.testing.assert_allclose(propagator.eigenvalues, expected, atol=1e-10)

    def test_zero_modes(self, two_edges):
        """Test that the kernel dimension equals the number of components.

        Args:
            two_edges: disjoint union of two edges
        """
        assert semigroup.build_propagator(two_edges).zero_modes() == 2

    def test_negative_time(self, cube_propagator):
        """Test that a negative time raises "ArgumentError".

        Args:
            cube_propagator: propagator of Q_3
        """
        with pytest.raises(ArgumentError):
            cube_propagator.apply(-0.1, np.ones(8))
        with pytest.raises(ArgumentError):
            cube_propagator.derivative(-0.1, np.ones(8))


class TestEnvelopes:
    """Test the semigroup forms of the curvature-dimension condition."""

    def test_cd_infinity_holds(self, small_graph):
        """Test Gamma(P_t f) <= exp(-2Kt) P_t Gamma(f) with K the graph curvature.

        Args:
            small_graph: corpus graph
        """
        value, _vertex = graph_curvature(small_graph)
        propagator = semigroup.build_propagator(small_graph)
        functions = semigroup.random_functions(small_graph, 5, seed=3)
        for column in range(functions.shape[1]):
            check = semigroup.check_cd_infty_envelope(
                small_graph, value, functions[:, column], propagator=propagator,
            )
            assert check.holds, check.max_scaled_violation

    def test_cd_infinity_fails_above_curvature(self, cube, cube_propagator):
        """Test that K well above the curvature of Q_3 breaks the envelope.

        Args:
            cube: Q_3
            cube_propagator: propagator of Q_3
        """
        function = semigroup.random_functions(cube, 1, seed=0)[:, 0]
        check = semigroup.check_cd_infty_envelope(cube, 10.0, function, propagator=cube_propagator)
        assert check.holds is False
        assert check.max_violation > 0

    def test_cd_n_holds(self, cube, cube_propagator):
        """Test the dimensional envelope of Q_3 with K = K_G(10) and n = 10.

        Args:
            cube: Q_3
            cube_propagator: propagator of Q_3
        """
        value, _vertex = graph_curvature(cube, 10.0)
        assert value > 0
        functions = semigroup.random_functions(cube, 5, seed=1)
        for column in range(functions.shape[1]):
            check = semigroup.check_cd_n_envelope(cube, value, 10.0, functions[:, column], propagator=cube_propagator)
            assert check.holds, check.max_scaled_violation

    def test_rows_cover_grid(self, edge):
        """Test that every (t, x) of the grid is evaluated and t = 0 is an equality.

        Args:
            edge: single edge
        """
        check = semigroup.check_cd_infty_envelope(edge, 2.0, {"v0": 0.0, "v1": 1.0}, t_grid=[0.0, 1.0])
        assert [(row.t, row.x) for row in check.rows] == [(0.0, "v0"), (0.0, "v1"), (1.0, "v0"), (1.0, "v1")]
        assert check.rows[0].violation == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("curvature, dimension", [
        pytest.param(0.0, 2.0, id="zero_curvature"),
        pytest.param(-1.0, 2.0, id="negative_curvature"),
        pytest.param(1.0, math.inf, id="infinite_dimension"),
        pytest.param(1.0, 0.0, id="zero_dimension"),
    ])
    def test_cd_n_bad_arguments(self, edge, curvature, dimension):
        """Test that the dimensional envelope needs finite positive K and n.

        Args:
            edge: single edge
            curvature: K
            dimension: n
        """
        with pytest.raises(ArgumentError):
            semigroup.check_cd_n_envelope(edge, curvature, dimension, [0.0, 1.0])

    def test_negative_grid_time(self, edge):
        """Test that a negative time in the grid raises "ArgumentError".

        Args:
            edge: single edge
        """
        with pytest.raises(ArgumentError):
            semigroup.check_cd_infty_envelope(edge, 2.0, [0.0, 1.0], t_grid=[0.5, -0.5])


class TestBoundReports:
    """Test the derivative and displacement bounds."""

    def test_edge_derivative(self, edge):
        """Test |Delta P_t f(x)| = exp(-2t) against sqrt(2) exp(-2t) on a single edge.

        Args:
            edge: single edge
        """
        rows = semigroup.derivative_bound_report(edge, 2.0, math.inf, [0.0, 1.0], t_grid=[0.0, 0.5, 2.0])
        for row in rows:
            assert row.derivative == pytest.approx(math.exp(-2 * row.t), abs=1e-12)
            assert row.bound_infinity == pytest.approx(math.sqrt(2) * math.exp(-2 * row.t), abs=1e-12)
            assert math.isnan(row.bound_dimension)
            assert row.exceeded is False

    def test_derivative_under_dimension(self, cube, cube_propagator):
        """Test that Q_3 stays under both derivative bounds with K = K_G(10) and n = 10.

        Args:
            cube: Q_3
            cube_propagator: propagator of Q_3
        """
        value, _vertex = graph_curvature(cube, 10.0)
        function = semigroup.random_functions(cube, 1, seed=4)[:, 0]
        rows = semigroup.derivative_bound_report(cube, value, 10.0, function, propagator=cube_propagator)
        assert len(rows) == 65 * 8
        assert not any(row.exceeded for row in rows)
        assert math.isnan(rows[0].bound_dimension)
        assert not math.isnan(rows[-1].bound_dimension)

    def test_displacement(self, cube, cube_propagator):
        """Test |P_t f - f| <= sqrt(2 Deg) / K and (pi / 2) sqrt(n / K) on Q_3.

        Args:
            cube: Q_3
            cube_propagator: propagator of Q_3
        """
        value, _vertex = graph_curvature(cube, 10.0)
        function = semigroup.random_functions(cube, 1, seed=5)[:, 0]
        rows = semigroup.displacement_bound_report(cube, value, 10.0, function, propagator=cube_propagator)
        assert rows[0].displacement == pytest.approx(0.0, abs=1e-12)
        assert rows[0].bound_dimension == pytest.approx(math.pi / 2 * math.sqrt(10.0 / value))
        assert not any(row.exceeded for row in rows)

    def test_displacement_needs_positive_curvature(self, edge):
        """Test that K <= 0 raises "ArgumentError".

        Args:
            edge: single edge
        """
        with pytest.raises(ArgumentError):
            semigroup.displacement_bound_report(edge, 0.0, 2.0, [0.0, 1.0])


@pytest.mark.parametrize("check", [
    pytest.param(lambda graph: semigroup.check_cd_infty_envelope(graph, 2.0, [0.0, 1.0], []), id="cd_infinity"),
    pytest.param(lambda graph: semigroup.check_cd_n_envelope(graph, 1.0, 2.0, [0.0, 1.0], []), id="cd_n"),
    pytest.param(lambda graph: semigroup.derivative_bound_report(graph, 2.0, 2.0, [0.0, 1.0], []), id="derivative"),
])
def test_empty_time_grid(edge, check):
    """Test that an empty time grid raises "ArgumentError".

    Args:
        edge: single edge
        check: semigroup check called on the edge
    """
    with pytest.raises(ArgumentError, match="time grid is empty"):
        check(edge)


@pytest.mark.parametrize("curvature, dimension", np.random.default_rng(7).uniform(0.1, 10.0, size=(10, 2)).tolist())
def test_resistance_integral(curvature, dimension):
    """Test that the quadrature and the antiderivative both give (pi / 2) sqrt(n / K).

    Args:
        curvature: K
        dimension: n
    """
    expected = math.pi / 2 * math.sqrt(dimension / curvature)
    assert semigroup.resistance_integral(curvature, dimension) == pytest.approx(expected, rel=1e-8)
    assert semigroup.arctan_antiderivative(curvature, dimension, 0.0) == 0.0
    assert semigroup.arctan_antiderivative(curvature, dimension, 50 / curvature) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("curvature, dimension", [(0.0, 1.0), (1.0, math.inf), (-1.0, 2.0)])
def test_resistance_integral_bad_arguments(curvature, dimension):
    """Test that the integral needs finite positive K and n.

    Args:
        curvature: K
        dimension: n
    """
    with pytest.raises(ArgumentError):
        semigroup.resistance_integral(curvature, dimension)


def test_default_t_grid():
    """Test the size and the ends of the default time grid."""
    grid = semigroup.default_t_grid(2.0)
    assert len(grid) == 65
    assert grid[:2] == [0.0, pytest.approx(1e-3)]
    assert grid[-1] == pytest.approx(5.0)
    assert semigroup.default_t_grid(-1.0)[-1] == pytest.approx(10.0)
    assert semigroup.default_t_grid(1e4)[-1] == pytest.approx(1e-2)


def test_random_functions(cube):
    """Test the shape, range and reproducibility of the random test functions.

    Args:
        cube: Q_3
    """
    functions = semigroup.random_functions(cube, 4, seed=9)
    assert functions.shape == (8, 4)
    assert np.all(np.abs(functions) <= 1)
    np.testing.assert_array_equal(functions, semigroup.random_functions(cube, 4, seed=9))


class TestHeatProperties:
    """Test properties of P_t on random graphs."""

    @PROPERTY_SETTINGS
    @given(data=st.data(), time=times)
    def test_mass_is_conserved(self, data, time):
        """Test sum m P_t f = sum m f.

        Args:
            data: hypothesis data object
            time: t
        """
        random_graph = data.draw(graphs())
        function = data.draw(vertex_functions(random_graph))
        evolved = semigroup.build_propagator(random_graph).apply(time, function)
        mass = float(random_graph.measure @ function)
        scale = 1 + float(random_graph.measure @ np.abs(function))
        assert float(random_graph.measure @ evolved) == pytest.approx(mass, abs=1e-10 * scale)

    @PROPERTY_SETTINGS
    @given(data=st.data(), time=times)
    def test_positivity_and_oscillation(self, data, time):
        """Test that f >= 0 gives P_t f >= 0 and that the oscillation max - min doesn't grow.

        Args:
            data: hypothesis data object
            time: t
        """
        random_graph = data.draw(graphs())
        function = data.draw(vertex_functions(random_graph, st.floats(min_value=0, max_value=10)))
        evolved = semigroup.build_propagator(random_graph).apply(time, function)
        assert np.all(evolved >= -1e-10)
        assert np.ptp(evolved) <= np.ptp(function) + 1e-10

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_gradient_decays(self, data):
        """Test that Gamma(P_t f) vanishes once t is 40 times the relaxation time.

        Args:
            data: hypothesis data object
        """
        random_graph = data.draw(graphs())
        function = data.draw(vertex_functions(random_graph))
        propagator = semigroup.build_propagator(random_graph)
        time = 40 / -propagator.eigenvalues[-2]
        assert np.max(gamma(random_graph, propagator.apply(time, function))) <= 1e-12
