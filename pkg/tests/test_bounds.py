from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from staircover import (
    Triangle,
    decompose,
    density_chain,
    grid_max_stair_area,
    max_stair_area,
    max_stair_in_triangle,
    optimal_covering_density,
    pt,
    stair_area_bound,
    verify_exact_tiling,
)
from _oracles import grid_stair_max_bruteforce
from conftest import diag_lattice
from staircover.lattice import lattice_instance


class TestAreaFormula:
    def test_hand_values(self):
        assert max_stair_area(0) == Fraction(1, 4)
        assert max_stair_area(1) == Fraction(1, 3)
        assert max_stair_area(3) == Fraction(2, 5)

    def test_increasing_and_below_half(self):
        values = [max_stair_area(r) for r in range(64)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(v < Fraction(1, 2) for v in values)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            max_stair_area(-1)
        with pytest.raises(ValueError):
            stair_area_bound(-Fraction(1, 2))


class TestBoundExtension:
    def test_agrees_with_integer_values(self):
        for r in range(65):
            assert stair_area_bound(r) == max_stair_area(r)

    def test_pointwise_values(self):
        assert stair_area_bound(Fraction(1, 2)) == Fraction(3, 10)
        assert stair_area_bound(5) == Fraction(3, 7)  # 2k-1 at k=3

    @given(st.fractions(min_value=0, max_value=50, max_denominator=40),
           st.fractions(min_value=0, max_value=50, max_denominator=40))
    def test_monotone(self, x, y):
        if x <= y:
            assert stair_area_bound(x) <= stair_area_bound(y)

    @given(st.fractions(min_value=0, max_value=40, max_denominator=20),
           st.fractions(min_value=Fraction(1, 20), max_value=5, max_denominator=20))
    def test_concave_by_second_difference(self, x, h):
        left, mid, right = (stair_area_bound(x + i * h) for i in range(3))
        assert left + right <= 2 * mid


class TestDensityFormula:
    def test_known_values(self):
        assert optimal_covering_density(1) == Fraction(3, 2)
        assert optimal_covering_density(2) == Fraction(5, 2)
        assert optimal_covering_density(5) == Fraction(11, 2)

    def test_two_forms_agree_exactly(self):
        for k in range(1, 11):
            assert optimal_covering_density(k) == k * Fraction(1, 2) / max_stair_area(2 * k - 1)


class TestExtremalStair:
    @pytest.mark.parametrize("r", range(7))
    def test_area_is_attained(self, r):
        assert max_stair_in_triangle(r).area() == max_stair_area(r)

    @pytest.mark.parametrize("r", range(7))
    def test_contained_in_closed_triangle(self, r):
        stair = max_stair_in_triangle(r)
        tri = Triangle.at(0, 0)
        for rect in stair.to_rects():
            assert tri.contains(pt(rect.x0, rect.y0))
            # open upper-right corner only approaches the hypotenuse
            assert rect.x1 + rect.y1 <= 1

    def test_examples(self):
        assert max_stair_in_triangle(0).to_rects()[0].area() == Fraction(1, 4)
        s = max_stair_in_triangle(1)
        assert s.x_breaks == (0, Fraction(1, 3), Fraction(2, 3))
        assert s.y_breaks == (Fraction(2, 3), Fraction(1, 3), 0)


class TestGridSearch:
    @pytest.mark.parametrize("r", (0, 1))
    def test_dp_matches_bruteforce_enumeration(self, r):
        for g in (4, 6, 8):
            if g >= r + 2:
                assert grid_max_stair_area(r, g) == grid_stair_max_bruteforce(r, g)

    def test_never_exceeds_closed_form(self):
        for r in range(5):
            assert grid_max_stair_area(r, 24) <= max_stair_area(r)

    def test_exact_when_grid_divisible(self):
        # uniform optimum has breaks at multiples of 1/(r+2)
        assert grid_max_stair_area(0, 12) == max_stair_area(0)
        assert grid_max_stair_area(1, 12) == max_stair_area(1)
        assert grid_max_stair_area(2, 12) == max_stair_area(2)

    def test_too_coarse_grid_rejected(self):
        with pytest.raises(ValueError):
            grid_max_stair_area(7, 8)


class TestDensityChain:
    def test_quarters_chain_values(self, quarters):
        result = decompose(quarters)
        tiling = verify_exact_tiling(result.stair_cells(), 1, quarters.window)
        report = density_chain(result, tiling.ok)
        assert report.holds
        values = {link.label: link.value for link in report.links}
        assert values["window_area"] == 1
        assert values["cell_area_total"] == 1
        assert values["per_cell_bound"] == 1  # four cells of bound 1/4
        assert values["jensen_bound"] == 1  # 4 * B(0)
        assert values["stair_budget_bound"] == Fraction(4, 3)  # 4 * A(1)
        assert values["instance_bound"] == Fraction(4, 3)

    def test_lattice_fixture_with_slack(self):
        inst = lattice_instance(diag_lattice(2), 1, 2)
        result = decompose(inst)
        tiling = verify_exact_tiling(result.stair_cells(), 2, inst.window)
        report = density_chain(result, tiling.ok)
        assert report.holds
        final = report.links[-1].value
        assert final >= 1  # l^2 <= (N/k) A(2k-1)
        # per-cell bound: every cell fits its stair-count's maximal area
        for _, r, area in report.cells:
            assert area <= max_stair_area(r)

    def test_undersized_family_is_invalid(self, quarters):
        from staircover import CoveringInstance

        broken = CoveringInstance(1, quarters.window, quarters.corners[:-1])
        result = decompose(broken)
        ok = (
            result.is_stair_decomposition
            and verify_exact_tiling(result.stair_cells(), 1, broken.window).ok
        )
        report = density_chain(result, ok)
        assert not report.valid and not report.holds
        assert report.links == ()

    def test_jensen_step_exact_on_fixture(self):
        inst = lattice_instance(diag_lattice(1), 1, 2)
        result = decompose(inst)
        cells = result.cells
        n = len(cells)
        mean_r = Fraction(sum(c.stair_count for _, c in cells), n)
        lhs = Fraction(sum(max_stair_area(c.stair_count) for _, c in cells), n)
        assert lhs <= stair_area_bound(mean_r)
