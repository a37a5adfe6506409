import csv
import io
import math
from dataclasses import replace

import numpy as np
import pytest

from magic_pareto.catalogs import (ABC_ROWS, CATALOG_COLUMNS, ED_ROWS, GFE_ROWS, IHG_CASE_ROWS, IHG_COMPACT_ROWS,
                                   abc_catalog, amplitudes_of, catalog, ed_catalog, free_angle_collapse_check,
                                   gfe_catalog, ihg_case_catalog, ihg_catalog, match_states, verify_catalog,
                                   write_catalog_csv)
from magic_pareto.errors import DomainError
from magic_pareto.frontiers import DELTA_E, DELTA_G, f_abc, f_ed, f_gfe, f_ihg
from magic_pareto.measures import expectation_values, m2_from_expectations, pattern_of_state
from magic_pareto.parametrization import angles_to_amplitudes
from magic_pareto.states import StateVector, pauli_expectations

PI = math.pi
CHI_H = math.asin(0.5)
CHI_F = math.asin(1 / math.sqrt(2))
CHI_ED = math.asin(0.95)


def distinct_by_matrix(psi):
    # independent of the greedy dedup: count classes of the full fidelity relation
    fid = np.abs(psi.conj() @ psi.T) ** 2
    same = fid > 1 - 1e-9
    return len({tuple(np.flatnonzero(row)) for row in same})


def angles_m2(entries):
    cols = np.array([e.angles.as_tuple() for e in entries]).T
    return m2_from_expectations(expectation_values(*cols))


class TestCounts:
    def test_abc(self):
        entries = abc_catalog(0.7)
        assert len(entries) == 144
        assert distinct_by_matrix(amplitudes_of(entries)) == 144

    def test_gfe_at_f(self):
        assert distinct_by_matrix(amplitudes_of(gfe_catalog(CHI_F))) == 288

    def test_ihg_at_h(self):
        assert distinct_by_matrix(amplitudes_of(ihg_catalog(CHI_H))) == 192

    def test_ed(self):
        assert distinct_by_matrix(amplitudes_of(ed_catalog(CHI_ED))) == 576

    @pytest.mark.parametrize("branch,chi,count", [("ABC", 0.3, 144), ("ABC", 1.5, 144), ("IHG", 0.3, 192),
                                                  ("GFE", 0.9, 288), ("ED", 1.2, 576)])
    def test_generic_chi(self, branch, chi, count):
        assert verify_catalog(branch, chi).count_distinct == count

    def test_abc_rows_have_multiplicity_eight(self):
        assert all(len(r.expand(0.7)) == 8 for r in ABC_ROWS)


class TestOnFrontier:
    def test_abc(self):
        assert np.abs(angles_m2(abc_catalog(0.7)) - f_abc(math.sin(0.7))).max() < 1e-10

    @pytest.mark.parametrize("chi", [CHI_F, 0.8, math.asin(DELTA_G), math.asin(DELTA_E)])
    def test_gfe(self, chi):
        assert np.abs(angles_m2(gfe_catalog(chi)) - f_gfe(math.sin(chi))).max() < 1e-10

    @pytest.mark.parametrize("chi", [0.0, 0.3, CHI_H, math.asin(DELTA_G)])
    def test_ihg(self, chi):
        assert np.abs(angles_m2(ihg_catalog(chi)) - f_ihg(math.sin(chi))).max() < 1e-10

    @pytest.mark.parametrize("chi", [math.asin(DELTA_E), 1.1, CHI_ED, PI / 2])
    def test_ed(self, chi):
        assert np.abs(angles_m2(ed_catalog(chi)) - f_ed(math.sin(chi))).max() < 1e-10


class TestPatterns:
    def test_abc_row17(self):
        e = [e for e in ABC_ROWS[17].expand(0.7) if e.angles.phi1 == 0 and e.angles.phi2 == 0
             and e.angles.gamma == 0][0]
        assert pattern_of_state(e.state()).zeros == {"IY", "IZ", "XY", "XZ", "YI", "YX", "YZ", "ZI", "ZX", "ZY"}

    def test_abc_fourth_powers(self):
        x = 0.7
        want = sorted([1, 1, math.cos(x) ** 4, math.cos(x) ** 4, math.sin(x) ** 4, math.sin(x) ** 4])
        for vals in pauli_expectations(amplitudes_of(abc_catalog(x))):
            nz = np.sort(vals[np.abs(vals) > 1e-9] ** 4)
            assert nz == pytest.approx(want, abs=1e-12)

    def test_gfe_fourth_powers(self):
        x = 0.9
        c4, s4 = math.cos(x) ** 4 / 4, math.sin(x) ** 4 / 4
        want = sorted([1.0] + [1 / 16] * 4 + [c4] * 4 + [s4] * 4)
        for vals in pauli_expectations(amplitudes_of(gfe_catalog(x))):
            nz = np.sort(vals[np.abs(vals) > 1e-9] ** 4)
            assert nz == pytest.approx(want, abs=1e-12)

    def test_gfe_row0_groups(self):
        x = 0.9
        vals = pauli_expectations(GFE_ROWS[0].expand(x)[0].amplitudes)
        p = pattern_of_state(StateVector(GFE_ROWS[0].expand(x)[0].amplitudes))
        assert p.zeros == {"IX", "XI", "XX"}
        mags = np.sort(np.abs(vals[1:])[np.abs(vals[1:]) > 1e-9])
        assert len(mags) == 12
        groups = np.split(mags, 3)
        assert all(np.ptp(g) < 1e-12 for g in groups)

    def test_abc_census(self):
        assert len(verify_catalog("ABC", 0.7).patterns_seen) == 18

    def test_gfe_census(self):
        rep = verify_catalog("GFE", CHI_F)
        assert len(rep.patterns_seen) == 9 and rep.zero_counts == {3}

    def test_ed_census(self):
        rep = verify_catalog("ED", CHI_ED)
        assert len(rep.patterns_seen) == 9 and rep.zero_counts == {2}

    def test_ihg_generic_no_zeros(self):
        assert verify_catalog("IHG", 0.3).zero_counts == {0}

    def test_ihg_at_h_six_three_zero_masks(self):
        entries = ihg_catalog(CHI_H)
        by_index = {}
        for e in entries:
            by_index.setdefault(e.pattern_index, set()).add(pattern_of_state(e.state()))
        assert sorted(by_index) == [0, 1, 2, 3, 4, 5]
        # each lettered-case group carries one mask, and the masks differ between groups
        assert all(len(masks) == 1 for masks in by_index.values())
        masks = [next(iter(m)) for m in by_index.values()]
        assert len(set(masks)) == 6 and all(m.count == 3 for m in masks)
        assert all(sum(e.pattern_index == k for e in entries) == 32 for k in range(6))

    def test_case_5a_lands_in_group_5(self):
        entries = ihg_catalog(CHI_H)
        assert {e.pattern_index for e in entries if e.case_label == "5a"} == {5}


class TestIhgEnumerations:
    @pytest.mark.parametrize("chi", [0.0, 0.3, CHI_H, 0.6])
    def test_compact_and_case_sets_agree(self, chi):
        compact = amplitudes_of([e for r in IHG_COMPACT_ROWS for e in r.expand(chi)])
        cases = amplitudes_of(ihg_case_catalog(chi))
        assert len(cases) == 192 and len(compact) == 192
        assert np.all(match_states(compact, cases) >= 0)
        assert np.all(match_states(cases, compact) >= 0)

    def test_twenty_lettered_cases(self):
        assert len(IHG_CASE_ROWS) == 20
        assert sorted(r.case_label for r in IHG_CASE_ROWS)[:3] == ["0a", "0b", "1a"]


class TestCollapse:
    def test_row0_phi_independent(self):
        assert free_angle_collapse_check(ABC_ROWS[0], 20)

    def test_row1(self):
        assert free_angle_collapse_check(ABC_ROWS[1], 20)
        assert ABC_ROWS[1].multiplicity == 8

    @pytest.mark.parametrize("row", [r for r in ABC_ROWS if r.free])
    def test_every_free_row(self, row):
        assert free_angle_collapse_check(row, 10, np.random.default_rng(row.row))

    def test_broken_tie_detected(self):
        broken = replace(ABC_ROWS[0], rule=lambda c, f, x: (c["n"] * PI, c["m"] * PI, f["phi1"], f["phi2"],
                                                             c["s"] * PI / 2))
        assert not free_angle_collapse_check(broken, 20)

    def test_row_without_free_angle(self):
        with pytest.raises(ValueError):
            free_angle_collapse_check(ABC_ROWS[7], 5)


class TestDomains:
    def test_abc_open_interval(self):
        with pytest.raises(DomainError):
            abc_catalog(0.0)
        with pytest.raises(DomainError):
            abc_catalog(PI / 2)

    def test_branch_windows(self):
        with pytest.raises(DomainError):
            gfe_catalog(0.3)
        with pytest.raises(DomainError):
            ed_catalog(0.9)
        with pytest.raises(DomainError):
            ihg_catalog(1.0)

    def test_unknown_branch(self):
        with pytest.raises((KeyError, ValueError)):
            catalog("XYZ", 0.5)

    def test_ed_rows_carry_the_shift(self):
        assert all(dict(r.choices)["shift"] == (1, -1) for r in ED_ROWS)


class TestCsv:
    def test_round_trip(self):
        entries = abc_catalog(0.7)
        buf = io.StringIO()
        write_catalog_csv(entries, buf, ["test header"])
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# test header"
        rows = list(csv.DictReader(lines[1:]))
        assert list(rows[0]) == list(CATALOG_COLUMNS)
        assert len(rows) == 144
        batch = amplitudes_of(entries)
        for row, e, want in zip(rows, entries, batch):
            angles = [float(row[k]) for k in ("theta1", "phi1", "theta2", "phi2", "chi", "gamma")]
            assert angles == list(e.angles.as_tuple())
            stored = np.array([complex(float(row[f"re_{k}"]), float(row[f"im_{k}"])) for k in "abcd"])
            assert np.array_equal(stored, want)
            assert np.abs(angles_to_amplitudes(*angles) - stored).max() < 1e-15
            assert float(row["delta"]) == pytest.approx(math.sin(0.7), abs=1e-12)
