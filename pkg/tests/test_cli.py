import subprocess
import sys

import pytest

from simplex_designs.cli import main

from conftest import fixture_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def kv_dict(stdout):
    pairs = {}
    for line in stdout.strip().splitlines():
        key, _, value = line.partition("=")
        pairs[key] = value
    return pairs


class TestConstruct:
    def test_c1_incidence_is_bit_identical_to_fixture(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "construct", "c1")
        assert code == 0
        got = kv_dict(out)
        assert got["class"] == "C1"
        expected = "/".join(fixture_text("c1").strip().splitlines())
        assert got["incidence"] == expected

    def test_hyperplane_complement_matches_c1(self, capsys):
        code, out, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "construct", "hyperplane-complement"
        )
        assert code == 0
        got = kv_dict(out)
        expected = "/".join(fixture_text("c1").strip().splitlines())
        assert got["incidence"] == expected
        assert got["class"] == "C1"

    @pytest.mark.parametrize(
        "kind,tag,index,centers",
        [
            ("c1", "C1", "7", "15"),
            ("c2", "C2", "3", "3"),
            ("c3", "C3", "1", "1"),
            ("c4", "C4", "0", "1"),
            ("non-centered", "NON_CENTERED", "none", "0"),
        ],
    )
    def test_kinds_report_expected_class(self, capsys, kind, tag, index, centers):
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "construct", kind)
        assert code == 0
        got = kv_dict(out)
        assert got["class"] == tag
        assert got["bijection_index"] == index
        assert got["center_count"] == centers

    def test_hadamard_rendering_matches_fixture(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "construct", "c1")
        got = kv_dict(out)
        expected = "/".join(fixture_text("c1", "hadamard01").strip().splitlines())
        assert got["hadamard"] == expected

    def test_out_dir_writes_matrix_files(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, "--out-dir", str(tmp_path), "--sorted", "construct", "c4"
        )
        assert code == 0
        assert (tmp_path / "c4.incidence.txt").exists()
        assert (tmp_path / "c4.hadamard01.txt").exists()

    def test_unknown_kind_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["construct", "c9"])
        assert info.value.code == 2

    def test_deterministic_output_under_sorted(self, capsys):
        _, first, _ = run_cli(capsys, "--format", "kv", "--sorted", "construct", "c2")
        _, second, _ = run_cli(capsys, "--format", "kv", "--sorted", "construct", "c2")
        assert first == second


class TestClassify:
    @pytest.mark.parametrize(
        "name,tag",
        [("c1", "C1"), ("c2", "C2"), ("c3", "C3"), ("c4", "C4"),
         ("non-centered", "NON_CENTERED")],
    )
    def test_fixtures_by_name(self, capsys, name, tag):
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "classify", name)
        assert code == 0
        assert kv_dict(out)["class"] == tag

    def test_classify_reports_group_data(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "classify", "c4")
        got = kv_dict(out)
        assert got["automorphism_order"] == "168"
        assert got["block_orbits"] == "2"
        assert got["flag_orbits"] == "4"
        assert got["point_primitive"] == "false"
        assert got["point_block_systems"] == "1"

    def test_classify_file_path(self, capsys, tmp_path):
        path = tmp_path / "d.txt"
        path.write_text(fixture_text("c3"))
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "classify", str(path))
        assert code == 0
        assert kv_dict(out)["class"] == "C3"

    def test_all_zero_matrix_is_invariant_violation(self, capsys, tmp_path):
        path = tmp_path / "zero.txt"
        path.write_text("\n".join(["0" * 15] * 15))
        code, _, err = run_cli(capsys, "classify", str(path))
        assert code == 1
        assert "invariant" in err

    def test_garbage_is_parse_error(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("not a matrix")
        code, _, err = run_cli(capsys, "classify", str(path))
        assert code == 2
        assert "parse" in err

    def test_missing_file_is_parse_error(self, capsys):
        code, _, err = run_cli(capsys, "classify", "/nonexistent/nowhere.txt")
        assert code == 2

    def test_fixture_dir_override(self, capsys, tmp_path):
        (tmp_path / "c2.incidence.txt").write_text(fixture_text("c2"))
        code, out, _ = run_cli(
            capsys,
            "--fixture-dir", str(tmp_path),
            "--format", "kv", "--sorted",
            "classify", "c2",
        )
        assert code == 0
        assert kv_dict(out)["class"] == "C2"


class TestIsomorphic:
    def test_planted_relabeling_found(self, capsys, tmp_path):
        import random

        from simplex_designs import parse_incidence
        from simplex_designs.designs import render_incidence
        from simplex_designs.subsets import Permutation

        d = parse_incidence(fixture_text("c1"))
        rel = d.relabeled(Permutation.random(15, random.Random(47)))
        path = tmp_path / "rel.txt"
        path.write_text(render_incidence(rel))
        code, out, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "isomorphic", "c1", str(path)
        )
        assert code == 0
        got = kv_dict(out)
        assert got["isomorphic"] == "true"
        assert got["witness"] != "none (search exhausted)"

    def test_distinct_fixtures_report_exhaustion(self, capsys):
        code, out, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "isomorphic", "c3", "c4"
        )
        assert code == 0
        got = kv_dict(out)
        assert got["isomorphic"] == "false"
        assert got["witness"] == "none (search exhausted)"

    def test_c1_vs_hyperplane_complement_output(self, capsys, tmp_path):
        from simplex_designs.constructions import hyperplane_complement_blocks
        from simplex_designs.designs import Design, render_incidence

        hc = Design.from_blocks(hyperplane_complement_blocks(4))
        path = tmp_path / "hc.txt"
        path.write_text(render_incidence(hc))
        code, out, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "isomorphic", "c1", str(path)
        )
        assert code == 0
        assert kv_dict(out)["isomorphic"] == "true"


class TestCensus:
    def test_restricted_census_spectrum(self, capsys):
        code, out, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "census", "--delta-limit", "720"
        )
        assert code == 0
        got = kv_dict(out)
        assert got["products"] == "720"
        assert got["distinct_cliques"] == "720"
        total = sum(
            int(got[f"count_index_{i}"]) for i in (0, 1, 3, 7)
        )
        assert total == 720

    def test_full_delta_census_matches_spectrum(self, capsys):
        code, out, _ = run_cli(capsys, "--format", "kv", "--sorted", "census")
        assert code == 0
        got = kv_dict(out)
        assert got["distinct_cliques"] == "5040"
        assert got["count_index_7"] == "168"
        assert got["count_index_3"] == "1176"
        assert got["count_index_1"] == "2352"
        assert got["count_index_0"] == "1344"
        for idx, tag in ((7, "C1"), (3, "C2"), (1, "C3"), (0, "C4")):
            assert got[f"class_of_index_{idx}"] == tag

    def test_census_with_two_planes_each(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "--format", "kv", "--sorted",
            "census", "--x-limit", "2", "--y-limit", "2", "--delta-limit", "24",
        )
        assert code == 0
        got = kv_dict(out)
        assert got["products"] == str(2 * 2 * 24)
        assert got["distinct_cliques"] == str(2 * 2 * 24)

    def test_census_rejects_bad_z(self, capsys):
        code, _, err = run_cli(capsys, "census", "--z", "{1,2,3}")
        assert code == 1
        assert "invariant" in err

    def test_global_limit_bounds_census(self, capsys):
        code, out, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "--limit", "120", "census"
        )
        assert code == 0
        assert kv_dict(out)["products"] == "120"

    def test_census_deterministic_under_sorted(self, capsys):
        _, first, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "--limit", "120", "census"
        )
        _, second, _ = run_cli(
            capsys, "--format", "kv", "--sorted", "--limit", "120", "census"
        )
        assert first == second


class TestTextFormat:
    def test_text_report_mentions_class(self, capsys):
        code, out, _ = run_cli(capsys, "--sorted", "construct", "c3")
        assert code == 0
        assert "class: C3" in out
        assert "elapsed" not in out

    def test_timing_included_without_sorted(self, capsys):
        code, out, _ = run_cli(capsys, "construct", "c3")
        assert code == 0
        assert "elapsed" in out

    def test_seed_echoed(self, capsys):
        code, out, _ = run_cli(capsys, "--seed", "9", "--format", "kv", "construct", "c3")
        assert code == 0
        assert kv_dict(out)["param.seed"] == "9"


class TestClassifyAfterConstruct:
    @pytest.mark.parametrize(
        "kind,tag",
        [("c1", "C1"), ("c2", "C2"), ("c3", "C3"), ("c4", "C4"),
         ("non-centered", "NON_CENTERED")],
    )
    def test_round_trip_through_files(self, capsys, tmp_path, kind, tag):
        code, _, _ = run_cli(
            capsys, "--out-dir", str(tmp_path), "--sorted", "construct", kind
        )
        assert code == 0
        stem = kind.replace("-", "_")
        code, out, _ = run_cli(
            capsys,
            "--format", "kv", "--sorted",
            "classify", str(tmp_path / f"{stem}.incidence.txt"),
        )
        assert code == 0
        assert kv_dict(out)["class"] == tag


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "simplex_designs", "--sorted", "construct", "c1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "class: C1" in proc.stdout
