"""Command-line interface, run in-process through main().

Each test drives a subcommand exactly as a shell would and checks the
exit code plus the literal stdout/stderr text.  File fixtures come from
demo/ or are serialized on the fly into tmp_path.
"""
from __future__ import annotations

import re
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from coinfree.cli import main
from coinfree.plmap import EdgeTrack, TrackSegment, coincidences
from coinfree.points import InteriorPoint, VertexPoint
from coinfree.textio import parse_map_file, serialize_map_file
from helpers import (
    build_map,
    constant_map,
    figure_eight,
    ring,
    single_edge,
    path3,
)

F = Fraction
DEMO = Path(__file__).resolve().parent.parent / "demo"

CROSSING_F = str(DEMO / "crossing-f.map")
CROSSING_G = str(DEMO / "crossing-g.map")
IDENTITY_F = str(DEMO / "identity-f.map")
IDENTITY_G = str(DEMO / "identity-g.map")
CIRCLE_DEG2_F = str(DEMO / "circle-deg2-f.map")
CIRCLE_CONST_G = str(DEMO / "circle-const-g.map")
CIRCLE_SPIN_F = str(DEMO / "circle-spin-f.map")
CIRCLE_SPIN_G = str(DEMO / "circle-spin-g.map")


def run(capsys, *argv: str):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_text(tmp_path: Path, name: str, text: str) -> str:
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def write_map(tmp_path: Path, name: str, m) -> str:
    return write_text(tmp_path, name, serialize_map_file(m))


def load_map(path: str):
    return parse_map_file(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# validate


class TestValidate:
    def test_good_file_reports_ok(self, capsys):
        code, out, err = run(capsys, "validate", IDENTITY_F)
        assert code == 0
        assert out == f"{IDENTITY_F}: ok\n"
        assert err == ""

    def test_one_line_per_file(self, capsys):
        code, out, err = run(capsys, "validate", IDENTITY_F, IDENTITY_G)
        assert code == 0
        assert out == f"{IDENTITY_F}: ok\n{IDENTITY_G}: ok\n"

    def test_disconnected_graph_fails(self, capsys, tmp_path):
        p = write_text(
            tmp_path,
            "flier.map",
            "graph flier\nvertex u\nvertex w\nedge e u u\n",
        )
        code, out, err = run(capsys, "validate", p)
        assert code == 1
        assert out.startswith(f"{p}: graph flier: ")
        assert "not connected" in out

    def test_map_problem_fails(self, capsys, tmp_path):
        # track a starts at an interior point, contradicting vimage v
        p = write_text(
            tmp_path,
            "skewed.map",
            "graph eight\n"
            "vertex v\n"
            "edge a v v\n"
            "edge b v v\n"
            "\n"
            "map id eight eight\n"
            "vimage v v:v\n"
            "track a : (0,e:a@1/2) (1,e:a@1)\n"
            "track b : (0,e:b@0) (1,e:b@1)\n",
        )
        code, out, err = run(capsys, "validate", p)
        assert code == 1
        assert out.startswith(f"{p}: map id: ")

    def test_parse_error_exits_2_with_line(self, capsys, tmp_path):
        p = write_text(
            tmp_path,
            "zero.map",
            "graph seg\n"
            "vertex x0\n"
            "vertex x1\n"
            "edge s x0 x1\n"
            "\n"
            "map m seg seg\n"
            "vimage x0 v:x0\n"
            "vimage x1 v:x1\n"
            "track s : (0,e:s@0) (1/0,e:s@1)\n",
        )
        code, out, err = run(capsys, "validate", p)
        assert code == 2
        assert err.startswith(f"{p}:9: ")
        assert "zero denominator" in err

    def test_parse_error_stops_the_run(self, capsys, tmp_path):
        bad = write_text(tmp_path, "bad.map", "graph g\nvertex\n")
        code, out, err = run(capsys, "validate", bad, IDENTITY_F)
        assert code == 2
        assert IDENTITY_F not in out + err

    def test_missing_file(self, capsys, tmp_path):
        ghost = str(tmp_path / "ghost.map")
        code, out, err = run(capsys, "validate", ghost)
        assert code == 1
        assert ghost in err


# ---------------------------------------------------------------------------
# coincidences


class TestCoincidences:
    def test_crossing_pair_single_line(self, capsys):
        code, out, err = run(capsys, "coincidences", CROSSING_F, CROSSING_G)
        assert code == 0
        assert out == "e:sigma@1/2 -> e:rho@1/2 Crossing\n"

    def test_distinct_constants_print_nothing(self, capsys, tmp_path):
        dom, cod = single_edge(), figure_eight()
        fp = write_map(
            tmp_path, "cf.map", constant_map(dom, cod, InteriorPoint("a", F(1, 3)), "f")
        )
        gp = write_map(
            tmp_path, "cg.map", constant_map(dom, cod, InteriorPoint("a", F(2, 3)), "g")
        )
        code, out, err = run(capsys, "coincidences", fp, gp)
        assert code == 0
        assert out == ""

    def test_identical_maps_are_degenerate(self, capsys):
        code, out, err = run(capsys, "coincidences", IDENTITY_F, IDENTITY_F)
        assert code == 3
        assert "degenerate overlap on edge" in err
        assert "run 'remove'" in err

    def test_mismatched_pair_rejected(self, capsys):
        code, out, err = run(capsys, "coincidences", CROSSING_F, IDENTITY_G)
        assert code == 1
        assert "maps do not share domain and codomain" in err


# ---------------------------------------------------------------------------
# remove


SUMMARY = re.compile(r"coincidence-free after (\d+) steps\n\Z")
TRACE_STEP = re.compile(
    r"step (\d+) (\w+) map=(f|g|both) edge=\S+ window=\S+,\S+\Z"
)


class TestRemove:
    def test_identity_pair_goes_free(self, capsys, tmp_path):
        out_f = str(tmp_path / "after-f.map")
        out_g = str(tmp_path / "after-g.map")
        code, out, err = run(
            capsys, "remove", IDENTITY_F, IDENTITY_G,
            "--out-f", out_f, "--out-g", out_g,
        )
        assert code == 0
        m = SUMMARY.fullmatch(out)
        assert m and int(m.group(1)) >= 1
        f2, g2 = load_map(out_f), load_map(out_g)
        assert coincidences(f2, g2) == []

    def test_circle_obstruction_reported(self, capsys, tmp_path):
        out_f = str(tmp_path / "kept-f.map")
        code, out, err = run(
            capsys, "remove", CIRCLE_DEG2_F, CIRCLE_CONST_G, "--out-f", out_f
        )
        assert code == 0
        assert out == "circle obstruction: N = 2\n"
        # an obstructed pair is returned unchanged
        assert load_map(out_f) == load_map(CIRCLE_DEG2_F)

    def test_interval_codomain_yields_two_constants(self, capsys, tmp_path):
        dom, cod = single_edge(), path3()
        fp = write_map(
            tmp_path, "pf.map", constant_map(dom, cod, VertexPoint("p0"), "f")
        )
        gp = write_map(
            tmp_path, "pg.map", constant_map(dom, cod, VertexPoint("p3"), "g")
        )
        out_f = str(tmp_path / "qf.map")
        out_g = str(tmp_path / "qg.map")
        code, out, err = run(
            capsys, "remove", fp, gp, "--out-f", out_f, "--out-g", out_g
        )
        assert code == 0
        assert SUMMARY.fullmatch(out)
        for path, height in ((out_f, F(1, 3)), (out_g, F(2, 3))):
            m = load_map(path)
            for e in m.domain.edges:
                for seg in m.track(e.id).segments:
                    assert seg.edge == "s1"
                    assert seg.a0 == seg.a1 == height

    def test_trace_file_format(self, capsys, tmp_path):
        trace = str(tmp_path / "steps.log")
        code, out, err = run(
            capsys, "remove", CROSSING_F, CROSSING_G, "--trace", trace
        )
        assert code == 0
        lines = Path(trace).read_text(encoding="utf-8").splitlines()
        assert lines
        indices = []
        for line in lines:
            if line.startswith("# "):
                continue
            m = TRACE_STEP.fullmatch(line)
            assert m, line
            indices.append(int(m.group(1)))
        assert indices == list(range(1, len(indices) + 1))
        text = "\n".join(lines)
        assert "# fork hub" in text
        assert "leading map g" in text
        assert "# replaced" in text and "# replacement" in text

    def test_figures_only_for_fork_steps(self, capsys, tmp_path):
        trace = str(tmp_path / "steps.log")
        figs = tmp_path / "figs"
        code, out, err = run(
            capsys, "remove", CROSSING_F, CROSSING_G,
            "--trace", trace, "--figures", str(figs),
        )
        assert code == 0
        fork_steps = []
        for line in Path(trace).read_text(encoding="utf-8").splitlines():
            m = TRACE_STEP.fullmatch(line)
            if m and m.group(2) == "ForkManeuver":
                fork_steps.append(int(m.group(1)))
        assert fork_steps
        expected = {
            f"step-{n:03d}-{phase}.svg"
            for n in fork_steps
            for phase in ("before", "after")
        }
        assert {p.name for p in figs.iterdir()} == expected
        for p in figs.iterdir():
            assert "<svg" in p.read_text(encoding="utf-8")

    def test_branched_domain_into_circle_refused(self, capsys, tmp_path):
        dom, cod = figure_eight(), ring()
        fp = write_map(tmp_path, "rf.map", constant_map(dom, cod, VertexPoint("z"), "f"))
        wind = EdgeTrack((TrackSegment(F(0), F(1), "c", F(0), F(1)),))
        gp = write_map(
            tmp_path,
            "rg.map",
            build_map("g", dom, cod, {"v": VertexPoint("z")}, {"a": wind, "b": wind}),
        )
        code, out, err = run(capsys, "remove", fp, gp)
        assert code == 1
        assert "branched domain" in err

    def test_byte_deterministic(self, capsys, tmp_path):
        outputs = []
        for tag in ("one", "two"):
            d = tmp_path / tag
            d.mkdir()
            code, out, err = run(
                capsys, "remove", CROSSING_F, CROSSING_G,
                "--out-f", str(d / "f.map"), "--out-g", str(d / "g.map"),
                "--trace", str(d / "t.log"), "--figures", str(d / "figs"),
            )
            assert code == 0
            blob = {"stdout": out}
            for p in sorted(d.rglob("*")):
                if p.is_file():
                    blob[str(p.relative_to(d))] = p.read_bytes()
            outputs.append(blob)
        assert outputs[0] == outputs[1]


# ---------------------------------------------------------------------------
# certify


def removed_pair(capsys, tmp_path, f_path: str, g_path: str):
    out_f = str(tmp_path / "removed-f.map")
    out_g = str(tmp_path / "removed-g.map")
    code, _, _ = run(
        capsys, "remove", f_path, g_path, "--out-f", out_f, "--out-g", out_g
    )
    assert code == 0
    return out_f, out_g


class TestCertify:
    def test_accepts_its_own_removal(self, capsys, tmp_path):
        out_f, out_g = removed_pair(capsys, tmp_path, CROSSING_F, CROSSING_G)
        code, out, err = run(
            capsys, "certify", CROSSING_F, CROSSING_G, out_f, out_g
        )
        assert code == 0
        lines = out.splitlines()
        assert lines.count("certificate") == 2
        assert sum(1 for x in lines if x == "verdict: homotopic") == 2
        assert lines[-1] == "coincidences: none (exact solver and 1/1024 grid)"

    def test_resolution_flag(self, capsys, tmp_path):
        out_f, out_g = removed_pair(capsys, tmp_path, CROSSING_F, CROSSING_G)
        code, out, err = run(
            capsys, "certify", CROSSING_F, CROSSING_G, out_f, out_g,
            "--resolution", "64",
        )
        assert code == 0
        assert out.splitlines()[-1] == "coincidences: none (exact solver and 1/64 grid)"

    def test_zero_resolution_rejected_by_parser(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(
                ["certify", CROSSING_F, CROSSING_G, CROSSING_F, CROSSING_G,
                 "--resolution", "0"]
            )
        assert exc.value.code == 2

    @pytest.mark.parametrize("label", ["f", "g"])
    def test_tampered_after_map_fails_homotopy(self, capsys, tmp_path, label):
        out_f, out_g = removed_pair(capsys, tmp_path, IDENTITY_F, IDENTITY_G)
        eight = figure_eight()
        doubled = EdgeTrack(
            (
                TrackSegment(F(0), F(1, 2), "a", F(0), F(1)),
                TrackSegment(F(1, 2), F(1), "a", F(0), F(1)),
            )
        )
        straight = EdgeTrack((TrackSegment(F(0), F(1), "b", F(0), F(1)),))
        tampered = write_map(
            tmp_path,
            "tampered.map",
            build_map(
                "twisted", eight, eight,
                {"v": VertexPoint("v")},
                {"a": doubled, "b": straight},
            ),
        )
        after = {"f": (tampered, out_g), "g": (out_f, tampered)}[label]
        code, out, err = run(
            capsys, "certify", IDENTITY_F, IDENTITY_G, *after
        )
        assert code == 1
        assert out == f"homotopy check failed ({label})\n"

    def test_planted_coincidence_found(self, capsys):
        # before == after, so the original crossing is still there
        code, out, err = run(
            capsys, "certify", CROSSING_F, CROSSING_G, CROSSING_F, CROSSING_G
        )
        assert code == 1
        assert out == "coincidence found\n"

    def test_degenerate_after_pair_found(self, capsys, tmp_path):
        out_f, _ = removed_pair(capsys, tmp_path, IDENTITY_F, IDENTITY_G)
        code, out, err = run(
            capsys, "certify", IDENTITY_F, IDENTITY_G, out_f, out_f
        )
        assert code == 1
        assert out == "coincidence found\n"

    def test_mismatched_after_pair_rejected(self, capsys, tmp_path):
        other = write_map(
            tmp_path,
            "other.map",
            constant_map(single_edge(), figure_eight(), VertexPoint("v"), "f"),
        )
        code, out, err = run(
            capsys, "certify", CROSSING_F, CROSSING_G, other, CROSSING_G
        )
        assert code == 1
        assert "must share domain and codomain" in err


# ---------------------------------------------------------------------------
# nielsen-circle / degree


class TestIntegerCommands:
    def test_nielsen_circle_two_zero(self, capsys):
        code, out, err = run(capsys, "nielsen-circle", CIRCLE_DEG2_F, CIRCLE_CONST_G)
        assert (code, out) == (0, "2\n")

    def test_nielsen_circle_equal_degrees(self, capsys):
        code, out, err = run(capsys, "nielsen-circle", CIRCLE_SPIN_F, CIRCLE_SPIN_G)
        assert (code, out) == (0, "0\n")

    def test_degree(self, capsys):
        code, out, err = run(capsys, "degree", CIRCLE_DEG2_F)
        assert (code, out) == (0, "2\n")

    def test_degree_needs_circle_codomain(self, capsys):
        code, out, err = run(capsys, "degree", IDENTITY_F)
        assert code == 1
        assert "not a circle" in err

    def test_nielsen_circle_needs_circle_domain(self, capsys):
        code, out, err = run(capsys, "nielsen-circle", IDENTITY_F, IDENTITY_G)
        assert code == 1
        assert "not a circle" in err


# ---------------------------------------------------------------------------
# module entry point


def test_runs_as_a_module():
    proc = subprocess.run(
        [sys.executable, "-m", "coinfree", "validate", IDENTITY_F],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == f"{IDENTITY_F}: ok\n"
