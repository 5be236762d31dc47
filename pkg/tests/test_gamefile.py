import pytest

from rps_forge.construct import imbalanced_rps, imbalanced_rps3, maximal_rps3
from rps_forge.core import enumerate_multisets, eval_outcome
from rps_forge.gamefile import GameFileError, dump_game, load_game, parse_game, save_game


class TestRoundTrip:
    @pytest.mark.parametrize(
        "rule",
        [imbalanced_rps3(3), maximal_rps3(4), imbalanced_rps(3, 2)],
        ids=lambda r: r.construction,
    )
    def test_build_load_rebuild_identical(self, rule, tmp_path):
        path = tmp_path / "game.rps"
        save_game(rule, path)
        loaded = load_game(path)
        assert loaded.m == rule.m
        assert loaded.labels == rule.labels
        assert loaded.construction == rule.construction
        assert dump_game(loaded) == path.read_text()
        for counts, _ in enumerate_multisets(rule.n, rule.m):
            assert eval_outcome(loaded, counts) == eval_outcome(rule, counts)

    def test_construction_comment_round_trips(self, tmp_path):
        rule = imbalanced_rps(4, 2)
        path = tmp_path / "g.rps"
        save_game(rule, path)
        assert "# construction: imbalanced m=4 k=2" in path.read_text()
        assert load_game(path).construction == "imbalanced m=4 k=2"

    def test_table_size(self, tmp_path):
        path = tmp_path / "g.rps"
        save_game(imbalanced_rps3(3), path)
        lines = [l for l in path.read_text().splitlines() if l.startswith("counts=")]
        assert len(lines) == 10  # multisets of 3 objects, size 3


class TestParsing:
    def test_unspecified_monosets_default_to_tie(self):
        text = (
            "rps m=2 objects=R,P,S\n"
            "counts=1,1,0 winner=P\n"
            "counts=1,0,1 winner=R\n"
            "counts=0,1,1 winner=S\n"
        )
        rule = parse_game(text)
        assert eval_outcome(rule, (2, 0, 0)).is_tie
        assert eval_outcome(rule, (1, 1, 0)).winner == 1

    def test_blank_lines_and_comments_skipped(self):
        text = (
            "# a remark\n"
            "\n"
            "rps m=2 objects=a,b\n"
            "counts=1,1 winner=a\n"
            "\n"
        )
        assert parse_game(text).labels == ("a", "b")

    @pytest.mark.parametrize(
        "text, line",
        [
            ("rps m=2 objects=a,b\ncounts=1,1 winner=c\n", 2),
            ("rps m=2 objects=a,b\ncounts=1,2 winner=a\n", 2),
            ("rps m=2 objects=a,b\ncounts=0,2 winner=a\n", 2),
            ("rps m=2 objects=a,a\n", 1),
            ("rps m=x objects=a,b\n", 1),
            ("counts=1,1 winner=a\n", 1),
            ("rps m=2 objects=a,b\ncounts=1 winner=a\n", 2),
            ("rps m=2 objects=a,b\nnonsense\n", 2),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GameFileError) as err:
            parse_game(text)
        assert err.value.line == line

    def test_missing_mixed_multiset_rejected(self):
        text = "rps m=2 objects=a,b\n"
        with pytest.raises(GameFileError):
            parse_game(text)

    def test_missing_header(self):
        with pytest.raises(GameFileError):
            parse_game("# only a comment\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(GameFileError):
            load_game(tmp_path / "absent.rps")

    def test_duplicate_header_rejected(self):
        text = "rps m=2 objects=a,b\nrps m=2 objects=a,b\n"
        with pytest.raises(GameFileError) as err:
            parse_game(text)
        assert err.value.line == 2
