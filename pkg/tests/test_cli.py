import subprocess
import sys

import numpy as np
import pytest

from conftest import checkerboard, make_test_card
from grainstat.cli import EXIT_CHECK, EXIT_OK, EXIT_PARAM, EXIT_PARSE, main
from grainstat.pnm import read_image, write_image


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_animals(capsys):
    code, out, _ = run(capsys, "animals", "--kmax", "6", "--extend", "8")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "k\ta_k\tprovenance"
    assert lines[4] == "4\t19\texact"
    assert lines[7].startswith("7\t") and lines[7].endswith("extrap")
    assert len(lines) == 9


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--width", "256", "--height", "256",
                       "--p", "0.01", "--eps", "0.01")
    assert code == EXIT_OK
    s, prev, cur = out.splitlines()[1].split("\t")
    assert s == "5" and float(prev) > 0.01 >= float(cur)


def test_threshold_domain_error(capsys):
    code, _, err = run(capsys, "threshold", "--width", "64", "--height", "64",
                       "--p", "0.3", "--eps", "0.01")
    assert code == EXIT_PARAM and "p_max" in err


def test_noise_and_denoise_binary(tmp_path, capsys):
    write_image(checkerboard(), tmp_path / "a.pbm")
    assert run(capsys, "add-noise", "--in", str(tmp_path / "a.pbm"), "--out",
               str(tmp_path / "b.pbm"), "--p", "0.1", "--q", "0.2", "--seed", "3")[0] == EXIT_OK
    noisy = read_image(tmp_path / "b.pbm")
    assert noisy.dtype == bool and np.any(noisy != checkerboard())
    for extra in ([], ["--swapped"]):
        code = run(capsys, "denoise-binary", "--in", str(tmp_path / "b.pbm"), "--out",
                   str(tmp_path / "c.pbm"), "--p", "0.1", "--q", "0.2", "--eps", "0.01", *extra)[0]
        assert code == EXIT_OK
        cleaned = read_image(tmp_path / "c.pbm")
        assert np.mean(cleaned != checkerboard()) < np.mean(noisy != checkerboard())


def test_noise_and_denoise_gray(tmp_path, capsys):
    card = make_test_card(64)
    write_image(card, tmp_path / "u.pgm")
    run(capsys, "add-noise", "--in", str(tmp_path / "u.pgm"), "--out", str(tmp_path / "v.pgm"),
        "--p", "0.15", "--seed", "1")
    code, out, _ = run(capsys, "denoise-gray", "--in", str(tmp_path / "v.pgm"), "--out",
                       str(tmp_path / "w.pgm"), "--p", "0.15", "--eps", "0.001",
                       "--threads", "2", "--report-nesting")
    assert code == EXIT_OK
    name, value = out.strip().split("\t")
    assert name == "nesting_fraction" and 0 <= float(value) <= 1
    mae = lambda a: np.abs(a.astype(int) - card).mean()
    assert mae(read_image(tmp_path / "w.pgm")) < mae(read_image(tmp_path / "v.pgm"))


def test_wrong_kind(tmp_path, capsys):
    write_image(checkerboard(16, 4), tmp_path / "a.pbm")
    assert run(capsys, "denoise-gray", "--in", str(tmp_path / "a.pbm"), "--out",
               str(tmp_path / "b.pgm"), "--p", "0.1", "--eps", "0.01")[0] == EXIT_PARAM
    write_image(make_test_card(16), tmp_path / "g.pgm")
    assert run(capsys, "add-noise", "--in", str(tmp_path / "g.pgm"), "--out",
               str(tmp_path / "h.pgm"), "--p", "0.1", "--q", "0.1")[0] == EXIT_PARAM


def test_parse_error_exit(tmp_path, capsys):
    (tmp_path / "bad.pgm").write_bytes(b"P5\n2 2\n65535\n")
    code, _, err = run(capsys, "denoise-gray", "--in", str(tmp_path / "bad.pgm"), "--out",
                       str(tmp_path / "x.pgm"), "--p", "0.1", "--eps", "0.01")
    assert code == EXIT_PARSE and "unsupported maxval" in err


def test_missing_file_exit(tmp_path, capsys):
    code = run(capsys, "add-noise", "--in", str(tmp_path / "nope.pbm"), "--out",
               str(tmp_path / "x.pbm"), "--p", "0.1")[0]
    assert code == EXIT_PARAM


def test_verify_theorem1(capsys):
    code, out, _ = run(capsys, "verify", "--experiment", "theorem1", "--property", "black-pixel",
                       "--n", "64", "--trials", "2000", "--threads", "2")
    header, row = out.splitlines()
    assert header.startswith("name\testimate") and code == EXIT_OK
    assert row.split("\t")[6] == "PASS"


def test_verify_moments(capsys):
    code, out, _ = run(capsys, "verify", "--experiment", "moments", "--n", "64",
                       "--c", "0.0", "--trials", "20", "--lmax", "2")
    assert len(out.splitlines()) == 3
    assert code == EXIT_OK


def test_verify_check_failure_exit(capsys):
    # at n=4, c=2 the density is 1/2: the exact mean is 1, far from the limit 4
    code, out, _ = run(capsys, "verify", "--experiment", "moments", "--n", "4", "--c", "2",
                       "--trials", "500", "--lmax", "1")
    assert code == EXIT_CHECK and "FAIL" in out


def test_verify_rejection(capsys):
    code, out, _ = run(capsys, "verify", "--experiment", "rejection", "--n", "64",
                       "--p", "0.05", "--eps", "0.01", "--trials", "50")
    assert code == EXIT_OK and "PASS" in out


def test_verify_scaling(capsys):
    code, out, _ = run(capsys, "verify", "--experiment", "scaling", "--property", "black-pixel",
                       "--trials", "200", "--delta", "0.5")
    assert out.splitlines()[0] == "n\tdelta\tp\testimate\thalf_width"
    assert out.splitlines()[-1].startswith("monotone\t")
    assert code in (EXIT_OK, EXIT_CHECK)


def test_bad_arguments_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["threshold", "--width", "x"])
    assert info.value.code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grainstat.cli", "animals", "--kmax", "4"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[-1] == "4\t19\texact"
