import math

import pytest


def _write_population(path, rate, beat):
    rows = ["t,re_ce,im_ce,re_cs,im_cs,pe,ps"]
    n = 120
    for i in range(n + 1):
        t = 0.05 * i
        pe = math.exp(-rate * t) * math.cos(beat * t) ** 2
        ps = math.exp(-rate * t) * math.sin(beat * t) ** 2
        re = math.sqrt(pe)
        rows.append(f"{t},{re},0,0,0,{pe},{ps}")
    path.write_text("\n".join(rows) + "\n")


@pytest.fixture(scope="session")
def population_csvs(tmp_path_factory):
    """Nine synthetic panels mimicking the fig3 preset outputs."""
    root = tmp_path_factory.mktemp("fixtures")
    paths = []
    for i, name in enumerate(
        "fig3a fig3b fig3c fig3d fig3e fig3f fig3g fig3h fig3i".split()
    ):
        sub = root / name
        sub.mkdir()
        csv_path = sub / "population.csv"
        _write_population(csv_path, rate=0.2 + 0.1 * i, beat=0.5 * (i % 3))
        paths.append(csv_path)
    return paths


@pytest.fixture(scope="session")
def intensity_csv(tmp_path_factory):
    """Small regular space-time grid with a moving pulse."""
    path = tmp_path_factory.mktemp("fixtures") / "intensity.csv"
    rows = ["t,x,intensity"]
    for i in range(7):
        t = 0.5 * i
        for j in range(21):
            x = 0.25 * j
            val = math.exp(-((x - t) ** 2) / 0.1)
            rows.append(f"{t},{x},{val}")
    path.write_text("\n".join(rows) + "\n")
    return path
