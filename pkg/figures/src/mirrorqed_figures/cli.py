"""Figure tool entry point.

Two calling styles:

    mirrorqed-figures --spec figure.cfg
    mirrorqed-figures <kind> <csv...> <out-image>

Spec files are flat key=value text ('#' comments): ``kind=``, ``out=``,
repeated ``csv=`` lines, optional ``title=``, ``xlabel=``, ``ylabel=``,
``xlim=lo:hi``, ``ylim=lo:hi``, ``dpi=``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureDataError, FigureSpec, render


def _parse_range(raw: str, key: str) -> tuple[float, float]:
    try:
        lo, hi = raw.split(":")
        return float(lo), float(hi)
    except ValueError as exc:
        raise FigureDataError(f"bad {key} range {raw!r}, expected lo:hi") from exc


def load_spec(path: str | Path) -> FigureSpec:
    p = Path(path)
    if not p.is_file():
        raise FigureDataError(f"spec file not found: {p}")
    kind = out = title = xlabel = ylabel = ""
    xlim = ylim = None
    dpi = 100
    csvs: list[str] = []
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise FigureDataError(f"{p}:{lineno}: expected key=value")
        key, _, raw = body.partition("=")
        key, raw = key.strip(), raw.strip()
        if key == "kind":
            kind = raw
        elif key == "out":
            out = raw
        elif key == "csv":
            csvs.append(raw)
        elif key == "title":
            title = raw
        elif key == "xlabel":
            xlabel = raw
        elif key == "ylabel":
            ylabel = raw
        elif key == "xlim":
            xlim = _parse_range(raw, "xlim")
        elif key == "ylim":
            ylim = _parse_range(raw, "ylim")
        elif key == "dpi":
            dpi = int(raw)
        else:
            raise FigureDataError(f"{p}:{lineno}: unknown key {key!r}")
    if not out:
        raise FigureDataError(f"{p}: missing 'out'")
    return FigureSpec(
        kind=kind, csv_paths=tuple(csvs), out_path=out, title=title,
        xlabel=xlabel, ylabel=ylabel, xlim=xlim, ylim=ylim, dpi=dpi,
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mirrorqed-figures",
        description="Render figures from mirrorqed CSV artifacts",
    )
    parser.add_argument("--spec", help="figure spec file (key=value)")
    parser.add_argument("positional", nargs="*",
                        help="<kind> <csv...> <out-image>")
    args = parser.parse_args(argv)

    try:
        if args.spec:
            spec = load_spec(args.spec)
        else:
            if len(args.positional) < 3:
                parser.error("need <kind> <csv...> <out-image> or --spec")
            kind, *csvs, out = args.positional
            spec = FigureSpec(kind=kind, csv_paths=tuple(csvs), out_path=out)
        result = render(spec)
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {result.path} ({result.n_rows}x{result.n_cols} panels)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
