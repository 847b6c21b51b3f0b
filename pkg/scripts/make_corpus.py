#!/usr/bin/env python3
"""Regenerate the small Matrix Market corpus bundled with the package.

The bundled files stand in for a large external benchmark collection so the
harness and tests run offline at desk scale.  Run from the repo root:

    python3 scripts/make_corpus.py
"""

import io
import pathlib

import numpy as np

from camsparse import CooMatrix, coo_to_csr, csr_to_coo, gen_random_csr, write_matrix_market

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "camsparse" / "data"


def save(name, matrix, banner=None):
    buf = io.StringIO()
    write_matrix_market(matrix, buf)
    text = buf.getvalue()
    if banner is not None:
        # swap in a non-default banner (pattern/integer/symmetric fixtures)
        lines = text.splitlines()
        lines[0] = banner
        text = "\n".join(lines) + "\n"
    (DATA / name).write_text(text)
    print(f"wrote {name}")


def main():
    DATA.mkdir(parents=True, exist_ok=True)

    ident = CooMatrix.from_entries(8, 8, [(i, i, 1.0) for i in range(8)])
    save("ident8.mtx", ident)

    tri = []
    for i in range(12):
        tri.append((i, i, 2.0))
        if i > 0:
            tri.append((i, i - 1, -1.0))
        if i < 11:
            tri.append((i, i + 1, -1.0))
    save("tband12.mtx", CooMatrix.from_entries(12, 12, tri))

    # 5-point stencil on a 5x5 grid
    n = 5
    stencil = []
    for r in range(n):
        for c in range(n):
            i = r * n + c
            stencil.append((i, i, 4.0))
            if r > 0:
                stencil.append((i, i - n, -1.0))
            if r < n - 1:
                stencil.append((i, i + n, -1.0))
            if c > 0:
                stencil.append((i, i - 1, -1.0))
            if c < n - 1:
                stencil.append((i, i + 1, -1.0))
    save("grid25.mtx", CooMatrix.from_entries(25, 25, stencil))

    # arrowhead: dense first row/column plus diagonal (wide nzr spread)
    arrow = [(0, 0, 4.0)]
    for i in range(1, 16):
        arrow.append((0, i, 1.0))
        arrow.append((i, 0, 1.0))
        arrow.append((i, i, float(i + 1)))
    save("arrow16.mtx", CooMatrix.from_entries(16, 16, arrow))

    save("rand50.mtx", gen_random_csr(50, 50, 0.05, seed=1205))
    save("rand80.mtx", gen_random_csr(80, 80, 0.03, seed=8031))
    save("randint64.mtx", gen_random_csr(64, 64, 0.06, seed=6406, integer_values=True))

    save("empty6.mtx", CooMatrix.from_entries(6, 6, []))

    # symmetric-banner fixture: lower triangle of a 9x9 SPD-ish band
    sym_lines = ["%%MatrixMarket matrix coordinate real symmetric", "9 9 17"]
    for i in range(9):
        sym_lines.append(f"{i + 1} {i + 1} 3.0")
    for i in range(1, 9):
        sym_lines.append(f"{i + 1} {i} -1.0")
    (DATA / "symband9.mtx").write_text("\n".join(sym_lines) + "\n")
    print("wrote symband9.mtx")

    # pattern-banner fixture: star graph adjacency, 7 nodes
    pat_lines = ["%%MatrixMarket matrix coordinate pattern general", "7 7 12"]
    for i in range(1, 7):
        pat_lines.append(f"1 {i + 1}")
        pat_lines.append(f"{i + 1} 1")
    (DATA / "star7.mtx").write_text("\n".join(pat_lines) + "\n")
    print("wrote star7.mtx")

    # single-row fixture and matching vector (the worked one-iteration case)
    row = CooMatrix.from_entries(1, 32, [(0, 4, 56.0), (0, 10, 16.0), (0, 12, 78.0), (0, 20, 12.0)])
    save("onerow32.mtx", row)
    vec = CooMatrix.from_entries(1, 32, [(0, 4, 98.0), (0, 10, 40.0), (0, 12, 32.0)])
    save("onerow32_vec.mtx", vec)


if __name__ == "__main__":
    main()
