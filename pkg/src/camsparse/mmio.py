"""Matrix Market coordinate-format reader and writer.

Supports the subset used by the sparse matrix collections this tool feeds
on: ``matrix coordinate`` with field real/integer/pattern and symmetry
general/symmetric.  Indices are converted to 0-based, symmetric storage is
expanded to both triangles (diagonal entries are not duplicated), pattern
entries get the value 1.0 and explicit zeros are dropped.
"""

from __future__ import annotations

import io

from .errors import MatrixMarketError
from .sparse import CooMatrix, CsrMatrix, csr_to_coo

_FIELDS = {"real", "integer", "pattern"}
_SYMMETRIES = {"general", "symmetric"}


def parse_matrix_market(source) -> CooMatrix:
    """Parse Matrix Market coordinate text into a CooMatrix.

    ``source`` may be a str, bytes, or a file-like object.  Errors carry
    the offending 1-based line number.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8", errors="replace")
    if isinstance(source, str):
        source = io.StringIO(source)

    lines = enumerate(source, start=1)

    lineno, banner = next(lines, (0, None))
    if banner is None:
        raise MatrixMarketError("empty input", line=1)
    tokens = banner.strip().split()
    if len(tokens) != 5 or tokens[0] != "%%MatrixMarket":
        raise MatrixMarketError(
            "banner must be '%%MatrixMarket matrix coordinate <field> <symmetry>'",
            line=lineno,
        )
    obj, fmt, fieldkind, symmetry = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", line=lineno)
    if fmt != "coordinate":
        raise MatrixMarketError(f"unsupported format {fmt!r} (only coordinate)", line=lineno)
    if fieldkind not in _FIELDS:
        raise MatrixMarketError(f"unsupported field {fieldkind!r}", line=lineno)
    if symmetry not in _SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry {symmetry!r}", line=lineno)

    # Size line: first non-comment, non-blank line after the banner.
    size = None
    for lineno, raw in lines:
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        if len(parts) != 3:
            raise MatrixMarketError("size line must be 'rows cols nnz'", line=lineno)
        try:
            size = tuple(int(p) for p in parts)
        except ValueError:
            raise MatrixMarketError("size line must hold three integers", line=lineno)
        break
    if size is None:
        raise MatrixMarketError("missing size line", line=lineno)
    n_rows, n_cols, n_decl = size
    if n_rows < 0 or n_cols < 0 or n_decl < 0:
        raise MatrixMarketError("negative value in size line", line=lineno)

    want_value = fieldkind != "pattern"
    entries: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    n_read = 0
    for lineno, raw in lines:
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        n_read += 1
        if n_read > n_decl:
            raise MatrixMarketError(
                f"more than the declared {n_decl} entries", line=lineno
            )
        parts = text.split()
        if want_value and len(parts) != 3:
            raise MatrixMarketError("entry must be 'row col value'", line=lineno)
        if not want_value and len(parts) != 2:
            raise MatrixMarketError("pattern entry must be 'row col'", line=lineno)
        try:
            r = int(parts[0])
            c = int(parts[1])
        except ValueError:
            raise MatrixMarketError("coordinates must be integers", line=lineno)
        if not (1 <= r <= n_rows and 1 <= c <= n_cols):
            raise MatrixMarketError(
                f"coordinate ({r}, {c}) outside {n_rows}x{n_cols}", line=lineno
            )
        if want_value:
            try:
                v = float(parts[2])
            except ValueError:
                raise MatrixMarketError(f"bad numeric value {parts[2]!r}", line=lineno)
        else:
            v = 1.0
        r -= 1
        c -= 1
        if (r, c) in seen:
            raise MatrixMarketError(f"duplicate coordinate ({r + 1}, {c + 1})", line=lineno)
        seen.add((r, c))
        if symmetry == "symmetric" and r != c:
            if (c, r) in seen:
                raise MatrixMarketError(
                    f"duplicate coordinate ({c + 1}, {r + 1}) after symmetric expansion",
                    line=lineno,
                )
            seen.add((c, r))
            if v != 0.0:
                entries.append((r, c, v))
                entries.append((c, r, v))
        elif v != 0.0:
            entries.append((r, c, v))

    if n_read < n_decl:
        raise MatrixMarketError(
            f"declared {n_decl} entries but found {n_read}", line=lineno
        )

    coo = CooMatrix.from_entries(n_rows, n_cols, entries)
    coo.validate()
    return coo


def write_matrix_market(m, stream) -> None:
    """Write a CooMatrix or CsrMatrix in coordinate real general form."""
    if isinstance(m, CsrMatrix):
        m = csr_to_coo(m)
    stream.write("%%MatrixMarket matrix coordinate real general\n")
    stream.write(f"{m.n_rows} {m.n_cols} {m.nnz}\n")
    for r, c, v in m.entries():
        stream.write(f"{r + 1} {c + 1} {v!r}\n")


def read_matrix_market_file(path) -> CooMatrix:
    """Read a Matrix Market file; '-' means standard input."""
    if str(path) == "-":
        import sys

        return parse_matrix_market(sys.stdin)
    with open(path, "r", encoding="utf-8") as f:
        return parse_matrix_market(f)


def vector_from_matrix_market(path, expected_length=None):
    """Load a 1xN or Nx1 Matrix Market file as a sparse vector."""
    from .sparse import coo_to_csr, extract_row, transpose_csr

    coo = read_matrix_market_file(path)
    csr = coo_to_csr(coo)
    if csr.n_rows == 1:
        vec = extract_row(csr, 0)
    elif csr.n_cols == 1:
        vec = extract_row(transpose_csr(csr), 0)
    else:
        raise MatrixMarketError(
            f"vector file must be 1xN or Nx1, got {csr.n_rows}x{csr.n_cols}"
        )
    if expected_length is not None and vec.length != expected_length:
        from .errors import DimensionError

        raise DimensionError(
            f"vector length {vec.length} does not match expected {expected_length}"
        )
    return vec
