#!/usr/bin/env python3
"""Download matrices from the SuiteSparse collection for larger experiments.

Not used by the test suite (tests run offline on the bundled corpus).

    python3 scripts/fetch_suitesparse.py HB/bcsstk01 HB/west0067 -o matrices/

Names are collection paths like GROUP/NAME; files land as NAME.mtx.
"""

import argparse
import io
import pathlib
import sys
import tarfile
import urllib.request

BASE_URL = "https://suitesparse-collection-website.herokuapp.com/MM"


def fetch(name: str, dest: pathlib.Path) -> pathlib.Path:
    group, _, mat = name.partition("/")
    if not mat:
        raise SystemExit(f"expected GROUP/NAME, got {name!r}")
    url = f"{BASE_URL}/{group}/{mat}.tar.gz"
    print(f"fetching {url}")
    with urllib.request.urlopen(url) as resp:
        payload = resp.read()
    with tarfile.open(fileobj=io.BytesIO(payload), mode="r:gz") as tar:
        member = next(m for m in tar.getmembers() if m.name.endswith(f"{mat}.mtx"))
        out = dest / f"{mat}.mtx"
        with tar.extractfile(member) as src, open(out, "wb") as dst:
            dst.write(src.read())
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="+", help="collection paths, e.g. HB/bcsstk01")
    parser.add_argument("-o", "--out-dir", default="matrices")
    args = parser.parse_args()
    dest = pathlib.Path(args.out_dir)
    dest.mkdir(parents=True, exist_ok=True)
    for name in args.names:
        path = fetch(name, dest)
        print(f"wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
