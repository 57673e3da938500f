"""Certify every closed manifold in data/ and replay each certificate."""

import sys
import time
from pathlib import Path

from seifert_obstruct.checker import check_certificate
from seifert_obstruct.io import read_manifold, serialize_manifold
from seifert_obstruct.manifold import is_sdd
from seifert_obstruct.obstruction import certify_no_vertex_faithful

DATA = Path(__file__).resolve().parents[1] / "data"


def main():
    bad = 0
    for path in sorted(DATA.glob("*.mfd")):
        m = read_manifold(path)
        if not m.is_closed() or not is_sdd(m):
            print(f"{path.name:16s} skipped (closed={m.is_closed()}, sdd={is_sdd(m)})")
            continue
        t0 = time.perf_counter()
        cert = certify_no_vertex_faithful(m, text=serialize_manifold(m)).data
        ok = check_certificate(cert).ok
        n = sum(len(v["candidates"]) for v in cert["vertices"])
        print(f"{path.name:16s} {cert['conclusion']}: {n} candidates, replay {'ok' if ok else 'FAILED'}"
              f"  ({time.perf_counter() - t0:.3f}s)")
        bad += not ok
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
