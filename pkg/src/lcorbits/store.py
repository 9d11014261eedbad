"""Binary orbit store: length-prefixed blocks under a JSON header.

Layout: magic, u32 header length, canonical-JSON header (format version,
n, d, op-policy fingerprint, orbit count), then one length-prefixed block
per orbit holding the sorted member codes as variable-length big-endian
integers, both per-vertex loop-count arrays, the edge list (optional),
and a JSON tail with the observable row and Schmidt bounds when present.

Writes are canonical: the same logical content always produces identical
bytes, and readers refuse stores whose op-policy fingerprint does not
match the running code.
"""

from __future__ import annotations

import io
import json
import os
import struct
import tempfile
from dataclasses import dataclass

import numpy as np

from .atlas import OrbitRecord, op_policy_fingerprint
from .schmidt import SchmidtBounds
from .wgraph import codes_of_ranks, pair_count, ranks_of_codes, weights_of_ranks

MAGIC = b"LCORBITS"
FORMAT_VERSION = 1


class StoreError(Exception):
    pass


def _write_varint(buf: io.BytesIO, value: int):
    raw = int(value).to_bytes(max(1, (int(value).bit_length() + 7) // 8), "big")
    if len(raw) > 255:
        raise StoreError("code too large for the varint encoding")
    buf.write(struct.pack(">B", len(raw)))
    buf.write(raw)


def _read_varint(buf) -> int:
    (ln,) = struct.unpack(">B", buf.read(1))
    return int.from_bytes(buf.read(ln), "big")


def _json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


@dataclass
class StoredOrbit:
    index: int
    n: int
    d: int
    member_codes: list
    loop_iso_counts: np.ndarray
    loop_ident_counts: np.ndarray
    edges_local: np.ndarray | None = None
    observables: dict | None = None
    schmidt: tuple | None = None  # (lower, upper)
    rep_code: int = 0

    @property
    def size(self) -> int:
        return len(self.member_codes)

    def to_record(self) -> OrbitRecord:
        """Rebuild an OrbitRecord; edges default to empty when not stored."""
        from .atlas import select_representative_rank
        from .wgraph import WeightedGraph

        ranks = ranks_of_codes(self.member_codes, self.n, self.d)
        order = np.argsort(ranks)
        ranks = ranks[order]
        rep_rank, ecount, tweight = select_representative_rank(ranks, self.n, self.d)
        w = weights_of_ranks(np.array([rep_rank], dtype=np.int64),
                             pair_count(self.n), self.d)[0]
        rep = WeightedGraph(self.n, self.d, tuple(int(x) for x in w))
        edges = self.edges_local if self.edges_local is not None \
            else np.empty((0, 2), dtype=np.int64)
        rec = OrbitRecord(
            n=self.n, d=self.d, member_ranks=ranks, rep=rep, rep_rank=rep_rank,
            rep_edge_count=ecount, rep_total_weight=tweight,
            edges_local=np.asarray(edges, dtype=np.int64),
            loop_iso_counts=np.asarray(self.loop_iso_counts, dtype=np.int64),
            loop_ident_counts=np.asarray(self.loop_ident_counts, dtype=np.int64),
            index=self.index)
        if self.observables:
            rec.observables = dict(self.observables)
        if self.schmidt:
            rec.schmidt = SchmidtBounds(*self.schmidt)
        return rec


def orbit_to_stored(rec: OrbitRecord, with_edges: bool = True) -> StoredOrbit:
    codes = codes_of_ranks(rec.member_ranks, rec.n, rec.d)
    sch = (rec.schmidt.lower, rec.schmidt.upper) if rec.schmidt else None
    return StoredOrbit(
        index=rec.index, n=rec.n, d=rec.d, member_codes=codes,
        loop_iso_counts=rec.loop_iso_counts,
        loop_ident_counts=rec.loop_ident_counts,
        edges_local=rec.edges_local if with_edges else None,
        observables=dict(rec.observables) if rec.observables else None,
        schmidt=sch,
        rep_code=codes_of_ranks([rec.rep_rank], rec.n, rec.d)[0])


def _orbit_block(o: StoredOrbit) -> bytes:
    buf = io.BytesIO()
    buf.write(struct.pack(">II", o.index, o.size))
    prev_sorted = all(a <= b for a, b in zip(o.member_codes, o.member_codes[1:]))
    if not prev_sorted:
        raise StoreError("member codes must be sorted")
    for c in o.member_codes:
        _write_varint(buf, c)
    _write_varint(buf, o.rep_code)
    buf.write(np.asarray(o.loop_iso_counts, dtype=">u1").tobytes())
    buf.write(np.asarray(o.loop_ident_counts, dtype=">u1").tobytes())
    if o.edges_local is not None:
        edges = np.asarray(o.edges_local, dtype=np.int64)
        buf.write(struct.pack(">BQ", 1, edges.shape[0]))
        buf.write(edges.astype(">u4").tobytes())
    else:
        buf.write(struct.pack(">B", 0))
    tail = {}
    if o.observables is not None:
        tail["observables"] = o.observables
    if o.schmidt is not None:
        tail["schmidt"] = list(o.schmidt)
    tail_bytes = _json_bytes(tail)
    buf.write(struct.pack(">I", len(tail_bytes)))
    buf.write(tail_bytes)
    return buf.getvalue()


def write_store(path: str, n: int, d: int, orbits: list,
                with_edges: bool = True, extra_meta: dict | None = None):
    """Serialize orbit records (or StoredOrbits) to `path` atomically."""
    stored = [o if isinstance(o, StoredOrbit) else orbit_to_stored(o, with_edges)
              for o in orbits]
    stored.sort(key=lambda o: o.index)
    header = {
        "format_version": FORMAT_VERSION,
        "n": n,
        "d": d,
        "op_policy": op_policy_fingerprint(n, d),
        "orbit_count": len(stored),
        "meta": extra_meta or {},
    }
    hdr = _json_bytes(header)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(MAGIC)
            f.write(struct.pack(">I", len(hdr)))
            f.write(hdr)
            for o in stored:
                block = _orbit_block(o)
                f.write(struct.pack(">I", len(block)))
                f.write(block)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def read_store(path: str, check_policy: bool = True) -> tuple:
    """Returns (header, [StoredOrbit])."""
    with open(path, "rb") as f:
        if f.read(len(MAGIC)) != MAGIC:
            raise StoreError(f"{path}: not an orbit store")
        (hlen,) = struct.unpack(">I", f.read(4))
        header = json.loads(f.read(hlen))
        if header["format_version"] != FORMAT_VERSION:
            raise StoreError(f"unsupported store version {header['format_version']}")
        n, d = header["n"], header["d"]
        if check_policy and header["op_policy"] != op_policy_fingerprint(n, d):
            raise StoreError("store op policy does not match this build; "
                             "rebuild the store")
        orbits = []
        while True:
            raw = f.read(4)
            if not raw:
                break
            (blen,) = struct.unpack(">I", raw)
            buf = io.BytesIO(f.read(blen))
            index, count = struct.unpack(">II", buf.read(8))
            codes = [_read_varint(buf) for _ in range(count)]
            rep_code = _read_varint(buf)
            iso = np.frombuffer(buf.read(count), dtype=">u1").astype(np.int64)
            ident = np.frombuffer(buf.read(count), dtype=">u1").astype(np.int64)
            (has_edges,) = struct.unpack(">B", buf.read(1))
            edges = None
            if has_edges:
                (ecount,) = struct.unpack(">Q", buf.read(8))
                edges = np.frombuffer(buf.read(8 * ecount), dtype=">u4") \
                    .astype(np.int64).reshape(ecount, 2)
            (tlen,) = struct.unpack(">I", buf.read(4))
            tail = json.loads(buf.read(tlen)) if tlen else {}
            orbits.append(StoredOrbit(
                index=index, n=n, d=d, member_codes=codes,
                loop_iso_counts=iso, loop_ident_counts=ident,
                edges_local=edges,
                observables=tail.get("observables"),
                schmidt=tuple(tail["schmidt"]) if "schmidt" in tail else None,
                rep_code=rep_code))
    return header, orbits
