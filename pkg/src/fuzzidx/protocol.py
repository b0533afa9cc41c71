"""Owner / user / server flow, FZIDX1 persistence and the QUERY wire protocol.

FZIDX1 layout (integers are big-endian u32)::

    b"FZIDX1\\n"
    doc_count, then per doc: len, encrypted FID bytes
    entry_count, then per entry (ascending digest):
        16-byte digest, doc_hits, then per hit: ordinal, pos_count, positions...

Wire protocol, one request/response per exchange on a byte stream::

    -> QUERY <n>\\n  then n lines of 32-char lowercase hex trapdoors
    <- RESULTS <m>\\n  then m lines "<trapdoor_hex> <hex,hex,...>\\n"  then END\\n
    <- ERR <message>\\n   (malformed request; the connection is closed)
"""
from __future__ import annotations

import logging
import socket
import socketserver
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .btree import BTree
from .fuzzyset import Dictionary, dfs_expand
from .secureindex import (
    DIGEST_SIZE,
    PostingList,
    SecureIndex,
    Trapdoor,
    build_index,
    decrypt_fid,
    derive_key,
    trapdoor,
)
from .textprep import Document, TextPrepConfig, normalize

log = logging.getLogger(__name__)

MAGIC = b"FZIDX1\n"
DEFAULT_MAX_DISTANCE = 3
MAX_QUERY_TRAPDOORS = 1 << 20


class FormatError(ValueError):
    pass


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class Credentials:
    username: str
    password: str

    def __repr__(self) -> str:
        return f"Credentials(username={self.username!r}, password=<redacted>)"

    def key(self):
        return derive_key(self.username, self.password)


@dataclass(frozen=True)
class QueryRequest:
    keyword: str
    distance: int
    max_distance: int = DEFAULT_MAX_DISTANCE

    def __post_init__(self) -> None:
        if not 0 <= self.distance <= self.max_distance:
            raise ValueError(f"distance must be in 0..{self.max_distance}, got {self.distance}")


@dataclass(frozen=True)
class TrapdoorQuery:
    trapdoors: tuple[Trapdoor, ...]


@dataclass(frozen=True)
class QueryResult:
    hits: tuple[tuple[Trapdoor, tuple[bytes, ...]], ...]


# serialization


def serialize_index(index: SecureIndex) -> bytes:
    out = [MAGIC, struct.pack(">I", index.doc_count)]
    for blob in index.doc_table:
        out.append(struct.pack(">I", len(blob)))
        out.append(blob)
    entries = index.tree.traverse()
    out.append(struct.pack(">I", len(entries)))
    for digest, plist in entries:
        out.append(digest)
        out.append(struct.pack(">I", len(plist.entries)))
        for ordinal, positions in plist.entries:
            out.append(struct.pack(f">II{len(positions)}I", ordinal, len(positions), *positions))
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, section: str) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(f"truncated index file in {section}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u32(self, section: str) -> int:
        return struct.unpack(">I", self.take(4, section))[0]


def deserialize_index(data: bytes, order: int = 64) -> SecureIndex:
    if not data.startswith(MAGIC[:5]) or len(data) < len(MAGIC):
        raise FormatError("not an FZIDX index file (bad magic)")
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"unsupported index version {data[:6]!r}")
    r = _Reader(data)
    r.pos = len(MAGIC)
    doc_count = r.u32("header")
    doc_table = [r.take(r.u32("doc table"), "doc table") for _ in range(doc_count)]
    entry_count = r.u32("entry table header")
    items = []
    for _ in range(entry_count):
        digest = r.take(DIGEST_SIZE, "entries")
        hits = []
        for _ in range(r.u32("entries")):
            ordinal = r.u32("postings")
            if ordinal >= doc_count:
                raise FormatError(f"posting references ordinal {ordinal} >= doc_count {doc_count}")
            npos = r.u32("postings")
            positions = struct.unpack(f">{npos}I", r.take(4 * npos, "postings"))
            hits.append((ordinal, positions))
        try:
            items.append((digest, PostingList(tuple(hits))))
        except ValueError as exc:
            raise FormatError(f"bad posting list: {exc}") from exc
    if r.pos != len(data):
        raise FormatError(f"{len(data) - r.pos} trailing bytes after entries")
    try:
        tree = BTree.from_sorted(items, order)
    except ValueError as exc:
        raise FormatError(f"entries not sorted by digest: {exc}") from exc
    return SecureIndex(tree, doc_table)


def load_index(path: str | Path, order: int = 64) -> SecureIndex:
    return deserialize_index(Path(path).read_bytes(), order)


# the three parties


def owner_publish(
    docs: Sequence[Document],
    cfg: TextPrepConfig,
    credentials: Credentials,
    order: int,
    out: str | Path,
    vocabulary: Optional[Iterable[str]] = None,
) -> SecureIndex:
    index = build_index(docs, cfg, credentials.key(), order, vocabulary)
    Path(out).write_bytes(serialize_index(index))
    return index


def user_query(req: QueryRequest, D: Dictionary, credentials: Credentials) -> TrapdoorQuery:
    """Expand the keyword over the user's dictionary; one trapdoor per member."""
    w = normalize(req.keyword, D.fold_case)
    members = dfs_expand(D, w, req.distance).members
    sk = credentials.key()
    return TrapdoorQuery(tuple(sorted({trapdoor(sk, m) for m in members}, key=lambda t: t.hex)))


def server_answer(index: SecureIndex, q: TrapdoorQuery) -> QueryResult:
    hits = []
    for t in q.trapdoors:
        plist = index.lookup(t)
        if plist is not None:
            hits.append((t, tuple(index.doc_table[o] for o in plist.docs)))
    return QueryResult(tuple(hits))


def user_decrypt(result: QueryResult, credentials: Credentials) -> set[str]:
    sk = credentials.key()
    return {decrypt_fid(sk, blob) for _, blobs in result.hits for blob in blobs}


# wire format


def encode_query(q: TrapdoorQuery) -> bytes:
    lines = [f"QUERY {len(q.trapdoors)}\n"] + [f"{t.hex}\n" for t in q.trapdoors]
    return "".join(lines).encode("ascii")


def encode_result(result: QueryResult) -> bytes:
    lines = [f"RESULTS {len(result.hits)}\n"]
    for t, blobs in result.hits:
        lines.append(f"{t.hex} {','.join(b.hex() for b in blobs)}\n")
    lines.append("END\n")
    return "".join(lines).encode("ascii")


def _parse_count(line: bytes, verb: str) -> int:
    parts = line.rstrip(b"\n").split(b" ")
    if len(parts) != 2 or parts[0] != verb.encode() or not parts[1].isdigit():
        raise ProtocolError(f"expected '{verb} <n>', got {line[:64]!r}")
    return int(parts[1])


def read_query(rfile) -> Optional[TrapdoorQuery]:
    """Read one QUERY block; None on clean EOF."""
    line = rfile.readline()
    if not line:
        return None
    n = _parse_count(line, "QUERY")
    if n > MAX_QUERY_TRAPDOORS:
        raise ProtocolError(f"query of {n} trapdoors exceeds limit")
    trapdoors = []
    for _ in range(n):
        raw = rfile.readline()
        if not raw.endswith(b"\n"):
            raise ProtocolError("connection closed inside QUERY block")
        try:
            trapdoors.append(Trapdoor.from_hex(raw[:-1].decode("ascii")))
        except (ValueError, UnicodeDecodeError) as exc:
            raise ProtocolError(f"bad trapdoor line: {exc}") from exc
    return TrapdoorQuery(tuple(trapdoors))


def read_result(rfile) -> QueryResult:
    line = rfile.readline()
    if line.startswith(b"ERR "):
        raise ProtocolError(line[4:].decode("utf-8", "replace").strip())
    m = _parse_count(line, "RESULTS")
    hits = []
    for _ in range(m):
        parts = rfile.readline().rstrip(b"\n").decode("ascii").split(" ")
        if len(parts) != 2:
            raise ProtocolError("malformed RESULTS line")
        hits.append(
            (Trapdoor.from_hex(parts[0]), tuple(bytes.fromhex(h) for h in parts[1].split(",") if h))
        )
    if rfile.readline() != b"END\n":
        raise ProtocolError("RESULTS block not terminated by END")
    return QueryResult(tuple(hits))


class _QueryHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        index: SecureIndex = self.server.index  # type: ignore[attr-defined]
        while True:
            try:
                q = read_query(self.rfile)
            except ProtocolError as exc:
                log.info("%s ERR %s", self.client_address[0], exc)
                self.wfile.write(f"ERR {exc}\n".encode("utf-8"))
                return
            if q is None:
                return
            result = server_answer(index, q)
            self.wfile.write(encode_result(result))
            log.info(
                "%s QUERY %d -> %d hits", self.client_address[0], len(q.trapdoors), len(result.hits)
            )


class QueryServer(socketserver.ThreadingTCPServer):
    """Answers QUERY requests against one frozen index, one thread per connection."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], index: SecureIndex):
        self.index = index
        super().__init__(address, _QueryHandler)


def remote_answer(address: tuple[str, int], q: TrapdoorQuery, timeout: float = 30.0) -> QueryResult:
    with socket.create_connection(address, timeout=timeout) as sock:
        sock.sendall(encode_query(q))
        with sock.makefile("rb") as rfile:
            return read_result(rfile)
