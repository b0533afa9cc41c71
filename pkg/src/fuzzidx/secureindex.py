"""Trapdoors, FID encryption and the trapdoor-keyed posting index.

Both the keyword trapdoor and the FID cipher are built from MD5 with
domain-separation bytes. MD5 is cryptographically broken, and the FID
stream cipher reuses one keystream for every identifier; this module
reproduces a teaching construction and must not be used to protect real
data. The hash is swappable through the ``hash_fn`` arguments (any
function returning a 16-byte digest).
"""
from __future__ import annotations

import hashlib
import struct
import unicodedata
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .btree import BTree
from .textprep import Document, TextPrepConfig, filter_stopwords, tokenize

DIGEST_SIZE = 16
HashFn = Callable[[bytes], bytes]

_SEP_TRAPDOOR = b"\x00"
_SEP_KEYSTREAM = b"\x01"
_SEP_CREDENTIALS = b":"


def md5(data: bytes) -> bytes:
    return hashlib.md5(data).digest()


class InvalidCredentialsError(ValueError):
    pass


class MalformedCiphertextError(ValueError):
    pass


class DecryptionError(MalformedCiphertextError):
    """Ciphertext decrypted to bytes that cannot be an identifier (wrong key)."""


class IndexBuildError(ValueError):
    pass


@dataclass(frozen=True)
class SecretKey:
    key: bytes

    def __post_init__(self) -> None:
        if len(self.key) != DIGEST_SIZE:
            raise ValueError(f"secret key must be {DIGEST_SIZE} bytes")

    def __repr__(self) -> str:
        return "SecretKey(<redacted>)"


def derive_key(username: str, password: str, hash_fn: HashFn = md5) -> SecretKey:
    if not username or not password:
        raise InvalidCredentialsError("username and password must both be nonempty")
    return SecretKey(hash_fn(username.encode() + _SEP_CREDENTIALS + password.encode()))


@dataclass(frozen=True, order=True)
class Trapdoor:
    digest: bytes

    def __post_init__(self) -> None:
        if len(self.digest) != DIGEST_SIZE:
            raise ValueError(f"trapdoor digest must be {DIGEST_SIZE} bytes")

    @property
    def hex(self) -> str:
        return self.digest.hex()

    @classmethod
    def from_hex(cls, text: str) -> "Trapdoor":
        if len(text) != 2 * DIGEST_SIZE or text != text.lower():
            raise ValueError(f"trapdoor must be {2 * DIGEST_SIZE} lowercase hex chars: {text!r}")
        return cls(bytes.fromhex(text))


def trapdoor(sk: SecretKey, w: str, hash_fn: HashFn = md5) -> Trapdoor:
    if not w:
        raise ValueError("cannot compute a trapdoor for an empty word")
    return Trapdoor(hash_fn(sk.key + _SEP_TRAPDOOR + w.encode("utf-8")))


def _keystream(sk: SecretKey, n: int, hash_fn: HashFn) -> bytes:
    blocks = (n + DIGEST_SIZE - 1) // DIGEST_SIZE
    stream = b"".join(hash_fn(sk.key + _SEP_KEYSTREAM + struct.pack(">I", j)) for j in range(blocks))
    return stream[:n]


def _xor(data: bytes, stream: bytes) -> bytes:
    return (int.from_bytes(data, "big") ^ int.from_bytes(stream, "big")).to_bytes(len(data), "big")


def _is_fid_text(fid: str) -> bool:
    # control, unassigned, private-use and surrogate code points never occur in an FID
    return all(unicodedata.category(c) not in ("Cc", "Cn", "Co", "Cs") for c in fid)


def encrypt_fid(sk: SecretKey, fid: str, hash_fn: HashFn = md5) -> bytes:
    """``u32 length || plaintext XOR keystream``."""
    if not fid:
        raise ValueError("cannot encrypt an empty FID")
    if not _is_fid_text(fid):
        raise ValueError(f"FID contains control or unassigned characters: {fid!r}")
    plain = fid.encode("utf-8")
    return struct.pack(">I", len(plain)) + _xor(plain, _keystream(sk, len(plain), hash_fn))


def decrypt_fid(sk: SecretKey, blob: bytes, hash_fn: HashFn = md5) -> str:
    if len(blob) < 4:
        raise MalformedCiphertextError("ciphertext shorter than its length prefix")
    (n,) = struct.unpack(">I", blob[:4])
    body = blob[4:]
    if n != len(body) or n == 0:
        raise MalformedCiphertextError(f"length prefix {n} does not match {len(body)} body bytes")
    plain = _xor(body, _keystream(sk, n, hash_fn))
    try:
        fid = plain.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecryptionError("FID did not decrypt to UTF-8; wrong key?") from exc
    if not _is_fid_text(fid):
        raise DecryptionError("FID decrypted to control characters; wrong key?")
    return fid


@dataclass(frozen=True)
class PostingList:
    """``(doc ordinal, positions)`` pairs, ordinals ascending."""

    entries: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        ords = [o for o, _ in self.entries]
        if any(a >= b for a, b in zip(ords, ords[1:])):
            raise ValueError("posting ordinals must be strictly increasing")
        for _, pos in self.entries:
            if not pos or any(a >= b for a, b in zip(pos, pos[1:])):
                raise ValueError("positions must be nonempty and strictly increasing")

    @property
    def docs(self) -> tuple[int, ...]:
        return tuple(o for o, _ in self.entries)

    def pairs(self) -> list[tuple[int, int]]:
        return [(o, p) for o, pos in self.entries for p in pos]

    def __len__(self) -> int:
        return len(self.entries)


class SecureIndex:
    """Server-side index: trapdoor digest -> postings, ordinal -> Enc(FID).

    Holds no plaintext keywords or identifiers.
    """

    def __init__(self, tree: BTree, doc_table: Sequence[bytes]):
        self.tree = tree
        self.doc_table = list(doc_table)

    @property
    def doc_count(self) -> int:
        return len(self.doc_table)

    @property
    def keyword_count(self) -> int:
        return len(self.tree)

    def lookup(self, t: Trapdoor) -> Optional[PostingList]:
        return self.tree.get(t.digest)

    def entries(self) -> list[tuple[Trapdoor, PostingList]]:
        return [(Trapdoor(k), v) for k, v in self.tree.items()]


def build_postings(docs: Iterable[Document], cfg: TextPrepConfig) -> dict[str, PostingList]:
    """Owner-side plaintext inverted index with positions (fully inverted)."""
    acc: dict[str, dict[int, list[int]]] = {}
    seen: set[str] = set()
    for doc in sorted(docs, key=lambda d: d.ordinal):
        if doc.fid in seen:
            raise IndexBuildError(f"duplicate fid {doc.fid!r}")
        seen.add(doc.fid)
        for tok in filter_stopwords(tokenize(doc.text, cfg), cfg):
            acc.setdefault(tok.word, {}).setdefault(doc.ordinal, []).append(tok.position)
    return {
        w: PostingList(tuple((o, tuple(p)) for o, p in sorted(per_doc.items())))
        for w, per_doc in acc.items()
    }


def build_index(
    docs: Sequence[Document],
    cfg: TextPrepConfig,
    sk: SecretKey,
    order: int = 64,
    vocabulary: Optional[Iterable[str]] = None,
) -> SecureIndex:
    """Build the secure index.

    With ``vocabulary`` given, only words it contains are indexed.
    """
    ordinals = sorted(d.ordinal for d in docs)
    if ordinals != list(range(len(docs))):
        raise IndexBuildError("document ordinals must be exactly 0..N-1")
    postings = build_postings(docs, cfg)
    if vocabulary is not None:
        allowed = set(vocabulary)
        postings = {w: p for w, p in postings.items() if w in allowed}
    keyed = sorted(((trapdoor(sk, w).digest, p) for w, p in postings.items()), key=lambda kv: kv[0])
    if len({k for k, _ in keyed}) != len(keyed):
        raise IndexBuildError("trapdoor collision between distinct keywords")
    tree = BTree(order)
    for digest, plist in keyed:
        tree.insert(digest, plist)
    by_ordinal = sorted(docs, key=lambda d: d.ordinal)
    return SecureIndex(tree, [encrypt_fid(sk, d.fid) for d in by_ordinal])


def lookup(index: SecureIndex, t: Trapdoor) -> Optional[PostingList]:
    return index.lookup(t)


def intersect(lists: Sequence[PostingList]) -> PostingList:
    """Documents present in every list; their positions are merged."""
    if not lists:
        raise ValueError("intersect needs at least one posting list")
    common = set(lists[0].docs)
    for plist in lists[1:]:
        common &= set(plist.docs)
    merged: dict[int, set[int]] = {o: set() for o in common}
    for plist in lists:
        for o, pos in plist.entries:
            if o in merged:
                merged[o].update(pos)
    return PostingList(tuple((o, tuple(sorted(merged[o]))) for o in sorted(merged)))


def positions_of(postings: Mapping[str, PostingList], w: str) -> list[tuple[int, int]]:
    """Flattened ``(doc, position)`` pairs of a word; KeyError if unindexed."""
    return postings[w].pairs()
