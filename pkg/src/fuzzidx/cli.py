"""fuzzidx command line: build, query, bench, serve.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from typing import Optional, Sequence

from .fuzzyset import avg_set_sizes, load_dictionary_file
from .protocol import (
    Credentials,
    QueryRequest,
    QueryServer,
    load_index,
    owner_publish,
    remote_answer,
    server_answer,
    user_decrypt,
    user_query,
)
from .textprep import DEFAULT_STOP_WORDS, TextPrepConfig, load_corpus, read_word_file

log = logging.getLogger("fuzzidx")

STOPWORDS_ENV = "FUZZIDX_STOPWORDS"
BENCH_HEADER = ["length", "wfs_avg", "dfs_avg", "sample_n"]


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _lengths(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad length range {text!r}")
    return range(a, b + 1)


def _address(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    if not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected host:port, got {text!r}")
    return host or "127.0.0.1", int(port)


def _add_textprep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stopwords", metavar="FILE", help=f"stop-word file (default: ${STOPWORDS_ENV} or built-in list)")
    p.add_argument("--no-stopwords", action="store_true", help="disable stop-word removal")
    p.add_argument("--fold-case", type=_bool, default=True, metavar="BOOL")


def _stop_words(args) -> frozenset[str]:
    if args.no_stopwords:
        return frozenset()
    path = args.stopwords or os.environ.get(STOPWORDS_ENV)
    if path:
        return frozenset(read_word_file(path))
    return DEFAULT_STOP_WORDS


def _credentials(args) -> Credentials:
    return Credentials(args.user, args.password)


def _dictionary(args):
    return load_dictionary_file(args.dict, _stop_words(args), args.fold_case)


def cmd_build(args) -> int:
    cfg = TextPrepConfig(fold_case=args.fold_case, stop_words=_stop_words(args))
    docs = load_corpus(args.input)
    vocabulary = _dictionary(args).words if args.dict else None
    index = owner_publish(docs, cfg, _credentials(args), args.order, args.out, vocabulary)
    print(f"{index.doc_count} documents, {index.keyword_count} keywords")
    return 0


def cmd_query(args) -> int:
    D = _dictionary(args)
    creds = _credentials(args)
    if args.remote:
        answer = lambda q: remote_answer(args.remote, q)  # noqa: E731
    else:
        index = load_index(args.index)
        answer = lambda q: server_answer(index, q)  # noqa: E731
    fids: Optional[set[str]] = None
    for keyword in args.keyword:
        q = user_query(QueryRequest(keyword, args.distance, max(args.distance, 3)), D, creds)
        found = user_decrypt(answer(q), creds)
        fids = found if fids is None else fids & found
    for fid in sorted(fids or ()):
        print(fid)
    return 0


def cmd_bench(args) -> int:
    D = _dictionary(args)
    rows = avg_set_sizes(D, args.lengths, args.distance, args.sample)
    missing = sorted(set(args.lengths) - {r.length for r in rows})
    if missing:
        print(f"no dictionary words of length {missing}; rows omitted", file=sys.stderr)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        for r in rows:
            writer.writerow([r.length, f"{r.wfs_avg:.4f}", f"{r.dfs_avg:.4f}", r.sample_n])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_serve(args) -> int:
    index = load_index(args.index)
    with QueryServer(args.listen, index) as server:
        host, port = server.server_address[:2]
        log.info("serving %d keywords on %s:%d", index.keyword_count, host, port)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzidx", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a directory of .txt files")
    p.add_argument("--input", required=True, metavar="DIR")
    p.add_argument("--dict", metavar="FILE", help="only index words in this dictionary")
    p.add_argument("--user", required=True)
    p.add_argument("--pass", dest="password", required=True)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--out", required=True, metavar="FILE")
    _add_textprep_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="fuzzy keyword search")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--index", metavar="FILE")
    src.add_argument("--remote", type=_address, metavar="HOST:PORT")
    p.add_argument("--dict", required=True, metavar="FILE")
    p.add_argument("--user", required=True)
    p.add_argument("--pass", dest="password", required=True)
    p.add_argument("--keyword", action="append", required=True)
    p.add_argument("--distance", type=int, default=1)
    _add_textprep_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="average DFS vs WFS fuzzy-set sizes per keyword length")
    p.add_argument("--dict", required=True, metavar="FILE")
    p.add_argument("--distance", type=int, default=1)
    p.add_argument("--lengths", type=_lengths, default=range(3, 11), metavar="A..B")
    p.add_argument("--sample", type=int, default=200)
    p.add_argument("--out", metavar="CSV")
    _add_textprep_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="answer QUERY requests over TCP")
    p.add_argument("--index", required=True, metavar="FILE")
    p.add_argument("--listen", type=_address, default=("127.0.0.1", 7878), metavar="HOST:PORT")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "distance", 0) < 0:
        parser.error("--distance must be nonnegative")
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"fuzzidx: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
